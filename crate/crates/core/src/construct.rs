//! Polar code construction from Bhattacharyya parameters.
//!
//! The `2^n` synthetic channels are enumerated by a depth-first walk over the
//! polarization tree: at each level the left (worse) branch applies the minus
//! transform and the right (better) branch the plus transform, so leaf `i`
//! follows the bit path given by the binary expansion of `i` (most significant
//! bit first). The walk keeps one value per level, so memory is `O(n)` and
//! block lengths up to `2^27` are practical.

use std::fmt::Write as _;
use std::io::{self, BufRead, Write};

use bitvec::prelude::*;

use crate::channel::{h2, z_minus, z_plus, BmsChannel, ChannelKind, ZPolicy};
use crate::error::{domain, Error, Result};

/// Largest `n` for which [`z_leaves`] will materialize the leaf vector.
pub const MATERIALIZE_MAX_N: u32 = 20;

/// Largest supported `log2` block length.
pub const MAX_N: u32 = 30;

pub type FrozenSet = BitVec<u64, Lsb0>;

/// Streams the Bhattacharyya parameters of all `2^n` synthetic channels, in
/// leaf order, to `visit(index, z)`.
pub fn evolve_z_leaves<F>(z0: f64, n: u32, policy: ZPolicy, mut visit: F)
where
    F: FnMut(usize, f64),
{
    fn walk<F: FnMut(usize, f64)>(z: f64, depth: u32, policy: ZPolicy, next: &mut usize, visit: &mut F) {
        if depth == 0 {
            visit(*next, z);
            *next += 1;
            return;
        }
        walk(z_minus(z, policy), depth - 1, policy, next, visit);
        walk(z_plus(z), depth - 1, policy, next, visit);
    }
    let mut next = 0;
    walk(z0, n, policy, &mut next, &mut visit);
}

/// Materialized leaf parameters for small `n`.
pub fn z_leaves(channel: &BmsChannel, n: u32, policy: ZPolicy) -> Result<Vec<f64>> {
    if n > MATERIALIZE_MAX_N {
        return domain(format!("refusing to materialize 2^{n} leaves; use evolve_z_leaves"));
    }
    policy.check(channel.kind())?;
    let mut out = Vec::with_capacity(1 << n);
    evolve_z_leaves(channel.z0(), n, policy, |_, z| out.push(z));
    Ok(out)
}

/// A non-systematic polar code: block length `2^n` and its frozen set.
#[derive(Debug, Clone, PartialEq)]
pub struct PolarCode {
    n: u32,
    p_e: f64,
    channel: BmsChannel,
    frozen: FrozenSet,
    info_count: usize,
}

impl PolarCode {
    /// Wraps an explicit frozen pattern. `frozen[i]` is true for frozen leaves.
    pub fn from_frozen(channel: BmsChannel, n: u32, p_e: f64, frozen: FrozenSet) -> Result<Self> {
        if n == 0 || n > MAX_N {
            return domain(format!("n must lie in 1..={MAX_N}, got {n}"));
        }
        if frozen.len() != 1usize << n {
            return domain(format!(
                "frozen set has {} entries, expected {}",
                frozen.len(),
                1usize << n
            ));
        }
        let info_count = frozen.count_zeros();
        Ok(Self {
            n,
            p_e,
            channel,
            frozen,
            info_count,
        })
    }

    /// Convenience constructor from a list of frozen indices.
    pub fn with_frozen_indices(channel: BmsChannel, n: u32, p_e: f64, frozen: &[usize]) -> Result<Self> {
        let len = 1usize << n.min(MAX_N);
        let mut set = FrozenSet::repeat(false, len);
        for &i in frozen {
            if i >= len {
                return domain(format!("frozen index {i} out of range for length {len}"));
            }
            set.set(i, true);
        }
        Self::from_frozen(channel, n, p_e, set)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Block length `N = 2^n`.
    pub fn len(&self) -> usize {
        1 << self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn p_e(&self) -> f64 {
        self.p_e
    }

    pub fn channel(&self) -> &BmsChannel {
        &self.channel
    }

    pub fn frozen(&self) -> &FrozenSet {
        &self.frozen
    }

    pub fn is_frozen(&self, i: usize) -> bool {
        self.frozen[i]
    }

    pub fn info_count(&self) -> usize {
        self.info_count
    }

    pub fn frozen_count(&self) -> usize {
        self.len() - self.info_count
    }

    pub fn rate(&self) -> f64 {
        self.info_count as f64 / self.len() as f64
    }

    pub fn info_positions(&self) -> Vec<usize> {
        self.frozen.iter_zeros().collect()
    }

    /// Frozen set as a hex string; the first hex digit holds leaves 0..3 with
    /// leaf 0 in its most significant bit. A trailing partial digit is padded
    /// with zero bits.
    pub fn frozen_hex(&self) -> String {
        let mut out = String::with_capacity(self.len().div_ceil(4));
        for chunk in self.frozen.chunks(4) {
            let mut nibble = 0u8;
            for (k, bit) in chunk.iter().enumerate() {
                if *bit {
                    nibble |= 8 >> k;
                }
            }
            write!(out, "{nibble:x}").expect("writing to a String");
        }
        out
    }

    fn frozen_from_hex(hex: &str, len: usize) -> Result<FrozenSet> {
        let hex = hex.trim();
        if hex.len() != len.div_ceil(4) {
            return Err(Error::Parse(format!(
                "frozen bitvector has {} hex digits, expected {}",
                hex.len(),
                len.div_ceil(4)
            )));
        }
        let mut set = FrozenSet::repeat(false, len);
        for (d, ch) in hex.chars().enumerate() {
            let nibble = ch
                .to_digit(16)
                .ok_or_else(|| Error::Parse(format!("invalid hex digit `{ch}`")))?;
            for k in 0..4 {
                let bit = nibble & (8 >> k) != 0;
                let idx = 4 * d + k;
                if idx < len {
                    set.set(idx, bit);
                } else if bit {
                    return Err(Error::Parse("non-zero padding bits in frozen bitvector".into()));
                }
            }
        }
        Ok(set)
    }

    /// Writes the three-line text code file.
    pub fn write_to<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "polarcode v1")?;
        writeln!(
            w,
            "{} {} {} {} {}",
            self.channel.kind(),
            self.channel.param(),
            self.channel.capacity(),
            self.p_e,
            self.n
        )?;
        writeln!(w, "{}", self.frozen_hex())
    }

    pub fn to_file_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_to(&mut buf).expect("writing to a Vec");
        String::from_utf8(buf).expect("code files are ASCII")
    }

    /// Parses a code file produced by [`PolarCode::write_to`].
    pub fn read_from<R: BufRead>(r: R) -> Result<Self> {
        let mut lines = r.lines();
        let mut next = |what: &str| -> Result<String> {
            lines
                .next()
                .transpose()?
                .ok_or_else(|| Error::Parse(format!("missing {what} line")))
        };
        let magic = next("header")?;
        if magic.trim_end() != "polarcode v1" {
            return Err(Error::Parse(format!("bad header `{magic}`")));
        }
        let meta = next("parameter")?;
        let fields: Vec<&str> = meta.split_whitespace().collect();
        if fields.len() != 5 {
            return Err(Error::Parse(format!("expected 5 fields, found {}", fields.len())));
        }
        let kind: ChannelKind = fields[0].parse()?;
        let num = |s: &str| -> Result<f64> {
            s.parse::<f64>()
                .map_err(|_| Error::Parse(format!("invalid number `{s}`")))
        };
        let param = num(fields[1])?;
        let stored_capacity = num(fields[2])?;
        let p_e = num(fields[3])?;
        let n: u32 = fields[4]
            .parse()
            .map_err(|_| Error::Parse(format!("invalid n `{}`", fields[4])))?;
        if n == 0 || n > MAX_N {
            return Err(Error::Parse(format!("n = {n} out of range")));
        }
        let channel = BmsChannel::new(kind, param)?;
        if (channel.capacity() - stored_capacity).abs() > 1e-9 {
            return Err(Error::Parse(format!(
                "stored capacity {stored_capacity} disagrees with parameter {param}"
            )));
        }
        let frozen = Self::frozen_from_hex(&next("frozen")?, 1usize << n)?;
        Self::from_frozen(channel, n, p_e, frozen)
    }

    pub fn parse(text: &str) -> Result<Self> {
        Self::read_from(text.as_bytes())
    }
}

/// Builds the code whose information set is every synthetic channel with
/// Bhattacharyya parameter strictly below `p_e / N`. Ties are frozen.
pub fn build_code(channel: &BmsChannel, n: u32, p_e: f64, policy: ZPolicy) -> Result<PolarCode> {
    if !(p_e > 0.0 && p_e < 1.0) {
        return domain(format!("target error probability {p_e} must lie in (0, 1)"));
    }
    if n == 0 || n > MAX_N {
        return domain(format!("n must lie in 1..={MAX_N}, got {n}"));
    }
    policy.check(channel.kind())?;
    let len = 1usize << n;
    let threshold = p_e / len as f64;
    let mut frozen = FrozenSet::repeat(false, len);
    evolve_z_leaves(channel.z0(), n, policy, |i, z| {
        if z >= threshold {
            frozen.set(i, true);
        }
    });
    PolarCode::from_frozen(*channel, n, p_e, frozen)
}

/// Fraction of synthetic channels whose parameter lies in a closed interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarizationStats {
    pub n: u32,
    pub interval_lo: f64,
    pub interval_hi: f64,
    pub fraction_inside: f64,
    /// Exponent used to derive the interval, when it came from [`lemma1_interval`].
    pub gamma: Option<f64>,
    pub mu: Option<f64>,
}

pub fn unpolarized_fraction(
    channel: &BmsChannel,
    n: u32,
    policy: ZPolicy,
    lo: f64,
    hi: f64,
) -> Result<PolarizationStats> {
    if !(0.0 <= lo && lo <= hi && hi <= 1.0) {
        return domain(format!("interval [{lo}, {hi}] is not inside [0, 1]"));
    }
    if n > MAX_N {
        return domain(format!("n must be at most {MAX_N}"));
    }
    policy.check(channel.kind())?;
    let mut inside = 0u64;
    evolve_z_leaves(channel.z0(), n, policy, |_, z| {
        if lo <= z && z <= hi {
            inside += 1;
        }
    });
    Ok(PolarizationStats {
        n,
        interval_lo: lo,
        interval_hi: hi,
        fraction_inside: inside as f64 / (1u64 << n) as f64,
        gamma: None,
        mu: None,
    })
}

/// Interval `[2^{-2^t}, 1 - 2^{-2^t}]` with `t = n * gamma * h2^{-1}((gamma(mu+1)-1)/(gamma mu))`.
pub fn lemma1_interval(n: u32, gamma: f64, mu: f64) -> Result<(f64, f64)> {
    if !(mu > 0.0) {
        return domain(format!("scaling exponent {mu} must be positive"));
    }
    let lower = 1.0 / (1.0 + mu);
    if !(gamma > lower && gamma < 1.0) {
        return domain(format!("gamma {gamma} must lie in ({lower}, 1)"));
    }
    let eps = h2_inv((gamma * (mu + 1.0) - 1.0) / (gamma * mu));
    let t = n as f64 * gamma * eps;
    let tail = (-(t.exp2())).exp2();
    Ok((tail, 1.0 - tail))
}

/// The `[1/N^3, 1 - 1/N^3]` interval used for pruning arguments.
pub fn cubic_interval(n: u32) -> (f64, f64) {
    let lo = (-3.0 * n as f64).exp2();
    (lo, 1.0 - lo)
}

/// [`unpolarized_fraction`] over [`lemma1_interval`].
pub fn lemma1_stats(channel: &BmsChannel, n: u32, policy: ZPolicy, gamma: f64, mu: f64) -> Result<PolarizationStats> {
    let (lo, hi) = lemma1_interval(n, gamma, mu)?;
    let mut stats = unpolarized_fraction(channel, n, policy, lo, hi)?;
    stats.gamma = Some(gamma);
    stats.mu = Some(mu);
    Ok(stats)
}

/// Inverse of the binary entropy function on `[0, 1/2]`.
pub fn h2_inv(y: f64) -> f64 {
    let y = y.clamp(0.0, 1.0);
    if y == 0.0 {
        return 0.0;
    }
    if y == 1.0 {
        return 0.5;
    }
    let (mut lo, mut hi) = (0.0f64, 0.5f64);
    while hi - lo > 1e-13 {
        let mid = 0.5 * (lo + hi);
        if h2(mid) < y {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Lemma2Verdict {
    ForcedRate1,
    ForcedRate0,
    Unconstrained,
}

/// Classifies a decoding-tree node by its Bhattacharyya parameter against the
/// `1/N^3` thresholds, where `N` is the full block length.
pub fn lemma2_check(z_v: f64, block_len: usize) -> Lemma2Verdict {
    let cube = (block_len as f64).powi(3);
    let eps = 1.0 / cube;
    if z_v <= eps {
        Lemma2Verdict::ForcedRate1
    } else if z_v >= 1.0 - eps {
        Lemma2Verdict::ForcedRate0
    } else {
        Lemma2Verdict::Unconstrained
    }
}
