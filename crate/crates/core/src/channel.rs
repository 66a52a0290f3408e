//! Binary memoryless symmetric channels.
//!
//! Three families are modelled: the binary erasure channel (parameter: erasure
//! probability), the binary symmetric channel (crossover probability) and the
//! binary-input AWGN channel (noise standard deviation at unit signal energy).
//! Each channel carries its capacity and its Bhattacharyya parameter, and can
//! produce channel-output LLRs for a transmitted codeword.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Bernoulli, Distribution, Normal};

use crate::error::{domain, Error, Result};

/// Magnitude at which LLRs are saturated.
pub const LLR_CAP: f64 = 300.0;

const MAX_BISECTION_ITERS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ChannelKind {
    Bec,
    Bsc,
    Bawgnc,
}

impl ChannelKind {
    pub const ALL: [ChannelKind; 3] = [ChannelKind::Bec, ChannelKind::Bsc, ChannelKind::Bawgnc];

    pub fn as_str(self) -> &'static str {
        match self {
            ChannelKind::Bec => "bec",
            ChannelKind::Bsc => "bsc",
            ChannelKind::Bawgnc => "bawgnc",
        }
    }

    /// Scaling exponent commonly quoted for the family.
    pub fn scaling_exponent(self) -> f64 {
        match self {
            ChannelKind::Bec => 3.63,
            ChannelKind::Bsc => 4.2,
            ChannelKind::Bawgnc => 4.0,
        }
    }

    fn check_param(self, param: f64) -> Result<()> {
        let ok = match self {
            ChannelKind::Bec => (0.0..=1.0).contains(&param),
            ChannelKind::Bsc => (0.0..=0.5).contains(&param),
            ChannelKind::Bawgnc => param > 0.0 && param.is_finite(),
        };
        if ok {
            Ok(())
        } else {
            domain(format!("parameter {param} is out of range for {self}"))
        }
    }
}

impl fmt::Display for ChannelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ChannelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "bec" => Ok(ChannelKind::Bec),
            "bsc" => Ok(ChannelKind::Bsc),
            "bawgnc" | "awgn" | "biawgn" => Ok(ChannelKind::Bawgnc),
            other => Err(Error::Parse(format!("unknown channel kind `{other}`"))),
        }
    }
}

/// Rule used for the "minus" (worse) polarization transform of a
/// Bhattacharyya parameter. The "plus" transform is always `z * z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZPolicy {
    /// `2z - z^2`, exact for erasure channels.
    ExactBec,
    /// `2z - z^2` used as an upper bound on the true value.
    UpperBound,
}

impl ZPolicy {
    /// The natural policy for a channel family.
    pub fn for_kind(kind: ChannelKind) -> Self {
        match kind {
            ChannelKind::Bec => ZPolicy::ExactBec,
            _ => ZPolicy::UpperBound,
        }
    }

    pub fn check(self, kind: ChannelKind) -> Result<()> {
        if self == ZPolicy::ExactBec && kind != ChannelKind::Bec {
            return domain(format!("exact erasure evolution is not valid for {kind}"));
        }
        Ok(())
    }
}

#[inline]
pub fn z_minus(z: f64, _policy: ZPolicy) -> f64 {
    2.0 * z - z * z
}

#[inline]
pub fn z_plus(z: f64) -> f64 {
    z * z
}

/// Binary entropy in bits. `h2(0) = h2(1) = 0`.
pub fn h2(p: f64) -> f64 {
    if p <= 0.0 || p >= 1.0 {
        return 0.0;
    }
    -p * p.log2() - (1.0 - p) * (1.0 - p).log2()
}

/// Bhattacharyya parameter `Z(W)` of a channel.
pub fn bhattacharyya(kind: ChannelKind, param: f64) -> Result<f64> {
    kind.check_param(param)?;
    Ok(match kind {
        ChannelKind::Bec => param,
        ChannelKind::Bsc => 2.0 * (param * (1.0 - param)).sqrt(),
        ChannelKind::Bawgnc => (-1.0 / (2.0 * param * param)).exp(),
    })
}

/// Capacity in bits per channel use.
pub fn capacity(kind: ChannelKind, param: f64) -> Result<f64> {
    kind.check_param(param)?;
    Ok(match kind {
        ChannelKind::Bec => 1.0 - param,
        ChannelKind::Bsc => 1.0 - h2(param),
        ChannelKind::Bawgnc => bawgnc_capacity(param),
    })
}

/// `log2(1 + e^{-t})` without overflow for either sign of `t`.
fn log2_one_plus_exp_neg(t: f64) -> f64 {
    let nats = if t >= 0.0 {
        (-t).exp().ln_1p()
    } else {
        -t + t.exp().ln_1p()
    };
    nats / std::f64::consts::LN_2
}

/// `1 - E[log2(1 + e^{-L})]` where `L = 2y/sigma^2` and `y = 1 + sigma * z`.
fn bawgnc_capacity(sigma: f64) -> f64 {
    let s2 = sigma * sigma;
    let inv_sqrt_2pi = 1.0 / (2.0 * std::f64::consts::PI).sqrt();
    let integrand = |z: f64| {
        let density = inv_sqrt_2pi * (-0.5 * z * z).exp();
        density * log2_one_plus_exp_neg(2.0 * (1.0 + sigma * z) / s2)
    };
    let loss = adaptive_gauss_legendre(&integrand, -12.0, 12.0, 1e-14, 48);
    (1.0 - loss).clamp(0.0, 1.0)
}

const GL_NODES: [f64; 5] = [
    0.0,
    0.538_469_310_105_683_1,
    -0.538_469_310_105_683_1,
    0.906_179_845_938_664,
    -0.906_179_845_938_664,
];
const GL_WEIGHTS: [f64; 5] = [
    0.568_888_888_888_888_9,
    0.478_628_670_499_366_5,
    0.478_628_670_499_366_5,
    0.236_926_885_056_189_1,
    0.236_926_885_056_189_1,
];

fn gauss_legendre5(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    GL_NODES
        .iter()
        .zip(GL_WEIGHTS.iter())
        .map(|(x, w)| w * f(mid + half * x))
        .sum::<f64>()
        * half
}

fn adaptive_gauss_legendre(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
    fn recurse(f: &impl Fn(f64) -> f64, a: f64, b: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let mid = 0.5 * (a + b);
        let left = gauss_legendre5(f, a, mid);
        let right = gauss_legendre5(f, mid, b);
        if depth == 0 || (left + right - whole).abs() <= tol {
            return left + right;
        }
        recurse(f, a, mid, left, 0.5 * tol, depth - 1) + recurse(f, mid, b, right, 0.5 * tol, depth - 1)
    }
    recurse(f, a, b, gauss_legendre5(f, a, b), tol, depth)
}

/// A binary memoryless symmetric channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BmsChannel {
    kind: ChannelKind,
    param: f64,
    capacity: f64,
    z0: f64,
}

impl BmsChannel {
    pub fn new(kind: ChannelKind, param: f64) -> Result<Self> {
        let capacity = capacity(kind, param)?;
        let z0 = bhattacharyya(kind, param)?;
        Ok(Self {
            kind,
            param,
            capacity,
            z0,
        })
    }

    pub fn bec(erasure: f64) -> Result<Self> {
        Self::new(ChannelKind::Bec, erasure)
    }

    pub fn bsc(crossover: f64) -> Result<Self> {
        Self::new(ChannelKind::Bsc, crossover)
    }

    pub fn bawgnc(sigma: f64) -> Result<Self> {
        Self::new(ChannelKind::Bawgnc, sigma)
    }

    /// Finds the channel of the given family whose capacity equals `target`.
    ///
    /// Erasure channels are inverted in closed form; the other families are
    /// found by bisection on the parameter, over which capacity is strictly
    /// decreasing.
    pub fn from_capacity(kind: ChannelKind, target: f64) -> Result<Self> {
        if !(target > 0.0 && target < 1.0) {
            return domain(format!("target capacity {target} must lie in (0, 1)"));
        }
        let param = match kind {
            ChannelKind::Bec => 1.0 - target,
            ChannelKind::Bsc => bisect_decreasing(|p| 1.0 - h2(p), target, 0.0, 0.5)?,
            ChannelKind::Bawgnc => {
                let mut hi = 1.0;
                while bawgnc_capacity(hi) > target {
                    hi *= 2.0;
                    if hi > 1e6 {
                        return Err(Error::Numeric(format!(
                            "could not bracket noise level for capacity {target}"
                        )));
                    }
                }
                bisect_decreasing(bawgnc_capacity, target, 0.0, hi)?
            }
        };
        Self::new(kind, param)
    }

    pub fn kind(&self) -> ChannelKind {
        self.kind
    }

    pub fn param(&self) -> f64 {
        self.param
    }

    pub fn capacity(&self) -> f64 {
        self.capacity
    }

    /// Bhattacharyya parameter of the physical channel.
    pub fn z0(&self) -> f64 {
        self.z0
    }

    /// True when the channel never corrupts its input.
    pub fn is_noiseless(&self) -> bool {
        self.z0 == 0.0
    }

    /// LLR of a single channel output for transmitted bit `bit`.
    pub fn sample_llr<R: Rng + ?Sized>(&self, bit: u8, rng: &mut R) -> f64 {
        let sign = if bit == 0 { 1.0 } else { -1.0 };
        match self.kind {
            ChannelKind::Bec => {
                if self.param > 0.0 && rng.random_bool(self.param) {
                    0.0
                } else {
                    sign * LLR_CAP
                }
            }
            ChannelKind::Bsc => {
                let flipped = self.param > 0.0 && rng.random_bool(self.param);
                let magnitude = if self.param == 0.0 {
                    LLR_CAP
                } else {
                    ((1.0 - self.param) / self.param).ln().min(LLR_CAP)
                };
                if flipped {
                    -sign * magnitude
                } else {
                    sign * magnitude
                }
            }
            ChannelKind::Bawgnc => {
                let noise = Normal::new(0.0, self.param).expect("sigma validated at construction");
                let y = sign + noise.sample(rng);
                (2.0 * y / (self.param * self.param)).clamp(-LLR_CAP, LLR_CAP)
            }
        }
    }

    /// Channel-output LLRs for `codeword`, drawn from `rng`.
    pub fn sample_llrs_with<R: Rng + ?Sized>(&self, codeword: &[u8], rng: &mut R) -> Vec<f64> {
        codeword.iter().map(|&b| self.sample_llr(b, rng)).collect()
    }

    /// Channel-output LLRs for `codeword`, deterministic in `seed`.
    pub fn sample_llrs(&self, codeword: &[u8], seed: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        self.sample_llrs_with(codeword, &mut rng)
    }
}

/// Uniformly random information bits, used by simulations.
pub(crate) fn random_bits<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Vec<u8> {
    let coin = Bernoulli::new(0.5).expect("valid probability");
    (0..len).map(|_| coin.sample(rng) as u8).collect()
}

fn bisect_decreasing(f: impl Fn(f64) -> f64, target: f64, mut lo: f64, mut hi: f64) -> Result<f64> {
    for _ in 0..MAX_BISECTION_ITERS {
        let mid = 0.5 * (lo + hi);
        let value = f(mid);
        if (value - target).abs() <= 1e-13 || hi - lo <= f64::EPSILON * hi {
            return Ok(mid);
        }
        if value > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mid = 0.5 * (lo + hi);
    if (f(mid) - target).abs() <= 1e-9 {
        Ok(mid)
    } else {
        Err(Error::Numeric(format!(
            "bisection for capacity {target} did not converge"
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bhattacharyya_examples() {
        assert_eq!(bhattacharyya(ChannelKind::Bec, 0.5).unwrap(), 0.5);
        assert_eq!(bhattacharyya(ChannelKind::Bsc, 0.0).unwrap(), 0.0);
        // 2 * sqrt(0.11 * 0.89)
        let z = bhattacharyya(ChannelKind::Bsc, 0.11).unwrap();
        assert!((z - 0.625_779_513_886_480_7).abs() < 1e-12, "{z}");
        assert!((bhattacharyya(ChannelKind::Bawgnc, 1.0).unwrap() - (-0.5f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn out_of_range_parameters_are_rejected() {
        assert!(matches!(bhattacharyya(ChannelKind::Bec, 1.5), Err(Error::Domain(_))));
        assert!(matches!(bhattacharyya(ChannelKind::Bsc, 0.6), Err(Error::Domain(_))));
        assert!(matches!(capacity(ChannelKind::Bawgnc, 0.0), Err(Error::Domain(_))));
        assert!(matches!(capacity(ChannelKind::Bawgnc, f64::NAN), Err(Error::Domain(_))));
        assert!(BmsChannel::from_capacity(ChannelKind::Bec, 0.0).is_err());
        assert!(BmsChannel::from_capacity(ChannelKind::Bec, 1.5).is_err());
    }

    #[test]
    fn capacity_examples() {
        assert_eq!(capacity(ChannelKind::Bec, 0.5).unwrap(), 0.5);
        assert_eq!(capacity(ChannelKind::Bsc, 0.5).unwrap(), 0.0);
        let c = capacity(ChannelKind::Bsc, 0.11).unwrap();
        assert!((c - 0.500_084_041_835_472).abs() < 1e-9, "{c}");
    }

    #[test]
    fn bawgnc_capacity_matches_independent_quadrature() {
        // Trapezoid rule on a fine grid over the LLR density; independent of
        // the adaptive Gauss-Legendre path.
        for &sigma in &[0.5, 0.9787, 1.5, 3.0] {
            let mu = 2.0 / (sigma * sigma);
            let sd = 2.0 / sigma;
            let steps = 400_000;
            let (a, b) = (mu - 14.0 * sd, mu + 14.0 * sd);
            let h = (b - a) / steps as f64;
            let mut acc = 0.0;
            for i in 0..=steps {
                let l: f64 = a + h * i as f64;
                let w = if i == 0 || i == steps { 0.5 } else { 1.0 };
                let dens = (-(l - mu).powi(2) / (2.0 * sd * sd)).exp() / (sd * (2.0 * std::f64::consts::PI).sqrt());
                let loss = if l > 0.0 {
                    (-l).exp().ln_1p()
                } else {
                    -l + l.exp().ln_1p()
                } / std::f64::consts::LN_2;
                acc += w * dens * loss;
            }
            let oracle = 1.0 - acc * h;
            let got = capacity(ChannelKind::Bawgnc, sigma).unwrap();
            assert!((got - oracle).abs() < 1e-9, "sigma={sigma} got={got} oracle={oracle}");
        }
    }

    #[test]
    fn capacity_is_strictly_monotone_on_a_grid() {
        for kind in ChannelKind::ALL {
            let (lo, hi) = match kind {
                ChannelKind::Bec => (0.0, 1.0),
                ChannelKind::Bsc => (0.0, 0.5),
                // Below about 0.1 the capacity rounds to 1 in double precision.
                ChannelKind::Bawgnc => (0.15, 8.0),
            };
            let mut prev = f64::INFINITY;
            for i in 0..=200 {
                let p = lo + (hi - lo) * i as f64 / 200.0;
                let c = capacity(kind, p).unwrap();
                assert!(c < prev, "{kind} p={p} c={c} prev={prev}");
                prev = c;
            }
        }
    }

    #[test]
    fn from_capacity_examples_and_round_trip() {
        assert_eq!(BmsChannel::from_capacity(ChannelKind::Bec, 0.5).unwrap().param(), 0.5);
        let ch = BmsChannel::from_capacity(ChannelKind::Bec, 0.9).unwrap();
        assert!((ch.param() - 0.1).abs() < 1e-15);
        // Plain bisection on 1 - h2(p) = 0.5 in the test body.
        let (mut lo, mut hi) = (0.0f64, 0.5f64);
        for _ in 0..100 {
            let mid = 0.5 * (lo + hi);
            if 1.0 - h2(mid) > 0.5 {
                lo = mid
            } else {
                hi = mid
            }
        }
        let bsc = BmsChannel::from_capacity(ChannelKind::Bsc, 0.5).unwrap();
        assert!((bsc.param() - lo).abs() < 1e-9);
        assert!((bsc.param() - 0.110_027_864_438_359_6).abs() < 1e-9);
        for kind in ChannelKind::ALL {
            for &target in &[0.01, 0.1, 0.5, 0.9, 0.99] {
                let ch = BmsChannel::from_capacity(kind, target).unwrap();
                assert!(
                    (capacity(kind, ch.param()).unwrap() - target).abs() <= 1e-9,
                    "{kind} {target}"
                );
            }
        }
    }

    #[test]
    fn z_transform_examples() {
        let p = ZPolicy::ExactBec;
        assert_eq!(z_minus(0.5, p), 0.75);
        assert_eq!(z_minus(0.0, p), 0.0);
        assert_eq!(z_minus(1.0, p), 1.0);
        assert_eq!(z_plus(0.5), 0.25);
        assert_eq!(z_plus(1.0), 1.0);
        assert!((z_plus(0.1) - 0.01).abs() < 1e-17);
    }

    #[test]
    fn exact_bec_policy_is_bec_only() {
        assert!(ZPolicy::ExactBec.check(ChannelKind::Bec).is_ok());
        assert!(ZPolicy::ExactBec.check(ChannelKind::Bsc).is_err());
        assert!(ZPolicy::UpperBound.check(ChannelKind::Bawgnc).is_ok());
    }

    #[test]
    fn llr_sampling_examples() {
        let bsc0 = BmsChannel::bsc(0.0).unwrap();
        assert_eq!(bsc0.sample_llrs(&[0, 0, 0], 1), vec![LLR_CAP; 3]);
        let bec1 = BmsChannel::bec(1.0).unwrap();
        assert!(bec1.sample_llrs(&[0, 1, 1, 0], 9).iter().all(|&l| l == 0.0));
        let bec0 = BmsChannel::bec(0.0).unwrap();
        assert_eq!(bec0.sample_llrs(&[1], 3), vec![-LLR_CAP]);
    }

    #[test]
    fn llr_sampling_is_seed_deterministic() {
        let word: Vec<u8> = (0..64).map(|i| (i % 3 == 0) as u8).collect();
        for kind in ChannelKind::ALL {
            let ch = BmsChannel::from_capacity(kind, 0.5).unwrap();
            let a = ch.sample_llrs(&word, 42);
            let b = ch.sample_llrs(&word, 42);
            assert_eq!(
                a.iter().map(|x| x.to_bits()).collect::<Vec<_>>(),
                b.iter().map(|x| x.to_bits()).collect::<Vec<_>>()
            );
            assert!(a.iter().all(|x| x.is_finite() && x.abs() <= LLR_CAP));
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn polarization_ordering(z in 0.0f64..=1.0) {
                prop_assert!(z_plus(z) <= z);
                prop_assert!(z <= z_minus(z, ZPolicy::UpperBound));
            }
        }
    }
}
