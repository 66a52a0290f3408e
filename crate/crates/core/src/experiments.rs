//! Latency-scaling sweeps, slope fits and CSV output.
//!
//! Three sweeps are provided:
//!
//! * [`run_fig6`]: fully-serial (`P = 1`) SSC latency normalized by `N`, per
//!   channel, capacity and target error, plus the SC reference `latency/N = n`;
//! * [`run_fig7`]: SSC latency of one code family under several rules for
//!   choosing `P` as a function of `N`;
//! * [`run_fig8`]: the smallest `P` that keeps SSC latency within a factor of
//!   the fully-parallel latency.
//!
//! Grid points are evaluated in parallel and sorted before they are returned,
//! so the output does not depend on scheduling.

use std::cmp::Ordering;
use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;

use rayon::prelude::*;

use crate::channel::{BmsChannel, ChannelKind, ZPolicy};
use crate::construct::build_code;
use crate::error::{domain, Error, Result};
use crate::latency::{latency_from_histogram, min_p_from_histogram, ssc_edge_histogram, theorem1_bound};

/// Largest `n` accepted by the sweeps.
pub const MAX_SWEEP_N: u32 = 27;
/// Default upper end of the standard sweeps.
pub const DEFAULT_SWEEP_N: u32 = 22;

pub const CSV_HEADER: &str = "channel,capacity,pe,n,log2N,p_policy,P,latency,latency_norm,log2_latency";

/// Rule for choosing the number of processing elements from the block length.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PPolicy {
    /// `P = N/2`, fully parallel.
    Half,
    SqrtN,
    /// `P = N^{1/mu}` for the channel's scaling exponent.
    NPowInvMu,
    NPow1_8,
    /// `P = 1`, fully serial.
    One,
    Fixed(u64),
}

impl PPolicy {
    pub const FIG7: [PPolicy; 5] = [
        PPolicy::Half,
        PPolicy::SqrtN,
        PPolicy::NPowInvMu,
        PPolicy::NPow1_8,
        PPolicy::One,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            PPolicy::Half => "half",
            PPolicy::SqrtN => "sqrt",
            PPolicy::NPowInvMu => "invmu",
            PPolicy::NPow1_8 => "eighth",
            PPolicy::One => "one",
            PPolicy::Fixed(_) => "fixed",
        }
    }

    fn rank(self) -> u8 {
        match self {
            PPolicy::Half => 0,
            PPolicy::SqrtN => 1,
            PPolicy::NPowInvMu => 2,
            PPolicy::NPow1_8 => 3,
            PPolicy::One => 4,
            PPolicy::Fixed(_) => 5,
        }
    }

    /// Realized `P` for block length `2^n`: nearest integer (halves round up),
    /// clamped to `[1, N/2]`.
    pub fn realize(self, n: u32, mu: f64) -> u64 {
        let len = (1u64 << n) as f64;
        let x = match self {
            PPolicy::Half => len / 2.0,
            PPolicy::SqrtN => len.sqrt(),
            PPolicy::NPowInvMu => len.powf(1.0 / mu),
            PPolicy::NPow1_8 => len.powf(0.125),
            PPolicy::One => 1.0,
            PPolicy::Fixed(k) => k as f64,
        };
        let max = (1u64 << n.max(1)) / 2;
        ((x + 0.5).floor() as u64).clamp(1, max)
    }
}

impl fmt::Display for PPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "half" => Ok(PPolicy::Half),
            "sqrt" => Ok(PPolicy::SqrtN),
            "invmu" => Ok(PPolicy::NPowInvMu),
            "eighth" => Ok(PPolicy::NPow1_8),
            "one" => Ok(PPolicy::One),
            other => Err(Error::Parse(format!(
                "unknown policy {other:?} (expected half, sqrt, invmu, eighth or one)"
            ))),
        }
    }
}

/// Which decoder a curve describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Curve {
    Ssc(ChannelKind),
    /// SC decoding, which does not depend on the channel or the frozen set.
    ScReference,
}

impl Curve {
    pub fn label(self) -> &'static str {
        match self {
            Curve::Ssc(kind) => kind.as_str(),
            Curve::ScReference => "sc",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRecord {
    pub curve: Curve,
    /// Channel capacity; zero on the SC reference curve.
    pub capacity: f64,
    /// Target error probability; zero on the SC reference curve.
    pub p_e: f64,
    pub n: u32,
    pub policy: PPolicy,
    pub p: u64,
    pub latency: u64,
}

impl SweepRecord {
    pub fn log2_n(&self) -> f64 {
        self.n as f64
    }

    pub fn latency_norm(&self) -> f64 {
        self.latency as f64 / (1u64 << self.n) as f64
    }

    /// `log2(latency)`; `-inf` for a zero-latency code.
    pub fn log2_latency(&self) -> f64 {
        (self.latency as f64).log2()
    }

    pub fn field(&self, field: Field) -> f64 {
        match field {
            Field::Log2N => self.log2_n(),
            Field::Log2Log2N => self.log2_n().log2(),
            Field::P => self.p as f64,
            Field::Log2P => (self.p as f64).log2(),
            Field::Latency => self.latency as f64,
            Field::LatencyNorm => self.latency_norm(),
            Field::Log2Latency => self.log2_latency(),
        }
    }

    /// Identifies the curve a record belongs to.
    pub fn curve_key(&self) -> CurveKey {
        CurveKey {
            curve: self.curve,
            capacity: self.capacity,
            p_e: self.p_e,
            policy: self.policy.as_str(),
        }
    }

    fn sort_cmp(&self, other: &Self) -> Ordering {
        self.curve
            .cmp(&other.curve)
            .then(self.capacity.total_cmp(&other.capacity))
            .then(self.p_e.total_cmp(&other.p_e))
            .then(self.n.cmp(&other.n))
            .then(self.policy.rank().cmp(&other.policy.rank()))
    }

    pub fn to_csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{}",
            self.curve.label(),
            fmt_g(self.capacity),
            fmt_g(self.p_e),
            self.n,
            fmt_g(self.log2_n()),
            self.policy,
            self.p,
            self.latency,
            fmt_g(self.latency_norm()),
            fmt_g(self.log2_latency()),
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveKey {
    pub curve: Curve,
    pub capacity: f64,
    pub p_e: f64,
    pub policy: &'static str,
}

impl fmt::Display for CurveKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.curve {
            Curve::ScReference => write!(f, "SC"),
            Curve::Ssc(kind) => write!(
                f,
                "{} I={} pe={} P={}",
                kind.as_str(),
                fmt_g(self.capacity),
                fmt_g(self.p_e),
                self.policy
            ),
        }
    }
}

/// Splits records into curves in order of first appearance; rows keep their
/// relative order within a curve.
pub fn group_curves(records: &[SweepRecord]) -> Vec<(CurveKey, Vec<SweepRecord>)> {
    let mut out: Vec<(CurveKey, Vec<SweepRecord>)> = Vec::new();
    for r in records {
        let key = r.curve_key();
        match out.iter_mut().find(|(k, _)| *k == key) {
            Some((_, rows)) => rows.push(*r),
            None => out.push((key, vec![*r])),
        }
    }
    out
}

/// Channels, capacities, target errors and the range of `n` to sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepGrid {
    pub kinds: Vec<ChannelKind>,
    pub capacities: Vec<f64>,
    pub pes: Vec<f64>,
    pub n_min: u32,
    pub n_max: u32,
}

impl SweepGrid {
    /// All three channels at capacities `{0.1, 0.5, 0.9}` and `p_e ∈ {1e-3, 1e-10}`.
    pub fn fig6(n_max: u32) -> Self {
        Self {
            kinds: ChannelKind::ALL.to_vec(),
            capacities: vec![0.1, 0.5, 0.9],
            pes: vec![1e-3, 1e-10],
            n_min: 4,
            n_max,
        }
    }

    /// The BEC with capacity 0.5 and `p_e = 1e-3`.
    pub fn bec_half(n_max: u32) -> Self {
        Self {
            kinds: vec![ChannelKind::Bec],
            capacities: vec![0.5],
            pes: vec![1e-3],
            n_min: 4,
            n_max,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(1 <= self.n_min && self.n_min <= self.n_max && self.n_max <= MAX_SWEEP_N) {
            return domain(format!(
                "n range {}..={} must satisfy 1 <= nmin <= nmax <= {MAX_SWEEP_N}",
                self.n_min, self.n_max
            ));
        }
        if self.kinds.is_empty() || self.capacities.is_empty() || self.pes.is_empty() {
            return domain("sweep grid is empty");
        }
        for &pe in &self.pes {
            if !(pe > 0.0 && pe < 1.0) {
                return domain(format!("target error {pe} must lie in (0, 1)"));
            }
        }
        Ok(())
    }

    fn points(&self) -> Result<Vec<(BmsChannel, f64, f64, u32)>> {
        self.validate()?;
        let mut points = Vec::new();
        for &kind in &self.kinds {
            for &cap in &self.capacities {
                let channel = BmsChannel::from_capacity(kind, cap)?;
                for &pe in &self.pes {
                    for n in self.n_min..=self.n_max {
                        points.push((channel, cap, pe, n));
                    }
                }
            }
        }
        Ok(points)
    }
}

fn histogram(channel: &BmsChannel, n: u32, p_e: f64) -> Result<Vec<u64>> {
    let code = build_code(channel, n, p_e, ZPolicy::for_kind(channel.kind()))?;
    Ok(ssc_edge_histogram(&code))
}

fn sorted(mut records: Vec<SweepRecord>) -> Vec<SweepRecord> {
    records.sort_by(SweepRecord::sort_cmp);
    records
}

/// Fully-serial SSC latency over the grid, plus one SC reference curve.
pub fn run_fig6(grid: &SweepGrid) -> Result<Vec<SweepRecord>> {
    let points = grid.points()?;
    let mut records = points
        .par_iter()
        .map(|&(channel, capacity, p_e, n)| {
            let hist = histogram(&channel, n, p_e)?;
            Ok(SweepRecord {
                curve: Curve::Ssc(channel.kind()),
                capacity,
                p_e,
                n,
                policy: PPolicy::One,
                p: 1,
                latency: latency_from_histogram(&hist, 1),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    records.extend((grid.n_min..=grid.n_max).map(|n| SweepRecord {
        curve: Curve::ScReference,
        capacity: 0.0,
        p_e: 0.0,
        n,
        policy: PPolicy::One,
        p: 1,
        latency: crate::latency::sc_latency_tree(n, 1),
    }));
    Ok(sorted(records))
}

/// SSC latency for each `P` policy. `mu` overrides the channel's scaling
/// exponent in [`PPolicy::NPowInvMu`].
pub fn run_fig7(grid: &SweepGrid, policies: &[PPolicy], mu: Option<f64>) -> Result<Vec<SweepRecord>> {
    if policies.is_empty() {
        return domain("at least one policy is required");
    }
    if let Some(mu) = mu {
        if !(mu > 1.0) {
            return domain(format!("scaling exponent {mu} must exceed 1"));
        }
    }
    let points = grid.points()?;
    let nested = points
        .par_iter()
        .map(|&(channel, capacity, p_e, n)| {
            let hist = histogram(&channel, n, p_e)?;
            let mu = mu.unwrap_or_else(|| channel.kind().scaling_exponent());
            Ok(policies
                .iter()
                .map(|&policy| {
                    let p = policy.realize(n, mu);
                    SweepRecord {
                        curve: Curve::Ssc(channel.kind()),
                        capacity,
                        p_e,
                        n,
                        policy,
                        p,
                        latency: latency_from_histogram(&hist, p),
                    }
                })
                .collect::<Vec<_>>())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(sorted(nested.into_iter().flatten().collect()))
}

/// Smallest `P` within `factor` of the fully-parallel latency, per grid point.
pub fn run_fig8(grid: &SweepGrid, factor: f64) -> Result<Vec<SweepRecord>> {
    if !(factor >= 1.0 && factor.is_finite()) {
        return domain(format!("factor {factor} must be at least 1"));
    }
    let points = grid.points()?;
    let records = points
        .par_iter()
        .map(|&(channel, capacity, p_e, n)| {
            let hist = histogram(&channel, n, p_e)?;
            let p = min_p_from_histogram(&hist, factor)?;
            Ok(SweepRecord {
                curve: Curve::Ssc(channel.kind()),
                capacity,
                p_e,
                n,
                policy: PPolicy::Fixed(p),
                p,
                latency: latency_from_histogram(&hist, p),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(sorted(records))
}

/// Record fields usable as plot or fit axes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Field {
    Log2N,
    Log2Log2N,
    P,
    Log2P,
    Latency,
    LatencyNorm,
    Log2Latency,
}

impl Field {
    pub fn name(self) -> &'static str {
        match self {
            Field::Log2N => "log2N",
            Field::Log2Log2N => "log2log2N",
            Field::P => "P",
            Field::Log2P => "log2P",
            Field::Latency => "latency",
            Field::LatencyNorm => "latency_norm",
            Field::Log2Latency => "log2_latency",
        }
    }
}

/// Ordinary least-squares line through the last `window` points of a curve.
#[derive(Debug, Clone, PartialEq)]
pub struct SlopeFit {
    pub x_name: String,
    pub y_name: String,
    pub window: usize,
    pub slope: f64,
    pub intercept: f64,
    /// Root-mean-square residual of the fit.
    pub residual: f64,
}

/// Fits `y = slope * x + intercept` over the last `window` points. Uses every
/// point when fewer than `window` are available.
pub fn fit_line(xs: &[f64], ys: &[f64], window: usize) -> Result<SlopeFit> {
    if xs.len() != ys.len() {
        return domain("x and y must have the same length");
    }
    let k = window.min(xs.len());
    if k < 2 {
        return domain(format!("a slope needs at least 2 points, got {k}"));
    }
    let (xs, ys) = (&xs[xs.len() - k..], &ys[ys.len() - k..]);
    if xs.iter().chain(ys).any(|v| !v.is_finite()) {
        return domain("fit window contains non-finite values");
    }
    if xs.windows(2).any(|w| w[1] <= w[0]) {
        return domain("x must be strictly increasing");
    }
    let kf = k as f64;
    let mx = xs.iter().sum::<f64>() / kf;
    let my = ys.iter().sum::<f64>() / kf;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (y - slope * x - intercept).powi(2))
        .sum();
    Ok(SlopeFit {
        x_name: "x".into(),
        y_name: "y".into(),
        window: k,
        slope,
        intercept,
        residual: (sse / kf).sqrt(),
    })
}

/// [`fit_line`] over two fields of the records of one curve, in order.
pub fn fit_slope(records: &[SweepRecord], x: Field, y: Field, window: usize) -> Result<SlopeFit> {
    let xs: Vec<f64> = records.iter().map(|r| r.field(x)).collect();
    let ys: Vec<f64> = records.iter().map(|r| r.field(y)).collect();
    let mut fit = fit_line(&xs, &ys, window)?;
    fit.x_name = x.name().into();
    fit.y_name = y.name().into();
    Ok(fit)
}

/// Smallest `c >= 0` for which the bound with exponent `mu` and slack `eps`
/// holds at every SSC record; `None` when there are no SSC records.
pub fn fit_bound_constant(records: &[SweepRecord], mu: f64, eps: f64) -> Option<f64> {
    records
        .iter()
        .filter(|r| r.curve != Curve::ScReference && r.n >= 1)
        .map(|r| {
            let len = (1u64 << r.n) as f64;
            let ratio = len / r.p as f64;
            let second = (2.0 + eps) * ratio * ratio.log2().log2();
            ((r.latency as f64 - second) / len.powf(1.0 - 1.0 / mu)).max(0.0)
        })
        .reduce(f64::max)
}

/// Records whose SSC latency exceeds the bound with the given constants.
pub fn bound_violations(records: &[SweepRecord], mu: f64, c: f64, eps: f64) -> Result<Vec<SweepRecord>> {
    let mut out = Vec::new();
    for r in records.iter().filter(|r| r.curve != Curve::ScReference) {
        let bound = theorem1_bound((1u64 << r.n) as f64, r.p as f64, mu, c, eps)?;
        if r.latency as f64 > bound {
            out.push(*r);
        }
    }
    Ok(out)
}

/// Formats like C's `%g` with 6 significant digits.
pub fn fmt_g(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.5e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format has an exponent");
    let exp: i32 = exp.parse().expect("exponent is an integer");
    if !(-4..6).contains(&exp) {
        let mantissa = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (5 - exp) as usize;
        trim_zeros(&format!("{:.*}", decimals, x)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn write_csv<W: Write>(records: &[SweepRecord], mut w: W) -> io::Result<()> {
    writeln!(w, "{CSV_HEADER}")?;
    for r in records {
        writeln!(w, "{}", r.to_csv_row())?;
    }
    Ok(())
}

pub fn to_csv_string(records: &[SweepRecord]) -> String {
    let mut buf = Vec::new();
    write_csv(records, &mut buf).expect("writing to memory cannot fail");
    String::from_utf8(buf).expect("CSV is ASCII")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn curve_of(records: &[SweepRecord], curve: Curve, policy: PPolicy) -> Vec<SweepRecord> {
        records
            .iter()
            .filter(|r| r.curve == curve && r.policy == policy)
            .copied()
            .collect()
    }

    #[test]
    fn fmt_g_examples() {
        assert_eq!(fmt_g(0.5), "0.5");
        assert_eq!(fmt_g(1e-3), "0.001");
        assert_eq!(fmt_g(1e-10), "1e-10");
        assert_eq!(fmt_g(1.875), "1.875");
        assert_eq!(fmt_g(6.083984375), "6.08398");
        assert_eq!(fmt_g(10.0), "10");
        assert_eq!(fmt_g(123456789.0), "1.23457e+08");
        assert_eq!(fmt_g(999999.5), "1e+06");
        assert_eq!(fmt_g(0.0001), "0.0001");
        assert_eq!(fmt_g(0.00001234), "1.234e-05");
        assert_eq!(fmt_g(-2.5), "-2.5");
        assert_eq!(fmt_g(f64::NEG_INFINITY), "-inf");
    }

    #[test]
    fn policy_rounding() {
        assert_eq!(PPolicy::Half.realize(4, 3.63), 8);
        assert_eq!(PPolicy::SqrtN.realize(5, 3.63), 6); // sqrt(32) = 5.66
        assert_eq!(PPolicy::NPowInvMu.realize(10, 3.63), 7); // 1024^(1/3.63) = 6.75
        assert_eq!(PPolicy::NPow1_8.realize(4, 3.63), 1); // 16^(1/8) = 1.41
        assert_eq!(PPolicy::NPow1_8.realize(8, 3.63), 2);
        assert_eq!(PPolicy::One.realize(20, 3.63), 1);
        assert_eq!(PPolicy::Fixed(100).realize(4, 3.63), 8);
        assert_eq!(PPolicy::Fixed(0).realize(4, 3.63), 1);
        assert_eq!(PPolicy::SqrtN.realize(1, 3.63), 1);
        assert_eq!("invmu".parse::<PPolicy>().unwrap(), PPolicy::NPowInvMu);
        assert!("quarter".parse::<PPolicy>().is_err());
    }

    #[test]
    fn fig6_bec_values() {
        let records = run_fig6(&SweepGrid::bec_half(10)).unwrap();
        let ssc = curve_of(&records, Curve::Ssc(ChannelKind::Bec), PPolicy::One);
        assert_eq!(ssc.len(), 7);
        assert_eq!(ssc[0].latency_norm(), 1.875);
        assert!((ssc[6].latency_norm() - 6.084).abs() < 1e-3);
        let sc = curve_of(&records, Curve::ScReference, PPolicy::One);
        for r in &sc {
            assert_eq!(r.latency_norm(), r.n as f64);
        }
        assert_eq!(sc.last().unwrap().latency_norm(), 10.0);
    }

    #[test]
    fn fig7_values_and_ordering() {
        let records = run_fig7(&SweepGrid::bec_half(12), &PPolicy::FIG7, None).unwrap();
        assert_eq!(records.len(), 5 * 9);
        let at = |n: u32, policy: PPolicy| {
            records
                .iter()
                .find(|r| r.n == n && r.policy == policy)
                .unwrap()
                .log2_latency()
        };
        assert_eq!(at(4, PPolicy::Half), 3.0);
        assert!((at(4, PPolicy::One) - 4.907).abs() < 1e-3);
        assert!((at(10, PPolicy::Half) - 8.672).abs() < 1e-3);
        for n in 4..=12 {
            let lat: Vec<f64> = PPolicy::FIG7.iter().map(|&p| at(n, p)).collect();
            assert!(lat.windows(2).all(|w| w[0] <= w[1]), "n={n} {lat:?}");
        }
    }

    #[test]
    fn fig8_degenerate_and_small() {
        let records = run_fig8(&SweepGrid::bec_half(8), 1.01).unwrap();
        assert_eq!(records.len(), 5);
        for r in &records {
            assert!(r.p >= 1 && r.p <= (1 << r.n) / 2);
            assert_eq!(r.policy, PPolicy::Fixed(r.p));
        }
        // A channel that is barely usable freezes everything: latency 0 at any P.
        let grid = SweepGrid {
            kinds: vec![ChannelKind::Bec],
            capacities: vec![0.01],
            pes: vec![1e-10],
            n_min: 4,
            n_max: 4,
        };
        let r = run_fig8(&grid, 1.01).unwrap()[0];
        assert_eq!(r.latency, 0);
        assert_eq!(r.p, 1);
        assert!(run_fig8(&grid, 0.5).is_err());
    }

    #[test]
    fn csv_is_deterministic_and_well_formed() {
        let grid = SweepGrid {
            n_max: 8,
            ..SweepGrid::fig6(8)
        };
        let a = to_csv_string(&run_fig6(&grid).unwrap());
        let b = to_csv_string(&run_fig6(&grid).unwrap());
        assert_eq!(a, b);
        let mut lines = a.lines();
        assert_eq!(lines.next().unwrap(), CSV_HEADER);
        for line in lines {
            assert_eq!(line.split(',').count(), 10, "{line}");
        }
        assert!(a.contains("\nbec,0.5,0.001,4,4,one,1,30,1.875,4.90689\n"));
        assert!(a.contains("\nsc,0,0,8,8,one,1,2048,8,11\n"));
    }

    #[test]
    fn grid_validation() {
        assert!(run_fig6(&SweepGrid::bec_half(28)).is_err());
        let mut g = SweepGrid::bec_half(10);
        g.n_min = 11;
        assert!(run_fig6(&g).is_err());
        g = SweepGrid::bec_half(10);
        g.capacities = vec![1.5];
        assert!(run_fig6(&g).is_err());
        g = SweepGrid::bec_half(10);
        g.pes = vec![0.0];
        assert!(run_fig6(&g).is_err());
    }

    #[test]
    fn fit_examples() {
        let xs: Vec<f64> = (0..10).map(f64::from).collect();
        let line: Vec<f64> = xs.iter().map(|x| 2.0 * x).collect();
        let fit = fit_line(&xs, &line, 5).unwrap();
        assert!((fit.slope - 2.0).abs() < 1e-12);
        assert!(fit.intercept.abs() < 1e-12);
        assert!(fit.residual < 1e-12);
        assert_eq!(fit.window, 5);
        let flat = fit_line(&xs, &[3.0; 10], 8).unwrap();
        assert_eq!(flat.slope, 0.0);
        assert!(fit_line(&[1.0], &[1.0], 5).is_err());
        assert!(fit_line(&xs, &line, 1).is_err());
        assert!(fit_line(&[1.0, 1.0], &[0.0, 1.0], 2).is_err());
        assert!(fit_line(&[1.0, 2.0], &[f64::NEG_INFINITY, 1.0], 2).is_err());
    }

    #[test]
    fn fit_on_paper_fig7_half_table() {
        // Fully-parallel curve as published, n = 4..27.
        let ys = [
            3.000, 3.000, 4.907, 6.000, 6.807, 7.755, 8.672, 9.555, 10.416, 11.242, 12.046, 12.851, 13.639, 14.430,
            15.217, 15.992, 16.761, 17.528, 18.289, 19.047, 19.801, 20.556, 21.306, 22.056,
        ];
        let xs: Vec<f64> = (4..=27).map(f64::from).collect();
        let fit = fit_line(&xs, &ys, 8).unwrap();
        assert!((fit.slope - 0.756).abs() < 0.002, "{}", fit.slope);
    }

    #[test]
    fn bound_constant_covers_fully_parallel_points() {
        let records = run_fig7(&SweepGrid::bec_half(12), &PPolicy::FIG7, None).unwrap();
        let mu = ChannelKind::Bec.scaling_exponent();
        let c = fit_bound_constant(&records, mu, 0.5).unwrap();
        assert!(c > 0.0);
        assert!(bound_violations(&records, mu, c, 0.5).unwrap().is_empty());
        assert!(!bound_violations(&records, mu, 0.9 * c, 0.5).unwrap().is_empty());
        // At P = N/2 the second term vanishes, so the fit is latency / N^(1 - 1/mu).
        let half: Vec<_> = records.iter().filter(|r| r.policy == PPolicy::Half).copied().collect();
        let direct = half
            .iter()
            .map(|r| r.latency as f64 / ((1u64 << r.n) as f64).powf(1.0 - 1.0 / mu))
            .fold(0.0, f64::max);
        assert_eq!(fit_bound_constant(&half, mu, 0.5).unwrap(), direct);
        assert_eq!(fit_bound_constant(&[], mu, 0.5), None);
    }

    #[test]
    fn grouping_preserves_curves() {
        let records = run_fig7(&SweepGrid::bec_half(6), &PPolicy::FIG7, None).unwrap();
        let groups = group_curves(&records);
        assert_eq!(groups.len(), 5);
        for (key, rows) in &groups {
            assert_eq!(rows.iter().map(|r| r.n).collect::<Vec<_>>(), vec![4, 5, 6]);
            assert!(rows.iter().all(|r| r.policy.as_str() == key.policy));
        }
    }
}
