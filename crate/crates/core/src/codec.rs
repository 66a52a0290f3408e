//! Non-systematic polar encoding and SC / SSC decoding over LLRs.
//!
//! Hard decisions read the sign bit of an LLR: `+0.0` and positive values
//! decide 0, `-0.0` and negative values decide 1. The `f` kernel propagates
//! the sign of zero as the product of its input signs, which makes the
//! one-shot Rate-1 decision of the SSC decoder agree bit for bit with the
//! leaf-by-leaf SC traversal, erasures included.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::channel::{random_bits, BmsChannel, LLR_CAP};
use crate::construct::PolarCode;
use crate::error::{domain, Result};
use crate::latency::{build_ssc_tree, NodeKind, SscTree};

/// Channel or internal LLR values at one level of the factor graph.
pub type LlrFrame = Vec<f64>;
/// Bit estimates, one `u8` in `{0, 1}` per position.
pub type BitFrame = Vec<u8>;

/// Check-node update `2 atanh(tanh(a/2) tanh(b/2))`, evaluated in its
/// overflow-free form and saturated to `±LLR_CAP`.
pub fn f_kernel(a: f64, b: f64) -> f64 {
    let (abs_a, abs_b) = (a.abs(), b.abs());
    let min = abs_a.min(abs_b);
    let correction = (-(abs_a + abs_b)).exp().ln_1p() - (-(abs_a - abs_b).abs()).exp().ln_1p();
    let magnitude = (min + correction).clamp(0.0, min).min(LLR_CAP);
    let negative = a.is_sign_negative() != b.is_sign_negative();
    if negative {
        -magnitude
    } else {
        magnitude
    }
}

/// Variable-node update `a + (1 - 2c) b`, saturated to `±LLR_CAP`.
pub fn g_kernel(a: f64, b: f64, c_bit: u8) -> f64 {
    let b = if c_bit == 0 { b } else { -b };
    (a + b).clamp(-LLR_CAP, LLR_CAP)
}

#[inline]
pub fn hard_decision(llr: f64) -> u8 {
    llr.is_sign_negative() as u8
}

/// In-place polar transform `x = u F^{⊗n}` over GF(2). The transform is its
/// own inverse.
pub fn polar_transform_in_place(bits: &mut [u8]) {
    debug_assert!(bits.len().is_power_of_two());
    let len = bits.len();
    let mut half = 1;
    while half < len {
        for block in bits.chunks_mut(2 * half) {
            let (left, right) = block.split_at_mut(half);
            for (l, r) in left.iter_mut().zip(right.iter()) {
                *l ^= *r;
            }
        }
        half *= 2;
    }
}

pub fn encode(u: &[u8]) -> Result<BitFrame> {
    if !u.len().is_power_of_two() {
        return domain(format!("block length {} is not a power of two", u.len()));
    }
    if u.iter().any(|&b| b > 1) {
        return domain("input bits must be 0 or 1");
    }
    let mut x = u.to_vec();
    polar_transform_in_place(&mut x);
    Ok(x)
}

/// Places `info` bits at the information positions of `code`.
pub fn embed_info_bits(code: &PolarCode, info: &[u8]) -> Result<BitFrame> {
    if info.len() != code.info_count() {
        return domain(format!(
            "expected {} information bits, got {}",
            code.info_count(),
            info.len()
        ));
    }
    let mut u = vec![0u8; code.len()];
    for (pos, &bit) in code.frozen().iter_zeros().zip(info) {
        u[pos] = bit;
    }
    Ok(u)
}

trait NodeSource {
    type Id: Copy;
    fn kind(&self, id: Self::Id) -> NodeKind;
    fn children(&self, id: Self::Id) -> [Self::Id; 2];
}

/// The unpruned tree: only leaves are Rate-0 (frozen) or Rate-1.
struct FullTree<'a>(&'a PolarCode);

impl NodeSource for FullTree<'_> {
    type Id = (u32, usize);

    fn kind(&self, (level, offset): (u32, usize)) -> NodeKind {
        match (level, self.0.is_frozen(offset)) {
            (0, true) => NodeKind::Rate0,
            (0, false) => NodeKind::Rate1,
            _ => NodeKind::Mixed,
        }
    }

    fn children(&self, (level, offset): (u32, usize)) -> [(u32, usize); 2] {
        [(level - 1, offset), (level - 1, offset + (1 << (level - 1)))]
    }
}

impl NodeSource for SscTree {
    type Id = usize;

    fn kind(&self, id: usize) -> NodeKind {
        self.node(id).kind
    }

    fn children(&self, id: usize) -> [usize; 2] {
        self.node(id).children.expect("mixed nodes have children")
    }
}

/// Scratch LLR buffers, one per tree level below the root.
#[derive(Debug, Clone)]
struct Workspace {
    levels: Vec<Vec<f64>>,
    beta: Vec<u8>,
}

impl Workspace {
    fn new(n: u32) -> Self {
        Self {
            levels: (0..n).map(|s| vec![0.0; 1 << s]).collect(),
            beta: vec![0; 1 << n],
        }
    }
}

/// Decodes the node `id` at `level`, whose incoming LLRs are `alpha`.
/// Writes the node's partial codeword to `beta` and its leaf decisions to `u`.
/// Returns the number of mixed nodes traversed.
fn decode_node<S: NodeSource>(
    src: &S,
    id: S::Id,
    level: u32,
    alpha: &[f64],
    scratch: &mut [Vec<f64>],
    beta: &mut [u8],
    u: &mut [u8],
) -> u64 {
    match src.kind(id) {
        NodeKind::Rate0 => {
            beta.fill(0);
            u.fill(0);
            0
        }
        NodeKind::Rate1 => {
            for (b, &a) in beta.iter_mut().zip(alpha) {
                *b = hard_decision(a);
            }
            u.copy_from_slice(beta);
            polar_transform_in_place(u);
            0
        }
        NodeKind::Mixed => {
            let half = 1usize << (level - 1);
            let [left, right] = src.children(id);
            let (below, here) = scratch.split_at_mut(level as usize - 1);
            let child = &mut here[0];
            let (alpha_top, alpha_bottom) = alpha.split_at(half);
            let (beta_l, beta_r) = beta.split_at_mut(half);
            let (u_l, u_r) = u.split_at_mut(half);

            for ((c, &a), &b) in child.iter_mut().zip(alpha_top).zip(alpha_bottom) {
                *c = f_kernel(a, b);
            }
            let mut visited = 1 + decode_node(src, left, level - 1, child, below, beta_l, u_l);

            for (((c, &a), &b), &bit) in child.iter_mut().zip(alpha_bottom).zip(alpha_top).zip(beta_l.iter()) {
                *c = g_kernel(a, b, bit);
            }
            visited += decode_node(src, right, level - 1, child, below, beta_r, u_r);

            for (l, r) in beta_l.iter_mut().zip(beta_r.iter()) {
                *l ^= *r;
            }
            visited
        }
    }
}

fn check_frame(code_len: usize, llrs: &[f64]) {
    assert_eq!(llrs.len(), code_len, "LLR frame length must equal the block length");
}

/// Reusable SC decoder for one code.
#[derive(Debug, Clone)]
pub struct ScDecoder<'a> {
    code: &'a PolarCode,
    ws: Workspace,
}

impl<'a> ScDecoder<'a> {
    pub fn new(code: &'a PolarCode) -> Self {
        Self {
            code,
            ws: Workspace::new(code.n()),
        }
    }

    /// Decodes `llrs` into `u_hat`; both have the block length.
    pub fn decode_into(&mut self, llrs: &[f64], u_hat: &mut [u8]) {
        check_frame(self.code.len(), llrs);
        let Workspace { levels, beta } = &mut self.ws;
        decode_node(
            &FullTree(self.code),
            (self.code.n(), 0),
            self.code.n(),
            llrs,
            levels,
            beta,
            u_hat,
        );
    }

    pub fn decode(&mut self, llrs: &[f64]) -> BitFrame {
        let mut out = vec![0; self.code.len()];
        self.decode_into(llrs, &mut out);
        out
    }
}

/// Reusable SSC decoder over a pruned tree.
#[derive(Debug, Clone)]
pub struct SscDecoder<'a> {
    tree: &'a SscTree,
    ws: Workspace,
}

impl<'a> SscDecoder<'a> {
    pub fn new(tree: &'a SscTree) -> Self {
        Self {
            tree,
            ws: Workspace::new(tree.n()),
        }
    }

    /// Decodes `llrs` into `u_hat` and returns the number of mixed nodes
    /// that were descended into.
    pub fn decode_into(&mut self, llrs: &[f64], u_hat: &mut [u8]) -> u64 {
        check_frame(1 << self.tree.n(), llrs);
        let Workspace { levels, beta } = &mut self.ws;
        decode_node(self.tree, 0, self.tree.n(), llrs, levels, beta, u_hat)
    }

    pub fn decode(&mut self, llrs: &[f64]) -> BitFrame {
        let mut out = vec![0; 1 << self.tree.n()];
        self.decode_into(llrs, &mut out);
        out
    }
}

/// SC decoding: leaves visited left to right, frozen leaves decide 0.
///
/// # Panics
/// If `llrs.len()` differs from the block length.
pub fn sc_decode(code: &PolarCode, llrs: &[f64]) -> BitFrame {
    ScDecoder::new(code).decode(llrs)
}

/// SSC decoding: Rate-0 and Rate-1 subtrees are decided in one shot.
///
/// # Panics
/// If `llrs.len()` differs from the block length.
pub fn ssc_decode(code: &PolarCode, llrs: &[f64]) -> BitFrame {
    let tree = build_ssc_tree(code);
    SscDecoder::new(&tree).decode(llrs)
}

/// Outcome of a seeded Monte Carlo run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimulationReport {
    pub trials: u64,
    /// Frames where SC and SSC produced identical estimates.
    pub agree: u64,
    /// Frames where the SSC estimate differs from the transmitted word.
    pub frame_errors: u64,
    pub seed: u64,
}

impl SimulationReport {
    pub fn fer(&self) -> f64 {
        self.frame_errors as f64 / self.trials as f64
    }
}

fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Transmits random information words over `channel`, decodes each frame
/// with both SC and SSC, and counts agreements and SSC frame errors.
/// Trial `t` draws from its own stream of the root `seed`, so results do not
/// depend on the number of worker threads.
pub fn simulate(code: &PolarCode, channel: &BmsChannel, trials: u64, seed: u64) -> Result<SimulationReport> {
    if trials == 0 {
        return domain("at least one trial is required");
    }
    let tree = build_ssc_tree(code);
    let len = code.len();
    let (agree, frame_errors) = (0..trials)
        .into_par_iter()
        .map_init(
            || {
                (
                    ScDecoder::new(code),
                    SscDecoder::new(&tree),
                    vec![0u8; len],
                    vec![0u8; len],
                )
            },
            |(sc, ssc, u_sc, u_ssc), t| {
                let mut rng = trial_rng(seed, t);
                let info = random_bits(code.info_count(), &mut rng);
                let u = embed_info_bits(code, &info).expect("info length matches");
                let mut x = u.clone();
                polar_transform_in_place(&mut x);
                let llrs = channel.sample_llrs_with(&x, &mut rng);
                sc.decode_into(&llrs, u_sc);
                ssc.decode_into(&llrs, u_ssc);
                ((u_sc == u_ssc) as u64, (*u_ssc != u) as u64)
            },
        )
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    Ok(SimulationReport {
        trials,
        agree,
        frame_errors,
        seed,
    })
}

/// Frame error rate of SSC decoding.
pub fn monte_carlo_fer(code: &PolarCode, channel: &BmsChannel, trials: u64, seed: u64) -> Result<f64> {
    Ok(simulate(code, channel, trials, seed)?.fer())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{ChannelKind, ZPolicy};
    use crate::construct::build_code;

    fn fig2_code() -> PolarCode {
        PolarCode::with_frozen_indices(BmsChannel::bec(0.5).unwrap(), 3, 0.5, &[0, 1, 2, 4]).unwrap()
    }

    #[test]
    fn f_kernel_examples() {
        assert_eq!(f_kernel(0.0, 5.0), 0.0);
        for &x in &[-40.0, -3.0, -0.25, 0.7, 12.0, 200.0] {
            assert!((f_kernel(LLR_CAP, x) - x).abs() < 1e-6, "x={x}");
        }
        let direct = 2.0 * ((1.0f64).tanh() * (1.0f64).tanh()).atanh();
        assert!((f_kernel(2.0, 2.0) - direct).abs() < 1e-12);
        assert!((f_kernel(2.0, 2.0) - 1.325_002_747_357_864_3).abs() < 1e-12);
        // f(L, L) = L - ln 2 + O(e^-L).
        assert!((f_kernel(LLR_CAP, LLR_CAP) - (LLR_CAP - std::f64::consts::LN_2)).abs() < 1e-12);
        assert!((f_kernel(-LLR_CAP, LLR_CAP) + (LLR_CAP - std::f64::consts::LN_2)).abs() < 1e-12);
    }

    #[test]
    fn f_kernel_matches_tanh_form_in_the_safe_range() {
        for i in -40..=40 {
            for j in -40..=40 {
                let (a, b) = (i as f64 * 0.37, j as f64 * 0.29);
                let direct = 2.0 * ((a / 2.0).tanh() * (b / 2.0).tanh()).atanh();
                assert!((f_kernel(a, b) - direct).abs() < 1e-9, "a={a} b={b}");
            }
        }
    }

    #[test]
    fn f_kernel_signed_zero() {
        assert!(f_kernel(-0.0, 3.0).is_sign_negative());
        assert!(f_kernel(0.0, -3.0).is_sign_negative());
        assert!(f_kernel(-0.0, -3.0).is_sign_positive());
    }

    #[test]
    fn g_kernel_examples() {
        assert_eq!(g_kernel(1.0, 2.0, 0), 3.0);
        assert_eq!(g_kernel(1.0, 2.0, 1), -1.0);
        assert_eq!(g_kernel(0.0, 0.0, 1), 0.0);
        assert_eq!(g_kernel(LLR_CAP, LLR_CAP, 0), LLR_CAP);
    }

    #[test]
    fn encode_examples() {
        assert_eq!(encode(&[0, 1]).unwrap(), vec![1, 1]);
        assert_eq!(encode(&[0; 16]).unwrap(), vec![0; 16]);
        assert_eq!(encode(&[0, 0, 0, 1]).unwrap(), vec![1, 1, 1, 1]);
        assert_eq!(encode(&[1, 0, 0, 0]).unwrap(), vec![1, 0, 0, 0]);
        assert!(encode(&[0, 1, 1]).is_err());
        assert!(encode(&[0, 2]).is_err());
    }

    /// Generator matrix product computed row by row.
    fn encode_by_matrix(u: &[u8]) -> Vec<u8> {
        let n = u.len().trailing_zeros();
        let len = u.len();
        // Row i of F^{⊗n} has a one in column j iff the bits of j are a subset of
        // the bits of i, with F = [[1, 0], [1, 1]] and leaf 0 first.
        let mut x = vec![0u8; len];
        for (i, &ui) in u.iter().enumerate() {
            if ui == 1 {
                for (j, xj) in x.iter_mut().enumerate() {
                    if j & i == j {
                        *xj ^= 1;
                    }
                }
            }
        }
        let _ = n;
        x
    }

    #[test]
    fn encode_matches_generator_matrix() {
        for n in 1..=6u32 {
            let len = 1usize << n;
            for seed in 0..20u64 {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let u = random_bits(len, &mut rng);
                assert_eq!(encode(&u).unwrap(), encode_by_matrix(&u));
            }
        }
    }

    #[test]
    fn noiseless_decoding_recovers_every_message() {
        let ch = BmsChannel::bec(0.0).unwrap();
        for n in 1..=6u32 {
            let code = build_code(&BmsChannel::bec(0.5).unwrap(), n, 0.9, ZPolicy::ExactBec).unwrap();
            let k = code.info_count();
            let tree = build_ssc_tree(&code);
            let mut sc = ScDecoder::new(&code);
            let mut ssc = SscDecoder::new(&tree);
            for msg in 0u64..(1u64 << k.min(12)) {
                let info: Vec<u8> = (0..k).map(|b| ((msg >> (b % 64)) & 1) as u8).collect();
                let u = embed_info_bits(&code, &info).unwrap();
                let llrs = ch.sample_llrs(&encode(&u).unwrap(), msg);
                assert_eq!(sc.decode(&llrs), u);
                assert_eq!(ssc.decode(&llrs), u);
            }
        }
    }

    #[test]
    fn all_frozen_code_decodes_to_zero() {
        let code = PolarCode::with_frozen_indices(BmsChannel::bec(0.5).unwrap(), 4, 0.1, &(0..16).collect::<Vec<_>>())
            .unwrap();
        let llrs: Vec<f64> = (0..16).map(|i| if i % 3 == 0 { -4.0 } else { 1.5 }).collect();
        assert_eq!(sc_decode(&code, &llrs), vec![0; 16]);
        let tree = build_ssc_tree(&code);
        let mut out = vec![1; 16];
        let descents = SscDecoder::new(&tree).decode_into(&llrs, &mut out);
        assert_eq!(out, vec![0; 16]);
        assert_eq!(descents, 0);
    }

    /// Straight-line SC decoder for N = 8 written out over the factor graph
    /// with the plain `tanh` form of `f`.
    fn reference_sc8(llr: &[f64], frozen: &[bool; 8]) -> Vec<u8> {
        let f = |a: f64, b: f64| {
            let v = 2.0 * ((a / 2.0).tanh() * (b / 2.0).tanh()).atanh();
            if v.is_finite() {
                v
            } else {
                v.signum() * 1e300
            }
        };
        let g = |a: f64, b: f64, c: u8| if c == 0 { a + b } else { a - b };
        let h = |x: f64, i: usize| -> u8 {
            if frozen[i] {
                0
            } else {
                (x < 0.0 || (x == 0.0 && x.is_sign_negative())) as u8
            }
        };
        let mut u = vec![0u8; 8];
        // Level 2 (left half of the root).
        let a2: Vec<f64> = (0..4).map(|i| f(llr[i], llr[i + 4])).collect();
        let a1: Vec<f64> = (0..2).map(|i| f(a2[i], a2[i + 2])).collect();
        u[0] = h(f(a1[0], a1[1]), 0);
        u[1] = h(g(a1[1], a1[0], u[0]), 1);
        let b1 = [u[0] ^ u[1], u[1]];
        let a1r: Vec<f64> = (0..2).map(|i| g(a2[i + 2], a2[i], b1[i])).collect();
        u[2] = h(f(a1r[0], a1r[1]), 2);
        u[3] = h(g(a1r[1], a1r[0], u[2]), 3);
        let b1r = [u[2] ^ u[3], u[3]];
        let b2 = [b1[0] ^ b1r[0], b1[1] ^ b1r[1], b1r[0], b1r[1]];
        // Right half of the root.
        let a2r: Vec<f64> = (0..4).map(|i| g(llr[i + 4], llr[i], b2[i])).collect();
        let c1: Vec<f64> = (0..2).map(|i| f(a2r[i], a2r[i + 2])).collect();
        u[4] = h(f(c1[0], c1[1]), 4);
        u[5] = h(g(c1[1], c1[0], u[4]), 5);
        let d1 = [u[4] ^ u[5], u[5]];
        let c1r: Vec<f64> = (0..2).map(|i| g(a2r[i + 2], a2r[i], d1[i])).collect();
        u[6] = h(f(c1r[0], c1r[1]), 6);
        u[7] = h(g(c1r[1], c1r[0], u[6]), 7);
        u
    }

    #[test]
    fn fig2_code_matches_reference_decoder() {
        let code = fig2_code();
        let mut frozen = [false; 8];
        for i in [0, 1, 2, 4] {
            frozen[i] = true;
        }
        let awgn = BmsChannel::bawgnc(0.9).unwrap();
        let bec = BmsChannel::bec(0.5).unwrap();
        for seed in 0..500u64 {
            let mut rng = trial_rng(seed, 0);
            let info = random_bits(4, &mut rng);
            let x = encode(&embed_info_bits(&code, &info).unwrap()).unwrap();
            // Soft LLRs: no ties, so the reference and the kernels agree exactly on signs.
            let llrs = awgn.sample_llrs(&x, seed);
            assert_eq!(sc_decode(&code, &llrs), reference_sc8(&llrs, &frozen), "seed={seed}");
            assert_eq!(ssc_decode(&code, &llrs), sc_decode(&code, &llrs));
        }
        let x = encode(&embed_info_bits(&code, &[1, 0, 1, 1]).unwrap()).unwrap();
        let llrs = bec.sample_llrs(&x, 7);
        assert_eq!(sc_decode(&code, &llrs), reference_sc8(&llrs, &frozen));
        assert_eq!(ssc_decode(&code, &llrs), sc_decode(&code, &llrs));
    }

    #[test]
    fn ssc_equals_sc_on_bec_with_erasures() {
        let ch = BmsChannel::from_capacity(ChannelKind::Bec, 0.5).unwrap();
        let code = build_code(&ch, 10, 1e-3, ZPolicy::ExactBec).unwrap();
        let report = simulate(&code, &ch, 10_000, 11).unwrap();
        assert_eq!(report.agree, report.trials);
    }

    #[test]
    fn fer_edge_cases() {
        let noiseless = BmsChannel::bec(0.0).unwrap();
        let code = build_code(&BmsChannel::bec(0.5).unwrap(), 8, 0.1, ZPolicy::ExactBec).unwrap();
        assert_eq!(monte_carlo_fer(&code, &noiseless, 500, 3).unwrap(), 0.0);
        let frozen_all = PolarCode::with_frozen_indices(noiseless, 5, 0.1, &(0..32).collect::<Vec<_>>()).unwrap();
        let noisy = BmsChannel::bec(0.9).unwrap();
        assert_eq!(monte_carlo_fer(&frozen_all, &noisy, 500, 3).unwrap(), 0.0);
        assert!(simulate(&code, &noisy, 0, 1).is_err());
    }

    #[test]
    fn simulation_is_deterministic_across_thread_counts() {
        let ch = BmsChannel::from_capacity(ChannelKind::Bawgnc, 0.5).unwrap();
        let code = build_code(&ch, 8, 1e-2, ZPolicy::UpperBound).unwrap();
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| simulate(&code, &ch, 2_000, 99).unwrap())
        };
        let one = run(1);
        assert_eq!(one, run(4));
        assert_eq!(one, simulate(&code, &ch, 2_000, 99).unwrap());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn llr() -> impl Strategy<Value = f64> {
            prop_oneof![
                Just(0.0),
                Just(-0.0),
                Just(LLR_CAP),
                Just(-LLR_CAP),
                -LLR_CAP..LLR_CAP,
                -3.0f64..3.0,
            ]
        }

        proptest! {
            #[test]
            fn f_kernel_symmetry_and_bounds(a in llr(), b in llr()) {
                let v = f_kernel(a, b);
                prop_assert_eq!(v.to_bits(), f_kernel(b, a).to_bits());
                prop_assert_eq!(hard_decision(v), hard_decision(a) ^ hard_decision(b));
                prop_assert!(v.abs() <= a.abs().min(b.abs()));
                if a != 0.0 && b != 0.0 && v != 0.0 {
                    prop_assert_eq!(v.signum(), a.signum() * b.signum());
                }
            }

            #[test]
            fn g_kernel_is_linear(a1 in -50.0f64..50.0, a2 in -50.0f64..50.0, b in -50.0f64..50.0, c in 0u8..2) {
                let lhs = g_kernel(a1 + a2, b, c) - g_kernel(a1, b, c);
                prop_assert!((lhs - a2).abs() < 1e-9);
                let sign = if c == 0 { 1.0 } else { -1.0 };
                prop_assert!((g_kernel(a1, b + a2, c) - g_kernel(a1, b, c) - sign * a2).abs() < 1e-9);
            }

            #[test]
            fn ssc_equals_sc_bitwise(
                bits in proptest::collection::vec(any::<bool>(), 64),
                llrs in proptest::collection::vec(llr(), 64),
                n in 1u32..=6,
            ) {
                let len = 1usize << n;
                let frozen: crate::construct::FrozenSet = bits[..len].iter().collect();
                let code = PolarCode::from_frozen(BmsChannel::bec(0.5).unwrap(), n, 0.5, frozen).unwrap();
                prop_assert_eq!(ssc_decode(&code, &llrs[..len]), sc_decode(&code, &llrs[..len]));
            }

            #[test]
            fn transform_is_an_involution(bits in proptest::collection::vec(0u8..2, 128)) {
                let mut x = bits.clone();
                polar_transform_in_place(&mut x);
                polar_transform_in_place(&mut x);
                prop_assert_eq!(x, bits);
            }
        }
    }
}
