//! Decoding latency under a limited number of processing elements.
//!
//! Each edge entering a node at level `s` of the decoding tree carries a
//! decoding weight of `ceil(2^s / P)` time steps: the `2^s` LLR computations
//! for that node spread over `P` processing elements. The latency of a decoder
//! is the sum of the weights over the edges of its (possibly pruned) tree.
//! Hard decisions and partial-sum propagation are free.

use crate::channel::{z_minus, z_plus, ZPolicy};
use crate::construct::PolarCode;
use crate::error::{domain, Result};

/// Time steps charged to an edge entering a level-`s` node with `p` PEs.
///
/// # Panics
/// If `p` is zero.
pub fn decoding_weight(s: u32, p: u64) -> u64 {
    assert!(p >= 1, "number of processing elements must be positive");
    (1u64 << s).div_ceil(p)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeKind {
    /// Every leaf below is frozen.
    Rate0,
    /// Every leaf below carries information.
    Rate1,
    Mixed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SscNode {
    pub level: u32,
    /// Index of the first leaf covered by this node.
    pub offset: usize,
    pub kind: NodeKind,
    /// Indices of the left and right children, present only for mixed nodes.
    pub children: Option<[usize; 2]>,
}

impl SscNode {
    pub fn leaf_range(&self) -> std::ops::Range<usize> {
        self.offset..self.offset + (1usize << self.level)
    }
}

/// The SC decoding tree with every descendant of a Rate-0 or Rate-1 node
/// removed. Nodes are stored in pre-order; the root is node 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SscTree {
    n: u32,
    nodes: Vec<SscNode>,
    /// `edges_by_level[s]` counts edges entering level-`s` nodes.
    edges_by_level: Vec<u64>,
}

impl SscTree {
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn root(&self) -> &SscNode {
        &self.nodes[0]
    }

    pub fn nodes(&self) -> &[SscNode] {
        &self.nodes
    }

    pub fn node(&self, idx: usize) -> &SscNode {
        &self.nodes[idx]
    }

    pub fn edge_count(&self) -> u64 {
        self.edges_by_level.iter().sum()
    }

    pub fn edges_by_level(&self) -> &[u64] {
        &self.edges_by_level
    }

    /// Deepest level reached by any edge, or `None` for a single-node tree.
    pub fn max_edge_level(&self) -> Option<u32> {
        self.edges_by_level.iter().rposition(|&c| c > 0).map(|s| s as u32)
    }

    /// Bhattacharyya parameter of the synthetic channel at every node,
    /// indexed like [`SscTree::nodes`].
    pub fn node_bhattacharyya(&self, z0: f64, policy: ZPolicy) -> Vec<f64> {
        let mut out = vec![0.0; self.nodes.len()];
        let mut stack = vec![(0usize, z0)];
        while let Some((idx, z)) = stack.pop() {
            out[idx] = z;
            if let Some([l, r]) = self.nodes[idx].children {
                stack.push((l, z_minus(z, policy)));
                stack.push((r, z_plus(z)));
            }
        }
        out
    }
}

fn classify(frozen: &crate::construct::FrozenSet, offset: usize, level: u32) -> NodeKind {
    let range = &frozen[offset..offset + (1usize << level)];
    if range.all() {
        NodeKind::Rate0
    } else if range.not_any() {
        NodeKind::Rate1
    } else {
        NodeKind::Mixed
    }
}

/// Builds the pruned decoding tree of `code` in one depth-first pass.
pub fn build_ssc_tree(code: &PolarCode) -> SscTree {
    fn visit(
        frozen: &crate::construct::FrozenSet,
        offset: usize,
        level: u32,
        nodes: &mut Vec<SscNode>,
        edges: &mut [u64],
    ) -> usize {
        let kind = classify(frozen, offset, level);
        let idx = nodes.len();
        nodes.push(SscNode {
            level,
            offset,
            kind,
            children: None,
        });
        if kind == NodeKind::Mixed {
            let half = 1usize << (level - 1);
            edges[level as usize - 1] += 2;
            let l = visit(frozen, offset, level - 1, nodes, edges);
            let r = visit(frozen, offset + half, level - 1, nodes, edges);
            nodes[idx].children = Some([l, r]);
        }
        idx
    }
    let n = code.n();
    let mut nodes = Vec::new();
    let mut edges = vec![0u64; n as usize];
    visit(code.frozen(), 0, n, &mut nodes, &mut edges);
    SscTree {
        n,
        nodes,
        edges_by_level: edges,
    }
}

/// Edge counts per level of the pruned tree, without storing the nodes.
pub fn ssc_edge_histogram(code: &PolarCode) -> Vec<u64> {
    fn visit(frozen: &crate::construct::FrozenSet, offset: usize, level: u32, edges: &mut [u64]) {
        if classify(frozen, offset, level) == NodeKind::Mixed {
            let half = 1usize << (level - 1);
            edges[level as usize - 1] += 2;
            visit(frozen, offset, level - 1, edges);
            visit(frozen, offset + half, level - 1, edges);
        }
    }
    let mut edges = vec![0u64; code.n() as usize];
    visit(code.frozen(), 0, code.n(), &mut edges);
    edges
}

/// Latency from a per-level edge histogram.
pub fn latency_from_histogram(edges_by_level: &[u64], p: u64) -> u64 {
    edges_by_level
        .iter()
        .enumerate()
        .map(|(s, &count)| count * decoding_weight(s as u32, p))
        .sum()
}

/// SSC latency with `p` processing elements.
pub fn ssc_latency(tree: &SscTree, p: u64) -> u64 {
    latency_from_histogram(&tree.edges_by_level, p)
}

/// SC latency: the weight of the complete tree,
/// `sum_{s=0}^{n-1} 2^{n-s} ceil(2^s / p)`.
pub fn sc_latency_tree(n: u32, p: u64) -> u64 {
    (0..n).map(|s| (1u64 << (n - s)) * decoding_weight(s, p)).sum()
}

/// `2N + (N/P) log2(N / (4P))`, defined for powers of two with `1 <= P <= N/2`.
pub fn sc_latency_closed_form(block_len: u64, p: u64) -> Result<u64> {
    if !block_len.is_power_of_two() || !p.is_power_of_two() {
        return domain(format!("closed form needs powers of two, got N={block_len} P={p}"));
    }
    if block_len < 2 || p > block_len / 2 {
        return domain(format!("closed form needs 1 <= P <= N/2, got N={block_len} P={p}"));
    }
    let log_n = block_len.trailing_zeros() as i64;
    let log_p = p.trailing_zeros() as i64;
    let value = 2 * block_len as i64 + (block_len / p) as i64 * (log_n - log_p - 2);
    Ok(value as u64)
}

/// `c N^{1-1/mu} + (2 + eps) (N/P) log2 log2 (N/P)`.
///
/// The double logarithm must be defined and non-negative, so `N/P >= 2`.
pub fn theorem1_bound(block_len: f64, p: f64, mu: f64, c: f64, eps: f64) -> Result<f64> {
    if !(block_len > 0.0 && p > 0.0) {
        return domain("N and P must be positive");
    }
    let ratio = block_len / p;
    if !(ratio >= 2.0) {
        return domain(format!("log2 log2 (N/P) is undefined for N/P = {ratio}"));
    }
    if !(mu > 1.0) {
        return domain(format!("scaling exponent {mu} must exceed 1"));
    }
    if c < 0.0 || eps < 0.0 {
        return domain("c and eps must be non-negative");
    }
    Ok(c * block_len.powf(1.0 - 1.0 / mu) + (2.0 + eps) * ratio * ratio.log2().log2())
}

/// Leading term of the fully-serial latency, `2 N log2 log2 N`.
pub fn serial_corollary(block_len: f64) -> Result<f64> {
    if !(block_len >= 2.0) {
        return domain("N must be at least 2");
    }
    Ok(2.0 * block_len * block_len.log2().log2())
}

/// The bound evaluated at `P = N^{1/mu}`.
pub fn bound_at_inverse_mu(block_len: f64, mu: f64, c: f64, eps: f64) -> Result<f64> {
    theorem1_bound(block_len, block_len.powf(1.0 / mu), mu, c, eps)
}

/// Smallest `P` in `[1, N/2]` whose SSC latency is within `factor` of the
/// fully-parallel latency. Uses binary search; latency is non-increasing in `P`.
pub fn min_p_within_factor(tree: &SscTree, factor: f64) -> Result<u64> {
    min_p_from_histogram(&tree.edges_by_level, factor)
}

/// [`min_p_within_factor`] over a per-level edge histogram of an `n = len` tree.
pub fn min_p_from_histogram(edges_by_level: &[u64], factor: f64) -> Result<u64> {
    if !(factor >= 1.0) {
        return domain(format!("factor {factor} must be at least 1"));
    }
    let n = edges_by_level.len() as u32;
    let half = if n == 0 { 1 } else { 1u64 << (n - 1) };
    let target = factor * latency_from_histogram(edges_by_level, half) as f64;
    let (mut lo, mut hi) = (1u64, half);
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if latency_from_histogram(edges_by_level, mid) as f64 <= target {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Ok(lo)
}

/// Latencies of one code at one value of `P`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatencyReport {
    pub n: u32,
    pub block_len: u64,
    pub p: u64,
    pub sc_tree: u64,
    /// Closed-form SC latency, when `P` is a power of two not exceeding `N/2`.
    pub sc_closed: Option<u64>,
    pub ssc: u64,
    pub normalized: f64,
}

impl LatencyReport {
    pub fn new(tree: &SscTree, p: u64) -> Self {
        let n = tree.n();
        let block_len = 1u64 << n;
        let ssc = ssc_latency(tree, p);
        Self {
            n,
            block_len,
            p,
            sc_tree: sc_latency_tree(n, p),
            sc_closed: sc_latency_closed_form(block_len, p).ok(),
            ssc,
            normalized: ssc as f64 / block_len as f64,
        }
    }
}
