//! Binary-input AWGN capacity, the reciprocal energy function, and the
//! reliability-propagation threshold search for protographs.
//!
//! Everything here works in the linear SNR parameter `s`: the channel LLR of
//! a transmitted variable is Gaussian with mean `2s` and variance `4s`, and
//! `Eb/N0 = s / (2 R)` at rate `R`. The capacity of that channel is
//!
//! ```text
//!   C(s) = 1 - integral log2(1 + exp(-(2 sqrt(2 s) u + 2 s))) exp(-u^2)/sqrt(pi) du
//! ```
//!
//! evaluated by fixed Gauss-Hermite quadrature. Reliabilities combine
//! additively at variable nodes and through the self-inverse reciprocal
//! energy function `R(s) = C^-1(1 - C(s))` at check nodes. A protograph
//! passes at channel SNR `s_chl` when the smallest per-variable posterior
//! reliability exceeds a stopping threshold after iteration; bisection over
//! `s_chl` locates the decoding threshold.

use crate::error::{Error, Result};
use crate::protograph::Protomatrix;
use crate::rational::Rational;
use std::collections::BTreeSet;
use std::sync::OnceLock;

/// Reliabilities are clamped to this value where the capacity table runs out
/// of resolution (`C^-1` near 1).
pub const S_MAX: f64 = 1e4;

const GRID_LOG_LO: f64 = -6.0;
const GRID_LOG_HI: f64 = 4.0;
const GRID_KNOTS: usize = 20_000;
const QUADRATURE_ORDER: usize = 64;

/// Tabulated BI-AWGN capacity with linear interpolation.
///
/// The table stores the capacity gap `g(s) = 1 - C(s)`, which stays
/// strictly positive and strictly decreasing far past the point where
/// `C(s)` rounds to 1 in f64; the inverse lookup is built on the strictly
/// decreasing prefix of the gap samples.
pub struct CapacityTable {
    /// Log-spaced knots, `grid[i] = 10^(lo + i*step)`.
    grid: Vec<f64>,
    gap: Vec<f64>,
    log_lo: f64,
    inv_step: f64,
    /// Strictly decreasing (s, gap) pairs for inversion, starting at (0, 1).
    inv_s: Vec<f64>,
    inv_gap: Vec<f64>,
    /// Measured interpolation error bound (max midpoint deviation).
    interp_err: f64,
}

impl CapacityTable {
    pub fn new() -> Self {
        let (nodes, weights) = gauss_hermite(QUADRATURE_ORDER);
        let step = (GRID_LOG_HI - GRID_LOG_LO) / (GRID_KNOTS - 1) as f64;
        let grid: Vec<f64> = (0..GRID_KNOTS)
            .map(|i| 10f64.powf(GRID_LOG_LO + step * i as f64))
            .collect();
        let gap: Vec<f64> = grid
            .iter()
            .map(|&s| capacity_gap_quadrature(s, &nodes, &weights))
            .collect();

        // Strictly decreasing prefix for the inverse, anchored at s = 0.
        let mut inv_s = vec![0.0];
        let mut inv_gap = vec![1.0];
        for i in 0..GRID_KNOTS {
            if gap[i] > 0.0 && gap[i] < *inv_gap.last().unwrap() {
                inv_s.push(grid[i]);
                inv_gap.push(gap[i]);
            }
        }

        let mut table = CapacityTable {
            grid,
            gap,
            log_lo: GRID_LOG_LO,
            inv_step: 1.0 / step,
            inv_s,
            inv_gap,
            interp_err: 0.0,
        };
        // Record the interpolation error at segment midpoints on a sample of
        // the grid, against direct quadrature.
        let mut err: f64 = 0.0;
        for i in (0..GRID_KNOTS - 1).step_by(97) {
            let s_mid = 0.5 * (table.grid[i] + table.grid[i + 1]);
            let exact = capacity_gap_quadrature(s_mid, &nodes, &weights);
            err = err.max((table.gap_at(s_mid) - exact).abs());
        }
        table.interp_err = err;
        table
    }

    /// Shared default table, built on first use.
    pub fn standard() -> &'static CapacityTable {
        static TABLE: OnceLock<CapacityTable> = OnceLock::new();
        TABLE.get_or_init(CapacityTable::new)
    }

    pub fn interpolation_error(&self) -> f64 {
        self.interp_err
    }

    /// Capacity gap `1 - C(s)` by linear interpolation; clamps outside the
    /// grid (gap 1 at s = 0, gap 0 past the last resolvable knot).
    #[inline]
    pub fn gap_at(&self, s: f64) -> f64 {
        let first = self.grid[0];
        if s <= first {
            if s <= 0.0 {
                return 1.0;
            }
            // segment from the (0, 1) anchor to the first knot
            let t = s / first;
            return 1.0 + t * (self.gap[0] - 1.0);
        }
        let last = *self.grid.last().unwrap();
        if s >= last {
            return *self.gap.last().unwrap();
        }
        let pos = (s.log10() - self.log_lo) * self.inv_step;
        let mut i = pos as usize;
        if i >= GRID_KNOTS - 1 {
            i = GRID_KNOTS - 2;
        }
        // log rounding can land one knot off
        if s < self.grid[i] {
            i -= 1;
        } else if s >= self.grid[i + 1] {
            i += 1;
        }
        let t = (s - self.grid[i]) / (self.grid[i + 1] - self.grid[i]);
        self.gap[i] + t * (self.gap[i + 1] - self.gap[i])
    }

    /// Inverse of the gap: smallest `s` with `gap(s) = u`, clamped to
    /// `[0, S_MAX]`.
    #[inline]
    pub fn gap_inverse(&self, u: f64) -> f64 {
        if u >= 1.0 {
            return 0.0;
        }
        let n = self.inv_gap.len();
        if u <= self.inv_gap[n - 1] {
            return S_MAX;
        }
        // binary search on the strictly decreasing gap array
        let mut lo = 0usize;
        let mut hi = n - 1;
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if self.inv_gap[mid] > u {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let t = (self.inv_gap[lo] - u) / (self.inv_gap[lo] - self.inv_gap[hi]);
        (self.inv_s[lo] + t * (self.inv_s[hi] - self.inv_s[lo])).min(S_MAX)
    }

    /// BI-AWGN capacity `C(s)` in bits.
    pub fn capacity(&self, s: f64) -> Result<f64> {
        if s < 0.0 || !s.is_finite() {
            return Err(Error::NegativeSnr(s));
        }
        Ok(1.0 - self.gap_at(s))
    }

    /// Reciprocal energy `R(s) = C^-1(1 - C(s))`, clamped to `[0, S_MAX]`.
    #[inline]
    pub fn reciprocal_energy(&self, s: f64) -> f64 {
        let s = s.max(0.0);
        self.gap_inverse(1.0 - self.gap_at(s))
    }

    /// Eb/N0 in dB at which `C(s) = rate`.
    pub fn shannon_limit_ebn0(&self, rate: Rational) -> Result<f64> {
        let r = rate.value();
        if !(r > 0.0 && r < 1.0) {
            return Err(Error::RateOutOfRange(rate.to_string()));
        }
        let s = self.gap_inverse(1.0 - r);
        Ok(ebn0_db_from_s(s, r))
    }
}

impl Default for CapacityTable {
    fn default() -> Self {
        Self::new()
    }
}

/// `10 log10(s / (2 R))`.
#[inline]
pub fn ebn0_db_from_s(s: f64, rate: f64) -> f64 {
    10.0 * (s / (2.0 * rate)).log10()
}

/// Inverse of [`ebn0_db_from_s`].
#[inline]
pub fn s_from_ebn0_db(ebn0_db: f64, rate: f64) -> f64 {
    2.0 * rate * 10f64.powf(ebn0_db / 10.0)
}

fn capacity_gap_quadrature(s: f64, nodes: &[f64], weights: &[f64]) -> f64 {
    let a = 2.0 * (2.0 * s).sqrt();
    let b = 2.0 * s;
    let inv_sqrt_pi = 1.0 / std::f64::consts::PI.sqrt();
    let ln2 = std::f64::consts::LN_2;
    let mut acc = 0.0;
    for (&u, &w) in nodes.iter().zip(weights) {
        let z = a * u + b;
        // log2(1 + exp(-z)) computed stably for all signs of z
        let softplus = if -z > 35.0 { -z } else { (-z).exp().ln_1p() };
        acc += w * softplus;
    }
    acc * inv_sqrt_pi / ln2
}

/// Gauss-Hermite nodes and weights for weight function `exp(-x^2)`,
/// computed from the orthonormal recurrence with Newton refinement.
pub fn gauss_hermite(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 2);
    // Orthonormal Hermite values p_0..p_n at x.
    let eval = |x: f64| -> (f64, f64) {
        let mut pkm1 = std::f64::consts::PI.powf(-0.25);
        let mut pk = std::f64::consts::SQRT_2 * x * pkm1;
        for k in 1..n {
            let pkp1 = x * (2.0 / (k as f64 + 1.0)).sqrt() * pk
                - (k as f64 / (k as f64 + 1.0)).sqrt() * pkm1;
            pkm1 = pk;
            pk = pkp1;
        }
        // p_n and its derivative sqrt(2n) p_{n-1}
        (pk, (2.0 * n as f64).sqrt() * pkm1)
    };

    // Bracket roots by scanning sign changes, then polish with Newton.
    let bound = (4.0 * n as f64 + 2.0).sqrt();
    let scan = 40 * n;
    let mut roots = Vec::with_capacity(n);
    let mut prev_x = -bound;
    let mut prev_v = eval(prev_x).0;
    for i in 1..=scan {
        let x = -bound + 2.0 * bound * i as f64 / scan as f64;
        let v = eval(x).0;
        if prev_v == 0.0 {
            roots.push(prev_x);
        } else if prev_v.signum() != v.signum() {
            let mut r = 0.5 * (prev_x + x);
            for _ in 0..60 {
                let (p, dp) = eval(r);
                let step = p / dp;
                r -= step;
                if step.abs() < 1e-15 * (1.0 + r.abs()) {
                    break;
                }
            }
            roots.push(r);
        }
        prev_x = x;
        prev_v = v;
    }
    assert_eq!(roots.len(), n, "found {} of {} quadrature nodes", roots.len(), n);
    roots.sort_by(|a, b| a.partial_cmp(b).unwrap());

    // Christoffel weights: w_i = 1 / sum_{k<n} p_k(x_i)^2.
    let weights = roots
        .iter()
        .map(|&x| {
            let mut sum = 0.0;
            let mut pkm1 = std::f64::consts::PI.powf(-0.25);
            let mut pk = std::f64::consts::SQRT_2 * x * pkm1;
            sum += pkm1 * pkm1;
            for k in 1..n {
                sum += pk * pk;
                let pkp1 = x * (2.0 / (k as f64 + 1.0)).sqrt() * pk
                    - (k as f64 / (k as f64 + 1.0)).sqrt() * pkm1;
                pkm1 = pk;
                pk = pkp1;
            }
            1.0 / sum
        })
        .collect();
    (roots, weights)
}

/// Iteration controls for a single reliability-propagation pass.
#[derive(Clone, Copy, Debug)]
pub struct RcaOptions {
    /// Maximum number of iterations (`N`).
    pub max_iters: usize,
    /// Stopping threshold on the minimum posterior reliability (`T`).
    pub stop_threshold: f64,
}

impl Default for RcaOptions {
    fn default() -> Self {
        RcaOptions {
            max_iters: 1000,
            stop_threshold: 100.0,
        }
    }
}

/// Controls for the bisection threshold search.
#[derive(Clone, Copy, Debug)]
pub struct ThresholdOptions {
    pub rca: RcaOptions,
    /// Bisection exits when the bracket is at most this wide (dB).
    pub precision_db: f64,
    /// Initial bracket on `10 log10 s`, auto-expanded as needed.
    pub bracket_db: (f64, f64),
}

impl Default for ThresholdOptions {
    fn default() -> Self {
        ThresholdOptions {
            rca: RcaOptions::default(),
            precision_db: 0.002,
            bracket_db: (-20.0, 13.0),
        }
    }
}

/// Result of a threshold search.
#[derive(Clone, Copy, Debug)]
pub struct ThresholdResult {
    /// Linear SNR threshold.
    pub s_th: f64,
    /// Threshold as Eb/N0 in dB at `rate`.
    pub ebn0_db: f64,
    pub rate: Rational,
    /// Bisection steps performed.
    pub iterations_used: usize,
    pub precision_db: f64,
}

/// Protograph expanded to an edge list for message passing. Parallel edges
/// become distinct entries; extrinsic sums exclude exactly one edge, so a
/// parallel partner's message is included.
struct EdgeGraph {
    /// Per-edge flag: edge touches a punctured variable.
    edge_punct: Vec<bool>,
    /// Per-check contiguous edge ranges (edges are emitted check-major).
    check_offsets: Vec<u32>,
    /// Per-variable edge index lists.
    var_edges: Vec<u32>,
    var_offsets: Vec<u32>,
    var_punct: Vec<bool>,
}

impl EdgeGraph {
    fn build(proto: &Protomatrix, punctured: &BTreeSet<usize>) -> Self {
        let mut edge_var = Vec::with_capacity(proto.edge_count());
        let mut check_offsets = Vec::with_capacity(proto.rows() + 1);
        check_offsets.push(0);
        for r in 0..proto.rows() {
            for c in 0..proto.cols() {
                for _ in 0..proto.entry(r, c) {
                    edge_var.push(c as u32);
                }
            }
            check_offsets.push(edge_var.len() as u32);
        }
        let n_vars = proto.cols();
        let mut var_offsets = vec![0u32; n_vars + 1];
        for &v in &edge_var {
            var_offsets[v as usize + 1] += 1;
        }
        for v in 0..n_vars {
            var_offsets[v + 1] += var_offsets[v];
        }
        let mut fill = var_offsets.clone();
        let mut var_edges = vec![0u32; edge_var.len()];
        for (e, &v) in edge_var.iter().enumerate() {
            var_edges[fill[v as usize] as usize] = e as u32;
            fill[v as usize] += 1;
        }
        let var_punct: Vec<bool> = (0..n_vars).map(|v| punctured.contains(&v)).collect();
        let edge_punct = edge_var.iter().map(|&v| var_punct[v as usize]).collect();
        EdgeGraph {
            edge_punct,
            check_offsets,
            var_edges,
            var_offsets,
            var_punct,
        }
    }

    fn n_checks(&self) -> usize {
        self.check_offsets.len() - 1
    }

    fn n_vars(&self) -> usize {
        self.var_offsets.len() - 1
    }

    fn n_edges(&self) -> usize {
        self.edge_punct.len()
    }
}

/// One reliability-propagation pass: returns whether the minimum posterior
/// reliability exceeds the stopping threshold within the iteration budget.
///
/// Iteration stops early once the minimum posterior passes the threshold or
/// reaches a numerical fixed point (further iterations cannot change the
/// outcome).
pub fn rca_pass(
    table: &CapacityTable,
    proto: &Protomatrix,
    punctured: &BTreeSet<usize>,
    s_chl: f64,
    opts: &RcaOptions,
) -> bool {
    let graph = EdgeGraph::build(proto, punctured);
    rca_pass_on(table, &graph, s_chl, opts)
}

fn rca_pass_on(table: &CapacityTable, graph: &EdgeGraph, s_chl: f64, opts: &RcaOptions) -> bool {
    let ne = graph.n_edges();
    let s0_of = |punct: bool| if punct { 0.0 } else { s_chl };
    if ne == 0 {
        // Degenerate graphs: posterior is the channel reliability alone.
        let min = graph
            .var_punct
            .iter()
            .map(|&p| s0_of(p))
            .fold(f64::INFINITY, f64::min);
        return min > opts.stop_threshold;
    }

    let mut s_e: Vec<f64> = graph.edge_punct.iter().map(|&p| s0_of(p)).collect();
    let mut r_of_s = vec![0.0f64; ne];
    let mut r_of_r = vec![0.0f64; ne];
    let mut prev_min = f64::NEG_INFINITY;

    for _ in 0..opts.max_iters {
        for e in 0..ne {
            r_of_s[e] = table.reciprocal_energy(s_e[e]);
        }
        // check update: the outgoing message in the reciprocal domain is the
        // sum of R(s) over the check's other edges; fold straight back
        // through R into the reliability domain
        for c in 0..graph.n_checks() {
            let lo = graph.check_offsets[c] as usize;
            let hi = graph.check_offsets[c + 1] as usize;
            let total: f64 = r_of_s[lo..hi].iter().sum();
            for e in lo..hi {
                r_of_r[e] = table.reciprocal_energy(total - r_of_s[e]);
            }
        }
        // variable update and posterior scan
        let mut min_posterior = f64::INFINITY;
        for v in 0..graph.n_vars() {
            let lo = graph.var_offsets[v] as usize;
            let hi = graph.var_offsets[v + 1] as usize;
            let mut total = 0.0;
            for &e in &graph.var_edges[lo..hi] {
                total += r_of_r[e as usize];
            }
            let s0 = s0_of(graph.var_punct[v]);
            for &e in &graph.var_edges[lo..hi] {
                let e = e as usize;
                s_e[e] = (s0_of(graph.edge_punct[e]) + total - r_of_r[e]).min(S_MAX);
            }
            min_posterior = min_posterior.min(s0 + total);
        }
        if min_posterior > opts.stop_threshold {
            return true;
        }
        if (min_posterior - prev_min).abs() <= 1e-12 * min_posterior.max(1.0) {
            return false; // numerical fixed point below the threshold
        }
        prev_min = min_posterior;
    }
    false
}

/// Bisection threshold search over the channel SNR (in dB), converted to
/// Eb/N0 at the protograph's design rate
/// `(cols - rows) / (cols - |punctured|)`.
pub fn threshold(
    table: &CapacityTable,
    proto: &Protomatrix,
    punctured: &BTreeSet<usize>,
    opts: &ThresholdOptions,
) -> Result<ThresholdResult> {
    let k = proto.cols() as i64 - proto.rows() as i64;
    let n_tx = proto.cols() as i64 - punctured.len() as i64;
    if k <= 0 || n_tx <= k {
        return Err(Error::RateOutOfRange(format!("{k}/{n_tx}")));
    }
    let rate = Rational::new(k as u64, n_tx as u64);

    let graph = EdgeGraph::build(proto, punctured);
    let pass = |s_db: f64| rca_pass_on(table, &graph, 10f64.powf(s_db / 10.0), &opts.rca);

    let (mut lo, mut hi) = opts.bracket_db;
    let mut steps = 0usize;
    while !pass(hi) {
        hi += 3.0;
        steps += 1;
        if hi > 10.0 * S_MAX.log10() {
            return Err(Error::BracketFailure(format!(
                "no passing SNR at or below {hi:.1} dB"
            )));
        }
    }
    while pass(lo) {
        lo -= 3.0;
        steps += 1;
        if lo < -60.0 {
            return Err(Error::BracketFailure(format!(
                "still passing at {lo:.1} dB; no failing lower bracket"
            )));
        }
    }
    while hi - lo > opts.precision_db {
        let mid = 0.5 * (lo + hi);
        if pass(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
        steps += 1;
    }
    let s_db = 0.5 * (lo + hi);
    let s_th = 10f64.powf(s_db / 10.0);
    Ok(ThresholdResult {
        s_th,
        ebn0_db: ebn0_db_from_s(s_th, rate.value()),
        rate,
        iterations_used: steps,
        precision_db: opts.precision_db,
    })
}
