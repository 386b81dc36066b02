//! Girth and short-cycle census of Tanner graphs, with a block-level
//! alternating-shift-sum scan for quasi-cyclic matrices as an independent
//! route to the same counts.

use crate::qc::{Expanded, QcMatrix};
use serde::Serialize;
use std::collections::BTreeMap;

/// Shortest-cycle length and exact cycle counts up to a cap. A graph with
/// no cycle at all reports `girth: None`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GirthReport {
    pub girth: Option<u32>,
    /// Exact number of simple cycles per length, for even lengths up to the
    /// requested cap.
    pub counts: BTreeMap<u32, u64>,
}

/// Exact girth via collision-bounded BFS from every variable node.
pub fn girth(h: &Expanded) -> Option<u32> {
    girth_with_var_roots(h, 0..h.n_vars)
}

/// Exact girth of a lifted matrix, using one representative per variable
/// block (the circulant automorphism maps any cycle onto one through a
/// representative).
pub fn girth_qc(qc: &QcMatrix) -> Option<u32> {
    let h = qc.expand();
    let z = qc.z() as usize;
    girth_with_var_roots(&h, (0..qc.block_cols()).map(|c| c * z))
}

fn girth_with_var_roots(h: &Expanded, roots: impl IntoIterator<Item = usize>) -> Option<u32> {
    let n = h.n_vars + h.n_checks;
    let mut dist = vec![u32::MAX; n];
    let mut parent = vec![u32::MAX; n];
    let mut stamp = vec![0u32; n];
    let mut epoch = 0u32;
    let mut best = u32::MAX;
    let mut queue = std::collections::VecDeque::new();

    for root in roots {
        epoch += 1;
        queue.clear();
        dist[root] = 0;
        parent[root] = u32::MAX;
        stamp[root] = epoch;
        queue.push_back(root as u32);
        while let Some(u) = queue.pop_front() {
            let u = u as usize;
            if best != u32::MAX && 2 * dist[u] + 2 > best {
                break;
            }
            let neighbors: &[u32] = if u < h.n_vars {
                &h.var_adj[u]
            } else {
                &h.chk_adj[u - h.n_vars]
            };
            for &nb in neighbors {
                let v = if u < h.n_vars {
                    h.n_vars + nb as usize
                } else {
                    nb as usize
                };
                if stamp[v] != epoch {
                    stamp[v] = epoch;
                    dist[v] = dist[u] + 1;
                    parent[v] = u as u32;
                    queue.push_back(v as u32);
                } else if parent[u] != v as u32 {
                    best = best.min(dist[u] + dist[v] + 1);
                }
            }
        }
    }
    (best != u32::MAX).then_some(best)
}

/// Exact simple-cycle counts up to `max_len` by anchored depth-first
/// search: each cycle is enumerated once, anchored at its smallest variable
/// node with a fixed orientation. Exponential in `max_len`; intended for
/// small and mid-sized graphs.
pub fn cycle_census(h: &Expanded, max_len: u32) -> GirthReport {
    assert!(max_len >= 4 && max_len % 2 == 0, "even cap of at least 4");
    let mut counts: BTreeMap<u32, u64> = BTreeMap::new();
    let max_depth = max_len as usize; // path length in edges
    let mut var_used = vec![false; h.n_vars];
    let mut chk_used = vec![false; h.n_checks];

    // DFS over alternating paths anchor -> check -> var -> ... -> check -> anchor.
    // Only variables with id > anchor may appear inside the path; the first
    // check id must be smaller than the closing check id to fix orientation.
    struct Dfs<'a> {
        h: &'a Expanded,
        anchor: usize,
        first_chk: usize,
        max_depth: usize,
        var_used: &'a mut [bool],
        chk_used: &'a mut [bool],
        counts: &'a mut BTreeMap<u32, u64>,
    }
    impl Dfs<'_> {
        /// `node` is a variable (depth even, counted in edges from anchor).
        fn from_var(&mut self, var: usize, depth: usize) {
            for &c in &self.h.var_adj[var] {
                let c = c as usize;
                if self.chk_used[c] {
                    continue;
                }
                // closing edge back to the anchor?
                if depth + 2 <= self.max_depth {
                    if c > self.first_chk
                        && self
                            .h
                            .chk_adj[c]
                            .binary_search(&(self.anchor as u32))
                            .is_ok()
                        && var != self.anchor
                    {
                        *self.counts.entry(depth as u32 + 2).or_insert(0) += 1;
                    }
                }
                if depth + 2 < self.max_depth {
                    self.chk_used[c] = true;
                    for &v in &self.h.chk_adj[c] {
                        let v = v as usize;
                        if v <= self.anchor || self.var_used[v] {
                            continue;
                        }
                        self.var_used[v] = true;
                        self.from_var(v, depth + 2);
                        self.var_used[v] = false;
                    }
                    self.chk_used[c] = false;
                }
            }
        }
    }

    for anchor in 0..h.n_vars {
        for &c0 in &h.var_adj[anchor] {
            let c0 = c0 as usize;
            chk_used[c0] = true;
            for &v in &h.chk_adj[c0] {
                let v = v as usize;
                if v <= anchor {
                    continue;
                }
                var_used[v] = true;
                let mut dfs = Dfs {
                    h,
                    anchor,
                    first_chk: c0,
                    max_depth,
                    var_used: &mut var_used,
                    chk_used: &mut chk_used,
                    counts: &mut counts,
                };
                dfs.from_var(v, 2);
                var_used[v] = false;
            }
            chk_used[c0] = false;
        }
    }

    GirthReport {
        girth: girth(h),
        counts,
    }
}

/// Number of 4-cycles via common-neighbor pairs; cheap on any size. A check
/// pair shared by `k` variables closes `k (k - 1) / 2` 4-cycles.
pub fn four_cycle_count(h: &Expanded) -> u64 {
    let mut pair_counts: std::collections::HashMap<(u32, u32), u64> =
        std::collections::HashMap::new();
    for adj in &h.var_adj {
        for (i, &a) in adj.iter().enumerate() {
            for &b in &adj[i + 1..] {
                *pair_counts.entry((a.min(b), a.max(b))).or_insert(0) += 1;
            }
        }
    }
    pair_counts.into_values().map(|k| k * (k - 1) / 2).sum()
}

/// Exact cycle counts of a lifted matrix from the block-level description:
/// closed backtrackless walks over cells with alternating shift sums that
/// vanish mod z lift to simple cycles; each walk class of length `2L`
/// accounts for `z / 2L` of them.
pub fn qc_block_census(qc: &QcMatrix, max_len: u32) -> BTreeMap<u32, u64> {
    assert!(max_len >= 4 && max_len % 2 == 0);
    let z = qc.z() as i64;
    // edge instances grouped by var block and by check block
    #[derive(Clone, Copy, PartialEq, Eq)]
    struct Inst {
        row: u32,
        col: u32,
        exp: u32,
    }
    let mut by_col: Vec<Vec<Inst>> = vec![Vec::new(); qc.block_cols()];
    let mut by_row: Vec<Vec<Inst>> = vec![Vec::new(); qc.block_rows()];
    for r in 0..qc.block_rows() {
        for c in 0..qc.block_cols() {
            for &e in qc.cell(r, c) {
                let inst = Inst {
                    row: r as u32,
                    col: c as u32,
                    exp: e,
                };
                by_col[c].push(inst);
                by_row[r].push(inst);
            }
        }
    }

    // walk state: visited (block, offset) pairs must stay distinct
    let mut walk_counts: BTreeMap<u32, u64> = BTreeMap::new();
    let max_steps = max_len as usize;

    struct Walker<'a> {
        by_col: &'a [Vec<Inst>],
        by_row: &'a [Vec<Inst>],
        z: i64,
        start_col: u32,
        max_steps: usize,
        var_seen: Vec<(u32, i64)>,
        chk_seen: Vec<(u32, i64)>,
        counts: &'a mut BTreeMap<u32, u64>,
    }
    impl Walker<'_> {
        /// At var block `col` with relative offset `off`, `steps` edges so
        /// far, previous instance `prev`.
        fn from_var(&mut self, col: u32, off: i64, steps: usize, prev: Inst) {
            for &inst in &self.by_col[col as usize] {
                if inst == prev {
                    continue; // backtrack on the same edge instance
                }
                // moving var -> check subtracts the exponent
                let chk_off = (off - i64::from(inst.exp)).rem_euclid(self.z);
                if self
                    .chk_seen
                    .iter()
                    .any(|&(r, o)| r == inst.row && o == chk_off)
                {
                    continue; // lift would revisit a check node
                }
                self.chk_seen.push((inst.row, chk_off));
                self.from_chk(inst.row, chk_off, steps + 1, inst);
                self.chk_seen.pop();
            }
        }

        fn from_chk(&mut self, row: u32, off: i64, steps: usize, prev: Inst) {
            for &inst in &self.by_row[row as usize] {
                if inst == prev {
                    continue;
                }
                let var_off = (off + i64::from(inst.exp)).rem_euclid(self.z);
                // closing the walk at the start variable?
                if inst.col == self.start_col && var_off == 0 {
                    let len = steps + 1;
                    if len >= 4 && len % 2 == 0 {
                        *self.counts.entry(len as u32).or_insert(0) += 1;
                    }
                    // a closed position may still be passed through when z
                    // allows longer wraps, but such walks revisit the start
                    // node in the lift; stop here
                    continue;
                }
                if self
                    .var_seen
                    .iter()
                    .any(|&(c, o)| c == inst.col && o == var_off)
                {
                    continue;
                }
                if steps + 1 < self.max_steps {
                    self.var_seen.push((inst.col, var_off));
                    self.from_var(inst.col, var_off, steps + 1, inst);
                    self.var_seen.pop();
                }
            }
        }
    }

    for c0 in 0..qc.block_cols() {
        let mut walker = Walker {
            by_col: &by_col,
            by_row: &by_row,
            z,
            start_col: c0 as u32,
            max_steps,
            var_seen: vec![(c0 as u32, 0)],
            chk_seen: Vec::new(),
            counts: &mut walk_counts,
        };
        // sentinel previous instance that matches nothing
        let sentinel = Inst {
            row: u32::MAX,
            col: u32::MAX,
            exp: u32::MAX,
        };
        walker.from_var(c0 as u32, 0, 0, sentinel);
    }

    // each cycle of length 2L yields 2L var-anchored directed walks, and a
    // walk class stands for z start offsets
    walk_counts
        .into_iter()
        .map(|(len, walks)| {
            let total = walks * qc.z() as u64;
            debug_assert_eq!(total % (len as u64), 0);
            (len, total / len as u64)
        })
        .collect()
}
