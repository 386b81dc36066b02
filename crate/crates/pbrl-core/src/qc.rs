//! Quasi-cyclic lifting: circulant shift matrices, pre-lifting to remove
//! parallel edges, and shift selection by progressive edge growth under
//! girth and extrinsic-message-degree constraints.
//!
//! A cell holding exponent `k` stands for the `z x z` circulant `sigma^k`
//! (`sigma` = identity cyclically shifted by one), so check copy `i` of a
//! block row connects to variable copy `(i + k) mod z` of a block column.
//! A cell may hold several distinct exponents; their circulants have
//! disjoint support, so the expanded matrix stays binary.

use crate::error::{Error, Result};
use crate::protograph::Protomatrix;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use serde::Serialize;

/// Which lifting stage produced a matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum LiftStage {
    /// First-stage lift; cells may hold several exponents standing in for
    /// the protograph's parallel edges.
    PreLifted,
    /// Lifted code ready for expansion.
    Final,
}

/// Block matrix of circulant shift exponents.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QcMatrix {
    block_rows: usize,
    block_cols: usize,
    z: u32,
    /// Flat row-major cells; each a sorted list of distinct exponents.
    cells: Vec<Vec<u32>>,
    stage: LiftStage,
}

impl QcMatrix {
    pub fn from_cells(
        block_rows: usize,
        block_cols: usize,
        z: u32,
        mut cells: Vec<Vec<u32>>,
        stage: LiftStage,
    ) -> Result<Self> {
        if block_rows == 0 || block_cols == 0 || z == 0 {
            return Err(Error::InvalidLift("empty dimensions".into()));
        }
        if cells.len() != block_rows * block_cols {
            return Err(Error::InvalidLift(format!(
                "{} cells for a {}x{} block matrix",
                cells.len(),
                block_rows,
                block_cols
            )));
        }
        for cell in &mut cells {
            cell.sort_unstable();
            if cell.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidLift("repeated exponent in a cell".into()));
            }
            if cell.iter().any(|&e| e >= z) {
                return Err(Error::InvalidLift(format!("exponent >= z = {z}")));
            }
        }
        Ok(QcMatrix {
            block_rows,
            block_cols,
            z,
            cells,
            stage,
        })
    }

    pub fn block_rows(&self) -> usize {
        self.block_rows
    }

    pub fn block_cols(&self) -> usize {
        self.block_cols
    }

    pub fn z(&self) -> u32 {
        self.z
    }

    pub fn stage(&self) -> LiftStage {
        self.stage
    }

    pub fn cell(&self, r: usize, c: usize) -> &[u32] {
        &self.cells[r * self.block_cols + c]
    }

    pub fn multiplicity(&self, r: usize, c: usize) -> u32 {
        self.cell(r, c).len() as u32
    }

    /// Protomatrix of per-cell multiplicities.
    pub fn collapse(&self) -> Protomatrix {
        let rows = (0..self.block_rows)
            .map(|r| {
                (0..self.block_cols)
                    .map(|c| self.multiplicity(r, c))
                    .collect()
            })
            .collect();
        Protomatrix::from_rows(rows).expect("collapse of a nonempty matrix")
    }

    /// Leading block submatrix (shared cells keep their shifts); used for
    /// the nested rate points of a family lift.
    pub fn leading(&self, block_rows: usize, block_cols: usize) -> Result<QcMatrix> {
        if block_rows > self.block_rows || block_cols > self.block_cols {
            return Err(Error::DimensionMismatch(format!(
                "leading {}x{} of {}x{}",
                block_rows, block_cols, self.block_rows, self.block_cols
            )));
        }
        let mut cells = Vec::with_capacity(block_rows * block_cols);
        for r in 0..block_rows {
            for c in 0..block_cols {
                cells.push(self.cell(r, c).to_vec());
            }
        }
        QcMatrix::from_cells(block_rows, block_cols, self.z, cells, self.stage)
    }

    /// Expands to the binary parity-check graph: `block_rows * z` checks,
    /// `block_cols * z` variables.
    pub fn expand(&self) -> Expanded {
        let z = self.z as usize;
        let n_checks = self.block_rows * z;
        let n_vars = self.block_cols * z;
        let mut chk_adj = vec![Vec::new(); n_checks];
        for r in 0..self.block_rows {
            for c in 0..self.block_cols {
                for &e in self.cell(r, c) {
                    for i in 0..z {
                        let chk = r * z + i;
                        let var = c * z + (i + e as usize) % z;
                        chk_adj[chk].push(var as u32);
                    }
                }
            }
        }
        Expanded::from_check_adjacency(n_checks, n_vars, chk_adj)
    }

    /// Total number of base edges (cell exponents).
    pub fn edge_count(&self) -> usize {
        self.cells.iter().map(Vec::len).sum()
    }
}

/// Expanded bipartite parity-check graph as adjacency lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expanded {
    pub n_checks: usize,
    pub n_vars: usize,
    pub chk_adj: Vec<Vec<u32>>,
    pub var_adj: Vec<Vec<u32>>,
}

impl Expanded {
    /// Adjacency lists are kept sorted; census routines rely on it.
    pub fn new(
        n_checks: usize,
        n_vars: usize,
        mut chk_adj: Vec<Vec<u32>>,
        mut var_adj: Vec<Vec<u32>>,
    ) -> Self {
        for l in &mut chk_adj {
            l.sort_unstable();
        }
        for l in &mut var_adj {
            l.sort_unstable();
        }
        Expanded {
            n_checks,
            n_vars,
            chk_adj,
            var_adj,
        }
    }

    pub fn from_check_adjacency(
        n_checks: usize,
        n_vars: usize,
        mut chk_adj: Vec<Vec<u32>>,
    ) -> Self {
        for l in &mut chk_adj {
            l.sort_unstable();
        }
        let mut var_adj = vec![Vec::new(); n_vars];
        for (c, vars) in chk_adj.iter().enumerate() {
            for &v in vars {
                var_adj[v as usize].push(c as u32);
            }
        }
        Expanded {
            n_checks,
            n_vars,
            chk_adj,
            var_adj,
        }
    }

    /// Binary protomatrix as a graph; entries above 1 are rejected (a
    /// parallel edge has no simple-graph expansion).
    pub fn from_binary_protomatrix(p: &Protomatrix) -> Result<Self> {
        if p.max_entry() > 1 {
            return Err(Error::InvalidLift(
                "protomatrix has parallel edges; lift it first".into(),
            ));
        }
        let chk_adj = (0..p.rows())
            .map(|r| {
                (0..p.cols())
                    .filter(|&c| p.entry(r, c) == 1)
                    .map(|c| c as u32)
                    .collect()
            })
            .collect();
        Ok(Expanded::from_check_adjacency(p.rows(), p.cols(), chk_adj))
    }

    pub fn edge_count(&self) -> usize {
        self.chk_adj.iter().map(Vec::len).sum()
    }
}

/// Per-cell multiplicity comparison between a shift matrix (optionally
/// pre-lifted by `z1`) and a reference protomatrix. Returns the cells whose
/// lifted edge count disagrees with `z1 * proto` multiplicity.
pub fn consistency_report(
    qc: &QcMatrix,
    proto: &Protomatrix,
    z1: usize,
) -> Result<Vec<CellMismatch>> {
    if qc.block_rows != proto.rows() * z1 || qc.block_cols != proto.cols() * z1 {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} blocks vs {}x{} proto at pre-lift {}",
            qc.block_rows,
            qc.block_cols,
            proto.rows(),
            proto.cols(),
            z1
        )));
    }
    let mut out = Vec::new();
    for r in 0..proto.rows() {
        for c in 0..proto.cols() {
            let mut lifted = 0u32;
            for i in 0..z1 {
                for j in 0..z1 {
                    lifted += qc.multiplicity(r * z1 + i, c * z1 + j);
                }
            }
            let expected = proto.entry(r, c) * z1 as u32;
            if lifted != expected {
                out.push(CellMismatch {
                    row: r,
                    col: c,
                    proto_edges: expected,
                    lifted_edges: lifted,
                });
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CellMismatch {
    pub row: usize,
    pub col: usize,
    pub proto_edges: u32,
    pub lifted_edges: u32,
}

/// Pre-lifts a protomatrix by `z1`, splitting each multiplicity-k cell into
/// k distinct exponents. Cells are processed in row-major order; per cell
/// every exponent subset is tried (seeded order) and the one giving the
/// longest shortest-cycle through the new edges wins, ties broken by the
/// number of such shortest cycles.
pub fn prelift(proto: &Protomatrix, z1: u32, seed: u64) -> Result<QcMatrix> {
    if z1 == 0 || u64::from(proto.max_entry()) > u64::from(z1) {
        return Err(Error::InvalidLift(format!(
            "pre-lift size {z1} below maximum multiplicity {}",
            proto.max_entry()
        )));
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let z = z1 as usize;
    let n_checks = proto.rows() * z;
    let n_vars = proto.cols() * z;
    let mut graph = AdjPair::new(n_checks, n_vars);
    let mut cells = vec![Vec::new(); proto.rows() * proto.cols()];

    for r in 0..proto.rows() {
        for c in 0..proto.cols() {
            let mult = proto.entry(r, c) as usize;
            if mult == 0 {
                continue;
            }
            let mut candidates = subsets_of_size(z1, mult);
            candidates.shuffle(&mut rng);
            let mut best: Option<(u32, u64, Vec<u32>)> = None;
            for cand in candidates {
                graph.push_cell_edges(r, c, z, &cand);
                // shortest cycle through any of the freshly added edges
                let mut min_len = u32::MAX;
                let mut count = 0u64;
                for &e in &cand {
                    let chk = r * z;
                    let var = c * z + e as usize % z;
                    let (len, cnt) =
                        shortest_cycle_through(&graph, chk, var, 64);
                    if len < min_len {
                        min_len = len;
                        count = cnt;
                    } else if len == min_len {
                        count += cnt;
                    }
                }
                graph.pop_cell_edges(r, z, mult);
                let better = match &best {
                    None => true,
                    Some((bl, bc, _)) => min_len > *bl || (min_len == *bl && count < *bc),
                };
                if better {
                    best = Some((min_len, count, cand));
                }
            }
            let (_, _, mut chosen) = best.expect("at least one subset");
            chosen.sort_unstable();
            graph.push_cell_edges(r, c, z, &chosen);
            cells[r * proto.cols() + c] = chosen;
        }
    }
    QcMatrix::from_cells(
        proto.rows(),
        proto.cols(),
        z1,
        cells,
        LiftStage::PreLifted,
    )
}

fn subsets_of_size(z: u32, k: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(k);
    fn rec(start: u32, z: u32, k: usize, current: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        let needed = k - current.len();
        for e in start..=(z - needed as u32) {
            current.push(e);
            rec(e + 1, z, k, current, out);
            current.pop();
        }
    }
    rec(0, z, k, &mut current, &mut out);
    out
}

/// Length of (and number of) shortest cycles through the edge `chk - var`,
/// by BFS from `var` avoiding that one edge instance. `u32::MAX` if none
/// within `depth_cap`.
fn shortest_cycle_through(graph: &AdjPair, chk: usize, var: usize, depth_cap: u32) -> (u32, u64) {
    // BFS over nodes; node ids: vars then checks shifted by n_vars
    let n = graph.n_vars + graph.n_checks;
    let mut dist = vec![u32::MAX; n];
    let mut count = vec![0u64; n];
    let start = var;
    let target = graph.n_vars + chk;
    dist[start] = 0;
    count[start] = 1;
    let mut frontier = vec![start];
    let mut skipped_direct = false;
    let mut depth = 0;
    while !frontier.is_empty() && depth < depth_cap {
        let mut next = Vec::new();
        for &u in &frontier {
            let neighbors: &[u32] = if u < graph.n_vars {
                &graph.var_adj[u]
            } else {
                &graph.chk_adj[u - graph.n_vars]
            };
            for &nb in neighbors {
                let nb = if u < graph.n_vars {
                    graph.n_vars + nb as usize
                } else {
                    nb as usize
                };
                // skip the direct traversal of the probed edge itself, once
                if depth == 0 && u == start && nb == target && !skipped_direct {
                    skipped_direct = true;
                    continue;
                }
                if dist[nb] == u32::MAX {
                    dist[nb] = depth + 1;
                    count[nb] = count[u];
                    next.push(nb);
                } else if dist[nb] == depth + 1 {
                    count[nb] += count[u];
                }
            }
        }
        depth += 1;
        if dist[target] != u32::MAX && dist[target] <= depth {
            return (dist[target] + 1, count[target]);
        }
        frontier = next;
    }
    (u32::MAX, 0)
}

/// Mutable adjacency pair used while building lifts.
struct AdjPair {
    n_checks: usize,
    n_vars: usize,
    chk_adj: Vec<Vec<u32>>,
    var_adj: Vec<Vec<u32>>,
}

impl AdjPair {
    fn new(n_checks: usize, n_vars: usize) -> Self {
        AdjPair {
            n_checks,
            n_vars,
            chk_adj: vec![Vec::new(); n_checks],
            var_adj: vec![Vec::new(); n_vars],
        }
    }

    /// Adds all `z` lifted copies of each exponent in `exps` for proto cell
    /// `(r, c)`.
    fn push_cell_edges(&mut self, r: usize, c: usize, z: usize, exps: &[u32]) {
        for &e in exps {
            for i in 0..z {
                let chk = r * z + i;
                let var = c * z + (i + e as usize) % z;
                self.chk_adj[chk].push(var as u32);
                self.var_adj[var].push(chk as u32);
            }
        }
    }

    fn pop_cell_edges(&mut self, r: usize, z: usize, mult: usize) {
        for _ in 0..mult {
            for i in 0..z {
                let chk = r * z + i;
                // the pushed (chk, var) pairs are the most recent entries
                let var = *self.chk_adj[chk].last().unwrap() as usize;
                self.chk_adj[chk].pop();
                self.var_adj[var].pop();
            }
        }
    }
}

/// One constraint level of the admission schedule: cycles of length up to
/// `2 d` through a new edge must have extrinsic degree sum at least `eta`;
/// `attempts` random exponents are tried before relaxing to the next level.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct AceStep {
    pub d: u32,
    pub eta: u32,
    pub attempts: u32,
}

/// Admission schedule: a strictly enforced girth floor plus a weakly
/// relaxing ladder of extrinsic-degree constraints.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AceSchedule {
    pub girth_floor: u32,
    pub steps: Vec<AceStep>,
}

impl AceSchedule {
    pub fn new(girth_floor: u32, steps: Vec<AceStep>) -> Result<Self> {
        if girth_floor < 4 || girth_floor % 2 != 0 {
            return Err(Error::InvalidLift(format!(
                "girth floor {girth_floor} must be even and at least 4"
            )));
        }
        if steps.is_empty() {
            return Err(Error::InvalidLift("empty admission schedule".into()));
        }
        if steps.iter().any(|s| s.attempts == 0) {
            return Err(Error::InvalidLift("zero attempt budget".into()));
        }
        if steps.iter().any(|s| s.d < 2 || s.d > 30) {
            return Err(Error::InvalidLift("cycle depth d must be in 2..=30".into()));
        }
        for w in steps.windows(2) {
            let stricter = w[1].d > w[0].d || (w[1].d == w[0].d && w[1].eta > w[0].eta);
            if stricter {
                return Err(Error::InvalidLift(
                    "schedule must be weakly decreasing in strictness".into(),
                ));
            }
        }
        Ok(AceSchedule { girth_floor, steps })
    }

    /// Parses `"7:21@100,6:21@100,..."` as `d:eta@attempts` levels.
    pub fn parse(girth_floor: u32, text: &str) -> Result<Self> {
        let mut steps = Vec::new();
        for part in text.split(',') {
            let part = part.trim();
            let (de, attempts) = part
                .split_once('@')
                .ok_or_else(|| Error::InvalidLift(format!("bad schedule entry `{part}`")))?;
            let (d, eta) = de
                .split_once(':')
                .ok_or_else(|| Error::InvalidLift(format!("bad schedule entry `{part}`")))?;
            steps.push(AceStep {
                d: d.trim()
                    .parse()
                    .map_err(|_| Error::InvalidLift(format!("bad depth in `{part}`")))?,
                eta: eta
                    .trim()
                    .parse()
                    .map_err(|_| Error::InvalidLift(format!("bad eta in `{part}`")))?,
                attempts: attempts
                    .trim()
                    .parse()
                    .map_err(|_| Error::InvalidLift(format!("bad attempts in `{part}`")))?,
            });
        }
        AceSchedule::new(girth_floor, steps)
    }
}

/// Shift-selection configuration.
#[derive(Clone, Debug)]
pub struct CpegConfig {
    pub schedule: AceSchedule,
    pub seed: u64,
    /// Full restarts allowed after the last level's budget is exhausted.
    pub restart_limit: usize,
    /// When set, a relaxation reached on one edge carries over to later
    /// edges instead of resetting per edge.
    pub global_relax: bool,
}

impl CpegConfig {
    pub fn new(schedule: AceSchedule, seed: u64) -> Self {
        CpegConfig {
            schedule,
            seed,
            restart_limit: 50,
            global_relax: false,
        }
    }
}

/// Lifts a pre-lifted (or trivially lifted) shift matrix by `z2`, assigning
/// one exponent per base edge in row-major order.
pub fn cpeg_lift(base: &QcMatrix, z2: u32, cfg: &CpegConfig) -> Result<QcMatrix> {
    let z1 = base.z() as usize;
    let block_rows = base.block_rows() * z1;
    let block_cols = base.block_cols() * z1;
    let mut cells: Vec<(usize, usize, u32)> = Vec::new();
    for r in 0..base.block_rows() {
        for c in 0..base.block_cols() {
            for &e in base.cell(r, c) {
                for i in 0..z1 {
                    let br = r * z1 + i;
                    let bc = c * z1 + (i + e as usize) % z1;
                    cells.push((br, bc, 1));
                }
            }
        }
    }
    // row-major assignment order over the expanded base
    cells.sort_unstable();
    assign_shifts(block_rows, block_cols, &cells, z2, cfg)
}

/// Single-stage lift of a protomatrix: multiplicity-k cells receive k
/// distinct exponents.
pub fn direct_lift(proto: &Protomatrix, z: u32, cfg: &CpegConfig) -> Result<QcMatrix> {
    let mut cells = Vec::new();
    for r in 0..proto.rows() {
        for c in 0..proto.cols() {
            let mult = proto.entry(r, c);
            if mult > 0 {
                cells.push((r, c, mult));
            }
        }
    }
    assign_shifts(proto.rows(), proto.cols(), &cells, z, cfg)
}

fn assign_shifts(
    block_rows: usize,
    block_cols: usize,
    cells: &[(usize, usize, u32)],
    z: u32,
    cfg: &CpegConfig,
) -> Result<QcMatrix> {
    if z == 0 {
        return Err(Error::InvalidLift("z must be positive".into()));
    }
    if cells.iter().any(|&(_, _, m)| m > z) {
        return Err(Error::InvalidLift(
            "cell multiplicity exceeds lifting size".into(),
        ));
    }
    // final lifted variable degrees, known up front (one edge per copy per base edge)
    let mut col_degree = vec![0u32; block_cols];
    for &(_, c, m) in cells {
        col_degree[c] += m;
    }

    let zu = z as usize;
    for restart in 0..=cfg.restart_limit {
        let mut rng = ChaCha12Rng::seed_from_u64(cfg.seed);
        rng.set_stream(restart as u64);
        let mut graph = AdjPair::new(block_rows * zu, block_cols * zu);
        let mut searcher = CycleSearcher::new(block_cols * zu + block_rows * zu);
        let mut out_cells = vec![Vec::new(); block_rows * block_cols];
        let mut level_floor = 0usize;
        let mut failed = false;

        'edges: for &(br, bc, mult) in cells {
            for _replica in 0..mult {
                let mut order: Vec<u32> = (0..z).collect();
                order.shuffle(&mut rng);
                let mut level = level_floor;
                let mut attempts_left = cfg.schedule.steps[level].attempts;
                let mut admitted = false;
                let mut cursor = 0usize;
                while !admitted {
                    if cursor == order.len() {
                        // candidate exponents exhausted before the budget
                        cursor = 0;
                    }
                    let x = order[cursor];
                    cursor += 1;
                    if out_cells[br * block_cols + bc].contains(&x) {
                        continue;
                    }
                    let step = cfg.schedule.steps[level];
                    graph.push_cell_edges(br, bc, zu, &[x]);
                    let ok = searcher.admit(
                        &graph,
                        &col_degree,
                        zu,
                        br,
                        bc,
                        x,
                        step.d,
                        step.eta,
                        cfg.schedule.girth_floor,
                    );
                    if ok {
                        out_cells[br * block_cols + bc].push(x);
                        admitted = true;
                    } else {
                        graph.pop_cell_edges(br, zu, 1);
                        attempts_left -= 1;
                        if attempts_left == 0 {
                            level += 1;
                            if level == cfg.schedule.steps.len() {
                                failed = true;
                                break 'edges;
                            }
                            if cfg.global_relax {
                                level_floor = level;
                            }
                            attempts_left = cfg.schedule.steps[level].attempts;
                        }
                    }
                }
            }
        }
        if !failed {
            for cell in &mut out_cells {
                cell.sort_unstable();
            }
            return QcMatrix::from_cells(block_rows, block_cols, z, out_cells, LiftStage::Final);
        }
    }
    Err(Error::RestartLimitExceeded(cfg.restart_limit))
}

/// Layered min-ACE search used for admission. Node ids: variables first,
/// then checks offset by `n_vars`.
struct CycleSearcher {
    mark: Vec<u64>,
    ace: Vec<u32>,
    epoch: u64,
}

impl CycleSearcher {
    fn new(n_nodes: usize) -> Self {
        CycleSearcher {
            mark: vec![0; n_nodes],
            ace: vec![0; n_nodes],
            epoch: 0,
        }
    }

    /// Checks every cycle closed by the tentative edges of cell `(br, bc)`
    /// with exponent `x` (copy 0 probed; circulant symmetry covers the
    /// rest). Rejects when a cycle shorter than `girth_floor` exists or a
    /// cycle of length at most `2 d` has extrinsic degree sum below `eta`.
    #[allow(clippy::too_many_arguments)]
    fn admit(
        &mut self,
        graph: &AdjPair,
        col_degree: &[u32],
        z: usize,
        br: usize,
        bc: usize,
        x: u32,
        d: u32,
        eta: u32,
        girth_floor: u32,
    ) -> bool {
        let n_vars = graph.n_vars;
        let start = bc * z + x as usize; // variable endpoint of copy 0
        let target = n_vars + br * z; // check endpoint of copy 0
        let max_path = (2 * d - 1).max(girth_floor - 3) as usize;
        // paths longer than this cannot close a girth violation
        let girth_path_cap = girth_floor as usize - 2;

        self.epoch += 1;
        let tag = self.epoch * 64;
        let start_ace = col_degree[bc].saturating_sub(2);
        self.mark[start] = tag;
        self.ace[start] = start_ace;
        let mut frontier = vec![start as u32];
        let mut skipped_direct = false;

        for depth in 1..=max_path {
            if frontier.is_empty() {
                break;
            }
            let level_tag = tag + depth as u64;
            let from_vars = depth % 2 == 1;
            let mut next = Vec::new();
            for &u in &frontier {
                let u = u as usize;
                let u_ace = self.ace[u];
                let neighbors: &[u32] = if from_vars {
                    &graph.var_adj[u]
                } else {
                    &graph.chk_adj[u - n_vars]
                };
                for &nb in neighbors {
                    if from_vars {
                        let node = n_vars + nb as usize;
                        if node == target {
                            if depth == 1 && u == start && !skipped_direct {
                                // the probed copy itself
                                skipped_direct = true;
                                continue;
                            }
                            let cycle_len = depth + 1;
                            if cycle_len < girth_floor as usize {
                                return false;
                            }
                            if cycle_len <= 2 * d as usize && u_ace < eta {
                                return false;
                            }
                            continue; // cycles end at the target
                        }
                        if self.mark[node] < tag {
                            // first visit in this admission
                            self.mark[node] = level_tag;
                            self.ace[node] = u_ace;
                            next.push(node as u32);
                        } else if u_ace < self.ace[node] {
                            // lower-ACE walk; propagate the improvement
                            self.ace[node] = u_ace;
                            if self.mark[node] != level_tag {
                                self.mark[node] = level_tag;
                                next.push(node as u32);
                            }
                        }
                    } else {
                        let node = nb as usize;
                        let a = u_ace + col_degree[node / z].saturating_sub(2);
                        // past girth range, walks at or above eta cannot
                        // produce a violation
                        if depth >= girth_path_cap && a >= eta {
                            continue;
                        }
                        if self.mark[node] < tag {
                            self.mark[node] = level_tag;
                            self.ace[node] = a;
                            next.push(node as u32);
                        } else if a < self.ace[node] {
                            self.ace[node] = a;
                            if self.mark[node] != level_tag {
                                self.mark[node] = level_tag;
                                next.push(node as u32);
                            }
                        }
                    }
                }
            }
            frontier = next;
        }
        true
    }
}
