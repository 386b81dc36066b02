//! Expanded parity-check graphs, the systematic raptor-like encoder, the
//! rate-compatible transmit selection, and the sum-product decoder with
//! flooding and layered schedules.

use crate::error::{Error, Result};
use crate::gf2::{pack_bits, BitMatrix};
use crate::protograph::PbrlFamily;
use crate::qc::QcMatrix;

/// Message magnitudes are clamped here; the check update keeps its tanh
/// arguments away from saturation as a consequence.
pub const LLR_CLAMP: f32 = 30.0;

/// Role of an expanded variable node.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VarRole {
    /// Precode variable that is transmitted at every rate.
    PrecodeTx,
    /// Precode variable that is never transmitted.
    PrecodePunctured,
    /// Degree-one extension variable of ladder row `row`; transmitted at
    /// rate indices above `row`.
    Lt { row: u32 },
}

/// Expanded sparse parity-check structure of one family code at a rate
/// index, with role tags and the block-row layout used by the layered
/// schedule.
#[derive(Clone, Debug)]
pub struct SparseParityCheck {
    pub n_vars: usize,
    pub n_checks: usize,
    pub chk_adj: Vec<Vec<u32>>,
    pub var_adj: Vec<Vec<u32>>,
    pub roles: Vec<VarRole>,
    /// For each check: its degree-one extension variable, if it is an
    /// extension row check.
    pub lt_var_of_check: Vec<Option<u32>>,
    /// Check index ranges per lifted block row, in layer order.
    pub layers: Vec<(u32, u32)>,
    /// Expanded copies per proto node (`z1 * z2`).
    pub z_total: usize,
    /// Rate index the expansion was taken at.
    pub m: usize,
    /// Number of precode variables (`n_p * z_total`).
    pub n_precode_vars: usize,
    pub n_precode_checks: usize,
}

impl SparseParityCheck {
    /// Expands the leading blocks of `qc` that correspond to
    /// `family.assemble(m)`. The pre-lift factor is inferred from the block
    /// dimensions; `qc` must cover rate index `m`.
    pub fn expand(qc: &QcMatrix, family: &PbrlFamily, m: usize) -> Result<Self> {
        let n_p = family.n_precode_vars();
        let r_p = family.n_precode_checks();
        let (z1, m_qc) = infer_prelift(qc, n_p, r_p)?;
        if m > m_qc {
            return Err(Error::DimensionMismatch(format!(
                "rate index {m} beyond the lifted matrix ({m_qc} extension rows)"
            )));
        }
        if m > family.lt_len() {
            return Err(Error::RateIndexOutOfRange {
                m,
                available: family.lt_len(),
            });
        }
        let z = qc.z() as usize;
        let z_total = z1 * z;
        let sub = qc.leading((r_p + m) * z1, (n_p + m) * z1)?;
        let h = sub.expand();

        let n_vars = h.n_vars;
        let n_checks = h.n_checks;
        let roles: Vec<VarRole> = (0..n_vars)
            .map(|v| {
                let proto_col = v / z_total;
                if proto_col < n_p {
                    if family.punctured.contains(&proto_col) {
                        VarRole::PrecodePunctured
                    } else {
                        VarRole::PrecodeTx
                    }
                } else {
                    VarRole::Lt {
                        row: (proto_col - n_p) as u32,
                    }
                }
            })
            .collect();

        let lt_var_of_check: Vec<Option<u32>> = (0..n_checks)
            .map(|c| {
                let proto_row = c / z_total;
                if proto_row < r_p {
                    None
                } else {
                    h.chk_adj[c]
                        .iter()
                        .copied()
                        .find(|&v| matches!(roles[v as usize], VarRole::Lt { .. }))
                }
            })
            .collect();
        // every extension check must own exactly one degree-one variable
        for (c, lt) in lt_var_of_check.iter().enumerate() {
            if c / z_total >= r_p && lt.is_none() {
                return Err(Error::DimensionMismatch(format!(
                    "extension check {c} has no degree-one variable"
                )));
            }
        }

        let layers = (0..(r_p + m) * z1)
            .map(|b| ((b * z) as u32, ((b + 1) * z) as u32))
            .collect();

        Ok(SparseParityCheck {
            n_vars,
            n_checks,
            chk_adj: h.chk_adj,
            var_adj: h.var_adj,
            roles,
            lt_var_of_check,
            layers,
            z_total,
            m,
            n_precode_vars: n_p * z_total,
            n_precode_checks: r_p * z_total,
        })
    }

    /// Variable indices in channel order: transmitted precode variables
    /// first, then extension variables ladder row by ladder row.
    pub fn transmit_order(&self) -> Vec<u32> {
        let mut order: Vec<u32> = (0..self.n_vars as u32)
            .filter(|&v| matches!(self.roles[v as usize], VarRole::PrecodeTx))
            .collect();
        order.extend(
            (0..self.n_vars as u32)
                .filter(|&v| matches!(self.roles[v as usize], VarRole::Lt { .. })),
        );
        order
    }

    /// Number of transmitted bits at rate index `m_active`.
    pub fn n_transmitted(&self, m_active: usize) -> usize {
        let tx_precode = self
            .roles
            .iter()
            .filter(|r| matches!(r, VarRole::PrecodeTx))
            .count();
        tx_precode + m_active * self.z_total
    }

    /// Syndrome weight of hard decisions over the checks active at
    /// `m_active`.
    pub fn syndrome_weight(&self, bits: &[u8], m_active: usize) -> usize {
        let active_checks = self.n_precode_checks + m_active * self.z_total;
        (0..active_checks)
            .filter(|&c| {
                self.chk_adj[c]
                    .iter()
                    .fold(0u8, |acc, &v| acc ^ bits[v as usize])
                    == 1
            })
            .count()
    }
}

fn infer_prelift(qc: &QcMatrix, n_p: usize, r_p: usize) -> Result<(usize, usize)> {
    let diff = qc
        .block_cols()
        .checked_sub(qc.block_rows())
        .filter(|d| *d > 0)
        .ok_or_else(|| {
            Error::DimensionMismatch("lifted matrix has no information columns".into())
        })?;
    let k_proto = n_p - r_p;
    if diff % k_proto != 0 {
        return Err(Error::DimensionMismatch(format!(
            "block dimension difference {diff} not a multiple of {k_proto}"
        )));
    }
    let z1 = diff / k_proto;
    if qc.block_cols() % z1 != 0 || qc.block_cols() / z1 < n_p {
        return Err(Error::DimensionMismatch(
            "block columns inconsistent with the family".into(),
        ));
    }
    Ok((z1, qc.block_cols() / z1 - n_p))
}

/// Offline encoder: reduced row echelon form of the precode restricted to
/// pivot columns, plus the per-extension-bit XOR lists implied by the
/// graph.
pub struct EncoderPlan {
    pub n_vars: usize,
    pub k: usize,
    /// Free (information) columns, ascending.
    pub info_positions: Vec<u32>,
    /// Pivot columns, in elimination order; `solve_rows[i]` gives pivot
    /// `pivot_cols[i]` as a parity of information bits.
    pivot_cols: Vec<u32>,
    solve_rows: BitMatrix,
    /// Extension checks in ladder order: (extension variable, precode
    /// sources to XOR).
    lt_xors: Vec<(u32, Vec<u32>)>,
}

impl EncoderPlan {
    /// Builds the plan from a full-family expansion. Punctured variables
    /// are preferred as pivots so information positions stay transmitted.
    pub fn build(h: &SparseParityCheck) -> Result<Self> {
        let n_pre = h.n_precode_vars;
        let r = h.n_precode_checks;
        let k = n_pre - r;

        // dense precode matrix
        let mut mat = BitMatrix::zero(r, n_pre);
        for c in 0..r {
            for &v in &h.chk_adj[c] {
                mat.set(c, v as usize, true);
            }
        }

        // column preference: punctured first, then from the right
        let mut col_order: Vec<u32> = (0..n_pre as u32)
            .filter(|&v| matches!(h.roles[v as usize], VarRole::PrecodePunctured))
            .collect();
        col_order.extend(
            (0..n_pre as u32)
                .rev()
                .filter(|&v| !matches!(h.roles[v as usize], VarRole::PrecodePunctured)),
        );

        let mut pivot_cols: Vec<u32> = Vec::with_capacity(r);
        let mut pivot_of_row: Vec<Option<u32>> = vec![None; r];
        let mut used_row = vec![false; r];
        for &col in &col_order {
            if pivot_cols.len() == r {
                break;
            }
            let Some(pr) = (0..r).find(|&row| !used_row[row] && mat.get(row, col as usize))
            else {
                continue;
            };
            used_row[pr] = true;
            pivot_of_row[pr] = Some(col);
            pivot_cols.push(col);
            for row in 0..r {
                if row != pr && mat.get(row, col as usize) {
                    mat.xor_row_into(pr, row);
                }
            }
        }
        if pivot_cols.len() < r {
            return Err(Error::SingularPrecode(r - pivot_cols.len()));
        }

        let pivot_set: std::collections::HashSet<u32> = pivot_cols.iter().copied().collect();
        let info_positions: Vec<u32> = (0..n_pre as u32)
            .filter(|v| !pivot_set.contains(v))
            .collect();
        debug_assert_eq!(info_positions.len(), k);

        // solve rows over the information columns only
        let mut solve_rows = BitMatrix::zero(r, k);
        let mut row_of_pivot = vec![0usize; r];
        for (row, p) in pivot_of_row.iter().enumerate() {
            let idx = pivot_cols.iter().position(|c| Some(*c) == *p).unwrap();
            row_of_pivot[idx] = row;
        }
        for (i, &row) in row_of_pivot.iter().enumerate() {
            for (j, &col) in info_positions.iter().enumerate() {
                if mat.get(row, col as usize) {
                    solve_rows.set(i, j, true);
                }
            }
        }

        // extension bits in ladder order
        let mut lt_xors = Vec::new();
        for c in r..h.n_checks {
            let lt = h.lt_var_of_check[c].expect("extension check");
            let sources = h.chk_adj[c]
                .iter()
                .copied()
                .filter(|&v| v != lt)
                .collect();
            lt_xors.push((lt, sources));
        }

        Ok(EncoderPlan {
            n_vars: h.n_vars,
            k,
            info_positions,
            pivot_cols,
            solve_rows,
            lt_xors,
        })
    }

    /// Encodes `info` into the full codeword (all variables, including
    /// punctured and every extension bit).
    pub fn encode(&self, info: &[u8]) -> Vec<u8> {
        assert_eq!(info.len(), self.k, "info length");
        let mut word = vec![0u8; self.n_vars];
        for (&pos, &bit) in self.info_positions.iter().zip(info) {
            word[pos as usize] = bit & 1;
        }
        let packed = pack_bits(info);
        for (i, &col) in self.pivot_cols.iter().enumerate() {
            if self.solve_rows.row_dot(i, &packed) {
                word[col as usize] = 1;
            }
        }
        for (lt, sources) in &self.lt_xors {
            let mut acc = 0u8;
            for &s in sources {
                acc ^= word[s as usize];
            }
            word[*lt as usize] = acc;
        }
        word
    }

    /// Reads the information bits back out of a codeword.
    pub fn extract_info(&self, word: &[u8]) -> Vec<u8> {
        self.info_positions
            .iter()
            .map(|&p| word[p as usize] & 1)
            .collect()
    }
}

/// Channel bits for rate index `m_active`: transmitted precode variables
/// then the first `m_active` blocks of extension variables.
pub fn select_transmit(word: &[u8], h: &SparseParityCheck, m_active: usize) -> Vec<u8> {
    let mut out = Vec::with_capacity(h.n_transmitted(m_active));
    for v in 0..h.n_vars {
        match h.roles[v] {
            VarRole::PrecodeTx => out.push(word[v]),
            VarRole::Lt { row } if (row as usize) < m_active => out.push(word[v]),
            _ => {}
        }
    }
    out
}

/// Message-passing schedule.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Schedule {
    Flooding,
    Layered,
}

impl std::str::FromStr for Schedule {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "flooding" => Ok(Schedule::Flooding),
            "layered" => Ok(Schedule::Layered),
            other => Err(Error::Parse {
                line: 0,
                msg: format!("unknown schedule `{other}`"),
            }),
        }
    }
}

/// Decode outcome; `converged` means the active syndrome reached zero.
#[derive(Clone, Debug)]
pub struct DecodeOutcome {
    pub bits: Vec<u8>,
    pub iterations: u32,
    pub converged: bool,
    pub syndrome_trace: Option<Vec<u32>>,
}

/// Sum-product decoder over a fixed expansion. Constructed once per graph;
/// `run` is single-threaded and deterministic, callers parallelize over
/// frames.
pub struct Decoder<'h> {
    h: &'h SparseParityCheck,
    /// CSR over edges, check-major.
    edge_var: Vec<u32>,
    chk_off: Vec<u32>,
}

impl<'h> Decoder<'h> {
    pub fn new(h: &'h SparseParityCheck) -> Self {
        let mut edge_var = Vec::with_capacity(h.chk_adj.iter().map(Vec::len).sum());
        let mut chk_off = Vec::with_capacity(h.n_checks + 1);
        chk_off.push(0u32);
        for adj in &h.chk_adj {
            edge_var.extend_from_slice(adj);
            chk_off.push(edge_var.len() as u32);
        }
        Decoder { h, edge_var, chk_off }
    }

    /// Runs the decoder on one frame of channel LLRs (positive favors bit
    /// 0), given in transmit order for rate index `m_active`. Punctured
    /// variables start at LLR zero; extension checks whose degree-one
    /// variable is untransmitted are deactivated along with that variable.
    pub fn run(
        &self,
        llr_tx: &[f32],
        m_active: usize,
        schedule: Schedule,
        max_iter: u32,
        trace_syndrome: bool,
    ) -> Result<DecodeOutcome> {
        let h = self.h;
        if m_active > h.m {
            return Err(Error::RateIndexOutOfRange {
                m: m_active,
                available: h.m,
            });
        }
        let expected = h.n_transmitted(m_active);
        if llr_tx.len() != expected {
            return Err(Error::DimensionMismatch(format!(
                "{} LLRs for {expected} transmitted bits",
                llr_tx.len()
            )));
        }

        // channel LLRs in variable order
        let mut llr0 = vec![0.0f32; h.n_vars];
        let mut cursor = 0usize;
        for v in 0..h.n_vars {
            let transmitted = match h.roles[v] {
                VarRole::PrecodeTx => true,
                VarRole::PrecodePunctured => false,
                VarRole::Lt { row } => (row as usize) < m_active,
            };
            if transmitted {
                let x = llr_tx[cursor];
                if !x.is_finite() {
                    return Err(Error::NonFiniteLlr(cursor));
                }
                llr0[v] = x.clamp(-LLR_CLAMP, LLR_CLAMP);
                cursor += 1;
            }
        }
        debug_assert_eq!(cursor, expected);

        let active_checks = h.n_precode_checks + m_active * h.z_total;
        let n_active_layers = h
            .layers
            .iter()
            .take_while(|&&(lo, _)| (lo as usize) < active_checks)
            .count();

        match schedule {
            Schedule::Flooding => {
                self.run_flooding(&llr0, active_checks, max_iter, m_active, trace_syndrome)
            }
            Schedule::Layered => self.run_layered(
                &llr0,
                active_checks,
                n_active_layers,
                max_iter,
                m_active,
                trace_syndrome,
            ),
        }
    }

    fn hard_decisions(posterior: &[f32]) -> Vec<u8> {
        posterior.iter().map(|&p| u8::from(p < 0.0)).collect()
    }

    fn run_flooding(
        &self,
        llr0: &[f32],
        active_checks: usize,
        max_iter: u32,
        m_active: usize,
        trace_syndrome: bool,
    ) -> Result<DecodeOutcome> {
        let h = self.h;
        let ne = self.edge_var.len();
        let mut r_old = vec![0.0f32; ne];
        let mut r_new = vec![0.0f32; ne];
        let mut posterior: Vec<f32> = llr0.to_vec();
        let mut trace = trace_syndrome.then(Vec::new);
        let mut scratch = Vec::new();

        for iter in 1..=max_iter {
            for c in 0..active_checks {
                let lo = self.chk_off[c] as usize;
                let hi = self.chk_off[c + 1] as usize;
                scratch.clear();
                for e in lo..hi {
                    let v = self.edge_var[e] as usize;
                    let q = posterior[v] - r_old[e];
                    scratch.push((q.clamp(-LLR_CLAMP, LLR_CLAMP) * 0.5).tanh());
                }
                write_check_messages(&scratch, &mut r_new[lo..hi]);
            }
            // variable update
            posterior.copy_from_slice(llr0);
            for c in 0..active_checks {
                let lo = self.chk_off[c] as usize;
                let hi = self.chk_off[c + 1] as usize;
                for e in lo..hi {
                    posterior[self.edge_var[e] as usize] += r_new[e];
                }
            }
            std::mem::swap(&mut r_old, &mut r_new);

            let bits = Self::hard_decisions(&posterior);
            let weight = h.syndrome_weight(&bits, m_active);
            if let Some(t) = trace.as_mut() {
                t.push(weight as u32);
            }
            if weight == 0 {
                return Ok(DecodeOutcome {
                    bits,
                    iterations: iter,
                    converged: true,
                    syndrome_trace: trace,
                });
            }
        }
        let bits = Self::hard_decisions(&posterior);
        Ok(DecodeOutcome {
            bits,
            iterations: max_iter,
            converged: false,
            syndrome_trace: trace,
        })
    }

    fn run_layered(
        &self,
        llr0: &[f32],
        active_checks: usize,
        n_active_layers: usize,
        max_iter: u32,
        m_active: usize,
        trace_syndrome: bool,
    ) -> Result<DecodeOutcome> {
        let h = self.h;
        let ne = self.edge_var.len();
        let mut r_msg = vec![0.0f32; ne];
        let mut posterior: Vec<f32> = llr0.to_vec();
        let mut trace = trace_syndrome.then(Vec::new);
        let mut scratch = Vec::new();

        for iter in 1..=max_iter {
            for layer in 0..n_active_layers {
                let (clo, chi) = h.layers[layer];
                for c in clo as usize..(chi as usize).min(active_checks) {
                    let lo = self.chk_off[c] as usize;
                    let hi = self.chk_off[c + 1] as usize;
                    scratch.clear();
                    for e in lo..hi {
                        let v = self.edge_var[e] as usize;
                        let q = (posterior[v] - r_msg[e]).clamp(-LLR_CLAMP, LLR_CLAMP);
                        posterior[v] = q; // peel the old message off
                        scratch.push((q * 0.5).tanh());
                    }
                    write_check_messages(&scratch, &mut r_msg[lo..hi]);
                    for e in lo..hi {
                        posterior[self.edge_var[e] as usize] += r_msg[e];
                    }
                }
            }
            let bits = Self::hard_decisions(&posterior);
            let weight = h.syndrome_weight(&bits, m_active);
            if let Some(t) = trace.as_mut() {
                t.push(weight as u32);
            }
            if weight == 0 {
                return Ok(DecodeOutcome {
                    bits,
                    iterations: iter,
                    converged: true,
                    syndrome_trace: trace,
                });
            }
        }
        let bits = Self::hard_decisions(&posterior);
        Ok(DecodeOutcome {
            bits,
            iterations: max_iter,
            converged: false,
            syndrome_trace: trace,
        })
    }
}

/// Tanh-product check update with exact extrinsic exclusion via prefix and
/// suffix products.
fn write_check_messages(tanhs: &[f32], out: &mut [f32]) {
    let deg = tanhs.len();
    debug_assert_eq!(deg, out.len());
    if deg == 0 {
        return;
    }
    if deg == 1 {
        out[0] = 0.0;
        return;
    }
    // suffix products stored in out[i] = prod of tanhs[i+1..]
    out[deg - 1] = 1.0;
    for i in (0..deg - 1).rev() {
        out[i] = out[i + 1] * tanhs[i + 1];
    }
    let mut prefix = 1.0f32;
    for i in 0..deg {
        let prod = prefix * out[i];
        out[i] = (2.0 * prod.atanh()).clamp(-LLR_CLAMP, LLR_CLAMP);
        prefix *= tanhs[i];
    }
}
