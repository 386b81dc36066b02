//! Protograph data model: protomatrices, raptor-like families and the rate
//! ladder bookkeeping.
//!
//! A PBRL family is a precode protomatrix `H_p` plus an ordered list of
//! extension rows `H_LT`. The assembled protomatrix at rate index `m` is
//!
//! ```text
//!   [ H_p            0   ]
//!   [ H_LT[..m]      I_m ]
//! ```
//!
//! where every extension row brings one new check node and one new
//! degree-one variable node. Lower rates transmit the extension variables
//! from the top row downwards; a punctured set marks precode variables that
//! are never transmitted.

use crate::error::{Error, Result};
use crate::rational::Rational;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fmt;

/// Nonnegative integer matrix of edge multiplicities between proto check
/// nodes (rows) and proto variable nodes (columns).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Protomatrix {
    rows: usize,
    cols: usize,
    mult: Vec<u32>,
}

impl Protomatrix {
    /// Builds a protomatrix from row vectors. Dimensions must be at least
    /// 1x1 and all rows of equal length. Zero columns are representable
    /// (analysis routines need them for degenerate cases); `PbrlFamily`
    /// validation reports them.
    pub fn from_rows(rows: Vec<Vec<u32>>) -> Result<Self> {
        if rows.is_empty() || rows[0].is_empty() {
            return Err(Error::InvalidProtomatrix(
                "dimensions must be at least 1x1".into(),
            ));
        }
        let cols = rows[0].len();
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::InvalidProtomatrix("ragged rows".into()));
        }
        let n_rows = rows.len();
        let mult = rows.into_iter().flatten().collect();
        Ok(Protomatrix {
            rows: n_rows,
            cols,
            mult,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entry(&self, r: usize, c: usize) -> u32 {
        self.mult[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.mult[r * self.cols..(r + 1) * self.cols]
    }

    pub fn col_degree(&self, c: usize) -> u32 {
        (0..self.rows).map(|r| self.entry(r, c)).sum()
    }

    pub fn row_degree(&self, r: usize) -> u32 {
        self.row(r).iter().sum()
    }

    /// Total number of edges (sum of all multiplicities).
    pub fn edge_count(&self) -> usize {
        self.mult.iter().map(|&m| m as usize).sum()
    }

    pub fn max_entry(&self) -> u32 {
        self.mult.iter().copied().max().unwrap_or(0)
    }

    /// Leading submatrix view, used by nesting checks.
    pub fn leading(&self, rows: usize, cols: usize) -> Result<Protomatrix> {
        if rows > self.rows || cols > self.cols || rows == 0 || cols == 0 {
            return Err(Error::DimensionMismatch(format!(
                "leading {rows}x{cols} of a {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let data = (0..rows)
            .map(|r| self.row(r)[..cols].to_vec())
            .collect::<Vec<_>>();
        Protomatrix::from_rows(data)
    }
}

impl fmt::Display for Protomatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let line = self
                .row(r)
                .iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join(" ");
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}

/// A rate-compatible raptor-like family: precode, ordered extension rows,
/// punctured precode variables and a label.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PbrlFamily {
    pub name: String,
    pub precode: Protomatrix,
    pub lt_rows: Vec<Vec<u32>>,
    pub punctured: BTreeSet<usize>,
}

/// One rung of the rate ladder.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RatePoint {
    /// Number of transmitted extension variables (prefix length).
    pub m: usize,
    /// Proto information symbols: `n_p - r_p`.
    pub k_proto: usize,
    /// Transmitted proto symbols: `n_p - |punctured| + m`.
    pub n_proto_tx: usize,
    /// Exact rate `k_proto / n_proto_tx`.
    pub rate: Rational,
}

impl PbrlFamily {
    /// Builds a family, checking structural well-formedness (row lengths and
    /// index ranges). Design-rule violations are reported by [`validate`],
    /// not rejected here.
    ///
    /// [`validate`]: PbrlFamily::validate
    pub fn new(
        name: impl Into<String>,
        precode: Protomatrix,
        lt_rows: Vec<Vec<u32>>,
        punctured: BTreeSet<usize>,
    ) -> Result<Self> {
        let n_p = precode.cols();
        if precode.rows() >= n_p {
            return Err(Error::InvalidFamily(format!(
                "precode must have fewer rows than columns, got {}x{}",
                precode.rows(),
                n_p
            )));
        }
        if let Some(row) = lt_rows.iter().find(|r| r.len() != n_p) {
            return Err(Error::InvalidFamily(format!(
                "extension row of length {} does not match precode width {}",
                row.len(),
                n_p
            )));
        }
        if let Some(&idx) = punctured.iter().find(|&&i| i >= n_p) {
            return Err(Error::InvalidFamily(format!(
                "punctured index {idx} out of range for {n_p} precode variables"
            )));
        }
        if punctured.len() >= precode.rows() {
            // rate at m = 0 would reach or exceed 1
            return Err(Error::InvalidFamily(format!(
                "{} punctured variables with only {} precode checks",
                punctured.len(),
                precode.rows()
            )));
        }
        Ok(PbrlFamily {
            name: name.into(),
            precode,
            lt_rows,
            punctured,
        })
    }

    pub fn n_precode_vars(&self) -> usize {
        self.precode.cols()
    }

    pub fn n_precode_checks(&self) -> usize {
        self.precode.rows()
    }

    pub fn lt_len(&self) -> usize {
        self.lt_rows.len()
    }

    /// Assembled protomatrix at rate index `m`: precode on top, the first
    /// `m` extension rows below with an `m x m` identity on the right.
    pub fn assemble(&self, m: usize) -> Result<Protomatrix> {
        if m > self.lt_rows.len() {
            return Err(Error::RateIndexOutOfRange {
                m,
                available: self.lt_rows.len(),
            });
        }
        let n_p = self.n_precode_vars();
        let mut rows = Vec::with_capacity(self.precode.rows() + m);
        for r in 0..self.precode.rows() {
            let mut row = self.precode.row(r).to_vec();
            row.extend(std::iter::repeat(0).take(m));
            rows.push(row);
        }
        for j in 0..m {
            let mut row = self.lt_rows[j].clone();
            row.extend((0..m).map(|t| u32::from(t == j)));
            debug_assert_eq!(row.len(), n_p + m);
            rows.push(row);
        }
        Protomatrix::from_rows(rows)
    }

    pub fn rate_at(&self, m: usize) -> Result<RatePoint> {
        if m > self.lt_rows.len() {
            return Err(Error::RateIndexOutOfRange {
                m,
                available: self.lt_rows.len(),
            });
        }
        let k_proto = self.n_precode_vars() - self.n_precode_checks();
        let n_proto_tx = self.n_precode_vars() - self.punctured.len() + m;
        Ok(RatePoint {
            m,
            k_proto,
            n_proto_tx,
            rate: Rational::new(k_proto as u64, n_proto_tx as u64),
        })
    }

    /// Rate points for every prefix `m = 0..=lt_len`.
    pub fn rate_ladder(&self) -> Vec<RatePoint> {
        (0..=self.lt_rows.len())
            .map(|m| self.rate_at(m).expect("m in range"))
            .collect()
    }

    /// Design-rule and structure report; never fails.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        for c in 0..self.n_precode_vars() {
            if self.punctured.contains(&c) {
                continue;
            }
            let deg = self.precode.col_degree(c);
            if deg < 3 {
                violations.push(Violation::UnpuncturedLowDegree { col: c, degree: deg });
            }
        }
        for (i, row) in self.lt_rows.iter().enumerate() {
            if row.iter().all(|&v| v == 0) {
                violations.push(Violation::ZeroExtensionRow { row: i });
            }
        }
        for &idx in &self.punctured {
            if idx >= self.n_precode_vars() {
                violations.push(Violation::PuncturedOutOfRange { idx });
            }
        }

        let precode_parallel = (0..self.precode.rows())
            .flat_map(|r| self.precode.row(r))
            .filter(|&&v| v >= 2)
            .count();
        let lt_parallel = self
            .lt_rows
            .iter()
            .flatten()
            .filter(|&&v| v >= 2)
            .count();
        let lt_parallel_on_punctured = self
            .lt_rows
            .iter()
            .flat_map(|row| row.iter().enumerate())
            .filter(|(c, &v)| self.punctured.contains(c) && v >= 2)
            .count();

        ValidationReport {
            violations,
            precode_parallel,
            lt_parallel,
            lt_parallel_on_punctured,
        }
    }
}

/// A single design-rule violation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Violation {
    /// Unpunctured precode variable with total degree below three.
    UnpuncturedLowDegree { col: usize, degree: u32 },
    /// Extension row with no edges at all.
    ZeroExtensionRow { row: usize },
    /// Punctured index outside the precode columns.
    PuncturedOutOfRange { idx: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::UnpuncturedLowDegree { col, degree } => {
                write!(f, "unpunctured precode variable {col} has degree {degree} < 3")
            }
            Violation::ZeroExtensionRow { row } => write!(f, "extension row {row} is all zero"),
            Violation::PuncturedOutOfRange { idx } => {
                write!(f, "punctured index {idx} out of range")
            }
        }
    }
}

/// Outcome of [`PbrlFamily::validate`]: violations plus a parallel-edge
/// census (number of entries that are 2 or larger, per region).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    pub precode_parallel: usize,
    pub lt_parallel: usize,
    pub lt_parallel_on_punctured: usize,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}
