//! Greedy construction of the extension part of a family: each step adds
//! one check node plus its degree-one variable, choosing the connection row
//! with the lowest decoding threshold at the new rate.

use crate::error::{Error, Result};
use crate::protograph::{PbrlFamily, Protomatrix};
use crate::rca::{threshold, CapacityTable, ThresholdOptions};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeSet;

/// Exhaustive enumeration is used up to this many candidate rows; beyond
/// it a seeded random subset of `candidate_cap` rows is drawn.
const EXHAUSTIVE_LIMIT: usize = 200_000;

/// How the punctured precode columns participate in candidate rows.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum PunctRule {
    /// No parallel edges anywhere in the new row (entries capped at 1).
    ForbidParallel,
    /// Punctured entries range over 0..=2; threshold ties prefer rows with
    /// the least weight on punctured columns.
    TiebreakAvoid,
    /// Punctured entries fixed at 1.
    ForceSingle,
    /// Punctured entries fixed at 1 on even rows and 2 on odd rows.
    ForceAlternatingPairs,
    /// Punctured entries fixed per row index (the last value repeats).
    PerRowSchedule(Vec<u32>),
}

impl PunctRule {
    /// Entry values allowed on a punctured column for extension row `row`.
    fn punctured_values(&self, row: usize, max_entry: u32) -> Vec<u32> {
        match self {
            PunctRule::ForbidParallel => (0..=max_entry.min(1)).collect(),
            PunctRule::TiebreakAvoid => (0..=2).collect(),
            PunctRule::ForceSingle => vec![1],
            PunctRule::ForceAlternatingPairs => vec![if row % 2 == 1 { 2 } else { 1 }],
            PunctRule::PerRowSchedule(v) => {
                vec![v.get(row).or(v.last()).copied().unwrap_or(1)]
            }
        }
    }

    fn unpunctured_cap(&self, max_entry: u32) -> u32 {
        match self {
            PunctRule::ForbidParallel => max_entry.min(1),
            _ => max_entry,
        }
    }
}

impl std::str::FromStr for PunctRule {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "forbid-parallel" => Ok(PunctRule::ForbidParallel),
            "tiebreak-avoid" => Ok(PunctRule::TiebreakAvoid),
            "force-single" => Ok(PunctRule::ForceSingle),
            "force-alternating-pairs" => Ok(PunctRule::ForceAlternatingPairs),
            other => {
                if let Some(sched) = other.strip_prefix("per-row:") {
                    let values = sched
                        .split(',')
                        .map(|t| {
                            t.trim().parse().map_err(|_| Error::Parse {
                                line: 0,
                                msg: format!("bad schedule value `{t}`"),
                            })
                        })
                        .collect::<Result<Vec<u32>>>()?;
                    if values.is_empty() {
                        return Err(Error::Parse {
                            line: 0,
                            msg: "empty per-row schedule".into(),
                        });
                    }
                    Ok(PunctRule::PerRowSchedule(values))
                } else {
                    Err(Error::Parse {
                        line: 0,
                        msg: format!("unknown punctured-column rule `{other}`"),
                    })
                }
            }
        }
    }
}

/// Search policy for one family build.
#[derive(Clone, Debug, Serialize)]
pub struct ExtensionPolicy {
    /// Cap on entries of unpunctured columns (1 or 2).
    pub max_entry: u32,
    pub punct_rule: PunctRule,
    /// Number of extension rows to generate.
    pub target_rows: usize,
    /// Candidate sample size when the space exceeds the exhaustive limit.
    pub candidate_cap: Option<usize>,
    /// Seed for candidate subsampling.
    pub seed: u64,
}

impl ExtensionPolicy {
    pub fn validate(&self) -> Result<()> {
        if !(1..=2).contains(&self.max_entry) {
            return Err(Error::InvalidFamily(format!(
                "max_entry {} outside 1..=2",
                self.max_entry
            )));
        }
        if self.target_rows == 0 {
            return Err(Error::InvalidFamily("target_rows must be positive".into()));
        }
        Ok(())
    }
}

/// Record of one greedy step.
#[derive(Clone, Debug, Serialize)]
pub struct StepRecord {
    /// Rate index after this step.
    pub m: usize,
    pub rate: String,
    pub candidates_evaluated: usize,
    /// Lowest threshold over all evaluated candidates (dB).
    pub best_threshold_db: f64,
    /// Threshold of the accepted row (within bisection precision of best).
    pub chosen_threshold_db: f64,
    pub chosen_row: Vec<u32>,
    /// Candidates within one bisection precision of the best.
    pub tie_count: usize,
    pub tiebreak: String,
}

/// Full audit trail of a build.
#[derive(Clone, Debug, Default, Serialize)]
pub struct ExtensionTrace {
    pub steps: Vec<StepRecord>,
}

/// Adds one extension row to the family under `policy`, returning the
/// extended family and the step record. Candidate evaluation parallelizes
/// over rows; the outcome does not depend on the worker count.
pub fn extend_once(
    table: &CapacityTable,
    family: &PbrlFamily,
    policy: &ExtensionPolicy,
    opts: &ThresholdOptions,
) -> Result<(PbrlFamily, StepRecord)> {
    policy.validate()?;
    let row_idx = family.lt_len();
    let n_p = family.n_precode_vars();

    // per-column value ranges
    let ranges: Vec<Vec<u32>> = (0..n_p)
        .map(|c| {
            if family.punctured.contains(&c) {
                policy.punct_rule.punctured_values(row_idx, policy.max_entry)
            } else {
                (0..=policy.punct_rule.unpunctured_cap(policy.max_entry)).collect()
            }
        })
        .collect();

    let candidates = enumerate_candidates(&ranges, policy)?;
    if candidates.is_empty() {
        return Err(Error::EmptyCandidateSpace);
    }

    // assemble the extended matrix once per candidate and search thresholds
    let punctured = family.punctured.clone();
    let evaluated: Vec<(f64, &Vec<u32>)> = candidates
        .par_iter()
        .map(|row| {
            let mut trial = family.clone();
            trial.lt_rows.push(row.clone());
            let proto = trial.assemble(trial.lt_len())?;
            let res = threshold(table, &proto, &punctured, opts)?;
            Ok((res.ebn0_db, row))
        })
        .collect::<Result<_>>()?;

    let best = evaluated
        .iter()
        .map(|&(t, _)| t)
        .fold(f64::INFINITY, f64::min);
    let tie_window = opts.precision_db;
    let ties: Vec<&(f64, &Vec<u32>)> = evaluated
        .iter()
        .filter(|&&(t, _)| t <= best + tie_window)
        .collect();

    let punct_weight = |row: &[u32]| -> u32 {
        family
            .punctured
            .iter()
            .map(|&c| row[c])
            .sum()
    };
    let chosen = if matches!(policy.punct_rule, PunctRule::TiebreakAvoid) {
        // least weight on the punctured columns, then lexicographic
        ties.iter()
            .min_by_key(|(_, row)| (punct_weight(row), (*row).clone()))
            .unwrap()
    } else {
        ties.iter().min_by_key(|(_, row)| (*row).clone()).unwrap()
    };

    let mut extended = family.clone();
    extended.lt_rows.push(chosen.1.clone());
    let rate = extended.rate_at(extended.lt_len())?;
    let record = StepRecord {
        m: extended.lt_len(),
        rate: rate.rate.to_string(),
        candidates_evaluated: evaluated.len(),
        best_threshold_db: best,
        chosen_threshold_db: chosen.0,
        chosen_row: chosen.1.clone(),
        tie_count: ties.len(),
        tiebreak: format!("{:?}", policy.punct_rule),
    };
    Ok((extended, record))
}

/// Runs [`extend_once`] `policy.target_rows` times starting from a bare
/// precode.
pub fn build_family(
    table: &CapacityTable,
    name: impl Into<String>,
    precode: Protomatrix,
    punctured: BTreeSet<usize>,
    policy: &ExtensionPolicy,
    opts: &ThresholdOptions,
) -> Result<(PbrlFamily, ExtensionTrace)> {
    policy.validate()?;
    let mut family = PbrlFamily::new(name, precode, Vec::new(), punctured)?;
    let report = family.validate();
    if !report.is_ok() {
        return Err(Error::InvalidFamily(format!(
            "precode fails validation: {:?}",
            report.violations
        )));
    }
    let mut trace = ExtensionTrace::default();
    for _ in 0..policy.target_rows {
        let (next, record) = extend_once(table, &family, policy, opts)?;
        family = next;
        trace.steps.push(record);
    }
    Ok((family, trace))
}

/// All candidate rows (excluding all-zero), lexicographically ordered; a
/// seeded sample without replacement when the space exceeds the exhaustive
/// limit or the configured cap.
fn enumerate_candidates(ranges: &[Vec<u32>], policy: &ExtensionPolicy) -> Result<Vec<Vec<u32>>> {
    let total: u128 = ranges.iter().map(|r| r.len() as u128).product();
    if total == 0 {
        return Err(Error::EmptyCandidateSpace);
    }
    let cap = policy.candidate_cap.unwrap_or(EXHAUSTIVE_LIMIT);
    let exhaustive = total <= EXHAUSTIVE_LIMIT as u128 && total <= cap as u128;

    // rank -> row in mixed radix, most significant digit first, so rank
    // order equals lexicographic order
    let decode = |mut rank: u128| -> Vec<u32> {
        let mut row = vec![0u32; ranges.len()];
        for c in (0..ranges.len()).rev() {
            let base = ranges[c].len() as u128;
            row[c] = ranges[c][(rank % base) as usize];
            rank /= base;
        }
        row
    };

    if exhaustive {
        let rows: Vec<Vec<u32>> = (0..total)
            .map(decode)
            .filter(|row| row.iter().any(|&v| v != 0))
            .collect();
        if rows.is_empty() {
            return Err(Error::EmptyCandidateSpace);
        }
        return Ok(rows);
    }

    let mut rng = ChaCha12Rng::seed_from_u64(policy.seed);
    let want = cap.min(EXHAUSTIVE_LIMIT);
    let mut picked = std::collections::BTreeSet::new();
    let mut guard = 0usize;
    while picked.len() < want && guard < want * 20 {
        let rank = rng.random_range(0..total);
        if decode(rank).iter().any(|&v| v != 0) {
            picked.insert(rank);
        }
        guard += 1;
    }
    if picked.is_empty() {
        return Err(Error::EmptyCandidateSpace);
    }
    Ok(picked.into_iter().map(decode).collect())
}
