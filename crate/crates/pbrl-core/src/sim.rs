//! BI-AWGN Monte-Carlo simulation: frame generation, counter-based seeding,
//! stopping rules, and gap-to-limit reporting.
//!
//! Frames are simulated in fixed-size batches with one RNG stream per frame
//! index, so counters are bit-identical across runs and worker counts.

use crate::codec::{select_transmit, Decoder, EncoderPlan, Schedule, SparseParityCheck};
use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::rca::CapacityTable;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

/// Frames per stopping-rule evaluation; runs always complete whole batches.
const BATCH: u64 = 512;

/// One operating point of the channel.
#[derive(Clone, Copy, Debug)]
pub struct ChannelConfig {
    pub ebn0_db: f64,
    /// Exact rate of the active rate point.
    pub rate: Rational,
    pub seed: u64,
}

impl ChannelConfig {
    /// Noise variance for unit-energy antipodal signaling:
    /// `sigma^2 = 1 / (2 R 10^(Eb/N0 / 10))`.
    pub fn sigma2(&self) -> f64 {
        1.0 / (2.0 * self.rate.value() * 10f64.powf(self.ebn0_db / 10.0))
    }

    pub fn sigma(&self) -> f64 {
        self.sigma2().sqrt()
    }

    /// Channel LLR scale: `llr = 2 y / sigma^2` (0 maps to +1, 1 to -1).
    pub fn llr_scale(&self) -> f64 {
        2.0 / self.sigma2()
    }
}

/// Stopping rule: whichever of the two limits is hit first, evaluated on
/// batch boundaries.
#[derive(Clone, Copy, Debug)]
pub struct StopRule {
    pub max_frames: u64,
    pub min_frame_errors: u64,
}

impl Default for StopRule {
    fn default() -> Self {
        StopRule {
            max_frames: 10_000_000,
            min_frame_errors: 100,
        }
    }
}

/// Accumulated counters of one operating point.
#[derive(Clone, Copy, Debug, Default, Serialize)]
pub struct PointResult {
    pub m: usize,
    pub rate_num: u64,
    pub rate_den: u64,
    pub ebn0_db: f64,
    pub frames: u64,
    pub frame_errors: u64,
    pub bit_errors: u64,
    /// Converged to a wrong codeword (accepted by the parity check).
    pub undetected_errors: u64,
    pub iteration_sum: u64,
    pub seed: u64,
}

impl PointResult {
    pub fn fer(&self) -> f64 {
        self.frame_errors as f64 / self.frames.max(1) as f64
    }

    pub fn ber(&self, k: usize) -> f64 {
        self.bit_errors as f64 / (self.frames.max(1) as f64 * k as f64)
    }

    pub fn mean_iterations(&self) -> f64 {
        self.iteration_sum as f64 / self.frames.max(1) as f64
    }

    /// 95% Wilson score interval for the frame error rate.
    pub fn fer_ci95(&self) -> (f64, f64) {
        wilson_ci(self.frame_errors, self.frames, 1.96)
    }
}

pub fn wilson_ci(successes: u64, trials: u64, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = (z / denom) * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    ((center - half).max(0.0), (center + half).min(1.0))
}

#[derive(Clone, Copy, Default)]
struct Counters {
    frame_errors: u64,
    bit_errors: u64,
    undetected: u64,
    iteration_sum: u64,
}

impl Counters {
    fn merge(self, other: Counters) -> Counters {
        Counters {
            frame_errors: self.frame_errors + other.frame_errors,
            bit_errors: self.bit_errors + other.bit_errors,
            undetected: self.undetected + other.undetected,
            iteration_sum: self.iteration_sum + other.iteration_sum,
        }
    }
}

/// Simulates one operating point until the stopping rule fires.
///
/// `h` must be the expansion at the rate index being simulated; `plan` is
/// the full-family encoder.
pub fn run_point(
    plan: &EncoderPlan,
    h: &SparseParityCheck,
    channel: &ChannelConfig,
    stop: &StopRule,
    schedule: Schedule,
    max_iter: u32,
) -> Result<PointResult> {
    if stop.max_frames == 0 {
        return Err(Error::DimensionMismatch("empty stopping rule".into()));
    }
    let decoder = Decoder::new(h);
    let sigma = channel.sigma();
    let llr_scale = channel.llr_scale();
    let m = h.m;

    let mut result = PointResult {
        m,
        rate_num: channel.rate.num(),
        rate_den: channel.rate.den(),
        ebn0_db: channel.ebn0_db,
        seed: channel.seed,
        ..PointResult::default()
    };

    let mut frame = 0u64;
    while frame < stop.max_frames && result.frame_errors < stop.min_frame_errors {
        let batch_end = (frame + BATCH).min(stop.max_frames);
        let batch: Counters = (frame..batch_end)
            .into_par_iter()
            .map(|f| {
                simulate_frame(plan, h, &decoder, f, channel.seed, sigma, llr_scale, schedule, max_iter)
            })
            .reduce(Counters::default, Counters::merge);
        result.frame_errors += batch.frame_errors;
        result.bit_errors += batch.bit_errors;
        result.undetected_errors += batch.undetected;
        result.iteration_sum += batch.iteration_sum;
        result.frames += batch_end - frame;
        frame = batch_end;
    }
    Ok(result)
}

#[allow(clippy::too_many_arguments)]
fn simulate_frame(
    plan: &EncoderPlan,
    h: &SparseParityCheck,
    decoder: &Decoder,
    frame: u64,
    seed: u64,
    sigma: f64,
    llr_scale: f64,
    schedule: Schedule,
    max_iter: u32,
) -> Counters {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(frame);
    let info: Vec<u8> = (0..plan.k).map(|_| rng.random::<bool>() as u8).collect();
    let word = plan.encode(&info);
    let tx = select_transmit(&word, h, h.m);
    let llr: Vec<f32> = tx
        .iter()
        .map(|&bit| {
            let x = if bit == 0 { 1.0 } else { -1.0 };
            let noise: f64 = rng.sample(StandardNormal);
            let y = x + sigma * noise;
            (llr_scale * y) as f32
        })
        .collect();
    let outcome = decoder
        .run(&llr, h.m, schedule, max_iter, false)
        .expect("finite LLRs");
    let decoded_info = plan.extract_info(&outcome.bits);
    let bit_errors = decoded_info
        .iter()
        .zip(&info)
        .filter(|(a, b)| a != b)
        .count() as u64;
    Counters {
        frame_errors: u64::from(bit_errors > 0),
        bit_errors,
        undetected: u64::from(outcome.converged && bit_errors > 0),
        iteration_sum: u64::from(outcome.iterations),
    }
}

/// Sweeps a grid of Eb/N0 points at one rate index.
#[allow(clippy::too_many_arguments)]
pub fn sweep(
    plan: &EncoderPlan,
    h: &SparseParityCheck,
    rate: Rational,
    ebn0_grid: &[f64],
    seed: u64,
    stop: &StopRule,
    schedule: Schedule,
    max_iter: u32,
) -> Result<Vec<PointResult>> {
    ebn0_grid
        .iter()
        .map(|&ebn0_db| {
            run_point(
                plan,
                h,
                &ChannelConfig {
                    ebn0_db,
                    rate,
                    seed,
                },
                stop,
                schedule,
                max_iter,
            )
        })
        .collect()
}

/// CSV rendering of sweep results (fixed column set).
pub fn results_to_csv(results: &[PointResult], k: usize) -> String {
    let mut out = String::from("rate,ebn0_db,frames,frame_errors,bit_errors,fer,ber,mean_iters,seed\n");
    for r in results {
        out.push_str(&format!(
            "{}/{},{:.4},{},{},{},{:.6e},{:.6e},{:.2},{}\n",
            r.rate_num,
            r.rate_den,
            r.ebn0_db,
            r.frames,
            r.frame_errors,
            r.bit_errors,
            r.fer(),
            r.ber(k),
            r.mean_iterations(),
            r.seed
        ));
    }
    out
}

/// One row of a gap report.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct GapRow {
    pub rate: Rational,
    pub required_db: f64,
    pub shannon_db: f64,
    pub gap_db: f64,
}

/// Gap between required SNR and the Shannon limit at each rate.
pub fn gap_report(table: &CapacityTable, required: &[(Rational, f64)]) -> Result<Vec<GapRow>> {
    required
        .iter()
        .map(|&(rate, required_db)| {
            let shannon_db = table.shannon_limit_ebn0(rate)?;
            Ok(GapRow {
                rate,
                required_db,
                shannon_db,
                gap_db: required_db - shannon_db,
            })
        })
        .collect()
}
