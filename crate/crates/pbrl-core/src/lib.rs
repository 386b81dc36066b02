//! Construction, optimization, lifting, encoding, decoding and Monte-Carlo
//! simulation of protograph-based raptor-like (PBRL) rate-compatible LDPC
//! code families for the binary-input AWGN channel.
//!
//! The pipeline, in dependency order:
//!
//! 1. [`protograph`] — protomatrices, families, rate ladders;
//! 2. [`rca`] — channel capacity, reciprocal energies, decoding thresholds;
//! 3. [`optimizer`] — greedy construction of extension rows;
//! 4. [`qc`] and [`girth`] — circulant lifting and cycle analysis;
//! 5. [`codec`] — expansion, systematic encoding, sum-product decoding;
//! 6. [`sim`] — AWGN Monte-Carlo frame/bit error sweeps.
//!
//! [`fixtures`] bundles the reference families, shift tables and threshold
//! tables used across the test suites; [`io`] holds the text formats.

pub mod codec;
pub mod error;
pub mod fixtures;
pub mod gf2;
pub mod girth;
pub mod io;
pub mod optimizer;
pub mod protograph;
pub mod qc;
pub mod rational;
pub mod rca;
pub mod sim;

pub use error::{Error, Result};
pub use protograph::{PbrlFamily, Protomatrix, RatePoint, ValidationReport};
pub use qc::{AceSchedule, Expanded, LiftStage, QcMatrix};
pub use rational::Rational;
pub use rca::{CapacityTable, RcaOptions, ThresholdOptions, ThresholdResult};
