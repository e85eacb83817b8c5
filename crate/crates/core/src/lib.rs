//! Adaptive threshold detection for binary ASK over a Rayleigh-scattering
//! optical-fiber channel.
//!
//! The receiver fits a parametric distribution to the pooled received
//! photo-voltages, takes the maximum-likelihood Rayleigh scale `sigma` and
//! decides `1` whenever `y >= sigma + epsilon`. No knowledge of the transmit
//! levels or of the apriori bit probabilities is needed at the receiver.
//!
//! Layout:
//!
//! - [`distfit`]: Rayleigh and Rician densities, their MLEs, BIC model selection.
//! - [`detector`]: threshold construction, the detection rule, baselines, `epsilon` tuning.
//! - [`channel`]: seeded simulator of the bit source, ASK modulation and the fiber.
//! - [`harness`]: BER evaluation, `epsilon` / separation sweeps, histograms, CSV output.
//! - [`cli`]: the `fiberthresh` command-line front end.
//!
//! Runnable walkthroughs of each capability live in the crate's `examples/`
//! directory (`cargo run --example <name>`).

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod channel;
pub mod cli;
pub mod detector;
pub mod distfit;
mod error;
pub mod harness;

pub use channel::{LinkConfig, TransmissionRecord};
pub use detector::{DetectedBits, Threshold};
pub use distfit::{Family, FitResult, Params, RayleighParams, RicianParams, SampleVector};
pub use error::{Error, Result};
pub use harness::{BerReport, EpsilonPolicy, Histogram, HistogramSpec, SweepTable};
