//! Net-load forecasting under data-integrity attacks.
//!
//! A neural-network load forecaster and a gradient-boosting PV forecaster
//! are trained on competition-format data, then retrained and re-evaluated
//! while seeded Gaussian noise is injected into the load measurements and
//! the weather inputs. Seven scenarios cover which stream is attacked and in
//! which partition (training, testing or both); the results compare the
//! error of a fully exposed deployment against one where only the weather
//! feed is reachable.
//!
//! Modules, bottom up:
//!
//! * [`dataio`]: CSV ingestion, virtual weather station, calendar features,
//!   chronological 70/30 datasets.
//! * [`mlp`]: one-hidden-layer sigmoid network with backpropagation.
//! * [`gbm`]: squared-error gradient boosting over CART trees.
//! * [`attack`]: seeded noise injection and a z-score screen.
//! * [`scenario`]: the seven scenarios, metrics, suite runs and artifacts.
//! * [`cli`]: the `ingest`, `run` and `validate` commands.
//! * [`synth`]: synthetic files in the competition layouts for demos and CI.

pub mod attack;
pub mod cli;
pub mod dataio;
pub mod error;
pub mod gbm;
pub mod mlp;
pub mod scenario;
pub mod synth;

pub use error::{Error, Result};
