//! Reversible decoherence of a cat state coupled to a squeezed environment mode.
//!
//! Closed forms for the two-mode Gaussian-cat dynamics ([`dynamics`]), phase-space
//! functions ([`phase_space`]) and decoherence measures ([`metrics`]), a truncated
//! Fock-space reference simulator ([`fock`]) and a probe-measurement model ([`probe`]).

pub mod config;
pub mod dynamics;
pub mod error;
pub mod fock;
pub mod metrics;
pub mod phase_space;
pub mod probe;
pub mod quadrature;

pub use config::{CatSign, ExperimentConfig, Mode};
pub use dynamics::{
    evolve, evolve_g, rescaled_time, CatFrame, DerivedRates, ModePair, ModeParams, Propagator,
};
pub use error::{Error, Result};
pub use fock::{OracleConfig, SingleModeState, TwoModeDensityMatrix};
pub use metrics::{closed_form_record, closed_form_records, MetricsRecord};
pub use phase_space::{CatWignerParams, Gaussian, PhasePoint};
pub use probe::ProbeEstimate;
