//! Truncated two-mode Fock-space reference simulator.
//!
//! States live in the span of `|m_S, m_E⟩` with `m_S + m_E ≤ n_max`. The beam splitter
//! conserves total photon number and zero-temperature loss only removes photons, so this
//! basis represents those evolutions without additional truncation error.

pub mod basis;
pub mod channel;
pub mod io;
pub mod lindblad;
pub mod oracle;
pub mod passive;
pub mod single_mode;
pub mod states;

pub use basis::TwoModeBasis;
pub use oracle::{
    dephased_cat, evolve_product, oracle_moments, oracle_records, EvolvedState, Method,
    OracleConfig, OracleModeReport, OracleRun, TwoModeDensityMatrix,
};
pub use single_mode::SingleModeState;
