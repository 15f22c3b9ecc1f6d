//! Exact dissipative dynamics of two entangled-coherent-state cavity modes
//! coupled to independent vacuum reservoirs, and the transfer of classical
//! and quantum correlations from the cavities to the reservoirs.
//!
//! Everything is closed-form: no integrator, no master equation. The crate
//! computes the two X-structured reduced density matrices, their entropic
//! correlation measures (mutual information, classical correlations,
//! discord), the sudden-transition times where the optimal measurement
//! branch switches, and the metastable decoherence-free-subspace window.

pub mod error;
pub mod quantinfo;
pub mod statedyn;
pub mod sweep;
pub mod transitions;
pub mod validate;

pub use error::{CavresError, Result};
pub use quantinfo::{
    classical_correlation_analytic, classical_correlation_bruteforce, correlation_record,
    discord, entropy, marginals, measure_and_condition, mutual_information,
    xstate_eigenvalues, Branch, CorrelationRecord, MeasurementDirection,
};
pub use statedyn::{
    amplitudes_at, cavity_state, overlap_factors, reservoir_state, AmplitudePair, SystemParams,
    TwoQubitXState,
};
pub use transitions::{
    detect_branch_crossing, detect_dfs_window, dfs_duration, sudden_transition_time_cavities,
    sudden_transition_time_reservoirs, transition_report, Partition, TransitionReport,
};
