//! Exact classical simulation of the quantum subroutines: cube states,
//! phased cube states, shift operators, phase estimation on approximate
//! eigenvectors, and hidden-inner-product sampling.
//!
//! Two backends compute the same measurement distributions — a dense
//! statevector for small `q^n` and an analytic Gram backend built from cube
//! overlap products — and are cross-checked against each other in the tests.

pub mod hip;
pub mod pcs;
pub mod pe;
pub mod state;

pub use hip::{eps_ev_from_promise, max_feasible_eps1, sample_hip, sample_hip_with_label, HipSample, PePlan};
pub use pcs::{make_pcs, make_pcs_with_label, Backend, GramPcs, PcsBackend, PcsModel};
pub use pe::{
    pe_distribution, pe_distribution_from_autocorrelation, phase_estimate,
    phase_register_distribution, round_to_zq, sample_outcome, PeConfig,
};
pub use state::{cube_overlap_1d, make_cube_state, shift_apply, DenseState};
