//! Random self-reduction and end-to-end BDD solvers.
//!
//! `sample_bdd` maps a worst-case mod-q BDD instance to a random q-ary
//! instance in a chosen dimension `m`, preserving the hidden coefficients.
//! On top of it sit the two solvers: the polynomial-time pipeline
//! (LLL + nearest plane on the reduced instance) and the trade-off pipeline
//! (block-reduced CVP with parameter β), both guarded by the modular-norm
//! acceptance gate that discards wrong candidates.

pub mod qary;
pub mod sample;
pub mod solve;

pub use qary::{random_qary, QaryInstance};
pub use sample::{sample_bdd, BddInstance, PlantedSolution, ReducedInstance, SampleBddConfig};
pub use solve::{solve_bdd_poly, solve_bdd_tradeoff, LadderStep, SolveOptions, SolveOutcome};
