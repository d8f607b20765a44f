//! Lattice algorithms and exact quantum-subroutine simulation for bounded
//! distance decoding (BDD) on periodic integer lattices.
//!
//! A `q`-periodic lattice `L ⊆ Z^n` contains `q·Z^n`, so `L mod q` is a finite
//! abelian group and BDD can be solved through that group. This crate provides:
//!
//! - [`intlat`]: exact integer/rational lattice machinery (HNF, SNF,
//!   Gram-Schmidt, LLL, Babai, enumeration CVP, block-reduced CVP, basis
//!   completion, periodicity detection), all over arbitrary-precision
//!   integers and rationals.
//! - [`zqgroup`]: the finite-group view of a periodic lattice — group
//!   decomposition, the modular norm `‖·‖_q`, character phases, and
//!   brute-force group oracles.
//! - [`qsim`]: an exact classical simulator for the quantum subroutines:
//!   cube states, phased cube states, shift operators, phase estimation on
//!   approximate eigenvectors, and hidden-inner-product sampling, with two
//!   cross-checking backends (dense statevector and analytic Gram).
//! - [`reduction`]: the random self-reduction from worst-case mod-q BDD to
//!   random low-dimensional instances, plus the end-to-end solvers (the
//!   polynomial-time pipeline and the block-reduction trade-off).
//! - [`classical_rect`]: the classical counterpart for rectangle-periodic
//!   lattices: a reduced basis with a certified minimum Gram-Schmidt length,
//!   BDD within the certified radius, and a reportable SIVP smoothing bound.
//!
//! Everything is sized for "desk scale" verification: dimensions up to ~12,
//! moduli up to ~2^16, with hard enumeration budgets that fail loudly instead
//! of hanging. Monte Carlo loops run in parallel when the `parallel` feature
//! (default) is enabled; results are bit-reproducible from a seed either way.

pub mod classical_rect;
pub mod error;
pub mod exec;
pub mod experiment;
pub mod intlat;
pub mod qsim;
pub mod reduction;
pub mod rng;
pub mod zqgroup;

pub use error::{Error, Result};

/// Hard cap on visited nodes for every enumeration-based oracle.
pub const ENUM_NODE_BUDGET: u64 = 10_000_000;

/// Hard cap on group size `|G| = Π q_i` for brute-force group scans.
pub const GROUP_SCAN_BUDGET: u64 = 10_000_000;

/// Largest dense statevector (`q^n` amplitudes) the dense backend will hold.
pub const DENSE_AMP_BUDGET: u64 = 1 << 20;

/// Largest `T² · q^n` work factor the dense phase-estimation path accepts.
pub const DENSE_PE_BUDGET: u64 = 1 << 28;
