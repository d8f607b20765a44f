//! Finite-group view of q-periodic lattices.
//!
//! A lattice with `q·Z^n ⊆ L` is fully described by the finite abelian group
//! `G = L mod q ≤ Z_q^n`. This module carries the group decomposition into
//! cyclic factors, the modular norm `‖·‖_q`, character phases, and the
//! brute-force group oracles used to verify everything else.

pub mod decomp;
pub mod oracle;
pub mod zq;

pub use decomp::{decompose, FiniteGroupDecomp};
pub use oracle::{group_cvp_exact, lambda1_group, lift_solution, GroupCvpResult};
pub use zq::ZqVector;
