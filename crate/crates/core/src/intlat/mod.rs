//! Exact integer/rational lattice core.
//!
//! Canonical forms (HNF/SNF), Gram-Schmidt, LLL, Babai nearest plane, basis
//! completion, enumeration CVP, block-reduced approximate CVP, and
//! periodicity detection — all in exact arbitrary-precision arithmetic, with
//! hard node budgets on the enumeration oracles.

pub mod babai;
pub mod block;
pub mod complete;
pub mod enumerate;
pub mod gram;
pub mod hnf;
pub mod lattice;
pub mod lll;
pub mod matrix;

pub use babai::babai_nearest_plane;
pub use block::block_reduce_cvp;
pub use complete::mg_complete;
pub use enumerate::{exact_cvp_auto, exact_cvp_enum, shortest_vector_sq, EnumSolution};
pub use gram::{gram_schmidt, GramSchmidtData};
pub use hnf::{hnf, hnf_with_transform, integer_kernel, snf};
pub use lattice::{periodicity, ratio_to_f64, rect_periodicity, Lattice};
pub use lll::{default_delta, is_size_reduced, lll_reduce, lll_reduce_with_transform, lovasz_holds};
pub use matrix::{IntMatrix, RatVec};
