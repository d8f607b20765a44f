//! Random q-ary instance generation.

use num_bigint::BigInt;
use rand::Rng;

use crate::error::Result;
use crate::intlat::hnf::hnf;
use crate::intlat::lattice::Lattice;
use crate::intlat::matrix::IntMatrix;
use crate::zqgroup::decomp::{decompose, FiniteGroupDecomp};

/// A random q-ary lattice: uniform generator matrix, the lattice spanned by
/// `[G̃ | q·I]`, its canonical decomposition, exact λ₁, and primitivity.
#[derive(Clone, Debug)]
pub struct QaryInstance {
    /// Raw uniform generator matrix, row-major `m × r`.
    pub gtilde: Vec<u64>,
    pub m: usize,
    pub r: usize,
    pub q: u64,
    pub lattice: Lattice,
    pub decomp: FiniteGroupDecomp,
    /// Exact λ₁(L)² (capped by q², the norm of the q·e_i generators).
    pub lambda1_sq: u128,
    /// Whether the rows of G̃ span `Z_q^r`.
    pub primitive: bool,
}

/// Draws `G̃` uniformly from `Z_q^{m×r}` and assembles the q-ary lattice.
pub fn random_qary(m: usize, r: usize, q: u64, rng: &mut impl Rng) -> Result<QaryInstance> {
    assert!(m >= r, "q-ary instance needs m >= r");
    let gtilde: Vec<u64> = (0..m * r).map(|_| rng.gen_range(0..q)).collect();
    build_qary(m, r, q, gtilde)
}

/// Assembles the instance for a given generator matrix (used by tests and by
/// deterministic replay).
pub fn build_qary(m: usize, r: usize, q: u64, gtilde: Vec<u64>) -> Result<QaryInstance> {
    assert_eq!(gtilde.len(), m * r);
    let cols = IntMatrix::from_fn(m, r + m, |i, j| {
        if j < r {
            BigInt::from(gtilde[i * r + j])
        } else if j == r + i {
            BigInt::from(q)
        } else {
            BigInt::from(0)
        }
    });
    let basis = hnf(&cols)?;
    let lattice = Lattice::new(basis)?;
    let decomp = decompose(&lattice, q)?;
    let group_l1 = decomp.lambda1_sq()?;
    let lambda1_sq = group_l1.min(q as u128 * q as u128);
    let primitive = is_primitive(m, r, q, &gtilde)?;
    Ok(QaryInstance {
        gtilde,
        m,
        r,
        q,
        lattice,
        decomp,
        lambda1_sq,
        primitive,
    })
}

/// `Z_q^m · G̃ = Z_q^r` ⟺ the rows of `G̃` generate all of `Z_q^r` ⟺
/// HNF([G̃ᵀ | q·I_r]) = I_r.
pub fn is_primitive(m: usize, r: usize, q: u64, gtilde: &[u64]) -> Result<bool> {
    if r == 0 {
        return Ok(true);
    }
    let cols = IntMatrix::from_fn(r, m + r, |i, j| {
        if j < m {
            // Column j is row j of G̃ transposed.
            BigInt::from(gtilde[j * r + i])
        } else if j == m + i {
            BigInt::from(q)
        } else {
            BigInt::from(0)
        }
    });
    Ok(hnf(&cols)? == IntMatrix::identity(r))
}
