//! LLL basis reduction with exact rational Gram-Schmidt data.
//!
//! No floating-point variant: every μ and ‖b*‖² is an exact rational, so the
//! size-reduction and Lovász conditions are decided without tolerances.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::Result;
use crate::intlat::gram::{gram_schmidt, GramSchmidtData};
use crate::intlat::matrix::{round_rational, IntMatrix};

/// Standard LLL parameter; Lovász ratio Δ = 1/√(δ − 1/4) = √2 at δ = 3/4.
pub fn default_delta() -> BigRational {
    BigRational::new(BigInt::from(3), BigInt::from(4))
}

/// LLL-reduces the columns of `b`. `delta` must lie in (1/4, 1].
pub fn lll_reduce(b: &IntMatrix, delta: &BigRational) -> Result<IntMatrix> {
    Ok(lll_reduce_with_transform(b, delta)?.0)
}

/// LLL reduction returning `(reduced, u)` with `reduced = b · u`, `u` unimodular.
pub fn lll_reduce_with_transform(
    b: &IntMatrix,
    delta: &BigRational,
) -> Result<(IntMatrix, IntMatrix)> {
    let quarter = BigRational::new(BigInt::one(), BigInt::from(4));
    assert!(
        *delta > quarter && *delta <= BigRational::one(),
        "delta must be in (1/4, 1]"
    );
    let k_cols = b.cols();
    let mut basis = b.clone();
    let mut u = IntMatrix::identity(k_cols);
    // Initial full rank check; recomputed GS below stays valid under the
    // integer column operations.
    let mut gs = gram_schmidt(&basis)?;

    let mut k = 1;
    while k < k_cols {
        // Size-reduce column k against all earlier columns.
        for j in (0..k).rev() {
            let r = round_rational(&gs.mu[k][j]);
            if !r.is_zero() {
                basis.add_col_mul(k, j, &-r.clone());
                u.add_col_mul(k, j, &-r);
                gs = gram_schmidt(&basis)?;
            }
        }
        // Lovász condition between columns k-1 and k.
        let lhs = &gs.norms_sq[k] + &gs.mu[k][k - 1] * &gs.mu[k][k - 1] * &gs.norms_sq[k - 1];
        if lhs >= delta * &gs.norms_sq[k - 1] {
            k += 1;
        } else {
            basis.swap_cols(k, k - 1);
            u.swap_cols(k, k - 1);
            gs = gram_schmidt(&basis)?;
            k = k.max(2) - 1;
        }
    }
    Ok((basis, u))
}

/// Checks `|mu_ij| <= 1/2` for all `j < i`.
pub fn is_size_reduced(gs: &GramSchmidtData) -> bool {
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    gs.mu
        .iter()
        .all(|row| row.iter().all(|m| m.abs() <= half))
}

/// Checks the Lovász condition with parameter `delta` on consecutive pairs.
pub fn lovasz_holds(gs: &GramSchmidtData, delta: &BigRational) -> bool {
    (1..gs.dim()).all(|k| {
        let lhs = &gs.norms_sq[k] + &gs.mu[k][k - 1] * &gs.mu[k][k - 1] * &gs.norms_sq[k - 1];
        lhs >= delta * &gs.norms_sq[k - 1]
    })
}
