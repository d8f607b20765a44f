//! Block-reduced approximate CVP.
//!
//! LLL preprocessing, exact enumeration over the trailing β-block of the
//! Gram-Schmidt frame (starting at the block's longest `b*`), then
//! nearest-plane rounding for the leading coordinates. The output satisfies
//! `‖B·v − t‖ ≤ √m · β^{(m−1)/(β−1)} · dist(t, L)`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::intlat::enumerate::projected_tail_cvp;
use crate::intlat::gram::gram_schmidt;
use crate::intlat::lll::{default_delta, lll_reduce_with_transform};
use crate::intlat::matrix::{round_rational, IntMatrix};

/// Approximate CVP with trade-off parameter `beta ∈ [2, m]` (values above `m`
/// clamp to `m`, giving exact CVP). Returns coefficients in terms of the
/// *input* basis columns.
pub fn block_reduce_cvp(b: &IntMatrix, t: &[BigRational], beta: usize) -> Result<Vec<BigInt>> {
    if beta < 2 {
        return Err(Error::precondition("beta must be at least 2"));
    }
    let m = b.cols();
    let beta = beta.min(m);

    let (red, u) = lll_reduce_with_transform(b, &default_delta())?;
    let gs = gram_schmidt(&red)?;
    if !gs.contains_in_span(t) {
        return Err(Error::OutsideSpan);
    }
    let x = gs.star_coordinates(t);

    // k = index of the largest ‖b*‖ within the trailing β block (0-based;
    // smallest index on ties for determinism).
    let lo_block = m - beta;
    let k = (lo_block..m)
        .max_by(|&a, &b2| {
            gs.norms_sq[a]
                .cmp(&gs.norms_sq[b2])
                .then(b2.cmp(&a))
        })
        .expect("nonempty block");

    // Exact CVP on the projection orthogonal to span(b_1..b_k).
    let tail = projected_tail_cvp(&gs, &x, k)?;
    let mut v = vec![BigInt::zero(); m];
    v[k..m].clone_from_slice(&tail);

    // Nearest-plane for the leading coordinates j = k-1..0:
    // v_j = round(x_j − Σ_{i>j} v_i μ_{i,j}).
    for j in (0..k).rev() {
        let mut center = x[j].clone();
        for i in j + 1..m {
            if !v[i].is_zero() {
                center -= BigRational::from(v[i].clone()) * &gs.mu[i][j];
            }
        }
        v[j] = round_rational(&center);
    }

    // Map coefficients of the reduced basis back to the input basis.
    Ok(u.mul_vec(&v))
}
