//! Babai's nearest plane algorithm.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::intlat::gram::{gram_schmidt, GramSchmidtData};
use crate::intlat::matrix::{dot, round_rational, IntMatrix, RatVec};

/// Nearest-plane on basis columns: returns integer coefficients `c` with
/// `‖B·c − t‖ ≤ 2^{n/2}·dist(t, L)`, and exact recovery whenever
/// `dist(t, L) < min_i ‖b*_i‖ / 2`.
///
/// `t` must lie in the rational span of the basis.
pub fn babai_nearest_plane(b: &IntMatrix, t: &[BigRational]) -> Result<Vec<BigInt>> {
    let gs = gram_schmidt(b)?;
    if !gs.contains_in_span(t) {
        return Err(Error::OutsideSpan);
    }
    Ok(nearest_plane_coeffs(b, &gs, t))
}

/// Core of nearest-plane without the span check: size-reduces `t` against the
/// basis columns from last to first. When `t` has a component outside the
/// span, that component is simply carried through untouched.
pub fn nearest_plane_coeffs(b: &IntMatrix, gs: &GramSchmidtData, t: &[BigRational]) -> Vec<BigInt> {
    let k = b.cols();
    let mut resid: RatVec = t.to_vec();
    let mut coeffs = vec![BigInt::zero(); k];
    for j in (0..k).rev() {
        let x = dot(&resid, &gs.star[j]) / &gs.norms_sq[j];
        let c = round_rational(&x);
        if !c.is_zero() {
            let cr = BigRational::from(c.clone());
            for (re, be) in resid.iter_mut().zip(b.col_rational(j)) {
                *re -= &cr * be;
            }
        }
        coeffs[j] = c;
    }
    coeffs
}
