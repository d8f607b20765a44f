//! Exact rational Gram-Schmidt orthogonalization.

use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::intlat::matrix::{dot, norm_sq, IntMatrix, RatVec};

/// Orthogonalization of basis columns, all entries exact rationals.
///
/// Satisfies `b_i = b*_i + Σ_{j<i} mu[i][j] · b*_j` with the `b*_i` pairwise
/// orthogonal.
#[derive(Clone, Debug)]
pub struct GramSchmidtData {
    /// Orthogonal vectors `b*_i`, one per basis column.
    pub star: Vec<RatVec>,
    /// Lower-triangular coefficients; `mu[i][j]` defined for `j < i`.
    pub mu: Vec<RatVec>,
    /// Cached `‖b*_i‖²`.
    pub norms_sq: Vec<BigRational>,
}

impl GramSchmidtData {
    pub fn dim(&self) -> usize {
        self.star.len()
    }

    /// Exact `min_i ‖b*_i‖²`.
    pub fn min_norm_sq(&self) -> BigRational {
        self.norms_sq
            .iter()
            .min()
            .expect("nonempty basis")
            .clone()
    }

    /// Coefficients of `t` in the `b*` frame: `t = Σ x_i b*_i` (requires `t`
    /// in the span; the caller checks the residual if unsure).
    pub fn star_coordinates(&self, t: &[BigRational]) -> RatVec {
        self.star
            .iter()
            .zip(&self.norms_sq)
            .map(|(bs, ns)| dot(t, bs) / ns)
            .collect()
    }

    /// True iff `t` lies in the rational span of the basis.
    pub fn contains_in_span(&self, t: &[BigRational]) -> bool {
        let x = self.star_coordinates(t);
        let mut recon = vec![BigRational::zero(); t.len()];
        for (xi, bs) in x.iter().zip(&self.star) {
            for (r, b) in recon.iter_mut().zip(bs) {
                *r += xi * b;
            }
        }
        recon.iter().zip(t).all(|(a, b)| a == b)
    }
}

/// Gram-Schmidt on the columns of `b`. Errors when the columns are dependent.
pub fn gram_schmidt(b: &IntMatrix) -> Result<GramSchmidtData> {
    gram_schmidt_rational(&(0..b.cols()).map(|j| b.col_rational(j)).collect::<Vec<_>>())
}

/// Gram-Schmidt for rational columns (internal building block for LLL).
pub fn gram_schmidt_rational(cols: &[RatVec]) -> Result<GramSchmidtData> {
    let k = cols.len();
    let mut star: Vec<RatVec> = Vec::with_capacity(k);
    let mut mu: Vec<RatVec> = Vec::with_capacity(k);
    let mut norms: Vec<BigRational> = Vec::with_capacity(k);
    for i in 0..k {
        let mut v = cols[i].clone();
        let mut row = Vec::with_capacity(i);
        for j in 0..i {
            let m = dot(&cols[i], &star[j]) / &norms[j];
            for (ve, se) in v.iter_mut().zip(&star[j]) {
                *ve -= &m * se;
            }
            row.push(m);
        }
        let ns = norm_sq(&v);
        if ns.is_zero() {
            return Err(Error::RankDeficient);
        }
        star.push(v);
        mu.push(row);
        norms.push(ns);
    }
    Ok(GramSchmidtData {
        star,
        mu,
        norms_sq: norms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_traits::One;

    #[test]
    fn orthogonal_basis_fixed() {
        let b = IntMatrix::from_cols(&[vec![3, 0], vec![0, 5]]);
        let gs = gram_schmidt(&b).unwrap();
        assert_eq!(gs.star[0], b.col_rational(0));
        assert_eq!(gs.star[1], b.col_rational(1));
        assert!(gs.mu[1][0].is_zero());
    }

    #[test]
    fn shear_basis_exact_values() {
        // Columns (1,0) and (1,1): mu_21 = 1/2... here (1,1) against (1,0)
        // of [[1,1],[0,1]]: columns are (1,0) and (1,1).
        let b = IntMatrix::from_rows(&[vec![1, 1], vec![0, 1]]);
        let gs = gram_schmidt(&b).unwrap();
        assert_eq!(
            gs.mu[1][0],
            BigRational::new(BigInt::one(), BigInt::from(1))
        );
        // b*_2 = (0,1), norm² = 1 for this shear; the spec's 1/2 case is the
        // symmetric shear below.
        let b2 = IntMatrix::from_cols(&[vec![1, 1], vec![0, 1]]);
        let gs2 = gram_schmidt(&b2).unwrap();
        assert_eq!(
            gs2.mu[1][0],
            BigRational::new(BigInt::one(), BigInt::from(2))
        );
        assert_eq!(
            gs2.norms_sq[1],
            BigRational::new(BigInt::one(), BigInt::from(2))
        );
    }

    #[test]
    fn identity_is_fixed_point() {
        let gs = gram_schmidt(&IntMatrix::identity(3)).unwrap();
        for i in 0..3 {
            assert!(gs.norms_sq[i].is_one());
            for j in 0..i {
                assert!(gs.mu[i][j].is_zero());
            }
        }
    }

    #[test]
    fn reconstruction_identity_holds() {
        let b = IntMatrix::from_cols(&[vec![2, 1, 0], vec![1, 3, 1], vec![0, 1, 4]]);
        let gs = gram_schmidt(&b).unwrap();
        for i in 0..3 {
            let mut recon = gs.star[i].clone();
            for j in 0..i {
                for (r, s) in recon.iter_mut().zip(&gs.star[j]) {
                    *r += &gs.mu[i][j] * s;
                }
            }
            assert_eq!(recon, b.col_rational(i));
        }
        // Pairwise orthogonality, exact.
        for i in 0..3 {
            for j in 0..i {
                assert!(dot(&gs.star[i], &gs.star[j]).is_zero());
            }
        }
    }

    #[test]
    fn dependent_columns_error() {
        let b = IntMatrix::from_cols(&[vec![1, 2], vec![2, 4]]);
        assert!(matches!(gram_schmidt(&b), Err(Error::RankDeficient)));
    }

    #[test]
    fn span_membership() {
        let b = IntMatrix::from_cols(&[vec![1, 0, 0], vec![0, 1, 0]]);
        let gs = gram_schmidt(&b).unwrap();
        let inside = crate::intlat::matrix::parse_rational_vec("1/2 3 0").unwrap();
        let outside = crate::intlat::matrix::parse_rational_vec("1/2 3 1").unwrap();
        assert!(gs.contains_in_span(&inside));
        assert!(!gs.contains_in_span(&outside));
    }
}
