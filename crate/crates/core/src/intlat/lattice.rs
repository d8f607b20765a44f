//! Full-rank integer lattices: periodicity detection and the λ₁ oracle.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};

use crate::error::{Error, Result};
use crate::intlat::enumerate::shortest_vector_sq;
use crate::intlat::matrix::IntMatrix;

/// Full-rank integer lattice presented by basis columns.
#[derive(Clone, Debug)]
pub struct Lattice {
    basis: IntMatrix,
}

impl Lattice {
    pub fn new(basis: IntMatrix) -> Result<Lattice> {
        if basis.rows() != basis.cols() || basis.rank() != basis.rows() {
            return Err(Error::RankDeficient);
        }
        Ok(Lattice { basis })
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn det_abs(&self) -> BigInt {
        self.basis.det_abs()
    }

    /// Exact squared λ₁ by enumeration (desk scale only).
    pub fn lambda1_sq(&self) -> Result<BigRational> {
        Ok(shortest_vector_sq(&self.basis)?.dist_sq)
    }

    /// λ₁ as a float (square root of the exact squared value).
    pub fn lambda1(&self) -> Result<f64> {
        let sq = self.lambda1_sq()?;
        Ok(ratio_to_f64(&sq).sqrt())
    }
}

pub fn ratio_to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        x.numer().to_f64().unwrap_or(f64::MAX) / x.denom().to_f64().unwrap_or(1.0)
    })
}

/// Minimal `q ≥ 1` with `q·Z^n ⊆ L`: the lcm of the denominators of the
/// entries of `B⁻¹`. Divides `det(L)`.
pub fn periodicity(b: &IntMatrix) -> Result<BigInt> {
    let inv = b.inverse_rational()?;
    let mut q = BigInt::one();
    for row in &inv {
        for x in row {
            q = q.lcm(x.denom());
        }
    }
    Ok(q.abs())
}

/// Per-axis minimal `r_i > 0` with `r_i·e_i ∈ L`: the lcm of the denominators
/// of column `i` of `B⁻¹`. Each `r_i` divides the periodicity.
pub fn rect_periodicity(b: &IntMatrix) -> Result<Vec<BigInt>> {
    let inv = b.inverse_rational()?;
    let n = b.rows();
    Ok((0..n)
        .map(|i| {
            // r_i · B⁻¹ e_i integral: column i of the inverse.
            let mut r = BigInt::one();
            for row in inv.iter() {
                r = r.lcm(row[i].denom());
            }
            r.abs()
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    #[test]
    fn periodicity_scaled_identity() {
        let b = IntMatrix::from_rows(&[vec![2, 0], vec![0, 2]]);
        assert_eq!(periodicity(&b).unwrap(), BigInt::from(2));
        assert_eq!(periodicity(&IntMatrix::identity(3)).unwrap(), BigInt::one());
    }

    #[test]
    fn periodicity_skewed() {
        // Columns (2,0),(1,3): q = 6 = det.
        let b = IntMatrix::from_cols(&[vec![2, 0], vec![1, 3]]);
        assert_eq!(periodicity(&b).unwrap(), BigInt::from(6));
        assert_eq!(
            rect_periodicity(&b).unwrap(),
            vec![BigInt::from(2), BigInt::from(6)]
        );
    }

    #[test]
    fn periodicity_divides_det_and_is_minimal() {
        let cases = [
            IntMatrix::from_cols(&[vec![2, 0], vec![1, 3]]),
            IntMatrix::from_cols(&[vec![4, 2], vec![0, 6]]),
            IntMatrix::from_cols(&[vec![3, 1, 0], vec![0, 3, 1], vec![0, 0, 3]]),
        ];
        for b in &cases {
            let q = periodicity(b).unwrap();
            let det = b.det_abs();
            assert!((&det % &q).is_zero(), "q must divide det");
            // Divisor scan: q is the least positive integer with q·Z^n ⊆ L,
            // i.e. q·B⁻¹ integral.
            let inv = b.inverse_rational().unwrap();
            let contains = |m: &BigInt| -> bool {
                inv.iter()
                    .flatten()
                    .all(|x| (x * BigRational::from(m.clone())).is_integer())
            };
            assert!(contains(&q));
            let mut d = BigInt::one();
            while &d < &q {
                if (&q % &d).is_zero() {
                    assert!(!contains(&d) || d == q);
                }
                d += 1;
            }
        }
    }

    #[test]
    fn rect_periodicity_diagonal() {
        let b = IntMatrix::from_rows(&[vec![2, 0], vec![0, 4]]);
        assert_eq!(
            rect_periodicity(&b).unwrap(),
            vec![BigInt::from(2), BigInt::from(4)]
        );
        assert_eq!(
            rect_periodicity(&IntMatrix::identity(2)).unwrap(),
            vec![BigInt::one(), BigInt::one()]
        );
    }

    #[test]
    fn rect_divides_q() {
        let b = IntMatrix::from_cols(&[vec![2, 0], vec![1, 3]]);
        let q = periodicity(&b).unwrap();
        for r in rect_periodicity(&b).unwrap() {
            assert!((&q % &r).is_zero());
        }
    }

    #[test]
    fn lambda1_examples() {
        let l = Lattice::new(IntMatrix::from_rows(&[vec![5]])).unwrap();
        assert_eq!(l.lambda1_sq().unwrap(), BigRational::from(BigInt::from(25)));
        assert!((l.lambda1().unwrap() - 5.0).abs() < 1e-12);

        let l = Lattice::new(IntMatrix::from_rows(&[vec![2, 0], vec![0, 4]])).unwrap();
        assert_eq!(l.lambda1_sq().unwrap(), BigRational::from(BigInt::from(4)));
    }

    #[test]
    fn rank_deficient_rejected() {
        assert!(Lattice::new(IntMatrix::from_rows(&[vec![1, 2], vec![2, 4]])).is_err());
    }
}
