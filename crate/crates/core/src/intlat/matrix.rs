//! Dense matrices over arbitrary-precision integers, plus the exact rational
//! vector helpers the lattice algorithms need.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Rational column vector.
pub type RatVec = Vec<BigRational>;

/// Dense row-major integer matrix. Lattice bases store generators as columns.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "dimensions must be positive");
        IntMatrix {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Builds from row-major `i64` literals; rows must be equal length.
    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        assert!(!rows.is_empty() && !rows[0].is_empty());
        let r = rows.len();
        let c = rows[0].len();
        Self::from_fn(r, c, |i, j| BigInt::from(rows[i][j]))
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_cols(cols: &[Vec<i64>]) -> Self {
        assert!(!cols.is_empty() && !cols[0].is_empty());
        let c = cols.len();
        let r = cols[0].len();
        Self::from_fn(r, c, |i, j| BigInt::from(cols[j][i]))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn col(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn col_rational(&self, j: usize) -> RatVec {
        (0..self.rows)
            .map(|i| BigRational::from(self[(i, j)].clone()))
            .collect()
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hconcat(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.rows, other.rows);
        IntMatrix::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self[(i, j)].clone()
            } else {
                other[(i, j - self.cols)].clone()
            }
        })
    }

    pub fn transpose(&self) -> IntMatrix {
        IntMatrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows);
        IntMatrix::from_fn(self.rows, other.cols, |i, j| {
            (0..self.cols).map(|k| &self[(i, k)] * &other[(k, j)]).sum()
        })
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| (0..self.cols).map(|k| &self[(i, k)] * &v[k]).sum())
            .collect()
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.entries.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// col_b += k * col_a
    pub fn add_col_mul(&mut self, b: usize, a: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let t = &self[(i, a)] * k;
            self[(i, b)] += t;
        }
    }

    /// row_b += k * row_a
    pub fn add_row_mul(&mut self, b: usize, a: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let t = &self[(a, j)] * k;
            self[(b, j)] += t;
        }
    }

    pub fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            let v = -self[(i, j)].clone();
            self[(i, j)] = v;
        }
    }

    pub fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -self[(i, j)].clone();
            self[(i, j)] = v;
        }
    }

    /// Rank over the rationals, by fraction-free elimination on a copy.
    pub fn rank(&self) -> usize {
        let mut m: Vec<Vec<BigRational>> = (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| BigRational::from(self[(i, j)].clone()))
                    .collect()
            })
            .collect();
        let mut rank = 0;
        let mut row = 0;
        for col in 0..self.cols {
            let pivot = (row..self.rows).find(|&i| !m[i][col].is_zero());
            let Some(p) = pivot else { continue };
            m.swap(row, p);
            for i in 0..self.rows {
                if i != row && !m[i][col].is_zero() {
                    let f = &m[i][col] / &m[row][col];
                    for j in col..self.cols {
                        let t = &m[row][j] * &f;
                        m[i][j] -= t;
                    }
                }
            }
            rank += 1;
            row += 1;
            if row == self.rows {
                break;
            }
        }
        rank
    }

    /// Determinant by Bareiss fraction-free elimination. Square matrices only.
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "det needs a square matrix");
        let n = self.rows;
        let mut m: Vec<Vec<BigInt>> = (0..n).map(|i| (0..n).map(|j| self[(i, j)].clone()).collect()).collect();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m[k][k].is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                    return BigInt::zero();
                };
                m.swap(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                    m[i][j] = num / &prev;
                }
            }
            prev = m[k][k].clone();
        }
        sign * m[n - 1][n - 1].clone()
    }

    pub fn det_abs(&self) -> BigInt {
        self.det().abs()
    }

    /// Exact inverse as a rational matrix. Errors when singular.
    pub fn inverse_rational(&self) -> Result<Vec<RatVec>> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a: Vec<RatVec> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| BigRational::from(self[(i, j)].clone()))
                    .collect()
            })
            .collect();
        let mut inv: Vec<RatVec> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            BigRational::one()
                        } else {
                            BigRational::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        for col in 0..n {
            let pivot = (col..n).find(|&i| !a[i][col].is_zero()).ok_or(Error::RankDeficient)?;
            a.swap(col, pivot);
            inv.swap(col, pivot);
            let d = a[col][col].clone();
            for j in 0..n {
                a[col][j] /= &d;
                inv[col][j] /= &d;
            }
            for i in 0..n {
                if i != col && !a[i][col].is_zero() {
                    let f = a[i][col].clone();
                    for j in 0..n {
                        let t = &a[col][j] * &f;
                        a[i][j] -= t;
                        let t = &inv[col][j] * &f;
                        inv[i][j] -= t;
                    }
                }
            }
        }
        // Column-major view back to row-major: `inv` already holds rows of A^{-1}.
        Ok(inv)
    }

    /// Solves `self · x = b` exactly over the rationals (square nonsingular).
    pub fn solve_rational(&self, b: &RatVec) -> Result<RatVec> {
        let inv = self.inverse_rational()?;
        let n = self.rows;
        Ok((0..n)
            .map(|i| (0..n).map(|j| &inv[i][j] * &b[j]).sum())
            .collect())
    }

    /// True when the matrix is unimodular (integer inverse, det ±1).
    pub fn is_unimodular(&self) -> bool {
        self.rows == self.cols && self.det().abs().is_one()
    }

    /// Serializes as the text format: "rows cols" then row-major entries.
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.rows, self.cols);
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self[(i, j)].to_string()).collect();
            s.push_str(&row.join(" "));
            s.push('\n');
        }
        s
    }

    pub fn from_text(text: &str) -> Result<IntMatrix> {
        let mut it = text.split_whitespace();
        let rows: usize = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::precondition("matrix text: missing rows"))?;
        let cols: usize = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::precondition("matrix text: missing cols"))?;
        if rows == 0 || cols == 0 {
            return Err(Error::precondition("matrix text: zero dimension"));
        }
        let mut m = IntMatrix::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                let tok = it
                    .next()
                    .ok_or_else(|| Error::precondition("matrix text: too few entries"))?;
                m[(i, j)] = BigInt::from_str(tok)
                    .map_err(|_| Error::precondition(format!("matrix text: bad integer {tok:?}")))?;
            }
        }
        Ok(m)
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        &self.entries[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        &mut self.entries[i * self.cols + j]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self[(i, j)].to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Parses a rational vector in the text format: entries like `3` or `-7/2`.
pub fn parse_rational_vec(text: &str) -> Result<RatVec> {
    text.split_whitespace()
        .map(|tok| {
            BigRational::from_str(tok)
                .map_err(|_| Error::precondition(format!("bad rational {tok:?}")))
        })
        .collect()
}

pub fn format_rational_vec(v: &[BigRational]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

/// Exact squared Euclidean norm of a rational vector.
pub fn norm_sq(v: &[BigRational]) -> BigRational {
    v.iter().map(|x| x * x).sum()
}

/// Exact inner product of rational vectors.
pub fn dot(a: &[BigRational], b: &[BigRational]) -> BigRational {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn sub(a: &[BigRational], b: &[BigRational]) -> RatVec {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn int_vec_to_rational(v: &[BigInt]) -> RatVec {
    v.iter().map(|x| BigRational::from(x.clone())).collect()
}

/// Rounds a rational to the nearest integer, halves away from zero.
pub fn round_rational(x: &BigRational) -> BigInt {
    x.round().to_integer()
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent determinant oracle: cofactor expansion along the first row.
    pub fn det_cofactor(m: &IntMatrix) -> BigInt {
        let n = m.rows();
        assert_eq!(n, m.cols());
        if n == 1 {
            return m[(0, 0)].clone();
        }
        let mut acc = BigInt::zero();
        for j in 0..n {
            if m[(0, j)].is_zero() {
                continue;
            }
            let minor = IntMatrix::from_fn(n - 1, n - 1, |r, c| {
                m[(r + 1, if c < j { c } else { c + 1 })].clone()
            });
            let term = &m[(0, j)] * det_cofactor(&minor);
            if j % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        acc
    }

    #[test]
    fn det_matches_cofactor_oracle() {
        let cases = [
            IntMatrix::from_rows(&[vec![2, 0], vec![0, 4]]),
            IntMatrix::from_rows(&[vec![1, 3], vec![0, 1]]),
            IntMatrix::from_rows(&[vec![3, 1, 4], vec![1, 5, 9], vec![2, 6, 5]]),
            IntMatrix::from_rows(&[
                vec![0, 2, -1, 3],
                vec![5, 0, 2, 1],
                vec![-2, 1, 1, 0],
                vec![4, -3, 0, 2],
            ]),
        ];
        for m in &cases {
            assert_eq!(m.det(), det_cofactor(m));
        }
    }

    #[test]
    fn det_singular_is_zero() {
        let m = IntMatrix::from_rows(&[vec![1, 2], vec![2, 4]]);
        assert!(m.det().is_zero());
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn inverse_roundtrip() {
        let m = IntMatrix::from_rows(&[vec![2, 1], vec![0, 3]]);
        let inv = m.inverse_rational().unwrap();
        // m * inv == I
        for i in 0..2 {
            for j in 0..2 {
                let s: BigRational = (0..2)
                    .map(|k| BigRational::from(m[(i, k)].clone()) * &inv[k][j])
                    .sum();
                let expect = if i == j {
                    BigRational::one()
                } else {
                    BigRational::zero()
                };
                assert_eq!(s, expect);
            }
        }
    }

    #[test]
    fn text_roundtrip() {
        let m = IntMatrix::from_rows(&[vec![1, -2, 3], vec![0, 5, -6]]);
        let back = IntMatrix::from_text(&m.to_text()).unwrap();
        assert_eq!(m, back);
    }

    #[test]
    fn rational_vec_text() {
        let v = parse_rational_vec("3 -7/2 0").unwrap();
        assert_eq!(format_rational_vec(&v), "3 -7/2 0");
    }

    #[test]
    fn round_half_away_from_zero() {
        let h = BigRational::new(BigInt::from(1), BigInt::from(2));
        assert_eq!(round_rational(&h), BigInt::from(1));
        assert_eq!(round_rational(&-h), BigInt::from(-1));
    }
}
