//! Hermite and Smith normal forms over the integers.
//!
//! The column-style HNF here is lower triangular with positive diagonal and,
//! within each row, off-diagonal entries reduced modulo the pivot. It is the
//! canonical basis of the integer column span, so two generating sets span
//! the same lattice iff their HNFs are equal.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::intlat::matrix::IntMatrix;

/// Column-style Hermite normal form of `m` (full row rank required).
///
/// Returns the square lower-triangular basis `H` with `h_ii > 0` and
/// `0 <= h_ij < h_ii` for `j < i`, spanning the same integer column span.
pub fn hnf(m: &IntMatrix) -> Result<IntMatrix> {
    Ok(hnf_with_transform(m)?.0)
}

/// HNF together with the unimodular column transform: `m · v = [h | 0]`.
///
/// `v` is `cols×cols`; the first `rows` columns of `m·v` equal `h`, the rest
/// are zero. Useful for pulling solutions back to the original generators.
pub fn hnf_with_transform(m: &IntMatrix) -> Result<(IntMatrix, IntMatrix)> {
    let n = m.rows();
    let c = m.cols();
    let mut w = m.clone();
    let mut v = IntMatrix::identity(c);

    for i in 0..n {
        // Clear row i to a single positive pivot at column i using gcd steps.
        let pivot = (i..c).find(|&j| !w[(i, j)].is_zero());
        let Some(p) = pivot else {
            return Err(Error::RankDeficient);
        };
        w.swap_cols(i, p);
        v.swap_cols(i, p);
        for j in i + 1..c {
            while !w[(i, j)].is_zero() {
                let q = floor_div(&w[(i, i)], &w[(i, j)]);
                w.add_col_mul(i, j, &-q.clone());
                v.add_col_mul(i, j, &-q);
                w.swap_cols(i, j);
                v.swap_cols(i, j);
            }
        }
        if w[(i, i)].is_negative() {
            w.negate_col(i);
            v.negate_col(i);
        }
        debug_assert!(w[(i, i)].is_positive());
        // Reduce earlier columns in this row into [0, pivot).
        for j in 0..i {
            let q = floor_div(&w[(i, j)], &w[(i, i)]);
            w.add_col_mul(j, i, &-q.clone());
            v.add_col_mul(j, i, &-q);
        }
    }

    let h = IntMatrix::from_fn(n, n, |i, j| w[(i, j)].clone());
    // Everything beyond column n must have been eliminated.
    for j in n..c {
        for i in 0..n {
            debug_assert!(w[(i, j)].is_zero());
        }
    }
    Ok((h, v))
}

/// Floor division on BigInt (rounds toward negative infinity).
fn floor_div(a: &BigInt, b: &BigInt) -> BigInt {
    a.div_floor(b)
}

/// Smith normal form: `u · m · v = d` with `u, v` unimodular and `d` diagonal
/// with nonnegative entries satisfying `d_i | d_{i+1}`.
pub fn snf(m: &IntMatrix) -> (IntMatrix, IntMatrix, IntMatrix) {
    let rows = m.rows();
    let cols = m.cols();
    let mut d = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);

    let k_max = rows.min(cols);
    let mut k = 0;
    while k < k_max {
        // Move some nonzero entry into (k, k); done if the rest is zero.
        let mut found = false;
        'search: for i in k..rows {
            for j in k..cols {
                if !d[(i, j)].is_zero() {
                    d.swap_rows(k, i);
                    u.swap_rows(k, i);
                    d.swap_cols(k, j);
                    v.swap_cols(k, j);
                    found = true;
                    break 'search;
                }
            }
        }
        if !found {
            break;
        }

        loop {
            // Clear row k with column gcd steps.
            for j in k + 1..cols {
                while !d[(k, j)].is_zero() {
                    let q = d[(k, j)].div_floor(&d[(k, k)]);
                    d.add_col_mul(j, k, &-q.clone());
                    v.add_col_mul(j, k, &-q);
                    if !d[(k, j)].is_zero() {
                        d.swap_cols(k, j);
                        v.swap_cols(k, j);
                    }
                }
            }
            // Clear column k with row gcd steps; may reintroduce row entries.
            let mut dirty = false;
            for i in k + 1..rows {
                while !d[(i, k)].is_zero() {
                    let q = d[(i, k)].div_floor(&d[(k, k)]);
                    d.add_row_mul(i, k, &-q.clone());
                    u.add_row_mul(i, k, &-q);
                    if !d[(i, k)].is_zero() {
                        d.swap_rows(k, i);
                        u.swap_rows(k, i);
                        dirty = true;
                    }
                }
            }
            if !dirty && (k + 1..cols).all(|j| d[(k, j)].is_zero()) {
                break;
            }
        }

        // Divisibility fix-up: if d_kk does not divide a later entry, fold
        // that row in and redo this pivot.
        let mut redo = false;
        'div: for i in k + 1..rows {
            for j in k + 1..cols {
                if !(&d[(i, j)] % &d[(k, k)]).is_zero() {
                    d.add_row_mul(k, i, &BigInt::one());
                    u.add_row_mul(k, i, &BigInt::one());
                    redo = true;
                    break 'div;
                }
            }
        }
        if redo {
            continue;
        }

        if d[(k, k)].is_negative() {
            d.negate_row(k);
            u.negate_row(k);
        }
        k += 1;
    }

    (u, d, v)
}

/// Basis of the integer kernel `{x ∈ Z^cols : m·x = 0}` as matrix columns.
/// Returns `None` when the kernel is trivial.
pub fn integer_kernel(m: &IntMatrix) -> Option<IntMatrix> {
    let (_, d, v) = snf(m);
    let k_max = m.rows().min(m.cols());
    let mut free = Vec::new();
    for j in 0..m.cols() {
        let diag_zero = j >= k_max || d[(j, j)].is_zero();
        if diag_zero {
            free.push(j);
        }
    }
    if free.is_empty() {
        return None;
    }
    Some(IntMatrix::from_fn(m.cols(), free.len(), |i, idx| {
        v[(i, free[idx])].clone()
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_hnf_shape(h: &IntMatrix) {
        for i in 0..h.rows() {
            assert!(h[(i, i)].is_positive());
            for j in i + 1..h.cols() {
                assert!(h[(i, j)].is_zero(), "upper part must vanish");
            }
            for j in 0..i {
                assert!(!h[(i, j)].is_negative() && h[(i, j)] < h[(i, i)]);
            }
        }
    }

    #[test]
    fn hnf_identity() {
        let h = hnf(&IntMatrix::identity(3)).unwrap();
        assert_eq!(h, IntMatrix::identity(3));
    }

    #[test]
    fn hnf_preserves_lattice_and_det() {
        // diag(2,4) augmented with 4I spans the same lattice, det 8.
        let b = IntMatrix::from_rows(&[vec![2, 0, 4, 0], vec![0, 4, 0, 4]]);
        let h = hnf(&b).unwrap();
        assert_hnf_shape(&h);
        assert_eq!(h.det_abs(), BigInt::from(8));
    }

    #[test]
    fn hnf_unimodular_transform() {
        let b = IntMatrix::from_rows(&[vec![2, 0, 4, 0], vec![0, 4, 0, 4]]);
        let (h, v) = hnf_with_transform(&b).unwrap();
        assert!(v.is_unimodular());
        let prod = b.mul(&v);
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(prod[(i, j)], h[(i, j)]);
            }
            for j in 2..4 {
                assert!(prod[(i, j)].is_zero());
            }
        }
    }

    /// Oracle: enumerate all 2x2 unimodular transforms with entries in
    /// [-bound, bound] and check one maps `a` onto `b`.
    fn column_equivalent_2x2(a: &IntMatrix, b: &IntMatrix, bound: i64) -> bool {
        for p in -bound..=bound {
            for q in -bound..=bound {
                for r in -bound..=bound {
                    for s in -bound..=bound {
                        if (p * s - q * r).abs() != 1 {
                            continue;
                        }
                        let u = IntMatrix::from_rows(&[vec![p, q], vec![r, s]]);
                        if &a.mul(&u) == b {
                            return true;
                        }
                    }
                }
            }
        }
        false
    }

    #[test]
    fn hnf_canonicalizes_unimodular_variants() {
        let m = IntMatrix::from_rows(&[vec![1, 3], vec![0, 1]]);
        let h = hnf(&m).unwrap();
        assert_eq!(h, IntMatrix::identity(2));
        assert!(column_equivalent_2x2(&m, &h, 3));
    }

    #[test]
    fn hnf_rank_deficient_errors() {
        let m = IntMatrix::from_rows(&[vec![1, 2], vec![2, 4]]);
        assert!(matches!(hnf(&m), Err(Error::RankDeficient)));
    }

    fn assert_snf_valid(m: &IntMatrix) {
        let (u, d, v) = snf(m);
        assert!(u.is_unimodular());
        assert!(v.is_unimodular());
        assert_eq!(u.mul(m).mul(&v), d);
        let k = m.rows().min(m.cols());
        for i in 0..d.rows() {
            for j in 0..d.cols() {
                if i != j {
                    assert!(d[(i, j)].is_zero());
                }
            }
        }
        for i in 0..k.saturating_sub(1) {
            if !d[(i + 1, i + 1)].is_zero() || !d[(i, i)].is_zero() {
                assert!(
                    (&d[(i + 1, i + 1)] % (&d[(i, i)] + BigInt::from((d[(i, i)]).is_zero() as u64))).is_zero()
                        || d[(i, i)].is_zero() == d[(i + 1, i + 1)].is_zero() && !d[(i, i)].is_zero() && (&d[(i + 1, i + 1)] % &d[(i, i)]).is_zero()
                        || d[(i, i)].is_zero()
                );
            }
        }
    }

    #[test]
    fn snf_already_diagonal() {
        let m = IntMatrix::from_rows(&[vec![2, 0], vec![0, 4]]);
        let (_, d, _) = snf(&m);
        assert_eq!(d[(0, 0)], BigInt::from(2));
        assert_eq!(d[(1, 1)], BigInt::from(4));
        assert_snf_valid(&m);
    }

    #[test]
    fn snf_coprime_diagonal() {
        let m = IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]]);
        let (_, d, _) = snf(&m);
        assert_eq!(d[(0, 0)], BigInt::one());
        assert_eq!(d[(1, 1)], BigInt::from(6));
        assert_eq!(m.det_abs(), d.det_abs());
        assert_snf_valid(&m);
    }

    #[test]
    fn snf_zero_matrix() {
        let m = IntMatrix::zeros(2, 2);
        let (u, d, v) = snf(&m);
        assert_eq!(d, IntMatrix::zeros(2, 2));
        assert!(u.is_unimodular() && v.is_unimodular());
    }

    #[test]
    fn snf_random_small() {
        let cases = [
            IntMatrix::from_rows(&[vec![4, 6, 2], vec![6, 12, 8], vec![2, 8, 16]]),
            IntMatrix::from_rows(&[vec![0, 5], vec![7, 0], vec![3, 3]]),
            IntMatrix::from_rows(&[vec![12, 8, 4, 0], vec![6, 9, 3, 3]]),
        ];
        for m in &cases {
            assert_snf_valid(m);
        }
    }

    #[test]
    fn kernel_of_singular() {
        let m = IntMatrix::from_rows(&[vec![1, 2, 3], vec![2, 4, 6]]);
        let k = integer_kernel(&m).unwrap();
        assert_eq!(k.rows(), 3);
        for j in 0..k.cols() {
            let prod = m.mul_vec(&k.col(j));
            assert!(prod.iter().all(|x| x.is_zero()));
        }
        assert_eq!(k.cols(), 2);
    }

    #[test]
    fn kernel_trivial_for_full_rank() {
        let m = IntMatrix::identity(3);
        assert!(integer_kernel(&m).is_none());
    }
}
