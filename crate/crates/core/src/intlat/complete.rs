//! Completion of linearly independent lattice vectors into a full basis with
//! controlled norms.
//!
//! Given a basis `B` of `L` and independent `s_1 ≤ … ≤ s_n` in `L`, produces
//! a basis `r_1..r_n` of `L` with, for every `k`:
//!   `span(r_1..r_k) = span(s_1..s_k)`,
//!   `‖r*_k‖ ≤ ‖s*_k‖`, and
//!   `‖r_k‖ ≤ max{(√k/2)·‖s_k‖, ‖s_k‖}`.
//!
//! Construction: `r_k` is a generator of the rank-one quotient
//! `(L ∩ span_k)/(L ∩ span_{k-1})`. When `s_k` itself generates the quotient
//! it is kept as-is (giving `‖r_k‖ = ‖s_k‖`); otherwise a generator is
//! size-reduced against `r_1..r_{k-1}` by nearest-plane, leaving a span
//! component of squared length at most `(1/4)·Σ_{j<k}‖r*_j‖²`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::intlat::babai::nearest_plane_coeffs;
use crate::intlat::gram::{gram_schmidt, gram_schmidt_rational};
use crate::intlat::hnf::integer_kernel;
use crate::intlat::matrix::{dot, int_vec_to_rational, norm_sq, IntMatrix, RatVec};

/// Completes sorted independent lattice vectors `s` (columns) into a basis of
/// `L(b)` satisfying the four guarantees above.
pub fn mg_complete(b: &IntMatrix, s: &IntMatrix) -> Result<IntMatrix> {
    let n = b.cols();
    if s.cols() != n || s.rows() != b.rows() {
        return Err(Error::precondition(
            "mg_complete expects a full set of independent lattice vectors",
        ));
    }
    // Coefficients of each s_j in basis b; must be integer (s_j ∈ L).
    let mut coeffs = IntMatrix::zeros(n, n);
    for j in 0..n {
        let w = b.solve_rational(&s.col_rational(j))?;
        for (i, wi) in w.iter().enumerate() {
            if !wi.is_integer() {
                return Err(Error::precondition("s contains a vector outside the lattice"));
            }
            coeffs[(i, j)] = wi.to_integer();
        }
    }
    if coeffs.rank() != n {
        return Err(Error::precondition("s vectors are linearly dependent"));
    }
    // Sorted by norm.
    let s_norms: Vec<BigRational> = (0..n).map(|j| norm_sq(&s.col_rational(j))).collect();
    for k in 1..n {
        if s_norms[k] < s_norms[k - 1] {
            return Err(Error::precondition("s vectors must be sorted by norm"));
        }
    }

    // Incrementally build r_1..r_k with span(r_1..r_k) = span(s_1..s_k) and
    // (r_1..r_k) a basis of L ∩ span(s_1..s_k).
    let mut r_cols: Vec<Vec<BigInt>> = Vec::with_capacity(n);
    for k in 1..=n {
        // Coefficient sublattice C_k = {c ∈ Z^n : B·c ∈ span(s_1..s_k)}.
        // B·c ∈ span_k  ⟺  coeffs of B·c in the s* frame vanish beyond k,
        // which is a rational linear condition; clear denominators to get an
        // integer matrix and take its integer kernel.
        let gs_s = gram_schmidt_rational(
            &(0..k).map(|j| s.col_rational(j)).collect::<Vec<_>>(),
        )?;
        // Conditions: ⟨B·c, p_i⟩ = 0 for a rational basis p_i of span_k^⊥.
        // Extend the orthogonal frame s*_1..s*_k by projected axis vectors.
        let dim = b.rows();
        let frame: Vec<RatVec> = gs_s.star.clone();
        let mut perp: Vec<RatVec> = Vec::new();
        for axis in 0..dim {
            let mut e = vec![BigRational::zero(); dim];
            e[axis] = BigRational::one();
            // Project e orthogonally to everything collected so far.
            let mut v = e;
            for f in frame.iter().chain(perp.iter()) {
                let fn_sq = norm_sq(f);
                let c = dot(&v, f) / fn_sq;
                for (ve, fe) in v.iter_mut().zip(f) {
                    *ve -= &c * fe;
                }
            }
            if !norm_sq(&v).is_zero() {
                perp.push(v);
            }
            if frame.len() + perp.len() == dim {
                break;
            }
        }
        debug_assert_eq!(perp.len(), dim - k);

        let r_k = if k == dim && perp.is_empty() {
            // span_k is everything: quotient generator comes from L itself.
            find_quotient_generator(b, &r_cols, k, s, &gs_s)?
        } else {
            // Integer condition matrix: rows are cleared-denominator ⟨B·c, p_i⟩.
            let mut rows: Vec<Vec<BigInt>> = Vec::new();
            for p in &perp {
                // Row over coefficients c: entry_j = ⟨b_j, p⟩.
                let mut row_rat: Vec<BigRational> = Vec::with_capacity(n);
                for j in 0..n {
                    row_rat.push(dot(&b.col_rational(j), p));
                }
                let lcm = row_rat
                    .iter()
                    .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
                rows.push(
                    row_rat
                        .iter()
                        .map(|x| x.numer() * (&lcm / x.denom()))
                        .collect(),
                );
            }
            let cond = IntMatrix::from_fn(rows.len(), n, |i, j| rows[i][j].clone());
            let kernel = integer_kernel(&cond)
                .ok_or_else(|| Error::precondition("span condition has trivial kernel"))?;
            if kernel.cols() != k {
                return Err(Error::precondition("unexpected sublattice rank"));
            }
            // Basis of L ∩ span_k as actual vectors.
            let lk = b.mul(&kernel);
            find_quotient_generator(&lk, &r_cols, k, s, &gs_s)?
        };
        r_cols.push(r_k);
    }

    Ok(IntMatrix::from_fn(b.rows(), n, |i, j| r_cols[j][i].clone()))
}

/// Finds `r_k`: a generator of `(L ∩ span_k)/(L ∩ span_{k-1})`, keeping `s_k`
/// itself when it generates the quotient, else nearest-plane-reducing a
/// generator against `r_1..r_{k-1}`.
///
/// `lk` is a basis of `L ∩ span_k` (as ambient vectors); `r_prev` are the
/// already-fixed `r_1..r_{k-1}`; `gs_s` is the GS of `s_1..s_k`.
fn find_quotient_generator(
    lk: &IntMatrix,
    r_prev: &[Vec<BigInt>],
    k: usize,
    s: &IntMatrix,
    gs_s: &crate::intlat::gram::GramSchmidtData,
) -> Result<Vec<BigInt>> {
    let dim = lk.rows();
    let sk_star = &gs_s.star[k - 1];
    let sk_star_sq = &gs_s.norms_sq[k - 1];
    // Projection of each basis vector of L∩span_k onto the s*_k direction,
    // as a multiple of s*_k.
    let mut mults: Vec<BigRational> = Vec::with_capacity(lk.cols());
    for j in 0..lk.cols() {
        mults.push(dot(&lk.col_rational(j), sk_star) / sk_star_sq);
    }
    // The projections form the rank-one lattice {m·s*_k}: m multiples of the
    // gcd g of the (rational) mults. Compute g and an integer combination
    // attaining it.
    let lcm_den = mults
        .iter()
        .fold(BigInt::one(), |acc, m| acc.lcm(m.denom()));
    let ints: Vec<BigInt> = mults
        .iter()
        .map(|m| m.numer() * (&lcm_den / m.denom()))
        .collect();
    let (g, combo) = xgcd_many(&ints);
    if g.is_zero() {
        return Err(Error::precondition("quotient generator degenerate"));
    }
    // Generator u = Σ combo_j · lk_j has projection multiple g/lcm_den.
    let mut u = vec![BigInt::zero(); dim];
    for (j, c) in combo.iter().enumerate() {
        if !c.is_zero() {
            for (ue, le) in u.iter_mut().zip(lk.col(j)) {
                *ue += c * le;
            }
        }
    }
    // s_k projects to multiple 1 of s*_k by construction; d = 1/(g/lcm_den).
    let gen_mult = BigRational::new(g.clone(), lcm_den.clone());
    let d = (BigRational::one() / &gen_mult).abs();
    debug_assert!(d.is_integer());
    if d.to_integer().is_one() {
        // s_k itself generates the quotient; keep it (‖r_k‖ = ‖s_k‖).
        return Ok(s.col(k - 1));
    }
    if r_prev.is_empty() {
        // No span component to reduce; normalize sign for determinism.
        if u.iter().find(|x| !x.is_zero()).map(|x| x.is_negative()) == Some(true) {
            for e in u.iter_mut() {
                *e = -e.clone();
            }
        }
        return Ok(u);
    }
    // Nearest-plane size reduction of u against r_1..r_{k-1}.
    let r_mat = IntMatrix::from_fn(dim, r_prev.len(), |i, j| r_prev[j][i].clone());
    let gs_r = gram_schmidt(&r_mat)?;
    let t = int_vec_to_rational(&u);
    let c = nearest_plane_coeffs(&r_mat, &gs_r, &t);
    let corr = r_mat.mul_vec(&c);
    for (ue, ce) in u.iter_mut().zip(corr) {
        *ue -= ce;
    }
    Ok(u)
}

/// Extended gcd of a list: returns `(g, x)` with `Σ x_i·a_i = g ≥ 0`.
fn xgcd_many(a: &[BigInt]) -> (BigInt, Vec<BigInt>) {
    let mut g = BigInt::zero();
    let mut coeff = vec![BigInt::zero(); a.len()];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        if g.is_zero() {
            g = ai.abs();
            coeff[i] = if ai.is_negative() {
                -BigInt::one()
            } else {
                BigInt::one()
            };
            continue;
        }
        let e = g.extended_gcd(ai);
        // e.gcd = e.x·g + e.y·ai
        for c in coeff.iter_mut() {
            *c *= &e.x;
        }
        coeff[i] = e.y.clone();
        g = e.gcd;
    }
    (g, coeff)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intlat::hnf::hnf;

    fn assert_mg_guarantees(b: &IntMatrix, s: &IntMatrix, r: &IntMatrix) {
        let n = b.cols();
        // Same lattice.
        assert_eq!(hnf(b).unwrap(), hnf(r).unwrap());
        let gs_s = gram_schmidt(s).unwrap();
        let gs_r = gram_schmidt(r).unwrap();
        for k in 0..n {
            // ‖r*_k‖ ≤ ‖s*_k‖
            assert!(
                gs_r.norms_sq[k] <= gs_s.norms_sq[k],
                "GS guarantee failed at {k}"
            );
            // ‖r_k‖ ≤ max{(√k/2)‖s_k‖, ‖s_k‖}  (1-indexed k)
            let rk_sq = norm_sq(&r.col_rational(k));
            let sk_sq = norm_sq(&s.col_rational(k));
            let k1 = BigRational::from(BigInt::from((k + 1) as u64));
            let four = BigRational::from(BigInt::from(4));
            let bound = (&k1 / &four * &sk_sq).max(sk_sq.clone());
            assert!(rk_sq <= bound, "norm guarantee failed at {k}");
            // span(r_1..r_k) = span(s_1..s_k): each r_i (i ≤ k) must lie in
            // span(s_1..s_k) and vice versa (dimension counting gives equality).
            let gs_sk = gram_schmidt_rational(
                &(0..=k).map(|j| s.col_rational(j)).collect::<Vec<_>>(),
            )
            .unwrap();
            for i in 0..=k {
                assert!(gs_sk.contains_in_span(&r.col_rational(i)));
            }
        }
    }

    #[test]
    fn already_a_basis() {
        let b = IntMatrix::from_cols(&[vec![2, 1], vec![1, 2]]);
        let mut cols = [b.col(0), b.col(1)];
        cols.sort_by_key(|c| {
            norm_sq(&int_vec_to_rational(c))
        });
        let s = IntMatrix::from_fn(2, 2, |i, j| cols[j][i].clone());
        let r = mg_complete(&b, &s).unwrap();
        assert_mg_guarantees(&b, &s, &r);
    }

    #[test]
    fn doubled_vectors_in_z2() {
        // B = I₂, S = {2e₁, 2e₂}: R must span Z² with ‖r_k‖ ≤ 2.
        let b = IntMatrix::identity(2);
        let s = IntMatrix::from_rows(&[vec![2, 0], vec![0, 2]]);
        let r = mg_complete(&b, &s).unwrap();
        assert_mg_guarantees(&b, &s, &r);
        let four = BigRational::from(BigInt::from(4));
        for k in 0..2 {
            assert!(norm_sq(&r.col_rational(k)) <= four);
        }
    }

    #[test]
    fn orthogonal_lattice_keeps_s() {
        // L = 3Z × 5Z with S = {3e₁, 5e₂} → R = S up to sign.
        let b = IntMatrix::from_rows(&[vec![3, 0], vec![0, 5]]);
        let s = b.clone();
        let r = mg_complete(&b, &s).unwrap();
        assert_eq!(hnf(&r).unwrap(), hnf(&b).unwrap());
        for k in 0..2 {
            let rk = norm_sq(&r.col_rational(k));
            let sk = norm_sq(&s.col_rational(k));
            assert_eq!(rk, sk);
        }
    }

    #[test]
    fn rejects_outside_vectors() {
        let b = IntMatrix::from_rows(&[vec![2, 0], vec![0, 2]]);
        let s = IntMatrix::from_rows(&[vec![1, 0], vec![0, 2]]);
        assert!(mg_complete(&b, &s).is_err());
    }

    #[test]
    fn rejects_dependent_vectors() {
        let b = IntMatrix::identity(2);
        let s = IntMatrix::from_cols(&[vec![1, 1], vec![2, 2]]);
        assert!(mg_complete(&b, &s).is_err());
    }

    #[test]
    fn rejects_unsorted() {
        let b = IntMatrix::identity(2);
        let s = IntMatrix::from_cols(&[vec![0, 5], vec![1, 0]]);
        assert!(mg_complete(&b, &s).is_err());
    }

    #[test]
    fn nontrivial_completion() {
        // Sublattice vectors that are not a basis: S = {2e₁, 2e₂} inside the
        // lattice generated by (1,1) and (0,2) (index-2 inside Z²... here the
        // lattice is {(x,y): x+y even}).
        let b = IntMatrix::from_cols(&[vec![1, 1], vec![0, 2]]);
        let s = IntMatrix::from_rows(&[vec![2, 0], vec![0, 2]]);
        let r = mg_complete(&b, &s).unwrap();
        assert_mg_guarantees(&b, &s, &r);
    }
}
