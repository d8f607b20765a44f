//! Exact CVP/SVP enumeration over rational Gram-Schmidt data.
//!
//! Depth-first Fincke-Pohst with exact rational interval bounds, a hard node
//! budget, and deterministic lexicographic tie-breaking. Used as the ground
//! -truth oracle throughout and as the β-block minimizer in the block CVP.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::intlat::gram::{gram_schmidt, GramSchmidtData};
use crate::intlat::matrix::{int_vec_to_rational, norm_sq, round_rational, sub, IntMatrix, RatVec};
use crate::ENUM_NODE_BUDGET;

/// Result of an enumeration: coefficients of the optimum and its exact
/// squared distance.
#[derive(Clone, Debug)]
pub struct EnumSolution {
    pub coeffs: Vec<BigInt>,
    pub dist_sq: BigRational,
}

struct Enumerator<'a> {
    gs: &'a GramSchmidtData,
    /// Target coordinates in the `b*` frame (`x_j` with `t = Σ x_j b*_j`).
    x: RatVec,
    /// Levels `lo..hi` of the basis participate (the projected sublattice).
    lo: usize,
    best: Option<EnumSolution>,
    bound_sq: BigRational,
    visited: u64,
    /// When set, the all-zero coefficient vector is not a valid answer (SVP).
    exclude_zero: bool,
}

impl Enumerator<'_> {
    /// Depth-first over levels `hi-1 .. lo`. `one_past` is one past the level
    /// being chosen next (so the first call passes `hi` and the leaf is
    /// reached at `one_past == lo`); `partial` holds choices top-down.
    fn descend(
        &mut self,
        one_past: usize,
        partial: &mut Vec<BigInt>,
        acc_sq: BigRational,
    ) -> Result<()> {
        self.visited += 1;
        if self.visited > ENUM_NODE_BUDGET {
            return Err(Error::BudgetExceeded {
                visited: self.visited,
                budget: ENUM_NODE_BUDGET,
            });
        }
        let hi = self.x.len();
        if one_past == self.lo {
            if self.exclude_zero && partial.iter().all(|c| c.is_zero()) {
                return Ok(());
            }
            let coeffs: Vec<BigInt> = partial.iter().rev().cloned().collect();
            let better = match &self.best {
                None => true,
                Some(b) => {
                    acc_sq < b.dist_sq || (acc_sq == b.dist_sq && coeffs < b.coeffs)
                }
            };
            if better {
                self.bound_sq = acc_sq.clone();
                self.best = Some(EnumSolution {
                    coeffs,
                    dist_sq: acc_sq,
                });
            }
            return Ok(());
        }
        let j = one_past - 1;
        // Residual center at this level: x_j − Σ_{i>j} c_i μ_{i,j}.
        let mut center = self.x[j].clone();
        for (idx, c) in partial.iter().enumerate() {
            let i = hi - 1 - idx;
            if !c.is_zero() {
                center -= BigRational::from(c.clone()) * &self.gs.mu[i][j];
            }
        }
        // |c_j − center|² · ‖b*_j‖² + acc ≤ bound  ⇒  c_j in an interval.
        let slack = &self.bound_sq - &acc_sq;
        if slack.is_negative() {
            return Ok(());
        }
        let width_sq = slack / &self.gs.norms_sq[j];
        // Integer window [ceil(center − w), floor(center + w)] with
        // w = √width_sq, bounded via exact comparisons below.
        let c0 = round_rational(&center);
        // Walk outward from the rounded center in both directions; exact
        // pruning by the interval test keeps this tight.
        let mut offsets: Vec<BigInt> = Vec::new();
        let mut step = BigInt::zero();
        loop {
            let mut any = false;
            for cand in [&c0 + &step, &c0 - &step] {
                if step.is_zero() && offsets.contains(&cand) {
                    continue;
                }
                let diff = BigRational::from(cand.clone()) - &center;
                if &diff * &diff <= width_sq {
                    offsets.push(cand);
                    any = true;
                }
            }
            if !any && !step.is_zero() {
                break;
            }
            step += BigInt::one();
            if step > BigInt::from(10_000_000u64) {
                break;
            }
        }
        // Deterministic visit order: ascending coefficient value, so the
        // lexicographic tie-break below is reproducible.
        offsets.sort();
        for cand in offsets {
            let diff = BigRational::from(cand.clone()) - &center;
            let add = &diff * &diff * &self.gs.norms_sq[j];
            let next = &acc_sq + add;
            if next > self.bound_sq {
                continue;
            }
            partial.push(cand);
            self.descend(j, partial, next)?;
            partial.pop();
        }
        Ok(())
    }
}

/// Exact CVP by enumeration: closest lattice point `B·c` to `t` within
/// `radius` (Euclidean). Ties break to the lexicographically smallest
/// coefficient vector. Errors with `RadiusExceeded` when the ball is empty.
pub fn exact_cvp_enum(b: &IntMatrix, t: &[BigRational], radius: &BigRational) -> Result<EnumSolution> {
    let gs = gram_schmidt(b)?;
    if !gs.contains_in_span(t) {
        return Err(Error::OutsideSpan);
    }
    let x = gs.star_coordinates(t);
    let bound_sq = radius * radius;
    let mut e = Enumerator {
        gs: &gs,
        x,
        lo: 0,
        best: None,
        bound_sq,
        visited: 0,
        exclude_zero: false,
    };
    let mut partial = Vec::new();
    e.descend(b.cols(), &mut partial, BigRational::zero())?;
    e.best.ok_or(Error::RadiusExceeded)
}

/// Exact CVP with an automatic radius: starts from the Babai solution (always
/// feasible) and tightens.
pub fn exact_cvp_auto(b: &IntMatrix, t: &[BigRational]) -> Result<EnumSolution> {
    let gs = gram_schmidt(b)?;
    if !gs.contains_in_span(t) {
        return Err(Error::OutsideSpan);
    }
    let coeffs = crate::intlat::babai::nearest_plane_coeffs(b, &gs, t);
    let v = int_vec_to_rational(&b.mul_vec(&coeffs));
    let start_sq = norm_sq(&sub(&v, t));
    let x = gs.star_coordinates(t);
    let mut e = Enumerator {
        gs: &gs,
        x,
        lo: 0,
        best: Some(EnumSolution {
            coeffs: coeffs.clone(),
            dist_sq: start_sq.clone(),
        }),
        bound_sq: start_sq,
        visited: 0,
        exclude_zero: false,
    };
    let mut partial = Vec::new();
    e.descend(b.cols(), &mut partial, BigRational::zero())?;
    // Re-run tie-break: the Babai seed may be lexicographically larger than an
    // equal-distance point found later; descend already handles that.
    Ok(e.best.expect("seeded"))
}

/// Exact shortest nonzero vector (squared length) by enumeration.
pub fn shortest_vector_sq(b: &IntMatrix) -> Result<EnumSolution> {
    // Reduce first so the initial bound (shortest basis column) is tight.
    let reduced = crate::intlat::lll::lll_reduce(b, &crate::intlat::lll::default_delta())?;
    let gs = gram_schmidt(&reduced)?;
    let start_sq = (0..reduced.cols())
        .map(|j| norm_sq(&reduced.col_rational(j)))
        .min()
        .expect("nonempty");
    let x = vec![BigRational::zero(); reduced.cols()];
    let mut e = Enumerator {
        gs: &gs,
        x,
        lo: 0,
        best: None,
        bound_sq: start_sq.clone(),
        visited: 0,
        exclude_zero: true,
    };
    let mut partial = Vec::new();
    e.descend(reduced.cols(), &mut partial, BigRational::zero())?;
    Ok(e.best.unwrap_or_else(|| {
        // The shortest basis column itself attains the initial bound.
        let j = (0..reduced.cols())
            .min_by_key(|&j| norm_sq(&reduced.col_rational(j)))
            .unwrap();
        let mut coeffs = vec![BigInt::zero(); reduced.cols()];
        coeffs[j] = BigInt::one();
        EnumSolution {
            coeffs,
            dist_sq: start_sq,
        }
    }))
}

/// Minimizes `Σ_{j≥lo} |x_j − Σ_{i≥j} c_i μ_{i,j}|² ‖b*_j‖²` over integer
/// tail coefficients `c_lo..c_{hi-1}` — exact CVP in the lattice projected
/// orthogonally to the first `lo` basis vectors. Seeded with the rounding
/// (Babai) tail so it is always feasible.
pub fn projected_tail_cvp(
    gs: &GramSchmidtData,
    x: &[BigRational],
    lo: usize,
) -> Result<Vec<BigInt>> {
    let hi = gs.dim();
    assert!(lo < hi);
    // Babai seed on the tail.
    let mut seed = vec![BigInt::zero(); hi];
    let mut seed_sq = BigRational::zero();
    for j in (lo..hi).rev() {
        let mut center = x[j].clone();
        for i in j + 1..hi {
            if !seed[i].is_zero() {
                center -= BigRational::from(seed[i].clone()) * &gs.mu[i][j];
            }
        }
        let c = round_rational(&center);
        let diff = BigRational::from(c.clone()) - &center;
        seed_sq += &diff * &diff * &gs.norms_sq[j];
        seed[j] = c;
    }
    let mut e = Enumerator {
        gs,
        x: x.to_vec(),
        lo,
        best: Some(EnumSolution {
            coeffs: seed[lo..].to_vec(),
            dist_sq: seed_sq.clone(),
        }),
        bound_sq: seed_sq,
        visited: 0,
        exclude_zero: false,
    };
    let mut partial = Vec::new();
    e.descend(hi, &mut partial, BigRational::zero())?;
    Ok(e.best.expect("seeded").coeffs)
}
