//! Brute-force group oracles: exact CVP over a finite group, λ₁(G), and the
//! lift of a mod-q solution back to the integers.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::zqgroup::decomp::FiniteGroupDecomp;
use crate::zqgroup::zq::ZqVector;
use crate::GROUP_SCAN_BUDGET;

/// Result of an exact group CVP scan.
#[derive(Clone, Debug)]
pub struct GroupCvpResult {
    /// Coefficients in `C̃` of the closest group element.
    pub coeffs: Vec<u64>,
    /// Exact squared distance `‖t − G·s‖_q²`.
    pub dist_sq: u128,
}

impl GroupCvpResult {
    pub fn dist(&self) -> f64 {
        (self.dist_sq as f64).sqrt()
    }
}

/// Exact closest group element under `‖·‖_q` by full scan of `C̃`.
/// Ties break to the lexicographically smallest coefficient vector.
pub fn group_cvp_exact(decomp: &FiniteGroupDecomp, t: &ZqVector) -> Result<GroupCvpResult> {
    scan_budget(decomp.order())?;
    let mut best: Option<GroupCvpResult> = None;
    for c in decomp.coeff_iter() {
        let d = decomp.element(&c).dist_sq(t);
        let better = match &best {
            None => true,
            Some(b) => d < b.dist_sq || (d == b.dist_sq && lex_less(&c, &b.coeffs)),
        };
        if better {
            best = Some(GroupCvpResult {
                coeffs: c,
                dist_sq: d,
            });
        }
    }
    Ok(best.expect("C̃ contains at least the zero vector"))
}

/// Exact CVP over an explicitly generated subset `{Σ c_j·g_j : c_j ∈ [ranges_j]}`
/// of `Z_q^m`. Used on reduced instances, where the coefficient space is the
/// original `C̃` rather than a canonical decomposition of the generated group.
pub fn generated_cvp_exact(
    q: u64,
    gens: &[ZqVector],
    ranges: &[u64],
    t: &ZqVector,
) -> Result<GroupCvpResult> {
    assert_eq!(gens.len(), ranges.len());
    let total = ranges.iter().fold(1u64, |acc, &r| acc.saturating_mul(r));
    scan_budget(total)?;
    let m = t.dim();
    let mut best: Option<GroupCvpResult> = None;
    let mut cur = vec![0u64; ranges.len()];
    loop {
        let mut v = ZqVector::zero(q, m);
        for (j, &cj) in cur.iter().enumerate() {
            v = v.add(&gens[j].scale(cj));
        }
        let d = v.dist_sq(t);
        let better = match &best {
            None => true,
            Some(b) => d < b.dist_sq || (d == b.dist_sq && lex_less(&cur, &b.coeffs)),
        };
        if better {
            best = Some(GroupCvpResult {
                coeffs: cur.clone(),
                dist_sq: d,
            });
        }
        // Mixed-radix advance.
        let mut i = 0;
        loop {
            if i == ranges.len() {
                return Ok(best.expect("nonempty scan"));
            }
            cur[i] += 1;
            if cur[i] < ranges[i] {
                break;
            }
            cur[i] = 0;
            i += 1;
        }
    }
}

/// Exact `λ₁(G)²`; `u128::MAX` sentinel for the trivial group.
pub fn lambda1_group_sq_uncached(decomp: &FiniteGroupDecomp) -> Result<u128> {
    if decomp.is_trivial() {
        return Ok(u128::MAX);
    }
    scan_budget(decomp.order())?;
    let mut best = u128::MAX;
    for c in decomp.coeff_iter() {
        if c.iter().all(|&x| x == 0) {
            continue;
        }
        let v = decomp.element(&c);
        debug_assert!(!v.is_zero(), "C̃ → G must be injective");
        best = best.min(v.modnorm_sq());
    }
    Ok(best)
}

/// `λ₁(G)` as a float (+∞ sentinel for the trivial group).
pub fn lambda1_group(decomp: &FiniteGroupDecomp) -> Result<f64> {
    decomp.lambda1()
}

/// Lifts a mod-q solution to the closest integer lattice vector.
///
/// `v_mod = G·s` solves the problem for `t mod q`; the integer vector
/// returned is `t − Δ*` where `Δ*` is the zero-centered representative of
/// `(t − G·s) mod q`. Whenever the mod-q solution is correct and the distance
/// is below `q/2`, this is the exact closest lattice vector to `t`.
pub fn lift_solution(
    decomp: &FiniteGroupDecomp,
    s: &[u64],
    t_int: &[BigInt],
) -> Vec<BigInt> {
    let q = decomp.q;
    let v_mod = decomp.element(s);
    let t_mod = ZqVector::new(
        q,
        t_int
            .iter()
            .map(|x| {
                let m = x % BigInt::from(q);
                let m = if m < BigInt::from(0) { m + BigInt::from(q) } else { m };
                u64::try_from(m).expect("reduced")
            })
            .collect(),
    );
    let delta = t_mod.sub(&v_mod);
    let centered = delta.centered();
    t_int
        .iter()
        .zip(centered)
        .map(|(ti, d)| ti - BigInt::from(d))
        .collect()
}

fn scan_budget(total: u64) -> Result<()> {
    if total > GROUP_SCAN_BUDGET {
        return Err(Error::BudgetExceeded {
            visited: total,
            budget: GROUP_SCAN_BUDGET,
        });
    }
    Ok(())
}

fn lex_less(a: &[u64], b: &[u64]) -> bool {
    a < b
}
