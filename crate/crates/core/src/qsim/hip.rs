//! Hidden-inner-product sampling.
//!
//! One shot prepares a PCS with a fresh uniform label `a`, runs phase
//! estimation against the shift `U_t`, and returns `(a, O)`. When the target
//! is within `ε₁·λ₁` of the group, `O` approximates the character phase of
//! the hidden coefficients: `|O − charphase(a, −s)|_q ≤ 129·q·ε_ev/p_err²`
//! with probability `≥ 1 − p_err`, where `ε_ev = √ε₁ · 4n^{3/4}`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qsim::pcs::{make_pcs, make_pcs_with_label, Backend};
use crate::qsim::pe::{phase_estimate, PeConfig};
use crate::zqgroup::decomp::FiniteGroupDecomp;
use crate::zqgroup::zq::ZqVector;

/// How the phase-estimation register is sized for a shot.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub enum PePlan {
    /// Worst-case error budget from the promise parameter: ε_ev derived from
    /// ε₁, `T` from the error-budget formulas, feasibility enforced.
    ErrorBudget { eps1: f64, p_err: f64 },
    /// Fixed register size `T = 2^t_log2`. The solvers use this: the
    /// worst-case budget is vastly pessimistic at desk scale, and their
    /// verification gate makes wrong samples harmless.
    FixedT { t_log2: u32 },
}

/// One SampleHIP outcome with reproducibility metadata.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HipSample {
    /// Label `a ∈ Z_q^r`.
    pub a: Vec<u64>,
    /// Phase estimate `O ∈ Z_q`.
    pub o: u64,
    pub t_len: u64,
    pub sigma: u64,
    /// Declared ε_ev for the shot (0 under a fixed-T plan).
    pub eps_ev: f64,
    /// Per-shot error probability (ErrorBudget plan).
    pub p_err: f64,
    pub backend: String,
}

/// ε_ev from the BDD promise: `√ε₁ · 4n^{3/4}`.
pub fn eps_ev_from_promise(eps1: f64, n: usize) -> f64 {
    eps1.sqrt() * 4.0 * (n as f64).powf(0.75)
}

/// Largest ε₁ whose derived ε_ev satisfies the error-budget feasibility
/// `p_err²/(128·ε_ev) ≥ 1`.
pub fn max_feasible_eps1(p_err: f64, n: usize) -> f64 {
    let max_ev = p_err * p_err / 128.0;
    (max_ev / (4.0 * (n as f64).powf(0.75))).powi(2)
}

/// Checks `σ ∈ [λ₁/(4√n), λ₁/(2√n)]` exactly against `λ₁(G)²`.
pub fn sigma_in_range(sigma: u64, lambda1_sq: u128, n: usize) -> bool {
    if lambda1_sq == u128::MAX {
        // Trivial group: any σ ≥ 1 acts on an exact eigenvector.
        return sigma >= 1;
    }
    let s = sigma as u128;
    // σ ≤ λ₁/(2√n)  ⟺  4nσ² ≤ λ₁²;  σ ≥ λ₁/(4√n)  ⟺  16nσ² ≥ λ₁².
    4 * (n as u128) * s * s <= lambda1_sq && 16 * (n as u128) * s * s >= lambda1_sq
}

/// One SampleHIP shot. `eps1` is the declared promise parameter (used for the
/// error budget and recorded); the σ-range precondition is enforced exactly.
pub fn sample_hip(
    decomp: &FiniteGroupDecomp,
    sigma: u64,
    eps1: f64,
    t: &ZqVector,
    p_err: f64,
    plan: PePlan,
    backend: Backend,
    rng: &mut impl Rng,
) -> Result<HipSample> {
    if !(0.0..0.5).contains(&eps1) {
        return Err(Error::precondition("eps1 must lie in [0, 1/2)"));
    }
    let n = decomp.n;
    let lambda1_sq = decomp.lambda1_sq()?;
    if !sigma_in_range(sigma, lambda1_sq, n) {
        return Err(Error::precondition(format!(
            "sigma {} outside [λ₁/(4√n), λ₁/(2√n)] for λ₁² = {} and n = {} \
             (λ₁ below 4√n leaves no admissible integer σ)",
            sigma, lambda1_sq, n
        )));
    }
    let cfg = match plan {
        PePlan::ErrorBudget { eps1: e, p_err: p } => {
            let eps_ev = eps_ev_from_promise(e, n);
            PeConfig::from_error_budget(eps_ev, p).map_err(|err| match err {
                Error::PeInfeasible { .. } => Error::PeInfeasible {
                    max_eps1: max_feasible_eps1(p, n),
                },
                other => other,
            })?
        }
        PePlan::FixedT { t_log2 } => PeConfig::with_t_log2(t_log2, p_err),
    };

    let psi = make_pcs(decomp, sigma, backend, rng)?;
    let o = phase_estimate(&psi, t, &cfg, rng)?;
    Ok(HipSample {
        a: psi.label.clone(),
        o,
        t_len: cfg.t_len,
        sigma,
        eps_ev: cfg.eps_ev,
        p_err,
        backend: psi.backend_name().to_string(),
    })
}

/// Test hook: same shot with a forced label.
#[allow(clippy::too_many_arguments)]
pub fn sample_hip_with_label(
    decomp: &FiniteGroupDecomp,
    sigma: u64,
    label: Vec<u64>,
    t: &ZqVector,
    cfg: &PeConfig,
    backend: Backend,
    rng: &mut impl Rng,
) -> Result<HipSample> {
    let psi = make_pcs_with_label(decomp, sigma, label, backend)?;
    let o = phase_estimate(&psi, t, cfg, rng)?;
    Ok(HipSample {
        a: psi.label.clone(),
        o,
        t_len: cfg.t_len,
        sigma,
        eps_ev: cfg.eps_ev,
        p_err: cfg.p_err,
        backend: psi.backend_name().to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zqgroup::zq::abs_mod_q;

    fn test_decomp() -> FiniteGroupDecomp {
        // ⟨(4,8)⟩ in Z₁₆², order 4; shortest nonzero element is 2·(4,8) ≡
        // (8,0), so λ₁² = 64.
        FiniteGroupDecomp::new(16, vec![4], vec![4, 8], 2)
    }

    #[test]
    fn sigma_range_checks() {
        let d = test_decomp();
        let l1 = d.lambda1_sq().unwrap();
        assert_eq!(l1, 64);
        // λ₁ = 8, n=2: admissible σ ∈ [√2, 2√2] → {2}.
        assert!(!sigma_in_range(1, l1, 2));
        assert!(sigma_in_range(2, l1, 2));
        assert!(!sigma_in_range(3, l1, 2));
        assert!(!sigma_in_range(4, l1, 2));
    }

    #[test]
    fn target_on_group_with_zero_label_gives_zero() {
        // a = 0 forces charphase 0; with t on the group and an exact
        // register, O must be 0.
        let d = test_decomp();
        let t = d.element(&[2]);
        let cfg = PeConfig::with_t_log2(5, 0.1);
        let mut rng = crate::rng::master(1);
        let s = sample_hip_with_label(&d, 2, vec![0], &t, &cfg, Backend::Dense, &mut rng).unwrap();
        assert_eq!(s.o, 0);
    }

    #[test]
    fn target_on_group_recovers_eigenphase_within_rounding() {
        // t = G·s exactly: |O − charphase(a, −s)|_q within ⌈q/T⌉.
        let d = test_decomp();
        let q = d.q;
        let mut rng = crate::rng::master(2);
        for trial in 0..20u64 {
            let c = vec![trial % 4];
            let t = d.element(&c);
            let cfg = PeConfig::with_t_log2(5, 0.1);
            let s = sample_hip(&d, 2, 1e-12, &t, 0.1, PePlan::FixedT { t_log2: 5 }, Backend::Dense, &mut rng)
                .unwrap();
            let expect = d.charphase(&s.a, &d.neg_coeffs(&c)).unwrap();
            let err = abs_mod_q(q, (s.o + q - expect) % q);
            assert!(err <= q.div_ceil(cfg.t_len) , "err {err} too large");
        }
    }

    #[test]
    fn infeasible_budget_names_max_eps1() {
        let d = test_decomp();
        let t = d.element(&[1]);
        let mut rng = crate::rng::master(3);
        let res = sample_hip(
            &d,
            2,
            0.125,
            &t,
            0.1,
            PePlan::ErrorBudget {
                eps1: 0.125,
                p_err: 0.1,
            },
            Backend::Dense,
            &mut rng,
        );
        match res {
            Err(Error::PeInfeasible { max_eps1 }) => {
                assert!(max_eps1 > 0.0 && max_eps1 < 0.125);
                assert!((max_eps1 - max_feasible_eps1(0.1, 2)).abs() < 1e-18);
            }
            other => panic!("expected PeInfeasible, got {other:?}"),
        }
    }

    #[test]
    fn sigma_out_of_range_rejected() {
        let d = test_decomp();
        let t = d.element(&[1]);
        let mut rng = crate::rng::master(4);
        let res = sample_hip(
            &d,
            1,
            1e-12,
            &t,
            0.1,
            PePlan::FixedT { t_log2: 5 },
            Backend::Dense,
            &mut rng,
        );
        assert!(matches!(res, Err(Error::Precondition(_))));
    }
}
