//! Experiment plumbing: planted instance generation, solver dispatch,
//! calibration sweeps, and result verification.
//!
//! Everything here is deterministic from a master seed; per-trial work uses
//! derived RNG streams so the trial loop can run in parallel without
//! changing any outcome.

use num_bigint::BigInt;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::classical_rect::{rect_bdd, rect_reduce};
use crate::error::{Error, Result};
use crate::exec::{map_indexed, Mode};
use crate::intlat::babai::babai_nearest_plane;
use crate::intlat::lll::{default_delta, lll_reduce};
use crate::intlat::matrix::{int_vec_to_rational, IntMatrix};
use crate::qsim::pcs::Backend;
use crate::reduction::qary::random_qary;
use crate::reduction::sample::{BddInstance, PlantedSolution};
use crate::reduction::solve::{solve_bdd_poly, solve_bdd_tradeoff, SolveOptions};
use crate::zqgroup::oracle::{group_cvp_exact, lift_solution};
use crate::zqgroup::zq::ZqVector;

/// Which solver a trial runs.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SolverKind {
    /// Polynomial-time pipeline (reduction + LLL + nearest plane).
    Poly,
    /// Trade-off pipeline (reduction + β-block CVP).
    Tradeoff { beta: usize },
    /// Rectangle-periodic certified decoder.
    Rect,
    /// Classical baseline: LLL + nearest plane on the input basis.
    Babai,
    /// Ground truth by exhaustive group CVP.
    Oracle,
}

/// Generates a planted ε₁-BDD instance on a random q-ary lattice.
///
/// The offset Δ is drawn uniformly from the integer points of the
/// `‖·‖_q`-ball of radius `ε₁·λ₁` by rejection on the zero-centered cube.
/// With `eps1 > 0` but `ε₁λ₁ < 1` the ball holds only the origin and the
/// generation refuses, pointing at Δ = 0 planting.
pub fn gen_bdd_instance(
    n: usize,
    r: usize,
    q: u64,
    eps1: f64,
    rng: &mut impl Rng,
) -> Result<BddInstance> {
    if eps1 < 0.0 || eps1 > 0.5 {
        return Err(Error::precondition("eps1 must lie in [0, 1/2]"));
    }
    // Draw until the canonical decomposition has the requested rank.
    let inst = loop {
        let cand = random_qary(n, r, q, rng)?;
        if cand.decomp.rank() == r {
            break cand;
        }
    };
    let lambda1_sq = inst.lambda1_sq;
    let lambda1 = (lambda1_sq as f64).sqrt();
    let radius = eps1 * lambda1;
    let radius_sq = radius * radius;

    let delta: Vec<i64> = if eps1 == 0.0 {
        vec![0; n]
    } else if radius < 1.0 {
        return Err(Error::precondition(format!(
            "eps1·λ₁ = {radius:.3} < 1: no nonzero integer offset exists; plant with eps1 = 0"
        )));
    } else {
        let cap = radius.floor() as i64;
        loop {
            let cand: Vec<i64> = (0..n).map(|_| rng.gen_range(-cap..=cap)).collect();
            let norm_sq: f64 = cand.iter().map(|&c| (c * c) as f64).sum();
            if norm_sq <= radius_sq {
                break cand;
            }
        }
    };

    let s: Vec<u64> = inst
        .decomp
        .qvec
        .iter()
        .map(|&qi| rng.gen_range(0..qi))
        .collect();
    let v = inst.decomp.element(&s);
    // Integer target: lifted group element + Δ + a random q-multiple shift.
    let t: Vec<i64> = v
        .entries
        .iter()
        .zip(&delta)
        .map(|(&vi, &di)| {
            let shift: i64 = rng.gen_range(-2..=2);
            vi as i64 + di + shift * q as i64
        })
        .collect();
    Ok(BddInstance {
        n,
        q,
        decomp: inst.decomp,
        t,
        eps1,
        planted: Some(PlantedSolution {
            coeffs: s,
            delta,
            lambda1_sq,
        }),
    })
}

/// One solver trial outcome, serialized as a result row.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TrialResult {
    pub trial: u64,
    /// Returned lattice vector (decimal strings), when the solver accepted.
    pub vector: Option<Vec<String>>,
    /// Whether the returned vector equals the true closest vector.
    pub correct: Option<bool>,
    /// `‖t − v‖_q²` of the returned vector.
    pub dist_sq: Option<u128>,
    pub wall_ms: f64,
    pub error: Option<String>,
    /// Machine-readable error class (exit-code style).
    pub error_code: Option<i32>,
    /// Solver internals for verification (σ, T, m, ladder, λ̂₁).
    pub internals: Option<crate::reduction::solve::SolveOutcome>,
}

/// Runs one solver trial against an instance.
pub fn run_trial(
    inst: &BddInstance,
    solver: SolverKind,
    opts: &SolveOptions,
    trial: u64,
    seed: u64,
) -> TrialResult {
    let start = std::time::Instant::now();
    let mut rng = crate::rng::derive(seed, "trial", trial);
    let basis = match inst.decomp.lift_lattice() {
        Ok(b) => b,
        Err(e) => {
            return TrialResult {
                trial,
                vector: None,
                correct: None,
                dist_sq: None,
                wall_ms: start.elapsed().as_secs_f64() * 1e3,
                error: Some(e.to_string()),
                error_code: Some(e.exit_code()),
                internals: None,
            }
        }
    };
    let t_int = inst.t_int();
    let outcome: Result<(Vec<BigInt>, Option<crate::reduction::solve::SolveOutcome>)> =
        match solver {
            SolverKind::Poly => {
                solve_bdd_poly(&basis, &t_int, opts, &mut rng).map(|o| (o.vector_bigint(), Some(o)))
            }
            SolverKind::Tradeoff { beta } => solve_bdd_tradeoff(&basis, &t_int, beta, opts, &mut rng)
                .map(|o| (o.vector_bigint(), Some(o))),
            SolverKind::Rect => rect_bdd(&basis, &t_int).map(|(v, _)| (v, None)),
            SolverKind::Babai => {
                let reduced = lll_reduce(&basis, &default_delta());
                reduced.and_then(|b| {
                    babai_nearest_plane(&b, &int_vec_to_rational(&t_int))
                        .map(|c| (b.mul_vec(&c), None))
                })
            }
            SolverKind::Oracle => group_cvp_exact(&inst.decomp, &inst.t_mod_q())
                .map(|r| (lift_solution(&inst.decomp, &r.coeffs, &t_int), None)),
        };
    let wall_ms = start.elapsed().as_secs_f64() * 1e3;
    match outcome {
        Ok((v, internals)) => {
            let dist_sq = mod_dist_sq(inst, &v);
            let correct = truth_vector(inst).map(|truth| truth == v);
            TrialResult {
                trial,
                vector: Some(v.iter().map(|x| x.to_string()).collect()),
                correct,
                dist_sq: Some(dist_sq),
                wall_ms,
                error: None,
                error_code: None,
                internals,
            }
        }
        Err(e) => TrialResult {
            trial,
            vector: None,
            correct: Some(false),
            dist_sq: None,
            wall_ms,
            error: Some(e.to_string()),
            error_code: Some(e.exit_code()),
            internals: None,
        },
    }
}

/// `‖t − v‖_q²` for a candidate integer vector.
pub fn mod_dist_sq(inst: &BddInstance, v: &[BigInt]) -> u128 {
    let q = inst.q;
    let to_zq = |x: &BigInt| {
        let m = x % BigInt::from(q);
        let m = if m < BigInt::from(0) { m + BigInt::from(q) } else { m };
        u64::try_from(m).expect("reduced")
    };
    let tv = ZqVector::new(q, inst.t.iter().map(|&x| to_zq(&BigInt::from(x))).collect());
    let vv = ZqVector::new(q, v.iter().map(to_zq).collect());
    tv.dist_sq(&vv)
}

/// True closest vector: planted when available, else the group oracle.
pub fn truth_vector(inst: &BddInstance) -> Option<Vec<BigInt>> {
    if let Some(v) = inst.planted_vector() {
        return Some(v);
    }
    let r = group_cvp_exact(&inst.decomp, &inst.t_mod_q()).ok()?;
    Some(lift_solution(&inst.decomp, &r.coeffs, &inst.t_int()))
}

/// Runs `trials` independent trials (parallel when enabled), ordered by
/// trial index.
pub fn run_trials(
    inst: &BddInstance,
    solver: SolverKind,
    opts: &SolveOptions,
    trials: u64,
    seed: u64,
    mode: Mode,
) -> Vec<TrialResult> {
    map_indexed(mode, trials as usize, |i| {
        run_trial(inst, solver, opts, i as u64, seed)
    })
}

/// One cell of a calibration sweep.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CalibrationCell {
    pub n: usize,
    pub r: usize,
    pub q: u64,
    pub solver: SolverKind,
}

/// Calibration output for one cell.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CellCalibration {
    pub cell: CalibrationCell,
    /// Largest swept ε₁ with success rate ≥ target; 0 when none passed.
    pub eps1_threshold: f64,
    /// Success rate at the threshold.
    pub success_rate: f64,
    /// The full sweep: (eps1, success rate).
    pub sweep: Vec<(f64, f64)>,
    pub trials: u64,
    pub seed: u64,
}

/// Measures the success rate at one (cell, ε₁) point: fresh instance and
/// solver run per trial, derived seeds throughout.
pub fn success_rate(
    cell: &CalibrationCell,
    eps1: f64,
    trials: u64,
    seed: u64,
    opts: &SolveOptions,
    mode: Mode,
) -> f64 {
    let results = map_indexed(mode, trials as usize, |i| {
        let mut rng = crate::rng::derive(seed, "cal-gen", i as u64);
        let inst = match gen_bdd_instance(cell.n, cell.r, cell.q, eps1, &mut rng) {
            Ok(inst) => inst,
            Err(_) => return false,
        };
        let row = run_trial(&inst, cell.solver, opts, i as u64, seed ^ 0x5eed);
        row.correct.unwrap_or(false)
    });
    results.iter().filter(|&&ok| ok).count() as f64 / trials as f64
}

/// Sweeps a descending ε₁ grid and records the largest value whose success
/// rate reaches the target.
pub fn calibrate_cell(
    cell: &CalibrationCell,
    grid: &[f64],
    trials: u64,
    target: f64,
    seed: u64,
    opts: &SolveOptions,
    mode: Mode,
) -> CellCalibration {
    let mut sweep = Vec::with_capacity(grid.len());
    let mut threshold = 0.0f64;
    let mut rate_at = 0.0f64;
    let mut sorted: Vec<f64> = grid.to_vec();
    sorted.sort_by(|a, b| b.partial_cmp(a).expect("finite grid"));
    for (gi, &eps1) in sorted.iter().enumerate() {
        let rate = success_rate(cell, eps1, trials, seed.wrapping_add(gi as u64), opts, mode);
        sweep.push((eps1, rate));
        if threshold == 0.0 && rate >= target {
            threshold = eps1;
            rate_at = rate;
        }
    }
    CellCalibration {
        cell: cell.clone(),
        eps1_threshold: threshold,
        success_rate: rate_at,
        sweep,
        trials,
        seed,
    }
}

/// Verification of a result row against its instance: recomputes the
/// distance, the correctness flag, and the acceptance gate. Returns the list
/// of violated checks (empty = pass).
pub fn verify_row(inst: &BddInstance, row: &TrialResult) -> Vec<String> {
    let mut violations = Vec::new();
    let Some(vec_str) = &row.vector else {
        // An errored row verifies vacuously (the error is its own record).
        return violations;
    };
    let v: Vec<BigInt> = vec_str.iter().map(|s| s.parse().expect("stored int")).collect();
    let dist_sq = mod_dist_sq(inst, &v);
    if row.dist_sq != Some(dist_sq) {
        violations.push(format!(
            "distance mismatch: row says {:?}, recomputed {}",
            row.dist_sq, dist_sq
        ));
    }
    if let Some(truth) = truth_vector(inst) {
        let is_correct = truth == v;
        if row.correct != Some(is_correct) {
            violations.push(format!(
                "correctness flag mismatch: row says {:?}, oracle says {}",
                row.correct, is_correct
            ));
        }
    }
    if let Some(out) = &row.internals {
        // Acceptance gate: accepted vectors satisfy ‖t − G·s‖_q ≤ λ̂₁/2.
        if out.lambda1_hat > 0.0
            && (4 * dist_sq) as f64 > out.lambda1_hat * out.lambda1_hat + 1e-9
        {
            violations.push(format!(
                "acceptance gate violated: 4·dist² = {} > λ̂₁² = {}",
                4 * dist_sq,
                out.lambda1_hat * out.lambda1_hat
            ));
        }
    }
    violations
}

/// Recomputes and checks a rectangle certificate for a basis.
pub fn verify_rect_certificate(basis: &IntMatrix) -> Result<Vec<String>> {
    let cert = rect_reduce(basis)?;
    let mut violations = Vec::new();
    if cert.min_gs + 1e-9 < cert.bound {
        violations.push(format!(
            "certificate bound violated: min_gs {} < bound {}",
            cert.min_gs, cert.bound
        ));
    }
    Ok(violations)
}

/// Convenience: reference backend choice for an instance size.
pub fn default_backend() -> Backend {
    Backend::Auto
}
