//! SampleBDD: coefficient-preserving random reduction of a mod-q BDD
//! instance to a random q-ary instance in dimension `m`.

use num_bigint::BigInt;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::intlat::matrix::IntMatrix;
use crate::qsim::hip::{sample_hip, HipSample, PePlan};
use crate::qsim::pcs::Backend;
use crate::zqgroup::decomp::FiniteGroupDecomp;
use crate::zqgroup::zq::ZqVector;

/// A BDD instance over a q-periodic lattice, as generated and serialized by
/// the tooling. The planted solution is carried for verification only.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BddInstance {
    pub n: usize,
    pub q: u64,
    pub decomp: FiniteGroupDecomp,
    /// Integer target vector.
    pub t: Vec<i64>,
    /// Promise parameter: dist_q(t, G) ≤ eps1·λ₁(G).
    pub eps1: f64,
    pub planted: Option<PlantedSolution>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PlantedSolution {
    /// Hidden coefficients in C̃.
    pub coeffs: Vec<u64>,
    /// Offset Δ (zero-centered integer entries), ‖Δ‖_q ≤ eps1·λ₁.
    pub delta: Vec<i64>,
    /// Exact λ₁(G)² recorded at generation time.
    pub lambda1_sq: u128,
}

impl BddInstance {
    pub fn t_mod_q(&self) -> ZqVector {
        ZqVector::from_signed(self.q, &self.t)
    }

    pub fn t_int(&self) -> Vec<BigInt> {
        self.t.iter().map(|&x| BigInt::from(x)).collect()
    }

    /// The planted closest lattice vector (integer), when available.
    pub fn planted_vector(&self) -> Option<Vec<BigInt>> {
        let p = self.planted.as_ref()?;
        Some(
            self.t
                .iter()
                .zip(&p.delta)
                .map(|(&ti, &di)| BigInt::from(ti) - BigInt::from(di))
                .collect(),
        )
    }
}

/// Reduced random instance: scaled generator matrix, target, and provenance.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ReducedInstance {
    pub q: u64,
    /// Coefficient ranges, inherited from the source decomposition.
    pub qvec: Vec<u64>,
    pub m: usize,
    /// Row-major `m × r`; row `i`, column `j` holds `−(q/q_j)·a_{ij} mod q`,
    /// so that `t̃ − G̃·s` is exactly the vector of per-sample phase errors.
    pub gtilde: Vec<u64>,
    /// Raw labels `a_i` as sampled.
    pub labels: Vec<Vec<u64>>,
    /// Target `t̃ = (O_1, …, O_m)`.
    pub ttilde: Vec<u64>,
    /// Per-row sample metadata.
    pub samples: Vec<HipSample>,
    pub p_err: f64,
}

impl ReducedInstance {
    pub fn rank(&self) -> usize {
        self.qvec.len()
    }

    /// Columns of G̃ as `Z_q` vectors.
    pub fn gens(&self) -> Vec<ZqVector> {
        let r = self.rank();
        (0..r)
            .map(|j| {
                ZqVector::new(
                    self.q,
                    (0..self.m).map(|i| self.gtilde[i * r + j]).collect(),
                )
            })
            .collect()
    }

    pub fn ttilde_vec(&self) -> ZqVector {
        ZqVector::new(self.q, self.ttilde.clone())
    }

    /// `G̃·s mod q` over the coefficient space.
    pub fn apply(&self, s: &[u64]) -> ZqVector {
        let r = self.rank();
        assert_eq!(s.len(), r);
        let mut out = vec![0u64; self.m];
        for i in 0..self.m {
            let mut acc: u128 = 0;
            for j in 0..r {
                acc += self.gtilde[i * r + j] as u128 * s[j] as u128;
            }
            out[i] = (acc % self.q as u128) as u64;
        }
        ZqVector {
            q: self.q,
            entries: out,
        }
    }

    /// Integer basis of the reduced lattice `[G̃ | q·I]`, with the column
    /// transform for coefficient recovery: returns `(H, V)` with
    /// `[G̃ | qI]·V = [H | 0]`.
    pub fn lattice_basis_with_transform(&self) -> Result<(IntMatrix, IntMatrix)> {
        let r = self.rank();
        let a = IntMatrix::from_fn(self.m, r + self.m, |i, j| {
            if j < r {
                BigInt::from(self.gtilde[i * r + j])
            } else if j == r + i {
                BigInt::from(self.q)
            } else {
                BigInt::from(0)
            }
        });
        crate::intlat::hnf::hnf_with_transform(&a)
    }

    /// Coefficient extraction: given a lattice vector `v = H·c` of the
    /// reduced lattice, recovers `s ∈ C̃` with `G̃·s ≡ v (mod q)`.
    pub fn coefficients_from(
        &self,
        v_coeffs_h: &[BigInt],
        transform: &IntMatrix,
    ) -> Vec<u64> {
        let r = self.rank();
        let total = transform.rows();
        let mut x = vec![BigInt::from(0); total];
        for (j, c) in v_coeffs_h.iter().enumerate() {
            if c == &BigInt::from(0) {
                continue;
            }
            for i in 0..total {
                x[i] += &transform[(i, j)] * c;
            }
        }
        (0..r)
            .map(|j| {
                let qj = BigInt::from(self.qvec[j]);
                let m = &x[j] % &qj;
                let m = if m < BigInt::from(0) { m + &qj } else { m };
                u64::try_from(m).expect("reduced mod q_j")
            })
            .collect()
    }

    /// Primitivity of the scaled generator matrix: the coefficient map
    /// `C̃ → Z_q^m` is injective iff the raw label rows span `Z_q^r`.
    pub fn primitive(&self) -> Result<bool> {
        let r = self.rank();
        if r == 0 {
            return Ok(true);
        }
        let flat: Vec<u64> = self
            .labels
            .iter()
            .flat_map(|row| row.iter().copied())
            .collect();
        crate::reduction::qary::is_primitive(self.m, r, self.q, &flat)
    }
}

/// Configuration for a SampleBDD run.
#[derive(Clone, Copy, Debug)]
pub struct SampleBddConfig {
    /// Declared promise parameter ε₁.
    pub eps1: f64,
    /// Target dimension m.
    pub m: usize,
    /// Overall failure probability budget.
    pub p_err: f64,
    /// Register sizing: paper error budget (per-sample p_err/(2m)) or fixed T.
    pub pe: PePlan,
    pub backend: Backend,
    /// Cube side override. `None` uses `⌊λ̂₁/(2√n)⌋`; the ladder also probes
    /// the ceiling, since flooring can hop over the admissible window.
    pub sigma: Option<u64>,
}

/// Runs `m` independent SampleHIP shots and assembles the reduced instance.
///
/// `lambda1_hat` is the λ₁ estimate; the cube side is `σ = ⌊λ̂₁/(2√n)⌋`
/// (clamped to ≥ 1, in which case the PCS precondition check inside the shot
/// refuses with a diagnostic).
pub fn sample_bdd(
    decomp: &FiniteGroupDecomp,
    lambda1_hat: f64,
    t: &ZqVector,
    cfg: &SampleBddConfig,
    rng: &mut impl Rng,
) -> Result<ReducedInstance> {
    let r = decomp.rank();
    if cfg.m < r {
        return Err(Error::precondition(
            "m < r: primitivity impossible, reduced coefficients cannot be unique",
        ));
    }
    if cfg.m == 0 {
        return Err(Error::precondition("m must be positive"));
    }
    // Tail-probability precondition: p_err/2 ≥ 1/2^m + 1/q^{m−r}.
    let tail = 0.5f64.powi(cfg.m as i32)
        + (decomp.q as f64).powi(-((cfg.m - r) as i32));
    if cfg.p_err / 2.0 < tail {
        return Err(Error::precondition(format!(
            "p_err/2 = {} below the tail bound 1/2^m + 1/q^(m-r) = {}",
            cfg.p_err / 2.0,
            tail
        )));
    }
    let n = decomp.n;
    let sigma = cfg
        .sigma
        .unwrap_or_else(|| (lambda1_hat / (2.0 * (n as f64).sqrt())).floor() as u64)
        .max(1);

    let per_sample_plan = match cfg.pe {
        PePlan::ErrorBudget { eps1, .. } => PePlan::ErrorBudget {
            eps1,
            p_err: cfg.p_err / (2.0 * cfg.m as f64),
        },
        fixed => fixed,
    };
    let per_sample_perr = cfg.p_err / (2.0 * cfg.m as f64);

    let mut labels = Vec::with_capacity(cfg.m);
    let mut ttilde = Vec::with_capacity(cfg.m);
    let mut samples = Vec::with_capacity(cfg.m);
    for _ in 0..cfg.m {
        let s = sample_hip(
            decomp,
            sigma,
            cfg.eps1,
            t,
            per_sample_perr,
            per_sample_plan,
            cfg.backend,
            rng,
        )?;
        labels.push(s.a.clone());
        ttilde.push(s.o);
        samples.push(s);
    }

    // Scaled rows: G̃[i][j] = −(q/q_j)·a_{ij} mod q.
    let q = decomp.q;
    let mut gtilde = vec![0u64; cfg.m * r];
    for (i, a) in labels.iter().enumerate() {
        for j in 0..r {
            let scale = q / decomp.qvec[j];
            let v = (a[j] as u128 * scale as u128 % q as u128) as u64;
            gtilde[i * r + j] = (q - v) % q;
        }
    }
    Ok(ReducedInstance {
        q,
        qvec: decomp.qvec.clone(),
        m: cfg.m,
        gtilde,
        labels,
        ttilde,
        samples,
        p_err: cfg.p_err,
    })
}

/// The Lemma-samplebdd distance bound
/// `√ε₁ · q^{r/m} · λ₁(G̃) · 260 · n^{3/4} · m^{2.5} / p_err²`, squared for
/// exact comparison against `dist_q(t̃, G̃)²`.
pub fn samplebdd_distance_bound_sq(
    eps1: f64,
    q: u64,
    r: usize,
    m: usize,
    n: usize,
    lambda1_tilde: f64,
    p_err: f64,
) -> f64 {
    let b = eps1.sqrt()
        * (q as f64).powf(r as f64 / m as f64)
        * lambda1_tilde
        * 260.0
        * (n as f64).powf(0.75)
        * (m as f64).powf(2.5)
        / (p_err * p_err);
    b * b
}

/// Reduced-lattice λ₁² under ‖·‖_q via scan of the generated set (capped by
/// q² from the q·e_i vectors).
pub fn reduced_lambda1_sq(red: &ReducedInstance) -> Result<u128> {
    let gens = red.gens();
    if gens.is_empty() {
        return Ok(q_sq(red.q));
    }
    let mut best = q_sq(red.q);
    let mut cur = vec![0u64; red.rank()];
    loop {
        if cur.iter().any(|&c| c != 0) {
            let v = red.apply(&cur);
            if !v.is_zero() {
                best = best.min(v.modnorm_sq());
            }
        }
        let mut i = 0;
        loop {
            if i == red.rank() {
                return Ok(best);
            }
            cur[i] += 1;
            if cur[i] < red.qvec[i] {
                break;
            }
            cur[i] = 0;
            i += 1;
        }
    }
}

fn q_sq(q: u64) -> u128 {
    q as u128 * q as u128
}

/// `dist_q(t̃, G̃)²` by scan over C̃.
pub fn reduced_dist_sq(red: &ReducedInstance) -> Result<(Vec<u64>, u128)> {
    let gens = red.gens();
    let t = red.ttilde_vec();
    let res = crate::zqgroup::oracle::generated_cvp_exact(red.q, &gens, &red.qvec, &t)?;
    Ok((res.coeffs, res.dist_sq))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zqgroup::zq::abs_mod_q;

    fn test_decomp() -> FiniteGroupDecomp {
        FiniteGroupDecomp::new(16, vec![4], vec![4, 8], 2)
    }

    #[test]
    fn m_below_rank_rejected() {
        let d = test_decomp();
        let t = d.element(&[1]);
        let cfg = SampleBddConfig {
            eps1: 1e-9,
            m: 0,
            p_err: 0.5,
            pe: PePlan::FixedT { t_log2: 5 },
            backend: Backend::Dense,
            sigma: None,
        };
        let mut rng = crate::rng::master(41);
        assert!(sample_bdd(&d, 8.0, &t, &cfg, &mut rng).is_err());
    }

    #[test]
    fn tail_precondition_enforced() {
        let d = test_decomp();
        let t = d.element(&[1]);
        let cfg = SampleBddConfig {
            eps1: 1e-9,
            m: 3,
            p_err: 0.1, // needs 0.05 ≥ 1/8 + 1/16² — false
            pe: PePlan::FixedT { t_log2: 5 },
            backend: Backend::Dense,
            sigma: None,
        };
        let mut rng = crate::rng::master(42);
        assert!(matches!(
            sample_bdd(&d, 8.0, &t, &cfg, &mut rng),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn exact_target_reduces_to_near_exact_instance() {
        // t = G·s exactly: every sample's O equals the scaled row phase up to
        // register rounding, so t̃ − G̃·s is small.
        let d = test_decomp();
        let s = vec![3u64];
        let t = d.element(&s);
        let cfg = SampleBddConfig {
            eps1: 0.0,
            m: 6,
            p_err: 0.2,
            pe: PePlan::FixedT { t_log2: 6 },
            backend: Backend::Dense,
            sigma: None,
        };
        let mut rng = crate::rng::master(43);
        let red = sample_bdd(&d, 8.0, &t, &cfg, &mut rng).unwrap();
        let gs = red.apply(&s);
        let q = red.q;
        for (o, g) in red.ttilde.iter().zip(&gs.entries) {
            let err = abs_mod_q(q, (o + q - g) % q);
            // Register T = 64, q = 16: rounding error ≤ ⌈q/T⌉ = 1.
            assert!(err <= 1, "phase error {err} too large");
        }
    }

    #[test]
    fn scaled_rows_make_phase_identity_hold() {
        // For every label row: G̃s ≡ charphase(a, −s) with the stored scaling.
        let d = test_decomp();
        let s = vec![2u64];
        let t = d.element(&s);
        let cfg = SampleBddConfig {
            eps1: 0.0,
            m: 4,
            p_err: 0.3,
            pe: PePlan::FixedT { t_log2: 5 },
            backend: Backend::Dense,
            sigma: None,
        };
        let mut rng = crate::rng::master(44);
        let red = sample_bdd(&d, 8.0, &t, &cfg, &mut rng).unwrap();
        let gs = red.apply(&s);
        for (i, a) in red.labels.iter().enumerate() {
            let phase = d.charphase(a, &d.neg_coeffs(&s)).unwrap();
            assert_eq!(gs.entries[i], phase, "row {i} scaling mismatch");
        }
    }

    #[test]
    fn coefficient_roundtrip_through_lattice() {
        let d = test_decomp();
        let s = vec![1u64];
        let t = d.element(&s);
        let cfg = SampleBddConfig {
            eps1: 0.0,
            m: 5,
            p_err: 0.2,
            pe: PePlan::FixedT { t_log2: 6 },
            backend: Backend::Dense,
            sigma: None,
        };
        let mut rng = crate::rng::master(45);
        let red = loop {
            let cand = sample_bdd(&d, 8.0, &t, &cfg, &mut rng).unwrap();
            // Coefficient recovery is only unique for primitive labels.
            if cand.primitive().unwrap() {
                break cand;
            }
        };
        let (h, v) = red.lattice_basis_with_transform().unwrap();
        // Push G̃·s (as an integer vector) through H coordinates and back.
        let gs = red.apply(&s);
        let target: Vec<num_rational::BigRational> = gs
            .entries
            .iter()
            .map(|&e| num_rational::BigRational::from(BigInt::from(e)))
            .collect();
        let c = crate::intlat::babai::babai_nearest_plane(&h, &target).unwrap();
        let got = red.coefficients_from(&c, &v);
        assert_eq!(got, s);
    }

    #[test]
    fn paper_plan_infeasible_for_large_eps1() {
        let d = test_decomp();
        let t = d.element(&[1]);
        let cfg = SampleBddConfig {
            eps1: 0.1,
            m: 6,
            p_err: 0.5,
            pe: PePlan::ErrorBudget {
                eps1: 0.1,
                p_err: 0.5,
            },
            backend: Backend::Dense,
            sigma: None,
        };
        let mut rng = crate::rng::master(46);
        assert!(matches!(
            sample_bdd(&d, 8.0, &t, &cfg, &mut rng),
            Err(Error::PeInfeasible { .. })
        ));
    }

    #[test]
    fn distance_bound_formula_spot_value() {
        let b = samplebdd_distance_bound_sq(1e-6, 64, 1, 6, 4, 30.0, 0.1);
        let expect = (1e-3f64) * 64f64.powf(1.0 / 6.0) * 30.0 * 260.0 * 4f64.powf(0.75) * 6f64.powf(2.5) * 100.0;
        assert!((b.sqrt() - expect).abs() / expect < 1e-12);
    }
}
