//! Phased cube states.
//!
//! `ψ_a = |G|^{-1/2} Σ_{c ∈ C̃} χ_a(c) |cube_{G·c}⟩` — the approximate
//! eigenvector of shift operators whose shifts are close to group elements.
//! Two backends carry it: a dense statevector (exhaustive, small `q^n`) and
//! an analytic Gram handle that answers autocorrelation queries
//! `g(d) = ⟨ψ|U_t^d|ψ⟩` from per-coordinate cube overlaps, which is exact and
//! scales to far larger groups.

use std::collections::HashMap;
use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qsim::state::{cube_overlap_1d, dense_size, make_cube_state, DenseState};
use crate::zqgroup::decomp::FiniteGroupDecomp;
use crate::zqgroup::zq::ZqVector;
use crate::{DENSE_AMP_BUDGET, GROUP_SCAN_BUDGET};

/// Which simulation backend carries a PCS.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Backend {
    /// Pick dense when it fits, gram otherwise.
    Auto,
    Dense,
    Gram,
}

impl Default for Backend {
    fn default() -> Self {
        Backend::Auto
    }
}

/// A phased cube state: label, side parameter, and backend tag.
#[derive(Clone, Debug)]
pub struct PcsModel {
    pub decomp: FiniteGroupDecomp,
    /// Label `a ∈ Z_q^r`, reduced mod q.
    pub label: Vec<u64>,
    /// Cube side parameter σ (side length 2σ).
    pub sigma: u64,
    pub backend: PcsBackend,
}

/// Backend payload.
#[derive(Clone, Debug)]
pub enum PcsBackend {
    Dense(DenseState),
    Gram(GramPcs),
}

impl PcsModel {
    pub fn backend_name(&self) -> &'static str {
        match self.backend {
            PcsBackend::Dense(_) => "dense",
            PcsBackend::Gram(_) => "gram",
        }
    }
}

/// Builds a PCS with a uniformly random label (simulating the measurement in
/// the preparation circuit, whose outcome distribution is uniform).
pub fn make_pcs(
    decomp: &FiniteGroupDecomp,
    sigma: u64,
    backend: Backend,
    rng: &mut impl Rng,
) -> Result<PcsModel> {
    let r = decomp.rank();
    let label: Vec<u64> = (0..r).map(|_| rng.gen_range(0..decomp.q)).collect();
    make_pcs_with_label(decomp, sigma, label, backend)
}

/// Test hook / deterministic construction with a forced label.
pub fn make_pcs_with_label(
    decomp: &FiniteGroupDecomp,
    sigma: u64,
    label: Vec<u64>,
    backend: Backend,
) -> Result<PcsModel> {
    if sigma == 0 {
        return Err(Error::precondition("sigma must be at least 1"));
    }
    if 2 * sigma > decomp.q {
        return Err(Error::precondition("cube side 2σ exceeds q"));
    }
    if decomp.order() > GROUP_SCAN_BUDGET {
        return Err(Error::BudgetExceeded {
            visited: decomp.order(),
            budget: GROUP_SCAN_BUDGET,
        });
    }
    let label: Vec<u64> = label.iter().map(|&a| a % decomp.q).collect();
    assert_eq!(label.len(), decomp.rank());

    let dense_fits = dense_size(decomp.q, decomp.n).is_ok();
    let use_dense = match backend {
        Backend::Dense => {
            if !dense_fits {
                return Err(Error::DenseBudget {
                    size: u64::MAX,
                    budget: DENSE_AMP_BUDGET,
                });
            }
            true
        }
        Backend::Gram => false,
        Backend::Auto => dense_fits,
    };

    let payload = if use_dense {
        PcsBackend::Dense(dense_pcs(decomp, sigma, &label)?)
    } else {
        PcsBackend::Gram(GramPcs::build(decomp, sigma, &label)?)
    };
    Ok(PcsModel {
        decomp: decomp.clone(),
        label,
        sigma,
        backend: payload,
    })
}

/// Explicit dense superposition, normalized.
fn dense_pcs(decomp: &FiniteGroupDecomp, sigma: u64, label: &[u64]) -> Result<DenseState> {
    let q = decomp.q;
    let n = decomp.n;
    let mut st = DenseState::zero_state(q, n)?;
    let group_scale = 1.0 / (decomp.order() as f64).sqrt();
    for c in decomp.coeff_iter() {
        let phase = decomp.charphase(label, &c)?;
        let w = Complex64::from_polar(group_scale, TAU * phase as f64 / q as f64);
        let cube = make_cube_state(&decomp.element(&c), sigma, q)?;
        for (dst, src) in st.amps.iter_mut().zip(&cube.amps) {
            *dst += w * src;
        }
    }
    // Overlapping cubes (σ beyond the admissible range) leave the raw sum
    // unnormalized; the physical state is the normalized vector.
    st.normalize();
    Ok(st)
}

/// Analytic Gram backend: the group element table with phases, spatially
/// bucketed so that autocorrelation queries only touch elements near the
/// query point.
#[derive(Clone, Debug)]
pub struct GramPcs {
    q: u64,
    n: usize,
    sigma: u64,
    /// (coords, charphase) per group element.
    elements: Vec<(Vec<u64>, u64)>,
    /// Bucket grid: coordinate i maps to bucket `coord / cell`; key is the
    /// packed bucket index. Empty when the element table is small enough to
    /// scan directly.
    buckets: HashMap<u64, Vec<u32>>,
    cell: u64,
    buckets_per_axis: u64,
}

/// Below this element count a linear scan beats the bucket overhead.
const BUCKET_THRESHOLD: usize = 8192;

impl GramPcs {
    fn build(decomp: &FiniteGroupDecomp, sigma: u64, label: &[u64]) -> Result<GramPcs> {
        let q = decomp.q;
        let n = decomp.n;
        let mut elements = Vec::with_capacity(decomp.order() as usize);
        for c in decomp.coeff_iter() {
            let phase = decomp.charphase(label, &c)?;
            elements.push((decomp.element(&c).entries, phase));
        }
        let cell = (2 * sigma).min(q);
        let buckets_per_axis = q.div_ceil(cell);
        let mut buckets = HashMap::new();
        if elements.len() > BUCKET_THRESHOLD {
            for (i, (coords, _)) in elements.iter().enumerate() {
                let key = Self::bucket_key_of(coords, cell, buckets_per_axis);
                buckets.entry(key).or_insert_with(Vec::new).push(i as u32);
            }
        }
        Ok(GramPcs {
            q,
            n,
            sigma,
            elements,
            buckets,
            cell,
            buckets_per_axis,
        })
    }

    fn bucket_key_of(coords: &[u64], cell: u64, per_axis: u64) -> u64 {
        let mut key = 0u64;
        for &c in coords {
            key = key * per_axis + c / cell;
        }
        key
    }

    /// Normalized autocorrelation sequence `g(d) = ⟨ψ|U_t^d|ψ⟩ / ⟨ψ|ψ⟩` for
    /// `d = 0..len`.
    ///
    /// `g_raw(d) = Σ_{e ∈ C̃} χ_a(e) · Π_i overlap((G·e + d·t)_i) / (2σ)^n`;
    /// only elements whose cube meets the shifted cube contribute, which the
    /// bucket grid finds without scanning the group.
    pub fn autocorrelation(&self, t: &ZqVector, len: usize) -> Result<Vec<Complex64>> {
        let q = self.q;
        let mut out = Vec::with_capacity(len);
        let mut shift = ZqVector::zero(q, self.n);
        let norm = ((2 * self.sigma) as f64).powi(self.n as i32);
        for _ in 0..len {
            let g = self.correlation_at(&shift)? / norm;
            out.push(g);
            shift = shift.add(t);
        }
        let g0 = out[0].re;
        if g0 <= 0.0 {
            return Err(Error::precondition("degenerate PCS normalization"));
        }
        Ok(out.into_iter().map(|g| g / g0).collect())
    }

    /// Unnormalized `Σ_e χ(e) · Π overlap((G·e + p)_i)`.
    fn correlation_at(&self, p: &ZqVector) -> Result<Complex64> {
        let q = self.q;
        let mut acc = Complex64::new(0.0, 0.0);
        let mut add_element = |coords: &[u64], phase: u64| -> Result<()> {
            let mut prod = 1.0f64;
            for (i, &ci) in coords.iter().enumerate() {
                let d = (ci + p.entries[i]) % q;
                let ov = cube_overlap_1d(d, self.sigma, q)?;
                if ov == 0 {
                    return Ok(());
                }
                prod *= ov as f64;
            }
            acc += Complex64::from_polar(prod, TAU * phase as f64 / q as f64);
            Ok(())
        };
        if self.buckets.is_empty() {
            for (coords, phase) in &self.elements {
                add_element(coords, *phase)?;
            }
        } else {
            // A nonzero overlap needs every coordinate of G·e + p within the
            // open window (−2σ, 2σ) mod q, i.e. G·e within a width-(4σ−1) box
            // around −p. That box meets at most 3 buckets per axis.
            let mut axis_buckets: Vec<Vec<u64>> = Vec::with_capacity(self.n);
            for i in 0..self.n {
                let center = (q - p.entries[i]) % q;
                let lo = (center + q - (2 * self.sigma - 1)) % q;
                let b_lo = lo / self.cell;
                let mut bs = vec![b_lo];
                // Window width 4σ−1 spans at most 3 cells of size 2σ.
                for extra in 1..=2 {
                    bs.push((b_lo + extra) % self.buckets_per_axis);
                }
                bs.sort_unstable();
                bs.dedup();
                axis_buckets.push(bs);
            }
            // Cartesian product of candidate buckets.
            let mut idx = vec![0usize; self.n];
            'outer: loop {
                let mut key = 0u64;
                for i in 0..self.n {
                    key = key * self.buckets_per_axis + axis_buckets[i][idx[i]];
                }
                if let Some(members) = self.buckets.get(&key) {
                    for &m in members {
                        let (coords, phase) = &self.elements[m as usize];
                        add_element(coords, *phase)?;
                    }
                }
                let mut i = 0;
                loop {
                    if i == self.n {
                        break 'outer;
                    }
                    idx[i] += 1;
                    if idx[i] < axis_buckets[i].len() {
                        break;
                    }
                    idx[i] = 0;
                    i += 1;
                }
            }
        }
        Ok(acc)
    }
}
