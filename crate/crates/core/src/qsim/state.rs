//! Dense statevectors over `Z_q^n` and cube states.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::zqgroup::zq::{abs_mod_q, ZqVector};
use crate::DENSE_AMP_BUDGET;

/// Dense amplitude table over `Z_q^n` (index mixed-radix, first coordinate
/// most significant). Squared amplitudes of a physical state sum to 1 within
/// 1e-10.
#[derive(Clone, Debug)]
pub struct DenseState {
    pub q: u64,
    pub n: usize,
    pub amps: Vec<Complex64>,
}

impl DenseState {
    pub fn zero_state(q: u64, n: usize) -> Result<DenseState> {
        let size = dense_size(q, n)?;
        Ok(DenseState {
            q,
            n,
            amps: vec![Complex64::new(0.0, 0.0); size as usize],
        })
    }

    pub fn index_of(&self, y: &[u64]) -> usize {
        debug_assert_eq!(y.len(), self.n);
        let mut idx: u64 = 0;
        for &yi in y {
            debug_assert!(yi < self.q);
            idx = idx * self.q + yi;
        }
        idx as usize
    }

    pub fn coords_of(&self, mut idx: usize) -> Vec<u64> {
        let mut out = vec![0u64; self.n];
        for i in (0..self.n).rev() {
            out[i] = (idx as u64) % self.q;
            idx /= self.q as usize;
        }
        out
    }

    pub fn norm_sq(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn normalize(&mut self) {
        let n = self.norm_sq().sqrt();
        if n > 0.0 {
            for a in self.amps.iter_mut() {
                *a /= n;
            }
        }
    }

    pub fn inner(&self, other: &DenseState) -> Complex64 {
        debug_assert_eq!(self.amps.len(), other.amps.len());
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// `‖self − other‖` (vector 2-norm of the amplitude difference).
    pub fn distance(&self, other: &DenseState) -> f64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn scaled(&self, c: Complex64) -> DenseState {
        DenseState {
            q: self.q,
            n: self.n,
            amps: self.amps.iter().map(|a| a * c).collect(),
        }
    }
}

pub fn dense_size(q: u64, n: usize) -> Result<u64> {
    let mut size: u64 = 1;
    for _ in 0..n {
        size = size
            .checked_mul(q)
            .filter(|&s| s <= DENSE_AMP_BUDGET)
            .ok_or(Error::DenseBudget {
                size: u64::MAX,
                budget: DENSE_AMP_BUDGET,
            })?;
    }
    Ok(size)
}

/// Number of common points of `[±σ]` and `[±σ] + δ` in `Z_q`, counted
/// exactly. `[±σ] = {q−σ+1, …, σ}` has `2σ` elements.
pub fn cube_overlap_1d(delta: u64, sigma: u64, q: u64) -> Result<u64> {
    if sigma == 0 {
        return Err(Error::precondition("sigma must be at least 1"));
    }
    if 2 * sigma > q {
        return Err(Error::precondition("cube side 2σ exceeds q"));
    }
    let d = delta % q;
    if d == 0 {
        return Ok(2 * sigma);
    }
    // Two contiguous arcs of length 2σ on the cycle Z_q, offset by d: the
    // overlap is max(0, 2σ−d) from one side plus max(0, 2σ−(q−d)) from the
    // wraparound side.
    let side = |off: u64| (2 * sigma).saturating_sub(off);
    Ok(side(d) + side(q - d))
}

/// Membership of one coordinate in the zero-centered cube `[±σ]`.
pub fn in_cube_1d(z: u64, sigma: u64, q: u64) -> bool {
    // [±σ] = {q−σ+1,…,q−1, 0, 1,…,σ}
    z <= sigma || z >= q - sigma + 1
}

/// Uniform cube state around `y`: amplitude `(2σ)^{−n/2}` on `{y+z : z ∈ [±σ]^n}`.
pub fn make_cube_state(y: &ZqVector, sigma: u64, q: u64) -> Result<DenseState> {
    if sigma == 0 {
        return Err(Error::precondition("sigma must be at least 1"));
    }
    if 2 * sigma > q {
        return Err(Error::precondition("cube side 2σ exceeds q"));
    }
    let n = y.dim();
    let mut st = DenseState::zero_state(q, n)?;
    let amp = Complex64::new((2 * sigma) as f64, 0.0).powf(-(n as f64) / 2.0);
    // Walk the cube offsets in mixed radix over [2σ]^n.
    let side = 2 * sigma;
    let mut offs = vec![0u64; n];
    loop {
        let point: Vec<u64> = (0..n)
            .map(|i| {
                // offset index 0..2σ-1 maps to z ∈ {q−σ+1,…,σ}
                let z = (q - sigma + 1 + offs[i]) % q;
                (y.entries[i] + z) % q
            })
            .collect();
        let idx = st.index_of(&point);
        st.amps[idx] += amp;
        // advance
        let mut i = 0;
        loop {
            if i == n {
                return Ok(st);
            }
            offs[i] += 1;
            if offs[i] < side {
                break;
            }
            offs[i] = 0;
            i += 1;
        }
    }
}

/// Shift operator `U_x`: amplitude at `y + x` equals the old amplitude at `y`.
pub fn shift_apply(state: &DenseState, x: &ZqVector) -> DenseState {
    debug_assert_eq!(state.q, x.q);
    debug_assert_eq!(state.n, x.dim());
    let mut out = DenseState {
        q: state.q,
        n: state.n,
        amps: vec![Complex64::new(0.0, 0.0); state.amps.len()],
    };
    for (idx, amp) in state.amps.iter().enumerate() {
        if amp.norm_sqr() == 0.0 {
            continue;
        }
        let y = state.coords_of(idx);
        let shifted: Vec<u64> = y
            .iter()
            .zip(&x.entries)
            .map(|(&a, &b)| (a + b) % state.q)
            .collect();
        let dst = out.index_of(&shifted);
        out.amps[dst] = *amp;
    }
    out
}

/// `|δ|_q` for a signed shift, convenience for tests.
pub fn abs_delta(q: u64, delta: i64) -> u64 {
    abs_mod_q(q, delta.rem_euclid(q as i64) as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overlap_examples() {
        // δ=0 → 2σ.
        assert_eq!(cube_overlap_1d(0, 3, 16).unwrap(), 6);
        // q=16, σ=3, δ=2 → 4.
        assert_eq!(cube_overlap_1d(2, 3, 16).unwrap(), 4);
        // |δ|_q ≥ 2σ with q > 4σ → 0.
        assert_eq!(cube_overlap_1d(7, 3, 16).unwrap(), 0);
        assert_eq!(cube_overlap_1d(16 - 7, 3, 16).unwrap(), 0);
        // 2σ > q errors.
        assert!(cube_overlap_1d(0, 9, 16).is_err());
    }

    #[test]
    fn overlap_matches_double_loop() {
        // Direct double loop over [±σ]² as the oracle.
        for q in [8u64, 12, 16] {
            for sigma in 1..=q / 2 {
                for delta in 0..q {
                    let mut count = 0;
                    for zi in 0..2 * sigma {
                        for zj in 0..2 * sigma {
                            let z = (q - sigma + 1 + zi) % q;
                            let zp = (q - sigma + 1 + zj) % q;
                            if z == (zp + delta) % q {
                                count += 1;
                            }
                        }
                    }
                    assert_eq!(
                        cube_overlap_1d(delta, sigma, q).unwrap(),
                        count,
                        "q={q} sigma={sigma} delta={delta}"
                    );
                }
            }
        }
    }

    #[test]
    fn cube_state_small_example() {
        // n=1, q=8, σ=1, y=0: equal amplitude on [±1] = {8,1} ≡ {0,1}.
        let st = make_cube_state(&ZqVector::zero(8, 1), 1, 8).unwrap();
        let expected = 1.0 / 2f64.sqrt();
        for (idx, amp) in st.amps.iter().enumerate() {
            if idx == 0 || idx == 1 {
                assert!((amp.re - expected).abs() < 1e-12);
            } else {
                assert_eq!(amp.norm_sqr(), 0.0);
            }
        }
    }

    #[test]
    fn cube_state_normalized() {
        for (q, n, sigma) in [(8u64, 2usize, 2u64), (16, 2, 3), (9, 2, 4)] {
            let y = ZqVector::new(q, (0..n as u64).map(|i| i * 3 % q).collect());
            let st = make_cube_state(&y, sigma, q).unwrap();
            assert!((st.norm_sq() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn cube_inner_product_matches_overlap_product() {
        // ⟨cube_y | cube_{y+Δ}⟩ = Π_i overlap(Δ_i)/(2σ).
        let q = 16u64;
        let sigma = 3u64;
        let y = ZqVector::new(q, vec![2, 11]);
        for delta in [[0u64, 0], [2, 5], [1, 9], [8, 8]] {
            let d = ZqVector::new(q, delta.to_vec());
            let a = make_cube_state(&y, sigma, q).unwrap();
            let b = make_cube_state(&y.add(&d), sigma, q).unwrap();
            let ip = a.inner(&b);
            let expect: f64 = delta
                .iter()
                .map(|&di| cube_overlap_1d(di, sigma, q).unwrap() as f64 / (2 * sigma) as f64)
                .product();
            assert!((ip.re - expect).abs() < 1e-12 && ip.im.abs() < 1e-12);
        }
    }

    #[test]
    fn shift_is_permutation() {
        let q = 8u64;
        let y = ZqVector::new(q, vec![1, 6]);
        let st = make_cube_state(&y, 2, q).unwrap();
        let x = ZqVector::new(q, vec![3, 5]);
        let shifted = shift_apply(&st, &x);
        // U_x |cube_y⟩ = |cube_{x+y}⟩
        let direct = make_cube_state(&y.add(&x), 2, q).unwrap();
        assert!(shifted.distance(&direct) < 1e-12);
        // Identity and inverse.
        let id = shift_apply(&st, &ZqVector::zero(q, 2));
        assert!(id.distance(&st) < 1e-15);
        let back = shift_apply(&shifted, &ZqVector::new(q, vec![q - 3, q - 5]));
        assert!(back.distance(&st) < 1e-15);
    }

    #[test]
    fn cube_closeness_bound() {
        // ‖|cube_y⟩ − |cube_{y+Δ}⟩‖ ≤ √(n‖Δ‖_q/σ) on random pairs.
        let q = 16u64;
        let mut rng = crate::rng::master(5);
        use rand::Rng;
        for _ in 0..200 {
            let n = rng.gen_range(1..=2);
            let sigma = rng.gen_range(1..=q / 2);
            let y = ZqVector::new(q, (0..n).map(|_| rng.gen_range(0..q)).collect());
            let d = ZqVector::new(q, (0..n).map(|_| rng.gen_range(0..q)).collect());
            let a = make_cube_state(&y, sigma, q).unwrap();
            let b = make_cube_state(&y.add(&d), sigma, q).unwrap();
            let dist = a.distance(&b);
            let bound = ((n as f64) * d.modnorm() / sigma as f64).sqrt();
            assert!(
                dist <= bound + 1e-10,
                "closeness failed: {dist} > {bound} (σ={sigma}, Δ={d:?})"
            );
        }
    }

    #[test]
    fn cube_orthogonality_beyond_threshold() {
        // Exact zero inner product when ‖Δ‖_q ≥ √n·2σ + 1.
        let q = 32u64;
        let mut rng = crate::rng::master(6);
        use rand::Rng;
        let mut checked = 0;
        while checked < 100 {
            let n = rng.gen_range(1..=2);
            let sigma = rng.gen_range(1..=4);
            let y = ZqVector::new(q, (0..n).map(|_| rng.gen_range(0..q)).collect());
            let d = ZqVector::new(q, (0..n).map(|_| rng.gen_range(0..q)).collect());
            let thresh = (n as f64).sqrt() * (2 * sigma) as f64 + 1.0;
            if d.modnorm() < thresh {
                continue;
            }
            let a = make_cube_state(&y, sigma, q).unwrap();
            let b = make_cube_state(&y.add(&d), sigma, q).unwrap();
            let ip = a.inner(&b);
            assert_eq!(ip.norm_sqr(), 0.0, "expected exact orthogonality");
            checked += 1;
        }
    }
}
