//! Vectors over `Z_q` and the modular norm.

use serde::{Deserialize, Serialize};

/// Vector with entries reduced into `[0, q)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZqVector {
    pub q: u64,
    pub entries: Vec<u64>,
}

impl ZqVector {
    pub fn new(q: u64, entries: Vec<u64>) -> ZqVector {
        assert!(q >= 1);
        let entries = entries.into_iter().map(|e| e % q).collect();
        ZqVector { q, entries }
    }

    pub fn from_signed(q: u64, entries: &[i64]) -> ZqVector {
        ZqVector::new(
            q,
            entries
                .iter()
                .map(|&e| e.rem_euclid(q as i64) as u64)
                .collect(),
        )
    }

    pub fn zero(q: u64, n: usize) -> ZqVector {
        ZqVector {
            q,
            entries: vec![0; n],
        }
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&e| e == 0)
    }

    pub fn add(&self, other: &ZqVector) -> ZqVector {
        assert_eq!(self.q, other.q);
        ZqVector {
            q: self.q,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(&a, &b)| (a + b) % self.q)
                .collect(),
        }
    }

    pub fn sub(&self, other: &ZqVector) -> ZqVector {
        assert_eq!(self.q, other.q);
        ZqVector {
            q: self.q,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(&a, &b)| (a + self.q - b) % self.q)
                .collect(),
        }
    }

    pub fn scale(&self, k: u64) -> ZqVector {
        let k = (k as u128) % self.q as u128;
        ZqVector {
            q: self.q,
            entries: self
                .entries
                .iter()
                .map(|&a| ((a as u128 * k) % self.q as u128) as u64)
                .collect(),
        }
    }

    /// Zero-centered representative of one coordinate, in `(−q/2, q/2]`.
    pub fn centered_coord(q: u64, e: u64) -> i64 {
        debug_assert!(e < q);
        if 2 * e <= q {
            e as i64
        } else {
            e as i64 - q as i64
        }
    }

    /// Zero-centered representative vector.
    pub fn centered(&self) -> Vec<i64> {
        self.entries
            .iter()
            .map(|&e| Self::centered_coord(self.q, e))
            .collect()
    }

    /// Exact squared modular norm `‖·‖_q²`: the squared Euclidean length of
    /// the shortest coset representative (per-coordinate centering).
    pub fn modnorm_sq(&self) -> u128 {
        self.centered()
            .iter()
            .map(|&c| (c as i128 * c as i128) as u128)
            .sum()
    }

    /// Modular norm `‖·‖_q`.
    pub fn modnorm(&self) -> f64 {
        (self.modnorm_sq() as f64).sqrt()
    }

    /// `‖self − other‖_q` squared.
    pub fn dist_sq(&self, other: &ZqVector) -> u128 {
        self.sub(other).modnorm_sq()
    }
}

/// One-dimensional modular absolute value `|y|_q`.
pub fn abs_mod_q(q: u64, y: u64) -> u64 {
    let y = y % q;
    y.min(q - y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn modnorm_examples() {
        assert_eq!(ZqVector::new(10, vec![7]).modnorm(), 3.0);
        assert_eq!(ZqVector::new(10, vec![5]).modnorm(), 5.0);
        let v = ZqVector::new(8, vec![7, 1]);
        assert_eq!(v.modnorm_sq(), 2);
        assert!((v.modnorm() - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn centered_rep_range() {
        for q in [7u64, 8, 12] {
            for e in 0..q {
                let c = ZqVector::centered_coord(q, e);
                assert!(2 * c > -(q as i64) && 2 * c <= q as i64);
                assert_eq!(c.rem_euclid(q as i64) as u64, e);
            }
        }
    }

    #[test]
    fn norm_properties_randomized() {
        // ‖k·y‖_q ≤ k‖y‖_q, triangle inequality, and agreement with the
        // Euclidean norm below q/2. 1000 trials per modulus.
        for q in [8u64, 12, 64] {
            let mut rng = crate::rng::master(100 + q);
            for _ in 0..1000 {
                let n = rng.gen_range(1..=4);
                let y = ZqVector::new(q, (0..n).map(|_| rng.gen_range(0..q)).collect());
                let z = ZqVector::new(q, (0..n).map(|_| rng.gen_range(0..q)).collect());
                let k = rng.gen_range(0..2 * q);
                // Scaling: compare squared via f64 (values are small ints).
                let lhs = y.scale(k).modnorm();
                let rhs = k as f64 * y.modnorm();
                assert!(lhs <= rhs + 1e-9, "scale failed q={q} k={k} y={y:?}");
                // Triangle.
                assert!(y.add(&z).modnorm() <= y.modnorm() + z.modnorm() + 1e-9);
                // Agreement with Euclidean distance below q/2: build a small
                // integer vector and reduce it.
                let small: Vec<i64> = (0..n)
                    .map(|_| rng.gen_range(-(q as i64) / 4..=(q as i64) / 4))
                    .collect();
                let euclid_sq: u128 = small.iter().map(|&c| (c * c) as u128).sum();
                if 4 * euclid_sq <= (q * q) as u128 {
                    let v = ZqVector::from_signed(q, &small);
                    assert_eq!(v.modnorm_sq(), euclid_sq);
                }
            }
        }
    }

    #[test]
    fn abs_mod() {
        assert_eq!(abs_mod_q(16, 15), 1);
        assert_eq!(abs_mod_q(16, 8), 8);
        assert_eq!(abs_mod_q(16, 3), 3);
    }
}
