//! Finite group decomposition of `L mod q`.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::intlat::hnf::{hnf, snf};
use crate::intlat::lattice::Lattice;
use crate::intlat::matrix::IntMatrix;
use crate::zqgroup::zq::ZqVector;
use crate::GROUP_SCAN_BUDGET;

/// Decomposition `(G, q⃗, r)` of `G = L mod q ≅ Z_{q₁} × … × Z_{q_r}` with
/// the divisibility chain `q₁ | q₂ | … | q_r | q`.
///
/// Column `i` of `gens` has order exactly `qvec[i]` in `Z_q^n`, and the map
/// `C̃ = [q₁]×…×[q_r] → G, c ↦ G·c` is a bijection. Decompositions are
/// compared by the subgroup they generate (HNF of the lifted lattice), never
/// by generator entries.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FiniteGroupDecomp {
    pub q: u64,
    pub qvec: Vec<u64>,
    /// Generator matrix, row-major `n × r`, entries in `[0, q)`.
    #[serde(rename = "G")]
    pub gens: Vec<u64>,
    pub n: usize,
    #[serde(skip)]
    lambda1_cache: OnceLock<Result<u128>>,
}

impl FiniteGroupDecomp {
    pub fn new(q: u64, qvec: Vec<u64>, gens: Vec<u64>, n: usize) -> FiniteGroupDecomp {
        assert_eq!(gens.len(), n * qvec.len());
        FiniteGroupDecomp {
            q,
            qvec,
            gens: gens.into_iter().map(|g| g % q).collect(),
            n,
            lambda1_cache: OnceLock::new(),
        }
    }

    /// Trivial group (r = 0): `L = q·Z^n`.
    pub fn trivial(q: u64, n: usize) -> FiniteGroupDecomp {
        FiniteGroupDecomp::new(q, Vec::new(), Vec::new(), n)
    }

    pub fn rank(&self) -> usize {
        self.qvec.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.qvec.is_empty()
    }

    /// `|G| = Π q_i`, saturating at u64::MAX.
    pub fn order(&self) -> u64 {
        self.qvec
            .iter()
            .fold(1u64, |acc, &qi| acc.saturating_mul(qi))
    }

    pub fn gen_entry(&self, row: usize, col: usize) -> u64 {
        self.gens[row * self.rank() + col]
    }

    pub fn generator(&self, col: usize) -> ZqVector {
        ZqVector::new(
            self.q,
            (0..self.n).map(|i| self.gen_entry(i, col)).collect(),
        )
    }

    /// Group element `G·c mod q` for coefficients `c ∈ C̃`.
    pub fn element(&self, c: &[u64]) -> ZqVector {
        assert_eq!(c.len(), self.rank());
        let mut out = vec![0u64; self.n];
        for i in 0..self.n {
            let mut acc: u128 = 0;
            for (j, &cj) in c.iter().enumerate() {
                acc += self.gen_entry(i, j) as u128 * cj as u128;
            }
            out[i] = (acc % self.q as u128) as u64;
        }
        ZqVector {
            q: self.q,
            entries: out,
        }
    }

    /// Character phase: `χ_a(c) = ω_q^{charphase(a, c)}` with
    /// `charphase(a, c) = Σ_i a_i·(q/q_i)·c_i mod q`.
    ///
    /// Errors when some `c_i ∉ [q_i]`.
    pub fn charphase(&self, a: &[u64], c: &[u64]) -> Result<u64> {
        assert_eq!(a.len(), self.rank());
        assert_eq!(c.len(), self.rank());
        let mut acc: u128 = 0;
        for i in 0..self.rank() {
            if c[i] >= self.qvec[i] {
                return Err(Error::precondition(format!(
                    "coefficient {} out of C̃ range [0, {})",
                    c[i], self.qvec[i]
                )));
            }
            let scale = self.q / self.qvec[i];
            acc += (a[i] % self.q) as u128 * scale as u128 % self.q as u128 * c[i] as u128;
            acc %= self.q as u128;
        }
        Ok((acc % self.q as u128) as u64)
    }

    /// Negation of coefficients inside `C̃` (componentwise `q_i − c_i`).
    pub fn neg_coeffs(&self, c: &[u64]) -> Vec<u64> {
        c.iter()
            .zip(&self.qvec)
            .map(|(&ci, &qi)| if ci == 0 { 0 } else { qi - ci })
            .collect()
    }

    /// Addition of coefficients in `C̃` (componentwise mod `q_i`).
    pub fn add_coeffs(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter()
            .zip(b)
            .zip(&self.qvec)
            .map(|((&x, &y), &qi)| (x + y) % qi)
            .collect()
    }

    /// Iterates every coefficient vector in `C̃` (mixed-radix counter).
    pub fn coeff_iter(&self) -> CoeffIter<'_> {
        CoeffIter {
            qvec: &self.qvec,
            cur: vec![0; self.rank()],
            done: false,
        }
    }

    /// Exact squared `λ₁(G)` (min over nonzero group elements of `‖·‖_q²`),
    /// cached. Errors if `|G|` exceeds the scan budget. Trivial group yields
    /// `Err`-free `u128::MAX` sentinel (treated as +∞ by callers).
    pub fn lambda1_sq(&self) -> Result<u128> {
        self.lambda1_cache
            .get_or_init(|| crate::zqgroup::oracle::lambda1_group_sq_uncached(self))
            .clone()
    }

    /// `λ₁(G)` as a float; +∞ for the trivial group.
    pub fn lambda1(&self) -> Result<f64> {
        let sq = self.lambda1_sq()?;
        if sq == u128::MAX {
            Ok(f64::INFINITY)
        } else {
            Ok((sq as f64).sqrt())
        }
    }

    /// Integer lattice `[G | q·I]` spanned by lifted generators, as an HNF
    /// basis. This is the lattice the group describes.
    pub fn lift_lattice(&self) -> Result<IntMatrix> {
        let n = self.n;
        let r = self.rank();
        let m = IntMatrix::from_fn(n, r + n, |i, j| {
            if j < r {
                BigInt::from(self.gen_entry(i, j))
            } else if i + r == j {
                BigInt::from(self.q)
            } else {
                BigInt::zero()
            }
        });
        hnf(&m)
    }

    /// Subgroup equality: same lifted lattice.
    pub fn same_group(&self, other: &FiniteGroupDecomp) -> Result<bool> {
        if self.q != other.q || self.n != other.n {
            return Ok(false);
        }
        Ok(self.lift_lattice()? == other.lift_lattice()?)
    }
}

/// Mixed-radix iterator over `C̃`.
pub struct CoeffIter<'a> {
    qvec: &'a [u64],
    cur: Vec<u64>,
    done: bool,
}

impl Iterator for CoeffIter<'_> {
    type Item = Vec<u64>;
    fn next(&mut self) -> Option<Vec<u64>> {
        if self.done {
            return None;
        }
        let out = self.cur.clone();
        // Advance.
        let mut i = 0;
        loop {
            if i == self.qvec.len() {
                self.done = true;
                break;
            }
            self.cur[i] += 1;
            if self.cur[i] < self.qvec[i] {
                break;
            }
            self.cur[i] = 0;
            i += 1;
        }
        Some(out)
    }
}

/// Decomposes `L mod q` into cyclic factors with ascending divisibility.
///
/// Realized through the SNF of `[B | q·I]`: with `U·A·V = D`, the lattice is
/// `U⁻¹·D·Z^n`, `q·Z^n = U⁻¹·q·Z^n`, so the quotient splits along the columns
/// of `U⁻¹` with orders `q/d_i`. Columns of order 1 are dropped and the rest
/// are reversed to make the chain ascending.
pub fn decompose(lattice: &Lattice, q: u64) -> Result<FiniteGroupDecomp> {
    let b = lattice.basis();
    let n = b.rows();
    // Periodicity check: q·B⁻¹ integral.
    let inv = b.inverse_rational()?;
    let qq = BigInt::from(q);
    for row in &inv {
        for x in row {
            if !(x * num_rational::BigRational::from(qq.clone())).is_integer() {
                return Err(Error::NotPeriodic { q });
            }
        }
    }

    let a = IntMatrix::from_fn(n, 2 * n, |i, j| {
        if j < n {
            b[(i, j)].clone()
        } else if j == i + n {
            qq.clone()
        } else {
            BigInt::zero()
        }
    });
    let (u, d, _v) = snf(&a);
    // U⁻¹ columns: solve U·x = e_i; U unimodular so x integral.
    let u_inv = {
        let inv = u.inverse_rational()?;
        IntMatrix::from_fn(n, n, |i, j| {
            debug_assert!(inv[i][j].is_integer());
            inv[i][j].to_integer()
        })
    };

    // Column i of U⁻¹ scaled by d_i generates a factor of order q/d_i.
    let mut factors: Vec<(u64, Vec<u64>)> = Vec::new();
    for i in 0..n {
        let di = d[(i, i)].to_u64().ok_or_else(|| {
            Error::precondition("SNF diagonal entry does not fit in u64")
        })?;
        debug_assert!(di > 0 && q % di == 0, "d_i must divide q");
        let order = q / di;
        if order == 1 {
            continue;
        }
        let col: Vec<u64> = (0..n)
            .map(|row| {
                let e = (&u_inv[(row, i)] * BigInt::from(di)) % &qq;
                let e = if e.is_negative() { e + &qq } else { e };
                e.to_u64().expect("reduced mod q")
            })
            .collect();
        factors.push((order, col));
    }
    // SNF gives descending orders; reverse for the ascending chain.
    factors.reverse();
    let r = factors.len();
    let qvec: Vec<u64> = factors.iter().map(|(o, _)| *o).collect();
    for w in qvec.windows(2) {
        debug_assert!(w[1] % w[0] == 0, "divisibility chain violated");
    }
    let mut gens = vec![0u64; n * r];
    for (j, (_, col)) in factors.iter().enumerate() {
        for i in 0..n {
            gens[i * r + j] = col[i];
        }
    }
    let out = FiniteGroupDecomp::new(q, qvec, gens, n);
    debug_assert!(out.order() <= GROUP_SCAN_BUDGET || out.rank() > 0);
    Ok(out)
}
