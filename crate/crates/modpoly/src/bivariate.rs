//! Dense coefficient grids for φ_ℓ(x, y), over F_p (entries `u64`) or over
//! the integers (entries `BigInt`).

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::fmt::Display;

/// Coefficient grid c[k][m] for x^k y^m with 0 ≤ k, m ≤ ℓ+1.
///
/// Shape: monic of degree ℓ+1 in x; the constant column p₀(y) is monic of
/// degree ℓ+1 in y; every other column has y-degree ≤ ℓ. The classical x↔y
/// symmetry is checked, never assumed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BivariatePoly<C> {
    ell: u64,
    coeffs: Vec<Vec<C>>,
}

impl<C: Zero + One + Clone + PartialEq> BivariatePoly<C> {
    pub fn new_zero(ell: u64) -> Self {
        let n = ell as usize + 2;
        BivariatePoly { ell, coeffs: vec![vec![C::zero(); n]; n] }
    }

    pub fn ell(&self) -> u64 {
        self.ell
    }

    /// Grid side length, ℓ+2.
    pub fn size(&self) -> usize {
        self.ell as usize + 2
    }

    pub fn get(&self, k: usize, m: usize) -> &C {
        &self.coeffs[k][m]
    }

    pub fn set(&mut self, k: usize, m: usize, v: C) {
        self.coeffs[k][m] = v;
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.size();
        (0..n).all(|k| (k..n).all(|m| self.coeffs[k][m] == self.coeffs[m][k]))
    }

    /// The degree and monicity invariants from the column decomposition
    /// φ = x^{ℓ+1} + Σ_k p_k(y) x^k.
    pub fn shape_ok(&self) -> bool {
        let top = self.ell as usize + 1;
        self.coeffs[top][0].is_one()
            && (1..=top).all(|m| self.coeffs[top][m].is_zero())
            && self.coeffs[0][top].is_one()
            && (1..=self.ell as usize).all(|k| self.coeffs[k][top].is_zero())
    }

    pub fn map<D, F: Fn(&C) -> D>(&self, f: F) -> BivariatePoly<D> {
        BivariatePoly {
            ell: self.ell,
            coeffs: self.coeffs.iter().map(|row| row.iter().map(&f).collect()).collect(),
        }
    }
}

impl<C: Zero + One + Clone + PartialEq + Display> BivariatePoly<C> {
    /// Canonical interchange format: one line per nonzero monomial,
    /// "k m c" with (k, m) descending.
    pub fn to_kmc_lines(&self) -> String {
        let mut out = String::new();
        let n = self.size();
        for k in (0..n).rev() {
            for m in (0..n).rev() {
                let c = &self.coeffs[k][m];
                if !c.is_zero() {
                    out.push_str(&format!("{k} {m} {c}\n"));
                }
            }
        }
        out
    }
}

impl BivariatePoly<BigInt> {
    /// Reduce every entry into [0, p).
    pub fn reduce_mod(&self, p: u64) -> BivariatePoly<u64> {
        let bp = BigInt::from(p);
        self.map(|c| {
            let mut r = c % &bp;
            if r.is_negative() {
                r += &bp;
            }
            u64::try_from(r).expect("residue fits u64")
        })
    }
}

impl BivariatePoly<u64> {
    pub fn to_bigint(&self) -> BivariatePoly<BigInt> {
        self.map(|&c| BigInt::from(c))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shape_and_symmetry_checks() {
        let mut g: BivariatePoly<u64> = BivariatePoly::new_zero(3);
        g.set(4, 0, 1);
        g.set(0, 4, 1);
        g.set(3, 3, 7);
        assert!(g.shape_ok());
        assert!(g.is_symmetric());
        g.set(1, 2, 5);
        assert!(!g.is_symmetric());
        g.set(2, 1, 5);
        assert!(g.is_symmetric());
    }

    #[test]
    fn kmc_lines_are_sorted_descending() {
        let mut g: BivariatePoly<u64> = BivariatePoly::new_zero(3);
        g.set(4, 0, 1);
        g.set(0, 4, 1);
        g.set(2, 1, 9);
        let text = g.to_kmc_lines();
        assert_eq!(text, "4 0 1\n2 1 9\n0 4 1\n");
    }

    #[test]
    fn reduce_mod_handles_negatives() {
        let mut g: BivariatePoly<BigInt> = BivariatePoly::new_zero(3);
        g.set(4, 0, BigInt::from(1));
        g.set(1, 1, BigInt::from(-1));
        let r = g.reduce_mod(13);
        assert_eq!(*r.get(1, 1), 12);
    }
}
