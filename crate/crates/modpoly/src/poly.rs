//! Dense univariate polynomials over a tower field. Degrees here are tiny
//! (class polynomials, local columns, Lagrange bases), so everything is
//! schoolbook.

use crate::error::{Error, Result};
use crate::fields::{FieldDescriptor, FieldElement};
use num_bigint::BigUint;
use std::sync::Arc;

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct FPoly {
    field: Arc<FieldDescriptor>,
    coeffs: Vec<FieldElement>,
}

impl FPoly {
    pub fn new(field: &Arc<FieldDescriptor>, coeffs: Vec<FieldElement>) -> Self {
        let mut p = FPoly { field: field.clone(), coeffs };
        p.trim();
        p
    }

    pub fn zero(field: &Arc<FieldDescriptor>) -> Self {
        FPoly { field: field.clone(), coeffs: vec![] }
    }

    pub fn constant(value: FieldElement) -> Self {
        let field = value.field().clone();
        Self::new(&field, vec![value])
    }

    /// x − r
    pub fn linear_root(r: &FieldElement) -> Self {
        let field = r.field().clone();
        FPoly { field: field.clone(), coeffs: vec![-r, field.one()] }
    }

    pub fn from_roots(field: &Arc<FieldDescriptor>, roots: &[FieldElement]) -> Self {
        let mut acc = FPoly::new(field, vec![field.one()]);
        for r in roots {
            acc = acc.mul(&Self::linear_root(r));
        }
        acc
    }

    fn trim(&mut self) {
        while self.coeffs.last().map_or(false, |c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn deg(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, i: usize) -> FieldElement {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn lead(&self) -> Option<&FieldElement> {
        self.coeffs.last()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(&self.coeff(i) + &rhs.coeff(i));
        }
        Self::new(&self.field, out)
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero(&self.field);
        }
        let mut out = vec![self.field.zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        Self::new(&self.field, out)
    }

    pub fn scale(&self, k: &FieldElement) -> Self {
        Self::new(&self.field, self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn divrem(&self, den: &Self) -> Result<(Self, Self)> {
        let dd = den.deg().ok_or(Error::DivisionByZero)?;
        let lead_inv = den.lead().unwrap().try_inv()?;
        let mut rem = self.clone();
        let mut quo = vec![self.field.zero(); self.coeffs.len().saturating_sub(dd)];
        while let Some(dr) = rem.deg() {
            if dr < dd {
                break;
            }
            let factor = rem.lead().unwrap() * &lead_inv;
            let shift = dr - dd;
            for i in 0..=dd {
                rem.coeffs[shift + i] = &rem.coeffs[shift + i] - &(&factor * &den.coeffs[i]);
            }
            rem.trim();
            quo[shift] = factor;
        }
        Ok((Self::new(&self.field, quo), rem))
    }

    pub fn rem(&self, den: &Self) -> Result<Self> {
        Ok(self.divrem(den)?.1)
    }

    /// Monic gcd.
    pub fn gcd(&self, rhs: &Self) -> Result<Self> {
        let mut a = self.clone();
        let mut b = rhs.clone();
        while !b.is_zero() {
            let r = a.rem(&b)?;
            a = b;
            b = r;
        }
        if let Some(lead) = a.lead() {
            let li = lead.try_inv()?;
            a = a.scale(&li);
        }
        Ok(a)
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::zero(&self.field);
        }
        let out = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.mul_small(i as u64))
            .collect();
        Self::new(&self.field, out)
    }

    pub fn eval(&self, x: &FieldElement) -> FieldElement {
        let mut acc = self.field.zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    /// self^e modulo `modulus`, by square and multiply.
    pub fn powmod(&self, e: &BigUint, modulus: &Self) -> Result<Self> {
        let bits = e.bits();
        if bits == 0 {
            return Ok(Self::new(&self.field, vec![self.field.one()]));
        }
        let base = self.rem(modulus)?;
        let mut acc = base.clone();
        for i in (0..bits - 1).rev() {
            acc = acc.mul(&acc).rem(modulus)?;
            if e.bit(i) {
                acc = acc.mul(&base).rem(modulus)?;
            }
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::FieldDescriptor;

    #[test]
    fn divrem_reconstructs() {
        let f = FieldDescriptor::prime(13).unwrap();
        let a = FPoly::new(&f, vec![f.from_u64(3), f.from_u64(1), f.from_u64(7), f.one()]);
        let b = FPoly::new(&f, vec![f.from_u64(5), f.one()]);
        let (q, r) = a.divrem(&b).unwrap();
        assert_eq!(q.mul(&b).add(&r), a);
        assert!(r.deg() < b.deg());
    }

    #[test]
    fn from_roots_evaluates_to_zero_at_roots() {
        let f = FieldDescriptor::quadratic(13).unwrap();
        let roots = vec![
            f.element_from_coeffs(vec![5, 0]).unwrap(),
            f.element_from_coeffs(vec![2, 7]).unwrap(),
            f.element_from_coeffs(vec![2, 7]).unwrap(), // repeated
        ];
        let p = FPoly::from_roots(&f, &roots);
        assert_eq!(p.deg(), Some(3));
        assert!(p.lead().unwrap().is_one());
        for r in &roots {
            assert!(p.eval(r).is_zero());
        }
        // multiplicity 2: derivative also vanishes at the repeated root
        assert!(p.derivative().eval(&roots[1]).is_zero());
        assert!(!p.derivative().eval(&roots[0]).is_zero());
    }

    #[test]
    fn gcd_of_shared_factor() {
        let f = FieldDescriptor::prime(41).unwrap();
        let shared = FPoly::new(&f, vec![f.from_u64(3), f.one()]);
        let a = shared.mul(&FPoly::new(&f, vec![f.from_u64(1), f.one()]));
        let b = shared.mul(&FPoly::new(&f, vec![f.from_u64(2), f.one()]));
        assert_eq!(a.gcd(&b).unwrap(), shared);
    }
}
