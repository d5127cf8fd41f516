//! Fixed-point arbitrary-precision real and complex arithmetic: a value is
//! a BigInt mantissa m meaning m / 2^prec. Just enough for evaluating the
//! j-function q-series at CM points: π, sqrt, exp, cos/sin, and complex
//! mul/div. Rounding is truncation; callers carry guard bits and verify
//! results through the integrality of the final class polynomial.

use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, ToPrimitive, Zero};

pub(super) fn fx_one(prec: u32) -> BigInt {
    BigInt::from(1) << prec
}

pub(super) fn fx_from_int(v: i64, prec: u32) -> BigInt {
    BigInt::from(v) << prec
}

pub(super) fn fx_mul(a: &BigInt, b: &BigInt, prec: u32) -> BigInt {
    (a * b) >> prec
}

pub(super) fn fx_div(a: &BigInt, b: &BigInt, prec: u32) -> BigInt {
    (a << prec) / b
}

/// √a for a ≥ 0.
pub(super) fn fx_sqrt(a: &BigInt, prec: u32) -> BigInt {
    assert!(!a.is_negative());
    let shifted: BigUint = (a << prec).magnitude().clone();
    BigInt::from(shifted.sqrt())
}

/// π by Machin's formula 16·atan(1/5) − 4·atan(1/239).
pub(super) fn fx_pi(prec: u32) -> BigInt {
    let guard = 32;
    let w = prec + guard;
    let atan_inv = |x: u64| -> BigInt {
        let x2 = BigInt::from(x * x);
        let mut term = fx_one(w) / x;
        let mut acc = BigInt::zero();
        let mut k = 0u64;
        while !term.is_zero() {
            let contrib = &term / (2 * k + 1);
            if k % 2 == 0 {
                acc += contrib;
            } else {
                acc -= contrib;
            }
            term /= &x2;
            k += 1;
        }
        acc
    };
    let pi = 16 * atan_inv(5) - 4 * atan_inv(239);
    pi >> guard
}

/// e^x for x ≥ 0: halve until the argument is below 1/2, Taylor, square back.
pub(super) fn fx_exp(x: &BigInt, prec: u32) -> BigInt {
    assert!(!x.is_negative());
    let guard = 64;
    let w = prec + guard;
    let xw: BigInt = x << guard;
    let int_bits = (&xw >> w).bits();
    let halvings = int_bits as u32 + 1;
    let small = &xw >> halvings;

    let mut term = fx_one(w);
    let mut acc = term.clone();
    let mut k = 1u64;
    while !term.is_zero() {
        term = fx_mul(&term, &small, w) / k;
        acc += &term;
        k += 1;
    }
    for _ in 0..halvings {
        acc = fx_mul(&acc, &acc, w);
    }
    acc >> guard
}

/// (cos θ, sin θ) for |θ| ≤ π: halve to below 1/2, Taylor, double back with
/// cos 2t = 2cos²t − 1 and sin 2t = 2·sin t·cos t.
pub(super) fn fx_cos_sin(theta: &BigInt, prec: u32) -> (BigInt, BigInt) {
    let guard = 64;
    let w = prec + guard;
    let neg = theta.is_negative();
    let tw: BigInt = theta.abs() << guard;
    let int_bits = (&tw >> w).bits();
    let halvings = int_bits as u32 + 2;
    let small = &tw >> halvings;

    // cos: Σ (−1)^k t^{2k}/(2k)!, sin: Σ (−1)^k t^{2k+1}/(2k+1)!
    let t2 = fx_mul(&small, &small, w);
    let mut cos = fx_one(w);
    let mut term = fx_one(w);
    let mut k = 1u64;
    loop {
        term = fx_mul(&term, &t2, w) / ((2 * k - 1) * (2 * k));
        if term.is_zero() {
            break;
        }
        if k % 2 == 1 {
            cos -= &term;
        } else {
            cos += &term;
        }
        k += 1;
    }
    let mut sin = small.clone();
    let mut term = small;
    let mut k = 1u64;
    loop {
        term = fx_mul(&term, &t2, w) / ((2 * k) * (2 * k + 1));
        if term.is_zero() {
            break;
        }
        if k % 2 == 1 {
            sin -= &term;
        } else {
            sin += &term;
        }
        k += 1;
    }
    for _ in 0..halvings {
        let c2 = fx_mul(&cos, &cos, w);
        let new_cos = (&c2 << 1) - fx_one(w);
        let new_sin = fx_mul(&sin, &cos, w) << 1;
        cos = new_cos;
        sin = new_sin;
    }
    if neg {
        sin = -sin;
    }
    (cos >> guard, sin >> guard)
}

/// Fixed-point complex number.
#[derive(Debug, Clone, PartialEq)]
pub(super) struct Cpx {
    pub re: BigInt,
    pub im: BigInt,
}

impl Cpx {
    pub fn zero() -> Self {
        Cpx { re: BigInt::zero(), im: BigInt::zero() }
    }

    pub fn real(re: BigInt) -> Self {
        Cpx { re, im: BigInt::zero() }
    }

    pub fn one(prec: u32) -> Self {
        Cpx::real(fx_one(prec))
    }

    pub fn add(&self, rhs: &Self) -> Self {
        Cpx { re: &self.re + &rhs.re, im: &self.im + &rhs.im }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        Cpx { re: &self.re - &rhs.re, im: &self.im - &rhs.im }
    }

    pub fn mul(&self, rhs: &Self, prec: u32) -> Self {
        Cpx {
            re: fx_mul(&self.re, &rhs.re, prec) - fx_mul(&self.im, &rhs.im, prec),
            im: fx_mul(&self.re, &rhs.im, prec) + fx_mul(&self.im, &rhs.re, prec),
        }
    }

    pub fn scale_int(&self, k: &BigInt) -> Self {
        Cpx { re: &self.re * k, im: &self.im * k }
    }

    pub fn div(&self, rhs: &Self, prec: u32) -> Self {
        let norm = fx_mul(&rhs.re, &rhs.re, prec) + fx_mul(&rhs.im, &rhs.im, prec);
        let conj = Cpx { re: rhs.re.clone(), im: -&rhs.im };
        let num = self.mul(&conj, prec);
        Cpx { re: fx_div(&num.re, &norm, prec), im: fx_div(&num.im, &norm, prec) }
    }
}

/// Approximate f64 value of mantissa/2^prec, usable far outside f64's
/// exponent range of the raw mantissa.
pub(super) fn fx_to_f64(x: &BigInt, prec: u32) -> f64 {
    let bits = x.bits();
    if bits <= 52 {
        return x.to_f64().unwrap() / 2f64.powi(prec as i32);
    }
    let sh = bits - 52;
    let top = (x >> sh).to_f64().unwrap();
    top * 2f64.powi(sh as i32 - prec as i32)
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u32 = 128;

    fn close(x: &BigInt, v: f64, tol: f64) {
        let got = fx_to_f64(x, P);
        assert!((got - v).abs() < tol, "got {got}, want {v}");
    }

    #[test]
    fn constants_and_functions() {
        close(&fx_pi(P), std::f64::consts::PI, 1e-12);
        close(&fx_sqrt(&fx_from_int(2, P), P), std::f64::consts::SQRT_2, 1e-12);
        close(&fx_exp(&fx_from_int(1, P), P), std::f64::consts::E, 1e-12);
        close(&fx_exp(&fx_from_int(20, P), P), 20f64.exp(), 1e-5);
        let (c, s) = fx_cos_sin(&fx_pi(P), P);
        close(&c, -1.0, 1e-12);
        close(&s, 0.0, 1e-12);
        let third = fx_pi(P) / 3;
        let (c, s) = fx_cos_sin(&third, P);
        close(&c, 0.5, 1e-12);
        close(&s, 0.75f64.sqrt(), 1e-12);
        let (c, s) = fx_cos_sin(&-third, P);
        close(&c, 0.5, 1e-12);
        close(&s, -0.75f64.sqrt(), 1e-12);
    }

    #[test]
    fn complex_division_roundtrip() {
        let a = Cpx { re: fx_from_int(3, P), im: fx_from_int(-2, P) };
        let b = Cpx { re: fx_from_int(7, P), im: fx_from_int(5, P) };
        let q = a.mul(&b, P).div(&b, P);
        close(&q.re, 3.0, 1e-12);
        close(&q.im, -2.0, 1e-12);
    }
}
