//! Algorithm 2 Steps 1–3: a discriminant D < 0 with (D/p) = −1, the Hilbert
//! class polynomial H_D over the integers by the complex-analytic method,
//! and a supersingular starting j₀ ∈ F_{p²} as one of its roots mod p.
//!
//! Primes with p ≡ 3 mod 4 (j₀ = 1728) or p ≡ 2 mod 3 (j₀ = 0) skip the CM
//! machinery entirely; only p ≡ 1 mod 12 pays for it, and there D = −4d for
//! the smallest non-residue d keeps |D| tiny.

mod fixed;

use crate::arith::is_prime;
use crate::error::{Error, Result};
use crate::fields::{quadratic_character, FieldDescriptor, FieldElement};
use crate::poly::FPoly;
use fixed::{fx_cos_sin, fx_div, fx_exp, fx_from_int, fx_mul, fx_one, fx_pi, fx_sqrt, fx_to_f64, Cpx};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use std::sync::Arc;

/// A negative discriminant with (D/p) = −1, written D = −4d when the search
/// went through even discriminants (it always does here; the D = −3 case is
/// covered by the j₀ = 0 shortcut instead).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Discriminant {
    /// D itself, negative, ≡ 0 or 1 mod 4.
    pub value: i64,
    /// d with D = −4d.
    pub quarter: Option<u64>,
}

/// H_D(x) over the integers, monic of degree h(D).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassPolynomial {
    pub discriminant: i64,
    /// Constant term first; leading coefficient 1.
    pub coeffs: Vec<BigInt>,
}

impl ClassPolynomial {
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }
}

/// Step 1: D = −4 for p ≡ 3 mod 4, else D = −4d for the smallest d with
/// (d/p) = −1.
pub fn find_discriminant(p: u64) -> Discriminant {
    assert!(p > 3 && is_prime(p), "p must be a prime > 3");
    if p % 4 == 3 {
        return Discriminant { value: -4, quarter: Some(1) };
    }
    let d = (2..p)
        .find(|&d| quadratic_character(d as i64, p) == -1)
        .expect("a non-residue exists");
    Discriminant { value: -4 * d as i64, quarter: Some(d) }
}

/// All reduced primitive binary quadratic forms (a, b, c) of discriminant D:
/// b² − 4ac = D, |b| ≤ a ≤ c, gcd(a, b, c) = 1, and b ≥ 0 whenever |b| = a
/// or a = c.
pub fn reduced_forms(d: i64) -> Vec<(i64, i64, i64)> {
    assert!(d < 0 && (d.rem_euclid(4) == 0 || d.rem_euclid(4) == 1));
    let d_abs = -d;
    let mut forms = Vec::new();
    let mut b = d.rem_euclid(2);
    while 3 * b * b <= d_abs {
        let m4 = (b * b + d_abs) / 4;
        let mut a = b.max(1);
        while a * a <= m4 {
            if m4 % a == 0 {
                let c = m4 / a;
                if gcd3(a, b, c) == 1 {
                    forms.push((a, b, c));
                    if b > 0 && b < a && a < c {
                        forms.push((a, -b, c));
                    }
                }
            }
            a += 1;
        }
        b += 2;
    }
    forms
}

fn gcd3(a: i64, b: i64, c: i64) -> i64 {
    a.gcd(&b).gcd(&c)
}

/// j(τ) at τ = (−b + √D)/(2a), as a fixed-point complex value: the series
/// E₄³/Δ in q = e^{2πiτ}, truncated once the tail is below 2^{−prec/2}.
fn j_tau(a: i64, b: i64, d_abs: i64, prec: u32) -> Cpx {
    let pi = fx_pi(prec);
    let sqrt_d = fx_sqrt(&fx_from_int(d_abs, prec), prec);
    // |q| = e^{−π√d/a}
    let t = fx_mul(&pi, &sqrt_d, prec) / a;
    let rho = fx_div(&fx_one(prec), &fx_exp(&t, prec), prec);
    // arg q = −πb/a
    let theta = -(fx_mul(&pi, &fx_from_int(b, prec), prec) / a);
    let (cos, sin) = fx_cos_sin(&theta, prec);
    let q = Cpx { re: fx_mul(&rho, &cos, prec), im: fx_mul(&rho, &sin, prec) };

    // truncation length: |q|^N ≤ 2^{−prec/2 − 64}
    let log2_q = std::f64::consts::PI * (d_abs as f64).sqrt() / (a as f64) / 2f64.ln();
    let n_terms = ((prec as f64 / 2.0 + 64.0) / log2_q).ceil() as usize + 16;

    let sigma3: Vec<BigInt> = {
        let mut s = vec![BigInt::zero(); n_terms + 1];
        for dd in 1..=n_terms as u64 {
            let d3 = BigInt::from(dd * dd * dd);
            let mut m = dd as usize;
            while m <= n_terms {
                s[m] += &d3;
                m += dd as usize;
            }
        }
        s
    };

    let one = Cpx::one(prec);
    let mut e4 = one.clone();
    let mut eta = one.clone(); // ∏(1 − qⁿ)
    let mut qn = one.clone();
    for n in 1..=n_terms {
        qn = qn.mul(&q, prec);
        e4 = e4.add(&qn.scale_int(&(240 * &sigma3[n])));
        eta = eta.mul(&one.sub(&qn), prec);
    }
    // Δ = q·η²⁴
    let mut eta24 = eta.clone();
    for _ in 0..3 {
        eta24 = eta24.mul(&eta24, prec); // η^8
    }
    let eta8 = eta24.clone();
    eta24 = eta24.mul(&eta8, prec).mul(&eta8, prec); // η^24
    let delta = q.mul(&eta24, prec);
    let e4_cubed = e4.mul(&e4, prec).mul(&e4, prec);
    e4_cubed.div(&delta, prec)
}

/// Step 2: H_D by CM evaluation of all reduced forms at self-correcting
/// precision. Returns the polynomial and the largest rounding residual.
pub fn hilbert_class_poly_detailed(d: i64) -> Result<(ClassPolynomial, f64)> {
    if d >= 0 || (d.rem_euclid(4) != 0 && d.rem_euclid(4) != 1) {
        return Err(Error::InvalidParameter(format!("{d} is not a negative discriminant")));
    }
    if -d > 1_000_000 {
        return Err(Error::InvalidParameter("|D| beyond the desk-scale bound 10^6".into()));
    }
    let forms = reduced_forms(d);
    let h = forms.len();
    let d_abs = -d;
    let mut prec = (3.5 * std::f64::consts::PI * (d_abs as f64).sqrt() * h as f64 / 2f64.ln())
        .ceil() as u32
        + 64;

    for _ in 0..=4 {
        let work = prec + 128;
        // ∏ (x − j(τ_i)) with complex coefficients
        let mut coeffs = vec![Cpx::zero(); h + 1];
        coeffs[0] = Cpx::one(work);
        for (idx, &(a, b, _)) in forms.iter().enumerate() {
            let j = j_tau(a, b, d_abs, work);
            // multiply by (x − j): degree idx → idx+1
            for k in (0..=idx + 1).rev() {
                let from_shift = if k > 0 { coeffs[k - 1].clone() } else { Cpx::zero() };
                let scaled = coeffs[k].mul(&j, work);
                coeffs[k] = from_shift.sub(&scaled);
            }
        }
        // the loop above already leaves coeffs[k] = coefficient of x^k

        let half = BigInt::one() << (work - 1);
        let mut rounded = Vec::with_capacity(h + 1);
        let mut worst: f64 = 0.0;
        for c in &coeffs {
            let nearest: BigInt = (&c.re + &half) >> work;
            let frac = &c.re - (&nearest << work);
            let res_re = fx_to_f64(&frac.abs(), work);
            let res_im = fx_to_f64(&c.im.abs(), work);
            worst = worst.max(res_re).max(res_im);
            rounded.push(nearest);
        }
        if worst <= 0.25 {
            debug_assert!(rounded.last().unwrap().is_one());
            return Ok((ClassPolynomial { discriminant: d, coeffs: rounded }, worst));
        }
        prec *= 2;
    }
    Err(Error::InsufficientPrecision { residual_log2: 0 })
}

/// Step 2 without the diagnostics.
pub fn hilbert_class_poly(d: i64) -> Result<ClassPolynomial> {
    Ok(hilbert_class_poly_detailed(d)?.0)
}

/// S(p) = ⌊p/12⌋ + ε_p with ε_p = 0, 1, 1, 2 for p ≡ 1, 5, 7, 11 mod 12.
pub fn supersingular_count(p: u64) -> u64 {
    assert!(p > 3);
    let eps = match p % 12 {
        1 => 0,
        5 | 7 => 1,
        11 => 2,
        _ => unreachable!("p > 3 is prime"),
    };
    p / 12 + eps
}

/// Step 3: a supersingular j₀ ∈ F_{p²}. The residue-class shortcuts return
/// 1728 or 0 directly; otherwise H_D is reduced mod p and split by
/// gcds with random (x + r)^{(p²−1)/2} − 1.
pub fn supersingular_j<R: Rng>(p: u64, rng: &mut R) -> Result<FieldElement> {
    if p <= 3 || !is_prime(p) {
        return Err(Error::InvalidParameter(format!("{p} is not a prime > 3")));
    }
    let fp2 = FieldDescriptor::quadratic(p)?;
    if p % 4 == 3 {
        return Ok(fp2.from_u64(1728 % p));
    }
    if p % 3 == 2 {
        return Ok(fp2.zero());
    }
    let disc = find_discriminant(p);
    let hd = hilbert_class_poly(disc.value)?;
    root_in_fp2(&fp2, &hd, rng)
}

fn root_in_fp2<R: Rng>(
    fp2: &Arc<FieldDescriptor>,
    hd: &ClassPolynomial,
    rng: &mut R,
) -> Result<FieldElement> {
    let p = fp2.characteristic();
    let pb = BigInt::from(p);
    let coeffs: Vec<FieldElement> = hd
        .coeffs
        .iter()
        .map(|c| {
            let r = c.mod_floor(&pb);
            fp2.from_u64(u64::try_from(r).expect("residue fits"))
        })
        .collect();
    let mut h = FPoly::new(fp2, coeffs);
    // all roots lie in F_{p²}; make the polynomial squarefree, then split
    let radical_div = h.gcd(&h.derivative())?;
    if radical_div.deg().map_or(false, |d| d > 0) {
        h = h.divrem(&radical_div)?.0;
    }
    let half = (BigUint::from(p) * p - 1u32) >> 1;
    loop {
        let deg = h.deg().expect("class polynomial is nonzero");
        if deg == 0 {
            return Err(Error::InvalidParameter(
                "class polynomial has no roots mod p (is (D/p) = -1?)".into(),
            ));
        }
        if deg == 1 {
            let root = -&(&h.coeff(0) * &h.coeff(1).try_inv()?);
            return Ok(root);
        }
        let shift = fp2.random_element(rng);
        let probe = FPoly::new(fp2, vec![shift, fp2.one()]);
        let powed = probe.powmod(&half, &h)?;
        let minus_one = FPoly::constant(-&fp2.one());
        let g = h.gcd(&powed.add(&minus_one))?;
        if let Some(dg) = g.deg() {
            if dg > 0 && dg < deg {
                let other = h.divrem(&g)?.0;
                h = if dg <= other.deg().unwrap() { g } else { other };
            }
        }
    }
}
