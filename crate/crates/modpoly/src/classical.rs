//! q-expansion machinery: the Fourier series of j, growth measurements for
//! the coefficients of j^k, and the classical linear-system construction of
//! φ_ℓ over the integers for small ℓ.
//!
//! Everything here is exact (BigInt / BigRational) and entirely independent
//! of the finite-field pipeline, so it can serve as its oracle.

use crate::bivariate::BivariatePoly;
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// A truncated Laurent series Σ coeffs[i]·q^{v+i}. Coefficients below the
/// leading exponent v are exactly zero; coefficients past the truncation
/// are unknown, and arithmetic tracks how many terms stay valid.
#[derive(Debug, Clone, PartialEq)]
pub struct QExpansion {
    v: i64,
    coeffs: Vec<BigInt>,
}

impl QExpansion {
    pub fn new(v: i64, coeffs: Vec<BigInt>) -> Self {
        QExpansion { v, coeffs }
    }

    pub fn leading_exponent(&self) -> i64 {
        self.v
    }

    pub fn terms(&self) -> usize {
        self.coeffs.len()
    }

    /// Coefficient of q^e; None when e is past the truncation horizon.
    pub fn coeff_at(&self, e: i64) -> Option<BigInt> {
        if e < self.v {
            return Some(BigInt::zero());
        }
        let idx = (e - self.v) as usize;
        self.coeffs.get(idx).cloned()
    }

    pub fn truncate(&mut self, terms: usize) {
        self.coeffs.truncate(terms);
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let v = self.v.min(rhs.v);
        let valid =
            (self.v + self.coeffs.len() as i64).min(rhs.v + rhs.coeffs.len() as i64) - v;
        let mut coeffs = vec![BigInt::zero(); valid.max(0) as usize];
        for (i, c) in coeffs.iter_mut().enumerate() {
            let e = v + i as i64;
            *c = self.coeff_at(e).unwrap() + rhs.coeff_at(e).unwrap();
        }
        QExpansion { v, coeffs }
    }

    pub fn neg(&self) -> Self {
        QExpansion { v: self.v, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let terms = self.coeffs.len().min(rhs.coeffs.len());
        let mut coeffs = vec![BigInt::zero(); terms];
        for (i, a) in self.coeffs.iter().enumerate().take(terms) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate().take(terms - i) {
                coeffs[i + j] += a * b;
            }
        }
        QExpansion { v: self.v + rhs.v, coeffs }
    }

    pub fn pow(&self, k: u32) -> Self {
        assert!(k >= 1);
        let mut acc = self.clone();
        for _ in 1..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Inverse of a series whose leading coefficient is ±1.
    pub fn invert_unit(&self) -> Self {
        let a0 = &self.coeffs[0];
        assert!(a0.is_one() || (-a0).is_one(), "leading coefficient must be a unit");
        let n = self.coeffs.len();
        let mut b = vec![BigInt::zero(); n];
        b[0] = a0.clone(); // 1/±1 = ±1
        for k in 1..n {
            let mut s = BigInt::zero();
            for i in 1..=k {
                s += &self.coeffs[i] * &b[k - i];
            }
            b[k] = -(s * a0);
        }
        QExpansion { v: -self.v, coeffs: b }
    }

    /// Substitute q ↦ q^s.
    pub fn substitute_power(&self, s: u32) -> Self {
        let s = s as usize;
        let n = self.coeffs.len();
        let mut coeffs = vec![BigInt::zero(); s * (n - 1) + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[s * i] = c.clone();
        }
        QExpansion { v: self.v * s as i64, coeffs }
    }
}

fn sigma_table(r: u32, n: usize) -> Vec<BigInt> {
    let mut sig = vec![BigInt::zero(); n + 1];
    for d in 1..=n as u64 {
        let dr = BigInt::from(d).pow(r);
        let mut m = d as usize;
        while m <= n {
            sig[m] += &dr;
            m += d as usize;
        }
    }
    sig
}

/// E₄ = 1 + 240 Σ σ₃(n) qⁿ, with `terms` coefficients.
pub fn e4_qexp(terms: usize) -> QExpansion {
    let sig = sigma_table(3, terms - 1);
    let mut coeffs = vec![BigInt::one()];
    for n in 1..terms {
        coeffs.push(240 * &sig[n]);
    }
    QExpansion::new(0, coeffs)
}

/// E₆ = 1 − 504 Σ σ₅(n) qⁿ.
pub fn e6_qexp(terms: usize) -> QExpansion {
    let sig = sigma_table(5, terms - 1);
    let mut coeffs = vec![BigInt::one()];
    for n in 1..terms {
        coeffs.push(-504 * &sig[n]);
    }
    QExpansion::new(0, coeffs)
}

/// Δ = q·∏(1 − qⁿ)²⁴ by the eta product.
pub fn delta_qexp(terms: usize) -> QExpansion {
    // Euler product ∏(1 - q^n): each factor is sparse
    let mut euler = vec![BigInt::zero(); terms];
    euler[0] = BigInt::one();
    for n in 1..terms {
        for k in (n..terms).rev() {
            let t = euler[k - n].clone();
            euler[k] -= t;
        }
    }
    let base = QExpansion::new(0, euler);
    let mut acc = base.clone();
    for _ in 1..24 {
        acc = acc.mul(&base);
    }
    QExpansion { v: 1, coeffs: acc.coeffs }
}

/// The j-function as E₄³/Δ: v = −1, integer coefficients, all positive.
pub fn j_qexp(terms: usize) -> QExpansion {
    assert!(terms >= 2);
    e4_qexp(terms).pow(3).mul(&delta_qexp(terms).invert_unit())
}

/// j^k with leading exponent −k.
pub fn jpow_coeffs(k: u32, terms: usize) -> QExpansion {
    j_qexp(terms).pow(k)
}

/// Natural log of a positive BigInt, via the top 64 bits.
pub fn ln_bigint(x: &BigInt) -> f64 {
    assert!(x.is_positive());
    let bits = x.bits();
    if bits <= 53 {
        return x.to_f64().unwrap().ln();
    }
    let top: BigInt = x >> (bits - 53);
    top.to_f64().unwrap().ln() + (bits - 53) as f64 * std::f64::consts::LN_2
}

#[derive(Debug, Clone)]
pub struct GrowthRow {
    pub n: usize,
    pub k: u32,
    /// ln of the coefficient of qⁿ in j^k.
    pub log_coeff: f64,
    /// Mahler-style bound 4π√((n+k)k).
    pub upper: f64,
    /// log_coeff / √(nk), the lower-bound trend statistic.
    pub ratio: f64,
}

#[derive(Debug, Clone)]
pub struct GrowthReport {
    pub rows: Vec<GrowthRow>,
    /// (n, c(n)·√2·n^{3/4} / e^{4π√n}) for the k = 1 asymptotic.
    pub petersson: Vec<(usize, f64)>,
    /// Cells skipped because the coefficient was not positive (expected empty).
    pub excluded: Vec<(usize, u32)>,
}

/// Growth table for the coefficients of j^k, 1 ≤ k ≤ kmax, 1 ≤ n ≤ nmax.
/// The upper bound ln c ≤ 4π√((n+k)k) is enforced as a hard assertion.
pub fn growth_report(nmax: usize, kmax: u32) -> Result<GrowthReport> {
    let terms = nmax + kmax as usize + 2;
    let j = j_qexp(terms);
    let mut rows = Vec::new();
    let mut excluded = Vec::new();
    let mut petersson = Vec::new();
    let four_pi = 4.0 * std::f64::consts::PI;

    let mut jk = j.clone();
    for k in 1..=kmax {
        if k > 1 {
            jk = jk.mul(&j);
        }
        for n in 1..=nmax {
            let c = jk.coeff_at(n as i64).expect("within truncation");
            if !c.is_positive() {
                excluded.push((n, k));
                continue;
            }
            let log_coeff = ln_bigint(&c);
            let upper = four_pi * (((n + k as usize) * k as usize) as f64).sqrt();
            if log_coeff > upper {
                return Err(Error::InvalidParameter(format!(
                    "growth bound violated at n={n} k={k}: {log_coeff} > {upper}"
                )));
            }
            let ratio = log_coeff / ((n as f64 * k as f64).sqrt());
            rows.push(GrowthRow { n, k, log_coeff, upper, ratio });
            if k == 1 {
                let ln_ratio = log_coeff + 0.5 * 2f64.ln() + 0.75 * (n as f64).ln()
                    - four_pi * (n as f64).sqrt();
                petersson.push((n, ln_ratio.exp()));
            }
        }
    }
    Ok(GrowthReport { rows, petersson, excluded })
}

/// Primes supported by the linear-system oracle. ℓ = 2 is included (the
/// q-expansion route has no odd-order restriction); 7 is the practical top
/// end for exact rational elimination at desk scale.
pub const CLASSICAL_SUPPORTED: [u64; 4] = [2, 3, 5, 7];

/// φ_ℓ(x, y) over the integers, from the defining identity
/// φ(j(q), j(q^ℓ)) = 0 with symmetry imposed and the linear system solved by
/// exact rational elimination.
pub fn classical_phi(ell: u64) -> Result<BivariatePoly<BigInt>> {
    if !CLASSICAL_SUPPORTED.contains(&ell) {
        return Err(Error::InvalidParameter(format!(
            "classical oracle supports l in {CLASSICAL_SUPPORTED:?}, got {ell}"
        )));
    }
    let l = ell as usize;
    let mut n_eqs = (l + 1) * (l + 1) + 2 * l + 8;
    for _ in 0..4 {
        match classical_phi_attempt(l, n_eqs) {
            Ok(grid) => return Ok(grid),
            Err(Error::InsufficientTruncation) => n_eqs *= 2,
            Err(e) => return Err(e),
        }
    }
    Err(Error::InsufficientTruncation)
}

fn classical_phi_attempt(l: usize, n_eqs: usize) -> Result<BivariatePoly<BigInt>> {
    let terms = n_eqs + 4;
    let j = j_qexp(terms);

    // A_k = j(q)^k, B_m = j(q^l)^m, with A_0 = B_0 = 1
    let mut one_coeffs = vec![BigInt::zero(); terms];
    one_coeffs[0] = BigInt::one();
    let one = QExpansion::new(0, one_coeffs);
    let mut a_pows: Vec<QExpansion> = vec![one.clone()];
    for k in 1..=l + 1 {
        a_pows.push(a_pows[k - 1].mul(&j));
    }
    let jl = j.substitute_power(l as u32);
    let mut b_pows: Vec<QExpansion> = vec![one];
    for m in 1..=l + 1 {
        b_pows.push(b_pows[m - 1].mul(&jl));
    }

    // symmetric unknowns u_{km}, k <= m <= l
    let mut pairs = Vec::new();
    for k in 0..=l {
        for m in k..=l {
            pairs.push((k, m));
        }
    }
    let cols: Vec<QExpansion> = pairs
        .iter()
        .map(|&(k, m)| {
            if k == m {
                a_pows[k].mul(&b_pows[m])
            } else {
                a_pows[k].mul(&b_pows[m]).add(&a_pows[m].mul(&b_pows[k]))
            }
        })
        .collect();
    let known = a_pows[l + 1].mul(&b_pows[0]).add(&a_pows[0].mul(&b_pows[l + 1]));

    // equations: coefficient of q^t vanishes for the first n_eqs exponents
    let w0 = -((l * (l + 1)) as i64);
    let nu = pairs.len();
    let mut rows: Vec<Vec<BigRational>> = Vec::with_capacity(n_eqs);
    for t in 0..n_eqs {
        let e = w0 + t as i64;
        let mut row: Vec<BigRational> = Vec::with_capacity(nu + 1);
        for col in &cols {
            row.push(BigRational::from_integer(
                col.coeff_at(e).ok_or(Error::InsufficientTruncation)?,
            ));
        }
        row.push(BigRational::from_integer(
            -known.coeff_at(e).ok_or(Error::InsufficientTruncation)?,
        ));
        rows.push(row);
    }

    let solution = solve_exact(&mut rows, nu)?;

    let mut grid: BivariatePoly<BigInt> = BivariatePoly::new_zero(l as u64);
    for (&(k, m), u) in pairs.iter().zip(&solution) {
        if !u.is_integer() {
            return Err(Error::InsufficientTruncation);
        }
        let v = u.to_integer();
        grid.set(k, m, v.clone());
        grid.set(m, k, v);
    }
    grid.set(l + 1, 0, BigInt::one());
    grid.set(0, l + 1, BigInt::one());
    Ok(grid)
}

/// Gaussian elimination over the rationals; requires a unique solution and
/// consistency of every surplus equation.
fn solve_exact(rows: &mut [Vec<BigRational>], nu: usize) -> Result<Vec<BigRational>> {
    let m = rows.len();
    let mut pivot_row_of_col = vec![usize::MAX; nu];
    let mut rank = 0usize;
    for col in 0..nu {
        let Some(p) = (rank..m).find(|&r| !rows[r][col].is_zero()) else {
            return Err(Error::InsufficientTruncation); // rank deficient
        };
        rows.swap(rank, p);
        let inv = rows[rank][col].recip();
        for v in rows[rank][col..].iter_mut() {
            *v *= &inv;
        }
        for r in 0..m {
            if r != rank && !rows[r][col].is_zero() {
                let f = rows[r][col].clone();
                for c in col..=nu {
                    let t = &rows[rank][c] * &f;
                    rows[r][c] -= t;
                }
            }
        }
        pivot_row_of_col[col] = rank;
        rank += 1;
    }
    // surplus rows must be identically zero
    for r in rank..m {
        if !rows[r][nu].is_zero() {
            return Err(Error::InsufficientTruncation);
        }
    }
    Ok((0..nu).map(|c| rows[pivot_row_of_col[c]][nu].clone()).collect())
}
