//! Polynomial arithmetic over the base level of an extension, operating on
//! raw coefficient "chunks". A chunk is one base-field value: `[a, 0]` over
//! F_p, or `[a0, a1]` over F_{p²} (meaning a0 + a1·U with U² = c).
//!
//! This layer exists so that extension-field inversion and the
//! irreducibility gcd run without per-coefficient allocations.

use crate::arith::{invm, mulm, negm, subm};

pub(crate) type Chunk = [u64; 2];

/// Arithmetic context for the base level of an extension.
#[derive(Clone, Copy)]
pub(crate) struct BaseCtx {
    pub p: u64,
    /// U² = c when `wide`, unused otherwise.
    pub c: u64,
    /// True when the base is the quadratic level.
    pub wide: bool,
}

impl BaseCtx {
    pub fn zero(&self) -> Chunk {
        [0, 0]
    }

    pub fn is_zero(&self, a: &Chunk) -> bool {
        a[0] == 0 && a[1] == 0
    }

    pub fn sub(&self, a: &Chunk, b: &Chunk) -> Chunk {
        [subm(a[0], b[0], self.p), subm(a[1], b[1], self.p)]
    }

    pub fn mul(&self, a: &Chunk, b: &Chunk) -> Chunk {
        if !self.wide {
            return [mulm(a[0], b[0], self.p), 0];
        }
        let p = self.p as u128;
        let r0 = (a[0] as u128 * b[0] as u128
            + self.c as u128 * ((a[1] as u128 * b[1] as u128) % p))
            % p;
        let r1 = (a[0] as u128 * b[1] as u128 + a[1] as u128 * b[0] as u128) % p;
        [r0 as u64, r1 as u64]
    }

    /// Inverse of a nonzero base value. For the quadratic level this is
    /// conjugate over norm; the norm a0² − c·a1² is nonzero because c is a
    /// non-residue.
    pub fn inv(&self, a: &Chunk) -> Option<Chunk> {
        if self.is_zero(a) {
            return None;
        }
        if !self.wide {
            return invm(a[0], self.p).map(|v| [v, 0]);
        }
        let norm = subm(
            mulm(a[0], a[0], self.p),
            mulm(self.c, mulm(a[1], a[1], self.p), self.p),
            self.p,
        );
        let ninv = invm(norm, self.p)?;
        Some([mulm(a[0], ninv, self.p), mulm(negm(a[1], self.p), ninv, self.p)])
    }
}

pub(super) fn poly_deg(a: &[Chunk], ctx: &BaseCtx) -> Option<usize> {
    a.iter().rposition(|ch| !ctx.is_zero(ch))
}

fn trim(a: &mut Vec<Chunk>, ctx: &BaseCtx) {
    while let Some(last) = a.last() {
        if ctx.is_zero(last) && a.len() > 0 {
            a.pop();
        } else {
            break;
        }
    }
}

/// Remainder of `a` modulo `b` (b nonzero). Quadratic in the degrees.
fn poly_rem(a: &[Chunk], b: &[Chunk], ctx: &BaseCtx) -> Vec<Chunk> {
    let db = poly_deg(b, ctx).expect("division by zero polynomial");
    let lead_inv = ctx.inv(&b[db]).expect("base level must be a field");
    let mut r: Vec<Chunk> = a.to_vec();
    trim(&mut r, ctx);
    while let Some(dr) = poly_deg(&r, ctx) {
        if dr < db {
            break;
        }
        let factor = ctx.mul(&r[dr], &lead_inv);
        let shift = dr - db;
        for i in 0..=db {
            let t = ctx.mul(&factor, &b[i]);
            r[shift + i] = ctx.sub(&r[shift + i], &t);
        }
        trim(&mut r, ctx);
    }
    r
}

/// Monic gcd of two chunk polynomials.
pub(super) fn poly_gcd(a: &[Chunk], b: &[Chunk], ctx: &BaseCtx) -> Vec<Chunk> {
    let mut r0: Vec<Chunk> = a.to_vec();
    let mut r1: Vec<Chunk> = b.to_vec();
    trim(&mut r0, ctx);
    trim(&mut r1, ctx);
    while poly_deg(&r1, ctx).is_some() {
        let r = poly_rem(&r0, &r1, ctx);
        r0 = r1;
        r1 = r;
    }
    if let Some(d) = poly_deg(&r0, ctx) {
        let li = ctx.inv(&r0[d]).unwrap();
        for ch in r0.iter_mut() {
            *ch = ctx.mul(ch, &li);
        }
    }
    r0
}

/// Inverse of `a` modulo `modulus` via extended Euclid, tracking only the
/// Bezout coefficient of `a`. Returns None when gcd(a, modulus) is not a
/// unit (possible in the quotient rings used by the irreducibility test).
pub(super) fn poly_inverse_mod(
    a: &[Chunk],
    modulus: &[Chunk],
    ctx: &BaseCtx,
) -> Option<Vec<Chunk>> {
    let mut r0: Vec<Chunk> = modulus.to_vec();
    let mut r1: Vec<Chunk> = a.to_vec();
    trim(&mut r0, ctx);
    trim(&mut r1, ctx);
    let mut s0: Vec<Chunk> = vec![];
    let mut s1: Vec<Chunk> = vec![[1, 0]];
    while let Some(d1) = poly_deg(&r1, ctx) {
        let d0 = poly_deg(&r0, ctx).expect("gcd chain hit zero unexpectedly");
        if d0 < d1 {
            std::mem::swap(&mut r0, &mut r1);
            std::mem::swap(&mut s0, &mut s1);
            continue;
        }
        // one elimination step: r0 -= q*r1 with q = lead monomial ratio
        let lead_inv = ctx.inv(&r1[d1]).unwrap();
        let factor = ctx.mul(&r0[d0], &lead_inv);
        let shift = d0 - d1;
        for i in 0..=d1 {
            let t = ctx.mul(&factor, &r1[i]);
            r0[shift + i] = ctx.sub(&r0[shift + i], &t);
        }
        if s0.len() < s1.len() + shift {
            s0.resize(s1.len() + shift, ctx.zero());
        }
        for i in 0..s1.len() {
            let t = ctx.mul(&factor, &s1[i]);
            s0[shift + i] = ctx.sub(&s0[shift + i], &t);
        }
        trim(&mut r0, ctx);
        if poly_deg(&r0, ctx).map_or(true, |d| d < d1) {
            std::mem::swap(&mut r0, &mut r1);
            std::mem::swap(&mut s0, &mut s1);
        }
    }
    // r0 is the gcd, s0 its Bezout coefficient: s0*a = r0 (mod modulus)
    let d = poly_deg(&r0, ctx)?;
    if d != 0 {
        return None;
    }
    let scale = ctx.inv(&r0[0])?;
    let mut out = s0;
    for ch in out.iter_mut() {
        *ch = ctx.mul(ch, &scale);
    }
    // reduce mod modulus in case the Bezout coefficient overshot
    let dm = poly_deg(modulus, ctx).unwrap();
    if poly_deg(&out, ctx).map_or(false, |d| d >= dm) {
        out = poly_rem(&out, modulus, ctx);
    }
    Some(out)
}
