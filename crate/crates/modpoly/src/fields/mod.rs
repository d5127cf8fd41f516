//! Finite field towers F_p ⊂ F_{p²} ⊂ F_{p²}[T]/(f(T)).
//!
//! All elements carry an `Arc` to their immutable [`FieldDescriptor`], so
//! fields are freely shareable across threads and an element is just a
//! flattened little-endian coefficient vector over F_p.
//!
//! The quadratic level always uses the modulus U² − c for the smallest
//! positive non-residue c mod p, so F_{p²} representations (and hence
//! serialized j-invariants) are identical across runs and machines.

mod chunks;
mod element;
mod sqrt;

pub use element::FieldElement;
pub use sqrt::quadratic_character;

use crate::arith::{is_prime, powm};
use crate::error::{Error, Result};
use chunks::{BaseCtx, Chunk};
use num_bigint::BigUint;
use rand::Rng;
use std::sync::Arc;

/// Position of a field in the tower.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Level {
    Prime,
    Quadratic,
    Extension,
}

#[derive(Debug)]
enum TowerShape {
    Prime,
    /// F_{p²} = F_p[U]/(U² − c).
    Quadratic { nonresidue: u64 },
    /// base[T]/(f) with f monic of degree `ext_degree`; `modulus` stores the
    /// base coefficients of f as chunks, length ext_degree + 1, leading 1.
    Extension {
        base: Arc<FieldDescriptor>,
        ext_degree: usize,
        modulus: Vec<Chunk>,
    },
}

/// An immutable description of one field in the tower.
#[derive(Debug)]
pub struct FieldDescriptor {
    p: u64,
    degree: usize,
    shape: TowerShape,
}

impl PartialEq for FieldDescriptor {
    fn eq(&self, other: &Self) -> bool {
        if std::ptr::eq(self, other) {
            return true;
        }
        if self.p != other.p || self.degree != other.degree {
            return false;
        }
        match (&self.shape, &other.shape) {
            (TowerShape::Prime, TowerShape::Prime) => true,
            (
                TowerShape::Quadratic { nonresidue: a },
                TowerShape::Quadratic { nonresidue: b },
            ) => a == b,
            (
                TowerShape::Extension { base: b1, modulus: m1, .. },
                TowerShape::Extension { base: b2, modulus: m2, .. },
            ) => m1 == m2 && b1 == b2,
            _ => false,
        }
    }
}

impl Eq for FieldDescriptor {}

impl FieldDescriptor {
    /// The prime field F_p, p an odd prime.
    pub fn prime(p: u64) -> Result<Arc<Self>> {
        if p < 3 || !is_prime(p) {
            return Err(Error::InvalidParameter(format!("{p} is not an odd prime")));
        }
        Ok(Arc::new(FieldDescriptor { p, degree: 1, shape: TowerShape::Prime }))
    }

    /// The quadratic extension F_{p²} with the deterministic modulus U² − c.
    pub fn quadratic(p: u64) -> Result<Arc<Self>> {
        if p < 3 || !is_prime(p) {
            return Err(Error::InvalidParameter(format!("{p} is not an odd prime")));
        }
        let c = (2..p)
            .find(|&c| powm(c, (p - 1) / 2, p) == p - 1)
            .expect("every odd prime field has a non-residue");
        Ok(Arc::new(FieldDescriptor {
            p,
            degree: 2,
            shape: TowerShape::Quadratic { nonresidue: c },
        }))
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    /// Total degree over F_p.
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn level(&self) -> Level {
        match self.shape {
            TowerShape::Prime => Level::Prime,
            TowerShape::Quadratic { .. } => Level::Quadratic,
            TowerShape::Extension { .. } => Level::Extension,
        }
    }

    /// The field one level down, when there is one.
    pub fn base(&self) -> Option<&Arc<FieldDescriptor>> {
        match &self.shape {
            TowerShape::Extension { base, .. } => Some(base),
            _ => None,
        }
    }

    /// c with U² = c at the quadratic level.
    pub fn nonresidue(&self) -> Option<u64> {
        match self.shape {
            TowerShape::Quadratic { nonresidue } => Some(nonresidue),
            _ => None,
        }
    }

    /// Number of base-level coefficients of an element (1 for prime and
    /// quadratic levels, the extension degree otherwise).
    pub fn ext_degree(&self) -> usize {
        match &self.shape {
            TowerShape::Prime => 1,
            TowerShape::Quadratic { .. } => 2,
            TowerShape::Extension { ext_degree, .. } => *ext_degree,
        }
    }

    pub fn field_size(&self) -> BigUint {
        BigUint::from(self.p).pow(self.degree as u32)
    }

    pub(crate) fn base_ctx(&self) -> BaseCtx {
        match &self.shape {
            TowerShape::Prime | TowerShape::Quadratic { .. } => {
                BaseCtx { p: self.p, c: 0, wide: false }
            }
            TowerShape::Extension { base, .. } => match base.shape {
                TowerShape::Prime => BaseCtx { p: self.p, c: 0, wide: false },
                TowerShape::Quadratic { nonresidue } => {
                    BaseCtx { p: self.p, c: nonresidue, wide: true }
                }
                TowerShape::Extension { .. } => unreachable!("towers stop at one extension"),
            },
        }
    }

    pub(crate) fn modulus_chunks(&self) -> Option<&[Chunk]> {
        match &self.shape {
            TowerShape::Extension { modulus, .. } => Some(modulus),
            _ => None,
        }
    }

    /// Enumerate every element, for desk-scale fields only.
    pub fn elements(self: &Arc<Self>) -> impl Iterator<Item = FieldElement> {
        let desc = self.clone();
        let size = u64::try_from(&desc.field_size()).expect("field too large to enumerate");
        (0..size).map(move |mut idx| {
            let mut coeffs = vec![0u64; desc.degree()];
            for c in coeffs.iter_mut() {
                *c = idx % desc.p;
                idx /= desc.p;
            }
            desc.element_from_coeffs(coeffs).unwrap()
        })
    }

    /// The modulus polynomial of an extension, as elements of its base field
    /// (constant coefficient first, leading 1 included).
    pub fn modulus_as_base_elements(self: &Arc<Self>) -> Option<Vec<FieldElement>> {
        match &self.shape {
            TowerShape::Extension { base, modulus, .. } => Some(
                modulus
                    .iter()
                    .map(|ch| {
                        let width = base.degree;
                        base.element_from_coeffs(ch[..width].to_vec()).unwrap()
                    })
                    .collect(),
            ),
            _ => None,
        }
    }

    fn extension_from_chunks(
        base: &Arc<FieldDescriptor>,
        modulus: Vec<Chunk>,
    ) -> Arc<FieldDescriptor> {
        let m = modulus.len() - 1;
        Arc::new(FieldDescriptor {
            p: base.p,
            degree: base.degree * m,
            shape: TowerShape::Extension { base: base.clone(), ext_degree: m, modulus },
        })
    }

    /// Quotient ring base[T]/(f) without an irreducibility check. Used by the
    /// irreducibility test itself and by tests that need reducible moduli.
    #[doc(hidden)]
    pub fn extension_unchecked(
        base: &Arc<FieldDescriptor>,
        modulus_coeffs: &[FieldElement],
    ) -> Result<Arc<FieldDescriptor>> {
        if modulus_coeffs.len() < 3 {
            return Err(Error::InvalidParameter("modulus degree must be >= 2".into()));
        }
        if !modulus_coeffs.last().unwrap().is_one() {
            return Err(Error::InvalidParameter("modulus must be monic".into()));
        }
        let mut chunks = Vec::with_capacity(modulus_coeffs.len());
        for c in modulus_coeffs {
            if c.field().as_ref() != base.as_ref() {
                return Err(Error::FieldMismatch);
            }
            let mut ch = [0u64; 2];
            ch[..c.coeffs().len()].copy_from_slice(c.coeffs());
            chunks.push(ch);
        }
        Ok(Self::extension_from_chunks(base, chunks))
    }
}

/// Degree-m extension of the prime or quadratic level, with the modulus
/// found by drawing random monic polynomials until one passes the
/// irreducibility test. m = 1 hands back the base unchanged.
pub fn make_extension<R: Rng>(
    base: &Arc<FieldDescriptor>,
    m: usize,
    rng: &mut R,
) -> Result<Arc<FieldDescriptor>> {
    if m == 0 {
        return Err(Error::InvalidParameter("extension degree must be >= 1".into()));
    }
    if matches!(base.shape, TowerShape::Extension { .. }) {
        return Err(Error::InvalidParameter(
            "extensions are built over the prime or quadratic level only".into(),
        ));
    }
    if m == 1 {
        return Ok(base.clone());
    }
    let ctx = base.base_ctx_as_extension_base();
    let width = base.degree;
    for _ in 0..64 * m {
        let mut modulus: Vec<Chunk> = Vec::with_capacity(m + 1);
        for _ in 0..m {
            let mut ch = [0u64; 2];
            for part in ch.iter_mut().take(width) {
                *part = rng.gen_range(0..base.p);
            }
            modulus.push(ch);
        }
        modulus.push([1, 0]);
        if is_irreducible(base, &modulus, &ctx) {
            return Ok(FieldDescriptor::extension_from_chunks(base, modulus));
        }
    }
    Err(Error::IrreducibleSearchFailed { degree: m })
}

impl FieldDescriptor {
    fn base_ctx_as_extension_base(&self) -> BaseCtx {
        match self.shape {
            TowerShape::Prime => BaseCtx { p: self.p, c: 0, wide: false },
            TowerShape::Quadratic { nonresidue } => {
                BaseCtx { p: self.p, c: nonresidue, wide: true }
            }
            TowerShape::Extension { .. } => unreachable!(),
        }
    }
}

/// Rabin's criterion with Ben-Or style early aborts: walking the Frobenius
/// chain g_i = T^{q^i} mod f, any gcd(g_i − T, f) ≠ 1 for i ≤ m/2 exposes a
/// factor of degree i, and acceptance requires T^{q^m} ≡ T mod f. The gcd
/// conditions at the maximal proper divisors m/r all fall in the swept range
/// i ≤ m/2.
fn is_irreducible(base: &Arc<FieldDescriptor>, modulus: &[Chunk], ctx: &BaseCtx) -> bool {
    let m = modulus.len() - 1;
    debug_assert!(m >= 2);
    let ring = FieldDescriptor::extension_from_chunks(base, modulus.to_vec());
    let q = base.field_size();
    let t = ring.generator();
    let mut g = t.pow_biguint(&q);
    for i in 1..m {
        if i <= m / 2 {
            let diff = g.checked_sub(&t).unwrap();
            if !coprime_with_modulus(&diff, modulus, ctx) {
                return false;
            }
        }
        g = g.pow_biguint(&q);
    }
    g == t
}

fn coprime_with_modulus(elem: &FieldElement, modulus: &[Chunk], ctx: &BaseCtx) -> bool {
    if elem.is_zero() {
        return false;
    }
    let poly = elem.as_chunks();
    let g = chunks::poly_gcd(&poly, modulus, ctx);
    chunks::poly_deg(&g, ctx) == Some(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    fn rng(seed: u64) -> ChaCha12Rng {
        ChaCha12Rng::seed_from_u64(seed)
    }

    #[test]
    fn quadratic_modulus_is_deterministic_nonresidue() {
        for p in [3u64, 7, 13, 41, 97] {
            let f = FieldDescriptor::quadratic(p).unwrap();
            let c = f.nonresidue().unwrap();
            // c really is the smallest non-residue
            for d in 2..c {
                assert_eq!(powm(d, (p - 1) / 2, p), 1, "p={p} d={d}");
            }
            assert_eq!(powm(c, (p - 1) / 2, p), p - 1);
            let again = FieldDescriptor::quadratic(p).unwrap();
            assert_eq!(f.as_ref(), again.as_ref());
        }
    }

    #[test]
    fn degenerate_extension_returns_base() {
        let fp2 = FieldDescriptor::quadratic(13).unwrap();
        let same = make_extension(&fp2, 1, &mut rng(0)).unwrap();
        assert_eq!(fp2.as_ref(), same.as_ref());
    }

    #[test]
    fn extension_over_f3_has_no_base_roots() {
        // exhaustive root check over F_3
        let f3 = FieldDescriptor::prime(3).unwrap();
        let ext = make_extension(&f3, 2, &mut rng(1)).unwrap();
        assert_eq!(ext.degree(), 2);
        let modulus = ext.modulus_as_base_elements().unwrap();
        for a in 0..3u64 {
            let x = f3.from_u64(a);
            let mut acc = f3.zero();
            for c in modulus.iter().rev() {
                acc = &(&acc * &x) + c;
            }
            assert!(!acc.is_zero(), "root {a} found in base");
        }
    }

    #[test]
    fn extension_degree_bookkeeping() {
        // degree 6(l-1) over F_{p^2} for l = 5 -> 48 over F_p
        let fp2 = FieldDescriptor::quadratic(13).unwrap();
        let ext = make_extension(&fp2, 24, &mut rng(2)).unwrap();
        assert_eq!(ext.degree(), 48);
        assert_eq!(ext.ext_degree(), 24);
        assert_eq!(ext.level(), Level::Extension);
    }

    #[test]
    fn modulus_has_no_roots_in_small_bases() {
        // exhaustive for base sizes below 10^4
        for (p, m) in [(13u64, 3usize), (41, 4), (97, 5)] {
            let fp2 = FieldDescriptor::quadratic(p).unwrap();
            let ext = make_extension(&fp2, m, &mut rng(p)).unwrap();
            let modulus = ext.modulus_as_base_elements().unwrap();
            for a0 in 0..p {
                for a1 in 0..p {
                    let x = fp2.element_from_coeffs(vec![a0, a1]).unwrap();
                    let mut acc = fp2.zero();
                    for c in modulus.iter().rev() {
                        acc = &(&acc * &x) + c;
                    }
                    assert!(!acc.is_zero(), "p={p} m={m} root=({a0},{a1})");
                }
            }
        }
    }

    #[test]
    fn reducible_modulus_rejected() {
        // (T - 1)(T - 2) over F_13 must fail the irreducibility test
        let f13 = FieldDescriptor::prime(13).unwrap();
        let coeffs = vec![f13.from_u64(2), f13.from_u64(10), f13.one()];
        let chunks: Vec<Chunk> = vec![[2, 0], [10, 0], [1, 0]];
        let ctx = f13.base_ctx_as_extension_base();
        assert!(!is_irreducible(&f13, &chunks, &ctx));
        // while T^2 + 1 over F_13... 5^2 = 25 = -1 + 2*13, so -1 IS a square: reducible
        let chunks2: Vec<Chunk> = vec![[1, 0], [0, 0], [1, 0]];
        assert!(!is_irreducible(&f13, &chunks2, &ctx));
        // T^2 - 2 is irreducible over F_13 (2 is a non-residue mod 13)
        let chunks3: Vec<Chunk> = vec![[11, 0], [0, 0], [1, 0]];
        assert!(is_irreducible(&f13, &chunks3, &ctx));
        drop(coeffs);
    }
}
