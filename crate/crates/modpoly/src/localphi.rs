//! Algorithm 1 end-to-end: φ_ℓ(x, j) mod p as a root list plus expanded
//! monic coefficients, and the random ℓ-torsion-point / random ℓ-isogeny
//! conveniences it yields.

use crate::curves::{
    curve_from_j, curve_order_brute_force, point_count_ext, supersingular_trace, Curve,
    CurvePoint, TraceData,
};
use crate::error::{Error, Result};
use crate::fields::{make_extension, FieldDescriptor, FieldElement, Level};
use crate::poly::FPoly;
use crate::torsion::{torsion_basis, torsion_basis_in_extension, torsion_extension_degrees,
    TorsionStats};
use crate::velu::{quotient_j_set, velu_isogeny};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::Rng;
use std::collections::HashMap;
use std::sync::Arc;

/// φ_ℓ(x, j) mod p: the input j, the ℓ+1 roots (a multiset), and the monic
/// coefficient vector of ∏(x − jᵢ), everything in canonical F_{p²} form.
#[derive(Debug, Clone)]
pub struct LocalPoly {
    pub j: FieldElement,
    pub roots: Vec<FieldElement>,
    pub coeffs: Vec<FieldElement>,
}

impl LocalPoly {
    pub fn ell(&self) -> u64 {
        self.roots.len() as u64 - 1
    }

    /// Coefficient of x^k.
    pub fn coeff(&self, k: usize) -> &FieldElement {
        &self.coeffs[k]
    }
}

/// Shared context for repeated local computations at fixed (p, ℓ): the
/// canonical F_{p²} and a cache of tower extensions keyed by degree, so one
/// irreducible-modulus search serves every node of a graph walk.
pub struct LocalEngine {
    fp2: Arc<FieldDescriptor>,
    ell: u64,
    extensions: HashMap<usize, Arc<FieldDescriptor>>,
}

impl LocalEngine {
    pub fn new(p: u64, ell: u64) -> Result<Self> {
        if p <= 3 {
            return Err(Error::InvalidParameter("p must exceed 3".into()));
        }
        if ell < 3 || !crate::arith::is_prime(ell) {
            return Err(Error::InvalidParameter("l must be an odd prime".into()));
        }
        if ell == p {
            return Err(Error::InvalidParameter("l must differ from p".into()));
        }
        Ok(LocalEngine { fp2: FieldDescriptor::quadratic(p)?, ell, extensions: HashMap::new() })
    }

    pub fn fp2(&self) -> &Arc<FieldDescriptor> {
        &self.fp2
    }

    pub fn ell(&self) -> u64 {
        self.ell
    }

    fn extension<R: Rng>(&mut self, m: usize, rng: &mut R) -> Result<Arc<FieldDescriptor>> {
        if let Some(ext) = self.extensions.get(&m) {
            return Ok(ext.clone());
        }
        let ext = make_extension(&self.fp2, m, rng)?;
        self.extensions.insert(m, ext.clone());
        Ok(ext)
    }

    /// Algorithm 1 with n chosen from the trace class.
    pub fn local_modular_poly<R: Rng>(
        &mut self,
        j: &FieldElement,
        rng: &mut R,
    ) -> Result<LocalPoly> {
        self.local_poly_inner(j, None, rng)
    }

    /// Algorithm 1 with an explicit extension degree over F_{p²} (any
    /// multiple of the trace-determined degree works; 6(ℓ−1) always does).
    pub fn local_modular_poly_with_degree<R: Rng>(
        &mut self,
        j: &FieldElement,
        n_override: u32,
        rng: &mut R,
    ) -> Result<LocalPoly> {
        self.local_poly_inner(j, Some(n_override), rng)
    }

    fn local_poly_inner<R: Rng>(
        &mut self,
        j: &FieldElement,
        n_override: Option<u32>,
        rng: &mut R,
    ) -> Result<LocalPoly> {
        if j.field().as_ref() != self.fp2.as_ref() {
            return Err(Error::FieldMismatch);
        }
        let curve = curve_from_j(j)?;
        let trace = supersingular_trace(&curve, rng)?;
        let n = match n_override {
            Some(n) => n,
            None => torsion_extension_degrees(&trace, self.ell)[0],
        };
        let ext = self.extension(n as usize, rng)?;
        let curve_ext = curve.base_change(&ext)?;
        let order = point_count_ext(trace.q, trace.a, n);
        let mut stats = TorsionStats::default();
        let basis =
            torsion_basis_in_extension(&curve_ext, self.ell, &order, n, rng, &mut stats)?;
        let roots = quotient_j_set(&curve_ext, &basis, self.ell)?;
        let coeffs = FPoly::from_roots(&self.fp2, &roots).coeffs().to_vec();
        debug_assert_eq!(coeffs.len() as u64, self.ell + 2);
        Ok(LocalPoly { j: j.clone(), roots, coeffs })
    }
}

/// One-shot convenience around [`LocalEngine`].
pub fn local_modular_poly<R: Rng>(
    j: &FieldElement,
    ell: u64,
    rng: &mut R,
) -> Result<LocalPoly> {
    let p = j.field().characteristic();
    LocalEngine::new(p, ell)?.local_modular_poly(j, rng)
}

fn trace_for_curve<R: Rng>(
    curve: &Curve,
    group_order: Option<&BigInt>,
    rng: &mut R,
) -> Result<TraceData> {
    let field = curve.field();
    let q = match field.level() {
        Level::Prime => field.characteristic(),
        Level::Quadratic => field.characteristic() * field.characteristic(),
        Level::Extension => {
            return Err(Error::InvalidParameter(
                "definition field must be F_p or F_{p^2}".into(),
            ))
        }
    };
    if let Some(n) = group_order {
        let a = (BigInt::from(q) + 1i32 - n)
            .to_i64()
            .ok_or_else(|| Error::InvalidParameter("group order out of range".into()))?;
        return TraceData::new(q, a);
    }
    if field.level() == Level::Quadratic {
        if let Ok(t) = supersingular_trace(curve, rng) {
            return Ok(t);
        }
    }
    // ordinary fallback at desk scale: count the group directly
    if q <= 1 << 20 {
        let n = curve_order_brute_force(curve);
        return TraceData::new(q, q as i64 + 1 - n as i64);
    }
    Err(Error::InvalidParameter(
        "ordinary curve over a large field needs a caller-supplied group order".into(),
    ))
}

/// A uniformly random point of exact order ℓ on E(F̄_q): a random nonzero
/// F_ℓ-combination of a torsion basis.
pub fn random_l_torsion_point<R: Rng>(
    curve: &Curve,
    ell: u64,
    group_order: Option<&BigInt>,
    rng: &mut R,
) -> Result<CurvePoint> {
    let trace = trace_for_curve(curve, group_order, rng)?;
    let basis = torsion_basis(curve, ell, &trace, rng)?;
    let curve_ext = curve.base_change(basis.field())?;
    let (alpha, beta) = loop {
        let a = rng.gen_range(0..ell);
        let b = rng.gen_range(0..ell);
        if (a, b) != (0, 0) {
            break (a, b);
        }
    };
    let pa = curve_ext.scalar_mul_u64(alpha, &basis.point_p)?;
    let pb = curve_ext.scalar_mul_u64(beta, &basis.point_q)?;
    curve_ext.point_add(&pa, &pb)
}

/// A random ℓ-isogenous curve: quotient by a random order-ℓ point. The
/// returned j-invariant is descended to F_{p²} whenever it lies there.
pub fn random_l_isogeny<R: Rng>(
    curve: &Curve,
    ell: u64,
    group_order: Option<&BigInt>,
    rng: &mut R,
) -> Result<(Curve, FieldElement)> {
    let kernel_gen = random_l_torsion_point(curve, ell, group_order, rng)?;
    let field = match &kernel_gen {
        CurvePoint::Affine { x, .. } => x.field().clone(),
        CurvePoint::Infinity => unreachable!("order-l points are affine"),
    };
    let curve_ext = curve.base_change(&field)?;
    let (image, j) = velu_isogeny(&curve_ext, &kernel_gen, ell)?;
    let j = if field.level() == Level::Extension {
        j.try_descend().unwrap_or(j)
    } else {
        j
    };
    Ok((image, j))
}
