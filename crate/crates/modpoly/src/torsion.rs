//! Generators of E[ℓ] over the right extension: scalar multiples of random
//! points by the cofactor s = S/ℓᵏ, rescaled to exact order ℓ, with a
//! baby-step giant-step independence check.

use crate::arith::split_valuation;
use crate::curves::{point_count_ext, Curve, CurvePoint, SupersingularTrace, TraceData};
use crate::error::{Error, Result};
use crate::fields::{make_extension, FieldDescriptor, Level};
use num_bigint::{BigInt, BigUint};
use num_traits::Signed;
use rand::Rng;
use std::collections::HashMap;
use std::sync::Arc;

/// Outer retry budget for one basis extraction; each draw succeeds with
/// probability bounded away from zero, so exhausting this signals wrong
/// trace or extension inputs rather than bad luck.
const OUTER_RETRIES: u32 = 20;

/// A pair of independent order-ℓ points, plus the bookkeeping of the group
/// order that produced them.
#[derive(Debug, Clone)]
pub struct TorsionBasis {
    pub point_p: CurvePoint,
    pub point_q: CurvePoint,
    /// Extension degree over the curve's definition field.
    pub n: u32,
    /// S = #E(F_{q^n}).
    pub group_order: BigUint,
    /// k = v_ℓ(S), always ≥ 2 when E[ℓ] is rational.
    pub valuation: u32,
    /// s = S / ℓᵏ.
    pub cofactor: BigUint,
}

impl TorsionBasis {
    /// Field the basis points live in.
    pub fn field(&self) -> &Arc<FieldDescriptor> {
        match &self.point_p {
            CurvePoint::Affine { x, .. } => x.field(),
            CurvePoint::Infinity => unreachable!("basis points are never infinity"),
        }
    }
}

/// Counters for the probabilistic steps, for calibration against the
/// stated success bounds.
#[derive(Debug, Clone, Copy, Default)]
pub struct TorsionStats {
    /// (U, V) pair draws.
    pub pair_draws: u64,
    /// Draws with both s·U and s·V nonzero.
    pub pair_nonzero: u64,
    /// Draws where s·U ≠ O, so the second point got judged at all.
    pub q_side_draws: u64,
    /// Among those: s·V = O, or the rescaled Q landed inside ⟨P⟩.
    pub q_side_failures: u64,
}

/// Candidate extension degrees n with E[ℓ] ⊆ E(F_{q^n}), over the curve's
/// definition field F_q. Supersingular traces give a single sharp value;
/// anything else falls back to the generic trial sequence.
pub fn torsion_extension_degrees(trace: &TraceData, ell: u64) -> Vec<u32> {
    let l = ell as u32;
    let p = if crate::arith::is_prime(trace.q) {
        trace.q
    } else {
        let r = (trace.q as f64).sqrt().round() as u64;
        debug_assert_eq!(r * r, trace.q);
        r
    };
    match trace.supersingular_case(p) {
        Some(SupersingularTrace::TwoP) => vec![l - 1],
        Some(SupersingularTrace::Zero) => vec![2 * (l - 1)],
        Some(SupersingularTrace::P) => vec![3 * (l - 1)],
        Some(SupersingularTrace::ZeroOverPrime) => vec![2 * (l - 1)],
        None => vec![l * l - 1, l * (l - 1)],
    }
}

/// Does Q lie in ⟨P⟩, for P of prime order ℓ? Baby steps i·P for
/// i < ⌈√ℓ⌉ in a hash table keyed by the point coordinates, then giant
/// steps Q − j·(⌈√ℓ⌉·P).
pub fn bsgs_member(curve: &Curve, p: &CurvePoint, q: &CurvePoint, ell: u64) -> Result<bool> {
    if p.is_infinity() {
        return Err(Error::InvalidParameter("bsgs needs a point of exact order l".into()));
    }
    if !curve.contains(p) || !curve.contains(q) {
        return Err(Error::PointNotOnCurve);
    }
    debug_assert!(curve.scalar_mul_u64(ell, p)?.is_infinity());
    if q.is_infinity() {
        return Ok(true); // m = 0
    }
    let r = (ell as f64).sqrt().ceil() as u64;
    let mut baby: HashMap<CurvePoint, u64> = HashMap::new();
    let mut acc = CurvePoint::Infinity;
    for i in 0..r {
        baby.insert(acc.clone(), i);
        acc = curve.point_add(&acc, p)?;
    }
    let giant_stride = curve.negate_point(&curve.scalar_mul_u64(r, p)?);
    let mut probe = q.clone();
    for _ in 0..=(ell - 1) / r {
        if baby.contains_key(&probe) {
            return Ok(true);
        }
        probe = curve.point_add(&probe, &giant_stride)?;
    }
    Ok(false)
}

/// ℓ^i·P′ for the largest i with a nonzero result: the exact-order-ℓ point
/// at the end of the chain.
fn rescale_to_order_ell(curve: &Curve, pt: &CurvePoint, ell: u64) -> CurvePoint {
    debug_assert!(!pt.is_infinity());
    let mut cur = pt.clone();
    loop {
        let next = curve.scalar_mul_u64(ell, &cur).expect("chain stays on curve");
        if next.is_infinity() {
            return cur;
        }
        cur = next;
    }
}

/// The inner draw loop, over a curve already base-changed to the extension
/// where E[ℓ] is rational.
pub fn torsion_basis_in_extension<R: Rng>(
    curve_ext: &Curve,
    ell: u64,
    group_order: &BigInt,
    n: u32,
    rng: &mut R,
    stats: &mut TorsionStats,
) -> Result<TorsionBasis> {
    if group_order.is_negative() {
        return Err(Error::InvalidParameter("negative group order".into()));
    }
    let s_big = group_order.magnitude().clone();
    let (valuation, cofactor) = split_valuation(&s_big, ell);
    if valuation < 2 {
        return Err(Error::LValuationTooSmall { valuation });
    }

    for _ in 0..OUTER_RETRIES {
        let u = curve_ext.random_point(rng);
        let v = curve_ext.random_point(rng);
        stats.pair_draws += 1;
        let p_prime = curve_ext.scalar_mul(&cofactor, &u)?;
        let q_prime = curve_ext.scalar_mul(&cofactor, &v)?;
        if !p_prime.is_infinity() {
            stats.q_side_draws += 1;
        }
        if p_prime.is_infinity() || q_prime.is_infinity() {
            if !p_prime.is_infinity() {
                stats.q_side_failures += 1;
            }
            continue;
        }
        stats.pair_nonzero += 1;
        let point_p = rescale_to_order_ell(curve_ext, &p_prime, ell);
        let point_q = rescale_to_order_ell(curve_ext, &q_prime, ell);
        if bsgs_member(curve_ext, &point_p, &point_q, ell)? {
            stats.q_side_failures += 1;
            continue;
        }
        return Ok(TorsionBasis {
            point_p,
            point_q,
            n,
            group_order: s_big,
            valuation,
            cofactor,
        });
    }
    Err(Error::RetryBudgetExhausted)
}

/// Full Step 1: choose n from the trace, build the extension, count points,
/// and extract a basis of E[ℓ].
pub fn torsion_basis<R: Rng>(
    curve: &Curve,
    ell: u64,
    trace: &TraceData,
    rng: &mut R,
) -> Result<TorsionBasis> {
    let (basis, _) = torsion_basis_with_stats(curve, ell, trace, rng)?;
    Ok(basis)
}

pub fn torsion_basis_with_stats<R: Rng>(
    curve: &Curve,
    ell: u64,
    trace: &TraceData,
    rng: &mut R,
) -> Result<(TorsionBasis, TorsionStats)> {
    let field = curve.field();
    let p = field.characteristic();
    if ell == p {
        return Err(Error::InvalidParameter("l must differ from p".into()));
    }
    let def_degree = match field.level() {
        Level::Prime => 1u32,
        Level::Quadratic => 2,
        Level::Extension => {
            return Err(Error::InvalidParameter(
                "definition field must be F_p or F_{p^2}".into(),
            ))
        }
    };
    let fp2 = FieldDescriptor::quadratic(p)?;
    let mut stats = TorsionStats::default();
    let candidates = torsion_extension_degrees(trace, ell);
    let mut last_err = Error::RetryBudgetExhausted;
    for (idx, &n) in candidates.iter().enumerate() {
        // tower degree over F_{p²}
        let over_quadratic = (n * def_degree) / 2;
        debug_assert_eq!((n * def_degree) % 2, 0);
        let ext = make_extension(&fp2, over_quadratic as usize, rng)?;
        let curve_ext = curve.base_change(&ext)?;
        let order = point_count_ext(trace.q, trace.a, n);
        match torsion_basis_in_extension(&curve_ext, ell, &order, n, rng, &mut stats) {
            Ok(basis) => return Ok((basis, stats)),
            Err(e @ (Error::LValuationTooSmall { .. } | Error::RetryBudgetExhausted))
                if idx + 1 < candidates.len() =>
            {
                last_err = e;
            }
            Err(e) => return Err(e),
        }
    }
    Err(last_err)
}

/// Check every invariant of a basis directly; used by tests and tripwires.
pub fn validate_basis(curve_ext: &Curve, basis: &TorsionBasis, ell: u64) -> Result<()> {
    for pt in [&basis.point_p, &basis.point_q] {
        if pt.is_infinity() || !curve_ext.contains(pt) {
            return Err(Error::KernelOrderMismatch);
        }
        if !curve_ext.scalar_mul_u64(ell, pt)?.is_infinity() {
            return Err(Error::KernelOrderMismatch);
        }
    }
    if bsgs_member(curve_ext, &basis.point_p, &basis.point_q, ell)? {
        return Err(Error::KernelOrderMismatch);
    }
    if basis.valuation < 2 {
        return Err(Error::LValuationTooSmall { valuation: basis.valuation });
    }
    let recomposed =
        &basis.cofactor * BigUint::from(ell).pow(basis.valuation);
    if recomposed != basis.group_order {
        return Err(Error::InvalidParameter("cofactor bookkeeping broken".into()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::supersingular_trace;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    fn rng(seed: u64) -> ChaCha12Rng {
        ChaCha12Rng::seed_from_u64(seed)
    }

    #[test]
    fn extension_degree_table() {
        let p = 13u64;
        let q = p * p;
        for ell in [3u64, 5, 11] {
            let l = ell as u32;
            let t = TraceData::new(q, -2 * p as i64).unwrap();
            assert_eq!(torsion_extension_degrees(&t, ell), vec![l - 1]);
            let t = TraceData::new(q, 2 * p as i64).unwrap();
            assert_eq!(torsion_extension_degrees(&t, ell), vec![l - 1]);
            let t = TraceData::new(q, 0).unwrap();
            assert_eq!(torsion_extension_degrees(&t, ell), vec![2 * (l - 1)]);
            let t = TraceData::new(q, p as i64).unwrap();
            assert_eq!(torsion_extension_degrees(&t, ell), vec![3 * (l - 1)]);
            // ordinary: generic trial sequence
            let t = TraceData::new(q, 3).unwrap();
            assert_eq!(torsion_extension_degrees(&t, ell), vec![l * l - 1, l * (l - 1)]);
        }
        // trace 0 over the prime field itself
        let t = TraceData::new(7, 0).unwrap();
        assert_eq!(torsion_extension_degrees(&t, 3), vec![4]);
        // and indeed 3² divides #E(F_{7⁴}) = 2304
        assert_eq!(point_count_ext(7, 0, 4), BigInt::from(2304));
    }

    fn f7_basis(seed: u64) -> (Curve, TorsionBasis, TorsionStats) {
        let f7 = FieldDescriptor::prime(7).unwrap();
        let curve = Curve::short(f7.one(), f7.zero()).unwrap();
        let trace = TraceData::new(7, 0).unwrap();
        let mut rng = rng(seed);
        let (basis, stats) = torsion_basis_with_stats(&curve, 3, &trace, &mut rng).unwrap();
        let ext_curve = curve.base_change(basis.field()).unwrap();
        (ext_curve, basis, stats)
    }

    #[test]
    fn basis_on_f7_curve_matches_worked_numbers() {
        let (ext_curve, basis, _) = f7_basis(11);
        assert_eq!(basis.n, 4);
        assert_eq!(basis.group_order, BigUint::from(2304u32));
        assert_eq!(basis.valuation, 2);
        assert_eq!(basis.cofactor, BigUint::from(256u32));
        validate_basis(&ext_curve, &basis, 3).unwrap();
        // direct postcondition checks
        assert!(ext_curve.scalar_mul_u64(3, &basis.point_p).unwrap().is_infinity());
        assert!(ext_curve.scalar_mul_u64(3, &basis.point_q).unwrap().is_infinity());
    }

    #[test]
    fn bsgs_examples_and_exhaustive_cross_check() {
        let (curve, basis, _) = f7_basis(12);
        let p = &basis.point_p;
        let q = &basis.point_q;
        assert!(bsgs_member(&curve, p, &CurvePoint::Infinity, 3).unwrap());
        assert!(bsgs_member(&curve, p, &curve.scalar_mul_u64(2, p).unwrap(), 3).unwrap());
        assert!(!bsgs_member(&curve, p, q, 3).unwrap());
        // exhaustive comparison against all multiples, and against shifted
        // combinations q + i·p which must all be outside <p>
        for i in 0..3u64 {
            let multiple = curve.scalar_mul_u64(i, p).unwrap();
            assert!(bsgs_member(&curve, p, &multiple, 3).unwrap());
            let shifted = curve.point_add(q, &multiple).unwrap();
            let member = (0..3u64).any(|m| curve.scalar_mul_u64(m, p).unwrap() == shifted);
            assert!(!member);
            assert!(!bsgs_member(&curve, p, &shifted, 3).unwrap());
        }
    }

    #[test]
    fn sharp_case_uses_n_equals_ell_minus_one() {
        // over F_49 the same curve has t = −2p and the basis comes from the
        // degree-(ℓ−1) extension
        let f49 = FieldDescriptor::quadratic(7).unwrap();
        let curve = Curve::short(f49.one(), f49.zero()).unwrap();
        let mut r = rng(13);
        let trace = supersingular_trace(&curve, &mut r).unwrap();
        assert_eq!(trace.a, -14);
        let basis = torsion_basis(&curve, 3, &trace, &mut r).unwrap();
        assert_eq!(basis.n, 2);
        let ext_curve = curve.base_change(basis.field()).unwrap();
        validate_basis(&ext_curve, &basis, 3).unwrap();
    }

    #[test]
    fn step_1d_success_rate_meets_lemma_bound() {
        // 200 seeded extractions per ℓ; empirical rate ≥ (1 − 1/ℓ²)² − 0.05
        let fp2 = FieldDescriptor::quadratic(13).unwrap();
        let j5 = fp2.from_u64(5);
        let curve = crate::curves::curve_from_j(&j5).unwrap();
        let mut r = rng(14);
        let trace = supersingular_trace(&curve, &mut r).unwrap();
        for ell in [3u64, 5, 7] {
            let mut agg = TorsionStats::default();
            for seed in 0..200u64 {
                let mut r = rng(1000 * ell + seed);
                let (_, stats) = torsion_basis_with_stats(&curve, ell, &trace, &mut r).unwrap();
                agg.pair_draws += stats.pair_draws;
                agg.pair_nonzero += stats.pair_nonzero;
            }
            let rate = agg.pair_nonzero as f64 / agg.pair_draws as f64;
            let bound = (1.0 - 1.0 / (ell * ell) as f64).powi(2) - 0.05;
            assert!(rate >= bound, "l = {ell}: rate {rate:.3} < bound {bound:.3}");
        }
    }

    #[test]
    fn valuation_too_small_is_reported() {
        // wrong n on purpose: over F_49 itself, E[3] is not fully rational
        let f49 = FieldDescriptor::quadratic(7).unwrap();
        let curve = Curve::short(f49.one(), f49.zero()).unwrap();
        let mut r = rng(15);
        // #E(F_49) = 64 has 3-valuation 0
        let err = torsion_basis_in_extension(
            &curve,
            3,
            &BigInt::from(64),
            1,
            &mut r,
            &mut TorsionStats::default(),
        )
        .unwrap_err();
        assert_eq!(err, Error::LValuationTooSmall { valuation: 0 });
    }
}
