//! Vélu's formulas for odd prime degree: from a kernel generator G of order
//! ℓ, the Weierstrass equation of E/⟨G⟩ and its j-invariant.
//!
//! The per-point quantities t(Q) = 2gˣ(Q) − a₁gʸ(Q) and u(Q) = (gʸ(Q))² are
//! invariant under Q ↦ −Q, so each ± pair of kernel points contributes once:
//! the sums run over the representatives i·G, 1 ≤ i ≤ (ℓ−1)/2. (Summing the
//! same folded quantities over every point of C − {O} doubles t and w and
//! produces a curve that is merely a twist of E/C; the point-count and
//! oracle checks in the test suite pin the representative convention down.)

use crate::curves::{Curve, CurvePoint};
use crate::error::{Error, Result};
use crate::fields::{FieldElement, Level};
use crate::torsion::TorsionBasis;
use rand::Rng;

/// Sum the per-point quantities over kernel representatives, one per
/// ± pair. The empty list is the degenerate isogeny E → E (t = w = 0); it
/// exists as a hook for the unit tests below.
pub(crate) fn isogenous_curve_from_kernel_points(
    curve: &Curve,
    kernel: &[CurvePoint],
) -> Result<Curve> {
    let field = curve.field();
    let mut t_sum = field.zero();
    let mut w_sum = field.zero();
    for pt in kernel {
        let CurvePoint::Affine { x, y } = pt else {
            return Err(Error::KernelOrderMismatch);
        };
        // gˣ = 3x² + 2a₂x + a₄ − a₁y, gʸ = −2y − a₁x − a₃
        let gx = &(&(&(x * x).mul_small(3) + &(&curve.a2 * x).mul_small(2)) + &curve.a4)
            - &(&curve.a1 * y);
        let gy = &(&(-&y.mul_small(2)) - &(&curve.a1 * x)) - &curve.a3;
        // t(Q) = 2gˣ − a₁gʸ, u(Q) = (gʸ)²
        let t_q = &gx.mul_small(2) - &(&curve.a1 * &gy);
        let u_q = &gy * &gy;
        t_sum = &t_sum + &t_q;
        w_sum = &(&w_sum + &u_q) + &(x * &t_q);
    }
    // A₄ = a₄ − 5t, A₆ = a₆ − (a₁² + 4a₂)t − 7w
    let a4 = &curve.a4 - &t_sum.mul_small(5);
    let b2 = &(&curve.a1 * &curve.a1) + &curve.a2.mul_small(4);
    let a6 = &(&curve.a6 - &(&b2 * &t_sum)) - &w_sum.mul_small(7);
    Curve::new(curve.a1.clone(), curve.a2.clone(), curve.a3.clone(), a4, a6)
}

/// The ℓ-isogeny with kernel ⟨G⟩: image curve and its j-invariant, summing
/// over all ℓ−1 nonzero multiples of G.
pub fn velu_isogeny(
    curve: &Curve,
    kernel_gen: &CurvePoint,
    ell: u64,
) -> Result<(Curve, FieldElement)> {
    if ell < 3 || !crate::arith::is_prime(ell) || ell == curve.field().characteristic() {
        return Err(Error::InvalidParameter(
            "velu formulas need an odd prime l different from the characteristic".into(),
        ));
    }
    if kernel_gen.is_infinity() || !curve.contains(kernel_gen) {
        return Err(Error::KernelOrderMismatch);
    }
    // enumerate G, 2G, …, ((ℓ−1)/2)·G by repeated addition; ℓ prime makes
    // any nonzero point of ⟨G⟩ a generator, so exact order ℓ is equivalent
    // to the chain staying nonzero and ℓ·G = O
    let reps = (ell as usize - 1) / 2;
    let mut kernel = Vec::with_capacity(reps);
    let mut acc = kernel_gen.clone();
    for _ in 0..reps {
        if acc.is_infinity() {
            return Err(Error::KernelOrderMismatch);
        }
        kernel.push(acc.clone());
        acc = curve.point_add(&acc, kernel_gen)?;
    }
    if !curve.scalar_mul_u64(ell, kernel_gen)?.is_infinity() {
        return Err(Error::KernelOrderMismatch);
    }
    let image = isogenous_curve_from_kernel_points(curve, &kernel)?;
    let j = image.j_invariant();
    Ok((image, j))
}

/// The ℓ+1 j-invariants of E/G_i over the subgroups G₁ = ⟨Q⟩ and
/// G_{1+i} = ⟨P + (i−1)Q⟩, as a multiset in that fixed order, mapped down
/// to the canonical F_{p²} representation.
pub fn quotient_j_set(
    curve_ext: &Curve,
    basis: &TorsionBasis,
    ell: u64,
) -> Result<Vec<FieldElement>> {
    let mut out = Vec::with_capacity(ell as usize + 1);
    let mut push = |j: FieldElement| -> Result<()> {
        let canonical = match j.field().level() {
            Level::Quadratic => j,
            Level::Extension => j.try_descend().map_err(|_| Error::SubfieldDescent)?,
            Level::Prime => return Err(Error::SubfieldDescent),
        };
        out.push(canonical);
        Ok(())
    };
    let (_, j) = velu_isogeny(curve_ext, &basis.point_q, ell)?;
    push(j)?;
    let mut gen = basis.point_p.clone();
    for _ in 0..ell {
        let (_, j) = velu_isogeny(curve_ext, &gen, ell)?;
        push(j)?;
        gen = curve_ext.point_add(&gen, &basis.point_q)?;
    }
    Ok(out)
}

/// `quotient_j_set` with the multiset sorted canonically, for comparisons
/// that must not depend on the sampled basis.
pub fn quotient_j_multiset<R: Rng>(
    curve_ext: &Curve,
    basis: &TorsionBasis,
    ell: u64,
    _rng: &mut R,
) -> Result<Vec<FieldElement>> {
    let mut js = quotient_j_set(curve_ext, basis, ell)?;
    js.sort_by(|a, b| a.canonical_cmp(b));
    Ok(js)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::{curve_order_brute_force, supersingular_trace, curve_from_j};
    use crate::curves::TraceData;
    use crate::fields::FieldDescriptor;
    use crate::torsion::{bsgs_member, torsion_basis};
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    fn rng(seed: u64) -> ChaCha12Rng {
        ChaCha12Rng::seed_from_u64(seed)
    }

    fn f7_setup(seed: u64) -> (Curve, TorsionBasis) {
        let f7 = FieldDescriptor::prime(7).unwrap();
        let curve = Curve::short(f7.one(), f7.zero()).unwrap();
        let trace = TraceData::new(7, 0).unwrap();
        let mut r = rng(seed);
        let basis = torsion_basis(&curve, 3, &trace, &mut r).unwrap();
        let ext_curve = curve.base_change(basis.field()).unwrap();
        (ext_curve, basis)
    }

    #[test]
    fn empty_kernel_is_identity() {
        let (curve, _) = f7_setup(1);
        let image = isogenous_curve_from_kernel_points(&curve, &[]).unwrap();
        assert_eq!(image, curve);
    }

    #[test]
    fn generator_choice_does_not_matter() {
        let (curve, basis) = f7_setup(2);
        let g = &basis.point_p;
        let (e1, j1) = velu_isogeny(&curve, g, 3).unwrap();
        let g2 = curve.scalar_mul_u64(2, g).unwrap();
        let (e2, j2) = velu_isogeny(&curve, &g2, 3).unwrap();
        assert_eq!(e1, e2);
        assert_eq!(j1, j2);
    }

    #[test]
    fn wrong_order_kernel_rejected() {
        let (curve, basis) = f7_setup(3);
        assert_eq!(
            velu_isogeny(&curve, &CurvePoint::Infinity, 3),
            Err(Error::KernelOrderMismatch)
        );
        // an order-3 point fed with l = 5 dies mid-chain
        assert_eq!(
            velu_isogeny(&curve, &basis.point_p, 5),
            Err(Error::KernelOrderMismatch)
        );
    }

    #[test]
    fn isogenous_curves_share_point_counts() {
        let (curve, basis) = f7_setup(4);
        let (image, _) = velu_isogeny(&curve, &basis.point_p, 3).unwrap();
        // both counts over F_{7⁴}, where the kernel lives
        assert_eq!(curve_order_brute_force(&curve), 2304);
        assert_eq!(curve_order_brute_force(&image), 2304);
    }

    #[test]
    fn quotient_set_has_distinct_subgroups_and_descends() {
        let (curve, basis) = f7_setup(5);
        let js = quotient_j_set(&curve, &basis, 3).unwrap();
        assert_eq!(js.len(), 4);
        // kernels pairwise generate different subgroups
        let mut gens = vec![basis.point_q.clone()];
        let mut g = basis.point_p.clone();
        for _ in 0..3 {
            gens.push(g.clone());
            g = curve.point_add(&g, &basis.point_q).unwrap();
        }
        for a in 0..gens.len() {
            for b in 0..gens.len() {
                if a != b {
                    assert!(!bsgs_member(&curve, &gens[a], &gens[b], 3).unwrap());
                }
            }
        }
    }

    #[test]
    fn supersingular_quotients_land_in_fp2() {
        // p = 13, l = 3, j = 5: S(13) = 1 forces every neighbor back to 5
        let fp2 = FieldDescriptor::quadratic(13).unwrap();
        let j5 = fp2.from_u64(5);
        let curve = curve_from_j(&j5).unwrap();
        let mut r = rng(6);
        let trace = supersingular_trace(&curve, &mut r).unwrap();
        let basis = torsion_basis(&curve, 3, &trace, &mut r).unwrap();
        let curve_ext = curve.base_change(basis.field()).unwrap();
        let js = quotient_j_set(&curve_ext, &basis, 3).unwrap();
        for j in &js {
            // frobenius applied twice fixes each root, and the value is 5
            assert_eq!(j.frobenius_p2().frobenius_p2(), *j);
            assert_eq!(*j, j5);
        }
    }

    #[test]
    fn multiset_is_basis_independent() {
        let (curve_a, basis_a) = f7_setup(7);
        let (curve_b, basis_b) = f7_setup(8);
        let mut r = rng(9);
        let ja = quotient_j_multiset(&curve_a, &basis_a, 3, &mut r).unwrap();
        let jb = quotient_j_multiset(&curve_b, &basis_b, 3, &mut r).unwrap();
        // different extensions: compare by serialized F_{p²} coordinates
        let sa: Vec<String> = ja.iter().map(|j| j.serialize()).collect();
        let sb: Vec<String> = jb.iter().map(|j| j.serialize()).collect();
        assert_eq!(sa, sb);
    }
}
