use modpoly::curves::{curve_order_brute_force, Curve, TraceData};
use modpoly::fields::FieldDescriptor;
use modpoly::torsion::torsion_basis;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

fn main() {
    let f7 = FieldDescriptor::prime(7).unwrap();
    let curve = Curve::short(f7.one(), f7.zero()).unwrap();
    let trace = TraceData::new(7, 0).unwrap();
    for seed in [4u64, 9, 21] {
        let mut r = ChaCha12Rng::seed_from_u64(seed);
        let basis = torsion_basis(&curve, 3, &trace, &mut r).unwrap();
        let ext = basis.field().clone();
        let e = curve.base_change(&ext).unwrap();
        let g = &basis.point_p;

        // representative sum: only i = 1..=(l-1)/2, i.e. just G for l = 3
        let modpoly::curves::CurvePoint::Affine { x, y } = g.clone() else { panic!() };
        let gx = &(&(&(&x * &x).mul_small(3) + &(&e.a2 * &x).mul_small(2)) + &e.a4) - &(&e.a1 * &y);
        let gy = &(&(-&y.mul_small(2)) - &(&e.a1 * &x)) - &e.a3;
        let t_q = &gx.mul_small(2) - &(&e.a1 * &gy);
        let u_q = &gy * &gy;
        let t = t_q.clone();
        let w = &u_q + &(&x * &t_q);
        let a4 = &e.a4 - &t.mul_small(5);
        let b2 = &(&e.a1 * &e.a1) + &e.a2.mul_small(4);
        let a6 = &(&e.a6 - &(&b2 * &t)) - &w.mul_small(7);
        let image = Curve::new(e.a1.clone(), e.a2.clone(), e.a3.clone(), a4, a6).unwrap();
        println!(
            "seed {seed}: count(E) = {}, count(E/G reps) = {}, j' = {}",
            curve_order_brute_force(&e),
            curve_order_brute_force(&image),
            image.j_invariant().serialize()
        );
    }
}
