//! Square roots and quadratic characters.
//!
//! One Tonelli–Shanks routine covers every level of the tower: exponents run
//! over the full multiplicative group of size Q − 1 = 2^e·s, the odd-part
//! exponentiation x^{(s+1)/2} seeds the root, and random non-residues fix up
//! the 2-part. Only the non-residue search is probabilistic.

use super::FieldElement;
use crate::arith::powm;
use num_bigint::BigUint;
use num_traits::One;
use rand::Rng;

impl FieldElement {
    /// A square root of `self`, or None when `self` is a non-residue.
    /// Either root may be returned; callers negate as needed.
    pub fn sqrt<R: Rng>(&self, rng: &mut R) -> Option<FieldElement> {
        if self.is_zero() {
            return Some(self.clone());
        }
        let field = self.field();
        let q = field.field_size();
        let qm1 = &q - 1u32;
        let half = &qm1 >> 1;
        let one = field.one();
        if self.pow_biguint(&half) != one {
            return None;
        }

        // q ≡ 3 mod 4: direct exponent
        if qm1.bit(1) {
            return Some(self.pow_biguint(&((&q + 1u32) >> 2)));
        }

        let e = qm1.trailing_zeros().unwrap();
        let s = &qm1 >> e;
        let neg_one = -&one;

        // random non-residue for the 2-part adjustment
        let mut z;
        loop {
            z = field.random_element(rng);
            if !z.is_zero() && z.pow_biguint(&half) == neg_one {
                break;
            }
        }

        let mut m = e;
        let mut c = z.pow_biguint(&s);
        let mut t = self.pow_biguint(&s);
        let mut r = self.pow_biguint(&((&s + 1u32) >> 1));
        while t != one {
            let mut i = 0u64;
            let mut probe = t.clone();
            while probe != one {
                probe = &probe * &probe;
                i += 1;
                debug_assert!(i < m);
            }
            let gap = m - i - 1;
            let b = c.pow_biguint(&(BigUint::one() << gap));
            m = i;
            c = &b * &b;
            t = &t * &c;
            r = &r * &b;
        }
        debug_assert_eq!(&r * &r, *self);
        Some(r)
    }
}

/// Legendre symbol (d/p) by Euler's criterion; accepts negative d.
pub fn quadratic_character(d: i64, p: u64) -> i32 {
    debug_assert!(p > 2);
    let r = d.rem_euclid(p as i64) as u64;
    if r == 0 {
        return 0;
    }
    if powm(r, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::super::FieldDescriptor;
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    fn rng(seed: u64) -> ChaCha12Rng {
        ChaCha12Rng::seed_from_u64(seed)
    }

    #[test]
    fn sqrt_in_f7_matches_brute_force() {
        let f7 = FieldDescriptor::prime(7).unwrap();
        let mut rng = rng(7);
        // brute-force square table
        let squares: Vec<u64> = (0..7u64).map(|a| a * a % 7).collect();
        assert!(squares.contains(&4) && !squares.contains(&3));

        let r = f7.from_u64(4).sqrt(&mut rng).unwrap();
        assert!(r == f7.from_u64(2) || r == f7.from_u64(5));
        assert!(f7.from_u64(3).sqrt(&mut rng).is_none());
        assert!(f7.zero().sqrt(&mut rng).unwrap().is_zero());
    }

    #[test]
    fn character_matches_brute_force_mod_13() {
        let squares: std::collections::HashSet<u64> = (1..13u64).map(|a| a * a % 13).collect();
        assert_eq!(squares, [1, 3, 4, 9, 10, 12].into_iter().collect());
        assert_eq!(quadratic_character(2, 13), -1);
        assert_eq!(quadratic_character(1, 13), 1);
        assert_eq!(quadratic_character(26, 13), 0);
        assert_eq!(quadratic_character(-1, 13), 1); // 13 ≡ 1 mod 4
    }

    #[test]
    fn character_agrees_with_sqrt_exhaustively() {
        for p in [5u64, 13, 41, 97] {
            let fp = FieldDescriptor::prime(p).unwrap();
            let mut rng = rng(p);
            for d in 0..p {
                let chi = quadratic_character(d as i64, p);
                let has_root = fp.from_u64(d).sqrt(&mut rng).is_some();
                if d == 0 {
                    assert_eq!(chi, 0);
                    assert!(has_root);
                } else {
                    assert_eq!(chi == 1, has_root, "p={p} d={d}");
                }
            }
        }
    }

    #[test]
    fn sqrt_roundtrip_on_random_squares() {
        let mut rng = rng(42);
        let fp2 = FieldDescriptor::quadratic(13).unwrap();
        let ext = super::super::make_extension(&fp2, 3, &mut rng).unwrap();
        for field in [fp2, ext] {
            for _ in 0..1000 {
                let a = field.random_element(&mut rng);
                let sq = &a * &a;
                let r = sq.sqrt(&mut rng).expect("a square must have a root");
                assert_eq!(&r * &r, sq);
            }
        }
    }
}
