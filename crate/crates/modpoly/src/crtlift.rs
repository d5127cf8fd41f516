//! Reconstruction of φ_ℓ over the integers from its mod-p images:
//! symmetric-range CRT folds over an ascending stream of valid primes, with
//! an empirical stabilization rule (unchanged under two further primes) and
//! an analytic-style bit cap as a backstop.

use crate::bivariate::BivariatePoly;
use crate::error::{Error, Result};
use crate::globalphi::modular_poly_mod_p;
use crate::ssinit::supersingular_count;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::Rng;

/// Hard cap on the accumulated modulus, in bits: 2·(6ℓ·ln ℓ + 18ℓ + 64)/ln 2.
/// Reaching it without stabilization aborts (the true coefficient bound is
/// e^{O(ℓ log ℓ)}, so this is generous).
pub fn modulus_bit_cap(ell: u64) -> u64 {
    let l = ell as f64;
    (2.0 * (6.0 * l * l.ln() + 18.0 * l + 64.0) / 2f64.ln()).ceil() as u64
}

/// Ascending primes usable for the mod-p pipeline at this ℓ: p ≥ 12ℓ+13
/// and S(p) ≥ ℓ+1 (the latter is implied by the former, but checked).
pub fn valid_primes(ell: u64) -> impl Iterator<Item = u64> {
    (12 * ell + 13..)
        .filter(|&p| crate::arith::is_prime(p))
        .filter(move |&p| p != ell && supersingular_count(p) >= ell + 1)
}

/// Symmetric-range CRT fold of per-prime coefficient grids.
#[derive(Debug, Clone)]
pub struct CrtAccumulator {
    ell: u64,
    primes: Vec<u64>,
    modulus: BigInt,
    grid: Option<BivariatePoly<BigInt>>,
}

impl CrtAccumulator {
    pub fn new(ell: u64) -> Self {
        CrtAccumulator { ell, primes: vec![], modulus: BigInt::one(), grid: None }
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn modulus_bits(&self) -> u64 {
        self.modulus.bits()
    }

    /// The current reconstruction, entries in (−M/2, M/2].
    pub fn reconstruction(&self) -> Option<&BivariatePoly<BigInt>> {
        self.grid.as_ref()
    }

    pub fn push(&mut self, p: u64, grid_p: &BivariatePoly<u64>) -> Result<()> {
        if grid_p.ell() != self.ell {
            return Err(Error::InvalidParameter("grid has the wrong l".into()));
        }
        if p < 12 * self.ell + 13 || supersingular_count(p) < self.ell + 1 {
            return Err(Error::InvalidParameter(format!("prime {p} is below 12l+13")));
        }
        if self.primes.contains(&p) {
            return Err(Error::InvalidParameter(format!("prime {p} used twice")));
        }
        let pb = BigInt::from(p);
        let new_modulus = &self.modulus * &pb;
        let half = &new_modulus >> 1;
        let updated = match &self.grid {
            None => grid_p.map(|&r| symmetric(BigInt::from(r), &new_modulus, &half)),
            Some(grid) => {
                let m_inv = mod_inverse(&self.modulus, &pb)
                    .expect("primes are distinct, so M is invertible mod p");
                let mut out: BivariatePoly<BigInt> = BivariatePoly::new_zero(self.ell);
                for k in 0..grid.size() {
                    for m in 0..grid.size() {
                        let g = grid.get(k, m);
                        let r = BigInt::from(*grid_p.get(k, m));
                        let t = ((r - g) * &m_inv).mod_floor(&pb);
                        let x = g + &self.modulus * t;
                        out.set(k, m, symmetric(x, &new_modulus, &half));
                    }
                }
                out
            }
        };
        self.grid = Some(updated);
        self.modulus = new_modulus;
        self.primes.push(p);
        Ok(())
    }
}

fn symmetric(x: BigInt, modulus: &BigInt, half: &BigInt) -> BigInt {
    let mut r = x.mod_floor(modulus);
    if &r > half {
        r -= modulus;
    }
    r
}

fn mod_inverse(a: &BigInt, p: &BigInt) -> Option<BigInt> {
    let a = a.mod_floor(p);
    if a.is_zero() {
        return None;
    }
    let e = p - 2; // p prime
    Some(a.modpow(&e, p))
}

/// Lift φ_ℓ to the integers: run the mod-p pipeline over `primes` (or the
/// ascending valid stream) and fold, stopping once the reconstruction has
/// survived two further primes unchanged.
pub fn crt_lift<R: Rng>(
    ell: u64,
    primes: Option<&[u64]>,
    rng: &mut R,
) -> Result<BivariatePoly<BigInt>> {
    let cap = modulus_bit_cap(ell);
    let mut acc = CrtAccumulator::new(ell);
    let mut stable_streak = 0u32;
    let mut previous: Option<BivariatePoly<BigInt>> = None;

    let explicit: Vec<u64>;
    let stream: Box<dyn Iterator<Item = u64>> = match primes {
        Some(list) => {
            explicit = list.to_vec();
            Box::new(explicit.into_iter())
        }
        None => Box::new(valid_primes(ell)),
    };

    for p in stream {
        let grid_p = modular_poly_mod_p(p, ell, rng)?;
        acc.push(p, &grid_p)?;
        let current = acc.reconstruction().unwrap();
        if previous.as_ref() == Some(current) {
            stable_streak += 1;
            if stable_streak >= 2 {
                return Ok(current.clone());
            }
        } else {
            stable_streak = 0;
            previous = Some(current.clone());
        }
        if acc.modulus_bits() >= cap {
            return Err(Error::NotStabilized { modulus_bits: acc.modulus_bits() });
        }
    }
    Err(Error::NotStabilized { modulus_bits: acc.modulus_bits() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::classical_phi;
    use num_traits::Signed;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    fn rng(seed: u64) -> ChaCha12Rng {
        ChaCha12Rng::seed_from_u64(seed)
    }

    #[test]
    fn prime_stream_starts_correctly() {
        // 12·3+13 = 49 is not prime; the stream starts at 53
        let first: Vec<u64> = valid_primes(3).take(4).collect();
        assert_eq!(first, vec![53, 59, 61, 67]);
        let first5: Vec<u64> = valid_primes(5).take(3).collect();
        assert_eq!(first5, vec![73, 79, 83]);
    }

    #[test]
    fn lift_of_phi3_matches_oracle_exactly() {
        let lifted = crt_lift(3, None, &mut rng(1)).unwrap();
        let oracle = classical_phi(3).unwrap();
        assert_eq!(lifted, oracle);
    }

    #[test]
    fn reconstruction_reduces_back_to_each_constituent() {
        let mut r = rng(2);
        let mut acc = CrtAccumulator::new(3);
        let mut images = vec![];
        for p in valid_primes(3).take(5) {
            let g = modular_poly_mod_p(p, 3, &mut r).unwrap();
            acc.push(p, &g).unwrap();
            images.push((p, g));
        }
        let rec = acc.reconstruction().unwrap();
        for (p, g) in &images {
            assert_eq!(&rec.reduce_mod(*p), g, "p = {p}");
        }
        // symmetric range invariant
        let half = BigInt::from(acc.primes().iter().product::<u64>()) >> 1;
        for k in 0..rec.size() {
            for m in 0..rec.size() {
                assert!(rec.get(k, m).abs() <= half);
            }
        }
    }

    #[test]
    fn one_more_prime_after_stabilization_changes_nothing() {
        let mut r = rng(3);
        let oracle = classical_phi(3).unwrap();
        let mut acc = CrtAccumulator::new(3);
        let mut stabilized_at = None;
        let mut previous: Option<BivariatePoly<BigInt>> = None;
        let mut streak = 0;
        for p in valid_primes(3).take(20) {
            let g = modular_poly_mod_p(p, 3, &mut r).unwrap();
            acc.push(p, &g).unwrap();
            let cur = acc.reconstruction().unwrap().clone();
            if previous.as_ref() == Some(&cur) {
                streak += 1;
                if streak >= 2 && stabilized_at.is_none() {
                    stabilized_at = Some(acc.primes().len());
                    assert_eq!(cur, oracle);
                }
            } else {
                streak = 0;
            }
            if let Some(n) = stabilized_at {
                if acc.primes().len() > n {
                    assert_eq!(cur, oracle, "reconstruction drifted after stabilization");
                    break;
                }
            }
            previous = Some(cur);
        }
        assert!(stabilized_at.is_some(), "never stabilized within 20 primes");
    }

    #[test]
    fn explicit_prime_list_is_validated() {
        let mut r = rng(4);
        // 41 < 12·3+13 = 49: rejected
        let err = crt_lift(3, Some(&[41, 53, 61]), &mut r).unwrap_err();
        assert!(matches!(err, Error::InvalidParameter(_)));
        // too short a list cannot stabilize
        let err = crt_lift(3, Some(&[53, 61]), &mut r).unwrap_err();
        assert!(matches!(err, Error::NotStabilized { .. }));
    }

    #[test]
    fn bit_cap_is_generous() {
        assert!(modulus_bit_cap(3) > 160);
        assert!(modulus_bit_cap(5) > 380);
    }
}
