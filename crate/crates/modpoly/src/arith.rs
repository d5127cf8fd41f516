//! u64 modular arithmetic helpers shared across the crate.

pub(crate) fn addm(a: u64, b: u64, p: u64) -> u64 {
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

pub(crate) fn subm(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

pub(crate) fn negm(a: u64, p: u64) -> u64 {
    if a == 0 {
        0
    } else {
        p - a
    }
}

pub(crate) fn mulm(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn powm(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulm(acc, a, p);
        }
        a = mulm(a, a, p);
        e >>= 1;
    }
    acc
}

/// Inverse mod p (p prime, a != 0 mod p) by extended Euclid.
pub(crate) fn invm(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return None;
    }
    let (mut r0, mut r1) = (p as i128, a as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    debug_assert_eq!(r0, 1, "p must be prime");
    Some(t0.rem_euclid(p as i128) as u64)
}

/// Deterministic Miller-Rabin, valid for all u64.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &q in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == q {
            return true;
        }
        if n % q == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powm(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mulm(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// ℓ-adic valuation and cofactor of a big integer: n = cofactor * ℓ^k.
pub(crate) fn split_valuation(
    n: &num_bigint::BigUint,
    ell: u64,
) -> (u32, num_bigint::BigUint) {
    use num_integer::Integer;
    use num_traits::Zero;
    let ell = num_bigint::BigUint::from(ell);
    let mut k = 0u32;
    let mut cof = n.clone();
    loop {
        let (q, r) = cof.div_rem(&ell);
        if r.is_zero() {
            cof = q;
            k += 1;
        } else {
            return (k, cof);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;

    #[test]
    fn invm_matches_brute_force() {
        for p in [3u64, 7, 13, 97] {
            for a in 1..p {
                let inv = invm(a, p).unwrap();
                assert_eq!(mulm(a, inv, p), 1);
            }
        }
        assert_eq!(invm(0, 7), None);
    }

    #[test]
    fn primality_small_range() {
        let naive = |n: u64| n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0);
        for n in 0..2000 {
            assert_eq!(is_prime(n), naive(n), "n = {n}");
        }
    }

    #[test]
    fn valuation_splits() {
        let n = BigUint::from(2304u64); // 2^8 * 3^2
        let (k, cof) = split_valuation(&n, 3);
        assert_eq!(k, 2);
        assert_eq!(cof, BigUint::from(256u64));
    }
}
