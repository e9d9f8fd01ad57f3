//! Small-integer number theory helpers.

use num_bigint::BigUint;
use num_traits::One;

/// Prime factorization of a machine integer by trial division.
pub fn factor_u64(mut m: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= m {
        if m.is_multiple_of(p) {
            let mut e = 0;
            while m.is_multiple_of(p) {
                m /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if m > 1 {
        out.push((m, 1));
    }
    out
}

pub fn is_prime_u64(m: u64) -> bool {
    matches!(factor_u64(m).as_slice(), [(_, 1)]) && m > 1
}

pub fn prime_divisors(m: u64) -> Vec<u64> {
    factor_u64(m).into_iter().map(|(p, _)| p).collect()
}

pub fn big_pow(p: u64, e: u64) -> BigUint {
    let mut acc = BigUint::one();
    let base = BigUint::from(p);
    for _ in 0..e {
        acc *= &base;
    }
    acc
}

/// `a^e mod m` for `m < 2^63`.
pub fn pow_mod(a: u64, mut e: u64, m: u64) -> u64 {
    let mut base = (a % m) as u128;
    let mut acc = 1u128 % m as u128;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % m as u128;
        }
        base = base * base % m as u128;
        e >>= 1;
    }
    acc as u64
}

/// Inverse of `a` modulo the prime `p`.
pub fn inv_mod_prime(a: u64, p: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(p));
    pow_mod(a, p - 2, p)
}

/// Product of prime powers, e.g. for a modulus given as `p^a` components.
pub fn product(components: &[(u64, u32)]) -> u64 {
    components.iter().map(|&(p, a)| p.pow(a)).product()
}
