//! Integer arithmetic: factorization, power-free parts, Kronecker symbols,
//! modular square roots and small prime sieves.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ArithError {
    #[error("zero has no factorization")]
    Zero,
    #[error("power-free exponent must be 2, 3, 4 or 6, got {0}")]
    BadExponent(u32),
    #[error("2-adic square class needs an odd integer, got {0}")]
    EvenInput(i128),
    #[error("Kronecker symbol with n = 0")]
    KroneckerZero,
    #[error("{0} is not a quadratic residue mod {1}")]
    NonResidue(u64, u64),
}

/// Prime factorization `sign * prod p^e`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub sign: i8,
    pub factors: Vec<(u128, u32)>,
}

impl Factorization {
    pub fn reconstruct(&self) -> i128 {
        let mut v: i128 = self.sign as i128;
        for &(p, e) in &self.factors {
            for _ in 0..e {
                v *= p as i128;
            }
        }
        v
    }

    pub fn primes(&self) -> Vec<u128> {
        self.factors.iter().map(|f| f.0).collect()
    }

    pub fn exponent_of(&self, p: u128) -> u32 {
        self.factors.iter().find(|f| f.0 == p).map_or(0, |f| f.1)
    }
}

impl fmt::Display for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.sign < 0 {
            write!(f, "-")?;
        }
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        for (i, (p, e)) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            if *e == 1 {
                write!(f, "{p}")?;
            } else {
                write!(f, "{p}^{e}")?;
            }
        }
        Ok(())
    }
}

fn mul_mod(a: u128, b: u128, m: u128) -> u128 {
    if m <= u64::MAX as u128 {
        (a % m) * (b % m) % m
    } else {
        let r = (BigUint::from(a) * BigUint::from(b)) % BigUint::from(m);
        r.to_u128().unwrap()
    }
}

pub fn pow_mod(mut b: u128, mut e: u128, m: u128) -> u128 {
    if m == 1 {
        return 0;
    }
    let mut r = 1u128;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

pub fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn inv_mod(a: i128, m: u128) -> Option<u128> {
    if m == 1 {
        return Some(0);
    }
    let m_i = m as i128;
    let (mut r0, mut r1) = (a.rem_euclid(m_i), m_i);
    let (mut s0, mut s1) = (1i128, 0i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    if r0 != 1 {
        return None;
    }
    Some(s0.rem_euclid(m_i) as u128)
}

/// Deterministic Miller-Rabin for `n < 2^64`, strong probable prime test above.
pub fn is_prime(n: u128) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u128, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'outer: for a in [2u128, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

fn pollard_rho(n: u128) -> u128 {
    if n % 2 == 0 {
        return 2;
    }
    let mut c = 1u128;
    loop {
        let f = |x: u128| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut d) = (2u128, 2u128, 1u128);
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = gcd_u128(x.abs_diff(y), n);
        }
        if d != n {
            return d;
        }
        c += 1;
    }
}

fn factor_rec(n: u128, out: &mut Vec<u128>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        out.push(n);
        return;
    }
    let d = pollard_rho(n);
    factor_rec(d, out);
    factor_rec(n / d, out);
}

/// Complete factorization: trial division up to 10^6, then Pollard rho.
pub fn factorize(n: i128) -> Result<Factorization, ArithError> {
    if n == 0 {
        return Err(ArithError::Zero);
    }
    let sign = if n < 0 { -1 } else { 1 };
    let mut m = n.unsigned_abs();
    let mut primes: Vec<u128> = Vec::new();
    let mut p = 2u128;
    while p <= 1_000_000 && p * p <= m {
        while m % p == 0 {
            primes.push(p);
            m /= p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if m > 1 {
        factor_rec(m, &mut primes);
    }
    primes.sort_unstable();
    let mut factors: Vec<(u128, u32)> = Vec::new();
    for q in primes {
        match factors.last_mut() {
            Some(last) if last.0 == q => last.1 += 1,
            _ => factors.push((q, 1)),
        }
    }
    Ok(Factorization { sign, factors })
}

/// Writes `n = core * cofactor^k` with `core` k-th-power-free, keeping the sign of `n` in `core`.
pub fn powerfree_part(n: i128, k: u32) -> Result<(i128, u128), ArithError> {
    if ![2, 3, 4, 6].contains(&k) {
        return Err(ArithError::BadExponent(k));
    }
    let fac = factorize(n)?;
    let mut core: i128 = fac.sign as i128;
    let mut cof: u128 = 1;
    for (p, e) in fac.factors {
        core *= (p as i128).pow(e % k);
        cof *= p.pow(e / k);
    }
    Ok((core, cof))
}

/// Square-free part of a nonzero rational number given as `num/den`, sign kept.
pub fn squarefree_rational(num: i128, den: i128) -> Result<i128, ArithError> {
    let (c, _) = powerfree_part(num * den, 2)?;
    Ok(c)
}

pub fn valuation(n: i128, p: u128) -> u32 {
    if n == 0 {
        return u32::MAX;
    }
    let mut m = n.unsigned_abs();
    let mut v = 0;
    while m % p == 0 {
        m /= p;
        v += 1;
    }
    v
}

/// Kronecker symbol (a/n).
pub fn kronecker(a: i128, n: i128) -> Result<i8, ArithError> {
    if n == 0 {
        return Err(ArithError::KroneckerZero);
    }
    let mut result: i8 = 1;
    let mut n = n;
    if n < 0 {
        n = -n;
        if a < 0 {
            result = -result;
        }
    }
    let v = n.trailing_zeros();
    if v > 0 {
        if a % 2 == 0 {
            return Ok(0);
        }
        let r = a.rem_euclid(8);
        if v % 2 == 1 && (r == 3 || r == 5) {
            result = -result;
        }
        n >>= v;
    }
    // Jacobi symbol (a/n) for odd positive n
    let mut a = a.rem_euclid(n);
    let mut n = n;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            let r = n % 8;
            if r == 3 || r == 5 {
                result = -result;
            }
        }
        core::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            result = -result;
        }
        a %= n;
    }
    Ok(if n == 1 { result } else { 0 })
}

/// Square class of an odd 2-adic unit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SqClass2 {
    S,
    Ns3,
    Ns5,
    Ns7,
}

impl SqClass2 {
    pub fn as_str(self) -> &'static str {
        match self {
            SqClass2::S => "s",
            SqClass2::Ns3 => "ns3",
            SqClass2::Ns5 => "ns5",
            SqClass2::Ns7 => "ns7",
        }
    }
}

pub fn square_class_2adic(u: i128) -> Result<SqClass2, ArithError> {
    if u % 2 == 0 {
        return Err(ArithError::EvenInput(u));
    }
    Ok(match u.rem_euclid(8) {
        1 => SqClass2::S,
        3 => SqClass2::Ns3,
        5 => SqClass2::Ns5,
        _ => SqClass2::Ns7,
    })
}

/// Square root of `a` modulo an odd prime `p` (Tonelli-Shanks).
pub fn sqrt_mod(a: u64, p: u64) -> Result<u64, ArithError> {
    let a = a % p;
    if p == 2 || a == 0 {
        return Ok(a);
    }
    let (a128, p128) = (a as u128, p as u128);
    if pow_mod(a128, (p128 - 1) / 2, p128) != 1 {
        return Err(ArithError::NonResidue(a, p));
    }
    let mut q = p128 - 1;
    let mut s = 0;
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let mut z = 2u128;
    while pow_mod(z, (p128 - 1) / 2, p128) != p128 - 1 {
        z += 1;
    }
    let mut m = s;
    let mut c = pow_mod(z, q, p128);
    let mut t = pow_mod(a128, q, p128);
    let mut r = pow_mod(a128, (q + 1) / 2, p128);
    while t != 1 {
        let mut i = 0;
        let mut tt = t;
        while tt != 1 {
            tt = tt * tt % p128;
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p128);
        m = i;
        c = b * b % p128;
        t = t * c % p128;
        r = r * b % p128;
    }
    Ok(r as u64)
}

/// Roots of `x^2 - t x + n` modulo an odd prime `p`.
pub fn quadratic_roots_mod(t: i128, n: i128, p: u64) -> Vec<u64> {
    let pi = p as i128;
    let disc = (t * t - 4 * n).rem_euclid(pi) as u64;
    let inv2 = inv_mod(2, p as u128).unwrap() as i128;
    match sqrt_mod(disc, p) {
        Ok(s) => {
            let s = s as i128;
            let r1 = ((t + s) * inv2).rem_euclid(pi) as u64;
            let r2 = ((t - s) * inv2).rem_euclid(pi) as u64;
            if r1 == r2 {
                vec![r1]
            } else {
                let mut v = vec![r1, r2];
                v.sort_unstable();
                v
            }
        }
        Err(_) => Vec::new(),
    }
}

/// Primes `<= n` by the sieve of Eratosthenes.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= n {
        if sieve[i] {
            let mut j = i * i;
            while j <= n {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    sieve
        .iter()
        .enumerate()
        .filter(|(_, &b)| b)
        .map(|(i, _)| i as u64)
        .collect()
}

pub fn isqrt(n: u128) -> u128 {
    if n < 2 {
        return n;
    }
    // Newton iteration from an upper bound
    let mut x = 1u128 << (128 - n.leading_zeros()).div_ceil(2);
    loop {
        let y = (x + n / x) / 2;
        if y >= x {
            return x;
        }
        x = y;
    }
}

pub fn isqrt_big(n: &BigUint) -> BigUint {
    if n.is_zero() {
        return BigUint::zero();
    }
    n.sqrt()
}

pub fn is_square_i128(n: i128) -> bool {
    n >= 0 && {
        let r = isqrt(n as u128);
        r * r == n as u128
    }
}

/// Prime powers: returns `(p, k)` when `q = p^k` with `k >= 1`.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let fac = factorize(q as i128).ok()?;
    if fac.factors.len() == 1 {
        Some((fac.factors[0].0 as u64, fac.factors[0].1))
    } else {
        None
    }
}

/// Multiplicative order of `a` mod `m` (a coprime to m).
pub fn mult_order(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(1);
    }
    if gcd_u128(a as u128, m as u128) != 1 {
        return None;
    }
    let mut x = a % m;
    let mut k = 1;
    while x != 1 {
        x = ((x as u128 * a as u128) % m as u128) as u64;
        k += 1;
    }
    Some(k)
}

pub fn lcm_u64(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        return 0;
    }
    a / (gcd_u128(a as u128, b as u128) as u64) * b
}

pub fn big_one() -> BigUint {
    BigUint::one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factor_examples() {
        let f = factorize(96768).unwrap();
        assert_eq!(f.factors, vec![(2, 9), (3, 3), (7, 1)]);
        let f = factorize(-1).unwrap();
        assert_eq!((f.sign, f.factors.len()), (-1, 0));
        assert_eq!(factorize(147).unwrap().factors, vec![(3, 1), (7, 2)]);
        assert_eq!(factorize(0), Err(ArithError::Zero));
        let big: i128 = 1_000_000_007 * 998_244_353;
        assert_eq!(factorize(big).unwrap().reconstruct(), big);
    }

    #[test]
    fn powerfree_examples() {
        assert_eq!(powerfree_part(48, 4).unwrap(), (3, 2));
        assert_eq!(powerfree_part(-1, 6).unwrap(), (-1, 1));
        assert_eq!(powerfree_part(512, 3).unwrap(), (1, 8));
        assert_eq!(powerfree_part(5, 5), Err(ArithError::BadExponent(5)));
    }

    #[test]
    fn kronecker_examples() {
        assert_eq!(kronecker(-4, 5).unwrap(), 1);
        assert_eq!(kronecker(-3, 7).unwrap(), 1);
        for a in -20..20 {
            assert_eq!(kronecker(a, 1).unwrap(), 1);
        }
        assert_eq!(kronecker(5, 2).unwrap(), -1);
        assert_eq!(kronecker(-7, 2).unwrap(), 1);
        assert_eq!(kronecker(2, 0), Err(ArithError::KroneckerZero));
    }

    #[test]
    fn square_classes() {
        assert_eq!(square_class_2adic(-7).unwrap(), SqClass2::S);
        assert_eq!(square_class_2adic(1).unwrap(), SqClass2::S);
        assert_eq!(square_class_2adic(-3).unwrap(), SqClass2::Ns5);
        assert!(square_class_2adic(4).is_err());
    }

    #[test]
    fn sqrt_mod_small() {
        for p in primes_up_to(200).into_iter().skip(1) {
            for a in 1..p {
                if let Ok(r) = sqrt_mod(a, p) {
                    assert_eq!(r * r % p, a);
                }
            }
        }
    }
}
