//! Field contexts. Elements carry no field data; every operation goes through
//! a context value, so the same polynomial code runs over Q, Q(sqrt m) and F_p.

use core::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith;

/// Commutative ring with identity.
pub trait Ring {
    type Elem: Clone + PartialEq + Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_int(&self, n: i64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    fn scale(&self, a: &Self::Elem, n: i64) -> Self::Elem {
        self.mul(a, &self.from_int(n))
    }
}

pub trait Field: Ring {
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }
}

/// The rational numbers.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Rationals;

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl Ring for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn from_int(&self, n: i64) -> BigRational {
        int(n)
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
}

impl Field for Rationals {
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        (!a.is_zero()).then(|| a.recip())
    }
}

/// The prime field F_p with p < 2^62.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    pub p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Self {
        debug_assert!(arith::is_prime(p as u128));
        PrimeField { p }
    }

    pub fn reduce_int(&self, n: &BigInt) -> u64 {
        let p = BigInt::from(self.p);
        let r = ((n % &p) + &p) % &p;
        r.to_u64().unwrap()
    }

    /// Reduction of a rational whose denominator is prime to p.
    pub fn reduce_rat(&self, q: &BigRational) -> Option<u64> {
        let d = self.reduce_int(q.denom());
        let di = self.inv(&d)?;
        Some(self.mul(&self.reduce_int(q.numer()), &di))
    }

    pub fn legendre(&self, a: u64) -> i8 {
        if a % self.p == 0 {
            0
        } else if arith::pow_mod(a as u128, ((self.p - 1) / 2) as u128, self.p as u128) == 1 {
            1
        } else {
            -1
        }
    }

    /// Symmetric representative in (-p/2, p/2].
    pub fn signed(&self, a: u64) -> i64 {
        if a > self.p / 2 {
            a as i64 - self.p as i64
        } else {
            a as i64
        }
    }
}

impl Ring for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn from_int(&self, n: i64) -> u64 {
        n.rem_euclid(self.p as i64) as u64
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.p as u128) as u64
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
}

impl Field for PrimeField {
    fn inv(&self, a: &u64) -> Option<u64> {
        arith::inv_mod(*a as i128, self.p as u128).map(|x| x as u64)
    }
}

/// The ring Z/nZ with a big modulus, used for p-adic lifting.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZmodN {
    pub n: BigInt,
}

impl ZmodN {
    pub fn new(n: BigInt) -> Self {
        ZmodN { n }
    }

    pub fn reduce(&self, a: &BigInt) -> BigInt {
        a.mod_floor(&self.n)
    }

    /// Reduction of a rational whose denominator is a unit mod n.
    pub fn reduce_rat(&self, q: &BigRational) -> Option<BigInt> {
        let d = self.inv(&self.reduce(q.denom()))?;
        Some(self.mul(&self.reduce(q.numer()), &d))
    }

    /// Symmetric representative in (-n/2, n/2].
    pub fn signed(&self, a: &BigInt) -> BigInt {
        let a = self.reduce(a);
        if &a * 2 > self.n {
            a - &self.n
        } else {
            a
        }
    }
}

impl Ring for ZmodN {
    type Elem = BigInt;

    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn one(&self) -> BigInt {
        self.reduce(&BigInt::one())
    }
    fn from_int(&self, n: i64) -> BigInt {
        self.reduce(&BigInt::from(n))
    }
    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        let s = a + b;
        if s >= self.n {
            s - &self.n
        } else {
            s
        }
    }
    fn sub(&self, a: &BigInt, b: &BigInt) -> BigInt {
        let s = a - b;
        if s.is_negative() {
            s + &self.n
        } else {
            s
        }
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        (a * b) % &self.n
    }
    fn neg(&self, a: &BigInt) -> BigInt {
        if a.is_zero() {
            BigInt::zero()
        } else {
            &self.n - a
        }
    }
    fn is_zero(&self, a: &BigInt) -> bool {
        a.is_zero()
    }
}

impl Field for ZmodN {
    /// Inverse of a unit; `None` for non-units.
    fn inv(&self, a: &BigInt) -> Option<BigInt> {
        let e = a.extended_gcd(&self.n);
        e.gcd.is_one().then(|| self.reduce(&e.x))
    }
}

/// Nearest integer to a rational, rounding halves away from zero.
pub fn round_rat(q: &BigRational) -> BigInt {
    let two = BigInt::from(2);
    let n = q.numer() * &two + q.denom() * q.numer().signum();
    n / (q.denom() * two)
}

/// `true` if the rational is the square of a rational.
pub fn is_rational_square(q: &BigRational) -> bool {
    if q.is_negative() {
        return false;
    }
    let is_sq = |n: &BigInt| {
        let u = n.magnitude();
        let r = arith::isqrt_big(u);
        &(&r * &r) == u
    };
    is_sq(q.numer()) && is_sq(q.denom())
}

/// Rational square root, if it exists.
pub fn rational_sqrt(q: &BigRational) -> Option<BigRational> {
    if !is_rational_square(q) {
        return None;
    }
    let n = BigInt::from(arith::isqrt_big(q.numer().magnitude()));
    let d = BigInt::from(arith::isqrt_big(q.denom().magnitude()));
    Some(BigRational::new(n, d))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_ops() {
        let f = PrimeField::new(7);
        assert_eq!(f.mul(&3, &5), 1);
        assert_eq!(f.inv(&3), Some(5));
        assert_eq!(f.pow(&3, 6), 1);
        assert_eq!(f.legendre(2), 1);
        assert_eq!(f.legendre(3), -1);
        assert_eq!(f.reduce_rat(&rat(1, 2)), Some(4));
        assert_eq!(f.signed(6), -1);
    }

    #[test]
    fn rational_helpers() {
        assert_eq!(round_rat(&rat(7, 2)), BigInt::from(4));
        assert_eq!(round_rat(&rat(-7, 2)), BigInt::from(-4));
        assert_eq!(round_rat(&rat(-5, 3)), BigInt::from(-2));
        assert!(is_rational_square(&rat(9, 4)));
        assert!(!is_rational_square(&rat(-9, 4)));
        assert!(!is_rational_square(&rat(2, 1)));
        assert_eq!(rational_sqrt(&rat(49, 25)), Some(rat(7, 5)));
    }
}
