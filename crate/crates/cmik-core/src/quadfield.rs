//! Real quadratic fields Q(sqrt m) with ring of integers Z[a], and the base
//! field type shared by curve models (Q or such a field).

use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::arith;
use crate::field::{self, int, Field, PrimeField, Rationals, Ring};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QuadError {
    #[error("{0} is not a square-free integer greater than 1")]
    BadRadicand(i64),
    #[error("no generator of norm {0} found within the search bound")]
    SearchExhausted(u64),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("zero element")]
    Zero,
}

/// Q(sqrt m) for square-free m > 1, with `a^2 = tau a + nu`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct QuadField {
    m: i64,
    tau: i64,
    nu: i64,
}

/// Element `x + y a`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadNum {
    pub x: BigRational,
    pub y: BigRational,
}

impl QuadNum {
    pub fn new(x: BigRational, y: BigRational) -> Self {
        QuadNum { x, y }
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        QuadNum { x: int(x), y: int(y) }
    }

    pub fn rational(x: BigRational) -> Self {
        QuadNum { x, y: BigRational::zero() }
    }

    pub fn is_rational(&self) -> bool {
        self.y.is_zero()
    }

    pub fn is_integral_coords(&self) -> bool {
        self.x.is_integer() && self.y.is_integer()
    }

    /// Least common denominator of both coordinates.
    pub fn denominator(&self) -> BigInt {
        self.x.denom().lcm(self.y.denom())
    }
}

fn fmt_rat(q: &BigRational) -> String {
    if q.is_integer() {
        alloc::format!("{}", q.numer())
    } else {
        alloc::format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for QuadNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.y.is_zero() {
            return write!(f, "{}", fmt_rat(&self.x));
        }
        let y = if self.y.is_one() {
            String::from("a")
        } else if (-&self.y).is_one() {
            String::from("-a")
        } else {
            alloc::format!("{}*a", fmt_rat(&self.y))
        };
        if self.x.is_zero() {
            write!(f, "{y}")
        } else if self.y.is_negative() {
            write!(f, "{}{}", fmt_rat(&self.x), y)
        } else {
            write!(f, "{}+{}", fmt_rat(&self.x), y)
        }
    }
}

/// How a rational prime decomposes in the ring of integers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PrimeSplit {
    /// Generators of the two conjugate primes above p.
    Split(QuadNum, QuadNum),
    Inert,
    Ramified(QuadNum),
}

impl PrimeSplit {
    /// One generator per prime ideal above p (p itself when inert).
    pub fn ideal_generators(&self, p: u64) -> Vec<QuadNum> {
        match self {
            PrimeSplit::Split(a, b) => alloc::vec![a.clone(), b.clone()],
            PrimeSplit::Inert => alloc::vec![QuadNum::from_ints(p as i64, 0)],
            PrimeSplit::Ramified(a) => alloc::vec![a.clone()],
        }
    }
}

/// Sign of `u + v sqrt(d)` for rationals u, v and a non-square d > 0.
fn sign_surd(u: &BigRational, v: &BigRational, d: i64) -> Ordering {
    let su = u.cmp(&BigRational::zero());
    let sv = v.cmp(&BigRational::zero());
    if sv == Ordering::Equal {
        return su;
    }
    if su == Ordering::Equal || su == sv {
        return sv;
    }
    // opposite signs: compare u^2 with v^2 d
    let lhs = u * u;
    let rhs = v * v * int(d);
    match lhs.cmp(&rhs) {
        Ordering::Greater => su,
        _ => sv,
    }
}

impl QuadField {
    pub fn new(m: i64) -> Result<Self, QuadError> {
        if m <= 1 {
            return Err(QuadError::BadRadicand(m));
        }
        let (core, _) = arith::powerfree_part(m as i128, 2).map_err(|_| QuadError::BadRadicand(m))?;
        if core != m as i128 {
            return Err(QuadError::BadRadicand(m));
        }
        Ok(if m % 4 == 1 {
            QuadField { m, tau: 1, nu: (m - 1) / 4 }
        } else {
            QuadField { m, tau: 0, nu: m }
        })
    }

    pub fn m(&self) -> i64 {
        self.m
    }

    /// Coefficients `(tau, nu)` with `a^2 = tau a + nu`.
    pub fn relation(&self) -> (i64, i64) {
        (self.tau, self.nu)
    }

    pub fn disc(&self) -> i64 {
        if self.tau == 1 {
            self.m
        } else {
            4 * self.m
        }
    }

    /// Minimal polynomial of the ring generator, as text.
    pub fn minpoly(&self) -> String {
        if self.tau == 1 {
            alloc::format!("x^2-x-{}", self.nu)
        } else {
            alloc::format!("x^2-{}", self.m)
        }
    }

    pub fn gen(&self) -> QuadNum {
        QuadNum::from_ints(0, 1)
    }

    pub fn norm(&self, z: &QuadNum) -> BigRational {
        &z.x * &z.x + &z.x * &z.y * int(self.tau) - &z.y * &z.y * int(self.nu)
    }

    pub fn trace(&self, z: &QuadNum) -> BigRational {
        &z.x * int(2) + &z.y * int(self.tau)
    }

    pub fn conjugate(&self, z: &QuadNum) -> QuadNum {
        QuadNum { x: &z.x + &z.y * int(self.tau), y: -&z.y }
    }

    /// Sign under the embedding sending a to its larger real root.
    pub fn sign(&self, z: &QuadNum) -> Ordering {
        // a = (tau + sqrt(tau^2 + 4 nu)) / 2
        let d = self.tau * self.tau + 4 * self.nu;
        let u = &z.x + &z.y * field::rat(self.tau, 2);
        let v = &z.y * field::rat(1, 2);
        sign_surd(&u, &v, d)
    }

    /// Compares |z| and |w| under the positive embedding.
    fn abs_cmp(&self, z: &QuadNum, w: &QuadNum) -> Ordering {
        let za = if self.sign(z) == Ordering::Less { self.neg(z) } else { z.clone() };
        let wa = if self.sign(w) == Ordering::Less { self.neg(w) } else { w.clone() };
        self.sign(&self.sub(&za, &wa))
    }

    /// Fundamental unit `u > 1` from the continued fraction of `a`.
    pub fn fundamental_unit(&self) -> QuadNum {
        // a = (P + sqrt D) / Q with Q | D - P^2
        let d = (self.tau * self.tau + 4 * self.nu) as i128;
        let r = arith::isqrt(d as u128) as i128;
        let (mut pp, mut qq) = (self.tau as i128, 2i128);
        // convergents h/k, seeded with h_{-2}/k_{-2} = 0/1 and h_{-1}/k_{-1} = 1/0
        let (mut h_prev, mut h) = (BigInt::zero(), BigInt::one());
        let (mut k_prev, mut k) = (BigInt::one(), BigInt::zero());
        loop {
            let q_abs = qq.abs();
            let fl = (pp + r).div_euclid(q_abs);
            let coef = if qq > 0 { fl } else { -fl - 1 };
            let h_new = BigInt::from(coef) * &h + &h_prev;
            let k_new = BigInt::from(coef) * &k + &k_prev;
            h_prev = core::mem::replace(&mut h, h_new);
            k_prev = core::mem::replace(&mut k, k_new);
            let cand = QuadNum::new(BigRational::from_integer(h.clone()), BigRational::from_integer(-k.clone()));
            if self.norm(&cand).abs().is_one() {
                let inv = self.inv(&cand).unwrap();
                let u = if self.abs_cmp(&cand, &self.one()) == Ordering::Less { inv } else { cand };
                return if self.sign(&u) == Ordering::Less { self.neg(&u) } else { u };
            }
            pp = coef * qq - pp;
            qq = (d - pp * pp) / qq;
        }
    }

    pub fn kronecker(&self, p: u64) -> i8 {
        arith::kronecker(self.disc() as i128, p as i128).expect("nonzero modulus")
    }

    /// Decomposition of p, with generators of the primes above it.
    pub fn split_prime(&self, p: u64) -> Result<PrimeSplit, QuadError> {
        if !arith::is_prime(p as u128) {
            return Err(QuadError::NotPrime(p));
        }
        let kr = self.kronecker(p);
        if kr == -1 {
            return Ok(PrimeSplit::Inert);
        }
        let pi = self.small_element_of_norm(p)?;
        if kr == 0 {
            Ok(PrimeSplit::Ramified(pi))
        } else {
            let conj = self.conjugate(&pi);
            let conj = if self.sign(&conj) == Ordering::Less { self.neg(&conj) } else { conj };
            Ok(PrimeSplit::Split(pi, conj))
        }
    }

    /// Element of norm +-p with the smallest coordinate height, made positive.
    fn small_element_of_norm(&self, p: u64) -> Result<QuadNum, QuadError> {
        let bound = 10 * (arith::isqrt(p as u128) as i64 + 1);
        let target = p as i128;
        for h in 1..=bound {
            for y in 0..=h {
                for x in -h..=h {
                    if x.abs() != h && y != h {
                        continue;
                    }
                    let (xi, yi) = (x as i128, y as i128);
                    let n = xi * xi + (self.tau as i128) * xi * yi - (self.nu as i128) * yi * yi;
                    if n.abs() == target {
                        let z = QuadNum::from_ints(x, y);
                        return Ok(if self.sign(&z) == Ordering::Less { self.neg(&z) } else { z });
                    }
                }
            }
        }
        Err(QuadError::SearchExhausted(p))
    }

    /// Square root in the field, if one exists.
    pub fn sqrt(&self, z: &QuadNum) -> Option<QuadNum> {
        if z.x.is_zero() && z.y.is_zero() {
            return Some(z.clone());
        }
        let nz = self.norm(z);
        let n = field::rational_sqrt(&nz.abs())?;
        for s in [n.clone(), -n] {
            // (Tr w)^2 = Tr z + 2 N(w)
            let t2 = self.trace(z) + &s * int(2);
            let Some(t) = field::rational_sqrt(&t2) else { continue };
            let cand = if t.is_zero() {
                // w = c (2a - tau), w^2 = c^2 (tau^2 + 4 nu)
                let d = int(self.tau * self.tau + 4 * self.nu);
                if !z.y.is_zero() {
                    continue;
                }
                let c = field::rational_sqrt(&(&z.x / &d))?;
                QuadNum::new(-&c * int(self.tau), &c * int(2))
            } else {
                // w^2 - t w + s = 0 and w^2 = z give w = (z + s) / t
                let num = self.add(z, &QuadNum::rational(s.clone()));
                self.mul(&num, &QuadNum::rational(t.recip()))
            };
            if self.mul(&cand, &cand) == *z {
                return Some(cand);
            }
        }
        None
    }

    pub fn is_square(&self, z: &QuadNum) -> bool {
        self.sqrt(z).is_some()
    }

    /// `z / w` is a square.
    pub fn same_square_class(&self, z: &QuadNum, w: &QuadNum) -> bool {
        match self.div(z, w) {
            Some(q) => self.is_square(&q),
            None => false,
        }
    }

    /// The set `{+-u^k0 pi_1^k1 ... pi_n^kn}` with one generator per prime ideal
    /// above the listed rational primes, deduplicated up to squares.
    pub fn twist_candidates(&self, primes: &[u64]) -> Result<Vec<QuadNum>, QuadError> {
        let mut gens = alloc::vec![self.from_int(-1), self.fundamental_unit()];
        for &p in primes {
            gens.extend(self.split_prime(p)?.ideal_generators(p));
        }
        let mut out: Vec<QuadNum> = Vec::new();
        for mask in 0u64..(1 << gens.len()) {
            let mut z = self.one();
            for (i, g) in gens.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    z = self.mul(&z, g);
                }
            }
            if !out.iter().any(|w| self.same_square_class(&z, w)) {
                out.push(z);
            }
        }
        Ok(out)
    }

    /// Images of `a` in F_p (one per prime of degree one above p), p odd.
    pub fn roots_mod(&self, p: u64) -> Vec<u64> {
        arith::quadratic_roots_mod(self.tau as i128, -(self.nu as i128), p)
    }

    /// Image of z in F_p under `a -> r`, if the denominators are prime to p.
    pub fn reduce(&self, z: &QuadNum, fp: &PrimeField, r: u64) -> Option<u64> {
        let x = fp.reduce_rat(&z.x)?;
        let y = fp.reduce_rat(&z.y)?;
        Some(fp.add(&x, &fp.mul(&y, &r)))
    }

    /// Parses "x+y*a" style input with integer or rational coefficients.
    pub fn parse_element(&self, s: &str) -> Option<QuadNum> {
        parse_linear(s)
    }
}

/// Parses a linear expression in `a` such as `-3/2+5*a`, `a-1`, `7`.
pub fn parse_linear(s: &str) -> Option<QuadNum> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return None;
    }
    let mut x = BigRational::zero();
    let mut y = BigRational::zero();
    let mut terms: Vec<String> = Vec::new();
    let mut cur = String::new();
    for (i, ch) in s.chars().enumerate() {
        if (ch == '+' || ch == '-') && i > 0 && !cur.ends_with('/') && !cur.ends_with('*') {
            terms.push(core::mem::take(&mut cur));
        }
        cur.push(ch);
    }
    terms.push(cur);
    for t in terms {
        let (neg, body) = match t.strip_prefix('-') {
            Some(b) => (true, b),
            None => (false, t.strip_prefix('+').unwrap_or(&t)),
        };
        if body.is_empty() {
            return None;
        }
        let (coef, is_a) = if body == "a" {
            (BigRational::one(), true)
        } else if let Some(c) = body.strip_suffix("*a") {
            (parse_rat(c)?, true)
        } else if let Some(c) = body.strip_suffix('a') {
            (parse_rat(c)?, true)
        } else {
            (parse_rat(body)?, false)
        };
        let coef = if neg { -coef } else { coef };
        if is_a {
            y += coef;
        } else {
            x += coef;
        }
    }
    Some(QuadNum { x, y })
}

pub fn parse_rat(s: &str) -> Option<BigRational> {
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.parse().ok()?;
            let d: BigInt = d.parse().ok()?;
            (!d.is_zero()).then(|| BigRational::new(n, d))
        }
        None => Some(BigRational::from_integer(s.parse().ok()?)),
    }
}

impl Ring for QuadField {
    type Elem = QuadNum;

    fn zero(&self) -> QuadNum {
        QuadNum::from_ints(0, 0)
    }
    fn one(&self) -> QuadNum {
        QuadNum::from_ints(1, 0)
    }
    fn from_int(&self, n: i64) -> QuadNum {
        QuadNum::from_ints(n, 0)
    }
    fn add(&self, a: &QuadNum, b: &QuadNum) -> QuadNum {
        QuadNum { x: &a.x + &b.x, y: &a.y + &b.y }
    }
    fn sub(&self, a: &QuadNum, b: &QuadNum) -> QuadNum {
        QuadNum { x: &a.x - &b.x, y: &a.y - &b.y }
    }
    fn mul(&self, a: &QuadNum, b: &QuadNum) -> QuadNum {
        let yy = &a.y * &b.y;
        QuadNum {
            x: &a.x * &b.x + &yy * int(self.nu),
            y: &a.x * &b.y + &a.y * &b.x + yy * int(self.tau),
        }
    }
    fn neg(&self, a: &QuadNum) -> QuadNum {
        QuadNum { x: -&a.x, y: -&a.y }
    }
    fn is_zero(&self, a: &QuadNum) -> bool {
        a.x.is_zero() && a.y.is_zero()
    }
}

impl Field for QuadField {
    fn inv(&self, a: &QuadNum) -> Option<QuadNum> {
        let n = self.norm(a);
        if n.is_zero() {
            return None;
        }
        let c = self.conjugate(a);
        Some(QuadNum { x: c.x / &n, y: c.y / n })
    }
}

/// Field of definition of a curve model: Q, or a real quadratic field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BaseField {
    Rational,
    Quadratic(QuadField),
}

impl BaseField {
    pub fn quad(&self) -> Option<&QuadField> {
        match self {
            BaseField::Rational => None,
            BaseField::Quadratic(q) => Some(q),
        }
    }

    pub fn m(&self) -> Option<i64> {
        self.quad().map(|q| q.m)
    }

    pub fn conjugate(&self, z: &QuadNum) -> QuadNum {
        match self {
            BaseField::Rational => z.clone(),
            BaseField::Quadratic(q) => q.conjugate(z),
        }
    }

    pub fn norm(&self, z: &QuadNum) -> BigRational {
        match self {
            BaseField::Rational => z.x.clone(),
            BaseField::Quadratic(q) => q.norm(z),
        }
    }

    pub fn is_square(&self, z: &QuadNum) -> bool {
        match self {
            BaseField::Rational => field::is_rational_square(&z.x),
            BaseField::Quadratic(q) => q.is_square(z),
        }
    }

    pub fn same_square_class(&self, z: &QuadNum, w: &QuadNum) -> bool {
        match self.div(z, w) {
            Some(r) => self.is_square(&r),
            None => false,
        }
    }

    /// Reduction maps to F_p: one root per degree-one prime above p (Q gives a single map).
    pub fn residue_maps(&self, p: u64) -> Vec<u64> {
        match self {
            BaseField::Rational => alloc::vec![0],
            BaseField::Quadratic(q) => q.roots_mod(p),
        }
    }

    pub fn reduce(&self, z: &QuadNum, fp: &PrimeField, r: u64) -> Option<u64> {
        match self {
            BaseField::Rational => fp.reduce_rat(&z.x),
            BaseField::Quadratic(q) => q.reduce(z, fp, r),
        }
    }
}

impl Ring for BaseField {
    type Elem = QuadNum;

    fn zero(&self) -> QuadNum {
        QuadNum::from_ints(0, 0)
    }
    fn one(&self) -> QuadNum {
        QuadNum::from_ints(1, 0)
    }
    fn from_int(&self, n: i64) -> QuadNum {
        QuadNum::from_ints(n, 0)
    }
    fn add(&self, a: &QuadNum, b: &QuadNum) -> QuadNum {
        QuadNum { x: &a.x + &b.x, y: &a.y + &b.y }
    }
    fn sub(&self, a: &QuadNum, b: &QuadNum) -> QuadNum {
        QuadNum { x: &a.x - &b.x, y: &a.y - &b.y }
    }
    fn mul(&self, a: &QuadNum, b: &QuadNum) -> QuadNum {
        match self {
            BaseField::Rational => QuadNum::rational(Rationals.mul(&a.x, &b.x)),
            BaseField::Quadratic(q) => q.mul(a, b),
        }
    }
    fn neg(&self, a: &QuadNum) -> QuadNum {
        QuadNum { x: -&a.x, y: -&a.y }
    }
    fn is_zero(&self, a: &QuadNum) -> bool {
        a.x.is_zero() && a.y.is_zero()
    }
}

impl Field for BaseField {
    fn inv(&self, a: &QuadNum) -> Option<QuadNum> {
        match self {
            BaseField::Rational => Rationals.inv(&a.x).map(QuadNum::rational),
            BaseField::Quadratic(q) => q.inv(a),
        }
    }
}

/// Integer coordinates of an integral element, if small enough.
pub fn int_coords(z: &QuadNum) -> Option<(i64, i64)> {
    if !z.is_integral_coords() {
        return None;
    }
    Some((z.x.numer().to_i64()?, z.y.numer().to_i64()?))
}

#[cfg(test)]
mod tests;
