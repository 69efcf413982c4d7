//! Dense univariate polynomials over a [`Ring`], stored little-endian with no
//! trailing zeros. The zero polynomial is the empty vector.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::field::{Field, PrimeField, Ring};

pub type Poly<E> = Vec<E>;

pub fn trim<R: Ring>(r: &R, mut p: Poly<R::Elem>) -> Poly<R::Elem> {
    while p.last().is_some_and(|c| r.is_zero(c)) {
        p.pop();
    }
    p
}

/// Degree, with `None` for the zero polynomial.
pub fn degree<E>(p: &[E]) -> Option<usize> {
    p.len().checked_sub(1)
}

pub fn constant<R: Ring>(r: &R, c: R::Elem) -> Poly<R::Elem> {
    trim(r, vec![c])
}

/// The monomial `c x^k`.
pub fn monomial<R: Ring>(r: &R, c: R::Elem, k: usize) -> Poly<R::Elem> {
    let mut v = vec![r.zero(); k + 1];
    v[k] = c;
    trim(r, v)
}

pub fn x<R: Ring>(r: &R) -> Poly<R::Elem> {
    vec![r.zero(), r.one()]
}

pub fn from_ints<R: Ring>(r: &R, coeffs: &[i64]) -> Poly<R::Elem> {
    trim(r, coeffs.iter().map(|&c| r.from_int(c)).collect())
}

pub fn add<R: Ring>(r: &R, a: &[R::Elem], b: &[R::Elem]) -> Poly<R::Elem> {
    let n = a.len().max(b.len());
    let z = r.zero();
    let v = (0..n).map(|i| r.add(a.get(i).unwrap_or(&z), b.get(i).unwrap_or(&z))).collect();
    trim(r, v)
}

pub fn sub<R: Ring>(r: &R, a: &[R::Elem], b: &[R::Elem]) -> Poly<R::Elem> {
    let n = a.len().max(b.len());
    let z = r.zero();
    let v = (0..n).map(|i| r.sub(a.get(i).unwrap_or(&z), b.get(i).unwrap_or(&z))).collect();
    trim(r, v)
}

pub fn neg<R: Ring>(r: &R, a: &[R::Elem]) -> Poly<R::Elem> {
    a.iter().map(|c| r.neg(c)).collect()
}

pub fn scale<R: Ring>(r: &R, a: &[R::Elem], c: &R::Elem) -> Poly<R::Elem> {
    trim(r, a.iter().map(|x| r.mul(x, c)).collect())
}

pub fn mul<R: Ring>(r: &R, a: &[R::Elem], b: &[R::Elem]) -> Poly<R::Elem> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![r.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if r.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = r.add(&out[i + j], &r.mul(x, y));
        }
    }
    trim(r, out)
}

pub fn pow<R: Ring>(r: &R, a: &[R::Elem], mut e: u32) -> Poly<R::Elem> {
    let mut acc = constant(r, r.one());
    let mut base = a.to_vec();
    while e > 0 {
        if e & 1 == 1 {
            acc = mul(r, &acc, &base);
        }
        e >>= 1;
        if e > 0 {
            base = mul(r, &base, &base);
        }
    }
    acc
}

pub fn eval<R: Ring>(r: &R, p: &[R::Elem], t: &R::Elem) -> R::Elem {
    p.iter().rev().fold(r.zero(), |acc, c| r.add(&r.mul(&acc, t), c))
}

pub fn derivative<R: Ring>(r: &R, p: &[R::Elem]) -> Poly<R::Elem> {
    let v = p.iter().enumerate().skip(1).map(|(i, c)| r.scale(c, i as i64)).collect();
    trim(r, v)
}

/// `p(q(x))`.
pub fn compose<R: Ring>(r: &R, p: &[R::Elem], q: &[R::Elem]) -> Poly<R::Elem> {
    p.iter().rev().fold(Vec::new(), |acc, c| add(r, &mul(r, &acc, q), &constant(r, c.clone())))
}

/// Quotient and remainder. The divisor's leading coefficient must be a unit.
pub fn divrem<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Option<(Poly<F::Elem>, Poly<F::Elem>)> {
    let db = degree(b)?;
    let lead_inv = f.inv(&b[db])?;
    let mut rem = a.to_vec();
    if rem.len() <= db {
        return Some((Vec::new(), rem));
    }
    let mut q = vec![f.zero(); rem.len() - db];
    for i in (db..rem.len()).rev() {
        let c = f.mul(&rem[i], &lead_inv);
        if f.is_zero(&c) {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            let k = i - db + j;
            rem[k] = f.sub(&rem[k], &f.mul(&c, bj));
        }
        q[i - db] = c;
    }
    rem.truncate(db);
    Some((trim(f, q), trim(f, rem)))
}

pub fn rem<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Poly<F::Elem> {
    divrem(f, a, b).expect("divisor with unit leading coefficient").1
}

/// Exact quotient `a / b`, or `None` if the remainder is nonzero.
pub fn div_exact<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Option<Poly<F::Elem>> {
    let (q, r) = divrem(f, a, b)?;
    r.is_empty().then_some(q)
}

pub fn monic<F: Field>(f: &F, a: &[F::Elem]) -> Poly<F::Elem> {
    match a.last() {
        None => Vec::new(),
        Some(l) => {
            let li = f.inv(l).expect("nonzero leading coefficient");
            scale(f, a, &li)
        }
    }
}

/// Monic greatest common divisor.
pub fn gcd<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Poly<F::Elem> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    while !b.is_empty() {
        let r = rem(f, &a, &b);
        a = b;
        b = r;
    }
    monic(f, &a)
}

/// `base^e mod m` for a big exponent given as little-endian 64-bit limbs.
pub fn powmod<F: Field>(f: &F, base: &[F::Elem], e: &num_bigint::BigUint, m: &[F::Elem]) -> Poly<F::Elem> {
    let mut acc = rem(f, &constant(f, f.one()), m);
    let b = rem(f, base, m);
    for i in (0..e.bits()).rev() {
        acc = rem(f, &mul(f, &acc, &acc), m);
        if e.bit(i) {
            acc = rem(f, &mul(f, &acc, &b), m);
        }
    }
    acc
}

/// Polynomials over a ring, as a ring.
#[derive(Clone, Debug)]
pub struct PolyRing<R: Ring> {
    pub base: R,
}

impl<R: Ring> Ring for PolyRing<R> {
    type Elem = Poly<R::Elem>;

    fn zero(&self) -> Self::Elem {
        Vec::new()
    }
    fn one(&self) -> Self::Elem {
        constant(&self.base, self.base.one())
    }
    fn from_int(&self, n: i64) -> Self::Elem {
        constant(&self.base, self.base.from_int(n))
    }
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        add(&self.base, a, b)
    }
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        sub(&self.base, a, b)
    }
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        mul(&self.base, a, b)
    }
    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        neg(&self.base, a)
    }
    fn is_zero(&self, a: &Self::Elem) -> bool {
        a.is_empty()
    }
}

/// The quotient ring `F[x]/(m)`.
#[derive(Clone, Debug)]
pub struct QuotientRing<F: Field> {
    pub base: F,
    pub modulus: Poly<F::Elem>,
}

impl<F: Field> QuotientRing<F> {
    pub fn new(base: F, modulus: Poly<F::Elem>) -> Self {
        QuotientRing { base, modulus }
    }

    pub fn reduce(&self, a: &[F::Elem]) -> Poly<F::Elem> {
        rem(&self.base, a, &self.modulus)
    }

    /// The class of `x`.
    pub fn gen(&self) -> Poly<F::Elem> {
        self.reduce(&x(&self.base))
    }
}

impl<F: Field> Ring for QuotientRing<F> {
    type Elem = Poly<F::Elem>;

    fn zero(&self) -> Self::Elem {
        Vec::new()
    }
    fn one(&self) -> Self::Elem {
        self.reduce(&constant(&self.base, self.base.one()))
    }
    fn from_int(&self, n: i64) -> Self::Elem {
        self.reduce(&constant(&self.base, self.base.from_int(n)))
    }
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        add(&self.base, a, b)
    }
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        sub(&self.base, a, b)
    }
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.reduce(&mul(&self.base, a, b))
    }
    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        neg(&self.base, a)
    }
    fn is_zero(&self, a: &Self::Elem) -> bool {
        a.is_empty()
    }
}

/// Inverse of `a` modulo `m`, if they are coprime.
pub fn inverse_mod<F: Field>(f: &F, a: &[F::Elem], m: &[F::Elem]) -> Option<Poly<F::Elem>> {
    // invariant: s_i * a = r_i mod m
    let (mut r0, mut r1) = (m.to_vec(), rem(f, a, m));
    let (mut s0, mut s1): (Poly<F::Elem>, Poly<F::Elem>) = (Vec::new(), constant(f, f.one()));
    while !r1.is_empty() {
        let (q, r) = divrem(f, &r0, &r1)?;
        let s = sub(f, &s0, &mul(f, &q, &s1));
        r0 = core::mem::replace(&mut r1, r);
        s0 = core::mem::replace(&mut s1, s);
    }
    if degree(&r0) != Some(0) {
        return None;
    }
    let c = f.inv(&r0[0])?;
    Some(rem(f, &scale(f, &s0, &c), m))
}

/// Inverses exist exactly when the modulus is irreducible (or the element is a unit).
impl<F: Field> Field for QuotientRing<F> {
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem> {
        inverse_mod(&self.base, a, &self.modulus)
    }
}

// ---------------------------------------------------------------------------
// Finite fields

/// Small deterministic generator for the randomized splitting steps.
struct SplitMix(u64);

impl SplitMix {
    fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }
}

pub fn is_squarefree_mod_p(fp: &PrimeField, f: &[u64]) -> bool {
    let d = derivative(fp, f);
    !d.is_empty() && degree(&gcd(fp, f, &d)) == Some(0)
}

/// Distinct-degree factorization of a monic squarefree polynomial:
/// pairs `(d, g)` with `g` the product of all irreducible factors of degree `d`.
pub fn distinct_degree(fp: &PrimeField, f: &[u64]) -> Vec<(usize, Poly<u64>)> {
    let mut out = Vec::new();
    let mut f = monic(fp, f);
    let xp = x(fp);
    let p = num_bigint::BigUint::from(fp.p);
    let mut h = xp.clone();
    let mut d = 0;
    while degree(&f).unwrap_or(0) >= 2 * (d + 1) {
        d += 1;
        h = powmod(fp, &h, &p, &f);
        let g = gcd(fp, &sub(fp, &h, &xp), &f);
        if degree(&g).unwrap_or(0) > 0 {
            f = div_exact(fp, &f, &g).expect("gcd divides");
            h = rem(fp, &h, &f);
            out.push((d, g));
        }
    }
    if let Some(df) = degree(&f) {
        if df > 0 {
            out.push((df, f));
        }
    }
    out
}

/// Splits a product of distinct irreducible factors of degree `d` (odd p).
pub fn equal_degree(fp: &PrimeField, g: &[u64], d: usize) -> Vec<Poly<u64>> {
    let n = degree(g).unwrap_or(0);
    if n == d {
        return vec![monic(fp, g)];
    }
    let mut rng = SplitMix(0x5eed ^ fp.p ^ ((n as u64) << 32));
    let e = (num_bigint::BigUint::from(fp.p).pow(d as u32) - 1u32) / 2u32;
    loop {
        let a: Poly<u64> = trim(fp, (0..n).map(|_| rng.next() % fp.p).collect());
        if degree(&a).unwrap_or(0) == 0 {
            continue;
        }
        let b = powmod(fp, &a, &e, g);
        let h = gcd(fp, &sub(fp, &b, &constant(fp, 1)), g);
        let dh = degree(&h).unwrap_or(0);
        if dh > 0 && dh < n {
            let mut out = equal_degree(fp, &h, d);
            out.extend(equal_degree(fp, &div_exact(fp, g, &h).unwrap(), d));
            return out;
        }
    }
}

/// Monic irreducible factors of a squarefree polynomial over F_p, p odd.
pub fn factor_squarefree(fp: &PrimeField, f: &[u64]) -> Vec<Poly<u64>> {
    let mut out = Vec::new();
    for (d, g) in distinct_degree(fp, f) {
        out.extend(equal_degree(fp, &g, d));
    }
    out.sort_by_key(|g| (g.len(), g.clone()));
    out
}

/// Degrees of the irreducible factors of a squarefree polynomial, sorted.
pub fn degree_pattern(fp: &PrimeField, f: &[u64]) -> Vec<usize> {
    let mut v = Vec::new();
    for (d, g) in distinct_degree(fp, f) {
        let k = degree(&g).unwrap() / d;
        v.extend(core::iter::repeat_n(d, k));
    }
    v.sort_unstable();
    v
}

/// Roots in F_p of a nonzero polynomial, sorted.
pub fn roots_mod_p(fp: &PrimeField, f: &[u64]) -> Vec<u64> {
    let f = monic(fp, f);
    if degree(&f).unwrap_or(0) == 0 {
        return Vec::new();
    }
    let xp = powmod(fp, &x(fp), &num_bigint::BigUint::from(fp.p), &f);
    let g = gcd(fp, &sub(fp, &xp, &x(fp)), &f);
    if degree(&g).unwrap_or(0) == 0 {
        return Vec::new();
    }
    let mut r: Vec<u64> = if fp.p == 2 {
        (0..2).filter(|&t| eval(fp, &g, &t) == 0).collect()
    } else {
        equal_degree(fp, &g, 1).iter().map(|h| fp.neg(&h[0])).collect()
    };
    r.sort_unstable();
    r
}

// ---------------------------------------------------------------------------
// Integer and rational polynomials

/// Reduction of a rational polynomial mod p; `None` if a denominator vanishes.
pub fn reduce_rat_poly(fp: &PrimeField, f: &[BigRational]) -> Option<Poly<u64>> {
    let v = f.iter().map(|c| fp.reduce_rat(c)).collect::<Option<Vec<u64>>>()?;
    Some(trim(fp, v))
}

/// Clears denominators and content: the primitive integer polynomial with
/// positive leading coefficient proportional to `f`.
pub fn primitive_part(f: &[BigRational]) -> Poly<BigInt> {
    use num_integer::Integer;
    if f.is_empty() {
        return Vec::new();
    }
    let l = f.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let mut v: Vec<BigInt> = f.iter().map(|c| (c * BigRational::from_integer(l.clone())).to_integer()).collect();
    let g = v.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    let sign = if v.last().unwrap().is_negative() { -BigInt::one() } else { BigInt::one() };
    for c in v.iter_mut() {
        *c = &*c / &g * &sign;
    }
    v
}

pub fn to_rat_poly(f: &[BigInt]) -> Poly<BigRational> {
    f.iter().map(|c| BigRational::from_integer(c.clone())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{int, Rationals};

    #[test]
    fn arithmetic_over_q() {
        let q = Rationals;
        let a = from_ints(&q, &[-1, 0, 1]);
        let b = from_ints(&q, &[1, 1]);
        let (qq, r) = divrem(&q, &a, &b).unwrap();
        assert_eq!(qq, from_ints(&q, &[-1, 1]));
        assert!(r.is_empty());
        assert_eq!(gcd(&q, &a, &mul(&q, &b, &b)), b);
        assert_eq!(eval(&q, &a, &int(3)), int(8));
        assert_eq!(derivative(&q, &a), from_ints(&q, &[0, 2]));
        assert_eq!(compose(&q, &a, &b), from_ints(&q, &[0, 2, 1]));
    }

    #[test]
    fn factoring_mod_p() {
        let fp = PrimeField::new(7);
        // (x^2+1)(x-2)(x-3)(x^3+x+1) mod 7
        let f = mul(&fp, &mul(&fp, &from_ints(&fp, &[1, 0, 1]), &from_ints(&fp, &[6, -5, 1])), &from_ints(&fp, &[1, 1, 0, 1]));
        assert!(is_squarefree_mod_p(&fp, &f));
        assert_eq!(degree_pattern(&fp, &f), vec![1, 1, 2, 3]);
        assert_eq!(roots_mod_p(&fp, &f), vec![2, 3]);
        let fs = factor_squarefree(&fp, &f);
        assert_eq!(fs.len(), 4);
        let prod = fs.iter().fold(constant(&fp, 1), |acc, g| mul(&fp, &acc, g));
        assert_eq!(prod, f);
    }

    #[test]
    fn quotient_ring_arithmetic() {
        let fp = PrimeField::new(5);
        let qr = QuotientRing::new(fp, from_ints(&fp, &[2, 0, 1]));
        let t = qr.gen();
        // x^2 = -2 = 3
        assert_eq!(qr.mul(&t, &t), vec![3]);
        assert_eq!(qr.pow(&t, 4), vec![4]);
    }
}
