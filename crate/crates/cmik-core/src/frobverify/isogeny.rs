//! Eigenvalue of Frobenius on the kernel of the rational l-isogeny (l odd, l | disc).
//!
//! Ordinary primes: Frobenius lies in the Cartan group, which is `(a b; 0 a)`
//! mod l, so the eigenvalue is `a_p / 2`. Supersingular primes: the two
//! Frobenius-stable lines have eigenvalues `r` and `-r` with `r^2 = -p`. The
//! kernel line is the one whose quotient curve has the j-invariant of the
//! isogenous CM curve (the order of conductor f/l when l | f, otherwise the
//! class of the ramified prime above l acting on j).

use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;

use super::FrobError;
use crate::arith;
use crate::ecmodel::{self, Curve, RegistryEntry};
use crate::field::{Field, PrimeField, Ring};
use crate::hilbert::hilbert_class_polynomial;
use crate::modgroup::CMOrder;
use crate::poly::{self, Poly, QuotientRing};
use crate::quadfield::{BaseField, QuadNum};

/// Largest extension degree used to find kernel points.
pub const MAX_EXTENSION_DEGREE: u64 = 24;

/// j-invariant of the target of the rational l-isogeny from the curve with
/// invariant `j` and CM order `order`, as an element of the base field.
pub fn isogenous_j(order: &CMOrder, ell: u64, j: &QuadNum, field: &BaseField) -> Result<QuadNum, FrobError> {
    let f = order.conductor();
    if f % ell == 0 {
        let up = CMOrder::new(order.disc_k(), f / ell).map_err(|_| FrobError::NotBorel(ell))?;
        let (h, _) = hilbert_class_polynomial(up.disc()).map_err(|_| FrobError::NotBorel(ell))?;
        if h.len() != 2 {
            return Err(FrobError::Unsupported("isogenous order with class number above 1"));
        }
        let c = num_rational::BigRational::from_integer(-h[0].clone());
        return Ok(QuadNum::rational(c));
    }
    if order.disc_k() % ell as i64 != 0 {
        return Err(FrobError::NotBorel(ell));
    }
    Ok(if ramified_prime_is_principal(order.disc(), ell) { j.clone() } else { field.conjugate(j) })
}

/// Whether `u^2 - disc v^2 = 4 l` has a solution (the prime above l is principal).
fn ramified_prime_is_principal(disc: i64, ell: u64) -> bool {
    let n = 4 * ell as i128;
    let d = -(disc as i128);
    let mut v = 0i128;
    while d * v * v <= n {
        let rest = n - d * v * v;
        if arith::is_square_i128(rest) {
            return true;
        }
        v += 1;
    }
    false
}

/// Kernel eigenvalue at a degree-one prime `(p, a -> r)` with trace `a_p`.
/// `Ok(None)` when this prime cannot decide (extension too large, or both
/// lines give the same quotient j mod p).
pub fn kernel_eigenvalue(
    curve: &Curve,
    entry: &RegistryEntry,
    ell: u64,
    p: u64,
    r: u64,
    a_p: i64,
) -> Result<Option<u32>, FrobError> {
    let fl = PrimeField::new(ell);
    if a_p != 0 {
        let half = fl.div(&fl.from_int(a_p), &2).ok_or(FrobError::NotBorel(ell))?;
        return Ok(Some(half as u32));
    }
    let (a, b) = ecmodel::reduce_short(curve, p, r)?;
    let fp = PrimeField::new(p);
    let target = isogenous_j(&entry.order, ell, &entry.j, &curve.field)?;
    let jt = curve.field.reduce(&target, &fp, r).ok_or(FrobError::KernelNotFound(p))?;
    let minus_p = fl.neg(&(p % ell));
    let r0 = arith::sqrt_mod(minus_p, ell).map_err(|_| FrobError::NotBorel(ell))?;
    let r1 = fl.neg(&r0);
    let (Some(j0), Some(j1)) = (line_quotient_j(p, a, b, ell, r0)?, line_quotient_j(p, a, b, ell, r1)?) else {
        return Ok(None);
    };
    match (j0 == jt, j1 == jt) {
        (true, false) => Ok(Some(r0 as u32)),
        (false, true) => Ok(Some(r1 as u32)),
        (true, true) => Ok(None),
        (false, false) => Err(FrobError::KernelNotFound(p)),
    }
}

/// Small deterministic generator.
struct Rng(u64);

impl Rng {
    fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    fn elem(&mut self, p: u64, k: usize) -> Poly<u64> {
        let v: Vec<u64> = (0..k).map(|_| self.next() % p).collect();
        poly::trim(&PrimeField::new(p), v)
    }
}

fn irreducible(fp: &PrimeField, k: usize, rng: &mut Rng) -> Poly<u64> {
    if k == 1 {
        return poly::x(fp);
    }
    loop {
        let mut f = rng.elem(fp.p, k);
        f.resize(k, 0);
        f.push(1);
        if poly::degree_pattern(fp, &f) == [k] {
            return f;
        }
    }
}

fn pow_big<R: Ring>(r: &R, a: &R::Elem, e: &BigUint) -> R::Elem {
    let mut acc = r.one();
    for i in (0..e.bits()).rev() {
        acc = r.mul(&acc, &acc);
        if e.bit(i) {
            acc = r.mul(&acc, a);
        }
    }
    acc
}

/// Square root in a finite field of odd order `q` (Tonelli-Shanks).
fn sqrt_ff<F: Field>(f: &F, a: &F::Elem, q: &BigUint, mut nonresidue: impl FnMut() -> F::Elem) -> Option<F::Elem> {
    if f.is_zero(a) {
        return Some(f.zero());
    }
    let qm1 = q - 1u32;
    if pow_big(f, a, &(&qm1 >> 1)) != f.one() {
        return None;
    }
    let s = qm1.trailing_zeros().unwrap_or(0);
    let t = &qm1 >> s;
    let z = loop {
        let z = nonresidue();
        if !f.is_zero(&z) && pow_big(f, &z, &(&qm1 >> 1)) != f.one() {
            break z;
        }
    };
    let mut m = s;
    let mut c = pow_big(f, &z, &t);
    let mut x = pow_big(f, a, &((&t + 1u32) >> 1));
    let mut b = pow_big(f, a, &t);
    while b != f.one() {
        let mut i = 0;
        let mut bb = b.clone();
        while bb != f.one() {
            bb = f.mul(&bb, &bb);
            i += 1;
        }
        let mut g = c.clone();
        for _ in 0..(m - i - 1) {
            g = f.mul(&g, &g);
        }
        x = f.mul(&x, &g);
        c = f.mul(&g, &g);
        b = f.mul(&b, &c);
        m = i;
    }
    Some(x)
}

#[derive(Clone, Debug, PartialEq)]
enum Pt<E> {
    Inf,
    Aff(E, E),
}

fn add<F: Field>(f: &F, a: &F::Elem, p: &Pt<F::Elem>, q: &Pt<F::Elem>) -> Pt<F::Elem> {
    match (p, q) {
        (Pt::Inf, _) => q.clone(),
        (_, Pt::Inf) => p.clone(),
        (Pt::Aff(x1, y1), Pt::Aff(x2, y2)) => {
            let lam = if x1 == x2 {
                if f.is_zero(&f.add(y1, y2)) {
                    return Pt::Inf;
                }
                let num = f.add(&f.scale(&f.mul(x1, x1), 3), a);
                f.div(&num, &f.scale(y1, 2)).expect("field")
            } else {
                f.div(&f.sub(y2, y1), &f.sub(x2, x1)).expect("field")
            };
            let x3 = f.sub(&f.sub(&f.mul(&lam, &lam), x1), x2);
            let y3 = f.sub(&f.mul(&lam, &f.sub(x1, &x3)), y1);
            Pt::Aff(x3, y3)
        }
    }
}

fn mul<F: Field>(f: &F, a: &F::Elem, k: &BigUint, p: &Pt<F::Elem>) -> Pt<F::Elem> {
    let mut acc = Pt::Inf;
    for i in (0..k.bits()).rev() {
        acc = add(f, a, &acc, &acc);
        if k.bit(i) {
            acc = add(f, a, &acc, p);
        }
    }
    acc
}

/// j-invariant of `E / C` where C is the Frobenius-stable line with
/// eigenvalue `r` on a supersingular curve `y^2 = x^3 + a x + b` over F_p.
fn line_quotient_j(p: u64, a: u64, b: u64, ell: u64, r: u64) -> Result<Option<u64>, FrobError> {
    let k = arith::mult_order(r, ell).ok_or(FrobError::NotBorel(ell))?;
    if k > MAX_EXTENSION_DEGREE {
        return Ok(None);
    }
    let fp = PrimeField::new(p);
    let mut rng = Rng(p.wrapping_mul(0x2545_f491_4f6c_dd1d) ^ (k << 32) ^ r);
    let ext = QuotientRing::new(fp, irreducible(&fp, k as usize, &mut rng));
    let q = BigUint::from(p).pow(k as u32);
    // supersingular with a_p = 0: pi^2 = -p, so the trace over F_{p^k} is 0 or 2(-p)^{k/2}
    let tk = if k % 2 == 1 { BigInt::zero() } else { BigInt::from(-(p as i64)).pow((k / 2) as u32) * 2 };
    let n = (BigInt::from(q.clone()) + BigInt::from(1) - tk).to_biguint().expect("positive group order");
    let ell_big = BigUint::from(ell);
    let mut cof = n.clone();
    while (&cof % &ell_big).is_zero() {
        cof /= &ell_big;
    }
    if cof == n {
        return Err(FrobError::KernelNotFound(p));
    }
    let ea = ext.from_int(a as i64);
    let eb = ext.from_int(b as i64);
    for _ in 0..64 {
        let x = rng.elem(p, k as usize);
        let rhs = ext.add(&ext.add(&ext.mul(&ext.mul(&x, &x), &x), &ext.mul(&ea, &x)), &eb);
        let Some(y) = sqrt_ff(&ext, &rhs, &q, || rng.elem(p, k as usize)) else { continue };
        let mut t = mul(&ext, &ea, &cof, &Pt::Aff(x, y));
        if t == Pt::Inf {
            continue;
        }
        loop {
            let u = mul(&ext, &ea, &ell_big, &t);
            if u == Pt::Inf {
                break;
            }
            t = u;
        }
        let frob = match &t {
            Pt::Aff(x, y) => Pt::Aff(ext.pow(x, p), ext.pow(y, p)),
            Pt::Inf => Pt::Inf,
        };
        let pt = add(&ext, &ea, &frob, &mul(&ext, &ea, &BigUint::from(r), &t));
        if pt == Pt::Inf {
            continue;
        }
        return Ok(velu_j(&ext, &ea, &eb, &pt, ell));
    }
    Err(FrobError::KernelNotFound(p))
}

/// Velu's formulas for the quotient by the cyclic group of odd order l
/// generated by `pt`; the result must lie in the prime field.
fn velu_j(ext: &QuotientRing<PrimeField>, a: &Poly<u64>, b: &Poly<u64>, pt: &Pt<Poly<u64>>, ell: u64) -> Option<u64> {
    let mut t = ext.zero();
    let mut w = ext.zero();
    let mut cur = pt.clone();
    for _ in 0..(ell - 1) / 2 {
        let Pt::Aff(x, _) = &cur else { return None };
        let x2 = ext.mul(x, x);
        let tq = ext.add(&ext.scale(&x2, 6), &ext.scale(a, 2));
        let uq = ext.scale(&ext.add(&ext.add(&ext.mul(&x2, x), &ext.mul(a, x)), b), 4);
        t = ext.add(&t, &tq);
        w = ext.add(&w, &ext.add(&uq, &ext.mul(x, &tq)));
        cur = add(ext, a, &cur, pt);
    }
    let a2 = ext.sub(a, &ext.scale(&t, 5));
    let b2 = ext.sub(b, &ext.scale(&w, 7));
    if a2.len() > 1 || b2.len() > 1 {
        return None;
    }
    let fp = ext.base;
    let a2 = a2.first().copied().unwrap_or(0);
    let b2 = b2.first().copied().unwrap_or(0);
    let num = fp.scale(&fp.pow(&a2, 3), 4);
    let den = fp.add(&num, &fp.scale(&fp.mul(&b2, &b2), 27));
    fp.div(&fp.scale(&num, 1728), &den)
}

/// Legendre-style helper used in tests: the value is a nonzero square mod l.
pub fn is_square_mod(v: u32, ell: u64) -> bool {
    v != 0 && PrimeField::new(ell).legendre(v as u64) == 1
}
