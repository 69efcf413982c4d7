//! Division polynomials, Frobenius data of CM curves and division-field degrees.
//!
//! Convention: for a short model `y^2 = x^3 + A x + B` we work with the
//! x-only polynomials `F_n = psi_n` for odd n and `F_n = psi_n / (2y)` for
//! even n. Then `psi_4 / (2 psi_2) = F_4 / 2`, `psi_8 / (2 psi_4) = F_8 / (2 F_4)`
//! and `psi_9 / (3 psi_3) = F_9 / (3 F_3)` are all polynomials in x.

mod identities;

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

use crate::arith;
use crate::ecmodel::{self, identify_order, CountError, Curve, EcError};
use crate::field::Ring;
use crate::modgroup::{cartan_params, close_generators, rat_mod, CMOrder, CartanParams, GL2Mod};
use crate::poly::{self, Poly, PolyRing};
use crate::quadfield::{BaseField, QuadNum};
use crate::zfactor;

pub use identities::{verify_stated_factorizations, IdentityCheck};

/// Largest index accepted by [`division_polynomial`].
pub const MAX_INDEX: u32 = 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DivError {
    #[error("index {0} outside 1..={MAX_INDEX}")]
    Range(u32),
    #[error("torsion degrees need a model over Q")]
    NotRational,
    #[error("modulus {0} is not supported (use 2, 3, 4, 8 or 9 or another prime power)")]
    Modulus(u32),
    #[error("no usable prime below the budget")]
    NoGoodPrimes,
    #[error("psi_{0} / psi_{1} is not a polynomial in x")]
    NotPolynomial(u32, u32),
    #[error(transparent)]
    Curve(#[from] EcError),
    #[error(transparent)]
    Count(#[from] CountError),
}

/// `F_n(x)` evaluated in any ring, for the short model with coefficients `a`, `b`.
pub fn division_value<R: Ring>(r: &R, n: u64, x: &R::Elem, a: &R::Elem, b: &R::Elem) -> R::Elem {
    let x2 = r.mul(x, x);
    let x3 = r.mul(&x2, x);
    let x4 = r.mul(&x2, &x2);
    let x6 = r.mul(&x3, &x3);
    let a2 = r.mul(a, a);
    let cubic = r.add(&r.add(&x3, &r.mul(a, x)), b);
    let yy = r.scale(&cubic, 4);
    let y2 = r.mul(&yy, &yy);
    // F_3 = 3x^4 + 6Ax^2 + 12Bx - A^2
    let f3 = r.sub(
        &r.add(&r.add(&r.scale(&x4, 3), &r.scale(&r.mul(a, &x2), 6)), &r.scale(&r.mul(b, x), 12)),
        &a2,
    );
    // F_4 = 2(x^6 + 5Ax^4 + 20Bx^3 - 5A^2x^2 - 4ABx - 8B^2 - A^3)
    let inner = [
        x6,
        r.scale(&r.mul(a, &x4), 5),
        r.scale(&r.mul(b, &x3), 20),
        r.scale(&r.mul(&a2, &x2), -5),
        r.scale(&r.mul(&r.mul(a, b), x), -4),
        r.scale(&r.mul(b, b), -8),
        r.neg(&r.mul(&a2, a)),
    ]
    .iter()
    .fold(r.zero(), |acc, t| r.add(&acc, t));
    let f4 = r.scale(&inner, 2);
    let mut memo: BTreeMap<u64, R::Elem> = BTreeMap::new();
    memo.insert(0, r.zero());
    memo.insert(1, r.one());
    memo.insert(2, r.one());
    memo.insert(3, f3);
    memo.insert(4, f4);
    f_rec(r, n, &y2, &mut memo)
}

fn f_rec<R: Ring>(r: &R, n: u64, y2: &R::Elem, memo: &mut BTreeMap<u64, R::Elem>) -> R::Elem {
    if let Some(v) = memo.get(&n) {
        return v.clone();
    }
    let m = n / 2;
    let g = |k: u64, memo: &mut BTreeMap<u64, R::Elem>| f_rec(r, k, y2, memo);
    let v = if n % 2 == 0 {
        let (fm, fm2, fm1, fmm2, fmp1) = (g(m, memo), g(m + 2, memo), g(m - 1, memo), g(m - 2, memo), g(m + 1, memo));
        let t1 = r.mul(&fm2, &r.mul(&fm1, &fm1));
        let t2 = r.mul(&fmm2, &r.mul(&fmp1, &fmp1));
        r.mul(&fm, &r.sub(&t1, &t2))
    } else {
        let (fm2, fm, fm1, fmp1) = (g(m + 2, memo), g(m, memo), g(m - 1, memo), g(m + 1, memo));
        let t1 = r.mul(&fm2, &r.pow(&fm, 3));
        let t2 = r.mul(&fm1, &r.pow(&fmp1, 3));
        if m % 2 == 0 {
            r.sub(&r.mul(y2, &t1), &t2)
        } else {
            r.sub(&t1, &r.mul(y2, &t2))
        }
    };
    memo.insert(n, v.clone());
    v
}

/// `F_n` of the short model of `curve` as a polynomial in x over its base field.
pub fn division_polynomial(curve: &Curve, n: u32) -> Result<Poly<QuadNum>, DivError> {
    if n == 0 || n > MAX_INDEX {
        return Err(DivError::Range(n));
    }
    let (a, b) = curve.short_coefficients();
    let ring = PolyRing { base: curve.field };
    let x = poly::x(&curve.field);
    let ca = poly::constant(&curve.field, a);
    let cb = poly::constant(&curve.field, b);
    Ok(division_value(&ring, n as u64, &x, &ca, &cb))
}

/// Degree of `F_n`: `(n^2 - 1)/2` for odd n and `(n^2 - 4)/2` for even n.
pub fn expected_degree(n: u32) -> usize {
    let n = n as usize;
    if n % 2 == 1 {
        (n * n - 1) / 2
    } else {
        (n * n - 4) / 2
    }
}

/// `psi_n / (c psi_m)` as a polynomial in x, for m | n of the same parity.
pub fn division_ratio(curve: &Curve, n: u32, m: u32, c: i64) -> Result<Poly<QuadNum>, DivError> {
    if n % 2 != m % 2 || m == 0 || n % m != 0 {
        return Err(DivError::NotPolynomial(n, m));
    }
    let f = curve.field;
    let num = division_polynomial(curve, n)?;
    let den = poly::scale(&f, &division_polynomial(curve, m)?, &f.from_int(c));
    poly::div_exact(&f, &num, &den).ok_or(DivError::NotPolynomial(n, m))
}

/// Rational coefficients of a polynomial over Q.
pub fn rational_coefficients(f: &[QuadNum]) -> Option<Poly<BigRational>> {
    f.iter().map(|c| if c.is_rational() { Some(c.x.clone()) } else { None }).collect()
}

/// Primitive integer polynomial proportional to a rational one.
pub fn integer_form(f: &[QuadNum]) -> Option<Poly<BigInt>> {
    rational_coefficients(f).map(|r| poly::primitive_part(&r))
}

/// Degrees of the irreducible factors over Q of a squarefree polynomial over Q.
pub fn rational_factor_degrees(f: &[QuadNum]) -> Option<Vec<usize>> {
    integer_form(f).map(|z| zfactor::factor_degrees(&z))
}

// ---------------------------------------------------------------------------
// Frobenius of CM curves

/// The s with `a_p^2 - 4p = disc * s^2`, `s >= 0`; `None` if there is none.
pub fn frobenius_s(disc: i64, p: u64, a_p: i64) -> Option<i64> {
    let t = (a_p as i128) * (a_p as i128) - 4 * p as i128;
    if t % disc as i128 != 0 {
        return None;
    }
    let q = t / disc as i128;
    if q < 0 {
        return None;
    }
    let s = arith::isqrt(q as u128) as i128;
    (s * s == q).then_some(s as i64)
}

/// Matrix of the Frobenius endomorphism `(a_p + s sqrt(disc))/2` in the
/// Cartan basis of `params`: `c((a_p - s phi)/2, s)`.
pub fn frobenius_matrix(params: &CartanParams, a_p: i64, s: i64) -> Option<GL2Mod> {
    let m = params.modulus;
    let num = a_p - s * params.phi as i64;
    let x = if num % 2 == 0 { (num / 2).rem_euclid(m as i64) } else { rat_mod(num, 2, m).ok()? as i64 };
    Some(params.c(x, s))
}

fn matrix_order(g: &GL2Mod) -> Option<u64> {
    if !g.is_invertible() {
        return None;
    }
    let mut k = 1;
    let mut h = *g;
    while !h.is_identity() {
        h = h.mul(g);
        k += 1;
    }
    Some(k)
}

/// Order of `Frob_p` in `Gal(Q(E[n])/Q)` for a CM curve over Q with CM order
/// `order`, n >= 3 a prime power prime to p. Ordinary p: order of the
/// Frobenius matrix. Supersingular p: `Frob_p^2 = -p`, so twice `ord_n(-p)`.
pub fn frobenius_order(order: &CMOrder, p: u64, a_p: i64, n: u32) -> Option<u64> {
    if a_p == 0 {
        let m = n as u64;
        return arith::mult_order((m - p % m) % m, m).map(|k| 2 * k);
    }
    let params = cartan_params(*order, n).ok()?;
    let s = frobenius_s(order.disc(), p, a_p)?;
    matrix_order(&frobenius_matrix(&params, a_p, s)?)
}

/// Lower bounds on `[Q(E[n]):Q]` from sampled Frobenius data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorsionDegree {
    pub modulus: u32,
    /// Twice the order of the group generated by the Frobenius matrices at
    /// ordinary primes (exact for n = 2).
    pub group_bound: u64,
    /// lcm of the orders of all sampled Frobenius elements.
    pub exponent_bound: u64,
    pub primes_used: usize,
}

/// Splitting-field degree of a squarefree cubic over Q.
fn cubic_splitting_degree(a: &BigRational, b: &BigRational) -> u64 {
    let r = crate::field::Rationals;
    let coeffs = [b.clone(), a.clone(), r.zero(), r.one()];
    let z = poly::primitive_part(&coeffs);
    let degs = zfactor::factor_degrees(&z);
    match degs.as_slice() {
        [1, 1, 1] => 1,
        [1, 2] => 2,
        _ => {
            // discriminant -4A^3 - 27B^2
            let d = r.sub(&r.scale(&r.pow(a, 3), -4), &r.scale(&r.mul(b, b), 27));
            if crate::field::is_rational_square(&d) {
                3
            } else {
                6
            }
        }
    }
}

/// Lower bounds on `[Q(E[n]):Q]` for a CM curve over Q from the first
/// `prime_budget` primes. For n >= 3 the field contains K, so the image is
/// twice its Cartan part, and the Cartan part contains every ordinary Frobenius.
pub fn torsion_degree_bounds(curve: &Curve, n: u32, prime_budget: usize) -> Result<TorsionDegree, DivError> {
    if curve.field.quad().is_some() {
        return Err(DivError::NotRational);
    }
    let (a, b) = curve.short_coefficients();
    if n == 2 {
        let g = cubic_splitting_degree(&a.x, &b.x);
        return Ok(TorsionDegree { modulus: 2, group_bound: g, exponent_bound: g, primes_used: 0 });
    }
    let (ell, _) = arith::prime_power(n as u64).ok_or(DivError::Modulus(n))?;
    let order = identify_order(curve)?.order;
    let params = cartan_params(order, n).map_err(|_| DivError::Modulus(n))?;
    let mut gens: Vec<GL2Mod> = Vec::new();
    let mut exponent = 1u64;
    let mut used = 0usize;
    let mut group_order = 1usize;
    for p in (5u64..).filter(|&q| arith::is_prime(q as u128)).take(prime_budget) {
        if p == ell || order.conductor() % p == 0 {
            continue;
        }
        let a_p = match ecmodel::trace_at(curve, p, 0) {
            Ok(t) => t,
            Err(CountError::BadReduction(_)) => continue,
            Err(e) => return Err(e.into()),
        };
        used += 1;
        if let Some(k) = frobenius_order(&order, p, a_p, n) {
            exponent = arith::lcm_u64(exponent, k);
        }
        if a_p != 0 {
            if let Some(s) = frobenius_s(order.disc(), p, a_p) {
                for t in [s, -s] {
                    if let Some(g) = frobenius_matrix(&params, a_p, t) {
                        if !gens.contains(&g) {
                            gens.push(g);
                        }
                    }
                }
            }
        }
        if used % 32 == 0 || used == prime_budget {
            group_order = close_generators(&gens, n).map(|h| h.order()).unwrap_or(1);
        }
    }
    if used == 0 {
        return Err(DivError::NoGoodPrimes);
    }
    group_order = close_generators(&gens, n).map(|h| h.order()).unwrap_or(group_order);
    Ok(TorsionDegree { modulus: n, group_bound: 2 * group_order as u64, exponent_bound: exponent, primes_used: used })
}

/// Reduction of `F_n` at `a -> r`, for quick scalar checks mod p.
pub fn division_value_mod_p(curve: &Curve, n: u64, p: u64, r: u64, x: u64) -> Option<u64> {
    let fp = crate::field::PrimeField::new(p);
    let (a, b) = curve.short_coefficients();
    let ar = curve.field.reduce(&a, &fp, r)?;
    let br = curve.field.reduce(&b, &fp, r)?;
    Some(division_value(&fp, n, &(x % p), &ar, &br))
}

/// Integer coefficient list (highest degree first) as a polynomial over `field`.
pub(crate) fn poly_desc(field: &BaseField, coeffs: &[i64]) -> Poly<QuadNum> {
    let v: Vec<QuadNum> = coeffs.iter().rev().map(|&c| field.from_int(c)).collect();
    poly::trim(field, v)
}

#[cfg(test)]
mod tests;
