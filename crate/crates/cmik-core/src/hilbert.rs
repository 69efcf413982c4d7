//! Hilbert class polynomials from the q-expansion of j at reduced forms,
//! evaluated in binary fixed point and snapped to integers.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Fractional bits of the working precision.
const PREC: u32 = 640;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HilbertError {
    #[error("{0} is not a negative discriminant")]
    BadDiscriminant(i64),
    #[error("coefficient rounding residual {0:e} exceeds tolerance")]
    Precision(f64),
}

/// Fixed-point real: value = n / 2^PREC.
#[derive(Clone, Debug)]
struct Fx(BigInt);

impl Fx {
    fn from_int(n: i64) -> Fx {
        Fx(BigInt::from(n) << PREC)
    }
    fn add(&self, o: &Fx) -> Fx {
        Fx(&self.0 + &o.0)
    }
    fn sub(&self, o: &Fx) -> Fx {
        Fx(&self.0 - &o.0)
    }
    fn neg(&self) -> Fx {
        Fx(-&self.0)
    }
    fn mul(&self, o: &Fx) -> Fx {
        Fx((&self.0 * &o.0) >> PREC)
    }
    fn div(&self, o: &Fx) -> Fx {
        Fx((&self.0 << PREC) / &o.0)
    }
    fn div_int(&self, n: i64) -> Fx {
        Fx(&self.0 / n)
    }
    fn shr(&self, k: u32) -> Fx {
        Fx(&self.0 >> k)
    }
    fn sqrt(&self) -> Fx {
        Fx(BigInt::from((&self.0 << PREC).magnitude().sqrt()))
    }
    fn round(&self) -> BigInt {
        let half = BigInt::one() << (PREC - 1);
        (&self.0 + half) >> PREC
    }
    fn to_f64(&self) -> f64 {
        // keep 60 fractional bits for the conversion
        let v = (&self.0 >> (PREC - 60)).to_f64().unwrap_or(f64::INFINITY);
        v / (1u64 << 60) as f64
    }
    fn abs(&self) -> Fx {
        Fx(self.0.abs())
    }
}

/// atan(1/x) for an integer x > 1.
fn atan_inv(x: i64) -> Fx {
    let x2 = BigInt::from(x * x);
    let mut term = (BigInt::one() << PREC) / x;
    let mut sum = term.clone();
    let mut k = 1i64;
    while !term.is_zero() {
        term /= &x2;
        let t = &term / (2 * k + 1);
        if k % 2 == 1 {
            sum -= t;
        } else {
            sum += t;
        }
        k += 1;
    }
    Fx(sum)
}

fn pi() -> Fx {
    atan_inv(5).mul(&Fx::from_int(16)).sub(&atan_inv(239).mul(&Fx::from_int(4)))
}

/// exp(x) for real x, by halving, Taylor series and squaring.
fn exp(x: &Fx) -> Fx {
    if x.0.is_negative() {
        return Fx::from_int(1).div(&exp(&x.neg()));
    }
    let halvings = 16 + x.round().bits() as u32;
    let y = x.shr(halvings);
    let one = Fx::from_int(1);
    let mut term = one.clone();
    let mut sum = one;
    let mut k = 1;
    while !term.0.is_zero() {
        term = term.mul(&y).div_int(k);
        sum = sum.add(&term);
        k += 1;
    }
    for _ in 0..halvings {
        sum = sum.mul(&sum);
    }
    sum
}

/// Fixed-point complex number.
#[derive(Clone, Debug)]
struct Cx {
    re: Fx,
    im: Fx,
}

impl Cx {
    fn real(re: Fx) -> Cx {
        Cx { re, im: Fx(BigInt::zero()) }
    }
    fn one() -> Cx {
        Cx::real(Fx::from_int(1))
    }
    fn add(&self, o: &Cx) -> Cx {
        Cx { re: self.re.add(&o.re), im: self.im.add(&o.im) }
    }
    fn sub(&self, o: &Cx) -> Cx {
        Cx { re: self.re.sub(&o.re), im: self.im.sub(&o.im) }
    }
    fn mul(&self, o: &Cx) -> Cx {
        Cx {
            re: self.re.mul(&o.re).sub(&self.im.mul(&o.im)),
            im: self.re.mul(&o.im).add(&self.im.mul(&o.re)),
        }
    }
    fn scale_int(&self, n: i64) -> Cx {
        Cx { re: Fx(&self.re.0 * n), im: Fx(&self.im.0 * n) }
    }
    fn div(&self, o: &Cx) -> Cx {
        let den = o.re.mul(&o.re).add(&o.im.mul(&o.im));
        let num = self.mul(&Cx { re: o.re.clone(), im: o.im.neg() });
        Cx { re: num.re.div(&den), im: num.im.div(&den) }
    }
}

/// e^{i theta} for |theta| <= 2 pi.
fn cis(theta: &Fx) -> Cx {
    let halvings = 12;
    let t = theta.shr(halvings);
    // Taylor series of e^{it}
    let mut term = Cx::one();
    let mut sum = Cx::one();
    let it = Cx { re: Fx(BigInt::zero()), im: t };
    let mut k = 1;
    while !term.re.0.is_zero() || !term.im.0.is_zero() {
        let m = term.mul(&it);
        term = Cx { re: m.re.div_int(k), im: m.im.div_int(k) };
        sum = sum.add(&term);
        k += 1;
    }
    for _ in 0..halvings {
        sum = sum.mul(&sum);
    }
    sum
}

/// Primitive reduced forms (a, b, c) of discriminant d.
pub fn reduced_forms(d: i64) -> Vec<(i64, i64, i64)> {
    let mut out = Vec::new();
    let mut a = 1;
    while 3 * a * a <= -d {
        for b in -a + 1..=a {
            if (b - d).rem_euclid(2) != 0 {
                continue;
            }
            let num = b * b - d;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if c < a || ((b.abs() == a || a == c) && b < 0) {
                continue;
            }
            if a.gcd(&b).gcd(&c) != 1 {
                continue;
            }
            out.push((a, b, c));
        }
        a += 1;
    }
    out
}

pub fn class_number(d: i64) -> usize {
    reduced_forms(d).len()
}

/// j((-b + sqrt d) / 2a) by the q-expansion.
fn j_at_form(a: i64, b: i64, d: i64, pi: &Fx) -> Cx {
    let modulus = exp(&Fx::from_int(-d).sqrt().mul(pi).div_int(a).neg());
    let angle = pi.mul(&Fx::from_int(-b)).div_int(a);
    let q = cis(&angle).mul(&Cx::real(modulus.clone()));
    let tiny = BigInt::one() << 8;
    // powers of q until negligible
    let mut qpow = vec![Cx::one()];
    let mut cur = Cx::one();
    let mut size = Fx::from_int(1);
    loop {
        cur = cur.mul(&q);
        size = size.mul(&modulus);
        qpow.push(cur.clone());
        if size.0 < tiny {
            break;
        }
    }
    let n_max = qpow.len() - 1;
    // eta product by the pentagonal number theorem
    let mut eta = Cx::one();
    for k in 1i64.. {
        let e1 = (k * (3 * k - 1) / 2) as usize;
        if e1 > n_max {
            break;
        }
        let sign = if k % 2 == 1 { -1 } else { 1 };
        eta = eta.add(&qpow[e1].scale_int(sign));
        let e2 = (k * (3 * k + 1) / 2) as usize;
        if e2 <= n_max {
            eta = eta.add(&qpow[e2].scale_int(sign));
        }
    }
    // E4 = 1 + 240 sum sigma_3(n) q^n
    let mut e4 = Cx::one();
    for (n, qn) in qpow.iter().enumerate().skip(1) {
        let s3: i64 = (1..=n as i64).filter(|dd| n as i64 % dd == 0).map(|dd| dd * dd * dd).sum();
        e4 = e4.add(&qn.scale_int(240 * s3));
    }
    let eta2 = eta.mul(&eta);
    let eta4 = eta2.mul(&eta2);
    let eta8 = eta4.mul(&eta4);
    let eta24 = eta8.mul(&eta8).mul(&eta8);
    let disc = q.mul(&eta24);
    e4.mul(&e4).mul(&e4).div(&disc)
}

/// Monic integer class polynomial (coefficients little-endian) and the
/// largest distance of a computed coefficient from its integer snap.
pub fn hilbert_class_polynomial(d: i64) -> Result<(Vec<BigInt>, f64), HilbertError> {
    if d >= 0 || d.rem_euclid(4) > 1 {
        return Err(HilbertError::BadDiscriminant(d));
    }
    let p = pi();
    let mut coeffs = vec![Cx::one()];
    for (a, b, _) in reduced_forms(d) {
        let j = j_at_form(a, b, d, &p);
        // multiply by (x - j)
        let mut next = vec![Cx::real(Fx(BigInt::zero())); coeffs.len() + 1];
        for (i, c) in coeffs.iter().enumerate() {
            next[i + 1] = next[i + 1].add(c);
            next[i] = next[i].sub(&c.mul(&j));
        }
        coeffs = next;
    }
    let mut residual = 0f64;
    let mut out = Vec::with_capacity(coeffs.len());
    for c in &coeffs {
        let r = c.re.round();
        let err = c.re.sub(&Fx(&r << PREC)).abs().to_f64().max(c.im.abs().to_f64());
        residual = residual.max(err);
        out.push(r);
    }
    if residual >= 1e-10 {
        return Err(HilbertError::Precision(residual));
    }
    Ok((out, residual))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(d: i64) -> Vec<BigInt> {
        hilbert_class_polynomial(d).unwrap().0
    }

    #[test]
    fn class_number_one() {
        let b = |n: i64| BigInt::from(n);
        assert_eq!(poly(-3), vec![b(0), b(1)]);
        assert_eq!(poly(-4), vec![b(-1728), b(1)]);
        assert_eq!(poly(-7), vec![b(3375), b(1)]);
        assert_eq!(poly(-8), vec![b(-8000), b(1)]);
        assert_eq!(poly(-16), vec![b(-287496), b(1)]);
        let h = poly(-163);
        assert_eq!(h[0], "262537412640768000".parse::<BigInt>().unwrap());
    }

    #[test]
    fn class_numbers() {
        assert_eq!(class_number(-15), 2);
        assert_eq!(class_number(-427), 2);
        assert_eq!(class_number(-163), 1);
        assert_eq!(class_number(-23), 3);
    }

    #[test]
    fn class_number_two_root() {
        // -15: root -85995a - 52515 with a = (1 + sqrt 5)/2, so
        // x^2 + 191025 x - 121287375.
        let h = poly(-15);
        assert_eq!(h, vec![BigInt::from(-121287375), BigInt::from(191025), BigInt::one()]);
    }
}
