//! Weierstrass models over Q or Q(sqrt m), their invariants and twists.

mod count;
mod parse;
mod registry;
mod twist;

use alloc::string::String;
use core::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::field::{Field, Ring};
use crate::quadfield::{BaseField, QuadNum};

pub use count::{character_sum, reduce_short, trace_at, trace_of_frobenius, trace_short, CountError, CHARACTER_SUM_LIMIT};
pub use parse::{parse_curve, ParseError};
pub use registry::{registry, registry_lookup, RegistryEntry, RegistryRow, REGISTRY_ROWS};
pub use twist::{identify_order, j0_is_four_cube, j0_tag, j1728_tag, normalize_twist_parameter, TwistClass, TwistFamily};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EcError {
    #[error("singular model")]
    Singular,
    #[error("twist parameter must be nonzero")]
    ZeroTwist,
    #[error("model is defined over Q")]
    RationalModel,
    #[error("no registry order with discriminant {0}")]
    NoRegistryRow(i64),
    #[error("j-invariant {0} matches no registry order")]
    UnknownJ(String),
    #[error("parameter too large for exact factoring")]
    TooLarge,
    #[error(transparent)]
    Parse(#[from] ParseError),
}

/// `y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Curve {
    pub field: BaseField,
    pub a: [QuadNum; 5],
}

/// The standard b- and c-invariants and discriminant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Invariants {
    pub b2: QuadNum,
    pub b4: QuadNum,
    pub b6: QuadNum,
    pub b8: QuadNum,
    pub c4: QuadNum,
    pub c6: QuadNum,
    pub disc: QuadNum,
}

impl Curve {
    pub fn new(field: BaseField, a: [QuadNum; 5]) -> Result<Curve, EcError> {
        let c = Curve { field, a };
        if c.field.is_zero(&c.invariants().disc) {
            return Err(EcError::Singular);
        }
        Ok(c)
    }

    /// `y^2 = x^3 + A x + B`.
    pub fn short(field: BaseField, a4: QuadNum, a6: QuadNum) -> Result<Curve, EcError> {
        let z = field.zero();
        Curve::new(field, [z.clone(), z.clone(), z, a4, a6])
    }

    pub fn short_rational(a4: i64, a6: i64) -> Result<Curve, EcError> {
        Curve::short(BaseField::Rational, QuadNum::from_ints(a4, 0), QuadNum::from_ints(a6, 0))
    }

    pub fn invariants(&self) -> Invariants {
        let f = &self.field;
        let [a1, a2, a3, a4, a6] = &self.a;
        let m = |x: &QuadNum, y: &QuadNum| f.mul(x, y);
        let s = |x: &QuadNum, n: i64| f.scale(x, n);
        let b2 = f.add(&m(a1, a1), &s(a2, 4));
        let b4 = f.add(&s(a4, 2), &m(a1, a3));
        let b6 = f.add(&m(a3, a3), &s(a6, 4));
        let b8 = {
            let t1 = m(&m(a1, a1), a6);
            let t2 = s(&m(a2, a6), 4);
            let t3 = m(&m(a1, a3), a4);
            let t4 = m(a2, &m(a3, a3));
            let t5 = m(a4, a4);
            f.sub(&f.add(&f.sub(&f.add(&t1, &t2), &t3), &t4), &t5)
        };
        let c4 = f.sub(&m(&b2, &b2), &s(&b4, 24));
        let c6 = {
            let t1 = f.neg(&m(&b2, &m(&b2, &b2)));
            let t2 = s(&m(&b2, &b4), 36);
            let t3 = s(&b6, 216);
            f.sub(&f.add(&t1, &t2), &t3)
        };
        let disc = {
            let t1 = f.neg(&m(&m(&b2, &b2), &b8));
            let t2 = s(&m(&b4, &m(&b4, &b4)), 8);
            let t3 = s(&m(&b6, &b6), 27);
            let t4 = s(&m(&b2, &m(&b4, &b6)), 9);
            f.add(&f.sub(&f.sub(&t1, &t2), &t3), &t4)
        };
        Invariants { b2, b4, b6, b8, c4, c6, disc }
    }

    pub fn discriminant(&self) -> QuadNum {
        self.invariants().disc
    }

    pub fn j_invariant(&self) -> QuadNum {
        let inv = self.invariants();
        let f = &self.field;
        let c43 = f.mul(&inv.c4, &f.mul(&inv.c4, &inv.c4));
        f.div(&c43, &inv.disc).expect("nonsingular")
    }

    pub fn is_short(&self) -> bool {
        self.a[..3].iter().all(|c| self.field.is_zero(c))
    }

    /// Coefficients `(A, B)` of an isomorphic model `y^2 = x^3 + A x + B`:
    /// the model itself when already short, else `(-27 c4, -54 c6)`.
    pub fn short_coefficients(&self) -> (QuadNum, QuadNum) {
        if self.is_short() {
            return (self.a[3].clone(), self.a[4].clone());
        }
        let inv = self.invariants();
        (self.field.scale(&inv.c4, -27), self.field.scale(&inv.c6, -54))
    }

    pub fn short_model(&self) -> Curve {
        let (a, b) = self.short_coefficients();
        Curve::short(self.field, a, b).expect("isomorphic model is nonsingular")
    }

    /// `alpha y^2 = x^3 + A x + B`, written as `y^2 = x^3 + alpha^2 A x + alpha^3 B`.
    pub fn quadratic_twist(&self, alpha: &QuadNum) -> Result<Curve, EcError> {
        let f = &self.field;
        if f.is_zero(alpha) {
            return Err(EcError::ZeroTwist);
        }
        let (a, b) = self.short_coefficients();
        let a2 = f.mul(alpha, alpha);
        let a3 = f.mul(&a2, alpha);
        Curve::short(*f, f.mul(&a2, &a), f.mul(&a3, &b))
    }

    /// Applies the nontrivial automorphism of the base field to every coefficient.
    pub fn conjugate(&self) -> Result<Curve, EcError> {
        if self.field.quad().is_none() {
            return Err(EcError::RationalModel);
        }
        let a = self.a.clone().map(|c| self.field.conjugate(&c));
        Ok(Curve { field: self.field, a })
    }

    /// Rational coefficients when the model is over Q.
    pub fn rational_coefficients(&self) -> Option<[BigRational; 5]> {
        if self.field.quad().is_some() {
            return None;
        }
        Some(self.a.clone().map(|c| c.x))
    }
}

fn fmt_coeff(c: &QuadNum) -> Option<String> {
    if c.x.is_zero() && c.y.is_zero() {
        return None;
    }
    let s = alloc::format!("{c}");
    Some(if c.y.is_zero() { s } else { alloc::format!("({s})") })
}

impl fmt::Display for Curve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut lhs = String::from("y^2");
        let mut rhs = String::from("x^3");
        let push = |out: &mut String, c: &QuadNum, mono: &str| {
            if let Some(s) = fmt_coeff(c) {
                let one = c.y.is_zero() && c.x.is_one();
                let minus_one = c.y.is_zero() && (-&c.x).is_one();
                let body = if mono.is_empty() {
                    s.clone()
                } else if one {
                    String::from(mono)
                } else if minus_one {
                    alloc::format!("-{mono}")
                } else {
                    alloc::format!("{s}*{mono}")
                };
                if body.starts_with('-') {
                    out.push_str(&body);
                } else {
                    out.push('+');
                    out.push_str(&body);
                }
            }
        };
        push(&mut lhs, &self.a[0], "x*y");
        push(&mut lhs, &self.a[2], "y");
        push(&mut rhs, &self.a[1], "x^2");
        push(&mut rhs, &self.a[3], "x");
        push(&mut rhs, &self.a[4], "");
        write!(f, "{lhs}={rhs}")
    }
}

#[cfg(test)]
mod tests;
