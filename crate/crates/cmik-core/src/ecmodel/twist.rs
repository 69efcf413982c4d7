//! Canonical twist parameters relative to the registry models.

use alloc::string::{String, ToString};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use super::{registry, Curve, EcError, RegistryEntry};
use crate::arith;
use crate::field::{Field, Ring};
use crate::modgroup::CMOrder;
use crate::quadfield::QuadNum;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TwistFamily {
    /// `y^2 = x^3 + d x`, d fourth-power-free.
    J1728,
    /// `y^2 = x^3 + 16 d`, d sixth-power-free.
    J0,
    /// `y^2 = x^3 - 4320 d^2 x + 96768 d^3`, d square-free.
    Disc8,
    /// `y^2 = x^3 - 11 d^2 x + 14 d^3`, d square-free.
    Disc16,
    /// Quadratic twist of the registry model by d.
    Relative,
}

impl TwistFamily {
    pub fn as_str(self) -> &'static str {
        match self {
            TwistFamily::J1728 => "j1728",
            TwistFamily::J0 => "j0",
            TwistFamily::Disc8 => "disc8",
            TwistFamily::Disc16 => "disc16",
            TwistFamily::Relative => "relative",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistClass {
    pub order: CMOrder,
    pub family: TwistFamily,
    /// Family tag such as "-2", "t^2", "3t^3" or "generic".
    pub tag: String,
    /// The canonical parameter d (an integer over Q).
    pub parameter: QuadNum,
}

impl TwistClass {
    /// The parameter as an integer, for models over Q.
    pub fn integer(&self) -> Option<i128> {
        if !self.parameter.is_rational() || !self.parameter.x.is_integer() {
            return None;
        }
        self.parameter.x.numer().to_i128()
    }
}

/// Integer representative of `q` modulo k-th powers, k-th-power-free.
fn powerfree_rational(q: &BigRational, k: u32) -> Result<i128, EcError> {
    let n = q.numer() * q.denom().pow(k - 1);
    let n = n.to_i128().ok_or(EcError::TooLarge)?;
    let (core, _) = arith::powerfree_part(n, k).map_err(|_| EcError::TooLarge)?;
    Ok(core)
}

/// Tag for `y^2 = x^3 + d x` with d fourth-power-free.
pub fn j1728_tag(d: i128) -> String {
    if [1, -1, 2, -2, 4, -4, 8, -8].contains(&d) {
        return d.to_string();
    }
    let sign = if d < 0 { "-" } else { "" };
    let a = d.abs();
    if arith::is_square_i128(a) {
        alloc::format!("{sign}t^2")
    } else if a % 2 == 0 && arith::is_square_i128(a / 2) {
        alloc::format!("{sign}2t^2")
    } else {
        "generic".to_string()
    }
}

/// Tag for `y^2 = x^3 + 16 d` with d sixth-power-free (3-adic families).
pub fn j0_tag(d: i128) -> String {
    if [1, -3, 9, -27, 81, -243].contains(&d) {
        return d.to_string();
    }
    if arith::is_square_i128(d) {
        return "t^2".to_string();
    }
    if d < 0 && d % 3 == 0 && arith::is_square_i128(-d / 3) {
        return "-3t^2".to_string();
    }
    if let Ok(fac) = arith::factorize(d) {
        let others_cube = fac.factors.iter().all(|&(p, e)| p == 3 || e % 3 == 0);
        if others_cube {
            let e3 = fac.exponent_of(3);
            return match e3 {
                0 | 3 => "t^3",
                1 | 4 => "3t^3",
                _ => "9t^3",
            }
            .to_string();
        }
    }
    "generic".to_string()
}

/// Whether d lies in `4 (Q^*)^3` (the index-3 2-adic family at j = 0).
pub fn j0_is_four_cube(d: i128) -> bool {
    match arith::factorize(d) {
        Ok(fac) => fac.exponent_of(2) % 3 == 2 && fac.factors.iter().all(|&(p, e)| p == 2 || e % 3 == 0),
        Err(_) => false,
    }
}

fn small_tag(d: i128) -> String {
    if [1, -1, 2, -2].contains(&d) {
        d.to_string()
    } else {
        "generic".to_string()
    }
}

/// Finds the registry order whose j-invariant is j(E) (or its conjugate), and
/// returns the entry with its model conjugated to match when needed.
pub fn identify_order(curve: &Curve) -> Result<RegistryEntry, EcError> {
    let j = curve.j_invariant();
    for mut e in registry() {
        if e.curve.field != curve.field {
            continue;
        }
        if e.j == j {
            return Ok(e);
        }
        if curve.field.quad().is_some() && curve.field.conjugate(&e.j) == j {
            e.curve = e.curve.conjugate()?;
            e.j = j;
            return Ok(e);
        }
    }
    Err(EcError::UnknownJ(alloc::format!("{j}")))
}

/// Twist class of a CM curve relative to its family's base model.
pub fn normalize_twist_parameter(curve: &Curve) -> Result<TwistClass, EcError> {
    let entry = identify_order(curve)?;
    let order = entry.order;
    let f = curve.field;
    let (a, b) = curve.short_coefficients();
    let rational = f.quad().is_none();
    let disc = order.disc();
    if rational && disc == -4 {
        let d = powerfree_rational(&a.x, 4)?;
        return Ok(TwistClass { order, family: TwistFamily::J1728, tag: j1728_tag(d), parameter: QuadNum::from_ints(d as i64, 0) });
    }
    if rational && disc == -3 {
        let q = &b.x / BigRational::from_integer(BigInt::from(16));
        let d = powerfree_rational(&q, 6)?;
        return Ok(TwistClass { order, family: TwistFamily::J0, tag: j0_tag(d), parameter: QuadNum::rational(BigRational::from_integer(d.into())) });
    }
    let (a0, b0) = entry.curve.short_coefficients();
    // B A0 / (A B0) = d times a square
    let ratio = f.div(&f.mul(&b, &a0), &f.mul(&a, &b0)).expect("j differs from 0 and 1728");
    if rational {
        let d = powerfree_rational(&ratio.x, 2)?;
        let family = match disc {
            -8 => TwistFamily::Disc8,
            -16 => TwistFamily::Disc16,
            _ => TwistFamily::Relative,
        };
        let tag = match family {
            TwistFamily::Relative => d.to_string(),
            _ => small_tag(d),
        };
        return Ok(TwistClass { order, family, tag, parameter: QuadNum::rational(BigRational::from_integer(d.into())) });
    }
    let tag = if f.is_square(&ratio) { "1".to_string() } else { alloc::format!("{ratio}") };
    let parameter = if f.is_square(&ratio) { f.one() } else { ratio };
    Ok(TwistClass { order, family: TwistFamily::Relative, tag, parameter })
}
