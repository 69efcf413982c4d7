//! Admissible images, the twist-parameter to label map, and the twist-set
//! method for orders of class number two.

mod method;

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use thiserror::Error;

use crate::arith;
use crate::ecmodel::{EcError, TwistClass};
use crate::frobverify::FrobError;
use crate::hilbert::class_number;
use crate::modgroup::{
    cartan_params, named_candidates, pinned_label, working_modulus, CMLabel, CMOrder, Gamma, GroupId, ModGroupError,
    NamedGroup,
};
use crate::quadfield::{parse_linear, BaseField, QuadNum};

pub use method::{
    assemble_rows, candidates_at, classify_twist, method_candidates, uses_lambda, run_method, twist_primes, twist_set, Candidates, MethodConfig,
    MethodOutcome, TwistResult,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClassifyError {
    #[error("order {0} has class number above 2")]
    ClassNumber(String),
    #[error("no stored classification for {0} at {1}")]
    Uncovered(String, u32),
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("cannot determine the twist primes: {0}")]
    TwistPrimes(String),
    #[error("malformed condition {0:?}")]
    Condition(String),
    #[error(transparent)]
    Group(#[from] ModGroupError),
    #[error(transparent)]
    Curve(#[from] EcError),
    #[error(transparent)]
    Frob(#[from] FrobError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Provenance {
    Printed,
    Computed,
    Ambiguous,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::Printed => "PRINTED",
            Provenance::Computed => "COMPUTED",
            Provenance::Ambiguous => "AMBIGUOUS",
        }
    }
}

impl FromStr for Provenance {
    type Err = ClassifyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "PRINTED" => Ok(Provenance::Printed),
            "COMPUTED" => Ok(Provenance::Computed),
            "AMBIGUOUS" => Ok(Provenance::Ambiguous),
            _ => Err(ClassifyError::Condition(s.to_string())),
        }
    }
}

/// Condition on the twist parameter d (over Q) or alpha (over a quadratic field).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Condition {
    /// The family tag equals the given string.
    Tag(String),
    /// `d` lies in `4 (Q^*)^3`.
    FourCube,
    /// `d` lies in `l^r (Q^*)^3`.
    PowerCube { ell: u32, r: u32 },
    /// `d` is in the square class of the integer.
    SquareClass(i128),
    /// `alpha` is in the square class of the element.
    Alpha(QuadNum),
    Otherwise,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Condition::Tag(t) => write!(f, "tag={t}"),
            Condition::FourCube => write!(f, "d in 4(Q*)^3"),
            Condition::PowerCube { ell, r } => write!(f, "d in {ell}^{r}(Q*)^3"),
            Condition::SquareClass(s) => write!(f, "d in {s}(Q*)^2"),
            Condition::Alpha(a) => write!(f, "alpha={a}"),
            Condition::Otherwise => write!(f, "otherwise"),
        }
    }
}

impl FromStr for Condition {
    type Err = ClassifyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ClassifyError::Condition(s.to_string());
        if s == "otherwise" {
            return Ok(Condition::Otherwise);
        }
        if s == "d in 4(Q*)^3" {
            return Ok(Condition::FourCube);
        }
        if let Some(t) = s.strip_prefix("tag=") {
            return Ok(Condition::Tag(t.to_string()));
        }
        if let Some(a) = s.strip_prefix("alpha=") {
            return parse_linear(a).map(Condition::Alpha).ok_or_else(bad);
        }
        if let Some(rest) = s.strip_prefix("d in ") {
            if let Some(c) = rest.strip_suffix("(Q*)^3") {
                let (ell, r) = c.split_once('^').ok_or_else(bad)?;
                return Ok(Condition::PowerCube { ell: ell.parse().map_err(|_| bad())?, r: r.parse().map_err(|_| bad())? });
            }
            if let Some(c) = rest.strip_suffix("(Q*)^2") {
                return Ok(Condition::SquareClass(c.parse().map_err(|_| bad())?));
            }
        }
        Err(bad())
    }
}

fn is_cube(n: i128) -> bool {
    match arith::factorize(n) {
        Ok(f) => f.factors.iter().all(|&(_, e)| e % 3 == 0),
        Err(_) => false,
    }
}

impl Condition {
    pub fn matches(&self, twist: &TwistClass, field: &BaseField) -> bool {
        let d = twist.integer();
        match self {
            Condition::Tag(t) => twist.tag == *t,
            Condition::FourCube => d.is_some_and(crate::ecmodel::j0_is_four_cube),
            Condition::PowerCube { ell, r } => d.is_some_and(|d| {
                let v = arith::valuation(d, *ell as u128);
                v % 3 == *r && is_cube(d / (*ell as i128).pow(v))
            }),
            Condition::SquareClass(s) => d.is_some_and(|d| arith::powerfree_part(d, 2).map(|(c, _)| c) == Ok(*s)),
            Condition::Alpha(a) => field.same_square_class(&twist.parameter, a),
            Condition::Otherwise => true,
        }
    }

    /// Match against a bare parameter over `field` (twist-set rows).
    pub fn matches_alpha(&self, alpha: &QuadNum, field: &BaseField) -> bool {
        match self {
            Condition::Alpha(a) => field.same_square_class(alpha, a),
            Condition::Otherwise => true,
            _ => false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassificationRow {
    pub order: CMOrder,
    pub ell: u32,
    /// Twist family of the parameter (`j1728`, `j0`, `quadratic`, ...).
    pub family: String,
    pub condition: Condition,
    pub label: String,
    /// Named group generating the image, `N` for the normalizer; two names
    /// joined by `|` for an ambiguous row.
    pub group_id: String,
    pub provenance: Provenance,
}

impl ClassificationRow {
    pub fn named_group(&self) -> Option<NamedGroup> {
        NamedGroup::parse(&self.group_id)
    }
}

/// The images the theorems allow for an order of class number 1 or 2 at l,
/// as named groups (the normalizer first).
pub fn admissible_images(order: &CMOrder, ell: u32) -> Result<Vec<NamedGroup>, ClassifyError> {
    check_order(order)?;
    if !arith::is_prime(ell as u128) {
        return Err(ClassifyError::NotPrime(ell));
    }
    let params = cartan_params(*order, working_modulus(ell))?;
    let mut out: Vec<NamedGroup> = Vec::new();
    for g in named_candidates(&params) {
        if !out.contains(&g) {
            out.push(g);
        }
    }
    Ok(out)
}

fn check_order(order: &CMOrder) -> Result<usize, ClassifyError> {
    let h = class_number(order.disc());
    if h > 2 {
        return Err(ClassifyError::ClassNumber(order.to_string()));
    }
    Ok(h)
}

fn row(order: &CMOrder, ell: u32, family: &str, condition: Condition, group: NamedGroup, prov: Provenance) -> ClassificationRow {
    let label = pinned_label(order, ell, &group).map(|l| l.to_string()).unwrap_or_else(|| format!("{group}"));
    ClassificationRow {
        order: *order,
        ell,
        family: family.to_string(),
        condition,
        label,
        group_id: group.to_string(),
        provenance: prov,
    }
}

fn g(i: u8, t: u8, gamma: Gamma) -> NamedGroup {
    NamedGroup::with(i, t, gamma)
}

/// Built-in rows for class number one, and the class-number-two rows stated
/// in the literature. The last row of each list has the `otherwise` condition.
pub fn builtin_rows(order: &CMOrder, ell: u32) -> Result<Vec<ClassificationRow>, ClassifyError> {
    use Gamma::*;
    let h = check_order(order)?;
    if !arith::is_prime(ell as u128) {
        return Err(ClassifyError::NotPrime(ell));
    }
    let disc = order.disc();
    let n = NamedGroup::normalizer();
    let printed = Provenance::Printed;
    let tagged = |family: &str, items: &[(&str, NamedGroup)]| -> Vec<ClassificationRow> {
        let mut v: Vec<ClassificationRow> =
            items.iter().map(|(t, gr)| row(order, ell, family, Condition::Tag(t.to_string()), *gr, printed)).collect();
        v.push(row(order, ell, family, Condition::Otherwise, n, printed));
        v
    };
    let divides = disc % ell as i64 == 0;
    if h == 2 {
        let rows = printed_rows_h2(order, ell);
        if !rows.is_empty() {
            return Ok(rows);
        }
        if ell == 2 || divides {
            return Err(ClassifyError::Uncovered(order.to_string(), ell));
        }
        return Ok(vec![row(order, ell, "relative", Condition::Otherwise, n, printed)]);
    }
    Ok(match (disc, ell) {
        (-4, 2) => tagged(
            "j1728",
            &[
                ("-4", g(4, 1, Cm1)),
                ("1", g(4, 1, Cpm1)),
                ("-1", g(4, 2, Cm1)),
                ("4", g(4, 2, Cpm1)),
                ("2", g(4, 3, Cp1)),
                ("-2", g(4, 4, Cm1)),
                ("8", g(4, 4, Cp1)),
                ("-8", g(4, 3, Cm1)),
                ("t^2", g(2, 1, Cpm1)),
                ("-t^2", g(2, 1, Cm1)),
                ("2t^2", g(2, 2, Cp1)),
                ("-2t^2", g(2, 2, Cm1)),
            ],
        ),
        (-8, 2) => tagged("disc8", &[("2", g(2, 3, C1)), ("1", g(2, 4, C1)), ("-1", g(2, 3, Cm1)), ("-2", g(2, 4, Cm1))]),
        (-16, 2) => tagged("disc16", &[("2", g(2, 1, C1)), ("1", g(2, 2, C1)), ("-1", g(2, 2, Cm1)), ("-2", g(2, 1, Cm1))]),
        (-3, 2) => vec![
            row(order, ell, "j0", Condition::FourCube, NamedGroup::new(GroupId::CartanCube, Some(Cp1)), printed),
            row(order, ell, "j0", Condition::Otherwise, n, printed),
        ],
        (-3, 3) => tagged(
            "j0",
            &[
                ("1", g(6, 1, C1)),
                ("-27", g(6, 1, Cm1)),
                ("81", g(6, 2, C1)),
                ("-3", g(6, 2, Cm1)),
                ("9", g(6, 3, C1)),
                ("-243", g(6, 3, Cm1)),
                ("t^2", g(2, 1, C1)),
                ("-3t^2", g(2, 1, Cm1)),
                ("t^3", g(3, 1, C1)),
                ("3t^3", g(3, 2, C1)),
                ("9t^3", g(3, 3, C1)),
            ],
        ),
        (-3, _) => {
            let r9 = ell % 9;
            let mut v = Vec::new();
            if r9 == 4 || r9 == 7 {
                let r = ((ell - 1) / 3) % 3;
                let id = GroupId::CubeRatio;
                v.push(row(order, ell, "j0", Condition::PowerCube { ell, r }, NamedGroup::new(id, Some(C1)), printed));
            } else if r9 == 2 || r9 == 5 {
                let r = (3 - ((ell + 1) / 3) % 3) % 3;
                let id = GroupId::CartanCube;
                v.push(row(order, ell, "j0", Condition::PowerCube { ell, r }, NamedGroup::new(id, Some(C1)), printed));
            }
            v.push(row(order, ell, "j0", Condition::Otherwise, n, printed));
            v
        }
        (_, 2) => vec![row(order, ell, family_name(disc), Condition::Otherwise, n, printed)],
        _ if divides => vec![
            row(order, ell, family_name(disc), Condition::SquareClass(1), g(2, 1, C1), printed),
            row(order, ell, family_name(disc), Condition::SquareClass(-(ell as i128)), g(2, 1, Cm1), printed),
            row(order, ell, family_name(disc), Condition::Otherwise, n, printed),
        ],
        _ => vec![row(order, ell, family_name(disc), Condition::Otherwise, n, printed)],
    })
}

fn family_name(disc: i64) -> &'static str {
    match disc {
        -4 => "j1728",
        -3 => "j0",
        -8 => "disc8",
        -16 => "disc16",
        _ => "relative",
    }
}

/// Class-number-two rows with a printed answer.
fn printed_rows_h2(order: &CMOrder, ell: u32) -> Vec<ClassificationRow> {
    use Gamma::*;
    let n = NamedGroup::normalizer();
    let p = Provenance::Printed;
    let alpha = |x: i64, y: i64| Condition::Alpha(QuadNum::from_ints(x, y));
    let q = "relative";
    match (order.disc(), ell) {
        (-147, 7) => vec![
            row(order, ell, q, alpha(1, 0), g(2, 1, Cm1), p),
            row(order, ell, q, alpha(-3, 1), g(2, 1, C1), p),
            row(order, ell, q, Condition::Otherwise, n, p),
        ],
        (-147, 3) => vec![
            row(order, ell, q, alpha(2, -1), g(2, 1, Cm1), p),
            row(order, ell, q, alpha(1, 1), g(2, 1, C1), p),
            row(order, ell, q, Condition::Otherwise, n, p),
        ],
        (-40, 5) | (-88, 2) => vec![row(order, ell, q, Condition::Otherwise, n, p)],
        _ => Vec::new(),
    }
}

/// The row selected by a twist class, searching `extra` (stored method
/// output) after the built-in rows.
pub fn select_row(
    order: &CMOrder,
    ell: u32,
    twist: &TwistClass,
    field: &BaseField,
    extra: &[ClassificationRow],
) -> Result<ClassificationRow, ClassifyError> {
    let rows = match builtin_rows(order, ell) {
        Ok(r) => r,
        Err(ClassifyError::Uncovered(..)) => {
            extra.iter().filter(|r| r.order == *order && r.ell == ell).cloned().collect()
        }
        Err(e) => return Err(e),
    };
    rows.into_iter()
        .find(|r| r.condition.matches(twist, field))
        .ok_or_else(|| ClassifyError::Uncovered(order.to_string(), ell))
}

/// Label of the l-adic image of the twist.
pub fn predict_label(order: &CMOrder, ell: u32, twist: &TwistClass) -> Result<CMLabel, ClassifyError> {
    predict_label_with(order, ell, twist, &BaseField::Rational, &[])
}

pub fn predict_label_with(
    order: &CMOrder,
    ell: u32,
    twist: &TwistClass,
    field: &BaseField,
    extra: &[ClassificationRow],
) -> Result<CMLabel, ClassifyError> {
    let r = select_row(order, ell, twist, field, extra)?;
    if r.provenance == Provenance::Ambiguous {
        return Err(ClassifyError::Uncovered(order.to_string(), ell));
    }
    r.label.parse().map_err(|_| ClassifyError::Condition(r.label.clone()))
}

/// Primes at which the image can be non-maximal for some twist: 2, 3 and the
/// primes dividing the discriminant.
pub fn special_primes(order: &CMOrder) -> Vec<u32> {
    let mut v = vec![2u32, 3];
    if let Ok(f) = arith::factorize(order.disc() as i128) {
        for p in f.primes() {
            if !v.contains(&(p as u32)) {
                v.push(p as u32);
            }
        }
    }
    v.sort_unstable();
    v
}

#[cfg(test)]
mod tests;
