//! Exact checks of the factorization identities and division-field
//! descriptions for the models with j = 8000, 287496, 1728 and 0.
//!
//! Polynomial identities are checked by exact multiplication or division.
//! A statement `Q(E[n]) = Q(roots of g_1, ..., g_k)` is checked prime by
//! prime: the order of `Frob_p` computed from the CM Frobenius must equal the
//! lcm of the factor degrees of every `g_i mod p`.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{division_polynomial, division_ratio, integer_form, poly_desc, torsion_degree_bounds};
use crate::arith;
use crate::ecmodel::{self, Curve, CountError};
use crate::field::{PrimeField, Ring};
use crate::modgroup::CMOrder;
use crate::poly::{self, Poly};
use crate::quadfield::{BaseField, QuadField, QuadNum};
use crate::zfactor;

/// One checked statement.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityCheck {
    pub id: &'static str,
    pub statement: String,
    pub passed: bool,
    pub details: String,
}

fn check(id: &'static str, statement: &str, passed: bool, details: String) -> IdentityCheck {
    IdentityCheck { id, statement: statement.into(), passed, details }
}

const Q: BaseField = BaseField::Rational;

fn q2() -> BaseField {
    BaseField::Quadratic(QuadField::new(2).expect("2 is square-free"))
}

/// `x + c` over `field`.
fn linear(c: QuadNum) -> Poly<QuadNum> {
    vec![c, QuadNum::from_ints(1, 0)]
}

fn product(field: &BaseField, fs: &[Poly<QuadNum>]) -> Poly<QuadNum> {
    fs.iter().fold(poly::constant(field, field.one()), |acc, f| poly::mul(field, &acc, f))
}

fn show(f: &[QuadNum]) -> String {
    let mut s = String::new();
    for (i, c) in f.iter().enumerate().rev() {
        if c.x.is_zero() && c.y.is_zero() {
            continue;
        }
        if !s.is_empty() {
            s.push_str(" + ");
        }
        s.push_str(&format!("({c})x^{i}"));
    }
    if s.is_empty() {
        s.push('0');
    }
    s
}

fn scaled_curve(a: i64, b: i64, d: i64) -> Curve {
    Curve::short_rational(a * d * d, b * d * d * d).expect("nonsingular twist")
}

fn splitting_order(fp: &PrimeField, f: &[BigInt]) -> Option<u64> {
    let n = f.len() - 1;
    let g: Poly<u64> = poly::trim(fp, f.iter().map(|c| fp.reduce_int(c)).collect());
    if poly::degree(&g) != Some(n) || (n > 1 && !poly::is_squarefree_mod_p(fp, &g)) {
        return None;
    }
    Some(poly::degree_pattern(fp, &g).into_iter().fold(1u64, |acc, k| arith::lcm_u64(acc, k as u64)))
}

struct FieldComparison {
    primes: usize,
    mismatches: Vec<(i64, u64, u64, u64)>,
}

/// Compares Frobenius orders on `Q(E^d[n])` with the orders on the splitting
/// field of the generating polynomials, for all primes `5 <= p < bound`.
fn compare_division_field(
    order: CMOrder,
    n: u32,
    ds: &[i64],
    curve_of: impl Fn(i64) -> Curve,
    gens_of: impl Fn(i64) -> Vec<Poly<BigInt>>,
    bound: u64,
) -> FieldComparison {
    let mut out = FieldComparison { primes: 0, mismatches: Vec::new() };
    for &d in ds {
        let curve = curve_of(d);
        let gens = gens_of(d);
        for p in arith::primes_up_to(bound).into_iter().filter(|&p| p >= 5 && (n as u64) % p != 0) {
            let a_p = match ecmodel::trace_at(&curve, p, 0) {
                Ok(t) => t,
                Err(CountError::BadReduction(_)) => continue,
                Err(_) => continue,
            };
            let Some(k_e) = super::frobenius_order(&order, p, a_p, n) else { continue };
            let fp = PrimeField::new(p);
            let orders: Option<Vec<u64>> = gens.iter().map(|g| splitting_order(&fp, g)).collect();
            let Some(orders) = orders else { continue };
            let k_f = orders.into_iter().fold(1, arith::lcm_u64);
            out.primes += 1;
            if k_e != k_f {
                out.mismatches.push((d, p, k_e, k_f));
            }
        }
    }
    out
}

fn comparison_check(id: &'static str, statement: &str, c: FieldComparison) -> IdentityCheck {
    let passed = c.mismatches.is_empty() && c.primes > 0;
    let details = if passed {
        format!("Frobenius orders agree at {} (twist, prime) pairs", c.primes)
    } else {
        let shown: Vec<String> =
            c.mismatches.iter().take(4).map(|(d, p, e, f)| format!("d={d} p={p}: Frobenius order {e}, polynomial order {f}")).collect();
        format!("{} of {} (twist, prime) pairs disagree; {}", c.mismatches.len(), c.primes, shown.join("; "))
    };
    check(id, statement, passed, details)
}

fn degree_claims(id: &'static str, statement: &str, curve_of: impl Fn(i64) -> Curve, n: u32, claims: &[(i64, u64)]) -> IdentityCheck {
    let mut bad = Vec::new();
    let mut seen = Vec::new();
    for &(d, want) in claims {
        match torsion_degree_bounds(&curve_of(d), n, 400) {
            Ok(t) => {
                seen.push(format!("d={d}:{}", t.group_bound));
                if t.group_bound != want {
                    bad.push(format!("d={d}: expected {want}, Frobenius group gives {}", t.group_bound));
                }
            }
            Err(e) => bad.push(format!("d={d}: {e}")),
        }
    }
    let passed = bad.is_empty();
    let details = if passed { format!("degrees {}", seen.join(", ")) } else { bad.join("; ") };
    check(id, statement, passed, details)
}

fn zpoly_desc(coeffs: &[i64]) -> Poly<BigInt> {
    coeffs.iter().rev().map(|&c| BigInt::from(c)).collect()
}

/// Printed degree-32 polynomial for j = 8000.
pub const DISC8_F8: [i64; 33] = [
    1, 16, 128, 672, 2544, 7200, 15352, 24272, 26904, 17312, -304, -11984, -9672, -2720, -3592, -7552, -2798, 6224, 6368,
    -672, -2224, 3360, 4952, -1072, -4600, -1120, 1776, 752, -264, -96, 24, 0, 1,
];

/// Printed degree-32 polynomial for j = 287496.
pub const DISC16_F8: [i64; 33] = [
    1, 16, 120, 560, 1848, 4784, 11000, 25344, 59844, 133856, 260768, 419392, 534920, 513536, 332032, 93856, -43548,
    -22112, 61056, 77728, 20768, -18304, 320, 21440, 8240, -8256, -1888, 3584, 800, -1216, 320, 0, 8,
];

fn disc8_checks(out: &mut Vec<IdentityCheck>) {
    let f2 = q2();
    let order = CMOrder::from_disc(-8).expect("order");
    let e = scaled_curve(-4320, 96768, 1);
    let cubic = poly_desc(&f2, &[1, 0, -4320, 96768]);
    let prod = product(
        &f2,
        &[linear(QuadNum::from_ints(-48, 0)), linear(QuadNum::from_ints(24, -36)), linear(QuadNum::from_ints(24, 36))],
    );
    out.push(check(
        "disc8.two-division",
        "x^3 - 4320x + 96768 = (x - 48)(x + 24 - 36 sqrt2)(x + 24 + 36 sqrt2)",
        prod == cubic,
        format!("product {}", show(&prod)),
    ));
    let two = torsion_degree_bounds(&e, 2, 0).map(|t| t.group_bound);
    out.push(check("disc8.two-division-degree", "[Q(E^d[2]):Q] = 2", two == Ok(2), format!("{two:?}")));

    let g4 = poly_desc(&Q, &[1, -96, -288]);
    let h4 = poly_desc(&Q, &[1, 96, -12096, 801792, -19823616]);
    let ratio = division_ratio(&e, 4, 2, 2);
    let ok = ratio.as_ref().map(|r| *r == poly::mul(&Q, &g4, &h4)).unwrap_or(false);
    out.push(check(
        "disc8.psi4",
        "psi_4/(2 psi_2) = (x^2 - 96x - 288)(x^4 + 96x^3 - 12096x^2 + 801792x - 19823616)",
        ok,
        match &ratio {
            Ok(r) => format!("computed {}", show(r)),
            Err(e) => format!("{e}"),
        },
    ));
    let g4q: Poly<QuadNum> = g4.clone();
    let roots = product(&f2, &[linear(QuadNum::from_ints(-48, -36)), linear(QuadNum::from_ints(-48, 36))]);
    out.push(check("disc8.g4-roots", "g_4 = (x - 48 - 36 sqrt2)(x - 48 + 36 sqrt2)", roots == g4q, format!("product {}", show(&roots))));

    let q8 = division_ratio(&e, 8, 4, 2);
    let degs = q8.as_ref().ok().and_then(|r| super::rational_factor_degrees(r));
    out.push(check(
        "disc8.psi8",
        "psi_8/(2 psi_4) is a product of irreducible factors of degrees 8 and 16",
        degs.as_deref() == Some(&[8, 16][..]),
        format!("exact division {}; rational factor degrees {:?}", if q8.is_ok() { "ok" } else { "failed" }, degs),
    ));

    let ds = [1, -1, 2, -2, 3, -5, 6];
    let f4 = zpoly_desc(&[1, 0, 0, 0, 6, 0, 0, 0, 1]);
    out.push(comparison_check(
        "disc8.four-division-field",
        "Q(E^d[4]) = Q(alpha, sqrt(d) 2^(1/4)) with f_4(alpha) = 0, f_4 = x^8 + 6x^4 + 1",
        compare_division_field(order, 4, &ds, |d| scaled_curve(-4320, 96768, d), |d| vec![f4.clone(), zpoly_desc(&[1, 0, 0, 0, -2 * d * d])], 1500),
    ));
    let f8 = zpoly_desc(&DISC8_F8);
    out.push(comparison_check(
        "disc8.eight-division-field",
        "Q(E^d[8]) = Q(beta, sqrt d) with f_8(beta) = 0 (degree 32)",
        compare_division_field(order, 8, &ds, |d| scaled_curve(-4320, 96768, d), |d| vec![f8.clone(), zpoly_desc(&[1, 0, -d])], 1500),
    ));
    out.push(degree_claims(
        "disc8.four-division-degree",
        "[Q(E^d[4]):Q] = 16",
        |d| scaled_curve(-4320, 96768, d),
        4,
        &[(1, 16), (-1, 16), (2, 16), (3, 16), (-7, 16)],
    ));
    out.push(degree_claims(
        "disc8.eight-division-degree",
        "[Q(E^d[8]):Q] = 32 iff d in {1, -1, 2, -2}, else 64",
        |d| scaled_curve(-4320, 96768, d),
        8,
        &[(1, 32), (-1, 32), (2, 32), (-2, 32), (3, 64), (-5, 64), (6, 64)],
    ));
}

fn disc16_checks(out: &mut Vec<IdentityCheck>) {
    let f2 = q2();
    let order = CMOrder::from_disc(-16).expect("order");
    let e = scaled_curve(-11, 14, 1);
    let cubic = poly_desc(&f2, &[1, 0, -11, 14]);
    let prod = product(
        &f2,
        &[linear(QuadNum::from_ints(-2, 0)), linear(QuadNum::from_ints(1, -2)), linear(QuadNum::from_ints(1, 2))],
    );
    out.push(check(
        "disc16.two-division",
        "x^3 - 11x + 14 = (x - 2)(x + 1 - 2 sqrt2)(x + 1 + 2 sqrt2)",
        prod == cubic,
        format!("product {}", show(&prod)),
    ));
    let two = torsion_degree_bounds(&e, 2, 0).map(|t| t.group_bound);
    out.push(check("disc16.two-division-degree", "[Q(E^d[2]):Q] = 2", two == Ok(2), format!("{two:?}")));

    let ratio = division_ratio(&e, 4, 2, 2);
    let lin = poly_desc(&Q, &[1, -4, 3]);
    let g4 = ratio.as_ref().ok().and_then(|r| poly::div_exact(&Q, r, &lin));
    let (ok, details) = match &g4 {
        Some(g) => {
            let z = integer_form(g).expect("rational");
            let witness = zfactor::irreducible_witness(&z, 200);
            let irreducible = witness.is_some() || zfactor::factor_degrees(&z) == vec![4];
            (
                poly::degree(g) == Some(4) && irreducible,
                format!("g_4 = {}; irreducible mod {:?}", show(g), witness),
            )
        }
        None => (false, String::from("(x - 1)(x - 3) does not divide psi_4/(2 psi_2)")),
    };
    out.push(check("disc16.psi4", "psi_4/(2 psi_2) = (x - 1)(x - 3) g_4 with g_4 an irreducible quartic", ok, details));

    let q8 = division_ratio(&e, 8, 4, 2);
    let degs = q8.as_ref().ok().and_then(|r| super::rational_factor_degrees(r));
    out.push(check(
        "disc16.psi8",
        "psi_8/(2 psi_4) is a product of irreducible factors of degrees 4, 4 and 16",
        degs.as_deref() == Some(&[4, 4, 16][..]),
        format!("exact division {}; rational factor degrees {:?}", if q8.is_ok() { "ok" } else { "failed" }, degs),
    ));

    let ds = [1, -1, 2, -2, 3, -5, 6];
    let f4 = zpoly_desc(&[1, 0, -4, 0, 8, 0, -4, 0, 1]);
    out.push(comparison_check(
        "disc16.four-division-field",
        "Q(E^d[4]) = Q(alpha, sqrt d) with f_4(alpha) = 0, f_4 = x^8 - 4x^6 + 8x^4 - 4x^2 + 1",
        compare_division_field(order, 4, &ds, |d| scaled_curve(-11, 14, d), |d| vec![f4.clone(), zpoly_desc(&[1, 0, -d])], 1500),
    ));
    let f8 = zpoly_desc(&DISC16_F8);
    let printed = compare_division_field(order, 8, &ds, |d| scaled_curve(-11, 14, d), |d| vec![f8.clone(), zpoly_desc(&[1, 0, -d])], 1500);
    out.push(comparison_check("disc16.eight-division-field", "Q(E^d[8]) = Q(beta, sqrt d) with f_8(beta) = 0 (degree 32)", printed));
    out.push(degree_claims(
        "disc16.four-division-degree",
        "[Q(E^d[4]):Q] = 8 iff d in {1, -1, 2, -2}, else 16",
        |d| scaled_curve(-11, 14, d),
        4,
        &[(1, 8), (-1, 8), (2, 8), (-2, 8), (3, 16), (-5, 16)],
    ));
    out.push(degree_claims(
        "disc16.eight-division-degree",
        "[Q(E^d[8]):Q] = 32 iff d in {1, -1, 2, -2}, else 64",
        |d| scaled_curve(-11, 14, d),
        8,
        &[(1, 32), (-1, 32), (2, 32), (-2, 32), (3, 64), (-5, 64)],
    ));
}

fn j1728_checks(out: &mut Vec<IdentityCheck>) {
    let order = CMOrder::from_disc(-4).expect("order");
    let curve = |d: i64| Curve::short_rational(d, 0).expect("nonsingular");
    // y^2 = x^3 - N x with N = -d > 0
    let ds = [-1, -2, -3, -5, -6, -7, -12];
    out.push(comparison_check(
        "j1728.four-division-field",
        "Q(E[4]) = Q(zeta_8, N^(1/4)) for y^2 = x^3 - N x, N > 0",
        compare_division_field(order, 4, &ds, curve, |d| vec![zpoly_desc(&[1, 0, 0, 0, 1]), zpoly_desc(&[1, 0, 0, 0, d])], 1500),
    ));
    out.push(comparison_check(
        "j1728.eight-division-field",
        "Q(E[8]) = Q(zeta_16, sqrt(-1 + sqrt2), N^(1/4)) for y^2 = x^3 - N x, N > 0",
        compare_division_field(
            order,
            8,
            &ds,
            curve,
            |d| vec![zpoly_desc(&[1, 0, 0, 0, 0, 0, 0, 0, 1]), zpoly_desc(&[1, 0, 2, 0, -1]), zpoly_desc(&[1, 0, 0, 0, d])],
            1500,
        ),
    ));
    out.push(degree_claims(
        "j1728.eight-division-degree",
        "[Q(E^d[8]):Q] = 16 iff d in {1, -1, 2, -2, 4, -4, 8, -8}; 32 iff d = t^2, -t^2, 2t^2 or -2t^2 otherwise; else 64",
        curve,
        8,
        &[(1, 16), (-1, 16), (2, 16), (-2, 16), (4, 16), (-4, 16), (8, 16), (-8, 16), (9, 32), (-9, 32), (18, 32), (-50, 32), (3, 64), (-5, 64), (6, 64)],
    ));
}

fn j0_checks(out: &mut Vec<IdentityCheck>) {
    let order = CMOrder::from_disc(-3).expect("order");
    let curve = |d: i64| Curve::short_rational(0, 16 * d).expect("nonsingular");
    let mut bad = Vec::new();
    for d in [1, 2, -3, 5, -27, 81] {
        let f3 = division_polynomial(&curve(d), 3).expect("index in range");
        let want = poly_desc(&Q, &[3, 0, 0, 192 * d, 0]);
        if f3 != want {
            bad.push(format!("d={d}: {}", show(&f3)));
        }
    }
    out.push(check("j0.psi3", "psi_3 = 3x(x^3 + 64d) for y^2 = x^3 + 16d", bad.is_empty(), if bad.is_empty() { String::from("d in {1, 2, -3, 5, -27, 81}") } else { bad.join("; ") }));

    // F_9 = psi_9/(3 psi_3); with x^3 = 64 d z it becomes 2^72 d^12 P(z)
    let mut pz: Option<Poly<BigRational>> = None;
    let mut notes = Vec::new();
    let mut ok = true;
    for d in [1i64, 2, -3, 7] {
        let f9 = match division_ratio(&curve(d), 9, 3, 3) {
            Ok(f) => f,
            Err(e) => {
                ok = false;
                notes.push(format!("d={d}: {e}"));
                continue;
            }
        };
        if poly::degree(&f9) != Some(36) {
            ok = false;
            notes.push(format!("d={d}: degree {:?}", poly::degree(&f9)));
        }
        let mut p = Vec::new();
        let scale = BigRational::from_integer(BigInt::from(2).pow(72) * BigInt::from(d).pow(12));
        let base = BigRational::from_integer(BigInt::from(64 * d));
        for (i, c) in f9.iter().enumerate() {
            if i % 3 != 0 {
                if !(c.x.is_zero() && c.y.is_zero()) {
                    ok = false;
                    notes.push(format!("d={d}: term x^{i} present"));
                }
                continue;
            }
            let k = (i / 3) as i32;
            p.push(&c.x * num_traits::pow(base.clone(), k as usize) / &scale);
        }
        match &pz {
            None => pz = Some(p),
            Some(q) if *q != p => {
                ok = false;
                notes.push(format!("d={d}: P(z) differs from d=1"));
            }
            _ => {}
        }
    }
    let p = pz.unwrap_or_default();
    let monic = p.last().map(|c| c.is_one()).unwrap_or(false);
    let z = poly::primitive_part(&p);
    let factors = zfactor::factor_squarefree_z(&z);
    let degs: Vec<usize> = factors.iter().map(|f| f.len() - 1).collect();
    out.push(check(
        "j0.psi9",
        "psi_9/(3 psi_3) has degree 36 and equals 2^72 d^12 f_9(z) g_9(z) with x^3 = 64 d z, deg f_9 = 3, deg g_9 = 9",
        ok && monic && degs == vec![3, 9],
        format!("P(z) monic {monic}, same for d in {{1, 2, -3, 7}}, factor degrees {degs:?}{}", if notes.is_empty() { String::new() } else { format!("; {}", notes.join("; ")) }),
    ));

    if degs == vec![3, 9] {
        let (f9, g9) = (factors[0].clone(), factors[1].clone());
        let real9 = zpoly_desc(&[1, 0, -3, 1]);
        let mut agree = 0;
        let mut mismatch = Vec::new();
        for p in arith::primes_up_to(3000).into_iter().filter(|&p| p >= 5) {
            let fp = PrimeField::new(p);
            if let (Some(a), Some(b)) = (splitting_order(&fp, &f9), splitting_order(&fp, &real9)) {
                if a == b {
                    agree += 1;
                } else {
                    mismatch.push(p);
                }
            }
        }
        out.push(check(
            "j0.f9-field",
            "the splitting field of f_9 is Q(zeta_9)^+ = Q(cos(2 pi/9))",
            mismatch.is_empty() && agree > 0,
            format!("f_9 = {:?}; split behaviour matches x^3 - 3x + 1 at {agree} primes; mismatches {mismatch:?}", f9),
        ));
        let gens = [real9, zpoly_desc(&[1, 0, 0, -3]), zpoly_desc(&[1, 0, 3])];
        let mut agree = 0;
        let mut mismatch = Vec::new();
        for p in arith::primes_up_to(3000).into_iter().filter(|&p| p >= 5) {
            let fp = PrimeField::new(p);
            let a = splitting_order(&fp, &g9);
            let b: Option<Vec<u64>> = gens.iter().map(|g| splitting_order(&fp, g)).collect();
            if let (Some(a), Some(b)) = (a, b) {
                if a == b.into_iter().fold(1, arith::lcm_u64) {
                    agree += 1;
                } else {
                    mismatch.push(p);
                }
            }
        }
        out.push(check(
            "j0.g9-field",
            "the splitting field of g_9 is Q(zeta_9)^+(3^(1/3), sqrt(-3))",
            mismatch.is_empty() && agree > 0,
            format!("orders agree at {agree} primes; mismatches {mismatch:?}"),
        ));
    }

    let ds = [1, -27, 2, 4, -12, 5, 8, -3, 9];
    out.push(comparison_check(
        "j0.three-division-field",
        "Q(E^d[3]) = Q(sqrt d, sqrt(-3), d^(1/3))",
        compare_division_field(order, 3, &ds, curve, |d| vec![zpoly_desc(&[1, 0, -d]), zpoly_desc(&[1, 0, 3]), zpoly_desc(&[1, 0, 0, -d])], 2000),
    ));
    out.push(comparison_check(
        "j0.nine-division-field",
        "Q(E^d[9]) = Q(sqrt(-3), 3^(1/3), sqrt d, d^(1/3), cos(2 pi/9))",
        compare_division_field(
            order,
            9,
            &ds,
            curve,
            |d| {
                vec![
                    zpoly_desc(&[1, 0, 3]),
                    zpoly_desc(&[1, 0, 0, -3]),
                    zpoly_desc(&[1, 0, -d]),
                    zpoly_desc(&[1, 0, 0, -d]),
                    zpoly_desc(&[1, 0, -3, 1]),
                ]
            },
            2000,
        ),
    ));
    out.push(degree_claims(
        "j0.three-division-degree",
        "[Q(E^d[3]):Q] = 2 for d in {1, -27}; 4 for d = t^3; 6 for d = t^2 or -3t^2; else 12",
        curve,
        3,
        &[(1, 2), (-27, 2), (8, 4), (-1, 4), (4, 6), (-12, 6), (25, 6), (2, 12), (5, 12), (3, 12)],
    ));
    out.push(degree_claims(
        "j0.nine-division-degree",
        "[Q(E^d[9]):Q] = 18 for d in {1, -3, 9, -27, 81, -243}; 36 for t^3, 3t^3, 9t^3; 54 for t^2, -3t^2; else 108",
        curve,
        9,
        &[(1, 18), (-3, 18), (9, 18), (-27, 18), (81, 18), (-243, 18), (8, 36), (24, 36), (72, 36), (4, 54), (-12, 54), (2, 108), (5, 108)],
    ));
}

/// Runs every check; failures are entries, never errors.
pub fn verify_stated_factorizations() -> Vec<IdentityCheck> {
    let mut out = Vec::new();
    let e = scaled_curve(-4320, 96768, 1);
    let same = division_polynomial(&e, 5) == division_polynomial(&e, 5);
    out.push(check("trivial", "psi_N = psi_N", same, String::from("N = 5")));
    disc8_checks(&mut out);
    disc16_checks(&mut out);
    j1728_checks(&mut out);
    j0_checks(&mut out);
    out
}
