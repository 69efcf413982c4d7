//! Point counting over prime fields.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use super::Curve;
use crate::arith;
use crate::field::{Field, PrimeField, Ring};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CountError {
    #[error("bad reduction at {0}")]
    BadReduction(u64),
    #[error("primes below 5 are skipped")]
    SmallPrime(u64),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{0} is not a degree-one prime of the base field")]
    NotDegreeOne(u64),
}

/// Largest p counted by the character sum; larger p use baby-step giant-step.
pub const CHARACTER_SUM_LIMIT: u64 = 10_000;

/// Short model `(A, B)` reduced at the prime `(p, a - r)`.
pub fn reduce_short(curve: &Curve, p: u64, r: u64) -> Result<(u64, u64), CountError> {
    if p < 5 {
        return Err(CountError::SmallPrime(p));
    }
    if !arith::is_prime(p as u128) {
        return Err(CountError::NotPrime(p));
    }
    let fp = PrimeField::new(p);
    let (a, b) = curve.short_coefficients();
    let ar = curve.field.reduce(&a, &fp, r).ok_or(CountError::BadReduction(p))?;
    let br = curve.field.reduce(&b, &fp, r).ok_or(CountError::BadReduction(p))?;
    // 4A^3 + 27B^2 != 0
    let d = fp.add(&fp.scale(&fp.pow(&ar, 3), 4), &fp.scale(&fp.mul(&br, &br), 27));
    if d == 0 {
        return Err(CountError::BadReduction(p));
    }
    Ok((ar, br))
}

/// `a_p = p + 1 - #E(F_p)` for `y^2 = x^3 + A x + B` over F_p.
pub fn trace_short(p: u64, a: u64, b: u64) -> i64 {
    if p <= CHARACTER_SUM_LIMIT {
        character_sum(p, a, b)
    } else {
        bsgs_trace(p, a, b).unwrap_or_else(|| character_sum(p, a, b))
    }
}

/// Trace of Frobenius at a prime of degree one (`a -> r`; r ignored over Q).
pub fn trace_at(curve: &Curve, p: u64, r: u64) -> Result<i64, CountError> {
    let (a, b) = reduce_short(curve, p, r)?;
    Ok(trace_short(p, a, b))
}

/// Trace of Frobenius for a model over Q.
pub fn trace_of_frobenius(curve: &Curve, p: u64) -> Result<i64, CountError> {
    if curve.field.quad().is_some() {
        let roots = curve.field.residue_maps(p);
        let r = *roots.first().ok_or(CountError::NotDegreeOne(p))?;
        return trace_at(curve, p, r);
    }
    trace_at(curve, p, 0)
}

pub fn character_sum(p: u64, a: u64, b: u64) -> i64 {
    let mut is_sq = vec![false; p as usize];
    for x in 1..p {
        is_sq[((x as u128 * x as u128) % p as u128) as usize] = true;
    }
    let mut sum: i64 = 0;
    for x in 0..p {
        let x2 = (x as u128 * x as u128) % p as u128;
        let v = ((x2 * x as u128 + a as u128 * x as u128 + b as u128) % p as u128) as usize;
        if v != 0 {
            sum += if is_sq[v] { 1 } else { -1 };
        }
    }
    -sum
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Pt {
    Inf,
    Aff(u64, u64),
}

struct Arith {
    fp: PrimeField,
    a: u64,
}

impl Arith {
    fn neg(&self, p: Pt) -> Pt {
        match p {
            Pt::Inf => Pt::Inf,
            Pt::Aff(x, y) => Pt::Aff(x, self.fp.neg(&y)),
        }
    }

    fn add(&self, p: Pt, q: Pt) -> Pt {
        let f = &self.fp;
        match (p, q) {
            (Pt::Inf, _) => q,
            (_, Pt::Inf) => p,
            (Pt::Aff(x1, y1), Pt::Aff(x2, y2)) => {
                let lam = if x1 == x2 {
                    if f.add(&y1, &y2) == 0 {
                        return Pt::Inf;
                    }
                    let num = f.add(&f.scale(&f.mul(&x1, &x1), 3), &self.a);
                    f.mul(&num, &f.inv(&f.scale(&y1, 2)).unwrap())
                } else {
                    let num = f.sub(&y2, &y1);
                    f.mul(&num, &f.inv(&f.sub(&x2, &x1)).unwrap())
                };
                let x3 = f.sub(&f.sub(&f.mul(&lam, &lam), &x1), &x2);
                let y3 = f.sub(&f.mul(&lam, &f.sub(&x1, &x3)), &y1);
                Pt::Aff(x3, y3)
            }
        }
    }

    fn mul(&self, mut k: u64, p: Pt) -> Pt {
        let mut acc = Pt::Inf;
        let mut base = p;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(acc, base);
            }
            base = self.add(base, base);
            k >>= 1;
        }
        acc
    }
}

/// A point of `y^2 = x^3 + A x + B` over F_p with x drawn from a fixed sequence.
fn point_from_seed(fp: &PrimeField, a: u64, b: u64, seed: &mut u64) -> Pt {
    loop {
        *seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        let x = (*seed >> 11) % fp.p;
        let v = fp.add(&fp.add(&fp.pow(&x, 3), &fp.mul(&a, &x)), &b);
        if v == 0 {
            return Pt::Aff(x, 0);
        }
        if let Ok(y) = arith::sqrt_mod(v, fp.p) {
            return Pt::Aff(x, y);
        }
    }
}

/// All N in the Hasse interval with N P = O.
fn hasse_multiples(ar: &Arith, p: Pt, lo: u64, hi: u64) -> Vec<u64> {
    let width = hi - lo;
    let m = arith::isqrt(width as u128) as u64 + 1;
    let mut baby: BTreeMap<u64, Vec<(u64, Pt)>> = BTreeMap::new();
    let mut cur = Pt::Inf;
    for j in 0..=m {
        if let Pt::Aff(x, _) = cur {
            baby.entry(x).or_default().push((j, cur));
        }
        cur = ar.add(cur, p);
    }
    let step = ar.mul(m, p);
    let mut giant = ar.mul(lo, p);
    let mut out = Vec::new();
    let mut base = lo;
    while base <= hi + m {
        // giant = base * P; solutions base - j or base + j
        match giant {
            Pt::Inf => out.push(base),
            Pt::Aff(x, _) => {
                if let Some(list) = baby.get(&x) {
                    for &(j, pt) in list {
                        if pt == giant {
                            out.push(base - j.min(base));
                        } else if ar.neg(pt) == giant {
                            out.push(base + j);
                        }
                    }
                }
            }
        }
        giant = ar.add(giant, step);
        base += m;
    }
    out.retain(|&n| n >= lo && n <= hi && ar.mul(n, p) == Pt::Inf);
    out.sort_unstable();
    out.dedup();
    out
}

/// Traces a with `p + 1 - a` a multiple of the order of some sampled points.
fn trace_candidates(p: u64, a: u64, b: u64, seed: &mut u64, rounds: usize) -> Vec<i64> {
    let fp = PrimeField::new(p);
    let ar = Arith { fp, a };
    let s = 2 * arith::isqrt(p as u128) as u64 + 1;
    let lo = (p + 1).saturating_sub(s).max(1);
    let hi = p + 1 + s;
    let mut cands: Option<Vec<u64>> = None;
    for _ in 0..rounds {
        let pt = point_from_seed(&fp, a, b, seed);
        let ms = hasse_multiples(&ar, pt, lo, hi);
        cands = Some(match cands {
            None => ms,
            Some(c) => c.into_iter().filter(|n| ms.contains(n)).collect(),
        });
    }
    let bound = 4 * p as i128;
    cands
        .unwrap_or_default()
        .into_iter()
        .map(|n| p as i64 + 1 - n as i64)
        .filter(|&t| (t as i128) * (t as i128) <= bound)
        .collect()
}

/// Baby-step giant-step on the Hasse interval, run on the curve and on its
/// quadratic twist (traces of the two are negatives); `None` if ambiguous.
pub fn bsgs_trace(p: u64, a: u64, b: u64) -> Option<i64> {
    let fp = PrimeField::new(p);
    let c = (2..p).find(|&c| fp.legendre(c) == -1)?;
    let (ta, tb) = (fp.mul(&a, &fp.mul(&c, &c)), fp.mul(&b, &fp.pow(&c, 3)));
    let mut seed = p ^ 0x9e37_79b9;
    let mut rounds = 3;
    while rounds <= 48 {
        let own = trace_candidates(p, a, b, &mut seed, rounds);
        let twisted = trace_candidates(p, ta, tb, &mut seed, rounds);
        let both: Vec<i64> = own.iter().copied().filter(|t| twisted.contains(&-t)).collect();
        if both.len() == 1 {
            return Some(both[0]);
        }
        rounds *= 2;
    }
    None
}
