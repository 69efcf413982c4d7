//! Factorization of squarefree integer polynomials over Q (Zassenhaus:
//! factor mod p, Hensel lift to p^k past the coefficient bound, recombine).

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith;
use crate::field::{Field, PrimeField, ZmodN};
use crate::poly::{self, Poly};

/// Content-free, positive leading coefficient.
fn primitive(f: &[BigInt]) -> Poly<BigInt> {
    let g = f.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if g.is_zero() {
        return Vec::new();
    }
    let s = if f.last().unwrap().is_negative() { -g } else { g };
    f.iter().map(|c| c / &s).collect()
}

fn to_fp(fp: &PrimeField, f: &[BigInt]) -> Poly<u64> {
    poly::trim(fp, f.iter().map(|c| fp.reduce_int(c)).collect())
}

fn lift_to_z(f: &[u64]) -> Poly<BigInt> {
    f.iter().map(|&c| BigInt::from(c)).collect()
}

/// Exact division in Z[x]; `None` unless `b | a`.
pub fn div_exact_z(a: &[BigInt], b: &[BigInt]) -> Option<Poly<BigInt>> {
    let db = b.len().checked_sub(1)?;
    let lead = &b[db];
    let mut rem = a.to_vec();
    if rem.len() <= db {
        return rem.iter().all(|c| c.is_zero()).then(Vec::new);
    }
    let mut q = vec![BigInt::zero(); rem.len() - db];
    for i in (db..rem.len()).rev() {
        let (c, r) = rem[i].div_rem(lead);
        if !r.is_zero() {
            return None;
        }
        if c.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            rem[i - db + j] -= &c * bj;
        }
        q[i - db] = c;
    }
    rem[..db].iter().all(|c| c.is_zero()).then_some(q)
}

pub fn mul_z(a: &[BigInt], b: &[BigInt]) -> Poly<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Squarefree mod p with the leading coefficient kept.
fn good_prime(f: &[BigInt], p: u64) -> bool {
    let fp = PrimeField::new(p);
    let g = to_fp(&fp, f);
    g.len() == f.len() && poly::is_squarefree_mod_p(&fp, &g)
}

/// Lifts `f = g h mod p` (g, h monic mod p, f monic) to `mod p^k`.
fn hensel_pair(f: &[BigInt], g: &[u64], h: &[u64], p: u64, k: u32) -> (Poly<BigInt>, Poly<BigInt>) {
    let fp = PrimeField::new(p);
    // s g + t h = 1 mod p
    let (s, t) = ext_gcd(&fp, g, h);
    let mut gz = lift_to_z(g);
    let mut hz = lift_to_z(h);
    let mut pj = BigInt::from(p);
    let pk = BigInt::from(p).pow(k);
    for _ in 1..k {
        let ring = ZmodN::new(pk.clone());
        let prod = poly::mul(&ring, &gz.iter().map(|c| ring.reduce(c)).collect::<Vec<_>>(), &hz);
        let fk: Vec<BigInt> = f.iter().map(|c| ring.reduce(c)).collect();
        let diff = poly::sub(&ring, &fk, &prod);
        // e = diff / p^j mod p
        let e: Poly<u64> = poly::trim(&fp, diff.iter().map(|c| fp.reduce_int(&(c / &pj))).collect());
        let (q, gg) = poly::divrem(&fp, &poly::mul(&fp, &e, &t), g).unwrap();
        let hh = poly::add(&fp, &poly::mul(&fp, &e, &s), &poly::mul(&fp, &q, h));
        gz = add_scaled(&gz, &gg, &pj);
        hz = add_scaled(&hz, &hh, &pj);
        pj *= p;
    }
    (gz, hz)
}

fn add_scaled(a: &[BigInt], b: &[u64], s: &BigInt) -> Poly<BigInt> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| a.get(i).cloned().unwrap_or_default() + BigInt::from(b.get(i).copied().unwrap_or(0)) * s)
        .collect()
}

/// `(s, t)` with `s a + t b = 1` for coprime a, b over F_p.
fn ext_gcd(fp: &PrimeField, a: &[u64], b: &[u64]) -> (Poly<u64>, Poly<u64>) {
    let (mut r0, mut r1) = (a.to_vec(), b.to_vec());
    let (mut s0, mut s1) = (poly::constant(fp, 1), Vec::new());
    let (mut t0, mut t1) = (Vec::new(), poly::constant(fp, 1));
    while !r1.is_empty() {
        let (q, r) = poly::divrem(fp, &r0, &r1).unwrap();
        let s2 = poly::sub(fp, &s0, &poly::mul(fp, &q, &s1));
        let t2 = poly::sub(fp, &t0, &poly::mul(fp, &q, &t1));
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s2;
        t0 = t1;
        t1 = t2;
    }
    let c = fp.inv(&r0[0]).expect("coprime inputs");
    (poly::scale(fp, &s0, &c), poly::scale(fp, &t0, &c))
}

/// Lifts a factorization of monic f mod p into the given monic factors.
fn hensel_multi(f: &[BigInt], factors: &[Poly<u64>], p: u64, k: u32) -> Vec<Poly<BigInt>> {
    if factors.len() == 1 {
        let pk = BigInt::from(p).pow(k);
        return vec![f.iter().map(|c| c.mod_floor(&pk)).collect()];
    }
    let fp = PrimeField::new(p);
    let mid = factors.len() / 2;
    let prod = |fs: &[Poly<u64>]| fs.iter().fold(poly::constant(&fp, 1), |acc, g| poly::mul(&fp, &acc, g));
    let g = prod(&factors[..mid]);
    let h = prod(&factors[mid..]);
    let (gz, hz) = hensel_pair(f, &g, &h, p, k);
    let mut out = hensel_multi(&gz, &factors[..mid], p, k);
    out.extend(hensel_multi(&hz, &factors[mid..], p, k));
    out
}

fn symmetric(c: &BigInt, m: &BigInt) -> BigInt {
    let r = c.mod_floor(m);
    if &r * 2 > *m {
        r - m
    } else {
        r
    }
}

/// Irreducible factors over Q of a squarefree integer polynomial, each
/// primitive with positive leading coefficient, sorted by degree.
pub fn factor_squarefree_z(f: &[BigInt]) -> Vec<Poly<BigInt>> {
    let f = primitive(f);
    let n = f.len() - 1;
    if n <= 1 {
        return vec![f];
    }
    let lc = f[n].clone();
    let factors = factor_monic(&monic_transform(&f));
    let mut out: Vec<Poly<BigInt>> = factors.iter().map(|h| primitive(&undo_monic_transform(h, &lc))).collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

/// `lc^(n-1) f(y / lc)`, monic with integer coefficients.
fn monic_transform(f: &[BigInt]) -> Poly<BigInt> {
    let n = f.len() - 1;
    let lc = &f[n];
    (0..=n)
        .map(|i| if i == n { BigInt::one() } else { &f[i] * lc.pow((n - 1 - i) as u32) })
        .collect()
}

/// A factor h(y) of the transformed polynomial gives h(lc x) over Q.
fn undo_monic_transform(h: &[BigInt], lc: &BigInt) -> Poly<BigInt> {
    h.iter().enumerate().map(|(i, c)| c * lc.pow(i as u32)).collect()
}

fn factor_monic(f: &[BigInt]) -> Vec<Poly<BigInt>> {
    let n = f.len() - 1;
    if n <= 1 {
        return vec![f.to_vec()];
    }
    // Pick the prime with the fewest modular factors among a few candidates.
    let mut best: Option<(u64, Vec<Poly<u64>>)> = None;
    let mut tried = 0;
    for p in arith::primes_up_to(2000).into_iter().skip(1) {
        if !good_prime(f, p) {
            continue;
        }
        let fp = PrimeField::new(p);
        let fs = poly::factor_squarefree(&fp, &to_fp(&fp, f));
        if fs.len() == 1 {
            return vec![f.to_vec()];
        }
        if best.as_ref().is_none_or(|(_, b)| fs.len() < b.len()) {
            best = Some((p, fs));
        }
        tried += 1;
        if tried >= 12 {
            break;
        }
    }
    let (p, modular) = best.expect("a good prime below 2000");
    // Mignotte-style bound on factor coefficients: 2^n * ||f||_2.
    let norm2 = arith::isqrt_big(&f.iter().map(|c| c.magnitude() * c.magnitude()).sum::<BigUint>()) + 1u32;
    let bound = BigInt::from(norm2) << (n + 1);
    let mut k = 1u32;
    let mut pk = BigInt::from(p);
    while pk <= bound {
        k += 1;
        pk *= p;
    }
    let lifted = hensel_multi(f, &modular, p, k);
    recombine(f, lifted, &pk)
}

fn recombine(f: &[BigInt], mut lifted: Vec<Poly<BigInt>>, pk: &BigInt) -> Vec<Poly<BigInt>> {
    let mut out = Vec::new();
    let mut rest = f.to_vec();
    let mut size = 1;
    while 2 * size <= lifted.len() {
        let mut found = false;
        for subset in subsets(lifted.len(), size) {
            let cand = subset.iter().fold(vec![BigInt::one()], |acc, &i| {
                mul_z(&acc, &lifted[i]).iter().map(|c| c.mod_floor(pk)).collect()
            });
            let cand: Poly<BigInt> = cand.iter().map(|c| symmetric(c, pk)).collect();
            if let Some(q) = div_exact_z(&rest, &cand) {
                out.push(cand);
                rest = q;
                let mut i = lifted.len();
                while i > 0 {
                    i -= 1;
                    if subset.contains(&i) {
                        lifted.remove(i);
                    }
                }
                found = true;
                break;
            }
        }
        if !found {
            size += 1;
        }
    }
    out.push(rest);
    out
}

/// All increasing index tuples of the given size.
fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    go(0, n, k, &mut cur, &mut out);
    out
}

/// Degrees of the rational irreducible factors.
pub fn factor_degrees(f: &[BigInt]) -> Vec<usize> {
    let mut v: Vec<usize> = factor_squarefree_z(f).iter().map(|g| g.len() - 1).collect();
    v.sort_unstable();
    v
}

/// Certificate of irreducibility: a prime p with f mod p irreducible of full degree.
pub fn irreducible_witness(f: &[BigInt], max_p: u64) -> Option<u64> {
    let n = f.len() - 1;
    arith::primes_up_to(max_p).into_iter().skip(1).find(|&p| {
        if !good_prime(f, p) {
            return false;
        }
        let fp = PrimeField::new(p);
        poly::degree_pattern(&fp, &to_fp(&fp, f)) == vec![n]
    })
}

/// Parses small integer coefficient lists (little-endian) into a BigInt poly.
pub fn from_i64(coeffs: &[i64]) -> Poly<BigInt> {
    coeffs.iter().map(|&c| BigInt::from(c)).collect()
}

pub fn is_monic(f: &[BigInt]) -> bool {
    f.last().and_then(|c| c.to_i64()) == Some(1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factors_small_products() {
        // (x^2 + 1)(x^3 - 2)(2x + 3)
        let a = from_i64(&[1, 0, 1]);
        let b = from_i64(&[-2, 0, 0, 1]);
        let c = from_i64(&[3, 2]);
        let f = mul_z(&mul_z(&a, &b), &c);
        let fs = factor_squarefree_z(&f);
        assert_eq!(fs, vec![c, a, b]);
    }

    #[test]
    fn swinnerton_dyer_like_stays_irreducible() {
        // x^4 - 10x^2 + 1 splits mod every prime but is irreducible.
        let f = from_i64(&[1, 0, -10, 0, 1]);
        assert_eq!(factor_degrees(&f), vec![4]);
        assert_eq!(irreducible_witness(&f, 1000), None);
        assert!(irreducible_witness(&from_i64(&[-2, 0, 0, 1]), 100).is_some());
    }
}
