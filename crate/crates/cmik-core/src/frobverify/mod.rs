//! Frobenius sampling and empirical tests of candidate images.
//!
//! A sample at a degree-one prime p of the base field records `a_p` and the
//! pair `(a_p, p)` mod l^n, which is `(trace, det)` of the Frobenius element.
//! A candidate group is inconsistent if some sample is realized by none of its
//! elements. Among consistent candidates we rank by the likelihood of the
//! observed classes under equidistribution in the candidate.

mod isogeny;

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use thiserror::Error;

use crate::arith;
use crate::ecmodel::{self, identify_order, CountError, Curve, EcError};
use crate::modgroup::{GL2Mod, ModGroupError, Subgroup};

pub use isogeny::{isogenous_j, is_square_mod, kernel_eigenvalue, MAX_EXTENSION_DEGREE};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FrobError {
    #[error("prime budget {0} is below 100")]
    Budget(u64),
    #[error("only {0} usable primes (need at least 30)")]
    TooFewPrimes(usize),
    #[error("modulus {0}^{1} is too large")]
    Modulus(u32, u32),
    #[error("the mod-{0} image is not of Borel type for this curve")]
    NotBorel(u64),
    #[error("no kernel line found at p = {0}")]
    KernelNotFound(u64),
    #[error("every candidate was eliminated")]
    NoCandidates,
    #[error("unsupported: {0}")]
    Unsupported(&'static str),
    #[error(transparent)]
    Count(#[from] CountError),
    #[error(transparent)]
    Curve(#[from] EcError),
    #[error(transparent)]
    Group(#[from] ModGroupError),
}

/// Smallest budget accepted by [`sample_frobenius_data`].
pub const MIN_BUDGET: u64 = 100;
/// Fewest usable samples.
pub const MIN_SAMPLES: usize = 30;
/// Chebotarev mass above which a class should be seen.
pub const HEAVY_MASS: f64 = 0.05;
/// Sample count at which coverage is judged.
pub const COVERAGE_SAMPLES: usize = 300;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FrobSample {
    pub p: u64,
    /// Residue map `a -> root` of the prime (0 over Q).
    pub root: u64,
    pub a_p: i64,
    pub trace: u32,
    pub det: u32,
    /// Eigenvalue on the rational l-isogeny kernel, mod l, when computed.
    pub lambda: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrobData {
    pub ell: u32,
    pub n: u32,
    pub modulus: u32,
    pub samples: Vec<FrobSample>,
}

impl FrobData {
    pub fn empty(ell: u32, n: u32) -> Result<FrobData, FrobError> {
        Ok(FrobData { ell, n, modulus: modulus_of(ell, n)?, samples: Vec::new() })
    }
}

fn modulus_of(ell: u32, n: u32) -> Result<u32, FrobError> {
    (ell as u64).checked_pow(n).filter(|&m| m <= 1 << 20).map(|m| m as u32).ok_or(FrobError::Modulus(ell, n))
}

/// Samples at the degree-one primes above p (empty if p is excluded).
pub fn sample_prime(curve: &Curve, ell: u32, n: u32, p: u64) -> Result<Vec<FrobSample>, FrobError> {
    let m = modulus_of(ell, n)? as i64;
    if p < 5 || p == ell as u64 || !arith::is_prime(p as u128) {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for r in curve.field.residue_maps(p) {
        let a_p = match ecmodel::trace_at(curve, p, r) {
            Ok(t) => t,
            Err(CountError::BadReduction(_)) => continue,
            Err(e) => return Err(e.into()),
        };
        out.push(FrobSample {
            p,
            root: r,
            a_p,
            trace: a_p.rem_euclid(m) as u32,
            det: (p as i64).rem_euclid(m) as u32,
            lambda: None,
        });
    }
    Ok(out)
}

/// Frobenius data at all good degree-one primes `5 <= p <= prime_budget`, p != l.
pub fn sample_frobenius_data(curve: &Curve, ell: u32, n: u32, prime_budget: u64) -> Result<FrobData, FrobError> {
    if prime_budget < MIN_BUDGET {
        return Err(FrobError::Budget(prime_budget));
    }
    let mut data = FrobData::empty(ell, n)?;
    for p in arith::primes_up_to(prime_budget) {
        data.samples.extend(sample_prime(curve, ell, n, p)?);
    }
    if data.samples.len() < MIN_SAMPLES {
        return Err(FrobError::TooFewPrimes(data.samples.len()));
    }
    Ok(data)
}

/// Fills in the isogeny-kernel eigenvalue for ordinary samples and for up to
/// `supersingular_limit` supersingular ones. Returns the number filled.
pub fn attach_isogeny_character(data: &mut FrobData, curve: &Curve, supersingular_limit: usize) -> Result<usize, FrobError> {
    let ell = data.ell as u64;
    let entry = identify_order(curve)?;
    if ell == 2 || entry.order.disc() % ell as i64 != 0 {
        return Err(FrobError::NotBorel(ell));
    }
    let mut filled = 0;
    let mut supersingular = 0;
    for s in data.samples.iter_mut() {
        if s.a_p == 0 {
            if supersingular >= supersingular_limit {
                continue;
            }
        }
        let v = kernel_eigenvalue(curve, &entry, ell, s.p, s.root, s.a_p)?;
        if s.a_p == 0 && v.is_some() {
            supersingular += 1;
        }
        if v.is_some() {
            filled += 1;
        }
        s.lambda = v;
    }
    Ok(filled)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LambdaValue {
    pub p: u64,
    pub root: u64,
    pub a_p: i64,
    /// `None` when this prime could not decide between the two stable lines.
    pub lambda: Option<u32>,
}

/// Eigenvalues mod l of Frobenius on the rational l-isogeny kernel at the good
/// degree-one primes above each listed prime.
pub fn isogeny_character_values(curve: &Curve, ell: u64, primes: &[u64]) -> Result<Vec<LambdaValue>, FrobError> {
    let entry = identify_order(curve)?;
    if ell == 2 || !arith::is_prime(ell as u128) || entry.order.disc() % ell as i64 != 0 {
        return Err(FrobError::NotBorel(ell));
    }
    let mut out = Vec::new();
    for &p in primes {
        for s in sample_prime(curve, ell as u32, 1, p)? {
            let lambda = kernel_eigenvalue(curve, &entry, ell, p, s.root, s.a_p)?;
            out.push(LambdaValue { p, root: s.root, a_p: s.a_p, lambda });
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Class statistics

type Key = (u32, u32);

/// Class sizes of a candidate: by `(trace, det)` and by `(trace, det, lambda)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassCounts {
    pub order: usize,
    pub by_pair: BTreeMap<Key, usize>,
    pub by_lambda: BTreeMap<(u32, u32, u32), usize>,
}

/// Reduces a candidate to the data modulus and counts its classes. The
/// eigenvalue of an element is its top-left entry mod l, which is the
/// action on the common eigenline of the Cartan group when l | disc.
pub fn class_counts(candidate: &Subgroup, modulus: u32, ell: u32) -> Result<ClassCounts, FrobError> {
    let g = if candidate.modulus() == modulus { candidate.clone() } else { candidate.reduce(modulus)? };
    let mut by_pair = BTreeMap::new();
    let mut by_lambda = BTreeMap::new();
    for x in g.elements() {
        *by_pair.entry((x.trace(), x.det())).or_insert(0) += 1;
        *by_lambda.entry((x.trace(), x.det(), x.e[0] % ell)).or_insert(0) += 1;
    }
    Ok(ClassCounts { order: g.order(), by_pair, by_lambda })
}

impl ClassCounts {
    fn count(&self, s: &FrobSample) -> usize {
        match s.lambda {
            Some(l) => self.by_lambda.get(&(s.trace, s.det, l)).copied().unwrap_or(0),
            None => self.by_pair.get(&(s.trace, s.det)).copied().unwrap_or(0),
        }
    }

    /// Same class distribution (the data cannot tell the two groups apart).
    /// The eigenvalue classes only matter when `with_lambda` is set.
    pub fn same_distribution(&self, o: &ClassCounts, with_lambda: bool) -> bool {
        same_masses(&self.by_pair, self.order, &o.by_pair, o.order)
            && (!with_lambda || same_masses(&self.by_lambda, self.order, &o.by_lambda, o.order))
    }
}

fn same_masses<K: Ord>(a: &BTreeMap<K, usize>, na: usize, b: &BTreeMap<K, usize>, nb: usize) -> bool {
    a.len() == b.len() && a.iter().zip(b.iter()).all(|((ka, va), (kb, vb))| ka == kb && va * nb == vb * na)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Coverage {
    pub samples: usize,
    /// Classes of mass at least [`HEAVY_MASS`], and how many were observed.
    pub heavy_classes: usize,
    pub heavy_observed: usize,
    pub classes: usize,
    pub observed: usize,
    /// Every heavy class observed, with at least [`COVERAGE_SAMPLES`] samples.
    pub supported: bool,
    /// No data at all.
    pub flagged_empty: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Verdict {
    pub consistent: bool,
    /// First prime whose Frobenius class the candidate does not realize.
    pub witness: Option<u64>,
    pub coverage: Coverage,
    /// Log-likelihood of the samples under equidistribution (`-inf` if inconsistent).
    pub log_likelihood: f64,
}

pub fn consistency_check(data: &FrobData, candidate: &Subgroup) -> Verdict {
    match class_counts(candidate, data.modulus, data.ell) {
        Ok(c) => verdict(data, &c),
        Err(_) => verdict(data, &ClassCounts { order: 1, by_pair: BTreeMap::new(), by_lambda: BTreeMap::new() }),
    }
}

/// Verdict from precomputed class counts.
pub fn verdict(data: &FrobData, counts: &ClassCounts) -> Verdict {
    let mut witness = None;
    let mut ll = 0.0;
    let mut seen: BTreeMap<Key, usize> = BTreeMap::new();
    for s in &data.samples {
        let c = counts.count(s);
        if c == 0 {
            witness.get_or_insert(s.p);
        } else {
            ll += ln(c as f64 / counts.order as f64);
        }
        *seen.entry((s.trace, s.det)).or_insert(0) += 1;
    }
    let heavy: Vec<&Key> =
        counts.by_pair.iter().filter(|(_, &c)| c as f64 >= HEAVY_MASS * counts.order as f64).map(|(k, _)| k).collect();
    let heavy_observed = heavy.iter().filter(|k| seen.contains_key(k)).count();
    let coverage = Coverage {
        samples: data.samples.len(),
        heavy_classes: heavy.len(),
        heavy_observed,
        classes: counts.by_pair.len(),
        observed: counts.by_pair.keys().filter(|k| seen.contains_key(k)).count(),
        supported: heavy_observed == heavy.len() && data.samples.len() >= COVERAGE_SAMPLES,
        flagged_empty: data.samples.is_empty(),
    };
    Verdict {
        consistent: witness.is_none(),
        witness,
        coverage,
        log_likelihood: if witness.is_none() { ll } else { f64::NEG_INFINITY },
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Discrimination {
    /// Indices of candidates consistent with the data.
    pub survivors: Vec<usize>,
    /// Eliminated candidates with a witness prime.
    pub eliminated: Vec<(usize, u64)>,
    /// Survivors of maximal likelihood.
    pub best: Vec<usize>,
    /// Pairs of survivors with identical class distributions.
    pub ambiguous: Vec<(usize, usize)>,
    pub verdicts: Vec<Verdict>,
}

impl Discrimination {
    /// The unique best candidate, if the data single one out.
    pub fn winner(&self) -> Option<usize> {
        (self.best.len() == 1).then(|| self.best[0])
    }
}

/// Likelihood gap below which two candidates count as tied.
const TIE: f64 = 1e-6;

pub fn discriminate(data: &FrobData, candidates: &[Subgroup]) -> Result<Discrimination, FrobError> {
    let counts = candidates
        .iter()
        .map(|c| class_counts(c, data.modulus, data.ell))
        .collect::<Result<Vec<_>, _>>()?;
    discriminate_counts(data, &counts)
}

pub fn discriminate_counts(data: &FrobData, counts: &[ClassCounts]) -> Result<Discrimination, FrobError> {
    let verdicts: Vec<Verdict> = counts.iter().map(|c| verdict(data, c)).collect();
    let survivors: Vec<usize> = (0..counts.len()).filter(|&i| verdicts[i].consistent).collect();
    let eliminated = (0..counts.len()).filter_map(|i| verdicts[i].witness.map(|w| (i, w))).collect();
    if survivors.is_empty() {
        return Err(FrobError::NoCandidates);
    }
    let top = survivors.iter().map(|&i| verdicts[i].log_likelihood).fold(f64::NEG_INFINITY, f64::max);
    let best = survivors.iter().copied().filter(|&i| verdicts[i].log_likelihood >= top - TIE).collect();
    let with_lambda = data.samples.iter().any(|s| s.lambda.is_some());
    let mut ambiguous = Vec::new();
    for (x, &i) in survivors.iter().enumerate() {
        for &j in &survivors[x + 1..] {
            if counts[i].same_distribution(&counts[j], with_lambda) {
                ambiguous.push((i, j));
            }
        }
    }
    Ok(Discrimination { survivors, eliminated, best, ambiguous, verdicts })
}

// ---------------------------------------------------------------------------
// Invariants

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    Hasse(u64),
    Det(u64),
    ZeroTrace(u64),
    Lambda(u64),
}

/// Hasse bound, `det = p`, `a_p = 0` at primes inert in the CM field, and the
/// eigenvalue identities `lambda (p / lambda) = p`, `lambda + p / lambda = a_p`.
pub fn invariant_violations(data: &FrobData, disc: i64) -> Vec<Violation> {
    let mut out = Vec::new();
    let m = data.modulus as u64;
    let ell = data.ell as u64;
    for s in &data.samples {
        if (s.a_p as i128) * (s.a_p as i128) > 4 * s.p as i128 {
            out.push(Violation::Hasse(s.p));
        }
        if s.det as u64 != s.p % m || s.trace as i64 != s.a_p.rem_euclid(m as i64) {
            out.push(Violation::Det(s.p));
        }
        if arith::kronecker(disc as i128, s.p as i128) == Ok(-1) && s.a_p != 0 {
            out.push(Violation::ZeroTrace(s.p));
        }
        if let Some(l) = s.lambda {
            let l = l as u64;
            let mu = arith::inv_mod(l as i128, ell as u128).map(|i| (i as u64 * (s.p % ell)) % ell);
            let ok = match mu {
                Some(mu) => (l + mu) % ell == s.a_p.rem_euclid(ell as i64) as u64,
                None => false,
            };
            if !ok {
                out.push(Violation::Lambda(s.p));
            }
        }
    }
    out
}

/// Whether the element realizes the sample's class.
pub fn realizes(g: &GL2Mod, s: &FrobSample, ell: u32) -> bool {
    g.trace() == s.trace && g.det() == s.det && s.lambda.is_none_or(|l| g.e[0] % ell == l)
}

/// Natural logarithm (no_std).
pub(crate) fn ln(x: f64) -> f64 {
    if x <= 0.0 {
        return f64::NEG_INFINITY;
    }
    let mut m = x;
    let mut e = 0i32;
    while m > 1.5 {
        m /= 2.0;
        e += 1;
    }
    while m < 0.75 {
        m *= 2.0;
        e -= 1;
    }
    // ln m = 2 atanh((m - 1)/(m + 1))
    let z = (m - 1.0) / (m + 1.0);
    let z2 = z * z;
    let mut term = z;
    let mut sum = 0.0;
    let mut k = 1.0;
    while term.abs() > 1e-18 {
        sum += term / k;
        term *= z2;
        k += 2.0;
    }
    2.0 * sum + e as f64 * core::f64::consts::LN_2
}

#[cfg(test)]
mod tests;
