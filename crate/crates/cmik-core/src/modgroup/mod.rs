//! Matrix groups inside GL(2, Z/l^k): Cartan subgroups of imaginary quadratic
//! orders, their normalizers, the named index-2/3/4/6 subgroups and labels.

mod label;
mod named;

pub use label::{
    canonical_conjugate, cm_label, cm_label_detailed, label_components, named_index, pinned_label, CMLabel, LabelSource,
    SqClass,
};
pub use named::{named_candidates, named_subgroup, Gamma, GroupId, NamedGroup};

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::arith;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModGroupError {
    #[error("{0} is not a negative fundamental discriminant")]
    NotFundamental(i64),
    #[error("conductor must be positive")]
    ZeroConductor,
    #[error("modulus {0} is not a prime power")]
    BadModulus(u64),
    #[error("generators live at different moduli")]
    MixedModuli,
    #[error("matrix is not invertible mod {0}")]
    NotInvertible(u32),
    #[error("denominator {0} is not invertible mod {1}")]
    BadDenominator(i64, u32),
    #[error("subgroup is not contained in the ambient group")]
    NotContained,
    #[error("no group {0} for this order and prime")]
    UnknownGroup(String),
    #[error("gamma {0} is not allowed with group {1}")]
    GammaNotAllowed(String, String),
    #[error("cannot reduce from modulus {0} to {1}")]
    BadReduction(u32, u32),
}

pub type Result<T> = core::result::Result<T, ModGroupError>;

/// Imaginary quadratic order of discriminant `disc_k * f^2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CMOrder {
    disc_k: i64,
    conductor: u64,
}

pub fn is_fundamental_discriminant(d: i64) -> bool {
    if d >= 0 {
        return false;
    }
    let sqfree = |n: i64| arith::powerfree_part(n as i128, 2).map(|(c, _)| c == n as i128).unwrap_or(false);
    match d.rem_euclid(4) {
        1 => sqfree(d),
        0 => {
            let m = d / 4;
            matches!(m.rem_euclid(4), 2 | 3) && sqfree(m)
        }
        _ => false,
    }
}

impl CMOrder {
    pub fn new(disc_k: i64, conductor: u64) -> Result<Self> {
        if !is_fundamental_discriminant(disc_k) {
            return Err(ModGroupError::NotFundamental(disc_k));
        }
        if conductor == 0 {
            return Err(ModGroupError::ZeroConductor);
        }
        Ok(CMOrder { disc_k, conductor })
    }

    /// Splits a discriminant `D = disc_k f^2` into its fundamental part and conductor.
    pub fn from_disc(disc: i64) -> Result<Self> {
        if disc >= 0 || !matches!(disc.rem_euclid(4), 0 | 1) {
            return Err(ModGroupError::NotFundamental(disc));
        }
        let mut f = 1u64;
        let mut best = None;
        while (f * f) as i64 <= -disc {
            let ff = (f * f) as i64;
            if disc % ff == 0 && is_fundamental_discriminant(disc / ff) {
                best = Some(f);
            }
            f += 1;
        }
        match best {
            Some(f) => CMOrder::new(disc / (f * f) as i64, f),
            None => Err(ModGroupError::NotFundamental(disc)),
        }
    }

    pub fn disc_k(&self) -> i64 {
        self.disc_k
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn disc(&self) -> i64 {
        self.disc_k * (self.conductor * self.conductor) as i64
    }
}

impl fmt::Display for CMOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "O(disc_K={}, f={})", self.disc_k, self.conductor)
    }
}

/// 2x2 matrix `(a b; c d)` with entries reduced mod `modulus`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GL2Mod {
    pub e: [u32; 4],
    pub modulus: u32,
}

impl GL2Mod {
    pub fn new(a: i64, b: i64, c: i64, d: i64, modulus: u32) -> Result<Self> {
        let m = modulus as i64;
        let g = GL2Mod {
            e: [
                a.rem_euclid(m) as u32,
                b.rem_euclid(m) as u32,
                c.rem_euclid(m) as u32,
                d.rem_euclid(m) as u32,
            ],
            modulus,
        };
        if !g.is_invertible() {
            return Err(ModGroupError::NotInvertible(modulus));
        }
        Ok(g)
    }

    /// Matrix with rational entries `num/den`, each denominator inverted mod the modulus.
    pub fn from_rationals(entries: [(i64, i64); 4], modulus: u32) -> Result<Self> {
        let mut v = [0i64; 4];
        for (i, &(n, d)) in entries.iter().enumerate() {
            v[i] = rat_mod(n, d, modulus)? as i64;
        }
        GL2Mod::new(v[0], v[1], v[2], v[3], modulus)
    }

    pub fn identity(modulus: u32) -> Self {
        GL2Mod { e: [1 % modulus, 0, 0, 1 % modulus], modulus }
    }

    pub fn scalar(s: i64, modulus: u32) -> Result<Self> {
        GL2Mod::new(s, 0, 0, s, modulus)
    }

    pub fn det(&self) -> u32 {
        let m = self.modulus as u64;
        let [a, b, c, d] = self.e.map(|x| x as u64);
        ((a * d % m + m - b * c % m) % m) as u32
    }

    pub fn trace(&self) -> u32 {
        ((self.e[0] as u64 + self.e[3] as u64) % self.modulus as u64) as u32
    }

    pub fn is_invertible(&self) -> bool {
        arith::gcd_u128(self.det() as u128, self.modulus as u128) == 1
    }

    pub fn mul(&self, o: &GL2Mod) -> GL2Mod {
        let m = self.modulus as u64;
        let [a, b, c, d] = self.e.map(|x| x as u64);
        let [p, q, r, s] = o.e.map(|x| x as u64);
        GL2Mod {
            e: [
                ((a * p + b * r) % m) as u32,
                ((a * q + b * s) % m) as u32,
                ((c * p + d * r) % m) as u32,
                ((c * q + d * s) % m) as u32,
            ],
            modulus: self.modulus,
        }
    }

    pub fn inv(&self) -> GL2Mod {
        let m = self.modulus;
        let di = arith::inv_mod(self.det() as i128, m as u128).expect("invertible matrix") as u64;
        let mm = m as u64;
        let [a, b, c, d] = self.e.map(|x| x as u64);
        GL2Mod {
            e: [
                (d * di % mm) as u32,
                ((mm - b) % mm * di % mm) as u32,
                ((mm - c) % mm * di % mm) as u32,
                (a * di % mm) as u32,
            ],
            modulus: m,
        }
    }

    pub fn pow(&self, mut k: u64) -> GL2Mod {
        let mut r = GL2Mod::identity(self.modulus);
        let mut b = *self;
        while k > 0 {
            if k & 1 == 1 {
                r = r.mul(&b);
            }
            b = b.mul(&b);
            k >>= 1;
        }
        r
    }

    pub fn reduce(&self, modulus: u32) -> Result<GL2Mod> {
        if modulus == 0 || self.modulus % modulus != 0 {
            return Err(ModGroupError::BadReduction(self.modulus, modulus));
        }
        Ok(GL2Mod { e: self.e.map(|x| x % modulus), modulus })
    }

    pub fn is_identity(&self) -> bool {
        *self == GL2Mod::identity(self.modulus)
    }

    pub fn pack(&self) -> u64 {
        let n = self.modulus as u64;
        ((self.e[0] as u64 * n + self.e[1] as u64) * n + self.e[2] as u64) * n + self.e[3] as u64
    }

    pub fn unpack(key: u64, modulus: u32) -> GL2Mod {
        let n = modulus as u64;
        let d = key % n;
        let c = key / n % n;
        let b = key / n / n % n;
        let a = key / n / n / n;
        GL2Mod { e: [a as u32, b as u32, c as u32, d as u32], modulus }
    }
}

impl fmt::Display for GL2Mod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} {}; {} {}) mod {}", self.e[0], self.e[1], self.e[2], self.e[3], self.modulus)
    }
}

pub fn rat_mod(num: i64, den: i64, modulus: u32) -> Result<u32> {
    let inv = arith::inv_mod(den as i128, modulus as u128)
        .ok_or(ModGroupError::BadDenominator(den, modulus))?;
    Ok(((num as i128).rem_euclid(modulus as i128) * inv as i128 % modulus as i128) as u32)
}

/// Parameters `(delta, phi)` of the Cartan subgroup for an order at a prime power modulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CartanParams {
    pub delta: u32,
    pub phi: u32,
    pub order: CMOrder,
    pub modulus: u32,
    pub ell: u32,
    pub k: u32,
}

pub fn cartan_params(order: CMOrder, modulus: u32) -> Result<CartanParams> {
    let (ell, k) = arith::prime_power(modulus as u64).ok_or(ModGroupError::BadModulus(modulus as u64))?;
    let disc = order.disc();
    let m = modulus as i64;
    let f = order.conductor() as i64;
    let (delta, phi) = if disc.rem_euclid(4) == 0 {
        ((disc / 4).rem_euclid(m) as u32, 0)
    } else if ell != 2 {
        (rat_mod(disc, 4, modulus)?, 0)
    } else {
        ((((order.disc_k() - 1) / 4) * f * f).rem_euclid(m) as u32, f.rem_euclid(m) as u32)
    };
    Ok(CartanParams { delta, phi, order, modulus, ell: ell as u32, k })
}

impl CartanParams {
    /// `c(a, b) = (a + b phi, b; delta b, a)`: multiplication by `a + b theta`.
    pub fn c(&self, a: i64, b: i64) -> GL2Mod {
        let m = self.modulus as i64;
        let (a, b) = (a.rem_euclid(m), b.rem_euclid(m));
        let d = self.delta as i64;
        let p = self.phi as i64;
        GL2Mod {
            e: [
                ((a + b * p) % m) as u32,
                b as u32,
                (d * b % m) as u32,
                a as u32,
            ],
            modulus: self.modulus,
        }
    }

    /// Coordinates `(a, b)` of a Cartan element, if the matrix is one.
    pub fn cartan_coords(&self, g: &GL2Mod) -> Option<(u32, u32)> {
        let (a, b) = (g.e[3], g.e[1]);
        if self.c(a as i64, b as i64) == *g {
            Some((a, b))
        } else {
            None
        }
    }

    pub fn with_modulus(&self, modulus: u32) -> Result<CartanParams> {
        cartan_params(self.order, modulus)
    }

    /// Conjugation matrices. `c_e = e(1, 0; -phi, -1)`, so that `c_1` normalizes
    /// the Cartan group also when `phi` is nonzero.
    pub fn gamma(&self, g: Gamma) -> GL2Mod {
        let m = self.modulus as i64;
        match g {
            Gamma::C1 => GL2Mod::new(1, 0, -(self.phi as i64), -1, self.modulus),
            Gamma::Cm1 => GL2Mod::new(-1, 0, self.phi as i64, 1, self.modulus),
            Gamma::Cp1 => GL2Mod::new(0, 1, 1, 0, self.modulus),
            Gamma::Cpm1 => GL2Mod::new(0, m - 1, m - 1, 0, self.modulus),
        }
        .expect("gamma matrices are invertible")
    }
}

/// Finite matrix group, stored as its generators and the sorted list of packed elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgroup {
    modulus: u32,
    generators: Vec<GL2Mod>,
    elements: Vec<u64>,
}

impl Subgroup {
    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn generators(&self) -> &[GL2Mod] {
        &self.generators
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn packed(&self) -> &[u64] {
        &self.elements
    }

    pub fn elements(&self) -> impl Iterator<Item = GL2Mod> + '_ {
        let m = self.modulus;
        self.elements.iter().map(move |&k| GL2Mod::unpack(k, m))
    }

    pub fn contains(&self, g: &GL2Mod) -> bool {
        g.modulus == self.modulus && self.elements.binary_search(&g.pack()).is_ok()
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.modulus == other.modulus && self.elements.iter().all(|k| other.elements.binary_search(k).is_ok())
    }

    /// Builds a group from an element set already known to be closed.
    pub fn from_closed_set(modulus: u32, elements: Vec<GL2Mod>, generators: Vec<GL2Mod>) -> Subgroup {
        let mut packed: Vec<u64> = elements.iter().map(|g| g.pack()).collect();
        packed.sort_unstable();
        packed.dedup();
        Subgroup { modulus, generators, elements: packed }
    }

    /// Image under reduction to a smaller modulus.
    pub fn reduce(&self, modulus: u32) -> Result<Subgroup> {
        let mut els = Vec::with_capacity(self.elements.len());
        for g in self.elements() {
            els.push(g.reduce(modulus)?);
        }
        let gens = self
            .generators
            .iter()
            .map(|g| g.reduce(modulus))
            .collect::<Result<Vec<_>>>()?;
        Ok(Subgroup::from_closed_set(modulus, els, gens))
    }

    pub fn conjugate(&self, g: &GL2Mod) -> Subgroup {
        let gi = g.inv();
        let els: Vec<GL2Mod> = self.elements().map(|h| g.mul(&h).mul(&gi)).collect();
        let gens = self.generators.iter().map(|h| g.mul(h).mul(&gi)).collect();
        Subgroup::from_closed_set(self.modulus, els, gens)
    }

    pub fn contains_minus_identity(&self) -> bool {
        let m = self.modulus as i64;
        self.contains(&GL2Mod::scalar(m - 1, self.modulus).unwrap())
    }

    pub fn join(&self, extra: &[GL2Mod]) -> Result<Subgroup> {
        let mut gens = self.generators.clone();
        gens.extend_from_slice(extra);
        close_generators(&gens, self.modulus)
    }
}

/// Smallest subgroup containing the generators (breadth-first closure).
pub fn close_generators(gens: &[GL2Mod], modulus: u32) -> Result<Subgroup> {
    for g in gens {
        if g.modulus != modulus {
            return Err(ModGroupError::MixedModuli);
        }
        if !g.is_invertible() {
            return Err(ModGroupError::NotInvertible(modulus));
        }
    }
    let id = GL2Mod::identity(modulus);
    let mut seen: BTreeSet<u64> = BTreeSet::new();
    seen.insert(id.pack());
    let mut frontier = alloc::vec![id];
    while let Some(x) = frontier.pop() {
        for g in gens {
            let y = x.mul(g);
            if seen.insert(y.pack()) {
                frontier.push(y);
            }
        }
    }
    Ok(Subgroup { modulus, generators: gens.to_vec(), elements: seen.into_iter().collect() })
}

pub fn cartan_group(params: &CartanParams) -> Subgroup {
    let m = params.modulus as i64;
    let mut els = Vec::new();
    for a in 0..m {
        for b in 0..m {
            let g = params.c(a, b);
            if g.is_invertible() {
                els.push(g);
            }
        }
    }
    let gens = els.clone();
    let mut s = Subgroup::from_closed_set(params.modulus, els, Vec::new());
    s.generators = small_generating_set(&s, &gens);
    s
}

pub fn normalizer_group(params: &CartanParams) -> Subgroup {
    let c = cartan_group(params);
    let c1 = params.gamma(Gamma::C1);
    let mut els: Vec<GL2Mod> = c.elements().collect();
    let twisted: Vec<GL2Mod> = c.elements().map(|g| g.mul(&c1)).collect();
    els.extend(twisted);
    let mut gens = c.generators.clone();
    gens.push(c1);
    Subgroup::from_closed_set(params.modulus, els, gens)
}

/// Greedy generating set: keep adding elements outside the current closure.
pub(crate) fn small_generating_set(target: &Subgroup, pool: &[GL2Mod]) -> Vec<GL2Mod> {
    let mut gens: Vec<GL2Mod> = Vec::new();
    let mut current = close_generators(&gens, target.modulus).unwrap();
    for g in pool {
        if current.order() == target.order() {
            break;
        }
        if !current.contains(g) {
            gens.push(*g);
            current = close_generators(&gens, target.modulus).unwrap();
        }
    }
    gens
}

pub fn subgroup_index(h: &Subgroup, g: &Subgroup) -> Result<usize> {
    if h.modulus != g.modulus || !h.is_subgroup_of(g) {
        return Err(ModGroupError::NotContained);
    }
    Ok(g.order() / h.order())
}

/// Smallest `l^n` such that `H` is the full preimage of its image mod `l^n`
/// inside the ambient group; `1` when `H` is the whole ambient group.
pub fn level_of_definition(h: &Subgroup, ambient: &Subgroup, ell: u32) -> Result<u64> {
    if !h.is_subgroup_of(ambient) {
        return Err(ModGroupError::NotContained);
    }
    let mut q: u32 = 1;
    loop {
        let kernel_inside = ambient
            .elements()
            .filter(|g| g.e.iter().enumerate().all(|(i, &x)| x % q == if i == 0 || i == 3 { 1 % q } else { 0 }))
            .all(|g| h.contains(&g));
        if kernel_inside {
            return Ok(q as u64);
        }
        if q >= h.modulus {
            return Ok(h.modulus as u64);
        }
        q *= ell;
    }
}

pub fn conjugate_equal(h1: &Subgroup, h2: &Subgroup, ambient: &Subgroup) -> bool {
    if h1.modulus != h2.modulus || h1.order() != h2.order() {
        return false;
    }
    if h1.elements == h2.elements {
        return true;
    }
    ambient.elements().any(|g| {
        let gi = g.inv();
        h1.elements().all(|x| h2.contains(&g.mul(&x).mul(&gi)))
    })
}

/// Distinct (trace, det) pairs realized by elements of a group.
pub fn trace_det_classes(h: &Subgroup) -> BTreeSet<(u32, u32)> {
    h.elements().map(|g| (g.trace(), g.det())).collect()
}

/// Default working modulus for a prime: 32 for 2, 27 for 3 and l otherwise.
pub fn working_modulus(ell: u32) -> u32 {
    match ell {
        2 => 32,
        3 => 27,
        _ => ell,
    }
}

#[cfg(test)]
mod tests;
