//! Named subgroups of the Cartan normalizer.
//!
//! A [`GroupId`] is interpreted relative to the order and the prime: `G(2,1)`
//! for discriminant -4 at 2 is a different group from `G(2,1)` for
//! discriminant -3 at 3.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use super::{cartan_group, close_generators, small_generating_set, normalizer_group, CMOrder, CartanParams, GL2Mod, ModGroupError, Result, Subgroup};

/// The four complex-conjugation candidates `c_1, c_-1, c'_1, c'_-1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Gamma {
    C1,
    Cm1,
    Cp1,
    Cpm1,
}

impl Gamma {
    pub const ALL: [Gamma; 4] = [Gamma::C1, Gamma::Cm1, Gamma::Cp1, Gamma::Cpm1];

    pub fn as_str(self) -> &'static str {
        match self {
            Gamma::C1 => "c1",
            Gamma::Cm1 => "c-1",
            Gamma::Cp1 => "c'1",
            Gamma::Cpm1 => "c'-1",
        }
    }

    pub fn parse(s: &str) -> Option<Gamma> {
        match s {
            "c1" => Some(Gamma::C1),
            "c-1" => Some(Gamma::Cm1),
            "c'1" | "cp1" => Some(Gamma::Cp1),
            "c'-1" | "cp-1" => Some(Gamma::Cpm1),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupId {
    Normalizer,
    Cartan,
    /// `G^{i,t}`.
    G(u8, u8),
    /// Cubes of the Cartan group.
    CartanCube,
    /// Cartan elements `c(nu(a+b), a-b)` with `a/b` a cube (split primes, j = 0).
    CubeRatio,
}

impl GroupId {
    pub fn name(&self) -> String {
        match self {
            GroupId::Normalizer => "N".to_string(),
            GroupId::Cartan => "C".to_string(),
            GroupId::G(i, t) => format!("G_{i}_{t}"),
            GroupId::CartanCube => "C3".to_string(),
            GroupId::CubeRatio => "G_3_1r".to_string(),
        }
    }

    pub fn parse(s: &str) -> Option<GroupId> {
        match s {
            "N" => Some(GroupId::Normalizer),
            "C" => Some(GroupId::Cartan),
            "C3" => Some(GroupId::CartanCube),
            "G_3_1r" => Some(GroupId::CubeRatio),
            _ => {
                let rest = s.strip_prefix("G_")?;
                let (i, t) = rest.split_once('_')?;
                Some(GroupId::G(i.parse().ok()?, t.parse().ok()?))
            }
        }
    }
}

/// A named Cartan-type group, optionally joined with a conjugation matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NamedGroup {
    pub id: GroupId,
    pub gamma: Option<Gamma>,
}

impl NamedGroup {
    pub const fn new(id: GroupId, gamma: Option<Gamma>) -> Self {
        NamedGroup { id, gamma }
    }

    pub const fn with(i: u8, t: u8, gamma: Gamma) -> Self {
        NamedGroup { id: GroupId::G(i, t), gamma: Some(gamma) }
    }

    pub const fn normalizer() -> Self {
        NamedGroup { id: GroupId::Normalizer, gamma: None }
    }

    pub fn parse(s: &str) -> Option<NamedGroup> {
        match s.split_once('+') {
            Some((g, c)) => Some(NamedGroup { id: GroupId::parse(g)?, gamma: Some(Gamma::parse(c)?) }),
            None => Some(NamedGroup { id: GroupId::parse(s)?, gamma: None }),
        }
    }
}

impl fmt::Display for NamedGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.gamma {
            Some(g) => write!(f, "{}+{}", self.id.name(), g.as_str()),
            None => write!(f, "{}", self.id.name()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Context {
    Disc4Two,
    Disc3Two,
    GenericTwo,
    Disc3Three,
    OddDividing,
    Disc3Large,
    Unramified,
}

fn context(params: &CartanParams) -> Context {
    let disc = params.order.disc();
    let ell = params.ell as i64;
    match (disc, ell) {
        (-4, 2) => Context::Disc4Two,
        (-3, 2) => Context::Disc3Two,
        (_, 2) => Context::GenericTwo,
        (-3, 3) => Context::Disc3Three,
        (-3, _) => Context::Disc3Large,
        _ if disc % ell == 0 => Context::OddDividing,
        _ => Context::Unramified,
    }
}

fn allowed_gammas(ctx: Context) -> &'static [Gamma] {
    match ctx {
        Context::Disc4Two => &Gamma::ALL,
        Context::Disc3Two => &[Gamma::Cp1, Gamma::Cpm1],
        _ => &[Gamma::C1, Gamma::Cm1],
    }
}

/// Index-two families at 2 for j other than 0 and 1728, by congruence of the order.
fn generic_two_families(order: CMOrder) -> Vec<u8> {
    let dk = order.disc_k().rem_euclid(8);
    let f = order.conductor();
    let mut out = Vec::new();
    if order.disc().rem_euclid(16) == 0 {
        out.extend([1, 2]);
    }
    if dk == 0 || (dk == 4 && f % 4 == 0) || (dk % 2 == 1 && f % 8 == 0) {
        out.extend([3, 4]);
    }
    out
}

fn unknown(g: &NamedGroup) -> ModGroupError {
    ModGroupError::UnknownGroup(g.id.name())
}

fn from_predicate(params: &CartanParams, keep: impl Fn(i64, i64) -> bool) -> Subgroup {
    let m = params.modulus as i64;
    let mut els = Vec::new();
    for a in 0..m {
        for b in 0..m {
            let g = params.c(a, b);
            if g.is_invertible() && keep(a, b) {
                els.push(g);
            }
        }
    }
    with_generators(Subgroup::from_closed_set(params.modulus, els, Vec::new()))
}

fn with_generators(mut s: Subgroup) -> Subgroup {
    let pool: Vec<GL2Mod> = s.elements().collect();
    s.generators = small_generating_set(&s, &pool);
    s
}

fn mat(entries: [(i64, i64); 4], params: &CartanParams) -> Result<GL2Mod> {
    GL2Mod::from_rationals(entries, params.modulus)
}

fn scalar(s: i64, params: &CartanParams) -> Result<GL2Mod> {
    GL2Mod::scalar(s, params.modulus)
}

fn base_group(named: &NamedGroup, params: &CartanParams, ctx: Context) -> Result<Subgroup> {
    let m = params.modulus;
    let delta = params.delta as i64;
    let gens = |v: Vec<GL2Mod>| close_generators(&v, m);
    match (named.id, ctx) {
        (GroupId::Normalizer, _) => Ok(normalizer_group(params)),
        (GroupId::Cartan, _) => Ok(cartan_group(params)),
        (GroupId::G(2, 1), Context::Disc4Two) => {
            gens(vec![scalar(-1, params)?, scalar(3, params)?, GL2Mod::new(1, 2, -2, 1, m)?])
        }
        (GroupId::G(2, 2), Context::Disc4Two) => {
            gens(vec![scalar(-1, params)?, scalar(3, params)?, GL2Mod::new(2, 1, -1, 2, m)?])
        }
        (GroupId::G(4, 1), Context::Disc4Two) => gens(vec![scalar(5, params)?, GL2Mod::new(1, 2, -2, 1, m)?]),
        (GroupId::G(4, 2), Context::Disc4Two) => gens(vec![scalar(5, params)?, GL2Mod::new(-1, -2, 2, -1, m)?]),
        (GroupId::G(4, 3), Context::Disc4Two) => gens(vec![scalar(-3, params)?, GL2Mod::new(2, -1, 1, 2, m)?]),
        (GroupId::G(4, 4), Context::Disc4Two) => gens(vec![scalar(-3, params)?, GL2Mod::new(-2, 1, -1, -2, m)?]),
        (GroupId::G(2, t @ 1..=4), Context::GenericTwo) if generic_two_families(params.order).contains(&t) => {
            let s = if t <= 2 { 5 } else { 3 };
            let g = if t % 2 == 1 {
                GL2Mod::new(1, 1, delta, 1, m)
            } else {
                GL2Mod::new(-1, -1, -delta, -1, m)
            };
            gens(vec![scalar(s, params)?, g?])
        }
        (GroupId::CartanCube, _) => {
            let c = cartan_group(params);
            let cubes: Vec<GL2Mod> = c.elements().map(|g| g.pow(3)).collect();
            Ok(with_generators(Subgroup::from_closed_set(m, cubes, Vec::new())))
        }
        (GroupId::CubeRatio, Context::Disc3Large) => {
            let nu = sqrt_mod_n(delta, m as i64).ok_or_else(|| unknown(named))?;
            let mm = m as i64;
            let ell = params.ell as i64;
            let mut is_cube = vec![false; mm as usize];
            for x in (1..mm).filter(|x| x % ell != 0) {
                is_cube[(x * x % mm * x % mm) as usize] = true;
            }
            let mut els = Vec::new();
            for a in 1..mm {
                for b in 1..mm {
                    if a % ell == 0 || b % ell == 0 {
                        continue;
                    }
                    let binv = super::rat_mod(1, b, m)? as i64;
                    if !is_cube[(a * binv % mm) as usize] {
                        continue;
                    }
                    let g = params.c(nu * (a + b) % mm, a - b);
                    if g.is_invertible() {
                        els.push(g);
                    }
                }
            }
            Ok(with_generators(Subgroup::from_closed_set(m, els, Vec::new())))
        }
        (GroupId::G(2, 1), Context::Disc3Three) => Ok(from_predicate(params, |a, _| a % 3 == 1)),
        (GroupId::G(3, 1), Context::Disc3Three) => Ok(from_predicate(params, |_, b| b % 3 == 0)),
        (GroupId::G(6, 1), Context::Disc3Three) => Ok(from_predicate(params, |a, b| a % 3 == 1 && b % 3 == 0)),
        (GroupId::G(i @ (3 | 6), t @ (2 | 3)), Context::Disc3Three) => {
            let s = if i == 3 { 2 } else { 4 };
            let g = if t == 2 {
                mat([(1, 1), (1, 1), (-3, 4), (1, 1)], params)?
            } else {
                mat([(-5, 4), (1, 2), (-3, 8), (-5, 4)], params)?
            };
            gens(vec![scalar(s, params)?, g])
        }
        (GroupId::G(2, 1), Context::OddDividing) => {
            let mm = m as i64;
            let ell = params.ell as i64;
            let mut is_square = vec![false; mm as usize];
            for x in (1..mm).filter(|x| x % ell != 0) {
                is_square[(x * x % mm) as usize] = true;
            }
            Ok(from_predicate(params, |a, _| is_square[a as usize]))
        }
        _ => Err(unknown(named)),
    }
}

fn sqrt_mod_n(a: i64, n: i64) -> Option<i64> {
    (0..n).find(|x| (x * x - a).rem_euclid(n) == 0)
}

/// Builds the named group at the modulus of `params`.
pub fn named_subgroup(named: &NamedGroup, params: &CartanParams) -> Result<Subgroup> {
    let ctx = context(params);
    let base = base_group(named, params, ctx)?;
    match named.gamma {
        None => Ok(base),
        Some(g) => {
            if !allowed_gammas(ctx).contains(&g) {
                return Err(ModGroupError::GammaNotAllowed(g.as_str().to_string(), named.id.name()));
            }
            let mut gens = base.generators().to_vec();
            gens.push(params.gamma(g));
            close_generators(&gens, params.modulus)
        }
    }
}

/// Every named group the image theorems allow for this order and prime,
/// with every allowed conjugation matrix (before removing duplicates).
pub fn named_candidates(params: &CartanParams) -> Vec<NamedGroup> {
    let ctx = context(params);
    let mut out = vec![NamedGroup::normalizer()];
    let ids: Vec<GroupId> = match ctx {
        Context::Disc4Two => vec![
            GroupId::G(2, 1),
            GroupId::G(2, 2),
            GroupId::G(4, 1),
            GroupId::G(4, 2),
            GroupId::G(4, 3),
            GroupId::G(4, 4),
        ],
        Context::Disc3Two => vec![GroupId::CartanCube],
        Context::GenericTwo => generic_two_families(params.order).into_iter().map(|t| GroupId::G(2, t)).collect(),
        Context::Disc3Three => vec![
            GroupId::G(2, 1),
            GroupId::G(3, 1),
            GroupId::G(3, 2),
            GroupId::G(3, 3),
            GroupId::G(6, 1),
            GroupId::G(6, 2),
            GroupId::G(6, 3),
        ],
        Context::OddDividing => vec![GroupId::G(2, 1)],
        Context::Disc3Large => {
            if params.ell % 3 == 1 {
                vec![GroupId::CubeRatio]
            } else {
                vec![GroupId::CartanCube]
            }
        }
        Context::Unramified => vec![],
    };
    for id in ids {
        for &g in allowed_gammas(ctx) {
            out.push(NamedGroup { id, gamma: Some(g) });
        }
    }
    out
}
