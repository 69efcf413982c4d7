//! Labels `l.nu.c-n.i.t` for subgroups of the Cartan normalizer.
//!
//! The level digit `n` and the tiebreak `t` come from a pinned calibration
//! table whenever the group is one of the printed images; other groups get
//! their computed level of definition and a tiebreak from the ordering of
//! canonical conjugates.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use super::named::{named_candidates, named_subgroup, Gamma, GroupId, NamedGroup};
use super::{
    cartan_params, conjugate_equal, level_of_definition, normalizer_group, CMOrder, CartanParams, ModGroupError,
    Result, Subgroup,
};
use crate::arith::{self, SqClass2};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SqClass {
    /// Odd prime: whether the unit part is a square mod l.
    Odd(bool),
    Two(SqClass2),
}

impl SqClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            SqClass::Odd(true) => "s",
            SqClass::Odd(false) => "ns",
            SqClass::Two(c) => c.as_str(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CMLabel {
    pub ell: u32,
    pub nu: u32,
    pub sqclass: SqClass,
    pub level: u64,
    pub index: u64,
    pub tiebreak: u32,
}

impl CMLabel {
    /// Label of the full normalizer.
    pub fn maximal(order: &CMOrder, ell: u32) -> CMLabel {
        let (nu, sqclass) = label_components(order, ell);
        CMLabel { ell, nu, sqclass, level: 1, index: 1, tiebreak: 1 }
    }

    pub fn with_image(order: &CMOrder, ell: u32, level: u64, index: u64, tiebreak: u32) -> CMLabel {
        let (nu, sqclass) = label_components(order, ell);
        if index == 1 {
            return CMLabel { ell, nu, sqclass, level: 1, index: 1, tiebreak: 1 };
        }
        CMLabel { ell, nu, sqclass, level, index, tiebreak }
    }

    /// The `n.i.t` part.
    pub fn image_part(&self) -> String {
        alloc::format!("{}.{}.{}", self.level, self.index, self.tiebreak)
    }
}

impl fmt::Display for CMLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}.{}.{}-{}.{}.{}",
            self.ell,
            self.nu,
            self.sqclass.as_str(),
            self.level,
            self.index,
            self.tiebreak
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("malformed label {0:?}")]
pub struct LabelParseError(pub String);

impl FromStr for CMLabel {
    type Err = LabelParseError;

    fn from_str(s: &str) -> core::result::Result<Self, Self::Err> {
        let bad = || LabelParseError(s.to_string());
        let (head, tail) = s.split_once('-').ok_or_else(bad)?;
        let h: Vec<&str> = head.split('.').collect();
        let t: Vec<&str> = tail.split('.').collect();
        if h.len() != 3 || t.len() != 3 {
            return Err(bad());
        }
        let ell: u32 = h[0].parse().map_err(|_| bad())?;
        let nu: u32 = h[1].parse().map_err(|_| bad())?;
        let sqclass = match (ell, h[2]) {
            (2, "s") => SqClass::Two(SqClass2::S),
            (2, "ns3") => SqClass::Two(SqClass2::Ns3),
            (2, "ns5") => SqClass::Two(SqClass2::Ns5),
            (2, "ns7") => SqClass::Two(SqClass2::Ns7),
            (2, _) => return Err(bad()),
            (_, "s") => SqClass::Odd(true),
            (_, "ns") => SqClass::Odd(false),
            _ => return Err(bad()),
        };
        Ok(CMLabel {
            ell,
            nu,
            sqclass,
            level: t[0].parse().map_err(|_| bad())?,
            index: t[1].parse().map_err(|_| bad())?,
            tiebreak: t[2].parse().map_err(|_| bad())?,
        })
    }
}

/// `(nu, c)`: valuation of the discriminant at `l` and the square class of its unit part.
pub fn label_components(order: &CMOrder, ell: u32) -> (u32, SqClass) {
    let disc = order.disc() as i128;
    let nu = arith::valuation(disc, ell as u128);
    let u = disc / (ell as i128).pow(nu);
    let c = if ell == 2 {
        SqClass::Two(arith::square_class_2adic(u).expect("odd unit part"))
    } else {
        SqClass::Odd(arith::kronecker(u, ell as i128).expect("nonzero modulus") == 1)
    };
    (nu, c)
}

/// How the level and tiebreak of a label were obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LabelSource {
    /// Index one: the label is forced.
    Maximal,
    /// Level and tiebreak read from the calibration table.
    Pinned,
    /// Level from the calibration table, tiebreak from canonical ordering.
    LevelPinned,
    /// Computed level of definition and canonical-ordering tiebreak.
    Uncalibrated,
}

impl LabelSource {
    pub fn as_str(&self) -> &'static str {
        match self {
            LabelSource::Maximal => "maximal",
            LabelSource::Pinned => "pinned",
            LabelSource::LevelPinned => "level-pinned",
            LabelSource::Uncalibrated => "uncalibrated-t",
        }
    }
}

struct Pin {
    group: NamedGroup,
    level: u64,
    tiebreak: Option<u32>,
}

const fn pin(i: u8, t: u8, g: Gamma, level: u64, tb: u32) -> Pin {
    Pin { group: NamedGroup::with(i, t, g), level, tiebreak: Some(tb) }
}

/// Printed image labels, keyed by the generating data of each image.
fn pins_for(order: &CMOrder, ell: u32) -> Vec<Pin> {
    use Gamma::*;
    let disc = order.disc();
    match (disc, ell) {
        (-4, 2) => vec![
            pin(4, 1, Cm1, 4, 3),
            pin(4, 1, Cpm1, 4, 2),
            pin(4, 2, Cm1, 4, 4),
            pin(4, 2, Cpm1, 4, 1),
            pin(4, 3, Cp1, 16, 1),
            pin(4, 4, Cm1, 16, 4),
            pin(4, 4, Cp1, 16, 2),
            pin(4, 3, Cm1, 16, 3),
            pin(2, 1, Cpm1, 4, 1),
            pin(2, 1, Cm1, 4, 2),
            pin(2, 2, Cp1, 8, 1),
            pin(2, 2, Cm1, 8, 2),
        ],
        (-8, 2) => vec![
            pin(2, 3, C1, 16, 1),
            pin(2, 4, C1, 16, 2),
            pin(2, 3, Cm1, 16, 3),
            pin(2, 4, Cm1, 16, 4),
        ],
        (-16, 2) => vec![
            pin(2, 1, C1, 8, 1),
            pin(2, 2, C1, 8, 2),
            pin(2, 2, Cm1, 8, 3),
            pin(2, 1, Cm1, 8, 4),
        ],
        (-3, 2) => vec![Pin { group: NamedGroup::new(GroupId::CartanCube, Some(Cp1)), level: 2, tiebreak: Some(1) }],
        (_, 2) => {
            let mut v = Vec::new();
            for t in 1..=4u8 {
                for g in [C1, Cm1] {
                    let level = if t <= 2 { 8 } else { 16 };
                    v.push(Pin { group: NamedGroup::with(2, t, g), level, tiebreak: None });
                }
            }
            v
        }
        (-3, 3) => vec![
            pin(2, 1, C1, 9, 1),
            pin(2, 1, Cm1, 9, 2),
            pin(3, 1, C1, 3, 1),
            pin(3, 2, C1, 27, 1),
            pin(3, 3, C1, 27, 2),
            pin(6, 1, C1, 9, 1),
            pin(6, 1, Cm1, 9, 2),
            pin(6, 2, C1, 27, 1),
            pin(6, 2, Cm1, 27, 3),
            pin(6, 3, C1, 27, 2),
            pin(6, 3, Cm1, 27, 4),
        ],
        (-3, _) => {
            let id = if ell % 3 == 1 { GroupId::CubeRatio } else { GroupId::CartanCube };
            vec![Pin { group: NamedGroup::new(id, Some(C1)), level: ell as u64, tiebreak: Some(1) }]
        }
        _ if disc % ell as i64 == 0 => vec![pin(2, 1, C1, ell as u64, 1), pin(2, 1, Cm1, ell as u64, 2)],
        _ => Vec::new(),
    }
}

/// Index of a named group in the normalizer, read off its name.
pub fn named_index(named: &NamedGroup) -> u64 {
    match named.id {
        GroupId::Normalizer => 1,
        GroupId::Cartan => 2,
        GroupId::G(i, _) => {
            if named.gamma.is_some() {
                i as u64
            } else {
                2 * i as u64
            }
        }
        GroupId::CartanCube | GroupId::CubeRatio => {
            if named.gamma.is_some() {
                3
            } else {
                6
            }
        }
    }
}

/// Label of a named group straight from the calibration table, without
/// building any matrices. `None` unless the group is pinned with a tiebreak.
pub fn pinned_label(order: &CMOrder, ell: u32, named: &NamedGroup) -> Option<CMLabel> {
    if named.id == GroupId::Normalizer {
        return Some(CMLabel::maximal(order, ell));
    }
    let p = pins_for(order, ell).into_iter().find(|p| p.group == *named)?;
    Some(CMLabel::with_image(order, ell, p.level, named_index(named), p.tiebreak?))
}

/// Lexicographically smallest sorted element list among the ambient conjugates of `h`.
pub fn canonical_conjugate(h: &Subgroup, ambient: &Subgroup) -> Vec<u64> {
    let mut best: Option<Vec<u64>> = None;
    for g in ambient.elements() {
        let c = h.conjugate(&g);
        let v = c.packed().to_vec();
        if best.as_ref().is_none_or(|b| v < *b) {
            best = Some(v);
        }
    }
    best.unwrap_or_default()
}

pub fn cm_label(h: &Subgroup, order: &CMOrder, ell: u32) -> Result<CMLabel> {
    cm_label_detailed(h, order, ell).map(|(l, _)| l)
}

struct Assigned {
    group: Subgroup,
    level: u64,
    index: u64,
    tiebreak: Option<u32>,
    source: LabelSource,
}

fn assign(h: &Subgroup, params: &CartanParams, ambient: &Subgroup, pins: &[(Pin, Subgroup)]) -> Result<Assigned> {
    let index = (ambient.order() / h.order()) as u64;
    if index == 1 {
        return Ok(Assigned { group: h.clone(), level: 1, index: 1, tiebreak: Some(1), source: LabelSource::Maximal });
    }
    for (p, g) in pins {
        if g.order() == h.order() && conjugate_equal(h, g, ambient) {
            let source = if p.tiebreak.is_some() { LabelSource::Pinned } else { LabelSource::LevelPinned };
            return Ok(Assigned { group: h.clone(), level: p.level, index, tiebreak: p.tiebreak, source });
        }
    }
    let level = level_of_definition(h, ambient, params.ell)?;
    Ok(Assigned { group: h.clone(), level, index, tiebreak: None, source: LabelSource::Uncalibrated })
}

/// Label together with the provenance of its level and tiebreak digits.
pub fn cm_label_detailed(h: &Subgroup, order: &CMOrder, ell: u32) -> Result<(CMLabel, LabelSource)> {
    let params = cartan_params(*order, h.modulus())?;
    if params.ell != ell {
        return Err(ModGroupError::BadModulus(h.modulus() as u64));
    }
    let ambient = normalizer_group(&params);
    if !h.is_subgroup_of(&ambient) {
        return Err(ModGroupError::NotContained);
    }
    let pins: Vec<(Pin, Subgroup)> = pins_for(order, ell)
        .into_iter()
        .filter_map(|p| named_subgroup(&p.group, &params).ok().map(|g| (p, g)))
        .collect();
    let me = assign(h, &params, &ambient, &pins)?;
    if let Some(t) = me.tiebreak {
        return Ok((CMLabel::with_image(order, ell, me.level, me.index, t), me.source));
    }
    // Tiebreak by canonical ordering among all candidate images with the same level and index.
    let mut peers: Vec<Subgroup> = vec![me.group.clone()];
    for ng in named_candidates(&params) {
        let Ok(g) = named_subgroup(&ng, &params) else { continue };
        if g.order() == ambient.order() || peers.iter().any(|p| conjugate_equal(p, &g, &ambient)) {
            continue;
        }
        let a = assign(&g, &params, &ambient, &pins)?;
        if a.level == me.level && a.index == me.index {
            peers.push(g);
        }
    }
    let reduce_to = peers
        .iter()
        .map(|g| level_of_definition(g, &ambient, ell))
        .collect::<Result<Vec<u64>>>()?
        .into_iter()
        .max()
        .unwrap_or(ell as u64)
        .max(ell as u64) as u32;
    let small_params = cartan_params(*order, reduce_to)?;
    let small_ambient = normalizer_group(&small_params);
    let mut keyed: Vec<(Vec<u64>, usize)> = Vec::new();
    for (i, g) in peers.iter().enumerate() {
        keyed.push((canonical_conjugate(&g.reduce(reduce_to)?, &small_ambient), i));
    }
    keyed.sort();
    let t = keyed.iter().position(|(_, i)| *i == 0).unwrap() as u32 + 1;
    Ok((CMLabel::with_image(order, ell, me.level, me.index, t), me.source))
}
