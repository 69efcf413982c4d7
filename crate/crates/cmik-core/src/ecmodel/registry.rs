//! Chosen models for every order of class number one or two.

use alloc::vec::Vec;

use super::{parse_curve, Curve, EcError};
use crate::modgroup::CMOrder;
use crate::quadfield::{BaseField, QuadField, QuadNum};

/// One row of the model table, as static text.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RegistryRow {
    pub disc_k: i64,
    pub conductor: u64,
    /// Radicand of the field of definition; `None` for Q.
    pub field_m: Option<i64>,
    pub model: &'static str,
    pub lmfdb: Option<&'static str>,
    /// Norm of the conductor when not readable from the reference.
    pub conductor_norm_override: Option<u64>,
}

const fn row(disc_k: i64, conductor: u64, field_m: Option<i64>, model: &'static str, lmfdb: Option<&'static str>) -> RegistryRow {
    RegistryRow { disc_k, conductor, field_m, model, lmfdb, conductor_norm_override: None }
}

pub const REGISTRY_ROWS: [RegistryRow; 42] = [
    row(-3, 1, None, "y^2=x^3+16", Some("Q/27/a/4")),
    row(-3, 2, None, "y^2=x^3-15x+22", Some("Q/36/a/2")),
    row(-3, 3, None, "y^2=x^3-480x+4048", Some("Q/27/a/2")),
    row(-3, 4, Some(3), "y^2+(a+1)xy+(a+1)y=x^3+(-a-1)x^2+(4a-13)x+11a-21", Some("2.2.12.1/16.1/a/3")),
    row(-3, 5, Some(5), "y^2+y=x^3+(6a-48)x+109a-76", Some("2.2.5.1/2025.1/c/1")),
    row(-3, 7, Some(21), "y^2+y=x^3+(-a-1)x^2+(4131a-11618)x+221331a-618025", Some("2.2.21.1/49.1/a/1")),
    row(-4, 1, None, "y^2=x^3+x", Some("Q/64/a/4")),
    row(-4, 2, None, "y^2=x^3-11x+14", Some("Q/32/a/2")),
    row(-4, 3, Some(3), "y^2+(a+1)xy+ay=x^3+(a-1)x^2+(25a-45)x+72a-127", Some("2.2.12.1/9.1/a/1")),
    row(-4, 4, Some(2), "y^2+axy=x^3+x^2+(15a-22)x+46a-69", Some("2.2.8.1/32.1/a/1")),
    row(-4, 5, Some(5), "y^2=x^3+(117a-556)x+3920a-3640", None),
    row(-7, 1, None, "y^2=x^3-1715x+33614", Some("Q/49/a/2")),
    row(-7, 2, None, "y^2=x^3-29155x+1915998", Some("Q/49/a/1")),
    row(-7, 4, Some(7), "y^2+xy+y=x^3-x^2+(-270a-715)x+3223a+8527", Some("2.2.28.1/1.1/a/3")),
    row(-8, 1, None, "y^2=x^3-4320x+96768", Some("Q/256/a/2")),
    row(-8, 2, Some(2), "y^2+axy=x^3+(-a-1)x^2+(2a+2)x-3a-5", Some("2.2.8.1/64.1/a/1")),
    row(-8, 3, Some(6), "y^2+axy+(a+1)y=x^3+(a+1)x^2+(67a-161)x+458a-1122", Some("2.2.24.1/1.1/a/3")),
    row(-11, 1, None, "y^2=x^3-9504x+365904", Some("Q/121/b/2")),
    row(-11, 3, Some(33), "y^2+y=x^3-ax^2+(-435a-1030)x-7890a-18717", Some("2.2.33.1/1.1/a/1")),
    row(-15, 1, Some(5), "y^2+xy+ay=x^3-x^2-2ax+a", Some("2.2.5.1/81.1/a/1")),
    row(-15, 2, Some(5), "y^2+axy+(a+1)y=x^3+(-a-1)x^2+(-13a-14)x-20a-6", Some("2.2.5.1/81.1/a/5")),
    row(-19, 1, None, "y^2=x^3-608x+5776", Some("Q/361/a/2")),
    row(-20, 1, Some(5), "y^2=x^3-ax^2+(-a-9)x-6a-15", Some("2.2.5.1/4096.1/k/1")),
    row(-24, 1, Some(2), "y^2+axy+y=x^3+x^2+(a-3)x-a+1", Some("2.2.8.1/81.1/b/1")),
    row(-35, 1, Some(5), "y^2+y=x^3-x^2+(-14a+19)x+21a-36", Some("2.2.5.1/2401.1/b/1")),
    RegistryRow {
        disc_k: -40,
        conductor: 1,
        field_m: Some(5),
        model: "y^2=x^3+(6a-28)x+16a-56",
        lmfdb: None,
        conductor_norm_override: Some(4096),
    },
    row(-43, 1, None, "y^2=x^3-13760x+621264", Some("Q/1849/b/2")),
    row(-51, 1, Some(17), "y^2+y=x^3+(-6a-12)x+14a+19", Some("2.2.17.1/81.1/b/1")),
    row(-52, 1, Some(13), "y^2=x^3+(10a-35)x+40a-76", None),
    row(-67, 1, None, "y^2=x^3-117920x+15585808", Some("Q/4489/b/2")),
    row(-88, 1, Some(2), "y^2+axy+y=x^3+x^2+(-193a-453)x+2233a+4008", None),
    row(-91, 1, Some(13), "y^2+y=x^3+(84a-182)x+539a-1213", None),
    row(-115, 1, Some(5), "y^2+y=x^3+(46a-368)x+2645a-6216", None),
    row(-123, 1, Some(41), "y^2+y=x^3+(-60a-210)x+560a+1384", Some("2.2.41.1/81.1/c/1")),
    row(-148, 1, Some(37), "y^2=x^3+(290a-1615)x+8120a-23268", None),
    row(-163, 1, None, "y^2=x^3-34790720x+78984748304", Some("Q/26569/a/2")),
    row(-187, 1, Some(17), "y^2+y=x^3+(1430a-3520)x-40898a+104090", None),
    row(-232, 1, Some(29), "y^2=x^3+(7280a-36310)x+960960a-2492952", None),
    row(-235, 1, Some(5), "y^2+y=x^3+(4136a-17578)x+324723a-962572", None),
    row(-267, 1, Some(89), "y^2+y=x^3+(-1590a-8580)x+92750a+359875", Some("2.2.89.1/81.1/a/1")),
    row(-403, 1, Some(13), "y^2+y=x^3+(186930a-427490)x+58571989a-135261471", None),
    row(-427, 1, Some(61), "y^2+y=x^3+(30030a-137060)x+5787145a-25355528", None),
];

impl RegistryRow {
    pub fn order(&self) -> CMOrder {
        CMOrder::new(self.disc_k, self.conductor).expect("valid registry order")
    }

    pub fn base_field(&self) -> BaseField {
        match self.field_m {
            None => BaseField::Rational,
            Some(m) => BaseField::Quadratic(QuadField::new(m).expect("square-free radicand")),
        }
    }

    /// Norm of the conductor, read from the reference (`.../49.1/...` or `Q/27/...`).
    pub fn conductor_norm(&self) -> Option<u64> {
        if let Some(n) = self.conductor_norm_override {
            return Some(n);
        }
        let r = self.lmfdb?;
        let part = r.split('/').nth(1)?;
        part.split('.').next()?.parse().ok()
    }
}

/// A parsed registry row.
#[derive(Clone, Debug)]
pub struct RegistryEntry {
    pub row: RegistryRow,
    pub order: CMOrder,
    pub curve: Curve,
    pub j: QuadNum,
}

pub fn registry() -> Vec<RegistryEntry> {
    REGISTRY_ROWS
        .iter()
        .map(|r| {
            let curve = parse_curve(r.model, r.base_field()).expect("registry model parses");
            let j = curve.j_invariant();
            RegistryEntry { row: *r, order: r.order(), curve, j }
        })
        .collect()
}

pub fn registry_lookup(order: &CMOrder) -> Result<RegistryEntry, EcError> {
    let row = REGISTRY_ROWS
        .iter()
        .find(|r| r.disc_k == order.disc_k() && r.conductor == order.conductor())
        .ok_or(EcError::NoRegistryRow(order.disc()))?;
    let curve = parse_curve(row.model, row.base_field())?;
    let j = curve.j_invariant();
    Ok(RegistryEntry { row: *row, order: *order, curve, j })
}
