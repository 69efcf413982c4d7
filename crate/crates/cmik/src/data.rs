//! JSON data files: the model registry and the classification table.

use std::fs;
use std::path::{Path, PathBuf};

use cmik_core::classify::{ClassificationRow, Condition, Provenance};
use cmik_core::ecmodel::{parse_curve, registry, RegistryEntry};
use cmik_core::hilbert::class_number;
use cmik_core::modgroup::CMOrder;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::{CmikError, Result};

pub const DATA_VERSION: u32 = 1;
pub const REGISTRY_FILE: &str = "registry.json";
pub const CLASSIFICATION_FILE: &str = "classification.json";

/// `CMIK_DATA` if set, else the data directory shipped with the crate.
pub fn data_dir() -> PathBuf {
    match std::env::var_os("CMIK_DATA") {
        Some(d) => PathBuf::from(d),
        None => PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/data")),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegistryRecord {
    pub disc_k: i64,
    pub conductor: u64,
    pub disc: i64,
    pub class_number: usize,
    /// Radicand m of Q(sqrt m), absent for Q.
    pub field_m: Option<i64>,
    pub model: String,
    pub reference: Option<String>,
    pub conductor_norm: Option<u64>,
    pub j: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegistryFile {
    pub version: u32,
    pub rows: Vec<RegistryRecord>,
}

impl RegistryRecord {
    pub fn from_entry(e: &RegistryEntry) -> Self {
        RegistryRecord {
            disc_k: e.row.disc_k,
            conductor: e.row.conductor,
            disc: e.order.disc(),
            class_number: class_number(e.order.disc()),
            field_m: e.row.field_m,
            model: e.row.model.to_string(),
            reference: e.row.lmfdb.map(str::to_string),
            conductor_norm: e.row.conductor_norm(),
            j: e.j.to_string(),
        }
    }

    /// Parses the model and checks that the stored j-invariant matches.
    pub fn to_entry(&self) -> Result<RegistryEntry> {
        let order = CMOrder::new(self.disc_k, self.conductor)?;
        let row = registry()
            .into_iter()
            .find(|e| e.order == order)
            .ok_or_else(|| CmikError::Data(format!("unknown order {}", self.disc)))?;
        let curve = parse_curve(&self.model, row.row.base_field())?;
        let j = curve.j_invariant();
        if j.to_string() != self.j {
            return Err(CmikError::Data(format!("j mismatch for {}: {} vs {}", self.disc, j, self.j)));
        }
        Ok(RegistryEntry { row: row.row, order, curve, j })
    }
}

impl RegistryFile {
    pub fn builtin() -> Self {
        RegistryFile { version: DATA_VERSION, rows: registry().iter().map(RegistryRecord::from_entry).collect() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationRecord {
    /// Discriminant of the order.
    pub order: i64,
    pub ell: u32,
    pub family: String,
    pub condition: String,
    pub label: String,
    pub group_id: String,
    pub provenance: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationFile {
    pub version: u32,
    pub prime_budget: u64,
    pub rows: Vec<ClassificationRecord>,
}

impl From<&ClassificationRow> for ClassificationRecord {
    fn from(r: &ClassificationRow) -> Self {
        ClassificationRecord {
            order: r.order.disc(),
            ell: r.ell,
            family: r.family.clone(),
            condition: r.condition.to_string(),
            label: r.label.clone(),
            group_id: r.group_id.clone(),
            provenance: r.provenance.as_str().to_string(),
        }
    }
}

impl TryFrom<&ClassificationRecord> for ClassificationRow {
    type Error = CmikError;

    fn try_from(r: &ClassificationRecord) -> Result<Self> {
        Ok(ClassificationRow {
            order: CMOrder::from_disc(r.order)?,
            ell: r.ell,
            family: r.family.clone(),
            condition: r.condition.parse::<Condition>()?,
            label: r.label.clone(),
            group_id: r.group_id.clone(),
            provenance: r.provenance.parse::<Provenance>()?,
        })
    }
}

impl ClassificationFile {
    pub fn rows(&self) -> Result<Vec<ClassificationRow>> {
        if self.version != DATA_VERSION {
            return Err(CmikError::Data(format!("unsupported version {}", self.version)));
        }
        self.rows.iter().map(ClassificationRow::try_from).collect()
    }
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

pub fn load_registry(dir: &Path) -> Result<RegistryFile> {
    read_json(&dir.join(REGISTRY_FILE))
}

pub fn load_classification(dir: &Path) -> Result<ClassificationFile> {
    read_json(&dir.join(CLASSIFICATION_FILE))
}

/// Stored classification rows, or none if the file is absent.
pub fn stored_rows(dir: &Path) -> Result<Vec<ClassificationRow>> {
    let path = dir.join(CLASSIFICATION_FILE);
    if !path.exists() {
        return Ok(Vec::new());
    }
    load_classification(dir)?.rows()
}
