//! Data files, table regeneration and the command line for `cmik-core`.

pub mod cli;
pub mod data;
pub mod regen;

use cmik_core::classify::ClassifyError;
use cmik_core::ecmodel::{EcError, ParseError};
use cmik_core::frobverify::FrobError;
use cmik_core::modgroup::ModGroupError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CmikError {
    #[error("{0}")]
    Usage(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("data file: {0}")]
    Data(String),
    #[error(transparent)]
    Classify(#[from] ClassifyError),
    #[error(transparent)]
    Curve(#[from] EcError),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Frob(#[from] FrobError),
    #[error(transparent)]
    Group(#[from] ModGroupError),
}

pub type Result<T> = std::result::Result<T, CmikError>;
