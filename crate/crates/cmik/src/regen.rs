//! Regenerates the classification table: built-in rows for every special
//! prime of every registry order, and twist-set method output for the
//! class-number-two cells without a printed answer.

use cmik_core::arith;
use cmik_core::classify::{
    assemble_rows, builtin_rows, classify_twist, method_candidates, twist_set, ClassificationRow, ClassifyError,
    MethodConfig, MethodOutcome, TwistResult,
};
use cmik_core::ecmodel::registry;
use cmik_core::hilbert::class_number;
use cmik_core::modgroup::CMOrder;
use rayon::prelude::*;

use crate::data::{ClassificationFile, ClassificationRecord, DATA_VERSION};
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Cell {
    pub order: CMOrder,
    pub ell: u32,
}

/// Primes where some twist can have a non-maximal image: 2 and the primes
/// dividing the discriminant.
pub fn special_primes(order: &CMOrder) -> Vec<u32> {
    let mut v = vec![2u32];
    if let Ok(f) = arith::factorize(order.disc() as i128) {
        for p in f.primes() {
            if p != 2 {
                v.push(p as u32);
            }
        }
    }
    v
}

/// Every (registry order, special prime) pair.
pub fn cells() -> Vec<Cell> {
    let mut out = Vec::new();
    for e in registry() {
        for ell in special_primes(&e.order) {
            out.push(Cell { order: e.order, ell });
        }
    }
    out
}

/// Same as `classify::run_method`, with the twists sampled in parallel.
pub fn run_method_parallel(order: &CMOrder, ell: u32, config: &MethodConfig) -> Result<MethodOutcome> {
    let cands = method_candidates(order, ell)?;
    let (entry, set) = twist_set(order, ell)?;
    let twists: Vec<TwistResult> = set
        .par_iter()
        .map(|a| classify_twist(&entry.curve, a, &cands, config))
        .collect::<std::result::Result<_, _>>()?;
    let rows = assemble_rows(order, ell, &twists, "relative");
    Ok(MethodOutcome { order: *order, ell, twists, rows })
}

fn cell_rows(cell: &Cell, config: &MethodConfig) -> Result<Vec<ClassificationRow>> {
    match builtin_rows(&cell.order, cell.ell) {
        Ok(rows) => Ok(rows),
        Err(ClassifyError::Uncovered(..)) if class_number(cell.order.disc()) == 2 => {
            Ok(run_method_parallel(&cell.order, cell.ell, config)?.rows)
        }
        Err(e) => Err(e.into()),
    }
}

/// Builds the full classification file. Rows come out in registry order.
pub fn regenerate(config: &MethodConfig) -> Result<ClassificationFile> {
    let cells = cells();
    let per_cell: Vec<Vec<ClassificationRow>> =
        cells.par_iter().map(|c| cell_rows(c, config)).collect::<Result<_>>()?;
    let rows = per_cell.iter().flatten().map(ClassificationRecord::from).collect();
    Ok(ClassificationFile { version: DATA_VERSION, prime_budget: config.prime_budget, rows })
}
