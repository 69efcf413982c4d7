//! Twist-set method: sample Frobenius data for every candidate twist and
//! keep the images the data singles out.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{admissible_images, check_order, ClassificationRow, ClassifyError, Condition, Provenance};
use crate::arith;
use crate::ecmodel::{registry_lookup, Curve, RegistryEntry};
use crate::frobverify::{
    attach_isogeny_character, class_counts, discriminate_counts, sample_frobenius_data, ClassCounts, Discrimination,
};
use crate::modgroup::{cartan_params, cm_label, named_subgroup, pinned_label, working_modulus, CMOrder, NamedGroup};
use crate::quadfield::{BaseField, QuadNum};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MethodConfig {
    /// Largest prime p sampled.
    pub prime_budget: u64,
    /// Supersingular primes used for the isogeny character.
    pub supersingular_limit: usize,
}

impl Default for MethodConfig {
    fn default() -> Self {
        MethodConfig { prime_budget: 3000, supersingular_limit: 20 }
    }
}

/// Candidate images with their class statistics at the sampling modulus.
#[derive(Debug, Clone)]
pub struct Candidates {
    pub order: CMOrder,
    pub ell: u32,
    /// Sampling exponent: data is taken mod `ell^n`.
    pub n: u32,
    pub groups: Vec<NamedGroup>,
    pub labels: Vec<String>,
    pub counts: Vec<ClassCounts>,
}

#[derive(Debug, Clone)]
pub struct TwistResult {
    pub alpha: QuadNum,
    pub samples: usize,
    pub lambda_filled: usize,
    /// Indices into the candidate list with the best likelihood.
    pub best: Vec<usize>,
    /// Distinct labels among the best candidates.
    pub labels: Vec<String>,
    pub groups: Vec<NamedGroup>,
    pub discrimination: Discrimination,
}

impl TwistResult {
    pub fn is_ambiguous(&self) -> bool {
        self.labels.len() > 1
    }
}

#[derive(Debug, Clone)]
pub struct MethodOutcome {
    pub order: CMOrder,
    pub ell: u32,
    pub twists: Vec<TwistResult>,
    pub rows: Vec<ClassificationRow>,
}

fn sampling_exponent(ell: u32) -> u32 {
    if ell == 2 {
        5
    } else {
        1
    }
}

pub fn uses_lambda(order: &CMOrder, ell: u32) -> bool {
    ell % 4 == 3 && order.disc() % ell as i64 == 0
}

/// Admissible images, their labels and class statistics at the sampling modulus.
pub fn method_candidates(order: &CMOrder, ell: u32) -> Result<Candidates, ClassifyError> {
    candidates_at(order, ell, sampling_exponent(ell))
}

/// Admissible images with class statistics mod `ell^n`.
pub fn candidates_at(order: &CMOrder, ell: u32, n: u32) -> Result<Candidates, ClassifyError> {
    let groups = admissible_images(order, ell)?;
    let modulus = ell.pow(n);
    let params = cartan_params(*order, working_modulus(ell))?;
    let mut labels = Vec::with_capacity(groups.len());
    let mut counts = Vec::with_capacity(groups.len());
    for g in &groups {
        let sub = named_subgroup(g, &params)?;
        let label = match pinned_label(order, ell, g) {
            Some(l) => l,
            None => cm_label(&sub, order, ell)?,
        };
        labels.push(label.to_string());
        counts.push(class_counts(&sub, modulus, ell)?);
    }
    Ok(Candidates { order: *order, ell, n, groups, labels, counts })
}

/// Rational primes whose primes above can divide a twist parameter: l and the
/// primes of bad reduction of the model. Without a recorded conductor the
/// primes dividing the norm of the model discriminant are used instead.
pub fn twist_primes(entry: &RegistryEntry, ell: u32) -> Result<Vec<u64>, ClassifyError> {
    let bad = || ClassifyError::TwistPrimes(entry.order.to_string());
    let mut ps = vec![ell as u64];
    let found = match entry.row.conductor_norm() {
        Some(n) => arith::factorize(n as i128).map_err(|_| bad())?.primes().into_iter().map(|p| p as u64).collect(),
        None => {
            let d = entry.curve.field.norm(&entry.curve.discriminant());
            let n = d.numer().abs() * d.denom();
            small_prime_support(n).ok_or_else(bad)?
        }
    };
    for p in found {
        if !ps.contains(&p) {
            ps.push(p);
        }
    }
    ps.sort_unstable();
    Ok(ps)
}

const TRIAL_LIMIT: u64 = 100_000;

/// Primes dividing n, if n factors completely over primes below the trial limit.
fn small_prime_support(mut n: BigInt) -> Option<Vec<u64>> {
    let mut out = Vec::new();
    for p in arith::primes_up_to(TRIAL_LIMIT) {
        let bp = BigInt::from(p);
        if (&n % &bp).is_zero() {
            out.push(p);
            while (&n % &bp).is_zero() {
                n /= &bp;
            }
        }
        if n.is_one() {
            return Some(out);
        }
    }
    n.is_one().then_some(out)
}

/// The twist parameters to test, one per square class.
pub fn twist_set(order: &CMOrder, ell: u32) -> Result<(RegistryEntry, Vec<QuadNum>), ClassifyError> {
    let entry = registry_lookup(order)?;
    let primes = twist_primes(&entry, ell)?;
    let set = match entry.curve.field {
        BaseField::Quadratic(k) => k.twist_candidates(&primes).map_err(|e| ClassifyError::TwistPrimes(format_err(e)))?,
        BaseField::Rational => {
            let mut v = Vec::new();
            for mask in 0u64..(1 << (primes.len() + 1)) {
                let mut d: i64 = if mask & 1 == 1 { -1 } else { 1 };
                for (i, &p) in primes.iter().enumerate() {
                    if mask >> (i + 1) & 1 == 1 {
                        d *= p as i64;
                    }
                }
                v.push(QuadNum::from_ints(d, 0));
            }
            v
        }
    };
    Ok((entry, set))
}

fn format_err<E: core::fmt::Display>(e: E) -> String {
    alloc::format!("{e}")
}

/// Samples the twist of the model by `alpha` and ranks the candidates.
pub fn classify_twist(
    model: &Curve,
    alpha: &QuadNum,
    cands: &Candidates,
    config: &MethodConfig,
) -> Result<TwistResult, ClassifyError> {
    let curve = if alpha.is_rational() && alpha.x.is_one() { model.clone() } else { model.quadratic_twist(alpha)? };
    let mut data = sample_frobenius_data(&curve, cands.ell, cands.n, config.prime_budget)?;
    let lambda_filled = if uses_lambda(&cands.order, cands.ell) {
        attach_isogeny_character(&mut data, &curve, config.supersingular_limit)?
    } else {
        0
    };
    let disc = discriminate_counts(&data, &cands.counts)?;
    let best = disc.best.clone();
    let mut labels: Vec<String> = Vec::new();
    let mut groups = Vec::new();
    for &i in &best {
        if !labels.contains(&cands.labels[i]) {
            labels.push(cands.labels[i].clone());
            groups.push(cands.groups[i]);
        }
    }
    Ok(TwistResult { alpha: alpha.clone(), samples: data.samples.len(), lambda_filled, best, labels, groups, discrimination: disc })
}

/// Rows for the non-maximal twists followed by an `otherwise` row.
pub fn assemble_rows(order: &CMOrder, ell: u32, twists: &[TwistResult], family: &str) -> Vec<ClassificationRow> {
    let maximal = crate::modgroup::CMLabel::maximal(order, ell).to_string();
    let mut rows = Vec::new();
    for t in twists {
        if t.labels.len() == 1 && t.labels[0] == maximal {
            continue;
        }
        let ambiguous = t.is_ambiguous();
        rows.push(ClassificationRow {
            order: *order,
            ell,
            family: family.to_string(),
            condition: Condition::Alpha(t.alpha.clone()),
            label: t.labels.join("|"),
            group_id: t.groups.iter().map(|g| g.to_string()).collect::<Vec<_>>().join("|"),
            provenance: if ambiguous { Provenance::Ambiguous } else { Provenance::Computed },
        });
    }
    rows.push(ClassificationRow {
        order: *order,
        ell,
        family: family.to_string(),
        condition: Condition::Otherwise,
        label: maximal,
        group_id: NamedGroup::normalizer().to_string(),
        provenance: Provenance::Computed,
    });
    rows
}

/// Runs the method for one order and prime.
pub fn run_method(order: &CMOrder, ell: u32, config: &MethodConfig) -> Result<MethodOutcome, ClassifyError> {
    check_order(order)?;
    let cands = method_candidates(order, ell)?;
    let (entry, set) = twist_set(order, ell)?;
    let mut twists = Vec::with_capacity(set.len());
    for alpha in &set {
        twists.push(classify_twist(&entry.curve, alpha, &cands, config)?);
    }
    let rows = assemble_rows(order, ell, &twists, "relative");
    Ok(MethodOutcome { order: *order, ell, twists, rows })
}
