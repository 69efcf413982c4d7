//! The `cmik` command line.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use cmik_core::classify::{
    candidates_at, predict_label_with, select_row, twist_set, uses_lambda, ClassifyError, MethodConfig, Provenance,
};
use cmik_core::divpoly::{division_polynomial, rational_factor_degrees, verify_stated_factorizations};
use cmik_core::ecmodel::{identify_order, normalize_twist_parameter, parse_curve, registry_lookup, Curve, TwistClass};
use cmik_core::frobverify::{
    attach_isogeny_character, discriminate_counts, invariant_violations, sample_frobenius_data, FrobData, Violation,
};
use cmik_core::modgroup::{
    cartan_params, cm_label, level_of_definition, named_subgroup, normalizer_group, CMLabel, CMOrder, NamedGroup,
};
use cmik_core::field::Ring;
use cmik_core::quadfield::{parse_linear, BaseField, QuadField, QuadNum};
use serde_json::{json, Value};

use crate::data::{self, data_dir, write_json, RegistryFile, CLASSIFICATION_FILE, REGISTRY_FILE};
use crate::regen::{regenerate, run_method_parallel, special_primes};
use crate::{CmikError, Result};

#[derive(Debug, Parser)]
#[command(name = "cmik", about = "l-adic Galois images of CM elliptic curves", version)]
pub struct Cli {
    /// Machine-readable output.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Label of the l-adic image of a twist of the family model.
    Label {
        #[arg(long, allow_hyphen_values = true)]
        disc: i64,
        #[arg(long)]
        ell: u32,
        /// Twist parameter: an integer over Q, or `x+y*a` over Q(sqrt m).
        #[arg(long, allow_hyphen_values = true)]
        d: String,
    },
    /// CM order, twist class and image labels of a curve.
    Identify {
        #[arg(long)]
        curve: String,
        /// Radicand m when the curve is defined over Q(sqrt m).
        #[arg(long)]
        field: Option<i64>,
    },
    /// Samples Frobenius data and tests it against the admissible images.
    Verify {
        #[arg(long)]
        curve: String,
        #[arg(long)]
        field: Option<i64>,
        #[arg(long)]
        ell: u32,
        /// Data is taken mod ell^level.
        #[arg(long, default_value_t = 1)]
        level: u32,
        /// Largest prime sampled.
        #[arg(long, default_value_t = 2000)]
        primes: u64,
        #[arg(long, default_value_t = 20)]
        supersingular: usize,
        /// Writes the samples to this CSV file.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// The twist parameters the method tests.
    Twistset {
        #[arg(long, allow_hyphen_values = true)]
        disc: i64,
        #[arg(long)]
        ell: u32,
        /// Also runs the method on the set.
        #[arg(long)]
        run: bool,
        #[arg(long, default_value_t = 3000)]
        primes: u64,
    },
    /// Order, index, level and label of a named group.
    Group {
        #[arg(long)]
        name: String,
        #[arg(long, allow_hyphen_values = true)]
        disc: i64,
        #[arg(long = "mod")]
        modulus: u32,
    },
    /// Division polynomials and the stated factorization identities.
    Divpoly {
        #[arg(long)]
        check_identities: bool,
        #[arg(long)]
        curve: Option<String>,
        #[arg(long)]
        field: Option<i64>,
        #[arg(long, default_value_t = 3)]
        n: u32,
    },
    /// Recomputes the data files.
    RegenTables {
        #[arg(long, default_value_t = 3000)]
        primes: u64,
        #[arg(long, default_value_t = 20)]
        supersingular: usize,
        /// Output directory (default: the data directory).
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Outcome of a command: text and JSON renderings plus the exit code.
pub struct Report {
    pub text: String,
    pub json: Value,
    pub code: i32,
}

impl Report {
    fn ok(text: String, json: Value) -> Self {
        Report { text, json, code: 0 }
    }
}

/// Parses arguments, runs the command and prints the result. Returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli.command) {
        Ok(r) => {
            if cli.json {
                println!("{}", r.json);
            } else {
                println!("{}", r.text.trim_end());
            }
            r.code
        }
        Err(e) => {
            let code = exit_code(&e);
            if cli.json {
                println!("{}", json!({ "error": e.to_string(), "exit": code }));
            } else {
                eprintln!("error: {e}");
            }
            code
        }
    }
}

fn exit_code(e: &CmikError) -> i32 {
    match e {
        CmikError::Classify(ClassifyError::Uncovered(..)) => 1,
        CmikError::Classify(ClassifyError::ClassNumber(_)) => 2,
        CmikError::Usage(_) | CmikError::Parse(_) | CmikError::Curve(_) | CmikError::Group(_) => 2,
        _ => 1,
    }
}

pub fn execute(cmd: &Command) -> Result<Report> {
    match cmd {
        Command::Label { disc, ell, d } => label(*disc, *ell, d),
        Command::Identify { curve, field } => identify(&read_curve(curve, *field)?),
        Command::Verify { curve, field, ell, level, primes, supersingular, csv } => {
            verify(&read_curve(curve, *field)?, *ell, *level, *primes, *supersingular, csv.as_ref())
        }
        Command::Twistset { disc, ell, run, primes } => twistset(*disc, *ell, *run, *primes),
        Command::Group { name, disc, modulus } => group(name, *disc, *modulus),
        Command::Divpoly { check_identities, curve, field, n } => divpoly(*check_identities, curve.as_deref(), *field, *n),
        Command::RegenTables { primes, supersingular, out } => {
            regen(&MethodConfig { prime_budget: *primes, supersingular_limit: *supersingular }, out.clone())
        }
    }
}

fn base_field(m: Option<i64>) -> Result<BaseField> {
    match m {
        None => Ok(BaseField::Rational),
        Some(m) => QuadField::new(m).map(BaseField::Quadratic).map_err(|e| CmikError::Usage(e.to_string())),
    }
}

pub fn read_curve(s: &str, field: Option<i64>) -> Result<Curve> {
    Ok(parse_curve(s, base_field(field)?)?)
}

fn order_of(disc: i64) -> Result<CMOrder> {
    CMOrder::from_disc(disc).map_err(|e| CmikError::Usage(e.to_string()))
}

/// The twist of the family model of `order` by `d`: `y^2 = x^3 + d x` for
/// j = 1728, `y^2 = x^3 + 16 d` for j = 0, else the quadratic twist of the
/// registry model.
pub fn family_twist(order: &CMOrder, d: &str) -> Result<Curve> {
    let entry = registry_lookup(order)?;
    let bad = || CmikError::Usage(format!("bad twist parameter {d:?}"));
    let alpha: QuadNum = parse_linear(d).ok_or_else(bad)?;
    let f = entry.curve.field;
    if f.quad().is_none() && !alpha.is_rational() {
        return Err(bad());
    }
    let zero = QuadNum::from_ints(0, 0);
    if alpha == zero {
        return Err(bad());
    }
    match order.disc() {
        -4 => Ok(Curve::short(f, alpha, zero)?),
        -3 => Ok(Curve::short(f, zero, f.mul(&QuadNum::from_ints(16, 0), &alpha))?),
        _ => Ok(entry.curve.quadratic_twist(&alpha)?),
    }
}

fn stored_rows() -> Result<Vec<cmik_core::classify::ClassificationRow>> {
    data::stored_rows(&data_dir())
}

fn predict(order: &CMOrder, ell: u32, twist: &TwistClass, field: &BaseField, rows: &[cmik_core::classify::ClassificationRow]) -> Result<CMLabel> {
    match predict_label_with(order, ell, twist, field, rows) {
        Ok(l) => Ok(l),
        Err(ClassifyError::Uncovered(o, l)) => {
            // an ambiguous stored row is reported with its candidates
            if let Ok(r) = select_row(order, ell, twist, field, rows) {
                if r.provenance == Provenance::Ambiguous {
                    return Err(CmikError::Data(format!("AMBIGUOUS {} ({})", r.label, r.group_id)));
                }
            }
            Err(ClassifyError::Uncovered(o, l).into())
        }
        Err(e) => Err(e.into()),
    }
}

fn label(disc: i64, ell: u32, d: &str) -> Result<Report> {
    let order = order_of(disc)?;
    let curve = family_twist(&order, d)?;
    let twist = normalize_twist_parameter(&curve)?;
    let rows = stored_rows()?;
    let l = predict(&order, ell, &twist, &curve.field, &rows)?;
    Ok(Report::ok(
        l.to_string(),
        json!({ "disc": disc, "ell": ell, "d": d, "family": twist.family.as_str(), "tag": twist.tag, "label": l.to_string() }),
    ))
}

fn identify(curve: &Curve) -> Result<Report> {
    let twist = normalize_twist_parameter(curve)?;
    let order = twist.order;
    let rows = stored_rows()?;
    let mut text = format!(
        "order: disc {} (disc_K {}, conductor {})\nj: {}\nfamily: {} tag {} parameter {}\n",
        order.disc(),
        order.disc_k(),
        order.conductor(),
        curve.j_invariant(),
        twist.family.as_str(),
        twist.tag,
        twist.parameter
    );
    let mut labels = Vec::new();
    for ell in special_primes(&order) {
        let (shown, value) = match predict(&order, ell, &twist, &curve.field, &rows) {
            Ok(l) => (l.to_string(), json!(l.to_string())),
            Err(e) => (format!("unknown ({e})"), Value::Null),
        };
        text.push_str(&format!("l = {ell}: {shown}\n"));
        labels.push(json!({ "ell": ell, "label": value }));
    }
    let generic = if order.disc() == -3 {
        "l > 3: l.0.s-1.1.1 or l.0.ns-1.1.1 by l mod 3, index 3 when l = 2, 4, 5, 7 mod 9 and d lies in l^r (Q*)^3"
    } else {
        "other l: maximal, l.0.s-1.1.1 if l splits in K and l.0.ns-1.1.1 if inert"
    };
    text.push_str(generic);
    Ok(Report::ok(
        text,
        json!({
            "disc": order.disc(),
            "disc_k": order.disc_k(),
            "conductor": order.conductor(),
            "j": curve.j_invariant().to_string(),
            "family": twist.family.as_str(),
            "tag": twist.tag,
            "parameter": twist.parameter.to_string(),
            "labels": labels,
            "generic": generic,
        }),
    ))
}

fn violation_json(v: &Violation) -> Value {
    let (kind, p) = match v {
        Violation::Hasse(p) => ("hasse", p),
        Violation::Det(p) => ("det", p),
        Violation::ZeroTrace(p) => ("zero_trace", p),
        Violation::Lambda(p) => ("lambda", p),
    };
    json!({ "kind": kind, "p": p })
}

pub fn write_samples_csv(data: &FrobData, path: &PathBuf) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["p", "root", "a_p", "trace", "det", "lambda"])?;
    for s in &data.samples {
        let lambda = s.lambda.map(|l| l.to_string()).unwrap_or_default();
        w.write_record([s.p.to_string(), s.root.to_string(), s.a_p.to_string(), s.trace.to_string(), s.det.to_string(), lambda])?;
    }
    w.flush()?;
    Ok(())
}

fn verify(curve: &Curve, ell: u32, level: u32, primes: u64, supersingular: usize, csv: Option<&PathBuf>) -> Result<Report> {
    let entry = identify_order(curve)?;
    let order = entry.order;
    let cands = candidates_at(&order, ell, level)?;
    let mut data = sample_frobenius_data(curve, ell, level, primes)?;
    let lambda = if uses_lambda(&order, ell) { attach_isogeny_character(&mut data, curve, supersingular)? } else { 0 };
    if let Some(path) = csv {
        write_samples_csv(&data, path)?;
    }
    let disc = discriminate_counts(&data, &cands.counts)?;
    let violations = invariant_violations(&data, order.disc());
    let mut best: Vec<String> = Vec::new();
    for &i in &disc.best {
        if !best.contains(&cands.labels[i]) {
            best.push(cands.labels[i].clone());
        }
    }
    let predicted = normalize_twist_parameter(curve)
        .ok()
        .and_then(|t| predict(&order, ell, &t, &curve.field, &stored_rows().unwrap_or_default()).ok())
        .map(|l| l.to_string());
    let agrees = predicted.as_ref().map(|p| best.contains(p));
    let consistent = violations.is_empty() && agrees != Some(false);
    let name = |i: usize| cands.groups[i].to_string();
    let j = json!({
        "disc": order.disc(),
        "ell": ell,
        "level": level,
        "modulus": data.modulus,
        "samples": data.samples.len(),
        "lambda_values": lambda,
        "survivors": disc.survivors.iter().map(|&i| name(i)).collect::<Vec<_>>(),
        "eliminated": disc.eliminated.iter().map(|&(i, p)| json!({ "group": name(i), "witness": p })).collect::<Vec<_>>(),
        "best": disc.best.iter().map(|&i| json!({ "group": name(i), "label": cands.labels[i] })).collect::<Vec<_>>(),
        "ambiguous": disc.ambiguous.iter().map(|&(a, b)| [name(a), name(b)]).collect::<Vec<_>>(),
        "best_labels": best,
        "predicted": predicted,
        "violations": violations.iter().map(violation_json).collect::<Vec<_>>(),
        "consistent": consistent,
    });
    let text = format!(
        "disc {} at {}^{}: {} samples, {} with lambda\nbest: {}\npredicted: {}\nviolations: {}\nverdict: {}",
        order.disc(),
        ell,
        level,
        data.samples.len(),
        lambda,
        best.join(", "),
        predicted.as_deref().unwrap_or("none"),
        violations.len(),
        if consistent { "consistent" } else { "INCONSISTENT" }
    );
    Ok(Report { text, json: j, code: if consistent { 0 } else { 1 } })
}

fn twistset(disc: i64, ell: u32, run: bool, primes: u64) -> Result<Report> {
    let order = order_of(disc)?;
    let (_, set) = twist_set(&order, ell)?;
    let elems: Vec<String> = set.iter().map(|a| a.to_string()).collect();
    let mut text = format!("{} elements: {}\n", elems.len(), elems.join(", "));
    let mut j = json!({ "disc": disc, "ell": ell, "size": elems.len(), "elements": elems });
    if run {
        let out = run_method_parallel(&order, ell, &MethodConfig { prime_budget: primes, ..MethodConfig::default() })?;
        let mut rows = Vec::new();
        for r in &out.rows {
            text.push_str(&format!("{}: {} [{}]\n", r.condition, r.label, r.provenance.as_str()));
            rows.push(json!({ "condition": r.condition.to_string(), "label": r.label, "group": r.group_id, "provenance": r.provenance.as_str() }));
        }
        j["rows"] = Value::Array(rows);
    }
    Ok(Report::ok(text, j))
}

fn group(name: &str, disc: i64, modulus: u32) -> Result<Report> {
    let order = order_of(disc)?;
    let named = NamedGroup::parse(name).ok_or_else(|| CmikError::Usage(format!("unknown group {name:?}")))?;
    let params = cartan_params(order, modulus)?;
    let g = named_subgroup(&named, &params)?;
    let ambient = normalizer_group(&params);
    let index = ambient.order() / g.order();
    let level = level_of_definition(&g, &ambient, params.ell)?;
    let label = cm_label(&g, &order, params.ell)?;
    let text = format!("{named} mod {modulus}: order {}, index {index}, level {level}, label {label}", g.order());
    Ok(Report::ok(
        text,
        json!({ "name": named.to_string(), "disc": disc, "modulus": modulus, "order": g.order(), "index": index, "level": level, "label": label.to_string() }),
    ))
}

fn divpoly(check: bool, curve: Option<&str>, field: Option<i64>, n: u32) -> Result<Report> {
    let mut text = String::new();
    let mut j = json!({});
    let mut code = 0;
    if check {
        let checks = verify_stated_factorizations();
        let mut items = Vec::new();
        for c in &checks {
            text.push_str(&format!("{} {}: {}\n", if c.passed { "PASS" } else { "FAIL" }, c.id, c.statement));
            items.push(json!({ "id": c.id, "statement": c.statement, "passed": c.passed, "details": c.details }));
            if !c.passed {
                code = 1;
            }
        }
        let passed = checks.iter().filter(|c| c.passed).count();
        text.push_str(&format!("{passed}/{} identities hold\n", checks.len()));
        j["identities"] = Value::Array(items);
    }
    if let Some(s) = curve {
        let c = read_curve(s, field)?;
        let psi = division_polynomial(&c, n).map_err(|e| CmikError::Usage(e.to_string()))?;
        let shown: Vec<String> = psi.iter().map(|z| z.to_string()).collect();
        let degrees = rational_factor_degrees(&psi);
        text.push_str(&format!("psi_{n} coefficients (low to high): [{}]\n", shown.join(", ")));
        if let Some(d) = &degrees {
            text.push_str(&format!("factor degrees over Q: {d:?}\n"));
        }
        j["psi"] = json!({ "n": n, "coefficients": shown, "factor_degrees": degrees });
    }
    if !check && curve.is_none() {
        return Err(CmikError::Usage("divpoly needs --check-identities or --curve".into()));
    }
    Ok(Report { text, json: j, code })
}

fn regen(config: &MethodConfig, out: Option<PathBuf>) -> Result<Report> {
    let dir = out.unwrap_or_else(data_dir);
    std::fs::create_dir_all(&dir)?;
    let file = regenerate(config)?;
    write_json(&dir.join(REGISTRY_FILE), &RegistryFile::builtin())?;
    write_json(&dir.join(CLASSIFICATION_FILE), &file)?;
    let count = |p: &str| file.rows.iter().filter(|r| r.provenance == p).count();
    let (printed, computed, ambiguous) = (count("PRINTED"), count("COMPUTED"), count("AMBIGUOUS"));
    Ok(Report::ok(
        format!("{} rows ({printed} PRINTED, {computed} COMPUTED, {ambiguous} AMBIGUOUS) written to {}", file.rows.len(), dir.display()),
        json!({ "rows": file.rows.len(), "printed": printed, "computed": computed, "ambiguous": ambiguous, "dir": dir.display().to_string() }),
    ))
}
