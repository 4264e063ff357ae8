//! Command-line front end: parse manifest files, dispatch to the library,
//! print aligned text tables or canonical machine-readable JSON.
//!
//! Exit codes: 0 = success / verdict true, 1 = verdict false (impure, not
//! formal, axiom failed), 2 = input error.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use hodge_core::bigraded::BigradedComplex;
use hodge_core::complex::Violation;
use hodge_core::error::Error;
use hodge_core::filtration::{decalage, from_weight_grading, shift_t, FilteredComplex};
use hodge_core::io::{self, Object};
use hodge_core::matrix::Matrix;
use hodge_core::mhc::{mhc_dual, mhc_homology_mhs, mhc_tensor, shift_to_mhc};
use hodge_core::mhs::deligne_splitting;
use hodge_core::purity::{purity_check, PurityParams, PurityReport};
use hodge_core::scalar::{rat_from_str, rat_to_string, Rat, Scalar};
use hodge_core::spectral::{e1_refilter, spectral_page, stabilization_index};
use hodge_core::truncation::tau_truncate;
use hodge_core::witness::{mhs_pipeline, mhs_purity, zigzag_maps, PipelineWitness, SplitRoute};

#[derive(Parser)]
#[command(name = "hodge", about = "Exact filtered complexes, Hodge structures and formality witnesses", version)]
struct Cli {
    /// Emit the machine-readable canonical JSON report
    #[arg(long, global = true)]
    json: bool,

    /// Input degree convention; `cohomological` re-indexes K^n -> K_{-n}
    #[arg(long, global = true, value_enum, default_value_t = Convention::Homological)]
    convention: Convention,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Convention {
    Homological,
    Cohomological,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Route {
    Deligne,
    Automorphism,
}

#[derive(Subcommand)]
enum Command {
    /// Check structural validity (d² = 0, filtrations, MHS axioms, operad laws)
    Validate { file: PathBuf },
    /// Homology dimensions per degree (and weight where applicable)
    Homology { file: PathBuf },
    /// Spectral pages of a filtered complex
    Pages {
        file: PathBuf,
        /// page index
        #[arg(long, conflicts_with = "all")]
        r: Option<i64>,
        /// all pages up to stabilization
        #[arg(long)]
        all: bool,
    },
    /// Associated graded of a filtered complex
    Gr { file: PathBuf },
    /// Décalage of the weight filtration
    Decalage { file: PathBuf },
    /// The degree shift of the filtration
    #[command(name = "shift-t")]
    ShiftT { file: PathBuf },
    /// Totalized first page with the column filtration
    #[command(name = "e1-refilter")]
    E1Refilter { file: PathBuf },
    /// Purity of the weight grading of homology
    Purity {
        file: PathBuf,
        #[arg(long)]
        alpha: String,
        /// check degrees <= upto + 1 only
        #[arg(long)]
        upto: Option<i64>,
    },
    /// Split the weight filtration into a grading
    Split {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Route::Deligne)]
        route: Route,
        /// per-degree automorphism file for the automorphism route
        #[arg(long)]
        phi: Option<PathBuf>,
        /// purity slope (needed by the automorphism route)
        #[arg(long)]
        alpha: Option<String>,
    },
    /// Weight-threshold truncation of a bigraded complex
    Truncate {
        file: PathBuf,
        #[arg(long)]
        alpha: String,
    },
    /// Formality witness: both zig-zag legs evaluated
    Formality {
        file: PathBuf,
        #[arg(long)]
        alpha: String,
        /// evaluate as q-quasi-isomorphisms
        #[arg(long)]
        q: Option<i64>,
        #[arg(long, value_enum, default_value_t = Route::Deligne)]
        route: Route,
        #[arg(long)]
        phi: Option<PathBuf>,
    },
    /// Mixed Hodge complex axioms MH0-MH2 and comparison checks
    #[command(name = "mhc-validate")]
    MhcValidate { file: PathBuf },
    /// Mixed Hodge structures on the homology of a mixed Hodge complex
    #[command(name = "mhc-homology")]
    MhcHomology { file: PathBuf },
    /// Linear dual
    Dual { file: PathBuf },
    /// Tensor product of two objects of the same kind
    Tensor { first: PathBuf, second: PathBuf },
    /// Operad / graded monoid axioms
    #[command(name = "operad-validate")]
    OperadValidate { file: PathBuf },
    /// Transport the truncation witness across all compositions
    #[command(name = "operad-formality")]
    OperadFormality {
        file: PathBuf,
        #[arg(long)]
        alpha: String,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn load(path: &PathBuf, convention: Convention) -> Result<Object, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Invalid(format!("cannot read {}: {e}", path.display())))?;
    let mut value: Value = serde_json::from_str(&text)
        .map_err(|e| Error::parse("", format!("invalid JSON: {e}")))?;
    if convention == Convention::Cohomological {
        value = reindex_cohomological(value)?;
    }
    io::from_manifest(&value)
}

/// Re-keys every degree-indexed map by `n -> -n` so that cohomologically
/// written complexes (differentials raising the degree) import into the
/// homological convention.
fn reindex_cohomological(mut value: Value) -> Result<Value, Error> {
    let kind = value
        .get("kind")
        .and_then(Value::as_str)
        .unwrap_or_default()
        .to_string();
    let Some(payload) = value.get_mut("payload") else {
        return Ok(value);
    };
    fn negate_keys(map: &mut Map<String, Value>) {
        let old = std::mem::take(map);
        for (k, v) in old {
            let new_key = match k.parse::<i64>() {
                Ok(n) => (-n).to_string(),
                Err(_) => k,
            };
            map.insert(new_key, v);
        }
    }
    fn negate_first_of_pair(map: &mut Map<String, Value>) {
        let old = std::mem::take(map);
        for (k, v) in old {
            let new_key = match k.split_once(',') {
                Some((n, p)) => match n.parse::<i64>() {
                    Ok(n) => format!("{},{}", -n, p),
                    Err(_) => k,
                },
                None => k,
            };
            map.insert(new_key, v);
        }
    }
    fn reindex_complex(payload: &mut Value) {
        if let Some(dims) = payload.get_mut("dims").and_then(Value::as_object_mut) {
            negate_keys(dims);
        }
        if let Some(d) = payload.get_mut("d").and_then(Value::as_object_mut) {
            negate_keys(d);
        }
        if let Some(range) = payload.get_mut("range") {
            if let Some(pair) = range.as_array() {
                if pair.len() == 2 {
                    let lo = pair[0].as_i64().unwrap_or(0);
                    let hi = pair[1].as_i64().unwrap_or(0);
                    *range = json!([-hi, -lo]);
                }
            }
        }
    }
    match kind.as_str() {
        "complex" => reindex_complex(payload),
        "bigraded" => {
            if let Some(weights) = payload.get_mut("weights").and_then(Value::as_object_mut) {
                negate_keys(weights);
            }
            if let Some(d) = payload.get_mut("d").and_then(Value::as_object_mut) {
                negate_first_of_pair(d);
            }
        }
        "filtered" => {
            if let Some(inner) = payload.get_mut("complex") {
                reindex_complex(inner);
            }
            if let Some(w) = payload.get_mut("w").and_then(Value::as_object_mut) {
                negate_keys(w);
            }
        }
        "mhs-complex" => {
            if let Some(inner) = payload.get_mut("complex") {
                reindex_complex(inner);
            }
            if let Some(mhs) = payload.get_mut("mhs").and_then(Value::as_object_mut) {
                negate_keys(mhs);
            }
        }
        other => {
            return Err(Error::Invalid(format!(
                "--convention cohomological is not supported for kind {other:?}"
            )))
        }
    }
    Ok(value)
}

struct Report {
    command: String,
    body: Value,
    text: String,
    exit: u8,
}

fn emit(cli: &Cli, report: Report) -> ExitCode {
    if cli.json {
        let value = json!({
            "command": report.command,
            "report": report.body,
            "exit": report.exit,
        });
        print!("{}", io::canonical_json(&value));
    } else {
        println!("{}", report.text.trim_end());
    }
    ExitCode::from(report.exit)
}

fn violations_json(violations: &[Violation]) -> Value {
    Value::Array(
        violations
            .iter()
            .map(|v| {
                let locus: Map<String, Value> =
                    v.locus.iter().map(|(k, n)| (k.clone(), json!(n))).collect();
                json!({ "rule": v.rule, "locus": locus, "detail": v.detail })
            })
            .collect(),
    )
}

fn violations_text(violations: &[Violation]) -> String {
    violations
        .iter()
        .map(|v| {
            let locus: Vec<String> = v.locus.iter().map(|(k, n)| format!("{k}={n}")).collect();
            format!("  {} [{}] {}", v.rule, locus.join(", "), v.detail)
        })
        .collect::<Vec<_>>()
        .join("\n")
}

fn dims_table<I: Iterator<Item = (String, usize)>>(header: &str, rows: I) -> String {
    let mut out = format!("{header}\n");
    for (label, dim) in rows {
        out.push_str(&format!("  {label:>10}  {dim}\n"));
    }
    out
}

fn parse_alpha(alpha: &str) -> Result<PurityParams, Error> {
    PurityParams::new(rat_from_str(alpha)?)
}

fn purity_report_body(report: &PurityReport) -> Value {
    let homology: Map<String, Value> = report
        .homology
        .iter()
        .map(|(&(n, p), &k)| (format!("{n},{p}"), json!(k)))
        .collect();
    json!({
        "alpha": rat_to_string(&report.alpha),
        "pure": report.is_pure(),
        "upto": report.upto,
        "homology": homology,
        "violations": report.violations.iter().map(|&(n, p)| json!([n, p])).collect::<Vec<_>>(),
    })
}

fn purity_report_text(report: &PurityReport) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "alpha = {}  verdict: {}\n",
        rat_to_string(&report.alpha),
        if report.is_pure() { "pure" } else { "impure" }
    ));
    out.push_str("  degree  weight  dim\n");
    for (&(n, p), &k) in &report.homology {
        let mark = if report.violations.contains(&(n, p)) { "  <- off the line" } else { "" };
        out.push_str(&format!("  {n:>6}  {p:>6}  {k}{mark}\n"));
    }
    out
}

fn witness_body<K: Scalar>(w: &hodge_core::witness::FormalityWitness<K>) -> Value {
    json!({
        "alpha": rat_to_string(&w.alpha),
        "pure": w.purity.is_pure(),
        "legs": [
            { "dir": "bwd", "quasi_iso": w.phi_quasi_iso, "q_quasi_iso": w.phi_q_quasi_iso },
            { "dir": "fwd", "quasi_iso": w.psi_quasi_iso, "q_quasi_iso": w.psi_q_quasi_iso },
        ],
        "q": w.q_bound,
        "formal": w.is_formal(),
        "q_formal": w.is_q_formal(),
        "violations": w.purity.violations.iter().map(|&(n, p)| json!([n, p])).collect::<Vec<_>>(),
    })
}

fn witness_text<K: Scalar>(w: &hodge_core::witness::FormalityWitness<K>) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "alpha = {}  purity: {}\n",
        rat_to_string(&w.alpha),
        if w.purity.is_pure() { "pure" } else { "impure" }
    ));
    out.push_str(&format!(
        "  leg A <- tau(A): quasi-iso {}\n  leg tau(A) -> H(A): quasi-iso {}\n",
        w.phi_quasi_iso, w.psi_quasi_iso
    ));
    if let Some(q) = w.q_bound {
        out.push_str(&format!(
            "  q = {q}: legs q-quasi-iso {} / {}\n",
            w.phi_q_quasi_iso.unwrap_or(false),
            w.psi_q_quasi_iso.unwrap_or(false)
        ));
    }
    if !w.purity.violations.is_empty() {
        out.push_str("  off-line homology at: ");
        let cells: Vec<String> =
            w.purity.violations.iter().map(|&(n, p)| format!("({n},{p})")).collect();
        out.push_str(&cells.join(" "));
        out.push('\n');
    }
    out.push_str(&format!("verdict: {}\n", if w.is_formal() { "formal" } else { "not formal" }));
    out
}

fn run(cli: &Cli) -> Result<ExitCode, Error> {
    match &cli.command {
        Command::Validate { file } => {
            let object = load(file, cli.convention)?;
            let violations = validate_object(&object);
            let ok = violations.is_empty();
            let report = Report {
                command: "validate".into(),
                body: json!({ "kind": object.kind(), "valid": ok, "violations": violations_json(&violations) }),
                text: if ok {
                    format!("{}: valid", object.kind())
                } else {
                    format!("{}: INVALID\n{}", object.kind(), violations_text(&violations))
                },
                exit: if ok { 0 } else { 2 },
            };
            Ok(emit(cli, report))
        }
        Command::Homology { file } => {
            let object = load(file, cli.convention)?;
            homology_command(cli, &object)
        }
        Command::Pages { file, r, all } => {
            let object = load(file, cli.convention)?;
            let k = as_filtered(&object)?;
            let stable = stabilization_index(&k);
            let pages: Vec<i64> = match (r, all) {
                (Some(r), _) => vec![*r],
                (None, true) => (0..=stable).collect(),
                (None, false) => vec![1],
            };
            let mut body = Map::new();
            let mut text = String::new();
            for &r in &pages {
                let page = spectral_page(&k, r).map_err(to_input_error)?;
                let dims: Map<String, Value> = page
                    .dims()
                    .iter()
                    .map(|(&(p, q), &k)| (format!("{p},{q}"), json!(k)))
                    .collect();
                body.insert(r.to_string(), Value::Object(dims));
                text.push_str(&format!("E^{r}  (stabilizes at r = {stable})\n"));
                text.push_str("  p       q       dim\n");
                for (&(p, q), &dim) in &page.dims() {
                    text.push_str(&format!("  {p:>6}  {q:>6}  {dim}\n"));
                }
            }
            let report = Report {
                command: "pages".into(),
                body: Value::Object(body),
                text,
                exit: 0,
            };
            Ok(emit(cli, report))
        }
        Command::Gr { file } => {
            let object = load(file, cli.convention)?;
            let out = match object {
                Object::FilteredQ(k) => {
                    Object::BigradedQ(k.gr().map_err(to_input_error)?.0)
                }
                Object::FilteredQi(k) => {
                    Object::BigradedQi(k.gr().map_err(to_input_error)?.0)
                }
                _ => return Err(Error::Invalid("gr expects a filtered complex".into())),
            };
            print!("{}", io::to_canonical_string(&out));
            Ok(ExitCode::SUCCESS)
        }
        Command::Decalage { file } => {
            let object = load(file, cli.convention)?;
            let out = match object {
                Object::FilteredQ(k) => Object::FilteredQ(decalage(&k).map_err(to_input_error)?),
                Object::FilteredQi(k) => Object::FilteredQi(decalage(&k).map_err(to_input_error)?),
                _ => return Err(Error::Invalid("decalage expects a filtered complex".into())),
            };
            print!("{}", io::to_canonical_string(&out));
            Ok(ExitCode::SUCCESS)
        }
        Command::ShiftT { file } => {
            let object = load(file, cli.convention)?;
            let out = match object {
                Object::FilteredQ(k) => Object::FilteredQ(shift_t(&k)),
                Object::FilteredQi(k) => Object::FilteredQi(shift_t(&k)),
                _ => return Err(Error::Invalid("shift-t expects a filtered complex".into())),
            };
            print!("{}", io::to_canonical_string(&out));
            Ok(ExitCode::SUCCESS)
        }
        Command::E1Refilter { file } => {
            let object = load(file, cli.convention)?;
            let out = match object {
                Object::FilteredQ(k) => {
                    Object::FilteredQ(e1_refilter(&k).map_err(to_input_error)?)
                }
                Object::FilteredQi(k) => {
                    Object::FilteredQi(e1_refilter(&k).map_err(to_input_error)?)
                }
                _ => return Err(Error::Invalid("e1-refilter expects a filtered complex".into())),
            };
            print!("{}", io::to_canonical_string(&out));
            Ok(ExitCode::SUCCESS)
        }
        Command::Purity { file, alpha, upto } => {
            let object = load(file, cli.convention)?;
            let params = parse_alpha(alpha)?;
            let report = match &object {
                Object::BigradedQ(b) => purity_check(b, &params, *upto).map_err(to_input_error)?,
                Object::BigradedQi(b) => purity_check(b, &params, *upto).map_err(to_input_error)?,
                Object::MhsComplex(k) => mhs_purity(k, &params, *upto).map_err(to_input_error)?,
                _ => {
                    return Err(Error::Invalid(
                        "purity expects a bigraded complex or an MHS complex".into(),
                    ))
                }
            };
            let exit = if report.is_pure() { 0 } else { 1 };
            Ok(emit(cli, Report {
                command: "purity".into(),
                body: purity_report_body(&report),
                text: purity_report_text(&report),
                exit,
            }))
        }
        Command::Split { file, route, phi, alpha } => {
            let object = load(file, cli.convention)?;
            split_command(cli, &object, route, phi, alpha)
        }
        Command::Truncate { file, alpha } => {
            let object = load(file, cli.convention)?;
            let params = parse_alpha(alpha)?;
            let out = match &object {
                Object::BigradedQ(b) => {
                    Object::BigradedQ(tau_truncate(b, &params).map_err(to_input_error)?.complex().clone())
                }
                Object::BigradedQi(b) => {
                    Object::BigradedQi(tau_truncate(b, &params).map_err(to_input_error)?.complex().clone())
                }
                _ => return Err(Error::Invalid("truncate expects a bigraded complex".into())),
            };
            print!("{}", io::to_canonical_string(&out));
            Ok(ExitCode::SUCCESS)
        }
        Command::Formality { file, alpha, q, route, phi } => {
            let object = load(file, cli.convention)?;
            let params = parse_alpha(alpha)?;
            match &object {
                Object::BigradedQ(b) => {
                    let w = zigzag_maps(b, &params, *q).map_err(to_input_error)?;
                    let exit = u8::from(!(w.is_q_formal().unwrap_or(w.is_formal())));
                    Ok(emit(cli, Report {
                        command: "formality".into(),
                        body: witness_body(&w),
                        text: witness_text(&w),
                        exit,
                    }))
                }
                Object::BigradedQi(b) => {
                    let w = zigzag_maps(b, &params, *q).map_err(to_input_error)?;
                    let exit = u8::from(!(w.is_q_formal().unwrap_or(w.is_formal())));
                    Ok(emit(cli, Report {
                        command: "formality".into(),
                        body: witness_body(&w),
                        text: witness_text(&w),
                        exit,
                    }))
                }
                Object::MhsComplex(k) => {
                    let split_route = build_route(route, phi)?;
                    let witness = mhs_pipeline(k, &params, &split_route).map_err(to_input_error)?;
                    let (body, text, formal) = match &witness {
                        PipelineWitness::Rational(w) => (witness_body(w), witness_text(w), w.is_formal()),
                        PipelineWitness::Gaussian(w) => (witness_body(w), witness_text(w), w.is_formal()),
                    };
                    Ok(emit(cli, Report {
                        command: "formality".into(),
                        body,
                        text,
                        exit: u8::from(!formal),
                    }))
                }
                _ => Err(Error::Invalid(
                    "formality expects a bigraded complex or an MHS complex".into(),
                )),
            }
        }
        Command::MhcValidate { file } => {
            let object = load(file, cli.convention)?;
            let mhc = as_mhc(object)?;
            let violations = mhc.validate();
            let ok = violations.is_empty();
            Ok(emit(cli, Report {
                command: "mhc-validate".into(),
                body: json!({ "valid": ok, "violations": violations_json(&violations) }),
                text: if ok {
                    "mhc: all axioms pass (MH0, MH1, MH2, comparison)".into()
                } else {
                    format!("mhc: FAILED\n{}", violations_text(&violations))
                },
                exit: u8::from(!ok),
            }))
        }
        Command::MhcHomology { file } => {
            let object = load(file, cli.convention)?;
            let mhc = as_mhc(object)?;
            let homology = mhc_homology_mhs(&mhc).map_err(to_input_error)?;
            let mut body = Vec::new();
            let mut text = String::from("degree  dim  weights\n");
            for (n, v) in &homology {
                let manifest = io::to_manifest(&Object::Mhs(v.clone()));
                body.push(json!({ "degree": n, "mhs": manifest["payload"] }));
                let weights: Vec<String> = hodge_core::mhs::weight_profile(v)
                    .iter()
                    .map(|(w, k)| format!("{w}:{k}"))
                    .collect();
                text.push_str(&format!("  {n:>4}  {:>3}  {}\n", v.dim(), weights.join(" ")));
            }
            Ok(emit(cli, Report {
                command: "mhc-homology".into(),
                body: Value::Array(body),
                text,
                exit: 0,
            }))
        }
        Command::Dual { file } => {
            let object = load(file, cli.convention)?;
            let out = match object {
                Object::ComplexQ(c) => Object::ComplexQ(c.dual()),
                Object::ComplexQi(c) => Object::ComplexQi(c.dual()),
                Object::Mhs(v) => {
                    let ops = hodge_core::mhs::mhs_ops(&v, &hodge_core::mhs::MixedHodgeStructure::unit())
                        .map_err(to_input_error)?;
                    Object::Mhs(ops.dual_of_first)
                }
                Object::Mhc(k) => Object::Mhc(mhc_dual(&k).map_err(to_input_error)?),
                _ => return Err(Error::Invalid("dual expects a complex, an MHS or an MHC".into())),
            };
            print!("{}", io::to_canonical_string(&out));
            Ok(ExitCode::SUCCESS)
        }
        Command::Tensor { first, second } => {
            let a = load(first, cli.convention)?;
            let b = load(second, cli.convention)?;
            let out = match (a, b) {
                (Object::ComplexQ(x), Object::ComplexQ(y)) => {
                    Object::ComplexQ(hodge_core::complex::tensor_complex(&x, &y).0)
                }
                (Object::ComplexQi(x), Object::ComplexQi(y)) => {
                    Object::ComplexQi(hodge_core::complex::tensor_complex(&x, &y).0)
                }
                (Object::BigradedQ(x), Object::BigradedQ(y)) => {
                    Object::BigradedQ(hodge_core::bigraded::tensor_bigraded(&x, &y).0)
                }
                (Object::BigradedQi(x), Object::BigradedQi(y)) => {
                    Object::BigradedQi(hodge_core::bigraded::tensor_bigraded(&x, &y).0)
                }
                (Object::FilteredQ(x), Object::FilteredQ(y)) => Object::FilteredQ(
                    hodge_core::filtration::filtered_tensor(&x, &y).map_err(to_input_error)?.0,
                ),
                (Object::FilteredQi(x), Object::FilteredQi(y)) => Object::FilteredQi(
                    hodge_core::filtration::filtered_tensor(&x, &y).map_err(to_input_error)?.0,
                ),
                (Object::Mhs(x), Object::Mhs(y)) => {
                    Object::Mhs(hodge_core::mhs::mhs_ops(&x, &y).map_err(to_input_error)?.tensor)
                }
                (Object::Mhc(x), Object::Mhc(y)) => {
                    Object::Mhc(mhc_tensor(&x, &y).map_err(to_input_error)?)
                }
                _ => {
                    return Err(Error::Invalid(
                        "tensor expects two objects of the same kind over the same field".into(),
                    ))
                }
            };
            print!("{}", io::to_canonical_string(&out));
            Ok(ExitCode::SUCCESS)
        }
        Command::OperadValidate { file } => {
            let object = load(file, cli.convention)?;
            let violations = match &object {
                Object::Operad(o) => o.validate(),
                Object::Monoid(m) => m.validate(),
                _ => return Err(Error::Invalid("operad-validate expects an operad or monoid".into())),
            };
            let ok = violations.is_empty();
            Ok(emit(cli, Report {
                command: "operad-validate".into(),
                body: json!({ "kind": object.kind(), "valid": ok, "violations": violations_json(&violations) }),
                text: if ok {
                    format!("{}: valid", object.kind())
                } else {
                    format!("{}: INVALID\n{}", object.kind(), violations_text(&violations))
                },
                exit: if ok { 0 } else { 2 },
            }))
        }
        Command::OperadFormality { file, alpha } => {
            let object = load(file, cli.convention)?;
            let params = parse_alpha(alpha)?;
            let witness = match &object {
                Object::Operad(o) => o.transport_formality(&params).map_err(to_input_error)?,
                Object::Monoid(m) => m.transport_formality(&params).map_err(to_input_error)?,
                _ => return Err(Error::Invalid("operad-formality expects an operad or monoid".into())),
            };
            let formal = witness.is_formal();
            let impure = witness.impure_components();
            let components: Map<String, Value> = witness
                .components
                .iter()
                .map(|(label, w)| {
                    (label.clone(), json!({ "formal": w.is_formal(), "pure": w.purity.is_pure() }))
                })
                .collect();
            let checks: Vec<Value> = witness
                .checks
                .iter()
                .map(|c| {
                    json!({
                        "composition": c.label,
                        "tau_closed": c.tau_closed,
                        "phi_square": c.phi_square,
                        "psi_square": c.psi_square,
                    })
                })
                .collect();
            let mut text = format!(
                "alpha = {}  components: {}  compositions: {}\n",
                alpha,
                witness.components.len(),
                witness.checks.len()
            );
            for (label, w) in &witness.components {
                text.push_str(&format!(
                    "  component {label}: {}{}\n",
                    if w.is_formal() { "formal" } else { "NOT formal" },
                    if w.purity.is_pure() { "" } else { " (impure homology)" },
                ));
            }
            for c in &witness.checks {
                if !c.passes() {
                    text.push_str(&format!("  composition {} fails a square\n", c.label));
                }
            }
            if !impure.is_empty() {
                text.push_str(&format!("  impure components: {}\n", impure.join(" ")));
            }
            text.push_str(&format!("verdict: {}\n", if formal { "formal" } else { "not formal" }));
            Ok(emit(cli, Report {
                command: "operad-formality".into(),
                body: json!({
                    "alpha": alpha,
                    "formal": formal,
                    "components": components,
                    "impure_components": impure,
                    "checks": checks,
                }),
                text,
                exit: u8::from(!formal),
            }))
        }
    }
}

fn to_input_error(e: Error) -> Error {
    e
}

fn validate_object(object: &Object) -> Vec<Violation> {
    match object {
        Object::ComplexQ(c) => c.validate(),
        Object::ComplexQi(c) => c.validate(),
        Object::BigradedQ(b) => b.validate(),
        Object::BigradedQi(b) => b.validate(),
        Object::FilteredQ(k) => k.validate(),
        Object::FilteredQi(k) => k.validate(),
        Object::Mhs(v) => v.validate(),
        Object::MhsComplex(k) => k.validate(),
        Object::Mhc(k) => k.validate(),
        Object::Operad(o) => o.validate(),
        Object::Monoid(m) => m.validate(),
    }
}

/// An MHC directly, or an MHS complex through the shift functor.
fn as_mhc(object: Object) -> Result<hodge_core::mhc::MixedHodgeComplex, Error> {
    match object {
        Object::Mhc(mhc) => Ok(mhc),
        Object::MhsComplex(k) => shift_to_mhc(&k),
        _ => Err(Error::Invalid("expected a mixed Hodge complex or an MHS complex".into())),
    }
}

fn as_filtered(object: &Object) -> Result<FilteredComplex<Rat>, Error> {
    match object {
        Object::FilteredQ(k) => Ok(k.clone()),
        Object::BigradedQ(b) => Ok(from_weight_grading(b).0),
        Object::MhsComplex(k) => Ok(k.weight_filtered()),
        _ => Err(Error::Invalid("expected a filtered complex (or something carrying one)".into())),
    }
}

fn homology_command(cli: &Cli, object: &Object) -> Result<ExitCode, Error> {
    let (body, text) = match object {
        Object::ComplexQ(c) => {
            let h = c.homology().map_err(to_input_error)?;
            complex_homology_report(&h.dims())
        }
        Object::ComplexQi(c) => {
            let h = c.homology().map_err(to_input_error)?;
            complex_homology_report(&h.dims())
        }
        Object::FilteredQ(k) => {
            let h = k.complex().homology().map_err(to_input_error)?;
            complex_homology_report(&h.dims())
        }
        Object::FilteredQi(k) => {
            let h = k.complex().homology().map_err(to_input_error)?;
            complex_homology_report(&h.dims())
        }
        Object::BigradedQ(b) => bigraded_homology_report(b)?,
        Object::BigradedQi(b) => bigraded_homology_report(b)?,
        Object::MhsComplex(k) => {
            let dims = k.weight_graded_homology_dims().map_err(to_input_error)?;
            cellwise_report(&dims)
        }
        _ => return Err(Error::Invalid("homology expects a complex-like object".into())),
    };
    Ok(emit(cli, Report { command: "homology".into(), body, text, exit: 0 }))
}

fn complex_homology_report(dims: &BTreeMap<i64, usize>) -> (Value, String) {
    let body: Map<String, Value> = dims.iter().map(|(n, k)| (n.to_string(), json!(k))).collect();
    (
        Value::Object(body),
        dims_table("degree      dim", dims.iter().map(|(n, k)| (n.to_string(), *k))),
    )
}

fn bigraded_homology_report<K: Scalar>(b: &BigradedComplex<K>) -> Result<(Value, String), Error> {
    let dims = b.homology_dims().map_err(to_input_error)?;
    Ok(cellwise_report(&dims))
}

fn cellwise_report(dims: &BTreeMap<(i64, i64), usize>) -> (Value, String) {
    let body: Map<String, Value> =
        dims.iter().map(|(&(n, p), k)| (format!("{n},{p}"), json!(k))).collect();
    (
        Value::Object(body),
        dims_table(
            "degree,weight   dim",
            dims.iter().map(|(&(n, p), k)| (format!("{n},{p}"), *k)),
        ),
    )
}

fn build_route(route: &Route, phi: &Option<PathBuf>) -> Result<SplitRoute, Error> {
    match route {
        Route::Deligne => Ok(SplitRoute::Deligne),
        Route::Automorphism => {
            let path = phi
                .as_ref()
                .ok_or_else(|| Error::Invalid("--route automorphism needs --phi <file>".into()))?;
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Invalid(format!("cannot read {}: {e}", path.display())))?;
            let value: Value = serde_json::from_str(&text)
                .map_err(|e| Error::parse("", format!("invalid JSON: {e}")))?;
            let map = value
                .as_object()
                .ok_or_else(|| Error::parse("", "expected {\"degree\": matrix} pairs"))?;
            let mut phis = BTreeMap::new();
            for (key, m) in map {
                let n: i64 = key
                    .parse()
                    .map_err(|_| Error::parse("", format!("bad degree key {key:?}")))?;
                phis.insert(n, parse_matrix(m)?);
            }
            Ok(SplitRoute::Automorphism(phis))
        }
    }
}

fn parse_matrix(v: &Value) -> Result<Matrix<Rat>, Error> {
    let rows = v.as_array().ok_or_else(|| Error::parse("", "expected a matrix"))?;
    let mut data = Vec::new();
    for row in rows {
        let entries = row.as_array().ok_or_else(|| Error::parse("", "expected a row"))?;
        let mut out = Vec::new();
        for e in entries {
            out.push(Rat::from_json(e)?);
        }
        data.push(out);
    }
    Ok(Matrix::from_rows(data))
}

fn split_command(
    cli: &Cli,
    object: &Object,
    route: &Route,
    phi: &Option<PathBuf>,
    alpha: &Option<String>,
) -> Result<ExitCode, Error> {
    match object {
        Object::Mhs(v) => {
            let split = deligne_splitting(v).map_err(to_input_error)?;
            let pieces: Map<String, Value> = split
                .pieces()
                .iter()
                .map(|(&(p, q), s)| {
                    (format!("{p},{q}"), {
                        let rows: Vec<Value> = (0..s.dim())
                            .map(|i| {
                                Value::Array(
                                    s.basis().row_slice(i).iter().map(Scalar::to_json).collect(),
                                )
                            })
                            .collect();
                        Value::Array(rows)
                    })
                })
                .collect();
            let mut text = String::from("p       q       dim\n");
            for (&(p, q), s) in split.pieces() {
                text.push_str(&format!("  {p:>5}  {q:>5}  {}\n", s.dim()));
            }
            Ok(emit(cli, Report {
                command: "split".into(),
                body: json!({ "pieces": pieces }),
                text,
                exit: 0,
            }))
        }
        Object::MhsComplex(k) => {
            match build_route(route, phi)? {
                SplitRoute::Deligne => {
                    let out = hodge_core::witness::deligne_split_bigraded(k)
                        .map_err(to_input_error)?;
                    print!("{}", io::to_canonical_string(&Object::BigradedQi(out)));
                }
                SplitRoute::Automorphism(phis) => {
                    let params = match alpha {
                        Some(a) => parse_alpha(a)?,
                        None => {
                            return Err(Error::Invalid(
                                "split --route automorphism needs --alpha".into(),
                            ))
                        }
                    };
                    let out =
                        hodge_core::witness::automorphism_split_bigraded(k, &phis, &params)
                            .map_err(to_input_error)?;
                    print!("{}", io::to_canonical_string(&Object::BigradedQ(out)));
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        _ => Err(Error::Invalid("split expects an MHS or an MHS complex".into())),
    }
}
