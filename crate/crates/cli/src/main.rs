use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use leibniz_core::algebra::{leibniz_check, read_algebra, write_algebra};
use leibniz_core::census::{self, CensusOptions};
use leibniz_core::classify::{classify, OutcomeKind};
use leibniz_core::families::{self, Family, FamilyName, FamilySpec};
use leibniz_core::lattice::build_lattice;
use leibniz_core::structure;
use leibniz_core::subspaces::{render_vector, Subspace};
use leibniz_core::{AlgebraTable, Error, FieldSpec, Vector};

const EXIT_OK: u8 = 0;
const EXIT_PROPERTY: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_UNSUPPORTED: u8 = 3;
const EXIT_ANOMALY: u8 = 4;

#[derive(Parser)]
#[command(name = "leibniz", version, about = "Exact structure-constant toolkit for Leibniz algebras")]
struct Cli {
    /// Report format.
    #[arg(long, value_enum, global = true, default_value = "text")]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Check the left Leibniz identity on every basis triple.
    Check { file: PathBuf },
    /// Series, Leib, left annihilator and structural flags.
    Analyze { file: PathBuf },
    /// Subalgebra lattice, second-maximal subalgebras and property P.
    Lattice { file: PathBuf },
    /// Match against the classification of algebras with property P.
    Classify { file: PathBuf },
    /// Build a named algebra and write it to a file.
    Family {
        name: FamilyName,
        #[arg(long)]
        field: FieldSpec,
        /// Parameter as key=value; repeatable.
        #[arg(long = "param", value_parser = parse_kv)]
        params: Vec<(String, String)>,
        #[arg(short = 'o', long = "output")]
        output: PathBuf,
    },
    /// Identity and property P over every parameter tuple.
    AuditFamily {
        name: FamilyName,
        #[arg(long)]
        field: FieldSpec,
        /// Explicit comma-separated tuple; required over Q.
        #[arg(long = "tuple")]
        tuples: Vec<String>,
    },
    /// Exhaustive census at fixed dimension and prime field.
    Census {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        field: FieldSpec,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        /// Run the assertion suite on every class.
        #[arg(long = "assert")]
        assertions: bool,
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
}

fn parse_kv(s: &str) -> Result<(String, String), String> {
    s.split_once('=')
        .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
        .ok_or_else(|| format!("expected key=value, got {s:?}"))
}

struct Report {
    text: String,
    json: Value,
    code: u8,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::InfiniteFieldUnsupported
        | Error::DimensionGuard { .. }
        | Error::FieldGuard { .. }
        | Error::UnsupportedFieldDim(_)
        | Error::InfiniteFieldSweep
        | Error::BudgetExceeded { .. }
        | Error::OrbitBudgetExceeded { .. }
        | Error::WrongCharacteristic(_)
        | Error::UnsupportedKind(_) => EXIT_UNSUPPORTED,
        Error::NotLeibniz(..) | Error::NotAnIdeal => EXIT_PROPERTY,
        _ => EXIT_USAGE,
    }
}

fn load(path: &Path) -> leibniz_core::Result<AlgebraTable> {
    read_algebra(&fs::read(path)?)
}

fn vec_text(v: &Vector, a: &AlgebraTable) -> String {
    render_vector(v, a.basis_names())
}

fn span_text(s: &Subspace, a: &AlgebraTable) -> String {
    s.render(a.basis_names())
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn triple_text(a: &AlgebraTable, (i, j, k): (usize, usize, usize)) -> String {
    let n = a.basis_names();
    format!("({}, {}, {})", n[i], n[j], n[k])
}

fn violation_lines(a: &AlgebraTable) -> (Vec<String>, Vec<Value>) {
    let report = leibniz_check(a);
    let text = report
        .violations
        .iter()
        .map(|v| format!("  violation at {}: defect {}", triple_text(a, v.triple), vec_text(&v.defect, a)))
        .collect();
    let json = report
        .violations
        .iter()
        .map(|v| json!({"triple": triple_text(a, v.triple), "defect": vec_text(&v.defect, a)}))
        .collect();
    (text, json)
}

fn cmd_check(file: &Path) -> leibniz_core::Result<Report> {
    let a = load(file)?;
    let (lines, violations) = violation_lines(&a);
    let ok = lines.is_empty();
    let mut text = format!("Leibniz: {}\n", yes_no(ok));
    for l in &lines {
        text.push_str(l);
        text.push('\n');
    }
    Ok(Report {
        text,
        json: json!({"leibniz": ok, "violations": violations}),
        code: if ok { EXIT_OK } else { EXIT_PROPERTY },
    })
}

fn not_leibniz(a: &AlgebraTable) -> Report {
    let (lines, violations) = violation_lines(a);
    Report {
        text: format!("Leibniz: no\n{}\n", lines.join("\n")),
        json: json!({"leibniz": false, "violations": violations}),
        code: EXIT_PROPERTY,
    }
}

fn cmd_analyze(file: &Path) -> leibniz_core::Result<Report> {
    let a = load(file)?;
    if !a.is_leibniz() {
        return Ok(not_leibniz(&a));
    }
    let derived = structure::derived_series(&a)?;
    let lower = structure::lower_central_series(&a)?;
    let leib = structure::leib_ideal(&a)?;
    let ann = structure::left_annihilator(&a)?;
    let quotient = structure::quotient(&a, &leib)?;
    let solvable = structure::is_solvable(&a)?;
    let nilpotent = structure::is_nilpotent(&a)?;
    let left_nilpotent = structure::is_left_nilpotent(&a)?;
    let generator = if a.field().is_finite() {
        structure::find_cyclic_generator(&a).ok().flatten()
    } else {
        None
    };
    let dims = |s: &structure::SeriesReport| s.terms.iter().map(Subspace::dim).collect::<Vec<_>>();
    let mut text = String::new();
    text.push_str(&format!("field: {}\ndim: {}\n", a.field(), a.dim()));
    text.push_str(&format!("derived series dims: {:?}\n", dims(&derived)));
    text.push_str(&format!("lower central series dims: {:?}\n", dims(&lower)));
    text.push_str(&format!("Leib: {}\n", span_text(&leib, &a)));
    text.push_str(&format!("left annihilator: {}\n", span_text(&ann, &a)));
    text.push_str(&format!("dim(L/L^2): {}\n", structure::codim_derived(&a)));
    text.push_str(&format!("solvable: {}\n", yes_no(solvable)));
    text.push_str(&format!("nilpotent: {}\n", yes_no(nilpotent)));
    text.push_str(&format!("left-normed nilpotent: {}\n", yes_no(left_nilpotent)));
    let cyclic_text = match (&generator, a.field().is_finite()) {
        (Some(g), _) => format!("yes, generator {}", vec_text(g, &a)),
        (None, true) => "no".to_string(),
        (None, false) => "not searched over Q".to_string(),
    };
    text.push_str(&format!("cyclic: {cyclic_text}\n"));
    text.push_str(&format!(
        "L/Leib: dim {}, Lie: {}, abelian: {}\n",
        quotient.table.dim(),
        yes_no(quotient.table.is_lie()),
        yes_no(quotient.table.constants().iter().all(|c| c.is_zero()))
    ));
    let json = json!({
        "field": a.field().to_string(),
        "dim": a.dim(),
        "derived_series": dims(&derived),
        "lower_central_series": dims(&lower),
        "leib": span_text(&leib, &a),
        "left_annihilator": span_text(&ann, &a),
        "dim_l_mod_l2": structure::codim_derived(&a),
        "solvable": solvable,
        "nilpotent": nilpotent,
        "nilpotent_left_normed": left_nilpotent,
        "cyclic_generator": generator.as_ref().map(|g| vec_text(g, &a)),
        "quotient_by_leib": {
            "dim": quotient.table.dim(),
            "lie": quotient.table.is_lie(),
        },
    });
    Ok(Report { text, json, code: EXIT_OK })
}

fn cmd_lattice(file: &Path) -> leibniz_core::Result<Report> {
    let a = load(file)?;
    if !a.is_leibniz() {
        return Ok(not_leibniz(&a));
    }
    let lattice = build_lattice(&a)?;
    let leib = structure::leib_ideal(&a)?;
    let frattini = lattice.frattini();
    let verdict = lattice.property_p();
    let mut text = format!(
        "subspaces: {}\nsubalgebras: {}\nmaximal subalgebras ({}):\n",
        lattice.subspace_count,
        lattice.subalgebras.len(),
        lattice.maximal.len()
    );
    for m in &lattice.maximal {
        text.push_str(&format!("  {}\n", span_text(m, &a)));
    }
    text.push_str(&format!("second-maximal subalgebras ({}):\n", lattice.second_maximal.len()));
    let mut second = Vec::new();
    for s in &lattice.second_maximal {
        let ideal = leibniz_core::subspaces::is_ideal(&a, &s.subalgebra)?;
        text.push_str(&format!(
            "  {}  ideal: {}\n",
            span_text(&s.subalgebra, &a),
            yes_no(ideal)
        ));
        second.push(json!({
            "subalgebra": span_text(&s.subalgebra, &a),
            "ideal": ideal,
            "parents": s.parents.iter().map(|p| span_text(p, &a)).collect::<Vec<_>>(),
        }));
    }
    text.push_str(&format!("Frattini: {}\nLeib: {}\n", span_text(&frattini, &a), span_text(&leib, &a)));
    let witness = verdict
        .witness
        .as_ref()
        .map(|(w, p)| format!("{} ⊂ {}", span_text(w, &a), span_text(p, &a)));
    match &witness {
        None => text.push_str("property P: HOLDS\n"),
        Some(w) => text.push_str(&format!("property P: FAILS, witness {w}\n")),
    }
    let json = json!({
        "subspaces": lattice.subspace_count,
        "subalgebras": lattice.subalgebras.len(),
        "maximal": lattice.maximal.iter().map(|m| span_text(m, &a)).collect::<Vec<_>>(),
        "second_maximal": second,
        "frattini": span_text(&frattini, &a),
        "leib": span_text(&leib, &a),
        "property_p": verdict.holds,
        "witness": witness,
    });
    Ok(Report {
        text,
        json,
        code: if verdict.holds { EXIT_OK } else { EXIT_PROPERTY },
    })
}

fn cmd_classify(file: &Path) -> leibniz_core::Result<Report> {
    let a = load(file)?;
    if !a.is_leibniz() {
        return Ok(not_leibniz(&a));
    }
    let v = classify(&a)?;
    let w = &v.witnesses;
    let opt_vec = |x: &Option<Vector>| x.as_ref().map(|x| vec_text(x, &a));
    let opt_span = |x: &Option<Subspace>| x.as_ref().map(|x| span_text(x, &a));
    let mut text = format!("verdict: {}\n", v.outcome);
    let property_witness = match &v.outcome {
        leibniz_core::classify::Outcome::PropertyFails { witness, parent } => {
            Some(format!("{} ⊂ {}", span_text(witness, &a), span_text(parent, &a)))
        }
        _ => None,
    };
    if let Some(w) = &property_witness {
        text.push_str(&format!("witness: {w}\n"));
    }
    if let Some(x) = opt_vec(&w.x) {
        text.push_str(&format!("x = {x}\n"));
    }
    if let Some(g) = opt_vec(&w.a) {
        text.push_str(&format!("a = {g}\n"));
    }
    if let Some(l) = opt_span(&w.leib) {
        text.push_str(&format!("Leib: {l}\n"));
    }
    if let Some(f) = opt_span(&w.frattini) {
        text.push_str(&format!("Frattini: {f}\n"));
    }
    if !w.maximal.is_empty() {
        let ms: Vec<String> = w.maximal.iter().map(|m| span_text(m, &a)).collect();
        text.push_str(&format!("maximal: {}\n", ms.join("; ")));
    }
    text.push_str(&format!("re-verified: {}\n", yes_no(v.reverified)));
    let code = match v.outcome.kind() {
        OutcomeKind::PropertyFails => EXIT_PROPERTY,
        OutcomeKind::OutOfScope => EXIT_UNSUPPORTED,
        OutcomeKind::Anomaly => EXIT_ANOMALY,
        _ => EXIT_OK,
    };
    let json = json!({
        "verdict": v.outcome.to_string(),
        "property_witness": property_witness,
        "witnesses": {
            "x": opt_vec(&w.x),
            "a": opt_vec(&w.a),
            "leib": opt_span(&w.leib),
            "frattini": opt_span(&w.frattini),
            "maximal": w.maximal.iter().map(|m| span_text(m, &a)).collect::<Vec<_>>(),
        },
        "reverified": v.reverified,
    });
    Ok(Report { text, json, code })
}

fn cmd_family(name: FamilyName, field: FieldSpec, params: &[(String, String)], output: &Path) -> leibniz_core::Result<Report> {
    let family = Family::from_params(name, field, params)?;
    let a = families::build(&FamilySpec { family, field })?;
    fs::write(output, write_algebra(&a))?;
    let ok = a.is_leibniz();
    let mut text = format!("wrote {} (dim {} over {})\nLeibniz: {}\n", output.display(), a.dim(), field, yes_no(ok));
    let (lines, violations) = violation_lines(&a);
    for l in lines.iter().take(1) {
        text.push_str(l);
        text.push('\n');
    }
    Ok(Report {
        text,
        json: json!({
            "output": output.display().to_string(),
            "dim": a.dim(),
            "leibniz": ok,
            "violations": violations,
        }),
        code: if ok { EXIT_OK } else { EXIT_PROPERTY },
    })
}

fn cmd_audit(name: FamilyName, field: FieldSpec, tuples: &[String]) -> leibniz_core::Result<Report> {
    let tuples = if tuples.is_empty() {
        None
    } else {
        Some(
            tuples
                .iter()
                .map(|t| t.split(',').map(|s| field.parse_scalar(s.trim())).collect())
                .collect::<leibniz_core::Result<Vec<Vec<_>>>>()?,
        )
    };
    let report = families::audit(name, field, tuples)?;
    let keys = name.scalar_params();
    let mut text = format!("{} over {}: {} of {} tuples valid\n", name, field, report.valid().len(), report.entries.len());
    let mut rows = Vec::new();
    for e in &report.entries {
        let params: Vec<String> = e.params.iter().map(|s| s.to_string()).collect();
        let label = keys.iter().zip(&params).map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(" ");
        let status = match (e.valid, e.violation, e.property_p) {
            (true, _, Some(p)) => format!("valid, property P: {}", if p { "holds" } else { "fails" }),
            (true, _, None) => "valid".to_string(),
            (false, Some(t), _) => format!("invalid at {}", triple_text(&families_table(name, field, &e.params)?, t)),
            (false, None, _) => "invalid".to_string(),
        };
        text.push_str(&format!("  {label}: {status}\n"));
        rows.push(json!({
            "params": params,
            "valid": e.valid,
            "violation": e.violation.map(|t| vec![t.0, t.1, t.2]),
            "property_p": e.property_p,
        }));
    }
    Ok(Report {
        text,
        json: json!({"family": name.as_str(), "field": field.to_string(), "entries": rows}),
        code: EXIT_OK,
    })
}

fn families_table(name: FamilyName, field: FieldSpec, params: &[leibniz_core::Scalar]) -> leibniz_core::Result<AlgebraTable> {
    let kv: Vec<(String, String)> = name
        .scalar_params()
        .iter()
        .zip(params)
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect();
    let family = Family::from_params(name, field, &kv)?;
    families::build(&FamilySpec { family, field })
}

fn cmd_census(dim: usize, field: FieldSpec, workers: usize, assertions: bool, output: Option<&Path>) -> leibniz_core::Result<Report> {
    if workers == 0 {
        return Err(Error::MalformedSpec("--workers must be at least 1".into()));
    }
    let report = census::run_census(dim, field, CensusOptions { workers, assertions })?;
    if let Some(path) = output {
        census::save_report(&report, path)?;
    }
    let failures = report.failures();
    let mut text = format!(
        "dim {} over {}: raw {}, identity-valid {}, classes {}\n",
        dim,
        field,
        report.raw_total,
        report.valid_total,
        report.records.len()
    );
    for (outcome, count) in report.count_by_outcome() {
        text.push_str(&format!("  {outcome}: {count}\n"));
    }
    if assertions {
        for (letter, (pass, fail, na)) in report.assertion_summary() {
            text.push_str(&format!("  ({letter}) pass {pass}, fail {fail}, n/a {na}\n"));
        }
    }
    text.push_str(&format!("failures: {}\n", failures.len()));
    for f in &failures {
        text.push_str(&format!("  {f}\n"));
    }
    let json = json!({
        "dim": dim,
        "field": field.to_string(),
        "raw_total": report.raw_total,
        "valid_total": report.valid_total,
        "classes": report.records.len(),
        "outcomes": report.count_by_outcome(),
        "assertions": report.assertion_summary().into_iter()
            .map(|(k, (p, f, n))| (k.to_string(), json!({"pass": p, "fail": f, "n/a": n})))
            .collect::<serde_json::Map<_, _>>(),
        "failures": failures.iter().map(|f| f.to_string()).collect::<Vec<_>>(),
    });
    Ok(Report {
        text,
        json,
        code: if failures.is_empty() { EXIT_OK } else { EXIT_PROPERTY },
    })
}

fn run(cli: &Cli) -> leibniz_core::Result<Report> {
    match &cli.command {
        Command::Check { file } => cmd_check(file),
        Command::Analyze { file } => cmd_analyze(file),
        Command::Lattice { file } => cmd_lattice(file),
        Command::Classify { file } => cmd_classify(file),
        Command::Family { name, field, params, output } => cmd_family(*name, *field, params, output),
        Command::AuditFamily { name, field, tuples } => cmd_audit(*name, *field, tuples),
        Command::Census { dim, field, workers, assertions, output } => {
            cmd_census(*dim, *field, *workers, *assertions, output.as_deref())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            match cli.format {
                Format::Text => print!("{}", report.text),
                Format::Json => println!("{}", report.json),
            }
            ExitCode::from(report.code)
        }
        Err(e) => {
            match cli.format {
                Format::Text => eprintln!("error: {e}"),
                Format::Json => println!("{}", json!({"error": e.to_string()})),
            }
            ExitCode::from(exit_code(&e))
        }
    }
}
