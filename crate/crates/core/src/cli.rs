//! Command-line front end.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::algebra::{GmAlgebra, Side};
use crate::axioms::{audit_lemmas, verify_gm_type};
use crate::error::{Error, Result};
use crate::exact::{unit_vector, FieldSpec, Scalar};
use crate::forms::{frobenius_defect, gram, right_frobenius_defect};
use crate::fusion::{infer_law, miyamoto_group, verify_axis, LawSpec};
use crate::io::{read_algebra, read_json, to_json_pretty, AlgebraFile, SystemFile};
use crate::spectral::decompose;
use crate::suite::run_all;
use crate::system::{construct_model, TranspositionSystem, DEFAULT_GROUP_CAP};

pub const EXIT_PASS: u8 = 0;
pub const EXIT_MATH: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

#[derive(Debug, Parser)]
#[command(name = "oddtrans", version, about = "Exact computations with odd transposition algebras")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build an algebra and write it as JSON.
    Build(SourceArgs),
    /// Check a transposition system.
    Validate(SourceArgs),
    /// Eigenspaces of L_a or R_a.
    Spectrum(SourceArgs),
    /// Verify or infer fusion laws.
    Fusion(SourceArgs),
    /// Miyamoto group versus the conjugation image.
    Miyamoto(SourceArgs),
    /// Gram matrix, Frobenius defect and radical.
    Form(SourceArgs),
    /// Right ideals generated by basis vectors.
    Ideal(SourceArgs),
    /// Subalgebra generated by basis vectors.
    Closure(SourceArgs),
    /// Check the GM(p, eta) axioms on a structure-constant table.
    VerifyGm(SourceArgs),
    /// Compare closed-form block products with computed ones.
    Audit(SourceArgs),
    /// Run every acceptance criterion.
    ReportAll(SourceArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SideArg {
    Left,
    Right,
}

impl From<SideArg> for Side {
    fn from(s: SideArg) -> Side {
        match s {
            SideArg::Left => Side::Left,
            SideArg::Right => Side::Right,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct SourceArgs {
    /// Algebra file (or system file for `validate`).
    pub input: Option<PathBuf>,
    /// dihedral:<p> | frobenius:<p>,<d> | burnside23 | file:<path>
    #[arg(long)]
    pub model: Option<String>,
    /// Q | F:<q>
    #[arg(long, default_value = "Q")]
    pub field: String,
    #[arg(long, allow_hyphen_values = true)]
    pub eta: Option<String>,
    /// Basis index, or comma-separated list for `closure`, `ideal` and `audit`.
    #[arg(long)]
    pub axis: Option<String>,
    #[arg(long, value_enum, default_value = "left")]
    pub side: SideArg,
    /// M:<a>,<b> | GM:<a>,<b> | infer
    #[arg(long, allow_hyphen_values = true, default_value = "infer")]
    pub law: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    /// Dimension cap for closures.
    #[arg(long)]
    pub max_dim: Option<usize>,
    /// Element cap for group closures.
    #[arg(long, default_value_t = DEFAULT_GROUP_CAP)]
    pub cap: usize,
    /// Build even when the characteristic is not good.
    #[arg(long)]
    pub force: bool,
    /// Evaluate independent axes concurrently.
    #[arg(long)]
    pub parallel: bool,
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: Vec<String>,
    pub inputs_digest: String,
    pub pass: bool,
    pub summary: String,
    pub results: Value,
}

/// Outcome of a verb: data plus a verdict.
struct Outcome {
    results: Value,
    pass: bool,
    summary: String,
}

struct Loaded {
    alg: GmAlgebra,
    digest_source: String,
}

fn load_algebra(args: &SourceArgs) -> Result<Loaded> {
    if let Some(path) = &args.input {
        let text = fs::read_to_string(path)?;
        let file: AlgebraFile = serde_json::from_str(&text)?;
        let alg = file.to_gm(args.force)?;
        return Ok(Loaded { alg, digest_source: text });
    }
    let model = args.model.as_deref().ok_or_else(|| Error::Format("give an algebra file or --model".into()))?;
    let eta_text = args.eta.as_deref().ok_or_else(|| Error::Format("--eta is required with --model".into()))?;
    let field: FieldSpec = args.field.parse()?;
    let eta = Scalar::parse(eta_text, field)?;
    let sys = construct_model(model)?;
    let alg = GmAlgebra::build(sys, eta, args.force)?;
    let digest_source = serde_json::to_string(&AlgebraFile::from_algebra(&alg))?;
    Ok(Loaded { alg, digest_source })
}

fn parse_indices(text: Option<&str>, n: usize) -> Result<Option<Vec<usize>>> {
    let Some(text) = text else { return Ok(None) };
    let out = text
        .split(',')
        .map(|s| {
            let i: usize = s.trim().parse().map_err(|_| Error::Format(format!("bad index `{s}`")))?;
            if i >= n {
                return Err(Error::IndexOutOfRange { index: i, dim: n });
            }
            Ok(i)
        })
        .collect::<Result<Vec<_>>>()?;
    if out.is_empty() {
        return Err(Error::Format("empty index list".into()));
    }
    Ok(Some(out))
}

fn axes(args: &SourceArgs, n: usize) -> Result<Vec<usize>> {
    Ok(parse_indices(args.axis.as_deref(), n)?.unwrap_or_else(|| (0..n).collect()))
}

fn map_axes<T: Send, F>(parallel: bool, axes: &[usize], f: F) -> Result<Vec<T>>
where
    F: Fn(usize) -> Result<T> + Sync + Send,
{
    if parallel {
        axes.par_iter().map(|&a| f(a)).collect()
    } else {
        axes.iter().map(|&a| f(a)).collect()
    }
}

fn digest(parts: &[&str]) -> String {
    let mut h = Sha256::new();
    for p in parts {
        h.update((p.len() as u64).to_le_bytes());
        h.update(p.as_bytes());
    }
    hex::encode(h.finalize())
}

fn to_value<T: Serialize>(x: &T) -> Result<Value> {
    Ok(serde_json::to_value(x)?)
}

fn run_verb(command: &Command) -> Result<(Outcome, String)> {
    match command {
        Command::Build(args) => {
            let l = load_algebra(args)?;
            let file = AlgebraFile::from_algebra(&l.alg);
            let text = to_json_pretty(&file)?;
            let results = match &args.out {
                Some(path) => {
                    fs::write(path, &text)?;
                    json!({ "written": path.display().to_string(), "dim": l.alg.dim(), "p": l.alg.p() })
                }
                None => to_value(&file)?,
            };
            let summary = format!("built algebra of dimension {}", l.alg.dim());
            Ok((Outcome { results, pass: true, summary }, l.digest_source))
        }
        Command::Validate(args) => {
            let (sys, source) = match (&args.input, args.model.as_deref()) {
                (Some(path), _) => {
                    let text = fs::read_to_string(path)?;
                    let f: SystemFile = serde_json::from_str(&text)?;
                    let n = f.conj.len();
                    let labels = f.labels.unwrap_or_else(|| (0..n).map(|i| format!("t{i}")).collect());
                    (TranspositionSystem::from_table(f.p, labels, f.conj)?, text)
                }
                (None, Some(spec)) => {
                    let sys = match spec.strip_prefix("file:") {
                        Some(path) => {
                            let f: SystemFile = read_json(std::path::Path::new(path))?;
                            let n = f.conj.len();
                            let labels = f.labels.unwrap_or_else(|| (0..n).map(|i| format!("t{i}")).collect());
                            TranspositionSystem::from_table(f.p, labels, f.conj)?
                        }
                        None => construct_model(spec)?,
                    };
                    let text = serde_json::to_string(&SystemFile::from_system(&sys))?;
                    (sys, text)
                }
                (None, None) => return Err(Error::Format("give a system file or --model".into())),
            };
            let report = sys.validate();
            let pass = report.passed();
            let order = if pass { to_value(&sys.conjugation_group(args.cap).0.order)? } else { Value::Null };
            let results = json!({
                "n": sys.n(),
                "p": sys.p(),
                "issues": to_value(&report.issues)?,
                "conjugation_group_order": order,
            });
            let summary = format!("{} issue(s)", report.issues.len());
            Ok((Outcome { results, pass, summary }, source))
        }
        Command::Spectrum(args) => {
            let l = load_algebra(args)?;
            let side: Side = args.side.into();
            let list = axes(args, l.alg.dim())?;
            let decs = map_axes(args.parallel, &list, |a| decompose(&l.alg, a, side))?;
            let pass = decs.iter().all(|d| d.semisimple);
            let summary = format!(
                "{} of {} {side} operators semisimple",
                decs.iter().filter(|d| d.semisimple).count(),
                decs.len()
            );
            Ok((Outcome { results: to_value(&decs)?, pass, summary }, l.digest_source))
        }
        Command::Fusion(args) => {
            let l = load_algebra(args)?;
            let side: Side = args.side.into();
            let list = axes(args, l.alg.dim())?;
            match LawSpec::parse(&args.law, l.alg.field())? {
                LawSpec::Infer => {
                    let laws = map_axes(args.parallel, &list, |a| infer_law(&l.alg, a, side))?;
                    let summary = format!("inferred {side} laws on {} axes", laws.len());
                    Ok((Outcome { results: to_value(&laws)?, pass: true, summary }, l.digest_source))
                }
                LawSpec::Law(law) => {
                    let reports = map_axes(args.parallel, &list, |a| verify_axis(&l.alg, a, &law, side))?;
                    let failed = reports.iter().filter(|r| !r.pass).count();
                    let summary = format!("{failed} of {} axes violate the law", reports.len());
                    Ok((Outcome { results: to_value(&reports)?, pass: failed == 0, summary }, l.digest_source))
                }
            }
        }
        Command::Miyamoto(args) => {
            let l = load_algebra(args)?;
            let report = miyamoto_group(&l.alg, args.cap)?;
            let summary = format!("order {:?}, matches conjugation: {}", report.order, report.matches_conjugation);
            Ok((Outcome { pass: report.matches_conjugation, results: to_value(&report)?, summary }, l.digest_source))
        }
        Command::Form(args) => {
            let l = load_algebra(args)?;
            let g = gram(&l.alg);
            let left = frobenius_defect(&l.alg);
            let right = right_frobenius_defect(&l.alg);
            let pass = left.is_empty() && g.radical_basis.is_empty() && g.determinant_matches;
            let summary = format!("{} left defect triples, radical dimension {}", left.len(), g.radical_basis.len());
            let results = json!({
                "gram": to_value(&g)?,
                "left_defect": to_value(&left)?,
                "right_defect_count": right.len(),
            });
            Ok((Outcome { results, pass, summary }, l.digest_source))
        }
        Command::Ideal(args) => {
            let l = load_algebra(args)?;
            let n = l.alg.dim();
            let list = axes(args, n)?;
            let dims = map_axes(args.parallel, &list, |a| {
                Ok(l.alg.right_ideal_closure(&unit_vector(l.alg.field(), n, a))?.len())
            })?;
            let pass = dims.iter().all(|&d| d == n);
            let results: Vec<Value> = list.iter().zip(&dims).map(|(a, d)| json!({ "generator": a, "dim": d })).collect();
            let summary = format!("{} of {} generators give the whole algebra", dims.iter().filter(|&&d| d == n).count(), dims.len());
            Ok((Outcome { results: Value::Array(results), pass, summary }, l.digest_source))
        }
        Command::Closure(args) => {
            let l = load_algebra(args)?;
            let n = l.alg.dim();
            let seeds_idx = parse_indices(args.axis.as_deref(), n)?
                .ok_or_else(|| Error::Format("closure needs --axis with seed indices".into()))?;
            let seeds: Vec<_> = seeds_idx.iter().map(|&i| unit_vector(l.alg.field(), n, i)).collect();
            let cap = args.max_dim.unwrap_or(n);
            let closure = l.alg.subalgebra_closure(&seeds, cap)?;
            let summary = format!("dimension {}{}", closure.dim(), if closure.closed { "" } else { " (not closed)" });
            let results = json!({ "seeds": seeds_idx, "dim": closure.dim(), "closed": closure.closed, "basis": to_value(&closure.basis)? });
            Ok((Outcome { results, pass: closure.closed, summary }, l.digest_source))
        }
        Command::VerifyGm(args) => {
            let (file, source) = match &args.input {
                Some(path) => {
                    let text = fs::read_to_string(path)?;
                    (serde_json::from_str::<AlgebraFile>(&text)?, text)
                }
                None => {
                    let l = load_algebra(args)?;
                    (AlgebraFile::from_algebra(&l.alg), l.digest_source)
                }
            };
            let abs = file.to_abstract()?;
            let report = verify_gm_type(&abs);
            let pass = report.passed() && report.reconstruction.as_ref().is_some_and(|r| r.isomorphic);
            let summary = format!(
                "axioms {}{}{}{}",
                mark(report.axiom1.pass),
                mark(report.axiom2.pass),
                mark(report.axiom3.pass),
                mark(report.axiom4.pass)
            );
            Ok((Outcome { results: to_value(&report)?, pass, summary }, source))
        }
        Command::Audit(args) => {
            let l = load_algebra(args)?;
            let pair = parse_indices(args.axis.as_deref(), l.alg.dim())?.unwrap_or_else(|| vec![0, 1]);
            let [a, b] = pair[..] else {
                return Err(Error::Format("audit takes --axis a,b".into()));
            };
            let report = audit_lemmas(&l.alg, a, b)?;
            let bad = report.mismatches().count();
            let summary = format!("{bad} counted mismatches out of {} entries", report.entries.len());
            Ok((Outcome { pass: report.all_match, results: to_value(&report)?, summary }, l.digest_source))
        }
        Command::ReportAll(args) => {
            let outcomes = run_all(args.parallel);
            let passed = outcomes.iter().filter(|o| o.pass).count();
            let summary = format!("{passed} of {} criteria pass", outcomes.len());
            let pass = passed == outcomes.len();
            Ok((Outcome { results: to_value(&outcomes)?, pass, summary }, "report-all".into()))
        }
    }
}

fn mark(ok: bool) -> char {
    if ok {
        '+'
    } else {
        '-'
    }
}

fn common(command: &Command) -> &SourceArgs {
    match command {
        Command::Build(a)
        | Command::Validate(a)
        | Command::Spectrum(a)
        | Command::Fusion(a)
        | Command::Miyamoto(a)
        | Command::Form(a)
        | Command::Ideal(a)
        | Command::Closure(a)
        | Command::VerifyGm(a)
        | Command::Audit(a)
        | Command::ReportAll(a) => a,
    }
}

/// Renders a JSON value as indented `key: value` lines.
pub fn render_text(value: &Value) -> String {
    fn scalar(v: &Value) -> Option<String> {
        match v {
            Value::Null => Some("null".into()),
            Value::Bool(b) => Some(b.to_string()),
            Value::Number(n) => Some(n.to_string()),
            Value::String(s) => Some(s.clone()),
            Value::Array(items) if items.iter().all(|x| scalar(x).is_some() && !x.is_array()) => {
                Some(format!("[{}]", items.iter().filter_map(scalar).collect::<Vec<_>>().join(", ")))
            }
            _ => None,
        }
    }
    fn walk(v: &Value, indent: usize, out: &mut String) {
        let pad = "  ".repeat(indent);
        match v {
            Value::Object(map) => {
                for (k, x) in map {
                    match scalar(x) {
                        Some(s) => {
                            let _ = writeln!(out, "{pad}{k}: {s}");
                        }
                        None => {
                            let _ = writeln!(out, "{pad}{k}:");
                            walk(x, indent + 1, out);
                        }
                    }
                }
            }
            Value::Array(items) => {
                for x in items {
                    match scalar(x) {
                        Some(s) => {
                            let _ = writeln!(out, "{pad}- {s}");
                        }
                        None => {
                            let _ = writeln!(out, "{pad}-");
                            walk(x, indent + 1, out);
                        }
                    }
                }
            }
            other => {
                let _ = writeln!(out, "{pad}{}", scalar(other).unwrap_or_default());
            }
        }
    }
    let mut out = String::new();
    walk(value, 0, &mut out);
    out
}

/// Runs a parsed command, writes the report, and returns the exit code.
/// `argv` is echoed into the report.
pub fn execute(cli: &Cli, argv: &[String]) -> u8 {
    let args = common(&cli.command);
    let started = std::time::Instant::now();
    let (outcome, source) = match run_verb(&cli.command) {
        Ok(x) => x,
        // A defective operator is a mathematical failure, so it still gets a report.
        Err(e @ Error::NotSemisimple { .. }) => (
            Outcome { results: json!({ "error": e.to_string() }), pass: false, summary: e.to_string() },
            String::new(),
        ),
        Err(e) => {
            eprintln!("oddtrans: {e}");
            return EXIT_USAGE;
        }
    };
    let echo: Vec<String> = argv.iter().skip(1).cloned().collect();
    let report = Report {
        tool: "oddtrans",
        version: env!("CARGO_PKG_VERSION"),
        inputs_digest: digest(&[&echo.join("\u{1f}"), &source]),
        command: echo,
        pass: outcome.pass,
        summary: outcome.summary,
        results: outcome.results,
    };
    let rendered = match args.format {
        Format::Json => match to_json_pretty(&report) {
            Ok(s) => s,
            Err(e) => {
                eprintln!("oddtrans: {e}");
                return EXIT_USAGE;
            }
        },
        Format::Text => match serde_json::to_value(&report) {
            Ok(v) => render_text(&v),
            Err(e) => {
                eprintln!("oddtrans: {e}");
                return EXIT_USAGE;
            }
        },
    };
    // `build --out` writes the algebra itself; every other verb writes its report.
    let to_file = match &cli.command {
        Command::Build(_) => None,
        _ => args.out.as_ref(),
    };
    match to_file {
        Some(path) => {
            if let Err(e) = fs::write(path, rendered) {
                eprintln!("oddtrans: {e}");
                return EXIT_USAGE;
            }
        }
        None => print!("{rendered}"),
    }
    eprintln!("elapsed: {:.3}s", started.elapsed().as_secs_f64());
    if report.pass {
        EXIT_PASS
    } else {
        EXIT_MATH
    }
}

/// Loads an algebra file from disk; exposed for tests.
pub fn load_algebra_file(path: &std::path::Path, force: bool) -> Result<GmAlgebra> {
    read_algebra(path)?.to_gm(force)
}
