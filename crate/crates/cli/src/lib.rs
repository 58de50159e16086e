//! Command-line front end for `bikoeff`.
//!
//! Exit codes: 0 on success, 1 on usage or input errors, 2 when a search
//! finds a point above a proven bound.

pub mod config;
pub mod report;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use bikoeff::bounds::{self, A5Variant, BoundBreakdown};
use bikoeff::classes::{apply_operator, ClassSpec, Family, Operator};
use bikoeff::oracle::{self, A5Family, OracleReport, SearchConfig, Target};
use bikoeff::poly::Poly;
use bikoeff::series::{Scalar, Series, TruncatedSeries};
use bikoeff::Real;
use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use num_rational::BigRational;

use crate::config::{SearchArgs, SEED_ENV};
use crate::report::{sig15, ReportCollection, ReportDocument, Row};

#[derive(Debug, Parser)]
#[command(name = "bikoeff", version, about = "Coefficient bounds for bi-univalent function classes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExpandInput {
    /// The generator `φ`.
    Generator,
    /// The class operator applied to a symbolic normalized `f`.
    OperatorLhs,
    /// The compositional inverse of a symbolic normalized `f`.
    Inverse,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form bounds for a class.
    Bounds {
        spec: String,
        #[arg(long, value_delimiter = ',', default_value = "a2,a3,a4")]
        coeffs: Vec<Target>,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Search admissible systems and compare with the bounds.
    Verify {
        spec: String,
        #[arg(long, value_delimiter = ',', default_value = "a2,a3,a4")]
        target: Vec<Target>,
        #[command(flatten)]
        search: SearchArgs,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Print a truncated series.
    Expand {
        spec: String,
        #[arg(long, value_enum, default_value_t = ExpandInput::Generator)]
        input: ExpandInput,
        /// Highest power shown.
        #[arg(long)]
        order: Option<usize>,
        /// Keep `lambda` as a symbol in `operator-lhs`.
        #[arg(long)]
        symbolic_lambda: bool,
    },
    /// Tabulate bounds over a one-parameter family as CSV.
    Sweep {
        /// Spec text with a single `{}` placeholder.
        template: String,
        /// Name of the swept parameter.
        #[arg(long, default_value = "x")]
        param: String,
        /// `lo,hi,steps`; `steps` grid points including both ends.
        #[arg(long)]
        range: String,
        #[arg(long, value_delimiter = ',', default_value = "a2,a3,a4")]
        coeffs: Vec<Target>,
        /// Output path, `-` for stdout.
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the full verification grid and emit one consolidated document.
    Report {
        #[command(flatten)]
        search: SearchArgs,
        /// Samples for each `a5` search.
        #[arg(long, default_value_t = 20_000)]
        a5_samples: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Parses `args` and runs the command, returning the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let sink: &mut dyn Write = if code == 0 { out } else { err };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    let env_seed = std::env::var(SEED_ENV).ok();
    match execute(cli.command, env_seed.as_deref(), out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            1
        }
    }
}

fn execute(command: Command, env_seed: Option<&str>, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Bounds { spec, coeffs, format } => {
            let doc = cmd_bounds(&spec, &coeffs)?;
            emit(out, &[doc], format)?;
            Ok(0)
        }
        Command::Verify { spec, target, search, format } => {
            let cfg = search.resolve(SearchConfig::default(), env_seed)?;
            let (doc, reports) = cmd_verify(&spec, &target, &cfg)?;
            emit(out, &[doc], format)?;
            Ok(report_violations(&reports, err)?)
        }
        Command::Expand { spec, input, order, symbolic_lambda } => {
            writeln!(out, "{}", cmd_expand(&spec, input, order, symbolic_lambda)?)?;
            Ok(0)
        }
        Command::Sweep { template, param, range, coeffs, out: path } => {
            let csv = cmd_sweep(&template, &param, &range, &coeffs)?;
            write_output(out, Some(&path), &csv)?;
            Ok(0)
        }
        Command::Report { search, a5_samples, format, out: path } => {
            let cfg = search.resolve(SearchConfig::default(), env_seed)?;
            let (collection, reports) = cmd_report(&cfg, a5_samples)?;
            let text = match format {
                Format::Json => report::to_json(&collection)?,
                Format::Csv => report::to_csv(&collection.documents)?,
                Format::Table => report::to_table(&collection.documents),
            };
            write_output(out, path.as_deref(), &text)?;
            Ok(report_violations(&reports, err)?)
        }
    }
}

fn write_output(out: &mut dyn Write, path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) if p != Path::new("-") => {
            std::fs::write(p, text).with_context(|| format!("cannot write {}", p.display()))
        }
        _ => Ok(out.write_all(text.as_bytes())?),
    }
}

fn emit(out: &mut dyn Write, docs: &[ReportDocument], format: Format) -> Result<()> {
    let text = match format {
        Format::Json if docs.len() == 1 => report::to_json(&docs[0])?,
        Format::Json => report::to_json(&ReportCollection::new(docs.to_vec()))?,
        Format::Csv => report::to_csv(docs)?,
        Format::Table => report::to_table(docs),
    };
    out.write_all(text.as_bytes())?;
    if !text.ends_with('\n') {
        out.write_all(b"\n")?;
    }
    Ok(())
}

fn report_violations(reports: &[OracleReport], err: &mut dyn Write) -> Result<i32> {
    let mut code = 0;
    for r in reports.iter().filter(|r| r.violated) {
        code = 2;
        writeln!(
            err,
            "violation: {} {} reached {} above the bound {}",
            r.spec, r.target, r.best_value, r.bound_value
        )?;
        let witness = serde_json::json!({ "p": r.witness, "q": r.implied_q, "a": r.coefficients });
        writeln!(err, "witness: {witness}")?;
    }
    Ok(code)
}

pub fn parse_spec(text: &str) -> Result<ClassSpec> {
    text.parse().with_context(|| format!("invalid spec '{text}'"))
}

fn anchor(prefix: &str, spec: &ClassSpec) -> String {
    format!("{prefix}/{}", spec.operator)
}

fn breakdown_row(name: &str, b: &BoundBreakdown) -> Row {
    let mut row = Row::new(name, b.value);
    row.branch = Some(b.branch.to_string());
    row.route = Some(b.attained_by().to_string());
    row.constants = b.constants.iter().map(|(k, v)| (k.clone(), sig15(*v))).collect();
    row
}

fn a5_row(variant: A5Variant, value: f64) -> Row {
    let mut row = Row::new("a5", value);
    row.variant = Some(variant.to_string());
    row
}

/// Rows for the requested coefficients; `a5` yields one row per variant.
pub fn bound_rows(spec: &ClassSpec, coeffs: &[Target]) -> Result<Vec<Row>> {
    let mut rows = Vec::new();
    let set = if coeffs.iter().any(|t| *t != Target::A5) {
        Some(bounds::bounds(spec)?)
    } else {
        None
    };
    for t in coeffs {
        match t {
            Target::A5 => {
                for (v, value) in bounds::a5_bounds(spec)? {
                    rows.push(a5_row(v, value));
                }
            }
            t => {
                let set = set.as_ref().expect("computed above");
                rows.push(breakdown_row(&t.to_string(), set.get(t.index()).expect("a2..a4")));
            }
        }
    }
    Ok(rows)
}

pub fn cmd_bounds(spec_text: &str, coeffs: &[Target]) -> Result<ReportDocument> {
    let spec = parse_spec(spec_text)?;
    if coeffs.is_empty() {
        bail!("no coefficients requested");
    }
    Ok(ReportDocument::new(spec.to_string(), anchor("bounds", &spec), bound_rows(&spec, coeffs)?))
}

fn oracle_rows(spec: &ClassSpec, r: &OracleReport) -> Result<Vec<Row>> {
    if r.target == Target::A5 {
        return Ok(r
            .variants
            .iter()
            .map(|v| {
                let mut row = a5_row(v.variant, v.bound_value);
                row.oracle_best = Some(sig15(r.best_value));
                row.slack = Some(sig15(v.slack));
                row.violated = Some(v.violated);
                row
            })
            .collect());
    }
    let set = bounds::bounds(spec)?;
    let mut row = breakdown_row(&r.target.to_string(), set.get(r.target.index()).expect("a2..a4"));
    row.oracle_best = Some(sig15(r.best_value));
    row.slack = Some(sig15(r.slack));
    row.violated = Some(r.violated);
    Ok(vec![row])
}

fn proven_variant(spec: &ClassSpec) -> Option<String> {
    match spec.generator.family() {
        Family::Order { .. } => Some(A5Variant::Proof.to_string()),
        Family::Strong { .. } => Some(A5Variant::Rederived.to_string()),
        _ => None,
    }
}

fn verify_spec(spec: &ClassSpec, targets: &[Target], cfg: &SearchConfig) -> Result<(ReportDocument, Vec<OracleReport>)> {
    if targets.is_empty() {
        bail!("no targets requested");
    }
    let mut rows = Vec::new();
    let mut reports = Vec::new();
    for &t in targets {
        let r = oracle::max_coeff(spec, t, cfg)?;
        rows.extend(oracle_rows(spec, &r)?);
        reports.push(r);
    }
    let mut doc = ReportDocument::new(spec.to_string(), anchor("oracle", spec), rows);
    if targets.contains(&Target::A5) {
        doc.provenance.variant = proven_variant(spec);
    }
    Ok((doc, reports))
}

pub fn cmd_verify(spec_text: &str, targets: &[Target], cfg: &SearchConfig) -> Result<(ReportDocument, Vec<OracleReport>)> {
    verify_spec(&parse_spec(spec_text)?, targets, cfg)
}

const A_NAMES: [&str; 8] = ["a2", "a3", "a4", "a5", "a6", "a7", "a8", "a9"];

fn symbolic_f(order: usize) -> Result<Series<Poly>> {
    if order + 1 > A_NAMES.len() + 1 {
        bail!("symbolic expansions go up to order {}", A_NAMES.len());
    }
    let mut coeffs = vec![Poly::int(0), Poly::int(1)];
    coeffs.extend(A_NAMES[..order].iter().map(|n| Poly::var(n)));
    Ok(Series::new(coeffs)?)
}

pub fn cmd_expand(spec_text: &str, input: ExpandInput, order: Option<usize>, symbolic_lambda: bool) -> Result<String> {
    let spec = parse_spec(spec_text)?;
    match input {
        ExpandInput::Generator => {
            let order = order.unwrap_or(3);
            if order > spec.generator.len() {
                bail!("the generator is stored up to order {}", spec.generator.len());
            }
            let s = if spec.generator.is_exact() {
                TruncatedSeries::Rational(spec.generator.series::<BigRational>()?.truncate(order))
            } else {
                TruncatedSeries::Complex(spec.generator.series::<Complex64>()?.truncate(order))
            };
            Ok(s.to_string())
        }
        ExpandInput::OperatorLhs => {
            let order = order.unwrap_or(3);
            let lambda = if symbolic_lambda {
                Poly::var("lambda")
            } else {
                Poly::from_real(&spec.lambda).context("symbolic expansion needs an exact lambda")?
            };
            let f = symbolic_f(order)?;
            let lhs = apply_operator(spec.operator, &lambda, &f)?;
            Ok(lhs.truncate(order.min(lhs.order())).display_in("z"))
        }
        ExpandInput::Inverse => {
            let order = order.unwrap_or(5);
            let g = symbolic_f(order.max(1) - 1)?.revert()?;
            Ok(g.truncate(order.min(g.order())).display_in("w"))
        }
    }
}

/// Grid points `lo..=hi`, `steps` of them.
pub fn sweep_grid(range: &str) -> Result<Vec<Real>> {
    let parts: Vec<&str> = range.split(',').map(str::trim).collect();
    let [lo, hi, steps] = parts[..] else {
        bail!("range must be 'lo,hi,steps' (got '{range}')");
    };
    let lo: Real = lo.parse().with_context(|| format!("bad range start '{lo}'"))?;
    let hi: Real = hi.parse().with_context(|| format!("bad range end '{hi}'"))?;
    let steps: usize = steps.parse().with_context(|| format!("bad step count '{steps}'"))?;
    match steps {
        0 => bail!("range needs at least one step"),
        1 => Ok(vec![lo]),
        n => Ok((0..n).map(|i| Real::lerp(&lo, &hi, i, n - 1)).collect()),
    }
}

pub fn cmd_sweep(template: &str, param: &str, range: &str, coeffs: &[Target]) -> Result<String> {
    if template.matches("{}").count() != 1 {
        bail!("template must contain exactly one '{{}}' placeholder");
    }
    if coeffs.is_empty() {
        bail!("no coefficients requested");
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["param", "coeff", "bound", "branch", "variant"])?;
    for x in sweep_grid(range)? {
        let spec = parse_spec(&template.replace("{}", &x.to_string()))
            .with_context(|| format!("at {param} = {x}"))?;
        for row in bound_rows(&spec, coeffs)? {
            w.write_record([
                x.to_f64().to_string(),
                row.coefficient,
                row.bound.to_string(),
                row.branch.unwrap_or_default(),
                row.variant.unwrap_or_default(),
            ])?;
        }
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

/// Specs behind the reference constants in `report`.
pub const REFERENCE_SPECS: [(&str, &[Target]); 3] = [
    ("st:lambda=0:order:rho=0", &[Target::A2, Target::A3, Target::A4, Target::A5]),
    ("ss:beta=1/2", &[Target::A2, Target::A3, Target::A4, Target::A5]),
    ("m:lambda=1:order:rho=0", &[Target::A2, Target::A3, Target::A4]),
];

/// The operator, `λ` and `ρ` grid searched by `report`.
pub fn soundness_grid() -> Vec<String> {
    let mut specs = Vec::new();
    for op in [Operator::StLambda, Operator::MLambda] {
        for l in ["0", "1/2", "1"] {
            for r in ["0", "1/4", "1/2"] {
                specs.push(format!("{op}:lambda={l}:order:rho={r}"));
            }
        }
    }
    specs
}

pub const A5_GRID: [(A5Family, f64); 6] = [
    (A5Family::StRho, 0.0),
    (A5Family::StRho, 0.25),
    (A5Family::StRho, 0.5),
    (A5Family::SsBeta, 0.5),
    (A5Family::SsBeta, 0.75),
    (A5Family::SsBeta, 1.0),
];

pub fn cmd_report(cfg: &SearchConfig, a5_samples: usize) -> Result<(ReportCollection, Vec<OracleReport>)> {
    let mut docs = Vec::new();
    let mut reports = Vec::new();
    for (text, coeffs) in REFERENCE_SPECS {
        docs.push(cmd_bounds(text, coeffs)?);
    }
    for text in soundness_grid() {
        let (doc, r) = cmd_verify(&text, &[Target::A2, Target::A3, Target::A4], cfg)?;
        docs.push(doc);
        reports.extend(r);
    }
    let a5_cfg = SearchConfig { samples: a5_samples, ..cfg.clone() };
    for (family, param) in A5_GRID {
        let spec = oracle::a5_spec(family, param)?;
        let (doc, r) = verify_spec(&spec, &[Target::A5], &a5_cfg)?;
        docs.push(doc);
        reports.extend(r);
    }
    Ok((ReportCollection::new(docs), reports))
}
