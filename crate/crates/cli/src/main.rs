//! `hopfc`: command-line driver for Hopf diagrams, string links and the
//! surgery invariant.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};
use thiserror::Error;

use hopfc_core::acceptance::{run_all, suite_names, validate_bundle_suite};
use hopfc_core::corpus::DEFAULT_SEED;
use hopfc_core::eval::Evaluator;
use hopfc_core::kirby::uniform_alpha;
use hopfc_core::translate::contract_c;
use hopfc_core::{
    canonicalize, invariant_tau, kirby_check, local_confluence_report, phi, psi0, psi_full, resolve_bundle,
    CoendBundle, DenseTensor, HopfDiagram, LinkSource, Scalar,
};

#[derive(Parser, Debug)]
#[command(name = "hopfc", version, about = "Hopf diagrams, string links and surgery invariants")]
struct Cli {
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
    /// Also emit intermediate representations.
    #[arg(long, global = true)]
    trace: bool,
    /// Seed for generated corpora.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Canonical form of a Hopf diagram file.
    Normalize { file: PathBuf },
    /// Hopf diagram of a braid, presentation or tangle file.
    Translate { file: PathBuf },
    /// Handle tangle of a Hopf diagram file.
    Phi { file: PathBuf },
    /// Contracts a diagram against a bundle, optionally with α on every leg.
    Evaluate {
        file: PathBuf,
        #[arg(long, default_value = "trivial")]
        bundle: String,
        #[arg(long)]
        alpha: Option<String>,
    },
    /// Checks the Kirby conditions for α.
    Kirby {
        #[arg(long, default_value = "trivial")]
        bundle: String,
        #[arg(long, default_value = "uniform")]
        alpha: String,
    },
    /// The surgery invariant of a string link's closure.
    Invariant {
        file: PathBuf,
        #[arg(long, default_value = "trivial")]
        bundle: String,
        #[arg(long, default_value = "uniform")]
        alpha: String,
    },
    /// Local confluence of the antipode rewriting system.
    Confluence {
        #[arg(long, default_value_t = 3)]
        max_size: usize,
    },
    /// Runs the acceptance suites.
    Selftest {
        /// Only suites whose name contains this string.
        #[arg(long)]
        filter: Option<String>,
        /// Extra bundles to run through the axiom suite.
        #[arg(long)]
        bundle: Vec<String>,
    },
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{}:{line}: {msg}", path.display())]
    Parse { path: PathBuf, line: usize, msg: String },
    #[error("{0}")]
    Core(#[from] hopfc_core::Error),
    #[error("{0}")]
    Usage(String),
}

/// What a subcommand produced; `ok` is false when a check it ran failed.
struct Report {
    text: String,
    json: Value,
    ok: bool,
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

/// Attaches the file name to parse errors.
fn in_file<T>(path: &Path, r: hopfc_core::Result<T>) -> Result<T, CliError> {
    r.map_err(|e| match e {
        hopfc_core::Error::Parse { line, msg } => CliError::Parse { path: path.to_path_buf(), line, msg },
        other => CliError::Core(other),
    })
}

fn load_diagram(path: &Path) -> Result<HopfDiagram, CliError> {
    let text = read(path)?;
    let term = in_file(path, hopfc_core::BraidedTerm::parse(&text))?;
    Ok(HopfDiagram::new(term)?)
}

/// `uniform`, `unit`, or `;`-separated exact scalars.
fn parse_alpha(arg: &str, b: &CoendBundle) -> Result<DenseTensor, CliError> {
    match arg {
        "uniform" => Ok(uniform_alpha(b.dim)),
        "unit" | "eta" => Ok(b.eta.clone()),
        _ => {
            let entries = arg
                .split(';')
                .map(|s| Scalar::parse(s, b.field_order))
                .collect::<hopfc_core::Result<Vec<_>>>()?;
            if entries.len() != b.dim {
                return Err(CliError::Usage(format!("alpha has {} entries, bundle {} has dimension {}", entries.len(), b.name, b.dim)));
            }
            Ok(DenseTensor { shape: vec![b.dim], entries })
        }
    }
}

fn exact(s: &Scalar) -> String {
    s.to_exact_string()
}

fn field(s: &Scalar) -> String {
    if s.order() == 1 {
        "Q".into()
    } else {
        format!("Q(zeta_{})", s.order())
    }
}

fn commented(label: &str, body: &str) -> String {
    let mut out = format!("# {label}\n");
    for l in body.lines() {
        out.push_str(&format!("#   {l}\n"));
    }
    out
}

fn normalize(file: &Path) -> Result<Report, CliError> {
    let d = load_diagram(file)?;
    let c = canonicalize(d.term());
    Ok(Report { text: c.to_text(), json: json!({ "diagram": c.to_text() }), ok: true })
}

fn translate(file: &Path, trace: bool) -> Result<Report, CliError> {
    let src = in_file(file, LinkSource::parse(&read(file)?))?;
    let p = src.presentation()?;
    let mut text = String::new();
    let mut steps = Vec::new();
    if trace {
        if let LinkSource::Tangle(t) = &src {
            text.push_str(&commented("input tangle", &t.to_text()));
        }
    }
    text.push_str(&commented("presentation", &p.to_text()));
    if trace {
        let mut body = psi0(&p.braid)?;
        text.push_str(&commented("braid image", &body.term().to_text()));
        steps.push(json!({ "step": "braid", "diagram": body.term().to_text() }));
        for &j in &p.contractions {
            body = contract_c(&body, j)?;
            text.push_str(&commented(&format!("after contraction {j}"), &body.term().to_text()));
            steps.push(json!({ "step": format!("contract {j}"), "diagram": body.term().to_text() }));
        }
    }
    let d = psi_full(&p)?;
    text.push_str(&d.term().to_text());
    let json = json!({
        "presentation": {
            "n": p.n,
            "braid": p.braid.to_text(),
            "contractions": p.contractions,
            "twists": p.twists,
        },
        "diagram": d.term().to_text(),
        "trace": steps,
    });
    Ok(Report { text, json, ok: true })
}

fn phi_cmd(file: &Path) -> Result<Report, CliError> {
    let h = phi(&load_diagram(file)?);
    Ok(Report { text: h.to_text(), json: json!({ "tangle": h.to_text() }), ok: true })
}

fn evaluate(file: &Path, bundle: &str, alpha: Option<&str>) -> Result<Report, CliError> {
    let d = load_diagram(file)?;
    let b = resolve_bundle(bundle)?;
    let ev = Evaluator::new(&b);
    let form = ev.eval_diagram(&d);
    let mut text = format!("bundle={} n={}\n", b.name, d.n());
    let mut entries = Vec::new();
    for (flat, v) in form.entries.iter().enumerate() {
        if v.is_zero() {
            continue;
        }
        let idx = form.multi_index(flat);
        let idx_s: Vec<String> = idx.iter().map(|i| i.to_string()).collect();
        text.push_str(&format!("[{}] {}\n", idx_s.join(" "), exact(v)));
        entries.push(json!({ "index": idx, "value": exact(v) }));
    }
    let mut json = json!({ "bundle": b.name, "n": d.n(), "field_order": b.field_order, "entries": entries });
    if let Some(a) = alpha {
        let alpha = parse_alpha(a, &b)?;
        let v = ev.contract_with(&d, &alpha);
        text.push_str(&format!("value={}\n", exact(&v)));
        json["value"] = json!(exact(&v));
    }
    Ok(Report { text, json, ok: true })
}

fn kirby(bundle: &str, alpha: &str) -> Result<Report, CliError> {
    let b = resolve_bundle(bundle)?;
    let k = kirby_check(&parse_alpha(alpha, &b)?, &b)?;
    let text = format!(
        "bundle={}\nantipode_fixed={}\nslide_invariant={}\nkirby_ok={}\nnormalizable={}\ntheta_plus_alpha={}\ntheta_minus_alpha={}\n",
        b.name,
        k.antipode_fixed,
        k.slide_invariant,
        k.kirby_ok,
        k.normalizable,
        exact(&k.theta_plus_alpha),
        exact(&k.theta_minus_alpha)
    );
    let mut json = serde_json::to_value(&k).map_err(|e| CliError::Usage(e.to_string()))?;
    json["bundle"] = json!(b.name);
    Ok(Report { text, json, ok: true })
}

fn invariant(file: &Path, bundle: &str, alpha: &str, trace: bool) -> Result<Report, CliError> {
    let src = in_file(file, LinkSource::parse(&read(file)?))?;
    let p = src.presentation()?;
    let b = resolve_bundle(bundle)?;
    let r = invariant_tau(&p, &parse_alpha(alpha, &b)?, &b)?;
    let mut text = String::new();
    if trace {
        text.push_str(&commented("presentation", &p.to_text()));
        text.push_str(&commented("diagram", &psi_full(&p)?.term().to_text()));
    }
    text.push_str(&format!("b_minus={} n_L={}\n", r.b_minus, r.n_components));
    text.push_str(&format!("linking={:?}\n", r.linking.matrix));
    if !r.kirby_ok {
        text.push_str("warning: alpha fails the Kirby conditions\n");
    }
    text.push_str(&format!("tau={} field={}\n", exact(&r.tau), field(&r.tau)));
    let json = json!({
        "bundle": b.name,
        "n_L": r.n_components,
        "b_minus": r.b_minus,
        "b_plus": r.linking.b_plus,
        "nullity": r.linking.nullity,
        "linking": r.linking.matrix,
        "kirby_ok": r.kirby_ok,
        "tau": exact(&r.tau),
        "field_order": r.tau.order(),
    });
    Ok(Report { text, json, ok: true })
}

fn confluence(max_size: usize) -> Result<Report, CliError> {
    let r = local_confluence_report(max_size)?;
    let mut text = format!("terms={} pairs={} failures={}\n", r.terms_examined, r.pairs_checked, r.failures);
    for t in &r.failing_terms {
        text.push_str(&commented("not joinable", t));
    }
    let json = json!({
        "terms": r.terms_examined,
        "pairs": r.pairs_checked,
        "failures": r.failures,
        "failing_terms": r.failing_terms,
    });
    Ok(Report { text, json, ok: r.failures == 0 })
}

fn selftest(seed: u64, filter: Option<&str>, extra: &[String]) -> Result<Report, CliError> {
    if let Some(f) = filter {
        if !suite_names().iter().any(|n| n.contains(f)) {
            return Err(CliError::Usage(format!("no suite matches '{f}' (suites: {})", suite_names().join(", "))));
        }
    }
    let mut outcomes = run_all(seed, filter);
    for name in extra {
        outcomes.push(validate_bundle_suite(&resolve_bundle(name)?));
    }
    let mut text = String::new();
    for o in &outcomes {
        text.push_str(&o.line());
        text.push('\n');
        for d in o.detail.iter().skip(1) {
            text.push_str(&format!("    {d}\n"));
        }
    }
    let ok = outcomes.iter().all(|o| o.passed);
    let passed = outcomes.iter().filter(|o| o.passed).count();
    text.push_str(&format!("{passed}/{} suites passed\n", outcomes.len()));
    let json = json!({ "seed": seed, "suites": outcomes, "ok": ok });
    Ok(Report { text, json, ok })
}

fn run(cli: &Cli) -> Result<Report, CliError> {
    match &cli.cmd {
        Command::Normalize { file } => normalize(file),
        Command::Translate { file } => translate(file, cli.trace),
        Command::Phi { file } => phi_cmd(file),
        Command::Evaluate { file, bundle, alpha } => evaluate(file, bundle, alpha.as_deref()),
        Command::Kirby { bundle, alpha } => kirby(bundle, alpha),
        Command::Invariant { file, bundle, alpha } => invariant(file, bundle, alpha, cli.trace),
        Command::Confluence { max_size } => confluence(*max_size),
        Command::Selftest { filter, bundle } => selftest(cli.seed, filter.as_deref(), bundle),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(r) => {
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&r.json).expect("json values serialize"));
            } else {
                print!("{}", r.text);
            }
            if r.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("hopfc: {e}");
            ExitCode::from(2)
        }
    }
}
