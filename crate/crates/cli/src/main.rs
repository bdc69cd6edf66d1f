//! `setlp`: encode, solve and verify extremal set problems.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or input error,
//! 3 solver limit reached.

mod construct;
mod params;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};
use setlp::certificates::{self, formula_catalog};
use setlp::encoders::catalog;
use setlp::{
    encode, export_lp, parse_lp, solve_ip, verify_id, verify_json, EncodeOptions, EncodedModel, IlpModel, IpStatus,
    NodeSearch, ProblemSpec, Report, SolveConfig,
};

const VERIFY_FAILED: u8 = 1;
const USAGE: u8 = 2;
const LIMIT: u8 = 3;

#[derive(Parser)]
#[command(name = "setlp", version, about = "Exact 0-1 programming for extremal set theory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List problems, constructions, certificates and bound formulas.
    List(ListArgs),
    /// Write the LP file of a problem.
    Encode(EncodeArgs),
    /// Solve a problem or an LP file.
    Solve(SolveArgs),
    /// Check stored or supplied certificates.
    Verify(VerifyArgs),
    /// Build a named construction and check its defining properties.
    Construct(ConstructArgs),
}

#[derive(Args)]
struct ListArgs {
    #[arg(long)]
    problems: bool,
    #[arg(long)]
    constructions: bool,
    #[arg(long)]
    certs: bool,
    #[arg(long)]
    formulas: bool,
    #[arg(long)]
    json: bool,
}

/// A problem given by name and `key=value` pairs, a spec file, or both
/// (pairs override the file).
#[derive(Args)]
struct ProblemArgs {
    /// Problem name, e.g. `sperner`.
    problem: Option<String>,
    /// Parameters such as `n=6` or `parts=4,4`.
    params: Vec<String>,
    /// ProblemSpec JSON file.
    #[arg(long)]
    spec: Option<PathBuf>,
    /// Keep only these set sizes free; the rest are pinned by the problem's
    /// heuristic rule and the result is a lower bound only.
    #[arg(long, value_delimiter = ',')]
    restrict: Option<Vec<usize>>,
    /// Add symmetry-breaking ordering constraints.
    #[arg(long)]
    symmetry: bool,
}

#[derive(Args)]
struct EncodeArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    /// Output LP file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Print variable and constraint counts.
    #[arg(long)]
    stats: bool,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    /// Solve this LP file instead of an encoded problem.
    #[arg(long, conflicts_with_all = ["spec", "restrict", "symmetry"])]
    lp: Option<PathBuf>,
    /// Seconds.
    #[arg(long)]
    time_limit: Option<f64>,
    #[arg(long)]
    node_limit: Option<u64>,
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// auto, lp, lp-depth-first or propagation.
    #[arg(long, default_value = "auto")]
    search: String,
    /// Do not use model symmetries for orbital fixing.
    #[arg(long)]
    no_orbits: bool,
    /// Print the decoded witness and its property checks.
    #[arg(long)]
    witness: bool,
    #[arg(long)]
    json: bool,
    #[arg(long)]
    stats: bool,
    /// Also write the outcome JSON here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Certificate ids or JSON files.
    targets: Vec<String>,
    #[arg(long)]
    all: bool,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct ConstructArgs {
    name: String,
    params: Vec<String>,
    /// Exit 1 unless every check passes.
    #[arg(long)]
    verify: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// A failure with its exit code.
struct Exit(u8, anyhow::Error);

fn usage(e: impl Into<anyhow::Error>) -> Exit {
    Exit(USAGE, e.into())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match cli.command {
        Command::List(a) => list(&a).map_err(usage),
        Command::Encode(a) => encode_cmd(&a).map_err(usage),
        Command::Solve(a) => solve_cmd(&a),
        Command::Verify(a) => verify_cmd(&a),
        Command::Construct(a) => construct_cmd(&a),
    };
    match res {
        Ok(code) => ExitCode::from(code),
        Err(Exit(code, e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(code)
        }
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut so = std::io::stdout().lock();
            let nl = if text.ends_with('\n') { "" } else { "\n" };
            match so.write_all(text.as_bytes()).and_then(|_| so.write_all(nl.as_bytes())) {
                // a closed pipe (`| head`) is not an error
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
                r => Ok(r?),
            }
        }
    }
}

fn list(a: &ListArgs) -> Result<u8> {
    let all = !(a.problems || a.constructions || a.certs || a.formulas);
    let problems = catalog();
    let constructions = setlp::constructions::catalog();
    let certs = certificates::list_certificates();
    let formulas = formula_catalog();
    if a.json {
        let mut m = Map::new();
        if all || a.problems {
            m.insert("problems".into(), serde_json::to_value(&problems)?);
        }
        if all || a.constructions {
            m.insert("constructions".into(), serde_json::to_value(&constructions)?);
        }
        if all || a.certs {
            m.insert("certificates".into(), serde_json::to_value(&certs)?);
        }
        if all || a.formulas {
            m.insert("formulas".into(), serde_json::to_value(&formulas)?);
        }
        emit(None, &serde_json::to_string_pretty(&m)?)?;
        return Ok(0);
    }
    let mut text = String::new();
    let mut section = |title: &str, rows: Vec<(String, String, String)>| {
        text.push_str(&format!("{title} ({}):\n", rows.len()));
        for (n, p, s) in rows {
            text.push_str(&format!("  {n:<30} {p:<36} {s}\n"));
        }
    };
    if all || a.problems {
        section("problems", problems.iter().map(|e| (e.name.into(), e.params.into(), e.summary.into())).collect());
    }
    if all || a.constructions {
        let rows = constructions.iter().map(|c| (c.name.into(), c.params.into(), c.summary.into())).collect();
        section("constructions", rows);
    }
    if all || a.certs {
        section("certificates", certs.iter().map(|c| (c.id.into(), String::new(), c.source.clone())).collect());
    }
    if all || a.formulas {
        section("formulas", formulas.iter().map(|f| (f.name.into(), f.params.into(), f.value.into())).collect());
    }
    emit(None, &text)?;
    Ok(0)
}

fn problem_spec(a: &ProblemArgs) -> Result<ProblemSpec> {
    let mut obj = match &a.spec {
        Some(path) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            match serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))? {
                Value::Object(m) => m,
                _ => bail!("{} is not a JSON object", path.display()),
            }
        }
        None => Map::new(),
    };
    let mut pairs = a.params.clone();
    match &a.problem {
        // a lone `key=value` lands in the name slot when --spec names the problem
        Some(p) if p.contains('=') => pairs.insert(0, p.clone()),
        Some(p) => {
            obj.insert("problem".into(), Value::String(p.clone()));
        }
        None => {}
    }
    obj.extend(params::parse_pairs(&pairs)?);
    if !obj.contains_key("problem") {
        bail!("no problem given; name one (see `setlp list --problems`) or pass --spec");
    }
    serde_json::from_value(Value::Object(obj)).context("invalid problem parameters")
}

fn encoded(a: &ProblemArgs) -> Result<EncodedModel> {
    let spec = problem_spec(a)?;
    let opts = EncodeOptions { symmetry: a.symmetry, restrict: a.restrict.clone() };
    Ok(encode(&spec, &opts)?)
}

fn stats_line(m: &IlpModel) -> String {
    format!(
        "model {}: {} variables, {} constraints, {} fixed",
        m.name(),
        m.num_vars(),
        m.num_constraints(),
        m.fixed().len()
    )
}

fn encode_cmd(a: &EncodeArgs) -> Result<u8> {
    let em = encoded(&a.problem)?;
    emit(a.out.as_deref(), &export_lp(&em.model))?;
    if a.stats {
        // stdout carries the LP text unless it went to a file
        if a.out.is_some() {
            println!("{}", stats_line(&em.model));
        } else {
            eprintln!("{}", stats_line(&em.model));
        }
    }
    Ok(0)
}

const BANNER: &str = "\
************************************************************
* RESTRICTED SEARCH: some variables were pinned by a       *
* heuristic assumption. The value is a LOWER BOUND ONLY,   *
* not the optimum of the unrestricted problem.             *
************************************************************";

fn solve_cmd(a: &SolveArgs) -> Result<u8, Exit> {
    let (model, em) = match &a.lp {
        Some(path) => {
            if a.problem.problem.is_some() {
                return Err(usage(anyhow::anyhow!("give either a problem or --lp, not both")));
            }
            let text =
                fs::read_to_string(path).with_context(|| format!("reading {}", path.display())).map_err(usage)?;
            (parse_lp(&text).map_err(usage)?, None)
        }
        None => {
            let em = encoded(&a.problem).map_err(usage)?;
            (em.model.clone(), Some(em))
        }
    };
    let mut cfg = SolveConfig {
        time_limit: a.time_limit.map(Duration::from_secs_f64),
        node_limit: a.node_limit,
        threads: a.threads,
        node_search: a.search.parse::<NodeSearch>().map_err(usage)?,
        ..SolveConfig::default()
    };
    if let (Some(em), false) = (&em, a.no_orbits) {
        cfg.symmetries = em.symmetry_generators().into_iter().filter(|g| model.is_automorphism(g)).collect();
    }
    if a.stats {
        eprintln!("{}", stats_line(&model));
    }
    let out = solve_ip(&model, &cfg).map_err(usage)?;
    if out.restricted {
        eprintln!("{BANNER}");
    }

    let mut doc = serde_json::to_value(out.to_json(&model)).map_err(usage)?;
    let mut lines = vec![
        format!("status: {}", out.label()),
        format!("objective: {}", out.objective.map_or("none".into(), |v| v.to_string())),
        format!("bound: {}", out.dual_bound),
    ];
    if out.restricted {
        lines.push("note: lower bound only (restricted search)".into());
    }
    if let Some(em) = &em {
        doc["problem"] = serde_json::to_value(&em.spec).map_err(usage)?;
        if let (ProblemSpec::Forb { m, sizes, .. }, Some(v)) = (&em.spec, out.objective) {
            // the model leaves out the empty set and singletons, which every
            // configuration-free family may contain
            if sizes.iter().all(|&s| s >= 2) {
                let with = v + *m as i64 + 1;
                doc["objective_with_empty_and_singletons"] = json!(with);
                lines.push(format!("objective with empty set and singletons added (m+1 = {}): {with}", m + 1));
            }
        }
        if a.witness {
            if let Some(asg) = &out.assignment {
                let w = em.decode(asg).map_err(usage)?;
                let r = em.check_witness(asg).map_err(usage)?;
                doc["witness"] = serde_json::to_value(&w).map_err(usage)?;
                doc["witness_check"] = serde_json::to_value(&r).map_err(usage)?;
                lines.push(format!("witness: {}", serde_json::to_string(&w).map_err(usage)?));
                lines.push(format!("witness check: {} {}", r.property, if r.holds { "holds" } else { "FAILS" }));
            }
        }
    }
    if a.stats {
        lines.push(format!("nodes: {}", out.nodes));
        lines.push(format!("lp iterations: {}", out.lp_iterations));
        lines.push(format!("cuts: {}", out.cuts));
        lines.push(format!("root bound: {}", out.root_bound));
        lines.push(format!("seconds: {:.3}", out.elapsed.as_secs_f64()));
    }
    let json_text = serde_json::to_string_pretty(&doc).map_err(usage)?;
    if let Some(path) = &a.out {
        emit(Some(path), &json_text).map_err(usage)?;
    }
    let shown = if a.json { json_text } else { lines.join("\n") };
    emit(None, &shown).map_err(usage)?;
    match out.status {
        IpStatus::TimeLimit | IpStatus::NodeLimit => Ok(LIMIT),
        _ => Ok(0),
    }
}

fn verify_cmd(a: &VerifyArgs) -> Result<u8, Exit> {
    let mut targets = a.targets.clone();
    if a.all {
        targets.extend(certificates::list_certificates().iter().map(|c| c.id.to_string()));
    }
    if targets.is_empty() {
        return Err(usage(anyhow::anyhow!("name certificates or files to verify, or pass --all")));
    }
    let mut reports: Vec<Report> = Vec::new();
    for t in &targets {
        let r = if Path::new(t).is_file() {
            let text = fs::read_to_string(t).with_context(|| format!("reading {t}")).map_err(usage)?;
            verify_json(&text)
        } else {
            verify_id(t).map_err(usage)?
        };
        reports.push(r);
    }
    let passed = reports.iter().filter(|r| r.passed()).count();
    if a.json {
        let doc = json!({
            "passed": passed,
            "total": reports.len(),
            "reports": reports,
        });
        emit(None, &serde_json::to_string_pretty(&doc).map_err(usage)?).map_err(usage)?;
    } else {
        let mut text = String::new();
        for r in &reports {
            text.push_str(&format!("{r}\n"));
        }
        text.push_str(&format!("{passed}/{} certificates verified", reports.len()));
        emit(None, &text).map_err(usage)?;
    }
    Ok(if passed == reports.len() { 0 } else { VERIFY_FAILED })
}

fn construct_cmd(a: &ConstructArgs) -> Result<u8, Exit> {
    let p = params::parse_pairs(&a.params).map_err(usage)?;
    let built = construct::build(&a.name, p).map_err(usage)?;
    let text = serde_json::to_string_pretty(&built).map_err(usage)?;
    emit(a.out.as_deref(), &text).map_err(usage)?;
    for c in &built.checks {
        eprintln!("{} {}", if c.pass { "ok  " } else { "FAIL" }, c.name);
    }
    Ok(if a.verify && !built.passed() { VERIFY_FAILED } else { 0 })
}
