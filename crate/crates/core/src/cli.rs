//! Command-line surface. [`run`] returns the exit code and captured output so
//! the binary stays a one-liner and tests can drive commands directly.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::ccomp::{c_components, observable_blocks};
use crate::docalc::{derive_effect, verify_derivation_with, Derivation, DerivationJson, DeriveResult, Verdict, VerifyConfig};
use crate::error::{Error, Result};
use crate::graph::{CausalGraph, VarSet};
use crate::ident::{causal_effect, IdentResult};
use crate::oracle::{check_estimand_with, witness_search, DEFAULT_WITNESS_BUDGET};
use crate::sep::d_separated_in;
use crate::table::Domains;

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_NOT_IDENTIFIABLE: i32 = 2;
pub const EXIT_REJECTED: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "causal-ident", version, about = "Causal effect identification in graphs with latent variables")]
pub struct Cli {
    /// Machine-readable JSON output.
    #[arg(long, global = true)]
    pub json: bool,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads for oracle trials (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct QueryArgs {
    #[arg(long)]
    pub graph: PathBuf,
    /// Intervened variables, comma separated.
    #[arg(long = "do", value_delimiter = ',')]
    pub intervene: Vec<String>,
    /// Outcome variables, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    pub on: Vec<String>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Decide identifiability and print the estimand.
    Identify(QueryArgs),
    /// Produce a do-calculus derivation.
    Derive {
        #[command(flatten)]
        query: QueryArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Verify a derivation file.
    Check {
        #[arg(long)]
        derivation: PathBuf,
        #[arg(long, default_value_t = 5)]
        models: usize,
    },
    /// Test d-separation of X and Y given Z.
    Dsep {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        x: Vec<String>,
        #[arg(long, value_delimiter = ',', required = true)]
        y: Vec<String>,
        #[arg(long, value_delimiter = ',')]
        z: Vec<String>,
    },
    /// Observable c-components.
    Ccomp {
        #[arg(long)]
        graph: PathBuf,
    },
    /// Numerical cross-checks.
    #[command(subcommand)]
    Oracle(OracleCommand),
    /// Graphviz rendering with latent nodes dashed.
    ExportDot {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
pub enum OracleCommand {
    /// Compare the estimand with ground truth on random models.
    Verify {
        #[command(flatten)]
        query: QueryArgs,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 2)]
        arity: usize,
    },
    /// Search for two models that agree observationally but not causally.
    Witness {
        #[command(flatten)]
        query: QueryArgs,
        #[arg(long, default_value_t = DEFAULT_WITNESS_BUDGET)]
        budget: usize,
    },
}

#[derive(Debug, Default, Clone, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(code: i32, stdout: String) -> Self {
        Outcome { code, stdout, stderr: String::new() }
    }
}

/// Parses `args` (program name first) and executes the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let text = e.render().to_string();
            return if e.use_stderr() { Outcome { code, stdout: String::new(), stderr: text } } else { Outcome::ok(code, text) };
        }
    };
    match execute(&cli) {
        Ok(o) => o,
        Err(e) => Outcome { code: EXIT_ERROR, stdout: String::new(), stderr: format!("error: {e}\n") },
    }
}

pub fn execute(cli: &Cli) -> Result<Outcome> {
    match cli.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::Input(e.to_string()))?
            .install(|| dispatch(cli)),
        None => dispatch(cli),
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

/// Parses graph file contents; errors carry line numbers.
pub fn parse_graph_file(text: &str) -> Result<CausalGraph> {
    CausalGraph::parse(text)
}

fn load_graph(path: &Path) -> Result<CausalGraph> {
    parse_graph_file(&read(path)?)
}

fn load_query(q: &QueryArgs) -> Result<(CausalGraph, VarSet, VarSet)> {
    let g = load_graph(&q.graph)?;
    let (t, s) = (g.set(&q.intervene)?, g.set(&q.on)?);
    Ok((g, t, s))
}

fn to_string(v: &impl serde::Serialize) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

fn query_json(g: &CausalGraph, t: &VarSet, s: &VarSet) -> Value {
    json!({ "do": g.names_of(t), "on": g.names_of(s) })
}

fn query_text(g: &CausalGraph, t: &VarSet, s: &VarSet) -> String {
    let on = g.names_of(s).join(",").to_lowercase();
    if t.is_empty() {
        format!("P({on})")
    } else {
        format!("P({on} | do({}))", g.names_of(t).join(",").to_lowercase())
    }
}

fn not_identifiable(cli: &Cli, g: &CausalGraph, c: &VarSet, t: &VarSet) -> Outcome {
    let text = if cli.json {
        to_string(&json!({ "status": "not_identifiable", "c": g.names_of(c), "t": g.names_of(t) }))
    } else {
        format!("not identifiable: Q[{}] cannot be computed from Q[{}]\n", g.fmt_set(c), g.fmt_set(t))
    };
    Outcome::ok(EXIT_NOT_IDENTIFIABLE, text)
}

fn dispatch(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Identify(q) => identify(cli, q),
        Command::Derive { query, out } => derive(cli, query, out.as_deref()),
        Command::Check { derivation, models } => check(cli, derivation, *models),
        Command::Dsep { graph, x, y, z } => {
            let g = load_graph(graph)?;
            let (xs, ys, zs) = (g.set(x)?, g.set(y)?, g.set(z)?);
            let sep = d_separated_in(&g, &xs, &ys, &zs)?;
            let text = if cli.json {
                to_string(&json!({ "x": g.names_of(&xs), "y": g.names_of(&ys), "z": g.names_of(&zs), "separated": sep }))
            } else {
                let verdict = if sep { "d-separated" } else { "d-connected" };
                format!("{} and {} are {verdict} given {}\n", g.fmt_set(&xs), g.fmt_set(&ys), g.fmt_set(&zs))
            };
            Ok(Outcome::ok(EXIT_OK, text))
        }
        Command::Ccomp { graph } => {
            let g = load_graph(graph)?;
            let blocks: Vec<Vec<String>> = observable_blocks(&c_components(&g), &g).iter().map(|b| g.names_of(b)).collect();
            Ok(Outcome::ok(EXIT_OK, serde_json::to_string(&blocks).expect("serializable") + "\n"))
        }
        Command::Oracle(OracleCommand::Verify { query, trials, arity }) => oracle_verify(cli, query, *trials, *arity),
        Command::Oracle(OracleCommand::Witness { query, budget }) => oracle_witness(cli, query, *budget),
        Command::ExportDot { graph, out } => {
            let dot = load_graph(graph)?.to_dot();
            match out {
                Some(p) => write(p, &dot).map(|_| Outcome::ok(EXIT_OK, String::new())),
                None => Ok(Outcome::ok(EXIT_OK, dot)),
            }
        }
    }
}

fn identify(cli: &Cli, q: &QueryArgs) -> Result<Outcome> {
    let (g, t, s) = load_query(q)?;
    match causal_effect(&t, &s, &g)? {
        IdentResult::Identifiable(e) => {
            let text = if cli.json {
                to_string(&json!({
                    "status": "identifiable",
                    "query": query_json(&g, &t, &s),
                    "estimand": e.to_json(&g),
                    "pretty": e.pretty(&g),
                }))
            } else {
                format!("identifiable\n{} = {}\n", query_text(&g, &t, &s), e.pretty(&g))
            };
            Ok(Outcome::ok(EXIT_OK, text))
        }
        IdentResult::NotIdentifiable { c, t: tt } => Ok(not_identifiable(cli, &g, &c, &tt)),
    }
}

fn derive(cli: &Cli, q: &QueryArgs, out: Option<&Path>) -> Result<Outcome> {
    let (g, t, s) = load_query(q)?;
    let d = match derive_effect(&t, &s, &g)? {
        DeriveResult::Derived(d) => d,
        DeriveResult::NotIdentifiable { c, t: tt } => return Ok(not_identifiable(cli, &g, &c, &tt)),
    };
    let json = to_string(&d.to_json());
    if let Some(p) = out {
        write(p, &json)?;
    }
    let text = if cli.json {
        json
    } else {
        format!("{}{} steps\n", d.pretty(), d.steps.len())
    };
    Ok(Outcome::ok(EXIT_OK, text))
}

fn check(cli: &Cli, path: &Path, models: usize) -> Result<Outcome> {
    let j: DerivationJson = serde_json::from_str(&read(path)?).map_err(|e| Error::Json(e.to_string()))?;
    let d = Derivation::from_json(&j)?;
    let cfg = VerifyConfig { models, seed: cli.seed, ..VerifyConfig::default() };
    Ok(match verify_derivation_with(&d, &cfg) {
        Verdict::Accept => {
            let text = if cli.json { to_string(&json!({ "verdict": "accept", "steps": d.steps.len() })) } else { "accepted\n".into() };
            Outcome::ok(EXIT_OK, text)
        }
        Verdict::Reject { step, reason } => {
            let text = if cli.json {
                to_string(&json!({ "verdict": "reject", "step": step, "reason": reason }))
            } else {
                format!("rejected at step {}: {reason}\n", step + 1)
            };
            Outcome::ok(EXIT_REJECTED, text)
        }
    })
}

fn oracle_verify(cli: &Cli, q: &QueryArgs, trials: usize, arity: usize) -> Result<Outcome> {
    let (g, t, s) = load_query(q)?;
    let e = match causal_effect(&t, &s, &g)? {
        IdentResult::Identifiable(e) => e,
        IdentResult::NotIdentifiable { c, t: tt } => return Ok(not_identifiable(cli, &g, &c, &tt)),
    };
    let domains = Domains::uniform(g.universe_len(), arity);
    let r = check_estimand_with(&e, &g, &domains, &t, &s, trials, cli.seed)?;
    let text = if cli.json {
        to_string(&json!({
            "query": query_json(&g, &t, &s),
            "trials": r.trials,
            "max_error": r.max_error,
            "mean_error": r.per_model.iter().sum::<f64>() / r.trials.max(1) as f64,
            "passed": r.passed,
        }))
    } else {
        let verdict = if r.passed { "pass" } else { "FAIL" };
        format!("{} trials, max error {:.3e}: {verdict}\n", r.trials, r.max_error)
    };
    Ok(Outcome::ok(if r.passed { EXIT_OK } else { EXIT_ERROR }, text))
}

fn oracle_witness(cli: &Cli, q: &QueryArgs, budget: usize) -> Result<Outcome> {
    let (g, t, s) = load_query(q)?;
    let w = witness_search(&g, &t, &s, budget, cli.seed)?;
    let text = match (&w, cli.json) {
        (Some(w), true) => to_string(&json!({
            "found": true,
            "observational_gap": w.observational_gap,
            "causal_gap": w.causal_gap,
            "m1": w.m1.to_json(),
            "m2": w.m2.to_json(),
        })),
        (None, true) => to_string(&json!({ "found": false, "budget": budget })),
        (Some(w), false) => format!(
            "witness found: observational gap {:.3e}, causal gap {:.3e}\n",
            w.observational_gap, w.causal_gap
        ),
        (None, false) => format!("no witness within {budget} evaluations\n"),
    };
    Ok(Outcome::ok(EXIT_OK, text))
}
