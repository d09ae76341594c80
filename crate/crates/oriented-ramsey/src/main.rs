//! Thin command-line front end. All logic lives in the library; this
//! file parses arguments, moves bytes between files and stdio, and maps
//! outcomes to exit codes:
//!
//!   0  success (found / certified / computed)
//!   1  definitive negative (no copy, refuted, bound not reached)
//!   2  usage or malformed input
//!   3  a budget ran out before a definitive answer
//!
//! Every run consumes exactly one `--seed`; anything random inside
//! derives its own stream from it by hashing a subcommand label and a
//! trial index, so equal invocations are bit-for-bit reproducible.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use oriented_ramsey::codec;
use oriented_ramsey::coloring::{Color, ColoredTournament};
use oriented_ramsey::embed::{exact_embed, EmbedError};
use oriented_ramsey::experiment::{run_scaling, to_csv, to_json, ColoringKind, ScalingConfig};
use oriented_ramsey::machinery::SolverConfig;
use oriented_ramsey::oracle::{oriented_ramsey_number, OracleError, RamseyResult};
use oriented_ramsey::pseudo::{check_exhaustive, check_sampled, PseudoParams, PseudoVerdict};
use oriented_ramsey::rng::derive_seed;
use oriented_ramsey::solver::find_monochromatic_tree;
use oriented_ramsey::split::{core_split, dpl, in_out_split, path_split, tree_split, Subtree};
use oriented_ramsey::tournament::Tournament;
use oriented_ramsey::tree::OrientedTree;

#[derive(Parser)]
#[command(
    name = "oriented-ramsey",
    version,
    about = "Two-coloured tournaments: generators, splits, embeddings, solvers",
    long_about = "Generate tournaments and colourings, decompose oriented trees, check \
                  pseudorandomness, embed trees, and run scaling experiments.\n\n\
                  Determinism: each subcommand takes one --seed and derives every internal \
                  random stream from it by hashing the subcommand label and a trial index, \
                  so identical invocations produce identical bytes (timestamps aside)."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a tournament and write it in TOUR form.
    Gen(GenArgs),
    /// Colour a tournament (given or generated) and write CTOUR.
    Color(ColorArgs),
    /// Test a tournament for (epsilon, sigma)-pseudorandomness.
    CheckPseudo(CheckPseudoArgs),
    /// Decompose an oriented tree and print the parts as JSON.
    Split(SplitArgs),
    /// Exhaustive tree embedding into a coloured tournament.
    Embed(EmbedArgs),
    /// Run the strategy ladder for a monochromatic copy of a tree.
    Solve(SolveArgs),
    /// Smallest order forcing a monochromatic copy in every 2-colouring.
    Ramsey(RamseyArgs),
    /// Batched measurements over grids of hosts.
    #[command(subcommand)]
    Experiment(ExperimentCommand),
}

#[derive(Args)]
struct GenArgs {
    /// Number of vertices.
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Generate the transitive tournament instead of a random one.
    #[arg(long)]
    transitive: bool,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ColorArgs {
    /// Host tournament in TOUR form; generated randomly when absent.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Order of the generated host (required without --input).
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// random | interval | block
    #[arg(long, default_value = "random")]
    coloring: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CheckPseudoArgs {
    /// TOUR or CTOUR file (the colouring is ignored).
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value_t = 0.25)]
    epsilon: f64,
    #[arg(long, default_value_t = 4.0)]
    sigma: f64,
    /// Sampled pair trials.
    #[arg(long, default_value_t = 10_000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Check every qualifying pair instead of sampling, within the
    /// node budget.
    #[arg(long)]
    exhaustive: bool,
    #[arg(long, default_value_t = 50_000_000)]
    budget_nodes: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SplitArgs {
    /// Tree in OTREE form.
    #[arg(long)]
    tree: PathBuf,
    /// tree | path | inout | core | dpl
    #[arg(long, default_value = "tree")]
    mode: String,
    #[arg(long, default_value_t = 1.0 / 6.0)]
    alpha: f64,
    /// Growth exponent multiplier for tree mode.
    #[arg(long, default_value_t = 2.0)]
    c: f64,
    /// Core threshold divisor; defaults to ceil(m^(1/6)).
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EmbedArgs {
    /// Host in CTOUR form.
    #[arg(long)]
    input: PathBuf,
    /// Pattern in OTREE form.
    #[arg(long)]
    tree: PathBuf,
    /// Restrict to one colour class; red then blue tried when absent.
    #[arg(long)]
    color: Option<Color>,
    #[arg(long, default_value_t = 10_000_000)]
    budget_nodes: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SolveArgs {
    /// Host in CTOUR form.
    #[arg(long)]
    input: PathBuf,
    /// Pattern in OTREE form.
    #[arg(long)]
    tree: PathBuf,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    sigma: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Node budget for the final exhaustive rung.
    #[arg(long)]
    budget_nodes: Option<u64>,
    /// Include the per-strategy trace in the output.
    #[arg(long)]
    trace: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RamseyArgs {
    /// Tree in OTREE form.
    #[arg(long)]
    tree: PathBuf,
    /// Largest host order to try.
    #[arg(long)]
    max_n: usize,
    /// Colouring budget across the whole climb.
    #[arg(long, default_value_t = u64::MAX)]
    budget_nodes: u64,
    /// Skip isomorphic hosts via canonical keys.
    #[arg(long)]
    dedup: bool,
    /// json for the full result; default prints the number alone.
    #[arg(long)]
    format: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum ExperimentCommand {
    /// Sweep host orders, measure monochromatic paths, probe the solver.
    Scaling(ScalingArgs),
}

#[derive(Args)]
struct ScalingArgs {
    /// Comma-separated host orders, e.g. 256,512,1024.
    #[arg(long)]
    grid: String,
    /// Trials per grid point.
    #[arg(long, default_value_t = 20)]
    seeds: u64,
    /// random | interval | block
    #[arg(long, default_value = "random")]
    coloring: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Record real wall times (gives up bit-identical reruns).
    #[arg(long)]
    times: bool,
    /// json | csv (stdout only; --out always writes both).
    #[arg(long, default_value = "csv")]
    format: String,
    /// Base path; writes BASE.csv and BASE.json.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            2
        }
    };
    ExitCode::from(code)
}

fn run(cli: Cli) -> Result<u8, String> {
    match cli.command {
        Command::Gen(a) => cmd_gen(a),
        Command::Color(a) => cmd_color(a),
        Command::CheckPseudo(a) => cmd_check_pseudo(a),
        Command::Split(a) => cmd_split(a),
        Command::Embed(a) => cmd_embed(a),
        Command::Solve(a) => cmd_solve(a),
        Command::Ramsey(a) => cmd_ramsey(a),
        Command::Experiment(ExperimentCommand::Scaling(a)) => cmd_scaling(a),
    }
}

fn read_text(path: &Path) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn load_tournament(path: &Path) -> Result<Tournament, String> {
    let text = read_text(path)?;
    codec::read_tournament(&text).map_err(|e| format!("{}: {e}", path.display()))
}

/// Accepts TOUR directly, or CTOUR with the colouring dropped.
fn load_any_tournament(path: &Path) -> Result<Tournament, String> {
    let text = read_text(path)?;
    if text.starts_with("CTOUR") {
        codec::read_colored(&text)
            .map(|c| c.tournament().clone())
            .map_err(|e| format!("{}: {e}", path.display()))
    } else {
        codec::read_tournament(&text).map_err(|e| format!("{}: {e}", path.display()))
    }
}

fn load_colored(path: &Path) -> Result<ColoredTournament, String> {
    let text = read_text(path)?;
    codec::read_colored(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn load_tree(path: &Path) -> Result<OrientedTree, String> {
    let text = read_text(path)?;
    codec::read_tree(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), String> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| format!("{}: {e}", path.display())),
        None => {
            let mut stdout = io::stdout().lock();
            let mut r = stdout.write_all(text.as_bytes());
            if r.is_ok() && !text.ends_with('\n') {
                r = stdout.write_all(b"\n");
            }
            match r {
                Ok(()) => Ok(()),
                // Downstream closed the pipe (e.g. `| head`); not an error.
                Err(e) if e.kind() == io::ErrorKind::BrokenPipe => Ok(()),
                Err(e) => Err(e.to_string()),
            }
        }
    }
}

fn cmd_gen(a: GenArgs) -> Result<u8, String> {
    let t = if a.transitive {
        Tournament::transitive(a.n)
    } else {
        Tournament::random(a.n, derive_seed(a.seed, "gen", 0))
    };
    emit(&a.out, &codec::write_tournament(&t))?;
    Ok(0)
}

fn cmd_color(a: ColorArgs) -> Result<u8, String> {
    let host = match (&a.input, a.n) {
        (Some(path), _) => load_tournament(path)?,
        (None, Some(n)) => Tournament::random(n, derive_seed(a.seed, "color-host", 0)),
        (None, None) => return Err("need --input or --n".into()),
    };
    let kind = ColoringKind::parse(&a.coloring)
        .ok_or_else(|| format!("unknown coloring `{}`", a.coloring))?;
    if kind == ColoringKind::Interval && host.n() < 4 {
        return Err("interval coloring needs at least 4 vertices".into());
    }
    let colored = kind.apply(host, derive_seed(a.seed, "color-edges", 0));
    emit(&a.out, &codec::write_colored(&colored))?;
    Ok(0)
}

fn cmd_check_pseudo(a: CheckPseudoArgs) -> Result<u8, String> {
    let g = load_any_tournament(&a.input)?;
    if !(a.epsilon > 0.0 && a.epsilon < 0.5) {
        return Err("epsilon must lie in (0, 1/2)".into());
    }
    if a.sigma <= 0.0 {
        return Err("sigma must be positive".into());
    }
    let params = PseudoParams::new(a.epsilon).with_sigma(a.sigma);
    let report = if a.exhaustive {
        match check_exhaustive(&g, &params, a.budget_nodes) {
            Ok(r) => r,
            Err(e) => {
                eprintln!("error: {e}");
                return Ok(3);
            }
        }
    } else {
        check_sampled(&g, &params, a.trials, derive_seed(a.seed, "check-pseudo", 0))
    };
    let refuted = report.verdict == PseudoVerdict::Refuted;
    let text = serde_json::to_string_pretty(&report).expect("report serializes");
    emit(&a.out, &text)?;
    Ok(if refuted { 1 } else { 0 })
}

fn subtree_json(s: &Subtree) -> serde_json::Value {
    json!({ "root": s.root, "vertices": s.vertices.iter().collect::<Vec<_>>() })
}

fn cmd_split(a: SplitArgs) -> Result<u8, String> {
    let t = load_tree(&a.tree)?;
    let m = t.m();
    let value = match a.mode.as_str() {
        "tree" => {
            let s = tree_split(&t, a.c, a.alpha).map_err(|e| e.to_string())?;
            json!({
                "mode": "tree", "m": m,
                "parts": s.parts.iter().map(subtree_json).collect::<Vec<_>>(),
                "leaf_flags": s.leaf_flags,
                "part_of": s.part_of,
            })
        }
        "path" => {
            let s = path_split(&t, a.alpha).map_err(|e| e.to_string())?;
            json!({
                "mode": "path", "m": m,
                "parts": s.parts,
                "junction_flags": s.junction_flags,
                "part_of": s.part_of,
            })
        }
        "inout" => {
            let s = in_out_split(&t);
            json!({
                "mode": "inout", "m": m,
                "layers": s.layers.iter()
                    .map(|l| l.iter().map(subtree_json).collect::<Vec<_>>())
                    .collect::<Vec<_>>(),
                "layer_of": s.layer_of,
            })
        }
        "core" => {
            let k = a.k.unwrap_or_else(|| ((m as f64).powf(1.0 / 6.0).ceil() as usize).max(2));
            let s = core_split(&t, k);
            json!({
                "mode": "core", "m": m, "k": k,
                "layers": s.layers.iter()
                    .map(|l| l.iter().map(subtree_json).collect::<Vec<_>>())
                    .collect::<Vec<_>>(),
            })
        }
        "dpl" => {
            let s = dpl(&t);
            json!({
                "mode": "dpl", "m": m,
                "paths": s.paths,
                "remainder": s.remainder.iter().collect::<Vec<_>>(),
            })
        }
        other => return Err(format!("unknown split mode `{other}`")),
    };
    emit(&a.out, &serde_json::to_string_pretty(&value).expect("view serializes"))?;
    Ok(0)
}

fn cmd_embed(a: EmbedArgs) -> Result<u8, String> {
    let g = load_colored(&a.input)?;
    let t = load_tree(&a.tree)?;
    let colors: Vec<Color> = match a.color {
        Some(c) => vec![c],
        None => vec![Color::Red, Color::Blue],
    };
    let mut budget_hit = false;
    for c in colors {
        match exact_embed(&g, &t, Some(c), a.budget_nodes) {
            Ok(Some(emb)) => {
                let text = serde_json::to_string_pretty(&emb).expect("embedding serializes");
                emit(&a.out, &text)?;
                return Ok(0);
            }
            Ok(None) => {}
            Err(EmbedError::Indeterminate { budget }) => {
                eprintln!("{c}: budget of {budget} nodes exhausted");
                budget_hit = true;
            }
            Err(e) => return Err(e.to_string()),
        }
    }
    if budget_hit {
        Ok(3)
    } else {
        eprintln!("no monochromatic copy");
        Ok(1)
    }
}

fn cmd_solve(a: SolveArgs) -> Result<u8, String> {
    let g = load_colored(&a.input)?;
    let t = load_tree(&a.tree)?;
    let mut cfg = SolverConfig::for_tree(t.m());
    if let Some(e) = a.epsilon {
        cfg.epsilon = e;
    }
    if let Some(s) = a.sigma {
        cfg.sigma = s;
    }
    if let Some(al) = a.alpha {
        cfg.alpha = al;
    }
    if let Some(b) = a.budget_nodes {
        cfg.exact_budget = b;
    }
    cfg.seed = derive_seed(a.seed, "solve", 0);
    let mut report = find_monochromatic_tree(&g, &t, &cfg);
    if !a.trace {
        report.trace.clear();
    }
    let found = report.found();
    let text = serde_json::to_string_pretty(&report).expect("report serializes");
    emit(&a.out, &text)?;
    Ok(if found { 0 } else { 1 })
}

fn cmd_ramsey(a: RamseyArgs) -> Result<u8, String> {
    let t = load_tree(&a.tree)?;
    let result = match oriented_ramsey_number(&t, a.max_n, a.budget_nodes, a.dedup) {
        Ok(r) => r,
        Err(OracleError::Indeterminate { budget }) => {
            eprintln!("budget of {budget} colourings exhausted");
            return Ok(3);
        }
        Err(e) => return Err(e.to_string()),
    };
    let json_format = a.format.as_deref() == Some("json");
    match result {
        RamseyResult::Exact { value, tournaments_checked } => {
            let text = if json_format {
                serde_json::to_string_pretty(&json!({
                    "exact": value,
                    "tournaments_checked": tournaments_checked,
                }))
                .unwrap()
            } else {
                value.to_string()
            };
            emit(&a.out, &text)?;
            Ok(0)
        }
        RamseyResult::AtLeast { bound, budget_hit, tournaments_checked, .. } => {
            let text = if json_format {
                serde_json::to_string_pretty(&json!({
                    "at_least": bound,
                    "budget_hit": budget_hit,
                    "tournaments_checked": tournaments_checked,
                }))
                .unwrap()
            } else {
                format!(">= {bound}")
            };
            emit(&a.out, &text)?;
            Ok(if budget_hit { 3 } else { 1 })
        }
    }
}

fn cmd_scaling(a: ScalingArgs) -> Result<u8, String> {
    let grid: Vec<usize> = a
        .grid
        .split(',')
        .map(|p| p.trim().parse::<usize>().map_err(|_| format!("bad grid entry `{p}`")))
        .collect::<Result<_, _>>()?;
    if grid.is_empty() {
        return Err("empty grid".into());
    }
    if a.seeds == 0 {
        return Err("need at least one trial per grid point".into());
    }
    let kind = ColoringKind::parse(&a.coloring)
        .ok_or_else(|| format!("unknown coloring `{}`", a.coloring))?;
    if kind == ColoringKind::Interval {
        if let Some(&n) = grid.iter().find(|&&n| n < 4) {
            return Err(format!("interval coloring needs n >= 4, grid has {n}"));
        }
    }
    let mut cfg = ScalingConfig::new(grid, a.seeds, kind, a.seed);
    cfg.record_times = a.times;
    let report = run_scaling(&cfg);
    match &a.out {
        Some(base) => {
            let csv_path = base.with_extension("csv");
            let json_path = base.with_extension("json");
            fs::write(&csv_path, to_csv(&report))
                .map_err(|e| format!("{}: {e}", csv_path.display()))?;
            fs::write(&json_path, to_json(&report))
                .map_err(|e| format!("{}: {e}", json_path.display()))?;
            println!("wrote {} and {}", csv_path.display(), json_path.display());
        }
        None => match a.format.as_str() {
            "csv" => print!("{}", to_csv(&report)),
            "json" => println!("{}", to_json(&report)),
            other => return Err(format!("unknown format `{other}`")),
        },
    }
    Ok(0)
}
