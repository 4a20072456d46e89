//! Command-line front end. Exit codes: 0 success, 1 verification failure or
//! contradicted claim, 2 usage or input error, 3 budget exhausted.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::constructions::{lemma_set, parse_set_spec, Family};
use crate::error::{Error, Result};
use crate::experiments::{run_suite, to_csv, to_json_lines, to_text, ExperimentReport, RunConfig, Suite, Verdict};
use crate::graph::{all_pairs_distances, GpParams, Graph};
use crate::resolution::{build_constraints, verify_resolving_set, Verdict as SetVerdict};
use crate::solver::{bound_report, solve_exact, BoundReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "sdim", version, about = "Strong metric dimension of graphs and generalized Petersen graphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write the edge list of GP(n,k).
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        /// Output file (stdout when absent).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compute a minimum strong resolving set.
    Sdim {
        #[command(flatten)]
        source: GraphSource,
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check whether a vertex set is a strong resolving set.
    Verify {
        #[command(flatten)]
        source: GraphSource,
        /// Comma-separated labels (u3, v7) or ids, or lemma:<4k+2|4k|4k+1>.
        #[arg(long)]
        set: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Diametral and MMD cover lower bounds and the greedy upper bound.
    Bounds {
        #[command(flatten)]
        source: GraphSource,
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Export the covering model in LP format.
    Lp {
        #[command(flatten)]
        source: GraphSource,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a reproduction suite.
    Reproduce {
        /// table4, thm-4k2, thm-4k, cor-4k1, hyp-4k3 or gp-n1.
        suite: String,
        /// Inclusive k range such as 1..6 (family suites).
        #[arg(long, value_parser = parse_range)]
        k: Option<RangeInclusive<usize>>,
        /// Inclusive n range such as 3..10 (gp-n1).
        #[arg(long, value_parser = parse_range)]
        n: Option<RangeInclusive<usize>>,
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Directory receiving <suite>.jsonl and <suite>.csv.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct GraphSource {
    /// Generalized Petersen graph, as n,k.
    #[arg(long, value_parser = parse_gp)]
    gp: Option<GpParams>,
    /// Edge-list file.
    #[arg(long)]
    file: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Seconds per solver call.
    #[arg(long, env = "SDIM_BUDGET_SECS", default_value_t = 600.0)]
    budget: f64,
    /// Worker threads (0 = all cores).
    #[arg(long, default_value_t = 0)]
    workers: usize,
    /// Include wall times in JSON output.
    #[arg(long)]
    timings: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

fn parse_gp(s: &str) -> std::result::Result<GpParams, String> {
    let (n, k) = s.split_once(',').ok_or("expected n,k")?;
    let n = n.trim().parse().map_err(|_| format!("bad n `{n}`"))?;
    let k = k.trim().parse().map_err(|_| format!("bad k `{k}`"))?;
    GpParams::new(n, k).map_err(|e| e.to_string())
}

/// `a..b` (inclusive) or a single value.
pub fn parse_range(s: &str) -> std::result::Result<RangeInclusive<usize>, String> {
    let num = |t: &str| t.trim().parse::<usize>().map_err(|_| format!("bad number `{t}`"));
    let (a, b) = match s.split_once("..") {
        Some((a, b)) => (num(a)?, num(b.trim_start_matches('='))?),
        None => (num(s)?, num(s)?),
    };
    if a > b {
        return Err(format!("empty range {s}"));
    }
    Ok(a..=b)
}

impl RunArgs {
    fn budget(&self) -> std::result::Result<Duration, String> {
        Duration::try_from_secs_f64(self.budget).map_err(|_| format!("bad budget {}", self.budget))
    }

    fn config(&self) -> std::result::Result<RunConfig, String> {
        Ok(RunConfig { budget: self.budget()?, workers: self.workers, timings: self.timings })
    }
}

impl GraphSource {
    fn load(&self) -> Result<Graph> {
        match (&self.gp, &self.file) {
            (Some(p), _) => Ok(Graph::generalized_petersen(*p)),
            (None, Some(path)) => Graph::parse_edge_list(&fs::read_to_string(path)?),
            (None, None) => unreachable!("clap enforces one graph source"),
        }
    }
}

/// Key order is the declaration order.
#[derive(Debug, Serialize)]
struct SolveJson {
    n: usize,
    k: Option<usize>,
    optimum: Option<usize>,
    basis: Vec<String>,
    proven: bool,
    lb: usize,
    ub: usize,
    nodes: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    millis: Option<u64>,
}

#[derive(Debug, Serialize)]
struct VerifyJson {
    ok: bool,
    unresolved: Option<[String; 2]>,
}

/// `n` and `k` for GP graphs, vertex count and no `k` otherwise.
fn graph_dims(g: &Graph) -> (usize, Option<usize>) {
    match g.gp_params() {
        Some(p) => (p.n, Some(p.k)),
        None => (g.n_vertices(), None),
    }
}

fn emit(text: &str, out: Option<&Path>, stdout: &mut dyn Write) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text)?,
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(())
}

/// Verified construction size for GP(n,2) graphs of a family order.
fn construction_bound(g: &Graph, cs: &crate::resolution::ConstraintSystem) -> Option<usize> {
    let p = g.gp_params().filter(|p| p.k == 2)?;
    Family::ALL
        .into_iter()
        .filter_map(|f| {
            let k = (f.min_k()..=p.n).find(|&k| f.order(k) == p.n)?;
            let set = lemma_set(f, k).ok()?;
            verify_resolving_set(cs, &set.vertices).is_ok().then_some(set.vertices.len())
        })
        .min()
}

fn set_global_workers(workers: usize) {
    if workers > 0 {
        // a second call in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(workers).build_global();
    }
}

fn cmd_gen(n: usize, k: usize, out: Option<&Path>, stdout: &mut dyn Write) -> Result<i32> {
    let g = Graph::generalized_petersen(GpParams::new(n, k)?);
    emit(&g.to_edge_list(), out, stdout)?;
    Ok(EXIT_OK)
}

fn cmd_sdim(source: &GraphSource, run: &RunArgs, format: Format, out: Option<&Path>, stdout: &mut dyn Write) -> Result<i32> {
    let budget = run.budget().map_err(Error::BadLabel)?;
    set_global_workers(run.workers);
    let g = source.load()?;
    let cs = build_constraints(&all_pairs_distances(&g)?);
    let r = solve_exact(&cs, budget);
    let (n, k) = graph_dims(&g);
    let basis: Vec<String> = r.basis.iter().map(|v| g.vertex_name(v)).collect();
    let text = match format {
        Format::Json => {
            let json = SolveJson {
                n,
                k,
                optimum: r.optimum,
                basis,
                proven: r.proven,
                lb: r.lower_bound,
                ub: r.upper_bound(),
                nodes: r.nodes_explored,
                millis: run.timings.then_some(r.wall_time.as_millis() as u64),
            };
            serde_json::to_string(&json)? + "\n"
        }
        Format::Csv => format!(
            "n,k,optimum,lb,ub,proven,nodes\n{n},{},{},{},{},{},{}\n",
            k.map(|k| k.to_string()).unwrap_or_default(),
            r.optimum.map(|v| v.to_string()).unwrap_or_default(),
            r.lower_bound,
            r.upper_bound(),
            r.proven,
            r.nodes_explored
        ),
        Format::Text => {
            let head = match r.optimum {
                Some(v) => format!("sdim = {v} (proven)"),
                None => format!("sdim in [{}, {}] (budget exhausted)", r.lower_bound, r.upper_bound()),
            };
            format!(
                "{head}\nbasis: {}\nnodes: {}  time: {} ms\n",
                basis.join(" "),
                r.nodes_explored,
                r.wall_time.as_millis()
            )
        }
    };
    emit(&text, out, stdout)?;
    Ok(if r.proven { EXIT_OK } else { EXIT_BUDGET })
}

fn cmd_verify(source: &GraphSource, spec: &str, format: Format, stdout: &mut dyn Write) -> Result<i32> {
    let g = source.load()?;
    let set = parse_set_spec(&g, spec)?;
    let cs = build_constraints(&all_pairs_distances(&g)?);
    let unresolved = match verify_resolving_set(&cs, &set) {
        SetVerdict::Ok => None,
        SetVerdict::Unresolved { u, v } => Some([g.vertex_name(u), g.vertex_name(v)]),
    };
    let ok = unresolved.is_none();
    let text = match format {
        Format::Json => serde_json::to_string(&VerifyJson { ok, unresolved })? + "\n",
        Format::Csv => match &unresolved {
            None => "ok,u,v\ntrue,,\n".to_string(),
            Some([u, v]) => format!("ok,u,v\nfalse,{u},{v}\n"),
        },
        Format::Text => match &unresolved {
            None => format!("ok ({} vertices)\n", set.len()),
            Some([u, v]) => format!("unresolved pair ({u}, {v})\n"),
        },
    };
    stdout.write_all(text.as_bytes())?;
    Ok(if ok { EXIT_OK } else { EXIT_FAILED })
}

fn bounds_text(b: &BoundReport, format: Format) -> Result<String> {
    let cub = b.construction_ub.map(|v| v.to_string());
    Ok(match format {
        Format::Json => serde_json::to_string(b)? + "\n",
        Format::Csv => format!(
            "diametral_lb,mmd_cover_lb,mmd_exact,greedy_ub,construction_ub\n{},{},{},{},{}\n",
            b.diametral_lb,
            b.mmd_cover_lb,
            b.mmd_exact,
            b.greedy_ub,
            cub.unwrap_or_default()
        ),
        Format::Text => format!(
            "diametral lower bound: {}\nMMD cover lower bound: {}{}\ngreedy upper bound: {}\nconstruction upper bound: {}\n",
            b.diametral_lb,
            b.mmd_cover_lb,
            if b.mmd_exact { "" } else { " (budget exhausted)" },
            b.greedy_ub,
            cub.unwrap_or_else(|| "-".into())
        ),
    })
}

fn cmd_bounds(source: &GraphSource, run: &RunArgs, format: Format, out: Option<&Path>, stdout: &mut dyn Write) -> Result<i32> {
    let budget = run.budget().map_err(Error::BadLabel)?;
    set_global_workers(run.workers);
    let g = source.load()?;
    let dm = all_pairs_distances(&g)?;
    let cs = build_constraints(&dm);
    let mut b = bound_report(&g, &dm, &cs, budget);
    b.construction_ub = construction_bound(&g, &cs);
    emit(&bounds_text(&b, format)?, out, stdout)?;
    Ok(if b.mmd_exact { EXIT_OK } else { EXIT_BUDGET })
}

fn cmd_lp(source: &GraphSource, out: Option<&Path>, stdout: &mut dyn Write) -> Result<i32> {
    let g = source.load()?;
    let cs = build_constraints(&all_pairs_distances(&g)?);
    emit(&cs.to_lp(), out, stdout)?;
    Ok(EXIT_OK)
}

/// 0 when every claim is confirmed (for hyp-4k3: when every instance was
/// settled), 3 when any instance ran out of budget, 1 otherwise.
pub fn reproduce_exit_code(suite: Suite, reports: &[ExperimentReport]) -> i32 {
    if reports.iter().any(|r| r.verdict == Verdict::Unproven) {
        return EXIT_BUDGET;
    }
    let acceptable = |v: Verdict| match suite {
        Suite::Hypothesis4k3 => true,
        _ => v == Verdict::Confirms,
    };
    if reports.iter().all(|r| acceptable(r.verdict)) {
        EXIT_OK
    } else {
        EXIT_FAILED
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_reproduce(
    suite: &str,
    k: Option<RangeInclusive<usize>>,
    n: Option<RangeInclusive<usize>>,
    run: &RunArgs,
    format: Format,
    out: Option<&Path>,
    stdout: &mut dyn Write,
) -> Result<i32> {
    let suite: Suite = suite.parse()?;
    let cfg = run.config().map_err(Error::BadLabel)?;
    let range = if suite.ranges_over_n() { n } else { k };
    let reports = run_suite(suite, range, &cfg)?;
    let jsonl = to_json_lines(&reports)?;
    let csv = to_csv(&reports);
    if let Some(dir) = out {
        fs::create_dir_all(dir)?;
        fs::write(dir.join(format!("{suite}.jsonl")), &jsonl)?;
        fs::write(dir.join(format!("{suite}.csv")), &csv)?;
    }
    let text = match format {
        Format::Json => jsonl,
        Format::Csv => csv,
        Format::Text => to_text(&reports),
    };
    stdout.write_all(text.as_bytes())?;
    Ok(reproduce_exit_code(suite, &reports))
}

fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::Invariant { .. } => EXIT_FAILED,
        _ => EXIT_USAGE,
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let rendered = e.render();
            let _ = if code == 0 {
                write!(stdout, "{rendered}")
            } else {
                write!(stderr, "{}", rendered.ansi())
            };
            return code;
        }
    };
    let outcome = match &cli.command {
        Command::Gen { n, k, out } => cmd_gen(*n, *k, out.as_deref(), stdout),
        Command::Sdim { source, run, format, out } => cmd_sdim(source, run, *format, out.as_deref(), stdout),
        Command::Verify { source, set, format } => cmd_verify(source, set, *format, stdout),
        Command::Bounds { source, run, format, out } => cmd_bounds(source, run, *format, out.as_deref(), stdout),
        Command::Lp { source, out } => cmd_lp(source, out.as_deref(), stdout),
        Command::Reproduce { suite, k, n, run, format, out } => {
            cmd_reproduce(suite, k.clone(), n.clone(), run, *format, out.as_deref(), stdout)
        }
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code_for(&e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("sdim").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn ranges() {
        assert_eq!(parse_range("1..6").unwrap(), 1..=6);
        assert_eq!(parse_range("3..=10").unwrap(), 3..=10);
        assert_eq!(parse_range("5").unwrap(), 5..=5);
        assert!(parse_range("6..1").is_err());
        assert!(parse_range("a..3").is_err());
    }

    #[test]
    fn gen_counts() {
        let (code, out, _) = run_args(&["gen", "--n", "5", "--k", "2"]);
        assert_eq!(code, 0);
        let g = Graph::parse_edge_list(&out).unwrap();
        assert_eq!((g.n_vertices(), g.n_edges()), (10, 15));
        let (code, out, _) = run_args(&["gen", "--n", "3", "--k", "1"]);
        assert_eq!(code, 0);
        assert!(out.contains("p 6 9"));
        let (code, _, err) = run_args(&["gen", "--n", "4", "--k", "2"]);
        assert_eq!(code, 2);
        assert!(err.contains("invalid GP parameters"));
    }

    #[test]
    fn sdim_petersen_json() {
        let (code, out, _) = run_args(&["sdim", "--gp", "5,2"]);
        assert_eq!(code, 0);
        assert_eq!(
            out,
            "{\"n\":5,\"k\":2,\"optimum\":8,\"basis\":[\"u0\",\"u1\",\"u2\",\"u3\",\"u4\",\"v0\",\"v2\",\"v3\"],\
             \"proven\":true,\"lb\":8,\"ub\":8,\"nodes\":15}\n"
        );
    }

    #[test]
    fn sdim_zero_budget_exits_3() {
        let (code, out, _) = run_args(&["sdim", "--gp", "27,2", "--budget", "0"]);
        assert_eq!(code, 3);
        assert!(out.contains("\"optimum\":null"));
        assert!(out.contains("\"proven\":false"));
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(run_args(&["sdim"]).0, 2);
        assert_eq!(run_args(&["sdim", "--gp", "5,2", "--file", "x"]).0, 2);
        assert_eq!(run_args(&["sdim", "--gp", "5"]).0, 2);
        assert_eq!(run_args(&["verify", "--gp", "5,2", "--set", "u9"]).0, 2);
        assert_eq!(run_args(&["reproduce", "table5"]).0, 2);
        assert_eq!(run_args(&["frobnicate"]).0, 2);
    }

    #[test]
    fn verify_reports_first_unresolved_pair() {
        let (code, out, _) = run_args(&["verify", "--gp", "5,2", "--set", "u0"]);
        assert_eq!(code, 1);
        assert!(out.starts_with("unresolved pair ("), "{out}");
        let (code, out, _) = run_args(&["verify", "--gp", "14,2", "--set", "lemma:4k2"]);
        assert_eq!((code, out.as_str()), (0, "ok (14 vertices)\n"));
        let (code, out, _) = run_args(&["verify", "--gp", "5,2", "--set", "u0,u1,u2,u3,v0,v1,v2,v3", "--format", "json"]);
        assert_eq!((code, out.as_str()), (0, "{\"ok\":true,\"unresolved\":null}\n"));
    }

    #[test]
    fn bounds_for_gp_14_2_include_the_construction() {
        let (code, out, _) = run_args(&["bounds", "--gp", "14,2"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert!(v["diametral_lb"].as_u64().unwrap() >= 14);
        assert_eq!(v["construction_ub"], 14);
    }

    #[test]
    fn reproduce_exit_codes() {
        let (code, out, _) = run_args(&["reproduce", "gp-n1", "--n", "3..5", "--format", "csv"]);
        assert_eq!(code, 0);
        assert_eq!(out.lines().count(), 4);
        let (code, _, _) = run_args(&["reproduce", "hyp-4k3", "--k", "1..2"]);
        assert_eq!(code, 0);
    }
}
