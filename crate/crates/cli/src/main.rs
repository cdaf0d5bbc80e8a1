use std::fs;
use std::path::{Path as FsPath, PathBuf};
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand};
use pathalg::cumulants::{
    b_max_diff, closed_chains, freeness_certificate, kappa_closed, kappa_mobius, moment_phi, moment_phi_filtered, BElem,
};
use pathalg::factor::{omega_factor, structure_report, FactorVerdict};
use pathalg::falg::{inner, paths_up_to, phi, t_functional};
use pathalg::gr::{tau_path, DEGREE_CAP};
use pathalg::verify::{run_suites, Config, Suite};
use pathalg::{Elem, Error, Graph, GraphSpec, Parity, Path};
use serde::Serialize;
use serde_json::{json, Value};

/// stdout writes that ignore a closed pipe (`pathalg ... | head`).
macro_rules! out {
    ($($arg:tt)*) => {{
        use std::io::Write;
        let _ = write!(std::io::stdout(), $($arg)*);
    }};
}

macro_rules! outln {
    ($($arg:tt)*) => {{
        use std::io::Write;
        let _ = writeln!(std::io::stdout(), $($arg)*);
    }};
}

#[derive(Parser)]
#[command(name = "pathalg", version, about = "Path algebras of weighted bipartite graphs")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Common {
    /// Largest deviation between routes that still counts as agreement.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,
    /// Degree or order cap; the default depends on the command.
    #[arg(long, global = true)]
    max_degree: Option<usize>,
    /// Seed for random property draws.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Replace the file's weights by the Perron-Frobenius weighting.
    #[arg(long, global = true, conflicts_with = "weights")]
    pf: bool,
    /// Raw vertex weights in file order, normalized to sum 1.
    #[arg(long, global = true, value_delimiter = ',')]
    weights: Option<Vec<f64>>,
    /// Emit one JSON object instead of a table.
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// τ of loops via the graded formula and via t∘φ.
    #[command(group(ArgGroup::new("which").required(true).args(["path_loop", "all_loops"])))]
    Trace {
        graph: PathBuf,
        /// Comma-separated vertex names, `name:k` for parallel edge k counted from 0.
        #[arg(long = "loop", value_name = "PATH")]
        path_loop: Option<String>,
        /// Every loop up to --max-len.
        #[arg(long)]
        all_loops: bool,
        #[arg(long, default_value_t = 4)]
        max_len: usize,
    },
    /// Operator-valued moments of closed chains via the full and the filtered sums.
    Moments { graph: PathBuf },
    /// Cumulants of closed chains via Möbius inversion and the closed form.
    Cumulants { graph: PathBuf },
    /// Checks that mixed cumulants vanish up to the given order.
    Freeness { graph: PathBuf },
    /// Atoms, factor parameters and, for two vertices, the factoriality verdict.
    Factor { graph: PathBuf },
    /// Gram matrix of the path basis against μ(s)μ(f) on the diagonal.
    Gram { graph: PathBuf },
    /// Runs verification suites.
    Verify {
        /// `all` or a comma-separated list of suites.
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long)]
        fast: bool,
    },
}

enum Failure {
    Input(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        Failure::Input(e.to_string())
    }
}

type Run = Result<bool, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Run {
    let c = &cli.common;
    match &cli.cmd {
        Cmd::Trace { graph, path_loop, all_loops, max_len } => {
            let g = load(graph, c)?;
            let loops = if *all_loops {
                if *max_len > DEGREE_CAP {
                    return Err(Error::DegreeCap { got: *max_len, cap: DEGREE_CAP }.into());
                }
                (0..=*max_len)
                    .flat_map(|n| (0..g.vertex_count()).flat_map(|v| g.loops(v, n)).collect::<Vec<_>>())
                    .collect()
            } else {
                vec![g.parse_path(path_loop.as_deref().unwrap_or_default())?]
            };
            trace(&g, graph, &loops, c)
        }
        Cmd::Moments { graph } => chains(&load(graph, c)?, graph, c, "moments", moment_phi, moment_phi_filtered),
        Cmd::Cumulants { graph } => chains(&load(graph, c)?, graph, c, "cumulants", kappa_mobius, kappa_closed),
        Cmd::Freeness { graph } => {
            let g = load(graph, c)?;
            let rep = freeness_certificate(&g, c.max_degree.unwrap_or(5), c.tol)?;
            if c.json {
                emit_json(json!({ "command": "freeness", "graph": graph, "report": rep, "pass": rep.pass }));
            } else {
                outln!("order <= {}: {} tuples, {} mixed", rep.max_order, rep.tuples_checked, rep.mixed_tuples);
                outln!("max mixed cumulant      {:.3e}", rep.max_mixed_cumulant);
                outln!("Mobius vs closed form   {:.3e}", rep.max_closed_form_gap);
                outln!("action vs product rule  {:.3e}", rep.max_double_gap);
                if !rep.note.is_empty() {
                    outln!("note: {}", rep.note);
                }
                for w in &rep.witnesses {
                    outln!("witness: {w}");
                }
                outln!("{}", if rep.pass { "PASS" } else { "FAIL" });
            }
            Ok(rep.pass)
        }
        Cmd::Factor { graph } => factor(&load(graph, c)?, graph, c),
        Cmd::Gram { graph } => gram(&load(graph, c)?, graph, c),
        Cmd::Verify { suite, fast } => {
            let suites = Suite::parse_selector(suite)?;
            let cfg = Config { tol: c.tol, max_degree: c.max_degree.unwrap_or(6), seed: c.seed, fast: *fast };
            let rep = run_suites(&suites, &cfg);
            if c.json {
                emit_json(serde_json::to_value(&rep).expect("report serializes"));
            } else {
                out!("{}", rep.table());
            }
            Ok(rep.pass())
        }
    }
}

/// Reads a graph file; `--weights` and `--pf` replace whatever weights it carries.
fn load(file: &FsPath, c: &Common) -> Result<Graph, Failure> {
    let text = fs::read_to_string(file).map_err(|e| Failure::Input(format!("{}: {e}", file.display())))?;
    let spec = GraphSpec::parse(&text).map_err(|e| Failure::Input(format!("{}: {e}", file.display())))?;
    if let Some(w) = &c.weights {
        return Ok(Graph::topology(&spec)?.with_weights(w)?);
    }
    if c.pf {
        return Ok(Graph::topology(&spec)?.pf_weighting()?.0);
    }
    Ok(Graph::build(&spec)?)
}

fn emit_json(v: Value) {
    outln!("{}", serde_json::to_string_pretty(&v).expect("JSON value serializes"));
}

#[derive(Serialize)]
struct TraceRow {
    path: String,
    tau: f64,
    t_phi: f64,
    diff: f64,
}

fn trace(g: &Graph, file: &FsPath, loops: &[Path], c: &Common) -> Run {
    let mut rows = Vec::new();
    for p in loops {
        let tau = tau_path(g, p)?;
        let t_phi = t_functional(g, &phi(g, &Elem::basis(p.clone())));
        rows.push(TraceRow { path: p.display(g), tau, t_phi, diff: (tau - t_phi).abs() });
    }
    let max_diff = rows.iter().map(|r| r.diff).fold(0.0, f64::max);
    let pass = max_diff < c.tol;
    if c.json {
        emit_json(json!({ "command": "trace", "graph": file, "rows": rows, "max_diff": max_diff, "pass": pass }));
    } else {
        let width = rows.iter().map(|r| r.path.len()).max().unwrap_or(4).max(4);
        outln!("{:<width$}  {:>14}  {:>14}  {:>9}", "loop", "tau", "t(phi)", "diff");
        for r in &rows {
            outln!("{:<width$}  {:>14.10}  {:>14.10}  {:>9.2e}", r.path, r.tau, r.t_phi, r.diff);
        }
        outln!("max diff {max_diff:.2e}: {}", if pass { "PASS" } else { "FAIL" });
    }
    Ok(pass)
}

fn b_entries(g: &Graph, b: &BElem) -> Vec<(String, f64)> {
    b.iter().enumerate().filter(|(_, x)| **x != 0.0).map(|(v, x)| (g.name(v).to_string(), *x)).collect()
}

fn b_display(entries: &[(String, f64)]) -> String {
    if entries.is_empty() {
        return "0".into();
    }
    entries.iter().map(|(v, x)| format!("{x:.10}*e_{v}")).collect::<Vec<_>>().join(" + ")
}

/// Both routes on every closed chain of order ≤ --max-degree (default 3).
fn chains(
    g: &Graph,
    file: &FsPath,
    c: &Common,
    what: &str,
    first: fn(&Graph, &[&Path]) -> BElem,
    second: fn(&Graph, &[&Path]) -> BElem,
) -> Run {
    let order = c.max_degree.unwrap_or(3);
    if 2 * order > DEGREE_CAP {
        return Err(Error::DegreeCap { got: 2 * order, cap: DEGREE_CAP }.into());
    }
    let mut rows = Vec::new();
    let mut max_diff = 0.0f64;
    for n in 1..=order {
        for chain in closed_chains(g, n) {
            let refs: Vec<&Path> = chain.iter().collect();
            let (a, b) = (first(g, &refs), second(g, &refs));
            let d = b_max_diff(&a, &b);
            max_diff = max_diff.max(d);
            let label = chain.iter().map(|p| p.display(g)).collect::<Vec<_>>().join(" | ");
            rows.push((label, b_entries(g, &a), d));
        }
    }
    let pass = max_diff < c.tol;
    if c.json {
        let rows: Vec<Value> = rows
            .iter()
            .map(|(chain, v, d)| {
                let value: serde_json::Map<String, Value> = v.iter().map(|(k, x)| (k.clone(), json!(x))).collect();
                json!({ "chain": chain, "value": value, "diff": d })
            })
            .collect();
        emit_json(
            json!({ "command": what, "graph": file, "max_order": order, "rows": rows, "max_diff": max_diff, "pass": pass }),
        );
    } else {
        for (chain, v, d) in &rows {
            outln!("{chain}  ->  {}  (diff {d:.2e})", b_display(v));
        }
        outln!("{} chains, max diff {max_diff:.2e}: {}", rows.len(), if pass { "PASS" } else { "FAIL" });
    }
    Ok(pass)
}

fn factor(g: &Graph, file: &FsPath, c: &Common) -> Run {
    let report = match structure_report(g) {
        Ok(r) => Some(r),
        Err(e @ (Error::Unsupported(_) | Error::Invalid(_))) => {
            eprintln!("not determined: {e}");
            None
        }
        Err(e) => return Err(e.into()),
    };
    // Two vertices joined by q edges: whether the whole algebra is a factor.
    let two_vertex = if g.vertex_count() == 2 && g.undirected_edge_count() > 0 {
        let ev = g.vertices_of(Parity::Even)[0];
        let od = g.vertices_of(Parity::Odd)[0];
        Some(match omega_factor(g.undirected_edge_count(), g.mu2(ev), g.mu2(od))? {
            FactorVerdict::Factor(d) => format!("factor: {}", d.display()),
            FactorVerdict::NotFactor(why) => format!("not a factor: {why}"),
        })
    } else {
        None
    };
    if c.json {
        emit_json(
            json!({ "command": "factor", "graph": file, "report": report, "factoriality": two_vertex, "pass": true }),
        );
    } else {
        for (v, t) in g.vertices().iter().zip(g.weights()) {
            outln!("mu^2({}) = {t:.10}", v.name);
        }
        if let Some(r) = &report {
            outln!("verdict: {}", r.verdict);
            for (v, t) in &r.atoms {
                outln!("atom at {v}: trace {t:.10}");
            }
            for n in &r.notes {
                outln!("note: {n}");
            }
        }
        if let Some(v) = &two_vertex {
            outln!("whole algebra: {v}");
        }
    }
    Ok(true)
}

/// ⟨ξ, η⟩ over paths of length ≤ --max-degree (default 4) with equal endpoints; other
/// entries vanish identically.
fn gram(g: &Graph, file: &FsPath, c: &Common) -> Run {
    let cap = c.max_degree.unwrap_or(4);
    if cap > DEGREE_CAP {
        return Err(Error::DegreeCap { got: cap, cap: DEGREE_CAP }.into());
    }
    let paths = paths_up_to(g, cap);
    let (mut max_off, mut max_diag) = (0.0f64, 0.0f64);
    let mut diag = Vec::new();
    for p in &paths {
        let x = Elem::basis(p.clone());
        for q in paths.iter().filter(|q| q.start == p.start && q.finish(g) == p.finish(g)) {
            let got = inner(g, &x, &Elem::basis(q.clone()));
            if p == q {
                let want = g.mu(p.start) * g.mu(p.finish(g));
                max_diag = max_diag.max((got - want).abs());
                diag.push((p.display(g), got, want));
            } else {
                max_off = max_off.max(got.abs());
            }
        }
    }
    let pass = max_off < c.tol && max_diag < c.tol;
    if c.json {
        let rows: Vec<Value> =
            diag.iter().map(|(p, got, want)| json!({ "path": p, "gram": got, "mu_s_mu_f": want })).collect();
        emit_json(json!({
            "command": "gram", "graph": file, "paths": paths.len(), "diagonal": rows,
            "max_diagonal_diff": max_diag, "max_off_diagonal": max_off, "pass": pass
        }));
    } else {
        let width = diag.iter().map(|d| d.0.len()).max().unwrap_or(4).max(4);
        outln!("{:<width$}  {:>14}  {:>14}", "path", "<x,x>", "mu(s)mu(f)");
        for (p, got, want) in &diag {
            outln!("{p:<width$}  {got:>14.10}  {want:>14.10}");
        }
        outln!(
            "{} paths, diagonal diff {max_diag:.2e}, off-diagonal max {max_off:.2e}: {}",
            paths.len(),
            if pass { "PASS" } else { "FAIL" }
        );
    }
    Ok(pass)
}
