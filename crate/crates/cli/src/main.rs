//! `sel`: reproducible experiments on graphs without k vertex-disjoint cycles.

mod report;

use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use thiserror::Error;

use sel_core::cycles::{has_k_disjoint_cycles_with, max_cycle_packing_with, DEFAULT_CYCLE_CAP};
use sel_core::search::{SpectralSearchOptions, DEFAULT_ENUMERATION_CAP};
use sel_core::spectral::{spectral_radius_with, PowerOptions, DEFAULT_TOL};
use sel_core::threshold::hypothesis_holds;
use sel_core::{
    canonical_form, closed_form_split_rho, compute_thresholds, edge_maximizer, erdos_posa_edge_bound,
    hypothesis_order, local_search, make_complete_split, parse_graph6, spectral_maximizer,
    split_threshold_structure, verify_lemma_bounds, write_graph6, EnumerationOptions, Graph,
    LocalSearchOptions, Objective, PackingOptions, SearchMode, SearchSpec, CANON_MAX_ORDER,
};

use report::Report;

/// Largest order for commands that build the graph explicitly.
const DENSE_MAX_ORDER: u64 = 10_000;

#[derive(Parser, Debug)]
#[command(
    name = "sel",
    version,
    about = "Spectral and extremal experiments on graphs without k disjoint cycles"
)]
struct Cli {
    /// Worker threads for parallel enumeration (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Spectral radius and Perron vector by power iteration.
    Rho(RhoArgs),
    /// Maximum vertex-disjoint cycle packing.
    Pack(PackArgs),
    /// Extremal search over graphs without K disjoint cycles.
    Search(SearchArgs),
    /// Eigenvector threshold sets and lemma checks on the complete split graph.
    Lemmas(LemmaArgs),
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false, id = "input")]
struct GraphInput {
    /// Complete split graph: N vertices, clique of size 2K-1.
    #[arg(long, num_args = 2, value_names = ["N", "K"])]
    split: Option<Vec<u64>>,
    /// Graph in graph6 format.
    #[arg(long, allow_hyphen_values = true)]
    g6: Option<String>,
}

#[derive(Args, Debug)]
struct RhoArgs {
    #[command(flatten)]
    input: GraphInput,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
}

#[derive(Args, Debug)]
struct PackArgs {
    #[arg(long, allow_hyphen_values = true)]
    g6: String,
    /// Only decide whether K disjoint cycles exist.
    #[arg(long)]
    k: Option<usize>,
    /// Chordless cycle cap before falling back to a greedy packing.
    #[arg(long, default_value_t = DEFAULT_CYCLE_CAP)]
    cycle_cap: usize,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Exhaustive,
    Local,
}

#[derive(Args, Debug)]
struct SearchArgs {
    n: usize,
    k: usize,
    /// Maximize the edge count.
    #[arg(long, conflicts_with = "spectral", required_unless_present = "spectral")]
    edges: bool,
    /// Maximize the spectral radius.
    #[arg(long)]
    spectral: bool,
    #[arg(long, value_enum, default_value_t = ModeArg::Exhaustive)]
    mode: ModeArg,
    /// Seed for shuffled restarts in local search.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Accepted-move budget for local search.
    #[arg(long, default_value_t = 10_000)]
    budget: usize,
    /// Climbs in local search; the first uses the fixed move order.
    #[arg(long, default_value_t = 4)]
    restarts: usize,
    /// Raise the exhaustive order cap (at most 10).
    #[arg(long, env = "SEL_CAP_OVERRIDE")]
    cap: Option<usize>,
    /// Allow the largest supported exhaustive order, which may take hours.
    #[arg(long)]
    accept_hours: bool,
    /// Evaluate every feasible class in spectral runs, not only edge-maximal ones.
    #[arg(long)]
    evaluate_all: bool,
}

#[derive(Args, Debug)]
struct LemmaArgs {
    n: u64,
    k: u64,
    /// Use the two-valued Perron profile instead of building the graph.
    #[arg(long)]
    analytic: bool,
}

#[derive(Debug, Error)]
enum CliError {
    #[error(transparent)]
    Core(#[from] sel_core::Error),
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Cap(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        use sel_core::Error as E;
        match self {
            CliError::Input(_) => 2,
            CliError::Cap(_) => 3,
            CliError::Core(e) => match e {
                E::InvalidParameter(_) | E::Parse { .. } | E::NotAnEdge(..) | E::Infeasible { .. } => 2,
                E::UnsupportedSize { .. } | E::CycleCapExceeded { .. } | E::NotConverged { .. } => 3,
                E::Invariant(_) => 4,
            },
        }
    }
}

/// Report payload plus the exit code to finish with.
struct Outcome {
    parameters: Value,
    results: Value,
    code: u8,
}

impl Outcome {
    fn ok(parameters: Value, results: Value) -> Self {
        Outcome {
            parameters,
            results,
            code: 0,
        }
    }
}

fn split_input(n: u64, k: u64) -> Result<(Graph, f64), CliError> {
    if k == 0 || n < 2 * k {
        return Err(CliError::Input(format!(
            "split input needs k >= 1 and n > 2k-1, got n={n} k={k}"
        )));
    }
    if n > DENSE_MAX_ORDER {
        return Err(CliError::Cap(format!(
            "dense computation is limited to n <= {DENSE_MAX_ORDER}; use `lemmas --analytic` for larger n"
        )));
    }
    let g = make_complete_split(n as usize, (2 * k - 1) as usize)?;
    Ok((g, closed_form_split_rho(n, k)?))
}

fn cmd_rho(args: &RhoArgs) -> Result<Outcome, CliError> {
    if !(args.tol > 0.0 && args.tol < 1.0) {
        return Err(CliError::Input(format!(
            "tolerance {} must lie in (0, 1)",
            args.tol
        )));
    }
    let (g, closed, parameters) = match (&args.input.split, &args.input.g6) {
        (Some(nk), _) => {
            let (n, k) = (nk[0], nk[1]);
            let (g, cf) = split_input(n, k)?;
            (g, Some(cf), json!({"split": {"n": n, "k": k}, "tol": args.tol}))
        }
        (None, Some(s)) => (parse_graph6(s)?, None, json!({"g6": s, "tol": args.tol})),
        (None, None) => unreachable!("clap requires one input"),
    };
    let p = spectral_radius_with(
        &g,
        &PowerOptions {
            tol: args.tol,
            ..Default::default()
        },
    );
    let mut results = json!({
        "n": g.order(),
        "edges": g.edge_count(),
        "rho": p.rho,
        "residual": p.residual,
        "iterations": p.iterations,
        "converged": p.converged,
        "u_star": p.u_star(),
        "component_size": p.component.len(),
    });
    if g.order() <= 100 {
        results["perron_vector"] = json!(p.x);
    }
    if let Some(cf) = closed {
        results["closed_form"] = json!(cf);
        results["delta"] = json!((p.rho - cf).abs());
    }
    let code = if p.converged { 0 } else { 3 };
    Ok(Outcome {
        parameters,
        results,
        code,
    })
}

fn cycles_json(cycles: &[Vec<usize>]) -> Value {
    json!(cycles)
}

fn cmd_pack(args: &PackArgs) -> Result<Outcome, CliError> {
    let g = parse_graph6(&args.g6)?;
    let opts = PackingOptions {
        cycle_cap: args.cycle_cap,
    };
    let parameters = json!({"g6": args.g6, "k": args.k, "cycle_cap": args.cycle_cap});
    let (results, exact) = match args.k {
        Some(k) => {
            let ans = has_k_disjoint_cycles_with(&g, k, &opts)?;
            let witness = ans.witness.as_ref().map(|w| cycles_json(&w.cycles));
            (
                json!({"n": g.order(), "k": k, "found": ans.found, "witness": witness, "exact": ans.exact}),
                ans.exact,
            )
        }
        None => {
            let p = max_cycle_packing_with(&g, &opts)?;
            (
                json!({"n": g.order(), "nu": p.nu, "witness": cycles_json(&p.witness.cycles), "exact": p.exact}),
                p.exact,
            )
        }
    };
    Ok(Outcome {
        parameters,
        results,
        code: if exact { 0 } else { 3 },
    })
}

fn cmd_search(args: &SearchArgs) -> Result<Outcome, CliError> {
    let objective = if args.spectral {
        Objective::SpectralRadius
    } else {
        Objective::Edges
    };
    let mode = match args.mode {
        ModeArg::Exhaustive => SearchMode::Exhaustive,
        ModeArg::Local => SearchMode::LocalSearch,
    };
    let cap = match (args.cap, args.accept_hours) {
        (Some(c), _) => c,
        (None, true) => CANON_MAX_ORDER,
        (None, false) => DEFAULT_ENUMERATION_CAP,
    };
    let spec = SearchSpec {
        n: args.n,
        k: args.k,
        objective,
        mode,
        seed: args.seed,
        cap,
    };
    let parameters = json!({
        "n": args.n,
        "k": args.k,
        "objective": objective,
        "mode": mode,
        "seed": args.seed,
        "cap": cap,
        "budget": args.budget,
        "restarts": args.restarts,
        "evaluate_all": args.evaluate_all,
    });
    match spec.validate() {
        Err(sel_core::Error::UnsupportedSize { n, cap }) => {
            return Err(CliError::Cap(format!(
            "exhaustive search at n={n} exceeds the cap {cap}; pass --cap {n} (at most {CANON_MAX_ORDER}), \
                 --accept-hours, or set SEL_CAP_OVERRIDE"
        )))
        }
        other => other?,
    }

    if mode == SearchMode::LocalSearch {
        let opts = LocalSearchOptions {
            budget: args.budget,
            seed: args.seed,
            restarts: args.restarts,
            objective,
        };
        let start = Graph::path(args.n)?;
        let out = local_search(&start, args.k, &opts)?;
        let mut results = serde_json::to_value(&out.record).map_err(|e| CliError::Input(e.to_string()))?;
        results["start_graph6"] = json!(write_graph6(&start));
        results["accepted_moves"] = json!(out.accepted_moves);
        results["local_optima"] = json!(out.local_optima);
        return Ok(Outcome::ok(parameters, results));
    }

    let enumeration = EnumerationOptions { cap };
    let record = match objective {
        Objective::Edges => edge_maximizer(args.n, args.k, &enumeration)?,
        Objective::SpectralRadius => spectral_maximizer(
            args.n,
            args.k,
            &SpectralSearchOptions {
                enumeration,
                evaluate_all: args.evaluate_all,
            },
        )?,
    };
    let mut results = serde_json::to_value(&record).map_err(|e| CliError::Input(e.to_string()))?;
    let (n, k) = (args.n as u64, args.k as u64);
    let split_exists = n > 2 * k - 1;
    let split_key = if split_exists {
        Some(canonical_form(&make_complete_split(args.n, 2 * args.k - 1)?)?)
    } else {
        None
    };
    let keys = record.witness_keys();
    let (predicted, matches) = match objective {
        Objective::Edges if n >= 2 * k => {
            let f = erdos_posa_edge_bound(n, k);
            (Some(json!(f)), Some(record.optimum == f as f64))
        }
        Objective::SpectralRadius if split_exists => {
            let cf = closed_form_split_rho(n, k)?;
            let close = (record.optimum - cf).abs() <= 1e-9 * cf.max(1.0);
            (Some(json!(cf)), Some(close))
        }
        _ => (None, None),
    };
    results["predicted"] = predicted.unwrap_or(Value::Null);
    results["match"] = match matches {
        Some(true) => json!("match"),
        Some(false) => json!("mismatch"),
        None => Value::Null,
    };
    results["split_graph_is_witness"] = json!(split_key.map(|s| keys.contains(&s)));
    results["split_graph_is_unique_witness"] = json!(split_key.map(|s| keys == vec![s]));
    if objective == Objective::SpectralRadius {
        results["regime"] = json!(format!(
            "empirical extension: n = {n} is below the hypothesis order {}",
            hypothesis_order(k.max(1))
        ));
    }
    Ok(Outcome::ok(parameters, results))
}

fn cmd_lemmas(args: &LemmaArgs) -> Result<Outcome, CliError> {
    let (n, k) = (args.n, args.k);
    if k == 0 || n < 2 * k {
        return Err(CliError::Input(format!(
            "lemmas need k >= 1 and n > 2k-1, got n={n} k={k}"
        )));
    }
    let parameters = json!({"n": n, "k": k, "analytic": args.analytic});
    let mut results = json!({
        "hypothesis_order": hypothesis_order(k).to_string(),
        "hypothesis_satisfied": hypothesis_holds(n, k),
    });
    if args.analytic {
        let t = split_threshold_structure(n, k)?;
        results["rho"] = json!(t.rho);
        results["independent_ratio"] = json!(t.independent_ratio);
        results["sizes"] = json!({
            "R": t.size(t.r), "R'": t.size(t.r_prime), "R''": t.size(t.r_dprime),
            "R'''": t.size(t.r_tprime), "R''''": t.size(t.r_qprime),
        });
        results["membership"] = json!({
            "R": t.r, "R'": t.r_prime, "R''": t.r_dprime, "R'''": t.r_tprime, "R''''": t.r_qprime,
        });
        results["common_neighborhood_biclique"] = json!(t.has_common_neighborhood_biclique());
        results["report"] =
            serde_json::to_value(t.lemma_report()).map_err(|e| CliError::Input(e.to_string()))?;
    } else {
        if n > DENSE_MAX_ORDER {
            return Err(CliError::Cap(format!(
                "dense threshold analysis is limited to n <= {DENSE_MAX_ORDER}; rerun with --analytic"
            )));
        }
        let (g, _) = split_input(n, k)?;
        let p = spectral_radius_with(&g, &PowerOptions::default());
        let t = compute_thresholds(&g, &p, k)?;
        results["rho"] = json!(p.rho);
        results["sizes"] = json!({
            "R": t.r.len(), "R'": t.r_prime.len(), "R''": t.r_dprime.len(),
            "R'''": t.r_tprime.len(), "R''''": t.r_qprime.len(),
        });
        results["common_neighborhood_biclique"] =
            json!(sel_core::threshold::check_common_neighborhood_kkk(&t, &g, k).is_some());
        results["report"] = serde_json::to_value(verify_lemma_bounds(&t, &g, k))
            .map_err(|e| CliError::Input(e.to_string()))?;
    }
    results["lambda"] = json!(sel_core::threshold::lambda(k));
    Ok(Outcome::ok(parameters, results))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            eprintln!("error: --jobs must be positive");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(4);
        }
    }
    let (name, outcome) = {
        let start = Instant::now();
        let (name, result) = match &cli.command {
            Command::Rho(a) => ("rho", cmd_rho(a)),
            Command::Pack(a) => ("pack", cmd_pack(a)),
            Command::Search(a) => ("search", cmd_search(a)),
            Command::Lemmas(a) => ("lemmas", cmd_lemmas(a)),
        };
        (name, result.map(|o| (o, start.elapsed().as_secs_f64())))
    };
    match outcome {
        Ok((o, secs)) => {
            print!("{}", Report::new(name, o.parameters, o.results, secs).to_json());
            if o.code == 3 {
                eprintln!("warning: result hit a resource cap and is partial");
            }
            ExitCode::from(o.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
