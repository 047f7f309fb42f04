//! Command-line front end for the realizability library.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use realizability::auxpda::{self, ConfigGraphOptions, Machine, SimOutcome};
use realizability::closure::{
    closure_auto, dump_matrices, transitive_closure, transitive_closure_observed, ClosureMethod, ClosureResult,
};
use realizability::format::{parse_digraph, parse_instance, write_digraph, write_instance, DigraphFile, InstanceFile};
use realizability::instance::{initialize_capped, prune_unmatched, validate, Instance, ProblemVariant, DEFAULT_MAX_N};
use realizability::oracle::{balanced_walk_dp, enumerate_walk_check, saturate_realizable, BalanceMode, DEFAULT_WORK_BUDGET};
use realizability::pram::{connect_with, ConnectOptions};
use realizability::reductions::{self, gen_random_digraph, gen_random_graph, gen_theta_n2, ReductionCert};
use realizability::Error;

#[derive(Parser, Debug)]
#[command(name = "realizability", version, about = "Graph realizability: closures, oracles, reductions and simulators")]
struct Cli {
    /// Exit with status 1 when a decision command answers NO.
    #[arg(long, global = true)]
    exit_status: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check an instance file against its variant's constraints.
    Validate { file: PathBuf },
    /// Print the initial matrices of an instance.
    Init {
        file: PathBuf,
        #[command(flatten)]
        load: LoadOpts,
    },
    /// Compute ⟨Υ*, E*⟩ by repeated squaring.
    Closure {
        file: PathBuf,
        #[arg(long)]
        method: Option<ClosureMethod>,
        /// Print every set bit of E* and Υ* instead of a summary.
        #[arg(long)]
        dump: bool,
        #[arg(long)]
        max_iters: Option<usize>,
        #[command(flatten)]
        load: LoadOpts,
    },
    /// Decide whether t is realizable from s.
    Query {
        file: PathBuf,
        #[command(flatten)]
        pair: PairOpts,
        #[arg(long)]
        method: Option<ClosureMethod>,
        #[command(flatten)]
        load: LoadOpts,
    },
    /// Decide balanced (or positive balanced) s–t connectivity in a digraph.
    Balanced {
        file: PathBuf,
        #[command(flatten)]
        pair: PairOpts,
        /// Longest walk considered.
        #[arg(long)]
        bound: Option<usize>,
        /// Require every prefix to have at least as many forward as backward edges.
        #[arg(long)]
        positive: bool,
        /// Target excess of forward over backward edges.
        #[arg(long, default_value_t = 0)]
        k: usize,
        /// Decide through the realizability reduction and closure instead of the walk DP.
        #[arg(long)]
        via_closure: bool,
    },
    /// Brute-force oracles, or a full closure-versus-oracle cross-check.
    Oracle {
        file: PathBuf,
        /// Compare every applicable closure method with the saturation oracle on all pairs.
        #[arg(long)]
        crosscheck: bool,
        /// Enumerate walks of at most this many edges instead of saturating.
        #[arg(long)]
        walks: Option<usize>,
        #[command(flatten)]
        pair: PairOpts,
        #[command(flatten)]
        load: LoadOpts,
    },
    /// Apply a reduction and print the resulting file.
    Reduce {
        kind: ReductionKind,
        file: PathBuf,
        #[command(flatten)]
        pair: PairOpts,
        /// Path length for k-balanced.
        #[arg(long, default_value_t = 0)]
        k: usize,
        /// Write the traceability certificate (JSON lines) here.
        #[arg(long)]
        cert: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate instances and digraphs.
    Gen {
        family: Family,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 2)]
        k: u32,
        #[arg(long, default_value = "logcfl")]
        variant: ProblemVariant,
        #[arg(long, default_value_t = 0.3)]
        density: f64,
    },
    /// Run the hook-and-contract simulation.
    Pram {
        file: PathBuf,
        /// Print the metrics record as JSON.
        #[arg(long)]
        stats: bool,
        #[arg(long)]
        dump: bool,
        #[arg(long)]
        max_outer: Option<usize>,
        #[arg(long)]
        max_jump_rounds: Option<usize>,
        #[command(flatten)]
        load: LoadOpts,
    },
    /// Auxiliary pushdown automata.
    Auxpda {
        #[command(subcommand)]
        action: AuxAction,
    },
    /// Time the squaring iterations on a generated instance (CSV).
    Bench {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 2)]
        k: u32,
        #[arg(long, default_value = "logcfl")]
        variant: ProblemVariant,
        #[arg(long, default_value_t = 0.3)]
        density: f64,
        #[arg(long)]
        method: Option<ClosureMethod>,
    },
}

#[derive(Subcommand, Debug)]
enum AuxAction {
    /// Print the configuration graph as an instance file.
    Graph {
        machine: PathBuf,
        #[arg(long, default_value = "")]
        input: String,
        /// Keep every reachable configuration, not just those on a start-to-halt walk.
        #[arg(long)]
        all_configs: bool,
        #[arg(long)]
        budget: Option<u128>,
    },
    /// Simulate the machine directly.
    Run {
        machine: PathBuf,
        #[arg(long, default_value = "")]
        input: String,
        #[arg(long, default_value_t = 100_000)]
        steps: usize,
        #[arg(long, default_value_t = 64)]
        stack: usize,
    },
    /// Decide acceptance through the configuration graph and its closure.
    Decide {
        machine: PathBuf,
        #[arg(long, default_value = "")]
        input: String,
        #[arg(long)]
        budget: Option<u128>,
    },
    /// Print the symmetric closure of a machine as JSON.
    Symmetrize { machine: PathBuf },
}

#[derive(Args, Debug, Clone)]
struct LoadOpts {
    /// Largest accepted vertex count.
    #[arg(long, default_value_t = DEFAULT_MAX_N)]
    max_n: usize,
    /// Drop push and pop edges that can never be matched.
    #[arg(long)]
    prune: bool,
}

#[derive(Args, Debug, Clone, Default)]
struct PairOpts {
    #[arg(long)]
    s: Option<usize>,
    #[arg(long)]
    t: Option<usize>,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum ReductionKind {
    /// Instance to instance without ε edges.
    EpsElim,
    /// Digraph to single-label realizability.
    Stconn,
    /// Digraph to single-label symmetric-gap realizability.
    Balanced,
    /// Digraph to single-label symmetric realizability.
    Positive,
    /// Single-label symmetric-gap instance back to a digraph.
    ToBalanced,
    /// k-balanced digraph question to a balanced one.
    KBalanced,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Family {
    /// Random labeled instance.
    Random,
    /// Random digraph.
    Digraph,
    /// Digraph whose only balanced walks have quadratic length.
    Theta,
}

/// How a successful command ended.
enum Outcome {
    Done,
    Decision(bool),
}

struct Failure {
    code: u8,
    msg: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure { code: if e.is_budget() { 3 } else { 2 }, msg: e.to_string() }
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure { code: 2, msg: msg.into() }
}

type CmdResult = Result<Outcome, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn load_file(path: &Path) -> Result<InstanceFile, Failure> {
    Ok(parse_instance(&read(path)?)?)
}

fn load(path: &Path, opts: &LoadOpts) -> Result<(Instance, Option<(usize, usize)>), Failure> {
    let f = load_file(path)?;
    let graph = if opts.prune { prune_unmatched(&f.graph) } else { f.graph };
    Ok((initialize_capped(&graph, f.variant, opts.max_n)?, f.pair))
}

fn load_digraph(path: &Path) -> Result<DigraphFile, Failure> {
    Ok(parse_digraph(&read(path)?)?)
}

fn load_machine(path: &Path) -> Result<Machine, Failure> {
    Ok(Machine::from_json(&read(path)?)?)
}

fn resolve_pair(opts: &PairOpts, file: Option<(usize, usize)>) -> Result<(usize, usize), Failure> {
    match (opts.s, opts.t, file) {
        (Some(s), Some(t), _) => Ok((s, t)),
        (s, t, Some((fs, ft))) => Ok((s.unwrap_or(fs), t.unwrap_or(ft))),
        _ => Err(usage("no vertex pair: pass --s and --t or put `s= t=` in the file")),
    }
}

fn run_closure(inst: &Instance, method: Option<ClosureMethod>, max_iters: Option<usize>) -> Result<ClosureResult, Failure> {
    Ok(match method {
        Some(m) => transitive_closure(inst, m, max_iters)?,
        None if max_iters.is_none() => closure_auto(inst)?,
        None => {
            let m = if inst.variant.gap_symmetric() { ClosureMethod::SymmetricSquare } else { ClosureMethod::Square };
            transitive_closure(inst, m, max_iters)?
        }
    })
}

fn decision(answer: bool, detail: Option<String>) -> CmdResult {
    println!("{}", if answer { "YES" } else { "NO" });
    if let Some(d) = detail {
        println!("{d}");
    }
    Ok(Outcome::Decision(answer))
}

fn cmd_validate(file: &Path) -> CmdResult {
    let f = load_file(file)?;
    let report = validate(&f.graph, f.variant);
    if report.is_ok() {
        println!("VALID");
        Ok(Outcome::Done)
    } else {
        println!("INVALID");
        Err(usage(report.to_string()))
    }
}

fn cmd_closure(file: &Path, method: Option<ClosureMethod>, dump: bool, max_iters: Option<usize>, load_opts: &LoadOpts) -> CmdResult {
    let (inst, _) = load(file, load_opts)?;
    let r = run_closure(&inst, method, max_iters)?;
    if dump {
        print!("{}", r.dump());
    } else {
        println!(
            "method={} iterations={} e_ones={} gap_ones={}",
            r.method,
            r.iterations,
            r.e_star.count_ones(),
            r.gap_star.count_ones()
        );
    }
    Ok(Outcome::Done)
}

fn cmd_balanced(file: &Path, pair: &PairOpts, bound: Option<usize>, positive: bool, k: usize, via_closure: bool) -> CmdResult {
    let f = load_digraph(file)?;
    let (s, t) = resolve_pair(pair, f.pair)?;
    let d = &f.digraph;
    if s >= d.n || t >= d.n {
        return Err(usage(format!("pair ({s},{t}) out of range for n = {}", d.n)));
    }
    if via_closure {
        let (d2, s2, t2, _) = reductions::k_balanced_reduce(d, s, t, k)?;
        let (inst, _) = if positive {
            reductions::positive_balanced_to_1s(&d2, s2, t2)?
        } else {
            reductions::balanced_to_1sgs(&d2, s2, t2)?
        };
        let r = closure_auto(&inst)?;
        return decision(r.query(s2, t2)?, None);
    }
    let bound = bound.unwrap_or(4 * d.n * d.n);
    let mode = match (positive, k) {
        (false, 0) => BalanceMode::Balanced,
        (true, 0) => BalanceMode::Positive,
        (false, k) => BalanceMode::KBalanced(k),
        (true, k) => BalanceMode::PositiveKBalanced(k),
    };
    match balanced_walk_dp(d, s, t, bound, mode) {
        Some(len) => decision(true, Some(format!("length={len}"))),
        None => decision(false, None),
    }
}

fn cmd_oracle(file: &Path, crosscheck: bool, walks: Option<usize>, pair: &PairOpts, load_opts: &LoadOpts) -> CmdResult {
    let (inst, fpair) = load(file, load_opts)?;
    if crosscheck {
        let oracle = saturate_realizable(&inst);
        let n = inst.n();
        let mut methods = vec![ClosureMethod::Square, ClosureMethod::SimpleSquare];
        if inst.variant.gap_symmetric() {
            methods.push(ClosureMethod::SymmetricSquare);
        }
        let mut report = String::new();
        for m in methods {
            let r = transitive_closure(&inst, m, None)?;
            for a in 0..n {
                for b in 0..n {
                    if r.e_star.get(a, b) != oracle.get(a, b) {
                        let _ = writeln!(report, "MISMATCH method={m} pair=({a},{b}) closure={} oracle={}", r.e_star.get(a, b), oracle.get(a, b));
                    }
                }
            }
        }
        if report.is_empty() {
            println!("OK pairs={}", n * n);
            return Ok(Outcome::Decision(true));
        }
        print!("{report}");
        return Ok(Outcome::Decision(false));
    }
    let (s, t) = resolve_pair(pair, fpair)?;
    if s >= inst.n() || t >= inst.n() {
        return Err(usage(format!("pair ({s},{t}) out of range for n = {}", inst.n())));
    }
    let answer = match walks {
        Some(len) => enumerate_walk_check(&inst, s, t, len, inst.variant.grammar(), DEFAULT_WORK_BUDGET)?,
        None => saturate_realizable(&inst).get(s, t),
    };
    decision(answer, None)
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), Failure> {
    match out {
        Some(p) => write_file(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_reduce(kind: ReductionKind, file: &Path, pair: &PairOpts, k: usize, cert_path: Option<&Path>, out: Option<&Path>) -> CmdResult {
    let (text, cert): (String, ReductionCert) = match kind {
        ReductionKind::EpsElim => {
            let f = load_file(file)?;
            let inst = initialize_capped(&f.graph, f.variant, reductions::REDUCTION_MAX_N)?;
            let (res, cert) = reductions::eliminate_epsilon(&inst)?;
            (write_instance(&res.graph, res.variant, f.pair), cert)
        }
        ReductionKind::Stconn | ReductionKind::Balanced | ReductionKind::Positive => {
            let f = load_digraph(file)?;
            let (s, t) = resolve_pair(pair, f.pair)?;
            let (res, cert) = match kind {
                ReductionKind::Stconn => reductions::stconn_to_1logcfl(&f.digraph, s, t)?,
                ReductionKind::Balanced => reductions::balanced_to_1sgs(&f.digraph, s, t)?,
                _ => reductions::positive_balanced_to_1s(&f.digraph, s, t)?,
            };
            (write_instance(&res.graph, res.variant, Some((s, t))), cert)
        }
        ReductionKind::ToBalanced => {
            let f = load_file(file)?;
            let (s, t) = resolve_pair(pair, f.pair)?;
            let inst = initialize_capped(&f.graph, f.variant, reductions::REDUCTION_MAX_N)?;
            let (d, cert) = reductions::onesgs_to_balanced(&inst, s, t)?;
            (write_digraph(&d, Some((s, t))), cert)
        }
        ReductionKind::KBalanced => {
            let f = load_digraph(file)?;
            let (s, t) = resolve_pair(pair, f.pair)?;
            let (d, s2, t2, cert) = reductions::k_balanced_reduce(&f.digraph, s, t, k)?;
            (write_digraph(&d, Some((s2, t2))), cert)
        }
    };
    emit(&text, out)?;
    if let Some(p) = cert_path {
        write_file(p, &cert.to_jsonl())?;
    }
    Ok(Outcome::Done)
}

fn cmd_gen(family: Family, n: usize, seed: Option<u64>, k: u32, variant: ProblemVariant, density: f64) -> CmdResult {
    let need_seed = || seed.ok_or_else(|| usage("this family is random: pass --seed"));
    let text = match family {
        Family::Random => {
            let g = gen_random_graph(n, k, variant, density, need_seed()?)?;
            write_instance(&g, variant, None)
        }
        Family::Digraph => write_digraph(&gen_random_digraph(n, density, need_seed()?)?, None),
        Family::Theta => {
            let fam = gen_theta_n2(n)?;
            write_digraph(&fam.digraph, Some((fam.s, fam.t)))
        }
    };
    print!("{text}");
    Ok(Outcome::Done)
}

fn cmd_pram(file: &Path, stats: bool, dump: bool, opts: ConnectOptions, load_opts: &LoadOpts) -> CmdResult {
    let (inst, pair) = load(file, load_opts)?;
    let (r, metrics) = connect_with(&inst, &opts)?;
    if stats {
        println!("{}", serde_json::to_string(&metrics).expect("metrics serialize"));
    }
    if dump {
        print!("{}", dump_matrices(&r.e_star, &r.gap_star));
    }
    if !stats && !dump {
        if let Some((s, t)) = pair {
            return decision(r.query(s, t)?, None);
        }
        println!(
            "outerIterations={} pointerJumpSteps={} e_ones={} gap_ones={}",
            metrics.outer_iterations,
            metrics.pointer_jump_steps,
            r.e_star.count_ones(),
            r.gap_star.count_ones()
        );
    }
    Ok(Outcome::Done)
}

fn graph_opts(budget: Option<u128>, prune: bool) -> ConfigGraphOptions {
    let mut opts = ConfigGraphOptions { prune, ..Default::default() };
    if let Some(b) = budget {
        opts.budget = b;
    }
    opts
}

fn cmd_auxpda(action: &AuxAction) -> CmdResult {
    match action {
        AuxAction::Graph { machine, input, all_configs, budget } => {
            let m = load_machine(machine)?;
            let cg = auxpda::config_graph_with(&m, input, &graph_opts(*budget, !all_configs))?;
            print!("{}", write_instance(&cg.instance.graph, cg.instance.variant, Some((cg.s, cg.t))));
            Ok(Outcome::Done)
        }
        AuxAction::Run { machine, input, steps, stack } => {
            let m = load_machine(machine)?;
            match auxpda::direct_simulate(&m, input, *steps, *stack)? {
                SimOutcome::Accept { steps } => {
                    println!("ACCEPT steps={steps}");
                    Ok(Outcome::Decision(true))
                }
                SimOutcome::Reject => {
                    println!("REJECT");
                    Ok(Outcome::Decision(false))
                }
                SimOutcome::Budget => {
                    println!("BUDGET");
                    Err(Failure { code: 3, msg: "simulation bounds reached without a verdict".into() })
                }
            }
        }
        AuxAction::Decide { machine, input, budget } => {
            let m = load_machine(machine)?;
            let cg = auxpda::config_graph_with(&m, input, &graph_opts(*budget, true))?;
            let r = closure_auto(&cg.instance)?;
            decision(r.query(cg.s, cg.t)?, None)
        }
        AuxAction::Symmetrize { machine } => {
            let m = load_machine(machine)?;
            println!("{}", auxpda::symmetric_closure(&m).to_json());
            Ok(Outcome::Done)
        }
    }
}

fn cmd_bench(n: usize, seed: u64, k: u32, variant: ProblemVariant, density: f64, method: Option<ClosureMethod>) -> CmdResult {
    let g = gen_random_graph(n, k, variant, density, seed)?;
    let inst = initialize_capped(&g, variant, reductions::REDUCTION_MAX_N)?;
    let method = method.unwrap_or(if variant.gap_symmetric() { ClosureMethod::SymmetricSquare } else { ClosureMethod::Square });
    println!("iteration,elapsed_ms,e_ones,gap_ones");
    let start = Instant::now();
    let mut last = start;
    transitive_closure_observed(&inst, method, None, |it, m| {
        let now = Instant::now();
        println!("{it},{:.3},{},{}", (now - last).as_secs_f64() * 1e3, m.e.count_ones(), m.gap.count_ones());
        last = now;
    })?;
    Ok(Outcome::Done)
}

fn dispatch(cmd: &Command) -> CmdResult {
    match cmd {
        Command::Validate { file } => cmd_validate(file),
        Command::Init { file, load: l } => {
            let (inst, _) = load(file, l)?;
            print!("{}", dump_matrices(&inst.e, &inst.gap));
            Ok(Outcome::Done)
        }
        Command::Closure { file, method, dump, max_iters, load: l } => cmd_closure(file, *method, *dump, *max_iters, l),
        Command::Query { file, pair, method, load: l } => {
            let (inst, fpair) = load(file, l)?;
            let (s, t) = resolve_pair(pair, fpair)?;
            let r = run_closure(&inst, *method, None)?;
            decision(r.query(s, t)?, None)
        }
        Command::Balanced { file, pair, bound, positive, k, via_closure } => {
            cmd_balanced(file, pair, *bound, *positive, *k, *via_closure)
        }
        Command::Oracle { file, crosscheck, walks, pair, load: l } => cmd_oracle(file, *crosscheck, *walks, pair, l),
        Command::Reduce { kind, file, pair, k, cert, out } => cmd_reduce(*kind, file, pair, *k, cert.as_deref(), out.as_deref()),
        Command::Gen { family, n, seed, k, variant, density } => cmd_gen(*family, *n, *seed, *k, *variant, *density),
        Command::Pram { file, stats, dump, max_outer, max_jump_rounds, load: l } => cmd_pram(
            file,
            *stats,
            *dump,
            ConnectOptions { max_outer: *max_outer, max_jump_rounds: *max_jump_rounds },
            l,
        ),
        Command::Auxpda { action } => cmd_auxpda(action),
        Command::Bench { n, seed, k, variant, density, method } => cmd_bench(*n, *seed, *k, *variant, *density, *method),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli.command) {
        Ok(Outcome::Decision(false)) if cli.exit_status => ExitCode::from(1),
        Ok(_) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
