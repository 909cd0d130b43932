//! `recolor` — a command-line laboratory for capacitated online
//! recoloring: generate request traces (random or adversarial), run the
//! online algorithms over them, query the exact reference oracles, run
//! experiment matrices in parallel, and execute the acceptance suite.
//!
//! Exit codes: 0 on success, 1 for input/model errors (bad traces,
//! violated model promises, out-of-scale oracle calls), 2 for internal
//! invariant violations (capacity breaches, failed audits, failed
//! acceptance criteria).

use std::fs;
use std::io::Write as _;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use recolor_core::acceptance;
use recolor_core::adversary::{
    delegation_pressure_sequence, random_bipartite_sequence, random_delta_sequence,
    BatchAdversary, BatchStep, DeltaSetAdversary, OddCycleAdversary,
};
use recolor_core::coloring::CostLedger;
use recolor_core::delta::{DeltaPolicy, DeltaState};
use recolor_core::follow::FollowGreedy;
use recolor_core::greedy::GreedyRecoloring;
use recolor_core::instance::{Instance, Model, Request};
use recolor_core::oracle;
use recolor_core::run::{parse_matrix, run_matrix, run_trace, to_csv, Alg, RunOptions, RunResult};
use recolor_core::trace::{read_trace, write_trace};
use recolor_core::{Error, Ratio};

#[derive(Parser)]
#[command(name = "recolor", version, about = "Capacitated online recoloring laboratory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one algorithm over a trace file and print a result row.
    Run(RunArgs),
    /// Generate a trace (random or adversarial) and print it.
    Gen(GenArgs),
    /// Evaluate a reference oracle on a trace.
    Oracle(OracleArgs),
    /// Run an experiment matrix file across worker threads.
    Matrix(MatrixArgs),
    /// Run the acceptance suite (one verdict line per criterion).
    Verify(VerifyArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Algorithm: greedy2, follow, delta-det, or delta-rand.
    #[arg(long)]
    alg: String,
    /// Trace file to replay.
    #[arg(long)]
    trace: String,
    /// Seed for the randomized policies.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Audit the full state every N steps (0 audits only at the end).
    #[arg(long, default_value_t = 0)]
    audit_every: usize,
    /// Skip the oracle lower/upper bound columns.
    #[arg(long)]
    no_oracles: bool,
    /// Write the CSV here instead of stdout.
    #[arg(long)]
    out: Option<String>,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum GenVariant {
    /// Random bipartite-promise sequence (two-cluster models).
    Bipartite,
    /// Random degree-bounded sequence for the many-color model.
    Delta,
    /// Odd-cycle adversary driven live against the phase-based greedy.
    OddCycle,
    /// Pairing adversary driven live against the estimate-guided algorithm.
    Batch,
    /// Randomized pairing adversary (random endpoint choices).
    BatchRand,
    /// Working-set adversary driven live against the deterministic
    /// degree-bounded policy.
    DeltaSet,
    /// Fixed star sequence that forces the estimate-guided algorithm to
    /// delegate.
    Pressure,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_enum)]
    variant: GenVariant,
    /// Vertex count.
    #[arg(long)]
    n: usize,
    /// Request count (defaults to a variant-appropriate length).
    #[arg(long)]
    len: Option<usize>,
    /// Color count for the degree-bounded model.
    #[arg(long, default_value_t = 10)]
    delta: u32,
    /// Augmentation parameter as a fraction, e.g. 1/2.
    #[arg(long, default_value = "1/2")]
    eps: String,
    /// Seed for randomized generation.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the trace here instead of stdout.
    #[arg(long)]
    out: Option<String>,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum OracleKind {
    /// Exact optimum over balanced proper colorings of the final graph.
    Opt2,
    /// Exact sequential optimum by layered search (desk scale only).
    Sequential,
    /// Minimum vertex cover of the initially-monochromatic request edges.
    Cover,
    /// One-shot equitable upper bound for the degree-bounded model.
    OneShot,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long)]
    trace: String,
    #[arg(long, value_enum)]
    which: OracleKind,
}

#[derive(Args)]
struct MatrixArgs {
    /// Matrix file: `alg n eps seed len [delta]` per line, `#` comments.
    #[arg(long)]
    file: String,
    /// Worker threads (defaults to RECOLOR_WORKERS or the CPU count).
    #[arg(long)]
    workers: Option<usize>,
    /// Write the CSV here instead of stdout.
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Shrink trial counts for a fast smoke pass.
    #[arg(long)]
    quick: bool,
}

fn parse_eps(text: &str) -> anyhow::Result<Ratio> {
    let (p, q) = text
        .split_once('/')
        .with_context(|| format!("epsilon must look like 1/2, got {text:?}"))?;
    Ok(Ratio::new(p.trim().parse()?, q.trim().parse()?))
}

fn emit(out: &Option<String>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {path}"))?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            if !text.ends_with('\n') {
                stdout.write_all(b"\n")?;
            }
        }
    }
    Ok(())
}

fn cmd_run(args: &RunArgs) -> anyhow::Result<()> {
    let alg = Alg::from_tag(&args.alg)
        .with_context(|| format!("unknown algorithm {:?} (greedy2, follow, delta-det, delta-rand)", args.alg))?;
    let text = fs::read_to_string(&args.trace).with_context(|| format!("reading {}", args.trace))?;
    let (inst, reqs) = read_trace(&text)?;
    let opts = RunOptions { audit_every: args.audit_every, oracles: !args.no_oracles };
    let result = run_trace(&inst, &reqs, alg, args.seed, opts)?;
    emit(&args.out, &format!("{}\n{}\n", RunResult::csv_header(), result.csv_row()))
}

fn cmd_gen(args: &GenArgs) -> anyhow::Result<()> {
    let eps = parse_eps(&args.eps)?;
    let n = args.n;
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let (inst, pairs) = match args.variant {
        GenVariant::Bipartite => {
            let inst = Instance::unit_two_cluster(Model::Online2, n, eps)?;
            let pairs = random_bipartite_sequence(n, args.len.unwrap_or(3 * n), &mut rng);
            (inst, pairs)
        }
        GenVariant::Delta => {
            let inst = Instance::delta_uniform(n, args.delta, eps)?;
            let pairs = random_delta_sequence(&inst, args.len.unwrap_or(3 * n), &mut rng);
            (inst, pairs)
        }
        GenVariant::OddCycle => {
            let inst = Instance::unit_two_cluster(Model::FullyDynamic2, n, eps)?;
            let adv = OddCycleAdversary::new(n)?;
            let len = args.len.unwrap_or(adv.ell() * adv.ell());
            let mut ledger = CostLedger::new();
            let mut alg = GreedyRecoloring::new(&inst, &mut ledger)?;
            let mut pairs = Vec::with_capacity(len);
            for t in 0..len {
                let (u, v) = adv.next(alg.coloring().colors())?;
                alg.process_request(Request::new(u, v, t), &mut ledger)?;
                pairs.push((u, v));
            }
            (inst, pairs)
        }
        GenVariant::Batch | GenVariant::BatchRand => {
            let inst = Instance::unit_two_cluster(Model::Online2, n, eps)?;
            let mut adv = BatchAdversary::new(n, args.variant == GenVariant::BatchRand)?;
            let mut ledger = CostLedger::new();
            let mut alg = FollowGreedy::new(&inst)?;
            let mut pairs = Vec::new();
            loop {
                match adv.next(alg.coloring().colors(), &mut rng) {
                    BatchStep::Request { u, v } => {
                        alg.process_request(Request::new(u, v, pairs.len()), &mut ledger)?;
                        pairs.push((u, v));
                    }
                    BatchStep::BatchDone { .. } => continue,
                    BatchStep::Finished => break,
                }
            }
            (inst, pairs)
        }
        GenVariant::DeltaSet => {
            let inst = Instance::delta_uniform(n, args.delta, eps)?;
            let mut adv = DeltaSetAdversary::new(&inst)?;
            let mut state = DeltaState::new(&inst)?;
            let mut ledger = CostLedger::new();
            let len = args.len.unwrap_or(3 * n);
            let mut pairs = Vec::with_capacity(len);
            for t in 0..len {
                let (u, v) = match adv.next(state.coloring().colors()) {
                    Ok(pair) => pair,
                    Err(Error::Exhausted) => break,
                    Err(e) => return Err(e.into()),
                };
                state.process_request(
                    Request::new(u, v, t),
                    DeltaPolicy::Deterministic,
                    &mut rng,
                    &mut ledger,
                )?;
                pairs.push((u, v));
            }
            (inst, pairs)
        }
        GenVariant::Pressure => {
            let inst = Instance::unit_two_cluster(Model::Online2, n, eps)?;
            (inst, delegation_pressure_sequence(n)?)
        }
    };
    let reqs: Vec<Request> =
        pairs.into_iter().enumerate().map(|(t, (u, v))| Request::new(u, v, t)).collect();
    emit(&args.out, &write_trace(&inst, &reqs))
}

fn cmd_oracle(args: &OracleArgs) -> anyhow::Result<()> {
    let text = fs::read_to_string(&args.trace).with_context(|| format!("reading {}", args.trace))?;
    let (inst, reqs) = read_trace(&text)?;
    let pairs: Vec<_> = reqs.iter().map(|r| (r.u, r.v)).collect();
    let report = match args.which {
        OracleKind::Opt2 => oracle::opt_2recoloring(&inst, &pairs)?,
        OracleKind::Sequential => oracle::opt_fully_dynamic_bruteforce(&inst, &pairs)?,
        OracleKind::Cover => {
            let mono: Vec<_> = pairs
                .iter()
                .copied()
                .filter(|&(u, v)| inst.c0[u as usize] == inst.c0[v as usize])
                .collect();
            oracle::min_vertex_cover(&mono)?
        }
        OracleKind::OneShot => oracle::delta_opt_upper(&inst, &pairs)?,
    };
    println!("value={} method={}", report.value, report.method);
    Ok(())
}

fn cmd_matrix(args: &MatrixArgs) -> anyhow::Result<()> {
    let text = fs::read_to_string(&args.file).with_context(|| format!("reading {}", args.file))?;
    let entries = parse_matrix(&text)?;
    let workers = args.workers.unwrap_or_else(recolor_core::run::worker_count);
    let results = run_matrix(&entries, workers)?;
    emit(&args.out, &to_csv(&results))
}

fn cmd_verify(args: &VerifyArgs) -> anyhow::Result<bool> {
    let outcomes = acceptance::run_all(args.quick);
    for outcome in &outcomes {
        println!("{}", outcome.line());
    }
    Ok(outcomes.iter().all(|o| o.passed))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Run(args) => cmd_run(args),
        Command::Gen(args) => cmd_gen(args),
        Command::Oracle(args) => cmd_oracle(args),
        Command::Matrix(args) => cmd_matrix(args),
        Command::Verify(args) => match cmd_verify(args) {
            Ok(true) => Ok(()),
            Ok(false) => {
                eprintln!("acceptance criteria failed");
                return ExitCode::from(2);
            }
            Err(e) => Err(e),
        },
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            let code = e
                .downcast_ref::<Error>()
                .map(|core_err| core_err.exit_code() as u8)
                .unwrap_or(1);
            ExitCode::from(code)
        }
    }
}
