//! Trace-driven experiment runner: algorithm dispatch, per-run audits,
//! oracle bounds, CSV rows, and a worker pool for benchmark matrices.
//!
//! Every run is replayed: the raw recolor events from the step reports
//! must re-derive the ledger's total cost exactly and end at the
//! algorithm's final coloring, so cost accounting can never drift from
//! the colors actually committed. The wall-time column is the only
//! non-deterministic output; determinism checks compare rows with it
//! masked.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::adversary::{random_bipartite_sequence, random_delta_sequence};
use crate::audit::{verify_reports, StepReport};
use crate::coloring::CostLedger;
use crate::delta::{DeltaPolicy, DeltaState};
use crate::follow::FollowGreedy;
use crate::greedy::GreedyRecoloring;
use crate::instance::{Instance, Model, Request};
use crate::oracle;
use crate::ratio::Ratio;
use crate::trace;
use crate::{uniform_index, Color, Error, Result, Vertex, Weight};

/// Which algorithm a run drives.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Alg {
    /// Phase-based greedy for the fully dynamic two-cluster model.
    Greedy2,
    /// Estimate-guided online two-cluster algorithm with delegation.
    Follow,
    /// Deterministic policy for the degree-bounded model.
    DeltaDet,
    /// Randomized policy for the degree-bounded model.
    DeltaRand,
}

impl Alg {
    pub fn tag(&self) -> &'static str {
        match self {
            Alg::Greedy2 => "greedy2",
            Alg::Follow => "follow",
            Alg::DeltaDet => "delta-det",
            Alg::DeltaRand => "delta-rand",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Alg> {
        match tag {
            "greedy2" => Some(Alg::Greedy2),
            "follow" => Some(Alg::Follow),
            "delta-det" => Some(Alg::DeltaDet),
            "delta-rand" => Some(Alg::DeltaRand),
            _ => None,
        }
    }

    /// The model this algorithm's default benchmark instances use.
    pub fn default_model(&self) -> Model {
        match self {
            Alg::Greedy2 => Model::FullyDynamic2,
            Alg::Follow => Model::Online2,
            Alg::DeltaDet | Alg::DeltaRand => Model::Delta,
        }
    }
}

/// Knobs for a single run.
#[derive(Debug, Clone, Copy)]
pub struct RunOptions {
    /// Audit the full algorithm state every this many steps (0 = only at
    /// the end). The event replay always happens.
    pub audit_every: usize,
    /// Attach oracle lower/upper bounds to the result. Oracles that do not
    /// apply (wrong model, out of scale) leave their column empty.
    pub oracles: bool,
}

impl Default for RunOptions {
    fn default() -> RunOptions {
        RunOptions { audit_every: 0, oracles: true }
    }
}

/// Everything measured about one `(instance, sequence, algorithm, seed)`
/// run. `ratio = cost / max(lb, 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub alg: Alg,
    pub n: usize,
    pub eps: Ratio,
    pub seed: u64,
    pub cost: Weight,
    pub lb: Weight,
    pub ub: Option<Weight>,
    pub phases: u64,
    pub rebalances: u64,
    pub ms: u128,
}

impl RunResult {
    pub fn csv_header() -> &'static str {
        "alg,n,eps,seed,cost,lb,ub,ratio,phases,rebalances,ms"
    }

    pub fn ratio(&self) -> f64 {
        self.cost as f64 / oracle::ratio_denominator(self.lb) as f64
    }

    pub fn csv_row(&self) -> String {
        format!("{},{}", self.csv_row_masked(), self.ms)
    }

    /// CSV row without the wall-time column; two runs of the same
    /// `(trace, algorithm, seed)` must agree on this string exactly.
    pub fn csv_row_masked(&self) -> String {
        let ub = self.ub.map(|x| x.to_string()).unwrap_or_default();
        format!(
            "{},{},{}/{},{},{},{},{},{:.4},{},{}",
            self.alg.tag(),
            self.n,
            self.eps.num(),
            self.eps.den(),
            self.seed,
            self.cost,
            self.lb,
            ub,
            self.ratio(),
            self.phases,
            self.rebalances,
        )
    }
}

fn audit_err(r: std::result::Result<(), String>) -> Result<()> {
    r.map_err(Error::Audit)
}

/// Drives one algorithm over one request sequence, audits it, replays its
/// event log, and (optionally) attaches oracle bounds.
pub fn run_trace(
    inst: &Instance,
    requests: &[Request],
    alg: Alg,
    seed: u64,
    opts: RunOptions,
) -> Result<RunResult> {
    let started = std::time::Instant::now();
    let mut ledger = CostLedger::new();
    let mut reports: Vec<StepReport> = Vec::with_capacity(requests.len());
    let audit_due = |t: usize| opts.audit_every != 0 && (t + 1) % opts.audit_every == 0;

    let (final_colors, gm_edges): (Vec<Color>, Vec<(Vertex, Vertex)>) = match alg {
        Alg::Greedy2 => {
            let mut g = GreedyRecoloring::new(inst, &mut ledger)?;
            for req in requests {
                reports.push(g.process_request(*req, &mut ledger)?);
                if audit_due(req.t) {
                    audit_err(g.audit_consistent())?;
                }
            }
            audit_err(g.audit_consistent())?;
            (g.coloring().colors().to_vec(), Vec::new())
        }
        Alg::Follow => {
            let mut f = FollowGreedy::new(inst)?;
            for req in requests {
                reports.push(f.process_request(*req, &mut ledger)?);
                if audit_due(req.t) {
                    audit_err(f.audit_consistent())?;
                    audit_err(f.audit_deviation())?;
                }
            }
            audit_err(f.audit_consistent())?;
            (f.coloring().colors().to_vec(), Vec::new())
        }
        Alg::DeltaDet | Alg::DeltaRand => {
            let policy =
                if alg == Alg::DeltaDet { DeltaPolicy::Deterministic } else { DeltaPolicy::Randomized };
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut d = DeltaState::new(inst)?;
            for req in requests {
                reports.push(d.process_request(*req, policy, &mut rng, &mut ledger)?);
                if audit_due(req.t) {
                    // Randomized rebuilds only promise capacity with high
                    // probability; properness and bookkeeping stay exact.
                    audit_err(d.audit_consistent(alg == Alg::DeltaDet))?;
                }
            }
            audit_err(d.audit_consistent(alg == Alg::DeltaDet))?;
            (d.coloring().colors().to_vec(), d.gm_edges().to_vec())
        }
    };

    replay_check(inst, &reports, &final_colors, ledger.total_cost)?;

    let (lb, ub) = if opts.oracles {
        oracle_bounds(inst, requests, alg, &ledger, &gm_edges)
    } else {
        (0, None)
    };

    Ok(RunResult {
        alg,
        n: inst.n,
        eps: inst.eps,
        seed,
        cost: ledger.total_cost,
        lb,
        ub,
        phases: ledger.phase_count,
        rebalances: ledger.rebalance_calls,
        ms: started.elapsed().as_millis(),
    })
}

/// Replays the event log from `c0`: every event's `from` color must match
/// the replayed state, the summed event weights must equal the ledger
/// total, and the replay must end at the algorithm's final coloring.
fn replay_check(
    inst: &Instance,
    reports: &[StepReport],
    final_colors: &[Color],
    ledger_total: Weight,
) -> Result<()> {
    audit_err(verify_reports(&inst.w, reports, ledger_total))?;
    let mut c = inst.c0.clone();
    for rep in reports {
        for ev in &rep.recolors {
            if c[ev.v as usize] != ev.from {
                return Err(Error::Audit(format!(
                    "step {}: event says vertex {} moves from color {}, replay has {}",
                    rep.t, ev.v, ev.from, c[ev.v as usize]
                )));
            }
            c[ev.v as usize] = ev.to;
        }
    }
    if c != final_colors {
        return Err(Error::Audit("replayed coloring differs from the final coloring".to_string()));
    }
    Ok(())
}

/// Per-algorithm oracle attachment. Anything out of scale or inapplicable
/// degrades to `lb = 0` / `ub = None` rather than failing the run.
fn oracle_bounds(
    inst: &Instance,
    requests: &[Request],
    alg: Alg,
    ledger: &CostLedger,
    gm_edges: &[(Vertex, Vertex)],
) -> (Weight, Option<Weight>) {
    let pairs: Vec<(Vertex, Vertex)> = requests.iter().map(|r| (r.u, r.v)).collect();
    match alg {
        Alg::Greedy2 => {
            let lb = oracle::phase_lower_bound(ledger).value;
            let ub = oracle::opt_fully_dynamic_bruteforce(inst, &pairs).ok().map(|r| r.value);
            (lb, ub)
        }
        Alg::Follow => match oracle::opt_2recoloring(inst, &pairs) {
            // Exact optimum for the monotone model: lb and ub coincide.
            Ok(rep) => (rep.value, Some(rep.value)),
            Err(_) => (0, None),
        },
        Alg::DeltaDet | Alg::DeltaRand => {
            let lb = oracle::min_vertex_cover(gm_edges).map(|r| r.value).unwrap_or(0);
            let ub = oracle::delta_opt_upper(inst, &pairs).ok().map(|r| r.value);
            (lb, ub)
        }
    }
}

// ---------------------------------------------------------------------------
// Benchmark matrix.
// ---------------------------------------------------------------------------

/// One line of a benchmark matrix: which algorithm at which scale.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MatrixEntry {
    pub alg: Alg,
    pub n: usize,
    pub eps: Ratio,
    pub seed: u64,
    /// Request count to generate.
    pub len: usize,
    /// Color count for the degree-bounded model (ignored otherwise).
    pub delta: Color,
}

/// Parses a matrix file: whitespace-separated `alg n eps seed len [delta]`
/// per line; `#` starts a comment; blank lines are skipped. `delta`
/// defaults to 10.
pub fn parse_matrix(text: &str) -> Result<Vec<MatrixEntry>> {
    let mut entries = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let tok: Vec<&str> = line.split_whitespace().collect();
        if tok.len() != 5 && tok.len() != 6 {
            return Err(Error::Parse {
                line: lineno,
                msg: format!("expected `alg n eps seed len [delta]`, found {} tokens", tok.len()),
            });
        }
        let parse = |what: &str, s: &str| -> Result<u64> {
            s.parse().map_err(|_| Error::Parse { line: lineno, msg: format!("invalid {what} `{s}`") })
        };
        let alg = Alg::from_tag(tok[0])
            .ok_or_else(|| Error::Parse { line: lineno, msg: format!("unknown algorithm `{}`", tok[0]) })?;
        let (p_s, q_s) = tok[2].split_once('/').ok_or_else(|| Error::Parse {
            line: lineno,
            msg: format!("epsilon `{}` must be of the form p/q", tok[2]),
        })?;
        entries.push(MatrixEntry {
            alg,
            n: parse("vertex count", tok[1])? as usize,
            eps: Ratio::new(parse("epsilon numerator", p_s)?, parse("epsilon denominator", q_s)?),
            seed: parse("seed", tok[3])?,
            len: parse("request count", tok[4])? as usize,
            delta: if tok.len() == 6 { parse("delta", tok[5])? as Color } else { 10 },
        });
    }
    Ok(entries)
}

/// Builds the default benchmark workload for a matrix entry: a seeded
/// random sequence suited to the algorithm's model (arbitrary edges for
/// the fully dynamic model, hidden-bipartition edges for the monotone
/// model, degree-capped edges for the degree-bounded model).
pub fn default_workload(entry: &MatrixEntry) -> Result<(Instance, Vec<Request>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(entry.seed);
    let (inst, pairs) = match entry.alg {
        Alg::Greedy2 => {
            let inst = Instance::unit_two_cluster(Model::FullyDynamic2, entry.n, entry.eps)?;
            let mut pairs = Vec::with_capacity(entry.len);
            while pairs.len() < entry.len {
                let u = uniform_index(&mut rng, entry.n) as Vertex;
                let v = uniform_index(&mut rng, entry.n) as Vertex;
                if u != v {
                    pairs.push((u, v));
                }
            }
            (inst, pairs)
        }
        Alg::Follow => {
            let inst = Instance::unit_two_cluster(Model::Online2, entry.n, entry.eps)?;
            let pairs = random_bipartite_sequence(entry.n, entry.len, &mut rng);
            (inst, pairs)
        }
        Alg::DeltaDet | Alg::DeltaRand => {
            let inst = Instance::delta_uniform(entry.n, entry.delta, entry.eps)?;
            let pairs = random_delta_sequence(&inst, entry.len, &mut rng);
            (inst, pairs)
        }
    };
    let requests = pairs.iter().enumerate().map(|(t, &(u, v))| Request::new(u, v, t)).collect();
    Ok((inst, requests))
}

/// Worker count for matrix fan-out: the `RECOLOR_WORKERS` environment
/// variable, else the machine's available parallelism.
pub fn worker_count() -> usize {
    std::env::var("RECOLOR_WORKERS")
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
        .filter(|&w| w > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |p| p.get()))
}

/// Runs every matrix entry, fanning out across `workers` threads. Results
/// come back in entry order regardless of scheduling; the first error (in
/// entry order) wins.
pub fn run_matrix(entries: &[MatrixEntry], workers: usize) -> Result<Vec<RunResult>> {
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<Result<RunResult>>>> = Mutex::new(vec![None; entries.len()]);
    std::thread::scope(|scope| {
        for _ in 0..workers.max(1).min(entries.len().max(1)) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= entries.len() {
                    break;
                }
                let outcome = default_workload(&entries[i]).and_then(|(inst, reqs)| {
                    run_trace(&inst, &reqs, entries[i].alg, entries[i].seed, RunOptions::default())
                });
                slots.lock().unwrap()[i] = Some(outcome);
            });
        }
    });
    slots
        .into_inner()
        .unwrap()
        .into_iter()
        .map(|slot| slot.expect("every entry visited"))
        .collect()
}

/// Renders results as a CSV document with header.
pub fn to_csv(results: &[RunResult]) -> String {
    let mut out = String::from(RunResult::csv_header());
    out.push('\n');
    for r in results {
        out.push_str(&r.csv_row());
        out.push('\n');
    }
    out
}

/// Convenience wrapper: parse a trace file's text and run it.
pub fn run_trace_text(text: &str, alg: Alg, seed: u64, opts: RunOptions) -> Result<RunResult> {
    let (inst, requests) = trace::read_trace(text)?;
    run_trace(&inst, &requests, alg, seed, opts)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_trace_runs_at_zero_cost() {
        let inst = Instance::unit_two_cluster(Model::FullyDynamic2, 16, Ratio::new(1, 2)).unwrap();
        let res = run_trace(&inst, &[], Alg::Greedy2, 0, RunOptions::default()).unwrap();
        assert_eq!(res.cost, 0);
        assert_eq!(res.lb, 0);
        assert!((res.ratio() - 0.0).abs() < 1e-12);
    }

    #[test]
    fn csv_row_shape_and_masking() {
        let res = RunResult {
            alg: Alg::Follow,
            n: 16,
            eps: Ratio::new(1, 2),
            seed: 7,
            cost: 12,
            lb: 4,
            ub: Some(4),
            phases: 0,
            rebalances: 0,
            ms: 33,
        };
        assert_eq!(res.csv_row_masked(), "follow,16,1/2,7,12,4,4,3.0000,0,0");
        assert_eq!(res.csv_row(), "follow,16,1/2,7,12,4,4,3.0000,0,0,33");
        assert_eq!(
            RunResult::csv_header().split(',').count(),
            res.csv_row().split(',').count()
        );
    }

    #[test]
    fn all_algorithms_replay_cleanly_on_default_workloads() {
        let cases = [
            MatrixEntry { alg: Alg::Greedy2, n: 32, eps: Ratio::new(1, 2), seed: 3, len: 120, delta: 0 },
            MatrixEntry { alg: Alg::Follow, n: 32, eps: Ratio::new(1, 2), seed: 4, len: 60, delta: 0 },
            MatrixEntry { alg: Alg::DeltaDet, n: 60, eps: Ratio::new(1, 2), seed: 5, len: 80, delta: 6 },
            MatrixEntry { alg: Alg::DeltaRand, n: 60, eps: Ratio::new(1, 2), seed: 6, len: 80, delta: 6 },
        ];
        for case in cases {
            let (inst, reqs) = default_workload(&case).unwrap();
            let opts = RunOptions { audit_every: 7, oracles: true };
            let res = run_trace(&inst, &reqs, case.alg, case.seed, opts).unwrap();
            assert_eq!(res.n, case.n, "alg {}", case.alg.tag());
        }
    }

    #[test]
    fn identical_runs_give_identical_masked_rows() {
        let entry =
            MatrixEntry { alg: Alg::DeltaRand, n: 60, eps: Ratio::new(1, 2), seed: 11, len: 80, delta: 6 };
        let (inst, reqs) = default_workload(&entry).unwrap();
        let a = run_trace(&inst, &reqs, entry.alg, entry.seed, RunOptions::default()).unwrap();
        let b = run_trace(&inst, &reqs, entry.alg, entry.seed, RunOptions::default()).unwrap();
        assert_eq!(a.csv_row_masked(), b.csv_row_masked());
    }

    #[test]
    fn matrix_parsing_round_trips_and_rejects_garbage() {
        let text = "# comment\n\ngreedy2 32 1/2 3 120\ndelta-det 60 1/2 5 80 6\n";
        let entries = parse_matrix(text).unwrap();
        assert_eq!(entries.len(), 2);
        assert_eq!(entries[0].alg, Alg::Greedy2);
        assert_eq!(entries[1].delta, 6);
        assert!(matches!(parse_matrix("nope 1 2 3 4\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_matrix("greedy2 32 0.5 3 120\n"), Err(Error::Parse { .. })));
    }

    #[test]
    fn matrix_fanout_matches_serial_execution() {
        let entries = parse_matrix(
            "greedy2 32 1/2 3 100\nfollow 32 1/2 4 50\ndelta-det 60 1/2 5 70 6\ndelta-rand 60 1/2 6 70 6\n",
        )
        .unwrap();
        let serial = run_matrix(&entries, 1).unwrap();
        let parallel = run_matrix(&entries, 4).unwrap();
        let mask = |rs: &[RunResult]| rs.iter().map(|r| r.csv_row_masked()).collect::<Vec<_>>();
        assert_eq!(mask(&serial), mask(&parallel));
        assert_eq!(serial.len(), 4);
    }

    #[test]
    fn run_trace_text_wires_the_parser_in() {
        let inst = Instance::unit_two_cluster(Model::FullyDynamic2, 16, Ratio::new(1, 2)).unwrap();
        let reqs = vec![Request::new(0, 2, 0)];
        let text = trace::write_trace(&inst, &reqs);
        let res = run_trace_text(&text, Alg::Greedy2, 0, RunOptions::default()).unwrap();
        assert!(res.cost <= 1, "a single mono edge costs at most one unit flip");
    }
}
