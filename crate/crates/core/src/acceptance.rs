//! The acceptance suite: ten pinned, property-based criteria that gate a
//! release. Each criterion returns one pass/fail line; the integration
//! test `tests/acceptance.rs` prints all ten and fails if any failed.
//!
//! The multiplicative tolerances ([`KAPPA_GREEDY`], [`KAPPA_FOLLOW`],
//! [`KAPPA_DELTA_REBALANCE`]) were pinned at first calibration with about
//! 1.25x headroom over the measured constants; they exist to catch
//! regressions of more than ~10%, not to re-derive the theory. Everything
//! else is an exact or statistical property with its own margin.

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::adversary::{
    delegation_pressure_sequence, random_bipartite_sequence, random_delta_sequence,
    BatchAdversary, BatchStep, DeltaSetAdversary, OddCycleAdversary,
};
use crate::coloring::CostLedger;
use crate::components::ComponentTracker;
use crate::delta::{DeltaPolicy, DeltaState};
use crate::equitable::equitable_coloring;
use crate::follow::FollowGreedy;
use crate::greedy::GreedyRecoloring;
use crate::instance::{Instance, Model, Request};
use crate::oracle;
use crate::ratio::Ratio;
use crate::rebalance::{rebalance_exact, rebalance_fptas};
use crate::run::{default_workload, run_trace, Alg, MatrixEntry, RunOptions};
use crate::{uniform_index, Branch, Color, Error, Result, Vertex, Weight};

/// Criterion 4 tolerance: greedy cost / (completed phases * n * log2 n)
/// never exceeds this. Calibrated 2026-08: measured maximum 0.1273 across
/// random and adversarial workloads at n in {64, 128, 256}.
pub const KAPPA_GREEDY: f64 = 0.16;
/// Criterion 5 tolerance: estimate-guided cost / (exact OPT * log2 n)
/// never exceeds this. Calibrated 2026-08: measured maximum 1.2286 across
/// batch-adversary, random, and forced-delegation workloads at n in
/// {16, 32, 64}.
pub const KAPPA_FOLLOW: f64 = 1.55;
/// Criterion 8 tolerance: deterministic degree-bounded runs invoke the
/// rebalancer at most `KAPPA_DELTA_REBALANCE * Delta` times. Calibrated
/// 2026-08: the max-residual recoloring rule kept every measured run at 0
/// rebalances; one rebalance per color is already a regression signal.
pub const KAPPA_DELTA_REBALANCE: f64 = 1.0;

/// Outcome of one acceptance criterion.
#[derive(Debug, Clone)]
pub struct CriterionOutcome {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub ms: u128,
}

impl CriterionOutcome {
    /// The one-line verdict the integration test prints.
    pub fn line(&self) -> String {
        format!(
            "{} criterion {:2} ({}): {} [{} ms]",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.detail,
            self.ms
        )
    }
}

fn judge(
    id: usize,
    name: &'static str,
    limit_ms: Option<u128>,
    body: impl FnOnce() -> Result<(bool, String)>,
) -> CriterionOutcome {
    let started = Instant::now();
    let outcome = body();
    let ms = started.elapsed().as_millis();
    match outcome {
        Ok((passed, mut detail)) => {
            let in_time = limit_ms.is_none_or(|l| ms < l);
            if !in_time {
                detail.push_str(&format!("; exceeded the {} ms budget", limit_ms.unwrap()));
            }
            CriterionOutcome { id, name, passed: passed && in_time, detail, ms }
        }
        Err(e) => CriterionOutcome { id, name, passed: false, detail: format!("errored: {e}"), ms },
    }
}

/// Runs the whole suite. `quick` shrinks trial counts for a fast smoke
/// pass; the release gate runs with `quick = false`.
pub fn run_all(quick: bool) -> Vec<CriterionOutcome> {
    vec![
        criterion_1_fptas(quick),
        criterion_2_core(quick),
        criterion_3_separation(quick),
        criterion_4_greedy_bound(quick),
        criterion_5_follow_bound(quick),
        criterion_6_oracle_cross(quick),
        criterion_7_vertex_cover(quick),
        criterion_8_delta_det(quick),
        criterion_9_delta_rand(quick),
        criterion_10_determinism(),
    ]
}

// ---------------------------------------------------------------------------
// 1. Rebalancer soundness and completeness against the exact solver.
// ---------------------------------------------------------------------------

fn criterion_1_fptas(quick: bool) -> CriterionOutcome {
    judge(1, "rebalancer-vs-exact", Some(5_000), || {
        let trials = if quick { 100 } else { 500 };
        let epsilons = [Ratio::new(1, 10), Ratio::new(3, 10), Ratio::new(1, 2)];
        let mut rng = ChaCha8Rng::seed_from_u64(0xAC01);
        let mut checked = 0u64;
        for trial in 0..trials {
            let m = 1 + uniform_index(&mut rng, 20);
            let comps: Vec<(Weight, Weight)> = (0..m)
                .map(|_| loop {
                    let a = uniform_index(&mut rng, 101) as Weight;
                    let b = uniform_index(&mut rng, 101) as Weight;
                    if a + b > 0 {
                        return (a, b);
                    }
                })
                .collect();
            let total: Weight = comps.iter().map(|&(a, b)| a + b).sum();
            // Half the targets are reachable by construction, half are
            // arbitrary (possibly infeasible).
            let target = if trial % 2 == 0 {
                comps
                    .iter()
                    .map(|&(a, b)| if uniform_index(&mut rng, 2) == 0 { a } else { b })
                    .sum()
            } else {
                uniform_index(&mut rng, total as usize + 1) as Weight
            };
            let exact = rebalance_exact(&comps, target);
            for eps in epsilons {
                let approx = rebalance_fptas(&comps, target, eps);
                if exact.is_some() && approx.is_none() {
                    return Ok((
                        false,
                        format!("trial {trial}: exact target {target} feasible, approximation returned nothing (eps {eps:?})"),
                    ));
                }
                if let Some(a) = &approx {
                    let x = a.total_on_c1;
                    if a.recount(&comps) != x {
                        return Ok((false, format!("trial {trial}: assignment recount mismatch")));
                    }
                    let cap = eps.one_plus();
                    let sound = x >= target
                        && (x as u128) * (cap.den() as u128)
                            <= (cap.num() as u128) * (target as u128);
                    if !sound {
                        return Ok((
                            false,
                            format!("trial {trial}: returned weight {x} outside [{target}, (1+eps){target}]"),
                        ));
                    }
                }
                checked += 1;
            }
        }
        Ok((true, format!("{checked} (component set, eps) cases agree with the exact solver")))
    })
}

// ---------------------------------------------------------------------------
// 2. Component tracker vs BFS; ledger vs replayer; residual recounts.
// ---------------------------------------------------------------------------

fn criterion_2_core(quick: bool) -> CriterionOutcome {
    judge(2, "core-bookkeeping", Some(10_000), || {
        let trials = if quick { 150 } else { 1000 };
        let mut rng = ChaCha8Rng::seed_from_u64(0xAC02);
        let mut greedy_runs = 0;
        for trial in 0..trials {
            let n = 2 * (4 + uniform_index(&mut rng, 61)); // even, 8..=128
            let seq = random_bipartite_sequence(n, 2 * n, &mut rng);

            // Tracker parity must be a proper 2-coloring per component, and
            // component membership must match BFS connectivity.
            let w = vec![1 as Weight; n];
            let colors: Vec<Color> = (0..n).map(|v| 1 + (v % 2) as Color).collect();
            let mut tracker = ComponentTracker::new(&w, &colors);
            for &(u, v) in &seq {
                tracker.merge(u, v);
            }
            let mut adj = vec![Vec::new(); n];
            for &(u, v) in &seq {
                adj[u as usize].push(v as usize);
                adj[v as usize].push(u as usize);
            }
            let mut comp = vec![usize::MAX; n];
            let mut count = 0;
            for s in 0..n {
                if comp[s] != usize::MAX {
                    continue;
                }
                comp[s] = count;
                let mut queue = std::collections::VecDeque::from([s]);
                while let Some(x) = queue.pop_front() {
                    for &y in &adj[x] {
                        if comp[y] == usize::MAX {
                            comp[y] = count;
                            queue.push_back(y);
                        }
                    }
                }
                count += 1;
            }
            for &(u, v) in &seq {
                let (ru, pu) = tracker.find(u);
                let (rv, pv) = tracker.find(v);
                if ru != rv || pu == pv {
                    return Ok((
                        false,
                        format!("trial {trial}: tracker disagrees with BFS on edge ({u},{v})"),
                    ));
                }
            }
            for a in 0..n as Vertex {
                for b in (a + 1)..n as Vertex {
                    let same_bfs = comp[a as usize] == comp[b as usize];
                    let same_tracker = tracker.find(a).0 == tracker.find(b).0;
                    if same_bfs != same_tracker {
                        return Ok((
                            false,
                            format!("trial {trial}: membership of ({a},{b}) differs from BFS"),
                        ));
                    }
                }
            }

            // Every tenth trial also runs the greedy algorithm end to end;
            // run_trace replays the event log against the ledger and
            // audits load recounts.
            if trial % 10 == 0 {
                let n = 2 * (8 + uniform_index(&mut rng, 57)); // 16..=128
                let entry = MatrixEntry {
                    alg: Alg::Greedy2,
                    n,
                    eps: Ratio::new(1, 2),
                    seed: 0xAC02_00 + trial as u64,
                    len: 2 * n,
                    delta: 0,
                };
                let (inst, reqs) = default_workload(&entry)?;
                let opts = RunOptions { audit_every: 16, oracles: false };
                run_trace(&inst, &reqs, Alg::Greedy2, entry.seed, opts)?;
                greedy_runs += 1;
            }
        }
        Ok((true, format!("{trials} tracker trials and {greedy_runs} replayed runs agree")))
    })
}

// ---------------------------------------------------------------------------
// 3. Odd-cycle separation: linear-in-n measured ratio.
// ---------------------------------------------------------------------------

fn criterion_3_separation(quick: bool) -> CriterionOutcome {
    judge(3, "odd-cycle-separation", Some(30_000), || {
        let sizes: &[usize] = if quick { &[32, 64] } else { &[32, 64, 128] };
        let mut ratios: Vec<f64> = Vec::new();
        let mut details: Vec<String> = Vec::new();
        for &n in sizes {
            let inst = Instance::unit_two_cluster(Model::FullyDynamic2, n, Ratio::new(1, 2))?;
            let adv = OddCycleAdversary::new(n)?;
            let ell = adv.ell();
            let len = ell * ell;
            let mut ledger = CostLedger::new();
            let mut alg = GreedyRecoloring::new(&inst, &mut ledger)?;
            let mut seq = Vec::with_capacity(len);
            for t in 0..len {
                let (u, v) = adv.next(alg.coloring().colors())?;
                let rep = alg.process_request(Request::new(u, v, t), &mut ledger)?;
                if !rep.mono_at_arrival {
                    return Ok((
                        false,
                        format!("n={n}: request {t} was not monochromatic at arrival"),
                    ));
                }
                seq.push((u, v));
            }
            let cost = ledger.total_cost;
            if cost < len as Weight {
                return Ok((false, format!("n={n}: cost {cost} below |sigma| = {len}")));
            }
            let off = adv.simulate_off_family(&inst.c0, &inst.w, &seq);
            let off_bound = (ell + 2 * len / ell) as Weight;
            if off.best > off_bound {
                return Ok((
                    false,
                    format!("n={n}: best offline strategy costs {} > {off_bound}", off.best),
                ));
            }
            let ratio = cost as f64 / oracle::ratio_denominator(off.best) as f64;
            if ratio < ell as f64 / 4.0 {
                return Ok((false, format!("n={n}: ratio {ratio:.1} below l/4 = {}", ell / 4)));
            }
            ratios.push(ratio);
            details.push(format!("n={n}: cost {cost}, best offline {}, ratio {ratio:.1}", off.best));
        }
        if !ratios.windows(2).all(|w| w[1] > w[0]) {
            return Ok((false, format!("ratios not increasing with n: {details:?}")));
        }
        Ok((true, details.join("; ")))
    })
}

// ---------------------------------------------------------------------------
// 4. Greedy upper bound against the phase lower bound.
// ---------------------------------------------------------------------------

fn criterion_4_greedy_bound(quick: bool) -> CriterionOutcome {
    judge(4, "greedy-cost-per-phase", Some(60_000), || {
        let sizes: &[usize] = if quick { &[64] } else { &[64, 128, 256] };
        let mut kappa_measured = 0f64;
        let mut runs = 0;
        for &n in sizes {
            let scale = (n as f64) * (n as f64).log2();
            // Random fully dynamic workloads.
            for seed in [11u64, 12] {
                let entry = MatrixEntry {
                    alg: Alg::Greedy2,
                    n,
                    eps: Ratio::new(1, 2),
                    seed,
                    len: 6 * n,
                    delta: 0,
                };
                let (inst, reqs) = default_workload(&entry)?;
                let res = run_trace(&inst, &reqs, Alg::Greedy2, seed, RunOptions::default())?;
                let ratio = res.cost as f64 / oracle::ratio_denominator(res.lb) as f64;
                kappa_measured = kappa_measured.max(ratio / scale);
                runs += 1;
            }
            // Adversarial workload: the odd-cycle generator.
            let inst = Instance::unit_two_cluster(Model::FullyDynamic2, n, Ratio::new(1, 2))?;
            let adv = OddCycleAdversary::new(n)?;
            let mut ledger = CostLedger::new();
            let mut alg = GreedyRecoloring::new(&inst, &mut ledger)?;
            for t in 0..8 * adv.ell() {
                let (u, v) = adv.next(alg.coloring().colors())?;
                alg.process_request(Request::new(u, v, t), &mut ledger)?;
            }
            let lb = oracle::phase_lower_bound(&ledger).value;
            let ratio = ledger.total_cost as f64 / oracle::ratio_denominator(lb) as f64;
            kappa_measured = kappa_measured.max(ratio / scale);
            runs += 1;
        }
        let ok = kappa_measured <= KAPPA_GREEDY;
        Ok((
            ok,
            format!(
                "max cost/(phases * n log2 n) = {kappa_measured:.4} over {runs} runs (tolerance {KAPPA_GREEDY})"
            ),
        ))
    })
}

// ---------------------------------------------------------------------------
// 5. Estimate-guided algorithm against the exact monotone optimum.
// ---------------------------------------------------------------------------

struct FollowRun {
    cost: Weight,
    opt: Weight,
    delegated: bool,
}

/// Drives the estimate-guided algorithm over `seq`, auditing consistency
/// and the deviation bound after every step, and checking the delegation
/// lower bound `OPT(sigma_<=t) >= (eps/2) * B` if delegation fires.
fn follow_run(inst: &Instance, seq: &[(Vertex, Vertex)]) -> Result<FollowRun> {
    let mut ledger = CostLedger::new();
    let mut alg = FollowGreedy::new(inst)?;
    let mut delegated = false;
    for (t, &(u, v)) in seq.iter().enumerate() {
        let rep = alg.process_request(Request::new(u, v, t), &mut ledger)?;
        alg.audit_consistent().map_err(Error::Audit)?;
        alg.audit_deviation().map_err(Error::Audit)?;
        if rep.branch == Branch::Delegated && !delegated {
            delegated = true;
            let opt_t = oracle::opt_2recoloring(inst, &seq[..=t])?.value;
            let (p, q) = (inst.eps.num() as u128, inst.eps.den() as u128);
            // OPT >= (eps/2) * B, exactly: 2q * OPT >= p * B.
            if 2 * q * (opt_t as u128) < p * (inst.b as u128) {
                return Err(Error::Audit(format!(
                    "delegation at t={t} with OPT {opt_t} below (eps/2) * B = {p}/{}*{}",
                    2 * q,
                    inst.b
                )));
            }
        }
    }
    // No cost-vs-OPT sanity assertion here: the benchmark optimum is
    // constrained to exact balance while the algorithm only maintains
    // capacity-feasibility, so costs below OPT are legitimate.
    let opt = oracle::opt_2recoloring(inst, seq)?.value;
    Ok(FollowRun { cost: ledger.total_cost, opt, delegated })
}

fn criterion_5_follow_bound(quick: bool) -> CriterionOutcome {
    judge(5, "follow-vs-exact-opt", Some(60_000), || {
        let sizes: &[usize] = if quick { &[16, 32] } else { &[16, 32, 64] };
        let mut kappa_measured = 0f64;
        let mut runs = 0;
        let mut delegations = 0;
        for &n in sizes {
            let inst = Instance::unit_two_cluster(Model::Online2, n, Ratio::new(1, 2))?;
            let scale = (n as f64).log2();
            let mut workloads: Vec<Vec<(Vertex, Vertex)>> = Vec::new();
            // Batch adversary, deterministic endpoint choice, driven live.
            {
                let mut adv = BatchAdversary::new(n, false)?;
                let mut rng = ChaCha8Rng::seed_from_u64(0xAC05);
                let mut ledger = CostLedger::new();
                let mut alg = FollowGreedy::new(&inst)?;
                let mut seq = Vec::new();
                loop {
                    match adv.next(alg.coloring().colors(), &mut rng) {
                        BatchStep::Request { u, v } => {
                            alg.process_request(Request::new(u, v, seq.len()), &mut ledger)?;
                            seq.push((u, v));
                        }
                        BatchStep::BatchDone { .. } => continue,
                        BatchStep::Finished => break,
                    }
                }
                workloads.push(seq);
            }
            // Random hidden-bipartition sequences.
            for seed in [21u64, 22] {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                workloads.push(random_bipartite_sequence(n, 3 * n, &mut rng));
            }
            // Capacity-pressure workload that forces a handover, so the
            // delegation lower bound is exercised, not just stated.
            if n >= 24 {
                workloads.push(delegation_pressure_sequence(n)?);
            }
            for seq in &workloads {
                let run = follow_run(&inst, seq)?;
                let ratio = run.cost as f64 / oracle::ratio_denominator(run.opt) as f64;
                kappa_measured = kappa_measured.max(ratio / scale);
                runs += 1;
                delegations += usize::from(run.delegated);
            }
        }
        let ok = kappa_measured <= KAPPA_FOLLOW;
        let note = if delegations == 0 {
            "; the delegation bound went unexercised (vacuous)".to_string()
        } else {
            String::new()
        };
        Ok((
            ok,
            format!(
                "max cost/(OPT * log2 n) = {kappa_measured:.4} over {runs} runs, {delegations} delegating (tolerance {KAPPA_FOLLOW}){note}"
            ),
        ))
    })
}

// ---------------------------------------------------------------------------
// 6. Oracle cross-validation at exhaustive scale.
// ---------------------------------------------------------------------------

fn criterion_6_oracle_cross(quick: bool) -> CriterionOutcome {
    judge(6, "oracle-cross-validation", Some(30_000), || {
        let trials = if quick { 60 } else { 300 };
        let mut rng = ChaCha8Rng::seed_from_u64(0xAC06);
        // (a) The orientation DP equals exhaustive enumeration over all
        // exactly balanced proper colorings, for every tiny instance.
        for trial in 0..trials {
            let n = [4, 6, 8][uniform_index(&mut rng, 3)];
            let inst = Instance::unit_two_cluster(Model::Online2, n, Ratio::new(1, 2))?;
            let len = 1 + uniform_index(&mut rng, 20);
            let seq = random_bipartite_sequence(n, len, &mut rng);
            let rep = oracle::opt_2recoloring(&inst, &seq)?;
            let b = inst.b as u32;
            let brute = (0u32..1 << n)
                .filter(|m| m.count_ones() == b)
                .filter(|m| seq.iter().all(|&(u, v)| (m >> u) & 1 != (m >> v) & 1))
                .map(|m| {
                    (0..n)
                        .filter(|&v| {
                            let c = if (m >> v) & 1 == 1 { 1 } else { 2 };
                            c != inst.c0[v]
                        })
                        .count() as Weight
                })
                .min();
            if brute != Some(rep.value) {
                return Ok((
                    false,
                    format!("trial {trial}: DP value {} != exhaustive {:?}", rep.value, brute),
                ));
            }
        }
        // Odd input: both the DP and exhaustive enumeration must reject.
        {
            let inst = Instance::unit_two_cluster(Model::Online2, 6, Ratio::new(1, 2))?;
            let odd = [(0, 1), (1, 2), (2, 0)];
            if !matches!(oracle::opt_2recoloring(&inst, &odd), Err(Error::OddComponent { .. })) {
                return Ok((false, "odd cycle not rejected by the orientation DP".to_string()));
            }
        }
        // (b) Phase lower bound never exceeds the exact sequential optimum
        // (n = 10 is the single size where both the brute force and the
        // greedy's eps >= 8/n precondition admit a run).
        let lb_trials = if quick { 10 } else { 50 };
        for trial in 0..lb_trials {
            let inst = Instance::unit_two_cluster(Model::FullyDynamic2, 10, Ratio::new(4, 5))?;
            let mut ledger = CostLedger::new();
            let mut alg = GreedyRecoloring::new(&inst, &mut ledger)?;
            let mut seq = Vec::new();
            for t in 0..20 {
                let (u, v) = loop {
                    let u = uniform_index(&mut rng, 10) as Vertex;
                    let v = uniform_index(&mut rng, 10) as Vertex;
                    if u != v {
                        break (u, v);
                    }
                };
                alg.process_request(Request::new(u, v, t), &mut ledger)?;
                seq.push((u, v));
            }
            let lb = oracle::phase_lower_bound(&ledger).value;
            let opt = oracle::opt_fully_dynamic_bruteforce(&inst, &seq)?.value;
            if lb > opt || opt > ledger.total_cost {
                return Ok((
                    false,
                    format!(
                        "trial {trial}: sandwich violated: phases {lb}, OPT {opt}, cost {}",
                        ledger.total_cost
                    ),
                ));
            }
        }
        Ok((true, format!("{trials} DP-vs-exhaustive and {lb_trials} sandwich trials agree")))
    })
}

// ---------------------------------------------------------------------------
// 7. Online cover within twice the exact minimum.
// ---------------------------------------------------------------------------

/// Random degree-capped request sequence for a `Delta` instance with
/// exactly `mono` edges between same-initial-color vertices, the rest
/// crossing initial colors, in shuffled order.
fn mixed_delta_sequence<R: rand::RngCore>(
    inst: &Instance,
    mono: usize,
    safe: usize,
    rng: &mut R,
) -> Vec<(Vertex, Vertex)> {
    let n = inst.n;
    let delta = inst.k as usize;
    let bound = inst.degree_bound();
    let fits = |d: u32| ((d + 1) as u128) * (bound.den() as u128) <= bound.num() as u128;
    let mut deg = vec![0u32; n];
    let mut seen = std::collections::HashSet::new();
    let mut out: Vec<(Vertex, Vertex)> = Vec::new();
    let mut want_mono = mono;
    let mut want_safe = safe;
    let mut attempts = 0;
    while (want_mono > 0 || want_safe > 0) && attempts < 200 * (mono + safe) + 1000 {
        attempts += 1;
        let u = uniform_index(rng, n) as Vertex;
        let v = uniform_index(rng, n) as Vertex;
        if u == v || !fits(deg[u as usize]) || !fits(deg[v as usize]) {
            continue;
        }
        let is_mono = (u as usize) % delta == (v as usize) % delta;
        if is_mono && want_mono == 0 || !is_mono && want_safe == 0 {
            continue;
        }
        if !seen.insert((u.min(v), u.max(v))) {
            continue;
        }
        deg[u as usize] += 1;
        deg[v as usize] += 1;
        if is_mono {
            want_mono -= 1;
        } else {
            want_safe -= 1;
        }
        out.push((u, v));
    }
    // Shuffle so mono edges are interleaved with safe ones.
    for i in (1..out.len()).rev() {
        out.swap(i, uniform_index(rng, i + 1));
    }
    out
}

fn criterion_7_vertex_cover(quick: bool) -> CriterionOutcome {
    judge(7, "cover-two-approximation", Some(20_000), || {
        let trials = if quick { 40 } else { 200 };
        let mut rng = ChaCha8Rng::seed_from_u64(0xAC07);
        let mut max_cover = 0;
        for trial in 0..trials {
            let inst = Instance::delta_uniform(120, 6, Ratio::new(1, 2))?;
            let mono = 3 + uniform_index(&mut rng, 10); // <= 12 edges => |C*| <= 12
            let seq = mixed_delta_sequence(&inst, mono, 60, &mut rng);
            let mut state = DeltaState::new(&inst)?;
            let mut ledger = CostLedger::new();
            let mut step_rng = ChaCha8Rng::seed_from_u64(trial as u64);
            for (t, &(u, v)) in seq.iter().enumerate() {
                state.process_request(
                    Request::new(u, v, t),
                    DeltaPolicy::Deterministic,
                    &mut step_rng,
                    &mut ledger,
                )?;
            }
            let exact = oracle::min_vertex_cover(state.gm_edges())?.value;
            let cover = state.cover_size() as Weight;
            if cover > 2 * exact {
                return Ok((
                    false,
                    format!("trial {trial}: cover {cover} exceeds twice the minimum {exact}"),
                ));
            }
            max_cover = max_cover.max(cover);
        }
        Ok((true, format!("{trials} instances within the 2-approximation (largest cover {max_cover})")))
    })
}

// ---------------------------------------------------------------------------
// 8. Deterministic degree-bounded policy: capacity, rebalances, equitable.
// ---------------------------------------------------------------------------

fn criterion_8_delta_det(quick: bool) -> CriterionOutcome {
    judge(8, "delta-deterministic", Some(60_000), || {
        let (n, delta, steps) = if quick { (500, 20u32, 800) } else { (2000, 20u32, 3000) };
        let inst = Instance::delta_uniform(n, delta, Ratio::new(1, 2))?;
        let cap = inst.augmented_capacity();
        let cap_ok = |loads: &[Weight]| {
            loads.iter().all(|&l| (l as u128) * (cap.den() as u128) <= cap.num() as u128)
        };
        let mut total_rebalances = 0u64;

        // (a) Working-set adversary, live.
        {
            let mut adv = DeltaSetAdversary::new(&inst)?;
            let mut state = DeltaState::new(&inst)?;
            let mut ledger = CostLedger::new();
            let mut rng = ChaCha8Rng::seed_from_u64(0xAC08);
            for t in 0..steps {
                let (u, v) = match adv.next(state.coloring().colors()) {
                    Ok(pair) => pair,
                    Err(Error::Exhausted) => break,
                    Err(e) => return Err(e),
                };
                state.process_request(
                    Request::new(u, v, t),
                    DeltaPolicy::Deterministic,
                    &mut rng,
                    &mut ledger,
                )?;
                if !cap_ok(state.coloring().loads()) {
                    return Ok((false, format!("adversary step {t}: load exceeds (1+eps)n/Delta")));
                }
                if t % 100 == 0 {
                    state.audit_consistent(true).map_err(Error::Audit)?;
                }
            }
            state.audit_consistent(true).map_err(Error::Audit)?;
            total_rebalances += ledger.rebalance_calls;
        }

        // (b) Random degree-capped sequence.
        {
            let mut rng = ChaCha8Rng::seed_from_u64(0xAC08_02);
            let seq = random_delta_sequence(&inst, if quick { 1500 } else { 5000 }, &mut rng);
            let mut state = DeltaState::new(&inst)?;
            let mut ledger = CostLedger::new();
            for (t, &(u, v)) in seq.iter().enumerate() {
                state.process_request(
                    Request::new(u, v, t),
                    DeltaPolicy::Deterministic,
                    &mut rng,
                    &mut ledger,
                )?;
                if !cap_ok(state.coloring().loads()) {
                    return Ok((false, format!("random step {t}: load exceeds (1+eps)n/Delta")));
                }
            }
            state.audit_consistent(true).map_err(Error::Audit)?;
            total_rebalances += ledger.rebalance_calls;
        }

        let rebalance_bound = KAPPA_DELTA_REBALANCE * delta as f64;
        if (total_rebalances as f64) > rebalance_bound {
            return Ok((
                false,
                format!("{total_rebalances} rebalances exceed the tolerance {rebalance_bound:.1}"),
            ));
        }

        // (b') The rebuild path itself, forced at desk scale: five requests
        // at n = 12, Delta = 4 exhaust every feasible color of one vertex
        // (see the unit test of the same sequence), and the equitable
        // rebuild must restore exact balance.
        {
            let small = Instance::delta_uniform(12, 4, Ratio::new(1, 2))?;
            let forced = [(2, 3), (2, 6), (6, 10), (7, 10), (7, 3)];
            let mut state = DeltaState::new(&small)?;
            let mut ledger = CostLedger::new();
            let mut rng = ChaCha8Rng::seed_from_u64(0);
            for (t, &(u, v)) in forced.iter().enumerate() {
                state.process_request(
                    Request::new(u, v, t),
                    DeltaPolicy::Deterministic,
                    &mut rng,
                    &mut ledger,
                )?;
            }
            if ledger.rebalance_calls != 1 || !state.coloring().loads().iter().all(|&l| l == 3) {
                return Ok((
                    false,
                    format!(
                        "forced rebuild: {} rebalances, loads {:?} (want 1 rebalance, all loads 3)",
                        ledger.rebalance_calls,
                        state.coloring().loads()
                    ),
                ));
            }
            state.audit_consistent(true).map_err(Error::Audit)?;
        }

        // (c) Equitable solver on random degree-bounded graphs.
        let graphs = if quick { 40 } else { 200 };
        let mut rng = ChaCha8Rng::seed_from_u64(0xAC08_03);
        for g in 0..graphs {
            let n = 50 + uniform_index(&mut rng, 151);
            let r = 4 + uniform_index(&mut rng, 8) as u32;
            let mut adj = vec![Vec::new(); n];
            let mut deg = vec![0u32; n];
            let mut seen = std::collections::HashSet::new();
            for _ in 0..3 * n {
                let u = uniform_index(&mut rng, n) as Vertex;
                let v = uniform_index(&mut rng, n) as Vertex;
                if u == v || deg[u as usize] >= r || deg[v as usize] >= r {
                    continue;
                }
                if !seen.insert((u.min(v), u.max(v))) {
                    continue;
                }
                adj[u as usize].push(v);
                adj[v as usize].push(u);
                deg[u as usize] += 1;
                deg[v as usize] += 1;
            }
            let coloring = equitable_coloring(&adj, r)?;
            for u in 0..n {
                for &v in &adj[u] {
                    if coloring[u] == coloring[v as usize] {
                        return Ok((false, format!("graph {g}: class coloring not proper")));
                    }
                }
            }
            let k = (r + 1) as usize;
            let mut sizes = vec![0usize; k];
            for &c in &coloring {
                sizes[(c - 1) as usize] += 1;
            }
            let (lo, hi) = (sizes.iter().min().unwrap(), sizes.iter().max().unwrap());
            if hi - lo > 1 {
                return Ok((false, format!("graph {g}: class sizes {sizes:?} not equitable")));
            }
        }
        Ok((
            true,
            format!(
                "capacity held on every step; {total_rebalances} rebalances at scale (tolerance {rebalance_bound:.1}); forced rebuild exact; {graphs} equitable colorings verified"
            ),
        ))
    })
}

// ---------------------------------------------------------------------------
// 9. Randomized degree-bounded policy: Monte-Carlo statistics.
// ---------------------------------------------------------------------------

fn criterion_9_delta_rand(quick: bool) -> CriterionOutcome {
    judge(9, "delta-randomized-statistics", Some(300_000), || {
        let (n, delta, trials, len): (usize, u32, usize, usize) =
            if quick { (2000, 20, 20, 4000) } else { (10_000, 20, 100, 20_000) };
        let inst = Instance::delta_uniform(n, delta, Ratio::new(1, 2))?;
        let master = 0xAC09u64;

        // One fixed oblivious sequence: a small same-initial-color core
        // (its cover drives the recoloring bound) inside a long stream of
        // initially-safe edges.
        let mut seq_rng = ChaCha8Rng::seed_from_u64(master);
        let seq = mixed_delta_sequence(&inst, 10, len - 10, &mut seq_rng);
        let mono_edges: Vec<(Vertex, Vertex)> = seq
            .iter()
            .copied()
            .filter(|&(u, v)| inst.c0[u as usize] == inst.c0[v as usize])
            .collect();
        let cstar = oracle::min_vertex_cover(&mono_edges)?.value;

        // (1 + eps/2) * n/Delta, exactly.
        let (p, q) = (inst.eps.num() as u128, inst.eps.den() as u128);
        let rebalance_cap_ok =
            |load: Weight| (load as u128) * 2 * q <= (2 * q + p) * (inst.b as u128);

        let mut trials_rebalance_ok = 0usize;
        let mut rebalances_observed = 0u64;
        let mut prev_touched_total = 0u64;
        let mut prev_touched_mono = 0u64;
        let mut phase_sizes: Vec<u64> = Vec::new();
        let mut recolor_counts: Vec<f64> = Vec::new();

        for trial in 0..trials {
            let mut rng = ChaCha8Rng::seed_from_u64(master);
            rng.set_stream(1 + trial as u64);
            let mut state = DeltaState::new(&inst)?;
            let mut ledger = CostLedger::new();
            let mut recolored = vec![false; n];
            let mut rebalance_ok = true;
            for (t, &(u, v)) in seq.iter().enumerate() {
                let prev_touched = recolored[u as usize] || recolored[v as usize];
                let rep = state.process_request(
                    Request::new(u, v, t),
                    DeltaPolicy::Randomized,
                    &mut rng,
                    &mut ledger,
                )?;
                if prev_touched {
                    prev_touched_total += 1;
                    prev_touched_mono += u64::from(rep.mono_at_arrival);
                }
                for ev in &rep.recolors {
                    recolored[ev.v as usize] = true;
                }
                if rep.branch == Branch::DeltaRandRebalance {
                    rebalances_observed += 1;
                    if !state.coloring().loads().iter().all(|&l| rebalance_cap_ok(l)) {
                        rebalance_ok = false;
                    }
                }
            }
            state.audit_consistent(false).map_err(Error::Audit)?;
            trials_rebalance_ok += usize::from(rebalance_ok);
            phase_sizes.extend_from_slice(state.completed_phase_recolors());
            recolor_counts.push(state.recolor_ops() as f64);
        }

        let mut notes: Vec<String> = Vec::new();

        // (a) Rebalanced colorings stay within (1+eps/2) capacity in at
        // least 99% of trials.
        let need = trials - trials.div_ceil(100);
        if trials_rebalance_ok < need {
            return Ok((
                false,
                format!("(a) only {trials_rebalance_ok}/{trials} trials kept rebalanced loads under (1+eps/2)n/Delta"),
            ));
        }

        // (a') The rebuild path itself, forced at desk scale through the
        // same full-feasible-set sequence the deterministic policy uses;
        // a seed scan finds a stream whose final draw lands on a full
        // color. The rebuild must leave a proper coloring and close the
        // phase; the (1+eps/2) load bound is a large-n statement and is
        // not asserted at n = 12.
        {
            let small = Instance::delta_uniform(12, 4, Ratio::new(1, 2))?;
            let forced = [(2u32, 3u32), (2, 6), (6, 10), (7, 10), (7, 3)];
            let run_with = |seed: u64| -> Result<(bool, DeltaState)> {
                let mut state = DeltaState::new(&small)?;
                let mut ledger = CostLedger::new();
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let mut fired = false;
                for (t, &(u, v)) in forced.iter().enumerate() {
                    let rep = state.process_request(
                        Request::new(u, v, t),
                        DeltaPolicy::Randomized,
                        &mut rng,
                        &mut ledger,
                    )?;
                    fired |= rep.branch == Branch::DeltaRandRebalance;
                }
                Ok((fired, state))
            };
            let mut triggered = None;
            for seed in 0..1000 {
                let (fired, state) = run_with(seed)?;
                if fired {
                    triggered = Some(state);
                    break;
                }
            }
            let Some(state) = triggered else {
                return Ok((false, "(a') no seed in 0..1000 triggers the randomized rebuild".into()));
            };
            if state.completed_phase_recolors().len() != 1 {
                return Ok((false, "(a') the forced rebuild did not close exactly one phase".into()));
            }
            state.audit_consistent(false).map_err(Error::Audit)?;
        }

        // (b) Collision frequency on requests touching a recolored vertex.
        let p0 = 1.0 / (0.5 * delta as f64); // 1/(eps * Delta) = 0.1
        if prev_touched_total > 0 {
            let freq = prev_touched_mono as f64 / prev_touched_total as f64;
            let se = (p0 * (1.0 - p0) / prev_touched_total as f64).sqrt();
            if freq > p0 + 3.0 * se {
                return Ok((
                    false,
                    format!("(b) collision frequency {freq:.4} exceeds {p0} + 3se = {:.4}", p0 + 3.0 * se),
                ));
            }
            notes.push(format!(
                "(b) collision frequency {freq:.4} <= {:.4} over {prev_touched_total} requests",
                p0 + 3.0 * se
            ));
        } else {
            notes.push("(b) vacuous: no request touched a recolored vertex".to_string());
        }

        // (c) Completed phases carry at least eps^2 n / 4 recolorings.
        let phase_floor = (n as u64) / 16; // (1/2)^2 * n / 4
        if phase_sizes.is_empty() {
            notes.push(
                "(c) vacuous: no phase completed at these parameters (capacity pressure never builds)"
                    .to_string(),
            );
        } else {
            let good = phase_sizes.iter().filter(|&&s| s >= phase_floor).count();
            let frac = good as f64 / phase_sizes.len() as f64;
            if frac < 0.99 {
                return Ok((
                    false,
                    format!("(c) only {frac:.3} of {} completed phases reach {phase_floor} recolorings", phase_sizes.len()),
                ));
            }
            notes.push(format!("(c) {good}/{} completed phases reach {phase_floor}", phase_sizes.len()));
        }

        // (d) Mean recolorings against 2|C*|(1-eps)/eps plus 3 standard
        // errors of the sample mean.
        let k = recolor_counts.len() as f64;
        let mean = recolor_counts.iter().sum::<f64>() / k;
        let var = recolor_counts.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (k - 1.0);
        let se = (var / k).sqrt();
        let bound = 2.0 * cstar as f64 * (1.0 - 0.5) / 0.5;
        if mean > bound + 3.0 * se {
            return Ok((
                false,
                format!("(d) mean recolorings {mean:.2} exceed 2|C*|(1-eps)/eps = {bound:.2} + 3se = {:.2}", bound + 3.0 * se),
            ));
        }
        notes.push(format!(
            "(d) mean recolorings {mean:.2} <= {:.2} (|C*| = {cstar})",
            bound + 3.0 * se
        ));
        if rebalances_observed == 0 {
            notes.push(format!(
                "(a) vacuous at scale (no rebuild in {trials} trials; forced desk-scale rebuild verified)"
            ));
        } else {
            notes.push(format!(
                "(a) {trials_rebalance_ok}/{trials} trials over {rebalances_observed} rebuilds"
            ));
        }
        Ok((true, notes.join("; ")))
    })
}

// ---------------------------------------------------------------------------
// 10. Bitwise determinism of replayed runs.
// ---------------------------------------------------------------------------

fn criterion_10_determinism() -> CriterionOutcome {
    judge(10, "replay-determinism", None, || {
        let entries = [
            MatrixEntry { alg: Alg::Greedy2, n: 64, eps: Ratio::new(1, 2), seed: 31, len: 300, delta: 0 },
            MatrixEntry { alg: Alg::Follow, n: 32, eps: Ratio::new(1, 2), seed: 32, len: 90, delta: 0 },
            MatrixEntry { alg: Alg::DeltaDet, n: 120, eps: Ratio::new(1, 2), seed: 33, len: 200, delta: 6 },
            MatrixEntry { alg: Alg::DeltaRand, n: 120, eps: Ratio::new(1, 2), seed: 34, len: 200, delta: 6 },
        ];
        for entry in entries {
            let (inst, reqs) = default_workload(&entry)?;
            let a = run_trace(&inst, &reqs, entry.alg, entry.seed, RunOptions::default())?;
            let b = run_trace(&inst, &reqs, entry.alg, entry.seed, RunOptions::default())?;
            if a.csv_row_masked() != b.csv_row_masked() {
                return Ok((
                    false,
                    format!("{}: rows differ: {} vs {}", entry.alg.tag(), a.csv_row_masked(), b.csv_row_masked()),
                ));
            }
        }
        Ok((true, "identical masked CSV rows for all four algorithms".to_string()))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_suite_passes() {
        for outcome in run_all(true) {
            assert!(outcome.passed, "{}", outcome.line());
        }
    }
}
