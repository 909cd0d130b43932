//! Recoloring in the degree-bounded `Delta`-color model.
//!
//! The graph built by the request sequence must keep maximum degree at
//! most `(1-eps)*Delta`; every color holds at most `(1+eps)*n/Delta`
//! weight. The algorithm maintains online a 2-approximate vertex cover
//! `C` of the edges monochromatic under the initial coloring, and only
//! ever targets cover members for recoloring:
//!
//! * request endpoints share a color and neither is in `C` (then the edge
//!   is monochromatic under the initial coloring too, and both endpoints
//!   just entered `C`): recolor `u_t`;
//! * exactly one endpoint in `C`: recolor it;
//! * both in `C`: recolor the endpoint of larger current degree, ties to
//!   the lower vertex id.
//!
//! The recoloring target gets a color from its feasible list `L(v)`
//! (colors no neighbor holds, never fewer than `eps*Delta` of them):
//!
//! * deterministic policy: the feasible color of maximum residual
//!   capacity, ties to the lowest color; if no feasible color has room
//!   for one more vertex, the whole graph is recolored equitably;
//! * randomized policy: a uniform sample from `L(v)`; if the sampled
//!   color has no room, every vertex resamples in ascending id order
//!   (starting a new phase), each choice removed from its neighbors'
//!   lists as it is made.
//!
//! Colors are eligible when one more vertex fits within capacity; with
//! the integral capacities of the analyzed setting this coincides with a
//! positive residual. Uniform sampling draws one 64-bit word `X` and
//! selects the `ceil(X*m / 2^64)`-th feasible color, matching the
//! pre-drawn-uniform view of the analysis exactly.

use rand::RngCore;

use crate::audit::{Branch, StepReport};
use crate::coloring::{ColoringState, CostLedger, RecolorMode};
use crate::equitable::equitable_coloring;
use crate::instance::{Instance, Request};
use crate::{Color, Error, Result, Vertex};

/// Which recoloring rule handles a flagged vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeltaPolicy {
    Deterministic,
    Randomized,
}

/// Runtime state shared by both `Delta`-model policies.
#[derive(Debug, Clone)]
pub struct DeltaState {
    inst: Instance,
    state: ColoringState,
    adj: Vec<Vec<Vertex>>,
    /// `nbc[v][c-1]` = number of neighbors of `v` currently colored `c`.
    /// `L(v)` is exactly the colors with a zero entry.
    nbc: Vec<Vec<u32>>,
    cover: Vec<bool>,
    cover_size: usize,
    /// Edges monochromatic under the initial coloring, deduplicated.
    gm_edges: Vec<(Vertex, Vertex)>,
    /// Recolor-call targets that were outside the cover (must stay 0).
    targets_outside_cover: u64,
    /// Recolorings charged in the current randomized phase.
    phase_recolors: u64,
    /// Recolorings of each completed randomized phase.
    completed_phases: Vec<u64>,
    /// Total `Recolor()` invocations, both policies.
    recolor_ops: u64,
}

impl DeltaState {
    pub fn new(inst: &Instance) -> Result<DeltaState> {
        if inst.model != crate::instance::Model::Delta {
            return Err(Error::InvalidInstance(format!(
                "Delta algorithms need a Delta-model instance, got {}",
                inst.model.tag()
            )));
        }
        let n = inst.n;
        let k = inst.k as usize;
        let state = ColoringState::new(inst.k, inst.augmented_capacity(), &inst.w, &inst.c0);
        Ok(DeltaState {
            inst: inst.clone(),
            state,
            adj: vec![Vec::new(); n],
            nbc: vec![vec![0; k]; n],
            cover: vec![false; n],
            cover_size: 0,
            gm_edges: Vec::new(),
            targets_outside_cover: 0,
            phase_recolors: 0,
            completed_phases: Vec::new(),
            recolor_ops: 0,
        })
    }

    pub fn instance(&self) -> &Instance {
        &self.inst
    }

    pub fn coloring(&self) -> &ColoringState {
        &self.state
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v as usize].len()
    }

    pub fn cover_size(&self) -> usize {
        self.cover_size
    }

    pub fn in_cover(&self, v: Vertex) -> bool {
        self.cover[v as usize]
    }

    /// Deduplicated edges monochromatic under the initial coloring.
    pub fn gm_edges(&self) -> &[(Vertex, Vertex)] {
        &self.gm_edges
    }

    /// Recolorings charged in each completed randomized phase.
    pub fn completed_phase_recolors(&self) -> &[u64] {
        &self.completed_phases
    }

    /// Recolorings charged in the still-open phase.
    pub fn open_phase_recolors(&self) -> u64 {
        self.phase_recolors
    }

    /// Total recolor-rule invocations across the run.
    pub fn recolor_ops(&self) -> u64 {
        self.recolor_ops
    }

    /// The feasible list `L(v)`: colors no current neighbor holds, in
    /// ascending order.
    pub fn feasible_list(&self, v: Vertex) -> Vec<Color> {
        (1..=self.inst.k)
            .filter(|&c| self.nbc[v as usize][(c - 1) as usize] == 0)
            .collect()
    }

    /// Records a monochromatic-under-`c0` edge and greedily extends the
    /// vertex cover: if neither endpoint is covered, both enter.
    fn update_vertex_cover(&mut self, u: Vertex, v: Vertex, fresh_edge: bool) {
        if fresh_edge {
            self.gm_edges.push((u.min(v), u.max(v)));
        }
        if !self.cover[u as usize] && !self.cover[v as usize] {
            self.cover[u as usize] = true;
            self.cover[v as usize] = true;
            self.cover_size += 2;
        }
    }

    fn apply_recolor(&mut self, v: Vertex, to: Color, ledger: &mut CostLedger, mode: RecolorMode) -> Result<()> {
        let from = self.state.color(v);
        self.state.recolor(v, to, &self.inst.w, ledger, mode)?;
        if from != to {
            for &x in &self.adj[v as usize] {
                self.nbc[x as usize][(from - 1) as usize] -= 1;
                self.nbc[x as usize][(to - 1) as usize] += 1;
            }
        }
        Ok(())
    }

    /// Deterministic rule: among feasible colors with room for one more
    /// vertex, pick the one of maximum residual capacity (lowest color on
    /// ties). With none available, rebuild the whole coloring equitably.
    fn det_recolor(&mut self, v: Vertex, ledger: &mut CostLedger) -> Result<Branch> {
        self.recolor_ops += 1;
        if !self.cover[v as usize] {
            self.targets_outside_cover += 1;
        }
        let mut best: Option<Color> = None;
        for c in 1..=self.inst.k {
            if self.nbc[v as usize][(c - 1) as usize] != 0 {
                continue;
            }
            if !self.state.residual_at_least(c, 1) {
                continue;
            }
            // Equal capacities: max residual = min load; ascending scan
            // with strict improvement keeps the lowest color on ties.
            if best.map_or(true, |b| self.state.load(c) < self.state.load(b)) {
                best = Some(c);
            }
        }
        match best {
            Some(c) => {
                self.apply_recolor(v, c, ledger, RecolorMode::Checked)?;
                self.phase_recolors += 1;
                Ok(Branch::DeltaRecolor)
            }
            None => {
                self.det_rebalance(ledger)?;
                Ok(Branch::DeltaDetRebalance)
            }
        }
    }

    /// Equitable global rebuild. Uses `r+1` classes for the current
    /// maximum degree `r` when that keeps classes within `ceil(n/Delta)`,
    /// otherwise `Delta` classes directly.
    fn det_rebalance(&mut self, ledger: &mut CostLedger) -> Result<()> {
        ledger.note_rebalance();
        let n = self.inst.n;
        let delta = self.inst.k as usize;
        let r = self.adj.iter().map(Vec::len).max().unwrap_or(0);
        let class_bound = n.div_ceil(delta);
        let classes = if n.div_ceil(r + 1) <= class_bound { r + 1 } else { delta };
        debug_assert!(classes <= delta);
        let colors = equitable_coloring(&self.adj, (classes - 1) as u32)?;
        for v in 0..n as Vertex {
            self.apply_recolor(v, colors[v as usize], ledger, RecolorMode::Unchecked)?;
        }
        debug_assert!((1..=self.inst.k)
            .all(|c| self.state.load(c) <= class_bound as crate::Weight));
        Ok(())
    }

    /// Uniform index in `0..m` from one 64-bit draw: the pre-drawn
    /// `X in [0,1]` view `ceil(X*m)` computed in integers.
    fn sample_index<R: RngCore>(rng: &mut R, m: usize) -> usize {
        crate::uniform_index(rng, m)
    }

    /// Randomized rule: a uniform feasible color; if it happens to be
    /// full, every vertex resamples (a new phase).
    fn rand_recolor<R: RngCore>(
        &mut self,
        v: Vertex,
        rng: &mut R,
        ledger: &mut CostLedger,
    ) -> Result<Branch> {
        self.recolor_ops += 1;
        if !self.cover[v as usize] {
            self.targets_outside_cover += 1;
        }
        let list = self.feasible_list(v);
        debug_assert!(!list.is_empty());
        let c = list[DeltaState::sample_index(rng, list.len())];
        if self.state.residual_at_least(c, 1) {
            self.apply_recolor(v, c, ledger, RecolorMode::Checked)?;
            self.phase_recolors += 1;
            Ok(Branch::DeltaRecolor)
        } else {
            self.rand_rebalance(rng, ledger)?;
            Ok(Branch::DeltaRandRebalance)
        }
    }

    /// Random global rebuild: all feasible lists reset to `[Delta]`, then
    /// each vertex in ascending id order samples uniformly among colors
    /// not yet taken by a neighbor, the choice leaving its neighbors'
    /// lists immediately. Starts a new phase.
    fn rand_rebalance<R: RngCore>(&mut self, rng: &mut R, ledger: &mut CostLedger) -> Result<()> {
        ledger.note_rebalance();
        ledger.note_phase();
        self.completed_phases.push(self.phase_recolors);
        self.phase_recolors = 0;

        let n = self.inst.n;
        let k = self.inst.k as usize;
        let mut taken = vec![vec![false; k]; n];
        let mut chosen: Vec<Color> = vec![0; n];
        for v in 0..n {
            let list: Vec<Color> = (1..=k as Color).filter(|&c| !taken[v][(c - 1) as usize]).collect();
            debug_assert!(!list.is_empty(), "degree bound keeps lists nonempty");
            let c = list[DeltaState::sample_index(rng, list.len())];
            chosen[v] = c;
            for &x in &self.adj[v] {
                taken[x as usize][(c - 1) as usize] = true;
            }
        }
        for v in 0..n as Vertex {
            // Unchecked: the capacity bound after a random rebuild holds
            // with high probability, not deterministically.
            self.apply_recolor(v, chosen[v as usize], ledger, RecolorMode::Unchecked)?;
        }
        Ok(())
    }

    /// Handles one request under the chosen policy. The RNG is consulted
    /// only by the randomized policy.
    pub fn process_request<R: RngCore>(
        &mut self,
        req: Request,
        policy: DeltaPolicy,
        rng: &mut R,
        ledger: &mut CostLedger,
    ) -> Result<StepReport> {
        let (u, v) = (req.u, req.v);
        debug_assert_ne!(u, v);
        let cost_before = ledger.total_cost;
        let phases_before = ledger.phase_count;
        let rebalances_before = ledger.rebalance_calls;

        let fresh_edge = !self.adj[u as usize].contains(&v);
        if fresh_edge {
            let bound = self.inst.degree_bound();
            for &x in &[u, v] {
                let d_new = (self.adj[x as usize].len() + 1) as u64;
                // d_new <= (1-eps)*Delta, exactly.
                if (d_new as u128) * (bound.den() as u128) > bound.num() as u128 {
                    return Err(Error::DegreeViolation { v: x });
                }
            }
            self.adj[u as usize].push(v);
            self.adj[v as usize].push(u);
            self.nbc[u as usize][(self.state.color(v) - 1) as usize] += 1;
            self.nbc[v as usize][(self.state.color(u) - 1) as usize] += 1;
        }

        // Cover membership before this request decides the dispatch; the
        // cover update itself happens first.
        let covered_before = (self.cover[u as usize], self.cover[v as usize]);
        if self.inst.c0[u as usize] == self.inst.c0[v as usize] {
            self.update_vertex_cover(u, v, fresh_edge);
        }

        let mono = self.state.color(u) == self.state.color(v);
        let branch = if mono {
            let target = match covered_before {
                (false, false) => {
                    // Endpoints never recolored, so the current collision
                    // is a collision under c0 and both just entered C.
                    debug_assert!(self.cover[u as usize] && self.cover[v as usize]);
                    u
                }
                (true, false) => u,
                (false, true) => v,
                (true, true) => {
                    let (du, dv) = (self.adj[u as usize].len(), self.adj[v as usize].len());
                    if du > dv {
                        u
                    } else if dv > du {
                        v
                    } else {
                        u.min(v)
                    }
                }
            };
            match policy {
                DeltaPolicy::Deterministic => self.det_recolor(target, ledger)?,
                DeltaPolicy::Randomized => self.rand_recolor(target, rng, ledger)?,
            }
        } else {
            Branch::NoOp
        };

        debug_assert_ne!(self.state.color(u), self.state.color(v));
        Ok(StepReport {
            t: req.t,
            branch,
            cost_delta: ledger.total_cost - cost_before,
            mono_at_arrival: mono,
            phase_started: ledger.phase_count > phases_before,
            rebalanced: ledger.rebalance_calls > rebalances_before,
            recolors: ledger.take_step_events(),
        })
    }

    /// Test support: recounts neighbor colors, checks properness, list
    /// sizes `|L(v)| >= eps*Delta`, load reconciliation, that recolor
    /// calls only ever targeted cover members, and (for deterministic
    /// runs) the capacity bound.
    pub fn audit_consistent(&self, check_capacity: bool) -> std::result::Result<(), String> {
        let n = self.inst.n;
        let k = self.inst.k;
        let (p, q) = (self.inst.eps.num() as u128, self.inst.eps.den() as u128);
        for v in 0..n {
            let mut counts = vec![0u32; k as usize];
            for &x in &self.adj[v] {
                counts[(self.state.color(x) - 1) as usize] += 1;
            }
            if counts != self.nbc[v] {
                return Err(format!("vertex {v}: neighbor color counts out of sync"));
            }
            if counts[(self.state.color(v as Vertex) - 1) as usize] != 0 {
                return Err(format!("vertex {v} shares its color with a neighbor"));
            }
            let zeros = counts.iter().filter(|&&c| c == 0).count() as u128;
            // |L(v)| >= eps * Delta
            if zeros * q < p * k as u128 {
                return Err(format!("vertex {v}: feasible list of {zeros} below eps*Delta"));
            }
        }
        if !self.state.reconciles(&self.inst.w) {
            return Err("load bookkeeping does not reconcile".to_string());
        }
        if self.targets_outside_cover != 0 {
            return Err(format!(
                "{} recolor calls targeted vertices outside the cover",
                self.targets_outside_cover
            ));
        }
        if check_capacity && !self.state.all_within_capacity() {
            return Err(format!("per-color loads {:?} exceed capacity", self.state.loads()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio::Ratio;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn delta_instance(n: usize, delta: Color, eps: Ratio) -> Instance {
        Instance::delta_uniform(n, delta, eps).unwrap()
    }

    // c0(v) = (v mod delta) + 1, so vertices v and v + delta share a color.

    #[test]
    fn aligned_request_costs_nothing() {
        let inst = delta_instance(40, 4, Ratio::new(1, 2));
        let mut st = DeltaState::new(&inst).unwrap();
        let mut ledger = CostLedger::new();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        // Colors 1 and 2 under c0.
        let rep = st
            .process_request(Request::new(0, 1, 0), DeltaPolicy::Deterministic, &mut rng, &mut ledger)
            .unwrap();
        assert_eq!(rep.branch, Branch::NoOp);
        assert_eq!(ledger.total_cost, 0);
        assert!(st.gm_edges().is_empty());
        st.audit_consistent(true).unwrap();
    }

    #[test]
    fn fresh_mono_edge_covers_both_and_recolors_u() {
        let inst = delta_instance(40, 4, Ratio::new(1, 2));
        let mut st = DeltaState::new(&inst).unwrap();
        let mut ledger = CostLedger::new();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        // 0 and 4 both have c0 color 1.
        let rep = st
            .process_request(Request::new(0, 4, 0), DeltaPolicy::Deterministic, &mut rng, &mut ledger)
            .unwrap();
        assert_eq!(rep.branch, Branch::DeltaRecolor);
        assert!(rep.mono_at_arrival);
        assert_eq!(ledger.total_cost, 1);
        assert!(st.in_cover(0) && st.in_cover(4));
        assert_eq!(st.cover_size(), 2);
        assert_eq!(st.gm_edges(), &[(0, 4)]);
        // u = 0 was recolored; v = 4 kept color 1. Loads are 10 per color
        // initially, so the lowest eligible color wins the tie: color 2 is
        // blocked only if a neighbor holds it; here L(0) = {2,3,4} after
        // excluding color 1 (neighbor 4), all at load 10 -> color 2.
        assert_eq!(st.coloring().color(4), 1);
        assert_eq!(st.coloring().color(0), 2);
        st.audit_consistent(true).unwrap();
    }

    #[test]
    fn one_covered_endpoint_is_the_target() {
        let inst = delta_instance(40, 4, Ratio::new(1, 2));
        let mut st = DeltaState::new(&inst).unwrap();
        let mut ledger = CostLedger::new();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        // (0,4): both enter C, 0 recolored to 2.
        st.process_request(Request::new(0, 4, 0), DeltaPolicy::Deterministic, &mut rng, &mut ledger)
            .unwrap();
        // (8,4): both still color 1... 8 has c0=1 too, so this is mono;
        // 4 in C, 8 not -> target is 4 (the covered one).
        let rep = st
            .process_request(Request::new(8, 4, 1), DeltaPolicy::Deterministic, &mut rng, &mut ledger)
            .unwrap();
        assert_eq!(rep.branch, Branch::DeltaRecolor);
        assert_ne!(st.coloring().color(4), 1);
        assert_eq!(st.coloring().color(8), 1);
        // The mono edge still updates the cover bookkeeping: 8 stays out
        // because 4 already covers the edge.
        assert!(!st.in_cover(8));
        st.audit_consistent(true).unwrap();
    }

    #[test]
    fn both_covered_picks_higher_degree() {
        // Delta = 6, eps = 1/2: degree cap 3. c0 pairs differ by 6.
        let inst = delta_instance(48, 6, Ratio::new(1, 2));
        let mut st = DeltaState::new(&inst).unwrap();
        let mut ledger = CostLedger::new();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        // (0,6) covers {0,6} and recolors 0; (12,18) covers {12,18} and
        // recolors 12. Vertices 6 and 18 keep color 1.
        st.process_request(Request::new(0, 6, 0), DeltaPolicy::Deterministic, &mut rng, &mut ledger)
            .unwrap();
        st.process_request(Request::new(12, 18, 1), DeltaPolicy::Deterministic, &mut rng, &mut ledger)
            .unwrap();
        // Raise deg(18) to 2 with an aligned edge.
        st.process_request(Request::new(18, 1, 2), DeltaPolicy::Deterministic, &mut rng, &mut ledger)
            .unwrap();
        // (6,18): both covered and both color 1; deg(18)=2 > deg(6)=1.
        let rep = st
            .process_request(Request::new(6, 18, 3), DeltaPolicy::Deterministic, &mut rng, &mut ledger)
            .unwrap();
        assert!(rep.mono_at_arrival);
        assert_ne!(st.coloring().color(18), 1);
        assert_eq!(st.coloring().color(6), 1);
        st.audit_consistent(true).unwrap();
    }

    #[test]
    fn both_covered_degree_tie_picks_lower_id() {
        let inst = delta_instance(48, 6, Ratio::new(1, 2));
        let mut st = DeltaState::new(&inst).unwrap();
        let mut ledger = CostLedger::new();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        st.process_request(Request::new(0, 6, 0), DeltaPolicy::Deterministic, &mut rng, &mut ledger)
            .unwrap();
        st.process_request(Request::new(12, 18, 1), DeltaPolicy::Deterministic, &mut rng, &mut ledger)
            .unwrap();
        // (18,6): both covered, both color 1, deg 1 each -> lower id 6.
        let rep = st
            .process_request(Request::new(18, 6, 2), DeltaPolicy::Deterministic, &mut rng, &mut ledger)
            .unwrap();
        assert!(rep.mono_at_arrival);
        assert_ne!(st.coloring().color(6), 1);
        assert_eq!(st.coloring().color(18), 1);
        st.audit_consistent(true).unwrap();
    }

    #[test]
    fn duplicate_edge_does_not_grow_degree() {
        let inst = delta_instance(40, 4, Ratio::new(1, 2));
        let mut st = DeltaState::new(&inst).unwrap();
        let mut ledger = CostLedger::new();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        st.process_request(Request::new(0, 4, 0), DeltaPolicy::Deterministic, &mut rng, &mut ledger)
            .unwrap();
        st.process_request(Request::new(0, 4, 1), DeltaPolicy::Deterministic, &mut rng, &mut ledger)
            .unwrap();
        assert_eq!(st.degree(0), 1);
        assert_eq!(st.degree(4), 1);
        assert_eq!(st.gm_edges().len(), 1);
        st.audit_consistent(true).unwrap();
    }

    #[test]
    fn degree_bound_is_enforced() {
        // Delta = 4, eps = 1/2: max degree 2.
        let inst = delta_instance(40, 4, Ratio::new(1, 2));
        let mut st = DeltaState::new(&inst).unwrap();
        let mut ledger = CostLedger::new();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        st.process_request(Request::new(0, 1, 0), DeltaPolicy::Deterministic, &mut rng, &mut ledger)
            .unwrap();
        st.process_request(Request::new(0, 2, 1), DeltaPolicy::Deterministic, &mut rng, &mut ledger)
            .unwrap();
        let err = st.process_request(
            Request::new(0, 3, 2),
            DeltaPolicy::Deterministic,
            &mut rng,
            &mut ledger,
        );
        assert!(matches!(err, Err(Error::DegreeViolation { v: 0 })));
    }

    #[test]
    fn deterministic_run_keeps_capacity_and_lists() {
        // Random mono-heavy sequence; audits after every step.
        let inst = delta_instance(60, 6, Ratio::new(1, 2));
        let mut st = DeltaState::new(&inst).unwrap();
        let mut ledger = CostLedger::new();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut seed = 13u64;
        let mut xs = move || {
            seed ^= seed << 13;
            seed ^= seed >> 7;
            seed ^= seed << 17;
            seed
        };
        let mut t = 0usize;
        for _ in 0..400 {
            let u = (xs() % 60) as Vertex;
            let v = (xs() % 60) as Vertex;
            if u == v || st.adj[u as usize].contains(&v) {
                continue;
            }
            match st.process_request(Request::new(u, v, t), DeltaPolicy::Deterministic, &mut rng, &mut ledger) {
                Ok(_) => {
                    st.audit_consistent(true).unwrap();
                    t += 1;
                }
                Err(Error::DegreeViolation { .. }) => continue,
                Err(e) => panic!("unexpected: {e}"),
            }
        }
        // Degree cap 3 on 60 vertices admits at most 90 edges.
        assert!(t >= 60, "sequence too short to be meaningful: {t}");
    }

    #[test]
    fn randomized_run_is_reproducible() {
        let inst = delta_instance(60, 6, Ratio::new(1, 2));
        let trace: Vec<(Vertex, Vertex)> = {
            let mut out = Vec::new();
            let mut seed = 29u64;
            let mut xs = move || {
                seed ^= seed << 13;
                seed ^= seed >> 7;
                seed ^= seed << 17;
                seed
            };
            let mut degs = vec![0usize; 60];
            let mut seen = std::collections::HashSet::new();
            // Degree cap 3 on 60 vertices allows at most 90 edges.
            while out.len() < 80 {
                let u = (xs() % 60) as Vertex;
                let v = (xs() % 60) as Vertex;
                if u == v || degs[u as usize] >= 3 || degs[v as usize] >= 3 {
                    continue;
                }
                if !seen.insert((u.min(v), u.max(v))) {
                    continue;
                }
                degs[u as usize] += 1;
                degs[v as usize] += 1;
                out.push((u, v));
            }
            out
        };
        let run = |seed: u64| {
            let mut st = DeltaState::new(&inst).unwrap();
            let mut ledger = CostLedger::new();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for (t, &(u, v)) in trace.iter().enumerate() {
                st.process_request(Request::new(u, v, t), DeltaPolicy::Randomized, &mut rng, &mut ledger)
                    .unwrap();
                st.audit_consistent(false).unwrap();
            }
            (ledger.total_cost, st.coloring().colors().to_vec())
        };
        assert_eq!(run(42), run(42));
        let (cost_a, _) = run(42);
        let (cost_b, _) = run(43);
        // Different seeds may coincide in cost by chance; equality of the
        // full trajectory under the same seed is the contract above.
        let _ = (cost_a, cost_b);
    }

    #[test]
    fn sample_index_is_exactly_uniform_at_small_m() {
        // The ceil mechanism partitions u64 into m equal blocks when m
        // divides 2^64; for m = 4 check block edges.
        struct Fixed(u64);
        impl RngCore for Fixed {
            fn next_u32(&mut self) -> u32 {
                self.next_u64() as u32
            }
            fn next_u64(&mut self) -> u64 {
                self.0
            }
            fn fill_bytes(&mut self, dest: &mut [u8]) {
                for b in dest.iter_mut() {
                    *b = 0;
                }
            }
            fn try_fill_bytes(&mut self, dest: &mut [u8]) -> std::result::Result<(), rand::Error> {
                self.fill_bytes(dest);
                Ok(())
            }
        }
        let idx = |x: u64, m: usize| DeltaState::sample_index(&mut Fixed(x), m);
        assert_eq!(idx(0, 4), 0);
        assert_eq!(idx(1 << 62, 4), 0);
        assert_eq!(idx((1 << 62) + 1, 4), 1);
        assert_eq!(idx(u64::MAX, 4), 3);
        assert_eq!(idx(u64::MAX, 1), 0);
    }

    /// Five requests at n = 12, Delta = 4, eps = 1/2 (capacity 4, degree
    /// bound 2) that exhaust every feasible color of the final target:
    ///
    /// 1. (2,3) lays a cross-colored edge so vertex 2 conflicts with 4;
    /// 2. (2,6) is monochromatic on color 3, so 2 moves to the emptier of
    ///    {1,2} — color 1, making load(1) = 4;
    /// 3. (6,10) is again monochromatic on 3 with 6 already covered, so 6
    ///    (conflicting with 1 and 3) moves to color 2, load(2) = 4;
    /// 4. (7,10) lays a cross-colored edge so 7 conflicts with color 3;
    /// 5. (7,3) is monochromatic on 4: target 7 conflicts with {3,4} and
    ///    both remaining colors sit at the capacity of 4.
    fn full_feasible_set_requests() -> (Instance, Vec<(Vertex, Vertex)>) {
        let inst = delta_instance(12, 4, Ratio::new(1, 2));
        (inst, vec![(2, 3), (2, 6), (6, 10), (7, 10), (7, 3)])
    }

    #[test]
    fn deterministic_rebalance_fires_when_feasible_colors_are_full() {
        let (inst, seq) = full_feasible_set_requests();
        let mut st = DeltaState::new(&inst).unwrap();
        let mut ledger = CostLedger::new();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let mut branches = Vec::new();
        for (t, &(u, v)) in seq.iter().enumerate() {
            let rep = st
                .process_request(Request::new(u, v, t), DeltaPolicy::Deterministic, &mut rng, &mut ledger)
                .unwrap();
            branches.push(rep.branch);
        }
        assert_eq!(
            branches,
            vec![
                Branch::NoOp,
                Branch::DeltaRecolor,
                Branch::DeltaRecolor,
                Branch::NoOp,
                Branch::DeltaDetRebalance,
            ]
        );
        assert_eq!(ledger.rebalance_calls, 1);
        // The equitable rebuild lands every class exactly on n/Delta.
        assert!(st.coloring().loads().iter().all(|&l| l == 3));
        st.audit_consistent(true).unwrap();
    }

    #[test]
    fn randomized_rebalance_fires_on_a_full_draw() {
        let (inst, seq) = full_feasible_set_requests();
        // The randomized rule draws uniformly from the feasible list, so
        // whether the final draw hits a full color depends on the stream;
        // scan for a seed where it does.
        let seed = (0..1000u64)
            .find(|&s| {
                let mut st = DeltaState::new(&inst).unwrap();
                let mut ledger = CostLedger::new();
                let mut rng = ChaCha8Rng::seed_from_u64(s);
                seq.iter().enumerate().any(|(t, &(u, v))| {
                    let rep = st
                        .process_request(Request::new(u, v, t), DeltaPolicy::Randomized, &mut rng, &mut ledger)
                        .unwrap();
                    rep.branch == Branch::DeltaRandRebalance
                })
            })
            .expect("some seed triggers the randomized rebuild");

        let mut st = DeltaState::new(&inst).unwrap();
        let mut ledger = CostLedger::new();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut rebalanced_at = None;
        for (t, &(u, v)) in seq.iter().enumerate() {
            let rep = st
                .process_request(Request::new(u, v, t), DeltaPolicy::Randomized, &mut rng, &mut ledger)
                .unwrap();
            if rep.branch == Branch::DeltaRandRebalance {
                rebalanced_at = Some(t);
                assert!(rep.rebalanced && rep.phase_started);
            }
        }
        assert!(rebalanced_at.is_some());
        assert_eq!(ledger.rebalance_calls, 1);
        // The rebuild closed the phase, recording its recoloring count.
        assert_eq!(st.completed_phase_recolors().len(), 1);
        assert_eq!(st.open_phase_recolors(), 0);
        st.audit_consistent(false).unwrap();
    }
}
