//! Estimate-guided online recoloring for the two-cluster model.
//!
//! `FollowGreedy` serves request sequences whose graph stays bipartite and
//! keeps the entire graph properly colored at all times (not only the
//! current edge). Each live component `P` carries an estimated weight
//! `E(P)`, set to the component weight at creation and at every
//! recomputation; merges keep the surviving root's estimate and discard
//! the absorbed one's. Requests are handled as follows:
//!
//! * merging is by weight, lighter into heavier (ties keep the requesting
//!   endpoint's component);
//! * if the merged weight exceeds `(1+eps/4)E(P)`, the estimate is reset
//!   to the current weight and the component is recolored to the
//!   orientation closest to the initial coloring, provided the simulated
//!   post-state respects capacity; otherwise the run delegates;
//! * below the threshold, a merge whose endpoints collide flips the
//!   absorbed side if residual capacities permit, else delegates; a merge
//!   whose endpoints already differ costs nothing.
//!
//! Delegation abandons the whole-graph guarantee: the current coloring is
//! handed to [`GreedyRecoloring`], whose construction starts a phase (a
//! rebalance unless loads are already near-balanced), and the live request
//! is processed there exactly once. All later requests route to the
//! delegate.
//!
//! A request closing an odd cycle is a model violation in this setting and
//! surfaces as [`Error::InfeasibleInstance`].

use crate::audit::{Branch, StepReport};
use crate::coloring::{ColoringState, CostLedger, RecolorMode};
use crate::components::{ComponentTracker, EdgeClass, MergeOutcome};
use crate::greedy::GreedyRecoloring;
use crate::instance::{Instance, Request};
use crate::{Error, Result, Vertex, Weight};

/// Whether the algorithm still maintains a proper coloring of the whole
/// graph or has handed control to the fully dynamic greedy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FollowMode {
    Following,
    Delegated,
}

#[derive(Debug, Clone)]
enum Inner {
    Following { state: ColoringState, tracker: ComponentTracker },
    Delegated(Box<GreedyRecoloring>),
    /// Transient marker while ownership moves into the delegate.
    Handover,
}

/// Online two-cluster recoloring with lazily recomputed orientations.
#[derive(Debug, Clone)]
pub struct FollowGreedy {
    inst: Instance,
    inner: Inner,
}

enum Action {
    Done(Branch),
    Delegate,
}

impl FollowGreedy {
    /// Starts from the instance's initial coloring with singleton
    /// components, each estimating its own weight. Requires `k = 2` and
    /// `eps >= 8/n` so that delegation is always available.
    pub fn new(inst: &Instance) -> Result<FollowGreedy> {
        if inst.k != 2 {
            return Err(Error::InvalidInstance(format!(
                "two-cluster algorithm got k={}",
                inst.k
            )));
        }
        if inst.eps.cmp_frac(8, inst.n as u64) == std::cmp::Ordering::Less {
            return Err(Error::InvalidInstance(format!(
                "eps = {} is below 8/n = 8/{}",
                inst.eps, inst.n
            )));
        }
        let state = ColoringState::new(inst.k, inst.augmented_capacity(), &inst.w, &inst.c0);
        let tracker = ComponentTracker::new(&inst.w, state.colors());
        Ok(FollowGreedy { inst: inst.clone(), inner: Inner::Following { state, tracker } })
    }

    pub fn mode(&self) -> FollowMode {
        match self.inner {
            Inner::Following { .. } => FollowMode::Following,
            Inner::Delegated(_) => FollowMode::Delegated,
            Inner::Handover => unreachable!("handover is never observable"),
        }
    }

    pub fn instance(&self) -> &Instance {
        &self.inst
    }

    pub fn coloring(&self) -> &ColoringState {
        match &self.inner {
            Inner::Following { state, .. } => state,
            Inner::Delegated(g) => g.coloring(),
            Inner::Handover => unreachable!("handover is never observable"),
        }
    }

    /// The delegate, once delegation has happened.
    pub fn delegate(&self) -> Option<&GreedyRecoloring> {
        match &self.inner {
            Inner::Delegated(g) => Some(g),
            _ => None,
        }
    }

    /// Handles one request. In `Following` mode the coloring stays proper
    /// for the entire graph seen so far; in `Delegated` mode the request is
    /// forwarded to the fully dynamic greedy.
    pub fn process_request(&mut self, req: Request, ledger: &mut CostLedger) -> Result<StepReport> {
        if let Inner::Delegated(g) = &mut self.inner {
            return g.process_request(req, ledger);
        }
        let cost_before = ledger.total_cost;
        let rebalances_before = ledger.rebalance_calls;
        let (u, v) = (req.u, req.v);
        debug_assert_ne!(u, v);

        let Inner::Following { state, .. } = &self.inner else {
            unreachable!("handover is never observable")
        };
        let mono = state.color(u) == state.color(v);

        match self.following_step(u, v, ledger)? {
            Action::Done(branch) => {
                let Inner::Following { state, .. } = &self.inner else { unreachable!() };
                debug_assert_ne!(state.color(u), state.color(v));
                Ok(StepReport {
                    t: req.t,
                    branch,
                    cost_delta: ledger.total_cost - cost_before,
                    mono_at_arrival: mono,
                    phase_started: false,
                    rebalanced: false,
                    recolors: ledger.take_step_events(),
                })
            }
            Action::Delegate => {
                let prev = std::mem::replace(&mut self.inner, Inner::Handover);
                let Inner::Following { state, .. } = prev else { unreachable!() };
                let mut g = GreedyRecoloring::from_state(self.inst.clone(), state, ledger)?;
                let inner_report = g.process_request(req, ledger)?;
                self.inner = Inner::Delegated(Box::new(g));
                Ok(StepReport {
                    t: req.t,
                    branch: Branch::Delegated,
                    cost_delta: ledger.total_cost - cost_before,
                    mono_at_arrival: mono,
                    phase_started: true,
                    rebalanced: ledger.rebalance_calls > rebalances_before,
                    recolors: inner_report.recolors,
                })
            }
        }
    }

    /// The `Following`-mode step body. Mutates coloring and tracker for
    /// every outcome except delegation, which is left to the caller so the
    /// coloring can be moved into the delegate.
    fn following_step(&mut self, u: Vertex, v: Vertex, ledger: &mut CostLedger) -> Result<Action> {
        let inst = &self.inst;
        let Inner::Following { state, tracker } = &mut self.inner else {
            unreachable!("caller checked the mode")
        };
        let cap = inst.augmented_capacity();
        let fits = |load: Weight| (load as u128) * (cap.den() as u128) <= cap.num() as u128;

        match tracker.classify(u, v) {
            EdgeClass::SameOpposite { .. } => Ok(Action::Done(Branch::NoOp)),
            EdgeClass::SameSame { .. } => Err(Error::InfeasibleInstance(format!(
                "request ({u}, {v}) closes an odd cycle; the online model promises a bipartite graph"
            ))),
            EdgeClass::Cross { root_u, root_v } => {
                // Actual per-color weight of the component about to be
                // absorbed; valid pre-merge because the coloring always
                // equals the tracker mapping in this mode.
                let absorbed_pre = if tracker.weight(root_v) > tracker.weight(root_u) {
                    root_u
                } else {
                    root_v
                };
                let ab_on1 = tracker.weight_on_color(absorbed_pre, 1);
                let ab_on2 = tracker.weight_on_color(absorbed_pre, 2);

                let outcome = tracker.merge(u, v);
                let MergeOutcome::Merged { root, absorbed_start, orientation_match, .. } = outcome
                else {
                    unreachable!("classify said cross-component")
                };
                let w_p = tracker.weight(root);
                let e_p = tracker.estimate(root);
                let (p, q) = (inst.eps.num() as u128, inst.eps.den() as u128);
                let over = (w_p as u128) * 4 * q > (4 * q + p) * (e_p as u128);

                if over {
                    // Reset the estimate, then recolor to the orientation
                    // closest to the initial coloring if capacity allows.
                    tracker.set_estimate(root, w_p);
                    let (m, _) = tracker
                        .optimal_orientation(root, &inst.c0)
                        .expect("components stay bipartite in following mode");
                    let members: Vec<Vertex> = tracker.members(root).to_vec();
                    let mut on = [0 as Weight; 2];
                    for &x in &members {
                        on[(state.color(x) - 1) as usize] += inst.w[x as usize];
                    }
                    let sides = tracker.side_weights(root);
                    let new_on1 = sides[(m - 1) as usize];
                    let l1 = state.load(1) - on[0] + new_on1;
                    let l2 = state.load(2) - on[1] + (w_p - new_on1);
                    if fits(l1) && fits(l2) {
                        tracker.set_orientation(root, (m - 1) as u8);
                        for &x in &members {
                            let target = tracker.mapped_color(x);
                            state
                                .recolor(x, target, &inst.w, ledger, RecolorMode::Unchecked)
                                .expect("unchecked recolor cannot fail");
                        }
                        Ok(Action::Done(Branch::FollowRecompute))
                    } else {
                        Ok(Action::Delegate)
                    }
                } else if orientation_match {
                    Ok(Action::Done(Branch::MergeAligned))
                } else {
                    // Flip the absorbed side if residual capacities allow
                    // swapping its per-color weights.
                    let l1 = state.load(1) - ab_on1 + ab_on2;
                    let l2 = state.load(2) - ab_on2 + ab_on1;
                    if fits(l1) && fits(l2) {
                        let len = tracker.members(root).len();
                        for j in absorbed_start..len {
                            let x = tracker.members(root)[j];
                            let target = tracker.mapped_color(x);
                            state
                                .recolor(x, target, &inst.w, ledger, RecolorMode::Unchecked)
                                .expect("unchecked recolor cannot fail");
                        }
                        Ok(Action::Done(Branch::FollowFlip))
                    } else {
                        Ok(Action::Delegate)
                    }
                }
            }
        }
    }

    /// Test support: in `Following` mode checks that the coloring equals
    /// the tracker mapping everywhere, loads reconcile and respect
    /// capacity, and every live component keeps `E(P) <= w(P) <=
    /// (1+eps/4)E(P)`. In `Delegated` mode defers to the delegate's audit.
    pub fn audit_consistent(&mut self) -> std::result::Result<(), String> {
        let inst = self.inst.clone();
        match &mut self.inner {
            Inner::Delegated(g) => g.audit_consistent(),
            Inner::Handover => unreachable!("handover is never observable"),
            Inner::Following { state, tracker } => {
                for x in 0..inst.n as Vertex {
                    let mapped = tracker.mapped_color(x);
                    if mapped != state.color(x) {
                        return Err(format!(
                            "vertex {x}: tracker maps to {mapped}, actual color {}",
                            state.color(x)
                        ));
                    }
                }
                if !state.reconciles(&inst.w) {
                    return Err("load bookkeeping does not reconcile".to_string());
                }
                if !state.all_within_capacity() {
                    return Err(format!("cluster loads {:?} exceed capacity", state.loads()));
                }
                let roots: Vec<Vertex> = tracker.roots().collect();
                let (p, q) = (inst.eps.num() as u128, inst.eps.den() as u128);
                for r in roots {
                    let w_p = tracker.weight(r) as u128;
                    let e_p = tracker.estimate(r) as u128;
                    if e_p > w_p {
                        return Err(format!("root {r}: estimate {e_p} above weight {w_p}"));
                    }
                    if 4 * q * w_p > (4 * q + p) * e_p {
                        return Err(format!(
                            "root {r}: weight {w_p} exceeds (1+eps/4) * estimate {e_p}"
                        ));
                    }
                }
                Ok(())
            }
        }
    }

    /// Test support: checks the per-component deviation bound in
    /// `Following` mode. For every live component `P`, the current
    /// coloring's weighted distance from the initial coloring exceeds the
    /// optimal orientation's distance by at most `(eps/4) * w(P)`.
    pub fn audit_deviation(&mut self) -> std::result::Result<(), String> {
        let inst = self.inst.clone();
        let Inner::Following { state, tracker } = &mut self.inner else {
            return Ok(());
        };
        let roots: Vec<Vertex> = tracker.roots().collect();
        let (p, q) = (inst.eps.num() as u128, inst.eps.den() as u128);
        for r in roots {
            let members: Vec<Vertex> = tracker.members(r).to_vec();
            let mut d_c: Weight = 0;
            for &x in &members {
                if state.color(x) != inst.c0[x as usize] {
                    d_c += inst.w[x as usize];
                }
            }
            let (_, d_m) = tracker
                .optimal_orientation(r, &inst.c0)
                .map_err(|e| format!("root {r}: {e}"))?;
            let w_p = tracker.weight(r);
            // d_c <= d_m + (eps/4) w  <=>  4q d_c <= 4q d_m + p w
            if 4 * q * (d_c as u128) > 4 * q * (d_m as u128) + p * (w_p as u128) {
                return Err(format!(
                    "root {r}: deviation {d_c} exceeds optimal {d_m} + eps/4 * {w_p}"
                ));
            }
        }
        Ok(())
    }
}
