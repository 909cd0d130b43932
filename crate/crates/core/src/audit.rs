//! Per-step audit records and the independent cost replayer.
//!
//! Every algorithm step can emit a [`StepReport`] naming the rule that
//! fired, the recolor events it performed and the cost it charged. The
//! replayer re-derives total cost from the raw events alone, so a ledger
//! bug cannot hide: the two accountings must agree exactly.

use crate::{Color, Vertex, Weight};

/// One committed color change. `from == to` never appears in reports;
/// no-op recolors are free and unrecorded.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RecolorEvent {
    pub v: Vertex,
    pub from: Color,
    pub to: Color,
}

/// Which rule of the owning algorithm handled a request.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// Request satisfied by the current coloring; nothing to do.
    NoOp,
    /// Same component, endpoints on the same side: the component closed an
    /// odd cycle. One endpoint is recolored and a new phase starts.
    OddCycleReset,
    /// Cross-component merge whose endpoint colors already differ.
    MergeAligned,
    /// Cross-component merge resolved by flipping the lighter component.
    FlipSmall,
    /// Cross-component merge resolved by a full two-cluster rebalance.
    RebalanceApplied,
    /// The rebalancer found no feasible assignment; one endpoint is
    /// recolored and a new phase starts.
    RebalanceReset,
    /// Estimate-guided mode: lighter component flipped under an unchanged
    /// weight estimate.
    FollowFlip,
    /// Estimate-guided mode: estimate raised and the merged component
    /// recolored to a recomputed optimal orientation (possibly free).
    FollowRecompute,
    /// Estimate-guided mode handed this request and all later ones to the
    /// phase-based greedy algorithm.
    Delegated,
    /// Degree-bounded model: one endpoint recolored to a feasible color.
    DeltaRecolor,
    /// Degree-bounded model: deterministic equitable rebuild of the
    /// coloring.
    DeltaDetRebalance,
    /// Degree-bounded model: randomized rebuild of the coloring.
    DeltaRandRebalance,
}

impl Branch {
    pub fn name(&self) -> &'static str {
        match self {
            Branch::NoOp => "noop",
            Branch::OddCycleReset => "odd-cycle-reset",
            Branch::MergeAligned => "merge-aligned",
            Branch::FlipSmall => "flip-small",
            Branch::RebalanceApplied => "rebalance-applied",
            Branch::RebalanceReset => "rebalance-reset",
            Branch::FollowFlip => "follow-flip",
            Branch::FollowRecompute => "follow-recompute",
            Branch::Delegated => "delegated",
            Branch::DeltaRecolor => "delta-recolor",
            Branch::DeltaDetRebalance => "delta-det-rebalance",
            Branch::DeltaRandRebalance => "delta-rand-rebalance",
        }
    }
}

impl std::fmt::Display for Branch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Audit record for one processed request.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepReport {
    /// 0-based request index.
    pub t: usize,
    pub branch: Branch,
    /// Weight charged by this step; equals the summed weight of `recolors`.
    pub cost_delta: Weight,
    /// Whether the request's endpoints shared a color when it arrived.
    pub mono_at_arrival: bool,
    /// Whether this step started a new phase.
    pub phase_started: bool,
    /// Whether this step invoked a rebalancer.
    pub rebalanced: bool,
    /// Every committed color change, in commit order.
    pub recolors: Vec<RecolorEvent>,
}

/// Re-derives total cost from raw recolor events.
pub fn replay_total_cost(w: &[Weight], reports: &[StepReport]) -> Weight {
    reports
        .iter()
        .flat_map(|r| &r.recolors)
        .filter(|e| e.from != e.to)
        .map(|e| w[e.v as usize])
        .sum()
}

/// Checks a report stream against the ledger total: per-step cost deltas
/// must equal the summed weight of that step's events, and the stream total
/// must equal `ledger_total`. Returns a description of the first mismatch.
pub fn verify_reports(
    w: &[Weight],
    reports: &[StepReport],
    ledger_total: Weight,
) -> std::result::Result<(), String> {
    for r in reports {
        let step: Weight = r
            .recolors
            .iter()
            .filter(|e| e.from != e.to)
            .map(|e| w[e.v as usize])
            .sum();
        if step != r.cost_delta {
            return Err(format!(
                "step {}: events sum to {} but cost_delta is {}",
                r.t, step, r.cost_delta
            ));
        }
    }
    let total = replay_total_cost(w, reports);
    if total != ledger_total {
        return Err(format!("replayed total {total} != ledger total {ledger_total}"));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn step(t: usize, cost: Weight, recolors: Vec<RecolorEvent>) -> StepReport {
        StepReport {
            t,
            branch: Branch::DeltaRecolor,
            cost_delta: cost,
            mono_at_arrival: true,
            phase_started: false,
            rebalanced: false,
            recolors,
        }
    }

    #[test]
    fn replay_sums_event_weights() {
        let w = vec![3, 5, 7];
        let reports = vec![
            step(0, 3, vec![RecolorEvent { v: 0, from: 1, to: 2 }]),
            step(1, 12, vec![
                RecolorEvent { v: 1, from: 2, to: 1 },
                RecolorEvent { v: 2, from: 1, to: 2 },
            ]),
        ];
        assert_eq!(replay_total_cost(&w, &reports), 15);
        assert!(verify_reports(&w, &reports, 15).is_ok());
    }

    #[test]
    fn mismatched_step_delta_caught() {
        let w = vec![3];
        let reports = vec![step(0, 2, vec![RecolorEvent { v: 0, from: 1, to: 2 }])];
        assert!(verify_reports(&w, &reports, 2).is_err());
    }

    #[test]
    fn mismatched_total_caught() {
        let w = vec![3];
        let reports = vec![step(0, 3, vec![RecolorEvent { v: 0, from: 1, to: 2 }])];
        assert!(verify_reports(&w, &reports, 4).is_err());
    }
}
