//! Capacity-aware coloring state and cost accounting.

use crate::audit::RecolorEvent;
use crate::ratio::Ratio;
use crate::{Color, Error, Result, Vertex, Weight};

/// How a recolor interacts with the capacity check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RecolorMode {
    /// Refuse to commit a change that would overfill the target color.
    Checked,
    /// Commit unconditionally. Used for bulk recolorings whose end state
    /// the caller guarantees (or measures) separately; individual commits
    /// may transiently overfill a color.
    Unchecked,
}

/// Current color per vertex plus exact per-color load bookkeeping.
///
/// The per-color capacity is an exact rational (augmented capacities like
/// `(1+eps)B` are generally not integers); loads are integers. Residual
/// queries cross-multiply, so no rounding ever occurs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColoringState {
    c: Vec<Color>,
    load: Vec<Weight>,
    cap: Ratio,
}

impl ColoringState {
    /// Builds the state for colors `1..=k` with per-color capacity `cap`.
    pub fn new(k: Color, cap: Ratio, w: &[Weight], c0: &[Color]) -> ColoringState {
        assert_eq!(w.len(), c0.len());
        let mut load = vec![0; k as usize];
        for (v, &c) in c0.iter().enumerate() {
            load[(c - 1) as usize] += w[v];
        }
        ColoringState { c: c0.to_vec(), load, cap }
    }

    pub fn k(&self) -> Color {
        self.load.len() as Color
    }

    pub fn color(&self, v: Vertex) -> Color {
        self.c[v as usize]
    }

    pub fn colors(&self) -> &[Color] {
        &self.c
    }

    pub fn load(&self, color: Color) -> Weight {
        self.load[(color - 1) as usize]
    }

    pub fn loads(&self) -> &[Weight] {
        &self.load
    }

    pub fn capacity(&self) -> Ratio {
        self.cap
    }

    /// Exact test `capacity - load(color) >= needed`.
    pub fn residual_at_least(&self, color: Color, needed: Weight) -> bool {
        let load = self.load[(color - 1) as usize] as u128 + needed as u128;
        load * self.cap.den() as u128 <= self.cap.num() as u128
    }

    /// Exact test `capacity - load(color) > 0`.
    pub fn residual_positive(&self, color: Color) -> bool {
        (self.load[(color - 1) as usize] as u128) * (self.cap.den() as u128)
            < (self.cap.num() as u128)
    }

    /// Exact test `load(color) <= capacity`.
    pub fn within_capacity(&self, color: Color) -> bool {
        (self.load[(color - 1) as usize] as u128) * (self.cap.den() as u128)
            <= (self.cap.num() as u128)
    }

    /// True iff no color is over its capacity.
    pub fn all_within_capacity(&self) -> bool {
        (1..=self.k()).all(|i| self.within_capacity(i))
    }

    /// Recolors `v` to `color`, charging `w[v]` to the ledger iff the color
    /// actually changes. In [`RecolorMode::Checked`] the commit fails with
    /// [`Error::CapacityViolation`] if the target color lacks residual
    /// capacity for `w[v]`; the state is left untouched in that case.
    pub fn recolor(
        &mut self,
        v: Vertex,
        color: Color,
        w: &[Weight],
        ledger: &mut CostLedger,
        mode: RecolorMode,
    ) -> Result<()> {
        debug_assert!(color >= 1 && color <= self.k());
        let old = self.c[v as usize];
        if old == color {
            return Ok(());
        }
        let weight = w[v as usize];
        if mode == RecolorMode::Checked && !self.residual_at_least(color, weight) {
            return Err(Error::CapacityViolation { v, color });
        }
        self.load[(old - 1) as usize] -= weight;
        self.load[(color - 1) as usize] += weight;
        self.c[v as usize] = color;
        ledger.charge(v, old, color, weight);
        Ok(())
    }

    /// Recomputes loads from scratch and compares with the running tallies.
    pub fn reconciles(&self, w: &[Weight]) -> bool {
        let mut load = vec![0; self.load.len()];
        for (v, &c) in self.c.iter().enumerate() {
            load[(c - 1) as usize] += w[v];
        }
        load == self.load
    }
}

/// Accumulated cost and event counters for one algorithm run.
///
/// `total_cost` sums `w(v)` over every committed color change; free
/// recolors (target equals current color) charge nothing and are not
/// counted as events. `rebalance_calls` counts rebalancer invocations by
/// the owning algorithm, including ones that found no feasible assignment.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CostLedger {
    pub total_cost: Weight,
    pub recolor_events: u64,
    pub rebalance_calls: u64,
    pub phase_count: u64,
    step_events: Vec<RecolorEvent>,
}

impl CostLedger {
    pub fn new() -> CostLedger {
        CostLedger::default()
    }

    fn charge(&mut self, v: Vertex, from: Color, to: Color, weight: Weight) {
        self.total_cost += weight;
        self.recolor_events += 1;
        self.step_events.push(RecolorEvent { v, from, to });
    }

    pub fn note_rebalance(&mut self) {
        self.rebalance_calls += 1;
    }

    pub fn note_phase(&mut self) {
        self.phase_count += 1;
    }

    /// Drains the recolor events committed since the previous drain.
    /// Algorithms call this once per step to populate the step report.
    pub fn take_step_events(&mut self) -> Vec<RecolorEvent> {
        std::mem::take(&mut self.step_events)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn state_and_ledger() -> (ColoringState, CostLedger, Vec<Weight>) {
        // Two colors, capacity 13/2: moving one weight-3 vertex across
        // fits (load 6), stacking both weight-3 vertices would not.
        let w = vec![3, 3];
        let st = ColoringState::new(2, Ratio::new(13, 2), &w, &[1, 2]);
        (st, CostLedger::new(), w)
    }

    #[test]
    fn recolor_moves_load_and_charges_weight() {
        let (mut st, mut ledger, w) = state_and_ledger();
        st.recolor(0, 2, &w, &mut ledger, RecolorMode::Checked).unwrap();
        assert_eq!(st.color(0), 2);
        assert_eq!(st.loads(), &[0, 6]);
        assert_eq!(ledger.total_cost, 3);
        assert_eq!(ledger.recolor_events, 1);
        assert!(st.reconciles(&w));
    }

    #[test]
    fn recolor_to_same_color_is_free() {
        let (mut st, mut ledger, w) = state_and_ledger();
        st.recolor(0, 1, &w, &mut ledger, RecolorMode::Checked).unwrap();
        assert_eq!(ledger.total_cost, 0);
        assert_eq!(ledger.recolor_events, 0);
        assert!(ledger.take_step_events().is_empty());
    }

    #[test]
    fn checked_recolor_rejects_overfill() {
        let w = vec![3, 3];
        // Capacity 9/2: color 2 at load 3 has positive residual but no
        // room for 3 more.
        let mut st = ColoringState::new(2, Ratio::new(9, 2), &w, &[1, 2]);
        let mut ledger = CostLedger::new();
        let err = st.recolor(0, 2, &w, &mut ledger, RecolorMode::Checked);
        assert!(st.residual_positive(2));
        assert_eq!(err, Err(Error::CapacityViolation { v: 0, color: 2 }));
        assert_eq!(st.color(0), 1);
        assert_eq!(ledger.total_cost, 0); // failed commit charges nothing
    }

    #[test]
    fn unchecked_recolor_commits_overfill() {
        let w = vec![3, 3];
        let mut st = ColoringState::new(2, Ratio::new(9, 2), &w, &[1, 2]);
        let mut ledger = CostLedger::new();
        st.recolor(0, 2, &w, &mut ledger, RecolorMode::Unchecked).unwrap();
        assert_eq!(st.loads(), &[0, 6]);
        assert!(!st.within_capacity(2));
        assert!(!st.all_within_capacity());
    }

    #[test]
    fn residual_tests_are_exact_at_fractional_capacity() {
        let w = vec![1; 4];
        // Capacity 3/2 per color: one unit fits, two do not.
        let st = ColoringState::new(2, Ratio::new(3, 2), &w, &[1, 1, 2, 2]);
        assert!(!st.residual_at_least(1, 1)); // 2 + 1 > 1.5... already over
        let st2 = ColoringState::new(2, Ratio::new(3, 2), &[1, 1], &[1, 2]);
        assert!(!st2.residual_at_least(1, 1)); // 1 + 1 = 2 > 1.5
        assert!(st2.residual_positive(1)); // 1 < 1.5
    }

    #[test]
    fn step_events_drain_between_steps() {
        let (mut st, mut ledger, w) = state_and_ledger();
        st.recolor(0, 2, &w, &mut ledger, RecolorMode::Unchecked).unwrap();
        let events = ledger.take_step_events();
        assert_eq!(events.len(), 1);
        assert_eq!(events[0], RecolorEvent { v: 0, from: 1, to: 2 });
        assert!(ledger.take_step_events().is_empty());
    }
}
