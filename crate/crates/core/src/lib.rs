//! Simulation laboratory for capacitated online and fully dynamic graph
//! recoloring.
//!
//! The crate implements four algorithm families over a shared core:
//!
//! * a phase-based greedy recoloring algorithm for the fully dynamic
//!   two-cluster model with `(1+eps)` capacity augmentation ([`greedy`]),
//! * an estimate-guided online algorithm for the two-cluster model that
//!   delegates to the greedy algorithm when its estimates collapse
//!   ([`follow`]),
//! * deterministic and randomized recoloring policies for the
//!   degree-bounded `Delta`-color model with overprovisioned capacities
//!   ([`delta`]),
//! * a two-cluster component rebalancer: an exact pseudo-polynomial solver
//!   and a trimmed-list approximation scheme ([`rebalance`]).
//!
//! Around the algorithms sit adaptive lower-bound request generators
//! ([`adversary`]), exact offline baselines ([`oracle`]), a line-oriented
//! trace format ([`trace`]), and the experiment runner ([`run`]) together
//! with the acceptance suite ([`acceptance`]).
//!
//! All algorithm cores use integer (or exact rational) arithmetic only, so
//! a `(trace, algorithm, seed)` triple reproduces bit-identical results on
//! any platform.

pub mod acceptance;
pub mod adversary;
pub mod audit;
pub mod coloring;
pub mod components;
pub mod delta;
pub mod equitable;
pub mod follow;
pub mod greedy;
pub mod instance;
pub mod oracle;
pub mod ratio;
pub mod rebalance;
pub mod run;
pub mod trace;

pub use audit::{Branch, RecolorEvent, StepReport};
pub use coloring::{ColoringState, CostLedger, RecolorMode};
pub use components::{ComponentTracker, EdgeClass, MergeOutcome};
pub use instance::{Instance, Model, Request};
pub use ratio::Ratio;

/// Uniform index in `0..m` from a single 64-bit draw: the pre-drawn
/// `X in [0,1]` view `ceil(X*m)` computed in integers, so identical seeds
/// give identical choices on every platform.
pub(crate) fn uniform_index<R: rand::RngCore>(rng: &mut R, m: usize) -> usize {
    debug_assert!(m > 0);
    let x = rng.next_u64();
    let idx = ((x as u128 * m as u128 + ((1u128 << 64) - 1)) >> 64) as usize;
    idx.clamp(1, m) - 1
}

/// Vertex identifier. Vertices are numbered `0..n`.
pub type Vertex = u32;

/// Color identifier. Colors are numbered `1..=k`.
pub type Color = u32;

/// Vertex weight in integer units.
pub type Weight = u64;

/// Errors shared across the crate.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// A checked recolor would push a color over its capacity. Signals an
    /// algorithm bug, never a valid runtime state.
    #[error("capacity violated: moving vertex {v} to color {color} overfills it")]
    CapacityViolation { v: Vertex, color: Color },

    /// An operation requiring a bipartite component was applied to a
    /// component that closed an odd cycle.
    #[error("component rooted at {root} contains an odd cycle")]
    OddComponent { root: Vertex },

    /// No balanced assignment of the required weight exists.
    #[error("no assignment achieves the required cluster weight")]
    Infeasible,

    /// The request sequence violates the model assumption of the running
    /// algorithm (for example an odd cycle under the online two-cluster
    /// model).
    #[error("instance violates its model assumption: {0}")]
    InfeasibleInstance(String),

    /// Adding the request would exceed the degree bound of the
    /// degree-bounded model.
    #[error("degree bound exceeded at vertex {v}")]
    DegreeViolation { v: Vertex },

    /// An adversary ran out of fresh vertices.
    #[error("adversary exhausted its fresh-vertex budget")]
    Exhausted,

    /// The input is too large for an exact computation.
    #[error("instance too large for exact computation: {0}")]
    ScaleExceeded(String),

    /// Static instance validation failed.
    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    /// Text input (trace or matrix file) failed to parse.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// An internal solver gave up within its configured budget. Indicates a
    /// scale the implementation does not support, not an invalid input.
    #[error("internal solver budget exhausted: {0}")]
    SolverBudget(String),

    /// A post-step or post-run consistency audit failed. Always an
    /// algorithm bug, never a property of the input.
    #[error("invariant audit failed: {0}")]
    Audit(String),
}

impl Error {
    /// Process exit code for the failure class: 1 for problems with the
    /// input or its scale, 2 for violated runtime invariants.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse { .. }
            | Error::InvalidInstance(_)
            | Error::ScaleExceeded(_)
            | Error::DegreeViolation { .. }
            | Error::InfeasibleInstance(_)
            | Error::OddComponent { .. }
            | Error::Infeasible
            | Error::Exhausted => 1,
            Error::CapacityViolation { .. } | Error::SolverBudget(_) | Error::Audit(_) => 2,
        }
    }
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
