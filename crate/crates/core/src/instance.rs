//! Problem instances: vertex set, weights, initial coloring, capacities.

use crate::ratio::Ratio;
use crate::{Color, Error, Result, Vertex, Weight};

/// Which feasibility model a request sequence is interpreted under.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Model {
    /// Two clusters; the accumulated graph is promised 2-colorable and the
    /// maintained coloring must stay proper for all of it.
    Online2,
    /// Two clusters; only the current request's endpoints must differ in
    /// color, the accumulated graph may be arbitrary.
    FullyDynamic2,
    /// `k = Delta` colors, unit weights, degrees bounded by `(1-eps)*Delta`,
    /// per-color capacity `(1+eps)*n/Delta`.
    Delta,
}

impl Model {
    pub fn tag(&self) -> &'static str {
        match self {
            Model::Online2 => "online2",
            Model::FullyDynamic2 => "fully_dynamic2",
            Model::Delta => "delta",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Model> {
        match tag {
            "online2" => Some(Model::Online2),
            "fully_dynamic2" => Some(Model::FullyDynamic2),
            "delta" => Some(Model::Delta),
            _ => None,
        }
    }
}

/// An edge-insertion request. `t` is the 0-based position in the sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Request {
    pub u: Vertex,
    pub v: Vertex,
    pub t: usize,
}

impl Request {
    pub fn new(u: Vertex, v: Vertex, t: usize) -> Request {
        debug_assert_ne!(u, v, "request endpoints must differ");
        Request { u, v, t }
    }
}

/// A fixed problem instance shared by every algorithm run on it.
///
/// For the two-cluster models the base capacity is `b = sum(w)/2` per color
/// and the initial coloring must load each color with exactly `b` (the
/// offline baseline is held to capacity `b` at all times, including time 0).
/// For the `Delta` model all weights are 1, `Delta` divides `n` and the
/// initial coloring puts exactly `n/Delta` vertices on every color.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub model: Model,
    pub n: usize,
    /// Number of colors: 2 for the two-cluster models, `Delta` otherwise.
    pub k: Color,
    /// Per-vertex positive integer weights.
    pub w: Vec<Weight>,
    /// Initial coloring, values in `1..=k`.
    pub c0: Vec<Color>,
    /// Base per-color capacity: `sum(w)/2` for two clusters, `n/Delta` for
    /// the `Delta` model.
    pub b: Weight,
    /// Augmentation parameter, strictly between 0 and 1.
    pub eps: Ratio,
}

impl Instance {
    /// Validated constructor for any model.
    pub fn new(model: Model, k: Color, w: Vec<Weight>, c0: Vec<Color>, eps: Ratio) -> Result<Instance> {
        let n = w.len();
        let err = |msg: String| Err(Error::InvalidInstance(msg));
        if n < 2 {
            return err(format!("need at least 2 vertices, got {n}"));
        }
        if c0.len() != n {
            return err(format!("c0 has {} entries for {} vertices", c0.len(), n));
        }
        if !eps.in_unit_interval() {
            return err(format!("eps must lie strictly in (0,1), got {eps}"));
        }
        if let Some(v) = w.iter().position(|&x| x == 0) {
            return err(format!("vertex {v} has zero weight"));
        }
        if let Some(v) = c0.iter().position(|&c| c < 1 || c > k) {
            return err(format!("vertex {v} has initial color {} outside 1..={k}", c0[v]));
        }
        let total: u128 = w.iter().map(|&x| x as u128).sum();
        let b = match model {
            Model::Online2 | Model::FullyDynamic2 => {
                if k != 2 {
                    return err(format!("two-cluster models need k=2, got {k}"));
                }
                if total % 2 != 0 {
                    return err(format!("total weight {total} must be even"));
                }
                let b = (total / 2) as Weight;
                if let Some(v) = w.iter().position(|&x| x > b) {
                    return err(format!("vertex {v} weighs {} which exceeds half the total {b}", w[v]));
                }
                let load1: u128 = w
                    .iter()
                    .zip(&c0)
                    .filter(|&(_, &c)| c == 1)
                    .map(|(&x, _)| x as u128)
                    .sum();
                if load1 != b as u128 {
                    return err(format!(
                        "initial coloring loads color 1 with {load1}, must be exactly {b}"
                    ));
                }
                b
            }
            Model::Delta => {
                if k < 2 {
                    return err(format!("Delta model needs at least 2 colors, got {k}"));
                }
                if w.iter().any(|&x| x != 1) {
                    return err("Delta model requires unit weights".to_string());
                }
                if n % k as usize != 0 {
                    return err(format!("{k} colors must divide n={n}"));
                }
                let per = n / k as usize;
                let mut counts = vec![0usize; k as usize];
                for &c in &c0 {
                    counts[(c - 1) as usize] += 1;
                }
                if let Some(c) = counts.iter().position(|&cnt| cnt != per) {
                    return err(format!(
                        "initial coloring assigns {} vertices to color {}, must be exactly {per}",
                        counts[c],
                        c + 1
                    ));
                }
                per as Weight
            }
        };
        Ok(Instance { model, n, k, w, c0, b, eps })
    }

    /// Unit-weight two-cluster instance with the alternating initial
    /// coloring `1,2,1,2,...` (balanced by construction). `n` must be even.
    pub fn unit_two_cluster(model: Model, n: usize, eps: Ratio) -> Result<Instance> {
        let c0 = (0..n).map(|v| 1 + (v % 2) as Color).collect();
        Instance::new(model, 2, vec![1; n], c0, eps)
    }

    /// `Delta`-model instance with the round-robin initial coloring
    /// `c0(v) = (v mod Delta) + 1`, which puts exactly `n/Delta` vertices on
    /// every color.
    pub fn delta_uniform(n: usize, delta: Color, eps: Ratio) -> Result<Instance> {
        let c0 = (0..n).map(|v| 1 + (v % delta as usize) as Color).collect();
        Instance::new(Model::Delta, delta, vec![1; n], c0, eps)
    }

    /// Total vertex weight.
    pub fn total_weight(&self) -> Weight {
        self.w.iter().sum()
    }

    /// The augmented per-color capacity `(1+eps) * b` as an exact rational.
    pub fn augmented_capacity(&self) -> Ratio {
        let f = self.eps.one_plus();
        Ratio::new(f.num() * self.b, f.den())
    }

    /// The degree bound `(1-eps) * Delta` of the `Delta` model, as an exact
    /// rational. Only meaningful for [`Model::Delta`].
    pub fn degree_bound(&self) -> Ratio {
        let f = self.eps.one_minus();
        Ratio::new(f.num() * self.k as u64, f.den())
    }
}
