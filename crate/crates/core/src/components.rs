//! Union-find over request edges with bipartition parity, per-component
//! side weights, orientation, and lazily updated weight estimates.
//!
//! Every vertex carries a parity bit relative to its parent; the
//! cumulative parity to the root splits a bipartite component into side 0
//! and side 1. The root additionally stores an orientation bit mapping
//! parity to concrete colors: a vertex with cumulative parity `p` in a
//! component with orientation `o` is mapped to color `1 + (p ^ o)`.
//! Algorithms keep this mapping consistent with the actual coloring
//! between steps; within a step, a merge of two same-colored endpoints
//! leaves the absorbed side temporarily mapped to the opposite of its
//! actual colors until the step's recoloring rule (flip, rebalance or
//! phase reset) reconciles the two.
//!
//! Determinism: merges keep the heavier-by-weight root; on equal weights
//! the root of the first argument (by convention the current request's
//! `u` endpoint) survives.

use crate::{Color, Error, Result, Vertex, Weight};

/// Per-component bookkeeping stored at the root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompInfo {
    /// Total member weight on parity side 0 / side 1.
    pub w_side: [Weight; 2],
    /// Member count on parity side 0 / side 1.
    pub size_side: [u32; 2],
    /// All member vertices; absorbed components append to the survivor.
    pub members: Vec<Vertex>,
    /// Parity side 0 is mapped to color `1 + orientation`.
    pub orientation: u8,
    /// Lazily updated weight estimate `E(P)` (used by the estimate-guided
    /// algorithm; initialized to the vertex weight for singletons).
    pub estimate: Weight,
    /// Set once the component closed an odd cycle; parity queries remain
    /// valid for the spanning structure but no proper 2-coloring exists.
    pub odd: bool,
}

impl CompInfo {
    pub fn weight(&self) -> Weight {
        self.w_side[0] + self.w_side[1]
    }

    pub fn size(&self) -> u32 {
        self.size_side[0] + self.size_side[1]
    }
}

/// How a request's endpoints relate before any merge.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeClass {
    /// Same component, opposite parity: the edge is consistent.
    SameOpposite { root: Vertex },
    /// Same component, equal parity: the edge closes an odd cycle.
    SameSame { root: Vertex },
    /// Distinct components.
    Cross { root_u: Vertex, root_v: Vertex },
}

/// Result of [`ComponentTracker::merge`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MergeOutcome {
    /// Endpoints already connected with opposite parity; nothing changed.
    SameComponentBipartite { root: Vertex },
    /// Endpoints already connected with equal parity; the odd flag is now
    /// set on the component.
    SameComponentOdd { root: Vertex },
    /// Two components were united under `root` (the heavier one).
    Merged {
        root: Vertex,
        /// Former root of the absorbed (lighter) component.
        absorbed_root: Vertex,
        /// Index into `members(root)` where the absorbed vertices start.
        absorbed_start: usize,
        /// Total weight of the absorbed component.
        absorbed_weight: Weight,
        /// Whether the endpoint colors mapped by the tracker already
        /// differed, i.e. the union respected both orientations as-is.
        orientation_match: bool,
    },
}

#[derive(Debug, Clone)]
pub struct ComponentTracker {
    parent: Vec<Vertex>,
    /// Parity relative to the parent; cumulative parity to the root gives
    /// the side.
    parity: Vec<u8>,
    info: Vec<Option<CompInfo>>,
    w: Vec<Weight>,
}

impl ComponentTracker {
    /// Singleton components, one per vertex, each on parity side 0 and
    /// oriented so the mapped color equals `colors[v]`.
    pub fn new(w: &[Weight], colors: &[Color]) -> ComponentTracker {
        let mut t = ComponentTracker {
            parent: Vec::new(),
            parity: Vec::new(),
            info: Vec::new(),
            w: w.to_vec(),
        };
        t.reset(colors);
        t
    }

    /// Re-initializes to singleton components oriented to match `colors`.
    pub fn reset(&mut self, colors: &[Color]) {
        let n = self.w.len();
        assert_eq!(colors.len(), n);
        self.parent = (0..n as Vertex).collect();
        self.parity = vec![0; n];
        self.info = colors
            .iter()
            .enumerate()
            .map(|(v, &c)| {
                Some(CompInfo {
                    w_side: [self.w[v], 0],
                    size_side: [1, 0],
                    members: vec![v as Vertex],
                    orientation: (c - 1) as u8,
                    estimate: self.w[v],
                    odd: false,
                })
            })
            .collect();
    }

    pub fn n(&self) -> usize {
        self.w.len()
    }

    /// Root and cumulative parity of `v`, with path compression.
    pub fn find(&mut self, v: Vertex) -> (Vertex, u8) {
        let mut path = Vec::new();
        let mut x = v;
        while self.parent[x as usize] != x {
            path.push(x);
            x = self.parent[x as usize];
        }
        let root = x;
        let mut cum = 0u8;
        for &y in path.iter().rev() {
            cum ^= self.parity[y as usize];
            self.parent[y as usize] = root;
            self.parity[y as usize] = cum;
        }
        let p = if v == root { 0 } else { self.parity[v as usize] };
        (root, p)
    }

    /// Classifies the endpoints of a request without merging.
    pub fn classify(&mut self, u: Vertex, v: Vertex) -> EdgeClass {
        let (ru, pu) = self.find(u);
        let (rv, pv) = self.find(v);
        if ru == rv {
            if pu == pv {
                EdgeClass::SameSame { root: ru }
            } else {
                EdgeClass::SameOpposite { root: ru }
            }
        } else {
            EdgeClass::Cross { root_u: ru, root_v: rv }
        }
    }

    fn info_ref(&self, root: Vertex) -> &CompInfo {
        self.info[root as usize].as_ref().expect("not a live root")
    }

    fn info_mut(&mut self, root: Vertex) -> &mut CompInfo {
        self.info[root as usize].as_mut().expect("not a live root")
    }

    /// Total weight of the component rooted at `root`.
    pub fn weight(&self, root: Vertex) -> Weight {
        self.info_ref(root).weight()
    }

    pub fn size(&self, root: Vertex) -> u32 {
        self.info_ref(root).size()
    }

    pub fn odd(&self, root: Vertex) -> bool {
        self.info_ref(root).odd
    }

    pub fn estimate(&self, root: Vertex) -> Weight {
        self.info_ref(root).estimate
    }

    pub fn set_estimate(&mut self, root: Vertex, e: Weight) {
        self.info_mut(root).estimate = e;
    }

    pub fn members(&self, root: Vertex) -> &[Vertex] {
        &self.info_ref(root).members
    }

    /// Weights of parity side 0 and side 1.
    pub fn side_weights(&self, root: Vertex) -> [Weight; 2] {
        self.info_ref(root).w_side
    }

    pub fn orientation(&self, root: Vertex) -> u8 {
        self.info_ref(root).orientation
    }

    /// Reorients the component so parity side 0 maps to color
    /// `1 + orientation`.
    pub fn set_orientation(&mut self, root: Vertex, orientation: u8) {
        debug_assert!(orientation <= 1);
        self.info_mut(root).orientation = orientation;
    }

    /// The color the tracker maps `v` to under its component orientation.
    pub fn mapped_color(&mut self, v: Vertex) -> Color {
        let (root, p) = self.find(v);
        let o = self.info_ref(root).orientation;
        1 + (p ^ o) as Color
    }

    /// Component weight currently mapped to `color` (1 or 2).
    pub fn weight_on_color(&self, root: Vertex, color: Color) -> Weight {
        let o = self.info_ref(root).orientation;
        self.info_ref(root).w_side[((color - 1) as u8 ^ o) as usize]
    }

    /// All live component roots in ascending vertex order.
    pub fn roots(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.info
            .iter()
            .enumerate()
            .filter_map(|(v, i)| i.as_ref().map(|_| v as Vertex))
    }

    pub fn component_count(&self) -> usize {
        self.info.iter().filter(|i| i.is_some()).count()
    }

    /// Unites the components of `u` and `v` along the edge `(u, v)`.
    ///
    /// The heavier component's root survives; on equal weights `u`'s root
    /// survives. The absorbed component's parities are re-based so the new
    /// edge always joins opposite sides. When the mapped endpoint colors
    /// already differed (`orientation_match`), re-basing preserves every
    /// absorbed vertex's mapped color; otherwise the absorbed vertices'
    /// mapped colors all flip relative to their actual colors and the
    /// caller must reconcile.
    pub fn merge(&mut self, u: Vertex, v: Vertex) -> MergeOutcome {
        let (ru, pu) = self.find(u);
        let (rv, pv) = self.find(v);
        if ru == rv {
            if pu == pv {
                self.info_mut(ru).odd = true;
                return MergeOutcome::SameComponentOdd { root: ru };
            }
            return MergeOutcome::SameComponentBipartite { root: ru };
        }

        let ou = self.info_ref(ru).orientation;
        let ov = self.info_ref(rv).orientation;
        let color_u = (pu ^ ou) as Color + 1;
        let color_v = (pv ^ ov) as Color + 1;
        let orientation_match = color_u != color_v;

        let (survivor, absorbed) = if self.weight(rv) > self.weight(ru) {
            (rv, ru)
        } else {
            (ru, rv)
        };
        // Parity of the absorbed root relative to the survivor: the new
        // edge must join opposite sides.
        let (ps, pa) = if survivor == ru { (pu, pv) } else { (pv, pu) };
        let bit = ps ^ pa ^ 1;

        let mut taken = self.info[absorbed as usize].take().expect("absorbed root live");
        let absorbed_weight = taken.weight();
        self.parent[absorbed as usize] = survivor;
        self.parity[absorbed as usize] = bit;

        let surv = self.info_mut(survivor);
        let absorbed_start = surv.members.len();
        let b = bit as usize;
        surv.w_side[0] += taken.w_side[b];
        surv.w_side[1] += taken.w_side[1 - b];
        surv.size_side[0] += taken.size_side[b];
        surv.size_side[1] += taken.size_side[1 - b];
        surv.members.append(&mut taken.members);
        surv.odd |= taken.odd;

        MergeOutcome::Merged {
            root: survivor,
            absorbed_root: absorbed,
            absorbed_start,
            absorbed_weight,
            orientation_match,
        }
    }

    /// The orientation (as a color `m` for parity side 0) minimizing the
    /// weighted mismatch against `c0`, together with that mismatch.
    ///
    /// Ties break toward `m = 1`. The minimum never exceeds half the
    /// component weight, because each vertex mismatches under exactly one
    /// of the two orientations.
    pub fn optimal_orientation(&mut self, root: Vertex, c0: &[Color]) -> Result<(Color, Weight)> {
        if self.odd(root) {
            return Err(Error::OddComponent { root });
        }
        let members: Vec<Vertex> = self.members(root).to_vec();
        let mut d = [0 as Weight; 2];
        for v in members {
            let (_, p) = self.find(v);
            // Under orientation m, v gets color 1 + (p ^ (m-1)).
            let mismatch_m1 = (1 + p as Color) != c0[v as usize];
            if mismatch_m1 {
                d[0] += self.w[v as usize];
            } else {
                d[1] += self.w[v as usize];
            }
        }
        if d[0] <= d[1] {
            Ok((1, d[0]))
        } else {
            Ok((2, d[1]))
        }
    }

    /// Sum of member weights per component side, recomputed from scratch.
    /// Test support for reconciliation checks.
    pub fn recount_side_weights(&mut self, root: Vertex) -> [Weight; 2] {
        let members: Vec<Vertex> = self.members(root).to_vec();
        let mut w = [0; 2];
        for v in members {
            let (r, p) = self.find(v);
            debug_assert_eq!(r, root);
            w[p as usize] += self.w[v as usize];
        }
        w
    }
}
