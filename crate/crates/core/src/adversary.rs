//! Adaptive lower-bound request generators plus benign random sequences.
//!
//! The adaptive adversaries observe the algorithm-under-test's current
//! coloring and pick the next request from it:
//!
//! * [`OddCycleAdversary`] fixes an odd cycle on `l` vertices (`l` the
//!   largest odd number at most `n/2`) and always requests a cycle edge
//!   whose endpoints currently share a color; one exists under any
//!   2-coloring. A family of `l` offline reference strategies, each
//!   parking the cycle's unavoidable monochromatic edge on a different
//!   position, is simulated alongside so the separation is measured, not
//!   assumed.
//! * [`BatchAdversary`] joins components of equal size in rounds: batch
//!   `i` pairs the `n/2^(i-1)` path components of size `2^(i-1)` by
//!   ascending minimum vertex id into `n/2^i` requests, each joining two
//!   path endpoints. The deterministic variant prefers endpoint pairs
//!   that currently share a color; the randomized variant draws both
//!   endpoints uniformly.
//! * [`DeltaSetAdversary`] keeps a working set of `Delta+1` vertices; by
//!   pigeonhole some two share a color, and since the algorithm's
//!   coloring is proper, that pair is never an existing edge. Vertices
//!   that can no longer accept an edge within the `(1-eps)*Delta` degree
//!   bound are evicted for fresh isolated ones.
//!
//! All generators are deterministic given their RNG stream, and every
//! emitted request is valid for its model.

use rand::RngCore;

use crate::instance::Instance;
use crate::ratio::Ratio;
use crate::{uniform_index, Color, Error, Result, Vertex, Weight};

/// Adaptive generator forcing cost on every request in the fully dynamic
/// two-cluster model.
#[derive(Debug, Clone)]
pub struct OddCycleAdversary {
    ell: usize,
}

/// Costs of the simulated offline family run against an emitted request
/// log: `costs[j]` is what the strategy parking the defect on cycle edge
/// `j` would have paid.
#[derive(Debug, Clone)]
pub struct OffFamilyReport {
    pub costs: Vec<Weight>,
    pub best: Weight,
}

impl OddCycleAdversary {
    /// Cycle over vertices `0..l` with `l` the largest odd value at most
    /// `n/2`. Needs `l >= 3`.
    pub fn new(n: usize) -> Result<OddCycleAdversary> {
        let half = n / 2;
        let ell = if half % 2 == 1 { half } else { half.saturating_sub(1) };
        if ell < 3 {
            return Err(Error::InvalidInstance(format!(
                "n = {n} leaves no odd cycle of length >= 3 on n/2 vertices"
            )));
        }
        Ok(OddCycleAdversary { ell })
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    /// The lowest-index cycle edge whose endpoints currently share a
    /// color. An odd cycle admits no proper 2-coloring, so the scan always
    /// finds one; failing to is a harness bug.
    pub fn next(&self, colors: &[Color]) -> Result<(Vertex, Vertex)> {
        for i in 0..self.ell {
            let u = i as Vertex;
            let v = ((i + 1) % self.ell) as Vertex;
            if colors[u as usize] == colors[v as usize] {
                return Ok((u, v));
            }
        }
        Err(Error::InvalidInstance(
            "odd cycle carries no monochromatic edge; the observed coloring cannot be 2-valued"
                .to_string(),
        ))
    }

    /// The 2-coloring of the whole vertex set whose only monochromatic
    /// cycle edge is edge `j` `(v_j, v_{j+1})`: alternation starts at
    /// `v_{j+1}` with color 1 and wraps around; off-cycle vertices keep
    /// `c0`. Starting with color 1 preserves the per-color counts of the
    /// alternating initial coloring, so the result stays balanced.
    pub fn defect_coloring(&self, j: usize, c0: &[Color]) -> Vec<Color> {
        debug_assert!(j < self.ell);
        let mut c = c0.to_vec();
        for step in 0..self.ell {
            let v = (j + 1 + step) % self.ell;
            c[v] = 1 + (step % 2) as Color;
        }
        c
    }

    /// Replays an emitted request log against all `l` offline strategies.
    /// Strategy `j` pays its initial distance from `c0` once, plus 2 for
    /// every request landing on its parked edge (it recolors one endpoint
    /// and immediately recolors it back).
    pub fn simulate_off_family(
        &self,
        c0: &[Color],
        w: &[Weight],
        requests: &[(Vertex, Vertex)],
    ) -> OffFamilyReport {
        let mut costs: Vec<Weight> = (0..self.ell)
            .map(|j| {
                let cj = self.defect_coloring(j, c0);
                cj.iter()
                    .zip(c0)
                    .zip(w)
                    .filter(|((a, b), _)| a != b)
                    .map(|(_, &wt)| wt)
                    .sum()
            })
            .collect();
        for &(u, v) in requests {
            let (u, v) = (u as usize, v as usize);
            let j = if (u + 1) % self.ell == v {
                u
            } else if (v + 1) % self.ell == u {
                v
            } else {
                debug_assert!(false, "request ({u},{v}) is not a cycle edge");
                continue;
            };
            // Unit-weight cycles in practice; weighted handled anyway.
            costs[j] += 2 * w[u].min(w[v]);
        }
        let best = costs.iter().copied().min().unwrap_or(0);
        OffFamilyReport { costs, best }
    }
}

/// One step of the batch adversary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BatchStep {
    Request { u: Vertex, v: Vertex },
    /// All pairs of the named batch have been emitted.
    BatchDone { batch: u32 },
    /// A single component remains; the construction is over.
    Finished,
}

#[derive(Debug, Clone, Copy)]
struct PathComp {
    lo: Vertex,
    ends: (Vertex, Vertex),
    size: u32,
}

/// Pairs equal-size path components in rounds, doubling sizes per batch.
#[derive(Debug, Clone)]
pub struct BatchAdversary {
    randomized: bool,
    comps: Vec<PathComp>,
    next_comps: Vec<PathComp>,
    batch: u32,
    idx: usize,
    n_eff: usize,
    pending_done: Option<u32>,
}

impl BatchAdversary {
    /// Works on the largest power-of-two prefix `0..n_eff` of the vertex
    /// set. `randomized` switches endpoint selection from same-colored
    /// scanning to uniform draws.
    pub fn new(n: usize, randomized: bool) -> Result<BatchAdversary> {
        if n < 2 {
            return Err(Error::InvalidInstance(format!("n = {n} leaves nothing to pair")));
        }
        let n_eff = 1usize << n.ilog2();
        let comps = (0..n_eff as Vertex)
            .map(|v| PathComp { lo: v, ends: (v, v), size: 1 })
            .collect();
        Ok(BatchAdversary {
            randomized,
            comps,
            next_comps: Vec::new(),
            batch: 1,
            idx: 0,
            n_eff,
            pending_done: None,
        })
    }

    pub fn n_effective(&self) -> usize {
        self.n_eff
    }

    pub fn current_batch(&self) -> u32 {
        self.batch
    }

    /// Emits the next request of the current batch, a batch separator, or
    /// the end marker. The RNG is consulted only in randomized mode.
    pub fn next<R: RngCore>(&mut self, colors: &[Color], rng: &mut R) -> BatchStep {
        if let Some(batch) = self.pending_done.take() {
            return BatchStep::BatchDone { batch };
        }
        if self.comps.len() == 1 {
            return BatchStep::Finished;
        }
        if self.idx == 0 {
            // Pair by ascending minimum vertex id.
            self.comps.sort_by_key(|c| c.lo);
            debug_assert!(self.comps.iter().all(|c| c.size == 1 << (self.batch - 1)));
            debug_assert_eq!(self.comps.len() % 2, 0);
        }
        let p = self.comps[2 * self.idx];
        let q = self.comps[2 * self.idx + 1];
        let (u, v) = if self.randomized {
            let pu = [p.ends.0, p.ends.1][uniform_index(rng, 2)];
            let qv = [q.ends.0, q.ends.1][uniform_index(rng, 2)];
            (pu, qv)
        } else {
            // Prefer a currently same-colored endpoint pair, scanning in
            // ascending id order on both sides.
            let mut pe = [p.ends.0, p.ends.1];
            pe.sort_unstable();
            let mut qe = [q.ends.0, q.ends.1];
            qe.sort_unstable();
            let mut pick = (pe[0], qe[0]);
            'outer: for &a in &pe {
                for &b in &qe {
                    if colors[a as usize] == colors[b as usize] {
                        pick = (a, b);
                        break 'outer;
                    }
                }
            }
            pick
        };
        // The merged component is again a path: the request joined one end
        // of each, leaving the two other ends free.
        let other = |c: &PathComp, used: Vertex| if c.ends.0 == used { c.ends.1 } else { c.ends.0 };
        self.next_comps.push(PathComp {
            lo: p.lo.min(q.lo),
            ends: (other(&p, u), other(&q, v)),
            size: p.size + q.size,
        });
        self.idx += 1;
        if 2 * self.idx == self.comps.len() {
            self.comps = std::mem::take(&mut self.next_comps);
            self.idx = 0;
            self.pending_done = Some(self.batch);
            self.batch += 1;
        }
        BatchStep::Request { u, v }
    }

}

/// Working-set adversary for the degree-bounded `Delta` model.
#[derive(Debug, Clone)]
pub struct DeltaSetAdversary {
    active: Vec<Vertex>,
    deg: Vec<u32>,
    next_fresh: Vertex,
    n: usize,
    degree_bound: Ratio,
    emitted: u64,
    evictions: u64,
    edges: std::collections::HashSet<(Vertex, Vertex)>,
}

impl DeltaSetAdversary {
    pub fn new(inst: &Instance) -> Result<DeltaSetAdversary> {
        if inst.model != crate::instance::Model::Delta {
            return Err(Error::InvalidInstance(
                "the working-set adversary targets the Delta model".to_string(),
            ));
        }
        let delta = inst.k as usize;
        if inst.n < delta + 2 {
            return Err(Error::InvalidInstance(format!(
                "need more than Delta+1 = {} vertices, got {}",
                delta + 1,
                inst.n
            )));
        }
        Ok(DeltaSetAdversary {
            active: (0..=delta as Vertex).collect(),
            deg: vec![0; inst.n],
            next_fresh: delta as Vertex + 1,
            n: inst.n,
            degree_bound: inst.degree_bound(),
            emitted: 0,
            evictions: 0,
            edges: std::collections::HashSet::new(),
        })
    }

    pub fn active_set(&self) -> &[Vertex] {
        &self.active
    }

    pub fn emitted(&self) -> u64 {
        self.emitted
    }

    pub fn evictions(&self) -> u64 {
        self.evictions
    }

    fn can_take_edge(&self, v: Vertex) -> bool {
        // deg + 1 <= (1-eps) * Delta, exactly.
        ((self.deg[v as usize] + 1) as u128) * (self.degree_bound.den() as u128)
            <= self.degree_bound.num() as u128
    }

    /// The lexicographically first same-colored pair in the working set.
    /// Pigeonhole over `Delta+1` vertices and `Delta` colors guarantees
    /// one, and against an algorithm that keeps its coloring proper that
    /// pair is a fresh non-edge; already-emitted pairs are skipped anyway
    /// so the generator stays total under misbehaving colorings. Evicts
    /// saturated vertices afterwards, failing with [`Error::Exhausted`]
    /// when no fresh replacement exists.
    pub fn next(&mut self, colors: &[Color]) -> Result<(Vertex, Vertex)> {
        let mut found: Option<(Vertex, Vertex)> = None;
        'scan: for i in 0..self.active.len() {
            for j in (i + 1)..self.active.len() {
                let (a, b) = (self.active[i], self.active[j]);
                if colors[a as usize] == colors[b as usize]
                    && !self.edges.contains(&(a.min(b), a.max(b)))
                {
                    found = Some((a, b));
                    break 'scan;
                }
            }
        }
        let (u, v) = found.ok_or_else(|| {
            Error::InvalidInstance(
                "no fresh monochromatic pair in the working set; the observed coloring \
                 must be improper on emitted edges"
                    .to_string(),
            )
        })?;
        self.edges.insert((u.min(v), u.max(v)));
        self.deg[u as usize] += 1;
        self.deg[v as usize] += 1;
        self.emitted += 1;
        for x in [u, v] {
            if !self.can_take_edge(x) {
                let pos = self.active.iter().position(|&y| y == x).expect("member");
                if self.next_fresh as usize >= self.n {
                    return Err(Error::Exhausted);
                }
                self.active[pos] = self.next_fresh;
                self.next_fresh += 1;
                self.evictions += 1;
            }
        }
        self.active.sort_unstable();
        Ok((u, v))
    }
}

/// Random edge sequence across a hidden balanced bipartition, so the
/// induced graph is bipartite and admits a proper coloring with both
/// cluster loads exactly `B` (unit weights). Duplicate edges are skipped.
pub fn random_bipartite_sequence<R: RngCore>(
    n: usize,
    len: usize,
    rng: &mut R,
) -> Vec<(Vertex, Vertex)> {
    assert!(n >= 2 && n % 2 == 0, "need an even vertex count");
    let mut perm: Vec<Vertex> = (0..n as Vertex).collect();
    for i in (1..n).rev() {
        perm.swap(i, uniform_index(rng, i + 1));
    }
    let (side_a, side_b) = perm.split_at(n / 2);
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::with_capacity(len);
    let mut attempts = 0usize;
    while out.len() < len && attempts < 50 * len + 100 {
        attempts += 1;
        let u = side_a[uniform_index(rng, side_a.len())];
        let v = side_b[uniform_index(rng, side_b.len())];
        if seen.insert((u.min(v), u.max(v))) {
            out.push((u, v));
        }
    }
    out
}

/// A fixed sequence of disjoint five-vertex stars ("spiders") that drives
/// the estimate-guided algorithm into delegation at `eps = 1/2` on the
/// unit two-cluster instance.
///
/// Spider `k` has the even center `6k`, first the odd leaves `4k+1` and
/// `4k+3` (free attachments under the alternating initial coloring), then
/// the even leaves `6k+2` and `6k+4`. Every merge grows the component
/// weight past `(1 + eps/4)` times its estimate, so the algorithm
/// recomputes the orientation closest to the initial coloring each time —
/// and that orientation flips both even leaves onto color 2. Each
/// completed spider therefore adds 2 to the load of color 2, which starts
/// at `n/2` against a capacity of `3n/4`; after `n/8` spiders the next
/// recompute no longer fits and the algorithm must hand over. The induced
/// graph is a forest, so the sequence is legal for the bipartite-promise
/// model, and the forced orientations make the exact optimum genuinely
/// large at the handover point.
///
/// Requires `n` even and at least 24 (below that the spiders run out of
/// vertices before the capacity pressure builds).
pub fn delegation_pressure_sequence(n: usize) -> Result<Vec<(Vertex, Vertex)>> {
    if n % 2 != 0 || n < 24 {
        return Err(Error::InvalidInstance(format!(
            "delegation pressure needs an even vertex count of at least 24, got {n}"
        )));
    }
    let spiders = n / 6;
    let mut out = Vec::with_capacity(4 * spiders);
    for k in 0..spiders as Vertex {
        let center = 6 * k;
        for leaf in [4 * k + 1, 4 * k + 3, 6 * k + 2, 6 * k + 4] {
            out.push((center, leaf));
        }
    }
    Ok(out)
}

/// Random edge sequence keeping every degree within `(1-eps)*Delta`.
/// Duplicate edges are skipped; generation stops early if the degree
/// budget runs out before `len` edges.
pub fn random_delta_sequence<R: RngCore>(
    inst: &Instance,
    len: usize,
    rng: &mut R,
) -> Vec<(Vertex, Vertex)> {
    let n = inst.n;
    let bound = inst.degree_bound();
    let fits = |d: u32| ((d + 1) as u128) * (bound.den() as u128) <= bound.num() as u128;
    let mut deg = vec![0u32; n];
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::with_capacity(len);
    let mut attempts = 0usize;
    while out.len() < len && attempts < 50 * len + 100 {
        attempts += 1;
        let u = uniform_index(rng, n) as Vertex;
        let v = uniform_index(rng, n) as Vertex;
        if u == v || !fits(deg[u as usize]) || !fits(deg[v as usize]) {
            continue;
        }
        if !seen.insert((u.min(v), u.max(v))) {
            continue;
        }
        deg[u as usize] += 1;
        deg[v as usize] += 1;
        out.push((u, v));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn cycle_length_is_largest_odd_at_most_half() {
        assert_eq!(OddCycleAdversary::new(32).unwrap().ell(), 15);
        assert_eq!(OddCycleAdversary::new(64).unwrap().ell(), 31);
        assert_eq!(OddCycleAdversary::new(128).unwrap().ell(), 63);
        assert_eq!(OddCycleAdversary::new(30).unwrap().ell(), 15);
        assert!(OddCycleAdversary::new(4).is_err());
    }

    #[test]
    fn picks_the_unique_monochromatic_edge() {
        let adv = OddCycleAdversary::new(14).unwrap(); // ell = 7
        // Alternating except vertices 3 and 4 both color 2.
        let mut colors = vec![1, 2, 1, 2, 2, 1, 2];
        colors.extend(vec![1; 7]);
        assert_eq!(adv.next(&colors).unwrap(), (3, 4));
    }

    #[test]
    fn every_defect_coloring_has_exactly_one_mono_cycle_edge() {
        let adv = OddCycleAdversary::new(22).unwrap(); // ell = 11
        let c0: Vec<Color> = (0..22).map(|v| 1 + (v % 2) as Color).collect();
        for j in 0..adv.ell() {
            let c = adv.defect_coloring(j, &c0);
            let mono: Vec<usize> = (0..adv.ell())
                .filter(|&i| c[i] == c[(i + 1) % adv.ell()])
                .collect();
            assert_eq!(mono, vec![j], "defect {j} misplaced");
            // Balanced: same per-color counts as c0.
            let ones = c.iter().filter(|&&x| x == 1).count();
            let ones0 = c0.iter().filter(|&&x| x == 1).count();
            assert_eq!(ones, ones0);
        }
    }

    #[test]
    fn off_family_charges_two_per_hit_plus_initial_distance() {
        let adv = OddCycleAdversary::new(14).unwrap(); // ell = 7
        let c0: Vec<Color> = (0..14).map(|v| 1 + (v % 2) as Color).collect();
        let w = vec![1u64; 14];
        // c0's own defect sits on the wrap edge (6,0), index 6.
        let report = adv.simulate_off_family(&c0, &w, &[]);
        assert_eq!(report.costs[6], 0);
        assert!(report.costs.iter().enumerate().all(|(j, &c)| j == 6 || c > 0));
        // Three hits on edge 2.
        let report = adv.simulate_off_family(&c0, &w, &[(2, 3), (2, 3), (3, 2)]);
        let base = adv.simulate_off_family(&c0, &w, &[]).costs[2];
        assert_eq!(report.costs[2], base + 6);
        assert_eq!(report.costs[6], 0); // unaffected strategy
        assert_eq!(report.best, 0);
    }

    #[test]
    fn batch_adversary_counts_pairs_per_batch() {
        let mut adv = BatchAdversary::new(8, false).unwrap();
        let colors = vec![1 as Color; 8];
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let mut per_batch = Vec::new();
        let mut current = 0usize;
        let mut markers = Vec::new();
        loop {
            match adv.next(&colors, &mut rng) {
                BatchStep::Request { .. } => current += 1,
                BatchStep::BatchDone { batch } => {
                    per_batch.push(current);
                    current = 0;
                    markers.push(batch);
                }
                BatchStep::Finished => break,
            }
        }
        assert_eq!(per_batch, vec![4, 2, 1]);
        assert_eq!(markers, vec![1, 2, 3]);
        assert_eq!(current, 0, "requests after the last separator");
    }

    #[test]
    fn batch_adversary_prefers_same_colored_ends() {
        let mut adv = BatchAdversary::new(4, false).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        // All same color: the first singleton pair is (0,1).
        let step = adv.next(&vec![1; 4], &mut rng);
        assert_eq!(step, BatchStep::Request { u: 0, v: 1 });
        // Second pair: 2 has color 1, 3 has color 2 under this coloring;
        // singletons offer no choice, so it is (2,3) regardless.
        let step = adv.next(&vec![1, 1, 1, 2], &mut rng);
        assert_eq!(step, BatchStep::Request { u: 2, v: 3 });
        assert_eq!(adv.next(&vec![1; 4], &mut rng), BatchStep::BatchDone { batch: 1 });
        // Batch 2: paths {0,1} and {2,3}; under coloring 1,2,2,1 the
        // ascending scan finds ends 0 (color 1) and 3 (color 1).
        let step = adv.next(&vec![1, 2, 2, 1], &mut rng);
        assert_eq!(step, BatchStep::Request { u: 0, v: 3 });
        assert_eq!(adv.next(&vec![1; 4], &mut rng), BatchStep::BatchDone { batch: 2 });
        assert_eq!(adv.next(&vec![1; 4], &mut rng), BatchStep::Finished);
    }

    #[test]
    fn batch_adversary_rounds_down_to_power_of_two() {
        let adv = BatchAdversary::new(12, false).unwrap();
        assert_eq!(adv.n_effective(), 8);
    }

    #[test]
    fn delta_set_adversary_always_finds_a_collision_and_evicts() {
        let inst = Instance::delta_uniform(40, 4, Ratio::new(1, 2)).unwrap();
        let mut adv = DeltaSetAdversary::new(&inst).unwrap();
        // Static coloring: everyone color 1 (not what a real run looks
        // like, but exercises the scan and eviction mechanics).
        let colors = vec![1 as Color; 40];
        // Degree cap is 2, so each vertex is evicted after 2 edges.
        let mut emitted = Vec::new();
        for _ in 0..12 {
            emitted.push(adv.next(&colors).unwrap());
        }
        assert_eq!(adv.emitted(), 12);
        assert!(adv.evictions() > 0);
        assert_eq!(adv.active_set().len(), 5);
        // No duplicate edges: saturated vertices leave the set before
        // re-pairing, and the scan is lexicographic.
        let mut seen = std::collections::HashSet::new();
        for &(u, v) in &emitted {
            assert!(seen.insert((u.min(v), u.max(v))), "duplicate edge ({u},{v})");
        }
    }

    #[test]
    fn delta_set_adversary_exhausts_fresh_pool() {
        let inst = Instance::delta_uniform(8, 4, Ratio::new(1, 2)).unwrap();
        let mut adv = DeltaSetAdversary::new(&inst).unwrap();
        let colors = vec![1 as Color; 8];
        let mut err = None;
        for _ in 0..100 {
            if let Err(e) = adv.next(&colors) {
                err = Some(e);
                break;
            }
        }
        assert!(matches!(err, Some(Error::Exhausted)));
    }

    #[test]
    fn random_bipartite_sequence_is_bipartite_and_reproducible() {
        let a = random_bipartite_sequence(16, 30, &mut ChaCha8Rng::seed_from_u64(9));
        let b = random_bipartite_sequence(16, 30, &mut ChaCha8Rng::seed_from_u64(9));
        assert_eq!(a, b);
        assert_eq!(a.len(), 30);
        // Verify 2-colorability of the induced graph by BFS.
        let mut adj = vec![Vec::new(); 16];
        for &(u, v) in &a {
            adj[u as usize].push(v);
            adj[v as usize].push(u);
        }
        let mut side = vec![-1i8; 16];
        for s in 0..16 {
            if side[s] != -1 {
                continue;
            }
            side[s] = 0;
            let mut queue = std::collections::VecDeque::from([s]);
            while let Some(x) = queue.pop_front() {
                for &y in &adj[x] {
                    if side[y as usize] == -1 {
                        side[y as usize] = 1 - side[x];
                        queue.push_back(y as usize);
                    } else {
                        assert_ne!(side[y as usize], side[x], "odd cycle in output");
                    }
                }
            }
        }
    }

    #[test]
    fn random_delta_sequence_respects_degree_bound() {
        let inst = Instance::delta_uniform(60, 6, Ratio::new(1, 2)).unwrap();
        let seq = random_delta_sequence(&inst, 80, &mut ChaCha8Rng::seed_from_u64(3));
        assert!(!seq.is_empty());
        let mut deg = vec![0u32; 60];
        for &(u, v) in &seq {
            deg[u as usize] += 1;
            deg[v as usize] += 1;
        }
        assert!(deg.iter().all(|&d| d <= 3));
    }

    #[test]
    fn delegation_pressure_sequence_forces_a_handover() {
        use crate::coloring::CostLedger;
        use crate::follow::{FollowGreedy, FollowMode};
        use crate::instance::{Model, Request};

        assert!(delegation_pressure_sequence(16).is_err());

        for n in [24usize, 32, 64] {
            let seq = delegation_pressure_sequence(n).unwrap();
            // Disjoint stars: simple and acyclic by construction.
            let mut seen = std::collections::HashSet::new();
            let mut deg = vec![0u32; n];
            for &(u, v) in &seq {
                assert!(seen.insert((u.min(v), u.max(v))), "duplicate edge");
                deg[u as usize] += 1;
                deg[v as usize] += 1;
            }
            assert!(deg.iter().all(|&d| d <= 4));

            let inst = Instance::unit_two_cluster(Model::Online2, n, Ratio::new(1, 2)).unwrap();
            let mut ledger = CostLedger::new();
            let mut alg = FollowGreedy::new(&inst).unwrap();
            let mut handover_step = None;
            for (t, &(u, v)) in seq.iter().enumerate() {
                let rep = alg.process_request(Request::new(u, v, t), &mut ledger).unwrap();
                alg.audit_consistent().unwrap();
                if rep.branch == crate::Branch::Delegated {
                    handover_step = Some(t);
                }
            }
            let t = handover_step.unwrap_or_else(|| panic!("n={n}: never delegated"));
            assert_eq!(alg.mode(), FollowMode::Delegated);
            // Pressure builds after n/8 completed spiders (4 requests each),
            // within the third request of the breaching spider.
            assert!(t >= 4 * (n / 8), "n={n}: delegated too early at t={t}");
            assert!(t <= 4 * (n / 8) + 3, "n={n}: delegated too late at t={t}");
        }
    }
}
