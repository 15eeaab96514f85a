//! Benchmark families (sorting, layered-graph shortest path, maximum coverage)
//! and the brute-force oracles used to check them.
//!
//! Generators return instance skeletons: feasible set, loss, support, sense,
//! with no scenarios and a zero radius. Data collection fills in the rest.

use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{DroError, Result};
use crate::model::{BiaffineLoss, FeasibleSet, Polytope, ProblemInstance};
use crate::solver::Sense;

fn skeleton(
    feasible: FeasibleSet,
    loss: BiaffineLoss,
    support: Polytope,
    sense: Sense,
) -> ProblemInstance {
    ProblemInstance {
        feasible,
        loss,
        support,
        scenarios: Vec::new(),
        epsilon: 0.0,
        sense,
    }
}

/// Choose exactly `h` of `n` items: `{x in {0,1}^n : sum x = h}`, loss `c'x`, unit-box support.
pub fn gen_sorting(n: usize, h: usize) -> Result<ProblemInstance> {
    if h == 0 || h > n {
        return Err(DroError::BadCardinality { n, h });
    }
    let mut feasible = FeasibleSet::binary(n);
    feasible.push_equality(&vec![1.0; n], h as f64);
    Ok(skeleton(
        feasible,
        BiaffineLoss::linear(n),
        Polytope::unit_box(n),
        Sense::Minimize,
    ))
}

/// Fully connected layered DAG: a source, `h - 1` layers of `r` nodes, a destination.
///
/// Arcs are indexed layer-major, then by tail, then by head: the `r` source arcs
/// come first, then `r * r` arcs per pair of consecutive intermediate layers,
/// then the `r` arcs into the destination. Every source-destination path uses
/// exactly `h` arcs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayeredGraph {
    pub h: usize,
    pub r: usize,
}

impl LayeredGraph {
    pub fn new(h: usize, r: usize) -> Result<Self> {
        if h < 2 || r == 0 {
            return Err(DroError::InvalidInstance(format!(
                "layered graph needs h >= 2 and r >= 1 (got h={h}, r={r})"
            )));
        }
        Ok(Self { h, r })
    }

    pub fn num_arcs(&self) -> usize {
        2 * self.r + (self.h - 2) * self.r * self.r
    }

    pub fn num_paths(&self) -> usize {
        self.r.pow(self.h as u32 - 1)
    }

    /// Arc `step` of a path (0-based, `0..h`), from node `tail` to node `head` of the adjacent layers.
    ///
    /// For the first step `tail` is ignored (source); for the last, `head` is ignored (destination).
    pub fn arc(&self, step: usize, tail: usize, head: usize) -> usize {
        let r = self.r;
        if step == 0 {
            head
        } else if step == self.h - 1 {
            r + (self.h - 2) * r * r + tail
        } else {
            r + (step - 1) * r * r + tail * r + head
        }
    }

    /// `(tail, head)` node ids; 0 is the source, `1 + l*r + i` is node `i` of intermediate
    /// layer `l`, and the last id is the destination.
    pub fn arcs(&self) -> Vec<(usize, usize)> {
        let r = self.r;
        let node = |layer: usize, i: usize| 1 + layer * r + i;
        let dest = 1 + (self.h - 1) * r;
        let mut out = Vec::with_capacity(self.num_arcs());
        out.extend((0..r).map(|j| (0, node(0, j))));
        for l in 0..self.h - 2 {
            for i in 0..r {
                out.extend((0..r).map(|j| (node(l, i), node(l + 1, j))));
            }
        }
        out.extend((0..r).map(|i| (node(self.h - 2, i), dest)));
        out
    }

    /// Arc-incidence vector of the path visiting intermediate nodes `nodes` (one per layer).
    pub fn path_mask(&self, nodes: &[usize]) -> Vec<f64> {
        let mut x = vec![0.0; self.num_arcs()];
        for step in 0..self.h {
            let tail = if step == 0 { 0 } else { nodes[step - 1] };
            let head = if step == self.h - 1 { 0 } else { nodes[step] };
            x[self.arc(step, tail, head)] = 1.0;
        }
        x
    }

    /// Every path, in lexicographic order of its intermediate nodes.
    pub fn all_paths(&self) -> Vec<Vec<f64>> {
        let layers = self.h - 1;
        let mut nodes = vec![0; layers];
        let mut out = Vec::with_capacity(self.num_paths());
        loop {
            out.push(self.path_mask(&nodes));
            let mut l = layers;
            loop {
                if l == 0 {
                    return out;
                }
                l -= 1;
                nodes[l] += 1;
                if nodes[l] < self.r {
                    break;
                }
                nodes[l] = 0;
            }
        }
    }
}

/// Path-flow polytope of the layered graph (binary arcs, unit flow), loss `c'x`, unit-box support.
pub fn gen_layered_spp(h: usize, r: usize) -> Result<(ProblemInstance, LayeredGraph)> {
    let graph = LayeredGraph::new(h, r)?;
    let n = graph.num_arcs();
    let arcs = graph.arcs();
    let dest = 1 + (h - 1) * r;
    let mut feasible = FeasibleSet::binary(n);
    // net outflow: +1 at the source, -1 at the destination, 0 elsewhere
    for v in 0..=dest {
        let mut row = vec![0.0; n];
        for (a, &(tail, head)) in arcs.iter().enumerate() {
            if tail == v {
                row[a] += 1.0;
            }
            if head == v {
                row[a] -= 1.0;
            }
        }
        let rhs = if v == 0 {
            1.0
        } else if v == dest {
            -1.0
        } else {
            0.0
        };
        feasible.push_equality(&row, rhs);
    }
    let inst = skeleton(
        feasible,
        BiaffineLoss::linear(n),
        Polytope::unit_box(n),
        Sense::Minimize,
    );
    Ok((inst, graph))
}

/// Exact layer-by-layer DP. Ties go to the lowest-index predecessor, so with
/// all-equal costs the path through node 0 of every layer is returned.
pub fn shortest_path_dp(graph: &LayeredGraph, costs: &[f64]) -> (f64, Vec<f64>) {
    let r = graph.r;
    let layers = graph.h - 1;
    let mut dist: Vec<f64> = (0..r).map(|j| costs[graph.arc(0, 0, j)]).collect();
    let mut pred = vec![vec![0usize; r]; layers];
    for step in 1..layers {
        let mut next = vec![f64::INFINITY; r];
        for j in 0..r {
            for i in 0..r {
                let d = dist[i] + costs[graph.arc(step, i, j)];
                if d < next[j] {
                    next[j] = d;
                    pred[step][j] = i;
                }
            }
        }
        dist = next;
    }
    let (mut best, mut last) = (f64::INFINITY, 0);
    for i in 0..r {
        let d = dist[i] + costs[graph.arc(layers, i, 0)];
        if d < best {
            best = d;
            last = i;
        }
    }
    let mut nodes = vec![0; layers];
    nodes[layers - 1] = last;
    for step in (1..layers).rev() {
        nodes[step - 1] = pred[step][nodes[step]];
    }
    (best, graph.path_mask(&nodes))
}

/// Items `0..n1`, subsets of them, and a budget on the number of subsets picked.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverageSystem {
    pub n1: usize,
    pub subsets: Vec<Vec<usize>>,
    pub budget: usize,
}

impl CoverageSystem {
    pub fn n2(&self) -> usize {
        self.subsets.len()
    }

    /// Item-coverage mask (length `n1`) of the chosen subsets.
    pub fn covered(&self, chosen: &[usize]) -> Vec<bool> {
        let mut out = vec![false; self.n1];
        for &i in chosen {
            for &a in &self.subsets[i] {
                out[a] = true;
            }
        }
        out
    }

    /// Full decision vector `(x, y)` for the chosen subsets with every covered item counted.
    pub fn decision(&self, chosen: &[usize]) -> Vec<f64> {
        let mut v: Vec<f64> = self
            .covered(chosen)
            .iter()
            .map(|&b| f64::from(u8::from(b)))
            .collect();
        v.extend((0..self.n2()).map(|i| f64::from(u8::from(chosen.contains(&i)))));
        v
    }
}

/// Maximum coverage instance over a given system.
///
/// Decisions are `(x, y)` with `x` the `n1` item indicators and `y` the `n2` subset
/// indicators. The loss is the covered reward `sum_a c_a x_a`, to be maximized;
/// the cost vector spans all `n1 + n2` coordinates, with the `y` coordinates
/// pinned to 0 by the support.
pub fn coverage_instance(system: &CoverageSystem) -> Result<ProblemInstance> {
    let (n1, n2) = (system.n1, system.n2());
    if system
        .subsets
        .iter()
        .any(|s| s.is_empty() || s.iter().any(|&a| a >= n1))
    {
        return Err(DroError::InvalidInstance(
            "subsets must be nonempty and index existing items".into(),
        ));
    }
    let n = n1 + n2;
    let mut feasible = FeasibleSet::binary(n);
    let mut budget = vec![0.0; n];
    budget[n1..].fill(1.0);
    feasible.push_row(&budget, system.budget as f64);
    for a in 0..n1 {
        let mut row = vec![0.0; n];
        row[a] = 1.0;
        for (i, s) in system.subsets.iter().enumerate() {
            if s.contains(&a) {
                row[n1 + i] = -1.0;
            }
        }
        feasible.push_row(&row, 0.0);
    }
    let mask: Vec<bool> = (0..n).map(|j| j < n1).collect();
    let upper: Vec<f64> = mask.iter().map(|&m| if m { 1.0 } else { 0.0 }).collect();
    let support = Polytope::boxed(&vec![0.0; n], &upper)?;
    Ok(skeleton(
        feasible,
        BiaffineLoss::masked_linear(&mask),
        support,
        Sense::Maximize,
    ))
}

/// Random coverage system with `n2` subsets of `subset_size` distinct items each.
pub fn gen_mcp(
    n1: usize,
    n2: usize,
    subset_size: usize,
    budget: usize,
    seed: u64,
) -> Result<(ProblemInstance, CoverageSystem)> {
    gen_mcp_with(
        n1,
        n2,
        subset_size,
        budget,
        &mut ChaCha8Rng::seed_from_u64(seed),
    )
}

/// As [`gen_mcp`], drawing from a caller-supplied stream.
pub fn gen_mcp_with<R: rand::Rng + ?Sized>(
    n1: usize,
    n2: usize,
    subset_size: usize,
    budget: usize,
    rng: &mut R,
) -> Result<(ProblemInstance, CoverageSystem)> {
    if subset_size == 0 || subset_size > n1 {
        return Err(DroError::InvalidInstance(format!(
            "subset size {subset_size} must be in 1..={n1}"
        )));
    }
    let subsets = (0..n2)
        .map(|_| {
            let mut s = index::sample(rng, n1, subset_size).into_vec();
            s.sort_unstable();
            s
        })
        .collect();
    let system = CoverageSystem {
        n1,
        subsets,
        budget,
    };
    Ok((coverage_instance(&system)?, system))
}

/// All feasible points of a binary feasible set, in lexicographic order (0 before 1).
pub fn enumerate_feasible(feasible: &FeasibleSet, limit: u64) -> Result<Vec<Vec<f64>>> {
    if !feasible.is_binary() {
        return Err(DroError::Unsupported(
            "enumeration needs an all-binary feasible set".into(),
        ));
    }
    let n = feasible.n();
    if n >= 64 || (1u64 << n) > limit {
        return Err(DroError::TooLarge { vars: n, limit });
    }
    let rows: Vec<Vec<f64>> = (0..feasible.num_rows())
        .map(|i| feasible.row(i).collect())
        .collect();
    // smallest achievable contribution of the variables from index j onwards
    let slack_tail: Vec<Vec<f64>> = rows
        .iter()
        .map(|row| {
            let mut tail = vec![0.0; n + 1];
            for j in (0..n).rev() {
                tail[j] = tail[j + 1] + row[j].min(0.0);
            }
            tail
        })
        .collect();

    let mut out = Vec::new();
    let mut x = vec![0.0; n];
    let mut activity = vec![0.0; rows.len()];
    fn recurse(
        j: usize,
        x: &mut Vec<f64>,
        activity: &mut Vec<f64>,
        rows: &[Vec<f64>],
        tails: &[Vec<f64>],
        g: &[f64],
        out: &mut Vec<Vec<f64>>,
    ) {
        if (0..rows.len()).any(|i| activity[i] + tails[i][j] > g[i] + 1e-9) {
            return;
        }
        if j == x.len() {
            out.push(x.clone());
            return;
        }
        for v in [0.0, 1.0] {
            x[j] = v;
            for (i, row) in rows.iter().enumerate() {
                activity[i] += v * row[j];
            }
            recurse(j + 1, x, activity, rows, tails, g, out);
            for (i, row) in rows.iter().enumerate() {
                activity[i] -= v * row[j];
            }
        }
        x[j] = 0.0;
    }
    recurse(
        0,
        &mut x,
        &mut activity,
        &rows,
        &slack_tail,
        &feasible.g,
        &mut out,
    );
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::{self, MixedIntegerProgram};
    use proptest::prelude::*;

    #[test]
    fn sorting_counts() {
        let inst = gen_sorting(5, 2).unwrap();
        assert_eq!(
            enumerate_feasible(&inst.feasible, 1 << 20).unwrap().len(),
            10
        );
        let one = gen_sorting(1, 1).unwrap();
        assert_eq!(
            enumerate_feasible(&one.feasible, 4).unwrap(),
            vec![vec![1.0]]
        );
        assert!(matches!(
            gen_sorting(3, 4),
            Err(DroError::BadCardinality { .. })
        ));
        assert_eq!(gen_sorting(50, 5).unwrap().n(), 50);
    }

    #[test]
    fn infeasible_cardinality_enumerates_nothing() {
        let mut f = FeasibleSet::binary(3);
        f.push_equality(&[1.0; 3], 4.0);
        assert!(enumerate_feasible(&f, 1 << 10).unwrap().is_empty());
    }

    #[test]
    fn arc_counts() {
        assert_eq!(LayeredGraph::new(3, 3).unwrap().num_arcs(), 15);
        assert_eq!(LayeredGraph::new(2, 4).unwrap().num_arcs(), 8);
        let g = LayeredGraph::new(11, 5).unwrap();
        assert_eq!(g.num_arcs(), 235);
        assert_eq!(g.arcs().len(), 235);
    }

    #[test]
    fn arc_list_matches_index_formula() {
        let g = LayeredGraph::new(4, 3).unwrap();
        let arcs = g.arcs();
        let node = |l: usize, i: usize| 1 + l * 3 + i;
        assert_eq!(arcs[g.arc(0, 0, 2)], (0, node(0, 2)));
        assert_eq!(arcs[g.arc(2, 1, 0)], (node(1, 1), node(2, 0)));
        assert_eq!(arcs[g.arc(3, 2, 0)], (node(2, 2), 10));
    }

    #[test]
    fn path_enumeration_agrees_with_flow_encoding() {
        for (h, r) in [(2, 4), (3, 2), (3, 3), (4, 2)] {
            let (inst, g) = gen_layered_spp(h, r).unwrap();
            let mut paths = g.all_paths();
            let mut points = enumerate_feasible(&inst.feasible, 1 << 20).unwrap();
            assert_eq!(points.len(), r.pow(h as u32 - 1));
            paths.sort_by(|a, b| a.partial_cmp(b).unwrap());
            points.sort_by(|a, b| a.partial_cmp(b).unwrap());
            assert_eq!(paths, points);
            for p in &points {
                assert_eq!(p.iter().sum::<f64>(), h as f64);
            }
        }
    }

    #[test]
    fn dp_follows_cheap_arcs() {
        let g = LayeredGraph::new(3, 2).unwrap();
        let mut costs = vec![1.0; g.num_arcs()];
        let favoured = g.path_mask(&[1, 0]);
        for (c, &x) in costs.iter_mut().zip(&favoured) {
            if x == 1.0 {
                *c = 0.1;
            }
        }
        let (cost, path) = shortest_path_dp(&g, &costs);
        assert!((cost - 0.3).abs() < 1e-12);
        assert_eq!(path, favoured);

        let (cost, path) = shortest_path_dp(&g, &vec![0.0; g.num_arcs()]);
        assert_eq!(cost, 0.0);
        assert_eq!(path, g.all_paths()[0]);
    }

    #[test]
    fn three_subset_coverage_system() {
        let system = CoverageSystem {
            n1: 4,
            subsets: vec![vec![0, 1], vec![0, 2], vec![1, 2, 3]],
            budget: 1,
        };
        let inst = coverage_instance(&system).unwrap();
        let points = enumerate_feasible(&inst.feasible, 1 << 10).unwrap();
        let best = points
            .iter()
            .max_by(|a, b| {
                a[..4]
                    .iter()
                    .sum::<f64>()
                    .total_cmp(&b[..4].iter().sum::<f64>())
            })
            .unwrap();
        assert_eq!(best, &system.decision(&[2]));
    }

    #[test]
    fn generous_budget_covers_everything() {
        let (inst, system) = gen_mcp(8, 4, 3, 4, 7).unwrap();
        let all = system.decision(&[0, 1, 2, 3]);
        assert!(inst.feasible.contains(&all, 0.0));
        assert!(gen_mcp(50, 50, 5, 5, 1)
            .unwrap()
            .1
            .subsets
            .iter()
            .all(|s| s.len() == 5));
    }

    proptest! {
        #[test]
        fn dp_matches_enumeration_and_milp(costs in prop::collection::vec(0.0..1.0f64, 8)) {
            let (inst, g) = gen_layered_spp(3, 2).unwrap();
            let (dp, path) = shortest_path_dp(&g, &costs);
            let brute = g.all_paths().iter().map(|p| crate::model::dot(p, &costs)).fold(f64::INFINITY, f64::min);
            prop_assert!((dp - brute).abs() < 1e-12);
            prop_assert!((crate::model::dot(&path, &costs) - dp).abs() < 1e-12);

            let mut lp = solver::LinearProgram::new(0, Sense::Minimize);
            inst.feasible.embed(&mut lp).unwrap();
            lp.objective = costs.clone();
            let res = solver::solve_milp(&MixedIntegerProgram::new(lp.clone(), vec![true; 8]));
            prop_assert!((res.value - dp).abs() < 1e-9);
            // network matrix: the relaxation is already integral
            let relaxed = solver::solve_lp(&lp);
            prop_assert!((relaxed.value - dp).abs() < 1e-9);
        }
    }
}
