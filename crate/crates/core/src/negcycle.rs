//! Negative-cost cycles in undirected graphs with signed edge costs.
//!
//! A graph has a negative simple cycle exactly when its minimum-cost
//! ∅-join (even-degree edge set) is negative. With `E⁻` the negative edges
//! and `T'` the odd-degree vertices of `E⁻`, the minimum ∅-join is
//! `E⁻ Δ J` for a minimum `T'`-join `J` under the costs `|c|`. The T-join is
//! found from shortest paths between `T'` vertices and a minimum-weight
//! perfect matching on them. Decomposing the ∅-join into simple cycles
//! yields an explicit negative cycle.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{Signed, Zero};

use crate::matching::min_weight_perfect_matching;
use crate::model::VertexId;
use crate::rational::{sum, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NegCycleError {
    NotSimple,
    OddT,
    NegativeCost,
    Disconnected,
    OddDegree { vertex: VertexId },
    UnknownVertex { vertex: VertexId },
}

impl fmt::Display for NegCycleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NegCycleError::NotSimple => f.write_str("graph is not simple"),
            NegCycleError::OddT => f.write_str("odd T: a T-join needs |T| even"),
            NegCycleError::NegativeCost => f.write_str("T-join costs must be nonnegative"),
            NegCycleError::Disconnected => f.write_str("T-join does not exist: some component holds an odd number of T vertices"),
            NegCycleError::OddDegree { vertex } => write!(f, "vertex {vertex} has odd degree"),
            NegCycleError::UnknownVertex { vertex } => write!(f, "unknown vertex {vertex}"),
        }
    }
}

impl core::error::Error for NegCycleError {}

/// Simple undirected graph with signed rational edge costs.
///
/// Vertices keep the ids of the instance they were derived from. `origin`
/// records the instance edge behind each graph edge (`None` for added
/// edges) and `marker` tags one distinguished edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CostedGraph {
    vertices: Vec<VertexId>,
    edges: Vec<(VertexId, VertexId)>,
    costs: Vec<Rational>,
    origin: Vec<Option<usize>>,
    marker: Option<usize>,
}

impl CostedGraph {
    pub fn new(
        vertices: impl IntoIterator<Item = VertexId>,
        edges: Vec<(VertexId, VertexId)>,
        costs: Vec<Rational>,
    ) -> Result<Self, NegCycleError> {
        let vertices: Vec<VertexId> = vertices.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        if edges.len() != costs.len() {
            return Err(NegCycleError::NotSimple);
        }
        let mut seen = BTreeSet::new();
        for &(u, v) in &edges {
            for x in [u, v] {
                if vertices.binary_search(&x).is_err() {
                    return Err(NegCycleError::UnknownVertex { vertex: x });
                }
            }
            if u == v || !seen.insert(crate::model::key(u, v)) {
                return Err(NegCycleError::NotSimple);
            }
        }
        let origin = vec![None; edges.len()];
        Ok(CostedGraph { vertices, edges, costs, origin, marker: None })
    }

    /// Graph on vertices `0..n`.
    pub fn on_range(n: usize, edges: Vec<(VertexId, VertexId)>, costs: Vec<Rational>) -> Result<Self, NegCycleError> {
        Self::new(0..n, edges, costs)
    }

    pub fn with_origins(mut self, origin: Vec<Option<usize>>) -> Self {
        assert_eq!(origin.len(), self.edges.len());
        self.origin = origin;
        self
    }

    pub fn with_marker(mut self, marker: usize) -> Self {
        assert!(marker < self.edges.len());
        self.marker = Some(marker);
        self
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }

    pub fn costs(&self) -> &[Rational] {
        &self.costs
    }

    pub fn cost(&self, k: usize) -> &Rational {
        &self.costs[k]
    }

    pub fn origin(&self, k: usize) -> Option<usize> {
        self.origin[k]
    }

    pub fn marker(&self) -> Option<usize> {
        self.marker
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Position of an ambient vertex id in `vertices()`.
    pub fn local(&self, v: VertexId) -> Option<usize> {
        self.vertices.binary_search(&v).ok()
    }

    fn local_edges(&self) -> Vec<(usize, usize)> {
        self.edges.iter().map(|&(u, v)| (self.local(u).expect("checked"), self.local(v).expect("checked"))).collect()
    }

    pub fn cost_of(&self, edges: &[usize]) -> Rational {
        sum(edges.iter().map(|&k| &self.costs[k]))
    }

    /// Same topology with different costs.
    pub fn with_costs(&self, costs: Vec<Rational>) -> Self {
        assert_eq!(costs.len(), self.edges.len());
        CostedGraph { costs, ..self.clone() }
    }
}

/// A simple cycle: `edges[i]` joins `vertices[i]` and `vertices[i + 1]`
/// (cyclically).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cycle {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<usize>,
    pub cost: Rational,
}

impl Cycle {
    pub fn sorted_edges(&self) -> Vec<usize> {
        let mut e = self.edges.clone();
        e.sort_unstable();
        e
    }
}

/// Single-source shortest paths with nonnegative costs (dense Dijkstra).
/// Returns distances and the predecessor edge of each reached vertex.
fn shortest_paths(
    n: usize,
    adj: &[Vec<(usize, usize)>],
    costs: &[Rational],
    source: usize,
) -> (Vec<Option<Rational>>, Vec<Option<usize>>) {
    let mut dist: Vec<Option<Rational>> = vec![None; n];
    let mut pred = vec![None; n];
    let mut done = vec![false; n];
    dist[source] = Some(Rational::zero());
    loop {
        let mut pick: Option<usize> = None;
        for v in 0..n {
            if done[v] {
                continue;
            }
            if let Some(d) = &dist[v] {
                if pick.is_none_or(|p| d < dist[p].as_ref().expect("reached")) {
                    pick = Some(v);
                }
            }
        }
        let Some(x) = pick else { break };
        done[x] = true;
        let dx = dist[x].clone().expect("reached");
        for &(k, y) in &adj[x] {
            if done[y] {
                continue;
            }
            let cand = &dx + &costs[k];
            if dist[y].as_ref().is_none_or(|d| cand < *d) {
                dist[y] = Some(cand);
                pred[y] = Some(k);
            }
        }
    }
    (dist, pred)
}

fn adjacency(n: usize, local_edges: &[(usize, usize)]) -> Vec<Vec<(usize, usize)>> {
    let mut adj = vec![Vec::new(); n];
    for (k, &(u, v)) in local_edges.iter().enumerate() {
        adj[u].push((k, v));
        adj[v].push((k, u));
    }
    adj
}

/// Minimum-cost T-join under nonnegative `costs` (one per edge of `g`).
///
/// Returns the join's edge indices (ascending) and its cost.
pub fn min_t_join(g: &CostedGraph, costs: &[Rational], t: &[VertexId]) -> Result<(Vec<usize>, Rational), NegCycleError> {
    if costs.len() != g.edge_count() {
        return Err(NegCycleError::NotSimple);
    }
    if costs.iter().any(Signed::is_negative) {
        return Err(NegCycleError::NegativeCost);
    }
    let t_set: BTreeSet<VertexId> = t.iter().copied().collect();
    if t_set.len() != t.len() || t.len() % 2 == 1 {
        return Err(NegCycleError::OddT);
    }
    let terminals: Vec<usize> =
        t_set.iter().map(|&v| g.local(v).ok_or(NegCycleError::UnknownVertex { vertex: v })).collect::<Result<_, _>>()?;
    if terminals.is_empty() {
        return Ok((Vec::new(), Rational::zero()));
    }
    let n = g.vertex_count();
    let local_edges = g.local_edges();
    let adj = adjacency(n, &local_edges);
    let trees: Vec<_> = terminals.iter().map(|&s| shortest_paths(n, &adj, costs, s)).collect();

    let mut pair_edges = Vec::new();
    let mut pair_weights = Vec::new();
    for (i, tree) in trees.iter().enumerate() {
        for (j, &target) in terminals.iter().enumerate().skip(i + 1) {
            if let Some(d) = &tree.0[target] {
                pair_edges.push((i, j));
                pair_weights.push(d.clone());
            }
        }
    }
    let pairing =
        min_weight_perfect_matching(terminals.len(), &pair_edges, &pair_weights).map_err(|_| NegCycleError::Disconnected)?;

    let mut in_join = vec![false; g.edge_count()];
    for &k in &pairing.edges {
        let (i, j) = pair_edges[k];
        let pred = &trees[i].1;
        let mut at = terminals[j];
        while at != terminals[i] {
            let e = pred[at].expect("reachable");
            in_join[e] = !in_join[e];
            let (a, b) = local_edges[e];
            at = if a == at { b } else { a };
        }
    }
    let join: Vec<usize> = (0..g.edge_count()).filter(|&k| in_join[k]).collect();
    let cost = sum(join.iter().map(|&k| &costs[k]));
    Ok((join, cost))
}

/// Minimum-cost edge set in which every vertex has even degree.
///
/// The cost is never positive since the empty set qualifies.
pub fn min_zero_join(g: &CostedGraph) -> (Vec<usize>, Rational) {
    let negative: Vec<usize> = (0..g.edge_count()).filter(|&k| g.cost(k).is_negative()).collect();
    let mut parity = vec![false; g.vertex_count()];
    for &k in &negative {
        let (u, v) = g.edges()[k];
        for x in [u, v] {
            let l = g.local(x).expect("checked");
            parity[l] = !parity[l];
        }
    }
    let odd: Vec<VertexId> = (0..g.vertex_count()).filter(|&l| parity[l]).map(|l| g.vertices()[l]).collect();
    let abs: Vec<Rational> = g.costs().iter().map(Signed::abs).collect();
    let (join, _) = min_t_join(g, &abs, &odd).expect("odd vertices of E- pair up inside E-");
    let mut chosen = vec![false; g.edge_count()];
    for k in negative {
        chosen[k] = true;
    }
    for k in join {
        chosen[k] = !chosen[k];
    }
    let set: Vec<usize> = (0..g.edge_count()).filter(|&k| chosen[k]).collect();
    let cost = g.cost_of(&set);
    debug_assert!(!cost.is_positive());
    (set, cost)
}

/// Splits an even-degree edge set into edge-disjoint simple cycles.
pub fn decompose_even_subgraph(g: &CostedGraph, join: &[usize]) -> Result<Vec<Cycle>, NegCycleError> {
    let n = g.vertex_count();
    let local_edges = g.local_edges();
    let mut members: Vec<usize> = join.to_vec();
    members.sort_unstable();
    members.dedup();
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for &k in &members {
        if k >= g.edge_count() {
            return Err(NegCycleError::NotSimple);
        }
        let (u, v) = local_edges[k];
        adj[u].push((k, v));
        adj[v].push((k, u));
    }
    for (l, list) in adj.iter().enumerate() {
        if list.len() % 2 == 1 {
            return Err(NegCycleError::OddDegree { vertex: g.vertices()[l] });
        }
    }
    let mut used = vec![false; g.edge_count()];
    let mut position: Vec<Option<usize>> = vec![None; n];
    let mut cycles = Vec::new();
    for &first in &members {
        if used[first] {
            continue;
        }
        let start = local_edges[first].0;
        let mut trail_v = vec![start];
        let mut trail_e: Vec<usize> = Vec::new();
        position[start] = Some(0);
        let mut cur = start;
        loop {
            let next = adj[cur].iter().find(|(k, _)| !used[*k]).copied();
            let Some((k, nxt)) = next else {
                debug_assert!(trail_e.is_empty());
                break;
            };
            used[k] = true;
            if let Some(i) = position[nxt] {
                let mut edges: Vec<usize> = trail_e[i..].to_vec();
                edges.push(k);
                let verts: Vec<VertexId> = trail_v[i..].iter().map(|&l| g.vertices()[l]).collect();
                for &l in &trail_v[i + 1..] {
                    position[l] = None;
                }
                trail_v.truncate(i + 1);
                trail_e.truncate(i);
                let cost = g.cost_of(&edges);
                cycles.push(Cycle { vertices: verts, edges, cost });
                cur = nxt;
            } else {
                position[nxt] = Some(trail_v.len());
                trail_v.push(nxt);
                trail_e.push(k);
                cur = nxt;
            }
        }
        position[start] = None;
    }
    Ok(cycles)
}

/// A simple cycle of negative cost, if the graph has one.
///
/// Returns the most negative cycle of the decomposed minimum ∅-join; ties
/// go to the lexicographically smallest sorted edge list.
pub fn find_negative_cycle(g: &CostedGraph) -> Option<Cycle> {
    let (join, cost) = min_zero_join(g);
    if !cost.is_negative() {
        return None;
    }
    let cycles = decompose_even_subgraph(g, &join).expect("zero-join has even degrees");
    let best = cycles
        .into_iter()
        .min_by(|a, b| a.cost.cmp(&b.cost).then_with(|| a.sorted_edges().cmp(&b.sorted_edges())))
        .expect("negative join has a cycle");
    debug_assert!(best.cost.is_negative());
    Some(best)
}
