//! Polynomial-time separation over the core of a 2-matching game.
//!
//! An allocation is in the core exactly when `p(N) = ν(N)`, every vertex and
//! edge constraint holds, `p(C) ≥ w(C)` for every cycle through capacity-2
//! vertices only, and `p(P) ≥ w(P)` for every path whose inner vertices have
//! capacity 2. Cycles and paths are both reduced to negative-cycle detection
//! under the edge costs `c_ij = (p_i + p_j) / 2 − w_ij`: a cycle `C` has
//! `c(C) = p(C) − w(C)` because every vertex of `C` meets two of its edges.
//! A path from `s` to `t` becomes a cycle by closing it with an added edge
//! `st` of weight 0 and cost `(p_s + p_t) / 2`.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::Signed;

use crate::matching::max_weight_b_matching;
use crate::model::{walk_vertices, Allocation, Coalition, Instance, VertexId, Violation, ViolationKind};
use crate::negcycle::{find_negative_cycle, CostedGraph, Cycle};
use crate::rational::{half, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SeparationVerdict {
    InCore,
    Violated(Violation),
}

impl SeparationVerdict {
    pub fn in_core(&self) -> bool {
        matches!(self, SeparationVerdict::InCore)
    }

    pub fn violation(&self) -> Option<&Violation> {
        match self {
            SeparationVerdict::InCore => None,
            SeparationVerdict::Violated(v) => Some(v),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SeparationError {
    SameEndpoints { vertex: VertexId },
    UnknownVertex { vertex: VertexId },
}

impl fmt::Display for SeparationError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeparationError::SameEndpoints { vertex } => write!(f, "path endpoints must differ (both are {vertex})"),
            SeparationError::UnknownVertex { vertex } => write!(f, "unknown vertex {vertex}"),
        }
    }
}

impl core::error::Error for SeparationError {}

/// `p(N) = ν(N)`.
pub fn check_total_value(inst: &Instance, p: &Allocation) -> Option<Violation> {
    let value = max_weight_b_matching(inst).weight;
    let allocated = p.total();
    if allocated == value {
        return None;
    }
    Some(Violation {
        kind: ViolationKind::TotalValue,
        coalition: Coalition::grand(inst),
        allocated,
        bound: value,
        witness_edges: vec![],
    })
}

fn vertex_violation(p: &Allocation, v: VertexId) -> Option<Violation> {
    p[v].is_negative().then(|| Violation {
        kind: ViolationKind::Vertex,
        coalition: Coalition::new([v]).expect("nonempty"),
        allocated: p[v].clone(),
        bound: Rational::from_integer(0.into()),
        witness_edges: vec![],
    })
}

fn edge_violation(inst: &Instance, p: &Allocation, k: usize) -> Option<Violation> {
    let e = inst.edge(k);
    let allocated = &p[e.u] + &p[e.v];
    (allocated < e.w).then(|| Violation {
        kind: ViolationKind::Edge,
        coalition: Coalition::new([e.u, e.v]).expect("nonempty"),
        allocated,
        bound: e.w.clone(),
        witness_edges: vec![],
    })
}

/// First failing `p_i ≥ 0` (by vertex id), then first failing
/// `p_i + p_j ≥ w_ij` (by edge order).
pub fn separate_vertices_edges(inst: &Instance, p: &Allocation) -> Option<Violation> {
    inst.vertices().find_map(|v| vertex_violation(p, v)).or_else(|| (0..inst.m()).find_map(|k| edge_violation(inst, p, k)))
}

/// `(p_u + p_v) / 2 − w` for instance edge `k`.
pub fn transfer_cost(inst: &Instance, p: &Allocation, k: usize) -> Rational {
    let e = inst.edge(k);
    (&p[e.u] + &p[e.v]) * half() - &e.w
}

/// G₂ = G[N₂] with costs `(p_i + p_j) / 2 − w_ij`.
pub fn build_g2(inst: &Instance, p: &Allocation) -> CostedGraph {
    let members = inst.two_vertices();
    let edges = inst.induced_edges(&members);
    let pairs = edges.iter().map(|&k| (inst.edge(k).u, inst.edge(k).v)).collect();
    let costs = edges.iter().map(|&k| transfer_cost(inst, p, k)).collect();
    CostedGraph::new(members, pairs, costs)
        .expect("induced subgraph of a simple graph")
        .with_origins(edges.into_iter().map(Some).collect())
}

fn cycle_violation(inst: &Instance, p: &Allocation, g: &CostedGraph, cycle: &Cycle) -> Violation {
    let witness: Vec<usize> = cycle.edges.iter().map(|&k| g.origin(k).expect("instance edge")).collect();
    let coalition = Coalition::new(cycle.vertices.iter().copied()).expect("nonempty cycle");
    Violation {
        kind: ViolationKind::Cycle,
        allocated: p.sum_over(coalition.members()),
        bound: inst.weight_of(&witness),
        coalition,
        witness_edges: witness,
    }
}

/// Cycle constraints through a negative-cycle search on G₂.
pub fn separate_cycles(inst: &Instance, p: &Allocation) -> Option<Violation> {
    let g2 = build_g2(inst, p);
    find_negative_cycle(&g2).map(|c| cycle_violation(inst, p, &g2, &c))
}

/// One member of the G(s, t) family.
///
/// `base` is G[N₂ ∪ {s, t}] with any original `st` edge replaced by the
/// marker edge `st` (weight 0, cost `(p_s + p_t) / 2`), which is always the
/// last edge. An endpoint of capacity 1 keeps only the marker and the one
/// instance edge recorded in `kept_s` / `kept_t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VariantGraph {
    pub base: CostedGraph,
    pub s: VertexId,
    pub t: VertexId,
    pub kept_s: Option<usize>,
    pub kept_t: Option<usize>,
}

/// Topology of a variant: its vertices and instance edges (the marker `st`
/// edge is implicit).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VariantLayout {
    pub s: VertexId,
    pub t: VertexId,
    pub vertices: Vec<VertexId>,
    pub edges: Vec<usize>,
    pub kept_s: Option<usize>,
    pub kept_t: Option<usize>,
}

impl VariantLayout {
    /// Number of instance edges at `x` (the marker edge not included).
    pub fn non_marker_degree(&self, inst: &Instance, x: VertexId) -> usize {
        self.edges.iter().filter(|&&k| inst.edge(k).touches(x)).count()
    }

    /// Edge list with the marker appended, as ambient vertex pairs.
    pub fn pairs(&self, inst: &Instance) -> Vec<(VertexId, VertexId)> {
        let mut pairs: Vec<_> = self.edges.iter().map(|&k| (inst.edge(k).u, inst.edge(k).v)).collect();
        pairs.push((self.s, self.t));
        pairs
    }

    pub fn with_costs(&self, inst: &Instance, p: &Allocation) -> VariantGraph {
        let mut costs: Vec<Rational> = self.edges.iter().map(|&k| transfer_cost(inst, p, k)).collect();
        costs.push((&p[self.s] + &p[self.t]) * half());
        let mut origins: Vec<Option<usize>> = self.edges.iter().copied().map(Some).collect();
        origins.push(None);
        let marker = self.edges.len();
        let base = CostedGraph::new(self.vertices.iter().copied(), self.pairs(inst), costs)
            .expect("variant graphs are simple")
            .with_origins(origins)
            .with_marker(marker);
        VariantGraph { base, s: self.s, t: self.t, kept_s: self.kept_s, kept_t: self.kept_t }
    }
}

/// All variant layouts for the unordered pair {s, t}.
///
/// One layout when both endpoints have capacity 2; one per choice of kept
/// edge at each capacity-1 endpoint otherwise. The list is empty when a
/// capacity-1 endpoint has no instance edge into G(s, t), or when a
/// capacity-2 endpoint is isolated in G.
pub fn variant_layouts(inst: &Instance, s: VertexId, t: VertexId) -> Result<Vec<VariantLayout>, SeparationError> {
    for x in [s, t] {
        if x >= inst.n() {
            return Err(SeparationError::UnknownVertex { vertex: x });
        }
    }
    if s == t {
        return Err(SeparationError::SameEndpoints { vertex: s });
    }
    let (s, t) = if s < t { (s, t) } else { (t, s) };
    let mut members = inst.two_vertices();
    members.push(s);
    members.push(t);
    members.sort_unstable();
    members.dedup();
    let marker = inst.edge_between(s, t);
    let full: Vec<usize> = inst.induced_edges(&members).into_iter().filter(|&k| Some(k) != marker).collect();
    let at = |x: VertexId| -> Vec<usize> { full.iter().copied().filter(|&k| inst.edge(k).touches(x)).collect() };
    let options = |x: VertexId| -> Option<Vec<Option<usize>>> {
        if inst.capacity(x) == 1 {
            let edges = at(x);
            (!edges.is_empty()).then(|| edges.into_iter().map(Some).collect())
        } else {
            (inst.degree(x) > 0).then(|| vec![None])
        }
    };
    let (Some(s_opts), Some(t_opts)) = (options(s), options(t)) else {
        return Ok(Vec::new());
    };
    let mut layouts = Vec::new();
    for &kept_s in &s_opts {
        for &kept_t in &t_opts {
            let keep = |k: usize| {
                let e = inst.edge(k);
                (kept_s.is_none() || !e.touches(s) || kept_s == Some(k))
                    && (kept_t.is_none() || !e.touches(t) || kept_t == Some(k))
            };
            let edges = full.iter().copied().filter(|&k| keep(k)).collect();
            layouts.push(VariantLayout { s, t, vertices: members.clone(), edges, kept_s, kept_t });
        }
    }
    Ok(layouts)
}

/// The G(s, t) variants with costs for allocation `p`.
pub fn variants(inst: &Instance, p: &Allocation, s: VertexId, t: VertexId) -> Result<Vec<VariantGraph>, SeparationError> {
    Ok(variant_layouts(inst, s, t)?.iter().map(|l| l.with_costs(inst, p)).collect())
}

/// Unordered endpoint pairs in scan order.
pub fn endpoint_pairs(inst: &Instance) -> Vec<(VertexId, VertexId)> {
    let n = inst.n();
    (0..n).flat_map(|s| (s + 1..n).map(move |t| (s, t))).collect()
}

fn variant_violation(inst: &Instance, p: &Allocation, variant: &VariantGraph) -> Option<Violation> {
    let g = &variant.base;
    let cycle = find_negative_cycle(g)?;
    let marker = g.marker().expect("variants carry a marker");
    let Some(i) = cycle.edges.iter().position(|&k| k == marker) else {
        // Only possible when some cycle constraint is violated.
        return Some(cycle_violation(inst, p, g, &cycle));
    };
    let mut around: Vec<usize> =
        cycle.edges[i + 1..].iter().chain(&cycle.edges[..i]).map(|&k| g.origin(k).expect("instance edge")).collect();
    let walk = walk_vertices(inst, &around, false).expect("cycle minus one edge is a path");
    if walk[0] != variant.s {
        around.reverse();
    }
    let coalition = Coalition::new(walk.iter().copied()).expect("nonempty path");
    Some(Violation {
        kind: ViolationKind::Path,
        allocated: p.sum_over(coalition.members()),
        bound: inst.weight_of(&around),
        coalition,
        witness_edges: around,
    })
}

/// Path constraints of length at least two for the single pair {s, t}.
pub fn separate_pair(inst: &Instance, p: &Allocation, s: VertexId, t: VertexId) -> Result<Option<Violation>, SeparationError> {
    Ok(variants(inst, p, s, t)?.iter().find_map(|v| variant_violation(inst, p, v)))
}

/// Path constraints of length at least two.
///
/// Assumes cycle constraints already hold; a negative cycle avoiding the
/// marker edge is still reported, as a `Cycle` violation.
pub fn separate_paths(inst: &Instance, p: &Allocation) -> Option<Violation> {
    endpoint_pairs(inst).into_iter().find_map(|(s, t)| separate_pair(inst, p, s, t).expect("valid pair"))
}

/// Runs the total-value, vertex/edge, cycle and path checks in that order
/// and returns the first violation found.
pub fn separate(inst: &Instance, p: &Allocation) -> SeparationVerdict {
    let found = check_total_value(inst, p)
        .or_else(|| separate_vertices_edges(inst, p))
        .or_else(|| separate_cycles(inst, p))
        .or_else(|| separate_paths(inst, p));
    match found {
        Some(v) => SeparationVerdict::Violated(v),
        None => SeparationVerdict::InCore,
    }
}

/// Every violation the separation stages can produce: the total-value
/// check, each violated vertex and edge, the G₂ cycle, and one violation
/// per G(s, t) variant that has a negative cycle.
pub fn separate_all(inst: &Instance, p: &Allocation) -> Vec<Violation> {
    let mut out = Vec::new();
    out.extend(check_total_value(inst, p));
    out.extend(inst.vertices().filter_map(|v| vertex_violation(p, v)));
    out.extend((0..inst.m()).filter_map(|k| edge_violation(inst, p, k)));
    out.extend(separate_cycles(inst, p));
    for (s, t) in endpoint_pairs(inst) {
        for variant in variants(inst, p, s, t).expect("valid pair") {
            out.extend(variant_violation(inst, p, &variant));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{fig1, fig1_path_violation};
    use crate::model::Edge;
    use crate::rational::{int, rat};

    fn alloc(inst: &Instance, xs: &[Rational]) -> Allocation {
        Allocation::new(xs.to_vec(), inst).unwrap()
    }

    fn c4() -> Instance {
        Instance::new("c4", vec![2; 4], (0..4).map(|i| Edge::new(i, (i + 1) % 4, int(1))).collect()).unwrap()
    }

    #[test]
    fn total_value() {
        let (inst, p) = fig1();
        assert_eq!(check_total_value(&inst, &p), None);
        let v = check_total_value(&inst, &Allocation::zero(&inst)).unwrap();
        assert_eq!((v.kind, v.allocated, v.bound), (ViolationKind::TotalValue, int(0), int(12)));
        let empty = Instance::new("e", vec![1, 2, 1], vec![]).unwrap();
        assert_eq!(check_total_value(&empty, &Allocation::zero(&empty)), None);
    }

    #[test]
    fn vertices_and_edges() {
        let (inst, p) = fig1();
        assert_eq!(separate_vertices_edges(&inst, &p), None);
        let neg = alloc(&inst, &[int(0), int(-1), int(3), int(10), int(0)]);
        let v = separate_vertices_edges(&inst, &neg).unwrap();
        assert_eq!((v.kind, v.coalition.members()), (ViolationKind::Vertex, &[1][..]));
        let single = Instance::new("e", vec![1, 1], vec![Edge::new(0, 1, int(5))]).unwrap();
        let v = separate_vertices_edges(&single, &alloc(&single, &[int(2), int(2)])).unwrap();
        assert_eq!((v.kind, v.allocated, v.bound), (ViolationKind::Edge, int(4), int(5)));
    }

    #[test]
    fn g2_construction() {
        let (inst, p) = fig1();
        let g2 = build_g2(&inst, &p);
        assert_eq!(g2.vertices(), &[2, 3]);
        assert_eq!(g2.edges(), &[(2, 3)]);
        assert_eq!(g2.costs(), &[int(-4)]);

        let ones = Instance::new("b1", vec![1, 1, 1], vec![Edge::new(0, 1, int(1))]).unwrap();
        assert_eq!(build_g2(&ones, &Allocation::zero(&ones)).edge_count(), 0);

        let tri =
            Instance::new("t", vec![2, 2, 2], vec![Edge::new(0, 1, int(1)), Edge::new(1, 2, int(1)), Edge::new(0, 2, int(1))])
                .unwrap();
        assert_eq!(build_g2(&tri, &Allocation::zero(&tri)).costs(), &[int(-1), int(-1), int(-1)]);
    }

    #[test]
    fn cycles() {
        let (inst, p) = fig1();
        assert_eq!(separate_cycles(&inst, &p), None);
        let c4 = c4();
        let v = separate_cycles(&c4, &alloc(&c4, &vec![rat(1, 2); 4])).unwrap();
        assert_eq!((v.kind, v.allocated.clone(), v.bound.clone()), (ViolationKind::Cycle, int(2), int(4)));
        assert_eq!(v.coalition.members(), &[0, 1, 2, 3]);
        assert_eq!(v.verify(&c4, &alloc(&c4, &vec![rat(1, 2); 4])), Ok(()));
        assert_eq!(separate_cycles(&c4, &alloc(&c4, &vec![int(1); 4])), None);
    }

    #[test]
    fn variant_families() {
        let (inst, p) = fig1();
        let st = variants(&inst, &p, 0, 1).unwrap();
        assert_eq!(st.len(), 1);
        let g = &st[0].base;
        assert_eq!(g.vertices(), &[0, 1, 2, 3]);
        assert_eq!(g.edges(), &[(0, 2), (1, 2), (2, 3), (0, 1)]);
        assert_eq!(g.marker(), Some(3));
        assert_eq!(g.costs()[3], int(0));
        assert_eq!((st[0].kept_s, st[0].kept_t), (Some(0), Some(1)));

        let uv = variants(&inst, &p, 2, 3).unwrap();
        assert_eq!(uv.len(), 1);
        assert_eq!(uv[0].base.edges(), &[(2, 3)]);
        assert_eq!(uv[0].base.costs(), &[int(6)]);

        let lonely = Instance::new("l", vec![2, 2, 2], vec![Edge::new(1, 2, int(1))]).unwrap();
        assert!(variants(&lonely, &Allocation::zero(&lonely), 0, 1).unwrap().is_empty());
        assert_eq!(variants(&inst, &p, 2, 2), Err(SeparationError::SameEndpoints { vertex: 2 }));
    }

    #[test]
    fn capacity_one_endpoints_branch_on_kept_edges() {
        // s = 0 (b = 1) adjacent to 2 and 3; t = 1 (b = 1) adjacent to 2, 3, 4.
        let inst = Instance::new(
            "branch",
            vec![1, 1, 2, 2, 2],
            vec![
                Edge::new(0, 2, int(1)),
                Edge::new(0, 3, int(1)),
                Edge::new(1, 2, int(1)),
                Edge::new(1, 3, int(1)),
                Edge::new(1, 4, int(1)),
                Edge::new(2, 3, int(1)),
            ],
        )
        .unwrap();
        let vs = variants(&inst, &Allocation::zero(&inst), 0, 1).unwrap();
        assert_eq!(vs.len(), 2 * 3);
        for v in &vs {
            let g = &v.base;
            let at = |x| g.edges().iter().filter(|&&(a, b)| a == x || b == x).count();
            assert_eq!(at(0), 2);
            assert_eq!(at(1), 2);
        }
    }

    #[test]
    fn paths() {
        let (inst, p) = fig1();
        assert_eq!(separate_paths(&inst, &p), None);
        let bad = fig1_path_violation();
        let v = separate_paths(&inst, &bad).unwrap();
        assert_eq!(v.kind, ViolationKind::Path);
        assert_eq!(v.coalition.members(), &[0, 1, 2]);
        assert_eq!((v.allocated.clone(), v.bound.clone()), (int(1), int(2)));
        assert_eq!(v.witness_edges, vec![0, 1]);
        assert_eq!(v.verify(&inst, &bad), Ok(()));
        let rich = alloc(&inst, &vec![int(100); 5]);
        assert_eq!(separate_paths(&inst, &rich), None);
    }

    #[test]
    fn full_separation() {
        let (inst, p) = fig1();
        assert_eq!(separate(&inst, &p), SeparationVerdict::InCore);
        match separate(&inst, &fig1_path_violation()) {
            SeparationVerdict::Violated(v) => {
                assert_eq!(v.kind, ViolationKind::Path);
                assert_eq!(v.coalition.members(), &[0, 1, 2]);
            }
            other => panic!("unexpected {other:?}"),
        }
        let lopsided = alloc(&inst, &[int(12), int(0), int(0), int(0), int(0)]);
        let v = separate(&inst, &lopsided).violation().cloned().unwrap();
        // tu is the first edge in scan order with 0 + 0 < 1; uv fails too.
        assert_eq!(v.kind, ViolationKind::Edge);
        assert_eq!(v.coalition.members(), &[1, 2]);
        assert!(separate_all(&inst, &lopsided).len() >= 3);
        assert!(separate_all(&inst, &p).is_empty());
    }
}
