//! Exhaustive ground truth at desk scale.
//!
//! Everything here is definitional enumeration and never calls the matching,
//! negative-cycle, separation or LP code, so the other modules can be tested
//! against it without circularity. Each operation has a hard size guard.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{Signed, Zero};

use crate::model::{Allocation, Coalition, Instance, VertexId, Violation, ViolationKind};
use crate::negcycle::{CostedGraph, Cycle};
use crate::rational::{sum, Rational};

pub const MAX_SUBSET_EDGES: usize = 25;
pub const MAX_CORE_VERTICES: usize = 12;
pub const MAX_CYCLE_VERTICES: usize = 9;
pub const MAX_CUT_VERTICES: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleError {
    TooManyEdges { edges: usize, limit: usize },
    TooManyVertices { vertices: usize, limit: usize },
    LengthMismatch,
}

impl fmt::Display for OracleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleError::TooManyEdges { edges, limit } => {
                write!(f, "size guard: {edges} edges exceeds the enumeration limit of {limit}")
            }
            OracleError::TooManyVertices { vertices, limit } => {
                write!(f, "size guard: {vertices} vertices exceeds the enumeration limit of {limit}")
            }
            OracleError::LengthMismatch => f.write_str("vector length does not match the graph"),
        }
    }
}

impl core::error::Error for OracleError {}

fn guard_vertices(n: usize, limit: usize) -> Result<(), OracleError> {
    if n > limit {
        return Err(OracleError::TooManyVertices { vertices: n, limit });
    }
    Ok(())
}

/// ν(S) by enumerating every degree-feasible edge subset of G[S].
pub fn nu_bruteforce(inst: &Instance, coalition: &Coalition) -> Result<Rational, OracleError> {
    let edges = inst.induced_edges(coalition.members());
    if edges.len() > MAX_SUBSET_EDGES {
        return Err(OracleError::TooManyEdges { edges: edges.len(), limit: MAX_SUBSET_EDGES });
    }
    let mut load = vec![0u8; inst.n()];
    let mut best = Rational::zero();
    subset_search(inst, &edges, 0, &mut load, Rational::zero(), &mut best);
    Ok(best)
}

// Depth-first over include/exclude decisions; an edge may only be included
// while both endpoints have spare capacity.
fn subset_search(inst: &Instance, edges: &[usize], at: usize, load: &mut [u8], acc: Rational, best: &mut Rational) {
    if at == edges.len() {
        if acc > *best {
            *best = acc;
        }
        return;
    }
    let e = inst.edge(edges[at]);
    if load[e.u] < inst.capacity(e.u) && load[e.v] < inst.capacity(e.v) {
        load[e.u] += 1;
        load[e.v] += 1;
        subset_search(inst, edges, at + 1, load, &acc + &e.w, best);
        load[e.u] -= 1;
        load[e.v] -= 1;
    }
    subset_search(inst, edges, at + 1, load, acc, best);
}

/// A coalition whose core constraint fails.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoalitionViolation {
    pub coalition: Coalition,
    pub allocated: Rational,
    pub value: Rational,
    /// True when the failure is `p(N) ≠ ν(N)` rather than `p(S) < ν(S)`.
    pub total: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoreVerdict {
    InCore,
    Violated(CoalitionViolation),
}

impl CoreVerdict {
    pub fn in_core(&self) -> bool {
        matches!(self, CoreVerdict::InCore)
    }
}

/// Core membership by checking every coalition.
///
/// A total-value mismatch is reported first; otherwise the coalition with
/// the largest ν(S) − p(S) is returned, ties going to the lexicographically
/// smallest member list.
pub fn core_check_bruteforce(inst: &Instance, p: &Allocation) -> Result<CoreVerdict, OracleError> {
    let n = inst.n();
    guard_vertices(n, MAX_CORE_VERTICES)?;
    if p.len() != n {
        return Err(OracleError::LengthMismatch);
    }
    let grand = Coalition::grand(inst);
    let total_value = nu_bruteforce(inst, &grand)?;
    if p.total() != total_value {
        return Ok(CoreVerdict::Violated(CoalitionViolation {
            coalition: grand,
            allocated: p.total(),
            value: total_value,
            total: true,
        }));
    }
    let mut worst: Option<(Rational, CoalitionViolation)> = None;
    for mask in 1u32..(1u32 << n) - 1 {
        let coalition = Coalition::new((0..n).filter(|v| mask >> v & 1 == 1)).expect("nonempty mask");
        let allocated = p.sum_over(coalition.members());
        let value = nu_bruteforce(inst, &coalition)?;
        if allocated >= value {
            continue;
        }
        let gap = &value - &allocated;
        let better = match &worst {
            None => true,
            Some((g, w)) => gap > *g || (gap == *g && coalition.members() < w.coalition.members()),
        };
        if better {
            worst = Some((gap, CoalitionViolation { coalition, allocated, value, total: false }));
        }
    }
    Ok(match worst {
        Some((_, v)) => CoreVerdict::Violated(v),
        None => CoreVerdict::InCore,
    })
}

/// A simple path or cycle of the instance graph.
///
/// For cycles `edges[i]` joins `vertices[i]` and `vertices[i + 1]`
/// cyclically; for paths `vertices` has one more entry than `edges`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Walk {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<usize>,
}

/// The cycle and path constraint families of the game.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ConstraintFamily {
    /// Simple cycles all of whose vertices have capacity 2.
    pub cycles: Vec<Walk>,
    /// Simple paths (lengths 0 to n − 1) whose inner vertices have capacity 2.
    pub paths: Vec<Walk>,
}

/// Lists each cycle once (starting at its smallest vertex, second vertex
/// smaller than the last) and each path once (first vertex smaller than the
/// last; single vertices for length zero).
pub fn enumerate_constraints(inst: &Instance) -> Result<ConstraintFamily, OracleError> {
    let n = inst.n();
    guard_vertices(n, MAX_CORE_VERTICES)?;
    let adj: Vec<Vec<(usize, VertexId)>> =
        inst.vertices().map(|v| inst.incident(v).into_iter().map(|k| (k, inst.edge(k).other(v))).collect()).collect();
    let mut family = ConstraintFamily::default();
    for s in inst.vertices() {
        family.paths.push(Walk { vertices: vec![s], edges: vec![] });
        let mut on = vec![false; n];
        on[s] = true;
        let mut walk = Walk { vertices: vec![s], edges: vec![] };
        extend_paths(inst, &adj, &mut on, &mut walk, &mut family.paths);
    }
    for s in inst.vertices().filter(|&s| inst.capacity(s) == 2) {
        let mut on = vec![false; n];
        on[s] = true;
        let mut walk = Walk { vertices: vec![s], edges: vec![] };
        extend_cycles(inst, &adj, &mut on, &mut walk, &mut family.cycles);
    }
    Ok(family)
}

fn extend_paths(inst: &Instance, adj: &[Vec<(usize, VertexId)>], on: &mut [bool], walk: &mut Walk, out: &mut Vec<Walk>) {
    let start = walk.vertices[0];
    let end = *walk.vertices.last().expect("nonempty");
    if end != start && inst.capacity(end) != 2 {
        return;
    }
    for &(k, next) in &adj[end] {
        if on[next] {
            continue;
        }
        on[next] = true;
        walk.vertices.push(next);
        walk.edges.push(k);
        if start < next {
            out.push(walk.clone());
        }
        extend_paths(inst, adj, on, walk, out);
        walk.vertices.pop();
        walk.edges.pop();
        on[next] = false;
    }
}

fn extend_cycles(inst: &Instance, adj: &[Vec<(usize, VertexId)>], on: &mut [bool], walk: &mut Walk, out: &mut Vec<Walk>) {
    let start = walk.vertices[0];
    let end = *walk.vertices.last().expect("nonempty");
    for &(k, next) in &adj[end] {
        if next == start && walk.vertices.len() >= 3 && walk.vertices[1] < end {
            let mut closed = walk.clone();
            closed.edges.push(k);
            out.push(closed);
            continue;
        }
        if next <= start || on[next] || inst.capacity(next) != 2 {
            continue;
        }
        on[next] = true;
        walk.vertices.push(next);
        walk.edges.push(k);
        extend_cycles(inst, adj, on, walk, out);
        walk.vertices.pop();
        walk.edges.pop();
        on[next] = false;
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConstraintVerdict {
    InCore,
    Violated(Violation),
}

impl ConstraintVerdict {
    pub fn in_core(&self) -> bool {
        matches!(self, ConstraintVerdict::InCore)
    }
}

/// Core membership through the total-value, cycle and path constraints.
///
/// Reports a total-value mismatch first, otherwise the most violated cycle
/// or path (earliest in enumeration order on ties). Paths of length zero
/// and one are reported as `Vertex` and `Edge` violations.
pub fn constraint_check_bruteforce(inst: &Instance, p: &Allocation) -> Result<ConstraintVerdict, OracleError> {
    guard_vertices(inst.n(), MAX_CORE_VERTICES)?;
    if p.len() != inst.n() {
        return Err(OracleError::LengthMismatch);
    }
    let grand = Coalition::grand(inst);
    let total_value = nu_bruteforce(inst, &grand)?;
    if p.total() != total_value {
        return Ok(ConstraintVerdict::Violated(Violation {
            kind: ViolationKind::TotalValue,
            coalition: grand,
            allocated: p.total(),
            bound: total_value,
            witness_edges: vec![],
        }));
    }
    let family = enumerate_constraints(inst)?;
    let mut worst: Option<Violation> = None;
    let candidates = family.cycles.iter().map(|w| (w, true)).chain(family.paths.iter().map(|w| (w, false)));
    for (walk, closed) in candidates {
        let allocated = p.sum_over(&walk.vertices);
        let bound = inst.weight_of(&walk.edges);
        if allocated >= bound {
            continue;
        }
        if worst.as_ref().is_some_and(|w| w.gap() >= &bound - &allocated) {
            continue;
        }
        let kind = match (closed, walk.edges.len()) {
            (true, _) => ViolationKind::Cycle,
            (false, 0) => ViolationKind::Vertex,
            (false, 1) => ViolationKind::Edge,
            (false, _) => ViolationKind::Path,
        };
        let witness_edges = if matches!(kind, ViolationKind::Cycle | ViolationKind::Path) { walk.edges.clone() } else { vec![] };
        worst = Some(Violation {
            kind,
            coalition: Coalition::new(walk.vertices.iter().copied()).expect("nonempty walk"),
            allocated,
            bound,
            witness_edges,
        });
    }
    Ok(match worst {
        Some(v) => ConstraintVerdict::Violated(v),
        None => ConstraintVerdict::InCore,
    })
}

/// Every simple cycle of a costed graph, each listed once.
pub fn simple_cycles(g: &CostedGraph) -> Result<Vec<Cycle>, OracleError> {
    guard_vertices(g.vertex_count(), MAX_CYCLE_VERTICES)?;
    let n = g.vertex_count();
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (k, &(u, v)) in g.edges().iter().enumerate() {
        let (a, b) = (g.local(u).expect("valid"), g.local(v).expect("valid"));
        adj[a].push((k, b));
        adj[b].push((k, a));
    }
    let mut out = Vec::new();
    for s in 0..n {
        let mut on = vec![false; n];
        on[s] = true;
        let mut verts = vec![s];
        let mut edges = Vec::new();
        cycle_dfs(g, &adj, &mut on, &mut verts, &mut edges, &mut out);
    }
    Ok(out)
}

fn cycle_dfs(
    g: &CostedGraph,
    adj: &[Vec<(usize, usize)>],
    on: &mut [bool],
    verts: &mut Vec<usize>,
    edges: &mut Vec<usize>,
    out: &mut Vec<Cycle>,
) {
    let start = verts[0];
    let end = *verts.last().expect("nonempty");
    for &(k, next) in &adj[end] {
        if next == start && verts.len() >= 3 && verts[1] < end {
            let mut cyc_edges = edges.clone();
            cyc_edges.push(k);
            let cost = g.cost_of(&cyc_edges);
            out.push(Cycle { vertices: verts.iter().map(|&l| g.vertices()[l]).collect(), edges: cyc_edges, cost });
            continue;
        }
        if next <= start || on[next] {
            continue;
        }
        on[next] = true;
        verts.push(next);
        edges.push(k);
        cycle_dfs(g, adj, on, verts, edges, out);
        verts.pop();
        edges.pop();
        on[next] = false;
    }
}

/// The cheapest simple cycle if its cost is negative.
pub fn negative_cycle_bruteforce(g: &CostedGraph) -> Result<Option<Cycle>, OracleError> {
    let best = simple_cycles(g)?.into_iter().min_by(|a, b| a.cost.cmp(&b.cost));
    Ok(best.filter(|c| c.cost.is_negative()))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CutVerdict {
    Holds,
    /// `x_e > x(B \ e)` for the cut `B = δ(side)`.
    Violated {
        side: Vec<VertexId>,
        edge: usize,
    },
    NegativeEntry {
        edge: usize,
    },
}

/// Checks `x ≥ 0` and `x_e ≤ x(B \ e)` for every cut `B = δ(X)` and every
/// edge `e ∈ B`, enumerating all vertex bipartitions.
pub fn check_cut_system(g: &CostedGraph, x: &[Rational]) -> Result<CutVerdict, OracleError> {
    let n = g.vertex_count();
    guard_vertices(n, MAX_CUT_VERTICES)?;
    if x.len() != g.edge_count() {
        return Err(OracleError::LengthMismatch);
    }
    if let Some(edge) = x.iter().position(Signed::is_negative) {
        return Ok(CutVerdict::NegativeEntry { edge });
    }
    if n < 2 {
        return Ok(CutVerdict::Holds);
    }
    let local: Vec<(usize, usize)> =
        g.edges().iter().map(|&(u, v)| (g.local(u).expect("valid"), g.local(v).expect("valid"))).collect();
    // Fixing the last vertex outside X lists each cut once.
    for mask in 1u32..(1u32 << (n - 1)) {
        let inside = |l: usize| mask >> l & 1 == 1;
        let cut: Vec<usize> = (0..g.edge_count()).filter(|&k| inside(local[k].0) != inside(local[k].1)).collect();
        let total = sum(cut.iter().map(|&k| &x[k]));
        for &e in &cut {
            if &x[e] + &x[e] > total {
                let side = (0..n).filter(|&l| inside(l)).map(|l| g.vertices()[l]).collect();
                return Ok(CutVerdict::Violated { side, edge: e });
            }
        }
    }
    Ok(CutVerdict::Holds)
}
