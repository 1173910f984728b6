//! Instances, allocations, coalitions and violation certificates.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{Signed, Zero};

use crate::rational::{sum, Rational};

pub type VertexId = usize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub u: VertexId,
    pub v: VertexId,
    pub w: Rational,
}

impl Edge {
    pub fn new(u: VertexId, v: VertexId, w: Rational) -> Self {
        Edge { u, v, w }
    }

    pub fn other(&self, x: VertexId) -> VertexId {
        if self.u == x {
            self.v
        } else {
            self.u
        }
    }

    pub fn touches(&self, x: VertexId) -> bool {
        self.u == x || self.v == x
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModelError {
    Loop { vertex: VertexId },
    DuplicateEdge { u: VertexId, v: VertexId },
    CapacityOutOfRange { vertex: VertexId, b: u64 },
    NegativeWeight { u: VertexId, v: VertexId },
    UnknownVertex { vertex: VertexId },
    AllocationLength { expected: usize, found: usize },
    EmptyCoalition,
}

impl fmt::Display for ModelError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelError::Loop { vertex } => write!(f, "loop at vertex {vertex}"),
            ModelError::DuplicateEdge { u, v } => write!(f, "duplicate edge {u} {v}"),
            ModelError::CapacityOutOfRange { vertex, b } => {
                write!(f, "capacity out of range: vertex {vertex} has b = {b}, expected 1 or 2")
            }
            ModelError::NegativeWeight { u, v } => write!(f, "negative weight on edge {u} {v}"),
            ModelError::UnknownVertex { vertex } => write!(f, "unknown vertex {vertex}"),
            ModelError::AllocationLength { expected, found } => {
                write!(f, "allocation has {found} entries, instance has {expected} vertices")
            }
            ModelError::EmptyCoalition => write!(f, "coalition must be nonempty"),
        }
    }
}

impl core::error::Error for ModelError {}

/// A 2-matching game: simple graph, capacities in {1, 2}, nonnegative weights.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    name: String,
    capacities: Vec<u8>,
    edges: Vec<Edge>,
    index: BTreeMap<(VertexId, VertexId), usize>,
}

impl Instance {
    pub fn new(name: impl Into<String>, capacities: Vec<u64>, edges: Vec<Edge>) -> Result<Self, ModelError> {
        let mut caps = Vec::with_capacity(capacities.len());
        for (vertex, &b) in capacities.iter().enumerate() {
            if b != 1 && b != 2 {
                return Err(ModelError::CapacityOutOfRange { vertex, b });
            }
            caps.push(b as u8);
        }
        let n = caps.len();
        let mut index = BTreeMap::new();
        for (k, e) in edges.iter().enumerate() {
            for x in [e.u, e.v] {
                if x >= n {
                    return Err(ModelError::UnknownVertex { vertex: x });
                }
            }
            if e.u == e.v {
                return Err(ModelError::Loop { vertex: e.u });
            }
            if e.w.is_negative() {
                return Err(ModelError::NegativeWeight { u: e.u, v: e.v });
            }
            if index.insert(key(e.u, e.v), k).is_some() {
                return Err(ModelError::DuplicateEdge { u: e.u, v: e.v });
            }
        }
        Ok(Instance { name: name.into(), capacities: caps, edges, index })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn n(&self) -> usize {
        self.capacities.len()
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn capacity(&self, v: VertexId) -> u8 {
        self.capacities[v]
    }

    pub fn capacities(&self) -> &[u8] {
        &self.capacities
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, k: usize) -> &Edge {
        &self.edges[k]
    }

    pub fn edge_between(&self, u: VertexId, v: VertexId) -> Option<usize> {
        self.index.get(&key(u, v)).copied()
    }

    pub fn vertices(&self) -> core::ops::Range<VertexId> {
        0..self.n()
    }

    /// Vertices with capacity 2, in id order.
    pub fn two_vertices(&self) -> Vec<VertexId> {
        self.vertices().filter(|&v| self.capacities[v] == 2).collect()
    }

    /// Edge indices incident to `v`, in edge order.
    pub fn incident(&self, v: VertexId) -> Vec<usize> {
        (0..self.m()).filter(|&k| self.edges[k].touches(v)).collect()
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.edges.iter().filter(|e| e.touches(v)).count()
    }

    /// Edge indices of the subgraph induced by `members`.
    pub fn induced_edges(&self, members: &[VertexId]) -> Vec<usize> {
        let mut inside = alloc::vec![false; self.n()];
        for &v in members {
            inside[v] = true;
        }
        (0..self.m()).filter(|&k| inside[self.edges[k].u] && inside[self.edges[k].v]).collect()
    }

    pub fn total_weight(&self) -> Rational {
        sum(self.edges.iter().map(|e| &e.w))
    }

    pub fn weight_of(&self, edges: &[usize]) -> Rational {
        sum(edges.iter().map(|&k| &self.edges[k].w))
    }
}

pub(crate) fn key(u: VertexId, v: VertexId) -> (VertexId, VertexId) {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

/// A payoff vector indexed by vertex id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Allocation(Vec<Rational>);

impl Allocation {
    pub fn new(values: Vec<Rational>, inst: &Instance) -> Result<Self, ModelError> {
        if values.len() != inst.n() {
            return Err(ModelError::AllocationLength { expected: inst.n(), found: values.len() });
        }
        Ok(Allocation(values))
    }

    pub fn zero(inst: &Instance) -> Self {
        Allocation(alloc::vec![Rational::zero(); inst.n()])
    }

    pub fn values(&self) -> &[Rational] {
        &self.0
    }

    pub fn get(&self, v: VertexId) -> &Rational {
        &self.0[v]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> Rational {
        sum(self.0.iter())
    }

    pub fn sum_over(&self, members: &[VertexId]) -> Rational {
        sum(members.iter().map(|&v| &self.0[v]))
    }
}

impl core::ops::Index<VertexId> for Allocation {
    type Output = Rational;

    fn index(&self, v: VertexId) -> &Rational {
        &self.0[v]
    }
}

/// A nonempty, sorted set of players.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Coalition(Vec<VertexId>);

impl Coalition {
    pub fn new(members: impl IntoIterator<Item = VertexId>) -> Result<Self, ModelError> {
        let set: BTreeSet<VertexId> = members.into_iter().collect();
        if set.is_empty() {
            return Err(ModelError::EmptyCoalition);
        }
        Ok(Coalition(set.into_iter().collect()))
    }

    pub fn grand(inst: &Instance) -> Self {
        Coalition(inst.vertices().collect())
    }

    pub fn members(&self) -> &[VertexId] {
        &self.0
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for Coalition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str("}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ViolationKind {
    TotalValue,
    Vertex,
    Edge,
    Cycle,
    Path,
}

impl ViolationKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ViolationKind::TotalValue => "TotalValue",
            ViolationKind::Vertex => "Vertex",
            ViolationKind::Edge => "Edge",
            ViolationKind::Cycle => "Cycle",
            ViolationKind::Path => "Path",
        }
    }
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Certificate that an allocation is outside the core.
///
/// `allocated` is p(S) for the coalition; `bound` is the right-hand side it
/// falls short of (ν(N) for `TotalValue`, where any mismatch counts).
/// `witness_edges` holds instance edge indices in walk order for cycles and
/// paths and is empty otherwise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub kind: ViolationKind,
    pub coalition: Coalition,
    pub allocated: Rational,
    pub bound: Rational,
    pub witness_edges: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CertificateError {
    AllocatedMismatch,
    BoundMismatch,
    NotViolated,
    BadWitness,
}

impl fmt::Display for CertificateError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let msg = match self {
            CertificateError::AllocatedMismatch => "allocated value is not p(S)",
            CertificateError::BoundMismatch => "bound does not match the witness",
            CertificateError::NotViolated => "constraint is not violated",
            CertificateError::BadWitness => "witness edges do not form the claimed structure",
        };
        f.write_str(msg)
    }
}

impl core::error::Error for CertificateError {}

impl Violation {
    pub fn gap(&self) -> Rational {
        &self.bound - &self.allocated
    }

    /// Re-checks the certificate's arithmetic against the instance.
    ///
    /// The `TotalValue` bound (ν(N)) is taken as given; callers that want it
    /// re-derived compare it against a matching solve.
    pub fn verify(&self, inst: &Instance, p: &Allocation) -> Result<(), CertificateError> {
        let members = self.coalition.members();
        if members.iter().any(|&v| v >= inst.n()) {
            return Err(CertificateError::BadWitness);
        }
        if p.sum_over(members) != self.allocated {
            return Err(CertificateError::AllocatedMismatch);
        }
        match self.kind {
            ViolationKind::TotalValue => {
                if members.len() != inst.n() || !self.witness_edges.is_empty() {
                    return Err(CertificateError::BadWitness);
                }
                if self.allocated == self.bound {
                    return Err(CertificateError::NotViolated);
                }
                return Ok(());
            }
            ViolationKind::Vertex => {
                if members.len() != 1 || !self.witness_edges.is_empty() {
                    return Err(CertificateError::BadWitness);
                }
                if !self.bound.is_zero() {
                    return Err(CertificateError::BoundMismatch);
                }
            }
            ViolationKind::Edge => {
                if members.len() != 2 || !self.witness_edges.is_empty() {
                    return Err(CertificateError::BadWitness);
                }
                let k = inst.edge_between(members[0], members[1]).ok_or(CertificateError::BadWitness)?;
                if inst.edge(k).w != self.bound {
                    return Err(CertificateError::BoundMismatch);
                }
            }
            ViolationKind::Cycle | ViolationKind::Path => {
                let closed = self.kind == ViolationKind::Cycle;
                let walk = walk_vertices(inst, &self.witness_edges, closed).ok_or(CertificateError::BadWitness)?;
                let mut seen: Vec<VertexId> = walk.clone();
                seen.sort_unstable();
                if seen.as_slice() != members {
                    return Err(CertificateError::BadWitness);
                }
                let inner_ok = if closed {
                    walk.iter().all(|&v| inst.capacity(v) == 2)
                } else {
                    walk[1..walk.len() - 1].iter().all(|&v| inst.capacity(v) == 2)
                };
                if !inner_ok {
                    return Err(CertificateError::BadWitness);
                }
                if inst.weight_of(&self.witness_edges) != self.bound {
                    return Err(CertificateError::BoundMismatch);
                }
            }
        }
        if self.allocated >= self.bound {
            return Err(CertificateError::NotViolated);
        }
        Ok(())
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "kind={} S={} p(S)={} bound={}", self.kind, self.coalition, self.allocated, self.bound)
    }
}

/// Vertex sequence of a simple path (`closed = false`) or simple cycle given
/// as consecutive instance edges; `None` if the edges do not chain that way.
pub fn walk_vertices(inst: &Instance, edges: &[usize], closed: bool) -> Option<Vec<VertexId>> {
    if edges.is_empty() || edges.iter().any(|&k| k >= inst.m()) {
        return None;
    }
    let first = inst.edge(edges[0]);
    let starts = [first.u, first.v];
    'start: for &start in &starts {
        let mut walk = alloc::vec![start];
        let mut at = start;
        for &k in edges {
            let e = inst.edge(k);
            if !e.touches(at) {
                continue 'start;
            }
            at = e.other(at);
            walk.push(at);
        }
        if closed {
            if edges.len() < 3 || walk.last() != walk.first() {
                continue;
            }
            walk.pop();
        }
        let mut sorted = walk.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() == walk.len() {
            return Some(walk);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::fig1;
    use crate::rational::int;

    #[test]
    fn rejects_bad_instances() {
        let e = |u, v, w| Edge::new(u, v, int(w));
        assert_eq!(
            Instance::new("x", alloc::vec![1, 3], alloc::vec![]).unwrap_err(),
            ModelError::CapacityOutOfRange { vertex: 1, b: 3 }
        );
        assert!(Instance::new("x", alloc::vec![0], alloc::vec![]).is_err());
        assert_eq!(Instance::new("x", alloc::vec![1, 1], alloc::vec![e(0, 0, 1)]).unwrap_err(), ModelError::Loop { vertex: 0 });
        assert_eq!(
            Instance::new("x", alloc::vec![1, 1], alloc::vec![e(0, 1, 1), e(1, 0, 2)]).unwrap_err(),
            ModelError::DuplicateEdge { u: 1, v: 0 }
        );
        assert_eq!(
            Instance::new("x", alloc::vec![1, 1], alloc::vec![e(0, 1, -1)]).unwrap_err(),
            ModelError::NegativeWeight { u: 0, v: 1 }
        );
        assert!(Instance::new("x", alloc::vec![1, 1], alloc::vec![e(0, 2, 1)]).is_err());
    }

    #[test]
    fn fig1_shape() {
        let (inst, p) = fig1();
        assert_eq!((inst.n(), inst.m()), (5, 4));
        assert_eq!(inst.capacities(), &[1, 1, 2, 2, 1]);
        assert_eq!(p.total(), int(12));
        assert_eq!(inst.two_vertices(), alloc::vec![2, 3]);
    }

    #[test]
    fn coalition_is_sorted_and_nonempty() {
        assert_eq!(Coalition::new([3, 1, 3]).unwrap().members(), &[1, 3]);
        assert_eq!(Coalition::new([]).unwrap_err(), ModelError::EmptyCoalition);
    }

    #[test]
    fn walks_paths_and_cycles() {
        let (inst, _) = fig1();
        // edges: 0 = su, 1 = tu, 2 = uv, 3 = vw
        assert_eq!(walk_vertices(&inst, &[0, 1], false), Some(alloc::vec![0, 2, 1]));
        assert_eq!(walk_vertices(&inst, &[0, 2, 3], false), Some(alloc::vec![0, 2, 3, 4]));
        assert_eq!(walk_vertices(&inst, &[0, 3], false), None);
        assert_eq!(walk_vertices(&inst, &[0, 1], true), None);
    }

    #[test]
    fn certificate_verification() {
        let (inst, _) = fig1();
        let p = Allocation::new([0, 0, 1, 11, 0].iter().map(|&x| int(x)).collect(), &inst).unwrap();
        let good = Violation {
            kind: ViolationKind::Path,
            coalition: Coalition::new([0, 1, 2]).unwrap(),
            allocated: int(1),
            bound: int(2),
            witness_edges: alloc::vec![0, 1],
        };
        assert_eq!(good.verify(&inst, &p), Ok(()));
        let mut bad = good.clone();
        bad.bound = int(1);
        assert_eq!(bad.verify(&inst, &p), Err(CertificateError::BoundMismatch));
        let mut bad = good.clone();
        bad.allocated = int(0);
        assert_eq!(bad.verify(&inst, &p), Err(CertificateError::AllocatedMismatch));
        let mut bad = good;
        bad.witness_edges = alloc::vec![0, 2];
        assert_eq!(bad.verify(&inst, &p), Err(CertificateError::BadWitness));
    }
}
