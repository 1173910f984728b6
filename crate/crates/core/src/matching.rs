//! Maximum-weight matching, minimum-weight perfect matching, and
//! maximum-weight b-matching for capacities in {1, 2}.
//!
//! Ties between optimal matchings are broken deterministically: every edge
//! weight receives a bonus `1 / (D * 2^(k + 2))` (with `D` the common
//! denominator of all weights and `k` the edge index), which is too small
//! to change which matchings are optimal but makes the optimum unique. The
//! selected matching is the optimal one whose edge-indicator vector is
//! lexicographically greatest, i.e. the one preferring low edge indices.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::blossom;
use crate::model::{Coalition, Instance, VertexId};
use crate::rational::{sum, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchingResult {
    /// Selected edge indices, ascending.
    pub edges: Vec<usize>,
    pub weight: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MatchingError {
    MalformedGraph,
    NoPerfectMatching,
}

impl fmt::Display for MatchingError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MatchingError::MalformedGraph => f.write_str("malformed graph: loop, parallel edge or unknown vertex"),
            MatchingError::NoPerfectMatching => f.write_str("no perfect matching exists"),
        }
    }
}

impl core::error::Error for MatchingError {}

fn check_simple(n: usize, edges: &[(usize, usize)], weights: &[Rational]) -> Result<(), MatchingError> {
    if edges.len() != weights.len() {
        return Err(MatchingError::MalformedGraph);
    }
    let mut seen = BTreeSet::new();
    for &(u, v) in edges {
        if u >= n || v >= n || u == v || !seen.insert(crate::model::key(u, v)) {
            return Err(MatchingError::MalformedGraph);
        }
    }
    Ok(())
}

/// Adds the index-dependent tie-break bonus to every weight.
fn perturbed(weights: impl Iterator<Item = Rational> + Clone) -> Vec<Rational> {
    let denom = weights.clone().fold(BigInt::one(), |acc, w| acc.lcm(w.denom()));
    let mut scale = Rational::from_integer(denom * BigInt::from(4));
    let two = Rational::from_integer(BigInt::from(2));
    weights
        .map(|w| {
            let out = w + scale.recip();
            scale *= &two;
            out
        })
        .collect()
}

fn collect(edges: &[(usize, usize)], mate: &[Option<usize>]) -> Vec<usize> {
    edges.iter().enumerate().filter(|(_, &(u, v))| mate[u] == Some(v)).map(|(k, _)| k).collect()
}

/// Maximum-weight matching of a simple graph on vertices `0..n`.
///
/// Negative-weight edges are never selected.
pub fn max_weight_matching(n: usize, edges: &[(usize, usize)], weights: &[Rational]) -> Result<MatchingResult, MatchingError> {
    check_simple(n, edges, weights)?;
    let biased = perturbed(weights.iter().cloned());
    let input: Vec<_> = edges.iter().zip(biased).map(|(&(u, v), w)| (u, v, w)).collect();
    let mate = blossom::solve(n, &input, false);
    let chosen = collect(edges, &mate);
    let weight = sum(chosen.iter().map(|&k| &weights[k]));
    Ok(MatchingResult { edges: chosen, weight })
}

/// Minimum-weight perfect matching; fails when the graph has none.
pub fn min_weight_perfect_matching(
    n: usize,
    edges: &[(usize, usize)],
    weights: &[Rational],
) -> Result<MatchingResult, MatchingError> {
    check_simple(n, edges, weights)?;
    if n % 2 == 1 {
        return Err(MatchingError::NoPerfectMatching);
    }
    if n == 0 {
        return Ok(MatchingResult { edges: Vec::new(), weight: Rational::zero() });
    }
    let biased = perturbed(weights.iter().map(|w| -w.clone()));
    let input: Vec<_> = edges.iter().zip(biased).map(|(&(u, v), w)| (u, v, w)).collect();
    let mate = blossom::solve(n, &input, true);
    if mate.iter().any(Option::is_none) {
        return Err(MatchingError::NoPerfectMatching);
    }
    let chosen = collect(edges, &mate);
    let weight = sum(chosen.iter().map(|&k| &weights[k]));
    Ok(MatchingResult { edges: chosen, weight })
}

/// A b-matching together with the weight of the gadget matching it was read from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GadgetSolve {
    pub matching: MatchingResult,
    pub gadget_weight: Rational,
    /// Total weight of the edges the gadget graph was built over.
    pub base_weight: Rational,
}

/// Solves the b-matching problem on the subgraph with the given vertices
/// and instance edges via the gadget graph: `b_v` copies of each vertex `v`,
/// two gadget vertices `e_u, e_v` per edge `e = uv`, and the three gadget
/// edges `(u^i, e_u)`, `(e_u, e_v)`, `(v^j, e_v)` all weighted `w_e`.
///
/// An edge belongs to the b-matching when both of its gadget vertices are
/// matched to vertex copies. A gadget with only one side matched to a copy
/// contributes `w_e` just like the unused gadget, so it is read as unused.
pub fn gadget_solve(inst: &Instance, members: &[VertexId], edge_ids: &[usize]) -> GadgetSolve {
    let mut copy_start = vec![usize::MAX; inst.n()];
    let mut next = 0usize;
    for &v in members {
        copy_start[v] = next;
        next += inst.capacity(v) as usize;
    }
    let gadget_base = next;
    let node_count = gadget_base + 2 * edge_ids.len();
    let mut g_edges = Vec::new();
    let mut g_weights = Vec::new();
    for (slot, &k) in edge_ids.iter().enumerate() {
        let e = inst.edge(k);
        let (eu, ev) = (gadget_base + 2 * slot, gadget_base + 2 * slot + 1);
        for c in 0..inst.capacity(e.u) as usize {
            g_edges.push((copy_start[e.u] + c, eu));
            g_weights.push(e.w.clone());
        }
        g_edges.push((eu, ev));
        g_weights.push(e.w.clone());
        for c in 0..inst.capacity(e.v) as usize {
            g_edges.push((copy_start[e.v] + c, ev));
            g_weights.push(e.w.clone());
        }
    }
    let gadget = max_weight_matching(node_count, &g_edges, &g_weights).expect("gadget graph is simple");
    let mut matched_to_copy = vec![false; node_count];
    for &k in &gadget.edges {
        let (a, b) = g_edges[k];
        if a < gadget_base && b >= gadget_base {
            matched_to_copy[b] = true;
        }
    }
    let chosen: Vec<usize> = edge_ids
        .iter()
        .enumerate()
        .filter(|&(slot, _)| matched_to_copy[gadget_base + 2 * slot] && matched_to_copy[gadget_base + 2 * slot + 1])
        .map(|(_, &k)| k)
        .collect();
    let weight = inst.weight_of(&chosen);
    let base_weight = inst.weight_of(edge_ids);
    assert_eq!(gadget.weight, &base_weight + &weight, "gadget identity violated");
    let mut edges = chosen;
    edges.sort_unstable();
    GadgetSolve { matching: MatchingResult { edges, weight }, gadget_weight: gadget.weight, base_weight }
}

/// Maximum-weight b-matching of the whole instance.
pub fn max_weight_b_matching(inst: &Instance) -> MatchingResult {
    let members: Vec<VertexId> = inst.vertices().collect();
    let all: Vec<usize> = (0..inst.m()).collect();
    gadget_solve(inst, &members, &all).matching
}

/// ν(S): the maximum weight of a b-matching in the subgraph induced by S.
pub fn nu(inst: &Instance, coalition: &Coalition) -> Rational {
    let members = coalition.members();
    let edges = inst.induced_edges(members);
    gadget_solve(inst, members, &edges).matching.weight
}
