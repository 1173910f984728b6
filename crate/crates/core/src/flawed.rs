//! The layered-graph path check that the counterexample instance refutes.
//!
//! For endpoints `i0 ≠ j0` and a length `k`, the layered graph has `i0` in
//! layer 0, a copy of N₂ in each of layers `1..k`, and `j0` in layer `k`.
//! Arcs follow instance edges between consecutive layers with weights
//!
//! * `p_i0 + p_j / 2 − w_i0j` out of layer 0,
//! * `(p_i + p_j) / 2 − w_ij` between inner layers,
//! * `p_i / 2 + p_j0 − w_ij0` into layer `k`,
//!
//! and `p_i0 + p_j0 − w_i0j0` for the single arc when `k = 1`. The method
//! declares every path constraint satisfied when no layered `i0`–`j0` path
//! is negative. Layered paths may revisit a vertex in different layers, so
//! that claim fails: on the counterexample the walk s, u, v, u, t is
//! negative although the allocation is in the core.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::fmt::Write;

use num_traits::Signed;

use crate::fixtures::{fig1, FIG1_NAMES};
use crate::matching::max_weight_b_matching;
use crate::model::{Allocation, Instance, VertexId};
use crate::oracle::{core_check_bruteforce, CoreVerdict};
use crate::rational::{half, Rational};
use crate::separation::{separate, SeparationVerdict};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FlawedError {
    SameEndpoints,
    UnknownVertex { vertex: VertexId },
    LengthOutOfRange { k: usize, max: usize },
}

impl fmt::Display for FlawedError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FlawedError::SameEndpoints => f.write_str("endpoints must differ"),
            FlawedError::UnknownVertex { vertex } => write!(f, "unknown vertex {vertex}"),
            FlawedError::LengthOutOfRange { k, max } => write!(f, "path length {k} outside 1..={max}"),
        }
    }
}

impl core::error::Error for FlawedError {}

/// Arc from `from` in layer `layer` to `to` in layer `layer + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayeredArc {
    pub layer: usize,
    pub from: VertexId,
    pub to: VertexId,
    pub edge: usize,
    pub weight: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayeredGraph {
    pub i0: VertexId,
    pub j0: VertexId,
    pub k: usize,
    /// `layers[r]` lists the instance vertices copied into layer `r`.
    pub layers: Vec<Vec<VertexId>>,
    pub arcs: Vec<LayeredArc>,
}

/// A layered `i0`–`j0` path; `vertices[r]` is the instance vertex used in layer `r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayeredPath {
    pub i0: VertexId,
    pub j0: VertexId,
    pub k: usize,
    pub vertices: Vec<VertexId>,
    pub weight: Rational,
}

impl LayeredPath {
    pub fn is_vertex_simple(&self) -> bool {
        let mut seen = self.vertices.clone();
        seen.sort_unstable();
        seen.dedup();
        seen.len() == self.vertices.len()
    }
}

pub fn build_layered(inst: &Instance, p: &Allocation, i0: VertexId, j0: VertexId, k: usize) -> Result<LayeredGraph, FlawedError> {
    for x in [i0, j0] {
        if x >= inst.n() {
            return Err(FlawedError::UnknownVertex { vertex: x });
        }
    }
    if i0 == j0 {
        return Err(FlawedError::SameEndpoints);
    }
    let max = inst.n() - 1;
    if k == 0 || k > max {
        return Err(FlawedError::LengthOutOfRange { k, max });
    }
    let n2 = inst.two_vertices();
    let mut layers = vec![vec![i0]];
    for _ in 1..k {
        layers.push(n2.clone());
    }
    layers.push(vec![j0]);

    let mut arcs = Vec::new();
    for layer in 0..k {
        for &from in &layers[layer] {
            for &to in &layers[layer + 1] {
                let Some(edge) = inst.edge_between(from, to) else { continue };
                let w = &inst.edge(edge).w;
                let (first, last) = (layer == 0, layer + 1 == k);
                let from_share = if first { p[from].clone() } else { &p[from] * half() };
                let to_share = if last { p[to].clone() } else { &p[to] * half() };
                arcs.push(LayeredArc { layer, from, to, edge, weight: from_share + to_share - w });
            }
        }
    }
    Ok(LayeredGraph { i0, j0, k, layers, arcs })
}

impl LayeredGraph {
    /// Shortest `i0`–`j0` path by dynamic programming over the layers.
    /// Ties keep the predecessor with the smallest vertex id.
    pub fn shortest_path(&self) -> Option<LayeredPath> {
        let mut dist: Vec<Vec<Option<(Rational, usize)>>> = self.layers.iter().map(|l| vec![None; l.len()]).collect();
        dist[0][0] = Some((Rational::from_integer(0.into()), usize::MAX));
        for layer in 0..self.k {
            let pos = |r: usize, v: VertexId| self.layers[r].iter().position(|&x| x == v).expect("arc endpoint in layer");
            for arc in self.arcs.iter().filter(|a| a.layer == layer) {
                let (a, b) = (pos(layer, arc.from), pos(layer + 1, arc.to));
                let Some((d, _)) = &dist[layer][a] else { continue };
                let cand = d + &arc.weight;
                let better = match &dist[layer + 1][b] {
                    None => true,
                    Some((cur, pred)) => cand < *cur || (cand == *cur && arc.from < self.layers[layer][*pred]),
                };
                if better {
                    dist[layer + 1][b] = Some((cand, a));
                }
            }
        }
        let (weight, _) = dist[self.k][0].clone()?;
        let mut vertices = vec![self.j0];
        let mut at = 0;
        for layer in (1..=self.k).rev() {
            let (_, pred) = dist[layer][at].clone().expect("reached");
            at = pred;
            vertices.push(self.layers[layer - 1][at]);
        }
        vertices.reverse();
        Some(LayeredPath { i0: self.i0, j0: self.j0, k: self.k, vertices, weight })
    }
}

/// Scans ordered endpoint pairs and lengths `1..n` and returns the first
/// layered path of negative weight.
pub fn flawed_separate_paths(inst: &Instance, p: &Allocation) -> Option<LayeredPath> {
    let n = inst.n();
    for i0 in 0..n {
        for j0 in 0..n {
            if i0 == j0 {
                continue;
            }
            for k in 1..n {
                let graph = build_layered(inst, p, i0, j0, k).expect("valid scan cell");
                if let Some(path) = graph.shortest_path() {
                    if path.weight.is_negative() {
                        return Some(path);
                    }
                }
            }
        }
    }
    None
}

/// Formats a layered path with vertex names, e.g. `(s,u^1,v^2,u^3,t)`.
pub fn layered_label(path: &LayeredPath, names: &[&str]) -> String {
    let mut out = String::from("(");
    for (r, &v) in path.vertices.iter().enumerate() {
        if r > 0 {
            out.push(',');
        }
        out.push_str(names[v]);
        if r > 0 && r < path.k {
            let _ = write!(out, "^{r}");
        }
    }
    out.push(')');
    out
}

pub fn plain_label(path: &LayeredPath, names: &[&str]) -> String {
    let parts: Vec<&str> = path.vertices.iter().map(|&v| names[v]).collect();
    format!("({})", parts.join(","))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DemoReport {
    pub nu: Rational,
    pub allocated: Rational,
    pub separation: SeparationVerdict,
    pub oracle: CoreVerdict,
    pub flawed: Option<LayeredPath>,
    pub text: String,
}

fn verdict_word(in_core: bool) -> &'static str {
    if in_core {
        "InCore"
    } else {
        "NotInCore"
    }
}

/// Runs the corrected separation, the brute-force oracle and the layered
/// method on the counterexample instance and its core allocation.
pub fn demo_counterexample() -> DemoReport {
    let (inst, p) = fig1();
    let nu = max_weight_b_matching(&inst).weight;
    let allocated = p.total();
    let separation = separate(&inst, &p);
    let oracle = core_check_bruteforce(&inst, &p).expect("five vertices");
    let flawed = flawed_separate_paths(&inst, &p);

    let mut text = String::new();
    let caps: Vec<String> = inst.capacities().iter().map(|b| format!("{b}")).collect();
    let pay: Vec<String> = p.values().iter().map(|x| format!("{x}")).collect();
    let _ = writeln!(text, "instance: {} (vertices {}; b = {})", inst.name(), FIG1_NAMES.join(","), caps.join(","));
    let _ = writeln!(text, "allocation: p = ({})", pay.join(","));
    let _ = writeln!(text, "nu(N) = {nu}");
    let _ = writeln!(text, "p(N) = {allocated}");
    let _ = writeln!(text, "corrected separation: {}", verdict_word(separation.in_core()));
    let _ = writeln!(text, "brute-force oracle: {}", verdict_word(oracle.in_core()));
    match &flawed {
        Some(path) => {
            let _ = writeln!(
                text,
                "layered method: negative path in G_{}({},{}): {} weight {}",
                path.k,
                FIG1_NAMES[path.i0],
                FIG1_NAMES[path.j0],
                layered_label(path, &FIG1_NAMES),
                path.weight
            );
            let _ = writeln!(text, "  walk {} weight {}", plain_label(path, &FIG1_NAMES), path.weight);
            let _ = writeln!(text, "  repeats a vertex: {}", !path.is_vertex_simple());
        }
        None => {
            let _ = writeln!(text, "layered method: no negative path");
        }
    }
    let _ = writeln!(text, "layered method verdict: {}", verdict_word(flawed.is_none()));
    DemoReport { nu, allocated, separation, oracle, flawed, text }
}
