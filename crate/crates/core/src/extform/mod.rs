//! Compact extended formulation of the core.
//!
//! A vector `x ≥ 0` on the edges of a graph G′ lies in the cycle cone
//! exactly when, for every edge ē = uv, a flow of value `x_ē` can be routed
//! from u to v through G′ − ē under capacities `x`. Minimizing `Σ c_e x_e`
//! over that flow system is therefore bounded (with optimum 0) exactly
//! when G′ has no negative c-cycle, and LP duality turns boundedness into
//! feasibility of a linear system. With `c_e = (p_u + p_v)/2 − w_e` the
//! dual systems of G₂ and of every G(s, t) variant, together with the
//! total-value, nonnegativity and edge rows, describe the core.

mod lp;
mod simplex;
mod system;

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{Signed, Zero};

pub use lp::{emit_lp, parse_lp, LpParseError};
pub use simplex::{is_recession_ray, simplex_feasible, solve_lp, Feasibility, LpOutcome};
pub use system::{Coefficients, Constraint, ConstraintSystem, Relation, SystemError, VarBound, Variable, Violated};

use crate::matching::max_weight_b_matching;
use crate::model::{Allocation, Instance, VertexId};
use crate::negcycle::CostedGraph;
use crate::rational::{half, Rational};
use crate::separation::{endpoint_pairs, variant_layouts};

/// One graph of the family, with costs left symbolic in `p`: edge `k`
/// costs `(p_a + p_b)/2 − weights[k]` where `(a, b) = edges[k]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyMember {
    pub label: String,
    /// Endpoints `(s, t)` for a variant, `None` for G₂.
    pub pair: Option<(VertexId, VertexId)>,
    pub vertices: Vec<VertexId>,
    pub edges: Vec<(VertexId, VertexId)>,
    pub weights: Vec<Rational>,
    pub origins: Vec<Option<usize>>,
    pub marker: Option<usize>,
}

impl FamilyMember {
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn costs(&self, p: &Allocation) -> Vec<Rational> {
        self.edges.iter().zip(&self.weights).map(|(&(a, b), w)| (&p[a] + &p[b]) * half() - w).collect()
    }

    fn graph_with(&self, costs: Vec<Rational>) -> CostedGraph {
        let g = CostedGraph::new(self.vertices.iter().copied(), self.edges.clone(), costs)
            .expect("family members are simple graphs")
            .with_origins(self.origins.clone());
        match self.marker {
            Some(k) => g.with_marker(k),
            None => g,
        }
    }

    /// The member with costs evaluated at `p`.
    pub fn costed(&self, p: &Allocation) -> CostedGraph {
        self.graph_with(self.costs(p))
    }

    /// The member with the constant part of its costs, `−w`.
    pub fn constant_part(&self) -> CostedGraph {
        self.graph_with(self.weights.iter().map(|w| -w.clone()).collect())
    }
}

/// G₂ followed by the G(s, t) variants in endpoint-pair order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphFamily {
    pub members: Vec<FamilyMember>,
}

impl GraphFamily {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Every member with costs evaluated at `p`.
    pub fn costed(&self, p: &Allocation) -> Vec<CostedGraph> {
        self.members.iter().map(|m| m.costed(p)).collect()
    }
}

fn edge_label(inst: &Instance, k: usize) -> String {
    let e = inst.edge(k);
    format!("{}-{}", e.u, e.v)
}

/// Enumerates G₂ and the G(s, t) variants.
///
/// Variants in which s or t has no edge besides `st` are left out: they
/// hold no cycle through `st`, and every other cycle in them lies in G₂.
pub fn enumerate_family(inst: &Instance) -> GraphFamily {
    let mut members = Vec::new();
    let two = inst.two_vertices();
    let g2_edges = inst.induced_edges(&two);
    members.push(FamilyMember {
        label: String::from("G2"),
        pair: None,
        vertices: two,
        edges: g2_edges.iter().map(|&k| (inst.edge(k).u, inst.edge(k).v)).collect(),
        weights: g2_edges.iter().map(|&k| inst.edge(k).w.clone()).collect(),
        origins: g2_edges.iter().copied().map(Some).collect(),
        marker: None,
    });
    for (s, t) in endpoint_pairs(inst) {
        for layout in variant_layouts(inst, s, t).expect("valid pair") {
            if layout.non_marker_degree(inst, s) == 0 || layout.non_marker_degree(inst, t) == 0 {
                continue;
            }
            let mut label = format!("G({s},{t})");
            let kept: Vec<String> = [(s, layout.kept_s), (t, layout.kept_t)]
                .iter()
                .filter_map(|&(x, k)| k.map(|k| format!("{x}:{}", edge_label(inst, k))))
                .collect();
            if !kept.is_empty() {
                label.push_str(&format!("[{}]", kept.join(",")));
            }
            let mut weights: Vec<Rational> = layout.edges.iter().map(|&k| inst.edge(k).w.clone()).collect();
            weights.push(Rational::zero());
            let mut origins: Vec<Option<usize>> = layout.edges.iter().copied().map(Some).collect();
            origins.push(None);
            members.push(FamilyMember {
                label,
                pair: Some((s, t)),
                vertices: layout.vertices.clone(),
                edges: layout.pairs(inst),
                marker: Some(layout.edges.len()),
                weights,
                origins,
            });
        }
    }
    GraphFamily { members }
}

/// `1 + Σ_{s≠t} (d_s − 1)(d_t − 1)` over ordered pairs, with `d_s` the
/// degree of s in G(s, t) (the added `st` edge included).
pub fn family_bound(inst: &Instance) -> u128 {
    let mut total: u128 = 1;
    for (s, t) in endpoint_pairs(inst) {
        let mut members = inst.two_vertices();
        members.extend([s, t]);
        members.sort_unstable();
        members.dedup();
        let st = inst.edge_between(s, t);
        let edges: Vec<usize> = inst.induced_edges(&members).into_iter().filter(|&k| Some(k) != st).collect();
        let deg = |x: VertexId| edges.iter().filter(|&&k| inst.edge(k).touches(x)).count() as u128;
        total += 2 * deg(s) * deg(t);
    }
    total
}

fn flow_primal_tagged(g: &CostedGraph, tag: &str) -> ConstraintSystem {
    let mut sys = ConstraintSystem::new();
    let m = g.edge_count();
    let x: Vec<usize> = (0..m).map(|e| sys.add_variable(format!("x_{tag}e{e}"), VarBound::NonNegative).expect("fresh")).collect();
    // y[ē][e] = (forward, backward) for e ≠ ē.
    let mut y = Vec::with_capacity(m);
    for eb in 0..m {
        let mut block = Vec::with_capacity(m);
        for e in 0..m {
            if e == eb {
                block.push(None);
                continue;
            }
            let fw = sys.add_variable(format!("y_{tag}e{eb}_f{e}_fw"), VarBound::NonNegative).expect("fresh");
            let bw = sys.add_variable(format!("y_{tag}e{eb}_f{e}_bw"), VarBound::NonNegative).expect("fresh");
            block.push(Some((fw, bw)));
        }
        y.push(block);
    }
    let one = || Rational::from_integer(1.into());
    for eb in 0..m {
        let (u, v) = g.edges()[eb];
        for &i in g.vertices() {
            let mut terms = Vec::new();
            for (e, &(a, b)) in g.edges().iter().enumerate() {
                let Some((fw, bw)) = y[eb][e] else { continue };
                if i == a {
                    terms.push((fw, one()));
                    terms.push((bw, -one()));
                } else if i == b {
                    terms.push((fw, -one()));
                    terms.push((bw, one()));
                }
            }
            if i == u {
                terms.push((x[eb], -one()));
            } else if i == v {
                terms.push((x[eb], one()));
            }
            sys.add_constraint(format!("flow_{tag}e{eb}_v{i}"), terms, Relation::Eq, Rational::zero()).expect("fresh");
        }
        for e in 0..m {
            let Some((fw, bw)) = y[eb][e] else { continue };
            for (dir, col) in [("fw", fw), ("bw", bw)] {
                sys.add_constraint(
                    format!("cap_{tag}e{eb}_f{e}_{dir}"),
                    [(x[e], one()), (col, -one())],
                    Relation::Ge,
                    Rational::zero(),
                )
                .expect("fresh");
            }
        }
    }
    sys.set_objective(x.iter().zip(g.costs()).map(|(&j, c)| (j, c.clone()))).expect("declared");
    sys
}

/// Minimize `Σ c_e x_e` over `x ≥ 0` and, for every edge ē = uv, a flow
/// `y^ē ≥ 0` of value `x_ē` from u to v on the other edges with
/// `y^ē_ij, y^ē_ji ≤ x_e`.
pub fn build_flow_primal(g: &CostedGraph) -> ConstraintSystem {
    flow_primal_tagged(g, "")
}

/// LP dual of `min c·x` subject to the rows of `primal`.
///
/// `≥` rows get a multiplier `≥ 0`, `≤` rows are negated first, `=` rows
/// get a free multiplier. Each primal column yields one dual row, `≤ c_j`
/// for a nonnegative variable and `= c_j` for a free one. The dual
/// objective (maximize `b·y`) is stored as minimize `−b·y`.
pub fn dualize(primal: &ConstraintSystem, dual_name: impl Fn(&str) -> String) -> ConstraintSystem {
    let mut sys = ConstraintSystem::new();
    let mut columns: Vec<Vec<(usize, Rational)>> = alloc::vec![Vec::new(); primal.variable_count()];
    let mut objective = Vec::new();
    for row in primal.constraints() {
        let bound = if row.relation == Relation::Eq { VarBound::Free } else { VarBound::NonNegative };
        let yi = sys.add_variable(dual_name(&row.name), bound).expect("constraint names are unique");
        let sign =
            if row.relation == Relation::Le { -Rational::from_integer(1.into()) } else { Rational::from_integer(1.into()) };
        for (&j, a) in &row.coeffs {
            columns[j].push((yi, &sign * a));
        }
        objective.push((yi, -(&sign * &row.rhs)));
    }
    let zero = Rational::zero();
    for (j, var) in primal.variables().iter().enumerate() {
        let c = primal.objective().and_then(|o| o.get(&j)).unwrap_or(&zero).clone();
        let relation = if var.bound == VarBound::Free { Relation::Eq } else { Relation::Le };
        sys.add_constraint(format!("dual_{}", var.name), columns[j].drain(..), relation, c).expect("variable names are unique");
    }
    sys.set_objective(objective).expect("declared");
    sys
}

fn flow_dual_name(row: &str) -> String {
    if let Some(rest) = row.strip_prefix("flow_") {
        format!("gamma_{rest}")
    } else if let Some(rest) = row.strip_prefix("cap_") {
        format!("lambda_{rest}")
    } else {
        format!("mult_{row}")
    }
}

fn dual_tagged(g: &CostedGraph, tag: &str) -> ConstraintSystem {
    dualize(&flow_primal_tagged(g, tag), flow_dual_name)
}

/// The dual of [`build_flow_primal`]: `γ` free per (ē, vertex), `λ ≥ 0` per
/// (ē, e ≠ ē, direction), with rows
///
/// * `γ^ē_i − γ^ē_j − λ^ē_{e,dir} ≤ 0` for each arc `i → j` of `e ≠ ē`,
/// * `γ^e_v − γ^e_u + Σ_{ē≠e} (λ^ē_{e,fw} + λ^ē_{e,bw}) ≤ c_e` for each `e = uv`.
///
/// Feasible exactly when `g` has no negative cycle.
pub fn build_dual_system(g: &CostedGraph) -> ConstraintSystem {
    dual_tagged(g, "")
}

/// Row name of the `x_e` dual row of member `gi` in the full formulation.
fn is_x_row(name: &str) -> bool {
    name.starts_with("dual_x_")
}

/// The full extended formulation over `p` and every member's dual block.
pub fn build_extended_formulation(inst: &Instance) -> ConstraintSystem {
    let family = enumerate_family(inst);
    let nu = max_weight_b_matching(inst).weight;
    let mut sys = ConstraintSystem::new();
    let p: Vec<usize> = inst.vertices().map(|i| sys.add_variable(format!("p_{i}"), VarBound::Free).expect("fresh")).collect();
    let one = || Rational::from_integer(1.into());
    sys.add_constraint("total", p.iter().map(|&j| (j, one())), Relation::Eq, nu).expect("fresh");
    for i in inst.vertices() {
        sys.add_constraint(format!("nonneg_p{i}"), [(p[i], one())], Relation::Ge, Rational::zero()).expect("fresh");
    }
    for (k, e) in inst.edges().iter().enumerate() {
        sys.add_constraint(format!("edge_{k}"), [(p[e.u], one()), (p[e.v], one())], Relation::Ge, e.w.clone()).expect("fresh");
    }
    let minus_half = -half();
    for (gi, member) in family.members.iter().enumerate() {
        let block = dual_tagged(&member.constant_part(), &format!("g{gi}_"));
        let offset = sys.variable_count();
        for var in block.variables() {
            sys.add_variable(var.name.clone(), var.bound).expect("tagged names are unique");
        }
        let mut x_rows = 0;
        for row in block.constraints() {
            let mut terms: Vec<(usize, Rational)> = row.coeffs.iter().map(|(&j, a)| (j + offset, a.clone())).collect();
            if is_x_row(&row.name) {
                let (a, b) = member.edges[x_rows];
                terms.push((p[a], minus_half.clone()));
                terms.push((p[b], minus_half.clone()));
                x_rows += 1;
            }
            sys.add_constraint(row.name.clone(), terms, row.relation, row.rhs.clone()).expect("tagged names are unique");
        }
    }
    sys
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MembershipFailure {
    TotalValue { allocated: Rational, value: Rational },
    NegativePayoff { vertex: VertexId },
    EdgeConstraint { edge: usize },
    Block { member: usize, label: String },
}

impl fmt::Display for MembershipFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MembershipFailure::TotalValue { allocated, value } => write!(f, "total value p(N)={allocated} nu(N)={value}"),
            MembershipFailure::NegativePayoff { vertex } => write!(f, "negative payoff at vertex {vertex}"),
            MembershipFailure::EdgeConstraint { edge } => write!(f, "edge constraint {edge}"),
            MembershipFailure::Block { member, label } => write!(f, "dual block {member} ({label}) infeasible"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Membership {
    InCore,
    NotInCore(MembershipFailure),
}

impl Membership {
    pub fn in_core(&self) -> bool {
        matches!(self, Membership::InCore)
    }
}

/// The rows of the formulation that involve `p` alone: total value,
/// nonnegativity and edges. Returns the first that fails.
pub fn check_membership_direct(inst: &Instance, p: &Allocation) -> Option<MembershipFailure> {
    let value = max_weight_b_matching(inst).weight;
    let allocated = p.total();
    if allocated != value {
        return Some(MembershipFailure::TotalValue { allocated, value });
    }
    if let Some(vertex) = inst.vertices().find(|&i| p[i].is_negative()) {
        return Some(MembershipFailure::NegativePayoff { vertex });
    }
    (0..inst.m())
        .find(|&k| {
            let e = inst.edge(k);
            &p[e.u] + &p[e.v] < e.w
        })
        .map(|edge| MembershipFailure::EdgeConstraint { edge })
}

/// Checks `p` against the extended formulation: the direct rows first,
/// then one feasibility LP per family member with `p` substituted.
pub fn check_membership(inst: &Instance, p: &Allocation) -> Membership {
    if let Some(failure) = check_membership_direct(inst, p) {
        return Membership::NotInCore(failure);
    }
    for (gi, member) in enumerate_family(inst).members.iter().enumerate() {
        if !simplex_feasible(&build_dual_system(&member.costed(p))).is_feasible() {
            return Membership::NotInCore(MembershipFailure::Block { member: gi, label: member.label.clone() });
        }
    }
    Membership::InCore
}

/// Fixes the `p_i` variables of a formulation built by
/// [`build_extended_formulation`] to the values of `p`.
pub fn fix_allocation(sys: &ConstraintSystem, p: &Allocation) -> ConstraintSystem {
    let fixed: BTreeMap<usize, Rational> =
        (0..p.len()).map(|i| (sys.variable(&format!("p_{i}")).expect("formulation declares p"), p[i].clone())).collect();
    sys.substitute(&fixed)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MemberSize {
    pub label: String,
    pub vertices: usize,
    pub edges: usize,
    pub gamma: usize,
    pub lambda: usize,
    pub rows: usize,
}

/// Closed-form size tallies of the extended formulation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SizeReport {
    pub n: usize,
    pub m: usize,
    pub members: Vec<MemberSize>,
    pub family_size: usize,
    pub family_bound: u128,
    pub p_variables: usize,
    pub global_constraints: usize,
    pub variables: usize,
    pub constraints: usize,
    /// `n + (1 + n⁴)(2m(m+1) + n(m+1))`, of order `n⁴m² + n⁵m`.
    pub variable_envelope: u128,
    /// `1 + n + m + (1 + n⁴)(2m(m+1) + m + 1)`, of order `n⁴m²`.
    pub constraint_envelope: u128,
}

impl SizeReport {
    pub fn within_bounds(&self) -> bool {
        let n = self.n as u128;
        self.family_size as u128 <= self.family_bound
            && self.family_bound <= 1 + n.pow(4)
            && self.variables as u128 <= self.variable_envelope
            && self.constraints as u128 <= self.constraint_envelope
    }
}

impl fmt::Display for SizeReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n = {} m = {}", self.n, self.m)?;
        writeln!(f, "family size {} (bound {})", self.family_size, self.family_bound)?;
        for (gi, s) in self.members.iter().enumerate() {
            writeln!(
                f,
                "  g{gi} {}: |N'|={} |E'|={} gamma={} lambda={} rows={}",
                s.label, s.vertices, s.edges, s.gamma, s.lambda, s.rows
            )?;
        }
        writeln!(f, "variables {} (envelope {})", self.variables, self.variable_envelope)?;
        writeln!(f, "constraints {} (envelope {})", self.constraints, self.constraint_envelope)
    }
}

pub fn size_report(inst: &Instance) -> SizeReport {
    let family = enumerate_family(inst);
    let members: Vec<MemberSize> = family
        .members
        .iter()
        .map(|m| {
            let (nv, ne) = (m.vertex_count(), m.edge_count());
            let lambda = 2 * ne * ne.saturating_sub(1);
            MemberSize { label: m.label.clone(), vertices: nv, edges: ne, gamma: ne * nv, lambda, rows: ne + lambda }
        })
        .collect();
    let (n, m) = (inst.n(), inst.m());
    let global_constraints = 1 + n + m;
    let variables = n + members.iter().map(|s| s.gamma + s.lambda).sum::<usize>();
    let constraints = global_constraints + members.iter().map(|s| s.rows).sum::<usize>();
    let (nn, mm) = (n as u128, m as u128);
    let blocks = 1 + nn.pow(4);
    SizeReport {
        n,
        m,
        family_size: members.len(),
        family_bound: family_bound(inst),
        p_variables: n,
        global_constraints,
        variables,
        constraints,
        variable_envelope: nn + blocks * (2 * mm * (mm + 1) + nn * (mm + 1)),
        constraint_envelope: 1 + nn + mm + blocks * (2 * mm * (mm + 1) + mm + 1),
        members,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{fig1, fig1_path_violation};
    use crate::model::Edge;
    use crate::negcycle::find_negative_cycle;
    use crate::rational::int;
    use alloc::vec;

    fn triangle(c: [i64; 3]) -> CostedGraph {
        CostedGraph::on_range(3, vec![(0, 1), (1, 2), (0, 2)], c.iter().map(|&x| int(x)).collect()).unwrap()
    }

    #[test]
    fn triangle_primal_and_dual() {
        let primal = build_flow_primal(&triangle([1, 1, 1]));
        assert_eq!(primal.variable_count(), 3 + 12);
        match solve_lp(&primal) {
            LpOutcome::Optimal { value, .. } => assert_eq!(value, int(0)),
            other => panic!("{other:?}"),
        }
        assert!(solve_lp(&build_flow_primal(&triangle([-3, 1, 1]))).is_unbounded());
        assert!(simplex_feasible(&build_dual_system(&triangle([1, 1, 1]))).is_feasible());
        assert!(!simplex_feasible(&build_dual_system(&triangle([-3, 1, 1]))).is_feasible());
        assert!(simplex_feasible(&build_dual_system(&triangle([-1, 1, 1]))).is_feasible());
    }

    #[test]
    fn dual_rows_have_the_expected_shape() {
        let d = build_dual_system(&triangle([5, 6, 7]));
        assert_eq!(d.variable_count(), 3 * 3 + 2 * 3 * 2);
        assert_eq!(d.constraint_count(), 3 + 12);
        let x0 = d.constraint("dual_x_e0").unwrap();
        assert_eq!(x0.relation, Relation::Le);
        assert_eq!(x0.rhs, int(5));
        let coef = |name: &str| x0.coeffs.get(&d.variable(name).unwrap()).cloned();
        assert_eq!(coef("gamma_e0_v0"), Some(int(-1)));
        assert_eq!(coef("gamma_e0_v1"), Some(int(1)));
        assert_eq!(coef("lambda_e1_f0_fw"), Some(int(1)));
        assert_eq!(coef("lambda_e2_f0_bw"), Some(int(1)));
        assert_eq!(x0.coeffs.len(), 6);
        let y = d.constraint("dual_y_e0_f1_fw").unwrap();
        let ycoef = |name: &str| y.coeffs.get(&d.variable(name).unwrap()).cloned();
        assert_eq!(ycoef("gamma_e0_v1"), Some(int(1)));
        assert_eq!(ycoef("gamma_e0_v2"), Some(int(-1)));
        assert_eq!(ycoef("lambda_e0_f1_fw"), Some(int(-1)));
        assert_eq!(y.rhs, int(0));
        assert_eq!(d.variables()[d.variable("gamma_e0_v0").unwrap()].bound, VarBound::Free);
        assert_eq!(d.objective(), None);
    }

    #[test]
    fn single_edge_is_always_feasible() {
        for c in [-5, 0, 5] {
            let g = CostedGraph::on_range(2, vec![(0, 1)], vec![int(c)]).unwrap();
            assert!(simplex_feasible(&build_dual_system(&g)).is_feasible());
        }
    }

    #[test]
    fn fig1_family() {
        let (inst, _) = fig1();
        let family = enumerate_family(&inst);
        assert_eq!(family.members[0].label, "G2");
        assert_eq!(family.members[0].edges, vec![(2, 3)]);
        assert!(family.len() as u128 <= family_bound(&inst));
        assert!(family.members.iter().any(|m| m.label == "G(0,1)[0:0-2,1:1-2]"));
        for m in &family.members[1..] {
            assert_eq!(m.marker, Some(m.edges.len() - 1));
        }
    }

    #[test]
    fn edgeless_family() {
        let inst = Instance::new("empty", vec![1, 1, 1], vec![]).unwrap();
        let family = enumerate_family(&inst);
        assert_eq!(family.len(), 1);
        assert_eq!(family.members[0].edge_count(), 0);
        let size = size_report(&inst);
        assert_eq!(size.variables, 3);
        assert_eq!(size.constraints, 1 + 3);
        let sys = build_extended_formulation(&inst);
        assert_eq!((sys.variable_count(), sys.constraint_count()), (3, 4));
    }

    #[test]
    fn fig1_membership() {
        let (inst, p) = fig1();
        assert_eq!(check_membership(&inst, &p), Membership::InCore);
        let q = fig1_path_violation();
        assert!(matches!(check_membership(&inst, &q), Membership::NotInCore(MembershipFailure::Block { .. })));
        assert!(matches!(
            check_membership(&inst, &Allocation::zero(&inst)),
            Membership::NotInCore(MembershipFailure::TotalValue { .. })
        ));
        let full = build_extended_formulation(&inst);
        assert!(simplex_feasible(&fix_allocation(&full, &p)).is_feasible());
        assert!(!simplex_feasible(&fix_allocation(&full, &q)).is_feasible());
    }

    #[test]
    fn fig1_sizes_match_materialized_system() {
        let (inst, _) = fig1();
        let size = size_report(&inst);
        let sys = build_extended_formulation(&inst);
        assert_eq!(size.variables, sys.variable_count());
        assert_eq!(size.constraints, sys.constraint_count());
        assert!(size.within_bounds());
    }

    #[test]
    fn family_blocks_agree_with_negative_cycles() {
        let inst = Instance::new(
            "k4",
            vec![2, 2, 2, 1],
            vec![Edge::new(0, 1, int(4)), Edge::new(1, 2, int(4)), Edge::new(0, 2, int(4)), Edge::new(2, 3, int(1))],
        )
        .unwrap();
        let p = Allocation::new(vec![int(2), int(2), int(1), int(0)], &inst).unwrap();
        for g in enumerate_family(&inst).costed(&p) {
            let feasible = simplex_feasible(&build_dual_system(&g)).is_feasible();
            assert_eq!(feasible, find_negative_cycle(&g).is_none());
        }
    }
}
