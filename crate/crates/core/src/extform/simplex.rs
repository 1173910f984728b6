//! Exact two-phase simplex over rationals with Bland's rule.
//!
//! Free variables are split into a difference of two nonnegative columns.
//! Rows are scaled to a nonnegative right-hand side; `≤` rows start with
//! their slack in the basis, `≥` and `=` rows with an artificial. Every
//! returned point or ray is checked against the original system.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use super::system::{ConstraintSystem, Relation, VarBound};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Feasibility {
    Feasible(Vec<Rational>),
    Infeasible,
}

impl Feasibility {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Feasibility::Feasible(_))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal {
        value: Rational,
        point: Vec<Rational>,
    },
    /// `point + t·ray` is feasible for all `t ≥ 0` and the objective falls
    /// along `ray`.
    Unbounded {
        point: Vec<Rational>,
        ray: Vec<Rational>,
    },
    Infeasible,
}

impl LpOutcome {
    pub fn is_unbounded(&self) -> bool {
        matches!(self, LpOutcome::Unbounded { .. })
    }
}

const DEGENERATE_RUN: usize = 50;

struct Tableau {
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    basis: Vec<usize>,
    /// Structural columns per variable: `(plus, minus)`.
    columns: Vec<(usize, Option<usize>)>,
    artificial_start: usize,
    width: usize,
}

impl Tableau {
    fn new(sys: &ConstraintSystem) -> Self {
        let mut columns = Vec::with_capacity(sys.variable_count());
        let mut next = 0;
        for v in sys.variables() {
            let minus = (v.bound == VarBound::Free).then(|| next + 1);
            columns.push((next, minus));
            next += if minus.is_some() { 2 } else { 1 };
        }
        let structural = next;
        let mut relations = Vec::with_capacity(sys.constraint_count());
        let mut signs = Vec::with_capacity(sys.constraint_count());
        for c in sys.constraints() {
            let flip = c.rhs.is_negative() || (c.rhs.is_zero() && c.relation == Relation::Ge);
            signs.push(flip);
            relations.push(if flip { c.relation.flipped() } else { c.relation });
        }
        let slacks = relations.iter().filter(|r| **r != Relation::Eq).count();
        let artificials = relations.iter().filter(|r| **r != Relation::Le).count();
        let artificial_start = structural + slacks;
        let width = artificial_start + artificials;

        let mut rows = Vec::with_capacity(relations.len());
        let mut rhs = Vec::with_capacity(relations.len());
        let mut basis = Vec::with_capacity(relations.len());
        let (mut slack, mut artificial) = (structural, artificial_start);
        for ((c, &flip), &relation) in sys.constraints().iter().zip(&signs).zip(&relations) {
            let mut row = vec![Rational::zero(); width];
            for (&j, a) in &c.coeffs {
                let a = if flip { -a } else { a.clone() };
                let (plus, minus) = columns[j];
                if let Some(minus) = minus {
                    row[minus] = -a.clone();
                }
                row[plus] = a;
            }
            match relation {
                Relation::Le => {
                    row[slack] = Rational::one();
                    basis.push(slack);
                    slack += 1;
                }
                Relation::Ge => {
                    row[slack] = -Rational::one();
                    slack += 1;
                    row[artificial] = Rational::one();
                    basis.push(artificial);
                    artificial += 1;
                }
                Relation::Eq => {
                    row[artificial] = Rational::one();
                    basis.push(artificial);
                    artificial += 1;
                }
            }
            rows.push(row);
            rhs.push(if flip { -c.rhs.clone() } else { c.rhs.clone() });
        }
        Tableau { rows, rhs, basis, columns, artificial_start, width }
    }

    /// Reduced costs `c_j − c_B B⁻¹ A_j` for column costs `c`.
    fn reduced(&self, cost: &[Rational]) -> Vec<Rational> {
        let mut d = cost.to_vec();
        for (i, row) in self.rows.iter().enumerate() {
            let cb = &cost[self.basis[i]];
            if cb.is_zero() {
                continue;
            }
            for (k, a) in row.iter().enumerate() {
                if !a.is_zero() {
                    d[k] -= cb * a;
                }
            }
        }
        d
    }

    fn pivot(&mut self, r: usize, c: usize, d: &mut [Rational]) {
        let mut prow = core::mem::take(&mut self.rows[r]);
        let inv = prow[c].recip();
        let nz: Vec<usize> = (0..self.width).filter(|&k| !prow[k].is_zero()).collect();
        for &k in &nz {
            prow[k] *= &inv;
        }
        self.rhs[r] *= &inv;
        let pr = self.rhs[r].clone();
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][c].is_zero() {
                continue;
            }
            let f = self.rows[i][c].clone();
            let row = &mut self.rows[i];
            for &k in &nz {
                row[k] -= &f * &prow[k];
            }
            self.rhs[i] -= &f * &pr;
        }
        if !d[c].is_zero() {
            let f = d[c].clone();
            for &k in &nz {
                d[k] -= &f * &prow[k];
            }
        }
        self.rows[r] = prow;
        self.basis[r] = c;
    }

    /// Primal simplex over columns below `limit`: Dantzig's rule, switching
    /// to Bland's rule during runs of degenerate pivots so cycling cannot
    /// occur. Returns the entering column of an unbounded direction.
    fn optimize(&mut self, d: &mut [Rational], limit: usize) -> Option<usize> {
        let mut degenerate_run = 0usize;
        loop {
            let entering = if degenerate_run < DEGENERATE_RUN {
                (0..limit).filter(|&k| d[k].is_negative()).min_by(|&a, &b| d[a].cmp(&d[b]).then(a.cmp(&b)))
            } else {
                (0..limit).find(|&k| d[k].is_negative())
            };
            let c = entering?;
            let mut best: Option<(usize, Rational)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][c];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / a;
                let better = match &best {
                    None => true,
                    Some((j, r)) => ratio < *r || (ratio == *r && self.basis[i] < self.basis[*j]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            match best {
                Some((r, ratio)) => {
                    degenerate_run = if ratio.is_zero() { degenerate_run + 1 } else { 0 };
                    self.pivot(r, c, d);
                }
                None => return Some(c),
            }
        }
    }

    fn column_values(&self) -> Vec<Rational> {
        let mut values = vec![Rational::zero(); self.width];
        for (i, &b) in self.basis.iter().enumerate() {
            values[b] = self.rhs[i].clone();
        }
        values
    }

    fn to_variables(&self, values: &[Rational]) -> Vec<Rational> {
        self.columns
            .iter()
            .map(|&(plus, minus)| match minus {
                Some(minus) => &values[plus] - &values[minus],
                None => values[plus].clone(),
            })
            .collect()
    }

    /// Phase I. Leaves a basis free of artificials, or reports infeasibility.
    fn phase_one(&mut self) -> bool {
        let mut cost = vec![Rational::zero(); self.width];
        for c in cost.iter_mut().skip(self.artificial_start) {
            *c = Rational::one();
        }
        let mut d = self.reduced(&cost);
        let unbounded = self.optimize(&mut d, self.width);
        debug_assert!(unbounded.is_none(), "phase I is bounded below by zero");
        if self.basis.iter().zip(&self.rhs).any(|(&b, v)| b >= self.artificial_start && v.is_positive()) {
            return false;
        }
        let mut redundant = Vec::new();
        for r in 0..self.rows.len() {
            if self.basis[r] < self.artificial_start {
                continue;
            }
            match (0..self.artificial_start).find(|&k| !self.rows[r][k].is_zero()) {
                Some(k) => self.pivot(r, k, &mut d),
                None => redundant.push(r),
            }
        }
        for &r in redundant.iter().rev() {
            self.rows.remove(r);
            self.rhs.remove(r);
            self.basis.remove(r);
        }
        true
    }
}

fn verify_point(sys: &ConstraintSystem, point: &[Rational]) {
    assert!(sys.is_satisfied(point), "simplex produced a point that fails re-verification");
}

/// Decides feasibility of `sys`, ignoring any objective.
pub fn simplex_feasible(sys: &ConstraintSystem) -> Feasibility {
    let mut t = Tableau::new(sys);
    if !t.phase_one() {
        return Feasibility::Infeasible;
    }
    let point = t.to_variables(&t.column_values());
    verify_point(sys, &point);
    Feasibility::Feasible(point)
}

/// Minimizes the objective of `sys` (zero when absent).
pub fn solve_lp(sys: &ConstraintSystem) -> LpOutcome {
    let mut t = Tableau::new(sys);
    if !t.phase_one() {
        return LpOutcome::Infeasible;
    }
    let mut cost = vec![Rational::zero(); t.width];
    if let Some(obj) = sys.objective() {
        for (&j, c) in obj {
            let (plus, minus) = t.columns[j];
            cost[plus] = c.clone();
            if let Some(minus) = minus {
                cost[minus] = -c.clone();
            }
        }
    }
    let mut d = t.reduced(&cost);
    let limit = t.artificial_start;
    let unbounded = t.optimize(&mut d, limit);
    let values = t.column_values();
    let point = t.to_variables(&values);
    verify_point(sys, &point);
    match unbounded {
        None => LpOutcome::Optimal { value: sys.objective_value(&point), point },
        Some(c) => {
            let mut direction = vec![Rational::zero(); t.width];
            direction[c] = Rational::one();
            for (i, &b) in t.basis.iter().enumerate() {
                direction[b] = -t.rows[i][c].clone();
            }
            let ray = t.to_variables(&direction);
            assert!(is_recession_ray(sys, &ray), "unbounded ray fails re-verification");
            LpOutcome::Unbounded { point, ray }
        }
    }
}

/// True when `ray` keeps every constraint of `sys` satisfied from any
/// feasible point and strictly decreases the objective.
pub fn is_recession_ray(sys: &ConstraintSystem, ray: &[Rational]) -> bool {
    let zero = Rational::zero();
    let bounds = sys.variables().iter().zip(ray).all(|(v, r)| v.bound == VarBound::Free || !r.is_negative());
    let rows = sys.constraints().iter().all(|c| c.relation.holds(&c.lhs(ray), &zero));
    bounds && rows && sys.objective_value(ray).is_negative()
}
