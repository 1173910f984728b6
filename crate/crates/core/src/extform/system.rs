//! Named rational variables and linear constraints.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{Signed, Zero};

use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VarBound {
    Free,
    NonNegative,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Variable {
    pub name: String,
    pub bound: VarBound,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

impl Relation {
    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Le => "<=",
            Relation::Eq => "=",
            Relation::Ge => ">=",
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Relation::Le => Relation::Ge,
            Relation::Eq => Relation::Eq,
            Relation::Ge => Relation::Le,
        }
    }

    pub fn holds(self, lhs: &Rational, rhs: &Rational) -> bool {
        match self {
            Relation::Le => lhs <= rhs,
            Relation::Eq => lhs == rhs,
            Relation::Ge => lhs >= rhs,
        }
    }
}

/// Sparse coefficient map keyed by variable index; never stores zeros.
pub type Coefficients = BTreeMap<usize, Rational>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub name: String,
    pub coeffs: Coefficients,
    pub relation: Relation,
    pub rhs: Rational,
}

impl Constraint {
    pub fn lhs(&self, x: &[Rational]) -> Rational {
        let mut total = Rational::zero();
        for (&j, a) in &self.coeffs {
            total += a * &x[j];
        }
        total
    }

    pub fn holds(&self, x: &[Rational]) -> bool {
        self.relation.holds(&self.lhs(x), &self.rhs)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SystemError {
    DuplicateVariable(String),
    DuplicateConstraint(String),
    UnknownVariable(usize),
}

impl fmt::Display for SystemError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SystemError::DuplicateVariable(name) => write!(f, "variable {name} declared twice"),
            SystemError::DuplicateConstraint(name) => write!(f, "constraint {name} declared twice"),
            SystemError::UnknownVariable(j) => write!(f, "constraint refers to undeclared variable #{j}"),
        }
    }
}

impl core::error::Error for SystemError {}

/// A linear system over named variables with an optional objective to
/// minimize.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ConstraintSystem {
    variables: Vec<Variable>,
    by_name: BTreeMap<String, usize>,
    constraints: Vec<Constraint>,
    constraint_names: BTreeMap<String, usize>,
    objective: Option<Coefficients>,
}

fn collect_terms(terms: impl IntoIterator<Item = (usize, Rational)>) -> Coefficients {
    let mut coeffs = Coefficients::new();
    for (j, a) in terms {
        *coeffs.entry(j).or_insert_with(Rational::zero) += a;
    }
    coeffs.retain(|_, a| !a.is_zero());
    coeffs
}

impl ConstraintSystem {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_variable(&mut self, name: impl Into<String>, bound: VarBound) -> Result<usize, SystemError> {
        let name = name.into();
        if self.by_name.contains_key(&name) {
            return Err(SystemError::DuplicateVariable(name));
        }
        let j = self.variables.len();
        self.by_name.insert(name.clone(), j);
        self.variables.push(Variable { name, bound });
        Ok(j)
    }

    /// Adds a constraint; repeated indices are summed and zero terms dropped.
    pub fn add_constraint(
        &mut self,
        name: impl Into<String>,
        terms: impl IntoIterator<Item = (usize, Rational)>,
        relation: Relation,
        rhs: Rational,
    ) -> Result<usize, SystemError> {
        let name = name.into();
        if self.constraint_names.contains_key(&name) {
            return Err(SystemError::DuplicateConstraint(name));
        }
        let coeffs = collect_terms(terms);
        if let Some((&j, _)) = coeffs.iter().find(|(&j, _)| j >= self.variables.len()) {
            return Err(SystemError::UnknownVariable(j));
        }
        let i = self.constraints.len();
        self.constraint_names.insert(name.clone(), i);
        self.constraints.push(Constraint { name, coeffs, relation, rhs });
        Ok(i)
    }

    /// Sets the objective to minimize. An all-zero objective clears it.
    pub fn set_objective(&mut self, terms: impl IntoIterator<Item = (usize, Rational)>) -> Result<(), SystemError> {
        let coeffs = collect_terms(terms);
        if let Some((&j, _)) = coeffs.iter().find(|(&j, _)| j >= self.variables.len()) {
            return Err(SystemError::UnknownVariable(j));
        }
        self.objective = (!coeffs.is_empty()).then_some(coeffs);
        Ok(())
    }

    pub fn variables(&self) -> &[Variable] {
        &self.variables
    }

    pub fn variable(&self, name: &str) -> Option<usize> {
        self.by_name.get(name).copied()
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn constraint(&self, name: &str) -> Option<&Constraint> {
        self.constraint_names.get(name).map(|&i| &self.constraints[i])
    }

    pub fn objective(&self) -> Option<&Coefficients> {
        self.objective.as_ref()
    }

    pub fn variable_count(&self) -> usize {
        self.variables.len()
    }

    pub fn constraint_count(&self) -> usize {
        self.constraints.len()
    }

    pub fn objective_value(&self, x: &[Rational]) -> Rational {
        let mut total = Rational::zero();
        if let Some(obj) = &self.objective {
            for (&j, c) in obj {
                total += c * &x[j];
            }
        }
        total
    }

    /// Index of the first bound or constraint that `x` violates.
    pub fn first_violation(&self, x: &[Rational]) -> Option<Violated> {
        assert_eq!(x.len(), self.variables.len(), "point has wrong dimension");
        if let Some(j) = self.variables.iter().zip(x).position(|(v, xj)| v.bound == VarBound::NonNegative && xj.is_negative()) {
            return Some(Violated::Bound(j));
        }
        self.constraints.iter().position(|c| !c.holds(x)).map(Violated::Constraint)
    }

    pub fn is_satisfied(&self, x: &[Rational]) -> bool {
        self.first_violation(x).is_none()
    }

    /// Fixes some variables to values and removes them. Constraints keep
    /// their names; a constraint left without terms stays as `0 rel rhs`.
    pub fn substitute(&self, fixed: &BTreeMap<usize, Rational>) -> ConstraintSystem {
        let mut out = ConstraintSystem::new();
        let mut remap = alloc::vec![None; self.variables.len()];
        for (j, v) in self.variables.iter().enumerate() {
            if !fixed.contains_key(&j) {
                remap[j] = Some(out.add_variable(v.name.clone(), v.bound).expect("names stay unique"));
            }
        }
        for c in &self.constraints {
            let mut rhs = c.rhs.clone();
            let mut terms = Vec::new();
            for (&j, a) in &c.coeffs {
                match (fixed.get(&j), remap[j]) {
                    (Some(value), _) => rhs -= a * value,
                    (None, Some(k)) => terms.push((k, a.clone())),
                    (None, None) => unreachable!(),
                }
            }
            out.add_constraint(c.name.clone(), terms, c.relation, rhs).expect("names stay unique");
        }
        if let Some(obj) = &self.objective {
            let terms = obj.iter().filter_map(|(&j, c)| remap[j].map(|k| (k, c.clone())));
            out.set_objective(terms).expect("remapped");
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Violated {
    Bound(usize),
    Constraint(usize),
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    #[test]
    fn build_and_check() {
        let mut s = ConstraintSystem::new();
        let x = s.add_variable("x", VarBound::NonNegative).unwrap();
        let y = s.add_variable("y", VarBound::Free).unwrap();
        assert_eq!(s.add_variable("x", VarBound::Free), Err(SystemError::DuplicateVariable("x".into())));
        s.add_constraint("c", [(x, int(1)), (y, int(2)), (x, int(1))], Relation::Le, int(4)).unwrap();
        s.add_constraint("d", [(x, int(1)), (x, int(-1)), (y, int(1))], Relation::Ge, int(-3)).unwrap();
        assert_eq!(s.constraints()[0].coeffs.get(&x), Some(&int(2)));
        assert_eq!(s.constraints()[1].coeffs.len(), 1);
        assert_eq!(s.add_constraint("e", [(7, int(1))], Relation::Eq, int(0)), Err(SystemError::UnknownVariable(7)));
        assert!(s.is_satisfied(&[int(1), int(1)]));
        assert_eq!(s.first_violation(&[int(-1), int(0)]), Some(Violated::Bound(0)));
        assert_eq!(s.first_violation(&[int(0), int(-4)]), Some(Violated::Constraint(1)));
        s.set_objective([(x, int(0))]).unwrap();
        assert_eq!(s.objective(), None);
    }

    #[test]
    fn substitution() {
        let mut s = ConstraintSystem::new();
        let p = s.add_variable("p", VarBound::Free).unwrap();
        let g = s.add_variable("g", VarBound::Free).unwrap();
        s.add_constraint("r", [(p, int(2)), (g, int(1))], Relation::Le, int(5)).unwrap();
        s.add_constraint("only_p", [(p, int(1))], Relation::Ge, int(0)).unwrap();
        let fixed: BTreeMap<usize, Rational> = [(p, int(3))].into_iter().collect();
        let t = s.substitute(&fixed);
        assert_eq!(t.variables(), &[Variable { name: "g".into(), bound: VarBound::Free }]);
        assert_eq!(t.constraint("r").unwrap().rhs, int(-1));
        assert!(t.constraint("only_p").unwrap().coeffs.is_empty());
        assert!(t.is_satisfied(&[int(-1)]));
        assert!(!t.is_satisfied(&[int(0)]));
    }
}
