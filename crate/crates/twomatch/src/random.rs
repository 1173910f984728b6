//! Seeded random instances and allocations.

use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use twomatch_core::extform::{simplex_feasible, ConstraintSystem, Feasibility, Relation, VarBound};
use twomatch_core::model::{Allocation, Coalition, Edge, Instance};
use twomatch_core::oracle::{nu_bruteforce, OracleError};
use twomatch_core::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RandomError {
    #[error("n must be at least 1")]
    EmptyGraph,
    #[error("density {0} outside [0, 1]")]
    Density(Rational),
    #[error("density {0} has a numerator or denominator beyond 64 bits")]
    DensityTooFine(Rational),
}

/// True with probability exactly `num / den`.
fn bernoulli(rng: &mut ChaCha8Rng, num: u64, den: u64) -> bool {
    rng.gen_range(0..den) < num
}

/// Capacities uniform in {1, 2}; each of the `n(n−1)/2` pairs becomes an
/// edge with probability `density`; integer weights uniform in `[0, wmax]`.
/// The output depends only on the arguments.
pub fn random_instance(seed: u64, n: usize, density: &Rational, wmax: u64) -> Result<Instance, RandomError> {
    if n == 0 {
        return Err(RandomError::EmptyGraph);
    }
    if density.is_negative() || density > &Rational::one() {
        return Err(RandomError::Density(density.clone()));
    }
    let (Some(num), Some(den)) = (density.numer().to_u64(), density.denom().to_u64()) else {
        return Err(RandomError::DensityTooFine(density.clone()));
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let caps: Vec<u64> = (0..n).map(|_| rng.gen_range(1..=2)).collect();
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if bernoulli(&mut rng, num, den) {
                let w = rng.gen_range(0..=wmax);
                edges.push(Edge::new(u, v, Rational::from_integer(w.into())));
            }
        }
    }
    Ok(Instance::new(format!("random-{seed}-{n}"), caps, edges).expect("generated instances are valid"))
}

/// Entries `k / d` with `k` uniform in `[lo·d, hi·d]` and `d` uniform in
/// `1..=max_den`.
pub fn random_allocation(rng: &mut impl Rng, inst: &Instance, lo: i64, hi: i64, max_den: i64) -> Allocation {
    let values = (0..inst.n())
        .map(|_| {
            let d = rng.gen_range(1..=max_den);
            Rational::new(rng.gen_range(lo * d..=hi * d).into(), d.into())
        })
        .collect();
    Allocation::new(values, inst).expect("length matches")
}

/// Rescales `p` so that `p(N) = target`. When `p(N) = 0`, the target is
/// spread evenly instead.
pub fn normalize_total(inst: &Instance, p: &Allocation, target: &Rational) -> Allocation {
    let total = p.total();
    let values = if total.is_zero() {
        let share = target / Rational::from_integer(inst.n().into());
        vec![share; inst.n()]
    } else {
        p.values().iter().map(|v| v * target / &total).collect()
    };
    Allocation::new(values, inst).expect("length matches")
}

/// A point of the core from the explicit coalition system `p(N) = ν(N)`,
/// `p(S) ≥ ν(S)`, with coalition values by enumeration. `None` when the core
/// is empty.
pub fn core_point(inst: &Instance) -> Result<Option<Allocation>, OracleError> {
    let n = inst.n();
    if n > twomatch_core::oracle::MAX_CORE_VERTICES {
        return Err(OracleError::TooManyVertices { vertices: n, limit: twomatch_core::oracle::MAX_CORE_VERTICES });
    }
    let mut sys = ConstraintSystem::new();
    for i in 0..n {
        sys.add_variable(format!("p_{i}"), VarBound::Free).expect("fresh name");
    }
    let one = Rational::one();
    for mask in 1u32..1 << n {
        let members: Vec<usize> = (0..n).filter(|v| mask >> v & 1 == 1).collect();
        let value = nu_bruteforce(inst, &Coalition::new(members.clone()).expect("nonempty"))?;
        let relation = if members.len() == n { Relation::Eq } else { Relation::Ge };
        let terms = members.iter().map(|&v| (v, one.clone()));
        sys.add_constraint(format!("s{mask}"), terms, relation, value).expect("fresh name");
    }
    Ok(match simplex_feasible(&sys) {
        Feasibility::Feasible(x) => Some(Allocation::new(x, inst).expect("one value per vertex")),
        Feasibility::Infeasible => None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format::emit_instance;
    use twomatch_core::rational::{int, rat};

    #[test]
    fn deterministic() {
        let a = random_instance(7, 5, &rat(1, 2), 10).unwrap();
        let b = random_instance(7, 5, &rat(1, 2), 10).unwrap();
        assert_eq!(emit_instance(&a), emit_instance(&b));
        assert_ne!(emit_instance(&a), emit_instance(&random_instance(8, 5, &rat(1, 2), 10).unwrap()));
    }

    #[test]
    fn density_extremes() {
        assert_eq!(random_instance(1, 6, &int(0), 10).unwrap().m(), 0);
        assert_eq!(random_instance(1, 4, &int(1), 10).unwrap().m(), 6);
        assert_eq!(random_instance(1, 0, &int(1), 10), Err(RandomError::EmptyGraph));
        assert!(matches!(random_instance(1, 3, &rat(3, 2), 10), Err(RandomError::Density(_))));
        let inst = random_instance(3, 7, &rat(1, 2), 4).unwrap();
        assert!(inst.edges().iter().all(|e| e.w >= int(0) && e.w <= int(4) && e.w.is_integer()));
        assert!(inst.capacities().iter().all(|&b| b == 1 || b == 2));
    }

    #[test]
    fn normalization() {
        let inst = random_instance(2, 4, &int(1), 5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let p = random_allocation(&mut rng, &inst, -1, 4, 3);
        let q = normalize_total(&inst, &p, &int(9));
        assert_eq!(q.total(), int(9));
        let z = normalize_total(&inst, &Allocation::zero(&inst), &int(2));
        assert_eq!(z.values(), &[rat(1, 2), rat(1, 2), rat(1, 2), rat(1, 2)]);
    }

    #[test]
    fn core_points() {
        let (fig, _) = twomatch_core::fixtures::fig1();
        let p = core_point(&fig).unwrap().unwrap();
        assert!(twomatch_core::oracle::core_check_bruteforce(&fig, &p).unwrap().in_core());
        let triangle =
            Instance::new("t", vec![1, 1, 1], vec![Edge::new(0, 1, int(1)), Edge::new(1, 2, int(1)), Edge::new(0, 2, int(1))])
                .unwrap();
        assert_eq!(core_point(&triangle).unwrap(), None);
    }
}
