use proptest::prelude::*;
use twomatch_core::extform::{
    build_dual_system, build_extended_formulation, build_flow_primal, check_membership, emit_lp, parse_lp, simplex_feasible,
    solve_lp,
};
use twomatch_core::model::{Allocation, Coalition, Edge, Instance};
use twomatch_core::negcycle::{find_negative_cycle, min_t_join, CostedGraph};
use twomatch_core::oracle::{constraint_check_bruteforce, core_check_bruteforce, negative_cycle_bruteforce, nu_bruteforce};
use twomatch_core::rational::{int, rat, Rational};
use twomatch_core::separation::separate;

fn pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect()
}

fn costed(n: usize, mask: u32, costs: &[i64]) -> CostedGraph {
    let (mut edges, mut c) = (Vec::new(), Vec::new());
    for (slot, pair) in pairs(n).into_iter().enumerate() {
        if mask >> slot & 1 == 1 {
            edges.push(pair);
            c.push(int(costs[slot % costs.len()]));
        }
    }
    CostedGraph::on_range(n, edges, c).unwrap()
}

fn costed_graph(max_n: usize, lo: i64, hi: i64) -> impl Strategy<Value = CostedGraph> {
    (1..=max_n, any::<u32>(), prop::collection::vec(lo..=hi, 28)).prop_map(|(n, mask, costs)| costed(n, mask, &costs))
}

fn instance(max_n: usize) -> impl Strategy<Value = Instance> {
    (1..=max_n, any::<u32>(), prop::collection::vec(1u64..=2, 8), prop::collection::vec(0i64..=10, 28)).prop_map(
        |(n, mask, caps, weights)| {
            let edges = pairs(n)
                .into_iter()
                .enumerate()
                .filter(|(slot, _)| mask >> slot & 1 == 1)
                .map(|(slot, (u, v))| Edge::new(u, v, int(weights[slot])))
                .collect();
            Instance::new("prop", caps[..n].to_vec(), edges).unwrap()
        },
    )
}

/// An instance with an allocation normalized to `p(N) = ν(N)` about half
/// the time, and arbitrary otherwise.
fn game(max_n: usize) -> impl Strategy<Value = (Instance, Allocation)> {
    (instance(max_n), prop::collection::vec((0i64..=40, 1i64..=4), 8), any::<bool>()).prop_map(|(inst, raw, normalize)| {
        let mut values: Vec<Rational> = raw[..inst.n()].iter().map(|&(a, b)| rat(a, b)).collect();
        if normalize {
            let total = nu_bruteforce(&inst, &Coalition::grand(&inst)).unwrap();
            let sum: Rational = values.iter().sum();
            let n = Rational::from_integer(inst.n().into());
            values = values.iter().map(|v| if sum == int(0) { &total / &n } else { v * &total / &sum }).collect();
        }
        let p = Allocation::new(values, &inst).unwrap();
        (inst, p)
    })
}

/// Minimum cost over all edge sets whose odd-degree vertices are exactly `t`.
fn t_join_bruteforce(g: &CostedGraph, costs: &[Rational], t: &[usize]) -> Option<Rational> {
    let mut best: Option<Rational> = None;
    for mask in 0u32..1 << g.edge_count() {
        let mut odd = vec![false; g.vertex_count()];
        let mut cost = int(0);
        for (k, &(u, v)) in g.edges().iter().enumerate() {
            if mask >> k & 1 == 1 {
                odd[u] ^= true;
                odd[v] ^= true;
                cost += &costs[k];
            }
        }
        let matches = odd.iter().enumerate().all(|(v, &o)| o == t.contains(&v));
        if matches && best.as_ref().is_none_or(|b| cost < *b) {
            best = Some(cost);
        }
    }
    best
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn negative_cycle_matches_enumeration(g in costed_graph(7, -10, 10)) {
        let truth = negative_cycle_bruteforce(&g).unwrap();
        let fast = find_negative_cycle(&g);
        prop_assert_eq!(truth.is_some(), fast.is_some());
        if let Some(c) = fast {
            prop_assert!(c.cost < int(0));
            prop_assert_eq!(g.cost_of(&c.edges), c.cost.clone());
            prop_assert!(c.cost >= truth.unwrap().cost);
        }
    }

    #[test]
    fn t_join_matches_enumeration(g in costed_graph(6, 0, 9), pick in any::<u8>()) {
        prop_assume!(g.edge_count() <= 12);
        let mut t: Vec<usize> = (0..g.vertex_count()).filter(|v| pick >> v & 1 == 1).collect();
        if t.len() % 2 == 1 {
            t.pop();
        }
        let costs = g.costs().to_vec();
        let truth = t_join_bruteforce(&g, &costs, &t);
        match min_t_join(&g, &costs, &t) {
            Ok((join, cost)) => {
                prop_assert_eq!(Some(cost.clone()), truth);
                prop_assert_eq!(g.cost_of(&join), cost);
            }
            Err(_) => prop_assert_eq!(truth, None),
        }
    }

    #[test]
    fn separation_matches_coalitions((inst, p) in game(6)) {
        let oracle = core_check_bruteforce(&inst, &p).unwrap();
        let verdict = separate(&inst, &p);
        prop_assert_eq!(oracle.in_core(), verdict.in_core());
        if let Some(v) = verdict.violation() {
            prop_assert!(v.verify(&inst, &p).is_ok());
        }
    }

    #[test]
    fn constraint_system_matches_coalitions((inst, p) in game(6)) {
        let a = constraint_check_bruteforce(&inst, &p).unwrap();
        let b = core_check_bruteforce(&inst, &p).unwrap();
        prop_assert_eq!(a.in_core(), b.in_core());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn duality_triangle(g in costed_graph(5, -4, 10)) {
        let cycle = negative_cycle_bruteforce(&g).unwrap().is_some();
        let unbounded = solve_lp(&build_flow_primal(&g)).is_unbounded();
        let infeasible = !simplex_feasible(&build_dual_system(&g)).is_feasible();
        prop_assert_eq!(cycle, unbounded);
        prop_assert_eq!(unbounded, infeasible);
    }

    #[test]
    fn extended_formulation_matches_separation((inst, p) in game(5)) {
        prop_assert_eq!(check_membership(&inst, &p).in_core(), separate(&inst, &p).in_core());
    }

    #[test]
    fn lp_file_round_trip(inst in instance(4)) {
        let sys = build_extended_formulation(&inst);
        let mut text = String::new();
        emit_lp(&sys, &mut text).unwrap();
        let back = parse_lp(&text).unwrap();
        prop_assert_eq!(back.variables(), sys.variables());
        prop_assert_eq!(back.constraints(), sys.constraints());
    }
}
