//! Multi-threaded drivers whose results match the sequential ones exactly.

use std::num::NonZeroUsize;
use std::thread;

use twomatch_core::extform::{build_dual_system, enumerate_family, simplex_feasible, Membership, MembershipFailure};
use twomatch_core::model::{Allocation, Instance};
use twomatch_core::separation::{
    check_total_value, endpoint_pairs, separate_cycles, separate_pair, separate_vertices_edges, SeparationVerdict,
};

/// First `Some` of `f` over `items` in item order, evaluated on up to
/// `jobs` threads. Each thread takes a contiguous chunk and stops at its own
/// first hit, so the earliest chunk with a hit holds the answer.
pub fn first_in_order<T, R, F>(items: &[T], jobs: NonZeroUsize, f: F) -> Option<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> Option<R> + Sync,
{
    let jobs = jobs.get().min(items.len().max(1));
    if jobs == 1 {
        return items.iter().find_map(&f);
    }
    let chunk = items.len().div_ceil(jobs);
    thread::scope(|scope| {
        let handles: Vec<_> = items.chunks(chunk).map(|part| scope.spawn(|| part.iter().find_map(&f))).collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).find(Option::is_some).flatten()
    })
}

/// Same verdict as `separation::separate`, with path separation spread over
/// endpoint pairs.
pub fn separate_with_jobs(inst: &Instance, p: &Allocation, jobs: NonZeroUsize) -> SeparationVerdict {
    let found = check_total_value(inst, p)
        .or_else(|| separate_vertices_edges(inst, p))
        .or_else(|| separate_cycles(inst, p))
        .or_else(|| {
            let pairs = endpoint_pairs(inst);
            first_in_order(&pairs, jobs, |&(s, t)| separate_pair(inst, p, s, t).expect("valid pair"))
        });
    match found {
        Some(v) => SeparationVerdict::Violated(v),
        None => SeparationVerdict::InCore,
    }
}

/// Same verdict as `extform::check_membership`, with the per-member
/// feasibility checks spread over threads.
pub fn check_membership_with_jobs(inst: &Instance, p: &Allocation, jobs: NonZeroUsize) -> Membership {
    let direct = twomatch_core::extform::check_membership_direct(inst, p);
    if let Some(failure) = direct {
        return Membership::NotInCore(failure);
    }
    let family = enumerate_family(inst);
    let indexed: Vec<_> = family.members.iter().enumerate().collect();
    let failed = first_in_order(&indexed, jobs, |&(gi, member)| {
        let feasible = simplex_feasible(&build_dual_system(&member.costed(p))).is_feasible();
        (!feasible).then(|| MembershipFailure::Block { member: gi, label: member.label.clone() })
    });
    match failed {
        Some(failure) => Membership::NotInCore(failure),
        None => Membership::InCore,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_allocation, random_instance};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use twomatch_core::extform::check_membership;
    use twomatch_core::rational::rat;
    use twomatch_core::separation::separate;

    #[test]
    fn ordered_search() {
        let items: Vec<u32> = (0..100).collect();
        for jobs in 1..6 {
            let jobs = NonZeroUsize::new(jobs).unwrap();
            assert_eq!(first_in_order(&items, jobs, |&x| (x % 17 == 16).then_some(x)), Some(16));
            assert_eq!(first_in_order(&items, jobs, |&x| (x > 200).then_some(x)), None);
        }
        assert_eq!(first_in_order(&[] as &[u32], NonZeroUsize::new(3).unwrap(), |&x| Some(x)), None);
    }

    #[test]
    fn matches_sequential() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let four = NonZeroUsize::new(4).unwrap();
        for seed in 0..20 {
            let inst = random_instance(seed, 6, &rat(1, 2), 6).unwrap();
            let p = random_allocation(&mut rng, &inst, 0, 6, 2);
            assert_eq!(separate_with_jobs(&inst, &p, four), separate(&inst, &p));
            assert_eq!(check_membership_with_jobs(&inst, &p, four), check_membership(&inst, &p));
        }
    }
}
