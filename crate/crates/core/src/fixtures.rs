//! The five-player counterexample instance used throughout tests and demos.

use alloc::vec;

use crate::model::{Allocation, Edge, Instance};
use crate::rational::int;

/// Display names for the counterexample's vertices, in id order.
pub const FIG1_NAMES: [&str; 5] = ["s", "t", "u", "v", "w"];

/// Vertices s, t, u, v, w with capacities (1, 1, 2, 2, 1), edges su, tu, uv,
/// vw with weights (1, 1, 10, 1), and the core allocation (0, 0, 2, 10, 0).
pub fn fig1() -> (Instance, Allocation) {
    let inst = Instance::new(
        "fig1",
        vec![1, 1, 2, 2, 1],
        vec![Edge::new(0, 2, int(1)), Edge::new(1, 2, int(1)), Edge::new(2, 3, int(10)), Edge::new(3, 4, int(1))],
    )
    .expect("fixture is valid");
    let p = Allocation::new(vec![int(0), int(0), int(2), int(10), int(0)], &inst).expect("fixture is valid");
    (inst, p)
}

/// An allocation on the counterexample instance that violates the path s-u-t.
pub fn fig1_path_violation() -> Allocation {
    let (inst, _) = fig1();
    Allocation::new(vec![int(0), int(0), int(1), int(11), int(0)], &inst).expect("fixture is valid")
}
