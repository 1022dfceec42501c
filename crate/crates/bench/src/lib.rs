//! Workloads shared by the benchmarks.

use wittbox_core::sampling::{random_instance, seeded, InstanceShape};
use wittbox_core::{Fq, ProblemInstance};

/// A seeded instance with q^(nm) box points and two congruences.
pub fn instance(p: u64, h: usize, n: usize, m: usize, seed: u64) -> ProblemInstance {
    let shape = InstanceShape {
        field: Fq::with_degree(p, h).expect("supported field"),
        n,
        m,
        moduli: vec![m as u32, m as u32 + 1],
        max_degree: 3,
        max_terms: 5,
        close: true,
        density: 0.7,
    };
    random_instance(&mut seeded(seed), &shape).expect("valid shape")
}
