//! Seeded random boxes and instances for the randomized suites.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::boxes::{box_vars, BoxSpec};
use crate::counting::{system_vars, ProblemInstance};
use crate::error::Result;
use crate::fq::{Fq, FqElem};
use crate::galois::{GRElem, GaloisRing};
use crate::poly::{MultiPoly, Vars};

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random exponent vector with entries <= `cap` and total degree in
/// [1, max_degree].
fn random_exponents<R: Rng>(rng: &mut R, arity: usize, cap: u32, max_degree: u64) -> Vec<u32> {
    let target = rng.gen_range(1..=max_degree);
    let mut exps = vec![0u32; arity];
    let mut order: Vec<usize> = (0..arity).collect();
    order.shuffle(rng);
    let mut left = target;
    for v in order {
        if left == 0 {
            break;
        }
        let e = rng.gen_range(0..=(cap as u64).min(left));
        exps[v] = e as u32;
        left -= e;
    }
    if exps.iter().all(|&e| e == 0) {
        exps[rng.gen_range(0..arity)] = 1;
    }
    exps
}

fn random_nonzero_fq<R: Rng>(rng: &mut R, field: &Fq) -> FqElem {
    field.element(rng.gen_range(1..field.q()))
}

/// Nonzero reduced polynomial of total degree at most `max_degree`.
pub fn random_reduced_poly<R: Rng>(
    rng: &mut R,
    field: &Fq,
    vars: &Vars,
    max_degree: u64,
    max_terms: usize,
) -> MultiPoly<FqElem> {
    let cap = (field.q() - 1) as u32;
    loop {
        let terms: Vec<_> = (0..rng.gen_range(1..=max_terms.max(1)))
            .map(|_| {
                let constant = rng.gen_bool(0.15);
                let exps = if constant {
                    vec![0; vars.len()]
                } else {
                    random_exponents(rng, vars.len(), cap, max_degree.max(1))
                };
                (exps, random_nonzero_fq(rng, field))
            })
            .collect();
        let g = MultiPoly::from_terms(vars.clone(), terms, field).expect("arity matches");
        if !g.is_zero() {
            return g;
        }
    }
}

/// Box of depth m whose generators are populated for m <= i < top, each
/// nonzero with probability `density`. With `close_at = Some(c)`, every
/// generator with i < c respects the closeness degree limit.
pub fn random_box<R: Rng>(
    rng: &mut R,
    field: &Fq,
    n: usize,
    m: usize,
    top: usize,
    close_at: Option<usize>,
    density: f64,
) -> Result<BoxSpec> {
    let vars = box_vars(n, m);
    let p = field.p();
    let h = field.h();
    let free = (n * m) as u64 * (field.q() - 1);
    let mut generators = Vec::new();
    for i in m..top {
        for j in 1..=n {
            if !rng.gen_bool(density) {
                continue;
            }
            let limit = match close_at {
                Some(c) if i < c => p.saturating_pow((h * (i / h)) as u32).min(free),
                _ => free,
            };
            generators.push(((i, j), random_reduced_poly(rng, field, &vars, limit.max(1), 3)));
        }
    }
    BoxSpec::new(field.clone(), n, m, generators)
}

/// Nonconstant polynomial in x1..xn over GR(p^M, h) of degree at most
/// `max_degree`.
pub fn random_system_poly<R: Rng>(
    rng: &mut R,
    ring: &GaloisRing,
    n: usize,
    max_degree: u64,
    max_terms: usize,
) -> MultiPoly<GRElem> {
    let vars = system_vars(n);
    let card = ring.cardinality().expect("small ring");
    loop {
        let terms: Vec<_> = (0..rng.gen_range(1..=max_terms.max(1)))
            .map(|_| {
                let exps = if rng.gen_bool(0.1) {
                    vec![0; n]
                } else {
                    random_exponents(rng, n, max_degree as u32, max_degree)
                };
                (exps, ring.element(rng.gen_range(1..card)))
            })
            .collect();
        let f = MultiPoly::from_terms(vars.clone(), terms, ring).expect("arity matches");
        if !f.is_constant() {
            return f;
        }
    }
}

/// Shape of a random instance.
#[derive(Debug, Clone)]
pub struct InstanceShape {
    pub field: Fq,
    pub n: usize,
    pub m: usize,
    pub moduli: Vec<u32>,
    pub max_degree: u64,
    pub max_terms: usize,
    /// Keep the box close to T_m at max m_k.
    pub close: bool,
    pub density: f64,
}

pub fn random_instance<R: Rng>(rng: &mut R, shape: &InstanceShape) -> Result<ProblemInstance> {
    let top = shape.moduli.iter().copied().max().unwrap_or(1).max(1) as usize;
    let ring = GaloisRing::new(shape.field.clone(), top as u32)?;
    let close_at = shape.close.then_some(top);
    let boxspec = random_box(rng, &shape.field, shape.n, shape.m, top, close_at, shape.density)?;
    let system = shape
        .moduli
        .iter()
        .map(|&mk| {
            let d = rng.gen_range(1..=shape.max_degree.max(1));
            (random_system_poly(rng, &ring, shape.n, d, shape.max_terms), mk)
        })
        .collect();
    ProblemInstance::new(boxspec, system)
}
