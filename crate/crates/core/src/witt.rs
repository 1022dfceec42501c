//! Universal p-typical Witt polynomials.
//!
//! `witt_op_polys` produces the r-fold sum polynomials S_n^(r) or product
//! polynomials M_n^(r) straight from the ghost recursion
//!
//! ```text
//! P_n = (Phi(w_n(X_1), ..., w_n(X_r)) - sum_{i<n} p^i P_i^(p^(n-i))) / p^n
//! ```
//!
//! where Phi is the sum or the product. The division must be exact; a
//! remainder means the arithmetic is broken and is reported as an error.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::fq::is_prime;
use crate::poly::{MultiPoly, Vars};
use crate::ring::{Integers, Ring};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WittOp {
    Sum,
    Product,
}

impl WittOp {
    /// `S` or `M`.
    pub fn symbol(self) -> &'static str {
        match self {
            WittOp::Sum => "S",
            WittOp::Product => "M",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct WittGenRequest {
    pub p: u64,
    pub n: usize,
    pub r: usize,
    pub kind: WittOp,
}

impl WittGenRequest {
    pub fn new(p: u64, n: usize, r: usize, kind: WittOp) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidParams(format!("p = {p} is not prime")));
        }
        if r < 2 {
            return Err(Error::InvalidParams(format!("fold count r = {r} must be at least 2")));
        }
        Ok(Self { p, n, r, kind })
    }
}

/// Name of digit variable (level i, operand j), j starting at 1. Binary
/// operations use `Xi`/`Yi`; wider folds use `x[i][j]`.
pub fn witt_var_name(i: usize, j: usize, r: usize) -> String {
    if r == 2 {
        format!("{}{}", if j == 1 { "X" } else { "Y" }, i)
    } else {
        format!("x[{i}][{j}]")
    }
}

/// Variables x_{ij}, i in [0, n], j in [1, r], ordered by (i, j).
pub fn witt_vars(n: usize, r: usize) -> Vars {
    Vars::new((0..=n).flat_map(|i| (1..=r).map(move |j| witt_var_name(i, j, r))))
}

/// Position of x_{ij} in [`witt_vars`].
pub fn witt_var_index(i: usize, j: usize, r: usize) -> usize {
    i * r + (j - 1)
}

fn big_pow(p: u64, e: usize) -> BigInt {
    num_traits::pow(BigInt::from(p), e)
}

/// w_k = sum_{i<=k} p^i X_i^(p^(k-i)) in variables X_0..X_k.
pub fn witt_poly(k: usize, p: u64) -> MultiPoly<BigInt> {
    let vars = Vars::new((0..=k).map(|i| format!("X{i}")));
    let terms = (0..=k).map(|i| {
        let mut exps = vec![0u32; k + 1];
        exps[i] = p.pow((k - i) as u32) as u32;
        (exps, big_pow(p, i))
    });
    MultiPoly::from_terms(vars, terms, &Integers).expect("arity matches")
}

/// Ghost component w_k of operand j inside the (n, r) variable set.
fn ghost_component(vars: &Vars, p: u64, k: usize, j: usize, r: usize) -> MultiPoly<BigInt> {
    let terms = (0..=k).map(|i| {
        let mut exps = vec![0u32; vars.len()];
        exps[witt_var_index(i, j, r)] = p.pow((k - i) as u32) as u32;
        (exps, big_pow(p, i))
    });
    MultiPoly::from_terms(vars.clone(), terms, &Integers).expect("arity matches")
}

fn ghost_combination(req: &WittGenRequest, vars: &Vars, k: usize) -> MultiPoly<BigInt> {
    let z = Integers;
    let comps = (1..=req.r).map(|j| ghost_component(vars, req.p, k, j, req.r));
    match req.kind {
        WittOp::Sum => comps.fold(MultiPoly::zero(vars.clone()), |acc, c| acc.add(&c, &z)),
        WittOp::Product => comps.fold(MultiPoly::constant(vars.clone(), BigInt::one(), &z), |acc, c| {
            acc.mul(&c, &z)
        }),
    }
}

fn generate(req: &WittGenRequest) -> Result<Vec<MultiPoly<BigInt>>> {
    let z = Integers;
    let vars = witt_vars(req.n, req.r);
    let mut out: Vec<MultiPoly<BigInt>> = Vec::with_capacity(req.n + 1);
    // powered[i] = P_i^(p^(level - i)), raised by p as the level advances
    let mut powered: Vec<MultiPoly<BigInt>> = Vec::with_capacity(req.n + 1);
    for level in 0..=req.n {
        for pw in powered.iter_mut() {
            *pw = pw.pow(req.p, &z);
        }
        let mut rhs = ghost_combination(req, &vars, level);
        for (i, pw) in powered.iter().enumerate() {
            rhs = rhs.sub(&pw.scale(&big_pow(req.p, i), &z), &z);
        }
        let next = rhs.int_divide_exact(&big_pow(req.p, level)).map_err(|e| {
            Error::InexactDivision(format!(
                "Witt recursion for {}_{level}^({}) with p = {}: {e}",
                req.kind.symbol(),
                req.r,
                req.p
            ))
        })?;
        powered.push(next.clone());
        out.push(next);
    }
    Ok(out)
}

type CacheKey = (u64, usize, usize, WittOp);
type Cache = Mutex<HashMap<CacheKey, Arc<Vec<MultiPoly<BigInt>>>>>;

fn cache() -> &'static Cache {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// [P_0^(r), ..., P_n^(r)], all expressed over [`witt_vars`]`(n, r)`.
/// Results are memoized per request; the first stored value wins.
pub fn witt_op_polys(req: &WittGenRequest) -> Result<Arc<Vec<MultiPoly<BigInt>>>> {
    let key = (req.p, req.n, req.r, req.kind);
    if let Some(hit) = cache().lock().expect("cache lock").get(&key) {
        return Ok(Arc::clone(hit));
    }
    let fresh = Arc::new(generate(req)?);
    let mut guard = cache().lock().expect("cache lock");
    Ok(Arc::clone(guard.entry(key).or_insert(fresh)))
}

/// Applies x_{ij} -> x_{ij}^(p^i) to the output of [`witt_op_polys`],
/// giving the digit-level polynomials s_n^(r) / m_n^(r).
pub fn twisted_digit_polys(req: &WittGenRequest) -> Result<Vec<MultiPoly<BigInt>>> {
    let polys = witt_op_polys(req)?;
    let scale: Vec<u32> = (0..=req.n)
        .flat_map(|i| std::iter::repeat_n(req.p.pow(i as u32) as u32, req.r))
        .collect();
    Ok(polys
        .iter()
        .map(|f| {
            f.map_exponents(&Integers, |exps| {
                exps.iter().zip(&scale).map(|(&e, &s)| e * s).collect()
            })
        })
        .collect())
}

/// Checks w_k(P_0, ..., P_k) = Phi(w_k(X_1), ..., w_k(X_r)) for every k.
pub fn ghost_check_polys(req: &WittGenRequest, polys: &[MultiPoly<BigInt>]) -> bool {
    let z = Integers;
    let vars = witt_vars(req.n, req.r);
    if polys.len() != req.n + 1 || polys.iter().any(|f| f.vars() != &vars) {
        return false;
    }
    (0..=req.n).all(|k| {
        let lhs = (0..=k).fold(MultiPoly::zero(vars.clone()), |acc, i| {
            let term = polys[i]
                .pow(req.p.pow((k - i) as u32), &z)
                .scale(&big_pow(req.p, i), &z);
            acc.add(&term, &z)
        });
        lhs == ghost_combination(req, &vars, k)
    })
}

/// Generates the polynomials for `req` and verifies the ghost identities.
pub fn ghost_check(req: &WittGenRequest) -> bool {
    match witt_op_polys(req) {
        Ok(polys) => ghost_check_polys(req, &polys),
        Err(_) => false,
    }
}

/// Evaluates a Witt polynomial in any ring, mapping integer coefficients
/// through the canonical map.
pub fn eval_in<R: Ring>(poly: &MultiPoly<BigInt>, ring: &R, point: &[R::Elem]) -> R::Elem {
    poly.eval_with(ring, |c| ring.from_int(c), point)
}
