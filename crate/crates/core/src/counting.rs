//! Exhaustive zero counting for congruence systems over a box.

use std::fmt;
use std::ops::Range;

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;

use crate::boxes::{BoxPoint, BoxSpec};
use crate::error::{Error, Result};
use crate::fq::{Fq, FqElem};
use crate::galois::{DigitVec, GRElem, GaloisRing, Valuation};
use crate::poly::{MultiPoly, Vars};
use crate::ring::{Integers, Ring};

pub const DEFAULT_BUDGET: u128 = 1 << 24;

/// (exponent vector, Teichmüller digits of the coefficient) pairs.
pub type DigitTerms = Vec<(Vec<u32>, DigitVec)>;

/// f_k together with its modulus exponent m_k.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Congruence {
    pub poly: MultiPoly<GRElem>,
    pub modulus: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProblemInstance {
    ring: GaloisRing,
    boxspec: BoxSpec,
    system: Vec<Congruence>,
}

/// Variables x1..xn of the system polynomials.
pub fn system_vars(n: usize) -> Vars {
    Vars::indexed("x", n)
}

impl ProblemInstance {
    /// System with coefficients already in GR(p^M', h), M' = max m_k.
    /// Polynomials may use any subset of x1..xn.
    pub fn new(boxspec: BoxSpec, system: Vec<(MultiPoly<GRElem>, u32)>) -> Result<Self> {
        if system.is_empty() {
            return Err(Error::Validation("the system has no congruences".into()));
        }
        let precision = system.iter().map(|(_, m)| *m).max().unwrap_or(1);
        if let Some((_, m)) = system.iter().find(|(_, m)| *m == 0) {
            return Err(Error::Validation(format!("modulus exponent {m} must be at least 1")));
        }
        let ring = GaloisRing::new(boxspec.field().clone(), precision)?;
        let vars = system_vars(boxspec.n());
        let mut congruences = Vec::with_capacity(system.len());
        for (k, (f, m)) in system.into_iter().enumerate() {
            let f = f.with_vars(&vars).map_err(|_| {
                Error::Validation(format!("f{} uses variables outside x1..x{}", k + 1, vars.len()))
            })?;
            let f = f.map_coeffs(&ring, |c| reduce_coeff(&ring, c));
            if f.is_constant() {
                return Err(Error::Validation(format!(
                    "f{} is constant modulo p^{precision}",
                    k + 1
                )));
            }
            congruences.push(Congruence { poly: f, modulus: m });
        }
        congruences.sort_by_key(|c| c.modulus);
        Ok(Self {
            ring,
            boxspec,
            system: congruences,
        })
    }

    /// System with integer coefficients, embedded via c -> c mod p^M'.
    pub fn from_integer_system(boxspec: BoxSpec, system: Vec<(MultiPoly<BigInt>, u32)>) -> Result<Self> {
        let precision = system.iter().map(|(_, m)| *m).max().unwrap_or(1).max(1);
        let ring = GaloisRing::new(boxspec.field().clone(), precision)?;
        let mapped = system
            .into_iter()
            .map(|(f, m)| (f.map_coeffs(&ring, |c| ring.from_int(c)), m))
            .collect();
        Self::new(boxspec, mapped)
    }

    /// System whose coefficients are given by Teichmüller digits; each
    /// digit vector must have length M' = max m_k.
    pub fn from_digit_system(boxspec: BoxSpec, system: Vec<(DigitTerms, u32)>) -> Result<Self> {
        let precision = system.iter().map(|(_, m)| *m).max().unwrap_or(1).max(1);
        let ring = GaloisRing::new(boxspec.field().clone(), precision)?;
        let vars = system_vars(boxspec.n());
        let mut mapped = Vec::with_capacity(system.len());
        for (terms, m) in system {
            let terms = terms
                .into_iter()
                .map(|(e, d)| Ok((e, ring.from_digits(&d)?)))
                .collect::<Result<Vec<_>>>()?;
            mapped.push((MultiPoly::from_terms(vars.clone(), terms, &ring)?, m));
        }
        Self::new(boxspec, mapped)
    }

    /// GR(p^M', h) with M' = max m_k.
    pub fn ring(&self) -> &GaloisRing {
        &self.ring
    }

    pub fn field(&self) -> &Fq {
        self.boxspec.field()
    }

    pub fn boxspec(&self) -> &BoxSpec {
        &self.boxspec
    }

    /// Congruences sorted by ascending modulus.
    pub fn system(&self) -> &[Congruence] {
        &self.system
    }

    pub fn n(&self) -> usize {
        self.boxspec.n()
    }

    pub fn m(&self) -> usize {
        self.boxspec.m()
    }

    /// M' = max m_k.
    pub fn precision(&self) -> u32 {
        self.ring.precision()
    }

    pub fn degrees(&self) -> Vec<u64> {
        self.system.iter().map(|c| c.poly.total_degree()).collect()
    }

    pub fn moduli(&self) -> Vec<u32> {
        self.system.iter().map(|c| c.modulus).collect()
    }

    /// The same system over another box with the same n and field.
    pub fn with_box(&self, boxspec: BoxSpec) -> Result<Self> {
        if boxspec.n() != self.n() || boxspec.field() != self.field() {
            return Err(Error::Validation("replacement box has a different shape".into()));
        }
        Self::new(
            boxspec,
            self.system.iter().map(|c| (c.poly.clone(), c.modulus)).collect(),
        )
    }

    /// The same polynomials with new modulus exponents, given in the
    /// current (sorted) order.
    pub fn with_moduli(&self, moduli: &[u32]) -> Result<Self> {
        if moduli.len() != self.system.len() {
            return Err(Error::Validation("one modulus per congruence is required".into()));
        }
        let top = moduli.iter().copied().max().unwrap_or(1).max(1);
        let ring = GaloisRing::new(self.field().clone(), top)?;
        let lifted = self
            .system
            .iter()
            .zip(moduli)
            .map(|(c, &m)| {
                let poly = c.poly.map_coeffs(&ring, |a| self.recast(a, &ring));
                (poly, m)
            })
            .collect();
        Self::new(self.boxspec.clone(), lifted)
    }

    fn recast(&self, a: &GRElem, target: &GaloisRing) -> GRElem {
        if target.precision() <= self.ring.precision() {
            self.ring.truncate(a, target)
        } else {
            GRElem(a.0.clone())
        }
    }

    /// Integer-coefficient rendering of f_k where possible, else GR form.
    pub fn render_congruence(&self, k: usize) -> String {
        let c = &self.system[k];
        format!("{} mod p^{}", c.poly.render(&self.ring), c.modulus)
    }
}

fn reduce_coeff(ring: &GaloisRing, c: &GRElem) -> GRElem {
    GRElem(c.0.iter().map(|&x| x % ring.characteristic()).collect())
}

/// Residues f_k(Y) in GR(p^{m_k}, h) at a point enumerated at precision M'.
/// This is the straightforward path: digits to ring elements, then generic
/// polynomial evaluation.
pub fn evaluate_point(inst: &ProblemInstance, pt: &BoxPoint) -> Result<Vec<GRElem>> {
    let coords = pt.coordinates(&inst.ring)?;
    inst.system
        .iter()
        .map(|c| {
            let full = c.poly.eval(&inst.ring, &coords);
            let target = inst.ring.with_precision(c.modulus)?;
            Ok(inst.ring.truncate(&full, &target))
        })
        .collect()
}

/// Whether every residue vanishes, by the straightforward path.
pub fn is_zero_point(inst: &ProblemInstance, pt: &BoxPoint) -> Result<bool> {
    let coords = pt.coordinates(&inst.ring)?;
    Ok(inst.system.iter().all(|c| {
        inst.ring
            .divisible_by_p_pow(&c.poly.eval(&inst.ring, &coords), c.modulus)
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CountConfig {
    /// Largest q^(nm) that will be enumerated.
    pub budget: u128,
    /// Number of contiguous ranges; 0 picks the rayon thread count.
    pub partitions: usize,
}

impl Default for CountConfig {
    fn default() -> Self {
        Self {
            budget: DEFAULT_BUDGET,
            partitions: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountReport {
    pub cardinality: u64,
    pub ord_p: Valuation,
    pub h: usize,
}

impl CountReport {
    pub fn new(cardinality: u64, p: u64, h: usize) -> Self {
        Self {
            cardinality,
            ord_p: Valuation::of_integer(cardinality as u128, p),
            h,
        }
    }

    /// ord_q = ord_p / h, or None for an empty set.
    pub fn ord_q(&self) -> Option<BigRational> {
        match self.ord_p {
            Valuation::Finite(e) => Some(BigRational::new(e.into(), (self.h as u64).into())),
            Valuation::Infinite => None,
        }
    }

    /// `<ord_p>/<h>` or `inf`.
    pub fn ord_q_text(&self) -> String {
        match self.ord_p {
            Valuation::Finite(e) => format!("{e}/{}", self.h),
            Valuation::Infinite => "inf".into(),
        }
    }

    /// `key=value` report lines.
    pub fn lines(&self) -> Vec<String> {
        vec![
            format!("cardinality={}", self.cardinality),
            format!("ord_p={}", self.ord_p),
            format!("ord_q={}", self.ord_q_text()),
        ]
    }
}

impl fmt::Display for CountReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.lines().join("\n"))
    }
}

/// Sparse polynomial flattened for repeated evaluation.
struct Compiled<E> {
    terms: Vec<(Vec<(usize, u64)>, E)>,
}

impl<E: Clone + PartialEq + fmt::Debug> Compiled<E> {
    fn new(poly: &MultiPoly<E>) -> Self {
        let terms = poly
            .terms()
            .map(|(mono, c)| {
                let factors = mono
                    .exps()
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(v, &e)| (v, e as u64))
                    .collect();
                (factors, c.clone())
            })
            .collect();
        Self { terms }
    }

    fn eval<R: Ring<Elem = E>>(&self, ring: &R, point: &[E]) -> E {
        self.terms.iter().fold(ring.zero(), |acc, (factors, c)| {
            let t = factors
                .iter()
                .fold(c.clone(), |t, &(v, e)| ring.mul(&t, &ring.pow(&point[v], e)));
            ring.add(&acc, &t)
        })
    }
}

/// Evaluation kernel for `count_zeros`: generators compiled once, digits
/// turned into ring elements through a table of tau(a) * p^i.
struct Kernel<'a> {
    inst: &'a ProblemInstance,
    generators: Vec<Vec<Option<Compiled<FqElem>>>>,
    digit_table: Vec<Vec<GRElem>>,
    system: Vec<(Compiled<GRElem>, u32)>,
}

impl<'a> Kernel<'a> {
    fn new(inst: &'a ProblemInstance) -> Self {
        let b = &inst.boxspec;
        let precision = inst.precision() as usize;
        let generators = (b.m()..precision.max(b.m()))
            .map(|i| {
                (1..=b.n())
                    .map(|j| b.generators().get(&(i, j)).map(Compiled::new))
                    .collect()
            })
            .collect();
        let field = b.field();
        let digit_table = (0..precision)
            .map(|i| {
                field
                    .elements()
                    .map(|a| inst.ring.mul_p_pow(&inst.ring.teichmuller_lift(&a), i as u32))
                    .collect()
            })
            .collect();
        let system = inst
            .system
            .iter()
            .map(|c| (Compiled::new(&c.poly), c.modulus))
            .collect();
        Self {
            inst,
            generators,
            digit_table,
            system,
        }
    }

    fn is_zero(&self, index: u64) -> bool {
        let b = &self.inst.boxspec;
        let field = b.field();
        let ring = &self.inst.ring;
        let base = b.base_point(index);
        let precision = self.digit_table.len();
        let coords: Vec<GRElem> = (1..=b.n())
            .map(|j| {
                (0..precision).fold(ring.zero(), |acc, i| {
                    let digit = if i < b.m() {
                        field.index(&base[b.var_index(i, j)])
                    } else {
                        match &self.generators[i - b.m()][j - 1] {
                            Some(g) => field.index(&g.eval(field, &base)),
                            None => 0,
                        }
                    };
                    if digit == 0 {
                        acc
                    } else {
                        ring.add(&acc, &self.digit_table[i][digit as usize])
                    }
                })
            })
            .collect();
        self.system
            .iter()
            .all(|(f, m)| ring.divisible_by_p_pow(&f.eval(ring, &coords), *m))
    }

    fn count(&self, range: Range<u64>) -> u64 {
        range.filter(|&k| self.is_zero(k)).count() as u64
    }
}

fn split_ranges(size: u64, parts: usize) -> Vec<Range<u64>> {
    let parts = (parts.max(1) as u64).min(size.max(1));
    let chunk = size / parts;
    let extra = size % parts;
    let mut start = 0;
    (0..parts)
        .map(|k| {
            let len = chunk + u64::from(k < extra);
            let r = start..start + len;
            start += len;
            r
        })
        .collect()
}

/// |V| and its valuations. Refuses when q^(nm) exceeds the budget.
pub fn count_zeros(inst: &ProblemInstance, config: &CountConfig) -> Result<CountReport> {
    let b = &inst.boxspec;
    let needed = (b.field().q() as u128)
        .checked_pow((b.n() * b.m()) as u32)
        .unwrap_or(u128::MAX);
    if needed > config.budget {
        return Err(Error::BudgetExceeded {
            what: "box enumeration",
            needed,
            budget: config.budget,
        });
    }
    let size = needed as u64;
    let parts = if config.partitions == 0 {
        rayon::current_num_threads()
    } else {
        config.partitions
    };
    let kernel = Kernel::new(inst);
    let total: u64 = split_ranges(size, parts)
        .into_par_iter()
        .map(|r| kernel.count(r))
        .sum();
    Ok(CountReport::new(total, b.field().p(), b.field().h()))
}

/// Single-threaded count over `points`, by the straightforward path. When
/// M' < m the points are enumerated at depth m and read mod p^M'.
pub fn count_zeros_naive(inst: &ProblemInstance) -> Result<CountReport> {
    let precision = inst.precision() as usize;
    let mut total = 0u64;
    for mut pt in inst.boxspec.points(precision.max(inst.m()))? {
        for d in &mut pt.expansion {
            d.0.truncate(precision);
        }
        if is_zero_point(inst, &pt)? {
            total += 1;
        }
    }
    Ok(CountReport::new(total, inst.field().p(), inst.field().h()))
}

/// Integer polynomial in x1..xn parsed from text.
pub fn integer_poly(text: &str, n: usize) -> Result<MultiPoly<BigInt>> {
    crate::expr::parse_poly(text, &system_vars(n))
}

/// Renders an integer polynomial in x1..xn.
pub fn render_integer_poly(f: &MultiPoly<BigInt>) -> String {
    f.render(&Integers)
}
