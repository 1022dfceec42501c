//! Sparse multivariate polynomials over an arbitrary [`Ring`].
//!
//! Terms are kept in a `BTreeMap` keyed by [`Monomial`], whose ordering is
//! graded lexicographic in the declared variable order. The canonical
//! rendering lists terms from the largest monomial down, e.g.
//! `X0^2*Y1 + 2*X1*Y1`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::ring::Ring;

/// An ordered, shared list of variable names.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Vars(Arc<[String]>);

impl Vars {
    pub fn new<I, S>(names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Vars(names.into_iter().map(Into::into).collect())
    }

    /// `prefix1, ..., prefixN`.
    pub fn indexed(prefix: &str, n: usize) -> Self {
        Self::new((1..=n).map(|i| format!("{prefix}{i}")))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    pub fn name(&self, i: usize) -> &str {
        &self.0[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.0.iter().position(|v| v == name)
    }

    fn same(&self, other: &Vars) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl fmt::Debug for Vars {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.iter()).finish()
    }
}

/// Exponent vector. Field order makes the derived `Ord` graded-lex.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Monomial {
    degree: u64,
    exps: Vec<u32>,
}

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Self {
        let degree = exps.iter().map(|&e| e as u64).sum();
        Self { degree, exps }
    }

    pub fn one(arity: usize) -> Self {
        Self::new(vec![0; arity])
    }

    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    pub fn degree(&self) -> u64 {
        self.degree
    }

    pub fn weighted_degree(&self, weights: &[u64]) -> u64 {
        self.exps
            .iter()
            .zip(weights)
            .map(|(&e, &w)| e as u64 * w)
            .sum()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial {
            degree: self.degree + other.degree,
            exps: self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect(),
        }
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct MultiPoly<E> {
    vars: Vars,
    terms: BTreeMap<Monomial, E>,
}

impl<E: Clone + PartialEq + fmt::Debug> fmt::Debug for MultiPoly<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MultiPoly")
            .field("vars", &self.vars)
            .field("terms", &self.terms)
            .finish()
    }
}

impl<E: Clone + PartialEq + fmt::Debug> MultiPoly<E> {
    pub fn zero(vars: Vars) -> Self {
        Self {
            vars,
            terms: BTreeMap::new(),
        }
    }

    /// Builds a polynomial from (exponents, coefficient) pairs, merging
    /// repeated monomials and dropping zero coefficients.
    pub fn from_terms<R, I>(vars: Vars, terms: I, ring: &R) -> Result<Self>
    where
        R: Ring<Elem = E>,
        I: IntoIterator<Item = (Vec<u32>, E)>,
    {
        let mut acc: BTreeMap<Monomial, E> = BTreeMap::new();
        for (exps, c) in terms {
            if exps.len() != vars.len() {
                return Err(Error::Usage(format!(
                    "exponent vector of length {} for {} variables",
                    exps.len(),
                    vars.len()
                )));
            }
            accumulate(&mut acc, Monomial::new(exps), c, ring);
        }
        acc.retain(|_, c| !ring.is_zero(c));
        Ok(Self { vars, terms: acc })
    }

    pub fn constant<R: Ring<Elem = E>>(vars: Vars, c: E, ring: &R) -> Self {
        let mut terms = BTreeMap::new();
        if !ring.is_zero(&c) {
            terms.insert(Monomial::one(vars.len()), c);
        }
        Self { vars, terms }
    }

    pub fn var<R: Ring<Elem = E>>(vars: Vars, idx: usize, ring: &R) -> Self {
        let mut exps = vec![0; vars.len()];
        exps[idx] = 1;
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::new(exps), ring.one());
        Self { vars, terms }
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    /// Terms in canonical order (largest monomial first).
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &E)> + ExactSizeIterator {
        self.terms.iter().rev()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exps: &[u32]) -> Option<&E> {
        self.terms.get(&Monomial::new(exps.to_vec()))
    }

    /// Total degree; the zero polynomial has degree 0.
    pub fn total_degree(&self) -> u64 {
        self.terms.keys().next_back().map_or(0, |m| m.degree)
    }

    pub fn is_constant(&self) -> bool {
        self.total_degree() == 0
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m.exps[var]).max().unwrap_or(0)
    }

    /// Max over terms of the weighted degree; weights are positional.
    pub fn weighted_degree(&self, weights: &[u64]) -> u64 {
        self.terms
            .keys()
            .map(|m| m.weighted_degree(weights))
            .max()
            .unwrap_or(0)
    }

    /// Weighted degree with weights given per variable name.
    pub fn weighted_degree_named(&self, weights: &HashMap<String, u64>) -> Result<u64> {
        let w = self
            .vars
            .names()
            .iter()
            .map(|v| {
                weights
                    .get(v)
                    .copied()
                    .ok_or_else(|| Error::Configuration(format!("no weight for variable {v}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(self.weighted_degree(&w))
    }

    /// `Some(d)` if every term has weighted degree exactly `d`.
    pub fn homogeneous_degree(&self, weights: &[u64]) -> Option<u64> {
        let mut it = self.terms.keys().map(|m| m.weighted_degree(weights));
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    fn check_vars(&self, other: &Self) {
        assert!(
            self.vars.same(&other.vars),
            "polynomial variable lists differ: {:?} vs {:?}",
            self.vars,
            other.vars
        );
    }

    pub fn add<R: Ring<Elem = E>>(&self, other: &Self, ring: &R) -> Self {
        self.check_vars(other);
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            accumulate(&mut terms, m.clone(), c.clone(), ring);
        }
        terms.retain(|_, c| !ring.is_zero(c));
        Self {
            vars: self.vars.clone(),
            terms,
        }
    }

    pub fn neg<R: Ring<Elem = E>>(&self, ring: &R) -> Self {
        Self {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), ring.neg(c)))
                .collect(),
        }
    }

    pub fn sub<R: Ring<Elem = E>>(&self, other: &Self, ring: &R) -> Self {
        self.add(&other.neg(ring), ring)
    }

    pub fn scale<R: Ring<Elem = E>>(&self, c: &E, ring: &R) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(m, a)| (m.clone(), ring.mul(a, c)))
            .filter(|(_, a)| !ring.is_zero(a))
            .collect();
        Self {
            vars: self.vars.clone(),
            terms,
        }
    }

    pub fn mul<R: Ring<Elem = E>>(&self, other: &Self, ring: &R) -> Self {
        self.check_vars(other);
        let mut acc: HashMap<Monomial, E> =
            HashMap::with_capacity(self.terms.len() * other.terms.len());
        for (ma, a) in &self.terms {
            for (mb, b) in &other.terms {
                let c = ring.mul(a, b);
                match acc.entry(ma.mul(mb)) {
                    std::collections::hash_map::Entry::Occupied(mut e) => {
                        let s = ring.add(e.get(), &c);
                        *e.get_mut() = s;
                    }
                    std::collections::hash_map::Entry::Vacant(e) => {
                        e.insert(c);
                    }
                }
            }
        }
        Self {
            vars: self.vars.clone(),
            terms: acc.into_iter().filter(|(_, c)| !ring.is_zero(c)).collect(),
        }
    }

    pub fn pow<R: Ring<Elem = E>>(&self, mut e: u64, ring: &R) -> Self {
        let mut acc = Self::constant(self.vars.clone(), ring.one(), ring);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, ring);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base, ring);
            }
        }
        acc
    }

    /// Evaluates at a positional point.
    pub fn eval<R: Ring<Elem = E>>(&self, ring: &R, point: &[E]) -> E {
        self.eval_with(ring, |c| c.clone(), point)
    }

    /// Evaluates in `target`, mapping coefficients through `coeff`.
    pub fn eval_with<R, F>(&self, target: &R, coeff: F, point: &[R::Elem]) -> R::Elem
    where
        R: Ring,
        F: Fn(&E) -> R::Elem,
    {
        assert_eq!(point.len(), self.vars.len(), "point arity mismatch");
        let mut powers: Vec<Vec<R::Elem>> = point.iter().map(|x| vec![target.one(), x.clone()]).collect();
        let mut acc = target.zero();
        for (m, c) in &self.terms {
            let mut t = coeff(c);
            for (v, &e) in m.exps.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let pw = &mut powers[v];
                while pw.len() <= e as usize {
                    let next = target.mul(pw.last().unwrap(), &pw[1]);
                    pw.push(next);
                }
                t = target.mul(&t, &pw[e as usize]);
            }
            acc = target.add(&acc, &t);
        }
        acc
    }

    /// Evaluates with values supplied by variable name.
    pub fn eval_named<R: Ring<Elem = E>>(&self, ring: &R, assignment: &HashMap<String, E>) -> Result<E> {
        let point = self
            .vars
            .names()
            .iter()
            .map(|v| {
                assignment
                    .get(v)
                    .cloned()
                    .ok_or_else(|| Error::Configuration(format!("no value for variable {v}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(self.eval(ring, &point))
    }

    /// Applies `f` to every coefficient, dropping terms that become zero.
    pub fn map_coeffs<R2, F>(&self, target: &R2, f: F) -> MultiPoly<R2::Elem>
    where
        R2: Ring,
        F: Fn(&E) -> R2::Elem,
    {
        MultiPoly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), f(c)))
                .filter(|(_, c)| !target.is_zero(c))
                .collect(),
        }
    }

    /// Rewrites every exponent vector through `f`, merging collisions.
    pub fn map_exponents<R, F>(&self, ring: &R, f: F) -> Self
    where
        R: Ring<Elem = E>,
        F: Fn(&[u32]) -> Vec<u32>,
    {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            accumulate(&mut terms, Monomial::new(f(&m.exps)), c.clone(), ring);
        }
        terms.retain(|_, c| !ring.is_zero(c));
        Self {
            vars: self.vars.clone(),
            terms,
        }
    }

    /// Replaces every positive exponent e by ((e - 1) mod (q - 1)) + 1, which
    /// leaves the induced function on F_q^n unchanged.
    pub fn reduce_exponents<R: Ring<Elem = E>>(&self, q: u64, ring: &R) -> Self {
        let qm1 = (q - 1) as u32;
        self.map_exponents(ring, |exps| {
            exps.iter()
                .map(|&e| if e == 0 { 0 } else { (e - 1) % qm1 + 1 })
                .collect()
        })
    }

    /// True when every variable exponent is at most `q - 1`.
    pub fn is_reduced(&self, q: u64) -> bool {
        self.terms
            .keys()
            .all(|m| m.exps.iter().all(|&e| (e as u64) < q))
    }

    /// Re-expresses the polynomial over `vars`, matching variables by name.
    /// Variables absent from `vars` must not occur in any term.
    pub fn with_vars(&self, vars: &Vars) -> Result<Self> {
        let mut map = Vec::with_capacity(self.vars.len());
        for (i, name) in self.vars.names().iter().enumerate() {
            match vars.index_of(name) {
                Some(j) => map.push(Some(j)),
                None if self.degree_in(i) == 0 => map.push(None),
                None => {
                    return Err(Error::Usage(format!(
                        "variable {name} does not exist in the target variable list"
                    )))
                }
            }
        }
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut exps = vec![0u32; vars.len()];
                for (i, &e) in m.exps.iter().enumerate() {
                    if let Some(j) = map[i] {
                        exps[j] = e;
                    }
                }
                (Monomial::new(exps), c.clone())
            })
            .collect();
        Ok(Self {
            vars: vars.clone(),
            terms,
        })
    }

    /// Replaces the variable names positionally.
    pub fn rename(&self, vars: &Vars) -> Result<Self> {
        if vars.len() != self.vars.len() {
            return Err(Error::Usage("rename with a different number of variables".into()));
        }
        Ok(Self {
            vars: vars.clone(),
            terms: self.terms.clone(),
        })
    }

    /// Substitutes `value` for variable `var` and removes it from the list.
    pub fn specialize<R: Ring<Elem = E>>(&self, var: usize, value: &E, ring: &R) -> Self {
        let vars = Vars::new(
            self.vars
                .names()
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != var)
                .map(|(_, v)| v.clone()),
        );
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = m.exps[var];
            let c = ring.mul(c, &ring.pow(value, e as u64));
            let mut exps = m.exps.clone();
            exps.remove(var);
            accumulate(&mut terms, Monomial::new(exps), c, ring);
        }
        terms.retain(|_, c| !ring.is_zero(c));
        Self { vars, terms }
    }

    /// Canonical text: largest monomial first, explicit `*` and `^`.
    pub fn render<R: Ring<Elem = E>>(&self, ring: &R) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, (m, c)) in self.terms().enumerate() {
            let term = render_term(&self.vars, m, c, ring);
            if k == 0 {
                out.push_str(&term);
            } else if let Some(rest) = term.strip_prefix('-') {
                out.push_str(" - ");
                out.push_str(rest);
            } else {
                out.push_str(" + ");
                out.push_str(&term);
            }
        }
        out
    }
}

impl MultiPoly<BigInt> {
    /// Divides every coefficient by `c`, failing if any division is inexact.
    pub fn int_divide_exact(&self, c: &BigInt) -> Result<Self> {
        if c.is_zero() {
            return Err(Error::Domain("division by zero".into()));
        }
        let mut terms = BTreeMap::new();
        for (m, a) in &self.terms {
            let (quo, rem) = a.div_rem(c);
            if !rem.is_zero() {
                return Err(Error::InexactDivision(format!(
                    "coefficient {a} is not divisible by {c}"
                )));
            }
            terms.insert(m.clone(), quo);
        }
        Ok(Self {
            vars: self.vars.clone(),
            terms,
        })
    }
}

fn accumulate<R: Ring>(terms: &mut BTreeMap<Monomial, R::Elem>, m: Monomial, c: R::Elem, ring: &R) {
    match terms.entry(m) {
        std::collections::btree_map::Entry::Occupied(mut e) => {
            let s = ring.add(e.get(), &c);
            *e.get_mut() = s;
        }
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(c);
        }
    }
}

fn render_term<R: Ring>(vars: &Vars, m: &Monomial, c: &R::Elem, ring: &R) -> String {
    let mono: Vec<String> = m
        .exps
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(i, &e)| {
            if e == 1 {
                vars.name(i).to_string()
            } else {
                format!("{}^{}", vars.name(i), e)
            }
        })
        .collect();
    let coeff = ring.render(c);
    if mono.is_empty() {
        return if ring.render_is_compound(c) {
            format!("({coeff})")
        } else {
            coeff
        };
    }
    let mono = mono.join("*");
    if ring.is_one(c) {
        mono
    } else if coeff == "-1" {
        format!("-{mono}")
    } else if ring.render_is_compound(c) {
        format!("({coeff})*{mono}")
    } else {
        format!("{coeff}*{mono}")
    }
}
