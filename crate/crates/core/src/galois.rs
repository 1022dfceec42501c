//! The Galois ring GR(p^M, h) = (Z/p^M)[t]/(phi), i.e. Z_q truncated at
//! precision M, together with its Teichmüller digit structure.
//!
//! Two arithmetic paths exist side by side: direct polynomial arithmetic
//! through the [`Ring`] impl, and Witt-vector arithmetic on Teichmüller digits
//! through [`GaloisRing::witt_digit_op`]. They must agree everywhere.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::fq::{render_t_poly, Fq, FqElem};
use crate::residue::{self, Coeffs};
use crate::ring::{bigint_mod_u64, Ring};
use crate::witt::{self, WittGenRequest, WittOp};

/// An element of GR(p^M, h): h coefficients in [0, p^M).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GRElem(pub(crate) Coeffs);

impl GRElem {
    pub fn coeffs(&self) -> &[u64] {
        &self.0
    }
}

impl fmt::Debug for GRElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GRElem{:?}", self.0.as_slice())
    }
}

/// Teichmüller digits (a_0, ..., a_{M-1}) standing for sum tau(a_i) p^i.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DigitVec(pub Vec<FqElem>);

impl DigitVec {
    pub fn digits(&self) -> &[FqElem] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Additive p-adic valuation at finite precision; `Infinite` stands for
/// "divisible by every power of p representable here", i.e. zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Valuation {
    Finite(u32),
    Infinite,
}

impl Valuation {
    pub fn is_infinite(self) -> bool {
        matches!(self, Valuation::Infinite)
    }

    /// Whether the valuation is at least `e`.
    pub fn at_least(self, e: u64) -> bool {
        match self {
            Valuation::Finite(v) => v as u64 >= e,
            Valuation::Infinite => true,
        }
    }

    /// Valuation of a nonnegative integer; zero maps to `Infinite`.
    pub fn of_integer(mut n: u128, p: u64) -> Self {
        if n == 0 {
            return Valuation::Infinite;
        }
        let mut v = 0;
        while n.is_multiple_of(p as u128) {
            n /= p as u128;
            v += 1;
        }
        Valuation::Finite(v)
    }
}

impl PartialOrd for Valuation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Valuation {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Valuation::Infinite, Valuation::Infinite) => Ordering::Equal,
            (Valuation::Infinite, _) => Ordering::Greater,
            (_, Valuation::Infinite) => Ordering::Less,
            (Valuation::Finite(a), Valuation::Finite(b)) => a.cmp(b),
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => f.write_str("inf"),
        }
    }
}

/// Arithmetic context for GR(p^M, h). The modulus is the F_q modulus with
/// its coefficients read in [0, p) inside Z/p^M.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GaloisRing {
    field: Fq,
    precision: u32,
    modulus: u64,
    phi: Vec<u64>,
}

impl GaloisRing {
    pub fn new(field: Fq, precision: u32) -> Result<Self> {
        if precision == 0 {
            return Err(Error::InvalidParams("precision M must be at least 1".into()));
        }
        let modulus = field
            .p()
            .checked_pow(precision)
            .filter(|&n| n < 1 << 62)
            .ok_or_else(|| {
                Error::InvalidParams(format!("p^M = {}^{precision} is too large", field.p()))
            })?;
        let phi = field.params().modulus().to_vec();
        Ok(Self {
            field,
            precision,
            modulus,
            phi,
        })
    }

    pub fn field(&self) -> &Fq {
        &self.field
    }

    pub fn p(&self) -> u64 {
        self.field.p()
    }

    pub fn h(&self) -> usize {
        self.field.h()
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    /// The characteristic p^M.
    pub fn characteristic(&self) -> u64 {
        self.modulus
    }

    /// |GR(p^M, h)| = q^M, if it fits.
    pub fn cardinality(&self) -> Option<u64> {
        self.modulus.checked_pow(self.h() as u32)
    }

    pub fn with_precision(&self, precision: u32) -> Result<Self> {
        Self::new(self.field.clone(), precision)
    }

    /// Builds an element from up to h integer coefficients, reducing mod p^M.
    pub fn elem(&self, coeffs: &[i64]) -> Result<GRElem> {
        if coeffs.len() > self.h() {
            return Err(Error::Usage(format!(
                "{} coefficients given for GR(p^M, {})",
                coeffs.len(),
                self.h()
            )));
        }
        let n = self.modulus as i128;
        let mut v: Coeffs = coeffs
            .iter()
            .map(|&c| (c as i128).rem_euclid(n) as u64)
            .collect();
        v.resize(self.h(), 0);
        Ok(GRElem(v))
    }

    /// Embeds an integer: c mod p^M in the prime subring.
    pub fn int_to_gr(&self, c: i64) -> GRElem {
        self.from_int(&BigInt::from(c))
    }

    /// Element with index `i`: coefficients are the base-p^M digits of `i`.
    pub fn element(&self, mut index: u64) -> GRElem {
        let n = self.modulus;
        GRElem(
            (0..self.h())
                .map(|_| {
                    let c = index % n;
                    index /= n;
                    c
                })
                .collect(),
        )
    }

    /// All elements in index order. Panics if q^M overflows u64.
    pub fn elements(&self) -> impl Iterator<Item = GRElem> + '_ {
        let card = self.cardinality().expect("ring too large to enumerate");
        (0..card).map(move |i| self.element(i))
    }

    /// Reduction to the precision of `target` (which must not exceed ours).
    pub fn truncate(&self, a: &GRElem, target: &GaloisRing) -> GRElem {
        debug_assert!(target.precision <= self.precision);
        GRElem(a.0.iter().map(|&c| c % target.modulus).collect())
    }

    /// Coefficient-wise lift of a field element into [0, p).
    pub fn naive_lift(&self, a: &FqElem) -> GRElem {
        GRElem(a.coeffs().iter().copied().collect())
    }

    pub fn reduce_mod_p(&self, a: &GRElem) -> FqElem {
        FqElem(a.0.iter().map(|&c| c % self.p()).collect())
    }

    /// p^i * a.
    pub fn mul_p_pow(&self, a: &GRElem, i: u32) -> GRElem {
        if i >= self.precision {
            return self.zero();
        }
        let s = self.p().pow(i);
        GRElem(a.0.iter().map(|&c| residue::mulmod(c, s, self.modulus)).collect())
    }

    /// The Teichmüller representative: starting from the naive lift, apply
    /// z -> z^q exactly M - 1 times. Each step gains one p-adic digit.
    pub fn teichmuller_lift(&self, a: &FqElem) -> GRElem {
        let q = self.field.q();
        (1..self.precision).fold(self.naive_lift(a), |z, _| self.pow(&z, q))
    }

    /// Teichmüller digits of `y`: a_0 = y mod p, then recurse on
    /// (y - tau(a_0)) / p.
    pub fn to_digits(&self, y: &GRElem) -> DigitVec {
        let mut cur = y.clone();
        let mut digits = Vec::with_capacity(self.precision as usize);
        for _ in 0..self.precision {
            let a = self.reduce_mod_p(&cur);
            let diff = self.sub(&cur, &self.teichmuller_lift(&a));
            debug_assert!(diff.0.iter().all(|&c| c % self.p() == 0));
            cur = GRElem(diff.0.iter().map(|&c| c / self.p()).collect());
            digits.push(a);
        }
        DigitVec(digits)
    }

    /// sum_i tau(d_i) p^i.
    pub fn from_digits(&self, d: &DigitVec) -> Result<GRElem> {
        if d.len() != self.precision as usize {
            return Err(Error::Usage(format!(
                "digit vector of length {} at precision {}",
                d.len(),
                self.precision
            )));
        }
        Ok(d.0.iter().enumerate().fold(self.zero(), |acc, (i, a)| {
            self.add(&acc, &self.mul_p_pow(&self.teichmuller_lift(a), i as u32))
        }))
    }

    /// ord_p(y): the largest e < M with p^e dividing every coefficient.
    pub fn ord_p(&self, y: &GRElem) -> Valuation {
        y.0.iter()
            .map(|&c| Valuation::of_integer(c as u128, self.p()))
            .min()
            .unwrap_or(Valuation::Infinite)
    }

    /// Whether y lies in p^e GR; for e >= M that ideal is zero.
    pub fn divisible_by_p_pow(&self, y: &GRElem, e: u32) -> bool {
        if e >= self.precision {
            return y.0.iter().all(|&c| c == 0);
        }
        let d = self.p().pow(e);
        y.0.iter().all(|&c| c % d == 0)
    }

    /// Adds or multiplies two elements given by Teichmüller digits, through
    /// the Witt polynomials. Digit i maps to the Witt coordinate a_i^(p^i);
    /// result coordinates are untwisted by the i-fold inverse Frobenius.
    pub fn witt_digit_op(&self, a: &DigitVec, b: &DigitVec, kind: WittOp) -> Result<DigitVec> {
        let m = self.precision as usize;
        if a.len() != m || b.len() != m {
            return Err(Error::Usage(format!(
                "digit vectors of lengths {} and {} at precision {m}",
                a.len(),
                b.len()
            )));
        }
        let f = &self.field;
        let req = WittGenRequest::new(self.p(), m - 1, 2, kind)?;
        let polys = witt::witt_op_polys(&req)?;
        let mut point = Vec::with_capacity(2 * m);
        for i in 0..m {
            point.push(f.frobenius(&a.0[i], i as u64));
            point.push(f.frobenius(&b.0[i], i as u64));
        }
        Ok(DigitVec(
            polys
                .iter()
                .enumerate()
                .map(|(i, poly)| f.frobenius_inverse(&witt::eval_in(poly, f, &point), i as u64))
                .collect(),
        ))
    }
}

impl Ring for GaloisRing {
    type Elem = GRElem;

    fn zero(&self) -> GRElem {
        GRElem(smallvec::smallvec![0; self.h()])
    }

    fn one(&self) -> GRElem {
        let mut v: Coeffs = smallvec::smallvec![0; self.h()];
        v[0] = 1 % self.modulus;
        GRElem(v)
    }

    fn add(&self, a: &GRElem, b: &GRElem) -> GRElem {
        GRElem(residue::add(&a.0, &b.0, self.modulus))
    }

    fn sub(&self, a: &GRElem, b: &GRElem) -> GRElem {
        GRElem(residue::sub(&a.0, &b.0, self.modulus))
    }

    fn neg(&self, a: &GRElem) -> GRElem {
        GRElem(residue::neg(&a.0, self.modulus))
    }

    fn mul(&self, a: &GRElem, b: &GRElem) -> GRElem {
        GRElem(residue::mul(&a.0, &b.0, &self.phi, self.modulus))
    }

    fn is_zero(&self, a: &GRElem) -> bool {
        a.0.iter().all(|&c| c == 0)
    }

    fn from_int(&self, c: &BigInt) -> GRElem {
        let mut v: Coeffs = smallvec::smallvec![0; self.h()];
        v[0] = bigint_mod_u64(c, self.modulus);
        GRElem(v)
    }

    fn render(&self, a: &GRElem) -> String {
        render_t_poly(&a.0)
    }
}
