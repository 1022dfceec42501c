//! The finite field F_q = F_p[t]/(phi) with q = p^h.

use std::fmt;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::residue::{self, Coeffs};
use crate::ring::{bigint_mod_u64, Ring};

/// Built-in irreducible moduli, ascending coefficients, monic.
const DEFAULT_MODULI: &[(u64, usize, &[u64])] = &[
    (2, 2, &[1, 1, 1]),    // t^2 + t + 1
    (2, 3, &[1, 1, 0, 1]), // t^3 + t + 1
    (2, 4, &[1, 1, 0, 0, 1]), // t^4 + t + 1
    (3, 2, &[1, 0, 1]),    // t^2 + 1
    (3, 3, &[1, 2, 0, 1]), // t^3 + 2t + 1
    (5, 2, &[2, 0, 1]),    // t^2 + 2
];

pub(crate) fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Validated description of F_q: the characteristic, the degree and an
/// irreducible monic modulus over F_p.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldParams {
    p: u64,
    h: usize,
    modulus: Vec<u64>,
}

impl FieldParams {
    /// Validates `p`, `h` and the modulus. With `modulus = None`, h = 1 uses
    /// `t` and a few small (p, h) pairs have built-in moduli.
    pub fn new(p: u64, h: usize, modulus: Option<Vec<u64>>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidParams(format!("p = {p} is not prime")));
        }
        if p > u32::MAX as u64 {
            return Err(Error::InvalidParams(format!("p = {p} is too large")));
        }
        if h == 0 {
            return Err(Error::InvalidParams("h must be at least 1".into()));
        }
        let modulus = match modulus {
            Some(m) => m.into_iter().map(|c| c % p).collect::<Vec<_>>(),
            None if h == 1 => vec![0, 1],
            None => DEFAULT_MODULI
                .iter()
                .find(|(dp, dh, _)| *dp == p && *dh == h)
                .map(|(_, _, m)| m.to_vec())
                .ok_or_else(|| {
                    Error::InvalidParams(format!(
                        "no built-in modulus for p = {p}, h = {h}; supply one"
                    ))
                })?,
        };
        if modulus.len() != h + 1 || modulus[h] != 1 {
            return Err(Error::InvalidParams(format!(
                "modulus must be monic of degree {h}, got coefficients {modulus:?}"
            )));
        }
        if !is_irreducible(&modulus, p) {
            return Err(Error::InvalidParams(format!(
                "modulus {modulus:?} is reducible over F_{p}"
            )));
        }
        Ok(Self { p, h, modulus })
    }

    pub fn prime(p: u64) -> Result<Self> {
        Self::new(p, 1, None)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn h(&self) -> usize {
        self.h
    }

    /// Ascending coefficients of the monic modulus, length h + 1.
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn q(&self) -> u64 {
        self.p.pow(self.h as u32)
    }
}

/// Trial division by every monic polynomial of degree 1..=deg/2.
fn is_irreducible(modulus: &[u64], p: u64) -> bool {
    let deg = modulus.len() - 1;
    for d in 1..=deg / 2 {
        let count = p.pow(d as u32);
        for code in 0..count {
            let mut div = Vec::with_capacity(d + 1);
            let mut c = code;
            for _ in 0..d {
                div.push(c % p);
                c /= p;
            }
            div.push(1);
            if residue::poly_rem_mod_p(modulus, &div, p)
                .iter()
                .all(|&r| r == 0)
            {
                return false;
            }
        }
    }
    true
}

/// An element of F_q: h coefficients in [0, p), coordinate i multiplies t^i.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FqElem(pub(crate) Coeffs);

impl FqElem {
    pub fn coeffs(&self) -> &[u64] {
        &self.0
    }
}

impl fmt::Debug for FqElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FqElem{:?}", self.0.as_slice())
    }
}

/// Arithmetic context for F_q.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Fq {
    params: FieldParams,
}

impl Fq {
    pub fn new(params: FieldParams) -> Self {
        Self { params }
    }

    pub fn prime(p: u64) -> Result<Self> {
        Ok(Self::new(FieldParams::prime(p)?))
    }

    /// F_{p^h} with the built-in modulus.
    pub fn with_degree(p: u64, h: usize) -> Result<Self> {
        Ok(Self::new(FieldParams::new(p, h, None)?))
    }

    pub fn params(&self) -> &FieldParams {
        &self.params
    }

    pub fn p(&self) -> u64 {
        self.params.p
    }

    pub fn h(&self) -> usize {
        self.params.h
    }

    pub fn q(&self) -> u64 {
        self.params.q()
    }

    /// Builds an element from up to h integer coefficients, reducing mod p.
    pub fn make(&self, coeffs: &[i64]) -> Result<FqElem> {
        if coeffs.len() > self.h() {
            return Err(Error::Usage(format!(
                "{} coefficients given for a degree-{} extension",
                coeffs.len(),
                self.h()
            )));
        }
        let p = self.p() as i64;
        let mut v: Coeffs = coeffs.iter().map(|&c| c.rem_euclid(p) as u64).collect();
        v.resize(self.h(), 0);
        Ok(FqElem(v))
    }

    /// The residue class of `t`.
    pub fn t(&self) -> FqElem {
        let mut v: Coeffs = smallvec::smallvec![0; self.h()];
        if self.h() == 1 {
            v[0] = (self.p() - self.params.modulus[0]) % self.p();
        } else {
            v[1] = 1;
        }
        FqElem(v)
    }

    /// The element whose coefficient tuple, read as a base-p integer with
    /// coordinate 0 least significant, equals `index`.
    pub fn element(&self, mut index: u64) -> FqElem {
        let p = self.p();
        let v = (0..self.h())
            .map(|_| {
                let c = index % p;
                index /= p;
                c
            })
            .collect();
        FqElem(v)
    }

    pub fn index(&self, a: &FqElem) -> u64 {
        a.0.iter().rev().fold(0, |acc, &c| acc * self.p() + c)
    }

    /// All q elements in ascending index order.
    pub fn elements(&self) -> impl Iterator<Item = FqElem> + '_ {
        (0..self.q()).map(move |i| self.element(i))
    }

    pub fn inv(&self, a: &FqElem) -> Result<FqElem> {
        if self.is_zero(a) {
            return Err(Error::Domain("inverse of zero in F_q".into()));
        }
        Ok(self.pow(a, self.q() - 2))
    }

    /// a^(p^e).
    pub fn frobenius(&self, a: &FqElem, e: u64) -> FqElem {
        let e = e % self.h() as u64;
        (0..e).fold(a.clone(), |x, _| self.pow(&x, self.p()))
    }

    /// The unique b with b^(p^e) = a.
    pub fn frobenius_inverse(&self, a: &FqElem, e: u64) -> FqElem {
        let h = self.h() as u64;
        self.frobenius(a, (h - e % h) % h)
    }

    /// Parses an integer or a polynomial in `t`, e.g. `1+2*t`.
    pub fn parse_literal(&self, text: &str) -> Result<FqElem> {
        let vars = crate::poly::Vars::new(["t"]);
        let poly = crate::expr::parse_poly(text, &vars)?;
        if self.h() == 1 && poly.terms().any(|(m, _)| m.degree() > 0) {
            return Err(Error::Parse {
                column: 1,
                reason: "`t` is not available in a prime field".into(),
            });
        }
        let t = self.t();
        Ok(poly.eval_with(self, |c| self.from_int(c), &[t]))
    }
}

impl Ring for Fq {
    type Elem = FqElem;

    fn zero(&self) -> FqElem {
        FqElem(smallvec::smallvec![0; self.h()])
    }

    fn one(&self) -> FqElem {
        let mut v: Coeffs = smallvec::smallvec![0; self.h()];
        v[0] = 1 % self.p();
        FqElem(v)
    }

    fn add(&self, a: &FqElem, b: &FqElem) -> FqElem {
        FqElem(residue::add(&a.0, &b.0, self.p()))
    }

    fn sub(&self, a: &FqElem, b: &FqElem) -> FqElem {
        FqElem(residue::sub(&a.0, &b.0, self.p()))
    }

    fn neg(&self, a: &FqElem) -> FqElem {
        FqElem(residue::neg(&a.0, self.p()))
    }

    fn mul(&self, a: &FqElem, b: &FqElem) -> FqElem {
        FqElem(residue::mul(&a.0, &b.0, &self.params.modulus, self.p()))
    }

    fn is_zero(&self, a: &FqElem) -> bool {
        a.0.iter().all(|&c| c == 0)
    }

    fn from_int(&self, c: &BigInt) -> FqElem {
        let mut v: Coeffs = smallvec::smallvec![0; self.h()];
        v[0] = bigint_mod_u64(c, self.p());
        FqElem(v)
    }

    fn render(&self, a: &FqElem) -> String {
        render_t_poly(&a.0)
    }
}

/// Ascending rendering `c0+c1*t+c2*t^2`, omitting zero terms.
pub(crate) fn render_t_poly(coeffs: &[u64]) -> String {
    let parts: Vec<String> = coeffs
        .iter()
        .enumerate()
        .filter(|(_, &c)| c != 0)
        .map(|(k, &c)| match (k, c) {
            (0, c) => c.to_string(),
            (1, 1) => "t".to_string(),
            (1, c) => format!("{c}*t"),
            (k, 1) => format!("t^{k}"),
            (k, c) => format!("{c}*t^{k}"),
        })
        .collect();
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join("+")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f4() -> Fq {
        Fq::with_degree(2, 2).unwrap()
    }

    #[test]
    fn make_reduces_and_pads() {
        let f2 = Fq::prime(2).unwrap();
        assert_eq!(f2.make(&[1]).unwrap().coeffs(), &[1]);
        let f9 = Fq::with_degree(3, 2).unwrap();
        assert_eq!(f9.make(&[2, 1]).unwrap().coeffs(), &[2, 1]);
        assert_eq!(f9.make(&[1]).unwrap().coeffs(), &[1, 0]);
        let f3 = Fq::prime(3).unwrap();
        assert_eq!(f3.make(&[5]).unwrap().coeffs(), &[2]);
        assert_eq!(f3.make(&[-1]).unwrap().coeffs(), &[2]);
        assert!(f3.make(&[1, 1]).is_err());
    }

    #[test]
    fn f4_t_squared() {
        let f = f4();
        let t = f.t();
        assert_eq!(f.mul(&t, &t).coeffs(), &[1, 1]);
        assert_eq!(f.frobenius(&t, 1).coeffs(), &[1, 1]);
    }

    #[test]
    fn inverse_in_f3() {
        let f3 = Fq::prime(3).unwrap();
        let two = f3.make(&[2]).unwrap();
        assert_eq!(f3.inv(&two).unwrap(), two);
        assert!(matches!(f3.inv(&f3.zero()), Err(Error::Domain(_))));
    }

    #[test]
    fn enumeration_order() {
        let f2 = Fq::prime(2).unwrap();
        let e: Vec<_> = f2.elements().map(|a| a.coeffs().to_vec()).collect();
        assert_eq!(e, vec![vec![0], vec![1]]);
        let e: Vec<_> = f4().elements().map(|a| a.coeffs().to_vec()).collect();
        assert_eq!(e, vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]]);
        let f9 = Fq::with_degree(3, 2).unwrap();
        assert_eq!(f9.elements().count(), 9);
        for (i, a) in f9.elements().enumerate() {
            assert_eq!(f9.index(&a), i as u64);
        }
    }

    #[test]
    fn rejects_bad_params() {
        assert!(FieldParams::new(4, 1, None).is_err());
        assert!(FieldParams::new(2, 0, None).is_err());
        // t^2 + 1 = (t + 1)^2 over F_2
        assert!(FieldParams::new(2, 2, Some(vec![1, 0, 1])).is_err());
        // not monic
        assert!(FieldParams::new(3, 2, Some(vec![1, 0, 2])).is_err());
        // no default for (7, 3)
        assert!(FieldParams::new(7, 3, None).is_err());
        assert!(FieldParams::new(7, 3, Some(vec![2, 0, 0, 1])).is_ok());
    }

    #[test]
    fn default_moduli_are_irreducible() {
        for &(p, h, m) in DEFAULT_MODULI {
            assert!(FieldParams::new(p, h, Some(m.to_vec())).is_ok());
        }
    }

    #[test]
    fn field_axioms_exhaustive_small() {
        for (p, h) in [(2, 1), (3, 1), (2, 2), (2, 3), (3, 2), (5, 1)] {
            let f = Fq::with_degree(p, h).unwrap();
            let els: Vec<_> = f.elements().collect();
            for a in &els {
                assert_eq!(f.add(a, &f.zero()), *a);
                assert_eq!(f.mul(a, &f.one()), *a);
                assert_eq!(f.frobenius(a, h as u64), *a);
                for e in 0..3 {
                    assert_eq!(f.frobenius_inverse(&f.frobenius(a, e), e), *a);
                }
                if !f.is_zero(a) {
                    assert_eq!(f.mul(a, &f.inv(a).unwrap()), f.one());
                }
                for b in &els {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    let frob = |x: &FqElem| f.frobenius(x, 1);
                    assert_eq!(frob(&f.add(a, b)), f.add(&frob(a), &frob(b)));
                    assert_eq!(frob(&f.mul(a, b)), f.mul(&frob(a), &frob(b)));
                    if els.len() <= 9 {
                        for c in &els {
                            assert_eq!(f.mul(a, &f.add(b, c)), f.add(&f.mul(a, b), &f.mul(a, c)));
                            assert_eq!(f.mul(a, &f.mul(b, c)), f.mul(&f.mul(a, b), c));
                            assert_eq!(f.add(a, &f.add(b, c)), f.add(&f.add(a, b), c));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn literals() {
        let f9 = Fq::with_degree(3, 2).unwrap();
        assert_eq!(f9.parse_literal("1+2*t").unwrap().coeffs(), &[1, 2]);
        // t^2 = -1 = 2
        assert_eq!(f9.parse_literal("t^2").unwrap().coeffs(), &[2, 0]);
        assert_eq!(f9.render(&f9.make(&[1, 2]).unwrap()), "1+2*t");
        assert_eq!(f9.render(&f9.zero()), "0");
        let f3 = Fq::prime(3).unwrap();
        assert_eq!(f3.parse_literal("5").unwrap().coeffs(), &[2]);
        assert!(f3.parse_literal("t").is_err());
    }
}
