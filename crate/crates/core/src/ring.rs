//! The coefficient-ring abstraction shared by [`MultiPoly`](crate::poly::MultiPoly).
//!
//! Elements are plain values; every operation goes through a ring context, in
//! the style of "ring store" libraries. This keeps `FqElem` and `GRElem` small
//! while the modulus lives once in the context.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

pub trait Ring {
    type Elem: Clone + PartialEq + Eq + Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;

    /// Image of an integer under the canonical map Z -> R.
    fn from_int(&self, c: &BigInt) -> Self::Elem;

    /// Literal text of an element, as accepted back by the parsers.
    fn render(&self, a: &Self::Elem) -> String;

    /// Whether `render` may produce a sum that needs parentheses as a factor.
    fn render_is_compound(&self, a: &Self::Elem) -> bool {
        let s = self.render(a);
        s.trim_start_matches('-').contains(['+', '-'])
    }

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }
}

/// The ring of exact integers.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Integers;

impl Ring for Integers {
    type Elem = BigInt;

    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn one(&self) -> BigInt {
        BigInt::one()
    }
    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a + b
    }
    fn neg(&self, a: &BigInt) -> BigInt {
        -a
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * b
    }
    fn sub(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a - b
    }
    fn is_zero(&self, a: &BigInt) -> bool {
        a.is_zero()
    }
    fn is_one(&self, a: &BigInt) -> bool {
        a.is_one()
    }
    fn from_int(&self, c: &BigInt) -> BigInt {
        c.clone()
    }
    fn render(&self, a: &BigInt) -> String {
        a.to_string()
    }
    fn render_is_compound(&self, _a: &BigInt) -> bool {
        false
    }
    fn pow(&self, a: &BigInt, e: u64) -> BigInt {
        num_traits::pow(a.clone(), e as usize)
    }
}

/// Least nonnegative residue of `c` modulo `n`.
pub(crate) fn bigint_mod_u64(c: &BigInt, n: u64) -> u64 {
    let n_big = BigInt::from(n);
    let mut r = c % &n_big;
    if r.is_negative() {
        r += &n_big;
    }
    u64::try_from(r).expect("residue fits in u64")
}
