//! Boxes B_m in Z_q^n.
//!
//! A box is described by its free digits x[i][j] (i < m, 1 <= j <= n) and by
//! reduced generator polynomials g[i][j] over F_q for i >= m: coordinate j of
//! the point over base X has Teichmüller digit i equal to g[i][j](X).
//! Unspecified generators are zero; with no generators at all this is the
//! Teichmüller box T_m.

use std::collections::{BTreeMap, HashSet};
use std::ops::Range;

use crate::error::{Error, Result};
use crate::fq::{Fq, FqElem};
use crate::galois::{DigitVec, GRElem, GaloisRing};
use crate::poly::{MultiPoly, Vars};
use crate::ring::Ring;

/// Largest q^(2nm) that `from_table` will expand symbolically.
pub const INTERPOLATION_BUDGET: u128 = 1 << 26;

pub fn box_var_name(i: usize, j: usize) -> String {
    format!("x[{i}][{j}]")
}

/// The nm free-digit variables, i-major then j.
pub fn box_vars(n: usize, m: usize) -> Vars {
    Vars::new((0..m).flat_map(|i| (1..=n).map(move |j| box_var_name(i, j))))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClosenessViolation {
    pub i: usize,
    pub j: usize,
    pub degree: u64,
    pub limit: u128,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Closeness {
    pub holds: bool,
    pub violations: Vec<ClosenessViolation>,
}

/// A point of a box: its free digits and the first `precision` Teichmüller
/// digits of each of its n coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoxPoint {
    pub base: Vec<FqElem>,
    pub expansion: Vec<DigitVec>,
}

impl BoxPoint {
    /// Coordinates as elements of `ring` (whose precision must match).
    pub fn coordinates(&self, ring: &GaloisRing) -> Result<Vec<GRElem>> {
        self.expansion.iter().map(|d| ring.from_digits(d)).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoxSpec {
    field: Fq,
    n: usize,
    m: usize,
    vars: Vars,
    generators: BTreeMap<(usize, usize), MultiPoly<FqElem>>,
}

impl BoxSpec {
    /// Validates and stores the generators; zero generators are dropped.
    pub fn new<I>(field: Fq, n: usize, m: usize, generators: I) -> Result<Self>
    where
        I: IntoIterator<Item = ((usize, usize), MultiPoly<FqElem>)>,
    {
        if n == 0 || m == 0 {
            return Err(Error::Validation("box needs n >= 1 and m >= 1".into()));
        }
        let vars = box_vars(n, m);
        let q = field.q();
        let mut stored = BTreeMap::new();
        for ((i, j), g) in generators {
            if i < m || j == 0 || j > n {
                return Err(Error::Validation(format!(
                    "generator index g[{i}][{j}] outside i >= {m}, 1 <= j <= {n}"
                )));
            }
            let g = g.with_vars(&vars).map_err(|_| {
                Error::Validation(format!(
                    "generator g[{i}][{j}] uses variables outside x[0..{m}][1..={n}]"
                ))
            })?;
            if !g.is_reduced(q) {
                return Err(Error::Validation(format!(
                    "generator g[{i}][{j}] is not reduced (some exponent exceeds q - 1 = {})",
                    q - 1
                )));
            }
            if g.is_zero() {
                continue;
            }
            if stored.insert((i, j), g).is_some() {
                return Err(Error::Validation(format!("generator g[{i}][{j}] given twice")));
            }
        }
        Ok(Self {
            field,
            n,
            m,
            vars,
            generators: stored,
        })
    }

    /// T_m: every digit at or above m is zero.
    pub fn teichmuller(field: Fq, n: usize, m: usize) -> Result<Self> {
        Self::new(field, n, m, std::iter::empty())
    }

    /// A box whose generator g[i][j] depends only on column j.
    pub fn split<I>(field: Fq, n: usize, m: usize, generators: I) -> Result<Self>
    where
        I: IntoIterator<Item = ((usize, usize), MultiPoly<FqElem>)>,
    {
        let spec = Self::new(field, n, m, generators)?;
        if let Some(&(i, j)) = spec
            .generators
            .iter()
            .find(|((_, j), g)| !spec.depends_only_on_column(g, *j))
            .map(|(k, _)| k)
        {
            return Err(Error::Validation(format!(
                "split box generator g[{i}][{j}] uses variables outside column {j}"
            )));
        }
        Ok(spec)
    }

    fn depends_only_on_column(&self, g: &MultiPoly<FqElem>, j: usize) -> bool {
        (0..self.vars.len())
            .filter(|v| v % self.n + 1 != j)
            .all(|v| g.degree_in(v) == 0)
    }

    pub fn is_split(&self) -> bool {
        self.generators
            .iter()
            .all(|((_, j), g)| self.depends_only_on_column(g, *j))
    }

    pub fn field(&self) -> &Fq {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    /// Stored (nonzero) generators keyed by (i, j).
    pub fn generators(&self) -> &BTreeMap<(usize, usize), MultiPoly<FqElem>> {
        &self.generators
    }

    pub fn var_index(&self, i: usize, j: usize) -> usize {
        i * self.n + (j - 1)
    }

    /// g[i][j], with g[i][j] = x[i][j] below m.
    pub fn generator(&self, i: usize, j: usize) -> MultiPoly<FqElem> {
        if i < self.m {
            MultiPoly::var(self.vars.clone(), self.var_index(i, j), &self.field)
        } else {
            self.generators
                .get(&(i, j))
                .cloned()
                .unwrap_or_else(|| MultiPoly::zero(self.vars.clone()))
        }
    }

    /// Total degree of g[i][j]; the zero polynomial has degree 0.
    pub fn generator_degree(&self, i: usize, j: usize) -> u64 {
        if i < self.m {
            1
        } else {
            self.generators.get(&(i, j)).map_or(0, |g| g.total_degree())
        }
    }

    /// Checks deg g[i][j] <= p^(h * floor(i / h)) for all i < m_prime.
    pub fn closeness(&self, m_prime: usize) -> Closeness {
        let p = self.field.p() as u128;
        let h = self.field.h();
        let violations: Vec<_> = self
            .generators
            .iter()
            .filter(|((i, _), _)| *i < m_prime)
            .filter_map(|(&(i, j), g)| {
                let exp = (h * (i / h)) as u32;
                let limit = p.checked_pow(exp).unwrap_or(u128::MAX);
                let degree = g.total_degree();
                ((degree as u128) > limit).then_some(ClosenessViolation { i, j, degree, limit })
            })
            .collect();
        Closeness {
            holds: violations.is_empty(),
            violations,
        }
    }

    /// q^(nm), the number of points.
    pub fn size(&self) -> Option<u64> {
        self.field.q().checked_pow((self.n * self.m) as u32)
    }

    /// Free digits of point number `index`: position k of the flattened
    /// (i, j) tuple is base-q digit k of `index`, position 0 least significant.
    pub fn base_point(&self, mut index: u64) -> Vec<FqElem> {
        let q = self.field.q();
        (0..self.vars.len())
            .map(|_| {
                let a = self.field.element(index % q);
                index /= q;
                a
            })
            .collect()
    }

    fn point_from_base(&self, base: Vec<FqElem>, precision: usize) -> BoxPoint {
        let expansion = (1..=self.n)
            .map(|j| {
                DigitVec(
                    (0..precision)
                        .map(|i| {
                            if i < self.m {
                                base[self.var_index(i, j)].clone()
                            } else {
                                match self.generators.get(&(i, j)) {
                                    Some(g) => g.eval(&self.field, &base),
                                    None => self.field.zero(),
                                }
                            }
                        })
                        .collect(),
                )
            })
            .collect();
        BoxPoint { base, expansion }
    }

    pub fn point(&self, index: u64, precision: usize) -> BoxPoint {
        self.point_from_base(self.base_point(index), precision)
    }

    /// Points with index in `range`, in index order.
    pub fn points_in(&self, range: Range<u64>, precision: usize) -> impl Iterator<Item = BoxPoint> + '_ {
        range.map(move |k| self.point(k, precision))
    }

    /// All q^(nm) points at the given digit precision (>= m).
    pub fn points(&self, precision: usize) -> Result<impl Iterator<Item = BoxPoint> + '_> {
        if precision < self.m {
            return Err(Error::Usage(format!(
                "precision {precision} is below the box depth m = {}",
                self.m
            )));
        }
        let size = self
            .size()
            .ok_or_else(|| Error::Usage("box too large to enumerate".into()))?;
        Ok(self.points_in(0..size, precision))
    }

    /// Recovers the unique reduced generators from a full table of points.
    /// Each g[i][j], m <= i < precision, is expanded symbolically as
    /// sum_a v_a prod_k (1 - (x_k - a_k)^(q-1)) and then reduced.
    pub fn from_table(field: Fq, n: usize, m: usize, precision: usize, rows: &[BoxPoint]) -> Result<Self> {
        if n == 0 || m == 0 || precision < m {
            return Err(Error::Validation(format!(
                "bad table shape n = {n}, m = {m}, precision = {precision}"
            )));
        }
        let q = field.q();
        let nm = n * m;
        let expected = q
            .checked_pow(nm as u32)
            .ok_or_else(|| Error::Validation("table too large".into()))?;
        let work = (expected as u128) * (expected as u128);
        if work > INTERPOLATION_BUDGET {
            return Err(Error::BudgetExceeded {
                what: "box interpolation",
                needed: work,
                budget: INTERPOLATION_BUDGET,
            });
        }
        if rows.len() as u64 != expected {
            return Err(Error::Validation(format!(
                "table has {} rows, expected q^(nm) = {expected}",
                rows.len()
            )));
        }
        let mut seen = HashSet::new();
        for (r, row) in rows.iter().enumerate() {
            if row.base.len() != nm || row.expansion.len() != n {
                return Err(Error::Validation(format!("row {r} has the wrong shape")));
            }
            if !seen.insert(row.base.clone()) {
                return Err(Error::Validation(format!("row {r} repeats a base point")));
            }
            for (j, d) in row.expansion.iter().enumerate() {
                if d.len() != precision {
                    return Err(Error::Validation(format!(
                        "row {r}, coordinate {} has {} digits, expected {precision}",
                        j + 1,
                        d.len()
                    )));
                }
                for i in 0..m {
                    if d.0[i] != row.base[i * n + j] {
                        return Err(Error::Validation(format!(
                            "row {r}: digit {i} of coordinate {} disagrees with its base point",
                            j + 1
                        )));
                    }
                }
            }
        }

        let vars = box_vars(n, m);
        // delta[k][a] = 1 - (x_k - a)^(q-1), the indicator of x_k = a
        let one = MultiPoly::constant(vars.clone(), field.one(), &field);
        let delta: Vec<Vec<MultiPoly<FqElem>>> = (0..nm)
            .map(|k| {
                let x = MultiPoly::var(vars.clone(), k, &field);
                field
                    .elements()
                    .map(|a| {
                        let shifted = x.sub(&MultiPoly::constant(vars.clone(), a, &field), &field);
                        one.sub(&shifted.pow(q - 1, &field), &field)
                    })
                    .collect()
            })
            .collect();
        let indicator = |base: &[FqElem]| {
            base.iter().enumerate().fold(one.clone(), |acc, (k, a)| {
                acc.mul(&delta[k][field.index(a) as usize], &field)
            })
        };

        let mut generators = Vec::new();
        for i in m..precision {
            for j in 1..=n {
                let mut g = MultiPoly::zero(vars.clone());
                for row in rows {
                    let v = &row.expansion[j - 1].0[i];
                    if field.is_zero(v) {
                        continue;
                    }
                    g = g.add(&indicator(&row.base).scale(v, &field), &field);
                }
                generators.push(((i, j), g.reduce_exponents(q, &field)));
            }
        }
        Self::new(field, n, m, generators)
    }

    /// `g[i][j] = <poly>` lines for every stored generator.
    pub fn render(&self) -> Vec<String> {
        self.generators
            .iter()
            .map(|((i, j), g)| format!("g[{i}][{j}] = {}", g.render(&self.field)))
            .collect()
    }
}
