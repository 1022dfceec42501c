//! Divisibility lower bounds for |V| and their hypothesis checks.
//!
//! Every bound is a lower bound on ord_q |V|. Comparisons against a count
//! are made p-adically: a bound b holds when p^(h b) divides |V|.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::counting::{CountReport, ProblemInstance};
use crate::error::{Error, Result};
use crate::galois::Valuation;

/// Least nonnegative integer >= t.
pub fn ceil_star(t: &BigRational) -> u64 {
    let c = t.ceil().to_integer();
    if c.is_negative() {
        0
    } else {
        c.to_u64().unwrap_or(u64::MAX)
    }
}

pub fn floor(t: &BigRational) -> BigInt {
    t.floor().to_integer()
}

fn ratio(num: BigInt, den: BigInt) -> BigRational {
    BigRational::new(num, den)
}

fn big(x: u64) -> BigInt {
    BigInt::from(x)
}

/// How the degree condition "n > s and any deg f_k > 1" is read.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DegreeReading {
    /// At least one f_k has degree > 1.
    #[default]
    Any,
    /// Every f_k has degree > 1.
    All,
}

impl DegreeReading {
    pub fn name(self) -> &'static str {
        match self {
            DegreeReading::Any => "any",
            DegreeReading::All => "all",
        }
    }

    pub fn other(self) -> Self {
        match self {
            DegreeReading::Any => DegreeReading::All,
            DegreeReading::All => DegreeReading::Any,
        }
    }

    pub fn holds(self, degs: &[u64]) -> bool {
        match self {
            DegreeReading::Any => degs.iter().any(|&d| d > 1),
            DegreeReading::All => !degs.is_empty() && degs.iter().all(|&d| d > 1),
        }
    }
}

impl std::str::FromStr for DegreeReading {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "any" => Ok(DegreeReading::Any),
            "all" => Ok(DegreeReading::All),
            other => Err(Error::Usage(format!("unknown degree reading `{other}` (any|all)"))),
        }
    }
}

/// Ax-Katz: ceil*((n - sum deg) / max deg).
pub fn ax_katz(n: usize, degs: &[u64]) -> u64 {
    let sum: u64 = degs.iter().sum();
    let max = degs.iter().copied().max().unwrap_or(1).max(1);
    ceil_star(&ratio(big(n as u64) - big(sum), big(max)))
}

/// Katz-Marshall-Ramage for a common modulus p^m, m >= 2.
pub fn kmr(n: usize, s: usize, m: u32, degs: &[u64], reading: DegreeReading) -> u64 {
    let (n, s, m) = (n as i64, s as i64, m as i64);
    if n > s && reading.holds(degs) {
        let num = BigInt::from((n - s + 1) * m - 1);
        floor(&ratio(num, BigInt::from(2))).to_u64().unwrap_or(0)
    } else {
        ceil_star(&ratio(BigInt::from((n - s) * m), BigInt::from(1)))
    }
}

/// ceil*((nm - sum ((p^m_k - 1)/(p - 1)) w_k) / max p^(m_k - 1) w_k) with
/// weights w_k (degrees, or the d_k of the improved bound).
fn weighted(n: usize, m: usize, p: u64, moduli: &[u32], weights: &[u64]) -> u64 {
    let pb = big(p);
    let mut sum = BigInt::zero();
    let mut max = BigInt::zero();
    for (&mk, &w) in moduli.iter().zip(weights) {
        let pk = num_traits::pow(pb.clone(), mk as usize);
        sum += (&pk - 1u32) / (&pb - 1u32) * big(w);
        let lead = num_traits::pow(pb.clone(), mk as usize - 1) * big(w);
        max = max.max(lead);
    }
    if max.is_zero() {
        max = BigInt::from(1);
    }
    ceil_star(&ratio(big((n * m) as u64) - sum, max))
}

/// Cao-Wan-Grynkiewicz (depth-1 boxes).
pub fn cwg(n: usize, p: u64, moduli: &[u32], degs: &[u64]) -> u64 {
    weighted(n, 1, p, moduli, degs)
}

/// The general estimate for boxes of depth m close to T_m at m_s.
pub fn general(n: usize, m: usize, p: u64, moduli: &[u32], degs: &[u64]) -> u64 {
    weighted(n, m, p, moduli, degs)
}

/// The general estimate with degrees replaced by d_k.
pub fn improved(n: usize, m: usize, p: u64, moduli: &[u32], d: &[u64]) -> u64 {
    weighted(n, m, p, moduli, d)
}

/// Common modulus m1 <= m: the depth-m1 bound plus n(m - m1).
pub fn stacked(n: usize, s: usize, m: usize, m1: usize, degs: &[u64], reading: DegreeReading) -> u64 {
    let lift = (n * (m - m1)) as u64;
    let base = if m1 == 1 {
        ax_katz(n, degs)
    } else {
        kmr(n, s, m1 as u32, degs, reading)
    };
    base + lift
}

/// Which second-case condition the single-polynomial stacked bound uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SingleReading {
    /// m' > 1, n > 1 and deg f > 1, as the argument requires.
    Proof,
    /// m' > 1 and deg f > 1, with n unrestricted.
    Stated,
}

/// Single polynomial modulo p^m' over a box of depth m >= m'.
pub fn single_stacked(n: usize, m: usize, m_prime: usize, deg: u64, reading: SingleReading) -> u64 {
    let lift = (n * (m - m_prime)) as u64;
    let second = match reading {
        SingleReading::Proof => m_prime > 1 && n > 1 && deg > 1,
        SingleReading::Stated => m_prime > 1 && deg > 1,
    };
    if m_prime == 1 {
        let t = ratio(big(n as u64), big(deg.max(1))) - BigRational::from_integer(1.into());
        ceil_star(&t) + lift
    } else if second {
        ((n * m_prime - 1) / 2) as u64 + lift
    } else {
        let value = (n * m - m_prime) as u64;
        debug_assert_eq!(value, stacked(n, 1, m, m_prime, &[1], DegreeReading::Any));
        value
    }
}

/// Largest number of compositions `minimal_d` will visit.
pub const MINIMAL_D_BUDGET: u64 = 1 << 20;

/// Least d >= 1 such that every nonzero Teichmüller term a_ij X^u_j of f_k
/// and every beta with i + |beta| <= m_k - 1 satisfy
/// deg(prod_t g[beta_t][l_t]) <= d p^(h floor((i + |beta|) / h)).
/// Products containing a zero generator vanish and impose nothing.
pub fn minimal_d(inst: &ProblemInstance, k: usize, budget: u64) -> Result<u64> {
    let cong = inst
        .system()
        .get(k)
        .ok_or_else(|| Error::Usage(format!("no congruence with index {k}")))?;
    let ring = inst.ring();
    let b = inst.boxspec();
    let p = ring.p();
    let h = ring.h();
    let mk = cong.modulus as usize;
    let mut visited = 0u64;
    let mut best = 1u64;
    for (mono, coeff) in cong.poly.terms() {
        let digits = ring.to_digits(coeff);
        // one factor slot per unit of the exponent, labelled by its variable
        let slots: Vec<usize> = mono
            .exps()
            .iter()
            .enumerate()
            .flat_map(|(l, &e)| std::iter::repeat_n(l + 1, e as usize))
            .collect();
        for (i, a) in digits.digits().iter().enumerate().take(mk) {
            if ring.field().index(a) == 0 {
                continue;
            }
            let room = mk - 1 - i;
            let mut walk = Walk {
                boxspec: b,
                slots: &slots,
                visited: &mut visited,
                budget,
                level0: i,
                p,
                h,
                best: &mut best,
            };
            walk.run(0, room, 0, 0)?;
        }
    }
    Ok(best)
}

struct Walk<'a> {
    boxspec: &'a crate::boxes::BoxSpec,
    slots: &'a [usize],
    visited: &'a mut u64,
    budget: u64,
    level0: usize,
    p: u64,
    h: usize,
    best: &'a mut u64,
}

impl Walk<'_> {
    fn run(&mut self, pos: usize, room: usize, used: usize, degree: u64) -> Result<()> {
        if pos == self.slots.len() {
            *self.visited += 1;
            if *self.visited > self.budget {
                return Err(Error::BudgetExceeded {
                    what: "minimal d composition search",
                    needed: *self.visited as u128,
                    budget: self.budget as u128,
                });
            }
            let level = self.level0 + used;
            let exp = (self.h * (level / self.h)) as u32;
            let scale = self.p.checked_pow(exp).unwrap_or(u64::MAX);
            *self.best = (*self.best).max(degree.div_ceil(scale));
            return Ok(());
        }
        let l = self.slots[pos];
        for beta in 0..=room {
            let alive = beta < self.boxspec.m() || self.boxspec.generators().contains_key(&(beta, l));
            if !alive {
                continue;
            }
            let d = self.boxspec.generator_degree(beta, l);
            self.run(pos + 1, room - beta, used + beta, degree + d)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundOptions {
    pub reading: DegreeReading,
    pub minimal_d_budget: u64,
}

impl Default for BoundOptions {
    fn default() -> Self {
        Self {
            reading: DegreeReading::Any,
            minimal_d_budget: MINIMAL_D_BUDGET,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundEntry {
    pub name: &'static str,
    /// Present exactly when the bound is applicable.
    pub value: Option<u64>,
    pub notes: Vec<String>,
}

impl BoundEntry {
    pub fn applicable(&self) -> bool {
        self.value.is_some()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Vacuous,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Vacuous => "VACUOUS",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundReport {
    pub entries: Vec<BoundEntry>,
    /// Hypothesis checks and informational values, in output order.
    pub info: Vec<(String, String)>,
    /// (bound name, holds) for each applicable bound, when a count is known.
    pub verdicts: Vec<(&'static str, bool)>,
    pub status: Option<Status>,
}

impl BoundReport {
    pub fn entry(&self, name: &str) -> Option<&BoundEntry> {
        self.entries.iter().find(|e| e.name == name)
    }

    pub fn value(&self, name: &str) -> Option<u64> {
        self.entry(name).and_then(|e| e.value)
    }

    pub fn info_value(&self, key: &str) -> Option<&str> {
        self.info.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    /// Names of applicable bounds that the count violates.
    pub fn violations(&self) -> Vec<&'static str> {
        self.verdicts.iter().filter(|(_, ok)| !ok).map(|(n, _)| *n).collect()
    }

    /// `key=value` lines: hypotheses, bounds, then verdicts.
    pub fn lines(&self) -> Vec<String> {
        let mut out: Vec<String> = self.info.iter().map(|(k, v)| format!("{k}={v}")).collect();
        for e in &self.entries {
            let v = e.value.map_or_else(|| "none".to_string(), |v| v.to_string());
            out.push(format!("bound.{}={v}", e.name));
            out.push(format!("applicable.{}={}", e.name, e.applicable()));
            for note in &e.notes {
                out.push(format!("note.{}={note}", e.name));
            }
        }
        for (name, ok) in &self.verdicts {
            out.push(format!("verdict.{name}={}", if *ok { "PASS" } else { "FAIL" }));
        }
        if let Some(s) = self.status {
            out.push(format!("status={s}"));
        }
        out
    }
}

/// Whether p^(h b) divides the count (always true for an empty set).
pub fn bound_holds(count: &CountReport, b: u64) -> bool {
    count.ord_p.at_least(count.h as u64 * b)
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

/// Evaluates every bound with its hypotheses and, given a count, checks it.
pub fn bound_report(inst: &ProblemInstance, count: Option<&CountReport>, opts: &BoundOptions) -> BoundReport {
    let n = inst.n();
    let m = inst.m();
    let p = inst.field().p();
    let s = inst.system().len();
    let degs = inst.degrees();
    let moduli = inst.moduli();
    let ms = *moduli.iter().max().expect("nonempty system") as usize;
    let m1 = *moduli.iter().min().expect("nonempty system") as usize;
    let closeness = inst.boxspec().closeness(ms);
    let close = closeness.holds;
    let equal = m1 == ms;
    let deep_enough = m >= ms;

    let mut info = vec![
        ("hyp.closeness".to_string(), close.to_string()),
        ("hyp.equal_moduli".to_string(), equal.to_string()),
        ("hyp.m_ge_ms".to_string(), deep_enough.to_string()),
        ("hyp.n_gt_s".to_string(), (n > s).to_string()),
        (
            "hyp.deg_gt_1".to_string(),
            format!("{}/{s}", degs.iter().filter(|&&d| d > 1).count()),
        ),
        ("reading".to_string(), opts.reading.name().to_string()),
        ("degrees".to_string(), join(&degs)),
        ("moduli".to_string(), join(&moduli)),
    ];
    for v in &closeness.violations {
        info.push((
            format!("closeness.violation.g[{}][{}]", v.i, v.j),
            format!("deg {} > {}", v.degree, v.limit),
        ));
    }

    let mut entries = Vec::new();
    let gate = |ok: bool, value: u64| ok.then_some(value);
    let reason = |why: &str| vec![why.to_string()];

    let ak_ok = m == 1 && ms == 1;
    entries.push(BoundEntry {
        name: "ax_katz",
        value: gate(ak_ok, ax_katz(n, &degs)),
        notes: if ak_ok { vec![] } else { reason("needs m = 1 and every m_k = 1") },
    });

    let kmr_ok = m >= 2 && equal && m1 == m;
    let kmr_value = kmr(n, s, m1 as u32, &degs, opts.reading);
    entries.push(BoundEntry {
        name: "kmr",
        value: gate(kmr_ok, kmr_value),
        notes: if kmr_ok { vec![] } else { reason("needs every m_k = m >= 2") },
    });
    if kmr_ok {
        let alt = kmr(n, s, m1 as u32, &degs, opts.reading.other());
        if alt != kmr_value {
            info.push((format!("info.kmr_{}", opts.reading.other().name()), alt.to_string()));
        }
    }

    let cwg_ok = m == 1 && close;
    entries.push(BoundEntry {
        name: "cwg",
        value: gate(cwg_ok, cwg(n, p, &moduli, &degs)),
        notes: if cwg_ok { vec![] } else { reason("needs m = 1 and closeness at m_s") },
    });

    entries.push(BoundEntry {
        name: "general",
        value: gate(close, general(n, m, p, &moduli, &degs)),
        notes: if close { vec![] } else { reason("box is not close to T_m at m_s") },
    });

    let stacked_ok = close && equal && deep_enough;
    let stacked_value = if deep_enough { stacked(n, s, m, m1, &degs, opts.reading) } else { 0 };
    entries.push(BoundEntry {
        name: "stacked",
        value: gate(stacked_ok, stacked_value),
        notes: if stacked_ok {
            vec![]
        } else {
            reason("needs closeness at m_s, equal moduli and m >= m_s")
        },
    });
    if stacked_ok && m1 > 1 {
        let alt = stacked(n, s, m, m1, &degs, opts.reading.other());
        if alt != stacked_value {
            info.push((format!("info.stacked_{}", opts.reading.other().name()), alt.to_string()));
        }
    }

    let single_ok = s == 1 && close && deep_enough;
    let single_value = if single_ok {
        Some(single_stacked(n, m, ms, degs[0], SingleReading::Proof))
    } else {
        None
    };
    entries.push(BoundEntry {
        name: "single_stacked",
        value: single_value,
        notes: if single_ok { vec![] } else { reason("needs one polynomial, closeness at m' and m >= m'") },
    });
    if single_ok {
        let stated = single_stacked(n, m, ms, degs[0], SingleReading::Stated);
        if Some(stated) != single_value {
            info.push(("info.single_stacked_stated".to_string(), stated.to_string()));
        }
    }

    let d: Result<Vec<u64>> = (0..s).map(|k| minimal_d(inst, k, opts.minimal_d_budget)).collect();
    match d {
        Ok(d) => {
            info.push(("minimal_d".to_string(), join(&d)));
            entries.push(BoundEntry {
                name: "improved",
                value: Some(improved(n, m, p, &moduli, &d)),
                notes: vec![],
            });
        }
        Err(e) => entries.push(BoundEntry {
            name: "improved",
            value: None,
            notes: vec![format!("minimal d refused: {e}")],
        }),
    }

    let mut verdicts = Vec::new();
    let mut status = None;
    if let Some(c) = count {
        for e in &entries {
            if let Some(v) = e.value {
                verdicts.push((e.name, bound_holds(c, v)));
            }
        }
        status = Some(if c.ord_p == Valuation::Infinite {
            Status::Vacuous
        } else if verdicts.iter().all(|(_, ok)| *ok) {
            Status::Pass
        } else {
            Status::Fail
        });
    }
    BoundReport {
        entries,
        info,
        verdicts,
        status,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boxes::{box_vars, BoxSpec};
    use crate::counting::{count_zeros, integer_poly, CountConfig};
    use crate::expr::parse_poly_in;
    use crate::fq::Fq;

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn ceil_star_and_floor() {
        assert_eq!(ceil_star(&q(1, 4)), 1);
        assert_eq!(ceil_star(&q(-5, 1)), 0);
        assert_eq!(ceil_star(&q(-1, 3)), 0);
        assert_eq!(ceil_star(&q(3, 1)), 3);
        assert_eq!(floor(&q(3, 2)), BigInt::from(1));
        assert_eq!(floor(&q(-3, 2)), BigInt::from(-2));
    }

    #[test]
    fn classical_bounds() {
        assert_eq!(ax_katz(3, &[2]), 1);
        assert_eq!(ax_katz(3, &[2, 2]), 0);
        assert_eq!(ax_katz(4, &[1, 1]), 2);
        assert_eq!(kmr(2, 1, 2, &[3], DegreeReading::Any), 1);
        assert_eq!(kmr(2, 2, 3, &[3, 3], DegreeReading::Any), 0);
        assert_eq!(kmr(3, 1, 2, &[1], DegreeReading::All), 4);
        assert_eq!(kmr(3, 2, 3, &[1, 2], DegreeReading::All), 3);
        assert_eq!(kmr(3, 2, 3, &[1, 2], DegreeReading::Any), 2);
        assert_eq!(cwg(4, 2, &[3], &[1]), 0);
        assert_eq!(cwg(10, 2, &[2], &[2]), 1);
        assert_eq!(cwg(7, 3, &[1, 1], &[2, 1]), ax_katz(7, &[2, 1]));
    }

    #[test]
    fn general_and_stacked() {
        assert_eq!(general(4, 2, 2, &[3], &[1]), 1);
        assert_eq!(general(4, 1, 2, &[3], &[1]), cwg(4, 2, &[3], &[1]));
        assert_eq!(general(2, 1, 3, &[2], &[3]), 0);
        assert_eq!(stacked(4, 1, 2, 1, &[1], DegreeReading::Any), 7);
        assert_eq!(stacked(3, 1, 2, 2, &[2], DegreeReading::Any), 2);
        assert_eq!(stacked(3, 1, 2, 2, &[2], DegreeReading::Any), kmr(3, 1, 2, &[2], DegreeReading::Any));
        assert_eq!(single_stacked(3, 2, 2, 2, SingleReading::Proof), 2);
        assert_eq!(improved(4, 2, 2, &[3], &[1]), 1);
    }

    #[test]
    fn single_polynomial_readings() {
        // n = 1 separates the readings: f = x^2 - x over Z/32 has |V| = 2
        assert_eq!(single_stacked(1, 5, 5, 2, SingleReading::Proof), 0);
        assert_eq!(single_stacked(1, 5, 5, 2, SingleReading::Stated), 2);
        for (n, m, mp, d) in [(3, 4, 2, 1), (2, 3, 3, 2), (4, 2, 1, 3)] {
            assert_eq!(
                single_stacked(n, m, mp, d, SingleReading::Proof),
                stacked(n, 1, m, mp, &[d], DegreeReading::Any)
            );
        }
    }

    fn example(gens: &[((usize, usize), &str)], f: &str) -> ProblemInstance {
        let field = Fq::prime(2).unwrap();
        let vars = box_vars(4, 2);
        let g: Vec<_> = gens.iter().map(|&(k, t)| (k, parse_poly_in(t, &vars, &field).unwrap())).collect();
        let b = BoxSpec::new(field, 4, 2, g).unwrap();
        ProblemInstance::from_integer_system(b, vec![(integer_poly(f, 4).unwrap(), 3)]).unwrap()
    }

    #[test]
    fn example_reports() {
        let inst = example(&[((2, 1), "x[0][1]*x[1][1]*x[0][2]*x[1][4]")], "x1 + 3*x2 + 5*x3 + 6*x4");
        assert_eq!(minimal_d(&inst, 0, MINIMAL_D_BUDGET).unwrap(), 1);
        let c = count_zeros(&inst, &CountConfig::default()).unwrap();
        let r = bound_report(&inst, Some(&c), &BoundOptions::default());
        assert_eq!(r.value("general"), Some(1));
        assert_eq!(r.value("improved"), Some(1));
        assert_eq!(r.status, Some(Status::Pass));

        let inst = example(
            &[
                ((2, 1), "x[0][1]*x[1][1]*x[0][2]*x[1][2]*x[0][3]"),
                ((2, 2), "x[0][1]*x[1][2]*x[0][3]*x[0][4]"),
            ],
            "x1 + 3*x2 + 4*x3 + 7*x4",
        );
        let c = count_zeros(&inst, &CountConfig::default()).unwrap();
        assert_eq!(c.cardinality, 30);
        let r = bound_report(&inst, Some(&c), &BoundOptions::default());
        assert!(!r.entry("general").unwrap().applicable());
        assert!(r.verdicts.iter().all(|(n, _)| *n != "general"));
        assert_eq!(r.info_value("hyp.closeness"), Some("false"));
    }

    #[test]
    fn minimal_d_teichmuller_box() {
        let field = Fq::prime(2).unwrap();
        let b = BoxSpec::teichmuller(field, 2, 1).unwrap();
        let inst = ProblemInstance::from_integer_system(b.clone(), vec![(integer_poly("x1^2", 2).unwrap(), 1)]).unwrap();
        assert_eq!(minimal_d(&inst, 0, MINIMAL_D_BUDGET).unwrap(), 2);
        let inst = ProblemInstance::from_integer_system(
            b,
            vec![(integer_poly("x1^2*x2 + x2", 2).unwrap(), 1)],
        )
        .unwrap();
        assert_eq!(minimal_d(&inst, 0, MINIMAL_D_BUDGET).unwrap(), 3);
        assert!(matches!(minimal_d(&inst, 0, 0), Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn empty_variety_is_vacuous() {
        let field = Fq::prime(2).unwrap();
        let b = BoxSpec::teichmuller(field, 1, 1).unwrap();
        let inst = ProblemInstance::from_integer_system(b, vec![(integer_poly("x1^2 + x1 + 1", 1).unwrap(), 1)]).unwrap();
        let c = count_zeros(&inst, &CountConfig::default()).unwrap();
        assert_eq!(c.cardinality, 0);
        let r = bound_report(&inst, Some(&c), &BoundOptions::default());
        assert_eq!(r.status, Some(Status::Vacuous));
        assert!(r.verdicts.iter().all(|(_, ok)| *ok));
    }
}
