//! Structural and randomized self-checks shared by the CLI and the tests.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::binomial;
use rand::Rng;

use crate::bounds::{bound_report, BoundOptions, DegreeReading};
use crate::boxes::{box_vars, BoxSpec};
use crate::counting::{count_zeros, CountConfig, ProblemInstance};
use crate::error::Result;
use crate::expr::parse_poly_in;
use crate::fq::Fq;
use crate::galois::{DigitVec, GaloisRing};
use crate::poly::MultiPoly;
use crate::ring::{Integers, Ring};
use crate::sampling::{random_box, random_instance, random_system_poly, seeded, InstanceShape};
use crate::witt::{
    self, ghost_check, ghost_check_polys, twisted_digit_polys, witt_op_polys, witt_vars, WittGenRequest, WittOp,
};

/// Result of one suite: how many checks ran and which failed.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SuiteOutcome {
    pub name: &'static str,
    pub checks: u64,
    pub failures: Vec<String>,
}

impl SuiteOutcome {
    fn new(name: &'static str) -> Self {
        Self {
            name,
            ..Default::default()
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn line(&self) -> String {
        format!(
            "suite.{}={} checks={} failures={}",
            self.name,
            if self.passed() { "PASS" } else { "FAIL" },
            self.checks,
            self.failures.len()
        )
    }
}

fn req(p: u64, n: usize, r: usize, kind: WittOp) -> WittGenRequest {
    WittGenRequest::new(p, n, r, kind).expect("valid request")
}

/// S_1 = X1 + Y1 - sum_{0<i<p} (C(p,i)/p) X0^i Y0^(p-i) and
/// M_1 = X0^p Y1 + X1 Y0^p + p X1 Y1, over the binary variables.
pub fn closed_forms(p: u64) -> [MultiPoly<BigInt>; 4] {
    let z = Integers;
    let vars = witt_vars(1, 2);
    let pu = p as u32;
    let mono = |x0: u32, y0: u32, x1: u32, y1: u32| vec![x0, y0, x1, y1];
    let build = |terms: Vec<(Vec<u32>, BigInt)>| MultiPoly::from_terms(vars.clone(), terms, &z).expect("arity");
    let s0 = build(vec![(mono(1, 0, 0, 0), 1.into()), (mono(0, 1, 0, 0), 1.into())]);
    let mut s1_terms = vec![(mono(0, 0, 1, 0), BigInt::from(1)), (mono(0, 0, 0, 1), BigInt::from(1))];
    for i in 1..pu {
        let c = binomial(BigInt::from(p), BigInt::from(i)) / BigInt::from(p);
        s1_terms.push((mono(i, pu - i, 0, 0), -c));
    }
    let s1 = build(s1_terms);
    let m0 = build(vec![(mono(1, 1, 0, 0), 1.into())]);
    let m1 = build(vec![
        (mono(pu, 0, 0, 1), 1.into()),
        (mono(0, pu, 1, 0), 1.into()),
        (mono(0, 0, 1, 1), BigInt::from(p)),
    ]);
    [s0, s1, m0, m1]
}

/// Closed forms for p in {2, 3, 5}, ghost identities for p, r in {2, 3}
/// and k <= 3, and a mutated S_1 as negative control.
pub fn ghost_suite() -> SuiteOutcome {
    let mut out = SuiteOutcome::new("ghost");
    for p in [2u64, 3, 5] {
        let [s0, s1, m0, m1] = closed_forms(p);
        let s = witt_op_polys(&req(p, 1, 2, WittOp::Sum)).expect("generation");
        let m = witt_op_polys(&req(p, 1, 2, WittOp::Product)).expect("generation");
        for (name, got, want) in [("S0", &s[0], &s0), ("S1", &s[1], &s1), ("M0", &m[0], &m0), ("M1", &m[1], &m1)] {
            out.check(got == want, || {
                format!("p={p} {name}: got {} want {}", got.render(&Integers), want.render(&Integers))
            });
        }
    }
    for p in [2u64, 3] {
        for r in [2usize, 3] {
            for kind in [WittOp::Sum, WittOp::Product] {
                let rq = req(p, 3, r, kind);
                out.check(ghost_check(&rq), || format!("ghost identity fails for {rq:?}"));
            }
        }
    }
    let rq = req(2, 1, 2, WittOp::Sum);
    let mut mutated = witt_op_polys(&rq).expect("generation").as_ref().clone();
    let one = MultiPoly::constant(mutated[1].vars().clone(), BigInt::from(1), &Integers);
    mutated[1] = mutated[1].add(&one, &Integers);
    out.check(!ghost_check_polys(&rq, &mutated), || "mutated S_1 passed the ghost check".into());
    out
}

/// Weighted homogeneity, twisted total homogeneity, the d_j degree bounds
/// and specialization from r = 3 to r = 2, for p in {2, 3}, n <= 2.
pub fn homogeneity_suite() -> SuiteOutcome {
    let mut out = SuiteOutcome::new("homogeneity");
    for p in [2u64, 3] {
        for r in [2usize, 3] {
            for kind in [WittOp::Sum, WittOp::Product] {
                let rq = req(p, 2, r, kind);
                let polys = witt_op_polys(&rq).expect("generation");
                let twisted = twisted_digit_polys(&rq).expect("generation");
                let factor = if kind == WittOp::Sum { 1 } else { r as u64 };
                let weights: Vec<u64> = (0..=2).flat_map(|i| std::iter::repeat_n(p.pow(i), r)).collect();
                let ones = vec![1u64; weights.len()];
                for n in 0..=2usize {
                    let want = factor * p.pow(n as u32);
                    let got = polys[n].homogeneous_degree(&weights);
                    out.check(got == Some(want), || {
                        format!("{}_{n}^({r}) p={p}: weighted degree {got:?}, want {want}", kind.symbol())
                    });
                    let got = twisted[n].homogeneous_degree(&ones);
                    out.check(got == Some(want), || {
                        format!("twisted {}_{n}^({r}) p={p}: total degree {got:?}, want {want}", kind.symbol())
                    });
                    for mask in 0..(1u32 << r) {
                        let d: Vec<u64> = (0..r).map(|j| 1 + u64::from(mask >> j & 1)).collect();
                        let w: Vec<u64> = (0..=2).flat_map(|i| d.iter().map(move |dj| dj * p.pow(i))).collect();
                        let limit = match kind {
                            WittOp::Sum => d.iter().max().copied().unwrap_or(1),
                            WittOp::Product => d.iter().sum(),
                        } * p.pow(n as u32);
                        let got = polys[n].weighted_degree(&w);
                        out.check(got <= limit, || {
                            format!("{}_{n}^({r}) p={p} d={d:?}: weighted degree {got} > {limit}", kind.symbol())
                        });
                    }
                }
            }
        }
        for kind in [WittOp::Sum, WittOp::Product] {
            let three = witt_op_polys(&req(p, 2, 3, kind)).expect("generation");
            let two = witt_op_polys(&req(p, 2, 2, kind)).expect("generation");
            let target = witt_vars(2, 2);
            for n in 0..=2usize {
                let mut f = three[n].clone();
                for i in (0..=2usize).rev() {
                    let idx = witt::witt_var_index(i, 3, 3);
                    let value = if kind == WittOp::Product && i == 0 { 1 } else { 0 };
                    f = f.specialize(idx, &BigInt::from(value), &Integers);
                }
                let f = f.rename(&target).expect("same arity");
                out.check(f == two[n], || {
                    format!("{}_{n}: specializing r = 3 does not give r = 2 (p={p})", kind.symbol())
                });
            }
        }
    }
    out
}

/// Witt digit arithmetic against direct ring arithmetic, all pairs.
pub fn cross_check_suite() -> SuiteOutcome {
    let mut out = SuiteOutcome::new("cross_check");
    let rings = [(2u64, 1usize, 2u32), (2, 1, 3), (3, 1, 2), (2, 2, 2)];
    for (p, h, m) in rings {
        let field = Fq::with_degree(p, h).expect("field");
        let ring = GaloisRing::new(field, m).expect("ring");
        let elems: Vec<_> = ring.elements().collect();
        let digits: Vec<DigitVec> = elems.iter().map(|a| ring.to_digits(a)).collect();
        for (a, da) in elems.iter().zip(&digits) {
            for (b, db) in elems.iter().zip(&digits) {
                for kind in [WittOp::Sum, WittOp::Product] {
                    let direct = match kind {
                        WittOp::Sum => ring.add(a, b),
                        WittOp::Product => ring.mul(a, b),
                    };
                    let via = ring
                        .witt_digit_op(da, db, kind)
                        .and_then(|d| ring.from_digits(&d));
                    out.check(via.as_ref() == Ok(&direct), || {
                        format!("GR({}^{m},{h}) {:?} {} {:?}: witt {via:?} vs direct {direct:?}", p, a, kind.symbol(), b)
                    });
                }
            }
        }
    }
    out
}

/// For every digit tuple (x_ij), i < m, j <= r: the Teichmüller sum is 0
/// mod p^m, iff the untwisted digit functions all vanish, iff the twisted
/// polynomials s_n^(r) all vanish.
pub fn vanishing_suite(field: &Fq, max_m: usize, max_r: usize) -> SuiteOutcome {
    let mut out = SuiteOutcome::new("vanishing");
    let q = field.q();
    let p = field.p();
    for m in 1..=max_m {
        let ring = GaloisRing::new(field.clone(), m as u32).expect("ring");
        for r in 2..=max_r {
            let rq = req(p, m - 1, r, WittOp::Sum);
            let big = witt_op_polys(&rq).expect("generation");
            let twisted = twisted_digit_polys(&rq).expect("generation");
            let total = q.pow((m * r) as u32);
            for code in 0..total {
                let mut c = code;
                let x: Vec<_> = (0..m * r)
                    .map(|_| {
                        let a = field.element(c % q);
                        c /= q;
                        a
                    })
                    .collect();
                let sum = (0..r).fold(ring.zero(), |acc, j| {
                    let digits = DigitVec((0..m).map(|i| x[i * r + j].clone()).collect());
                    ring.add(&acc, &ring.from_digits(&digits).expect("length m"))
                });
                let route_i = ring.is_zero(&sum);
                let witt_coords: Vec<_> = x
                    .iter()
                    .enumerate()
                    .map(|(k, a)| field.frobenius(a, (k / r) as u64))
                    .collect();
                let untwisted: Vec<_> = (0..m)
                    .map(|n| field.frobenius_inverse(&witt::eval_in(&big[n], field, &witt_coords), n as u64))
                    .collect();
                let route_ii = untwisted.iter().all(|d| field.is_zero(d));
                let route_iii = twisted
                    .iter()
                    .all(|s| field.is_zero(&witt::eval_in(s, field, &x)));
                out.check(route_i == route_ii && route_ii == route_iii, || {
                    format!("q={q} m={m} r={r} tuple {code}: (i)={route_i} (ii)={route_ii} (iii)={route_iii}")
                });
                out.check(ring.to_digits(&sum).0 == untwisted, || {
                    format!("q={q} m={m} r={r} tuple {code}: digit functions disagree with the ring sum")
                });
            }
        }
    }
    out
}

/// |V over B_m| = q^(n(m - m_s)) |V over T_{m_s}| for m > m_s, q = 2.
pub fn stacking_suite(seed: u64, cases: usize) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("stacking");
    let field = Fq::prime(2)?;
    let mut rng = seeded(seed);
    let cfg = CountConfig::default();
    for case in 0..cases {
        let n = rng.gen_range(1..=3usize);
        let m = rng.gen_range(2..=3usize);
        let ms = rng.gen_range(1..m) as u32;
        let s = rng.gen_range(1..=2usize);
        let ring = GaloisRing::new(field.clone(), ms)?;
        let mut moduli: Vec<u32> = (0..s).map(|_| rng.gen_range(1..=ms)).collect();
        moduli[0] = ms;
        let system: Vec<_> = moduli
            .iter()
            .map(|&mk| {
                let d = rng.gen_range(1..=3);
                (random_system_poly(&mut rng, &ring, n, d, 4), mk)
            })
            .collect();
        let boxspec = random_box(&mut rng, &field, n, m, m + 2, None, 0.6)?;
        let inst = ProblemInstance::new(boxspec, system.clone())?;
        let base = ProblemInstance::new(BoxSpec::teichmuller(field.clone(), n, ms as usize)?, system)?;
        let big = count_zeros(&inst, &cfg)?.cardinality;
        let small = count_zeros(&base, &cfg)?.cardinality;
        let factor = 2u64.pow((n * (m - ms as usize)) as u32);
        out.check(big == factor * small, || {
            format!("case {case}: n={n} m={m} m_s={ms}: {big} != {factor} * {small}")
        });
    }
    Ok(out)
}

/// Interpolating an enumerated box gives back the same generators (q = 2,
/// nm <= 8, precision <= 4), including the first worked example's box.
pub fn round_trip_suite(seed: u64, cases: usize) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("round_trip");
    let field = Fq::prime(2)?;
    let vars = box_vars(4, 2);
    let g = parse_poly_in("x[0][1]*x[1][1]*x[0][2]*x[1][4]", &vars, &field)?;
    let mut specs = vec![(BoxSpec::new(field.clone(), 4, 2, [((2, 1), g)])?, 3usize)];
    let mut rng = seeded(seed);
    while specs.len() < cases + 1 {
        let n = rng.gen_range(1..=4usize);
        let m = rng.gen_range(1..=(8 / n).min(3));
        let precision = rng.gen_range(m + 1..=4);
        specs.push((random_box(&mut rng, &field, n, m, precision, None, 0.7)?, precision));
    }
    for (k, (spec, precision)) in specs.iter().enumerate() {
        let rows: Vec<_> = spec.points(*precision)?.collect();
        let back = BoxSpec::from_table(field.clone(), spec.n(), spec.m(), *precision, &rows);
        out.check(back.as_ref() == Ok(spec), || {
            format!("case {k}: n={} m={} precision={precision}: round trip differs", spec.n(), spec.m())
        });
    }
    Ok(out)
}

/// Per-bound tallies of the randomized soundness run under one reading.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SoundnessTally {
    pub checked: BTreeMap<&'static str, u64>,
    pub violations: Vec<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SoundnessOutcome {
    pub instances: usize,
    pub any: SoundnessTally,
    pub all: SoundnessTally,
    /// Instances where the two readings give different bound values.
    pub discrepancies: Vec<String>,
}

/// Random instances with p in {2, 3}, h <= 2, q^(nm) <= 6561, s <= 2 and
/// boxes close to T_m at m_s; every applicable bound is checked under both
/// degree readings.
pub fn soundness_suite(seed: u64, cases: usize) -> Result<SoundnessOutcome> {
    let fields = [
        Fq::with_degree(2, 1)?,
        Fq::with_degree(3, 1)?,
        Fq::with_degree(2, 2)?,
        Fq::with_degree(3, 2)?,
    ];
    let mut rng = seeded(seed);
    let mut out = SoundnessOutcome::default();
    let cfg = CountConfig::default();
    for case in 0..cases {
        let field = fields[rng.gen_range(0..fields.len())].clone();
        let q = field.q();
        let shapes: Vec<(usize, usize)> = (1..=6usize)
            .flat_map(|n| (1..=3usize).map(move |m| (n, m)))
            .filter(|&(n, m)| q.checked_pow((n * m) as u32).is_some_and(|v| v <= 6561))
            .collect();
        let (n, m) = shapes[rng.gen_range(0..shapes.len())];
        let s = rng.gen_range(1..=2usize);
        let moduli: Vec<u32> = if rng.gen_bool(0.5) {
            vec![rng.gen_range(1..=m as u32); s]
        } else {
            (0..s).map(|_| rng.gen_range(1..=3)).collect()
        };
        let shape = InstanceShape {
            field,
            n,
            m,
            moduli,
            max_degree: 3,
            max_terms: 4,
            close: true,
            density: 0.6,
        };
        let inst = random_instance(&mut rng, &shape)?;
        let count = count_zeros(&inst, &cfg)?;
        let describe = || {
            let sys: Vec<_> = (0..inst.system().len()).map(|k| inst.render_congruence(k)).collect();
            format!(
                "case {case}: q={} n={n} m={m} |V|={} ord_p={} system=[{}] box=[{}]",
                q,
                count.cardinality,
                count.ord_p,
                sys.join("; "),
                inst.boxspec().render().join("; ")
            )
        };
        let mut values = Vec::new();
        for reading in [DegreeReading::Any, DegreeReading::All] {
            let opts = BoundOptions {
                reading,
                ..Default::default()
            };
            let report = bound_report(&inst, Some(&count), &opts);
            let tally = match reading {
                DegreeReading::Any => &mut out.any,
                DegreeReading::All => &mut out.all,
            };
            for (name, ok) in &report.verdicts {
                *tally.checked.entry(name).or_default() += 1;
                if !ok {
                    tally.violations.push(format!(
                        "{name}={} under {}: {}",
                        report.value(name).unwrap_or(0),
                        reading.name(),
                        describe()
                    ));
                }
            }
            values.push(
                report
                    .entries
                    .iter()
                    .map(|e| (e.name, e.value))
                    .collect::<Vec<_>>(),
            );
        }
        if values[0] != values[1] {
            let diff: Vec<_> = values[0]
                .iter()
                .zip(&values[1])
                .filter(|(a, b)| a != b)
                .map(|((name, a), (_, b))| format!("{name}: any={a:?} all={b:?}"))
                .collect();
            out.discrepancies.push(format!("{} ({})", describe(), diff.join(", ")));
        }
        out.instances += 1;
    }
    Ok(out)
}

/// The six structural suites run by `selftest`, in order.
pub fn run_structural(seed: u64) -> Result<Vec<SuiteOutcome>> {
    let f2 = Fq::prime(2)?;
    Ok(vec![
        ghost_suite(),
        homogeneity_suite(),
        cross_check_suite(),
        vanishing_suite(&f2, 3, 3),
        stacking_suite(seed, 50)?,
        round_trip_suite(seed, 20)?,
    ])
}
