use std::collections::HashSet;

use num_bigint::BigInt;
use proptest::prelude::*;
use wittbox_core::bounds::{
    self, ax_katz, cwg, general, improved, kmr, minimal_d, single_stacked, stacked, DegreeReading, SingleReading,
};
use wittbox_core::boxes::{box_vars, BoxSpec};
use wittbox_core::counting::{count_zeros, count_zeros_naive, CountConfig, ProblemInstance};
use wittbox_core::expr::parse_poly;
use wittbox_core::sampling::{random_box, random_instance, random_reduced_poly, seeded, InstanceShape};
use wittbox_core::witt::WittOp;
use wittbox_core::{Fq, GaloisRing, Integers, MultiPoly, Ring, Vars};

fn field(p: u64, h: usize) -> Fq {
    Fq::with_degree(p, h).unwrap()
}

fn small_field() -> impl Strategy<Value = (u64, usize)> {
    prop_oneof![Just((2u64, 1usize)), Just((3, 1)), Just((2, 2)), Just((3, 2)), Just((5, 1))]
}

fn shape_for(f: Fq, n: usize, m: usize, moduli: Vec<u32>, close: bool) -> InstanceShape {
    InstanceShape {
        field: f,
        n,
        m,
        moduli,
        max_degree: 3,
        max_terms: 4,
        close,
        density: 0.6,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gr_digit_arithmetic_matches_direct(
        (p, h) in prop_oneof![Just((3u64, 1usize)), Just((2, 2)), Just((5, 2)), Just((2, 1))],
        m in 1u32..=4,
        ia in any::<u64>(),
        ib in any::<u64>(),
    ) {
        let ring = GaloisRing::new(field(p, h), m).unwrap();
        let card = ring.cardinality().unwrap();
        let (a, b) = (ring.element(ia % card), ring.element(ib % card));
        let (da, db) = (ring.to_digits(&a), ring.to_digits(&b));
        prop_assert_eq!(ring.from_digits(&da).unwrap(), a.clone());
        let sum = ring.from_digits(&ring.witt_digit_op(&da, &db, WittOp::Sum).unwrap()).unwrap();
        prop_assert_eq!(sum, ring.add(&a, &b));
        let prod = ring.from_digits(&ring.witt_digit_op(&da, &db, WittOp::Product).unwrap()).unwrap();
        prop_assert_eq!(prod, ring.mul(&a, &b));
    }

    #[test]
    fn frobenius_is_a_field_automorphism((p, h) in small_field(), ia in any::<u64>(), ib in any::<u64>(), e in 0u64..6) {
        let f = field(p, h);
        let (a, b) = (f.element(ia % f.q()), f.element(ib % f.q()));
        let fa = f.frobenius(&a, e);
        prop_assert_eq!(f.frobenius(&f.add(&a, &b), e), f.add(&fa, &f.frobenius(&b, e)));
        prop_assert_eq!(f.frobenius(&f.mul(&a, &b), e), f.mul(&fa, &f.frobenius(&b, e)));
        prop_assert_eq!(f.frobenius_inverse(&fa, e), a);
    }

    #[test]
    fn exponent_reduction_preserves_functions((p, h) in small_field(), seed in any::<u64>()) {
        let f = field(p, h);
        let vars = Vars::indexed("y", 3);
        let mut rng = seeded(seed);
        let g = random_reduced_poly(&mut rng, &f, &vars, 6, 4);
        let big = g.map_exponents(&f, |e| e.iter().map(|&x| if x == 0 { 0 } else { x + (f.q() as u32 - 1) }).collect());
        let reduced = big.reduce_exponents(f.q(), &f);
        prop_assert!(reduced.is_reduced(f.q()));
        prop_assert_eq!(&reduced, &g);
        for k in 0..f.q().pow(3).min(64) {
            let pt: Vec<_> = (0..3).map(|i| f.element(k / f.q().pow(i) % f.q())).collect();
            prop_assert_eq!(big.eval(&f, &pt), g.eval(&f, &pt));
        }
    }

    #[test]
    fn render_parse_round_trip(seed in any::<u64>()) {
        let f = field(7, 1);
        let vars = Vars::indexed("x", 3);
        let g = random_reduced_poly(&mut seeded(seed), &f, &vars, 5, 5);
        let ints: MultiPoly<BigInt> = g.map_coeffs(&Integers, |c| BigInt::from(c.coeffs()[0]) - 3);
        let text = ints.render(&Integers);
        prop_assert_eq!(parse_poly(&text, &vars).unwrap(), ints);
    }

    #[test]
    fn box_enumeration_is_bijective_mod_p_m((p, h) in small_field(), n in 1usize..=3, m in 1usize..=3, seed in any::<u64>()) {
        let f = field(p, h);
        prop_assume!(f.q().pow((n * m) as u32) <= 512);
        let spec = random_box(&mut seeded(seed), &f, n, m, m + 2, None, 0.7).unwrap();
        let ring = GaloisRing::new(f.clone(), m as u32).unwrap();
        let full = GaloisRing::new(f.clone(), (m + 2) as u32).unwrap();
        let mut seen = HashSet::new();
        for pt in spec.points(m + 2).unwrap() {
            let coords = pt.coordinates(&full).unwrap();
            let reduced: Vec<_> = coords.iter().map(|y| full.truncate(y, &ring)).collect();
            prop_assert!(seen.insert(reduced));
        }
        prop_assert_eq!(seen.len() as u64, f.q().pow((n * m) as u32));
    }

    #[test]
    fn interpolation_round_trip_and_degree_ceiling(n in 1usize..=4, m in 1usize..=2, extra in 1usize..=2, seed in any::<u64>(), split in any::<bool>()) {
        let f = field(2, 1);
        prop_assume!(n * m <= 8);
        let precision = m + extra;
        let mut rng = seeded(seed);
        let spec = if split {
            // generators in column j only
            let vars = box_vars(n, m);
            let mut gens = Vec::new();
            for i in m..precision {
                for j in 1..=n {
                    let col = Vars::new((0..m).map(|a| format!("x[{a}][{j}]")));
                    let g = random_reduced_poly(&mut rng, &f, &col, m as u64, 3);
                    gens.push(((i, j), g.with_vars(&vars).unwrap()));
                }
            }
            BoxSpec::split(f.clone(), n, m, gens).unwrap()
        } else {
            random_box(&mut rng, &f, n, m, precision, None, 0.8).unwrap()
        };
        let rows: Vec<_> = spec.points(precision).unwrap().collect();
        let back = BoxSpec::from_table(f.clone(), n, m, precision, &rows).unwrap();
        prop_assert_eq!(&back, &spec);
        let ceiling = if split { m as u64 } else { (n * m) as u64 };
        for g in back.generators().values() {
            prop_assert!(g.total_degree() <= ceiling * (f.q() - 1));
        }
    }

    #[test]
    fn counting_paths_agree_and_ignore_partitioning((p, h) in small_field(), n in 1usize..=3, m in 1usize..=2, s in 1usize..=2, seed in any::<u64>(), parts in 1usize..=9) {
        let f = field(p, h);
        prop_assume!(f.q().pow((n * m) as u32) <= 729);
        let mut rng = seeded(seed);
        let moduli: Vec<u32> = (0..s).map(|k| 1 + ((seed >> k) % 3) as u32).collect();
        let inst = random_instance(&mut rng, &shape_for(f, n, m, moduli, false)).unwrap();
        let reference = count_zeros_naive(&inst).unwrap();
        let cfg = CountConfig { partitions: parts, ..Default::default() };
        prop_assert_eq!(count_zeros(&inst, &cfg).unwrap(), reference.clone());
        // reversing the system order changes nothing
        let reversed: Vec<_> = inst.system().iter().rev().map(|c| (c.poly.clone(), c.modulus)).collect();
        let again = ProblemInstance::new(inst.boxspec().clone(), reversed).unwrap();
        prop_assert_eq!(count_zeros(&again, &CountConfig::default()).unwrap(), reference);
    }

    #[test]
    fn raising_a_modulus_never_adds_zeros((p, h) in small_field(), n in 1usize..=3, seed in any::<u64>(), k in 0usize..2) {
        let f = field(p, h);
        prop_assume!(f.q().pow(2 * n as u32) <= 729);
        let inst = random_instance(&mut seeded(seed), &shape_for(f, n, 2, vec![1, 2], false)).unwrap();
        let mut moduli = inst.moduli();
        moduli[k] += 1;
        let raised = inst.with_moduli(&moduli).unwrap();
        let cfg = CountConfig::default();
        prop_assert!(count_zeros(&raised, &cfg).unwrap().cardinality <= count_zeros(&inst, &cfg).unwrap().cardinality);
    }

    #[test]
    fn count_report_valuation_is_exact((p, h) in small_field(), n in 1usize..=2, seed in any::<u64>()) {
        let f = field(p, h);
        let inst = random_instance(&mut seeded(seed), &shape_for(f.clone(), n, 1, vec![2], false)).unwrap();
        let r = count_zeros(&inst, &CountConfig::default()).unwrap();
        match r.ord_p {
            wittbox_core::Valuation::Finite(e) => {
                prop_assert!(r.cardinality > 0);
                prop_assert_eq!(r.cardinality % p.pow(e), 0);
                prop_assert_ne!(r.cardinality % p.pow(e + 1), 0);
            }
            wittbox_core::Valuation::Infinite => prop_assert_eq!(r.cardinality, 0),
        }
    }

    #[test]
    fn bound_formula_consistency(
        n in 1usize..=12,
        m in 1usize..=4,
        p in prop_oneof![Just(2u64), Just(3), Just(5)],
        degs in prop::collection::vec(1u64..=5, 1..=3),
        moduli_seed in any::<u64>(),
    ) {
        let s = degs.len();
        let moduli: Vec<u32> = (0..s).map(|k| 1 + ((moduli_seed >> (4 * k)) % 3) as u32).collect();
        prop_assert_eq!(general(n, 1, p, &moduli, &degs), cwg(n, p, &moduli, &degs));
        prop_assert_eq!(cwg(n, p, &vec![1; s], &degs), ax_katz(n, &degs));
        prop_assert_eq!(improved(n, m, p, &moduli, &degs), general(n, m, p, &moduli, &degs));
        let smaller: Vec<u64> = degs.iter().map(|&d| (d / 2).max(1)).collect();
        prop_assert!(improved(n, m, p, &moduli, &smaller) >= general(n, m, p, &moduli, &degs));
        prop_assert_eq!(stacked(n, s, 1, 1, &degs, DegreeReading::Any), ax_katz(n, &degs));
        for reading in [DegreeReading::Any, DegreeReading::All] {
            if m >= 2 {
                prop_assert_eq!(stacked(n, s, m, m, &degs, reading), kmr(n, s, m as u32, &degs, reading));
            }
        }
        // the single-polynomial otherwise case equals the system form at s = 1
        for m_prime in 1..=m {
            prop_assert_eq!(
                single_stacked(n, m, m_prime, 1, SingleReading::Proof),
                stacked(n, 1, m, m_prime, &[1], DegreeReading::Any)
            );
            if m_prime > 1 {
                prop_assert_eq!(single_stacked(n, m, m_prime, 1, SingleReading::Stated), (n * m - m_prime) as u64);
            }
        }
    }

    #[test]
    fn minimal_d_never_exceeds_degree_under_closeness((p, h) in small_field(), n in 1usize..=3, m in 1usize..=3, seed in any::<u64>()) {
        let f = field(p, h);
        let moduli = vec![1 + (seed % 3) as u32, 1 + ((seed >> 8) % 3) as u32];
        let inst = random_instance(&mut seeded(seed), &shape_for(f, n, m, moduli, true)).unwrap();
        for (k, deg) in inst.degrees().into_iter().enumerate() {
            let d = minimal_d(&inst, k, bounds::MINIMAL_D_BUDGET).unwrap();
            prop_assert!(d >= 1 && d <= deg, "d = {} exceeds deg = {}", d, deg);
        }
    }
}

#[test]
fn stacking_law_small_exhaustive() {
    let f = field(2, 1);
    for seed in 0..30u64 {
        let n = 1 + (seed % 3) as usize;
        let inst = random_instance(&mut seeded(seed), &shape_for(f.clone(), n, 3, vec![1, 2], false)).unwrap();
        let base = inst.with_box(BoxSpec::teichmuller(f.clone(), n, 2).unwrap()).unwrap();
        let cfg = CountConfig::default();
        let big = count_zeros(&inst, &cfg).unwrap().cardinality;
        let small = count_zeros(&base, &cfg).unwrap().cardinality;
        assert_eq!(big, 2u64.pow(n as u32) * small, "seed {seed}");
    }
}
