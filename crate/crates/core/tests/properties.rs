use byzline_core::evaluation::{worst_case_cr, EvalRequest, Mode};
use byzline_core::exactnum::{format_scalar, parse_scalar, phi, ratio, Scalar};
use byzline_core::frr::frr_plan;
use byzline_core::line_model::{first_meet_time, gather_time, Configuration, ContactIndex, RobotId};
use byzline_core::strategies::{generate_plan, ssi_plan_with_phases, StrategyKind};
use num_bigint::BigInt;
use num_traits::Signed;
use proptest::prelude::*;

fn small_rational() -> impl Strategy<Value = (i64, i64)> {
    (-60i64..=60, 1i64..=12)
}

fn scalar() -> impl Strategy<Value = Scalar> {
    (small_rational(), small_rational()).prop_map(|((an, ad), (bn, bd))| Scalar::new(ratio(an, ad), ratio(bn, bd)))
}

fn nonzero_scalar() -> impl Strategy<Value = Scalar> {
    scalar().prop_filter("nonzero", |s| !s.is_zero())
}

/// Rational positions with small denominators; duplicates allowed.
fn config(n: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Configuration> {
    prop::collection::vec(small_rational(), n)
        .prop_map(|v| Configuration::new(v.into_iter().map(|(p, d)| Scalar::from_ratio(p, d)).collect()).unwrap())
}

fn distinct_config(n: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Configuration> {
    prop::collection::btree_set(-40i64..=40, n).prop_flat_map(|set| {
        let len = set.len();
        // distinct integer parts plus a fraction in [0, 1) keep positions apart
        (Just(set), prop::collection::vec(0i64..12, len)).prop_map(|(set, frac)| {
            let pos: Vec<Scalar> = set.into_iter().zip(frac).map(|(p, k)| Scalar::from_ratio(p * 12 + k, 12)).collect();
            Configuration::new(pos).unwrap()
        })
    })
}

/// Sign of `a + b*sqrt(5)` from a 60-digit integer square root, independent
/// of the library's exact comparison.
fn decimal_sign(s: &Scalar) -> i8 {
    let scale = BigInt::from(10u32).pow(60);
    let root5 = (BigInt::from(5) * &scale * &scale).sqrt();
    let (a, b) = (s.rational_part(), s.sqrt5_part());
    let lhs = a.numer() * b.denom() * &scale + b.numer() * a.denom() * &root5;
    // the truncated root is off by less than one unit
    let margin = b.numer().abs() * a.denom() * 2;
    if lhs > margin {
        1
    } else if lhs < -margin {
        -1
    } else {
        0
    }
}

proptest! {
    #[test]
    fn field_axioms(a in scalar(), b in scalar(), c in scalar()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!((&a + &b) + &c, &a + (&b + &c));
        prop_assert_eq!((&a * &b) * &c, &a * (&b * &c));
        prop_assert_eq!(&a * (&b + &c), &a * &b + &a * &c);
        prop_assert_eq!(&a - &a, Scalar::zero());
    }

    #[test]
    fn reciprocal_inverts(a in nonzero_scalar()) {
        prop_assert_eq!(&a * &a.recip().unwrap(), Scalar::one());
        prop_assert!(a.norm() != ratio(0, 1));
    }

    #[test]
    fn sign_matches_high_precision(a in scalar()) {
        let expected = decimal_sign(&a);
        if expected != 0 {
            prop_assert_eq!(a.signum(), expected);
        } else {
            prop_assert!(a.is_zero());
        }
    }

    #[test]
    fn order_is_translation_invariant(a in scalar(), b in scalar(), c in scalar()) {
        prop_assert_eq!(a < b, &a + &c < &b + &c);
    }

    #[test]
    fn text_round_trip(a in scalar()) {
        prop_assert_eq!(parse_scalar(&format_scalar(&a)).unwrap(), a);
    }

    #[test]
    fn first_meet_is_symmetric(cfg in config(2..=6), pick in any::<prop::sample::Index>()) {
        let plan = generate_plan(StrategyKind::Ssi, &cfg, 0, None).unwrap();
        let i = pick.index(cfg.len());
        let j = (i + 1) % cfg.len();
        let (a, b) = (plan.trajectory(RobotId(i)), plan.trajectory(RobotId(j)));
        prop_assert_eq!(first_meet_time(a, b), first_meet_time(b, a));
    }

    #[test]
    fn gather_time_grows_with_the_subset(cfg in config(3..=7), mask in 1u32..128) {
        let plan = generate_plan(StrategyKind::Ssi, &cfg, 0, None).unwrap();
        let n = cfg.len();
        let sub: Vec<RobotId> = (0..n).filter(|i| mask & (1 << i) != 0).map(RobotId).collect();
        prop_assume!(!sub.is_empty());
        let all: Vec<RobotId> = (0..n).map(RobotId).collect();
        prop_assert!(gather_time(&plan, &sub).unwrap() <= gather_time(&plan, &all).unwrap());
        prop_assert_eq!(&gather_time(&plan, &all).unwrap(), plan.all_gather_time());
    }

    #[test]
    fn contact_index_agrees_with_direct_scan(cfg in distinct_config(3..=6), mask in 1u32..64, mtc in any::<bool>()) {
        let kind = if mtc { StrategyKind::Mtc } else { StrategyKind::Doubling };
        let cfg = if mtc { cfg } else {
            Configuration::new(cfg.positions().iter().map(|p| p * &Scalar::from_int(12)).collect()).unwrap()
        };
        let plan = generate_plan(kind, &cfg, 1, None).unwrap();
        let index = ContactIndex::build(&plan).unwrap();
        let sub: Vec<RobotId> = (0..cfg.len()).filter(|i| mask & (1 << i) != 0).map(RobotId).collect();
        prop_assume!(!sub.is_empty());
        prop_assert_eq!(index.gather_time(&sub).unwrap(), gather_time(&plan, &sub).unwrap());
    }

    #[test]
    fn plans_are_deterministic(cfg in distinct_config(3..=6)) {
        for kind in [StrategyKind::Ssi, StrategyKind::ScaledDoubling, StrategyKind::Mtc] {
            let a = generate_plan(kind, &cfg, 1, None).unwrap();
            let b = generate_plan(kind, &cfg, 1, None).unwrap();
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn ratios_at_least_one_and_at_most_dominates(cfg in config(3..=6)) {
        let f = cfg.len() - 2;
        let plan = generate_plan(StrategyKind::Ssi, &cfg, f, None).unwrap();
        let at_most = worst_case_cr(&plan, &EvalRequest::new(cfg.clone(), f, Mode::AtMost).unwrap()).unwrap();
        let exactly = worst_case_cr(&plan, &EvalRequest::new(cfg, f, Mode::Exactly).unwrap()).unwrap();
        for e in &at_most.entries {
            if let Some(r) = &e.ratio {
                prop_assert!(*r >= Scalar::one());
            }
        }
        prop_assert!(at_most.worst >= exactly.worst);
    }

    #[test]
    fn ssi_time_is_half_the_gaps(cfg in config(2..=7)) {
        let (plan, phases) = ssi_plan_with_phases(&cfg).unwrap();
        let p = cfg.positions();
        let mut sorted: Vec<&Scalar> = p.iter().collect();
        sorted.sort();
        let span = sorted[sorted.len() - 1] - sorted[0];
        prop_assert_eq!(plan.all_gather_time(), &span.half());
        prop_assert!(phases.windows(2).all(|w| w[0].gap <= w[1].gap));
        let total = phases.iter().fold(Scalar::zero(), |acc, ph| acc + ph.duration());
        prop_assert_eq!(total, span.half());
    }

    #[test]
    fn frr_stays_within_golden_bound(cfg in distinct_config(4..=4)) {
        let plan = frr_plan(&cfg).unwrap();
        let report = worst_case_cr(&plan, &EvalRequest::new(cfg, 2, Mode::Exactly).unwrap()).unwrap();
        prop_assert!(report.worst.unwrap() <= Scalar::one() + phi());
    }

    #[test]
    fn mtc_within_two(cfg in config(3..=7)) {
        let f = (cfg.len() - 1) / 2;
        let plan = generate_plan(StrategyKind::Mtc, &cfg, f, None).unwrap();
        let report = worst_case_cr(&plan, &EvalRequest::new(cfg, f, Mode::AtMost).unwrap()).unwrap();
        prop_assert!(report.worst.unwrap_or_else(Scalar::one) <= Scalar::from_int(2));
    }
}
