use std::time::Duration;

use proptest::prelude::*;
use qvdc_core::arith::checks::poisson_min_terms;
use qvdc_core::arith::{poisson_check, Window};
use qvdc_core::complete::{sigma_crt, sigma_direct, RationalFunctionZ};
use qvdc_core::arith::factorize;
use qvdc_core::opt::{constraint_slacks, optimize_word, LpVariant, Objective};
use qvdc_core::pairs::{apply_a, apply_b, inverse_a, ExponentTriple, Family, Letter, ProcessWord};
use qvdc_core::quadratic::{decompose_fraction, roots_minus_one, roots_minus_one_brute, weyl_rho};
use qvdc_core::rational::{half, int, parse, ratio, to_pq, Rational};
use qvdc_core::trace::{fourier_transform_p, incomplete_sum_threads, normalized_dft, CompositeTraceSpec};
use qvdc_core::{level_max_gamma, Complex64, LevelProblem};

fn rational(lo: i64, hi: i64) -> impl Strategy<Value = Rational> {
    (1i64..500).prop_flat_map(move |d| (lo * d..=hi * d).prop_map(move |n| ratio(n, d)))
}

fn triple() -> impl Strategy<Value = ExponentTriple> {
    (rational(0, 1), rational(0, 1), rational(-3, 3)).prop_map(|(k, l, nu)| {
        ExponentTriple::new(k * ratio(49, 100), half() + l / int(2), nu)
    })
}

fn word(max: usize) -> impl Strategy<Value = ProcessWord> {
    proptest::collection::vec(any::<bool>(), 0..=max).prop_map(|v| {
        let s: String = v.iter().map(|&b| if b { 'A' } else { 'B' }).collect();
        ProcessWord::parse(&s).unwrap()
    })
}

fn complex_vec(len: usize) -> impl Strategy<Value = Vec<Complex64>> {
    proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), len).prop_map(|v| {
        v.into_iter().map(|(a, b)| Complex64::new(a, b)).collect()
    })
}

fn prime_upto(max: u64) -> impl Strategy<Value = u64> {
    (2..=max).prop_filter("prime", |&p| qvdc_core::arith::is_prime(p))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn b_is_an_involution(t in triple()) {
        prop_assert_eq!(apply_b(&apply_b(&t)), t);
    }

    #[test]
    fn inverse_a_undoes_a(t in triple()) {
        prop_assert_eq!(inverse_a(&apply_a(&t)).unwrap(), t);
    }

    #[test]
    fn words_stay_in_the_box(w in word(12)) {
        prop_assert!(w.apply(&ExponentTriple::seed()).in_box());
    }

    #[test]
    fn canonical_form_acts_the_same(w in word(14)) {
        let seed = ExponentTriple::seed();
        prop_assert_eq!(w.canonical().apply(&seed), w.apply(&seed));
        prop_assert!(w.canonical().is_canonical());
    }

    #[test]
    fn pair_ignores_nu(w in word(10), t in triple(), nu in rational(-5, 5)) {
        let moved = ExponentTriple::new(t.kappa.clone(), t.lambda.clone(), nu);
        prop_assert_eq!(w.apply(&t).pair(), w.apply(&moved).pair());
    }

    #[test]
    fn word_text_round_trips(w in word(30)) {
        prop_assert_eq!(ProcessWord::parse(&w.compact()).unwrap(), w);
    }

    #[test]
    fn rational_text_round_trips(r in rational(-50, 50)) {
        prop_assert_eq!(parse(&to_pq(&r)).unwrap(), r);
    }

    #[test]
    fn level_matches_first_line(i in 0i64..1000) {
        let theta = half() + (ratio(16, 17) - half()) * ratio(i, 1000);
        let pair = ProcessWord::parse("A").unwrap().apply(&ExponentTriple::seed());
        let r = level_max_gamma(&LevelProblem::new(theta.clone(), pair, LpVariant::Tabulated, Family::Ak)).unwrap();
        prop_assert_eq!(r.gamma, (int(19) - int(18) * &theta) / int(14));
        prop_assert!(r.alpha >= int(0) && r.beta >= int(0));
    }

    #[test]
    fn level_optimum_is_a_feasible_vertex(i in 0i64..1000, w in prop::sample::select(vec!["A", "A2", "A3", "BA2"]), as_stated in any::<bool>()) {
        let theta = ratio(1, 2) + ratio(i, 2000);
        let variant = if as_stated { LpVariant::AsStated } else { LpVariant::Tabulated };
        let pair = ProcessWord::parse(w).unwrap().apply(&ExponentTriple::seed());
        let p = LevelProblem::new(theta, pair, variant, Family::Ak);
        let Ok(r) = level_max_gamma(&p) else { return Ok(()) };
        let slacks = constraint_slacks(&p, &r.alpha, &r.beta);
        prop_assert!(slacks.iter().all(|(_, s)| *s >= int(0)));
        let tight = slacks.iter().filter(|(_, s)| *s == int(0)).count();
        prop_assert!(tight >= 2);
        for id in &r.binding {
            prop_assert!(slacks.iter().any(|(c, s)| c == id && *s == int(0)));
        }
        prop_assert_eq!(r.gamma, &r.alpha + &r.beta);
    }

    #[test]
    fn ft_is_an_involution_and_isometry((p, f) in prime_upto(101).prop_flat_map(|p| (Just(p), complex_vec(p as usize)))) {
        let g = fourier_transform_p(&f, p).unwrap();
        let gg = fourier_transform_p(&g, p).unwrap();
        for x in 0..p as usize {
            prop_assert!((gg[x] - f[(p as usize - x) % p as usize]).norm() < 1e-10);
        }
        let n1: f64 = f.iter().map(|z| z.norm_sqr()).sum();
        let n2: f64 = normalized_dft(&f).iter().map(|z| z.norm_sqr()).sum();
        prop_assert!((n1 - n2).abs() < 1e-9 * n1.max(1.0));
    }

    #[test]
    fn roots_match_brute_force(ell in 1u64..20_000) {
        prop_assert_eq!(roots_minus_one(ell), roots_minus_one_brute(ell));
        let rho = weyl_rho(0, ell);
        prop_assert!((rho.re - roots_minus_one(ell).rho() as f64).abs() < 1e-9);
    }

    #[test]
    fn decomposition_holds(ell in 2u64..5_000, d in 1u64..5_000, pick in any::<usize>()) {
        let roots = roots_minus_one(ell);
        prop_assume!(!roots.roots.is_empty() && num_integer::gcd(d, ell) == 1);
        let a = roots.roots[pick % roots.roots.len()];
        prop_assert!(decompose_fraction(d, a, ell).unwrap().holds);
    }

    #[test]
    fn crt_matches_direct(
        f1 in proptest::collection::vec(-9i64..10, 1..4),
        f2 in proptest::collection::vec(-9i64..10, 1..3),
        c in 2u64..3_000,
    ) {
        let Ok(lam) = RationalFunctionZ::new(f1, f2) else { return Ok(()) };
        let d = sigma_direct(&lam, c).unwrap();
        let m = sigma_crt(&lam, &factorize(c)).unwrap();
        prop_assert!((d.value - m.value).norm() < 1e-8 * c as f64);
        prop_assert_eq!(d.excluded, m.excluded);
    }

    #[test]
    fn sums_do_not_depend_on_workers(m in -100_000i64..100_000, n in 0u64..200_000, h in 1i64..50) {
        let spec = CompositeTraceSpec::inverse_phase(3 * 5 * 7 * 11 * 13, h).unwrap();
        let one = incomplete_sum_threads(&spec, m, n, Some(1)).unwrap();
        let three = incomplete_sum_threads(&spec, m, n, Some(3)).unwrap();
        prop_assert_eq!(one.re.to_bits(), three.re.to_bits());
        prop_assert_eq!(one.im.to_bits(), three.im.to_bits());
    }

    #[test]
    fn poisson_agrees(q in 1u64..400, a in any::<u64>(), x in 1_000.0f64..50_000.0) {
        let h = poisson_min_terms(x, q);
        for g in Window::ALL {
            prop_assert!(poisson_check(g, x, q, a % q, h).unwrap().pass);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    // branch and bound against exhaustive enumeration
    #[test]
    fn search_finds_the_brute_force_optimum(depth in 1usize..=9, which in 0usize..3) {
        let obj = [Objective::MinKappaPlusLambda, Objective::MaxDivisorLevel, Objective::MaxSubconvexDelta][which];
        let report = optimize_word(obj, depth, Duration::from_secs(30));
        let seed = ExponentTriple::seed();
        let mut best: Option<Rational> = None;
        for len in 0..=depth {
            for w in ProcessWord::all_of_length(len, false) {
                let v = obj.value(&w.apply(&seed));
                if best.as_ref().is_none_or(|b| obj.improves(&v, b)) {
                    best = Some(v);
                }
            }
        }
        prop_assert!(report.exhaustive);
        prop_assert_eq!(report.best_value, best.unwrap());
        prop_assert!(report.best_word.len() <= depth);
        // children of a pruned node cannot beat the incumbent that pruned it
        for node in &report.pruned_sample {
            prop_assert!(obj.improves(&node.incumbent, &node.bound));
            for letter in [Letter::A, Letter::B] {
                let mut letters = node.word.letters().to_vec();
                letters.push(letter);
                let child = ProcessWord::from_letters(letters);
                if child.len() <= depth {
                    prop_assert!(!obj.improves(&obj.value(&child.apply(&seed)), &node.incumbent));
                }
            }
            prop_assert!(!obj.improves(&obj.value(&node.word.apply(&seed)), &node.incumbent));
        }
    }
}
