use std::cell::RefCell;

use glasd::optimizer::{
    acceptance_prob, asd_minimize, clip_step, glasd_minimize, BoxDomain, Mode, OptimizerConfig,
    Search, Sign, Termination,
};
use proptest::prelude::*;

#[derive(Clone, Copy, Debug)]
enum Family {
    Sphere,
    Rastrigin,
    AbsSum,
    Staircase,
    Plateau,
}

fn eval(family: Family, shift: f64, x: &[f64]) -> f64 {
    match family {
        Family::Sphere => x.iter().map(|v| (v - shift).powi(2)).sum(),
        Family::Rastrigin => x
            .iter()
            .map(|v| {
                (v - shift).powi(2) - 10.0 * (std::f64::consts::TAU * (v - shift)).cos() + 10.0
            })
            .sum(),
        Family::AbsSum => x.iter().map(|v| (v - shift).abs()).sum(),
        Family::Staircase => x.iter().map(|v| (3.0 * (v - shift)).floor().abs()).sum(),
        Family::Plateau => x.iter().map(|v| ((v - shift).abs() - 0.5).max(0.0)).sum(),
    }
}

fn family() -> impl Strategy<Value = Family> {
    prop_oneof![
        Just(Family::Sphere),
        Just(Family::Rastrigin),
        Just(Family::AbsSum),
        Just(Family::Staircase),
        Just(Family::Plateau),
    ]
}

fn domain() -> impl Strategy<Value = BoxDomain> {
    prop::collection::vec((-10.0f64..5.0, 0.01f64..10.0), 1..6).prop_map(|b| {
        let lower = b.iter().map(|(a, _)| *a).collect();
        let upper = b.iter().map(|(a, w)| a + w).collect();
        BoxDomain::new(lower, upper).unwrap()
    })
}

fn small_config(n: usize, seed: u64, explore: bool) -> OptimizerConfig {
    OptimizerConfig {
        max_iterations: 400,
        explore,
        ..OptimizerConfig::for_dimension(n).with_seed(seed)
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn every_evaluated_point_is_feasible_and_the_record_is_consistent(
        f in family(), d in domain(), shift in -3.0f64..3.0, seed in any::<u64>(),
    ) {
        let seen = RefCell::new(Vec::new());
        let objective = |x: &[f64]| {
            let v = eval(f, shift, x);
            seen.borrow_mut().push((x.to_vec(), v));
            v
        };
        let rec = glasd_minimize(objective, &d, None, &small_config(d.dim(), seed, true)).unwrap();
        let seen = seen.into_inner();
        prop_assert_eq!(seen.len() as u64, rec.evaluations);
        prop_assert!(seen.iter().all(|(x, _)| d.contains(x)));
        let min = seen.iter().map(|(_, v)| *v).fold(f64::INFINITY, f64::min);
        prop_assert_eq!(rec.f_best, min);
        prop_assert!(seen.iter().any(|(x, v)| *x == rec.x_best && *v == rec.f_best));
        prop_assert!(rec.trace.windows(2).all(|w| w[1].f_best <= w[0].f_best));
        prop_assert_eq!(rec.trace.len() as u64, rec.iterations + 1);
    }

    #[test]
    fn probabilities_stay_normalized_and_iterates_interior(
        f in family(), d in domain(), shift in -3.0f64..3.0, seed in any::<u64>(), t in 0.0f64..1.0,
    ) {
        let x0: Vec<f64> = d.lower().iter().zip(d.upper()).map(|(a, b)| a + (0.05 + 0.9 * t) * (b - a)).collect();
        let cfg = small_config(d.dim(), seed, true);
        let mut search = Search::new(|x: &[f64]| eval(f, shift, x), &d, Some(&x0), &cfg).unwrap();
        while search.step().unwrap().is_some() {
            let s = search.state();
            let total: f64 = s.probabilities.iter().sum();
            prop_assert!((total - 1.0).abs() <= 1e-12);
            prop_assert!(s.probabilities.iter().all(|&p| p > 0.0));
            prop_assert!(d.contains_strictly(&s.x));
            prop_assert!(s.steps.iter().all(|&v| v >= 1e-12));
        }
    }

    #[test]
    fn asd_accepts_only_strict_decreases(
        f in family(), d in domain(), shift in -3.0f64..3.0, seed in any::<u64>(),
    ) {
        let cfg = small_config(d.dim(), seed, false);
        let mut search = Search::new(|x: &[f64]| eval(f, shift, x), &d, None, &cfg).unwrap();
        let mut last = search.state().f_current;
        while let Some(step) = search.step().unwrap() {
            prop_assert_eq!(step.mode, Mode::Greedy);
            if step.accepted {
                prop_assert!(step.proposal_value < last);
                last = step.proposal_value;
            }
            prop_assert_eq!(search.state().f_current, last);
        }
    }

    #[test]
    fn identical_seeds_give_identical_records(
        f in family(), d in domain(), seed in any::<u64>(),
    ) {
        let cfg = small_config(d.dim(), seed, true);
        let a = glasd_minimize(|x: &[f64]| eval(f, 0.3, x), &d, None, &cfg).unwrap();
        let b = glasd_minimize(|x: &[f64]| eval(f, 0.3, x), &d, None, &cfg).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn clipped_steps_stay_interior(
        d in domain(), t in 0.001f64..0.999, i in 0usize..6, up in any::<bool>(), mag in 0.0f64..100.0,
    ) {
        let x: Vec<f64> = d.lower().iter().zip(d.upper()).map(|(a, b)| a + t * (b - a)).collect();
        let i = i % d.dim();
        let sign = if up { Sign::Positive } else { Sign::Negative };
        let delta = clip_step(&x, &d, i, sign, mag);
        prop_assert!(delta.iter().enumerate().all(|(k, v)| k == i || *v == 0.0));
        let y: Vec<f64> = x.iter().zip(&delta).map(|(a, b)| a + b).collect();
        prop_assert!(d.contains_strictly(&y));
        let gap = if up { d.upper()[i] - x[i] } else { x[i] - d.lower()[i] };
        prop_assert!(delta[i].abs() <= mag.min(gap / 2.0) * (1.0 + 1e-15));
    }

    #[test]
    fn acceptance_probability_is_nonincreasing(t in 1.0f64..1e7, dt in 0.0f64..1e6, m in 1u32..20, c in 1e-6f64..1.0) {
        let a = acceptance_prob(t, m, c);
        let b = acceptance_prob(t + dt, m, c);
        prop_assert!(b <= a);
        prop_assert!((0.0..=1.0).contains(&a));
        if f64::from(m) * c >= (1.0 + t).ln() {
            prop_assert_eq!(a, 1.0);
        }
    }
}

#[test]
fn acceptance_probability_examples() {
    assert_eq!(acceptance_prob(1.0, 5, 1.0), 1.0);
    let t = std::f64::consts::E.powi(2) - 1.0;
    assert!((acceptance_prob(t, 5, 0.01) - 0.025).abs() < 1e-15);
    // 5 * 0.001 * ln 10 / ln(1 + 10^6), evaluated by hand: 8.3336e-4
    let q = acceptance_prob(1e6, 5, 0.001 * 10f64.ln());
    assert!((q - 8.3336e-4).abs() < 1e-7, "{q}");
}

#[test]
fn clip_examples() {
    let d = BoxDomain::cube(0.0, 1.0, 1).unwrap();
    assert!((clip_step(&[0.5], &d, 0, Sign::Positive, 0.1)[0] - 0.1).abs() < 1e-15);
    assert!((clip_step(&[0.9], &d, 0, Sign::Positive, 0.3)[0] - 0.05).abs() < 1e-15);
    assert_eq!(clip_step(&[0.0], &d, 0, Sign::Negative, 0.3)[0], 0.0);
}

#[test]
fn exploration_frequency_matches_one_in_m() {
    let d = BoxDomain::cube(-1.0, 1.0, 3).unwrap();
    let iterations = 100_000u64;
    let cfg = OptimizerConfig {
        max_iterations: iterations,
        stagnation_window: iterations + 1,
        ..OptimizerConfig::for_dimension(3).with_seed(2024)
    };
    let mut search = Search::new(
        |x: &[f64]| x.iter().map(|v| v * v).sum::<f64>(),
        &d,
        None,
        &cfg,
    )
    .unwrap();
    let mut explore = 0u64;
    let mut total = 0u64;
    while let Some(step) = search.step().unwrap() {
        total += 1;
        if step.mode == Mode::Explore {
            explore += 1;
        }
    }
    assert_eq!(total, iterations);
    let frac = explore as f64 / total as f64;
    let se = (0.2f64 * 0.8 / total as f64).sqrt();
    assert!(
        (frac - 0.2).abs() <= 3.0 * se,
        "exploration fraction {frac}"
    );
}

#[test]
fn sphere_with_defaults_from_ones() {
    // stated for the default configuration and any seed
    let d = BoxDomain::cube(-5.0, 5.0, 4).unwrap();
    let sphere = |x: &[f64]| x.iter().map(|v| v * v).sum::<f64>();
    let failures: Vec<(u64, f64)> = (0..10)
        .map(|seed| {
            let cfg = OptimizerConfig::for_dimension(4).with_seed(seed);
            (
                seed,
                glasd_minimize(sphere, &d, Some(&[1.0; 4]), &cfg)
                    .unwrap()
                    .f_best,
            )
        })
        .filter(|(_, f)| *f > 1e-6)
        .collect();
    assert!(
        failures.is_empty(),
        "seeds stopping above 1e-6: {failures:?}"
    );
}

#[test]
fn staircase_against_grid_oracle() {
    let grid_min = (0..=10_000)
        .map(|k| (4.0 * k as f64 / 1e4).floor())
        .fold(f64::INFINITY, f64::min);
    let d = BoxDomain::cube(0.0, 1.0, 1).unwrap();
    for seed in 0..10 {
        let cfg = OptimizerConfig {
            stagnation_window: 500,
            ..OptimizerConfig::for_dimension(1).with_seed(seed)
        };
        let rec = glasd_minimize(|x: &[f64]| (4.0 * x[0]).floor(), &d, Some(&[0.9]), &cfg).unwrap();
        assert_eq!(rec.f_best, grid_min, "seed {seed}");
    }
}

#[test]
fn one_dimensional_asd_within_default_budget() {
    let d = BoxDomain::cube(0.0, 1.0, 1).unwrap();
    for seed in 0..20 {
        let cfg = OptimizerConfig::for_dimension(1).with_seed(seed);
        let rec = asd_minimize(|x: &[f64]| (x[0] - 0.3).powi(2), &d, Some(&[0.9]), &cfg).unwrap();
        assert!(rec.f_best <= 1e-10, "seed {seed}: {}", rec.f_best);
    }
}

#[test]
fn constant_objective_never_moves() {
    let d = BoxDomain::cube(-2.0, 3.0, 5).unwrap();
    let cfg = OptimizerConfig::for_dimension(5).with_seed(9);
    let rec = glasd_minimize(|_: &[f64]| 1.0, &d, Some(&[0.0; 5]), &cfg).unwrap();
    assert_eq!(rec.f_best, 1.0);
    assert_eq!(rec.x_best, vec![0.0; 5]);
    assert_eq!(rec.termination, Termination::Stagnation);
    assert_eq!(rec.iterations, cfg.stagnation_window);
}
