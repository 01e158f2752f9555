use approx::assert_abs_diff_eq;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use nprule_core::oracle::*;
use nprule_core::rules::{bayes_value, RuleCandidate};
use nprule_core::solvers::presets::*;
use nprule_core::{
    power, solve, Error, ExponentialFamily, GeneralBayesRule, IntegrationConfig, IntervalRule, ObjectiveG,
    SignedMeasure, SolverConfig,
};

#[test]
fn finite_instance_rejects_bad_rows() {
    let err = FiniteInstance::new(vec![0.0, 1.0], vec![0.0, 1.0], vec![vec![0.5, 0.5], vec![0.7, 0.2]]);
    assert!(matches!(err, Err(Error::Invalid { .. })));
    let err = FiniteInstance::new(vec![0.0, 0.0], vec![0.0], vec![vec![1.0], vec![1.0]]);
    assert!(matches!(err, Err(Error::Invalid { .. })));
}

#[test]
fn brute_force_bayes_small_example() {
    let fi = FiniteInstance::new(
        vec![0.0, 1.0],
        vec![0.0, 1.0, 2.0],
        vec![vec![0.6, 0.3, 0.1], vec![0.2, 0.3, 0.5]],
    )
    .unwrap();
    // ν = δ₁ − δ₀: reject where the second row is larger, tie in the middle
    let (rule, value) = brute_force_bayes(&fi, &[-1.0, 1.0]).unwrap();
    assert_eq!(rule, vec![0.0, 0.5, 1.0]);
    assert_abs_diff_eq!(value, 0.4, epsilon = 1e-15);
    assert!(matches!(
        brute_force_bayes(&fi, &[0.0, 0.0]),
        Err(Error::Precondition(_))
    ));
}

#[test]
fn general_bayes_rule_matches_brute_force_on_finite_instances() {
    let cfg = IntegrationConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for seed in 0..25 {
        let fi = FiniteInstance::random(rng.random_range(2..6), rng.random_range(2..7), seed).unwrap();
        let weights: Vec<f64> = fi.thetas.iter().map(|_| rng.random_range(-1.0..1.0)).collect();
        let atoms: Vec<(f64, f64)> = fi.thetas.iter().copied().zip(weights.iter().copied()).collect();
        let nu = SignedMeasure::from_atoms(&atoms).unwrap();
        let rule = GeneralBayesRule::from_signed(&nu, 0.5).unwrap();
        let v = bayes_value(&fi, RuleCandidate::Bayes(&rule), &nu, &cfg).unwrap();
        let (_, best) = brute_force_bayes(&fi, &weights).unwrap();
        assert_abs_diff_eq!(v, best, epsilon = 1e-12);
    }
}

#[test]
fn brute_force_constrained_meets_level_and_beats_corners() {
    let fi = FiniteInstance::new(
        vec![0.0, 1.0, 2.0],
        vec![0.0, 1.0, 2.0],
        vec![vec![0.2, 0.6, 0.2], vec![0.5, 0.3, 0.2], vec![0.1, 0.3, 0.6]],
    )
    .unwrap();
    let g = ObjectiveG::prospect(0.69);
    let (rule, value) = brute_force_constrained(&fi, 0, &[0.0, 1.0, 1.0], &g, 0.25, 101).unwrap();
    assert!(fi.powers(&rule)[0] <= 0.25 + 1e-12);
    for corner in [[0.0, 0.0, 1.0], [1.0, 0.0, 0.0], [0.0, 0.0, 0.0]] {
        let p = fi.powers(&corner);
        if p[0] <= 0.25 {
            assert!(value >= g.eval(p[1]).unwrap() + g.eval(p[2]).unwrap());
        }
    }
    let err = brute_force_constrained(&fi, 0, &[0.0, 1.0, 1.0], &g, 0.25, 50);
    assert!(matches!(err, Err(Error::Precondition(_))));
}

#[test]
fn independent_power_agrees_with_library_power() {
    let fams = [
        (ExponentialFamily::Gaussian { variance: 2.0 }, 0.3),
        (ExponentialFamily::Binomial { trials: 10 }, 0.45),
        (ExponentialFamily::Poisson, 3.0),
    ];
    let rule = IntervalRule::new(2.0, 6.0, 0.4, 0.7).unwrap();
    for (fam, theta) in fams {
        let a = independent_power(&fam, theta, &rule).unwrap();
        let b = power(&fam, theta, &rule).unwrap();
        assert_abs_diff_eq!(a, b, epsilon = 1e-12);
    }
}

#[test]
fn mc_power_edge_cases() {
    let fam = ExponentialFamily::Gaussian { variance: 1.0 };
    let never = IntervalRule::always_accept();
    let est = mc_power(&fam, 0.0, &never, 10_000, 5).unwrap();
    assert_eq!(est.estimate, 0.0);
    assert!(est.covers(0.0));
    assert!(matches!(
        mc_power(&fam, 0.0, &never, 999, 5),
        Err(Error::Precondition(_))
    ));

    let rule = IntervalRule::closed(-1.0, 1.0).unwrap();
    let a = mc_power(&fam, 0.2, &rule, 200_000, 9).unwrap();
    let b = mc_power(&fam, 0.2, &rule, 200_000, 9).unwrap();
    assert_eq!(a, b);
}

#[test]
fn mc_power_covers_randomized_discrete_rule() {
    let r = solve(&binomial_prospect(1.05), &SolverConfig::default()).unwrap();
    let fam = binomial_prospect(1.05).family;
    let est = mc_power(&fam, 0.5, &r.rule, 1_000_000, 21).unwrap();
    assert!(est.covers(power(&fam, 0.5, &r.rule).unwrap()), "{est:?}");
}

#[test]
fn variance_lemma_examples() {
    let u = DiscreteLaw::new(vec![0.0, 1.0], vec![0.5, 0.5]).unwrap();
    let v = DiscreteLaw::new(vec![-1.0, 2.0], vec![0.5, 0.5]).unwrap();
    assert!(check_variance_lemma(0.0, 1.0, &u, &v).unwrap());

    let v_inside = DiscreteLaw::new(vec![0.5], vec![1.0]).unwrap();
    assert!(matches!(
        check_variance_lemma(0.0, 1.0, &u, &v_inside),
        Err(Error::Precondition(_))
    ));
    let v_shifted = DiscreteLaw::new(vec![-1.0, 3.0], vec![0.5, 0.5]).unwrap();
    assert!(matches!(
        check_variance_lemma(0.0, 1.0, &u, &v_shifted),
        Err(Error::Precondition(_))
    ));
}

#[test]
fn fixed_point_check_accepts_solutions_and_flags_shifted_rules() {
    let cfg = SolverConfig::default();
    for spec in [gaussian_prospect(2.0), composite_integrated(), composite_supremum(5.0)] {
        let r = solve(&spec, &cfg).unwrap();
        let report = check_theorem3_fixed_point(&spec, &r, 400).unwrap();
        assert!(report.passes(1e-3), "{report:?}");
        assert!(report.constraint_gap < 1e-8);

        let mut shifted = r.clone();
        shifted.rule.ell += 0.2;
        let bad = check_theorem3_fixed_point(&spec, &shifted, 400).unwrap();
        assert!(bad.violations() > 0, "{bad:?}");
    }
}

#[test]
fn psi_has_one_turning_point() {
    let cfg = SolverConfig::default();
    for spec in [gaussian_prospect(1.0 / 3.0), composite_supremum(10.0)] {
        let r = solve(&spec, &cfg).unwrap();
        let psi = check_psi_single_root(&spec, &r, 400).unwrap();
        assert!(psi.sign_changes <= 1, "{psi:?}");
    }
}

#[test]
fn structural_checks_need_continuous_family() {
    let spec = binomial_prospect(1.0);
    let r = solve(&spec, &SolverConfig::default()).unwrap();
    assert!(matches!(
        check_theorem3_fixed_point(&spec, &r, 100),
        Err(Error::Precondition(_))
    ));
}

#[test]
fn mc_power_is_calibrated_over_many_seeds() {
    let spec = binomial_prospect(1.05);
    let rule = solve(&spec, &SolverConfig::default()).unwrap().rule;
    let exact = power(&spec.family, 0.5, &rule).unwrap();
    let n = 100_000;
    let trials = 400;
    let sd = (exact * (1.0 - exact) / n as f64).sqrt();
    let mut misses = 0;
    let mut z_sum = 0.0;
    for t in 0..trials {
        let est = mc_power(&spec.family, 0.5, &rule, n, 50_000 + t).unwrap();
        misses += !est.covers(exact) as usize;
        z_sum += (est.estimate - exact) / sd;
    }
    // 4 expected misses; more than 12 has probability below 1e-3
    assert!(misses <= 12, "{misses} misses");
    assert!((z_sum / trials as f64).abs() < 0.2);
}
