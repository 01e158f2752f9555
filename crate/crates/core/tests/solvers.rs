use approx::assert_abs_diff_eq;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use nprule_core::solvers::presets::*;
use nprule_core::solvers::{
    objective_curve, solve_composite_integrated, solve_composite_supremum, solve_simple_null_continuous,
    solve_simple_null_discrete, Sweep,
};
use nprule_core::special::norm_quantile;
use nprule_core::{power, solve, Constraint, Error, IntervalRule, ParameterMeasure, ProblemSpec, SolverConfig};

fn cfg() -> SolverConfig {
    SolverConfig::default()
}

#[test]
fn gaussian_prospect_examples() {
    for (beta, ell) in [(1.0, -1.6447), (1.0 / 3.0, -2.3198), (3.0, -1.3419)] {
        let r = solve_simple_null_continuous(&gaussian_prospect(beta), &cfg()).unwrap();
        assert_abs_diff_eq!(r.rule.ell, ell, epsilon = 5e-3);
        assert_abs_diff_eq!(r.false_alarm, 0.1, epsilon = 1e-8);
    }
    let r = solve_simple_null_continuous(&gaussian_prospect(1.0), &cfg()).unwrap();
    assert_abs_diff_eq!(r.rule.ell, norm_quantile(0.05), epsilon = 1e-4);
    assert_abs_diff_eq!(r.rule.u, -norm_quantile(0.05), epsilon = 1e-4);
}

#[test]
fn binomial_prospect_examples() {
    let cases = [
        (1.0, 2.0, 8.0, 0.7799, 0.7792),
        (0.5, 1.0, 7.0, 1.0, 0.2097),
        (1.05, 2.0, 8.0, 0.8776, 0.6814),
    ];
    for (beta, ell, u, pl, pu) in cases {
        let r = solve_simple_null_discrete(&binomial_prospect(beta), &cfg()).unwrap();
        assert_eq!((r.rule.ell, r.rule.u), (ell, u), "beta {beta}");
        assert_abs_diff_eq!(r.rule.p_ell, pl, epsilon = 2e-3);
        assert_abs_diff_eq!(r.rule.p_u, pu, epsilon = 2e-3);
        assert_abs_diff_eq!(r.false_alarm, 0.09, epsilon = 1e-10);
    }
}

#[test]
fn binomial_symmetric_case_is_symmetric() {
    let r = solve(&binomial_prospect(1.0), &cfg()).unwrap();
    assert_eq!(r.rule.ell + r.rule.u, 10.0);
    assert_abs_diff_eq!(r.rule.p_ell, r.rule.p_u, epsilon = 2e-3);
}

#[test]
fn supremum_examples() {
    let cases = [
        (1.0, -1.677, 1.677, 0.10),
        (5.0, -1.559, 2.027, 0.0731),
        (10.0, -1.505, 2.444, 0.0565),
    ];
    for (beta, ell, u, pb) in cases {
        let r = solve_composite_supremum(&composite_supremum(beta), &cfg()).unwrap();
        assert_abs_diff_eq!(r.rule.ell, ell, epsilon = 3e-3);
        assert_abs_diff_eq!(r.rule.u, u, epsilon = 3e-3);
        assert_abs_diff_eq!(r.p_a.unwrap(), 0.1, epsilon = 1e-4);
        assert_abs_diff_eq!(r.p_b.unwrap(), pb, epsilon = 1e-3);
        let check = r.diagnostics.endpoint_check.unwrap();
        assert!(check.max_power <= 0.1 + 1e-6 && check.at_endpoint);
    }
}

#[test]
fn composite_integrated_active_constraint() {
    let spec = composite_integrated();
    let r = solve_composite_integrated(&spec, &cfg()).unwrap();
    assert_abs_diff_eq!(r.false_alarm, 0.1, epsilon = 1e-8);
    // the optimum sits near the worked example's thresholds
    assert_abs_diff_eq!(r.rule.ell, -1.1673, epsilon = 5e-3);
    assert_abs_diff_eq!(r.rule.u, 1.6713, epsilon = 1e-2);
}

#[test]
fn atom_null_reduces_to_point_null() {
    let point = gaussian_prospect(2.0 / 3.0);
    let mut atom = point.clone();
    atom.constraint = Constraint::Integrated {
        null_range: [0.0, 0.0],
        lambda0: ParameterMeasure::atom(0.0, 1.0),
    };
    let a = solve_simple_null_continuous(&point, &cfg()).unwrap();
    let b = solve_composite_integrated(&atom, &cfg()).unwrap();
    assert_abs_diff_eq!(a.rule.ell, b.rule.ell, epsilon = 1e-6);
    assert_abs_diff_eq!(a.rule.u, b.rule.u, epsilon = 1e-6);
}

#[test]
fn symmetric_integrated_problem_gives_symmetric_rule() {
    let spec = ProblemSpec {
        constraint: Constraint::Integrated {
            null_range: [-0.3, 0.3],
            lambda0: ParameterMeasure::lebesgue(-0.3, 0.3),
        },
        lambda1: ParameterMeasure::lebesgue(-1.0, -0.3).with_segment(0.3, 1.0, 0.7),
        ..composite_integrated()
    };
    let r = solve(&spec, &cfg()).unwrap();
    assert_abs_diff_eq!(-r.rule.ell, r.rule.u, epsilon = 2e-3);
}

#[test]
fn np_recovery_gives_one_sided_test() {
    let r = solve(&np_recovery(), &cfg()).unwrap();
    assert!(r.q.unwrap() <= 1e-6);
    assert_eq!(r.rule.ell, f64::NEG_INFINITY);
    assert_abs_diff_eq!(r.rule.u, -norm_quantile(0.05), epsilon = 1e-4);
}

#[test]
fn lower_threshold_nondecreasing_in_beta() {
    let ells: Vec<f64> = GAUSSIAN_PROSPECT_BETAS
        .iter()
        .map(|&b| solve(&gaussian_prospect(b), &cfg()).unwrap().rule.ell)
        .collect();
    assert!(ells.windows(2).all(|w| w[1] >= w[0]), "{ells:?}");
}

fn random_feasible_rules(spec: &ProblemSpec, n: usize, seed: u64) -> Vec<IntervalRule> {
    // sample ℓ across the feasible sweep and complete each with the same
    // active-constraint solve as the curve
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (a, _) = spec.constraint.null_range();
    let grid: Vec<f64> = (0..n)
        .map(|_| {
            spec.family
                .statistic_quantile(a, rng.random_range(1e-6..spec.alpha))
                .unwrap()
        })
        .collect();
    objective_curve(spec, Sweep::Ell, &grid, &cfg())
        .unwrap()
        .into_iter()
        .filter_map(|p| p.rule)
        .collect()
}

#[test]
fn solved_rules_dominate_random_feasible_rules() {
    for (spec, seed) in [
        (gaussian_prospect(2.0 / 3.0), 1),
        (composite_supremum(5.0), 2),
        (composite_integrated(), 3),
    ] {
        let best = solve(&spec, &cfg()).unwrap();
        let rules = random_feasible_rules(&spec, 500, seed);
        assert!(rules.len() > 400);
        for rule in rules {
            let v = spec.objective(&rule, &cfg().integration).unwrap();
            assert!(
                best.objective_value >= v - 1e-9,
                "{rule:?}: {v} > {}",
                best.objective_value
            );
        }
    }
}

#[test]
fn discrete_solution_dominates_random_feasible_rules() {
    let spec = binomial_prospect(1.05);
    let best = solve(&spec, &cfg()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut checked = 0;
    for _ in 0..500 {
        let ell: f64 = rng.random_range(0..4) as f64;
        let grid = [rng.random::<f64>()];
        let curve = objective_curve(&spec, Sweep::PEll { ell }, &grid, &cfg()).unwrap();
        if let Some(v) = curve[0].objective {
            assert!(best.objective_value >= v - 1e-9);
            checked += 1;
        }
    }
    assert!(checked > 100);
}

#[test]
fn ell_curve_peaks_at_the_solution() {
    let spec = gaussian_prospect(2.0 / 3.0);
    let hi = norm_quantile(0.1);
    let grid: Vec<f64> = (0..200).map(|i| -4.0 + (hi + 4.0) * i as f64 / 199.0).collect();
    let curve = objective_curve(&spec, Sweep::Ell, &grid, &cfg()).unwrap();
    assert!(curve.iter().all(|p| p.feasible));
    let top = curve
        .iter()
        .max_by(|a, b| a.objective.partial_cmp(&b.objective).unwrap())
        .unwrap();
    assert_abs_diff_eq!(top.x, -1.8587, epsilon = 5e-3);

    // past Φ⁻¹(α) the lower tail alone exceeds the level
    let past = objective_curve(&spec, Sweep::Ell, &[hi + 0.1], &cfg()).unwrap();
    assert!(!past[0].feasible && past[0].objective.is_none());
}

#[test]
fn p_ell_curve_peaks_at_the_solution() {
    let spec = binomial_prospect(1.05);
    let grid: Vec<f64> = (0..=1000).map(|i| i as f64 / 1000.0).collect();
    let curve = objective_curve(&spec, Sweep::PEll { ell: 2.0 }, &grid, &cfg()).unwrap();
    let top = curve
        .iter()
        .filter(|p| p.feasible)
        .max_by(|a, b| a.objective.partial_cmp(&b.objective).unwrap())
        .unwrap();
    assert_abs_diff_eq!(top.x, 0.8776, epsilon = 2e-3);
}

#[test]
fn single_point_curve_matches_direct_objective() {
    let spec = gaussian_prospect(1.5);
    let curve = objective_curve(&spec, Sweep::Ell, &[-1.9], &cfg()).unwrap();
    assert_eq!(curve.len(), 1);
    let rule = curve[0].rule.unwrap();
    assert_abs_diff_eq!(power(&spec.family, 0.0, &rule).unwrap(), 0.1, epsilon = 1e-12);
    assert_eq!(
        curve[0].objective.unwrap(),
        spec.objective(&rule, &cfg().integration).unwrap()
    );
}

#[test]
fn sweep_kind_must_match_family() {
    let err = objective_curve(&binomial_prospect(1.0), Sweep::Ell, &[2.0], &cfg()).unwrap_err();
    assert!(matches!(err, Error::Invalid { .. }));
    let err = objective_curve(&gaussian_prospect(1.0), Sweep::PEll { ell: 0.0 }, &[0.5], &cfg()).unwrap_err();
    assert!(matches!(err, Error::Invalid { .. }));
}

#[test]
fn validation_names_the_field() {
    let mut spec = gaussian_prospect(1.0);
    spec.alpha = 1.5;
    match solve(&spec, &cfg()).unwrap_err() {
        Error::Invalid { field, .. } => assert_eq!(field, "alpha"),
        e => panic!("{e}"),
    }
    let mut spec = composite_supremum(1.0);
    spec.theta_range = [-0.2, 1.0];
    match solve(&spec, &cfg()).unwrap_err() {
        Error::Invalid { field, .. } => assert_eq!(field, "constraint.null_range"),
        e => panic!("{e}"),
    }
    let mut spec = gaussian_prospect(1.0);
    spec.lambda1 = ParameterMeasure::atom(0.0, 1.0);
    match solve(&spec, &cfg()).unwrap_err() {
        Error::Invalid { field, .. } => assert_eq!(field, "lambda1"),
        e => panic!("{e}"),
    }
}

#[test]
fn spec_json_round_trip() {
    for spec in [
        gaussian_prospect(0.5),
        binomial_prospect(0.97),
        composite_integrated(),
        composite_supremum(10.0),
    ] {
        let s = serde_json::to_string(&spec).unwrap();
        assert_eq!(ProblemSpec::from_json(&s).unwrap(), spec);
    }
    let text = r#"{
        "family": {"kind": "gaussian", "variance": 1.0},
        "constraint": {"kind": "supremum", "null_range": [-0.2, 0.2]},
        "theta_range": [-1, 1],
        "lambda1": {"segments": [[-1, -0.2, 4.0], [0.2, 1, 0.8]]},
        "alpha": 0.1,
        "g": {"kind": "power", "kappa": 0.5}
    }"#;
    assert_eq!(ProblemSpec::from_json(text).unwrap(), composite_supremum(5.0));
}

#[test]
fn result_json_round_trip_reproduces_power() {
    let r = solve(&composite_supremum(5.0), &cfg()).unwrap();
    let back: nprule_core::SolveResult = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
    assert_eq!(back, r);
    let fam = composite_supremum(5.0).family;
    assert_eq!(power(&fam, 0.2, &back.rule).unwrap(), r.p_b.unwrap());
}

#[test]
fn other_families_solve() {
    // exponential rates with null rate 1 and alternatives on either side
    let spec = ProblemSpec {
        family: nprule_core::ExponentialFamily::Exponential,
        constraint: Constraint::Point { theta0: 1.0 },
        theta_range: [0.2, 3.0],
        lambda1: ParameterMeasure::uniform(0.2, 0.8, 1.0).with_segment(1.5, 3.0, 1.0),
        alpha: 0.05,
        g: nprule_core::ObjectiveG::prospect(0.69),
    };
    let r = solve(&spec, &cfg()).unwrap();
    assert_abs_diff_eq!(r.false_alarm, 0.05, epsilon = 1e-10);

    let spec = ProblemSpec {
        family: nprule_core::ExponentialFamily::Poisson,
        constraint: Constraint::Point { theta0: 4.0 },
        theta_range: [1.0, 9.0],
        lambda1: ParameterMeasure::uniform(1.0, 3.0, 1.0).with_segment(5.0, 9.0, 1.0),
        alpha: 0.1,
        g: nprule_core::ObjectiveG::Identity,
    };
    let r = solve(
        &spec,
        &SolverConfig {
            discrete_grid: 201,
            ..cfg()
        },
    )
    .unwrap();
    assert_abs_diff_eq!(r.false_alarm, 0.1, epsilon = 1e-10);
}
