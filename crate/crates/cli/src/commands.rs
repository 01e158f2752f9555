use std::path::Path;

use serde::Serialize;
use thiserror::Error;

use nprule_core::oracle::{check_psi_single_root, check_theorem3_fixed_point, independent_power, mc_power};
use nprule_core::solvers::presets::{
    binomial_prospect, composite_supremum, gaussian_prospect, BINOMIAL_PROSPECT_BETAS, GAUSSIAN_PROSPECT_BETAS,
    SUPREMUM_BETAS,
};
use nprule_core::solvers::{endpoint_check, objective_curve, Sweep};
use nprule_core::{solve, Constraint, ProblemSpec, SolveResult, SolverConfig};

use crate::args::{Format, Overrides, SweepArgs, SweepParam, TableId};
use crate::output::{num, opt, Csv};

#[derive(Debug, Error)]
pub enum Failure {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Solver(String),
    #[error("{0} check(s) failed")]
    Violations(usize),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Violations(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Solver(_) => 3,
        }
    }
}

impl From<nprule_core::Error> for Failure {
    fn from(e: nprule_core::Error) -> Self {
        use nprule_core::Error::*;
        match e {
            Invalid { .. } | Domain { .. } | OutOfRange { .. } => Failure::Usage(e.to_string()),
            Convergence { .. } | Bracket { .. } | Infeasible(_) | Precondition(_) => Failure::Solver(e.to_string()),
        }
    }
}

pub type Output = (String, Result<(), Failure>);

pub fn solver_config(o: &Overrides) -> Result<SolverConfig, Failure> {
    let mut cfg = SolverConfig::default();
    if let Some(t) = o.int_tol {
        cfg.integration.abs_tol = t;
        cfg.integration.rel_tol = t;
    }
    if let Some(n) = o.grid_points {
        cfg.grid_points = n;
    }
    if let Some(t) = o.refine_tol {
        cfg.refine_tol = t;
    }
    cfg.validate()?;
    Ok(cfg)
}

/// Reads a spec from a file, or parses the argument itself when it looks
/// like a JSON object.
pub fn load_spec(arg: &str) -> Result<ProblemSpec, Failure> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg).map_err(|e| Failure::Usage(format!("cannot read spec {arg}: {e}")))?
    };
    let spec = ProblemSpec::from_json(&text)?;
    spec.validate()?;
    Ok(spec)
}

fn load_result(path: &Path) -> Result<SolveResult, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read result {}: {e}", path.display())))?;
    let result: SolveResult =
        serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("invalid result: {e}")))?;
    result.rule.validate()?;
    Ok(result)
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

pub fn solve_cmd(spec: &str, cfg: &SolverConfig, format: Format) -> Result<String, Failure> {
    let spec = load_spec(spec)?;
    let r = solve(&spec, cfg)?;
    Ok(match format {
        Format::Json => json(&r),
        Format::Csv => {
            let mut csv = Csv::new(&[
                "ell",
                "u",
                "p_ell",
                "p_u",
                "objective",
                "false_alarm",
                "p_a",
                "p_b",
                "q",
            ]);
            csv.row(&[
                num(r.rule.ell),
                num(r.rule.u),
                num(r.rule.p_ell),
                num(r.rule.p_u),
                num(r.objective_value),
                num(r.false_alarm),
                opt(r.p_a),
                opt(r.p_b),
                opt(r.q),
            ]);
            csv.finish()
        }
    })
}

pub fn sweep_cmd(args: &SweepArgs, cfg: &SolverConfig, format: Format) -> Result<String, Failure> {
    let spec = load_spec(&args.spec)?;
    let sweep = match args.param {
        SweepParam::Ell => Sweep::Ell,
        SweepParam::PEll => Sweep::PEll {
            ell: args
                .ell
                .ok_or_else(|| Failure::Usage("--ell is required for --param p-ell".into()))?,
        },
    };
    let grid = match &args.values {
        Some(v) if v.is_empty() => return Err(Failure::Usage("--values is empty".into())),
        Some(v) => v.clone(),
        None => {
            let (lo, hi) = match (args.param, args.from, args.to) {
                (_, Some(a), Some(b)) => (a, b),
                (SweepParam::PEll, a, b) => (a.unwrap_or(0.0), b.unwrap_or(1.0)),
                (SweepParam::Ell, _, _) => {
                    return Err(Failure::Usage("--from and --to are required for ell sweeps".into()))
                }
            };
            if lo.is_nan() || hi.is_nan() || lo > hi || args.points == 0 {
                return Err(Failure::Usage("need from <= to and at least one point".into()));
            }
            if args.points == 1 {
                vec![lo]
            } else {
                (0..args.points)
                    .map(|i| lo + (hi - lo) * i as f64 / (args.points - 1) as f64)
                    .collect()
            }
        }
    };
    let curve = objective_curve(&spec, sweep, &grid, cfg)?;
    Ok(match format {
        Format::Json => json(&curve),
        Format::Csv => {
            let mut csv = Csv::new(&["x", "objective", "feasible", "ell", "u", "p_ell", "p_u"]);
            for p in &curve {
                let r = p.rule;
                csv.row(&[
                    num(p.x),
                    opt(p.objective),
                    p.feasible.to_string(),
                    opt(r.map(|r| r.ell)),
                    opt(r.map(|r| r.u)),
                    opt(r.map(|r| r.p_ell)),
                    opt(r.map(|r| r.p_u)),
                ]);
            }
            csv.finish()
        }
    })
}

#[derive(Serialize)]
struct TableRow {
    beta: f64,
    #[serde(flatten)]
    values: serde_json::Map<String, serde_json::Value>,
    error: Option<String>,
}

/// Failed rows are written with NaN cells; the command then exits with the
/// solver-failure code.
pub fn table_cmd(table: TableId, cfg: &SolverConfig, format: Format) -> Output {
    type Extract = fn(&SolveResult) -> Vec<f64>;
    type Layout = (&'static [f64], fn(f64) -> ProblemSpec, &'static [&'static str], Extract);
    let (betas, build, header, extract): Layout = match table {
        TableId::Table1 => (&GAUSSIAN_PROSPECT_BETAS, gaussian_prospect, &["ell"], |r| {
            vec![r.rule.ell]
        }),
        TableId::Table2 => (
            &BINOMIAL_PROSPECT_BETAS,
            binomial_prospect,
            &["ell", "u", "p_ell", "p_u"],
            |r| vec![r.rule.ell, r.rule.u, r.rule.p_ell, r.rule.p_u],
        ),
        TableId::Table3 => (&SUPREMUM_BETAS, composite_supremum, &["ell", "u", "p_a", "p_b"], |r| {
            vec![
                r.rule.ell,
                r.rule.u,
                r.p_a.unwrap_or(f64::NAN),
                r.p_b.unwrap_or(f64::NAN),
            ]
        }),
    };
    let mut rows = Vec::new();
    let mut failed = 0;
    for &beta in betas {
        let (values, error) = match solve(&build(beta), cfg) {
            Ok(r) => (extract(&r), None),
            Err(e) => {
                failed += 1;
                eprintln!("beta {beta}: {e}");
                (vec![f64::NAN; header.len()], Some(e.to_string()))
            }
        };
        rows.push((beta, values, error));
    }
    let text = match format {
        Format::Csv => {
            let mut cols = vec!["beta"];
            cols.extend_from_slice(header);
            let mut csv = Csv::new(&cols);
            for (beta, values, _) in &rows {
                let mut cells = vec![num(*beta)];
                cells.extend(values.iter().map(|&v| num(v)));
                csv.row(&cells);
            }
            csv.finish()
        }
        Format::Json => {
            let out: Vec<TableRow> = rows
                .into_iter()
                .map(|(beta, values, error)| TableRow {
                    beta,
                    values: header
                        .iter()
                        .zip(values)
                        .map(|(k, v)| {
                            (
                                k.to_string(),
                                serde_json::json!(if v.is_nan() { None } else { Some(v) }),
                            )
                        })
                        .collect(),
                    error,
                })
                .collect();
            json(&out)
        }
    };
    let status = if failed == 0 {
        Ok(())
    } else {
        Err(Failure::Solver(format!("{failed} row(s) failed")))
    };
    (text, status)
}

#[derive(Debug, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

fn check(name: &'static str, pass: bool, detail: String) -> Check {
    Check { name, pass, detail }
}

// Monte-Carlo disagreement beyond this many standard errors counts as a
// violation; the 99% band alone would flag one correct rule in a hundred.
const MC_Z_LIMIT: f64 = 5.0;

pub fn verify_cmd(spec: &str, result: &Path, o: &Overrides, format: Format) -> Output {
    let checks = match run_checks(spec, result, o) {
        Ok(c) => c,
        Err(e) => return (String::new(), Err(e)),
    };
    let failed = checks.iter().filter(|c| !c.pass).count();
    let text = match format {
        Format::Json => json(&serde_json::json!({ "pass": failed == 0, "checks": checks })),
        Format::Csv => {
            let mut csv = Csv::new(&["check", "pass", "detail"]);
            for c in &checks {
                csv.row(&[c.name, if c.pass { "true" } else { "false" }, &c.detail]);
            }
            csv.finish()
        }
    };
    (
        text,
        if failed == 0 {
            Ok(())
        } else {
            Err(Failure::Violations(failed))
        },
    )
}

fn run_checks(spec: &str, result: &Path, o: &Overrides) -> Result<Vec<Check>, Failure> {
    let spec = load_spec(spec)?;
    let r = load_result(result)?;
    let cfg = solver_config(o)?;
    let fam = &spec.family;
    let rule = &r.rule;
    let grid = o.grid_points.unwrap_or(400);
    let p = |th: f64| independent_power(fam, th, rule);
    let mut checks = Vec::new();

    let level = match &spec.constraint {
        Constraint::Point { theta0 } => p(*theta0)?,
        Constraint::Integrated { lambda0, .. } => lambda0.integrate(p, &cfg.integration)?,
        Constraint::Supremum { null_range } => p(null_range[0])?.max(p(null_range[1])?),
    };
    checks.push(check(
        "level",
        level <= spec.alpha + 1e-8,
        format!("constraint value {level:.10} against alpha {}", spec.alpha),
    ));
    checks.push(check(
        "reported_level",
        (level - r.false_alarm).abs() <= 1e-8,
        format!("recomputed {level:.10}, reported {:.10}", r.false_alarm),
    ));

    let objective = spec.objective(rule, &cfg.integration)?;
    checks.push(check(
        "reported_objective",
        (objective - r.objective_value).abs() <= 1e-6 * (1.0 + objective.abs()),
        format!("recomputed {objective:.10}, reported {:.10}", r.objective_value),
    ));

    if !fam.is_discrete() {
        let fp = check_theorem3_fixed_point(&spec, &r, grid)?;
        checks.push(check(
            "fixed_point",
            fp.passes(1e-3),
            format!(
                "kappa {:.6e}, residual {:.2e}, {} interior and {} exterior violations on {} points",
                fp.kappa, fp.relative_residual, fp.interior_violations, fp.exterior_violations, grid
            ),
        ));
        let psi = check_psi_single_root(&spec, &r, grid)?;
        checks.push(check(
            "psi_single_turn",
            psi.sign_changes <= 1,
            format!(
                "{} sign change(s) of the derivative at {:?}",
                psi.sign_changes, psi.locations
            ),
        ));
    }

    if let Constraint::Supremum { null_range: [a, b] } = spec.constraint {
        let e = endpoint_check(fam, rule, a, b, 200)?;
        checks.push(check(
            "endpoint_max",
            e.at_endpoint && e.max_power <= spec.alpha + 1e-6,
            format!("max power {:.8} at {:.4}", e.max_power, e.argmax),
        ));
    }

    let th = spec.constraint.null_range().0;
    let exact = p(th)?;
    let est = mc_power(fam, th, rule, 1_000_000, o.seed)?;
    let se = est.half_width / 2.575_829_303_548_901;
    let z = if se > 0.0 {
        (est.estimate - exact) / se
    } else if est.estimate == exact {
        0.0
    } else {
        f64::INFINITY
    };
    checks.push(check(
        "monte_carlo",
        z.abs() <= MC_Z_LIMIT,
        format!(
            "theta {th}: estimate {:.6} +/- {:.6} (99%), exact {exact:.6}, z {z:.2}, inside band: {}",
            est.estimate,
            est.half_width,
            est.covers(exact)
        ),
    ));
    Ok(checks)
}

pub fn mc_cmd(
    spec: &str,
    result: &Path,
    theta: Option<f64>,
    samples: usize,
    seed: u64,
    format: Format,
) -> Result<String, Failure> {
    if samples < 1000 {
        return Err(Failure::Usage(format!(
            "--samples must be at least 1000, got {samples}"
        )));
    }
    let spec = load_spec(spec)?;
    let r = load_result(result)?;
    let th = theta.unwrap_or(spec.constraint.null_range().0);
    let exact = independent_power(&spec.family, th, &r.rule)?;
    let est = mc_power(&spec.family, th, &r.rule, samples, seed)?;
    Ok(match format {
        Format::Json => json(&serde_json::json!({
            "theta": th,
            "estimate": est.estimate,
            "half_width": est.half_width,
            "samples": est.samples,
            "exact": exact,
            "covers": est.covers(exact),
        })),
        Format::Csv => {
            let mut csv = Csv::new(&["theta", "estimate", "half_width", "samples", "exact", "covers"]);
            csv.row(&[
                num(th),
                num(est.estimate),
                num(est.half_width),
                est.samples.to_string(),
                num(exact),
                est.covers(exact).to_string(),
            ]);
            csv.finish()
        }
    })
}
