use super::{endpoint_check, fallible_root, Constraint, Diagnostics, ProblemSpec, SolveResult, SolverConfig};
use crate::error::{Error, Result};
use crate::quadrature::{maximize_scalar, RootConfig};
use crate::rules::{power, IntervalRule};

// Mass left outside the bracket for the upper threshold.
const BRACKET_TAIL: f64 = 1e-14;
// Constraint slack below which the upper threshold is sent to +∞.
const OPEN_TOL: f64 = 1e-15;
const ENDPOINT_GRID: usize = 200;

/// Point null: `ℓ(q)` and `u(q)` are the null quantiles at `q` and `1 − (α − q)`.
pub fn solve_simple_null_continuous(spec: &ProblemSpec, cfg: &SolverConfig) -> Result<SolveResult> {
    spec.validate()?;
    let Constraint::Point { theta0 } = spec.constraint else {
        return Err(Error::invalid("constraint", "expected a point null"));
    };
    require_continuous(spec)?;
    let search = PointSearch { spec, theta0 };
    run(spec, cfg, &search, spec.alpha, "simple_null_continuous")
}

/// Integrated null: for each `ℓ` the upper threshold solves `∫ p Λ₀ = α`.
pub fn solve_composite_integrated(spec: &ProblemSpec, cfg: &SolverConfig) -> Result<SolveResult> {
    spec.validate()?;
    if !matches!(spec.constraint, Constraint::Integrated { .. }) {
        return Err(Error::invalid("constraint", "expected an integrated null"));
    }
    composite(spec, cfg, "composite_integrated")
}

/// Supremum null: for each `ℓ` the upper threshold solves
/// `max{p(a), p(b)} = α`.
pub fn solve_composite_supremum(spec: &ProblemSpec, cfg: &SolverConfig) -> Result<SolveResult> {
    spec.validate()?;
    if !matches!(spec.constraint, Constraint::Supremum { .. }) {
        return Err(Error::invalid("constraint", "expected a supremum null"));
    }
    composite(spec, cfg, "composite_supremum")
}

fn require_continuous(spec: &ProblemSpec) -> Result<()> {
    if spec.family.is_discrete() {
        return Err(Error::invalid("family", "this solver needs a continuous family"));
    }
    Ok(())
}

fn composite(spec: &ProblemSpec, cfg: &SolverConfig, name: &str) -> Result<SolveResult> {
    require_continuous(spec)?;
    let search = CompositeSearch::new(spec, cfg)?;
    let q_max = search.q_max()?;
    run(spec, cfg, &search, q_max, name)
}

/// Maps the search coordinate `q` to a feasible rule with an active
/// constraint.
pub(crate) trait RuleMap: Sync {
    fn rule_at(&self, q: f64) -> Result<IntervalRule>;
}

struct PointSearch<'a> {
    spec: &'a ProblemSpec,
    theta0: f64,
}

impl RuleMap for PointSearch<'_> {
    fn rule_at(&self, q: f64) -> Result<IntervalRule> {
        let fam = &self.spec.family;
        let q = q.clamp(0.0, self.spec.alpha);
        let ell = fam.statistic_quantile(self.theta0, q)?;
        let u = fam.statistic_upper_quantile(self.theta0, (self.spec.alpha - q).max(0.0))?;
        IntervalRule::closed(ell, u)
    }
}

/// Lower threshold from its left-tail mass under `θ = a`; upper threshold
/// from a root solve of the active constraint.
pub(crate) struct CompositeSearch<'a> {
    spec: &'a ProblemSpec,
    cfg: &'a SolverConfig,
    a: f64,
    u_lo: f64,
    u_hi: f64,
}

impl<'a> CompositeSearch<'a> {
    pub(crate) fn new(spec: &'a ProblemSpec, cfg: &'a SolverConfig) -> Result<Self> {
        let (a, b) = spec.constraint.null_range();
        let fam = &spec.family;
        let u_lo = fam
            .statistic_quantile(a, BRACKET_TAIL)?
            .min(fam.statistic_quantile(b, BRACKET_TAIL)?);
        let u_hi = fam
            .statistic_upper_quantile(a, BRACKET_TAIL)?
            .max(fam.statistic_upper_quantile(b, BRACKET_TAIL)?);
        Ok(Self {
            spec,
            cfg,
            a,
            u_lo,
            u_hi,
        })
    }

    fn constraint(&self, rule: &IntervalRule) -> Result<f64> {
        self.spec.constraint_value(rule, &self.cfg.integration)
    }

    /// Largest left-tail mass for which some `u` keeps the constraint:
    /// the root of `C(ℓ(q), +∞) = α`.
    pub(crate) fn q_max(&self) -> Result<f64> {
        let alpha = self.spec.alpha;
        let excess = |q: f64| -> Result<f64> {
            let ell = self.spec.family.statistic_quantile(self.a, q)?;
            Ok(self.constraint(&IntervalRule::closed(ell, f64::INFINITY)?)? - alpha)
        };
        let hi = 1.0 - 1e-12;
        if excess(hi)? < 0.0 {
            return Err(Error::Infeasible("one-sided rules never reach the level".into()));
        }
        Ok(fallible_root(
            excess,
            0.0,
            hi,
            &RootConfig {
                x_tol: 1e-15,
                ..self.cfg.root
            },
        )?
        .root)
    }

    /// Upper threshold that makes the constraint active for a given `ℓ`.
    pub(crate) fn upper_for(&self, ell: f64) -> Result<f64> {
        let alpha = self.spec.alpha;
        let excess = |u: f64| -> Result<f64> { Ok(self.constraint(&IntervalRule::closed(ell, u)?)? - alpha) };
        let open = excess(f64::INFINITY)?;
        if open > OPEN_TOL {
            return Err(Error::Infeasible(format!(
                "ell = {ell} rejects more than alpha on its own"
            )));
        }
        if open >= -OPEN_TOL {
            return Ok(f64::INFINITY);
        }
        let lo = if ell.is_finite() {
            ell + 1e-12 * ell.abs().max(1.0)
        } else {
            self.u_lo
        };
        let hi = self.u_hi.max(lo + 1.0);
        let (f_lo, f_hi) = (excess(lo)?, excess(hi)?);
        if f_lo <= 0.0 {
            return Err(Error::Infeasible(format!(
                "no acceptance region above ell = {ell} reaches alpha"
            )));
        }
        if f_hi >= 0.0 {
            // what is left above `hi` is below the bracket tail mass
            return Ok(f64::INFINITY);
        }
        let f_mid = excess(0.5 * (lo + hi))?;
        if !(f_lo >= f_mid && f_mid >= f_hi) {
            return Err(Error::Precondition(format!(
                "constraint is not decreasing in u on [{lo}, {hi}]"
            )));
        }
        Ok(fallible_root(excess, lo, hi, &self.cfg.root)?.root)
    }
}

impl RuleMap for CompositeSearch<'_> {
    fn rule_at(&self, q: f64) -> Result<IntervalRule> {
        let ell = self.spec.family.statistic_quantile(self.a, q.clamp(0.0, 1.0))?;
        IntervalRule::closed(ell, self.upper_for(ell)?)
    }
}

/// Grid scan over `q ∈ [0, q_max]`, golden refinement, then the final rule
/// is rebuilt so that errors at the optimum surface.
fn run<M: RuleMap>(spec: &ProblemSpec, cfg: &SolverConfig, map: &M, q_max: f64, name: &str) -> Result<SolveResult> {
    let objective = |q: f64| -> f64 {
        map.rule_at(q)
            .and_then(|r| spec.objective(&r, &cfg.integration))
            .unwrap_or(f64::NAN)
    };
    let best = maximize_scalar(objective, 0.0, q_max, cfg.grid_points, &cfg.refine());
    if best.max == f64::NEG_INFINITY {
        // every candidate failed; report the first failure
        map.rule_at(0.0).and_then(|r| spec.objective(&r, &cfg.integration))?;
        return Err(Error::Infeasible("no candidate rule could be evaluated".into()));
    }
    let rule = map.rule_at(best.argmax)?;
    let objective_value = spec.objective(&rule, &cfg.integration)?;
    let false_alarm = spec.constraint_value(&rule, &cfg.integration)?;
    let (p_a, p_b, endpoint) = match spec.constraint {
        Constraint::Point { .. } => (None, None, None),
        Constraint::Integrated { null_range, .. } => (
            Some(power(&spec.family, null_range[0], &rule)?),
            Some(power(&spec.family, null_range[1], &rule)?),
            None,
        ),
        Constraint::Supremum { null_range } => (
            Some(power(&spec.family, null_range[0], &rule)?),
            Some(power(&spec.family, null_range[1], &rule)?),
            Some(endpoint_check(
                &spec.family,
                &rule,
                null_range[0],
                null_range[1],
                ENDPOINT_GRID,
            )?),
        ),
    };
    Ok(SolveResult {
        rule,
        objective_value,
        false_alarm,
        p_a,
        p_b,
        q: Some(best.argmax),
        diagnostics: Diagnostics {
            solver: name.to_string(),
            grid_points: cfg.grid_points,
            refine_iterations: best.iterations,
            constraint_residual: false_alarm - spec.alpha,
            endpoint_check: endpoint,
        },
    })
}
