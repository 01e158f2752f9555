//! Optimal interval rules for the three false-alarm constraints.
//!
//! Every solver reduces the problem to a one-dimensional search. Continuous
//! families are searched in the left-tail-mass coordinate `q`, with the upper
//! threshold determined by the active constraint. Discrete families are
//! searched over the lower threshold and its randomization probability.

mod continuous;
mod curve;
mod discrete;
pub mod presets;

pub use curve::{objective_curve, CurvePoint, Sweep};

use serde::{Deserialize, Serialize};

use crate::distributions::ExponentialFamily;
use crate::error::{Error, Result};
use crate::objectives::ObjectiveG;
use crate::quadrature::{find_root, IntegrationConfig, RootConfig, RootResult};
use crate::rules::{power, IntervalRule, ParameterMeasure};

/// The false-alarm constraint.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Constraint {
    /// `p(θ₀; δ) ≤ α`.
    Point { theta0: f64 },
    /// `∫ p(θ; δ) Λ₀(dθ) ≤ α` with `Λ₀` carried on `[a, b]`.
    Integrated {
        null_range: [f64; 2],
        lambda0: ParameterMeasure,
    },
    /// `sup_{θ ∈ [a, b]} p(θ; δ) ≤ α`.
    Supremum { null_range: [f64; 2] },
}

impl Constraint {
    pub fn kind(&self) -> &'static str {
        match self {
            Constraint::Point { .. } => "point",
            Constraint::Integrated { .. } => "integrated",
            Constraint::Supremum { .. } => "supremum",
        }
    }

    /// The null parameter set as a closed interval.
    pub fn null_range(&self) -> (f64, f64) {
        match self {
            Constraint::Point { theta0 } => (*theta0, *theta0),
            Constraint::Integrated { null_range, .. } | Constraint::Supremum { null_range } => {
                (null_range[0], null_range[1])
            }
        }
    }

    /// The constraint functional evaluated at `rule`.
    pub fn value(&self, fam: &ExponentialFamily, rule: &IntervalRule, cfg: &IntegrationConfig) -> Result<f64> {
        match self {
            Constraint::Point { theta0 } => power(fam, *theta0, rule),
            Constraint::Integrated { lambda0, .. } => lambda0.integrate(|th| power(fam, th, rule), cfg),
            Constraint::Supremum { null_range } => {
                Ok(power(fam, null_range[0], rule)?.max(power(fam, null_range[1], rule)?))
            }
        }
    }
}

/// A complete problem: maximize `∫ g(p(θ; δ)) Λ₁(dθ)` subject to the
/// constraint at level `alpha`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProblemSpec {
    pub family: ExponentialFamily,
    pub constraint: Constraint,
    pub theta_range: [f64; 2],
    pub lambda1: ParameterMeasure,
    pub alpha: f64,
    pub g: ObjectiveG,
}

impl ProblemSpec {
    pub fn from_json(s: &str) -> Result<Self> {
        let spec: ProblemSpec = serde_json::from_str(s).map_err(|e| Error::invalid("spec", e.to_string()))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        self.family.validate()?;
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::invalid("alpha", format!("{} must lie in (0, 1)", self.alpha)));
        }
        let [lo, hi] = self.theta_range;
        if !(lo < hi && lo.is_finite() && hi.is_finite()) {
            return Err(Error::invalid("theta_range", "need finite lo < hi"));
        }
        let (dlo, dhi) = self.family.domain();
        let inside_domain = |th: f64| th > dlo && th < dhi;
        if !(lo >= dlo && hi <= dhi) {
            return Err(Error::invalid(
                "theta_range",
                format!("must lie in the {} parameter domain", self.family.name()),
            ));
        }

        let (a, b) = self.constraint.null_range();
        match &self.constraint {
            Constraint::Point { theta0 } => {
                if !(inside_domain(*theta0) && *theta0 >= lo && *theta0 <= hi) {
                    return Err(Error::invalid(
                        "constraint.theta0",
                        "must lie inside theta_range and the family domain",
                    ));
                }
            }
            Constraint::Integrated { lambda0, .. } => {
                check_null_range(a, b, lo, hi, &inside_domain)?;
                lambda0.validate("constraint.lambda0")?;
                match lambda0.support_hull() {
                    Some((s, t)) if s >= a && t <= b => {}
                    Some(_) => return Err(Error::invalid("constraint.lambda0", "must be carried on null_range")),
                    None => return Err(Error::invalid("constraint.lambda0", "must have positive mass")),
                }
                if !(lambda0.total_mass() > self.alpha) {
                    return Err(Error::invalid("constraint.lambda0", "total mass must exceed alpha"));
                }
            }
            Constraint::Supremum { .. } => {
                check_null_range(a, b, lo, hi, &inside_domain)?;
                if !(a < b) {
                    return Err(Error::invalid("constraint.null_range", "need a < b"));
                }
                if !(lo < a && b < hi) {
                    return Err(Error::invalid(
                        "constraint.null_range",
                        "must lie strictly inside theta_range",
                    ));
                }
            }
        }
        if !matches!(self.constraint, Constraint::Point { .. }) && self.family.is_discrete() {
            return Err(Error::invalid(
                "family",
                "composite constraints need a continuous family",
            ));
        }

        self.lambda1.validate("lambda1")?;
        let Some((s, t)) = self.lambda1.support_hull() else {
            return Err(Error::invalid("lambda1", "must have positive mass"));
        };
        if s < lo || t > hi {
            return Err(Error::invalid("lambda1", "must be carried on theta_range"));
        }
        if self.lambda1.atoms.iter().any(|&(th, w)| w > 0.0 && th >= a && th <= b) {
            return Err(Error::invalid("lambda1", "atoms must lie outside the null set"));
        }
        if self
            .lambda1
            .segments
            .iter()
            .any(|&(s, t, w)| w > 0.0 && s.max(a) < t.min(b))
        {
            return Err(Error::invalid("lambda1", "segments must not overlap the null set"));
        }

        self.g.validate()?;
        if let ObjectiveG::Tabulated { values, .. } = &self.g {
            if values.windows(2).any(|w| w[1] <= w[0]) {
                return Err(Error::invalid("g.values", "must be strictly increasing"));
            }
        }
        Ok(())
    }

    /// `∫ g(p(θ; δ)) Λ₁(dθ)`.
    pub fn objective(&self, rule: &IntervalRule, cfg: &IntegrationConfig) -> Result<f64> {
        self.lambda1
            .integrate(|th| self.g.eval(power(&self.family, th, rule)?), cfg)
    }

    pub fn constraint_value(&self, rule: &IntervalRule, cfg: &IntegrationConfig) -> Result<f64> {
        self.constraint.value(&self.family, rule, cfg)
    }
}

fn check_null_range(a: f64, b: f64, lo: f64, hi: f64, inside: &dyn Fn(f64) -> bool) -> Result<()> {
    if !(a <= b && a >= lo && b <= hi && inside(a) && inside(b)) {
        return Err(Error::invalid(
            "constraint.null_range",
            "need a ≤ b inside theta_range and the family domain",
        ));
    }
    Ok(())
}

/// Numerical settings shared by the solvers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub integration: IntegrationConfig,
    pub root: RootConfig,
    /// Grid size for the `q` scan of the continuous solvers.
    pub grid_points: usize,
    /// Golden-section tolerance, in `q` for continuous and `p_ℓ` for discrete
    /// searches.
    pub refine_tol: f64,
    /// Grid size for `p_ℓ` in the discrete solver.
    pub discrete_grid: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            integration: IntegrationConfig::default(),
            root: RootConfig::default(),
            grid_points: 400,
            refine_tol: 1e-9,
            discrete_grid: 2001,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        self.integration.validate()?;
        self.root.validate()?;
        if self.grid_points < 3 {
            return Err(Error::invalid("grid_points", "need at least 3"));
        }
        if self.discrete_grid < 2 {
            return Err(Error::invalid("discrete_grid", "need at least 2"));
        }
        if !(self.refine_tol > 0.0) {
            return Err(Error::invalid("refine_tol", "must be positive"));
        }
        Ok(())
    }

    fn refine(&self) -> RootConfig {
        RootConfig {
            x_tol: self.refine_tol,
            ..self.root
        }
    }
}

/// Sup of the power over the null interval on an equally spaced grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EndpointCheck {
    pub grid_points: usize,
    pub max_power: f64,
    pub argmax: f64,
    /// Whether the grid maximum lies within one grid step of `a` or `b`.
    pub at_endpoint: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub solver: String,
    pub grid_points: usize,
    pub refine_iterations: usize,
    /// Achieved constraint value minus `alpha`.
    pub constraint_residual: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub endpoint_check: Option<EndpointCheck>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveResult {
    pub rule: IntervalRule,
    pub objective_value: f64,
    /// The constraint functional at the returned rule.
    pub false_alarm: f64,
    /// Power at the ends of the null interval (composite constraints only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_a: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_b: Option<f64>,
    /// Left-tail mass of the lower threshold (continuous solvers only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<f64>,
    pub diagnostics: Diagnostics,
}

/// Dispatches on the constraint kind and the family's base measure.
pub fn solve(spec: &ProblemSpec, cfg: &SolverConfig) -> Result<SolveResult> {
    spec.validate()?;
    cfg.validate()?;
    match (&spec.constraint, spec.family.is_discrete()) {
        (Constraint::Point { .. }, false) => continuous::solve_simple_null_continuous(spec, cfg),
        (Constraint::Point { .. }, true) => discrete::solve_simple_null_discrete(spec, cfg),
        (Constraint::Integrated { .. }, _) => continuous::solve_composite_integrated(spec, cfg),
        (Constraint::Supremum { .. }, _) => continuous::solve_composite_supremum(spec, cfg),
    }
}

pub use continuous::{solve_composite_integrated, solve_composite_supremum, solve_simple_null_continuous};
pub use discrete::solve_simple_null_discrete;

/// Power on a `points`-point grid over `[a, b]`.
pub fn endpoint_check(
    fam: &ExponentialFamily,
    rule: &IntervalRule,
    a: f64,
    b: f64,
    points: usize,
) -> Result<EndpointCheck> {
    let n = points.max(2);
    let step = (b - a) / (n - 1) as f64;
    let mut best = (a, f64::NEG_INFINITY);
    for i in 0..n {
        let th = if i == n - 1 { b } else { a + i as f64 * step };
        let p = power(fam, th, rule)?;
        if p > best.1 {
            best = (th, p);
        }
    }
    let at_endpoint = (best.0 - a).abs() <= step * (1.0 + 1e-9) || (b - best.0).abs() <= step * (1.0 + 1e-9);
    Ok(EndpointCheck {
        grid_points: n,
        max_power: best.1,
        argmax: best.0,
        at_endpoint,
    })
}

/// Brent on a fallible function; the first evaluation error wins.
pub(crate) fn fallible_root<F>(f: F, lo: f64, hi: f64, cfg: &RootConfig) -> Result<RootResult>
where
    F: Fn(f64) -> Result<f64>,
{
    let err = std::cell::RefCell::new(None);
    let root = find_root(
        |x| {
            f(x).unwrap_or_else(|e| {
                err.borrow_mut().get_or_insert(e);
                f64::NAN
            })
        },
        lo,
        hi,
        cfg,
    );
    match err.into_inner() {
        Some(e) => Err(e),
        None => root,
    }
}
