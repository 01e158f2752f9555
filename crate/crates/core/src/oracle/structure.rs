use serde::{Deserialize, Serialize};

use super::independent_power;
use crate::distributions::ExponentialFamily;
use crate::error::{Error, Result};
use crate::quadrature::{find_root, IntegrationConfig, RootConfig};
use crate::rules::{IntervalRule, ParameterMeasure};
use crate::solvers::{Constraint, ProblemSpec, SolveResult};

// Relative slack before a point on the wrong side of κ counts as a violation.
const SIDE_SLACK: f64 = 1e-6;
// Power gap under which both supremum endpoints count as binding.
const ACTIVE_TOL: f64 = 1e-6;
// Null tail mass left outside the statistic grid.
const GRID_TAIL: f64 = 1e-4;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConsistencyReport {
    /// `R(ℓ)`; absent for a one-sided rule with `ℓ = −∞`.
    pub kappa_ell: Option<f64>,
    /// `R(u)`; absent for `u = +∞`.
    pub kappa_u: Option<f64>,
    pub kappa: f64,
    /// `|R(ℓ) − R(u)| / R(ℓ)`, zero for one-sided rules.
    pub relative_residual: f64,
    /// Acceptance-region grid points with `R > κ`.
    pub interior_violations: usize,
    /// Rejection-region grid points with `R < κ`.
    pub exterior_violations: usize,
    /// Largest relative gap `|R/κ − 1|` among the violations.
    pub max_violation: f64,
    pub grid_points: usize,
    /// Null-side mixing measure used for the comparison density.
    pub null_atoms: Vec<(f64, f64)>,
    /// `|C(δ) − α|` for the constraint functional `C`, recomputed here.
    pub constraint_gap: f64,
}

impl ConsistencyReport {
    pub fn violations(&self) -> usize {
        self.interior_violations + self.exterior_violations
    }

    pub fn passes(&self, residual_tol: f64) -> bool {
        self.relative_residual <= residual_tol && self.violations() == 0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PsiReport {
    pub grid_points: usize,
    pub grid: [f64; 2],
    pub step: f64,
    /// Sign changes of the discrete derivative of ψ.
    pub sign_changes: usize,
    /// Statistic values where they happen.
    pub locations: Vec<f64>,
}

/// Evaluates `ln H(y)` and the log null-side density along the statistic axis.
struct Structure<'a> {
    fam: &'a ExponentialFamily,
    rule: IntervalRule,
    spec: &'a ProblemSpec,
    null: ParameterMeasure,
    cfg: IntegrationConfig,
}

impl<'a> Structure<'a> {
    fn new(spec: &'a ProblemSpec, rule: IntervalRule) -> Result<Self> {
        spec.validate()?;
        if spec.family.is_discrete() {
            return Err(Error::Precondition("structural checks need a continuous family".into()));
        }
        let mut s = Self {
            fam: &spec.family,
            rule,
            spec,
            null: ParameterMeasure::empty(),
            cfg: IntegrationConfig::default(),
        };
        s.null = match &spec.constraint {
            Constraint::Point { theta0 } => ParameterMeasure::atom(*theta0, 1.0),
            Constraint::Integrated { lambda0, .. } => lambda0.clone(),
            Constraint::Supremum { null_range } => s.least_favorable(null_range[0], null_range[1])?,
        };
        Ok(s)
    }

    /// `ln ∫ f_θ(y) w(θ) m(dθ)`, factoring out the largest log-density over a
    /// coarse θ sample so that tails neither underflow nor overflow.
    fn log_mixture<W>(&self, m: &ParameterMeasure, t: f64, weight: W) -> Result<f64>
    where
        W: Fn(f64) -> Result<f64>,
    {
        let y = self.fam.observation_at(t);
        let mut scale = f64::NEG_INFINITY;
        for &(th, w) in &m.atoms {
            if w > 0.0 {
                scale = scale.max(self.fam.log_density(th, y)?);
            }
        }
        for &(a, b, w) in &m.segments {
            if w > 0.0 {
                for k in 0..=16 {
                    let th = a + (b - a) * k as f64 / 16.0;
                    scale = scale.max(self.fam.log_density(th, y)?);
                }
            }
        }
        if !scale.is_finite() {
            return Ok(f64::NEG_INFINITY);
        }
        let v = m.integrate(
            |th| Ok(weight(th)? * (self.fam.log_density(th, y)? - scale).exp()),
            &self.cfg,
        )?;
        Ok(scale + v.ln())
    }

    /// `ln H` at statistic value `t`, with `H(y) = ∫ g′(p(θ)) f_θ(y) Λ₁(dθ)`.
    fn log_h(&self, t: f64) -> Result<f64> {
        self.log_mixture(&self.spec.lambda1, t, |th| {
            self.spec.g.derivative(independent_power(self.fam, th, &self.rule)?)
        })
    }

    fn log_null_with(&self, null: &ParameterMeasure, t: f64) -> Result<f64> {
        self.log_mixture(null, t, |_| Ok(1.0))
    }

    fn constraint_gap(&self) -> Result<f64> {
        let p = |th: f64| independent_power(self.fam, th, &self.rule);
        let value = match &self.spec.constraint {
            Constraint::Point { theta0 } => p(*theta0)?,
            Constraint::Integrated { lambda0, .. } => lambda0.integrate(p, &self.cfg)?,
            Constraint::Supremum { null_range } => p(null_range[0])?.max(p(null_range[1])?),
        };
        Ok((value - self.spec.alpha).abs())
    }

    fn log_ratio(&self, t: f64) -> Result<f64> {
        Ok(self.log_h(t)? - self.log_null_with(&self.null, t)?)
    }

    /// Two-point measure on `{a, b}` with mass only on the endpoints that
    /// attain the larger power. With both attaining it the split makes
    /// `R(ℓ) = R(u)`.
    fn least_favorable(&self, a: f64, b: f64) -> Result<ParameterMeasure> {
        let pa = independent_power(self.fam, a, &self.rule)?;
        let pb = independent_power(self.fam, b, &self.rule)?;
        let top = pa.max(pb);
        let mix = |w: f64| ParameterMeasure::atom(a, w).with_atom(b, 1.0 - w);
        match (top - pa <= ACTIVE_TOL, top - pb <= ACTIVE_TOL) {
            (true, false) => return Ok(ParameterMeasure::atom(a, 1.0)),
            (false, true) => return Ok(ParameterMeasure::atom(b, 1.0)),
            _ => {}
        }
        let (ell, u) = (self.rule.ell, self.rule.u);
        if !(ell.is_finite() && u.is_finite()) {
            return Ok(mix(0.5));
        }
        let gap = |w: f64| -> Result<f64> {
            let m = mix(w);
            Ok((self.log_h(ell)? - self.log_null_with(&m, ell)?) - (self.log_h(u)? - self.log_null_with(&m, u)?))
        };
        let (g0, g1) = (gap(0.0)?, gap(1.0)?);
        if g0.signum() == g1.signum() {
            return Ok(mix(if g0.abs() <= g1.abs() { 0.0 } else { 1.0 }));
        }
        let w = find_root(
            |w| gap(w).unwrap_or(f64::NAN),
            0.0,
            1.0,
            &RootConfig::default().with_x_tol(1e-13),
        )?
        .root;
        Ok(mix(w))
    }

    /// Statistic grid covering both thresholds and the bulk of the null.
    fn grid(&self, points: usize) -> Result<Vec<f64>> {
        let (a, b) = self.spec.constraint.null_range();
        let mut lo = self.fam.statistic_quantile(a, GRID_TAIL)?;
        let mut hi = self.fam.statistic_upper_quantile(b, GRID_TAIL)?;
        if self.rule.ell.is_finite() {
            lo = lo.min(self.rule.ell);
        }
        if self.rule.u.is_finite() {
            hi = hi.max(self.rule.u);
        }
        let (lo, hi) = (lo - 1.0, hi + 1.0);
        let n = points.max(2);
        Ok((0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect())
    }
}

/// Checks that the solved rule thresholds `R(y) = H(y) / f₀(y)` at a single
/// level κ: `R(ℓ) = R(u)`, `R > κ` where the rule rejects and `R < κ` where
/// it accepts. The null-side density is `f_θ₀`, the `Λ₀` mixture, or a
/// least-favorable two-point mixture on the endpoints, by constraint kind.
pub fn check_theorem3_fixed_point(
    spec: &ProblemSpec,
    result: &SolveResult,
    grid_points: usize,
) -> Result<ConsistencyReport> {
    let s = Structure::new(spec, result.rule)?;
    let (ell, u) = (s.rule.ell, s.rule.u);
    let k_ell = if ell.is_finite() { Some(s.log_ratio(ell)?) } else { None };
    let k_u = if u.is_finite() { Some(s.log_ratio(u)?) } else { None };
    let (log_kappa, residual) = match (k_ell, k_u) {
        (Some(x), Some(y)) => ((0.5 * (x.exp() + y.exp())).ln(), ((y - x).exp() - 1.0).abs()),
        (Some(x), None) | (None, Some(x)) => (x, 0.0),
        (None, None) => return Err(Error::Precondition("rule never rejects".into())),
    };

    let mut interior = 0;
    let mut exterior = 0;
    let mut max_violation: f64 = 0.0;
    for t in s.grid(grid_points)? {
        if t == ell || t == u {
            continue;
        }
        let d = s.log_ratio(t)? - log_kappa;
        if d.is_nan() {
            continue;
        }
        let rejects = t < ell || t > u;
        let wrong = if rejects { d < -SIDE_SLACK } else { d > SIDE_SLACK };
        if wrong {
            if rejects {
                exterior += 1;
            } else {
                interior += 1;
            }
            max_violation = max_violation.max(d.exp_m1().abs());
        }
    }
    Ok(ConsistencyReport {
        kappa_ell: k_ell.map(f64::exp),
        kappa_u: k_u.map(f64::exp),
        kappa: log_kappa.exp(),
        relative_residual: residual,
        interior_violations: interior,
        exterior_violations: exterior,
        max_violation,
        grid_points,
        null_atoms: s.null.atoms.clone(),
        constraint_gap: s.constraint_gap()?,
    })
}

/// Counts sign changes of the discrete derivative of
/// `ψ(t) = ln H(t) − ln f₀(t)` on an equally spaced statistic grid.
pub fn check_psi_single_root(spec: &ProblemSpec, result: &SolveResult, grid_points: usize) -> Result<PsiReport> {
    let s = Structure::new(spec, result.rule)?;
    let grid = s.grid(grid_points)?;
    let psi: Vec<f64> = grid.iter().map(|&t| s.log_ratio(t)).collect::<Result<_>>()?;
    let mut sign_changes = 0;
    let mut locations = Vec::new();
    let mut last = 0.0;
    for (i, w) in psi.windows(2).enumerate() {
        let d = w[1] - w[0];
        if d == 0.0 || d.is_nan() {
            continue;
        }
        if last != 0.0 && d.signum() != last {
            sign_changes += 1;
            locations.push(grid[i]);
        }
        last = d.signum();
    }
    Ok(PsiReport {
        grid_points: grid.len(),
        grid: [grid[0], grid[grid.len() - 1]],
        step: grid[1] - grid[0],
        sign_changes,
        locations,
    })
}
