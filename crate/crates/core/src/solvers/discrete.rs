use rayon::prelude::*;

use super::{Constraint, Diagnostics, ProblemSpec, SolveResult, SolverConfig};
use crate::error::{Error, Result};
use crate::quadrature::golden_section;
use crate::rules::IntervalRule;

// Null mass dropped when truncating an unbounded support.
const SUPPORT_TAIL: f64 = 1e-14;
// Relative objective gap under which two candidates count as tied.
const TIE_TOL: f64 = 1e-12;
// Slack for roundoff in the constraint bookkeeping.
const MASS_TOL: f64 = 1e-15;

/// The null distribution of `T` on its support, with the masses the
/// constraint equation needs.
pub(crate) struct NullTable {
    pub support: Vec<f64>,
    pub mass: Vec<f64>,
    /// `P(T < t_i)`.
    pub below: Vec<f64>,
    /// `P(T > t_i)`.
    pub above: Vec<f64>,
    alpha: f64,
}

impl NullTable {
    pub(crate) fn new(spec: &ProblemSpec, theta0: f64) -> Result<Self> {
        let fam = &spec.family;
        let support = fam
            .statistic_support(&[theta0], SUPPORT_TAIL)?
            .ok_or_else(|| Error::invalid("family", "this solver needs a discrete family"))?;
        let mut mass = Vec::with_capacity(support.len());
        let mut below = Vec::with_capacity(support.len());
        let mut above = Vec::with_capacity(support.len());
        for &t in &support {
            let m = fam.statistic_atom(theta0, t)?;
            mass.push(m);
            below.push((fam.statistic_cdf(theta0, t)? - m).max(0.0));
            above.push(fam.statistic_sf(theta0, t)?);
        }
        Ok(Self {
            support,
            mass,
            below,
            above,
            alpha: spec.alpha,
        })
    }

    /// Completes `(ℓ = t_i, p_ℓ)` to the rule whose null rejection
    /// probability is exactly `α`, if there is one.
    pub(crate) fn complete(&self, i: usize, p_ell: f64) -> Option<IntervalRule> {
        let r = self.alpha - self.below[i] - p_ell * self.mass[i];
        if r < -MASS_TOL {
            return None;
        }
        let r = r.max(0.0);
        let k = (i + 1..self.support.len()).find(|&k| self.above[k] <= r)?;
        let p_u = (r - self.above[k]) / self.mass[k];
        if !(-MASS_TOL..=1.0 + MASS_TOL).contains(&p_u) {
            return None;
        }
        IntervalRule::new(self.support[i], self.support[k], p_ell, p_u.clamp(0.0, 1.0)).ok()
    }
}

/// Grid over `(ℓ, p_ℓ)` with the constraint solved for `(u, p_u)`, then a
/// golden-section pass on `p_ℓ` around the best cell.
pub fn solve_simple_null_discrete(spec: &ProblemSpec, cfg: &SolverConfig) -> Result<SolveResult> {
    spec.validate()?;
    cfg.validate()?;
    let Constraint::Point { theta0 } = spec.constraint else {
        return Err(Error::invalid("constraint", "expected a point null"));
    };
    if !spec.family.is_discrete() {
        return Err(Error::invalid("family", "this solver needs a discrete family"));
    }
    let table = NullTable::new(spec, theta0)?;
    let n = cfg.discrete_grid;
    let p_at = |j: usize| if j == n - 1 { 1.0 } else { j as f64 / (n - 1) as f64 };
    let value = |rule: Option<IntervalRule>| -> f64 {
        rule.and_then(|r| spec.objective(&r, &cfg.integration).ok())
            .filter(|v| !v.is_nan())
            .unwrap_or(f64::NEG_INFINITY)
    };

    let cells = table.support.len().saturating_sub(1) * n;
    let values: Vec<f64> = (0..cells)
        .into_par_iter()
        .map(|c| value(table.complete(c / n, p_at(c % n))))
        .collect();

    // sequential pass: lexicographic (ℓ, p_ℓ) order breaks ties
    let mut best: Option<(usize, f64)> = None;
    for (c, &v) in values.iter().enumerate() {
        if v == f64::NEG_INFINITY {
            continue;
        }
        match best {
            Some((_, bv)) if v <= bv + TIE_TOL * bv.abs() => {}
            _ => best = Some((c, v)),
        }
    }
    let Some((cell, grid_value)) = best else {
        return Err(Error::Infeasible("no (ell, p_ell) pair meets the level".into()));
    };
    let (i, j) = (cell / n, cell % n);

    let lo = p_at(j.saturating_sub(1));
    let hi = p_at((j + 1).min(n - 1));
    let (gp, gv, iterations) = golden_section(|p| value(table.complete(i, p)), lo, hi, &cfg.refine());
    let p_ell = if gv > grid_value + TIE_TOL * grid_value.abs() {
        gp
    } else {
        p_at(j)
    };

    let rule = table
        .complete(i, p_ell)
        .ok_or_else(|| Error::Infeasible("refined pair left the feasible set".into()))?;
    let objective_value = spec.objective(&rule, &cfg.integration)?;
    let false_alarm = spec.constraint_value(&rule, &cfg.integration)?;
    Ok(SolveResult {
        rule,
        objective_value,
        false_alarm,
        p_a: None,
        p_b: None,
        q: None,
        diagnostics: Diagnostics {
            solver: "simple_null_discrete".to_string(),
            grid_points: n,
            refine_iterations: iterations,
            constraint_residual: false_alarm - spec.alpha,
            endpoint_check: None,
        },
    })
}
