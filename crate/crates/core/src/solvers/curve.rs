use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::continuous::CompositeSearch;
use super::discrete::NullTable;
use super::{Constraint, ProblemSpec, SolverConfig};
use crate::error::{Error, Result};
use crate::rules::IntervalRule;

/// Which rule parameter is swept; the paired threshold comes from the
/// active constraint.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "param", rename_all = "snake_case")]
pub enum Sweep {
    /// Lower threshold of a continuous-family rule.
    Ell,
    /// Lower-boundary randomization of a discrete-family rule at a fixed
    /// lower threshold `ell` (on the statistic axis).
    PEll { ell: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub x: f64,
    pub feasible: bool,
    pub objective: Option<f64>,
    pub rule: Option<IntervalRule>,
}

/// Objective along a sweep. Values with no feasible completion are kept,
/// flagged, rather than reported as errors.
pub fn objective_curve(spec: &ProblemSpec, sweep: Sweep, grid: &[f64], cfg: &SolverConfig) -> Result<Vec<CurvePoint>> {
    spec.validate()?;
    cfg.validate()?;
    let rules: Vec<Result<Option<IntervalRule>>> = match sweep {
        Sweep::Ell => {
            if spec.family.is_discrete() {
                return Err(Error::invalid(
                    "sweep",
                    "ell sweeps need a continuous family; use p_ell",
                ));
            }
            match spec.constraint {
                Constraint::Point { theta0 } => grid.par_iter().map(|&ell| point_rule(spec, theta0, ell)).collect(),
                _ => {
                    let search = CompositeSearch::new(spec, cfg)?;
                    grid.par_iter()
                        .map(|&ell| match search.upper_for(ell) {
                            Ok(u) => IntervalRule::closed(ell, u).map(Some),
                            Err(Error::Infeasible(_)) => Ok(None),
                            Err(e) => Err(e),
                        })
                        .collect()
                }
            }
        }
        Sweep::PEll { ell } => {
            let Constraint::Point { theta0 } = spec.constraint else {
                return Err(Error::invalid("sweep", "p_ell sweeps need a point null"));
            };
            if !spec.family.is_discrete() {
                return Err(Error::invalid("sweep", "p_ell sweeps need a discrete family"));
            }
            let table = NullTable::new(spec, theta0)?;
            let i = table
                .support
                .iter()
                .position(|&t| t == ell)
                .ok_or_else(|| Error::invalid("sweep.ell", format!("{ell} is not a support point")))?;
            grid.iter()
                .map(|&p| {
                    if !(0.0..=1.0).contains(&p) {
                        return Err(Error::invalid("sweep.grid", format!("{p} is not a probability")));
                    }
                    Ok(table.complete(i, p))
                })
                .collect()
        }
    };
    grid.par_iter()
        .zip(rules)
        .map(|(&x, rule)| {
            let rule = rule?;
            let objective = match &rule {
                Some(r) => Some(spec.objective(r, &cfg.integration)?),
                None => None,
            };
            Ok(CurvePoint {
                x,
                feasible: rule.is_some(),
                objective,
                rule,
            })
        })
        .collect()
}

fn point_rule(spec: &ProblemSpec, theta0: f64, ell: f64) -> Result<Option<IntervalRule>> {
    let fam = &spec.family;
    let q = fam.statistic_cdf(theta0, ell)?;
    if q > spec.alpha {
        return Ok(None);
    }
    let u = fam.statistic_upper_quantile(theta0, spec.alpha - q)?;
    if !(u > ell) {
        return Ok(None);
    }
    IntervalRule::closed(ell, u).map(Some)
}
