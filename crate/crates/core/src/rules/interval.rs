use serde::{Deserialize, Serialize};

use crate::distributions::ExponentialFamily;
use crate::error::{Error, Result};

/// Rejects when `T(y) < ℓ` or `T(y) > u`, rejects with probability `p_ℓ`
/// at `T(y) = ℓ` and `p_u` at `T(y) = u`, and accepts strictly inside.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntervalRule {
    #[serde(with = "crate::ext_real")]
    pub ell: f64,
    #[serde(with = "crate::ext_real")]
    pub u: f64,
    pub p_ell: f64,
    pub p_u: f64,
}

impl IntervalRule {
    pub fn new(ell: f64, u: f64, p_ell: f64, p_u: f64) -> Result<Self> {
        let rule = Self { ell, u, p_ell, p_u };
        rule.validate()?;
        Ok(rule)
    }

    /// Deterministic rule `1{T ≤ ℓ or T ≥ u}`.
    pub fn closed(ell: f64, u: f64) -> Result<Self> {
        Self::new(ell, u, 1.0, 1.0)
    }

    pub fn always_accept() -> Self {
        Self {
            ell: f64::NEG_INFINITY,
            u: f64::INFINITY,
            p_ell: 1.0,
            p_u: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.ell.is_nan() || self.u.is_nan() || !(self.ell < self.u) {
            return Err(Error::invalid(
                "rule",
                format!("need ell < u, got ({}, {})", self.ell, self.u),
            ));
        }
        for (name, p) in [("rule.p_ell", self.p_ell), ("rule.p_u", self.p_u)] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::invalid(name, format!("{p} is not a probability")));
            }
        }
        Ok(())
    }

    /// Boundary randomization is irrelevant for continuous families; this
    /// pins it to 1.
    pub fn normalized_for(mut self, fam: &ExponentialFamily) -> Self {
        if !fam.is_discrete() {
            self.p_ell = 1.0;
            self.p_u = 1.0;
        }
        self
    }

    /// Rejection probability at a value `t` of the sufficient statistic.
    pub fn decide_statistic(&self, t: f64) -> f64 {
        if t < self.ell || t > self.u {
            1.0
        } else if t == self.ell {
            self.p_ell
        } else if t == self.u {
            self.p_u
        } else {
            0.0
        }
    }

    pub fn decide(&self, fam: &ExponentialFamily, y: f64) -> f64 {
        self.decide_statistic(fam.statistic(y))
    }
}

/// p(θ; δ) for an interval rule, in closed form from the statistic's CDF.
pub fn power(fam: &ExponentialFamily, theta: f64, rule: &IntervalRule) -> Result<f64> {
    let mut p = 0.0;
    if rule.ell > f64::NEG_INFINITY {
        let atom = fam.statistic_atom(theta, rule.ell)?;
        p += fam.statistic_cdf(theta, rule.ell)? - atom + rule.p_ell * atom;
    }
    if rule.u < f64::INFINITY {
        let atom = fam.statistic_atom(theta, rule.u)?;
        p += fam.statistic_sf(theta, rule.u)? + rule.p_u * atom;
    } else {
        fam.check_param(theta)?;
    }
    Ok(p.clamp(0.0, 1.0))
}
