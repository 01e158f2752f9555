use serde::{Deserialize, Serialize};

use super::measure::{ParameterMeasure, SignedMeasure};
use super::Likelihood;
use crate::error::{Error, Result};
use crate::quadrature::IntegrationConfig;

/// Thresholds the ratio of two integrated likelihoods:
/// reject when `∫ f_θ(y) π⁺(dθ) > c ∫ f_θ(y) π⁻(dθ)`, accept when `<`, and
/// reject with probability `tie_action` on equality.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneralBayesRule {
    pub pi_plus: ParameterMeasure,
    pub pi_minus: ParameterMeasure,
    pub c: f64,
    pub tie_action: f64,
    #[serde(skip, default)]
    pub integration: IntegrationConfig,
}

impl GeneralBayesRule {
    pub fn new(pi_plus: ParameterMeasure, pi_minus: ParameterMeasure, c: f64, tie_action: f64) -> Result<Self> {
        pi_plus.validate("pi_plus")?;
        pi_minus.validate("pi_minus")?;
        for (name, m) in [("pi_plus", &pi_plus), ("pi_minus", &pi_minus)] {
            if !m.is_empty() && !m.is_normalized() {
                return Err(Error::invalid(name, "must be a probability measure"));
            }
        }
        if !pi_plus.is_singular_to(&pi_minus) {
            return Err(Error::invalid("pi_plus", "must be mutually singular with pi_minus"));
        }
        if !c.is_finite() {
            return Err(Error::invalid("c", "must be finite"));
        }
        if !(0.0..=1.0).contains(&tie_action) {
            return Err(Error::invalid("tie_action", "must lie in [0, 1]"));
        }
        Ok(Self {
            pi_plus,
            pi_minus,
            c,
            tie_action,
            integration: IntegrationConfig::default(),
        })
    }

    /// The rule that maximizes `∫ p(θ; δ) ν(dθ)`: `π± = ν±/|ν±|` and
    /// `c = |ν⁻| / |ν⁺|`. A zero positive part yields the rule that never
    /// rejects; a zero negative part the rule that always rejects.
    pub fn from_signed(nu: &SignedMeasure, tie_action: f64) -> Result<Self> {
        let pos = nu.positive.total_mass();
        let neg = nu.negative.total_mass();
        if pos == 0.0 && neg == 0.0 {
            return Err(Error::invalid("nu", "must not be identically zero"));
        }
        if pos == 0.0 {
            return Self::new(ParameterMeasure::empty(), nu.negative.normalized()?, 1.0, 0.0);
        }
        let minus = if neg > 0.0 {
            nu.negative.normalized()?
        } else {
            ParameterMeasure::empty()
        };
        Self::new(nu.positive.normalized()?, minus, neg / pos, tie_action)
    }

    pub fn with_integration(mut self, cfg: IntegrationConfig) -> Self {
        self.integration = cfg;
        self
    }

    /// `(∫ f_θ(y) π⁺(dθ), c ∫ f_θ(y) π⁻(dθ))`.
    pub fn sides<L: Likelihood + ?Sized>(&self, model: &L, y: f64) -> Result<(f64, f64)> {
        let lhs = self.pi_plus.integrate(|th| model.density(th, y), &self.integration)?;
        let rhs = if self.c == 0.0 || self.pi_minus.is_empty() {
            0.0
        } else {
            self.c * self.pi_minus.integrate(|th| model.density(th, y), &self.integration)?
        };
        Ok((lhs, rhs))
    }

    pub fn decide<L: Likelihood + ?Sized>(&self, model: &L, y: f64) -> Result<f64> {
        let (lhs, rhs) = self.sides(model, y)?;
        Ok(if lhs > rhs {
            1.0
        } else if lhs < rhs {
            0.0
        } else {
            self.tie_action
        })
    }
}
