use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finitely supported law.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscreteLaw {
    pub points: Vec<f64>,
    pub probs: Vec<f64>,
}

impl DiscreteLaw {
    pub fn new(points: Vec<f64>, probs: Vec<f64>) -> Result<Self> {
        let law = Self { points, probs };
        law.validate()?;
        Ok(law)
    }

    pub fn validate(&self) -> Result<()> {
        if self.points.is_empty() || self.points.len() != self.probs.len() {
            return Err(Error::Precondition(
                "law needs matching, nonempty points and probabilities".into(),
            ));
        }
        if self.points.iter().any(|x| !x.is_finite()) || self.probs.iter().any(|&p| !(p >= 0.0)) {
            return Err(Error::Precondition(
                "law has a non-finite point or negative probability".into(),
            ));
        }
        if (self.probs.iter().sum::<f64>() - 1.0).abs() > 1e-12 {
            return Err(Error::Precondition("probabilities must sum to 1".into()));
        }
        Ok(())
    }

    pub fn mean(&self) -> f64 {
        self.points.iter().zip(&self.probs).map(|(x, p)| x * p).sum()
    }

    pub fn variance(&self) -> f64 {
        let m = self.mean();
        self.points
            .iter()
            .zip(&self.probs)
            .map(|(x, p)| p * (x - m) * (x - m))
            .sum()
    }
}

/// For `U` carried on `[a, b]` and `V` carried outside `(a, b)` with some
/// mass strictly outside `[a, b]` and the same mean inside `(a, b)`, reports
/// whether `Var(U) < Var(V)`.
pub fn check_variance_lemma(a: f64, b: f64, u: &DiscreteLaw, v: &DiscreteLaw) -> Result<bool> {
    if !(a < b) {
        return Err(Error::Precondition(format!("need a < b, got [{a}, {b}]")));
    }
    u.validate()?;
    v.validate()?;
    if u.points
        .iter()
        .zip(&u.probs)
        .any(|(&x, &p)| p > 0.0 && !(a..=b).contains(&x))
    {
        return Err(Error::Precondition("U must be carried on [a, b]".into()));
    }
    if v.points.iter().zip(&v.probs).any(|(&x, &p)| p > 0.0 && x > a && x < b) {
        return Err(Error::Precondition("V must put no mass inside (a, b)".into()));
    }
    let escaping: f64 = v
        .points
        .iter()
        .zip(&v.probs)
        .filter(|(&x, _)| x < a || x > b)
        .map(|(_, p)| p)
        .sum();
    if !(escaping > 0.0) {
        return Err(Error::Precondition("P(V < a) + P(V > b) must be positive".into()));
    }
    let (mu, mv) = (u.mean(), v.mean());
    if (mu - mv).abs() > 1e-9 * (1.0 + a.abs() + b.abs()) {
        return Err(Error::Precondition(format!("means differ: E[U] = {mu}, E[V] = {mv}")));
    }
    if !(mu > a && mu < b) {
        return Err(Error::Precondition(format!("common mean {mu} must lie in (a, b)")));
    }
    Ok(u.variance() < v.variance())
}
