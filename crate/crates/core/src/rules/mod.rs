//! Decision rules and their power functions.
//!
//! Two rule shapes are supported: interval rules on the sufficient statistic
//! (closed-form power via CDFs) and generalized Bayes rules that threshold
//! the ratio of two integrated likelihoods (power by summation or piecewise
//! quadrature over the observation space).

mod bayes;
mod interval;
mod measure;

pub use bayes::GeneralBayesRule;
pub use interval::{power, IntervalRule};
pub use measure::{ParameterMeasure, SignedMeasure};

use crate::distributions::ExponentialFamily;
use crate::error::Result;
use crate::quadrature::IntegrationConfig;

/// Observations that carry (essentially) all of the mass under some θ.
#[derive(Debug, Clone, PartialEq)]
pub enum ObservationSupport {
    Points(Vec<f64>),
    Range(f64, f64),
}

/// A parametric observation model `θ ↦ f_θ`.
pub trait Likelihood: Sync {
    fn density(&self, theta: f64, y: f64) -> Result<f64>;

    fn statistic(&self, y: f64) -> f64 {
        y
    }

    fn observation_support(&self, theta: f64) -> Result<ObservationSupport>;

    /// Closed-form power of an interval rule, when the model has one.
    fn interval_power(&self, _theta: f64, _rule: &IntervalRule) -> Option<Result<f64>> {
        None
    }
}

impl Likelihood for ExponentialFamily {
    fn density(&self, theta: f64, y: f64) -> Result<f64> {
        ExponentialFamily::density(self, theta, y)
    }

    fn statistic(&self, y: f64) -> f64 {
        ExponentialFamily::statistic(self, y)
    }

    fn observation_support(&self, theta: f64) -> Result<ObservationSupport> {
        const TAIL: f64 = 1e-14;
        match self.statistic_support(&[theta], TAIL)? {
            Some(ts) => Ok(ObservationSupport::Points(
                ts.into_iter().map(|t| self.observation_at(t)).collect(),
            )),
            None => {
                let (lo, hi) = self.observation_range(theta, TAIL)?;
                Ok(ObservationSupport::Range(lo, hi))
            }
        }
    }

    fn interval_power(&self, theta: f64, rule: &IntervalRule) -> Option<Result<f64>> {
        Some(power(self, theta, rule))
    }
}

/// Either rule shape, for evaluating Bayes values.
#[derive(Debug, Clone, Copy)]
pub enum RuleCandidate<'a> {
    Interval(&'a IntervalRule),
    Bayes(&'a GeneralBayesRule),
}

impl RuleCandidate<'_> {
    pub fn decide<L: Likelihood + ?Sized>(&self, model: &L, y: f64) -> Result<f64> {
        match self {
            RuleCandidate::Interval(r) => Ok(r.decide_statistic(model.statistic(y))),
            RuleCandidate::Bayes(r) => r.decide(model, y),
        }
    }

    /// p(θ; δ).
    pub fn power<L: Likelihood + ?Sized>(&self, model: &L, theta: f64, cfg: &IntegrationConfig) -> Result<f64> {
        if let RuleCandidate::Interval(r) = self {
            if let Some(p) = model.interval_power(theta, r) {
                return p;
            }
        }
        power_by_integration(model, theta, |y| self.decide(model, y), cfg)
    }
}

/// `∫ δ(y) f_θ(y) μ(dy)` for an arbitrary rule.
///
/// On a continuous support the rule is scanned on a grid, every switch point
/// is located by bisection, and each piece where δ is constant is integrated
/// separately.
pub fn power_by_integration<L, D>(model: &L, theta: f64, decide: D, cfg: &IntegrationConfig) -> Result<f64>
where
    L: Likelihood + ?Sized,
    D: Fn(f64) -> Result<f64>,
{
    match model.observation_support(theta)? {
        ObservationSupport::Points(ys) => {
            let mut total = 0.0;
            for y in ys {
                let d = decide(y)?;
                if d != 0.0 {
                    total += d * model.density(theta, y)?;
                }
            }
            Ok(total)
        }
        ObservationSupport::Range(lo, hi) => {
            const SCAN: usize = 2000;
            let xs: Vec<f64> = (0..=SCAN).map(|i| lo + (hi - lo) * i as f64 / SCAN as f64).collect();
            let mut cuts = vec![lo];
            let mut prev = decide(lo)?;
            for w in xs.windows(2) {
                let cur = decide(w[1])?;
                if cur != prev {
                    let (mut a, mut b) = (w[0], w[1]);
                    for _ in 0..80 {
                        let m = 0.5 * (a + b);
                        if decide(m)? == prev {
                            a = m;
                        } else {
                            b = m;
                        }
                    }
                    cuts.push(0.5 * (a + b));
                    prev = cur;
                }
            }
            cuts.push(hi);
            let mut total = 0.0;
            for w in cuts.windows(2) {
                let d = decide(0.5 * (w[0] + w[1]))?;
                if d != 0.0 && w[1] > w[0] {
                    total += d * measure::integrate_fallible(&|y| model.density(theta, y), w[0], w[1], cfg)?;
                }
            }
            Ok(total)
        }
    }
}

/// `∫ p(θ; δ) ν⁺(dθ) − ∫ p(θ; δ) ν⁻(dθ)`.
pub fn bayes_value<L: Likelihood + ?Sized>(
    model: &L,
    rule: RuleCandidate<'_>,
    nu: &SignedMeasure,
    cfg: &IntegrationConfig,
) -> Result<f64> {
    nu.integrate(|theta| rule.power(model, theta, cfg), cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    const G1: ExponentialFamily = ExponentialFamily::Gaussian { variance: 1.0 };

    #[test]
    fn bayes_value_examples() {
        let cfg = IntegrationConfig::default();
        let nu = SignedMeasure::new(ParameterMeasure::atom(0.3, 1.0), ParameterMeasure::empty()).unwrap();
        let always = GeneralBayesRule::from_signed(&nu, 0.0).unwrap();
        let v = bayes_value(&G1, RuleCandidate::Bayes(&always), &nu, &cfg).unwrap();
        assert_abs_diff_eq!(v, 1.0, epsilon = 1e-8);

        let m = ParameterMeasure::atom(0.2, 1.0).with_segment(0.5, 1.0, 2.0);
        let twin = SignedMeasure {
            positive: m.clone(),
            negative: m,
        };
        let rule = IntervalRule::closed(-1.0, 1.2).unwrap();
        assert_eq!(
            bayes_value(&G1, RuleCandidate::Interval(&rule), &twin, &cfg).unwrap(),
            0.0
        );
    }

    #[test]
    fn integrated_power_matches_closed_form() {
        let cfg = IntegrationConfig::default();
        let rule = GeneralBayesRule::new(
            ParameterMeasure::atom(1.0, 1.0),
            ParameterMeasure::atom(0.0, 1.0),
            1.0,
            0.0,
        )
        .unwrap();
        // reject iff y > 1/2
        let p = RuleCandidate::Bayes(&rule).power(&G1, 0.0, &cfg).unwrap();
        assert_abs_diff_eq!(p, crate::special::norm_sf(0.5), epsilon = 1e-9);

        let interval = IntervalRule::closed(-1.0, 1.3).unwrap();
        let by_quad = power_by_integration(&G1, 0.4, |y| Ok(interval.decide(&G1, y)), &cfg).unwrap();
        assert_abs_diff_eq!(by_quad, power(&G1, 0.4, &interval).unwrap(), epsilon = 1e-9);
    }

    #[test]
    fn discrete_power_by_summation() {
        let b = ExponentialFamily::Binomial { trials: 10 };
        let rule = IntervalRule::new(2.0, 8.0, 0.3, 0.9).unwrap();
        let cfg = IntegrationConfig::default();
        let p = power_by_integration(&b, 0.45, |y| Ok(rule.decide(&b, y)), &cfg).unwrap();
        assert_abs_diff_eq!(p, power(&b, 0.45, &rule).unwrap(), epsilon = 1e-13);
    }
}
