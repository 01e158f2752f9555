//! Single-parameter exponential families `f_θ(y) = c(θ) h(y) exp(η(θ) T(y))`.
//!
//! Every family is exposed in its conventional parameterization (mean for the
//! Gaussian, rate for the exponential, shape for the one-parameter beta,
//! success probability for binomial and geometric, mean for Poisson). The
//! sufficient statistic `T` is oriented so that the conventional parameter is
//! increasing in the natural parameter `η`; likelihood ratios
//! `f_θ'(y)/f_θ(y)` with `θ < θ'` are then nondecreasing in `T(y)`.
//!
//! | family      | support        | T(y)   |
//! |-------------|----------------|--------|
//! | Gaussian    | ℝ              | y      |
//! | Exponential | (0, ∞)         | −y     |
//! | BetaShape   | (0, 1)         | ln y   |
//! | Binomial    | {0, …, n}      | y      |
//! | Poisson     | {0, 1, …}      | y      |
//! | Geometric   | {0, 1, …}      | −y     |
//!
//! Thresholds of decision rules live on the `T` axis, so every CDF and
//! quantile here is a CDF or quantile of `T(Y)`, not of `Y`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special::{norm_cdf, norm_isf, norm_pdf, norm_quantile, norm_sf};

/// Whether the dominating measure is Lebesgue or counting measure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaseMeasure {
    Continuous,
    Counting,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ExponentialFamily {
    /// Normal with known variance, parameterized by its mean.
    Gaussian { variance: f64 },
    /// `θ exp(−θ y)` on `y > 0`.
    Exponential,
    /// `θ y^(θ−1)` on `0 < y < 1`.
    BetaShape,
    /// `n` trials, success probability `θ`.
    Binomial { trials: u64 },
    /// Mean `θ`.
    Poisson,
    /// Failures before the first success, success probability `θ`.
    Geometric,
}

impl ExponentialFamily {
    pub fn gaussian(variance: f64) -> Result<Self> {
        let fam = ExponentialFamily::Gaussian { variance };
        fam.validate()?;
        Ok(fam)
    }

    pub fn binomial(trials: u64) -> Result<Self> {
        let fam = ExponentialFamily::Binomial { trials };
        fam.validate()?;
        Ok(fam)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            ExponentialFamily::Gaussian { variance } if !(variance > 0.0 && variance.is_finite()) => {
                Err(Error::invalid("family.variance", "must be positive and finite"))
            }
            ExponentialFamily::Binomial { trials } if trials < 2 => Err(Error::invalid(
                "family.trials",
                "need at least 2 trials so that T takes more than two values",
            )),
            _ => Ok(()),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ExponentialFamily::Gaussian { .. } => "gaussian",
            ExponentialFamily::Exponential => "exponential",
            ExponentialFamily::BetaShape => "beta_shape",
            ExponentialFamily::Binomial { .. } => "binomial",
            ExponentialFamily::Poisson => "poisson",
            ExponentialFamily::Geometric => "geometric",
        }
    }

    pub fn base_measure(&self) -> BaseMeasure {
        match self {
            ExponentialFamily::Gaussian { .. } | ExponentialFamily::Exponential | ExponentialFamily::BetaShape => {
                BaseMeasure::Continuous
            }
            _ => BaseMeasure::Counting,
        }
    }

    pub fn is_discrete(&self) -> bool {
        self.base_measure() == BaseMeasure::Counting
    }

    /// Open parameter domain in the family's conventional units.
    pub fn domain(&self) -> (f64, f64) {
        match self {
            ExponentialFamily::Gaussian { .. } => (f64::NEG_INFINITY, f64::INFINITY),
            ExponentialFamily::Exponential | ExponentialFamily::BetaShape | ExponentialFamily::Poisson => {
                (0.0, f64::INFINITY)
            }
            ExponentialFamily::Binomial { .. } | ExponentialFamily::Geometric => (0.0, 1.0),
        }
    }

    pub fn check_param(&self, theta: f64) -> Result<()> {
        let (lo, hi) = self.domain();
        if theta > lo && theta < hi && theta.is_finite() {
            Ok(())
        } else {
            Err(Error::Domain {
                family: self.name(),
                value: theta,
            })
        }
    }

    /// Natural parameter η(θ).
    pub fn natural(&self, theta: f64) -> f64 {
        match *self {
            ExponentialFamily::Gaussian { variance } => theta / variance,
            ExponentialFamily::Exponential | ExponentialFamily::BetaShape => theta,
            ExponentialFamily::Binomial { .. } => (theta / (1.0 - theta)).ln(),
            ExponentialFamily::Poisson => theta.ln(),
            ExponentialFamily::Geometric => -(-theta).ln_1p(),
        }
    }

    /// Sufficient statistic T(y).
    pub fn statistic(&self, y: f64) -> f64 {
        match self {
            ExponentialFamily::Exponential | ExponentialFamily::Geometric => -y,
            ExponentialFamily::BetaShape => y.ln(),
            _ => y,
        }
    }

    /// An observation `y` with `T(y) = t`.
    pub fn observation_at(&self, t: f64) -> f64 {
        match self {
            ExponentialFamily::Exponential | ExponentialFamily::Geometric => -t,
            ExponentialFamily::BetaShape => t.exp(),
            _ => t,
        }
    }

    pub fn in_support(&self, y: f64) -> bool {
        match *self {
            ExponentialFamily::Gaussian { .. } => y.is_finite(),
            ExponentialFamily::Exponential => y > 0.0 && y.is_finite(),
            ExponentialFamily::BetaShape => y > 0.0 && y < 1.0,
            ExponentialFamily::Binomial { trials } => is_count(y) && y <= trials as f64,
            ExponentialFamily::Poisson | ExponentialFamily::Geometric => is_count(y),
        }
    }

    /// ln f_θ(y); −∞ outside the support.
    pub fn log_density(&self, theta: f64, y: f64) -> Result<f64> {
        self.check_param(theta)?;
        if !self.in_support(y) {
            return Ok(f64::NEG_INFINITY);
        }
        Ok(match *self {
            ExponentialFamily::Gaussian { variance } => {
                let z = (y - theta) / variance.sqrt();
                -0.5 * z * z - 0.5 * (2.0 * std::f64::consts::PI * variance).ln()
            }
            ExponentialFamily::Exponential => theta.ln() - theta * y,
            ExponentialFamily::BetaShape => theta.ln() + (theta - 1.0) * y.ln(),
            ExponentialFamily::Binomial { trials } => binomial_ln_pmf(trials, theta, y as u64),
            ExponentialFamily::Poisson => y * theta.ln() - theta - ln_factorial(y as u64),
            ExponentialFamily::Geometric => theta.ln() + y * (-theta).ln_1p(),
        })
    }

    /// f_θ(y) with respect to the family's base measure.
    pub fn density(&self, theta: f64, y: f64) -> Result<f64> {
        if let ExponentialFamily::Gaussian { variance } = *self {
            self.check_param(theta)?;
            let sd = variance.sqrt();
            return Ok(if y.is_finite() {
                norm_pdf((y - theta) / sd) / sd
            } else {
                0.0
            });
        }
        Ok(self.log_density(theta, y)?.exp())
    }

    /// P_θ(T(Y) ≤ t), including any atom at `t`.
    pub fn statistic_cdf(&self, theta: f64, t: f64) -> Result<f64> {
        self.check_param(theta)?;
        if t == f64::NEG_INFINITY {
            return Ok(0.0);
        }
        if t == f64::INFINITY {
            return Ok(1.0);
        }
        Ok(match *self {
            ExponentialFamily::Gaussian { variance } => norm_cdf((t - theta) / variance.sqrt()),
            ExponentialFamily::Exponential | ExponentialFamily::BetaShape => {
                if t >= 0.0 {
                    1.0
                } else {
                    (theta * t).exp()
                }
            }
            ExponentialFamily::Binomial { .. } | ExponentialFamily::Poisson => self.count_cdf(theta, t.floor()),
            ExponentialFamily::Geometric => {
                let k = (-t).ceil();
                if k <= 0.0 {
                    1.0
                } else {
                    self.count_sf(theta, k - 1.0)
                }
            }
        })
    }

    /// P_θ(T(Y) > t).
    pub fn statistic_sf(&self, theta: f64, t: f64) -> Result<f64> {
        self.check_param(theta)?;
        if t == f64::NEG_INFINITY {
            return Ok(1.0);
        }
        if t == f64::INFINITY {
            return Ok(0.0);
        }
        Ok(match *self {
            ExponentialFamily::Gaussian { variance } => norm_sf((t - theta) / variance.sqrt()),
            ExponentialFamily::Exponential | ExponentialFamily::BetaShape => {
                if t >= 0.0 {
                    0.0
                } else {
                    -(theta * t).exp_m1()
                }
            }
            ExponentialFamily::Binomial { .. } | ExponentialFamily::Poisson => self.count_sf(theta, t.floor()),
            ExponentialFamily::Geometric => {
                let k = (-t).ceil();
                if k <= 0.0 {
                    0.0
                } else {
                    self.count_cdf(theta, k - 1.0)
                }
            }
        })
    }

    /// P_θ(T(Y) = t); zero for continuous families.
    pub fn statistic_atom(&self, theta: f64, t: f64) -> Result<f64> {
        self.check_param(theta)?;
        if !self.is_discrete() || !t.is_finite() {
            return Ok(0.0);
        }
        self.density(theta, self.observation_at(t))
    }

    /// Generalized inverse of [`statistic_cdf`](Self::statistic_cdf): the
    /// smallest `t` with `P_θ(T ≤ t) ≥ q`. `q = 0` maps to −∞.
    pub fn statistic_quantile(&self, theta: f64, q: f64) -> Result<f64> {
        self.check_param(theta)?;
        check_probability(q)?;
        if q == 0.0 {
            return Ok(f64::NEG_INFINITY);
        }
        Ok(match *self {
            ExponentialFamily::Gaussian { variance } => theta + variance.sqrt() * norm_quantile(q),
            ExponentialFamily::Exponential | ExponentialFamily::BetaShape => q.ln() / theta,
            ExponentialFamily::Binomial { trials } => {
                let mut acc = 0.0;
                let mut k = 0;
                while k < trials {
                    acc += self.density(theta, k as f64)?;
                    if acc >= q {
                        break;
                    }
                    k += 1;
                }
                k as f64
            }
            ExponentialFamily::Poisson => {
                if q == 1.0 {
                    return Ok(f64::INFINITY);
                }
                let mut acc = 0.0;
                let mut k = 0u64;
                loop {
                    acc += self.density(theta, k as f64)?;
                    if acc >= q || self.count_sf(theta, k as f64) <= 1.0 - q {
                        break k as f64;
                    }
                    k += 1;
                }
            }
            ExponentialFamily::Geometric => {
                // CDF_T(−k) = (1−θ)^k; want the largest k with (1−θ)^k ≥ q.
                let log_keep = (-theta).ln_1p();
                let mut k = (q.ln() / log_keep).floor().max(0.0);
                while k > 0.0 && (k * log_keep).exp() < q {
                    k -= 1.0;
                }
                while ((k + 1.0) * log_keep).exp() >= q {
                    k += 1.0;
                }
                -k
            }
        })
    }

    /// Smallest `t` with `P_θ(T > t) ≤ p`. `p = 0` maps to the supremum of
    /// the support of `T` (which may be +∞).
    pub fn statistic_upper_quantile(&self, theta: f64, p: f64) -> Result<f64> {
        self.check_param(theta)?;
        check_probability(p)?;
        if p == 1.0 {
            return Ok(f64::NEG_INFINITY);
        }
        Ok(match *self {
            ExponentialFamily::Gaussian { variance } => theta + variance.sqrt() * norm_isf(p),
            ExponentialFamily::Exponential | ExponentialFamily::BetaShape => (-p).ln_1p() / theta,
            ExponentialFamily::Binomial { trials } => {
                let mut k = 0;
                while k < trials && self.count_sf(theta, k as f64) > p {
                    k += 1;
                }
                k as f64
            }
            ExponentialFamily::Poisson => {
                if p == 0.0 {
                    return Ok(f64::INFINITY);
                }
                let mut k = 0u64;
                while self.count_sf(theta, k as f64) > p {
                    k += 1;
                }
                k as f64
            }
            ExponentialFamily::Geometric => {
                // P(T > −k) = 1 − (1−θ)^k; want the largest k with that ≤ p.
                if p == 0.0 {
                    return Ok(0.0);
                }
                let log_keep = (-theta).ln_1p();
                let tail = |k: f64| -(k * log_keep).exp_m1();
                let mut k = ((-p).ln_1p() / log_keep).floor().max(0.0);
                while k > 0.0 && tail(k) > p {
                    k -= 1.0;
                }
                while tail(k + 1.0) <= p {
                    k += 1.0;
                }
                -k
            }
        })
    }

    /// Support points of `T` in increasing order, truncated so that the mass
    /// dropped under each of `thetas` is below `tail`. `None` for continuous
    /// families.
    pub fn statistic_support(&self, thetas: &[f64], tail: f64) -> Result<Option<Vec<f64>>> {
        for &th in thetas {
            self.check_param(th)?;
        }
        Ok(match *self {
            ExponentialFamily::Binomial { trials } => Some((0..=trials).map(|k| k as f64).collect()),
            ExponentialFamily::Poisson | ExponentialFamily::Geometric => {
                let mut kmax = 0u64;
                for &th in thetas {
                    while self.count_sf(th, kmax as f64) > tail {
                        kmax += 1;
                    }
                }
                let pts: Vec<f64> = (0..=kmax).map(|k| k as f64).collect();
                if matches!(self, ExponentialFamily::Geometric) {
                    Some(pts.into_iter().rev().map(|k| -k).collect())
                } else {
                    Some(pts)
                }
            }
            _ => None,
        })
    }

    /// Interval of observations holding all but `tail` mass under `theta`
    /// (continuous families) or the truncated support (discrete families).
    pub fn observation_range(&self, theta: f64, tail: f64) -> Result<(f64, f64)> {
        let lo_t = self.statistic_quantile(theta, tail)?;
        let hi_t = self.statistic_upper_quantile(theta, tail)?;
        let (a, b) = (self.observation_at(lo_t), self.observation_at(hi_t));
        Ok((a.min(b), a.max(b)))
    }

    /// `count` i.i.d. observations from `μ_θ`, deterministic in `seed`.
    pub fn sample(&self, theta: f64, seed: u64, count: usize) -> Result<Vec<f64>> {
        self.check_param(theta)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = Vec::with_capacity(count);
        self.sample_into(theta, &mut rng, count, &mut out)?;
        Ok(out)
    }

    pub(crate) fn sample_into<R: Rng>(&self, theta: f64, rng: &mut R, count: usize, out: &mut Vec<f64>) -> Result<()> {
        let bad = |_| Error::Domain {
            family: self.name(),
            value: theta,
        };
        match *self {
            ExponentialFamily::Gaussian { variance } => {
                let d = Normal::new(theta, variance.sqrt()).map_err(|_| bad(()))?;
                out.extend(d.sample_iter(rng).take(count));
            }
            ExponentialFamily::Exponential => {
                let d = Exp::new(theta).map_err(|_| bad(()))?;
                out.extend(d.sample_iter(rng).take(count));
            }
            ExponentialFamily::BetaShape => {
                // inverse CDF of y^θ
                out.extend((0..count).map(|_| {
                    let u: f64 = rng.random();
                    u.powf(1.0 / theta)
                }));
            }
            ExponentialFamily::Binomial { trials } => {
                let d = rand_distr::Binomial::new(trials, theta).map_err(|_| bad(()))?;
                out.extend(d.sample_iter(rng).take(count).map(|k| k as f64));
            }
            ExponentialFamily::Poisson => {
                let d = rand_distr::Poisson::new(theta).map_err(|_| bad(()))?;
                out.extend(d.sample_iter(rng).take(count));
            }
            ExponentialFamily::Geometric => {
                let d = rand_distr::Geometric::new(theta).map_err(|_| bad(()))?;
                out.extend(d.sample_iter(rng).take(count).map(|k| k as f64));
            }
        }
        Ok(())
    }

    // P(Y ≤ k) for the integer-valued families, by direct summation of the
    // lower tail.
    fn count_cdf(&self, theta: f64, k: f64) -> f64 {
        if k < 0.0 {
            return 0.0;
        }
        match *self {
            ExponentialFamily::Binomial { trials } => {
                if k >= trials as f64 {
                    return 1.0;
                }
                (0..=k as u64).map(|j| binomial_ln_pmf(trials, theta, j).exp()).sum()
            }
            ExponentialFamily::Poisson => (0..=k as u64)
                .map(|j| (j as f64 * theta.ln() - theta - ln_factorial(j)).exp())
                .sum(),
            ExponentialFamily::Geometric => -((k + 1.0) * (-theta).ln_1p()).exp_m1(),
            _ => unreachable!("count_cdf on a continuous family"),
        }
    }

    // P(Y > k), summing the upper tail so small tails keep their digits.
    fn count_sf(&self, theta: f64, k: f64) -> f64 {
        if k < 0.0 {
            return 1.0;
        }
        match *self {
            ExponentialFamily::Binomial { trials } => {
                if k >= trials as f64 {
                    return 0.0;
                }
                (k as u64 + 1..=trials)
                    .map(|j| binomial_ln_pmf(trials, theta, j).exp())
                    .sum()
            }
            ExponentialFamily::Poisson => {
                let start = k as u64 + 1;
                if (start as f64) < theta {
                    return 1.0 - self.count_cdf(theta, k);
                }
                let mut term = (start as f64 * theta.ln() - theta - ln_factorial(start)).exp();
                let mut sum = 0.0;
                let mut j = start;
                while term > 0.0 && term > sum * 1e-17 {
                    sum += term;
                    j += 1;
                    term *= theta / j as f64;
                }
                sum
            }
            ExponentialFamily::Geometric => ((k + 1.0) * (-theta).ln_1p()).exp(),
            _ => unreachable!("count_sf on a continuous family"),
        }
    }
}

fn ln_factorial(k: u64) -> f64 {
    libm::lgamma(k as f64 + 1.0)
}

fn ln_binomial(n: u64, k: u64) -> f64 {
    ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)
}

fn is_count(y: f64) -> bool {
    y >= 0.0 && y.is_finite() && y.fract() == 0.0
}

fn binomial_ln_pmf(n: u64, p: f64, k: u64) -> f64 {
    ln_binomial(n, k) + k as f64 * p.ln() + (n - k) as f64 * (-p).ln_1p()
}

fn check_probability(q: f64) -> Result<()> {
    if (0.0..=1.0).contains(&q) {
        Ok(())
    } else {
        Err(Error::OutOfRange {
            value: q,
            lo: 0.0,
            hi: 1.0,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    const G1: ExponentialFamily = ExponentialFamily::Gaussian { variance: 1.0 };
    const B10: ExponentialFamily = ExponentialFamily::Binomial { trials: 10 };

    #[test]
    fn density_examples() {
        assert_abs_diff_eq!(G1.density(0.0, 0.0).unwrap(), 0.398_942_280_401_432_7, epsilon = 1e-15);
        assert_abs_diff_eq!(B10.density(0.5, 5.0).unwrap(), 0.246_093_75, epsilon = 1e-14);
        let e = ExponentialFamily::Exponential;
        assert_abs_diff_eq!(e.density(2.0, 0.5).unwrap(), 2.0 * (-1.0f64).exp(), epsilon = 1e-15);
    }

    #[test]
    fn density_outside_support_is_zero() {
        assert_eq!(B10.density(0.5, 11.0).unwrap(), 0.0);
        assert_eq!(B10.density(0.5, 2.5).unwrap(), 0.0);
        assert_eq!(ExponentialFamily::Exponential.density(1.0, -1.0).unwrap(), 0.0);
        assert_eq!(ExponentialFamily::BetaShape.density(1.0, 1.5).unwrap(), 0.0);
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(B10.density(1.2, 3.0), Err(Error::Domain { .. })));
        assert!(matches!(
            ExponentialFamily::Poisson.statistic_cdf(-1.0, 0.0),
            Err(Error::Domain { .. })
        ));
        assert!(matches!(G1.statistic_quantile(0.0, 1.5), Err(Error::OutOfRange { .. })));
        assert!(ExponentialFamily::gaussian(0.0).is_err());
    }

    #[test]
    fn cdf_examples() {
        assert_eq!(G1.statistic_cdf(0.0, 0.0).unwrap(), 0.5);
        assert_abs_diff_eq!(G1.statistic_cdf(0.0, -1.6447).unwrap(), 0.05, epsilon = 1e-4);
        // pmf summation oracle: (C(10,0) + C(10,1)) / 2^10
        assert_abs_diff_eq!(B10.statistic_cdf(0.5, 1.0).unwrap(), 11.0 / 1024.0, epsilon = 1e-15);
        assert_eq!(G1.statistic_cdf(0.3, f64::NEG_INFINITY).unwrap(), 0.0);
        assert_eq!(G1.statistic_cdf(0.3, f64::INFINITY).unwrap(), 1.0);
    }

    #[test]
    fn quantile_examples() {
        assert_eq!(G1.statistic_quantile(0.0, 0.5).unwrap(), 0.0);
        // -1.6447 is a loose four-place rounding of Φ⁻¹(0.05) = -1.644854
        assert_abs_diff_eq!(
            G1.statistic_quantile(0.0, 0.05).unwrap(),
            -1.644_853_626_951_472_9,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(G1.statistic_quantile(0.0, 0.05).unwrap(), -1.6447, epsilon = 2e-4);
        // CDF(2) = 56/1024 < 0.09 <= CDF(3) = 176/1024
        assert_eq!(B10.statistic_quantile(0.5, 0.09).unwrap(), 3.0);
        assert_eq!(B10.statistic_quantile(0.5, 56.0 / 1024.0).unwrap(), 2.0);
        assert_eq!(G1.statistic_quantile(0.0, 0.0).unwrap(), f64::NEG_INFINITY);
        assert_eq!(G1.statistic_quantile(0.0, 1.0).unwrap(), f64::INFINITY);
        assert_eq!(
            ExponentialFamily::Poisson.statistic_quantile(2.0, 1.0).unwrap(),
            f64::INFINITY
        );
    }

    #[test]
    fn geometric_statistic_is_negated_count() {
        let g = ExponentialFamily::Geometric;
        let p = 0.3;
        // P(T ≤ −2) = P(Y ≥ 2) = 0.7²
        assert_abs_diff_eq!(g.statistic_cdf(p, -2.0).unwrap(), 0.49, epsilon = 1e-15);
        assert_abs_diff_eq!(g.statistic_sf(p, -2.0).unwrap(), 0.51, epsilon = 1e-15);
        assert_abs_diff_eq!(g.statistic_atom(p, -2.0).unwrap(), 0.3 * 0.49, epsilon = 1e-15);
        assert_eq!(g.statistic_quantile(p, 0.49).unwrap(), -2.0);
        assert_eq!(g.statistic_quantile(p, 0.5).unwrap(), -1.0);
        assert_eq!(g.statistic_upper_quantile(p, 0.51).unwrap(), -2.0);
        assert_eq!(g.statistic_upper_quantile(p, 0.5).unwrap(), -1.0);
    }

    #[test]
    fn upper_quantile_matches_definition_discrete() {
        for &p in &[0.0, 0.001, 0.05, 0.3, 0.9] {
            for fam in [B10, ExponentialFamily::Poisson] {
                let t = fam.statistic_upper_quantile(0.4, p).unwrap();
                if t.is_finite() {
                    assert!(fam.statistic_sf(0.4, t).unwrap() <= p);
                    if t > 0.0 {
                        assert!(fam.statistic_sf(0.4, t - 1.0).unwrap() > p);
                    }
                }
            }
        }
    }

    #[test]
    fn sample_is_deterministic() {
        let a = G1.sample(0.0, 42, 5).unwrap();
        let b = G1.sample(0.0, 42, 5).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, G1.sample(0.0, 43, 5).unwrap());
    }

    #[test]
    fn sample_means_within_lln_band() {
        let n = 1_000_000;
        let xs = G1.sample(0.0, 7, n).unwrap();
        let mean = xs.iter().sum::<f64>() / n as f64;
        assert!(mean.abs() < 4.0 / (n as f64).sqrt());

        let ks = B10.sample(0.3, 8, n).unwrap();
        let mean = ks.iter().sum::<f64>() / n as f64;
        assert!((mean - 3.0).abs() < 4.0 * (10.0 * 0.3 * 0.7 / n as f64).sqrt());
    }
}
