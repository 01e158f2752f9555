//! Weighting functions `g` applied to detection probabilities.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ObjectiveG {
    Identity,
    /// `t^κ`.
    Power {
        kappa: f64,
    },
    /// Prospect-theory weighting `t^v / (t^v + (1−t)^v)^(1/v)`.
    Prospect {
        v: f64,
    },
    /// Monotone cubic (Fritsch–Carlson) through user samples on [0, 1].
    Tabulated {
        t: Vec<f64>,
        values: Vec<f64>,
    },
}

impl ObjectiveG {
    pub fn prospect(v: f64) -> Self {
        ObjectiveG::Prospect { v }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            ObjectiveG::Identity => Ok(()),
            ObjectiveG::Power { kappa } if !(*kappa > 0.0 && kappa.is_finite()) => {
                Err(Error::invalid("g.kappa", "must be positive"))
            }
            ObjectiveG::Prospect { v } if !(*v > 0.0 && v.is_finite()) => {
                Err(Error::invalid("g.v", "must be positive"))
            }
            ObjectiveG::Tabulated { t, values } => {
                if t.len() < 2 || t.len() != values.len() {
                    return Err(Error::invalid("g.t", "need at least two samples and matching values"));
                }
                if t[0] != 0.0 || *t.last().unwrap() != 1.0 {
                    return Err(Error::invalid("g.t", "samples must span [0, 1]"));
                }
                if t.windows(2).any(|w| w[1] <= w[0]) {
                    return Err(Error::invalid("g.t", "must be strictly increasing"));
                }
                if values.iter().any(|v| !v.is_finite()) {
                    return Err(Error::invalid("g.values", "must be finite"));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    pub fn eval(&self, t: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::OutOfRange {
                value: t,
                lo: 0.0,
                hi: 1.0,
            });
        }
        Ok(self.eval_unchecked(t))
    }

    /// `g′(t)` on the open interval.
    pub fn derivative(&self, t: f64) -> Result<f64> {
        if !(t > 0.0 && t < 1.0) {
            return Err(Error::OutOfRange {
                value: t,
                lo: 0.0,
                hi: 1.0,
            });
        }
        Ok(match self {
            ObjectiveG::Identity => 1.0,
            ObjectiveG::Power { kappa } => kappa * t.powf(kappa - 1.0),
            ObjectiveG::Prospect { v } => {
                let v = *v;
                // d/dt ln ω = v/t − (t^(v−1) − (1−t)^(v−1)) / (t^v + (1−t)^v)
                let a = t.powf(v);
                let b = (1.0 - t).powf(v);
                let dlog = v / t - (a / t - b / (1.0 - t)) / (a + b);
                prospect_weight(t, v) * dlog
            }
            ObjectiveG::Tabulated { .. } => {
                let h = 1e-6_f64.min(t / 2.0).min((1.0 - t) / 2.0);
                (self.eval_unchecked(t + h) - self.eval_unchecked(t - h)) / (2.0 * h)
            }
        })
    }

    pub(crate) fn eval_unchecked(&self, t: f64) -> f64 {
        match self {
            ObjectiveG::Identity => t,
            ObjectiveG::Power { kappa } => t.powf(*kappa),
            ObjectiveG::Prospect { v } => prospect_weight(t, *v),
            ObjectiveG::Tabulated { t: xs, values } => monotone_cubic(xs, values, t),
        }
    }
}

/// ω_v(t), evaluated through logarithms so `t^v` never under- or overflows.
pub fn prospect_weight(t: f64, v: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    if t >= 1.0 {
        return 1.0;
    }
    let la = v * t.ln();
    let lb = v * (-t).ln_1p();
    let hi = la.max(lb);
    let log_sum = hi + ((la - hi).exp() + (lb - hi).exp()).ln();
    (la - log_sum / v).exp()
}

fn monotone_cubic(xs: &[f64], ys: &[f64], t: f64) -> f64 {
    let n = xs.len();
    let i = match xs.binary_search_by(|x| x.partial_cmp(&t).unwrap()) {
        Ok(i) => return ys[i],
        Err(0) => return ys[0],
        Err(i) if i >= n => return ys[n - 1],
        Err(i) => i - 1,
    };
    let secant: Vec<f64> = xs
        .windows(2)
        .zip(ys.windows(2))
        .map(|(x, y)| (y[1] - y[0]) / (x[1] - x[0]))
        .collect();
    let tangent = |k: usize| -> f64 {
        if k == 0 {
            return secant[0];
        }
        if k == n - 1 {
            return secant[n - 2];
        }
        let (s0, s1) = (secant[k - 1], secant[k]);
        if s0 * s1 <= 0.0 {
            0.0
        } else {
            // harmonic mean keeps the interpolant monotone
            2.0 * s0 * s1 / (s0 + s1)
        }
    };
    let h = xs[i + 1] - xs[i];
    let s = (t - xs[i]) / h;
    let (m0, m1) = (tangent(i) * h, tangent(i + 1) * h);
    let s2 = s * s;
    let s3 = s2 * s;
    (2.0 * s3 - 3.0 * s2 + 1.0) * ys[i] + (s3 - 2.0 * s2 + s) * m0 + (-2.0 * s3 + 3.0 * s2) * ys[i + 1] + (s3 - s2) * m1
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn central_diff(g: &ObjectiveG, t: f64) -> f64 {
        let h = 1e-6;
        (g.eval(t + h).unwrap() - g.eval(t - h).unwrap()) / (2.0 * h)
    }

    #[test]
    fn eval_examples() {
        assert_abs_diff_eq!(ObjectiveG::prospect(1.0).eval(0.3).unwrap(), 0.3, epsilon = 1e-15);
        // 2^(1 − v − 1/v) at v = 0.69, from a 30-digit evaluation
        assert_abs_diff_eq!(
            ObjectiveG::prospect(0.69).eval(0.5).unwrap(),
            0.453_987_549_524_029_6,
            epsilon = 1e-14
        );
        assert_abs_diff_eq!(
            ObjectiveG::Power { kappa: 0.5 }.eval(0.25).unwrap(),
            0.5,
            epsilon = 1e-15
        );
        assert!(ObjectiveG::Identity.eval(1.2).is_err());
    }

    #[test]
    fn derivative_examples() {
        assert_eq!(ObjectiveG::Identity.derivative(0.7).unwrap(), 1.0);
        assert_abs_diff_eq!(
            ObjectiveG::Power { kappa: 0.5 }.derivative(0.25).unwrap(),
            1.0,
            epsilon = 1e-15
        );
        let g = ObjectiveG::prospect(0.69);
        assert_abs_diff_eq!(g.derivative(0.4).unwrap(), central_diff(&g, 0.4), epsilon = 1e-6);
        assert!(g.derivative(0.0).is_err());
        assert!(g.derivative(1.0).is_err());
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let kinds = [
            ObjectiveG::Identity,
            ObjectiveG::Power { kappa: 0.5 },
            ObjectiveG::Power { kappa: 2.3 },
            ObjectiveG::prospect(0.69),
            ObjectiveG::prospect(0.4),
            ObjectiveG::prospect(1.7),
        ];
        for g in &kinds {
            for i in 1..=99 {
                let t = i as f64 / 100.0;
                let d = g.derivative(t).unwrap();
                assert!((d - central_diff(g, t)).abs() < 1e-5, "{g:?} at {t}");
            }
        }
    }

    #[test]
    fn monotone_kinds_are_strictly_increasing() {
        for g in [
            ObjectiveG::Identity,
            ObjectiveG::Power { kappa: 0.5 },
            ObjectiveG::prospect(0.69),
        ] {
            let mut prev = g.eval(0.0).unwrap();
            for i in 1..=1000 {
                let cur = g.eval(i as f64 / 1000.0).unwrap();
                assert!(cur > prev, "{g:?}");
                prev = cur;
            }
        }
    }

    #[test]
    fn prospect_endpoints_and_extremes() {
        for &v in &[0.2, 0.69, 1.0, 3.0] {
            assert_eq!(prospect_weight(0.0, v), 0.0);
            assert_eq!(prospect_weight(1.0, v), 1.0);
        }
        let tiny = prospect_weight(1e-300, 0.69);
        assert!(tiny > 0.0 && tiny.is_finite());
        // 1 − ω_v(1 − ε) ≈ ε^v / v near the upper end
        let near_one = prospect_weight(1.0 - 1e-12, 0.3);
        assert!((1.0 - near_one - 1e-12f64.powf(0.3) / 0.3).abs() < 1e-6);
        for i in 1..100 {
            let t = i as f64 / 100.0;
            let naive = t.powf(0.69) / (t.powf(0.69) + (1.0 - t).powf(0.69)).powf(1.0 / 0.69);
            assert!((prospect_weight(t, 0.69) - naive).abs() < 1e-14);
        }
    }

    #[test]
    fn tabulated_interpolates_and_stays_monotone() {
        let xs: Vec<f64> = (0..=10).map(|i| i as f64 / 10.0).collect();
        let ys: Vec<f64> = xs.iter().map(|&x| prospect_weight(x, 0.69)).collect();
        let g = ObjectiveG::Tabulated {
            t: xs.clone(),
            values: ys.clone(),
        };
        g.validate().unwrap();
        for (x, y) in xs.iter().zip(&ys) {
            assert_abs_diff_eq!(g.eval(*x).unwrap(), *y, epsilon = 1e-15);
        }
        let mut prev = 0.0;
        for i in 1..=1000 {
            let cur = g.eval(i as f64 / 1000.0).unwrap();
            assert!(cur >= prev);
            prev = cur;
        }
        assert!(g.derivative(0.35).unwrap() > 0.0);
    }
}
