use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::objectives::ObjectiveG;
use crate::rules::{Likelihood, ObservationSupport};

/// A model with finitely many parameters and observations, given by its pmf
/// matrix `pmf[θ][y]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FiniteInstance {
    pub thetas: Vec<f64>,
    pub ys: Vec<f64>,
    pub pmf: Vec<Vec<f64>>,
}

impl FiniteInstance {
    pub fn new(thetas: Vec<f64>, ys: Vec<f64>, pmf: Vec<Vec<f64>>) -> Result<Self> {
        let fi = Self { thetas, ys, pmf };
        fi.validate()?;
        Ok(fi)
    }

    pub fn validate(&self) -> Result<()> {
        if self.thetas.is_empty() || self.ys.is_empty() {
            return Err(Error::invalid(
                "finite instance",
                "needs at least one parameter and one observation",
            ));
        }
        for (name, xs) in [("thetas", &self.thetas), ("ys", &self.ys)] {
            let mut sorted = xs.clone();
            sorted.sort_by(f64::total_cmp);
            if sorted.windows(2).any(|w| w[0] == w[1]) || xs.iter().any(|x| !x.is_finite()) {
                return Err(Error::invalid(name, "values must be finite and distinct"));
            }
        }
        if self.pmf.len() != self.thetas.len() {
            return Err(Error::invalid("pmf", "need one row per parameter"));
        }
        for row in &self.pmf {
            if row.len() != self.ys.len() || row.iter().any(|&p| !(p >= 0.0 && p.is_finite())) {
                return Err(Error::invalid(
                    "pmf",
                    "rows must be nonnegative with one entry per observation",
                ));
            }
            if (row.iter().sum::<f64>() - 1.0).abs() > 1e-12 {
                return Err(Error::invalid("pmf", "rows must sum to 1"));
            }
        }
        for j in 0..self.ys.len() {
            let positive = self.pmf.iter().filter(|r| r[j] > 0.0).count();
            if positive != 0 && positive != self.pmf.len() {
                return Err(Error::invalid("pmf", "rows must share one support"));
            }
        }
        Ok(())
    }

    /// Random instance with full support, parameters `0, 1, …` and
    /// observations `0, 1, …`.
    pub fn random(n_theta: usize, n_y: usize, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pmf = (0..n_theta)
            .map(|_| {
                let raw: Vec<f64> = (0..n_y).map(|_| rng.random::<f64>() + 1e-3).collect();
                let s: f64 = raw.iter().sum();
                raw.into_iter().map(|x| x / s).collect()
            })
            .collect();
        Self::new(
            (0..n_theta).map(|i| i as f64).collect(),
            (0..n_y).map(|j| j as f64).collect(),
            pmf,
        )
    }

    fn theta_index(&self, theta: f64) -> Result<usize> {
        self.thetas.iter().position(|&t| t == theta).ok_or(Error::Domain {
            family: "finite",
            value: theta,
        })
    }

    /// `Σ_y δ(y) P[θ][y]` for each row.
    pub fn powers(&self, rule: &[f64]) -> Vec<f64> {
        self.pmf
            .iter()
            .map(|row| row.iter().zip(rule).map(|(p, d)| p * d).sum())
            .collect()
    }
}

impl Likelihood for FiniteInstance {
    fn density(&self, theta: f64, y: f64) -> Result<f64> {
        let i = self.theta_index(theta)?;
        Ok(self.ys.iter().position(|&v| v == y).map_or(0.0, |j| self.pmf[i][j]))
    }

    fn observation_support(&self, theta: f64) -> Result<ObservationSupport> {
        self.theta_index(theta)?;
        Ok(ObservationSupport::Points(self.ys.clone()))
    }
}

/// Pointwise maximizer of `Σ_θ ν(θ) p(θ; δ)`: reject where the signed
/// mixture is positive, accept where negative, 1/2 on ties.
pub fn brute_force_bayes(fi: &FiniteInstance, nu: &[f64]) -> Result<(Vec<f64>, f64)> {
    if nu.len() != fi.thetas.len() {
        return Err(Error::invalid("nu", "need one weight per parameter"));
    }
    if nu.iter().all(|&w| w == 0.0) {
        return Err(Error::Precondition("nu is identically zero".into()));
    }
    let mut rule = Vec::with_capacity(fi.ys.len());
    let mut value = 0.0;
    for j in 0..fi.ys.len() {
        let s: f64 = nu.iter().zip(&fi.pmf).map(|(w, row)| w * row[j]).sum();
        let d = if s > 0.0 {
            1.0
        } else if s < 0.0 {
            0.0
        } else {
            0.5
        };
        value += d * s;
        rule.push(d);
    }
    Ok((rule, value))
}

/// Exhaustive mesh search of `max Σ_θ λ(θ) g(p(θ; δ))` subject to
/// `p(θ₀; δ) ≤ α`, over `δ ∈ {0, 1/(m−1), …, 1}^|Y|` with `|Y| ≤ 3`.
pub fn brute_force_constrained(
    fi: &FiniteInstance,
    theta0_index: usize,
    lambda1: &[f64],
    g: &ObjectiveG,
    alpha: f64,
    mesh: usize,
) -> Result<(Vec<f64>, f64)> {
    let k = fi.ys.len();
    if k > 3 {
        return Err(Error::Precondition(format!(
            "exhaustive mesh needs at most 3 observations, got {k}"
        )));
    }
    if mesh < 101 {
        return Err(Error::Precondition(format!(
            "mesh must be at least 101 per coordinate, got {mesh}"
        )));
    }
    if theta0_index >= fi.thetas.len() || lambda1.len() != fi.thetas.len() {
        return Err(Error::invalid(
            "lambda1",
            "need a valid null index and one weight per parameter",
        ));
    }
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::invalid("alpha", "must lie in [0, 1]"));
    }
    g.validate()?;
    let step = 1.0 / (mesh - 1) as f64;
    let decode = |mut idx: usize| -> Vec<f64> {
        (0..k)
            .map(|_| {
                let d = (idx % mesh) as f64 * step;
                idx /= mesh;
                d
            })
            .collect()
    };
    let total = mesh.pow(k as u32);
    let best = (0..total)
        .into_par_iter()
        .filter_map(|idx| {
            let rule = decode(idx);
            let p = fi.powers(&rule);
            if p[theta0_index] > alpha + 1e-12 {
                return None;
            }
            let v: f64 = lambda1
                .iter()
                .zip(&p)
                .filter(|(w, _)| **w != 0.0)
                .map(|(w, &pt)| w * g.eval_unchecked(pt.clamp(0.0, 1.0)))
                .sum();
            Some((v, idx))
        })
        // larger value, then smaller index: independent of scheduling
        .reduce_with(|x, y| if y.0 > x.0 || (y.0 == x.0 && y.1 < x.1) { y } else { x });
    match best {
        Some((v, idx)) => Ok((decode(idx), v)),
        None => Err(Error::Infeasible("no mesh point meets the level".into())),
    }
}
