use std::cell::RefCell;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{integrate, IntegrationConfig};

/// A finite measure on the parameter line: point masses plus weighted
/// uniform densities on intervals.
///
/// A segment `(a, b, w)` carries total mass `w` spread uniformly over
/// `[a, b]`, so Lebesgue measure on `[a, b]` is `(a, b, b − a)`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ParameterMeasure {
    #[serde(default)]
    pub atoms: Vec<(f64, f64)>,
    #[serde(default)]
    pub segments: Vec<(f64, f64, f64)>,
}

impl ParameterMeasure {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn atom(theta: f64, weight: f64) -> Self {
        Self {
            atoms: vec![(theta, weight)],
            segments: vec![],
        }
    }

    pub fn uniform(a: f64, b: f64, weight: f64) -> Self {
        Self {
            atoms: vec![],
            segments: vec![(a, b, weight)],
        }
    }

    /// Lebesgue measure restricted to `[a, b]`.
    pub fn lebesgue(a: f64, b: f64) -> Self {
        Self::uniform(a, b, b - a)
    }

    pub fn with_atom(mut self, theta: f64, weight: f64) -> Self {
        self.atoms.push((theta, weight));
        self
    }

    pub fn with_segment(mut self, a: f64, b: f64, weight: f64) -> Self {
        self.segments.push((a, b, weight));
        self
    }

    pub fn validate(&self, field: &str) -> Result<()> {
        for &(theta, w) in &self.atoms {
            if !theta.is_finite() || !(w >= 0.0 && w.is_finite()) {
                return Err(Error::invalid(field, format!("bad atom ({theta}, {w})")));
            }
        }
        for &(a, b, w) in &self.segments {
            if !(a.is_finite() && b.is_finite() && a <= b) || !(w >= 0.0 && w.is_finite()) {
                return Err(Error::invalid(field, format!("bad segment ({a}, {b}, {w})")));
            }
        }
        Ok(())
    }

    pub fn total_mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.1).sum::<f64>() + self.segments.iter().map(|s| s.2).sum::<f64>()
    }

    pub fn is_empty(&self) -> bool {
        self.total_mass() == 0.0
    }

    pub fn is_normalized(&self) -> bool {
        (self.total_mass() - 1.0).abs() <= 1e-12
    }

    /// The probability measure proportional to `self`.
    pub fn normalized(&self) -> Result<Self> {
        let m = self.total_mass();
        if !(m > 0.0) {
            return Err(Error::invalid("measure", "cannot normalize a zero measure"));
        }
        Ok(self.scaled(1.0 / m))
    }

    pub fn scaled(&self, k: f64) -> Self {
        Self {
            atoms: self.atoms.iter().map(|&(t, w)| (t, w * k)).collect(),
            segments: self.segments.iter().map(|&(a, b, w)| (a, b, w * k)).collect(),
        }
    }

    /// Smallest closed interval holding the support.
    pub fn support_hull(&self) -> Option<(f64, f64)> {
        let pts = self
            .atoms
            .iter()
            .filter(|a| a.1 > 0.0)
            .map(|a| (a.0, a.0))
            .chain(self.segments.iter().filter(|s| s.2 > 0.0).map(|s| (s.0, s.1)));
        pts.fold(None, |acc, (lo, hi)| match acc {
            None => Some((lo, hi)),
            Some((a, b)) => Some((a.min(lo), b.max(hi))),
        })
    }

    /// True when the two measures are mutually singular: no shared atom and
    /// no pair of segments overlapping on an interval of positive length.
    pub fn is_singular_to(&self, other: &ParameterMeasure) -> bool {
        let shared_atom = self
            .atoms
            .iter()
            .filter(|a| a.1 > 0.0)
            .any(|a| other.atoms.iter().any(|b| b.1 > 0.0 && b.0 == a.0));
        let overlapping = self.segments.iter().filter(|s| s.2 > 0.0 && s.1 > s.0).any(|s| {
            other
                .segments
                .iter()
                .filter(|o| o.2 > 0.0 && o.1 > o.0)
                .any(|o| s.0.max(o.0) < s.1.min(o.1))
        });
        !shared_atom && !overlapping
    }

    /// ∫ f dλ: atoms summed exactly, each segment by quadrature.
    pub fn integrate<F>(&self, f: F, cfg: &IntegrationConfig) -> Result<f64>
    where
        F: Fn(f64) -> Result<f64>,
    {
        let mut total = 0.0;
        for &(theta, w) in &self.atoms {
            if w > 0.0 {
                total += w * f(theta)?;
            }
        }
        for &(a, b, w) in &self.segments {
            if w == 0.0 {
                continue;
            }
            if a == b {
                total += w * f(a)?;
                continue;
            }
            total += w / (b - a) * integrate_fallible(&f, a, b, cfg)?;
        }
        Ok(total)
    }
}

/// Quadrature of a fallible integrand; the first integrand error wins over
/// any quadrature error.
pub(crate) fn integrate_fallible<F>(f: &F, a: f64, b: f64, cfg: &IntegrationConfig) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let err = RefCell::new(None);
    let out = integrate(
        |x| match f(x) {
            Ok(v) => v,
            Err(e) => {
                err.borrow_mut().get_or_insert(e);
                0.0
            }
        },
        a,
        b,
        cfg,
    );
    if let Some(e) = err.into_inner() {
        return Err(e);
    }
    out
}

/// A finite signed measure kept as its Hahn–Jordan parts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignedMeasure {
    pub positive: ParameterMeasure,
    pub negative: ParameterMeasure,
}

impl SignedMeasure {
    pub fn new(positive: ParameterMeasure, negative: ParameterMeasure) -> Result<Self> {
        positive.validate("nu.positive")?;
        negative.validate("nu.negative")?;
        if !positive.is_singular_to(&negative) {
            return Err(Error::invalid(
                "nu",
                "positive and negative parts must have disjoint support",
            ));
        }
        Ok(Self { positive, negative })
    }

    /// Splits per-atom signed weights into positive and negative parts.
    pub fn from_atoms(atoms: &[(f64, f64)]) -> Result<Self> {
        let mut pos = ParameterMeasure::empty();
        let mut neg = ParameterMeasure::empty();
        for &(theta, w) in atoms {
            if w > 0.0 {
                pos.atoms.push((theta, w));
            } else if w < 0.0 {
                neg.atoms.push((theta, -w));
            }
        }
        Self::new(pos, neg)
    }

    /// ∫ f dν⁺ − ∫ f dν⁻.
    pub fn integrate<F>(&self, f: F, cfg: &IntegrationConfig) -> Result<f64>
    where
        F: Fn(f64) -> Result<f64>,
    {
        Ok(self.positive.integrate(&f, cfg)? - self.negative.integrate(&f, cfg)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn integrate_mixed_measure() {
        let m = ParameterMeasure::atom(0.5, 2.0).with_segment(0.0, 2.0, 3.0);
        let cfg = IntegrationConfig::default();
        // 2·0.25 + 3·(1/2)∫₀² x² dx = 0.5 + 4
        let v = m.integrate(|x| Ok(x * x), &cfg).unwrap();
        assert_abs_diff_eq!(v, 4.5, epsilon = 1e-10);
        assert_abs_diff_eq!(m.total_mass(), 5.0);
        assert!(m.normalized().unwrap().is_normalized());
    }

    #[test]
    fn lebesgue_integral() {
        let m = ParameterMeasure::lebesgue(-1.0, 1.0);
        let v = m.integrate(|x| Ok(x.abs()), &IntegrationConfig::default()).unwrap();
        assert_abs_diff_eq!(v, 1.0, epsilon = 1e-9);
    }

    #[test]
    fn singularity_checks() {
        let a = ParameterMeasure::uniform(0.0, 1.0, 1.0);
        let b = ParameterMeasure::uniform(1.0, 2.0, 1.0).with_atom(0.5, 1.0);
        assert!(a.is_singular_to(&b));
        let c = ParameterMeasure::uniform(0.5, 1.5, 1.0);
        assert!(!a.is_singular_to(&c));
        assert!(SignedMeasure::new(a.clone(), c).is_err());
        let d = ParameterMeasure::atom(0.3, 1.0);
        assert!(!d.is_singular_to(&ParameterMeasure::atom(0.3, 2.0)));
    }

    #[test]
    fn integrand_errors_propagate() {
        let m = ParameterMeasure::uniform(0.0, 1.0, 1.0);
        let r = m.integrate(
            |_| Err(Error::Precondition("boom".into())),
            &IntegrationConfig::default(),
        );
        assert_eq!(r, Err(Error::Precondition("boom".into())));
    }
}
