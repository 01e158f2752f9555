//! Ready-made problem specifications for the worked examples.
//!
//! Weighting measures use Lebesgue densities, so `β ∫_{-1}^{0} … dθ` becomes
//! a segment of mass `β` on `[-1, 0]`.

use super::{Constraint, ProblemSpec};
use crate::distributions::ExponentialFamily;
use crate::objectives::ObjectiveG;
use crate::rules::ParameterMeasure;

/// β values of the Gaussian prospect table.
pub const GAUSSIAN_PROSPECT_BETAS: [f64; 7] = [1.0 / 3.0, 0.5, 2.0 / 3.0, 1.0, 1.5, 2.0, 3.0];
/// β values of the binomial prospect table.
pub const BINOMIAL_PROSPECT_BETAS: [f64; 5] = [0.5, 0.97, 1.0, 1.05, 1.2];
/// β values of the supremum-constraint table.
pub const SUPREMUM_BETAS: [f64; 3] = [1.0, 5.0, 10.0];

const PROSPECT_V: f64 = 0.69;

/// Gaussian(1), θ₀ = 0, α = 0.1, objective
/// `β ∫_{-1}^{0} ω(p) dθ + ∫_{0}^{1} ω(p) dθ` with `ω = ω_0.69`.
pub fn gaussian_prospect(beta: f64) -> ProblemSpec {
    ProblemSpec {
        family: ExponentialFamily::Gaussian { variance: 1.0 },
        constraint: Constraint::Point { theta0: 0.0 },
        theta_range: [-1.0, 1.0],
        lambda1: ParameterMeasure::uniform(-1.0, 0.0, beta).with_segment(0.0, 1.0, 1.0),
        alpha: 0.1,
        g: ObjectiveG::prospect(PROSPECT_V),
    }
}

/// Binomial(10), θ₀ = 0.5, α = 0.09, objective
/// `β ∫_{0.4}^{0.5} ω(p) dθ + ∫_{0.5}^{0.6} ω(p) dθ`.
pub fn binomial_prospect(beta: f64) -> ProblemSpec {
    ProblemSpec {
        family: ExponentialFamily::Binomial { trials: 10 },
        constraint: Constraint::Point { theta0: 0.5 },
        theta_range: [0.4, 0.6],
        lambda1: ParameterMeasure::uniform(0.4, 0.5, 0.1 * beta).with_segment(0.5, 0.6, 0.1),
        alpha: 0.09,
        g: ObjectiveG::prospect(PROSPECT_V),
    }
}

/// Gaussian(1), `∫_{-0.2}^{0.4} p dθ ≤ 0.1` against Lebesgue measure, objective
/// `∫_{-1}^{-0.2} √p dθ + ∫_{0.4}^{1} √p dθ`.
pub fn composite_integrated() -> ProblemSpec {
    ProblemSpec {
        family: ExponentialFamily::Gaussian { variance: 1.0 },
        constraint: Constraint::Integrated {
            null_range: [-0.2, 0.4],
            lambda0: ParameterMeasure::lebesgue(-0.2, 0.4),
        },
        theta_range: [-1.0, 1.0],
        lambda1: ParameterMeasure::lebesgue(-1.0, -0.2).with_segment(0.4, 1.0, 0.6),
        alpha: 0.1,
        g: ObjectiveG::Power { kappa: 0.5 },
    }
}

/// Gaussian(1), `sup_{[-0.2, 0.2]} p ≤ 0.1`, objective
/// `β ∫_{-1}^{-0.2} √p dθ + ∫_{0.2}^{1} √p dθ`.
pub fn composite_supremum(beta: f64) -> ProblemSpec {
    ProblemSpec {
        family: ExponentialFamily::Gaussian { variance: 1.0 },
        constraint: Constraint::Supremum {
            null_range: [-0.2, 0.2],
        },
        theta_range: [-1.0, 1.0],
        lambda1: ParameterMeasure::uniform(-1.0, -0.2, 0.8 * beta).with_segment(0.2, 1.0, 0.8),
        alpha: 0.1,
        g: ObjectiveG::Power { kappa: 0.5 },
    }
}

/// Linear objective with a single alternative above the null: the classical
/// one-sided most powerful test.
pub fn np_recovery() -> ProblemSpec {
    ProblemSpec {
        family: ExponentialFamily::Gaussian { variance: 1.0 },
        constraint: Constraint::Point { theta0: 0.0 },
        theta_range: [-1.0, 1.0],
        lambda1: ParameterMeasure::atom(0.5, 1.0),
        alpha: 0.05,
        g: ObjectiveG::Identity,
    }
}
