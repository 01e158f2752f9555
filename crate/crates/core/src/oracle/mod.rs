//! Independent checks of solver output.
//!
//! Nothing here calls the solvers or the rule power functions: powers are
//! rebuilt from the family's CDF primitives, finite problems are brute
//! forced, and Monte-Carlo estimates come from sampling.

mod finite;
mod monte_carlo;
mod structure;
mod variance;

pub use finite::{brute_force_bayes, brute_force_constrained, FiniteInstance};
pub use monte_carlo::{mc_power, McEstimate};
pub use structure::{check_psi_single_root, check_theorem3_fixed_point, ConsistencyReport, PsiReport};
pub use variance::{check_variance_lemma, DiscreteLaw};

use crate::distributions::ExponentialFamily;
use crate::error::Result;
use crate::rules::IntervalRule;

/// `P_θ(T < ℓ) + p_ℓ P_θ(T = ℓ) + P_θ(T > u) + p_u P_θ(T = u)`.
pub fn independent_power(fam: &ExponentialFamily, theta: f64, rule: &IntervalRule) -> Result<f64> {
    let at_ell = fam.statistic_atom(theta, rule.ell)?;
    let at_u = fam.statistic_atom(theta, rule.u)?;
    let below = fam.statistic_cdf(theta, rule.ell)? - at_ell;
    let above = fam.statistic_sf(theta, rule.u)?;
    Ok(below + rule.p_ell * at_ell + above + rule.p_u * at_u)
}
