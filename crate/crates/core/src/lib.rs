//! Optimal randomized decision rules for binary hypothesis tests with
//! nonlinear power objectives.
//!
//! The library maximizes `∫ g(p(θ; δ)) Λ₁(dθ)` over decision rules `δ`
//! subject to one of three false-alarm constraints (a point null, an
//! integrated composite null, or a supremum over a composite null), for
//! single-parameter exponential families. Optimal rules in this setting are
//! interval rules on the sufficient statistic; the solvers search over them
//! and the [`oracle`] module checks results independently.

// `!(x > y)` comparisons are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod distributions;
mod error;
mod ext_real;
pub mod objectives;
pub mod oracle;
pub mod quadrature;
pub mod rules;
pub mod solvers;
pub mod special;

pub use distributions::ExponentialFamily;
pub use error::{Error, Result};
pub use objectives::ObjectiveG;
pub use quadrature::{IntegrationConfig, RootConfig};
pub use rules::{power, GeneralBayesRule, IntervalRule, ParameterMeasure, SignedMeasure};
pub use solvers::{solve, Constraint, ProblemSpec, SolveResult, SolverConfig};
