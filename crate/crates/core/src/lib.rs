//! Replacement-policy evaluation and optimization for units that accumulate
//! random shock damage against a deterministically degrading strength.
//!
//! A [`Scenario`] fixes the shock process, the damage model, the strength
//! curve and the replacement costs. A [`Policy`] replaces the unit at a
//! planned time `T`, at the `N`-th shock or once damage reaches `Z`, whichever
//! comes first, and correctively at failure. Cost rates come from the
//! [`simulate`] engine for any model or from the [`direct`] evaluator when
//! both inter-arrival times and damages are exponential.

pub mod direct;
pub mod error;
pub mod optimize;
pub mod quadrature;
pub mod scenario;
pub mod simulate;
pub mod special;
pub mod stochastic;
pub mod strength;

pub use error::{Error, Result};
pub use scenario::{load_scenario, validate_policy, CostVector, Policy, Scenario};
pub use simulate::{Cause, CostRateEstimate, LifetimeOutcome};
pub use stochastic::{DamageModel, Distribution, RandomStream};
pub use strength::StrengthCurve;

/// Format a float with 17 significant digits so it re-reads bit-exactly.
pub fn format_float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string()
    }
}
