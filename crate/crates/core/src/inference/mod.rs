//! IUT, UIT and aiaUIT decisions, max-T adjusted p-values and simultaneous limits.

pub mod ci;
pub mod decision;
pub mod patterns;
pub mod pvalues;

pub use ci::{simultaneous_ci, simultaneous_ci_with, SimultaneousCI};
pub use decision::{decide, TestOutcome};
pub use patterns::{enumerate_alternative_patterns, format_pattern, MAX_PATTERN_J};
pub use pvalues::{
    adjusted_p_block, default_options, marginal_p, marginal_p_with, maxt_adjusted_p,
    maxt_adjusted_p_with, raw_p, Alternative, MarginalMode,
};

use crate::error::Result;
use crate::models::JointInference;
use crate::mvdist::MvtIntegrator;

/// Adjusted and per-endpoint p-values of `ji` and the resulting decisions.
pub fn test_family(
    integ: &MvtIntegrator,
    ji: &JointInference,
    alpha: f64,
    alternative: Alternative,
    mode: MarginalMode,
) -> Result<TestOutcome> {
    let adjusted = maxt_adjusted_p_with(integ, ji, alternative)?;
    let raw = marginal_p_with(integ, ji, alternative, &ji.endpoint_partition(), mode)?;
    Ok(decide(&raw, &adjusted, alpha)?.with_alternative(alternative))
}
