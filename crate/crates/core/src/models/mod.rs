//! One-way fits per endpoint, Dunnett contrasts and their joint covariance.

pub mod contrasts;
pub mod dataset;
pub mod fit;
pub mod joint;

pub use contrasts::{dunnett_contrasts, ContrastSet};
pub use dataset::Dataset;
pub use fit::{fit_all, fit_oneway, OneWayFit};
pub use joint::{influence_matrix, joint_inference, CovarianceKind, JointInference};
