//! Multivariate normal sampling and multivariate t probabilities.

pub mod bivariate;
pub mod chi;
pub mod correlation;
pub mod mvt;
pub mod quadrature;
pub mod quantile;
pub mod sample;
pub mod univariate;

pub use correlation::{factor_psd, CorrelationMatrix};
pub use mvt::{exceedance_bounds, mvt_cdf, MvtIntegrator, MvtOptions, ProbResult, RelativeTo};
pub use quantile::{equicoordinate_quantile, quantile_with, Tail};
pub use sample::mvn_sample;
pub use univariate::{norm_cdf, norm_quantile, t_cdf, t_quantile, t_sf};
