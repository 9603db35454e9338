//! Shared numerical building blocks: special functions, quadrature, least
//! squares, histograms, SPD factorization, seeded random streams and
//! Monte-Carlo means.

mod histogram;
mod ks;
mod linalg;
mod montecarlo;
mod quadrature;
mod random;
mod regression;
mod special;

pub use histogram::{fixed_width_histogram, histogram_entropy};
pub use ks::{ks_critical_1pct, ks_statistic};
pub use linalg::spd_factor;
pub(crate) use linalg::{ln_det_from_factor, mahalanobis_sq, try_cholesky};
pub use montecarlo::{mc_mean, mc_mean_split};
pub use quadrature::{integrate_1d, integrate_with_breaks, Quadrature};
pub use random::RandomStream;
pub use regression::{linear_fit, FitLine};
pub use special::{ln_beta, ln_gamma, ln_matrix_gamma};
pub(crate) use special::{ln_gamma_unchecked, ln_pi};
