//! Pathway-model probability densities and anomalous-diffusion scaling analysis.
//!
//! The pathway parameter `alpha` moves one functional form through three
//! families: a bounded-support type-1 beta form (`alpha < 1`), a generalized
//! gamma form (`alpha = 1`) and a heavy-tailed type-2 beta form (`alpha > 1`).
//! The crate provides the family in scalar ([`scalar`]), elliptically contoured
//! multivariate ([`multivariate`]) and rectangular matrix-variate ([`matrix`])
//! form, together with the generalized entropy measures that the densities
//! optimize.
//!
//! [`scaling`] implements Diffusion Entropy Analysis and Standard Deviation
//! Analysis for estimating scaling exponents of time series, plus synthetic
//! Gaussian, Lévy-flight and Lévy-walk generators.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod kernel;
pub mod matrix;
pub mod multivariate;
pub mod numerics;
pub mod scalar;
pub mod scaling;

pub use error::{Error, Result};
pub use kernel::Branch;
pub use numerics::{FitLine, RandomStream};
