//! Special functions and the adaptive quadrature engine used by every
//! numerical cross-check in the crate.

mod airy;
mod dawson;
mod gamma;
mod quadrature;

pub use airy::{airy_ai, airy_ai_prime, airy_pair, airy_zero, airy_zeros, AIRY_MAX_ARG, AIRY_MIN_ARG, MAX_AIRY_ZERO};
pub use dawson::{dawson, dawson_prime, erfi, ln_erfi, ERFI_MAX_ARG};
pub use gamma::{digamma, digamma_diff_half, ln_gamma, ln_gamma_ratio_half, trigamma, trigamma_diff_half};
pub use quadrature::{integrate_1d, integrate_piecewise, Quadrature, QuadratureSpec};
