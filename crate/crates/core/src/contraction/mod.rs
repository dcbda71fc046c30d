//! Partially contracted kernels: closed forms, their quadrature
//! realizations, the limits and Taylor approximants of the regularized
//! diagonal kernel, the singular terms of the second-order self-energy, and
//! the Monte Carlo check of the cusp coefficient.
//!
//! Quantities linear in the kernel constant `c12` take it as an argument.

mod cusp;
mod example2;
mod fig1;
mod psi0;
mod singular;

pub use cusp::*;
pub use example2::*;
pub use fig1::*;
pub use psi0::*;
pub use singular::*;

/// Default kernel constant `1/(2 pi^3)`.
pub const DEFAULT_C12: f64 = 1.0 / (2.0 * std::f64::consts::PI * std::f64::consts::PI * std::f64::consts::PI);
