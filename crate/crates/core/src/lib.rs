//! Numerics for the small-distance behaviour of partially contracted
//! Green's-function kernels.
//!
//! * [`specfun`]: Dawson, parabolic cylinder `V(-1/2, x)`, `K_0`/`K_1`/`K_2`,
//!   `erf`, `E_1`.
//! * [`quadrature`]: adaptive Gauss-Kronrod (1-d, mapped infinite ranges,
//!   iterated 2-d) and seeded, thread-count independent Monte Carlo.
//! * [`kernels`]: model kernels, Gaussian mollifiers, hyperspherical and
//!   centre-of-mass coordinates.
//! * [`contraction`]: closed forms and quadrature realizations of the
//!   contracted kernels, their limits, and the cusp Monte Carlo check.
//! * [`asymptotics`]: least-squares fits of singular expansions, log-term
//!   detection and smoothness classification.
//! * [`verify`]: the acceptance checks, shared by the CLI and the test suite.
//! * [`cli`]: the `ckernels` command-line front end.
//! * [`oracle`]: independent reference evaluations for cross-checks.

pub mod asymptotics;
pub mod cli;
pub mod contraction;
pub mod error;
pub mod kernels;
pub mod oracle;
pub mod quadrature;
pub mod specfun;
pub mod verify;

pub use error::{Error, Result};
