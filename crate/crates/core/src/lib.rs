//! Numerical toolkit for the discrete spectrum of Schrodinger operators
//! `-Delta - sum_i V(x - y_i)` with identical radial wells centered on a
//! point array `Y`, in two and three dimensions.
//!
//! The central object is the Birman-Schwinger operator
//! `K(-kappa^2) = V^{1/2} (-Delta + kappa^2)^{-1} V^{1/2}`: a negative energy
//! `-kappa^2` is an eigenvalue of the Schrodinger operator exactly when 1 is
//! an eigenvalue of `K(-kappa^2)`, and the eigenvalue branches of `K` decrease
//! monotonically in `kappa`, so bound states are located by bisection on the
//! branch crossings. The crate assembles `K` by ball quadrature ([`bs_solver`]),
//! cross-checks against independent reference solvers (radial ODE shooting and
//! point-interaction matrices, [`oracles`]), computes Floquet band structure of
//! periodic chains ([`floquet`]), and searches well configurations that
//! maximize the ground-state energy ([`optimize`]).

pub mod bs_solver;
pub mod error;
pub mod floquet;
pub mod gauss;
pub mod geometry;
pub mod kernels;
pub mod linalg;
pub mod optimize;
pub mod oracles;
pub mod potentials;

pub use error::Error;

/// Crate version, surfaced in artifact manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
