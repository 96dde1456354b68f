//! dirlab: a desk-scale numerical laboratory for Dirichlet energies of
//! composed harmonic extensions on the unit disk.
//!
//! The library verifies, numerically, that the Dirichlet integrals of
//! Φ∘Ph and P(Φ∘h) are comparable exactly when the derivative Ψ = Φ′
//! satisfies a reverse Cauchy inequality over intervals, computes the best
//! constant of that inequality, and reproduces the sharp constants 3/2 and
//! 4/3 for Ψ(t) = |t| together with the step/ramp boundary data that attain
//! them in the limit.
//!
//! Modules:
//! * [`psi`] — the weight Ψ, its antiderivatives, and the clamped truncations
//! * [`reverse_cauchy`] — interval ratios and best-constant search
//! * [`disk`] — Poisson operator, spectral and Douglas energies on the disk
//! * [`energy`] — the two sides of the composed-energy inequality
//! * [`extremal`] — the ε-sweep sharpness experiment
//! * [`selftest`] — the acceptance checks run by `dirlab selftest` and CI

pub mod disk;
pub mod energy;
pub mod error;
pub mod extremal;
pub mod psi;
pub mod reverse_cauchy;
pub mod selftest;

pub use error::{Error, Result};
