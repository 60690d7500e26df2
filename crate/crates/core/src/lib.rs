//! Numerical laboratory for the energy-critical Hardy-Sobolev heat equation
//!
//! ∂_t u − Δu = ± |x|^{−γ} |u|^{p−2} u,   p = 2(d−γ)/(d−2),
//!
//! restricted to real radial fields on a truncated radial grid. The crate
//! provides the variational layer (energy, Nehari functional, ground state,
//! mountain-pass threshold, stable/unstable set membership), an implicit
//! linear heat propagator, an IMEX nonlinear evolution with trajectory
//! recording and outcome classification, post-hoc diagnostics (Kato norms,
//! localized concavity certificates), and bounded-ball Dirichlet dynamics
//! with a discrete comparison principle.
//!
//! The crate is `no_std` (with `alloc`); IO, CLI, and file formats live in
//! the companion `hslab` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod diagnostics;
pub mod dirichlet;
pub mod error;
pub mod evolve;
pub mod field;
pub mod functionals;
pub mod grid;
mod interp;
mod math;
pub mod params;
pub mod propagator;
pub mod sweep;

pub use error::{Error, Result};
pub use field::{Boundary, RadialField};
pub use functionals::{FunctionalReport, Membership};
pub use grid::RadialGrid;
pub use params::{critical_exponent, ModelParams, Sign};
pub use propagator::{LinearStepConfig, Scheme};

pub use evolve::{Checkpoint, EvolveConfig, Trajectory, Verdict};
