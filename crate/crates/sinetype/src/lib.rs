//! Numerical toolkit for sine-type entire functions
//! `F(z) = sin z + ∫₀¹ f(t) e^{iz(2t-1)} dt`.
//!
//! The zeros of `F` form a sequence `z_n = πn + ζ̃_n` whose perturbations
//! `ζ̃_n` are Fourier coefficients of a function `g ∈ L₂(0,1)`. This crate
//! computes the map in both directions:
//!
//! * forward — `f ↦ g` via a certified contraction mapping in coefficient
//!   space, cross-checked by an argument-principle root oracle;
//! * inverse — `g ↦ f` via Neumann inversion of the operator `A_g` plus a
//!   finite patching system for low-index zeros (multiplicities allowed).
//!
//! All heavy objects are immutable values and all operations are pure, so
//! everything here is safe to call concurrently.

pub mod cli;
pub mod config;
pub mod error;
pub mod eval;
pub mod forward;
pub mod fourier;
pub mod inverse;
mod linalg;
pub mod oracle;
pub mod quad;
pub mod report;

pub use config::SolverConfig;
pub use error::{Error, Result};
pub use eval::{normalize, to_symmetric_coeffs, SineType};
pub use forward::{apply_g, forward_map, solve_fixed_point, track_branch, ForwardResult};
pub use fourier::{
    apply_m, coeffs_from_samples, entrywise_product, entrywise_sin, gamma_from_f, reduce_gamma,
    samples_from_coeffs, CoeffSeq, GammaElement, GridFunction, MomentKernel,
};
pub use inverse::{apply_ag, b_map, invert_ag, inverse_map, InverseResult};
pub use oracle::{count_zeros_disk, localize_all, newton_refine, Cluster, ZeroSet};
