//! Pseudospectral toolkit for the incompressible Hall-MHD equations on the
//! periodic torus `[0, 2π)^3`.
//!
//! The crate is organised in layers:
//!
//! * [`grid`], [`fft`], [`field`], [`ops`] — spectral representation of real
//!   mean-zero fields, exact Fourier-multiplier calculus (gradient, curl,
//!   Leray projection, inverse curl) and dealiased pointwise products;
//! * [`lp`] — dyadic (Littlewood-Paley) frequency decomposition, Besov /
//!   Sobolev / Chemin-Lerner norms, paraproduct splitting, dyadic-block
//!   commutators and an empirical harness for the product and commutator
//!   inequalities the analysis relies on;
//! * [`mhd`] — the Hall-MHD right-hand sides: the extended velocity /
//!   magnetic-field / current formulation, the electron-velocity formulation,
//!   conversions between them, the quadratic form driving both, the key
//!   (curl ((curl v) x B), v) cancellation and the dyadic parameter
//!   rescaling;
//! * [`solver`] — exact heat propagation, a second-order exponential
//!   integrator, the Duhamel fixed-point (Picard) construction in plain and
//!   split form, spectral annulus (Friedrichs) projection and the associated
//!   Galerkin scheme;
//! * [`diag`] — energy balance, smallness and blow-up monitors, consistency
//!   defects and Sobolev-propagation reports;
//! * [`init`] — reproducible initial-condition families;
//! * [`snapshot`] — on-disk field snapshots and checkpoint metadata;
//! * [`verify`] — named pass/fail invariant suites built from all of the
//!   above.
//!
//! All state lives in Fourier coefficients of real fields; every operation is
//! deterministic (single-threaded, fixed reduction order), so identical
//! inputs produce bit-identical outputs.

pub mod diag;
pub mod error;
pub mod fft;
pub mod field;
pub mod grid;
pub mod init;
pub mod lp;
pub mod mhd;
pub mod ops;
pub mod snapshot;
pub mod solver;
pub mod verify;

pub use error::{Error, Result};
pub use field::{SpectralField, SpectralVectorField};
pub use grid::Grid;

/// Complex scalar used throughout (double precision).
pub type Complex = num_complex::Complex<f64>;
