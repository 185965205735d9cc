//! Siegel theta functions with half-integer characteristics.
//!
//! The crate evaluates `theta_a(z, tau)` and its derivatives on the Siegel
//! upper half-space with certified truncation bounds, and checks the
//! differential and algebraic identities satisfied by thetanulls: numerically
//! at seeded sample points ([`identities`]), exactly over the rationals
//! ([`exactpoly`]), along the genus-1 Halphen flow ([`halphen`]), and against
//! exact q-expansions ([`fourier`]).

pub mod characteristics;
pub mod cli;
pub mod error;
pub mod exactpoly;
pub mod forms;
pub mod fourier;
pub mod halphen;
pub mod identities;
pub mod siegel;
pub mod sum;
pub mod theta;

pub use error::{Error, Result};

pub type Complex64 = num_complex::Complex<f64>;
