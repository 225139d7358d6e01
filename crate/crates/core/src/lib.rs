//! Real bound-state spectra of a Dirac particle in static, spherically
//! symmetric complex potentials.
//!
//! The radial Dirac system is reduced to a Schrödinger-like equation for the
//! upper spinor component ([`transform`]), four hyperbolic potential families
//! are provided behind a common [`potentials::PotentialFamily`] trait and a
//! name registry ([`potentials`]), closed-form spectra and eigenfunctions are
//! evaluated in [`spectra`] and [`wavefun`], and [`verify`] checks all of it
//! against the eigenvalues of the finite-difference Hamiltonian on a
//! complex-shifted contour.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod families;
pub mod hyperbolic;
pub mod jacobi;
pub mod potentials;
pub mod spectra;
pub mod transform;
pub mod verify;
pub mod wavefun;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
pub use potentials::PotentialSpec;

/// The imaginary unit.
pub const I: C64 = C64 { re: 0.0, im: 1.0 };
