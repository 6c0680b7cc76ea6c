//! Wu pseudometrics of Reinhardt indicatrices.
//!
//! The unit ball of the Wu pseudometric is the minimal-volume Hermitian
//! ellipsoid containing the indicatrix of the initial pseudometric. For
//! Reinhardt indicatrices that ellipsoid is diagonal, and the map
//! `Psi(z) = (|z_1|^2, ..., |z_n|^2)` turns the search into a
//! minimal-volume simplex problem in `R^n_+`, solved in [`wu`].

pub mod busemann;
pub mod domains;
pub mod error;
pub mod geometry;
pub mod metrics;
pub mod sampling;
pub mod wu;

pub use error::{Error, Result};
pub use geometry::{CVector, DiagonalHermitianForm, Frame, PsiPoint, SimplexParams, Tolerance};
pub use num_complex::Complex64;
