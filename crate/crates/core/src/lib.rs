//! Numerics for Mellin transforms of spherical principal-series
//! `GL(n,R)` Whittaker functions, `n ≤ 4`.
//!
//! The crate evaluates the transform by recursive Mellin–Barnes quadrature,
//! builds the shift relations it satisfies as executable objects, continues
//! it meromorphically to the left, and evaluates closed-form residues, with
//! every identity backed by an exact-rational or contour-integral twin.

pub mod continuation;
pub mod error;
pub mod gamma;
pub mod gl4;
pub mod mellin;
pub mod pdelta;
pub mod quad;
pub mod rational;
pub mod recurrence;
pub mod residues;
pub mod scalar;
pub mod verify;

pub use error::{Error, Result};
pub use mellin::{MellinPoint, SpectralParams};
pub use quad::QuadratureConfig;
