//! The S function (a sum of digamma asymptotic error terms), the even φ
//! function built from it, its complex Fourier transform, and numerical
//! diagnostics connecting transform zeros to zeros of the Riemann zeta
//! function.

pub mod checks;
pub mod cli;
mod dd;
pub mod error;
pub mod fourier;
pub mod phi;
pub mod quad;
pub mod sfunc;
pub mod special;
pub mod sum;
pub mod theorem_lab;

pub use error::{Error, Result};
