//! Minimum estimation error for group-action estimation with energy and
//! representation constraints, the optimal input states, and Monte-Carlo
//! checks of practical estimation protocols.

// `!(x > 0)` style guards also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod groups;
pub mod legendre;
pub mod mathieu;
pub mod scalar;
pub mod simulate;
pub mod spectra;

pub use error::{Error, Result};

pub type Tridiagonal = spectra::TridiagonalOperator<f64>;
pub type Spectrum = spectra::SpectrumResult<f64>;
pub type MathieuValue = mathieu::MathieuValue<f64>;
pub type Kappa = legendre::KappaResult<f64>;
pub type Wave = groups::WaveFunction<f64>;
pub type Report = groups::MinErrorReport<f64>;
pub type Protocol = simulate::ProtocolReport;
