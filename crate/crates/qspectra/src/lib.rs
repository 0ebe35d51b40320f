//! Spectral laboratory for large quaternion sample covariance matrices.
//!
//! The crate builds quaternion random matrices through their 2x2 complex
//! block embedding, solves the resulting Hermitian eigenproblems with a
//! self-contained Householder + implicit-shift QL solver, and compares the
//! empirical spectral distributions against the Marchenko-Pastur law: exact
//! Kolmogorov/Levy distances, the Stieltjes fixed point with its delta_n
//! residual, the Bai smoothing inequality as a computable bound, and seeded
//! Monte Carlo rate sweeps.

pub mod bai;
pub mod cmatrix;
pub mod error;
pub mod experiments;
pub mod fixed_point;
pub mod mp_law;
pub mod quadrature;
pub mod quaternion;
pub mod sampling;
pub mod spectra;

pub use cmatrix::CMatrix;
pub use error::{Error, Result};
pub use mp_law::{MPLaw, SmoothingScale, UpperHalfPoint};
pub use quaternion::{Quaternion, QuaternionMatrix};
pub use spectra::{Spectrum, StepCDF};
