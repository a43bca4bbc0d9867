//! Finite-dimensional Gabor analysis on the cyclic group `ℤ_L`.
//!
//! The crate models `L²(ℝ)` by `ℂ^L` and provides:
//!
//! * [`tfcore`]: translations, modulations, the full-grid STFT and its inverse;
//! * [`gabor`]: Gabor systems, frame operators and bounds, dual windows, the
//!   Janssen representation and normalised traces;
//! * [`modspace`]: submultiplicative weights and discrete `M¹_v` norms;
//! * [`twisted`]: the twisted convolution algebra on `ℤ^{2d}`, truncated
//!   `ℓ²` operators and Neumann-series inversion;
//! * [`heisenberg`]: the discrete Heisenberg group, its Gabor representation,
//!   the compact-centre variant and the induced representations on `ℤ_N`;
//! * [`density`]: Beurling lower density, lattice covolume, homogeneous
//!   approximation residuals and projection-trace comparisons.

pub mod density;
pub mod error;
pub mod gabor;
pub mod heisenberg;
pub mod linalg;
pub mod modspace;
pub mod signal;
pub mod tfcore;
pub mod twisted;
pub mod window;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use signal::Signal;
pub use window::Window;
