//! Numerical ground truth that shares no code with the closed forms it checks.
//!
//! [`ode`] integrates the Gaussian-parameter equations with adaptive RK4;
//! [`grid`] propagates full wavefunctions with a split-step spectral method
//! and measures moments and overlaps by quadrature.

// `!(x > 0)` rejects NaN along with the out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod grid;
pub mod ode;

pub use error::{GridError, OdeError};
pub use grid::{GridMoments, GridState};
pub use ode::{integrate_riccati, GaussianState, OdeOptions, RiccatiSystem};
