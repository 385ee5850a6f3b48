//! Grids, quadrature, FFT helpers and special functions.

pub mod grid;
pub mod quad;
pub mod special;
pub mod spectral;

pub use grid::{Axis, PhaseSpaceField, Wavefunction1D};
pub use quad::{inner_product, integrate_2d, trapezoid_weights};
pub use special::complex_erf;
pub use spectral::{spectral_derivative, spectral_derivative_1d, Direction, TrigInterpolant, ZoomDft};
