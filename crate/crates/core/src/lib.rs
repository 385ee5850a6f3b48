//! Phase-space quantum amplitudes: transforms, star-product algebra,
//! closed-form amplitudes and time evolution.

pub mod analytic;
pub mod dynamics;
pub mod error;
pub mod figures;
pub mod numgrid;
pub mod staralg;
pub mod validate;
pub mod windows;
pub mod xform;

pub use error::{Checked, Error, Result, Warning};
pub use num_complex::Complex64 as C64;
pub use windows::WindowSpec;
