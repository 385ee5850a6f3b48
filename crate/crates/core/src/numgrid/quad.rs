//! Trapezoidal quadrature on uniform grids.

use num_complex::Complex64 as C64;

use super::grid::{Axis, PhaseSpaceField};
use crate::error::{Error, Result};

/// Trapezoid weights `h/2, h, ..., h, h/2` for an axis.
pub fn trapezoid_weights(axis: &Axis) -> Vec<f64> {
    let h = axis.spacing();
    let mut w = vec![h; axis.len()];
    w[0] = 0.5 * h;
    *w.last_mut().unwrap() = 0.5 * h;
    w
}

/// Row sums are accumulated in index order, so the result does not depend on
/// thread scheduling.
fn weighted_sum(field: &PhaseSpaceField, f: impl Fn(usize, C64) -> C64) -> C64 {
    let wq = trapezoid_weights(field.q_axis());
    let wp = trapezoid_weights(field.p_axis());
    let np = wp.len();
    let mut total = C64::new(0.0, 0.0);
    for (i, wqi) in wq.iter().enumerate() {
        let mut row = C64::new(0.0, 0.0);
        for (j, wpj) in wp.iter().enumerate() {
            let k = i * np + j;
            row += f(k, field.values()[k]) * *wpj;
        }
        total += row * *wqi;
    }
    total
}

/// Trapezoidal approximation of `∫ field dq dp`.
pub fn integrate_2d(field: &PhaseSpaceField) -> Result<C64> {
    if !field.is_finite() {
        return Err(Error::InvalidField("non-finite entries in integrand".into()));
    }
    Ok(weighted_sum(field, |_, v| v))
}

/// `∫ conj(f1) f2 dq dp`.
pub fn inner_product(f1: &PhaseSpaceField, f2: &PhaseSpaceField) -> Result<C64> {
    f1.check_same_grid(f2)?;
    if !(f1.is_finite() && f2.is_finite()) {
        return Err(Error::InvalidField("non-finite entries in inner product".into()));
    }
    let other = f2.values();
    Ok(weighted_sum(f1, |k, v| v.conj() * other[k]))
}

pub(crate) fn integrate_abs_sq(field: &PhaseSpaceField) -> f64 {
    weighted_sum(field, |_, v| C64::new(v.norm_sqr(), 0.0)).re
}
