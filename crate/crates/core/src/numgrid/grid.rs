//! Uniform sampling grids and the sampled objects that live on them.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Smallest admissible number of samples along an axis.
pub const MIN_POINTS: usize = 8;

/// A uniform axis `min, min + h, ..., max` with `n` samples (both endpoints included).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    min: f64,
    max: f64,
    n: usize,
}

impl Axis {
    pub fn new(min: f64, max: f64, n: usize) -> Result<Self> {
        if !(min.is_finite() && max.is_finite()) {
            return Err(Error::InvalidAxis(format!("non-finite bounds [{min}, {max}]")));
        }
        if min >= max {
            return Err(Error::InvalidAxis(format!("min {min} must be below max {max}")));
        }
        if n < MIN_POINTS {
            return Err(Error::InvalidAxis(format!("{n} points, need at least {MIN_POINTS}")));
        }
        Ok(Axis { min, max, n })
    }

    /// Axis on `[-half_width, half_width]`.
    pub fn symmetric(half_width: f64, n: usize) -> Result<Self> {
        Axis::new(-half_width, half_width, n)
    }

    /// Axis with `n` points starting at `min` with the given spacing.
    pub fn with_spacing(min: f64, spacing: f64, n: usize) -> Result<Self> {
        Axis::new(min, min + spacing * (n as f64 - 1.0), n)
    }

    /// The default axis `[-8, 8]` with 256 points.
    pub fn default_grid() -> Self {
        Axis { min: -8.0, max: 8.0, n: 256 }
    }

    pub fn min(&self) -> f64 {
        self.min
    }

    pub fn max(&self) -> f64 {
        self.max
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn spacing(&self) -> f64 {
        (self.max - self.min) / (self.n as f64 - 1.0)
    }

    /// Length of one period of the periodic extension used by FFT routines.
    pub fn period(&self) -> f64 {
        self.spacing() * self.n as f64
    }

    pub fn point(&self, i: usize) -> f64 {
        if i + 1 == self.n {
            self.max
        } else {
            self.min + i as f64 * self.spacing()
        }
    }

    pub fn points(&self) -> impl ExactSizeIterator<Item = f64> + '_ {
        (0..self.n).map(move |i| self.point(i))
    }

    pub fn contains(&self, x: f64) -> bool {
        let tol = 1e-9 * self.spacing();
        x >= self.min - tol && x <= self.max + tol
    }

    /// Index of the node at `x`, if `x` coincides with one.
    pub fn node_index(&self, x: f64) -> Option<usize> {
        let t = (x - self.min) / self.spacing();
        let r = t.round();
        if (t - r).abs() < 1e-9 && r >= 0.0 && (r as usize) < self.n {
            Some(r as usize)
        } else {
            None
        }
    }

    /// Axis with every coordinate multiplied by `factor > 0`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Axis::new(self.min * factor, self.max * factor, self.n)
    }

    /// Same spacing and bounds up to rounding.
    pub fn same_as(&self, other: &Axis) -> bool {
        let tol = 1e-12 * (self.max - self.min).abs().max(1.0);
        self.n == other.n && (self.min - other.min).abs() < tol && (self.max - other.max).abs() < tol
    }
}

/// Complex samples of a one-dimensional wavefunction on a uniform axis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSamples", into = "RawSamples")]
pub struct Wavefunction1D {
    axis: Axis,
    values: Vec<C64>,
}

/// Serialized form of [`Wavefunction1D`]: real and imaginary parts as
/// separate arrays, validated on the way in.
#[derive(Serialize, Deserialize)]
struct RawSamples {
    axis: Axis,
    re: Vec<f64>,
    im: Vec<f64>,
}

impl TryFrom<RawSamples> for Wavefunction1D {
    type Error = Error;

    fn try_from(raw: RawSamples) -> Result<Self> {
        if raw.re.len() != raw.im.len() {
            return Err(Error::Shape(format!("{} real parts, {} imaginary parts", raw.re.len(), raw.im.len())));
        }
        let values = raw.re.iter().zip(&raw.im).map(|(&r, &i)| C64::new(r, i)).collect();
        Wavefunction1D::new(raw.axis, values)
    }
}

impl From<Wavefunction1D> for RawSamples {
    fn from(w: Wavefunction1D) -> Self {
        RawSamples {
            axis: w.axis,
            re: w.values.iter().map(|v| v.re).collect(),
            im: w.values.iter().map(|v| v.im).collect(),
        }
    }
}

impl Wavefunction1D {
    pub fn new(axis: Axis, values: Vec<C64>) -> Result<Self> {
        if values.len() != axis.len() {
            return Err(Error::Shape(format!(
                "{} samples for an axis of {} points",
                values.len(),
                axis.len()
            )));
        }
        if let Some(i) = values.iter().position(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::InvalidField(format!("non-finite sample at index {i}")));
        }
        Ok(Wavefunction1D { axis, values })
    }

    pub fn from_fn(axis: Axis, f: impl Fn(f64) -> C64) -> Result<Self> {
        let values = axis.points().map(f).collect();
        Wavefunction1D::new(axis, values)
    }

    pub fn zeros(axis: Axis) -> Self {
        Wavefunction1D { axis, values: vec![C64::new(0.0, 0.0); axis.len()] }
    }

    pub fn axis(&self) -> &Axis {
        &self.axis
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<C64> {
        self.values
    }

    /// Trapezoidal ⟨self|other⟩.
    pub fn inner(&self, other: &Wavefunction1D) -> Result<C64> {
        if !self.axis.same_as(&other.axis) {
            return Err(Error::Shape("wavefunctions live on different axes".into()));
        }
        let w = super::quad::trapezoid_weights(&self.axis);
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .zip(&w)
            .map(|((a, b), w)| a.conj() * b * *w)
            .sum())
    }

    pub fn norm_sq(&self) -> f64 {
        let w = super::quad::trapezoid_weights(&self.axis);
        self.values.iter().zip(&w).map(|(a, w)| a.norm_sqr() * w).sum()
    }

    pub fn scaled(&self, c: C64) -> Self {
        Wavefunction1D { axis: self.axis, values: self.values.iter().map(|v| v * c).collect() }
    }

    /// `a * self + b * other`.
    pub fn combine(&self, a: C64, other: &Wavefunction1D, b: C64) -> Result<Self> {
        if !self.axis.same_as(&other.axis) {
            return Err(Error::Shape("wavefunctions live on different axes".into()));
        }
        let values = self.values.iter().zip(&other.values).map(|(x, y)| a * x + b * y).collect();
        Ok(Wavefunction1D { axis: self.axis, values })
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm_sq();
        if n <= 0.0 {
            return Err(Error::InvalidField("cannot normalize a zero wavefunction".into()));
        }
        Ok(self.scaled(C64::new(1.0 / n.sqrt(), 0.0)))
    }

    /// Relative L² distance `‖self − other‖ / ‖other‖`.
    pub fn relative_distance(&self, other: &Wavefunction1D) -> Result<f64> {
        let diff = self.combine(C64::new(1.0, 0.0), other, C64::new(-1.0, 0.0))?;
        Ok((diff.norm_sq() / other.norm_sq()).sqrt())
    }

    pub fn max_abs_diff(&self, other: &Wavefunction1D) -> f64 {
        self.values.iter().zip(&other.values).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }
}

/// Complex samples on a uniform `q × p` grid, stored row-major with one row per `q`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseSpaceField {
    q_axis: Axis,
    p_axis: Axis,
    values: Vec<C64>,
}

impl PhaseSpaceField {
    pub fn new(q_axis: Axis, p_axis: Axis, values: Vec<C64>) -> Result<Self> {
        let expected = q_axis.len() * p_axis.len();
        if values.len() != expected {
            return Err(Error::Shape(format!("{} values, grid needs {expected}", values.len())));
        }
        if let Some(i) = values.iter().position(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::InvalidField(format!(
                "non-finite value at (q index {}, p index {})",
                i / p_axis.len(),
                i % p_axis.len()
            )));
        }
        Ok(PhaseSpaceField { q_axis, p_axis, values })
    }

    /// Builds a field without validating finiteness; callers validate afterwards.
    pub(crate) fn from_raw(q_axis: Axis, p_axis: Axis, values: Vec<C64>) -> Self {
        debug_assert_eq!(values.len(), q_axis.len() * p_axis.len());
        PhaseSpaceField { q_axis, p_axis, values }
    }

    pub fn zeros(q_axis: Axis, p_axis: Axis) -> Self {
        PhaseSpaceField { q_axis, p_axis, values: vec![C64::new(0.0, 0.0); q_axis.len() * p_axis.len()] }
    }

    pub fn from_fn(q_axis: Axis, p_axis: Axis, f: impl Fn(f64, f64) -> C64 + Sync) -> Result<Self> {
        use rayon::prelude::*;
        let np = p_axis.len();
        let mut values = vec![C64::new(0.0, 0.0); q_axis.len() * np];
        values.par_chunks_mut(np).enumerate().for_each(|(i, row)| {
            let q = q_axis.point(i);
            for (j, v) in row.iter_mut().enumerate() {
                *v = f(q, p_axis.point(j));
            }
        });
        PhaseSpaceField::new(q_axis, p_axis, values)
    }

    pub fn q_axis(&self) -> &Axis {
        &self.q_axis
    }

    pub fn p_axis(&self) -> &Axis {
        &self.p_axis
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [C64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<C64> {
        self.values
    }

    pub fn get(&self, iq: usize, ip: usize) -> C64 {
        self.values[iq * self.p_axis.len() + ip]
    }

    pub fn row(&self, iq: usize) -> &[C64] {
        let np = self.p_axis.len();
        &self.values[iq * np..(iq + 1) * np]
    }

    pub fn same_grid(&self, other: &PhaseSpaceField) -> bool {
        self.q_axis.same_as(&other.q_axis) && self.p_axis.same_as(&other.p_axis)
    }

    pub(crate) fn check_same_grid(&self, other: &PhaseSpaceField) -> Result<()> {
        if self.same_grid(other) {
            Ok(())
        } else {
            Err(Error::Shape("fields live on different grids".into()))
        }
    }

    pub fn map(&self, f: impl Fn(C64) -> C64) -> Self {
        PhaseSpaceField { q_axis: self.q_axis, p_axis: self.p_axis, values: self.values.iter().map(|v| f(*v)).collect() }
    }

    /// Pointwise map that also sees the coordinates.
    pub fn map_with_coords(&self, f: impl Fn(f64, f64, C64) -> C64) -> Self {
        let np = self.p_axis.len();
        let values = self
            .values
            .iter()
            .enumerate()
            .map(|(k, v)| f(self.q_axis.point(k / np), self.p_axis.point(k % np), *v))
            .collect();
        PhaseSpaceField { q_axis: self.q_axis, p_axis: self.p_axis, values }
    }

    pub fn zip_map(&self, other: &PhaseSpaceField, f: impl Fn(C64, C64) -> C64) -> Result<Self> {
        self.check_same_grid(other)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| f(*a, *b)).collect();
        Ok(PhaseSpaceField { q_axis: self.q_axis, p_axis: self.p_axis, values })
    }

    pub fn conj(&self) -> Self {
        self.map(|v| v.conj())
    }

    pub fn scaled(&self, c: C64) -> Self {
        self.map(|v| v * c)
    }

    /// `a * self + b * other`.
    pub fn combine(&self, a: C64, other: &PhaseSpaceField, b: C64) -> Result<Self> {
        self.zip_map(other, |x, y| a * x + b * y)
    }

    pub fn add(&self, other: &PhaseSpaceField) -> Result<Self> {
        self.zip_map(other, |x, y| x + y)
    }

    pub fn sub(&self, other: &PhaseSpaceField) -> Result<Self> {
        self.zip_map(other, |x, y| x - y)
    }

    pub fn mul(&self, other: &PhaseSpaceField) -> Result<Self> {
        self.zip_map(other, |x, y| x * y)
    }

    /// `|value|²` as a real-valued (zero imaginary part) field.
    pub fn modulus_sq(&self) -> Self {
        self.map(|v| C64::new(v.norm_sqr(), 0.0))
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.re.is_finite() && v.im.is_finite())
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_re(&self) -> f64 {
        self.values.iter().map(|v| v.re.abs()).fold(0.0, f64::max)
    }

    pub fn max_abs_im(&self) -> f64 {
        self.values.iter().map(|v| v.im.abs()).fold(0.0, f64::max)
    }

    pub fn min_re(&self) -> f64 {
        self.values.iter().map(|v| v.re).fold(f64::INFINITY, f64::min)
    }

    /// Maximum pointwise distance to `other`.
    pub fn max_abs_diff(&self, other: &PhaseSpaceField) -> Result<f64> {
        self.check_same_grid(other)?;
        Ok(self.values.iter().zip(&other.values).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max))
    }

    /// Maximum pointwise distance restricted to `|q| ≤ q_lim`, `|p| ≤ p_lim`.
    pub fn max_abs_diff_within(&self, other: &PhaseSpaceField, q_lim: f64, p_lim: f64) -> Result<f64> {
        self.check_same_grid(other)?;
        let np = self.p_axis.len();
        let mut worst: f64 = 0.0;
        for (k, (a, b)) in self.values.iter().zip(&other.values).enumerate() {
            let q = self.q_axis.point(k / np);
            let p = self.p_axis.point(k % np);
            if q.abs() <= q_lim && p.abs() <= p_lim {
                worst = worst.max((a - b).norm());
            }
        }
        Ok(worst)
    }

    /// Trapezoidal L² norm.
    pub fn norm_l2(&self) -> f64 {
        super::quad::integrate_abs_sq(self).sqrt()
    }

    /// Fraction of `∫|f|²` carried by the outermost rows and columns.
    pub fn edge_fraction(&self) -> f64 {
        let nq = self.q_axis.len();
        let np = self.p_axis.len();
        let total: f64 = self.values.iter().map(|v| v.norm_sqr()).sum();
        if total == 0.0 {
            return 0.0;
        }
        let mut edge = 0.0;
        for i in 0..nq {
            for j in 0..np {
                if i == 0 || j == 0 || i + 1 == nq || j + 1 == np {
                    edge += self.values[i * np + j].norm_sqr();
                }
            }
        }
        edge / total
    }

    /// Copy with rows and columns interchanged (a `p × q` field).
    pub fn transposed(&self) -> Self {
        let nq = self.q_axis.len();
        let np = self.p_axis.len();
        let mut values = vec![C64::new(0.0, 0.0); nq * np];
        for i in 0..nq {
            for j in 0..np {
                values[j * nq + i] = self.values[i * np + j];
            }
        }
        PhaseSpaceField { q_axis: self.p_axis, p_axis: self.q_axis, values }
    }
}
