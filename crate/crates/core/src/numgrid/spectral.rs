//! FFT-based building blocks: chirp-z ("zoom") Fourier sums, spectral
//! derivatives and band-limited interpolation on uniform grids.
//!
//! All routines work for arbitrary lengths; `rustfft` picks mixed-radix or
//! Bluestein plans as needed.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64 as C64;
use rustfft::{Fft, FftPlanner};

use super::grid::{Axis, PhaseSpaceField, Wavefunction1D};
use crate::error::{Checked, Result, Warning};

/// Relative edge magnitude above which a field counts as non-decaying.
pub const EDGE_TOLERANCE: f64 = 1e-8;

/// Evaluates `X_k = Σ_j x_j exp(sign·i·t_j·s_k)` for uniform `t_j = t0 + j·dt`
/// and uniform `s_k = s0 + k·ds` with a chirp-z transform.
pub struct ZoomDft {
    n_in: usize,
    n_out: usize,
    pre: Vec<C64>,
    post: Vec<C64>,
    kernel_hat: Vec<C64>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for ZoomDft {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ZoomDft").field("n_in", &self.n_in).field("n_out", &self.n_out).finish()
    }
}

fn cis(x: f64) -> C64 {
    C64::new(x.cos(), x.sin())
}

impl ZoomDft {
    pub fn new(n_in: usize, t0: f64, dt: f64, n_out: usize, s0: f64, ds: f64, sign: f64) -> Self {
        let m = (n_in + n_out - 1).next_power_of_two();
        let alpha = sign * dt * ds;
        let chirp = |j: i64| cis(0.5 * alpha * (j * j) as f64);
        let pre = (0..n_in)
            .map(|j| cis(sign * j as f64 * dt * s0) * chirp(j as i64))
            .collect();
        let post = (0..n_out)
            .map(|k| cis(sign * t0 * (s0 + k as f64 * ds)) * chirp(k as i64))
            .collect();
        let mut kernel = vec![C64::new(0.0, 0.0); m];
        for k in 0..n_out {
            kernel[k] = chirp(k as i64).conj();
        }
        for j in 1..n_in {
            kernel[m - j] = chirp(j as i64).conj();
        }
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(m);
        let inverse = planner.plan_fft_inverse(m);
        forward.process(&mut kernel);
        ZoomDft { n_in, n_out, pre, post, kernel_hat: kernel, forward, inverse }
    }

    pub fn input_len(&self) -> usize {
        self.n_in
    }

    pub fn output_len(&self) -> usize {
        self.n_out
    }

    pub fn apply(&self, input: &[C64]) -> Vec<C64> {
        assert_eq!(input.len(), self.n_in, "zoom DFT input length");
        let m = self.kernel_hat.len();
        let mut buf = vec![C64::new(0.0, 0.0); m];
        for (b, (x, c)) in buf.iter_mut().zip(input.iter().zip(&self.pre)) {
            *b = x * c;
        }
        self.forward.process(&mut buf);
        for (b, k) in buf.iter_mut().zip(&self.kernel_hat) {
            *b *= k;
        }
        self.inverse.process(&mut buf);
        let scale = 1.0 / m as f64;
        (0..self.n_out).map(|k| buf[k] * self.post[k] * scale).collect()
    }
}

/// Angular wavenumbers of the FFT bins for `n` samples with spacing `h`.
pub fn fft_wavenumbers(n: usize, h: f64) -> Vec<f64> {
    let l = n as f64 * h;
    (0..n)
        .map(|m| {
            let s = if m <= n / 2 { m as f64 } else { m as f64 - n as f64 };
            2.0 * PI * s / l
        })
        .collect()
}

/// `order`-th derivative of periodic samples with spacing `h`.
pub fn derivative_1d(values: &[C64], h: f64, order: u32) -> Vec<C64> {
    let n = values.len();
    if order == 0 {
        return values.to_vec();
    }
    let mut planner = FftPlanner::new();
    let fwd = planner.plan_fft_forward(n);
    let inv = planner.plan_fft_inverse(n);
    let mut buf = values.to_vec();
    fwd.process(&mut buf);
    let ks = fft_wavenumbers(n, h);
    for (m, b) in buf.iter_mut().enumerate() {
        // The Nyquist bin of an even-length grid has no sign; odd derivatives drop it.
        if n.is_multiple_of(2) && m == n / 2 && order % 2 == 1 {
            *b = C64::new(0.0, 0.0);
            continue;
        }
        *b *= C64::new(0.0, ks[m]).powu(order);
    }
    inv.process(&mut buf);
    let scale = 1.0 / n as f64;
    buf.iter().map(|v| v * scale).collect()
}

fn edge_warning(values: &[C64]) -> Option<Warning> {
    let max = values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    if max == 0.0 {
        return None;
    }
    let edge = values[0].norm().max(values[values.len() - 1].norm());
    let fraction = edge / max;
    (fraction > EDGE_TOLERANCE).then_some(Warning::EdgeMass { fraction })
}

/// Phase-space direction for derivatives and interpolation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Q,
    P,
}

/// Spectral derivative of a sampled wavefunction.
pub fn spectral_derivative_1d(f: &Wavefunction1D, order: u32) -> Checked<Wavefunction1D> {
    let d = derivative_1d(f.values(), f.axis().spacing(), order);
    let warnings = edge_warning(f.values()).into_iter().collect();
    let out = Wavefunction1D::new(*f.axis(), d).expect("derivative of finite samples is finite");
    Checked::with(out, warnings)
}

/// Spectral derivative of a field along one direction.
pub fn spectral_derivative(f: &PhaseSpaceField, dir: Direction, order: u32) -> Checked<PhaseSpaceField> {
    use rayon::prelude::*;
    let work = match dir {
        Direction::P => f.clone(),
        Direction::Q => f.transposed(),
    };
    let n = work.p_axis().len();
    let h = work.p_axis().spacing();
    let mut values = work.values().to_vec();
    let edge = values
        .chunks(n)
        .map(|row| row[0].norm().max(row[n - 1].norm()))
        .fold(0.0, f64::max);
    values.par_chunks_mut(n).for_each(|row| {
        let d = derivative_1d(row, h, order);
        row.copy_from_slice(&d);
    });
    let out = PhaseSpaceField::from_raw(*work.q_axis(), *work.p_axis(), values);
    let out = match dir {
        Direction::P => out,
        Direction::Q => out.transposed(),
    };
    let max = f.max_abs();
    let warnings = if max > 0.0 && edge / max > EDGE_TOLERANCE {
        vec![Warning::EdgeMass { fraction: edge / max }]
    } else {
        Vec::new()
    };
    Checked::with(out, warnings)
}

/// Mixed derivative `∂_q^a ∂_p^b f`.
pub fn mixed_derivative(f: &PhaseSpaceField, q_order: u32, p_order: u32) -> PhaseSpaceField {
    let g = if p_order > 0 { spectral_derivative(f, Direction::P, p_order).value } else { f.clone() };
    if q_order > 0 {
        spectral_derivative(&g, Direction::Q, q_order).value
    } else {
        g
    }
}

/// Trigonometric interpolant through uniform samples, treating them as one
/// period of length `n·h`.
#[derive(Debug, Clone)]
pub struct TrigInterpolant {
    axis: Axis,
    /// Fourier coefficients for wavenumbers `k_m = 2π m / L`, `m = m_lo..`,
    /// already divided by `n`; the Nyquist pair of even `n` is split in half.
    coeffs: Vec<C64>,
    m_lo: i64,
}

impl TrigInterpolant {
    pub fn new(axis: Axis, values: &[C64]) -> Self {
        assert_eq!(values.len(), axis.len());
        let n = values.len();
        let mut buf = values.to_vec();
        FftPlanner::new().plan_fft_forward(n).process(&mut buf);
        let inv_n = 1.0 / n as f64;
        let (m_lo, m_hi) = if n.is_multiple_of(2) { (-(n as i64) / 2, n as i64 / 2) } else { (-(n as i64 - 1) / 2, (n as i64 - 1) / 2) };
        let coeffs = (m_lo..=m_hi)
            .map(|m| {
                let idx = m.rem_euclid(n as i64) as usize;
                let c = buf[idx] * inv_n;
                if n.is_multiple_of(2) && (m == m_lo || m == m_hi) {
                    c * 0.5
                } else {
                    c
                }
            })
            .collect();
        TrigInterpolant { axis, coeffs, m_lo }
    }

    pub fn from_wavefunction(f: &Wavefunction1D) -> Self {
        TrigInterpolant::new(*f.axis(), f.values())
    }

    pub fn axis(&self) -> &Axis {
        &self.axis
    }

    fn dk(&self) -> f64 {
        2.0 * PI / self.axis.period()
    }

    /// Value of the interpolant at `x` (periodic continuation outside the axis).
    pub fn eval(&self, x: f64) -> C64 {
        let theta = self.dk() * (x - self.axis.min());
        let step = cis(theta);
        let mut ph = cis(theta * self.m_lo as f64);
        let mut acc = C64::new(0.0, 0.0);
        for c in &self.coeffs {
            acc += c * ph;
            ph *= step;
        }
        acc
    }

    /// Values at `x0 + k·dx`, `k = 0..count`.
    pub fn eval_uniform(&self, x0: f64, dx: f64, count: usize) -> Vec<C64> {
        self.uniform_evaluator(dx, count).eval(x0)
    }

    /// Reusable evaluator for many uniform target sets sharing `dx` and `count`.
    pub fn uniform_evaluator(&self, dx: f64, count: usize) -> UniformEvaluator<'_> {
        let dk = self.dk();
        let zoom = ZoomDft::new(self.coeffs.len(), self.m_lo as f64 * dk, dk, count, 0.0, dx, 1.0);
        UniformEvaluator { interp: self, zoom }
    }
}

/// Evaluates a [`TrigInterpolant`] on `x0 + k·dx` for varying `x0`.
pub struct UniformEvaluator<'a> {
    interp: &'a TrigInterpolant,
    zoom: ZoomDft,
}

impl UniformEvaluator<'_> {
    pub fn eval(&self, x0: f64) -> Vec<C64> {
        let t = self.interp;
        let dk = t.dk();
        let shift = x0 - t.axis.min();
        let twisted: Vec<C64> = t
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c * cis((t.m_lo + i as i64) as f64 * dk * shift))
            .collect();
        self.zoom.apply(&twisted)
    }
}

/// Band-limited resampling of a field along one direction onto `target`.
///
/// Targets outside the source axis (beyond rounding) are rejected.
pub fn resample(f: &PhaseSpaceField, dir: Direction, target: &Axis) -> Result<PhaseSpaceField> {
    use crate::error::Error;
    use rayon::prelude::*;
    let src = match dir {
        Direction::Q => f.q_axis(),
        Direction::P => f.p_axis(),
    };
    if !(src.contains(target.min()) && src.contains(target.max())) {
        return Err(Error::Range(format!(
            "target [{}, {}] exceeds source [{}, {}]",
            target.min(),
            target.max(),
            src.min(),
            src.max()
        )));
    }
    let work = match dir {
        Direction::P => f.clone(),
        Direction::Q => f.transposed(),
    };
    let src_axis = *work.p_axis();
    let n = src_axis.len();
    let rows: Vec<Vec<C64>> = work
        .values()
        .par_chunks(n)
        .map(|row| TrigInterpolant::new(src_axis, row).eval_uniform(target.min(), target.spacing(), target.len()))
        .collect();
    let out = PhaseSpaceField::from_raw(*work.q_axis(), *target, rows.concat());
    Ok(match dir {
        Direction::P => out,
        Direction::Q => out.transposed(),
    })
}
