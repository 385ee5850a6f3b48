//! Closed-form amplitudes, Wigner functions and the generalized Bargmann
//! representation. These are the reference values every numerical path is
//! checked against.
//!
//! Conventions: `μ = x_C + i k_C`, `λ = x_W + i k_W/β²`,
//! `w = √2(q - ip)`, `z = √2(βq - ip/β)`.

use std::collections::BTreeMap;
use std::f64::consts::{PI, SQRT_2};
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numgrid::quad::{inner_product, trapezoid_weights};
use crate::numgrid::special::{binomial, complex_erf, factorial, hermite_all, laguerre, ERF_IMAG_LIMIT};
use crate::numgrid::spectral::{spectral_derivative, Direction, ZoomDft};
use crate::numgrid::{Axis, PhaseSpaceField, Wavefunction1D};
use crate::windows::{WindowSpec, MAX_EXCITATION};

/// Relative Cauchy–Riemann residual below which a field counts as analytic.
pub const CAUCHY_RIEMANN_TOLERANCE: f64 = 1e-5;

/// `ln|E|` below which the Bargmann factor is treated as underflowed.
const LOG_UNDERFLOW: f64 = -700.0;

const I: C64 = C64 { re: 0.0, im: 1.0 };

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn check_beta(beta: f64) -> Result<()> {
    if beta.is_finite() && beta > 0.0 {
        Ok(())
    } else {
        Err(Error::Config(format!("beta must be positive and finite, got {beta}")))
    }
}

/// Whether an amplitude is square integrable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    Unit,
    /// Eigenstates of position or momentum; normalized to a delta function.
    DeltaNormalized,
}

/// What an [`AnalyticAmplitude`] describes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AmplitudeInfo {
    pub state: String,
    pub window: Option<WindowSpec>,
    pub parameters: BTreeMap<String, f64>,
}

impl AmplitudeInfo {
    fn new(state: &str, window: Option<WindowSpec>, params: &[(&str, f64)]) -> Self {
        AmplitudeInfo {
            state: state.to_string(),
            window,
            parameters: params.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
        }
    }
}

type Evaluator = dyn Fn(f64, f64) -> Result<C64> + Send + Sync;

/// Closed-form phase-space function `(q, p) ↦ C`.
#[derive(Clone)]
pub struct AnalyticAmplitude {
    eval: Arc<Evaluator>,
    info: AmplitudeInfo,
    normalization: Normalization,
}

impl fmt::Debug for AnalyticAmplitude {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AnalyticAmplitude")
            .field("info", &self.info)
            .field("normalization", &self.normalization)
            .finish()
    }
}

impl AnalyticAmplitude {
    pub fn new(
        info: AmplitudeInfo,
        normalization: Normalization,
        eval: impl Fn(f64, f64) -> Result<C64> + Send + Sync + 'static,
    ) -> Self {
        AnalyticAmplitude { eval: Arc::new(eval), info, normalization }
    }

    fn infallible(info: AmplitudeInfo, normalization: Normalization, f: impl Fn(f64, f64) -> C64 + Send + Sync + 'static) -> Self {
        Self::new(info, normalization, move |q, p| Ok(f(q, p)))
    }

    pub fn eval(&self, q: f64, p: f64) -> Result<C64> {
        (self.eval)(q, p)
    }

    pub fn info(&self) -> &AmplitudeInfo {
        &self.info
    }

    pub fn normalization(&self) -> Normalization {
        self.normalization
    }

    pub fn is_normalizable(&self) -> bool {
        self.normalization == Normalization::Unit
    }

    /// Values on the grid `q_axis × p_axis`.
    pub fn sample(&self, q_axis: &Axis, p_axis: &Axis) -> Result<PhaseSpaceField> {
        let np = p_axis.len();
        let rows: Vec<Result<Vec<C64>>> = (0..q_axis.len())
            .into_par_iter()
            .map(|iq| {
                let q = q_axis.point(iq);
                (0..np).map(|ip| self.eval(q, p_axis.point(ip))).collect()
            })
            .collect();
        let mut values = Vec::with_capacity(q_axis.len() * np);
        for row in rows {
            values.extend(row?);
        }
        PhaseSpaceField::new(*q_axis, *p_axis, values)
    }
}

// ---------------------------------------------------------------------------
// Coherent states

/// Coherent-state amplitude for a Gaussian window `(β, λ)`; the constant
/// phase is chosen so the value at the centre `(η, ζ)` is real positive.
pub fn coherent_amplitude(mu: C64, beta: f64, lambda: C64) -> Result<AnalyticAmplitude> {
    check_beta(beta)?;
    let b2 = beta * beta;
    let lb = lambda.conj();
    let (x_w, k_w) = (lambda.re, lambda.im * b2);
    let (eta, zeta) = ((x_w + mu.re) / 2.0, (k_w + mu.im) / 2.0);
    let exponent = move |q: f64, p: f64| -> C64 {
        -2.0 * (b2 * q * q + p * p + I * (b2 - 1.0) * q * p - b2 * (lb + mu) * q - I * (b2 * lb - mu) * p) / (b2 + 1.0)
    };
    let centre = exponent(eta, zeta);
    let amp = (4.0 * beta / (PI * (b2 + 1.0))).sqrt();
    let info = AmplitudeInfo::new(
        "coherent",
        Some(WindowSpec::gaussian_at(beta, lambda)),
        &[("mu_re", mu.re), ("mu_im", mu.im), ("beta", beta), ("lambda_re", lambda.re), ("lambda_im", lambda.im)],
    );
    Ok(AnalyticAmplitude::infallible(info, Normalization::Unit, move |q, p| amp * (exponent(q, p) - centre).exp()))
}

/// `ψ_μ(x) = π^{-1/4} exp(-(x-x_C)²/2 + i k_C (x - x_C/2))`.
pub fn coherent_psi(mu: C64, x: f64) -> C64 {
    let y = x - mu.re;
    C64::from_polar(PI.powf(-0.25) * (-y * y / 2.0).exp(), mu.im * (x - mu.re / 2.0))
}

pub fn coherent_wavefunction(mu: C64, axis: &Axis) -> Result<Wavefunction1D> {
    Wavefunction1D::from_fn(*axis, |x| coherent_psi(mu, x))
}

/// `(1/π) exp(-(q-x_C)² - (p-k_C)²)`.
pub fn coherent_wigner(mu: C64) -> AnalyticAmplitude {
    let info = AmplitudeInfo::new("coherent_wigner", None, &[("mu_re", mu.re), ("mu_im", mu.im)]);
    AnalyticAmplitude::infallible(info, Normalization::Unit, move |q, p| {
        let (dq, dp) = (q - mu.re, p - mu.im);
        c((-dq * dq - dp * dp).exp() / PI, 0.0)
    })
}

/// Amplitude of the coherent state `μ` for the first excited Gaussian window:
/// `√2β[(2q-x_W-x_C) + i(2p-k_W-k_C)] Ψ_μ / (β²+1)`.
pub fn mexican_hat_coherent(mu: C64, beta: f64, lambda: C64) -> Result<AnalyticAmplitude> {
    let base = coherent_amplitude(mu, beta, lambda)?;
    let b2 = beta * beta;
    let (x_w, k_w) = (lambda.re, lambda.im * b2);
    let info = AmplitudeInfo::new(
        "mexican_hat_coherent",
        Some(WindowSpec::OscillatorExcited { n: 1, beta, x_w, k_w }),
        &[("mu_re", mu.re), ("mu_im", mu.im), ("beta", beta), ("lambda_re", lambda.re), ("lambda_im", lambda.im)],
    );
    Ok(AnalyticAmplitude::new(info, Normalization::Unit, move |q, p| {
        let lin = c(2.0 * q - x_w - mu.re, 2.0 * p - k_w - mu.im);
        Ok(SQRT_2 * beta * lin * base.eval(q, p)? / (b2 + 1.0))
    }))
}

// ---------------------------------------------------------------------------
// Test state

/// The two-term test state `N₀(e^{-(x-1)²/2} + 4ix e^{-x²})`.
#[derive(Debug, Clone, Copy, Default)]
pub struct TestState;

pub fn test_state() -> TestState {
    TestState
}

impl TestState {
    fn n0() -> f64 {
        1.0 / (PI.sqrt() * (1.0 + 2.0 * SQRT_2)).sqrt()
    }

    pub fn psi(&self, x: f64) -> C64 {
        let n0 = Self::n0();
        c(n0 * (-(x - 1.0) * (x - 1.0) / 2.0).exp(), n0 * 4.0 * x * (-x * x).exp())
    }

    pub fn wavefunction(&self, axis: &Axis) -> Result<Wavefunction1D> {
        Wavefunction1D::from_fn(*axis, |x| self.psi(x))
    }

    /// `⟨q̂⟩ = 1/(1+2√2)`.
    pub fn mean_position(&self) -> f64 {
        1.0 / (1.0 + 2.0 * SQRT_2)
    }

    /// `⟨p̂⟩ = 8√2 / (9 e^{1/3} √3 (1+2√2))`.
    pub fn mean_momentum(&self) -> f64 {
        8.0 * SQRT_2 / (9.0 * (1.0f64 / 3.0).exp() * 3f64.sqrt() * (1.0 + 2.0 * SQRT_2))
    }

    /// Window centred on the state's mean position and momentum.
    pub fn matched_window(&self, beta: f64) -> WindowSpec {
        WindowSpec::Gaussian { beta, x_w: self.mean_position(), k_w: self.mean_momentum() }
    }

    pub fn wigner(&self) -> AnalyticAmplitude {
        let info = AmplitudeInfo::new("test_wigner", None, &[]);
        AnalyticAmplitude::infallible(info, Normalization::Unit, |q, p| {
            let s2 = SQRT_2;
            let arg = 2.0 * p * (q + 1.0) / 3.0;
            let w = (-(q - 1.0) * (q - 1.0) - p * p).exp()
                + 2.0 * s2 * (4.0 * q * q + p * p - 1.0) * (-2.0 * q * q - p * p / 2.0).exp()
                - 8.0 * s2 / (3.0 * 3f64.sqrt())
                    * ((2.0 * q - 1.0) * arg.sin() - 2.0 * p * arg.cos())
                    * (-(4.0 * q * q - 4.0 * q + 2.0 * p * p + 1.0) / 3.0).exp();
            c(w / (PI * (1.0 + 2.0 * s2)), 0.0)
        })
    }

    /// Amplitude for the Gaussian window `β` centred on the state's means.
    pub fn amplitude(&self, beta: f64) -> Result<AnalyticAmplitude> {
        let lambda = c(self.mean_position(), self.mean_momentum() / (beta * beta));
        self.amplitude_at(beta, lambda)
    }

    /// Amplitude for an arbitrary Gaussian window `(β, λ)`.
    pub fn amplitude_at(&self, beta: f64, lambda: C64) -> Result<AnalyticAmplitude> {
        check_beta(beta)?;
        let b2 = beta * beta;
        let lb = lambda.conj();
        let pre = (2.0 / PI).sqrt() * Self::n0() * (b2 / PI).powf(0.25) * (b2 * lb * (lb - lambda) / 4.0).exp();
        let a = 1.0 + b2 / 2.0;
        let info = AmplitudeInfo::new(
            "test",
            Some(WindowSpec::gaussian_at(beta, lambda)),
            &[("beta", beta), ("lambda_re", lambda.re), ("lambda_im", lambda.im)],
        );
        Ok(AnalyticAmplitude::infallible(info, Normalization::Unit, move |q, p| {
            let cc = 2.0 * q - lb;
            let tail = -b2 * cc * cc / 2.0 + 2.0 * I * p * q;
            let b1 = 1.0 + b2 * cc - 2.0 * I * p;
            let t1 = (2.0 * PI / (1.0 + b2)).sqrt() * (b1 * b1 / (2.0 * (1.0 + b2)) - 0.5 + tail).exp();
            let b2c = b2 * cc - 2.0 * I * p;
            let t2 = 4.0 * I * (b2c / (2.0 * a)) * (PI / a).sqrt() * (b2c * b2c / (4.0 * a) + tail).exp();
            pre * (t1 + t2)
        }))
    }
}

// ---------------------------------------------------------------------------
// Eigenstates of position and momentum

/// `√(2/π) conj(φ̃₀(2p-k₀)) e^{-2i(p-k₀)q}`.
pub fn momentum_eigenamplitude(k0: f64, window: &WindowSpec) -> Result<AnalyticAmplitude> {
    window.validate()?;
    let w = window.clone();
    let info = AmplitudeInfo::new("momentum_eigenstate", Some(window.clone()), &[("k0", k0)]);
    let s = (2.0 / PI).sqrt();
    Ok(AnalyticAmplitude::infallible(info, Normalization::DeltaNormalized, move |q, p| {
        s * w.eval_momentum(2.0 * p - k0).conj() * C64::from_polar(1.0, -2.0 * (p - k0) * q)
    }))
}

/// `√(2/π) conj(φ₀(2q-x₀)) e^{2ip(q-x₀)}`.
pub fn position_eigenamplitude(x0: f64, window: &WindowSpec) -> Result<AnalyticAmplitude> {
    window.validate()?;
    let w = window.clone();
    let info = AmplitudeInfo::new("position_eigenstate", Some(window.clone()), &[("x0", x0)]);
    let s = (2.0 / PI).sqrt();
    Ok(AnalyticAmplitude::infallible(info, Normalization::DeltaNormalized, move |q, p| {
        s * w.eval(2.0 * q - x0).conj() * C64::from_polar(1.0, 2.0 * p * (q - x0))
    }))
}

// ---------------------------------------------------------------------------
// Oscillator eigenstates

/// Derivatives `d^m/dz^m erf(z)` for `m = 0..=n`.
fn erf_derivatives(n: usize, z: C64) -> Result<Vec<C64>> {
    let mut out = vec![complex_erf(z)?];
    if n > 0 {
        let h = hermite_all(n - 1, z);
        let g = 2.0 / PI.sqrt() * (-z * z).exp();
        for m in 1..=n {
            let sign = if (m - 1) % 2 == 0 { 1.0 } else { -1.0 };
            out.push(sign * h[m - 1] * g);
        }
    }
    Ok(out)
}

/// Coefficients of `P_j` with `d^j e^{ζ²/2} = P_j(ζ) e^{ζ²/2}`, `j = 0..=n`.
fn gaussian_growth_polys(n: usize) -> Vec<Vec<f64>> {
    let mut polys = vec![vec![1.0]];
    for j in 0..n {
        let prev = &polys[j];
        let mut next = vec![0.0; prev.len() + 1];
        for (k, a) in prev.iter().enumerate() {
            next[k + 1] += a;
            if k > 0 {
                next[k - 1] += k as f64 * a;
            }
        }
        polys.push(next);
    }
    polys
}

fn poly_eval(coeffs: &[f64], z: C64) -> C64 {
    coeffs.iter().rev().fold(c(0.0, 0.0), |acc, a| acc * z + a)
}

/// `e^{-ζ²/2} F^{(k)}(ζ)`, `k = 0..=n`, for the square window of half-width `a`,
/// where `F(ζ) = e^{ζ²/2}[erf(α-ζ) + erf(α+ζ)] / (π^{1/4}√(2a))`, `α = a/√2`.
fn square_f_scaled(n: usize, a: f64, zeta: C64) -> Result<Vec<C64>> {
    let alpha = a / SQRT_2;
    let plus = erf_derivatives(n, alpha + zeta)?;
    let minus = erf_derivatives(n, alpha - zeta)?;
    let s: Vec<C64> = (0..=n).map(|m| plus[m] + if m % 2 == 0 { minus[m] } else { -minus[m] }).collect();
    let polys = gaussian_growth_polys(n);
    let p: Vec<C64> = polys.iter().map(|cf| poly_eval(cf, zeta)).collect();
    let norm = 1.0 / (PI.powf(0.25) * (2.0 * a).sqrt());
    Ok((0..=n)
        .map(|k| norm * (0..=k).map(|j| binomial(k, j) * p[j] * s[k - j]).sum::<C64>())
        .collect())
}

/// Oscillator eigenstate `n` for the standard Gaussian window or a square window:
/// `Ψ_n = (n!)^{-1/2} Σ_m C(n,m) (-1)^{n-m} w^m F^{(n-m)}(w̄) e^{-w̄w/2}`.
pub fn oscillator_amplitude(n: usize, window: &WindowSpec) -> Result<AnalyticAmplitude> {
    window.validate()?;
    if n > MAX_EXCITATION {
        return Err(Error::Domain(format!("oscillator level {n} exceeds {MAX_EXCITATION}")));
    }
    let info = AmplitudeInfo::new("oscillator", Some(window.clone()), &[("n", n as f64)]);
    let norm = 1.0 / factorial(n).sqrt();
    match *window {
        WindowSpec::Gaussian { beta, x_w, k_w } if beta == 1.0 && x_w == 0.0 && k_w == 0.0 => {
            let s = (2.0 / PI).sqrt() * norm;
            Ok(AnalyticAmplitude::infallible(info, Normalization::Unit, move |q, p| {
                let w = c(SQRT_2 * q, -SQRT_2 * p);
                s * w.powu(n as u32) * (-w.norm_sqr() / 2.0).exp()
            }))
        }
        WindowSpec::Square { a } => Ok(AnalyticAmplitude::new(info, Normalization::Unit, move |q, p| {
            let w = c(SQRT_2 * q, -SQRT_2 * p);
            let wb = w.conj();
            if (SQRT_2 * p).abs() > ERF_IMAG_LIMIT {
                return Err(Error::Domain(format!("momentum {p} beyond the square-window evaluation range")));
            }
            let f = square_f_scaled(n, a, wb)?;
            let sum: C64 = (0..=n)
                .map(|m| {
                    let sign = if (n - m).is_multiple_of(2) { 1.0 } else { -1.0 };
                    sign * binomial(n, m) * w.powu(m as u32) * f[n - m]
                })
                .sum();
            Ok(norm * sum * (wb * wb / 2.0 - w.norm_sqr() / 2.0).exp())
        })),
        _ => Err(Error::NotImplemented(
            "closed-form oscillator amplitudes need the standard Gaussian or a square window; use the numerical transform".into(),
        )),
    }
}

/// `W_n = ((-1)^n/π) e^{-(q²+p²)} L_n(2(q²+p²))`.
pub fn sho_wigner(n: usize) -> AnalyticAmplitude {
    let info = AmplitudeInfo::new("oscillator_wigner", None, &[("n", n as f64)]);
    let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    AnalyticAmplitude::infallible(info, Normalization::Unit, move |q, p| {
        let r2 = q * q + p * p;
        c(sign / PI * (-r2).exp() * laguerre(n, 0.0, 2.0 * r2), 0.0)
    })
}

// ---------------------------------------------------------------------------
// Free particle

/// `g(t) = (1 + iγ²t)^{1/2}`, principal branch (continuous for `t ≥ 0`).
pub fn spreading_factor(t: f64, gamma: f64) -> C64 {
    c(1.0, gamma * gamma * t).sqrt()
}

/// `ψ(x,t) = √γ π^{-1/4} e^{-γ²x²/(2g²)} / g`.
pub fn free_particle_psi(t: f64, gamma: f64, x: f64) -> C64 {
    let g = spreading_factor(t, gamma);
    gamma.sqrt() * PI.powf(-0.25) * (-gamma * gamma * x * x / (2.0 * g * g)).exp() / g
}

pub fn free_particle_wavefunction(t: f64, gamma: f64, axis: &Axis) -> Result<Wavefunction1D> {
    Wavefunction1D::from_fn(*axis, |x| free_particle_psi(t, gamma, x))
}

/// Amplitude of the spreading free Gaussian for the window `(β, λ)`.
pub fn free_particle_amplitude(t: f64, gamma: f64, beta: f64, lambda: C64) -> Result<AnalyticAmplitude> {
    check_beta(beta)?;
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::Config(format!("time must be non-negative, got {t}")));
    }
    if !(gamma.is_finite() && gamma > 0.0) {
        return Err(Error::Config(format!("gamma must be positive, got {gamma}")));
    }
    let b2 = beta * beta;
    let g2 = c(1.0, gamma * gamma * t);
    let lb = lambda.conj();
    let gg = gamma * gamma;
    let d = b2 * g2 + gg;
    let pre = (4.0 * beta * gamma / (PI * d)).sqrt()
        * (b2 * lb * (lb - lambda) / 4.0).exp()
        * (-b2 * lb * lb * gg / (2.0 * d)).exp();
    let info = AmplitudeInfo::new(
        "free_particle",
        Some(WindowSpec::gaussian_at(beta, lambda)),
        &[("t", t), ("gamma", gamma), ("beta", beta), ("lambda_re", lambda.re), ("lambda_im", lambda.im)],
    );
    Ok(AnalyticAmplitude::infallible(info, Normalization::Unit, move |q, p| {
        let e = b2 * gg * q * q + p * p * g2 + I * (b2 * g2 - gg) * q * p - b2 * gg * lb * q - I * b2 * lb * p * g2;
        pre * (-2.0 * e / d).exp()
    }))
}

// ---------------------------------------------------------------------------
// Bargmann representation

/// Operators represented on Bargmann functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BargmannOperator {
    Position,
    Momentum,
    Creation,
    Annihilation,
}

/// `z = √2(βq - ip/β)`.
pub fn bargmann_variable(beta: f64, q: f64, p: f64) -> C64 {
    c(SQRT_2 * beta * q, -SQRT_2 * p / beta)
}

/// `ln E` with `E = √(2/π) exp(-z̄z/2 + β(z+z̄)λ̄/√2)`, so that `Ψ = E·G`.
fn log_factor(beta: f64, lambda: C64, q: f64, p: f64) -> C64 {
    let z = bargmann_variable(beta, q, p);
    0.5 * (2.0 / PI).ln() - z.norm_sqr() / 2.0 + beta * 2.0 * z.re * lambda.conj() / SQRT_2
}

fn factor_field(beta: f64, lambda: C64, q_axis: &Axis, p_axis: &Axis) -> Result<PhaseSpaceField> {
    let mut worst = f64::INFINITY;
    for &q in &[q_axis.min(), q_axis.max()] {
        for &p in &[p_axis.min(), p_axis.max()] {
            worst = worst.min(log_factor(beta, lambda, q, p).re);
        }
    }
    if worst < LOG_UNDERFLOW {
        return Err(Error::Domain(format!(
            "grid reaches |z| where the Bargmann weight underflows (ln|E| = {worst:.1})"
        )));
    }
    PhaseSpaceField::from_fn(*q_axis, *p_axis, |q, p| log_factor(beta, lambda, q, p).exp())
}

/// Bargmann function by direct quadrature:
/// `G(z) = (β²/π)^{1/4} e^{β²λ̄(λ̄-λ)/4} ∫ exp(-(z² + β²(u+λ̄)² - 2√2βzu)/2) ψ(u) du`.
///
/// The oscillating integral cancels to `O(e^{-p²/β²})`, so absolute accuracy
/// degrades like `ε·e^{p²/β²}` away from the real `z` axis.
pub fn bargmann_transform(psi: &Wavefunction1D, beta: f64, lambda: C64, q_axis: &Axis, p_axis: &Axis) -> Result<PhaseSpaceField> {
    check_beta(beta)?;
    let x = psi.axis();
    let b2 = beta * beta;
    let lb = lambda.conj();
    let pre = (b2 / PI).powf(0.25) * (b2 * lb * (lb - lambda) / 4.0).exp();
    let wx = trapezoid_weights(x);
    let np = p_axis.len();
    let zoom = ZoomDft::new(x.len(), x.min(), x.spacing(), np, 2.0 * p_axis.min(), 2.0 * p_axis.spacing(), -1.0);
    let mut values = vec![c(0.0, 0.0); q_axis.len() * np];
    values.par_chunks_mut(np).enumerate().for_each(|(iq, row)| {
        let q = q_axis.point(iq);
        // log of each quadrature term without the e^{-2ipu} phase
        let logs: Vec<Option<C64>> = x
            .points()
            .zip(psi.values())
            .zip(&wx)
            .map(|((u, v), w)| {
                let m = v.norm() * w;
                (m > 0.0).then(|| {
                    let s = u + lb;
                    -b2 * s * s / 2.0 + 2.0 * b2 * q * u + m.ln() + c(0.0, v.arg())
                })
            })
            .collect();
        let shift = logs.iter().flatten().map(|l| l.re).fold(f64::NEG_INFINITY, f64::max);
        if !shift.is_finite() {
            return;
        }
        let f: Vec<C64> = logs.iter().map(|l| l.map_or(c(0.0, 0.0), |l| (l - shift).exp())).collect();
        let out = zoom.apply(&f);
        for (k, (r, o)) in row.iter_mut().zip(out).enumerate() {
            let z = bargmann_variable(beta, q, p_axis.point(k));
            *r = pre * o * (-z * z / 2.0 + shift).exp();
        }
    });
    PhaseSpaceField::new(*q_axis, *p_axis, values).map_err(|_| {
        Error::Domain("Bargmann function overflows on this grid; reduce |z| range".into())
    })
}

/// `G = Ψ / E` for an amplitude computed with the Gaussian window `(β, λ)`.
pub fn bargmann_from_amplitude(psi_field: &PhaseSpaceField, beta: f64, lambda: C64) -> Result<PhaseSpaceField> {
    check_beta(beta)?;
    let e = factor_field(beta, lambda, psi_field.q_axis(), psi_field.p_axis())?;
    let values = psi_field.values().iter().zip(e.values()).map(|(v, e)| v / e).collect();
    PhaseSpaceField::new(*psi_field.q_axis(), *psi_field.p_axis(), values)
        .map_err(|_| Error::Domain("Bargmann function overflows on this grid".into()))
}

/// `Ψ = E·G`.
pub fn amplitude_from_bargmann(g: &PhaseSpaceField, beta: f64, lambda: C64) -> Result<PhaseSpaceField> {
    check_beta(beta)?;
    let e = factor_field(beta, lambda, g.q_axis(), g.p_axis())?;
    g.mul(&e)
}

/// Weighted product `(2/π) ∫ conj(G₁) G₂ e^{-z̄z + β(λ+λ̄)(z+z̄)/√2} dq dp`.
pub fn bargmann_inner(g1: &PhaseSpaceField, g2: &PhaseSpaceField, beta: f64, lambda: C64) -> Result<C64> {
    inner_product(&amplitude_from_bargmann(g1, beta, lambda)?, &amplitude_from_bargmann(g2, beta, lambda)?)
}

/// `∂_z` and `∂_z̄` of an amplitude-domain field.
fn complex_derivatives(f: &PhaseSpaceField, beta: f64) -> Result<(PhaseSpaceField, PhaseSpaceField)> {
    let dq = spectral_derivative(f, Direction::Q, 1).value;
    let dp = spectral_derivative(f, Direction::P, 1).value;
    let a = c(0.5 / (SQRT_2 * beta), 0.0);
    let b = c(0.0, 0.5 * beta / SQRT_2);
    Ok((dq.combine(a, &dp, b)?, dq.combine(a, &dp, -b)?))
}

/// `E ∂_z G` and `E ∂_z̄ G` computed from `Ψ = E G`.
fn covariant_derivatives(psi: &PhaseSpaceField, beta: f64, lambda: C64) -> Result<(PhaseSpaceField, PhaseSpaceField)> {
    let (dz, dzb) = complex_derivatives(psi, beta)?;
    let shift = beta * lambda.conj() / SQRT_2;
    let with_coords = |d: &PhaseSpaceField, conj_z: bool| -> Result<PhaseSpaceField> {
        let zf = PhaseSpaceField::from_fn(*psi.q_axis(), *psi.p_axis(), |q, p| {
            let z = bargmann_variable(beta, q, p);
            let zz = if conj_z { z.conj() } else { z };
            zz / 2.0 - shift
        })?;
        d.add(&zf.mul(psi)?)
    };
    Ok((with_coords(&dz, true)?, with_coords(&dzb, false)?))
}

/// `‖∂_z̄ G‖ / ‖G‖` in the weighted norm.
pub fn cauchy_riemann_residual(g: &PhaseSpaceField, beta: f64, lambda: C64) -> Result<f64> {
    let psi = amplitude_from_bargmann(g, beta, lambda)?;
    let norm = psi.norm_l2();
    if norm == 0.0 {
        return Ok(0.0);
    }
    let (_, dzb) = covariant_derivatives(&psi, beta, lambda)?;
    Ok(dzb.norm_l2() / norm)
}

/// Applies a first-order differential representation, with
/// `σ = (β²+1)/2β`, `τ = (β²-1)/2β`:
/// creation `σz - τ∂_z - β²λ̄/√2`, annihilation `σ∂_z - τz + β²λ̄/√2`,
/// position `(z + ∂_z)/(β√2)`, momentum `iβ(z - ∂_z)/√2 - iβ²λ̄`.
pub fn bargmann_operator(kind: BargmannOperator, g: &PhaseSpaceField, beta: f64, lambda: C64) -> Result<PhaseSpaceField> {
    let psi = amplitude_from_bargmann(g, beta, lambda)?;
    let norm = psi.norm_l2();
    let (dz, dzb) = covariant_derivatives(&psi, beta, lambda)?;
    if norm > 0.0 {
        let residual = dzb.norm_l2() / norm;
        if residual > CAUCHY_RIEMANN_TOLERANCE {
            return Err(Error::Precondition(format!("input is not analytic in z (Cauchy-Riemann residual {residual:.3e})")));
        }
    }
    let b2 = beta * beta;
    let sigma = (b2 + 1.0) / (2.0 * beta);
    let tau = (b2 - 1.0) / (2.0 * beta);
    let lb = lambda.conj();
    let zpsi = psi.map_with_coords(|q, p, v| bargmann_variable(beta, q, p) * v);
    let out = match kind {
        BargmannOperator::Creation => zpsi.combine(c(sigma, 0.0), &dz, c(-tau, 0.0))?.combine(c(1.0, 0.0), &psi, -b2 * lb / SQRT_2)?,
        BargmannOperator::Annihilation => dz.combine(c(sigma, 0.0), &zpsi, c(-tau, 0.0))?.combine(c(1.0, 0.0), &psi, b2 * lb / SQRT_2)?,
        BargmannOperator::Position => {
            let s = c(1.0 / (beta * SQRT_2), 0.0);
            zpsi.combine(s, &dz, s)?
        }
        BargmannOperator::Momentum => {
            let s = I * beta / SQRT_2;
            zpsi.combine(s, &dz, -s)?.combine(c(1.0, 0.0), &psi, -I * b2 * lb)?
        }
    };
    bargmann_from_amplitude(&out, beta, lambda)
}
