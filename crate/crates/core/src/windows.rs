//! Window states φ₀ in coordinate and momentum representation.
//!
//! Fourier convention: `φ̃(k) = (2π)^{-1/2} ∫ φ(x) e^{-ikx} dx`.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numgrid::special::{factorial, hermite_all};
use crate::numgrid::spectral::{TrigInterpolant, ZoomDft};
use crate::numgrid::{Axis, Wavefunction1D};

/// Largest excitation order accepted for oscillator windows.
pub const MAX_EXCITATION: usize = 12;

/// Tail mass allowed outside the sampling axis for smooth windows.
pub const SAMPLE_TAIL_TOLERANCE: f64 = 1e-12;

/// Tail mass allowed for excited windows.
pub const EXCITED_TAIL_TOLERANCE: f64 = 1e-10;

/// Description of a window state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WindowSpec {
    /// `(β²/π)^{1/4} exp(-β²(x-x_W)²/2 + i k_W (x - x_W/2))`.
    Gaussian { beta: f64, x_w: f64, k_w: f64 },
    /// `1/√(2a)` on `|x| < a`, half that at `|x| = a`.
    Square { a: f64 },
    /// `n`-th oscillator excitation built on the Gaussian with the same parameters.
    OscillatorExcited { n: usize, beta: f64, x_w: f64, k_w: f64 },
    /// Arbitrary sampled window, interpolated band-limitedly and zero outside its axis.
    Custom { samples: Wavefunction1D },
}

impl Default for WindowSpec {
    fn default() -> Self {
        WindowSpec::standard()
    }
}

impl WindowSpec {
    /// Gaussian window with β = 1 centred at the origin.
    pub fn standard() -> Self {
        WindowSpec::Gaussian { beta: 1.0, x_w: 0.0, k_w: 0.0 }
    }

    /// Gaussian window with centre `λ = x_W + i k_W/β²`.
    pub fn gaussian_at(beta: f64, lambda: C64) -> Self {
        WindowSpec::Gaussian { beta, x_w: lambda.re, k_w: lambda.im * beta * beta }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::Config(format!("{name} must be positive and finite, got {v}")))
            }
        };
        let finite = |name: &str, v: f64| {
            if v.is_finite() {
                Ok(())
            } else {
                Err(Error::Config(format!("{name} must be finite, got {v}")))
            }
        };
        match self {
            WindowSpec::Gaussian { beta, x_w, k_w } => {
                positive("beta", *beta)?;
                finite("x_w", *x_w)?;
                finite("k_w", *k_w)
            }
            WindowSpec::Square { a } => positive("a", *a),
            WindowSpec::OscillatorExcited { n, beta, x_w, k_w } => {
                if *n > MAX_EXCITATION {
                    return Err(Error::Config(format!("excitation {n} exceeds {MAX_EXCITATION}")));
                }
                positive("beta", *beta)?;
                finite("x_w", *x_w)?;
                finite("k_w", *k_w)
            }
            WindowSpec::Custom { samples } => {
                if samples.norm_sq() == 0.0 {
                    Err(Error::Config("custom window is identically zero".into()))
                } else {
                    Ok(())
                }
            }
        }
    }

    /// Gaussian parameters `(β, x_W, k_W)` for Gaussian-based windows.
    pub fn gaussian_params(&self) -> Option<(f64, f64, f64)> {
        match *self {
            WindowSpec::Gaussian { beta, x_w, k_w } | WindowSpec::OscillatorExcited { beta, x_w, k_w, .. } => {
                Some((beta, x_w, k_w))
            }
            _ => None,
        }
    }

    /// `λ = x_W + i k_W/β²` for Gaussian-based windows.
    pub fn lambda(&self) -> Option<C64> {
        self.gaussian_params().map(|(b, x, k)| C64::new(x, k / (b * b)))
    }

    /// True when `φ₀(-x) = φ₀(x)` holds exactly.
    pub fn is_even(&self) -> bool {
        match *self {
            WindowSpec::Gaussian { x_w, k_w, .. } => x_w == 0.0 && k_w == 0.0,
            WindowSpec::OscillatorExcited { n, x_w, k_w, .. } => n % 2 == 0 && x_w == 0.0 && k_w == 0.0,
            WindowSpec::Square { .. } => true,
            WindowSpec::Custom { .. } => false,
        }
    }

    /// Interval outside which the window carries negligible (< 1e-16) mass.
    pub fn support(&self) -> (f64, f64) {
        match self {
            WindowSpec::Gaussian { beta, x_w, .. } => (x_w - 9.0 / beta, x_w + 9.0 / beta),
            WindowSpec::OscillatorExcited { n, beta, x_w, .. } => {
                let r = ((2 * n + 1) as f64).sqrt() + 9.0;
                (x_w - r / beta, x_w + r / beta)
            }
            WindowSpec::Square { a } => (-a, *a),
            WindowSpec::Custom { samples } => (samples.axis().min(), samples.axis().max()),
        }
    }

    /// Prepared evaluator; cheap for analytic windows, builds an interpolant
    /// for sampled ones.
    pub fn evaluator(&self) -> WindowEval<'_> {
        let interp = match self {
            WindowSpec::Custom { samples } => Some(TrigInterpolant::from_wavefunction(samples)),
            _ => None,
        };
        WindowEval { spec: self, interp }
    }

    /// `φ₀(x)`.
    pub fn eval(&self, x: f64) -> C64 {
        self.evaluator().eval(x)
    }

    /// `φ̃₀(k)`.
    pub fn eval_momentum(&self, k: f64) -> C64 {
        match *self {
            WindowSpec::Gaussian { beta, x_w, k_w } => gaussian_momentum(beta, x_w, k_w, k),
            WindowSpec::OscillatorExcited { n, beta, x_w, k_w } => {
                let s = (k - k_w) / beta;
                let h = hermite_all(n, C64::new(s, 0.0))[n];
                let norm = (2f64.powi(n as i32) * factorial(n)).sqrt();
                C64::new(0.0, -1.0).powu(n as u32) * h / norm * gaussian_momentum(beta, x_w, k_w, k)
            }
            WindowSpec::Square { a } => {
                let c = 1.0 / (2.0 * PI * 2.0 * a).sqrt();
                let s = if k == 0.0 { 2.0 * a } else { 2.0 * (k * a).sin() / k };
                C64::new(c * s, 0.0)
            }
            WindowSpec::Custom { ref samples } => {
                let ax = samples.axis();
                let w = crate::numgrid::quad::trapezoid_weights(ax);
                let f: Vec<C64> = samples.values().iter().zip(&w).map(|(v, w)| v * w).collect();
                let z = ZoomDft::new(ax.len(), ax.min(), ax.spacing(), 1, k, 1.0, -1.0);
                z.apply(&f)[0] / (2.0 * PI).sqrt()
            }
        }
    }

    /// Mass of `|φ₀|²` outside `[lo, hi]`.
    pub fn tail_mass(&self, lo: f64, hi: f64) -> f64 {
        match self {
            WindowSpec::Square { a } => {
                let inside = (hi.min(*a) - lo.max(-a)).max(0.0);
                1.0 - inside / (2.0 * a)
            }
            WindowSpec::Custom { samples } => {
                let ax = samples.axis();
                let total = samples.norm_sq();
                let outside: f64 = ax
                    .points()
                    .zip(samples.values())
                    .filter(|(x, _)| *x < lo || *x > hi)
                    .map(|(_, v)| v.norm_sqr() * ax.spacing())
                    .sum();
                outside / total
            }
            _ => {
                let (s_lo, s_hi) = self.support();
                let ev = self.evaluator();
                let side = |a: f64, b: f64| {
                    if b <= a {
                        return 0.0;
                    }
                    let n = 4000;
                    let h = (b - a) / n as f64;
                    (0..=n)
                        .map(|i| {
                            let w = if i == 0 || i == n { 0.5 } else { 1.0 };
                            w * ev.eval(a + i as f64 * h).norm_sqr()
                        })
                        .sum::<f64>()
                        * h
                };
                side(s_lo.min(lo), lo) + side(hi, s_hi.max(hi))
            }
        }
    }
}

fn gaussian_coordinate(beta: f64, x_w: f64, k_w: f64, x: f64) -> C64 {
    let y = x - x_w;
    let amp = (beta * beta / PI).powf(0.25) * (-beta * beta * y * y / 2.0).exp();
    C64::from_polar(amp, k_w * (x - x_w / 2.0))
}

fn gaussian_momentum(beta: f64, x_w: f64, k_w: f64, k: f64) -> C64 {
    let d = k - k_w;
    let amp = (PI * beta * beta).powf(-0.25) * (-d * d / (2.0 * beta * beta)).exp();
    C64::from_polar(amp, x_w * (k_w / 2.0 - k))
}

/// Point evaluator for a window; see [`WindowSpec::evaluator`].
pub struct WindowEval<'a> {
    spec: &'a WindowSpec,
    interp: Option<TrigInterpolant>,
}

impl WindowEval<'_> {
    pub fn eval(&self, x: f64) -> C64 {
        match *self.spec {
            WindowSpec::Gaussian { beta, x_w, k_w } => gaussian_coordinate(beta, x_w, k_w, x),
            WindowSpec::OscillatorExcited { n, beta, x_w, k_w } => {
                let s = beta * (x - x_w);
                let h = hermite_all(n, C64::new(s, 0.0))[n];
                let norm = (2f64.powi(n as i32) * factorial(n)).sqrt();
                h / norm * gaussian_coordinate(beta, x_w, k_w, x)
            }
            WindowSpec::Square { a } => {
                let c = 1.0 / (2.0 * a).sqrt();
                let r = x.abs();
                if r < a {
                    C64::new(c, 0.0)
                } else if r == a {
                    C64::new(0.5 * c, 0.0)
                } else {
                    C64::new(0.0, 0.0)
                }
            }
            WindowSpec::Custom { ref samples } => {
                if samples.axis().contains(x) {
                    self.interp.as_ref().expect("custom window interpolant").eval(x)
                } else {
                    C64::new(0.0, 0.0)
                }
            }
        }
    }

    /// `φ₀(x0 + k·dx)` for `k = 0..count`.
    pub fn eval_uniform(&self, x0: f64, dx: f64, count: usize) -> Vec<C64> {
        match (&self.interp, self.spec) {
            (Some(t), WindowSpec::Custom { samples }) => {
                let mut v = t.eval_uniform(x0, dx, count);
                for (k, val) in v.iter_mut().enumerate() {
                    if !samples.axis().contains(x0 + k as f64 * dx) {
                        *val = C64::new(0.0, 0.0);
                    }
                }
                v
            }
            _ => (0..count).map(|k| self.eval(x0 + k as f64 * dx)).collect(),
        }
    }
}

fn check_tail(spec: &WindowSpec, axis: &Axis, tol: f64) -> Result<()> {
    let tail = spec.tail_mass(axis.min(), axis.max());
    if tail > tol {
        return Err(Error::Truncation(format!(
            "window mass {tail:.3e} lies outside [{}, {}]",
            axis.min(),
            axis.max()
        )));
    }
    Ok(())
}

/// Unit-norm samples of `φ₀` on `axis`.
///
/// Square and custom windows are rescaled to unit discrete norm, since the
/// jump (or resampling) spoils the continuous normalization at O(h).
pub fn sample_window(spec: &WindowSpec, axis: &Axis) -> Result<Wavefunction1D> {
    spec.validate()?;
    match spec {
        WindowSpec::Square { a } => {
            if axis.min() > -a || axis.max() < *a {
                return Err(Error::Truncation(format!("axis does not contain [-{a}, {a}]")));
            }
        }
        WindowSpec::OscillatorExcited { .. } => check_tail(spec, axis, EXCITED_TAIL_TOLERANCE)?,
        _ => check_tail(spec, axis, SAMPLE_TAIL_TOLERANCE)?,
    }
    let ev = spec.evaluator();
    let w = Wavefunction1D::new(*axis, ev.eval_uniform(axis.min(), axis.spacing(), axis.len()))?;
    match spec {
        WindowSpec::Square { .. } | WindowSpec::Custom { .. } => w.normalized(),
        _ => Ok(w),
    }
}

/// `φ̃₀(k)` sampled on `k_axis`; the window tail must fit the momentum axis.
pub fn window_momentum_rep(spec: &WindowSpec, k_axis: &Axis) -> Result<Wavefunction1D> {
    spec.validate()?;
    if let Some((beta, _, k_w)) = spec.gaussian_params() {
        let dual = match spec {
            WindowSpec::OscillatorExcited { n, .. } => {
                WindowSpec::OscillatorExcited { n: *n, beta: 1.0 / beta, x_w: k_w, k_w: 0.0 }
            }
            _ => WindowSpec::Gaussian { beta: 1.0 / beta, x_w: k_w, k_w: 0.0 },
        };
        check_tail(&dual, k_axis, SAMPLE_TAIL_TOLERANCE)?;
    }
    Wavefunction1D::from_fn(*k_axis, |k| spec.eval_momentum(k))
}

/// `n`-th oscillator excitation of a Gaussian window, i.e. `n` applications
/// of `[β(x - λ̄) - ∂ₓ/β]/√2` divided by `√n!`.
pub fn excited_window(base: &WindowSpec, n: usize, axis: &Axis) -> Result<Wavefunction1D> {
    let WindowSpec::Gaussian { beta, x_w, k_w } = *base else {
        return Err(Error::Precondition("excited windows require a Gaussian base".into()));
    };
    sample_window(&WindowSpec::OscillatorExcited { n, beta, x_w, k_w }, axis)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> Axis {
        Axis::new(-10.0, 10.0, 801).unwrap()
    }

    #[test]
    fn reference_values() {
        let g = WindowSpec::standard();
        assert!((g.eval(0.0).re - PI.powf(-0.25)).abs() < 1e-15);
        assert!((g.eval_momentum(0.0).re - PI.powf(-0.25)).abs() < 1e-15);
        let s = WindowSpec::Square { a: 1.0 };
        assert!((s.eval(0.0).re - 0.5f64.sqrt()).abs() < 1e-15);
        assert!((s.eval(1.0).re - 0.5 / 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(s.eval(1.5).re, 0.0);
    }

    #[test]
    fn every_variant_is_unit_norm() {
        let ax = grid();
        let custom = Wavefunction1D::from_fn(Axis::new(-6.0, 6.0, 97).unwrap(), |x| {
            C64::new(1.0, 0.3 * x) * (-x * x).exp()
        })
        .unwrap();
        let specs = [
            WindowSpec::Gaussian { beta: 1.3, x_w: 0.4, k_w: -1.0 },
            WindowSpec::Square { a: 1.0 },
            WindowSpec::OscillatorExcited { n: 5, beta: 0.9, x_w: -0.5, k_w: 2.0 },
            WindowSpec::Custom { samples: custom },
        ];
        for s in &specs {
            let w = sample_window(s, &ax).unwrap();
            assert!((w.norm_sq() - 1.0).abs() < 1e-10, "{s:?}: {}", w.norm_sq());
        }
    }

    #[test]
    fn gaussian_peaks_at_centre_in_both_representations() {
        let spec = WindowSpec::Gaussian { beta: 1.0, x_w: 1.5, k_w: 2.0 };
        let ax = Axis::new(-8.0, 8.0, 641).unwrap();
        let x = sample_window(&spec, &ax).unwrap();
        let k = window_momentum_rep(&spec, &ax).unwrap();
        let argmax = |w: &Wavefunction1D| {
            let i = (0..w.values().len())
                .max_by(|&i, &j| w.values()[i].norm().total_cmp(&w.values()[j].norm()))
                .unwrap();
            w.axis().point(i)
        };
        assert!((argmax(&x) - 1.5).abs() < 1e-12);
        assert!((argmax(&k) - 2.0).abs() < 1e-12);
        assert!((k.norm_sq() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn momentum_rep_matches_numerical_fourier_transform() {
        let ax = Axis::new(-12.0, 12.0, 961).unwrap();
        for spec in [
            WindowSpec::Gaussian { beta: 0.8, x_w: 0.7, k_w: -1.2 },
            WindowSpec::OscillatorExcited { n: 3, beta: 1.4, x_w: -0.3, k_w: 0.5 },
        ] {
            let samples = sample_window(&spec, &ax).unwrap();
            let custom = WindowSpec::Custom { samples };
            for &k in &[-2.0, -0.4, 0.0, 1.1] {
                let d = (spec.eval_momentum(k) - custom.eval_momentum(k)).norm();
                assert!(d < 1e-12, "{spec:?} at k={k}: {d:e}");
            }
        }
    }

    #[test]
    fn square_momentum_rep_parseval() {
        let spec = WindowSpec::Square { a: 1.0 };
        let h = 0.01;
        let s: f64 = (-200_000..=200_000).map(|i| spec.eval_momentum(i as f64 * h).norm_sqr() * h).sum();
        // Mass beyond |k| = K averages to 1/(πaK).
        let tail = 1.0 / (PI * 2000.0);
        assert!((s + tail - 1.0).abs() < 1e-6, "{}", s + tail);
    }

    #[test]
    fn excited_window_values_and_orthogonality() {
        let ax = grid();
        let base = WindowSpec::standard();
        assert_eq!(excited_window(&base, 0, &ax).unwrap(), sample_window(&base, &ax).unwrap());
        let e1 = WindowSpec::OscillatorExcited { n: 1, beta: 1.0, x_w: 0.0, k_w: 0.0 };
        let expect = 2f64.sqrt() * (-0.5f64).exp() / PI.powf(0.25);
        assert!((e1.eval(1.0).re - expect).abs() < 1e-15);
        let base = WindowSpec::Gaussian { beta: 1.2, x_w: 0.3, k_w: -0.6 };
        let ws: Vec<_> = (0..=4).map(|n| excited_window(&base, n, &ax).unwrap()).collect();
        for (i, a) in ws.iter().enumerate() {
            for (j, b) in ws.iter().enumerate() {
                let g = a.inner(b).unwrap();
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((g - want).norm() < 1e-10, "<{i}|{j}> = {g}");
            }
        }
    }

    #[test]
    fn excited_window_equals_creation_operator_applied_numerically() {
        // One application of [β(x - λ̄) - ∂ₓ/β]/√2 via centred differences.
        let (beta, x_w, k_w) = (1.3, 0.4, 0.9);
        let g = WindowSpec::Gaussian { beta, x_w, k_w };
        let lam_bar = C64::new(x_w, -k_w / (beta * beta));
        let e = WindowSpec::OscillatorExcited { n: 1, beta, x_w, k_w };
        let d = 1e-4;
        for &x in &[-0.8, 0.1, 1.7] {
            let deriv = (g.eval(x + d) - g.eval(x - d)) / (2.0 * d);
            let raised = (beta * (x - lam_bar) * g.eval(x) - deriv / beta) / 2f64.sqrt();
            assert!((raised - e.eval(x)).norm() < 1e-8);
        }
    }

    #[test]
    fn narrow_axis_is_rejected() {
        let ax = Axis::new(-2.0, 2.0, 64).unwrap();
        assert!(matches!(sample_window(&WindowSpec::standard(), &ax), Err(Error::Truncation(_))));
        assert!(matches!(sample_window(&WindowSpec::Square { a: 3.0 }, &ax), Err(Error::Truncation(_))));
        assert!(excited_window(&WindowSpec::Square { a: 1.0 }, 1, &ax).is_err());
        assert!(WindowSpec::OscillatorExcited { n: 13, beta: 1.0, x_w: 0.0, k_w: 0.0 }.validate().is_err());
    }

    #[test]
    fn spec_round_trips_through_serde() {
        let s = WindowSpec::OscillatorExcited { n: 2, beta: 0.5, x_w: 1.0, k_w: -2.0 };
        let json = serde_json::to_string(&s).unwrap();
        assert!(json.contains("\"kind\":\"oscillator_excited\""));
        assert_eq!(serde_json::from_str::<WindowSpec>(&json).unwrap(), s);
    }
}
