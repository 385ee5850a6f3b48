//! Forward and inverse amplitude transforms, the Gabor transform, the
//! symplectic Fourier transform and spectrogram/Cohen-class constructions.
//!
//! Every u-, p- or q-integral is a trapezoid sum evaluated at arbitrary
//! output frequencies with a chirp-z transform, so grids of any size work and
//! the output axes are independent of the input sampling.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use rayon::prelude::*;

use crate::error::{Checked, Error, Result, Warning};
use crate::numgrid::quad::trapezoid_weights;
use crate::numgrid::spectral::{resample, Direction, TrigInterpolant, ZoomDft};
use crate::numgrid::{Axis, PhaseSpaceField, Wavefunction1D};
use crate::windows::{WindowEval, WindowSpec};

/// Relative distance from the window subspace above which an amplitude is
/// reported as inconsistent.
pub const SUBSPACE_WARNING_THRESHOLD: f64 = 1e-4;

/// Smallest `|φ₀(y₀)|` accepted by [`pointwise_inverse`].
pub const MIN_WINDOW_VALUE: f64 = 1e-6;

/// Sampling layout of a forward transform.
#[derive(Debug, Clone, PartialEq)]
pub struct TransformPlan {
    pub x_axis: Axis,
    pub q_axis: Axis,
    pub p_axis: Axis,
    pub window: WindowSpec,
}

fn max_abs(axis: &Axis) -> f64 {
    axis.min().abs().max(axis.max().abs())
}

fn check_nyquist(what: &str, freq: f64, spacing: f64) -> Result<()> {
    if freq * spacing >= PI {
        return Err(Error::Aliasing(format!(
            "{what}: frequency {freq} needs spacing below {}, got {spacing}",
            PI / freq
        )));
    }
    Ok(())
}

impl TransformPlan {
    /// Validates that `e^{-2ipu}` is resolved on the x grid for every `p`
    /// and that every `q` lies inside the x range.
    pub fn new(x_axis: Axis, q_axis: Axis, p_axis: Axis, window: WindowSpec) -> Result<Self> {
        window.validate()?;
        check_nyquist("forward transform", 2.0 * max_abs(&p_axis), x_axis.spacing())?;
        if !(x_axis.contains(q_axis.min()) && x_axis.contains(q_axis.max())) {
            return Err(Error::Range(format!(
                "q range [{}, {}] exceeds x range [{}, {}]",
                q_axis.min(),
                q_axis.max(),
                x_axis.min(),
                x_axis.max()
            )));
        }
        Ok(TransformPlan { x_axis, q_axis, p_axis, window })
    }

    /// Default `[-8, 8]` grids (256 points) on every axis.
    pub fn standard(window: WindowSpec) -> Result<Self> {
        let a = Axis::default_grid();
        TransformPlan::new(a, a, a, window)
    }
}

fn check_input(psi: &Wavefunction1D, x_axis: &Axis) -> Result<()> {
    if !psi.axis().same_as(x_axis) {
        return Err(Error::Shape(format!("wavefunction axis {:?} differs from plan axis {:?}", psi.axis(), x_axis)));
    }
    Ok(())
}

/// `√(2/π) Σ_u w_u ψ(u) conj(φ(2q-u)) e^{2ip(q-u)}`, with `phi_row(x0, dx, n)`
/// returning `φ` on `x0 + j·dx`.
pub(crate) fn amplitude_with<F>(psi: &Wavefunction1D, q_axis: &Axis, p_axis: &Axis, phi_row: F) -> Result<PhaseSpaceField>
where
    F: Fn(f64, f64, usize) -> Vec<C64> + Sync,
{
    let x = psi.axis();
    let (nx, np) = (x.len(), p_axis.len());
    let h = x.spacing();
    let wx = trapezoid_weights(x);
    let zoom = ZoomDft::new(nx, x.min(), h, np, 2.0 * p_axis.min(), 2.0 * p_axis.spacing(), -1.0);
    let c = (2.0 / PI).sqrt();
    let mut values = vec![C64::new(0.0, 0.0); q_axis.len() * np];
    values.par_chunks_mut(np).enumerate().for_each(|(iq, row)| {
        let q = q_axis.point(iq);
        let phi = phi_row(2.0 * q - x.min(), -h, nx);
        let f: Vec<C64> = psi
            .values()
            .iter()
            .zip(&phi)
            .zip(&wx)
            .map(|((s, w), wt)| s * w.conj() * *wt)
            .collect();
        let out = zoom.apply(&f);
        for (k, (r, o)) in row.iter_mut().zip(out).enumerate() {
            let p = p_axis.point(k);
            *r = c * o * C64::from_polar(1.0, 2.0 * p * q);
        }
    });
    PhaseSpaceField::new(*q_axis, *p_axis, values)
}

/// `Ψ(q,p) = √(2/π) ∫ ψ(u) conj(φ₀(2q-u)) e^{2ip(q-u)} du`.
pub fn forward_amplitude(psi: &Wavefunction1D, plan: &TransformPlan) -> Result<PhaseSpaceField> {
    check_input(psi, &plan.x_axis)?;
    let ev = plan.window.evaluator();
    amplitude_with(psi, &plan.q_axis, &plan.p_axis, |x0, dx, n| ev.eval_uniform(x0, dx, n))
}

/// Samples of `conj(φ₀(-x))`, the Gabor window paired with `φ₀`.
pub fn reflected_window(window: &WindowSpec, axis: &Axis) -> Result<Wavefunction1D> {
    let ev = window.evaluator();
    Wavefunction1D::from_fn(*axis, |x| ev.eval(-x).conj())
}

/// Samples of `conj(φ₀(x))`.
pub fn conjugated_window(window: &WindowSpec, axis: &Axis) -> Result<Wavefunction1D> {
    let ev = window.evaluator();
    Wavefunction1D::from_fn(*axis, |x| ev.eval(x).conj())
}

/// `Φ(q,p) = (2π)^{-1/2} ∫ ψ(u) w(u-q) e^{-ipu} du`; `w` is interpolated
/// band-limitedly and taken as zero outside its axis.
pub fn gabor_transform(psi: &Wavefunction1D, window_fn: &Wavefunction1D, plan: &TransformPlan) -> Result<PhaseSpaceField> {
    check_input(psi, &plan.x_axis)?;
    let x = psi.axis();
    let (nx, np) = (x.len(), plan.p_axis.len());
    let h = x.spacing();
    check_nyquist("gabor transform", max_abs(&plan.p_axis), h)?;
    let interp = TrigInterpolant::from_wavefunction(window_fn);
    let w_eval = interp.uniform_evaluator(h, nx);
    let w_axis = window_fn.axis();
    let wx = trapezoid_weights(x);
    let zoom = ZoomDft::new(nx, x.min(), h, np, plan.p_axis.min(), plan.p_axis.spacing(), -1.0);
    let c = 1.0 / (2.0 * PI).sqrt();
    let q_axis = plan.q_axis;
    let rows: Vec<Vec<C64>> = (0..q_axis.len())
        .into_par_iter()
        .map(|iq| {
            let q = q_axis.point(iq);
            let x0 = x.min() - q;
            let w = w_eval.eval(x0);
            let f: Vec<C64> = (0..nx)
                .map(|j| {
                    let s = x0 + j as f64 * h;
                    if w_axis.contains(s) {
                        psi.values()[j] * w[j] * wx[j]
                    } else {
                        C64::new(0.0, 0.0)
                    }
                })
                .collect();
            zoom.apply(&f).into_iter().map(|v| v * c).collect()
        })
        .collect();
    PhaseSpaceField::new(q_axis, plan.p_axis, rows.concat())
}

/// `(1/2π) ∬ f(q',p') e^{i(p'q - q'p)} dq' dp'` on the input grid.
pub fn symplectic_fourier(f: &PhaseSpaceField) -> Result<PhaseSpaceField> {
    let (qa, pa) = (*f.q_axis(), *f.p_axis());
    check_nyquist("symplectic Fourier (q)", max_abs(&qa), pa.spacing())?;
    check_nyquist("symplectic Fourier (p)", max_abs(&pa), qa.spacing())?;
    let (nq, np) = (qa.len(), pa.len());
    let wp = trapezoid_weights(&pa);
    let wq = trapezoid_weights(&qa);
    // G(q', q) = Σ_p' f(q',p') e^{ip'q}
    let zp = ZoomDft::new(np, pa.min(), pa.spacing(), nq, qa.min(), qa.spacing(), 1.0);
    let g: Vec<C64> = f
        .values()
        .par_chunks(np)
        .flat_map_iter(|row| {
            let x: Vec<C64> = row.iter().zip(&wp).map(|(v, w)| v * *w).collect();
            zp.apply(&x)
        })
        .collect();
    // R(q, p) = Σ_q' G(q', q) e^{-iq'p}
    let gt = PhaseSpaceField::from_raw(qa, qa, g).transposed();
    let zq = ZoomDft::new(nq, qa.min(), qa.spacing(), np, pa.min(), pa.spacing(), -1.0);
    let scale = 1.0 / (2.0 * PI);
    let out: Vec<C64> = gt
        .values()
        .par_chunks(nq)
        .flat_map_iter(|col| {
            let x: Vec<C64> = col.iter().zip(&wq).map(|(v, w)| v * *w).collect();
            zq.apply(&x).into_iter().map(move |v| v * scale)
        })
        .collect();
    PhaseSpaceField::new(qa, pa, out)
}

/// `ψ(x) = √(2/π) ∬ Ψ(q,p) φ₀(2q-x) e^{2ip(x-q)} dq dp`.
///
/// The result is always the projection of `Psi` onto the window's
/// subspace; when `Psi` is further than [`SUBSPACE_WARNING_THRESHOLD`] from
/// it (measured by transforming back), an inconsistency warning is attached.
pub fn inverse_amplitude(psi_field: &PhaseSpaceField, window: &WindowSpec, x_axis: &Axis) -> Result<Checked<Wavefunction1D>> {
    window.validate()?;
    let (qa, pa) = (*psi_field.q_axis(), *psi_field.p_axis());
    let (nq, np, nx) = (qa.len(), pa.len(), x_axis.len());
    let wp = trapezoid_weights(&pa);
    let wq = trapezoid_weights(&qa);
    let zoom = ZoomDft::new(np, 2.0 * pa.min(), 2.0 * pa.spacing(), nx, x_axis.min(), x_axis.spacing(), 1.0);
    let ev = window.evaluator();
    let c = (2.0 / PI).sqrt();
    let rows: Vec<Vec<C64>> = (0..nq)
        .into_par_iter()
        .map(|iq| {
            let q = qa.point(iq);
            let row = psi_field.row(iq);
            let f: Vec<C64> =
                (0..np).map(|k| row[k] * wp[k] * C64::from_polar(1.0, -2.0 * pa.point(k) * q)).collect();
            let g = zoom.apply(&f);
            let phi = ev.eval_uniform(2.0 * q - x_axis.min(), -x_axis.spacing(), nx);
            g.iter().zip(&phi).map(|(g, w)| g * w * wq[iq] * c).collect()
        })
        .collect();
    let mut values = vec![C64::new(0.0, 0.0); nx];
    for row in &rows {
        for (v, r) in values.iter_mut().zip(row) {
            *v += r;
        }
    }
    let psi = Wavefunction1D::new(*x_axis, values)?;
    let mut warnings = Vec::new();
    if let Ok(plan) = TransformPlan::new(*x_axis, qa, pa, window.clone()) {
        let back = forward_amplitude(&psi, &plan)?;
        let norm = psi_field.norm_l2();
        if norm > 0.0 {
            let residual = back.sub(psi_field)?.norm_l2() / norm;
            if residual > SUBSPACE_WARNING_THRESHOLD {
                warnings.push(Warning::InconsistentAmplitude { residual });
            }
        }
    }
    Ok(Checked::with(psi, warnings))
}

/// `ψ(x) = ∫ Ψ((x+y₀)/2, p) e^{ip(x-y₀)} dp / (√(2π) conj(φ₀(y₀)))`.
pub fn pointwise_inverse(psi_field: &PhaseSpaceField, window: &WindowSpec, y0: f64, x_axis: &Axis) -> Result<Wavefunction1D> {
    window.validate()?;
    let phi0 = window.eval(y0);
    if phi0.norm() <= MIN_WINDOW_VALUE {
        return Err(Error::Singular(format!("|φ₀({y0})| = {:.3e}", phi0.norm())));
    }
    let half = Axis::new((x_axis.min() + y0) / 2.0, (x_axis.max() + y0) / 2.0, x_axis.len())?;
    let on_diag = resample(psi_field, Direction::Q, &half)?;
    let pa = *psi_field.p_axis();
    let wp = trapezoid_weights(&pa);
    let c = 1.0 / ((2.0 * PI).sqrt() * phi0.conj());
    let values: Vec<C64> = (0..x_axis.len())
        .into_par_iter()
        .map(|i| {
            let d = x_axis.point(i) - y0;
            let row = on_diag.row(i);
            let s: C64 = (0..pa.len()).map(|k| row[k] * wp[k] * C64::from_polar(1.0, pa.point(k) * d)).sum();
            s * c
        })
        .collect();
    Wavefunction1D::new(*x_axis, values)
}

/// Spectrogram `|Ψ(q/2, p/2)/2|²` on the grid of `Psi` (real field).
pub fn spectrogram_husimi(psi_field: &PhaseSpaceField) -> Result<PhaseSpaceField> {
    let half_q = psi_field.q_axis().scaled(0.5)?;
    let half_p = psi_field.p_axis().scaled(0.5)?;
    let rq = resample(psi_field, Direction::Q, &half_q)?;
    let r = resample(&rq, Direction::P, &half_p)?;
    let values = r.values().iter().map(|v| C64::new(v.norm_sqr() / 4.0, 0.0)).collect();
    PhaseSpaceField::new(*psi_field.q_axis(), *psi_field.p_axis(), values)
}

/// Cohen-class kernel `f(r,v) = ∫ conj(φ₀(θ-v/2)) φ₀(θ+v/2) e^{irθ} dθ`.
pub fn cohen_kernel(window: &WindowSpec, r_axis: &Axis, v_axis: &Axis) -> Result<PhaseSpaceField> {
    window.validate()?;
    if let WindowSpec::Square { a } = *window {
        // Overlap of two shifted boxes: an interval of half-length a - |v|/2.
        return PhaseSpaceField::from_fn(*r_axis, *v_axis, |r, v| {
            let l = (a - v.abs() / 2.0).max(0.0);
            let s = if r == 0.0 { 2.0 * l } else { 2.0 * (r * l).sin() / r };
            C64::new(s / (2.0 * a), 0.0)
        });
    }
    let theta = match window {
        WindowSpec::Custom { samples } => {
            let v = samples.values();
            let peak = v.iter().map(|z| z.norm_sqr()).fold(0.0, f64::max);
            let edge = v[0].norm_sqr().max(v[v.len() - 1].norm_sqr());
            if edge > 1e-10 * peak {
                return Err(Error::Truncation(format!("custom window edge density {:.3e} of peak", edge / peak)));
            }
            *samples.axis()
        }
        _ => {
            let (lo, hi) = window.support();
            let beta = window.gaussian_params().map(|p| p.0).unwrap_or(1.0);
            let band = max_abs(r_axis) + 40.0 * beta.max(1.0 / beta);
            let h = 2.0 * PI / band;
            let n = (((hi - lo) / h).ceil() as usize + 1).max(64);
            Axis::new(lo, hi, n)?
        }
    };
    let tail = window.tail_mass(theta.min(), theta.max());
    if tail > 1e-10 {
        return Err(Error::Truncation(format!("window mass {tail:.3e} outside the integration range")));
    }
    let ev: WindowEval<'_> = window.evaluator();
    let (nt, nr) = (theta.len(), r_axis.len());
    let h = theta.spacing();
    let wt = trapezoid_weights(&theta);
    let zoom = ZoomDft::new(nt, theta.min(), h, nr, r_axis.min(), r_axis.spacing(), 1.0);
    // Columns are v; compute per v and transpose into (r, v) layout.
    let cols: Vec<Vec<C64>> = (0..v_axis.len())
        .into_par_iter()
        .map(|iv| {
            let v = v_axis.point(iv);
            let lo = ev.eval_uniform(theta.min() - v / 2.0, h, nt);
            let hi = ev.eval_uniform(theta.min() + v / 2.0, h, nt);
            let f: Vec<C64> = lo.iter().zip(&hi).zip(&wt).map(|((a, b), w)| a.conj() * b * *w).collect();
            zoom.apply(&f)
        })
        .collect();
    let by_v = PhaseSpaceField::new(*v_axis, *r_axis, cols.concat())?;
    Ok(by_v.transposed())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::windows::sample_window;

    fn gauss(beta: f64, x_w: f64, k_w: f64) -> WindowSpec {
        WindowSpec::Gaussian { beta, x_w, k_w }
    }

    fn coherent_psi(axis: &Axis, xc: f64, kc: f64) -> Wavefunction1D {
        sample_window(&gauss(1.0, xc, kc), axis).unwrap()
    }

    /// Slow O(n) per point evaluation of the defining integral.
    fn direct(psi: &Wavefunction1D, w: &WindowSpec, q: f64, p: f64) -> C64 {
        let ax = psi.axis();
        let wts = trapezoid_weights(ax);
        let s: C64 = ax
            .points()
            .zip(psi.values())
            .zip(&wts)
            .map(|((u, v), wt)| v * w.eval(2.0 * q - u).conj() * C64::from_polar(*wt, 2.0 * p * (q - u)))
            .sum();
        s * (2.0 / PI).sqrt()
    }

    #[test]
    fn ground_state_origin_value() {
        let a = Axis::new(-8.0, 8.0, 257).unwrap();
        let plan = TransformPlan::new(a, a, a, WindowSpec::standard()).unwrap();
        let psi = sample_window(&WindowSpec::standard(), &a).unwrap();
        let f = forward_amplitude(&psi, &plan).unwrap();
        assert!((f.get(128, 128) - C64::new((2.0 / PI).sqrt(), 0.0)).norm() < 1e-13);
    }

    #[test]
    fn fast_transform_matches_direct_quadrature() {
        let x = Axis::new(-10.0, 10.0, 300).unwrap();
        let q = Axis::new(-4.0, 4.0, 41).unwrap();
        let p = Axis::new(-5.0, 5.0, 37).unwrap();
        let states = [
            coherent_psi(&x, 1.0, 0.5),
            sample_window(&WindowSpec::OscillatorExcited { n: 2, beta: 1.0, x_w: 0.0, k_w: 0.0 }, &x).unwrap(),
            Wavefunction1D::from_fn(x, |u| C64::new(u.cos(), 0.2 * u) * (-u * u / 3.0).exp()).unwrap(),
        ];
        for w in [gauss(1.3, 0.2, -0.4), WindowSpec::OscillatorExcited { n: 1, beta: 0.8, x_w: 0.0, k_w: 1.0 }] {
            let plan = TransformPlan::new(x, q, p, w.clone()).unwrap();
            for psi in &states {
                let f = forward_amplitude(psi, &plan).unwrap();
                for &(iq, ip) in &[(0, 0), (20, 18), (33, 5), (40, 36)] {
                    let d = (f.get(iq, ip) - direct(psi, &w, q.point(iq), p.point(ip))).norm();
                    assert!(d < 1e-12, "{d:e}");
                }
            }
        }
    }

    #[test]
    fn custom_window_matches_analytic_window() {
        let x = Axis::new(-10.0, 10.0, 321).unwrap();
        let w = gauss(1.2, 0.3, 0.7);
        let custom = WindowSpec::Custom { samples: sample_window(&w, &x).unwrap() };
        let psi = coherent_psi(&x, -0.5, 1.0);
        let a = forward_amplitude(&psi, &TransformPlan::new(x, x, x, w).unwrap()).unwrap();
        let b = forward_amplitude(&psi, &TransformPlan::new(x, x, x, custom).unwrap()).unwrap();
        assert!(a.max_abs_diff(&b).unwrap() < 1e-11);
    }

    #[test]
    fn plan_rejects_aliasing_and_range() {
        let x = Axis::new(-8.0, 8.0, 256).unwrap();
        let p = Axis::new(-30.0, 30.0, 64).unwrap();
        assert!(matches!(TransformPlan::new(x, x, p, WindowSpec::standard()), Err(Error::Aliasing(_))));
        let q = Axis::new(-9.0, 9.0, 64).unwrap();
        assert!(matches!(TransformPlan::new(x, q, x, WindowSpec::standard()), Err(Error::Range(_))));
        let plan = TransformPlan::standard(WindowSpec::standard()).unwrap();
        let other = Wavefunction1D::zeros(Axis::new(-8.0, 8.0, 100).unwrap());
        assert!(matches!(forward_amplitude(&other, &plan), Err(Error::Shape(_))));
    }

    #[test]
    fn zero_inputs_give_zero_outputs() {
        let plan = TransformPlan::standard(WindowSpec::standard()).unwrap();
        let zero = Wavefunction1D::zeros(plan.x_axis);
        assert_eq!(forward_amplitude(&zero, &plan).unwrap().max_abs(), 0.0);
        let w = reflected_window(&plan.window, &plan.x_axis).unwrap();
        assert_eq!(gabor_transform(&zero, &w, &plan).unwrap().max_abs(), 0.0);
        let zf = PhaseSpaceField::zeros(plan.q_axis, plan.p_axis);
        assert_eq!(symplectic_fourier(&zf).unwrap().max_abs(), 0.0);
        assert_eq!(inverse_amplitude(&zf, &plan.window, &plan.x_axis).unwrap().value.norm_sq(), 0.0);
        assert_eq!(pointwise_inverse(&zf, &plan.window, 0.0, &plan.x_axis).unwrap().norm_sq(), 0.0);
    }

    #[test]
    fn gabor_relation_holds_pointwise() {
        let a = Axis::default_grid();
        let w = gauss(1.1, 0.4, -0.8);
        let psi = coherent_psi(&a, 0.5, 1.0);
        let plan = TransformPlan::new(a, a, a, w.clone()).unwrap();
        let phi = gabor_transform(&psi, &reflected_window(&w, &a).unwrap(), &plan).unwrap();
        let half = TransformPlan::new(a, a.scaled(0.5).unwrap(), a.scaled(0.5).unwrap(), w).unwrap();
        let big = forward_amplitude(&psi, &half).unwrap();
        let rhs = phi.map_with_coords(|q, p, v| 2.0 * v * C64::from_polar(1.0, q * p / 2.0));
        let d = big.values().iter().zip(rhs.values()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        assert!(d < 1e-12, "{d:e}");
        assert!((crate::numgrid::integrate_2d(&phi.modulus_sq()).unwrap().re - 1.0).abs() < 1e-10);
    }

    #[test]
    fn symplectic_fourier_is_an_involution_and_maps_amplitude_to_gabor() {
        let a = Axis::default_grid();
        let f = PhaseSpaceField::from_fn(a, a, |q, p| {
            C64::new(1.0, 0.5 * q) * (-0.45 * (q - 0.5).powi(2) - 0.55 * (p + 0.3).powi(2)).exp()
        })
        .unwrap();
        let ff = symplectic_fourier(&symplectic_fourier(&f).unwrap()).unwrap();
        let d = ff.max_abs_diff(&f).unwrap();
        assert!(d < 1e-10, "{d:e}");

        // General window: SF(Ψ) = e^{iqp/2} × Gabor transform with w = conj φ₀.
        let w = gauss(1.2, 0.3, 0.6);
        let psi = coherent_psi(&a, 1.0, -0.5);
        let plan = TransformPlan::new(a, a, a, w.clone()).unwrap();
        let big = forward_amplitude(&psi, &plan).unwrap();
        let phi = gabor_transform(&psi, &conjugated_window(&w, &a).unwrap(), &plan).unwrap();
        let rhs = phi.map_with_coords(|q, p, v| v * C64::from_polar(1.0, q * p / 2.0));
        assert!(symplectic_fourier(&big).unwrap().max_abs_diff(&rhs).unwrap() < 1e-10);
    }

    #[test]
    fn symplectic_fourier_of_gaussian_matches_closed_form() {
        // e^{-(q²+p²)/2} is its own symplectic transform.
        let a = Axis::default_grid();
        let f = PhaseSpaceField::from_fn(a, a, |q, p| C64::new((-(q * q + p * p) / 2.0).exp(), 0.0)).unwrap();
        assert!(symplectic_fourier(&f).unwrap().max_abs_diff(&f).unwrap() < 1e-13);
    }

    #[test]
    fn inverse_round_trip_and_pointwise_agreement() {
        let a = Axis::default_grid();
        let x = Axis::new(-8.0, 8.0, 257).unwrap();
        let w = gauss(2.0, 0.0, 0.0);
        let psi = coherent_psi(&x, 1.0, 1.0);
        let plan = TransformPlan::new(x, a, a, w.clone()).unwrap();
        let big = forward_amplitude(&psi, &plan).unwrap();
        let back = inverse_amplitude(&big, &w, &x).unwrap();
        assert!(back.is_clean());
        assert!(back.value.relative_distance(&psi).unwrap() < 1e-10);
        let inner = Axis::new(-6.0, 6.0, 193).unwrap();
        let pw = pointwise_inverse(&big, &w, 0.0, &inner).unwrap();
        let direct = Wavefunction1D::from_fn(inner, |x| gauss(1.0, 1.0, 1.0).eval(x)).unwrap();
        assert!(pw.max_abs_diff(&direct) < 1e-9);
    }

    #[test]
    fn inverse_flags_fields_outside_subspace() {
        let a = Axis::default_grid();
        let f = PhaseSpaceField::from_fn(a, a, |q, p| C64::new((-(q * q + 3.0 * p * p)).exp(), 0.0)).unwrap();
        let r = inverse_amplitude(&f, &WindowSpec::standard(), &a).unwrap();
        assert!(matches!(r.warnings.as_slice(), [Warning::InconsistentAmplitude { .. }]));
    }

    #[test]
    fn pointwise_inverse_rejects_vanishing_window() {
        let a = Axis::default_grid();
        let f = PhaseSpaceField::zeros(a, a);
        let r = pointwise_inverse(&f, &WindowSpec::Square { a: 1.0 }, 2.0, &a);
        assert!(matches!(r, Err(Error::Singular(_))));
    }

    #[test]
    fn spectrogram_is_nonnegative_with_unit_mass() {
        let a = Axis::default_grid();
        let psi = coherent_psi(&a, 0.5, -1.0);
        let plan = TransformPlan::new(a, a, a, gauss(1.0, 0.0, 0.0)).unwrap();
        let s = spectrogram_husimi(&forward_amplitude(&psi, &plan).unwrap()).unwrap();
        assert!(s.min_re() >= 0.0);
        assert!(s.max_abs_im() == 0.0);
        let m = crate::numgrid::integrate_2d(&s).unwrap().re;
        assert!((m - 1.0).abs() < 1e-10, "{m}");
    }

    #[test]
    fn cohen_kernel_of_gaussian_and_square_windows() {
        let r = Axis::new(-6.0, 6.0, 49).unwrap();
        let f = cohen_kernel(&WindowSpec::standard(), &r, &r).unwrap();
        let want = PhaseSpaceField::from_fn(r, r, |r, v| C64::new((-(r * r + v * v) / 4.0).exp(), 0.0)).unwrap();
        assert!(f.max_abs_diff(&want).unwrap() < 1e-13);
        assert!((f.get(24, 24).re - 1.0).abs() < 1e-14);
        assert!((f.get(32, 24).re - (-1.0f64).exp()).abs() < 1e-14);
        let s = cohen_kernel(&WindowSpec::Square { a: 1.0 }, &r, &r).unwrap();
        assert!((s.get(24, 24).re - 1.0).abs() < 1e-15);
        let ex = cohen_kernel(&WindowSpec::OscillatorExcited { n: 3, beta: 1.4, x_w: 0.5, k_w: 1.0 }, &r, &r).unwrap();
        assert!((ex.get(24, 24) - 1.0).norm() < 1e-12);
    }
}
