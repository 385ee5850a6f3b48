//! End-to-end validation checks tying the numerical transforms, star-product
//! algebra and dynamics to the closed forms. Each check returns its
//! measurements with pinned bounds.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::analytic::{
    bargmann_from_amplitude, bargmann_inner, bargmann_operator, cauchy_riemann_residual, coherent_amplitude,
    coherent_wavefunction, coherent_wigner, free_particle_amplitude, free_particle_wavefunction, oscillator_amplitude,
    sho_wigner, test_state, BargmannOperator,
};
use crate::dynamics::{evolve_amplitude, evolve_coordinate_at, hamiltonian_star_apply, EvolutionConfig};
use crate::error::Result;
use crate::figures::{figure, marginal_variances};
use crate::numgrid::quad::{inner_product, integrate_2d};
use crate::numgrid::{Axis, PhaseSpaceField, Wavefunction1D};
use crate::staralg::{
    born_wigner, expectation, star_product, state_projection_residual, subspace_residual, wigner_of, PolySymbol,
};
use crate::windows::WindowSpec;
use crate::xform::{
    cohen_kernel, forward_amplitude, gabor_transform, inverse_amplitude, pointwise_inverse, reflected_window,
    spectrogram_husimi, symplectic_fourier, TransformPlan,
};

pub const CHECK_COUNT: u8 = 13;

/// Seed for the random field of the subspace check.
pub const RANDOM_FIELD_SEED: u64 = 0x5eed_f1e1d;

/// Literal quoted for the test-state mean momentum; the computed value is
/// asserted instead (they differ by about 9.5e-6).
pub const QUOTED_MEAN_MOMENTUM: f64 = 0.135827;

/// Literal quoted for `|Ψ(0,0,1)|` of the free particle; the exact value
/// `2/√(π√5) = 0.7545926` is asserted instead.
pub const QUOTED_FREE_ORIGIN: f64 = 0.754597;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Bound {
    /// `value ≤ limit`
    AtMost,
    /// `value < limit`
    Below,
    /// `value > limit`
    Above,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Measurement {
    pub label: String,
    pub value: f64,
    pub bound: Bound,
    pub limit: f64,
    pub passed: bool,
}

impl Measurement {
    fn new(label: &str, value: f64, bound: Bound, limit: f64) -> Self {
        let passed = match bound {
            Bound::AtMost => value <= limit,
            Bound::Below => value < limit,
            Bound::Above => value > limit,
        };
        Measurement { label: label.into(), value, bound, limit, passed: passed && value.is_finite() }
    }

    fn at_most(label: &str, value: f64, limit: f64) -> Self {
        Self::new(label, value, Bound::AtMost, limit)
    }
}

impl fmt::Display for Measurement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = match self.bound {
            Bound::AtMost => "<=",
            Bound::Below => "<",
            Bound::Above => ">",
        };
        write!(f, "{} = {:.3e} {op} {:.1e}", self.label, self.value, self.limit)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub id: u8,
    pub title: String,
    pub passed: bool,
    pub measurements: Vec<Measurement>,
    pub notes: Vec<String>,
}

impl CheckResult {
    /// Measurements that missed their bound.
    pub fn failures(&self) -> impl Iterator<Item = &Measurement> {
        self.measurements.iter().filter(|m| !m.passed)
    }

    pub fn measurement(&self, label: &str) -> Option<&Measurement> {
        self.measurements.iter().find(|m| m.label == label)
    }
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "[{status}] {:>2}. {}", self.id, self.title)?;
        let shown: Vec<String> = if self.passed {
            self.measurements.iter().map(|m| m.to_string()).collect()
        } else {
            self.failures().map(|m| m.to_string()).collect()
        };
        if !shown.is_empty() {
            write!(f, " — {}", shown.join("; "))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub checks: Vec<CheckResult>,
}

impl ValidationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

pub fn title(id: u8) -> &'static str {
    match id {
        1 => "coherent-state amplitude",
        2 => "Born relation for a coherent state",
        3 => "window independence of the Wigner function",
        4 => "inverse round trip",
        5 => "Gabor and symplectic Fourier relations",
        6 => "Husimi chain",
        7 => "oscillator spectrum",
        8 => "free-particle dynamics",
        9 => "subspace characterization",
        10 => "Bargmann analyticity and ladder adjointness",
        11 => "expectation values",
        12 => "superposition identities",
        13 => "figure data",
        _ => "unknown check",
    }
}

/// Runs check `id` (1..=13).
pub fn run_check(id: u8) -> CheckResult {
    let mut notes = Vec::new();
    let outcome = match id {
        1 => check_coherent(),
        2 => check_born(),
        3 => check_window_independence(&mut notes),
        4 => check_inverse(),
        5 => check_gabor(),
        6 => check_husimi(),
        7 => check_spectrum(),
        8 => check_free_particle(&mut notes),
        9 => check_subspace(),
        10 => check_bargmann(),
        11 => check_expectations(&mut notes),
        12 => check_superposition(),
        13 => check_figures(),
        _ => {
            notes.push(format!("no check with id {id}"));
            Ok(Vec::new())
        }
    };
    let measurements = match outcome {
        Ok(m) => m,
        Err(e) => {
            notes.push(format!("error: {e}"));
            Vec::new()
        }
    };
    let passed = !measurements.is_empty() && measurements.iter().all(|m| m.passed);
    CheckResult { id, title: title(id).into(), passed, measurements, notes }
}

pub fn run_all() -> ValidationReport {
    ValidationReport { checks: (1..=CHECK_COUNT).map(run_check).collect() }
}

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Default phase-space grid.
fn grid() -> Axis {
    Axis::default_grid()
}

/// Odd grid on the default extent, so the origin is a node.
fn centred_grid() -> Axis {
    Axis::new(-8.0, 8.0, 257).expect("valid axis")
}

fn x_axis() -> Axis {
    Axis::new(-16.0, 16.0, 1024).expect("valid axis")
}

/// `max |a - e^{iθ} b|` with `θ` fixed by the overlap.
fn phase_aligned_error(a: &PhaseSpaceField, b: &PhaseSpaceField) -> Result<f64> {
    let overlap = inner_product(b, a)?;
    let phase = if overlap.norm() > 0.0 { overlap / overlap.norm() } else { c(1.0, 0.0) };
    a.max_abs_diff(&b.scaled(phase))
}

const MU: C64 = C64 { re: 1.0, im: 0.5 };

fn coherent_numeric() -> Result<PhaseSpaceField> {
    let x = x_axis();
    let plan = TransformPlan::new(x, grid(), grid(), WindowSpec::gaussian_at(1.0, MU))?;
    forward_amplitude(&coherent_wavefunction(MU, &x)?, &plan)
}

fn check_coherent() -> Result<Vec<Measurement>> {
    let exact_amp = coherent_amplitude(MU, 1.0, MU)?;
    let num = coherent_numeric()?;
    let exact = exact_amp.sample(&grid(), &grid())?;
    let peak = exact_amp.eval(MU.re, MU.im)?.norm_sqr();
    let num_peak = num.modulus_sq().max_abs_re();
    Ok(vec![
        Measurement::at_most("max |numeric - closed form| (phase aligned)", phase_aligned_error(&num, &exact)?, 1e-8),
        Measurement::at_most("| |Psi(x_C,k_C)|^2 - 2/pi |", (peak - 2.0 / PI).abs(), 1e-8),
        Measurement::new("max over grid of numeric |Psi|^2 - 2/pi", num_peak - 2.0 / PI, Bound::AtMost, 1e-8),
    ])
}

fn check_born() -> Result<Vec<Measurement>> {
    let num = coherent_numeric()?;
    let w = star_product(&num, &num.conj())?.value;
    let exact = coherent_wigner(MU).sample(&grid(), &grid())?;
    Ok(vec![
        Measurement::at_most("max |Psi*conj(Psi) - W|", w.map(|v| c(v.re, 0.0)).max_abs_diff(&exact)?, 1e-6),
        Measurement::at_most("max |Im(Psi*conj(Psi))|", w.max_abs_im(), 1e-8),
    ])
}

fn check_window_independence(notes: &mut Vec<String>) -> Result<Vec<Measurement>> {
    let a = centred_grid();
    let exact = sho_wigner(1).sample(&a, &a)?;
    let origin = a.len() / 2;
    let mut out = Vec::new();
    for (label, window) in [("gaussian", WindowSpec::standard()), ("square", WindowSpec::Square { a: 1.0 })] {
        let psi = oscillator_amplitude(1, &window)?.sample(&a, &a)?;
        let w = born_wigner(&psi)?.value;
        out.push(Measurement::at_most(&format!("{label}: max |W - W_1|"), w.max_abs_diff(&exact)?, 1e-6));
        out.push(Measurement::at_most(&format!("{label}: |W(0,0) + 1/pi|"), (w.get(origin, origin).re + 1.0 / PI).abs(), 1e-6));
    }
    notes.push(
        "square-window amplitudes decay like 1/p, so the Born product on a truncated p-grid misses O(1e-3) of the tail; \
         the square-window bound is not reachable on finite grids"
            .into(),
    );
    Ok(out)
}

fn check_inverse() -> Result<Vec<Measurement>> {
    let ts = test_state();
    let x = Axis::new(-8.0, 8.0, 257)?;
    let window = ts.matched_window(1.0);
    let psi = ts.wavefunction(&x)?;
    let big = forward_amplitude(&psi, &TransformPlan::new(x, grid(), grid(), window.clone())?)?;
    let back = inverse_amplitude(&big, &window, &x)?;
    let inner = Axis::new(-6.0, 6.0, 193)?;
    let full = inverse_amplitude(&big, &window, &inner)?.value;
    let pw = pointwise_inverse(&big, &window, 0.0, &inner)?;
    Ok(vec![
        Measurement::at_most("relative L2 error of inverse", back.value.relative_distance(&psi)?, 1e-8),
        Measurement::at_most("max |pointwise(y0=0) - inverse|", pw.max_abs_diff(&full), 1e-7),
    ])
}

fn check_gabor() -> Result<Vec<Measurement>> {
    let a = grid();
    let window = WindowSpec::standard();
    let psi = test_state().wavefunction(&a)?;
    let plan = TransformPlan::new(a, a, a, window.clone())?;
    let phi = gabor_transform(&psi, &reflected_window(&window, &a)?, &plan)?;
    let half = TransformPlan::new(a, a.scaled(0.5)?, a.scaled(0.5)?, window)?;
    let scaled = forward_amplitude(&psi, &half)?;
    let twisted = phi.map_with_coords(|q, p, v| v * C64::from_polar(1.0, q * p / 2.0));
    let relation = scaled.values().iter().zip(twisted.values()).map(|(s, t)| (s - 2.0 * t).norm()).fold(0.0, f64::max);
    let sf = symplectic_fourier(&forward_amplitude(&psi, &plan)?)?;
    Ok(vec![
        Measurement::at_most("max |Psi(q/2,p/2) - 2e^{iqp/2}Phi|", relation, 1e-9),
        Measurement::at_most("max |SF(Psi) - e^{iqp/2}Phi|", sf.max_abs_diff(&twisted)?, 1e-8),
    ])
}

/// `(1/π) ∬ W(q',p') e^{-(q-q')²-(p-p')²}` by separable quadrature.
pub fn gaussian_smoothing(w: &PhaseSpaceField) -> Result<PhaseSpaceField> {
    let smooth_rows = |f: &PhaseSpaceField| -> Result<PhaseSpaceField> {
        let pa = *f.p_axis();
        let weights = crate::numgrid::trapezoid_weights(&pa);
        let kernel: Vec<f64> = (0..pa.len()).map(|k| (-(k as f64 * pa.spacing()).powi(2)).exp()).collect();
        let np = pa.len();
        let mut out = vec![c(0.0, 0.0); f.values().len()];
        for (row_in, row_out) in f.values().chunks(np).zip(out.chunks_mut(np)) {
            for (i, o) in row_out.iter_mut().enumerate() {
                *o = (0..np).map(|j| row_in[j] * weights[j] * kernel[i.abs_diff(j)]).sum();
            }
        }
        PhaseSpaceField::new(*f.q_axis(), pa, out)
    };
    let along_p = smooth_rows(w)?;
    let along_q = smooth_rows(&along_p.transposed())?.transposed();
    Ok(along_q.scaled(c(1.0 / PI, 0.0)))
}

fn check_husimi() -> Result<Vec<Measurement>> {
    let a = grid();
    let ts = test_state();
    let window = WindowSpec::standard();
    let psi = ts.wavefunction(&x_axis())?;
    let big = forward_amplitude(&psi, &TransformPlan::new(x_axis(), a, a, window.clone())?)?;
    let spec = spectrogram_husimi(&big)?;
    let smoothed = gaussian_smoothing(&ts.wigner().sample(&a, &a)?)?;
    let r = Axis::new(-8.0, 8.0, 65)?;
    let kernel = cohen_kernel(&window, &r, &r)?;
    let expected = PhaseSpaceField::from_fn(r, r, |r, v| c((-(r * r + v * v) / 4.0).exp(), 0.0))?;
    let mass = integrate_2d(&spec)?.re;
    Ok(vec![
        Measurement::at_most("max |spectrogram - smoothed W|", spec.max_abs_diff(&smoothed)?, 1e-6),
        Measurement::at_most("max |Cohen kernel - e^{-(r^2+v^2)/4}|", kernel.max_abs_diff(&expected)?, 1e-10),
        Measurement::new("min spectrogram", spec.min_re(), Bound::Above, -1e-300),
        Measurement::at_most("|spectrogram mass - 1|", (mass - 1.0).abs(), 1e-8),
    ])
}

fn check_spectrum() -> Result<Vec<Measurement>> {
    let a = grid();
    let cfg = EvolutionConfig::oscillator(1e-3, 1, x_axis());
    let h = cfg.hamiltonian();
    let basis: Vec<PhaseSpaceField> =
        (0..=5).map(|n| oscillator_amplitude(n, &WindowSpec::standard())?.sample(&a, &a)).collect::<Result<_>>()?;
    let (mut energy, mut residual, mut gram) = (0.0f64, 0.0f64, 0.0f64);
    for (n, psi) in basis.iter().enumerate() {
        let en = n as f64 + 0.5;
        energy = energy.max((expectation(&h, psi)?.value - en).norm());
        let hpsi = hamiltonian_star_apply(&cfg, psi)?.value;
        residual = residual.max(hpsi.sub(&psi.scaled(c(en, 0.0)))?.norm_l2());
        for (m, other) in basis.iter().enumerate() {
            let target = if m == n { 1.0 } else { 0.0 };
            gram = gram.max((inner_product(other, psi)? - target).norm());
        }
    }
    Ok(vec![
        Measurement::at_most("max |<H> - (n+1/2)|, n<=5", energy, 1e-6),
        Measurement::at_most("max |Gram - I|", gram, 1e-8),
        Measurement::at_most("max ||H*Psi_n - E_n Psi_n||", residual, 1e-6),
    ])
}

fn check_free_particle(notes: &mut Vec<String>) -> Result<Vec<Measurement>> {
    let a = centred_grid();
    let x = Axis::new(-24.0, 24.0, 768)?;
    let steps = 1600;
    let mut cfg = EvolutionConfig::free(2.0 / steps as f64, steps, x).with_snapshots(4);
    cfg.q_axis = a;
    cfg.p_axis = a;
    let psi0 = free_particle_wavefunction(0.0, 1.0, &x)?;
    let snaps = evolve_amplitude(&psi0, &cfg)?;
    let mut worst = 0.0f64;
    let mut origin_at_one = f64::NAN;
    for s in &snaps {
        if [0.5, 1.0, 2.0].iter().any(|t| (s.t - t).abs() < 1e-12) {
            let exact = free_particle_amplitude(s.t, 1.0, 1.0, c(0.0, 0.0))?.sample(&a, &a)?;
            worst = worst.max(s.field.max_abs_diff(&exact)?);
        }
        if (s.t - 1.0).abs() < 1e-12 {
            origin_at_one = s.field.get(a.len() / 2, a.len() / 2).norm();
        }
    }
    let states = evolve_coordinate_at(&psi0, &cfg, &[0, steps])?;
    let drift = (states[1].norm_sq() - states[0].norm_sq()).abs();
    let exact_origin = 2.0 / (PI * 5f64.sqrt()).sqrt();
    notes.push(format!(
        "|Psi(0,0,1)| = {origin_at_one:.10}; the quoted literal {QUOTED_FREE_ORIGIN} differs from 2/sqrt(pi sqrt5) by {:.2e}",
        QUOTED_FREE_ORIGIN - exact_origin
    ));
    Ok(vec![
        Measurement::at_most("max snapshot error at t=0.5,1,2", worst, 1e-6),
        Measurement::at_most("norm drift over 1600 steps", drift, 1e-10),
        Measurement::at_most("| |Psi(0,0,1)| - 2/sqrt(pi sqrt5) |", (origin_at_one - exact_origin).abs(), 1e-6),
    ])
}

/// Complex field with independent uniform entries in `[-1, 1]²`.
pub fn random_field(q_axis: &Axis, p_axis: &Axis, seed: u64) -> Result<PhaseSpaceField> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values = (0..q_axis.len() * p_axis.len()).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    PhaseSpaceField::new(*q_axis, *p_axis, values)
}

fn check_subspace() -> Result<Vec<Measurement>> {
    let a = grid();
    let x = x_axis();
    let psi = test_state().wavefunction(&x)?;
    let mut worst_window = 0.0f64;
    let mut worst_state = 0.0f64;
    for window in [WindowSpec::standard(), WindowSpec::Gaussian { beta: 1.5, x_w: 0.5, k_w: -0.5 }] {
        let big = forward_amplitude(&psi, &TransformPlan::new(x, a, a, window.clone())?)?;
        worst_window = worst_window.max(subspace_residual(&big, &window)?);
        worst_state = worst_state.max(state_projection_residual(&big, &psi)?);
    }
    let noise = random_field(&a, &a, RANDOM_FIELD_SEED)?;
    Ok(vec![
        Measurement::at_most("subspace residual of transform outputs", worst_window, 1e-6),
        Measurement::at_most("state projection residual", worst_state, 1e-6),
        Measurement::new("subspace residual of seeded random field", subspace_residual(&noise, &WindowSpec::standard())?, Bound::Above, 0.1),
    ])
}

fn check_bargmann() -> Result<Vec<Measurement>> {
    let a = grid();
    let ts = test_state();
    let mut cr = 0.0f64;
    let mut adjoint = 0.0f64;
    for beta in [0.5, 1.0, 2.0] {
        let lambda = ts.matched_window(beta).lambda().expect("gaussian window");
        let g_test = bargmann_from_amplitude(&ts.amplitude(beta)?.sample(&a, &a)?, beta, lambda)?;
        cr = cr.max(cauchy_riemann_residual(&g_test, beta, lambda)?);
        for mu in [c(1.0, 0.5), c(-0.5, 1.0)] {
            let g = bargmann_from_amplitude(&coherent_amplitude(mu, beta, lambda)?.sample(&a, &a)?, beta, lambda)?;
            cr = cr.max(cauchy_riemann_residual(&g, beta, lambda)?);
            let lhs = bargmann_inner(&bargmann_operator(BargmannOperator::Annihilation, &g_test, beta, lambda)?, &g, beta, lambda)?;
            let rhs = bargmann_inner(&g_test, &bargmann_operator(BargmannOperator::Creation, &g, beta, lambda)?, beta, lambda)?;
            adjoint = adjoint.max((lhs - rhs).norm());
        }
    }
    Ok(vec![
        Measurement::at_most("max Cauchy-Riemann residual", cr, 1e-5),
        Measurement::at_most("max |<aG1,G2> - <G1,a+G2>|", adjoint, 1e-6),
    ])
}

fn check_expectations(notes: &mut Vec<String>) -> Result<Vec<Measurement>> {
    let ts = test_state();
    let x = x_axis();
    let big = forward_amplitude(&ts.wavefunction(&x)?, &TransformPlan::new(x, grid(), grid(), WindowSpec::standard())?)?;
    let mq = expectation(&PolySymbol::q(), &big)?.value.re;
    let mp = expectation(&PolySymbol::p(), &big)?.value.re;
    notes.push(format!(
        "computed <p> = {mp:.10}; the quoted literal {QUOTED_MEAN_MOMENTUM} differs from the exact expression by {:.2e}",
        ts.mean_momentum() - QUOTED_MEAN_MOMENTUM
    ));
    Ok(vec![
        Measurement::at_most("|<q> - 0.261204|", (mq - 0.261204).abs(), 1e-6),
        Measurement::at_most("|<p> - 8sqrt2/(9e^{1/3}sqrt3(1+2sqrt2))|", (mp - ts.mean_momentum()).abs(), 1e-6),
    ])
}

fn check_superposition() -> Result<Vec<Measurement>> {
    let a = grid();
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let (c1, c2) = (c(s, 0.0), c(s, 0.0));
    let p0 = oscillator_amplitude(0, &WindowSpec::standard())?.sample(&a, &a)?;
    let p1 = oscillator_amplitude(1, &WindowSpec::standard())?.sample(&a, &a)?;
    let mix = p0.combine(c1, &p1, c2)?;
    let w_mix = star_product(&mix, &mix.conj())?.value;
    let w0 = star_product(&p0, &p0.conj())?.value;
    let w1 = star_product(&p1, &p1.conj())?.value;
    let w01 = star_product(&p0, &p1.conj())?.value;
    let w10 = star_product(&p1, &p0.conj())?.value;
    let expanded = w0
        .scaled(c(c1.norm_sqr(), 0.0))
        .add(&w1.scaled(c(c2.norm_sqr(), 0.0)))?
        .add(&w01.scaled(c1 * c2.conj()))?
        .add(&w10.scaled(c2 * c1.conj()))?;
    let x = x_axis();
    let psi = Wavefunction1D::from_fn(x, |u| {
        let h0 = crate::numgrid::special::hermite_function(0, u);
        let h1 = crate::numgrid::special::hermite_function(1, u);
        c1 * h0 + c2 * h1
    })?;
    let direct = wigner_of(&psi, &a, &a)?;
    let mod_expanded = p0
        .modulus_sq()
        .scaled(c(c1.norm_sqr(), 0.0))
        .add(&p1.modulus_sq().scaled(c(c2.norm_sqr(), 0.0)))?
        .add(&p0.mul(&p1.conj())?.scaled(c1 * c2.conj()))?
        .add(&p1.mul(&p0.conj())?.scaled(c2 * c1.conj()))?;
    Ok(vec![
        Measurement::at_most("max |W_12 - expansion|", w_mix.max_abs_diff(&expanded)?, 1e-6),
        Measurement::at_most("max |W_12 - Wigner of superposed state|", w_mix.max_abs_diff(&direct)?, 1e-6),
        Measurement::at_most("max ||Psi_12|^2 - expansion|", mix.modulus_sq().max_abs_diff(&mod_expanded)?, 1e-6),
    ])
}

fn check_figures() -> Result<Vec<Measurement>> {
    let a = centred_grid();
    let figs = (1..=crate::figures::FIGURE_COUNT).map(|n| figure(n, &a, &a)).collect::<Result<Vec<_>>>()?;
    let f = |n: usize, name: &str| figs[n - 1].field(name).cloned().expect("figure field");
    // figure 1 against the numerical transform of the test state
    let ts = test_state();
    let x = x_axis();
    let num = forward_amplitude(&ts.wavefunction(&x)?, &TransformPlan::new(x, a, a, ts.matched_window(1.0))?)?;
    let re_err = num.map(|v| c(v.re, 0.0)).max_abs_diff(&f(1, "re_psi"))?;
    let im_err = num.map(|v| c(v.im, 0.0)).max_abs_diff(&f(1, "im_psi"))?;
    let (vq_half, _) = marginal_variances(&f(3, "modulus_sq_beta_0.5"))?;
    let (vq_two, _) = marginal_variances(&f(3, "modulus_sq_beta_2"))?;
    let origin = a.len() / 2;
    let fig5 = f(5, "modulus_sq");
    let fig5_bad = fig5.values().iter().filter(|v| !(v.re.is_finite() && v.im.is_finite())).count();
    // figure 6: |Re Ψ| is bounded by the eigenamplitude modulus √(2/π)|φ̃₀(2p-k₀)|
    let window = WindowSpec::Gaussian { beta: 1.0, x_w: 4.0, k_w: -2.0 };
    let fig6 = f(6, "re_psi");
    let bound_violation = fig6
        .map_with_coords(|_, p, v| c((v.re.abs() - (2.0 / PI).sqrt() * window.eval_momentum(2.0 * p + 2.0).norm()).max(0.0), 0.0))
        .max_abs();
    Ok(vec![
        Measurement::at_most("figure 1: max |closed form - numerical transform|", re_err.max(im_err), 1e-7),
        Measurement::new("figure 2: min W", f(2, "wigner").min_re(), Bound::Below, 0.0),
        Measurement::new("figure 3: Var_q(beta=2) / Var_q(beta=0.5)", vq_two / vq_half, Bound::Below, 1.0),
        Measurement::at_most("figure 4: |W_1(0,0) + 1/pi|", (f(4, "wigner").get(origin, origin).re + 1.0 / PI).abs(), 1e-6),
        Measurement::at_most("figure 5: non-finite entries", fig5_bad as f64, 0.0),
        Measurement::new("figure 5: peak |Psi_1|^2", fig5.max_abs_re(), Bound::Above, 0.0),
        Measurement::at_most("figure 6: |Re Psi| above eigenamplitude envelope", bound_violation, 1e-15),
    ])
}
