//! Time evolution: split-step propagation in coordinate space followed by the
//! forward transform, eigenphase evolution, and the phase-space Schrödinger
//! residual as a diagnostic.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::Serialize;

use crate::error::{Checked, Error, Result};
use crate::numgrid::quad::inner_product;
use crate::numgrid::special::hermite_function;
use crate::numgrid::spectral::fft_wavenumbers;
use crate::numgrid::{Axis, PhaseSpaceField, Wavefunction1D};
use crate::staralg::{bopp_apply, PolySymbol, Side};
use crate::windows::WindowSpec;
use crate::xform::{forward_amplitude, TransformPlan};

/// Largest polynomial degree accepted for the potential.
pub const MAX_POTENTIAL_DEGREE: usize = 8;

/// Largest deviation of a basis Gram matrix from the identity.
pub const GRAM_TOLERANCE: f64 = 1e-6;

/// Propagation settings for `H = p²/2 + V(q)`.
#[derive(Debug, Clone)]
pub struct EvolutionConfig {
    /// `V(q)`; must not depend on `p`.
    pub potential: PolySymbol,
    pub dt: f64,
    pub steps: usize,
    pub window: WindowSpec,
    pub x_axis: Axis,
    pub q_axis: Axis,
    pub p_axis: Axis,
    /// Number of uniform snapshot intervals; snapshots include `t = 0`.
    pub snapshots: usize,
}

impl EvolutionConfig {
    /// Free particle on the default phase-space grid.
    pub fn free(dt: f64, steps: usize, x_axis: Axis) -> Self {
        EvolutionConfig {
            potential: PolySymbol::zero(),
            dt,
            steps,
            window: WindowSpec::standard(),
            x_axis,
            q_axis: Axis::default_grid(),
            p_axis: Axis::default_grid(),
            snapshots: 10,
        }
    }

    /// Harmonic oscillator `V = q²/2` on the default phase-space grid.
    pub fn oscillator(dt: f64, steps: usize, x_axis: Axis) -> Self {
        EvolutionConfig { potential: PolySymbol::monomial(C64::new(0.5, 0.0), 2, 0), ..Self::free(dt, steps, x_axis) }
    }

    pub fn with_window(mut self, window: WindowSpec) -> Self {
        self.window = window;
        self
    }

    pub fn with_snapshots(mut self, snapshots: usize) -> Self {
        self.snapshots = snapshots;
        self
    }

    /// `H = p²/2 + V(q)`.
    pub fn hamiltonian(&self) -> PolySymbol {
        PolySymbol::monomial(C64::new(0.5, 0.0), 0, 2).add(&self.potential)
    }

    pub fn total_time(&self) -> f64 {
        self.dt * self.steps as f64
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(Error::Config(format!("time step must be positive, got {}", self.dt)));
        }
        if self.potential.p_degree() > 0 {
            return Err(Error::Config("potential must depend on q only".into()));
        }
        if !self.potential.is_real() {
            return Err(Error::Config("potential must have real coefficients".into()));
        }
        if self.potential.degree() > MAX_POTENTIAL_DEGREE {
            return Err(Error::Degree(self.potential.degree(), MAX_POTENTIAL_DEGREE));
        }
        let k_max = PI / self.x_axis.spacing();
        let phase = self.dt * k_max * k_max / 2.0;
        if phase >= PI {
            return Err(Error::Config(format!(
                "split-step unstable: dt·k_max²/2 = {phase:.3} ≥ π; use dt < {:.3e}",
                2.0 * PI / (k_max * k_max)
            )));
        }
        self.window.validate()
    }

    /// Step indices at which snapshots are taken.
    pub fn snapshot_steps(&self) -> Vec<usize> {
        let n = self.snapshots.max(1);
        let mut out: Vec<usize> = (0..=n).map(|k| ((k * self.steps) as f64 / n as f64).round() as usize).collect();
        out.dedup();
        out
    }
}

fn potential_phase(cfg: &EvolutionConfig, x: &Axis, fraction: f64) -> Vec<C64> {
    x.points().map(|xv| C64::from_polar(1.0, -cfg.potential.eval(xv, 0.0).re * cfg.dt * fraction)).collect()
}

struct SplitStepper {
    half_v: Vec<C64>,
    kinetic: Vec<C64>,
    fwd: std::sync::Arc<dyn rustfft::Fft<f64>>,
    inv: std::sync::Arc<dyn rustfft::Fft<f64>>,
}

impl SplitStepper {
    fn new(cfg: &EvolutionConfig, x: &Axis) -> Self {
        let n = x.len();
        let mut planner = FftPlanner::new();
        let kinetic = fft_wavenumbers(n, x.spacing()).iter().map(|k| C64::from_polar(1.0, -k * k * cfg.dt / 2.0)).collect();
        SplitStepper {
            half_v: potential_phase(cfg, x, 0.5),
            kinetic,
            fwd: planner.plan_fft_forward(n),
            inv: planner.plan_fft_inverse(n),
        }
    }

    /// One Strang step `e^{-iVdt/2} e^{-iTdt} e^{-iVdt/2}`.
    fn step(&self, buf: &mut [C64]) {
        let n = buf.len() as f64;
        for (b, v) in buf.iter_mut().zip(&self.half_v) {
            *b *= v;
        }
        self.fwd.process(buf);
        for (b, k) in buf.iter_mut().zip(&self.kinetic) {
            *b *= k / n;
        }
        self.inv.process(buf);
        for (b, v) in buf.iter_mut().zip(&self.half_v) {
            *b *= v;
        }
    }
}

fn check_initial(psi0: &Wavefunction1D, cfg: &EvolutionConfig) -> Result<()> {
    if !psi0.axis().same_as(&cfg.x_axis) {
        return Err(Error::Shape("initial wavefunction must be sampled on the configured x axis".into()));
    }
    Ok(())
}

/// Propagates `i∂_tψ = (-½∂²_x + V)ψ` by `steps` Strang split steps,
/// returning the states at the requested step indices (ascending).
pub fn evolve_coordinate_at(psi0: &Wavefunction1D, cfg: &EvolutionConfig, at_steps: &[usize]) -> Result<Vec<Wavefunction1D>> {
    cfg.validate()?;
    check_initial(psi0, cfg)?;
    let stepper = SplitStepper::new(cfg, &cfg.x_axis);
    let mut buf = psi0.values().to_vec();
    let mut out = Vec::with_capacity(at_steps.len());
    let mut done = 0;
    for &target in at_steps {
        if target < done {
            return Err(Error::Config("snapshot steps must be ascending".into()));
        }
        while done < target {
            stepper.step(&mut buf);
            done += 1;
        }
        out.push(Wavefunction1D::new(cfg.x_axis, buf.clone())?);
    }
    Ok(out)
}

/// State after `cfg.steps` split steps.
pub fn evolve_coordinate(psi0: &Wavefunction1D, cfg: &EvolutionConfig) -> Result<Wavefunction1D> {
    Ok(evolve_coordinate_at(psi0, cfg, &[cfg.steps])?.remove(0))
}

/// Phase-space amplitude at one time.
#[derive(Debug, Clone)]
pub struct Snapshot {
    pub step: usize,
    pub t: f64,
    pub field: PhaseSpaceField,
}

/// Summary of a snapshot, suitable for reports.
#[derive(Debug, Clone, Serialize)]
pub struct SnapshotSummary {
    pub step: usize,
    pub t: f64,
    pub norm_sq: f64,
}

impl Snapshot {
    pub fn summary(&self) -> SnapshotSummary {
        SnapshotSummary { step: self.step, t: self.t, norm_sq: self.field.norm_l2().powi(2) }
    }
}

/// `Ψ(·,·,t_k)` = forward transform of the split-step state at each snapshot.
pub fn evolve_amplitude(psi0: &Wavefunction1D, cfg: &EvolutionConfig) -> Result<Vec<Snapshot>> {
    let steps = cfg.snapshot_steps();
    let states = evolve_coordinate_at(psi0, cfg, &steps)?;
    let plan = TransformPlan::new(cfg.x_axis, cfg.q_axis, cfg.p_axis, cfg.window.clone())?;
    states
        .par_iter()
        .zip(&steps)
        .map(|(psi, &step)| Ok(Snapshot { step, t: step as f64 * cfg.dt, field: forward_amplitude(psi, &plan)? }))
        .collect()
}

/// `H(q_BL, p_BL) Ψ = H ⋆ Ψ`.
pub fn hamiltonian_star_apply(cfg: &EvolutionConfig, psi_field: &PhaseSpaceField) -> Result<Checked<PhaseSpaceField>> {
    if cfg.potential.degree() > MAX_POTENTIAL_DEGREE {
        return Err(Error::Degree(cfg.potential.degree(), MAX_POTENTIAL_DEGREE));
    }
    if cfg.potential.p_degree() > 0 {
        return Err(Error::Config("potential must depend on q only".into()));
    }
    bopp_apply(&cfg.hamiltonian(), Side::Left, psi_field)
}

/// `‖i ∂_tΨ - H⋆Ψ‖ / ‖Ψ‖` with `∂_t` from the centred difference of
/// `before` and `after`, which lie `dt` on either side of `at`.
pub fn schrodinger_residual(
    cfg: &EvolutionConfig,
    before: &PhaseSpaceField,
    at: &PhaseSpaceField,
    after: &PhaseSpaceField,
    dt: f64,
) -> Result<f64> {
    let dpsi = after.sub(before)?.scaled(C64::new(0.0, 1.0 / (2.0 * dt)));
    let h = hamiltonian_star_apply(cfg, at)?.value;
    Ok(dpsi.sub(&h)?.norm_l2() / at.norm_l2())
}

/// Largest deviation of the Gram matrix of `basis` from the identity.
pub fn gram_deviation(basis: &[PhaseSpaceField]) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for (m, a) in basis.iter().enumerate() {
        for (n, b) in basis.iter().enumerate().skip(m) {
            let target = if m == n { 1.0 } else { 0.0 };
            worst = worst.max((inner_product(a, b)? - target).norm());
        }
    }
    Ok(worst)
}

/// Expansion coefficients `c_n = ⟨Ψ_n, Ψ₀⟩` in an orthonormal basis.
pub fn eigen_expand(psi0: &PhaseSpaceField, basis: &[PhaseSpaceField]) -> Result<Vec<C64>> {
    let dev = gram_deviation(basis)?;
    if dev > GRAM_TOLERANCE {
        return Err(Error::Precondition(format!("basis is not orthonormal (Gram deviation {dev:.3e})")));
    }
    basis.iter().map(|b| inner_product(b, psi0)).collect()
}

/// `Σ c_n e^{-iE_n t} Ψ_n`, with `t` measured from the expansion time.
pub fn evolve_by_phases(coeffs: &[C64], energies: &[f64], basis: &[PhaseSpaceField], t: f64) -> Result<PhaseSpaceField> {
    if coeffs.len() != energies.len() || coeffs.len() != basis.len() {
        return Err(Error::Shape(format!(
            "{} coefficients, {} energies, {} basis fields",
            coeffs.len(),
            energies.len(),
            basis.len()
        )));
    }
    let first = basis.first().ok_or_else(|| Error::Shape("empty basis".into()))?;
    let mut acc = PhaseSpaceField::zeros(*first.q_axis(), *first.p_axis());
    for ((cn, en), b) in coeffs.iter().zip(energies).zip(basis) {
        acc = acc.combine(C64::new(1.0, 0.0), b, cn * C64::from_polar(1.0, -en * t))?;
    }
    Ok(acc)
}

/// Amplitudes of the oscillator eigenstates `n = 0..count` for the plan's
/// window, by transforming the Hermite functions.
pub fn oscillator_basis(count: usize, plan: &TransformPlan) -> Result<Vec<PhaseSpaceField>> {
    (0..count)
        .into_par_iter()
        .map(|n| {
            let psi = Wavefunction1D::from_fn(plan.x_axis, |x| C64::new(hermite_function(n, x), 0.0))?;
            forward_amplitude(&psi, plan)
        })
        .collect()
}

/// Oscillator energies `n + ½` for `n = 0..count`.
pub fn oscillator_energies(count: usize) -> Vec<f64> {
    (0..count).map(|n| n as f64 + 0.5).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::{coherent_amplitude, coherent_psi, free_particle_amplitude, free_particle_psi, oscillator_amplitude};
    use crate::staralg::{expectation, star_product};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn wide() -> Axis {
        Axis::new(-24.0, 24.0, 768).unwrap()
    }

    fn coarse() -> Axis {
        Axis::new(-12.0, 12.0, 128).unwrap()
    }

    fn basis(count: usize) -> Vec<PhaseSpaceField> {
        let g = Axis::default_grid();
        let plan = TransformPlan::new(Axis::new(-16.0, 16.0, 512).unwrap(), g, g, WindowSpec::standard()).unwrap();
        oscillator_basis(count, &plan).unwrap()
    }

    #[test]
    fn transformed_basis_matches_closed_forms() {
        let g = Axis::default_grid();
        for (n, f) in basis(13).iter().enumerate() {
            let exact = oscillator_amplitude(n, &WindowSpec::standard()).unwrap().sample(&g, &g).unwrap();
            assert!(f.max_abs_diff(&exact).unwrap() < 1e-10, "n={n}");
        }
    }

    #[test]
    fn zero_steps_is_identity() {
        let psi = Wavefunction1D::from_fn(wide(), |x| coherent_psi(c(1.0, 0.5), x)).unwrap();
        let cfg = EvolutionConfig::free(1e-3, 0, wide());
        assert_eq!(evolve_coordinate(&psi, &cfg).unwrap(), psi);
    }

    #[test]
    fn free_gaussian_spreads_as_predicted() {
        let x = wide();
        let psi0 = Wavefunction1D::from_fn(x, |u| free_particle_psi(0.0, 1.0, u)).unwrap();
        let cfg = EvolutionConfig::free(1e-3, 1000, x);
        let psi = evolve_coordinate(&psi0, &cfg).unwrap();
        let exact = Wavefunction1D::from_fn(x, |u| free_particle_psi(1.0, 1.0, u)).unwrap();
        assert!(psi.max_abs_diff(&exact) < 1e-8);
        assert!((psi.norm_sq() - psi0.norm_sq()).abs() < 1e-10);
    }

    #[test]
    fn oscillator_returns_with_minus_sign_after_full_period() {
        let x = wide();
        let psi0 = Wavefunction1D::from_fn(x, |u| coherent_psi(c(1.0, 0.5), u)).unwrap();
        let steps = 8000;
        let cfg = EvolutionConfig::oscillator(2.0 * PI / steps as f64, steps, x);
        let psi = evolve_coordinate(&psi0, &cfg).unwrap();
        assert!(psi.max_abs_diff(&psi0.scaled(c(-1.0, 0.0))) < 1e-6);
        assert!((psi.norm_sq() - psi0.norm_sq()).abs() < 1e-10);
    }

    #[test]
    fn strang_splitting_is_second_order() {
        let x = coarse();
        let psi0 = Wavefunction1D::from_fn(x, |u| coherent_psi(c(1.0, 0.5), u)).unwrap();
        let err = |steps: usize| {
            let cfg = EvolutionConfig::oscillator(PI / steps as f64, steps, x);
            let psi = evolve_coordinate(&psi0, &cfg).unwrap();
            // after half a period the packet sits at -μ; compare moduli
            let exact = Wavefunction1D::from_fn(x, |u| coherent_psi(c(-1.0, -0.5), u)).unwrap();
            psi.values().iter().zip(exact.values()).map(|(a, b)| (a.norm() - b.norm()).abs()).fold(0.0, f64::max)
        };
        let ratio = err(200) / err(400);
        assert!((ratio - 4.0).abs() < 0.2, "ratio {ratio}");
    }

    #[test]
    fn config_validation() {
        let mut cfg = EvolutionConfig::free(0.1, 10, wide());
        assert!(matches!(cfg.validate(), Err(Error::Config(_))));
        cfg.dt = 1e-3;
        assert!(cfg.validate().is_ok());
        cfg.potential = PolySymbol::monomial(c(1.0, 0.0), 10, 0);
        assert!(matches!(cfg.validate(), Err(Error::Degree(10, 8))));
        cfg.potential = PolySymbol::monomial(c(1.0, 0.0), 1, 1);
        assert!(matches!(cfg.validate(), Err(Error::Config(_))));
        assert_eq!(EvolutionConfig::free(1e-3, 100, wide()).snapshot_steps(), (0..=10).map(|k| 10 * k).collect::<Vec<_>>());
    }

    #[test]
    fn free_particle_snapshots_match_closed_form() {
        let cfg = EvolutionConfig::free(2.0 / 1600.0, 1600, wide()).with_snapshots(4);
        let psi0 = Wavefunction1D::from_fn(cfg.x_axis, |u| free_particle_psi(0.0, 1.0, u)).unwrap();
        let snaps = evolve_amplitude(&psi0, &cfg).unwrap();
        assert_eq!(snaps.len(), 5);
        for s in &snaps {
            let exact = free_particle_amplitude(s.t, 1.0, 1.0, c(0.0, 0.0)).unwrap().sample(&cfg.q_axis, &cfg.p_axis).unwrap();
            assert!(s.field.max_abs_diff(&exact).unwrap() < 1e-6, "t={}", s.t);
            assert!((s.summary().norm_sq - 1.0).abs() < 1e-8);
        }
        let plan = TransformPlan::new(cfg.x_axis, cfg.q_axis, cfg.p_axis, cfg.window.clone()).unwrap();
        assert_eq!(snaps[0].field, forward_amplitude(&psi0, &plan).unwrap());
    }

    #[test]
    fn hamiltonian_on_oscillator_eigenfunctions() {
        let cfg = EvolutionConfig::oscillator(1e-3, 1, wide());
        for (n, psi) in basis(5).iter().enumerate() {
            let h = hamiltonian_star_apply(&cfg, psi).unwrap().value;
            let r = h.sub(&psi.scaled(c(n as f64 + 0.5, 0.0))).unwrap().norm_l2() / psi.norm_l2();
            assert!(r < 1e-6, "n={n}: {r}");
        }
    }

    #[test]
    fn hamiltonian_bopp_agrees_with_integral_star_product() {
        let cfg = EvolutionConfig::oscillator(1e-3, 1, wide());
        let g = Axis::default_grid();
        let taper = |x: f64| (-(x / 6.5).powi(32)).exp();
        let hsym = cfg.hamiltonian();
        let hfield = PhaseSpaceField::from_fn(g, g, |q, p| hsym.eval(q, p) * taper(q) * taper(p)).unwrap();
        let psi = coherent_amplitude(c(0.5, -0.5), 1.0, c(0.0, 0.0)).unwrap().sample(&g, &g).unwrap();
        let integral = star_product(&hfield, &psi).unwrap().value;
        let bopp = hamiltonian_star_apply(&cfg, &psi).unwrap().value;
        assert!(integral.max_abs_diff_within(&bopp, 3.0, 3.0).unwrap() < 1e-6);
    }

    #[test]
    fn expansion_of_basis_element_and_coherent_state() {
        let basis = basis(21);
        let c2 = eigen_expand(&basis[2], &basis).unwrap();
        for (n, cn) in c2.iter().enumerate() {
            let target = if n == 2 { 1.0 } else { 0.0 };
            assert!((cn - target).norm() < 1e-10);
        }
        let mu = c(0.8, -0.6);
        let g = Axis::default_grid();
        let psi = coherent_amplitude(mu, 1.0, c(0.0, 0.0)).unwrap().sample(&g, &g).unwrap();
        let coeffs = eigen_expand(&psi, &basis).unwrap();
        let m = mu.norm_sqr() / 2.0;
        let mut total = 0.0;
        for (n, cn) in coeffs.iter().enumerate() {
            let poisson = (-m).exp() * m.powi(n as i32) / crate::numgrid::special::factorial(n);
            assert!((cn.norm_sqr() - poisson).abs() < 1e-10, "n={n}");
            total += cn.norm_sqr();
        }
        assert!((1.0 - total).abs() < 1e-8);
    }

    #[test]
    fn non_orthonormal_basis_is_rejected() {
        let basis = basis(2);
        let bad = vec![basis[0].clone(), basis[0].add(&basis[1]).unwrap()];
        assert!(matches!(eigen_expand(&basis[0], &bad), Err(Error::Precondition(_))));
        assert!(matches!(evolve_by_phases(&[c(1.0, 0.0)], &[0.5, 1.5], &basis, 1.0), Err(Error::Shape(_))));
    }

    #[test]
    fn eigenphase_evolution() {
        let basis = basis(21);
        let energies = oscillator_energies(21);
        let g = Axis::default_grid();
        let psi = coherent_amplitude(c(0.8, -0.6), 1.0, c(0.0, 0.0)).unwrap().sample(&g, &g).unwrap();
        let coeffs = eigen_expand(&psi, &basis).unwrap();
        let at0 = evolve_by_phases(&coeffs, &energies, &basis, 0.0).unwrap();
        assert!(at0.max_abs_diff(&psi).unwrap() < 1e-8);
        let period = evolve_by_phases(&coeffs, &energies, &basis, 2.0 * PI).unwrap();
        assert!(period.max_abs_diff(&psi.scaled(c(-1.0, 0.0))).unwrap() < 1e-8);
        let single = evolve_by_phases(&[c(1.0, 0.0)], &[2.5], &basis[2..3], 1.3).unwrap();
        let diff = single
            .values()
            .iter()
            .zip(basis[2].values())
            .map(|(a, b)| (a.norm() - b.norm()).abs())
            .fold(0.0, f64::max);
        assert!(diff < 1e-15);
    }

    #[test]
    fn phases_and_split_step_agree_and_conserve_energy() {
        let x = wide();
        let mu = c(0.8, -0.6);
        let psi0 = Wavefunction1D::from_fn(x, |u| coherent_psi(mu, u)).unwrap();
        let steps = 4000;
        let cfg = EvolutionConfig::oscillator(2.0 / steps as f64, steps, x).with_snapshots(2);
        let snaps = evolve_amplitude(&psi0, &cfg).unwrap();
        let basis = basis(21);
        let coeffs = eigen_expand(&snaps[0].field, &basis).unwrap();
        let e0 = expectation(&cfg.hamiltonian(), &snaps[0].field).unwrap().value.re;
        assert!((e0 - (mu.norm_sqr() / 2.0 + 0.5)).abs() < 1e-8);
        for s in &snaps {
            let by_phases = evolve_by_phases(&coeffs, &oscillator_energies(21), &basis, s.t).unwrap();
            assert!(s.field.max_abs_diff(&by_phases).unwrap() < 1e-6, "t={}", s.t);
            let e = expectation(&cfg.hamiltonian(), &s.field).unwrap().value.re;
            assert!(((e - e0) / e0).abs() < 1e-6);
        }
    }

    #[test]
    fn schrodinger_residual_shrinks_with_refinement() {
        let x = coarse();
        let psi0 = Wavefunction1D::from_fn(x, |u| coherent_psi(c(1.0, 0.0), u)).unwrap();
        let residual = |dt: f64| {
            let cfg = EvolutionConfig::oscillator(dt, 2, x).with_snapshots(2);
            let s = evolve_amplitude(&psi0, &cfg).unwrap();
            schrodinger_residual(&cfg, &s[0].field, &s[1].field, &s[2].field, dt).unwrap()
        };
        let (coarse, fine) = (residual(2e-2), residual(5e-3));
        assert!(fine < coarse / 4.0, "{coarse} {fine}");
        assert!(fine < 1e-4);
    }
}
