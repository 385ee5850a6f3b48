//! Subcommand implementations. Each returns the metadata it wrote.

use std::f64::consts::PI;
use std::path::Path;

use phasepad::analytic::{
    bargmann_from_amplitude, cauchy_riemann_residual, coherent_wavefunction, free_particle_amplitude,
    free_particle_wavefunction, momentum_eigenamplitude, oscillator_amplitude, position_eigenamplitude, test_state,
    CAUCHY_RIEMANN_TOLERANCE,
};
use phasepad::dynamics::{evolve_amplitude, evolve_coordinate_at, EvolutionConfig};
use phasepad::figures::{figure, marginal_variances};
use phasepad::numgrid::special::hermite_function;
use phasepad::numgrid::{integrate_2d, PhaseSpaceField, Wavefunction1D};
use phasepad::staralg::{wigner_of, PolySymbol};
use phasepad::validate::{run_check, Bound, CHECK_COUNT};
use phasepad::xform::{forward_amplitude, spectrogram_husimi, TransformPlan};
use phasepad::{Error, C64};

use crate::config::{format_window, Command, PotentialSpec, RunConfig, StateSpec};
use crate::error::CliError;
use crate::output::{ensure_dir, read_field, read_wavefunction, write_field, CheckRecord, FieldKind, Metadata};

/// Tolerance for the mass of emitted probability-like grids.
pub const MASS_TOLERANCE: f64 = 1e-6;
/// Tolerance for the evolution checks against closed forms.
pub const EVOLUTION_TOLERANCE: f64 = 1e-6;
/// Allowed norm drift of the split-step propagation.
pub const NORM_DRIFT_TOLERANCE: f64 = 1e-10;

struct Run<'a> {
    cfg: &'a RunConfig,
    meta: Metadata,
}

impl<'a> Run<'a> {
    fn new(cfg: &'a RunConfig) -> Result<Self, CliError> {
        ensure_dir(&cfg.out)?;
        let mut meta = Metadata::new(&cfg.command.to_string(), cfg.to_toml());
        meta.window = Some(cfg.window.clone());
        Ok(Run { cfg, meta })
    }

    fn stem(&self, name: &str) -> String {
        match self.cfg.command {
            Command::Figure(n) => format!("figure{n}_{name}"),
            c => format!("{}_{name}", c.name()),
        }
    }

    fn write(&mut self, name: &str, field: &PhaseSpaceField, kind: FieldKind) -> Result<(), CliError> {
        let rec = write_field(&self.cfg.out, &self.stem(name), field, kind, self.cfg.format)?;
        self.meta.fields.push(rec);
        Ok(())
    }

    fn check(&mut self, rec: CheckRecord) {
        self.meta.checks.push(rec);
    }

    fn param(&mut self, key: &str, value: f64) {
        self.meta.parameters.insert(key.into(), value);
    }

    /// Re-reads the emitted file `name` and checks its mass.
    fn mass_check_from_file(&mut self, name: &str) -> Result<(), CliError> {
        let rec = self.meta.fields.iter().find(|f| f.name == self.stem(name)).expect("field written").clone();
        let (field, _) = read_field(&self.cfg.out.join(&rec.file))?;
        let mass = integrate_2d(&field)?.re;
        self.param(&format!("{name}_mass"), mass);
        self.check(CheckRecord::at_most(&format!("{name} integrates to 1"), (mass - 1.0).abs(), MASS_TOLERANCE));
        Ok(())
    }

    fn finish(self) -> Result<Metadata, CliError> {
        self.meta.write(&metadata_path(self.cfg))?;
        Ok(self.meta)
    }
}

/// Samples the configured state on the coordinate axis.
pub fn sample_state(cfg: &RunConfig) -> Result<Wavefunction1D, CliError> {
    let x = cfg.grid.x;
    Ok(match &cfg.state {
        StateSpec::Test => test_state().wavefunction(&x)?,
        StateSpec::Coherent { mu } => coherent_wavefunction(*mu, &x)?,
        StateSpec::Oscillator { n } => Wavefunction1D::from_fn(x, |u| C64::new(hermite_function(*n, u), 0.0))?,
        StateSpec::Gaussian { gamma } => free_particle_wavefunction(0.0, *gamma, &x)?,
        StateSpec::File { path } => read_wavefunction(path)?,
        s @ (StateSpec::Position { .. } | StateSpec::Momentum { .. }) => {
            return Err(CliError::Config(format!("state '{s}' is not normalizable; use the eigenstate command")))
        }
    })
}

fn plan_for(cfg: &RunConfig, psi: &Wavefunction1D) -> Result<TransformPlan, CliError> {
    Ok(TransformPlan::new(*psi.axis(), cfg.grid.q, cfg.grid.p, cfg.window.clone())?)
}

fn amplitude_of(run: &mut Run) -> Result<PhaseSpaceField, CliError> {
    let psi = sample_state(run.cfg)?;
    run.meta.state = Some(run.cfg.state.to_string());
    let norm = psi.norm_sq();
    run.param("state_norm_sq", norm);
    if (norm - 1.0).abs() > 1e-6 {
        run.meta.warnings.push(phasepad::Warning::Normalization { norm_sq: norm });
    }
    Ok(forward_amplitude(&psi, &plan_for(run.cfg, &psi)?)?)
}

fn real_part(f: &PhaseSpaceField) -> PhaseSpaceField {
    f.map(|v| C64::new(v.re, 0.0))
}

pub fn amplitude(cfg: &RunConfig) -> Result<Metadata, CliError> {
    let mut run = Run::new(cfg)?;
    let psi = amplitude_of(&mut run)?;
    run.write("psi", &psi, FieldKind::Complex)?;
    run.write("modulus_sq", &psi.modulus_sq(), FieldKind::Real)?;
    run.mass_check_from_file("modulus_sq")?;
    run.finish()
}

pub fn wigner(cfg: &RunConfig) -> Result<Metadata, CliError> {
    let mut run = Run::new(cfg)?;
    let psi = sample_state(cfg)?;
    run.meta.state = Some(cfg.state.to_string());
    run.meta.window = None;
    let w = wigner_of(&psi, &cfg.grid.q, &cfg.grid.p)?;
    run.param("min", w.min_re());
    run.write("wigner", &w, FieldKind::Real)?;
    run.mass_check_from_file("wigner")?;
    run.finish()
}

pub fn husimi(cfg: &RunConfig) -> Result<Metadata, CliError> {
    let mut run = Run::new(cfg)?;
    let psi = amplitude_of(&mut run)?;
    let q = spectrogram_husimi(&psi)?;
    let min = q.min_re();
    run.param("min", min);
    run.check(CheckRecord::at_most("spectrogram is nonnegative", (-min).max(0.0), 1e-12));
    run.write("husimi", &q, FieldKind::Real)?;
    run.mass_check_from_file("husimi")?;
    run.finish()
}

pub fn bargmann(cfg: &RunConfig) -> Result<Metadata, CliError> {
    let (beta, lambda) = match (cfg.window.gaussian_params(), cfg.window.lambda()) {
        (Some((beta, _, _)), Some(lambda)) => (beta, lambda),
        _ => return Err(CliError::Config(format!("bargmann needs a Gaussian window, got {}", format_window(&cfg.window)))),
    };
    let mut run = Run::new(cfg)?;
    let psi = amplitude_of(&mut run)?;
    let g = bargmann_from_amplitude(&psi, beta, lambda)?;
    run.param("beta", beta);
    run.param("lambda_re", lambda.re);
    run.param("lambda_im", lambda.im);
    let cr = cauchy_riemann_residual(&g, beta, lambda)?;
    run.check(CheckRecord::at_most("Cauchy-Riemann residual", cr, CAUCHY_RIEMANN_TOLERANCE));
    run.write("g", &g, FieldKind::Complex)?;
    run.finish()
}

pub fn eigenstate(cfg: &RunConfig) -> Result<Metadata, CliError> {
    let mut run = Run::new(cfg)?;
    run.meta.state = Some(cfg.state.to_string());
    let (q, p) = (&cfg.grid.q, &cfg.grid.p);
    let psi = match &cfg.state {
        StateSpec::Position { x0 } => {
            run.meta.notes.push("delta-normalized: no mass check".into());
            position_eigenamplitude(*x0, &cfg.window)?.sample(q, p)?
        }
        StateSpec::Momentum { k0 } => {
            run.meta.notes.push("delta-normalized: no mass check".into());
            momentum_eigenamplitude(*k0, &cfg.window)?.sample(q, p)?
        }
        StateSpec::Oscillator { n } => match oscillator_amplitude(*n, &cfg.window).and_then(|a| a.sample(q, p)) {
            Ok(field) => {
                run.meta.notes.push("closed-form amplitude".into());
                field
            }
            Err(Error::NotImplemented(_)) | Err(Error::Domain(_)) => {
                run.meta.notes.push("numerical transform of the Hermite function".into());
                amplitude_of(&mut run)?
            }
            Err(e) => return Err(e.into()),
        },
        s => return Err(CliError::Config(format!("eigenstate needs position, momentum or oscillator, got '{s}'"))),
    };
    run.write("psi", &psi, FieldKind::Complex)?;
    run.write("modulus_sq", &psi.modulus_sq(), FieldKind::Real)?;
    if matches!(cfg.state, StateSpec::Oscillator { .. }) {
        run.mass_check_from_file("modulus_sq")?;
    }
    run.finish()
}

fn potential_symbol(p: &PotentialSpec) -> PolySymbol {
    match p {
        PotentialSpec::Free => PolySymbol::zero(),
        PotentialSpec::Oscillator => PolySymbol::monomial(C64::new(0.5, 0.0), 2, 0),
        PotentialSpec::Poly(c) => c
            .iter()
            .fold(PolySymbol::zero(), |acc, (k, v)| acc.add(&PolySymbol::monomial(C64::new(*v, 0.0), *k, 0))),
    }
}

pub fn evolve(cfg: &RunConfig) -> Result<Metadata, CliError> {
    let psi0 = sample_state(cfg)?;
    let e = &cfg.evolve;
    let ecfg = EvolutionConfig {
        potential: potential_symbol(&e.potential),
        dt: e.dt,
        steps: e.steps,
        window: cfg.window.clone(),
        x_axis: *psi0.axis(),
        q_axis: cfg.grid.q,
        p_axis: cfg.grid.p,
        snapshots: e.snapshots,
    };
    ecfg.validate().map_err(|err| CliError::Config(err.to_string()))?;
    let mut run = Run::new(cfg)?;
    run.meta.state = Some(cfg.state.to_string());
    run.param("dt", e.dt);
    run.param("steps", e.steps as f64);
    run.param("total_time", ecfg.total_time());
    let snaps = evolve_amplitude(&psi0, &ecfg)?;
    for s in &snaps {
        run.write(&format!("snapshot_{:06}", s.step), &s.field, FieldKind::Complex)?;
    }
    let summaries: Vec<_> = snaps.iter().map(|s| s.summary()).collect();
    run.meta.details = serde_json::json!({ "snapshots": summaries });

    let initial = forward_amplitude(&psi0, &plan_for(cfg, &psi0)?)?;
    run.check(CheckRecord::at_most("snapshot 0 equals the initial amplitude", snaps[0].field.max_abs_diff(&initial)?, 1e-12));
    let ends = evolve_coordinate_at(&psi0, &ecfg, &[0, e.steps])?;
    run.check(CheckRecord::at_most("norm drift", (ends[1].norm_sq() - ends[0].norm_sq()).abs(), NORM_DRIFT_TOLERANCE));

    if let (PotentialSpec::Free, StateSpec::Gaussian { gamma }, Some(lambda)) = (&e.potential, &cfg.state, cfg.window.lambda()) {
        let beta = cfg.window.gaussian_params().expect("gaussian").0;
        let mut worst = 0.0f64;
        for s in &snaps {
            let exact = free_particle_amplitude(s.t, *gamma, beta, lambda)?.sample(&cfg.grid.q, &cfg.grid.p)?;
            worst = worst.max(s.field.max_abs_diff(&exact)?);
        }
        run.check(CheckRecord::at_most("snapshots match the spreading Gaussian", worst, EVOLUTION_TOLERANCE));
    }
    if e.potential == PotentialSpec::Oscillator {
        let t = ecfg.total_time();
        let periods = t / (2.0 * PI);
        let k = periods.round();
        if k >= 1.0 && (periods - k).abs() < 1e-9 {
            // H has spectrum n + 1/2, so e^{-2πikH} = (-1)^k.
            let sign = if (k as u64).is_multiple_of(2) { 1.0 } else { -1.0 };
            let last = &snaps[snaps.len() - 1].field;
            let d = last.max_abs_diff(&snaps[0].field.scaled(C64::new(sign, 0.0)))?;
            run.check(CheckRecord::at_most("full periods return (-1)^k times the initial amplitude", d, EVOLUTION_TOLERANCE));
        }
    }
    run.finish()
}

pub fn figure_cmd(cfg: &RunConfig, n: u8) -> Result<Metadata, CliError> {
    let fig = figure(n, &cfg.grid.q, &cfg.grid.p).map_err(|e| match e {
        Error::Config(m) => CliError::Config(m),
        other => other.into(),
    })?;
    let mut run = Run::new(cfg)?;
    run.meta.window = None;
    run.meta.notes.push(fig.description.clone());
    for w in &fig.windows {
        run.meta.notes.push(format!("window {}", format_window(w)));
    }
    run.meta.parameters.extend(fig.parameters.clone());
    for f in &fig.fields {
        run.write(&f.name, &real_part(&f.field), FieldKind::Real)?;
        run.check(CheckRecord::at_most(&format!("{} is finite", f.name), if f.field.is_finite() { 0.0 } else { 1.0 }, 0.0));
    }
    let origin = (cfg.grid.q.node_index(0.0), cfg.grid.p.node_index(0.0));
    match n {
        2 => {
            let min = fig.field("wigner").expect("wigner").min_re();
            run.param("wigner_min", min);
            run.check(CheckRecord { name: "Wigner function has negative regions".into(), value: min, tolerance: 0.0, passed: min < 0.0 });
        }
        3 => {
            let (vq_a, vp_a) = marginal_variances(fig.field("modulus_sq_beta_0.5").expect("field"))?;
            let (vq_b, vp_b) = marginal_variances(fig.field("modulus_sq_beta_2").expect("field"))?;
            run.param("var_q_beta_0.5", vq_a);
            run.param("var_p_beta_0.5", vp_a);
            run.param("var_q_beta_2", vq_b);
            run.param("var_p_beta_2", vp_b);
        }
        4 => match origin {
            (Some(i), Some(j)) => {
                let w00 = fig.field("wigner").expect("wigner").get(i, j).re;
                run.param("wigner_origin", w00);
                run.check(CheckRecord::at_most("W_1(0,0) = -1/pi", (w00 + 1.0 / PI).abs(), 1e-6));
            }
            _ => run.meta.notes.push("origin is not a grid node; W_1(0,0) not checked".into()),
        },
        _ => {}
    }
    run.finish()
}

pub fn validate(cfg: &RunConfig, ids: &[u8]) -> Result<Metadata, CliError> {
    let ids: Vec<u8> = if ids.is_empty() { (1..=CHECK_COUNT).collect() } else { ids.to_vec() };
    if let Some(bad) = ids.iter().find(|i| !(1..=CHECK_COUNT).contains(*i)) {
        return Err(CliError::Config(format!("check id must be 1..={CHECK_COUNT}, got {bad}")));
    }
    let mut run = Run::new(cfg)?;
    run.meta.window = None;
    let results: Vec<_> = ids.iter().map(|&id| run_check(id)).collect();
    for r in &results {
        println!("{r}");
        for m in &r.measurements {
            let relation = match m.bound {
                Bound::AtMost => "<=",
                Bound::Below => "<",
                Bound::Above => ">",
            };
            run.check(CheckRecord { name: format!("{}. {} ({relation})", r.id, m.label), value: m.value, tolerance: m.limit, passed: m.passed });
        }
        if r.measurements.is_empty() {
            run.check(CheckRecord { name: format!("{}. {}", r.id, r.title), value: f64::NAN, tolerance: 0.0, passed: false });
        }
        for n in &r.notes {
            run.meta.notes.push(format!("{}: {n}", r.id));
        }
    }
    run.meta.details = serde_json::to_value(&results).map_err(|e| CliError::Data(e.to_string()))?;
    run.finish()
}

/// Dispatches `cfg.command`.
pub fn run(cfg: &RunConfig, checks: &[u8]) -> Result<Metadata, CliError> {
    if cfg.state.is_eigenstate_only() && cfg.command != Command::Eigenstate {
        return Err(CliError::Config(format!("state '{}' is only available to the eigenstate command", cfg.state)));
    }
    match cfg.command {
        Command::Amplitude => amplitude(cfg),
        Command::Wigner => wigner(cfg),
        Command::Husimi => husimi(cfg),
        Command::Bargmann => bargmann(cfg),
        Command::Evolve => evolve(cfg),
        Command::Eigenstate => eigenstate(cfg),
        Command::Figure(n) => figure_cmd(cfg, n),
        Command::Validate => validate(cfg, checks),
    }
}

/// Path of the metadata file a run writes.
pub fn metadata_path(cfg: &RunConfig) -> std::path::PathBuf {
    let file = match cfg.command {
        Command::Figure(n) => format!("figure{n}.json"),
        c => format!("{}.json", c.name()),
    };
    Path::new(&cfg.out).join(file)
}
