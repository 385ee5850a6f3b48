use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use phasepad_cli::commands::{metadata_path, run};
use phasepad_cli::config::{parse_phase_grid, parse_window, parse_x_grid, Command, RunConfig};
use phasepad_cli::error::{CliError, EXIT_CHECK_FAILED, EXIT_CONFIG, EXIT_OK};

/// Window-dependent phase-space amplitudes, distributions and dynamics.
#[derive(Parser)]
#[command(name = "phasepad", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// TOML config with [state], [window], [grid], [evolve] and [output] sections.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// gaussian:beta=1,xw=0,kw=0 | square:a=1 | oscillator:n=1,beta=1,xw=0,kw=0
    #[arg(long, global = true)]
    window: Option<String>,
    /// test | coherent:mu=1+0.5i | oscillator:n=1 | gaussian:gamma=1 | position:x0=0 | momentum:k0=0 | file:<path>
    #[arg(long, global = true)]
    state: Option<String>,
    /// Phase-space grid: qmin,qmax,nq,pmin,pmax,np
    #[arg(long, global = true, allow_hyphen_values = true)]
    grid: Option<String>,
    /// Coordinate grid for sampled states: xmin,xmax,nx
    #[arg(long, global = true, allow_hyphen_values = true)]
    xgrid: Option<String>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// csv | bin
    #[arg(long, global = true)]
    format: Option<String>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Phase-space amplitude of a state: Re/Im and |Psi|^2 grids.
    Amplitude,
    /// Wigner function of a state.
    Wigner,
    /// Husimi-type spectrogram |Psi(q/2,p/2)/2|^2.
    Husimi,
    /// Bargmann function G = Psi/E for a Gaussian window.
    Bargmann,
    /// Split-step evolution with phase-space snapshots.
    Evolve {
        /// free | oscillator | poly:c2=0.5,c4=0.1
        #[arg(long)]
        potential: Option<String>,
        #[arg(long)]
        dt: Option<f64>,
        #[arg(long)]
        steps: Option<usize>,
        #[arg(long)]
        snapshots: Option<usize>,
    },
    /// Position, momentum or oscillator eigenamplitude.
    Eigenstate,
    /// Data behind one of the six reference figures.
    Figure {
        #[arg(value_parser = clap::value_parser!(u8).range(1..=6))]
        number: u8,
    },
    /// Runs the validation checks and writes a pass/fail report.
    Validate {
        /// Only run these checks (1..=13); repeatable.
        #[arg(long = "check")]
        checks: Vec<u8>,
    },
}

fn build_config(cli: &Cli) -> Result<(RunConfig, Vec<u8>), CliError> {
    let command = match &cli.command {
        Cmd::Amplitude => Command::Amplitude,
        Cmd::Wigner => Command::Wigner,
        Cmd::Husimi => Command::Husimi,
        Cmd::Bargmann => Command::Bargmann,
        Cmd::Evolve { .. } => Command::Evolve,
        Cmd::Eigenstate => Command::Eigenstate,
        Cmd::Figure { number } => Command::Figure(*number),
        Cmd::Validate { .. } => Command::Validate,
    };
    let c = &cli.common;
    let mut cfg = match &c.config {
        Some(path) => RunConfig::from_file(path, command)?,
        None => RunConfig::new(command),
    };
    cfg.command = command;
    if let Some(s) = &c.state {
        cfg.state = s.parse()?;
    }
    if let Some(s) = &c.window {
        cfg.window = parse_window(s)?;
    }
    if let Some(s) = &c.grid {
        (cfg.grid.q, cfg.grid.p) = parse_phase_grid(s)?;
    }
    if let Some(s) = &c.xgrid {
        cfg.grid.x = parse_x_grid(s)?;
    }
    if let Some(o) = &c.out {
        cfg.out = o.clone();
    }
    if let Some(f) = &c.format {
        cfg.format = f.parse()?;
    }
    let mut checks = Vec::new();
    match &cli.command {
        Cmd::Evolve { potential, dt, steps, snapshots } => {
            if let Some(p) = potential {
                cfg.evolve.potential = p.parse()?;
            }
            cfg.evolve.dt = dt.unwrap_or(cfg.evolve.dt);
            cfg.evolve.steps = steps.unwrap_or(cfg.evolve.steps);
            cfg.evolve.snapshots = snapshots.unwrap_or(cfg.evolve.snapshots);
        }
        Cmd::Validate { checks: c } => checks = c.clone(),
        _ => {}
    }
    Ok((cfg, checks))
}

fn set_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var("PHASEPAD_THREADS") else {
        return Ok(());
    };
    let n = v
        .trim()
        .parse::<usize>()
        .ok()
        .filter(|n| *n > 0)
        .ok_or_else(|| CliError::Config(format!("PHASEPAD_THREADS must be a positive integer, got '{v}'")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Config(format!("cannot configure thread pool: {e}")))
}

fn main_inner() -> Result<i32, CliError> {
    let cli = Cli::parse();
    set_threads()?;
    let (cfg, checks) = build_config(&cli)?;
    let meta = run(&cfg, &checks)?;
    for f in &meta.fields {
        println!("wrote {}", cfg.out.join(&f.file).display());
    }
    println!("wrote {}", metadata_path(&cfg).display());
    for w in &meta.warnings {
        eprintln!("warning: {w}");
    }
    let mut code = EXIT_OK;
    for c in meta.checks.iter().filter(|c| !c.passed) {
        eprintln!("check failed: {} = {:e} (tolerance {:e})", c.name, c.value, c.tolerance);
        code = EXIT_CHECK_FAILED;
    }
    Ok(code)
}

fn main() -> ExitCode {
    match main_inner() {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            let code = e.exit_code();
            debug_assert!(code == EXIT_CONFIG || code == EXIT_CHECK_FAILED);
            ExitCode::from(code as u8)
        }
    }
}
