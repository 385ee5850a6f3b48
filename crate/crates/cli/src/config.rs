//! Run configuration: descriptor strings for states, windows, grids and
//! potentials, the TOML config file, and flag overrides.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use phasepad::numgrid::Axis;
use phasepad::{WindowSpec, C64};
use serde::Serialize;

use crate::error::CliError;

pub const DEFAULT_PHASE_AXIS: (f64, f64, usize) = (-8.0, 8.0, 257);
pub const DEFAULT_X_AXIS: (f64, f64, usize) = (-16.0, 16.0, 1024);

fn config_err(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

/// Shortest representation that parses back to the same `f64`.
fn num(x: f64) -> String {
    format!("{x}")
}

/// Parses `a`, `bi`, `a+bi`, `a-bi` (also `j` for the imaginary unit).
pub fn parse_complex(s: &str) -> Result<C64, CliError> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || config_err(format!("cannot parse complex number '{s}'"));
    if t.is_empty() {
        return Err(bad());
    }
    let Some(body) = t.strip_suffix('i').or_else(|| t.strip_suffix('j')) else {
        return t.parse::<f64>().map(|re| C64::new(re, 0.0)).map_err(|_| bad());
    };
    // Split at the last sign that is not part of an exponent or the leading sign.
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let imag = |s: &str| -> Result<f64, CliError> {
        match s {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ => s.parse::<f64>().map_err(|_| bad()),
        }
    };
    match split {
        Some(k) => Ok(C64::new(body[..k].parse::<f64>().map_err(|_| bad())?, imag(&body[k..])?)),
        None => Ok(C64::new(0.0, imag(body)?)),
    }
}

pub fn format_complex(z: C64) -> String {
    if z.im < 0.0 || (z.im == 0.0 && z.im.is_sign_negative()) {
        format!("{}-{}i", num(z.re), num(-z.im))
    } else {
        format!("{}+{}i", num(z.re), num(z.im))
    }
}

/// `name:key=value,key=value` split into its parts.
fn split_descriptor(s: &str) -> Result<(String, BTreeMap<String, String>), CliError> {
    let (name, rest) = match s.split_once(':') {
        Some((n, r)) => (n.trim(), r.trim()),
        None => (s.trim(), ""),
    };
    if name.is_empty() {
        return Err(config_err(format!("empty descriptor '{s}'")));
    }
    let mut params = BTreeMap::new();
    for item in rest.split(',').map(str::trim).filter(|i| !i.is_empty()) {
        let (k, v) = item.split_once('=').ok_or_else(|| config_err(format!("expected key=value in '{item}'")))?;
        if params.insert(k.trim().to_ascii_lowercase(), v.trim().to_string()).is_some() {
            return Err(config_err(format!("duplicate key '{}' in '{s}'", k.trim())));
        }
    }
    Ok((name.to_ascii_lowercase(), params))
}

struct Params {
    what: String,
    map: BTreeMap<String, String>,
}

impl Params {
    fn f64_or(&mut self, key: &str, default: f64) -> Result<f64, CliError> {
        match self.map.remove(key) {
            None => Ok(default),
            Some(v) => v
                .parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| config_err(format!("{}: '{key}' must be a finite number, got '{v}'", self.what))),
        }
    }

    fn usize_or(&mut self, key: &str, default: usize) -> Result<usize, CliError> {
        match self.map.remove(key) {
            None => Ok(default),
            Some(v) => v
                .parse::<usize>()
                .map_err(|_| config_err(format!("{}: '{key}' must be a non-negative integer, got '{v}'", self.what))),
        }
    }

    fn complex_or(&mut self, key: &str, default: C64) -> Result<C64, CliError> {
        self.map.remove(key).map_or(Ok(default), |v| parse_complex(&v))
    }

    fn finish(self) -> Result<(), CliError> {
        match self.map.keys().next() {
            Some(k) => Err(config_err(format!("{}: unknown parameter '{k}'", self.what))),
            None => Ok(()),
        }
    }
}

fn params(what: &str, map: BTreeMap<String, String>) -> Params {
    Params { what: what.to_string(), map }
}

/// Window descriptor: `gaussian:beta=1,xw=0,kw=0`, `square:a=1` or
/// `oscillator:n=1,beta=1,xw=0,kw=0`.
pub fn parse_window(s: &str) -> Result<WindowSpec, CliError> {
    let (name, map) = split_descriptor(s)?;
    let mut p = params(&format!("window '{name}'"), map);
    let spec = match name.as_str() {
        "gaussian" => WindowSpec::Gaussian { beta: p.f64_or("beta", 1.0)?, x_w: p.f64_or("xw", 0.0)?, k_w: p.f64_or("kw", 0.0)? },
        "square" => WindowSpec::Square { a: p.f64_or("a", 1.0)? },
        "oscillator" => WindowSpec::OscillatorExcited {
            n: p.usize_or("n", 1)?,
            beta: p.f64_or("beta", 1.0)?,
            x_w: p.f64_or("xw", 0.0)?,
            k_w: p.f64_or("kw", 0.0)?,
        },
        other => return Err(config_err(format!("unknown window '{other}' (expected gaussian, square or oscillator)"))),
    };
    p.finish()?;
    spec.validate().map_err(|e| config_err(format!("window: {e}")))?;
    Ok(spec)
}

pub fn format_window(w: &WindowSpec) -> String {
    match *w {
        WindowSpec::Gaussian { beta, x_w, k_w } => format!("gaussian:beta={},xw={},kw={}", num(beta), num(x_w), num(k_w)),
        WindowSpec::Square { a } => format!("square:a={}", num(a)),
        WindowSpec::OscillatorExcited { n, beta, x_w, k_w } => {
            format!("oscillator:n={n},beta={},xw={},kw={}", num(beta), num(x_w), num(k_w))
        }
        WindowSpec::Custom { .. } => "custom".into(),
    }
}

/// Quantum state to transform.
#[derive(Debug, Clone, PartialEq)]
pub enum StateSpec {
    /// The two-Gaussian test state.
    Test,
    Coherent { mu: C64 },
    /// Oscillator eigenstate `n`.
    Oscillator { n: usize },
    /// `√γ π^{-1/4} e^{-γ²x²/2}`, the initial free-particle state.
    Gaussian { gamma: f64 },
    /// Delta-normalized eigenstate of position (eigenstate command only).
    Position { x0: f64 },
    /// Delta-normalized eigenstate of momentum (eigenstate command only).
    Momentum { k0: f64 },
    /// Samples from a CSV file with columns `x,re,im`.
    File { path: PathBuf },
}

impl StateSpec {
    pub fn is_eigenstate_only(&self) -> bool {
        matches!(self, StateSpec::Position { .. } | StateSpec::Momentum { .. })
    }
}

impl FromStr for StateSpec {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        if let Some(path) = s.trim().strip_prefix("file:") {
            if path.is_empty() {
                return Err(config_err("state file path is empty"));
            }
            return Ok(StateSpec::File { path: PathBuf::from(path) });
        }
        let (name, map) = split_descriptor(s)?;
        let mut p = params(&format!("state '{name}'"), map);
        let spec = match name.as_str() {
            "test" => StateSpec::Test,
            "coherent" => StateSpec::Coherent { mu: p.complex_or("mu", C64::new(0.0, 0.0))? },
            "oscillator" => StateSpec::Oscillator { n: p.usize_or("n", 0)? },
            "gaussian" => {
                let gamma = p.f64_or("gamma", 1.0)?;
                if gamma <= 0.0 {
                    return Err(config_err(format!("state 'gaussian': gamma must be positive, got {gamma}")));
                }
                StateSpec::Gaussian { gamma }
            }
            "position" => StateSpec::Position { x0: p.f64_or("x0", 0.0)? },
            "momentum" => StateSpec::Momentum { k0: p.f64_or("k0", 0.0)? },
            other => {
                return Err(config_err(format!(
                    "unknown state '{other}' (expected test, coherent, oscillator, gaussian, position, momentum or file:<path>)"
                )))
            }
        };
        p.finish()?;
        Ok(spec)
    }
}

impl fmt::Display for StateSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StateSpec::Test => write!(f, "test"),
            StateSpec::Coherent { mu } => write!(f, "coherent:mu={}", format_complex(*mu)),
            StateSpec::Oscillator { n } => write!(f, "oscillator:n={n}"),
            StateSpec::Gaussian { gamma } => write!(f, "gaussian:gamma={}", num(*gamma)),
            StateSpec::Position { x0 } => write!(f, "position:x0={}", num(*x0)),
            StateSpec::Momentum { k0 } => write!(f, "momentum:k0={}", num(*k0)),
            StateSpec::File { path } => write!(f, "file:{}", path.display()),
        }
    }
}

fn parse_axis_triple(parts: &[&str], what: &str) -> Result<Axis, CliError> {
    let min = parts[0].trim().parse::<f64>().map_err(|_| config_err(format!("{what}: bad minimum '{}'", parts[0])))?;
    let max = parts[1].trim().parse::<f64>().map_err(|_| config_err(format!("{what}: bad maximum '{}'", parts[1])))?;
    let n = parts[2].trim().parse::<usize>().map_err(|_| config_err(format!("{what}: bad point count '{}'", parts[2])))?;
    Axis::new(min, max, n).map_err(|e| config_err(format!("{what}: {e}")))
}

/// `qmin,qmax,nq,pmin,pmax,np`.
pub fn parse_phase_grid(s: &str) -> Result<(Axis, Axis), CliError> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 6 {
        return Err(config_err(format!("grid needs qmin,qmax,nq,pmin,pmax,np; got '{s}'")));
    }
    Ok((parse_axis_triple(&parts[..3], "q axis")?, parse_axis_triple(&parts[3..], "p axis")?))
}

/// `xmin,xmax,nx`.
pub fn parse_x_grid(s: &str) -> Result<Axis, CliError> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err(config_err(format!("x grid needs xmin,xmax,nx; got '{s}'")));
    }
    parse_axis_triple(&parts, "x axis")
}

fn format_axis(a: &Axis) -> String {
    format!("{},{},{}", num(a.min()), num(a.max()), a.len())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub q: Axis,
    pub p: Axis,
    /// Coordinate axis on which states are sampled.
    pub x: Axis,
}

impl Default for GridSpec {
    fn default() -> Self {
        let (lo, hi, n) = DEFAULT_PHASE_AXIS;
        let a = Axis::new(lo, hi, n).expect("valid default axis");
        let (xl, xh, xn) = DEFAULT_X_AXIS;
        GridSpec { q: a, p: a, x: Axis::new(xl, xh, xn).expect("valid default axis") }
    }
}

impl GridSpec {
    pub fn phase_string(&self) -> String {
        format!("{},{}", format_axis(&self.q), format_axis(&self.p))
    }

    pub fn x_string(&self) -> String {
        format_axis(&self.x)
    }
}

/// Potential `V(q)` for evolution.
#[derive(Debug, Clone, PartialEq)]
pub enum PotentialSpec {
    Free,
    /// `q²/2`.
    Oscillator,
    /// `Σ c_k q^k`, keyed by power.
    Poly(BTreeMap<u32, f64>),
}

impl FromStr for PotentialSpec {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        let (name, map) = split_descriptor(s)?;
        match name.as_str() {
            "free" if map.is_empty() => Ok(PotentialSpec::Free),
            "oscillator" if map.is_empty() => Ok(PotentialSpec::Oscillator),
            "poly" => {
                let mut coeffs = BTreeMap::new();
                for (k, v) in map {
                    let power = k
                        .strip_prefix('c')
                        .and_then(|d| d.parse::<u32>().ok())
                        .ok_or_else(|| config_err(format!("potential: expected c<power>=<coefficient>, got '{k}'")))?;
                    let c = v.parse::<f64>().ok().filter(|c| c.is_finite());
                    coeffs.insert(power, c.ok_or_else(|| config_err(format!("potential: bad coefficient '{v}'")))?);
                }
                Ok(PotentialSpec::Poly(coeffs))
            }
            "free" | "oscillator" => Err(config_err(format!("potential '{name}' takes no parameters"))),
            other => Err(config_err(format!("unknown potential '{other}' (expected free, oscillator or poly:c2=...)"))),
        }
    }
}

impl fmt::Display for PotentialSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PotentialSpec::Free => write!(f, "free"),
            PotentialSpec::Oscillator => write!(f, "oscillator"),
            PotentialSpec::Poly(c) => {
                let terms: Vec<String> = c.iter().map(|(k, v)| format!("c{k}={}", num(*v))).collect();
                write!(f, "poly:{}", terms.join(","))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvolveSpec {
    pub potential: PotentialSpec,
    pub dt: f64,
    pub steps: usize,
    pub snapshots: usize,
}

impl Default for EvolveSpec {
    fn default() -> Self {
        EvolveSpec { potential: PotentialSpec::Free, dt: 5e-4, steps: 2000, snapshots: 4 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Bin,
}

impl FromStr for Format {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "bin" => Ok(Format::Bin),
            other => Err(config_err(format!("unknown format '{other}' (expected csv or bin)"))),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Csv => "csv",
            Format::Bin => "bin",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Amplitude,
    Wigner,
    Husimi,
    Bargmann,
    Evolve,
    Eigenstate,
    Figure(u8),
    Validate,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Amplitude => "amplitude",
            Command::Wigner => "wigner",
            Command::Husimi => "husimi",
            Command::Bargmann => "bargmann",
            Command::Evolve => "evolve",
            Command::Eigenstate => "eigenstate",
            Command::Figure(_) => "figure",
            Command::Validate => "validate",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Command::Figure(n) => write!(f, "figure {n}"),
            c => f.write_str(c.name()),
        }
    }
}

impl FromStr for Command {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        let mut words = s.split_whitespace();
        let cmd = match words.next() {
            Some("amplitude") => Command::Amplitude,
            Some("wigner") => Command::Wigner,
            Some("husimi") => Command::Husimi,
            Some("bargmann") => Command::Bargmann,
            Some("evolve") => Command::Evolve,
            Some("eigenstate") => Command::Eigenstate,
            Some("validate") => Command::Validate,
            Some("figure") => {
                let n = words.next().and_then(|w| w.parse::<u8>().ok()).filter(|n| (1..=6).contains(n));
                Command::Figure(n.ok_or_else(|| config_err(format!("figure number must be 1..=6 in '{s}'")))?)
            }
            _ => return Err(config_err(format!("unknown command '{s}'"))),
        };
        if words.next().is_some() {
            return Err(config_err(format!("trailing words in command '{s}'")));
        }
        Ok(cmd)
    }
}

/// Everything a run needs.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub state: StateSpec,
    pub window: WindowSpec,
    pub grid: GridSpec,
    pub evolve: EvolveSpec,
    pub out: PathBuf,
    pub format: Format,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        RunConfig {
            command,
            state: StateSpec::Test,
            window: WindowSpec::standard(),
            grid: GridSpec::default(),
            evolve: EvolveSpec::default(),
            out: PathBuf::from("out"),
            format: Format::Csv,
        }
    }

    /// TOML text that [`RunConfig::from_toml`] reads back to `self`.
    pub fn to_toml(&self) -> String {
        let q = |s: &str| toml::Value::String(s.to_string()).to_string();
        let mut out = String::new();
        out.push_str(&format!("command = {}\n\n", q(&self.command.to_string())));
        out.push_str(&format!("[state]\nspec = {}\n\n", q(&self.state.to_string())));
        out.push_str(&format!("[window]\nspec = {}\n\n", q(&format_window(&self.window))));
        out.push_str(&format!("[grid]\nphase = {}\nx = {}\n\n", q(&self.grid.phase_string()), q(&self.grid.x_string())));
        out.push_str(&format!(
            "[evolve]\npotential = {}\ndt = {}\nsteps = {}\nsnapshots = {}\n\n",
            q(&self.evolve.potential.to_string()),
            toml::Value::Float(self.evolve.dt),
            self.evolve.steps,
            self.evolve.snapshots
        ));
        out.push_str(&format!("[output]\ndir = {}\nformat = {}\n", q(&self.out.display().to_string()), q(&self.format.to_string())));
        out
    }

    /// Reads a config file. Sections `[state]` and `[window]` take either a
    /// `spec = "<descriptor>"` key or `kind = "<name>"` plus parameters.
    pub fn from_toml(text: &str, default_command: Command) -> Result<Self, CliError> {
        let table: toml::Table = text.parse().map_err(|e| config_err(format!("config file: {e}")))?;
        let mut cfg = RunConfig::new(default_command);
        for (key, value) in &table {
            match (key.as_str(), value) {
                ("command", toml::Value::String(s)) => cfg.command = s.parse()?,
                ("state", toml::Value::Table(t)) => cfg.state = section_descriptor("state", t)?.parse()?,
                ("window", toml::Value::Table(t)) => cfg.window = parse_window(&section_descriptor("window", t)?)?,
                ("grid", toml::Value::Table(t)) => apply_grid(&mut cfg.grid, t)?,
                ("evolve", toml::Value::Table(t)) => apply_evolve(&mut cfg.evolve, t)?,
                ("output", toml::Value::Table(t)) => apply_output(&mut cfg, t)?,
                (k, _) => return Err(config_err(format!("config file: unexpected entry '{k}'"))),
            }
        }
        Ok(cfg)
    }

    pub fn from_file(path: &Path, default_command: Command) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| config_err(format!("cannot read {}: {e}", path.display())))?;
        RunConfig::from_toml(&text, default_command)
    }
}

fn scalar_string(v: &toml::Value) -> Option<String> {
    match v {
        toml::Value::String(s) => Some(s.clone()),
        toml::Value::Integer(i) => Some(i.to_string()),
        toml::Value::Float(f) => Some(num(*f)),
        toml::Value::Boolean(b) => Some(b.to_string()),
        _ => None,
    }
}

fn section_descriptor(name: &str, t: &toml::Table) -> Result<String, CliError> {
    if let Some(spec) = t.get("spec") {
        if t.len() > 1 {
            return Err(config_err(format!("[{name}]: 'spec' cannot be combined with other keys")));
        }
        return scalar_string(spec).ok_or_else(|| config_err(format!("[{name}]: spec must be a string")));
    }
    let kind = t
        .get("kind")
        .and_then(scalar_string)
        .ok_or_else(|| config_err(format!("[{name}]: needs 'spec' or 'kind'")))?;
    if kind == "file" {
        let path = t.get("path").and_then(scalar_string).ok_or_else(|| config_err(format!("[{name}]: file needs 'path'")))?;
        return Ok(format!("file:{path}"));
    }
    let mut parts = Vec::new();
    for (k, v) in t.iter().filter(|(k, _)| k.as_str() != "kind") {
        let v = scalar_string(v).ok_or_else(|| config_err(format!("[{name}]: '{k}' must be a scalar")))?;
        parts.push(format!("{k}={v}"));
    }
    Ok(if parts.is_empty() { kind } else { format!("{kind}:{}", parts.join(",")) })
}

fn get_string(section: &str, t: &toml::Table, key: &str) -> Result<Option<String>, CliError> {
    t.get(key).map(|v| scalar_string(v).ok_or_else(|| config_err(format!("[{section}]: '{key}' must be a scalar")))).transpose()
}

fn check_keys(section: &str, t: &toml::Table, allowed: &[&str]) -> Result<(), CliError> {
    match t.keys().find(|k| !allowed.contains(&k.as_str())) {
        Some(k) => Err(config_err(format!("[{section}]: unknown key '{k}'"))),
        None => Ok(()),
    }
}

fn apply_grid(g: &mut GridSpec, t: &toml::Table) -> Result<(), CliError> {
    check_keys("grid", t, &["phase", "x"])?;
    if let Some(s) = get_string("grid", t, "phase")? {
        (g.q, g.p) = parse_phase_grid(&s)?;
    }
    if let Some(s) = get_string("grid", t, "x")? {
        g.x = parse_x_grid(&s)?;
    }
    Ok(())
}

fn apply_evolve(e: &mut EvolveSpec, t: &toml::Table) -> Result<(), CliError> {
    check_keys("evolve", t, &["potential", "dt", "steps", "snapshots"])?;
    if let Some(s) = get_string("evolve", t, "potential")? {
        e.potential = s.parse()?;
    }
    let mut p = params("[evolve]", t.iter().filter(|(k, _)| k.as_str() != "potential").filter_map(|(k, v)| Some((k.clone(), scalar_string(v)?))).collect());
    e.dt = p.f64_or("dt", e.dt)?;
    e.steps = p.usize_or("steps", e.steps)?;
    e.snapshots = p.usize_or("snapshots", e.snapshots)?;
    p.finish()
}

fn apply_output(cfg: &mut RunConfig, t: &toml::Table) -> Result<(), CliError> {
    check_keys("output", t, &["dir", "format"])?;
    if let Some(s) = get_string("output", t, "dir")? {
        cfg.out = PathBuf::from(s);
    }
    if let Some(s) = get_string("output", t, "format")? {
        cfg.format = s.parse()?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_numbers() {
        assert_eq!(parse_complex("1+0.5i").unwrap(), C64::new(1.0, 0.5));
        assert_eq!(parse_complex("-2-i").unwrap(), C64::new(-2.0, -1.0));
        assert_eq!(parse_complex("1e-3-2e+1j").unwrap(), C64::new(1e-3, -20.0));
        assert_eq!(parse_complex("-0.25i").unwrap(), C64::new(0.0, -0.25));
        assert_eq!(parse_complex("3").unwrap(), C64::new(3.0, 0.0));
        assert!(parse_complex("1+xi").is_err());
        assert!(parse_complex("").is_err());
        for z in [C64::new(1.0, -0.5), C64::new(-1e-300, 2.5e10), C64::new(0.0, -0.0)] {
            assert_eq!(parse_complex(&format_complex(z)).unwrap(), z);
        }
    }

    #[test]
    fn windows() {
        assert_eq!(parse_window("gaussian:beta=2,xw=1,kw=-2").unwrap(), WindowSpec::Gaussian { beta: 2.0, x_w: 1.0, k_w: -2.0 });
        assert_eq!(parse_window("square:a=1").unwrap(), WindowSpec::Square { a: 1.0 });
        assert_eq!(parse_window("gaussian").unwrap(), WindowSpec::standard());
        assert!(matches!(parse_window("hann:a=1"), Err(CliError::Config(_))));
        assert!(matches!(parse_window("gaussian:beta=-1"), Err(CliError::Config(_))));
        assert!(matches!(parse_window("square:b=1"), Err(CliError::Config(_))));
        assert!(matches!(parse_window("square:a=1,a=2"), Err(CliError::Config(_))));
    }

    #[test]
    fn states() {
        assert_eq!("coherent:mu=1+0.5i".parse::<StateSpec>().unwrap(), StateSpec::Coherent { mu: C64::new(1.0, 0.5) });
        assert_eq!("file:/tmp/a b.csv".parse::<StateSpec>().unwrap(), StateSpec::File { path: "/tmp/a b.csv".into() });
        assert!("oscillator:n=-1".parse::<StateSpec>().is_err());
        assert!("gaussian:gamma=0".parse::<StateSpec>().is_err());
    }

    #[test]
    fn grids() {
        let (q, p) = parse_phase_grid("-4,4,65,-3,3,33").unwrap();
        assert_eq!((q.len(), p.min()), (65, -3.0));
        assert!(parse_phase_grid("-4,4,65").is_err());
        assert!(parse_phase_grid("4,-4,65,-3,3,33").is_err());
        assert!(parse_x_grid("-1,1,4").is_err());
    }

    #[test]
    fn commands() {
        assert_eq!("figure 4".parse::<Command>().unwrap(), Command::Figure(4));
        assert!("figure 7".parse::<Command>().is_err());
        assert!("run".parse::<Command>().is_err());
        for c in [Command::Amplitude, Command::Figure(6), Command::Validate] {
            assert_eq!(c.to_string().parse::<Command>().unwrap(), c);
        }
    }

    #[test]
    fn key_value_sections() {
        let cfg = RunConfig::from_toml(
            "[state]\nkind = \"coherent\"\nmu = \"1-1i\"\n[window]\nkind = \"square\"\na = 2.0\n[evolve]\nsteps = 10\ndt = 0.001\n",
            Command::Amplitude,
        )
        .unwrap();
        assert_eq!(cfg.state, StateSpec::Coherent { mu: C64::new(1.0, -1.0) });
        assert_eq!(cfg.window, WindowSpec::Square { a: 2.0 });
        assert_eq!((cfg.evolve.steps, cfg.evolve.dt), (10, 1e-3));
        assert!(RunConfig::from_toml("[grid]\nq = \"1\"\n", Command::Amplitude).is_err());
        assert!(RunConfig::from_toml("[state]\nspec = \"test\"\nkind = \"test\"\n", Command::Amplitude).is_err());
    }

    #[test]
    fn default_config_round_trips() {
        let cfg = RunConfig::new(Command::Figure(2));
        assert_eq!(RunConfig::from_toml(&cfg.to_toml(), Command::Amplitude).unwrap(), cfg);
    }
}
