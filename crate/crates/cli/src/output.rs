//! Grid files (CSV or binary column dump), their reader, and the JSON
//! metadata sidecar.

use std::collections::BTreeMap;
use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use phasepad::numgrid::{Axis, PhaseSpaceField, Wavefunction1D};
use phasepad::{Warning, WindowSpec, C64};
use serde::Serialize;

use crate::config::Format;
use crate::error::CliError;

const BIN_MAGIC: &[u8; 8] = b"PHPDGRID";
const BIN_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldKind {
    /// Columns `re, im`.
    Complex,
    /// Column `value` (real part only).
    Real,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AxisRecord {
    pub min: f64,
    pub max: f64,
    pub n: usize,
}

impl From<&Axis> for AxisRecord {
    fn from(a: &Axis) -> Self {
        AxisRecord { min: a.min(), max: a.max(), n: a.len() }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FieldRecord {
    pub name: String,
    pub file: String,
    pub kind: FieldKind,
    pub format: Format,
    pub q_axis: AxisRecord,
    pub p_axis: AxisRecord,
}

/// One numerical check; `passed` is `value <= tolerance` unless stated.
#[derive(Debug, Clone, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl CheckRecord {
    pub fn at_most(name: &str, value: f64, tolerance: f64) -> Self {
        CheckRecord { name: name.into(), value, tolerance, passed: value.is_finite() && value <= tolerance }
    }
}

/// Sidecar describing everything a run wrote.
#[derive(Debug, Clone, Serialize)]
pub struct Metadata {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub state: Option<String>,
    pub window: Option<WindowSpec>,
    pub config: String,
    pub parameters: BTreeMap<String, f64>,
    pub fields: Vec<FieldRecord>,
    pub checks: Vec<CheckRecord>,
    pub warnings: Vec<Warning>,
    pub notes: Vec<String>,
    /// Command-specific structured output (snapshot summaries, reports).
    #[serde(skip_serializing_if = "serde_json::Value::is_null")]
    pub details: serde_json::Value,
}

impl Metadata {
    pub fn new(command: &str, config: String) -> Self {
        Metadata {
            tool: "phasepad",
            version: env!("CARGO_PKG_VERSION"),
            command: command.into(),
            state: None,
            window: None,
            config,
            parameters: BTreeMap::new(),
            fields: Vec::new(),
            checks: Vec::new(),
            warnings: Vec::new(),
            notes: Vec::new(),
            details: serde_json::Value::Null,
        }
    }

    pub fn all_checks_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn write(&self, path: &Path) -> Result<(), CliError> {
        let text = serde_json::to_string_pretty(self).map_err(|e| CliError::Data(e.to_string()))?;
        fs::write(path, text + "\n")?;
        Ok(())
    }
}

fn extension(format: Format) -> &'static str {
    match format {
        Format::Csv => "csv",
        Format::Bin => "bin",
    }
}

/// Writes `field` as `<dir>/<stem>.<ext>`.
pub fn write_field(dir: &Path, stem: &str, field: &PhaseSpaceField, kind: FieldKind, format: Format) -> Result<FieldRecord, CliError> {
    let file = format!("{stem}.{}", extension(format));
    let path = dir.join(&file);
    let mut w = BufWriter::new(fs::File::create(&path)?);
    match format {
        Format::Csv => write_csv(&mut w, field, kind)?,
        Format::Bin => write_bin(&mut w, field, kind)?,
    }
    w.flush()?;
    Ok(FieldRecord {
        name: stem.into(),
        file,
        kind,
        format,
        q_axis: field.q_axis().into(),
        p_axis: field.p_axis().into(),
    })
}

// `{:e}` prints the shortest digits that parse back to the same f64.
fn write_csv(w: &mut impl Write, field: &PhaseSpaceField, kind: FieldKind) -> Result<(), CliError> {
    let (qa, pa) = (field.q_axis(), field.p_axis());
    match kind {
        FieldKind::Complex => writeln!(w, "q,p,re,im")?,
        FieldKind::Real => writeln!(w, "q,p,value")?,
    }
    for iq in 0..qa.len() {
        let q = qa.point(iq);
        for (ip, v) in field.row(iq).iter().enumerate() {
            let p = pa.point(ip);
            match kind {
                FieldKind::Complex => writeln!(w, "{q:e},{p:e},{:e},{:e}", v.re, v.im)?,
                FieldKind::Real => writeln!(w, "{q:e},{p:e},{:e}", v.re)?,
            }
        }
    }
    Ok(())
}

fn write_bin(w: &mut impl Write, field: &PhaseSpaceField, kind: FieldKind) -> Result<(), CliError> {
    let (qa, pa) = (field.q_axis(), field.p_axis());
    w.write_all(BIN_MAGIC)?;
    w.write_all(&BIN_VERSION.to_le_bytes())?;
    w.write_all(&u32::from(kind == FieldKind::Complex).to_le_bytes())?;
    for a in [qa, pa] {
        w.write_all(&a.min().to_le_bytes())?;
        w.write_all(&a.max().to_le_bytes())?;
        w.write_all(&(a.len() as u64).to_le_bytes())?;
    }
    for v in field.values() {
        w.write_all(&v.re.to_le_bytes())?;
        if kind == FieldKind::Complex {
            w.write_all(&v.im.to_le_bytes())?;
        }
    }
    Ok(())
}

/// Reads a grid file written by [`write_field`]; real fields come back
/// with zero imaginary part.
pub fn read_field(path: &Path) -> Result<(PhaseSpaceField, FieldKind), CliError> {
    match path.extension().and_then(|e| e.to_str()) {
        Some("csv") => read_csv(path),
        Some("bin") => read_bin(path),
        _ => Err(CliError::Data(format!("{}: expected a .csv or .bin file", path.display()))),
    }
}

fn parse_f64(s: &str, line: usize) -> Result<f64, CliError> {
    s.trim().parse::<f64>().map_err(|_| CliError::Data(format!("line {line}: bad number '{s}'")))
}

fn axis_from_points(points: &[f64], what: &str) -> Result<Axis, CliError> {
    let (first, last) = (points[0], points[points.len() - 1]);
    let axis = Axis::new(first, last, points.len()).map_err(|e| CliError::Data(format!("{what}: {e}")))?;
    if axis.points().zip(points).any(|(a, b)| a != *b) {
        return Err(CliError::Data(format!("{what} is not the uniform axis [{first}, {last}]")));
    }
    Ok(axis)
}

fn read_csv(path: &Path) -> Result<(PhaseSpaceField, FieldKind), CliError> {
    let reader = BufReader::new(fs::File::open(path)?);
    let mut lines = reader.lines();
    let header = lines.next().ok_or_else(|| CliError::Data("empty file".into()))??;
    let kind = match header.trim() {
        "q,p,re,im" => FieldKind::Complex,
        "q,p,value" => FieldKind::Real,
        other => return Err(CliError::Data(format!("unexpected header '{other}'"))),
    };
    let width = if kind == FieldKind::Complex { 4 } else { 3 };
    let (mut qs, mut ps, mut values) = (Vec::new(), Vec::new(), Vec::new());
    for (i, line) in lines.enumerate() {
        let line = line?;
        let lineno = i + 2;
        let cols: Vec<&str> = line.split(',').collect();
        if cols.len() != width {
            return Err(CliError::Data(format!("line {lineno}: expected {width} columns")));
        }
        let q = parse_f64(cols[0], lineno)?;
        let p = parse_f64(cols[1], lineno)?;
        if qs.last() != Some(&q) {
            qs.push(q);
        }
        if qs.len() == 1 {
            ps.push(p);
        }
        let im = if kind == FieldKind::Complex { parse_f64(cols[3], lineno)? } else { 0.0 };
        values.push(C64::new(parse_f64(cols[2], lineno)?, im));
    }
    if qs.is_empty() {
        return Err(CliError::Data("no data rows".into()));
    }
    let qa = axis_from_points(&qs, "q axis")?;
    let pa = axis_from_points(&ps, "p axis")?;
    Ok((PhaseSpaceField::new(qa, pa, values)?, kind))
}

fn read_bin(path: &Path) -> Result<(PhaseSpaceField, FieldKind), CliError> {
    let mut bytes = Vec::new();
    fs::File::open(path)?.read_to_end(&mut bytes)?;
    let mut pos = 0usize;
    let mut take = |n: usize| -> Result<&[u8], CliError> {
        let s = bytes.get(pos..pos + n).ok_or_else(|| CliError::Data("truncated binary file".into()))?;
        pos += n;
        Ok(s)
    };
    if take(8)? != BIN_MAGIC {
        return Err(CliError::Data("not a phasepad grid file".into()));
    }
    let u32_at = |b: &[u8]| u32::from_le_bytes(b.try_into().expect("4 bytes"));
    let f64_at = |b: &[u8]| f64::from_le_bytes(b.try_into().expect("8 bytes"));
    let version = u32_at(take(4)?);
    if version != BIN_VERSION {
        return Err(CliError::Data(format!("unsupported version {version}")));
    }
    let complex = u32_at(take(4)?) == 1;
    let mut axes = Vec::new();
    for _ in 0..2 {
        let min = f64_at(take(8)?);
        let max = f64_at(take(8)?);
        let n = u64::from_le_bytes(take(8)?.try_into().expect("8 bytes")) as usize;
        axes.push(Axis::new(min, max, n).map_err(|e| CliError::Data(e.to_string()))?);
    }
    let count = axes[0].len() * axes[1].len();
    let mut values = Vec::with_capacity(count);
    for _ in 0..count {
        let re = f64_at(take(8)?);
        let im = if complex { f64_at(take(8)?) } else { 0.0 };
        values.push(C64::new(re, im));
    }
    if take(1).is_ok() {
        return Err(CliError::Data("trailing bytes in binary file".into()));
    }
    let kind = if complex { FieldKind::Complex } else { FieldKind::Real };
    Ok((PhaseSpaceField::new(axes[0], axes[1], values)?, kind))
}

/// Reads a wavefunction from CSV with header `x,re,im` on a uniform axis.
pub fn read_wavefunction(path: &Path) -> Result<Wavefunction1D, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Config(format!("cannot read state file {}: {e}", path.display())))?;
    let bad = |msg: String| CliError::Config(format!("state file {}: {msg}", path.display()));
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    match lines.next().map(str::trim) {
        Some("x,re,im") => {}
        other => return Err(bad(format!("expected header 'x,re,im', got {other:?}"))),
    }
    let (mut xs, mut values) = (Vec::new(), Vec::new());
    for (i, line) in lines.enumerate() {
        let cols: Vec<&str> = line.split(',').collect();
        if cols.len() != 3 {
            return Err(bad(format!("line {}: expected 3 columns", i + 2)));
        }
        let n: Vec<f64> = cols
            .iter()
            .map(|c| c.trim().parse::<f64>().map_err(|_| bad(format!("line {}: bad number '{c}'", i + 2))))
            .collect::<Result<_, _>>()?;
        xs.push(n[0]);
        values.push(C64::new(n[1], n[2]));
    }
    if xs.len() < 2 {
        return Err(bad("needs at least two samples".into()));
    }
    let axis = Axis::new(xs[0], xs[xs.len() - 1], xs.len()).map_err(|e| bad(e.to_string()))?;
    let tol = 1e-9 * axis.spacing();
    if axis.points().zip(&xs).any(|(a, b)| (a - b).abs() > tol) {
        return Err(bad("x samples are not uniformly spaced".into()));
    }
    Wavefunction1D::new(axis, values).map_err(|e| bad(e.to_string()))
}

pub fn ensure_dir(dir: &Path) -> Result<PathBuf, CliError> {
    fs::create_dir_all(dir)?;
    Ok(dir.to_path_buf())
}
