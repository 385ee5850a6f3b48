//! Moyal star product, Bopp operators, Wigner functions, expectation values
//! and subspace residuals.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Checked, Error, Result, Warning};
use crate::numgrid::quad::{inner_product, integrate_2d, trapezoid_weights};
use crate::numgrid::spectral::{mixed_derivative, spectral_derivative, Direction, TrigInterpolant, ZoomDft};
use crate::numgrid::special::factorial;
use crate::numgrid::{Axis, PhaseSpaceField, Wavefunction1D};
use crate::windows::{sample_window, WindowSpec};
use crate::xform::amplitude_with;

/// Largest total degree of a polynomial symbol.
pub const MAX_DEGREE: usize = 16;

/// Edge mass (relative to the field norm) above which star products warn.
pub const STAR_EDGE_TOLERANCE: f64 = 1e-8;

/// Largest imaginary part (relative to the peak) accepted from [`born_wigner`].
pub const BORN_IMAG_TOLERANCE: f64 = 1e-6;

/// Polynomial phase-space symbol `Σ c_{ab} q^a p^b`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PolySymbol {
    terms: BTreeMap<(u32, u32), C64>,
}

impl PolySymbol {
    pub fn zero() -> Self {
        PolySymbol::default()
    }

    pub fn constant(c: f64) -> Self {
        PolySymbol::monomial(C64::new(c, 0.0), 0, 0)
    }

    pub fn monomial(c: C64, q_pow: u32, p_pow: u32) -> Self {
        let mut terms = BTreeMap::new();
        if c != C64::new(0.0, 0.0) {
            terms.insert((q_pow, p_pow), c);
        }
        PolySymbol { terms }
    }

    pub fn q() -> Self {
        PolySymbol::monomial(C64::new(1.0, 0.0), 1, 0)
    }

    pub fn p() -> Self {
        PolySymbol::monomial(C64::new(1.0, 0.0), 0, 1)
    }

    /// `p²/2 + V(q)` with `V(q) = Σ_k v_k q^k`.
    pub fn hamiltonian(potential: &[f64]) -> Self {
        let mut h = PolySymbol::monomial(C64::new(0.5, 0.0), 0, 2);
        for (k, &v) in potential.iter().enumerate() {
            h = h.add(&PolySymbol::monomial(C64::new(v, 0.0), k as u32, 0));
        }
        h
    }

    /// `(q² + p²)/2`.
    pub fn oscillator() -> Self {
        PolySymbol::hamiltonian(&[0.0, 0.0, 0.5])
    }

    pub fn terms(&self) -> impl Iterator<Item = ((u32, u32), C64)> + '_ {
        self.terms.iter().map(|(k, v)| (*k, *v))
    }

    pub fn coefficient(&self, q_pow: u32, p_pow: u32) -> C64 {
        self.terms.get(&(q_pow, p_pow)).copied().unwrap_or_default()
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(|(a, b)| (a + b) as usize).max().unwrap_or(0)
    }

    /// Highest power of `p` (0 for potentials).
    pub fn p_degree(&self) -> u32 {
        self.terms.keys().map(|k| k.1).max().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_real(&self) -> bool {
        self.terms.values().all(|c| c.im == 0.0)
    }

    fn check_degree(&self) -> Result<()> {
        let d = self.degree();
        if d > MAX_DEGREE {
            return Err(Error::Degree(d, MAX_DEGREE));
        }
        Ok(())
    }

    fn insert(&mut self, key: (u32, u32), c: C64) {
        let e = self.terms.entry(key).or_default();
        *e += c;
        if *e == C64::new(0.0, 0.0) {
            self.terms.remove(&key);
        }
    }

    pub fn add(&self, other: &PolySymbol) -> PolySymbol {
        let mut out = self.clone();
        for (k, c) in other.terms() {
            out.insert(k, c);
        }
        out
    }

    pub fn scale(&self, s: C64) -> PolySymbol {
        let mut out = PolySymbol::zero();
        for (k, c) in self.terms() {
            out.insert(k, c * s);
        }
        out
    }

    pub fn sub(&self, other: &PolySymbol) -> PolySymbol {
        self.add(&other.scale(C64::new(-1.0, 0.0)))
    }

    /// Pointwise product.
    pub fn mul(&self, other: &PolySymbol) -> PolySymbol {
        let mut out = PolySymbol::zero();
        for ((a1, b1), c1) in self.terms() {
            for ((a2, b2), c2) in other.terms() {
                out.insert((a1 + a2, b1 + b2), c1 * c2);
            }
        }
        out
    }

    /// `∂_q^k ∂_p^l`.
    pub fn derivative(&self, k: u32, l: u32) -> PolySymbol {
        let mut out = PolySymbol::zero();
        for ((a, b), c) in self.terms() {
            if a >= k && b >= l {
                let fa: f64 = ((a - k + 1)..=a).map(f64::from).product();
                let fb: f64 = ((b - l + 1)..=b).map(f64::from).product();
                out.insert((a - k, b - l), c * fa * fb);
            }
        }
        out
    }

    /// Exact star product: the Moyal series terminates for polynomials.
    pub fn star(&self, other: &PolySymbol) -> Result<PolySymbol> {
        self.check_degree()?;
        other.check_degree()?;
        let mut out = PolySymbol::zero();
        let d = self.degree().max(other.degree()) as u32;
        for k in 0..=d {
            for l in 0..=(d - k) {
                let a = self.derivative(k, l);
                let b = other.derivative(l, k);
                if a.is_zero() || b.is_zero() {
                    continue;
                }
                let c = moyal_coefficient(k, l);
                out = out.add(&a.mul(&b).scale(c));
            }
        }
        out.check_degree()?;
        Ok(out)
    }

    pub fn eval(&self, q: f64, p: f64) -> C64 {
        self.terms().map(|((a, b), c)| c * q.powi(a as i32) * p.powi(b as i32)).sum()
    }

    pub fn to_field(&self, q_axis: &Axis, p_axis: &Axis) -> Result<PhaseSpaceField> {
        PhaseSpaceField::from_fn(*q_axis, *p_axis, |q, p| self.eval(q, p))
    }
}

impl fmt::Display for PolySymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms()
            .map(|((a, b), c)| {
                let coef = if c.im == 0.0 { format!("{}", c.re) } else { format!("({c})") };
                let mut s = coef;
                if a > 0 {
                    s += &if a == 1 { "*q".to_string() } else { format!("*q^{a}") };
                }
                if b > 0 {
                    s += &if b == 1 { "*p".to_string() } else { format!("*p^{b}") };
                }
                s
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// `(i/2)^{k+l} (-1)^l / (k! l!)`.
fn moyal_coefficient(k: u32, l: u32) -> C64 {
    let sign = if l.is_multiple_of(2) { 1.0 } else { -1.0 };
    C64::new(0.0, 0.5).powu(k + l) * sign / (factorial(k as usize) * factorial(l as usize))
}

/// Side on which a symbol multiplies in [`bopp_apply`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    /// `sym ⋆ f`: `q → q + (i/2)∂_p`, `p → p - (i/2)∂_q`.
    Left,
    /// `f ⋆ sym`: `q → q - (i/2)∂_p`, `p → p + (i/2)∂_q`.
    Right,
}

/// Star product of a polynomial symbol with a sampled field, with the
/// derivatives of `f` taken spectrally.
pub fn bopp_apply(sym: &PolySymbol, side: Side, f: &PhaseSpaceField) -> Result<Checked<PhaseSpaceField>> {
    sym.check_degree()?;
    let (qa, pa) = (*f.q_axis(), *f.p_axis());
    let d = sym.degree() as u32;
    let mut acc = PhaseSpaceField::zeros(qa, pa);
    let mut warnings: Vec<Warning> = Vec::new();
    let mut derivs: BTreeMap<(u32, u32), PhaseSpaceField> = BTreeMap::new();
    for k in 0..=d {
        for l in 0..=(d - k) {
            // Left: (∂q^k ∂p^l sym)(∂q^l ∂p^k f); right: (∂q^k ∂p^l f)(∂q^l ∂p^k sym).
            let (ds, fq, fp) = match side {
                Side::Left => (sym.derivative(k, l), l, k),
                Side::Right => (sym.derivative(l, k), k, l),
            };
            if ds.is_zero() {
                continue;
            }
            let df = derivs.entry((fq, fp)).or_insert_with(|| {
                let p_part = if fp > 0 {
                    let c = spectral_derivative(f, Direction::P, fp);
                    warnings.extend(c.warnings);
                    c.value
                } else {
                    f.clone()
                };
                if fq > 0 {
                    let c = spectral_derivative(&p_part, Direction::Q, fq);
                    warnings.extend(c.warnings);
                    c.value
                } else {
                    p_part
                }
            });
            let c = moyal_coefficient(k, l);
            let term = df.map_with_coords(|q, p, v| c * ds.eval(q, p) * v);
            acc = acc.add(&term)?;
        }
    }
    warnings.dedup();
    Ok(Checked::with(acc, warnings))
}

/// `(A ⋆ B)(q,p)` from the integral form, written as
/// `(1/π²) ∬ Ǎ(q₁, 2(q₂-q)) B̌(q₂, 2(q-q₁)) e^{2ip(q₂-q₁)} dq₁ dq₂`
/// with `Ǎ(x,s) = ∫ A(x,p) e^{-isp} dp`. Both integrals run over the grid
/// itself, so nothing wraps around; mass beyond the grid is simply lost,
/// which the edge warning reports.
pub fn star_product(a: &PhaseSpaceField, b: &PhaseSpaceField) -> Result<Checked<PhaseSpaceField>> {
    a.check_same_grid(b)?;
    let (qa, pa) = (*a.q_axis(), *a.p_axis());
    let (n, np) = (qa.len(), pa.len());
    let h = qa.spacing();
    let span = 2.0 * (n - 1) as f64 * h;
    let pmax = pa.min().abs().max(pa.max().abs());
    if span * pa.spacing() >= PI || 2.0 * h * pmax >= PI {
        return Err(Error::Aliasing(format!(
            "star product needs q-extent·Δp < π/2 and Δq·max|p| < π/2 (got {} and {})",
            span / 2.0 * pa.spacing(),
            h * pmax
        )));
    }
    let ns = 2 * n - 1;
    let wp = trapezoid_weights(&pa);
    let partial = |f: &PhaseSpaceField| -> Vec<C64> {
        let zoom = ZoomDft::new(np, pa.min(), pa.spacing(), ns, -span, 2.0 * h, -1.0);
        f.values()
            .par_chunks(np)
            .flat_map_iter(|row| {
                let x: Vec<C64> = row.iter().zip(&wp).map(|(v, w)| v * *w).collect();
                zoom.apply(&x)
            })
            .collect()
    };
    let ah = partial(a);
    let bh = partial(b);
    // Transpose B̌ so the inner loop runs over contiguous memory.
    let mut bt = vec![C64::new(0.0, 0.0); ns * n];
    for j in 0..n {
        for l in 0..ns {
            bt[l * n + j] = bh[j * ns + l];
        }
    }
    let wq = trapezoid_weights(&qa);
    let zoom = ZoomDft::new(ns, -span, 2.0 * h, np, pa.min(), pa.spacing(), 1.0);
    let scale = 1.0 / (PI * PI);
    let rows: Vec<Vec<C64>> = (0..n)
        .into_par_iter()
        .map(|c| {
            let mut d = vec![C64::new(0.0, 0.0); ns];
            for i in 0..n {
                let brow = &bt[(c + n - 1 - i) * n..(c + n - i) * n];
                let arow = &ah[i * ns..(i + 1) * ns];
                let wi = wq[i];
                // j ranges over 0..n; the index j - c + n - 1 into Ǎ is always valid.
                for j in 0..n {
                    let v = arow[j + n - 1 - c] * brow[j] * (wi * wq[j]);
                    d[j + n - 1 - i] += v;
                }
            }
            zoom.apply(&d).into_iter().map(|v| v * scale).collect()
        })
        .collect();
    let out = PhaseSpaceField::new(qa, pa, rows.concat())?;
    let mut warnings = Vec::new();
    for f in [a, b] {
        let fraction = f.edge_fraction();
        if fraction > STAR_EDGE_TOLERANCE {
            warnings.push(Warning::EdgeMass { fraction });
            break;
        }
    }
    Ok(Checked::with(out, warnings))
}

/// Wigner function `(1/2π) ∫ ψ(q-y/2) conj(ψ(q+y/2)) e^{ipy} dy` (real part).
pub fn wigner_of(psi: &Wavefunction1D, q_axis: &Axis, p_axis: &Axis) -> Result<PhaseSpaceField> {
    let interp = TrigInterpolant::from_wavefunction(psi);
    let ax = *psi.axis();
    let nx = ax.len();
    let eval = interp.uniform_evaluator(-ax.spacing(), nx);
    let w = amplitude_with(psi, q_axis, p_axis, |x0, dx, n| {
        debug_assert!(n == nx && (dx + ax.spacing()).abs() < 1e-15);
        let mut v = eval.eval(x0);
        for (k, val) in v.iter_mut().enumerate() {
            if !ax.contains(x0 + k as f64 * dx) {
                *val = C64::new(0.0, 0.0);
            }
        }
        v
    })?;
    let s = 1.0 / (2.0 * PI).sqrt();
    Ok(w.map(|v| C64::new(v.re * s, 0.0)))
}

/// An x axis fine enough for a transform onto `(q_axis, p_axis)` that also
/// covers `[lo, hi]`.
fn covering_axis(q_axis: &Axis, p_axis: &Axis, lo: f64, hi: f64) -> Result<Axis> {
    let lo = lo.min(q_axis.min());
    let hi = hi.max(q_axis.max());
    let pmax = p_axis.min().abs().max(p_axis.max().abs());
    let h = q_axis.spacing().min(0.45 * PI / pmax.max(1e-12));
    let n = ((hi - lo) / h).ceil() as usize + 1;
    Axis::new(lo, hi, n.max(16))
}

/// Wigner function of a window state on the given grid.
pub fn window_wigner(window: &WindowSpec, q_axis: &Axis, p_axis: &Axis) -> Result<PhaseSpaceField> {
    let (lo, hi) = window.support();
    let x = covering_axis(q_axis, p_axis, lo, hi)?;
    let samples = sample_window(window, &x)?;
    wigner_of(&samples, q_axis, p_axis)
}

/// `Ψ ⋆ conj(Ψ)`, checked to be real.
pub fn born_wigner(psi_field: &PhaseSpaceField) -> Result<Checked<PhaseSpaceField>> {
    let w = star_product(psi_field, &psi_field.conj())?;
    let peak = w.value.max_abs_re();
    let imag = w.value.max_abs_im();
    if imag > BORN_IMAG_TOLERANCE * peak.max(f64::MIN_POSITIVE) {
        return Err(Error::Consistency(format!("star product has imaginary part {imag:.3e} (peak {peak:.3e})")));
    }
    Ok(w)
}

/// `⟨A⟩ = ∫ (Ψ ⋆ Ψ̄) A dΓ`, evaluated as `∫ Ψ̄ (A ⋆ Ψ) dΓ` (equal by the
/// trace property) so only the exact Bopp path is needed.
pub fn expectation(sym: &PolySymbol, psi_field: &PhaseSpaceField) -> Result<Checked<C64>> {
    let applied = bopp_apply(sym, Side::Left, psi_field)?;
    let value = inner_product(psi_field, &applied.value)?;
    let mut warnings = applied.warnings;
    let norm_sq = psi_field.norm_l2().powi(2);
    if (norm_sq - 1.0).abs() > 1e-6 {
        warnings.push(Warning::Normalization { norm_sq });
    }
    Ok(Checked::with(value, warnings))
}

fn relative_residual(product: &PhaseSpaceField, psi_field: &PhaseSpaceField) -> Result<f64> {
    let target = psi_field.scaled(C64::new(1.0 / (2.0 * PI), 0.0));
    let norm = target.norm_l2();
    if norm == 0.0 {
        return Ok(0.0);
    }
    Ok(product.sub(&target)?.norm_l2() / norm)
}

/// `‖Ψ ⋆ W_φ₀ - Ψ/2π‖ / ‖Ψ/2π‖`: 0 inside the window's subspace, 1 for
/// fields orthogonal to it.
pub fn subspace_residual(psi_field: &PhaseSpaceField, window: &WindowSpec) -> Result<f64> {
    if psi_field.max_abs() == 0.0 {
        return Ok(0.0);
    }
    let w = window_wigner(window, psi_field.q_axis(), psi_field.p_axis())?;
    relative_residual(&star_product(psi_field, &w)?.value, psi_field)
}

/// `‖W_ψ ⋆ Ψ - Ψ/2π‖ / ‖Ψ/2π‖`.
pub fn state_projection_residual(psi_field: &PhaseSpaceField, psi: &Wavefunction1D) -> Result<f64> {
    if psi_field.max_abs() == 0.0 {
        return Ok(0.0);
    }
    let w = wigner_of(psi, psi_field.q_axis(), psi_field.p_axis())?;
    relative_residual(&star_product(&w, psi_field)?.value, psi_field)
}

/// How far `|Ψ|²` is from the Wigner function; a diagnostic only.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DeviationReport {
    pub max_abs: f64,
    pub mean_abs: f64,
    pub l2: f64,
}

pub fn modulus_vs_wigner(psi_field: &PhaseSpaceField, wigner: &PhaseSpaceField) -> Result<DeviationReport> {
    let diff = psi_field.modulus_sq().sub(wigner)?;
    let max_abs = diff.max_abs();
    let mean_abs = diff.values().iter().map(|v| v.norm()).sum::<f64>() / diff.values().len() as f64;
    Ok(DeviationReport { max_abs, mean_abs, l2: diff.norm_l2() })
}

/// `∫ f dΓ` for a real-valued field such as a Wigner function.
pub fn total_mass(f: &PhaseSpaceField) -> Result<f64> {
    Ok(integrate_2d(f)?.re)
}

/// `(∂_q^a ∂_p^b) f`, exposed for residual diagnostics.
pub fn field_derivative(f: &PhaseSpaceField, q_order: u32, p_order: u32) -> PhaseSpaceField {
    mixed_derivative(f, q_order, p_order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::windows::sample_window;
    use crate::xform::{forward_amplitude, TransformPlan};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn gaussian_field(a: &Axis, q0: f64, p0: f64, s: f64) -> PhaseSpaceField {
        PhaseSpaceField::from_fn(*a, *a, |q, p| C64::new((-s * ((q - q0).powi(2) + (p - p0).powi(2))).exp(), 0.0))
            .unwrap()
    }

    #[test]
    fn symbolic_star_of_q_and_p() {
        let qp = PolySymbol::q().star(&PolySymbol::p()).unwrap();
        assert_eq!(qp, PolySymbol::monomial(c(1.0, 0.0), 1, 1).add(&PolySymbol::monomial(c(0.0, 0.5), 0, 0)));
        let pq = PolySymbol::p().star(&PolySymbol::q()).unwrap();
        let comm = qp.sub(&pq);
        assert_eq!(comm, PolySymbol::monomial(c(0.0, 1.0), 0, 0));
    }

    #[test]
    fn symbolic_star_is_associative() {
        let a = PolySymbol::q().mul(&PolySymbol::q()).add(&PolySymbol::p());
        let b = PolySymbol::monomial(c(0.3, 1.0), 1, 2);
        let d = PolySymbol::monomial(c(2.0, 0.0), 2, 1).add(&PolySymbol::constant(1.0));
        let left = a.star(&b).unwrap().star(&d).unwrap();
        let right = a.star(&b.star(&d).unwrap()).unwrap();
        for ((k, v), (k2, v2)) in left.terms().zip(right.terms()) {
            assert_eq!(k, k2);
            assert!((v - v2).norm() < 1e-12);
        }
    }

    #[test]
    fn degree_limit_is_enforced() {
        let big = PolySymbol::monomial(c(1.0, 0.0), 17, 0);
        assert_eq!(big.star(&PolySymbol::q()), Err(Error::Degree(17, MAX_DEGREE)));
        let a = Axis::default_grid();
        assert!(bopp_apply(&big, Side::Left, &PhaseSpaceField::zeros(a, a)).is_err());
    }

    #[test]
    fn identity_symbol_and_unit_field_act_trivially() {
        let a = Axis::default_grid();
        let f = gaussian_field(&a, 0.5, -0.5, 1.0);
        let g = bopp_apply(&PolySymbol::constant(1.0), Side::Left, &f).unwrap();
        assert!(g.value.max_abs_diff(&f).unwrap() < 1e-15);
        // 1 ⋆ f with a constant field is exact in the integral form as long as f decays.
        let one = PolySymbol::constant(1.0).to_field(&a, &a).unwrap();
        let s = star_product(&one, &f).unwrap();
        assert!(s.value.max_abs_diff_within(&f, 4.0, 4.0).unwrap() < 1e-10);
    }

    #[test]
    fn bopp_difference_is_p_derivative() {
        let a = Axis::default_grid();
        let f = gaussian_field(&a, 0.3, 0.2, 0.8).map_with_coords(|q, _, v| v * C64::from_polar(1.0, q));
        let l = bopp_apply(&PolySymbol::q(), Side::Left, &f).unwrap().value;
        let r = bopp_apply(&PolySymbol::q(), Side::Right, &f).unwrap().value;
        let dp = spectral_derivative(&f, Direction::P, 1).value.scaled(c(0.0, 1.0));
        assert!(l.sub(&r).unwrap().max_abs_diff(&dp).unwrap() < 1e-13);
    }

    #[test]
    fn bopp_matches_integral_star_product_on_interior() {
        let a = Axis::default_grid();
        let f = gaussian_field(&a, 0.2, -0.3, 0.7).map_with_coords(|q, p, v| v * C64::from_polar(1.0, 0.5 * q - p));
        // Taper the polynomial so the integral form sees a decaying field.
        let sym = PolySymbol::oscillator().add(&PolySymbol::monomial(c(0.5, 0.0), 1, 1));
        let taper = |x: f64| (-(x / 6.5).powi(32)).exp();
        let h = PhaseSpaceField::from_fn(a, a, |q, p| sym.eval(q, p) * taper(q) * taper(p)).unwrap();
        for side in [Side::Left, Side::Right] {
            let exact = bopp_apply(&sym, side, &f).unwrap().value;
            let num = match side {
                Side::Left => star_product(&h, &f),
                Side::Right => star_product(&f, &h),
            }
            .unwrap()
            .value;
            let d = exact.max_abs_diff_within(&num, 3.0, 3.0).unwrap();
            assert!(d < 1e-6, "{side:?}: {d:e}");
        }
    }

    #[test]
    fn star_product_of_gaussians_matches_closed_form() {
        // e^{-(q²+p²)} ⋆ e^{-(q²+p²)} = ½ e^{-(q²+p²)} (Weyl symbol of a projector pair).
        let a = Axis::default_grid();
        let g = gaussian_field(&a, 0.0, 0.0, 1.0);
        let s = star_product(&g, &g).unwrap();
        assert!(s.is_clean());
        let want = g.scaled(c(0.5, 0.0));
        assert!(s.value.max_abs_diff(&want).unwrap() < 1e-12);
    }

    #[test]
    fn star_product_trace_formula_and_associativity() {
        let a = Axis::default_grid();
        let f = gaussian_field(&a, 0.5, 0.0, 0.6);
        let g = gaussian_field(&a, -0.4, 0.7, 0.9).map_with_coords(|q, _, v| v * C64::from_polar(1.0, q));
        let k = gaussian_field(&a, 0.0, -0.5, 1.2);
        let fg = star_product(&f, &g).unwrap().value;
        let lhs = integrate_2d(&fg).unwrap();
        let rhs = integrate_2d(&f.mul(&g).unwrap()).unwrap();
        assert!((lhs - rhs).norm() < 1e-10);
        let left = star_product(&fg, &k).unwrap().value;
        let right = star_product(&f, &star_product(&g, &k).unwrap().value).unwrap().value;
        assert!(left.max_abs_diff(&right).unwrap() < 1e-10);
    }

    #[test]
    fn wigner_of_ground_and_first_excited_states() {
        let a = Axis::new(-8.0, 8.0, 257).unwrap();
        let w0 = wigner_of(&sample_window(&WindowSpec::standard(), &a).unwrap(), &a, &a).unwrap();
        assert!((w0.get(128, 128).re - 1.0 / PI).abs() < 1e-13);
        let e1 = WindowSpec::OscillatorExcited { n: 1, beta: 1.0, x_w: 0.0, k_w: 0.0 };
        let w1 = wigner_of(&sample_window(&e1, &a).unwrap(), &a, &a).unwrap();
        assert!((w1.get(128, 128).re + 1.0 / PI).abs() < 1e-13);
        assert!((total_mass(&w1).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn born_relation_and_projection_residuals() {
        let a = Axis::default_grid();
        let psi = sample_window(&WindowSpec::Gaussian { beta: 1.0, x_w: 0.5, k_w: -0.5 }, &a).unwrap();
        let w = WindowSpec::Gaussian { beta: 1.4, x_w: -0.2, k_w: 0.3 };
        let big = forward_amplitude(&psi, &TransformPlan::new(a, a, a, w.clone()).unwrap()).unwrap();
        let born = born_wigner(&big).unwrap().value;
        let direct = wigner_of(&psi, &a, &a).unwrap();
        assert!(born.max_abs_diff(&direct).unwrap() < 1e-12);
        assert!(subspace_residual(&big, &w).unwrap() < 1e-10);
        assert!(state_projection_residual(&big, &psi).unwrap() < 1e-10);
        let orth = sample_window(&WindowSpec::OscillatorExcited { n: 1, beta: 1.0, x_w: 0.5, k_w: -0.5 }, &a).unwrap();
        let r = state_projection_residual(&big, &orth).unwrap();
        assert!((r - 1.0).abs() < 1e-10, "{r}");
    }

    #[test]
    fn expectation_values_of_ground_state() {
        let a = Axis::default_grid();
        let psi = sample_window(&WindowSpec::Gaussian { beta: 1.0, x_w: 0.7, k_w: -0.4 }, &a).unwrap();
        let big = forward_amplitude(&psi, &TransformPlan::standard(WindowSpec::standard()).unwrap()).unwrap();
        let one = expectation(&PolySymbol::constant(1.0), &big).unwrap();
        assert!(one.is_clean());
        assert!((one.value - 1.0).norm() < 1e-12);
        assert!((expectation(&PolySymbol::q(), &big).unwrap().value - 0.7).norm() < 1e-12);
        assert!((expectation(&PolySymbol::p(), &big).unwrap().value + 0.4).norm() < 1e-12);
        let e = expectation(&PolySymbol::oscillator(), &big).unwrap().value;
        assert!((e - (0.5 + (0.49 + 0.16) / 2.0)).norm() < 1e-12);
    }

    #[test]
    fn modulus_report_flags_difference() {
        let a = Axis::new(-8.0, 8.0, 257).unwrap();
        let psi = sample_window(&WindowSpec::standard(), &a).unwrap();
        let big = forward_amplitude(&psi, &TransformPlan::new(a, a, a, WindowSpec::standard()).unwrap()).unwrap();
        let w = wigner_of(&psi, &a, &a).unwrap();
        let r = modulus_vs_wigner(&big, &w).unwrap();
        // |Ψ|² = (2/π) e^{-2(q²+p²)} vs W = e^{-(q²+p²)}/π: differ by 1/π at the origin.
        assert!((r.max_abs - 1.0 / PI).abs() < 1e-12);
    }
}
