//! Special functions: complex error function, Hermite and Laguerre
//! polynomials, factorials.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Largest |Im z| accepted by [`complex_erf`]; beyond it erf overflows
/// long before anything physically meaningful happens.
pub const ERF_IMAG_LIMIT: f64 = 12.0;

const SERIES_LIMIT: f64 = 2.0;

/// Error function of a complex argument, relative accuracy ~1e-13.
pub fn complex_erf(z: C64) -> Result<C64> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::Domain(format!("erf of non-finite argument {z}")));
    }
    if z.im.abs() > ERF_IMAG_LIMIT {
        return Err(Error::Domain(format!("|Im z| = {} exceeds {ERF_IMAG_LIMIT}", z.im.abs())));
    }
    // erf(-z) = -erf(z), erf(conj z) = conj erf(z)
    let flip = z.re < 0.0;
    let z = if flip { -z } else { z };
    let mirror = z.im < 0.0;
    let w = if mirror { z.conj() } else { z };
    let v = if w.re <= SERIES_LIMIT { erf_series(w) } else { erf_continued_fraction(w) };
    let v = if mirror { v.conj() } else { v };
    Ok(if flip { -v } else { v })
}

fn erf_series(z: C64) -> C64 {
    let z2 = z * z;
    let mut term = z;
    let mut sum = z;
    for n in 1..600 {
        term *= -z2 / n as f64;
        let add = term / (2 * n + 1) as f64;
        sum += add;
        if add.norm() <= 1e-17 * sum.norm() {
            break;
        }
    }
    sum * (2.0 / PI.sqrt())
}

/// `1 - exp(-z²) w(iz)` with the Faddeeva function from its Laplace
/// continued fraction; valid for Re z > 0.
fn erf_continued_fraction(z: C64) -> C64 {
    let iz = C64::new(-z.im, z.re);
    C64::new(1.0, 0.0) - (-z * z).exp() * faddeeva_cf(iz)
}

/// w(u) = (i/√π) / (u - (1/2)/(u - 1/(u - (3/2)/(u - ...)))) for Im u > 0.
fn faddeeva_cf(u: C64) -> C64 {
    let tiny = 1e-300;
    // Modified Lentz on b0 + a1/(b1 + a2/(b2 + ...)) with b_k = u, a_k = -k/2.
    let mut f = u;
    let mut c = f;
    let mut d = C64::new(0.0, 0.0);
    for k in 1..20_000 {
        let a = -(k as f64) / 2.0;
        d = u + a * d;
        if d.norm() < tiny {
            d = C64::new(tiny, 0.0);
        }
        c = u + a / c;
        if c.norm() < tiny {
            c = C64::new(tiny, 0.0);
        }
        d = d.inv();
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).norm() < 1e-16 {
            break;
        }
    }
    C64::new(0.0, 1.0 / PI.sqrt()) / f
}

/// Physicists' Hermite polynomials `H_0(x) ..= H_n(x)`.
pub fn hermite_all(n: usize, x: C64) -> Vec<C64> {
    let mut h = Vec::with_capacity(n + 1);
    h.push(C64::new(1.0, 0.0));
    if n >= 1 {
        h.push(2.0 * x);
    }
    for k in 1..n {
        let next = 2.0 * x * h[k] - 2.0 * k as f64 * h[k - 1];
        h.push(next);
    }
    h
}

/// Physicists' Hermite polynomial `H_n(x)`.
pub fn hermite(n: usize, x: C64) -> C64 {
    hermite_all(n, x)[n]
}

/// Hermite function `H_n(x) e^{-x²/2} / sqrt(2^n n! √π)`, evaluated by the
/// normalized recurrence so it stays finite for large `n`.
pub fn hermite_function(n: usize, x: f64) -> f64 {
    let mut prev = 0.0;
    let mut cur = PI.powf(-0.25) * (-x * x / 2.0).exp();
    for k in 0..n {
        let next = (2.0 / (k + 1) as f64).sqrt() * x * cur - (k as f64 / (k + 1) as f64).sqrt() * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Generalized Laguerre polynomial `L_n^{(alpha)}(x)`.
pub fn laguerre(n: usize, alpha: f64, x: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let mut prev = 1.0;
    let mut cur = 1.0 + alpha - x;
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + alpha - x) * cur - (kf + alpha) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

pub fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    // (re z, im z, re erf z, im erf z), 30-digit reference values.
    const ERF_TABLE: &[(f64, f64, f64, f64)] = &[
        (1.0, 0.0, 0.84270079294971486934, 0.0),
        (0.5, 0.5, 0.64261291485482052832, 0.45788139443519221584),
        (2.0, 1.0, 1.0036063427256517509, -0.011259006028815025076),
        (-1.2, 3.0, -166.20137436963781121, 304.76242468621369864),
        (3.5, -2.0, 1.0000125859819408307, -0.000033694610132733287988),
        (0.1, 8.0, 4.3873887588112186629e+26, -7.2402753684506178514e+24),
        (5.0, 11.5, 1.7011448553745574803e+45, 1.3742708004066076717e+44),
        (1.5, 0.2, 0.97316836274156663811, 0.022671346192137433762),
        (2.5, 2.5, 0.87636319535042132527, 0.099928773791597467965),
        (0.0, 0.001, 0.0, 0.0011283795432220144672),
    ];

    #[test]
    fn erf_matches_reference_table() {
        for &(x, y, re, im) in ERF_TABLE {
            let got = complex_erf(C64::new(x, y)).unwrap();
            let want = C64::new(re, im);
            let rel = (got - want).norm() / want.norm();
            assert!(rel < 1e-12, "erf({x}+{y}i) = {got}, want {want}, rel {rel:e}");
        }
    }

    #[test]
    fn erf_rejects_large_imaginary_part() {
        assert!(matches!(complex_erf(C64::new(0.0, 12.5)), Err(Error::Domain(_))));
        assert!(complex_erf(C64::new(f64::NAN, 0.0)).is_err());
    }

    #[test]
    fn erf_agrees_on_both_sides_of_branch_switch() {
        let table = [
            (1.99, 3.0, -22.242677169372795304, 7.7275845752485099409),
            (2.01, 3.0, -19.418808947674548448, 9.5263436620268330207),
            (1.99, 9.0, -1.5256823192573103872e+32, -8.9080132724666655747e+31),
            (2.01, 9.0, -1.6064096066304105318e+32, -2.7676595886359883552e+31),
            (2.01, 0.0, 0.99552484935524823708, 0.0),
        ];
        for (x, y, re, im) in table {
            let got = complex_erf(C64::new(x, y)).unwrap();
            let want = C64::new(re, im);
            assert!((got - want).norm() / want.norm() < 1e-12, "erf({x}+{y}i) = {got}");
        }
    }

    #[test]
    fn hermite_reference_values() {
        let h = hermite(5, C64::new(0.3, 0.7));
        assert!((h - C64::new(109.60896, 105.04704)).norm() < 1e-10);
        assert!((hermite(12, C64::new(1.1, 0.0)).re - 836470.514302652892319).abs() < 1e-6);
    }

    #[test]
    fn hermite_function_is_normalized() {
        let h = 0.01;
        for n in [0usize, 3, 10, 40] {
            let s: f64 = (-2000..=2000).map(|i| hermite_function(n, i as f64 * h).powi(2) * h).sum();
            assert!((s - 1.0).abs() < 1e-10, "n={n}: {s}");
        }
    }

    #[test]
    fn laguerre_reference_values() {
        assert!((laguerre(4, 2.0, 1.7) + 1.88999583333333322892).abs() < 1e-13);
        assert!((laguerre(10, 0.0, 3.2) + 0.400499268295562295970).abs() < 1e-13);
    }

    #[test]
    fn factorials_and_binomials() {
        assert_eq!(factorial(0), 1.0);
        assert_eq!(factorial(10), 3628800.0);
        assert_eq!(binomial(10, 3), 120.0);
        assert_eq!(binomial(3, 5), 0.0);
    }
}
