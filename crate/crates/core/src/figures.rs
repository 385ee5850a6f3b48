//! Data behind the six reference plots: the test-state amplitude and its
//! distributions, oscillator amplitudes for Gaussian and square windows, and
//! a momentum eigenamplitude.

use std::collections::BTreeMap;

use num_complex::Complex64 as C64;

use crate::analytic::{momentum_eigenamplitude, oscillator_amplitude, sho_wigner, test_state};
use crate::error::{Error, Result};
use crate::numgrid::quad::integrate_2d;
use crate::numgrid::{Axis, PhaseSpaceField};
use crate::windows::WindowSpec;

/// One plotted grid.
#[derive(Debug, Clone)]
pub struct FigureField {
    pub name: String,
    pub field: PhaseSpaceField,
    /// Whether only the real part is meaningful.
    pub real: bool,
}

#[derive(Debug, Clone)]
pub struct Figure {
    pub number: u8,
    pub description: String,
    pub windows: Vec<WindowSpec>,
    pub parameters: BTreeMap<String, f64>,
    pub fields: Vec<FigureField>,
}

impl Figure {
    pub fn field(&self, name: &str) -> Option<&PhaseSpaceField> {
        self.fields.iter().find(|f| f.name == name).map(|f| &f.field)
    }
}

fn real(name: &str, field: PhaseSpaceField) -> FigureField {
    FigureField { name: name.into(), field, real: true }
}

fn params(items: &[(&str, f64)]) -> BTreeMap<String, f64> {
    items.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

pub const FIGURE_COUNT: u8 = 6;

/// Grids for figure `number` (1..=6) on `q_axis × p_axis`.
pub fn figure(number: u8, q_axis: &Axis, p_axis: &Axis) -> Result<Figure> {
    let ts = test_state();
    let (q, p) = (q_axis, p_axis);
    let fig = match number {
        1 => {
            let amp = ts.amplitude(1.0)?.sample(q, p)?;
            Figure {
                number,
                description: "real and imaginary parts of the test-state amplitude, Gaussian window beta=1".into(),
                windows: vec![ts.matched_window(1.0)],
                parameters: params(&[("beta", 1.0)]),
                fields: vec![
                    real("re_psi", amp.map(|v| C64::new(v.re, 0.0))),
                    real("im_psi", amp.map(|v| C64::new(v.im, 0.0))),
                ],
            }
        }
        2 => Figure {
            number,
            description: "Wigner function of the test state and |Psi|^2 for beta=1".into(),
            windows: vec![ts.matched_window(1.0)],
            parameters: params(&[("beta", 1.0)]),
            fields: vec![real("wigner", ts.wigner().sample(q, p)?), real("modulus_sq", ts.amplitude(1.0)?.sample(q, p)?.modulus_sq())],
        },
        3 => Figure {
            number,
            description: "|Psi|^2 of the test state for beta=0.5 and beta=2".into(),
            windows: vec![ts.matched_window(0.5), ts.matched_window(2.0)],
            parameters: params(&[("beta_left", 0.5), ("beta_right", 2.0)]),
            fields: vec![
                real("modulus_sq_beta_0.5", ts.amplitude(0.5)?.sample(q, p)?.modulus_sq()),
                real("modulus_sq_beta_2", ts.amplitude(2.0)?.sample(q, p)?.modulus_sq()),
            ],
        },
        4 => {
            let w = WindowSpec::standard();
            Figure {
                number,
                description: "oscillator n=1: Wigner function and |Psi_1|^2, Gaussian window beta=1, lambda=0".into(),
                windows: vec![w.clone()],
                parameters: params(&[("n", 1.0), ("beta", 1.0)]),
                fields: vec![real("wigner", sho_wigner(1).sample(q, p)?), real("modulus_sq", oscillator_amplitude(1, &w)?.sample(q, p)?.modulus_sq())],
            }
        }
        5 => {
            let w = WindowSpec::Square { a: 1.0 };
            Figure {
                number,
                description: "oscillator n=1: |Psi_1|^2 for a square window a=1".into(),
                windows: vec![w.clone()],
                parameters: params(&[("n", 1.0), ("a", 1.0)]),
                fields: vec![real("modulus_sq", oscillator_amplitude(1, &w)?.sample(q, p)?.modulus_sq())],
            }
        }
        6 => {
            let w = WindowSpec::Gaussian { beta: 1.0, x_w: 4.0, k_w: -2.0 };
            let amp = momentum_eigenamplitude(-2.0, &w)?.sample(q, p)?;
            Figure {
                number,
                description: "real part of the momentum eigenamplitude k0=-2, Gaussian window x_W=4, k_W=-2, beta=1".into(),
                windows: vec![w],
                parameters: params(&[("k0", -2.0), ("beta", 1.0), ("x_w", 4.0), ("k_w", -2.0)]),
                fields: vec![real("re_psi", amp.map(|v| C64::new(v.re, 0.0)))],
            }
        }
        _ => return Err(Error::Config(format!("figure number must be 1..={FIGURE_COUNT}, got {number}"))),
    };
    Ok(fig)
}

/// Variances of `q` and `p` under a nonnegative density.
pub fn marginal_variances(density: &PhaseSpaceField) -> Result<(f64, f64)> {
    let mass = integrate_2d(density)?.re;
    let moment = |f: &dyn Fn(f64, f64) -> f64| -> Result<f64> {
        Ok(integrate_2d(&density.map_with_coords(|q, p, v| v * f(q, p)))?.re / mass)
    };
    let (mq, mp) = (moment(&|q, _| q)?, moment(&|_, p| p)?);
    Ok((moment(&|q, _| (q - mq) * (q - mq))?, moment(&|_, p| (p - mp) * (p - mp))?))
}
