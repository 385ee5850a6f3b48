use std::f64::consts::PI;

use phasepad::analytic::{
    amplitude_from_bargmann, bargmann_from_amplitude, coherent_amplitude, coherent_wavefunction, coherent_wigner,
};
use phasepad::numgrid::{integrate_2d, Axis};
use phasepad::staralg::{born_wigner, PolySymbol};
use phasepad::xform::{forward_amplitude, inverse_amplitude, spectrogram_husimi, TransformPlan};
use phasepad::{WindowSpec, C64};
use proptest::prelude::*;

fn x_axis() -> Axis {
    Axis::new(-12.0, 12.0, 384).unwrap()
}

fn grid() -> Axis {
    Axis::new(-7.0, 7.0, 96).unwrap()
}

fn mu() -> impl Strategy<Value = C64> {
    (-1.5f64..1.5, -1.5f64..1.5).prop_map(|(a, b)| C64::new(a, b))
}

fn window() -> impl Strategy<Value = WindowSpec> {
    (0.7f64..1.4, -0.8f64..0.8, -0.8f64..0.8).prop_map(|(beta, x_w, k_w)| WindowSpec::Gaussian { beta, x_w, k_w })
}

fn small_poly() -> impl Strategy<Value = PolySymbol> {
    prop::collection::vec(((-2.0f64..2.0, -2.0f64..2.0), 0u32..3, 0u32..3), 1..4).prop_map(|terms| {
        terms.into_iter().fold(PolySymbol::zero(), |acc, ((re, im), k, l)| acc.add(&PolySymbol::monomial(C64::new(re, im), k, l)))
    })
}

fn poly_close(a: &PolySymbol, b: &PolySymbol) -> bool {
    let diff = a.sub(b);
    let close = diff.terms().all(|(_, v)| v.norm() < 1e-9);
    close
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn transform_is_linear(m1 in mu(), m2 in mu(), a in -2.0f64..2.0, b in -2.0f64..2.0, w in window()) {
        let x = x_axis();
        let plan = TransformPlan::new(x, grid(), grid(), w).unwrap();
        let (p1, p2) = (coherent_wavefunction(m1, &x).unwrap(), coherent_wavefunction(m2, &x).unwrap());
        let (ca, cb) = (C64::new(a, 0.0), C64::new(0.0, b));
        let lhs = forward_amplitude(&p1.combine(ca, &p2, cb).unwrap(), &plan).unwrap();
        let rhs = forward_amplitude(&p1, &plan).unwrap().combine(ca, &forward_amplitude(&p2, &plan).unwrap(), cb).unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs).unwrap() < 1e-12);
    }

    #[test]
    fn transform_preserves_norm(m in mu(), w in window()) {
        let x = x_axis();
        let plan = TransformPlan::new(x, grid(), grid(), w).unwrap();
        let big = forward_amplitude(&coherent_wavefunction(m, &x).unwrap(), &plan).unwrap();
        let mass = integrate_2d(&big.modulus_sq()).unwrap().re;
        prop_assert!((mass - 1.0).abs() < 1e-8, "mass {}", mass);
    }

    #[test]
    fn inverse_recovers_state(m in mu(), w in window()) {
        let x = x_axis();
        let psi = coherent_wavefunction(m, &x).unwrap();
        let big = forward_amplitude(&psi, &TransformPlan::new(x, grid(), grid(), w.clone()).unwrap()).unwrap();
        let back = inverse_amplitude(&big, &w, &x).unwrap();
        prop_assert!(back.is_clean());
        prop_assert!(back.value.relative_distance(&psi).unwrap() < 1e-7);
    }

    #[test]
    fn born_product_is_real_wigner(m in mu(), beta in 0.7f64..1.4, l in mu()) {
        let a = Axis::new(-6.0, 6.0, 96).unwrap();
        let amp = coherent_amplitude(m, beta, l).unwrap().sample(&a, &a).unwrap();
        let w = born_wigner(&amp).unwrap().value;
        let exact = coherent_wigner(m).sample(&a, &a).unwrap();
        prop_assert!(w.max_abs_diff(&exact).unwrap() < 1e-9);
    }

    #[test]
    fn spectrogram_is_nonnegative_and_normalized(m in mu()) {
        let a = Axis::new(-8.0, 8.0, 128).unwrap();
        let amp = coherent_amplitude(m, 1.0, C64::new(0.0, 0.0)).unwrap().sample(&a, &a).unwrap();
        let q = spectrogram_husimi(&amp).unwrap();
        prop_assert!(q.min_re() >= 0.0);
        prop_assert!((integrate_2d(&q).unwrap().re - 1.0).abs() < 1e-8);
    }

    #[test]
    fn bargmann_round_trip(m in mu(), beta in 0.6f64..1.8, l in mu()) {
        let a = Axis::new(-4.0, 4.0, 48).unwrap();
        let amp = coherent_amplitude(m, beta, l).unwrap().sample(&a, &a).unwrap();
        let g = bargmann_from_amplitude(&amp, beta, l).unwrap();
        let back = amplitude_from_bargmann(&g, beta, l).unwrap();
        prop_assert!(back.max_abs_diff(&amp).unwrap() < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn symbolic_star_is_associative(a in small_poly(), b in small_poly(), d in small_poly()) {
        let left = a.star(&b).unwrap().star(&d).unwrap();
        let right = a.star(&b.star(&d).unwrap()).unwrap();
        prop_assert!(poly_close(&left, &right));
    }

    #[test]
    fn symbolic_star_reduces_to_product_for_functions_of_q(k in 0u32..4, l in 0u32..4, c1 in -2.0f64..2.0) {
        let a = PolySymbol::monomial(C64::new(c1, 0.0), k, 0);
        let b = PolySymbol::monomial(C64::new(1.0, 0.0), l, 0);
        prop_assert!(poly_close(&a.star(&b).unwrap(), &a.mul(&b)));
    }

    #[test]
    fn star_commutator_with_q_is_i_dp(a in small_poly()) {
        // q⋆A − A⋆q = i ∂A/∂p
        let q = PolySymbol::q();
        let comm = q.star(&a).unwrap().sub(&a.star(&q).unwrap());
        let expected = a.derivative(0, 1).scale(C64::new(0.0, 1.0));
        prop_assert!(poly_close(&comm, &expected));
    }

    #[test]
    fn window_spec_serde_round_trip(w in window()) {
        let json = serde_json::to_string(&w).unwrap();
        prop_assert_eq!(serde_json::from_str::<WindowSpec>(&json).unwrap(), w);
    }
}

#[test]
fn coherent_peak_value() {
    let m = C64::new(0.3, -0.7);
    let amp = coherent_amplitude(m, 1.0, m).unwrap();
    assert!((amp.eval(m.re, m.im).unwrap().norm_sqr() - 2.0 / PI).abs() < 1e-14);
}
