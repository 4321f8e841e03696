//! Randomized property checks of the invariants that hold for every
//! parameter choice, not just the frozen reference points.

use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;
use uncprob_core::{
    decompose, detection_probability, hermitian_moments, hermitian_moments_quadrature, integrate,
    kennard_product, momentum_uncertainty, reduce, sine_coefficients, stage_ii,
    uncertainty_product, DiffractionSetup, DomainParams, ElementaryPacket, QuadratureSpec,
    SineSeries,
};

fn normalized_coeffs(kmax: usize) -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..=kmax).prop_filter_map(
        "norm too small",
        |pairs| {
            let norm = pairs.iter().map(|(r, i)| r * r + i * i).sum::<f64>().sqrt();
            if norm < 1e-3 {
                return None;
            }
            Some(pairs.into_iter().map(|(r, i)| Complex64::new(r / norm, i / norm)).collect())
        },
    )
}

proptest! {
    #[test]
    fn step_decomposition_is_complete(
        n in -20i32..=20,
        k in 1u32..=3,
        detectors in 1u32..=500,
    ) {
        let packet = ElementaryPacket::new(n, k).unwrap();
        let total: f64 = decompose(&packet, detectors)
            .unwrap()
            .iter()
            .map(|w| w.amplitude * w.amplitude)
            .sum();
        prop_assert!((total - 1.0).abs() < 1e-12, "defect {}", total - 1.0);
    }

    #[test]
    fn selective_amplitude_identity(
        n in -20i32..=20,
        k in 1u32..=3,
        detectors in 10u32..=400,
        slice_seed in 0u32..10_000,
    ) {
        let slice = slice_seed % detectors + 1;
        let packet = ElementaryPacket::new(n, k).unwrap();
        let reduced = reduce(&packet, detectors, slice).unwrap();
        let series = sine_coefficients(&reduced, k as usize).unwrap();
        let a = series.coeff(k as usize).norm_sqr();
        let c = reduced.parent_amplitude().powi(2);
        prop_assert!((a - c).abs() < 1e-10, "N={detectors} l0={slice}: {a} vs {c}");
    }

    #[test]
    fn kennard_closed_form_is_monotone_and_floored(k in 1u32..=10_000) {
        let u = kennard_product(k).unwrap();
        prop_assert!(u >= 0.5);
        if k > 1 {
            prop_assert!(u > kennard_product(k - 1).unwrap());
        }
        let dom = DomainParams::default();
        let m = ElementaryPacket::new(0, k).unwrap().analytic_moments(&dom);
        prop_assert!((m.sd_x * m.sd_p - u).abs() <= 1e-12 * u);
    }

    #[test]
    fn locality_zero_is_exact_for_any_time(
        n in -50i32..=50,
        k in 1u32..=50,
        t in 0.0f64..100.0,
    ) {
        let dom = DomainParams { lambda: 1e-5, time: t };
        let packet = ElementaryPacket::new(n, k).unwrap();
        let shift = dom.window_shift(n);
        let edge = shift - shift.floor();
        prop_assert_eq!(packet.amplitude(edge, &dom).norm(), 0.0);
        prop_assert_eq!(packet.amplitude(shift, &dom).norm(), 0.0);
        prop_assert!(packet.density(shift + 0.5 / k as f64, &dom) > 1.0);
    }

    #[test]
    fn simpson_is_exact_on_cubics(
        c0 in -5.0f64..5.0,
        c1 in -5.0f64..5.0,
        c2 in -5.0f64..5.0,
        c3 in -5.0f64..5.0,
        half_panels in 50usize..=500,
    ) {
        let spec = QuadratureSpec::new(2 * half_panels).unwrap();
        let got = integrate(|x| Complex64::new(((c3 * x + c2) * x + c1) * x + c0, 0.0), &spec)
            .unwrap();
        let exact = c0 + c1 / 2.0 + c2 / 3.0 + c3 / 4.0;
        prop_assert!((got.re - exact).abs() < 1e-13 * (1.0 + exact.abs()));
        prop_assert_eq!(got.im, 0.0);
    }

    #[test]
    fn slice_selection_product_scales_inverse_with_detectors(
        detectors in 7u32..=300,
        slice_seed in 0u32..10_000,
    ) {
        let slice = slice_seed % detectors + 1;
        let packet = ElementaryPacket::new(10, 1).unwrap();
        let r = stage_ii(&packet, detectors, slice).unwrap();
        // a state supported on width 1/N has sd at most half the width
        prop_assert!(r.uncertainty_product <= PI / (2.0 * detectors as f64) + 1e-12);
        prop_assert!(r.uncertainty_product < 0.5);
        prop_assert!(r.probability > 0.0 && r.probability <= 2.0 / detectors as f64 + 1e-15);
    }

    #[test]
    fn hermitian_routes_agree_on_random_series(
        coeffs in normalized_coeffs(8),
        n in -10i32..=10,
    ) {
        let series = SineSeries::new(n, coeffs).unwrap();
        let closed = hermitian_moments(&series).unwrap();
        let spec = QuadratureSpec::new(2048).unwrap();
        let quad = hermitian_moments_quadrature(&series, &spec).unwrap();
        prop_assert!(
            (closed.sd - quad.sd).abs() <= 1e-6 * closed.sd.max(1.0),
            "sd {} vs {}", closed.sd, quad.sd
        );
        prop_assert!(
            (closed.mean - quad.mean).abs() <= 1e-6 * (1.0 + closed.mean.abs()),
            "mean {} vs {}", closed.mean, quad.mean
        );
    }

    #[test]
    fn diffraction_probability_tracks_product(
        p0 in 1.0f64..1000.0,
        q in 0.01f64..1.0,
        dq_frac in 1e-6f64..0.5,
    ) {
        // dp0 = 1 and dq strictly below the crossover q/p0
        let dq = q / p0 * dq_frac;
        let s = DiffractionSetup::new(p0, 1.0, q, dq).unwrap();
        prop_assert_eq!(
            detection_probability(&s).value,
            uncertainty_product(&s).unwrap().value
        );
        // momentum spread grows with the detector and with the radius
        let wider = DiffractionSetup::new(p0, 1.0, q, dq * 1.5).unwrap();
        prop_assert!(momentum_uncertainty(&wider).value > momentum_uncertainty(&s).value);
        if q <= 0.9 {
            let farther = DiffractionSetup::new(p0, 1.0, q + 0.05, dq).unwrap();
            prop_assert!(momentum_uncertainty(&farther).value > momentum_uncertainty(&s).value);
        }
    }
}
