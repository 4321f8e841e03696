//! Acceptance gate: one test per criterion, each printing a single
//! pass/fail line (visible with --nocapture) and failing loudly with the
//! offending checks otherwise.

use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use uncprob_core::{
    build_projectors, check_chain, check_lp_inequality, decompose, hermitian_moments,
    hermitian_moments_quadrature, kennard_product, position_moments, reconstruct_truncated,
    reduce, run_protocol, sine_coefficients, stage_ii, stage_iii, DomainParams, ElementaryPacket,
    QuadratureSpec, SineSeries, Window,
};

struct Criterion {
    id: u32,
    desc: &'static str,
    failures: Vec<String>,
}

impl Criterion {
    fn new(id: u32, desc: &'static str) -> Self {
        Criterion { id, desc, failures: Vec::new() }
    }

    fn claim(&mut self, ok: bool, detail: String) {
        if !ok {
            self.failures.push(detail);
        }
    }

    fn close(mut self, got: f64, want: f64, tol: f64, what: &str) -> Self {
        self.claim(
            (got - want).abs() <= tol,
            format!("{what}: got {got}, want {want} within {tol}"),
        );
        self
    }

    fn finish(self) {
        if self.failures.is_empty() {
            println!("acceptance criterion {} ({}): PASS", self.id, self.desc);
        } else {
            println!("acceptance criterion {} ({}): FAIL", self.id, self.desc);
            for f in &self.failures {
                println!("  - {f}");
            }
            panic!("acceptance criterion {} failed {} check(s)", self.id, self.failures.len());
        }
    }
}

#[test]
fn criterion_1_fine_row_reproduction() {
    let start = Instant::now();
    let records = run_protocol(10, 200, 80, 800).unwrap();
    let elapsed = start.elapsed().as_secs_f64();
    let (i, ii, iii, iv) = (&records[0], &records[1], &records[2], &records[3]);

    let mut c = Criterion::new(1, "four stages at N=200, l0=80, kmax=800")
        .close(i.uncertainty_product, 0.567862, 1e-6, "U_i")
        .close(ii.uncertainty_product, 0.00453444, 1e-5, "U_ii")
        .close(ii.probability, 0.00899826, 1e-6, "P_ii")
        .close(iii.uncertainty_product, 0.827034, 0.005 * 0.827034, "U_iii")
        .close(iv.probability, ii.probability, 1e-10, "P_iv vs P_ii");
    c.claim(
        iv.uncertainty_product == ii.uncertainty_product,
        format!("U_iv {} != U_ii {} (must be exact)", iv.uncertainty_product, ii.uncertainty_product),
    );
    c.claim(elapsed < 10.0, format!("runtime {elapsed:.2}s exceeds 10s"));
    c.finish();
}

#[test]
fn criterion_2_coarse_row_reproduction() {
    let records = run_protocol(10, 100, 40, 400).unwrap();
    Criterion::new(2, "four stages at N=100, l0=40, kmax=400")
        .close(records[1].uncertainty_product, 0.00906856, 1e-5, "U_ii")
        .close(records[1].probability, 0.0179003, 1e-6, "P_ii")
        .close(records[2].uncertainty_product, 0.826994, 0.005 * 0.826994, "U_iii")
        .finish();
}

#[test]
fn criterion_3_intermediate_values() {
    let packet = ElementaryPacket::new(10, 1).unwrap();
    let reduced = reduce(&packet, 200, 80).unwrap();
    let spec = QuadratureSpec::default();
    let pos = reduced.position_moments(&spec).unwrap();
    let series = sine_coefficients(&reduced, 800).unwrap();
    let mom = hermitian_moments(&series).unwrap();
    let recon = reconstruct_truncated(&series);
    let truncated = position_moments(|x| recon.density(x), &spec).unwrap();

    Criterion::new(3, "slice overlap, spreads, and truncated spread")
        .close(reduced.overlap(), 1.79965, 1e-4, "B")
        .close(pos.sd, 0.00144336, 1e-6, "position sd of the reduced state")
        .close(mom.sd, 572.993, 0.005 * 572.993, "momentum sd of the sine series")
        .close(truncated.sd, 0.0013598, 1e-3, "position sd of the truncated reconstruction")
        .finish();
}

#[test]
fn criterion_4_kennard_floor_for_random_superpositions() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x6b656e6e617264);
    let spec = QuadratureSpec::new(4096).unwrap();
    let mut c = Criterion::new(4, "product floor over 1000 random superpositions");
    let mut worst = f64::INFINITY;
    for trial in 0..1000 {
        let n = rng.random_range(-3..=12);
        let kmax = 10;
        let mut coeffs: Vec<Complex64> = (0..kmax)
            .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        let norm = coeffs.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for z in &mut coeffs {
            *z /= norm;
        }
        let series = SineSeries::new(n, coeffs).unwrap();
        let recon = reconstruct_truncated(&series);
        let sd_x = position_moments(|x| recon.density(x), &spec).unwrap().sd;
        let sd_p = hermitian_moments_quadrature(&series, &spec).unwrap().sd;
        let product = sd_x * sd_p;
        worst = worst.min(product);
        if product < 0.5 - 1e-9 {
            c.claim(false, format!("trial {trial} (n={n}): product {product} below floor"));
            break;
        }
    }
    c.claim(worst >= 0.5 - 1e-9, format!("worst product {worst}"));
    c.finish();
}

#[test]
fn criterion_5_analytic_vs_quadrature_moments() {
    let dom = DomainParams::default();
    let spec = QuadratureSpec::default();
    let mut c = Criterion::new(5, "analytic moments match quadrature for n in {0,1,10}, k in 1..=20");
    for n in [0, 1, 10] {
        for k in 1..=20u32 {
            let packet = ElementaryPacket::new(n, k).unwrap();
            let analytic = packet.analytic_moments(&dom);
            let pos = position_moments(|x| packet.density(x, &dom), &spec).unwrap();
            let mut coeffs = vec![Complex64::new(0.0, 0.0); k as usize];
            coeffs[k as usize - 1] = Complex64::new(1.0, 0.0);
            let series = SineSeries::new(n, coeffs).unwrap();
            let mom = hermitian_moments_quadrature(&series, &spec).unwrap();
            for (what, got, want) in [
                ("mean_x", pos.mean, analytic.mean_x),
                ("sd_x", pos.sd, analytic.sd_x),
                ("mean_p", mom.mean, analytic.mean_p),
                ("sd_p", mom.sd, analytic.sd_p),
            ] {
                c.claim(
                    (got - want).abs() <= 1e-8,
                    format!("n={n} k={k} {what}: quadrature {got} vs analytic {want}"),
                );
            }
        }
    }
    c.finish();
}

#[test]
fn criterion_6_exact_identity_suite() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x6964656e74697479);
    let packet = ElementaryPacket::new(10, 1).unwrap();
    let mut c = Criterion::new(6, "re-measured amplitude identity and completeness");
    for _ in 0..50 {
        let detectors = rng.random_range(10..=400u32);
        let slice = rng.random_range(1..=detectors);
        let reduced = reduce(&packet, detectors, slice).unwrap();
        let series = sine_coefficients(&reduced, 1).unwrap();
        let a1 = series.coeff(1).norm_sqr();
        let c2 = reduced.parent_amplitude().powi(2);
        c.claim(
            (a1 - c2).abs() <= 1e-10,
            format!("N={detectors} l0={slice}: |a_1|^2 {a1} vs |c|^2 {c2}"),
        );
        let total: f64 = decompose(&packet, detectors)
            .unwrap()
            .iter()
            .map(|w| w.amplitude * w.amplitude)
            .sum();
        c.claim(
            (total - 1.0).abs() <= 1e-12,
            format!("N={detectors}: completeness sum {total}"),
        );
    }
    c.finish();
}

#[test]
fn criterion_7_projector_lab_sweep() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x70726f6a);
    let mut c = Criterion::new(7, "projector chain and sum spectrum over 100 random pairs");
    for case in 0..100 {
        let m = rng.random_range(2..=256usize);
        let coord = Window::new(rng.random_range(0..m), rng.random_range(1..=m));
        let freq = Window::new(rng.random_range(0..m), rng.random_range(1..=m));
        let pair = build_projectors(m, coord, freq).unwrap();
        let chain = check_chain(&pair);
        let counting = coord.width as f64 * freq.width as f64 / m as f64;
        c.claim(
            (chain.trace_epe - counting).abs() <= 1e-12,
            format!("case {case} m={m}: trace {} vs counting {counting}", chain.trace_epe),
        );
        c.claim(
            chain.norm_ep * chain.norm_ep <= chain.trace_epe + 1e-10,
            format!("case {case} m={m}: norm^2 {} above trace {}", chain.norm_ep * chain.norm_ep, chain.trace_epe),
        );
        let spectrum = check_lp_inequality(&pair);
        c.claim(
            (spectrum.lambda_max - spectrum.bound).abs() <= 1e-8,
            format!("case {case} m={m}: lambda_max {} vs 1+norm {}", spectrum.lambda_max, spectrum.bound),
        );
    }
    let elapsed = start.elapsed().as_secs_f64();
    c.claim(elapsed < 30.0, format!("runtime {elapsed:.2}s exceeds 30s"));
    c.finish();
}

#[test]
fn criterion_8_scaling_across_detector_counts() {
    let packet = ElementaryPacket::new(10, 1).unwrap();
    let u_coarse = stage_ii(&packet, 100, 40).unwrap().uncertainty_product;
    let u_fine = stage_ii(&packet, 200, 80).unwrap().uncertainty_product;
    let ratio = u_fine / u_coarse;
    let iii_coarse = stage_iii(&packet, 100, 40, 400).unwrap().uncertainty_product;
    let iii_fine = stage_iii(&packet, 200, 80, 800).unwrap().uncertainty_product;
    let drift = (iii_fine / iii_coarse - 1.0).abs();

    let mut c = Criterion::new(8, "1/N scaling of the selective product")
        .close(ratio, 0.5, 0.005, "U_ii(200)/U_ii(100)");
    c.claim(drift <= 1e-3, format!("U_iii drift across N: {drift}"));
    c.finish();
}

#[test]
fn criterion_9_time_invariance() {
    let packet = ElementaryPacket::new(10, 1).unwrap();
    let frozen = DomainParams { lambda: 1e-5, time: 0.0 };
    let later = DomainParams { lambda: 1e-5, time: 3.7 };
    let m0 = packet.analytic_moments(&frozen);
    let mt = packet.analytic_moments(&later);
    let expected_shift = uncprob_core::bloch_momentum(10) * 1e-5 * 3.7;

    let mut c = Criterion::new(9, "moments ride the drift unchanged")
        .close(mt.sd_x, m0.sd_x, 1e-8, "sd_x across T")
        .close(mt.sd_p, m0.sd_p, 1e-8, "sd_p across T")
        .close(mt.mean_x - m0.mean_x, expected_shift, 1e-15, "mean shift p_n lambda T");
    c.claim(
        (m0.sd_x * m0.sd_p - kennard_product(1).unwrap()).abs() < 1e-12,
        "frozen product disagrees with the closed form".to_string(),
    );
    c.finish();
}
