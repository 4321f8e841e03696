//! Sine-series decomposition of slice-reduced states, hermitian momentum
//! moments, and cutoff-controlled reconstruction.
//!
//! A reduced state is re-expanded over the box harmonics sin(k pi x). The
//! coefficients come from closed-form antiderivatives, so no quadrature error
//! enters them and the common Bloch phases cancel exactly, leaving real
//! values. Momentum moments are evaluated through the symmetrized first and
//! second derivative forms, never through pointwise derivatives of the step
//! state itself.

use num_complex::Complex64;
use std::f64::consts::{PI, SQRT_2};

use crate::error::{Error, Result};
use crate::packet::{bloch_momentum, spread, MomentumMoments};
use crate::protocol::ReducedState;
use crate::quadrature::{Kahan, QuadratureSpec};

/// Expansion over the harmonics sin(k pi x), k = 1..=kmax, behind a common
/// Bloch phase exp(i pbar_n x). The squared norm may fall short of 1 (a
/// truncated expansion) but must not exceed it beyond rounding.
#[derive(Debug, Clone, PartialEq)]
pub struct SineSeries {
    n: i32,
    coeffs: Vec<Complex64>,
}

impl SineSeries {
    pub fn new(n: i32, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::EmptySeries);
        }
        let mut s = Kahan::default();
        for c in &coeffs {
            s.add(c.norm_sqr());
        }
        let s = s.value();
        if s == 0.0 {
            return Err(Error::ZeroNormSeries);
        }
        if s > 1.0 + 1e-12 {
            return Err(Error::SeriesNormExceedsOne(s));
        }
        Ok(SineSeries { n, coeffs })
    }

    pub fn n(&self) -> i32 {
        self.n
    }

    pub fn kmax(&self) -> usize {
        self.coeffs.len()
    }

    /// Coefficient a_k; index from k = 1.
    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs[k - 1]
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Sum of |a_k|^2: 1 for a complete expansion, less after a cutoff.
    pub fn norm_sqr(&self) -> f64 {
        let mut s = Kahan::default();
        for c in &self.coeffs {
            s.add(c.norm_sqr());
        }
        s.value()
    }

    fn is_real(&self) -> bool {
        self.coeffs.iter().all(|c| c.im == 0.0)
    }
}

/// int_a^b 2 sin(j pi x) sin(k pi x) dx from the product-to-sum
/// antiderivative; the j = k branch is x - sin(2 k pi x) / (2 k pi).
pub(crate) fn cross_overlap(j: u32, k: u32, a: f64, b: f64) -> f64 {
    if j == k {
        let w = 2.0 * k as f64 * PI;
        (b - a) - ((w * b).sin() - (w * a).sin()) / w
    } else {
        let d = (j as f64 - k as f64) * PI;
        let s = (j as f64 + k as f64) * PI;
        ((d * b).sin() - (d * a).sin()) / d - ((s * b).sin() - (s * a).sin()) / s
    }
}

/// Expansion coefficients of a slice-reduced state:
/// a_k = sqrt(N / B) int_slice 2 sin(k pi x) sin(pi x) dx, by closed form.
pub fn sine_coefficients(reduced: &ReducedState, kmax: usize) -> Result<SineSeries> {
    if kmax < 1 {
        return Err(Error::EmptySeries);
    }
    let (a, b) = reduced.slice_bounds();
    let parent = reduced.parent();
    let pref = (reduced.detectors() as f64 / reduced.overlap()).sqrt();
    let coeffs = (1..=kmax as u32)
        .map(|k| Complex64::new(pref * cross_overlap(k, parent.k(), a, b), 0.0))
        .collect();
    SineSeries::new(parent.n(), coeffs)
}

/// Momentum moments of the series by closed-form coefficient sums.
///
/// The symmetrized bilinear forms are weighted against the unit-norm parent
/// state, which amounts to a single 1 / sqrt(sum |a_k|^2) factor; for a
/// normalized series this is the ordinary expectation value. The envelope
/// first moment reduces to cross sums over pairs with j + k odd and vanishes
/// identically for real coefficients; the envelope second moment is
/// pi^2 sum |a_k|^2 k^2 (the harmonics are orthonormal, so no cross terms).
/// The Bloch part pbar_n adds to the mean and cancels from the spread.
pub fn hermitian_moments(series: &SineSeries) -> Result<MomentumMoments> {
    let s = series.norm_sqr();
    let weight = 1.0 / s.sqrt();
    let kmax = series.kmax();

    let mut second = Kahan::default();
    for (i, c) in series.coeffs().iter().enumerate() {
        let kpi = (i + 1) as f64 * PI;
        second.add(c.norm_sqr() * kpi * kpi);
    }
    let env_second = second.value() * weight;

    // Im of int phi* phi' = Im sum_{j+k odd} conj(a_j) a_k 4 j k / (j^2 - k^2)
    let mut env_first = 0.0;
    if !series.is_real() {
        let mut first = Kahan::default();
        for j in 1..=kmax {
            for k in 1..=kmax {
                if (j + k) % 2 == 1 {
                    let im = (series.coeff(j).conj() * series.coeff(k)).im;
                    if im != 0.0 {
                        let jf = j as f64;
                        let kf = k as f64;
                        first.add(im * 4.0 * jf * kf / (jf * jf - kf * kf));
                    }
                }
            }
        }
        env_first = first.value() * weight;
    }

    let pn = bloch_momentum(series.n());
    let mean = pn + env_first;
    let mean_sq = pn * pn + 2.0 * pn * env_first + env_second;
    Ok(MomentumMoments { mean, mean_sq, sd: spread(env_first, env_second)? })
}

/// The same moments by composite Simpson quadrature on the reconstructed
/// envelope phi(x) = (2i/sqrt 2) sum a_k sin(k pi x) and its term-by-term
/// derivatives: <p> = Im int phi* phi', <p^2> = -Re int phi* phi''. The
/// normalization int |phi|^2 is also taken by quadrature, keeping this route
/// independent of the closed-form sums.
pub fn hermitian_moments_quadrature(
    series: &SineSeries,
    spec: &QuadratureSpec,
) -> Result<MomentumMoments> {
    let n = spec.panels();
    let h = 1.0 / n as f64;
    let mut norm = Kahan::default();
    let mut first_im = Kahan::default();
    let mut second_re = Kahan::default();
    let mut push = |x: f64, w: f64| {
        let (s_sin, s_kcos, s_k2sin) = harmonic_sums(series.coeffs(), x);
        // phi = i sqrt2 s_sin, phi' = i sqrt2 s_kcos, phi'' = -i sqrt2 s_k2sin
        norm.add(w * 2.0 * s_sin.norm_sqr());
        first_im.add(w * 2.0 * (s_sin.conj() * s_kcos).im);
        second_re.add(w * 2.0 * (s_sin.conj() * s_k2sin).re);
    };
    push(0.0, 1.0);
    push(1.0, 1.0);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        push(i as f64 * h, w);
    }
    let scale = 1.0 / (3.0 * n as f64);
    let s = norm.value() * scale;
    if s <= 0.0 {
        return Err(Error::ZeroNormSeries);
    }
    let weight = 1.0 / s.sqrt();
    let env_first = first_im.value() * scale * weight;
    let env_second = second_re.value() * scale * weight;
    let pn = bloch_momentum(series.n());
    let mean = pn + env_first;
    let mean_sq = pn * pn + 2.0 * pn * env_first + env_second;
    Ok(MomentumMoments { mean, mean_sq, sd: spread(env_first, env_second)? })
}

/// sum a_k sin(k pi x), sum a_k (k pi) cos(k pi x), sum a_k (k pi)^2 sin(k pi x)
/// by the angle-addition recurrence (one sin/cos pair per point).
fn harmonic_sums(coeffs: &[Complex64], x: f64) -> (Complex64, Complex64, Complex64) {
    let theta = PI * x;
    let (s1, c1) = theta.sin_cos();
    let mut sk = s1;
    let mut ck = c1;
    let mut s_sin = Complex64::new(0.0, 0.0);
    let mut s_kcos = Complex64::new(0.0, 0.0);
    let mut s_k2sin = Complex64::new(0.0, 0.0);
    for (i, a) in coeffs.iter().enumerate() {
        let kpi = (i + 1) as f64 * PI;
        s_sin += a * sk;
        s_kcos += a * (kpi * ck);
        s_k2sin += a * (kpi * kpi * sk);
        let s_next = sk * c1 + ck * s1;
        ck = ck * c1 - sk * s1;
        sk = s_next;
    }
    (s_sin, s_kcos, s_k2sin)
}

/// Pointwise evaluation of the series, normalized to unit squared norm
/// (coefficients divided by sqrt(sum |a_k|^2)).
#[derive(Debug, Clone)]
pub struct ReconstructedState {
    n: i32,
    scaled: Vec<Complex64>,
}

/// Normalize the series and wrap it for pointwise evaluation.
pub fn reconstruct_truncated(series: &SineSeries) -> ReconstructedState {
    let weight = 1.0 / series.norm_sqr().sqrt();
    ReconstructedState {
        n: series.n(),
        scaled: series.coeffs().iter().map(|c| c * weight).collect(),
    }
}

impl ReconstructedState {
    /// (2i/sqrt 2) exp(i pbar_n x) sum b_k sin(k pi x).
    pub fn amplitude(&self, x: f64) -> Complex64 {
        let (s_sin, _, _) = harmonic_sums(&self.scaled, x);
        Complex64::new(0.0, 2.0 / SQRT_2)
            * Complex64::from_polar(1.0, bloch_momentum(self.n) * x)
            * s_sin
    }

    /// 2 |sum b_k sin(k pi x)|^2; the Bloch phase drops out.
    pub fn density(&self, x: f64) -> f64 {
        let (s_sin, _, _) = harmonic_sums(&self.scaled, x);
        2.0 * s_sin.norm_sqr()
    }
}
