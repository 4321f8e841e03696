//! Elementary wave packets in a unit box and their closed-form moments.
//!
//! A packet carries a Bloch index n (a plane-wave phase exp(i pi n xbar)) and a
//! harmonic index k >= 1 (a sine envelope with k half-waves). Lengths are in box
//! units, momenta in inverse box units. Time enters only through the
//! dimensionless product lambda * time, which rigidly shifts the evaluation
//! window without deforming the envelope.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, SQRT_2};

use crate::error::{Error, Result};

/// Kinematic context. `lambda` is the tiny length-scale ratio multiplying the
/// dimensionless `time`; the published datasets all sit at `time = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DomainParams {
    pub lambda: f64,
    pub time: f64,
}

impl Default for DomainParams {
    fn default() -> Self {
        DomainParams { lambda: 1e-5, time: 0.0 }
    }
}

impl DomainParams {
    /// Rigid shift of the evaluation window for Bloch index n:
    /// pbar_n * lambda * time.
    pub fn window_shift(&self, n: i32) -> f64 {
        bloch_momentum(n) * self.lambda * self.time
    }
}

/// pbar_n = pi n, the plane-wave momentum of Bloch index n.
pub fn bloch_momentum(n: i32) -> f64 {
    PI * n as f64
}

/// pbar_k = pi k, the momentum spread scale of harmonic k.
pub fn harmonic_momentum(k: u32) -> f64 {
    PI * k as f64
}

/// One packet
/// (2i/sqrt 2) exp[i pbar_n xbar - i (pbar_n^2 + pbar_k^2) lambda T / 2]
/// sin(k pi (xbar - shift)), unit-normalized over one window
/// [shift, 1 + shift] with shift = pbar_n lambda T.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementaryPacket {
    n: i32,
    k: u32,
}

impl ElementaryPacket {
    pub fn new(n: i32, k: u32) -> Result<Self> {
        if k < 1 {
            return Err(Error::HarmonicIndexZero);
        }
        Ok(ElementaryPacket { n, k })
    }

    pub fn n(&self) -> i32 {
        self.n
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// Amplitude at xbar. The sine argument is reduced to the nearest integer
    /// number of half-periods first, so the locality zero at the window edge
    /// (xbar = shift mod 1) is exact in floating point for any shift.
    pub fn amplitude(&self, xbar: f64, dom: &DomainParams) -> Complex64 {
        let pn = bloch_momentum(self.n);
        let pk = harmonic_momentum(self.k);
        let w = xbar - dom.window_shift(self.n);
        // sin(k pi (m + r)) = (-1)^(k m) sin(k pi r), m = round(w), |r| <= 1/2
        let m = w.round();
        let r = w - m;
        let odd = (self.k & 1) == 1 && (m as i64) & 1 == 1;
        let envelope = if odd { -(pk * r).sin() } else { (pk * r).sin() };
        let phase = pn * xbar - 0.5 * (pn * pn + pk * pk) * dom.lambda * dom.time;
        Complex64::new(0.0, 2.0 / SQRT_2) * Complex64::from_polar(1.0, phase) * envelope
    }

    /// |amplitude|^2, the position density 2 sin^2(k pi (xbar - shift)).
    pub fn density(&self, xbar: f64, dom: &DomainParams) -> f64 {
        self.amplitude(xbar, dom).norm_sqr()
    }

    /// Closed-form moments over the window [shift, 1 + shift]. The spreads are
    /// time-independent; only mean_x and mean_x2 pick up the window shift.
    pub fn analytic_moments(&self, dom: &DomainParams) -> MomentSet {
        let pn = bloch_momentum(self.n);
        let pk = harmonic_momentum(self.k);
        let shift = dom.window_shift(self.n);
        let two_pk = 2.0 * pk;
        let sd_x = 0.5 / 3f64.sqrt() * (1.0 - 24.0 / (two_pk * two_pk)).sqrt();
        MomentSet {
            mean_x: 0.5 + shift,
            mean_x2: 1.0 / 3.0 - 2.0 / (two_pk * two_pk) + shift + shift * shift,
            mean_p: pn,
            mean_p2: pn * pn + pk * pk,
            sd_x,
            sd_p: pk,
        }
    }
}

/// sd_x(k) * sd_p(k) in closed form:
/// (pi / (2 sqrt 3)) sqrt(k^2 - 24 / (2 pi)^2).
/// Monotonically increasing in k; the k = 1 packet gives the smallest value,
/// 0.567862, already above the 1/2 floor.
pub fn kennard_product(k: u32) -> Result<f64> {
    if k < 1 {
        return Err(Error::HarmonicIndexZero);
    }
    let kf = k as f64;
    Ok(PI / (2.0 * 3f64.sqrt()) * (kf * kf - 24.0 / (2.0 * PI).powi(2)).sqrt())
}

/// First and second position moments with the derived spread.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PositionMoments {
    pub mean: f64,
    pub mean_sq: f64,
    pub sd: f64,
}

/// First and second momentum moments with the derived spread.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentumMoments {
    pub mean: f64,
    pub mean_sq: f64,
    pub sd: f64,
}

/// Full set of position and momentum moments of one state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentSet {
    pub mean_x: f64,
    pub mean_x2: f64,
    pub mean_p: f64,
    pub mean_p2: f64,
    pub sd_x: f64,
    pub sd_p: f64,
}

impl MomentSet {
    pub fn from_parts(x: PositionMoments, p: MomentumMoments) -> Self {
        MomentSet {
            mean_x: x.mean,
            mean_x2: x.mean_sq,
            mean_p: p.mean,
            mean_p2: p.mean_sq,
            sd_x: x.sd,
            sd_p: p.sd,
        }
    }
}

/// sqrt(mean_sq - mean^2); rounding-level negative variances clamp to zero,
/// anything worse is an error.
pub(crate) fn spread(mean: f64, mean_sq: f64) -> Result<f64> {
    let var = mean_sq - mean * mean;
    if var < 0.0 {
        if var > -1e-12 * mean_sq.abs().max(1.0) {
            return Ok(0.0);
        }
        return Err(Error::NegativeVariance(var));
    }
    Ok(var.sqrt())
}
