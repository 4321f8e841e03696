//! Finite-dimensional check of the projector inequalities behind the
//! sampling trade-off, on a periodic grid of M points.
//!
//! E selects a window of grid points (coordinate slice), P selects a window
//! of discrete frequencies (band limit), conjugated by the unitary DFT. Both
//! are hermitian idempotents, and every continuum inequality becomes an
//! exactly assertable finite statement: trace(EPE) is the counting identity
//! w_x w_p / M, the chain norm(EP)^2 <= trace(EPE) = trace(PEP) holds
//! entrywise, and the largest eigenvalue of E + P is 1 + norm(EP).

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::packet::{DomainParams, ElementaryPacket};
use crate::quadrature::Kahan;

/// Dense-eigensolve cap on the grid size.
pub const MAX_GRID: usize = 512;

/// Circular index window start..start+width on Z_M; the start wraps mod M.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Window {
    pub start: usize,
    pub width: usize,
}

impl Window {
    pub fn new(start: usize, width: usize) -> Self {
        Window { start, width }
    }

    fn indices(&self, m: usize) -> Vec<usize> {
        (0..self.width).map(|i| (self.start + i) % m).collect()
    }

    fn contains(&self, j: usize, m: usize) -> bool {
        (j + m - self.start % m) % m < self.width
    }
}

/// The pair (E, P) on a fixed grid, stored dense.
#[derive(Debug, Clone)]
pub struct ProjectorPair {
    m: usize,
    coord: Window,
    freq: Window,
    coord_proj: DMatrix<Complex64>,
    freq_proj: DMatrix<Complex64>,
}

/// Build the coordinate-window and frequency-window projectors on a grid of
/// m points. The frequency projector is assembled as V V* from the selected
/// unit-norm DFT columns, with angles reduced by exact integer arithmetic so
/// no large-argument trig error enters.
pub fn build_projectors(m: usize, coord: Window, freq: Window) -> Result<ProjectorPair> {
    if m < 2 {
        return Err(Error::GridTooSmall(m));
    }
    if m > MAX_GRID {
        return Err(Error::GridTooLarge(m, MAX_GRID));
    }
    for w in [&coord, &freq] {
        if w.width < 1 || w.width > m {
            return Err(Error::BadWindow { width: w.width, m });
        }
    }

    let coord_proj = DMatrix::from_fn(m, m, |r, c| {
        if r == c && coord.contains(r, m) {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });

    let scale = 1.0 / (m as f64).sqrt();
    let v = DMatrix::from_fn(m, freq.width, |j, i| {
        let f = (freq.start + i) % m;
        let turns = (j * f) % m;
        Complex64::from_polar(scale, TAU * turns as f64 / m as f64)
    });
    let freq_proj = &v * v.adjoint();
    let freq_proj = (&freq_proj + freq_proj.adjoint()).map(|z| 0.5 * z);

    Ok(ProjectorPair { m, coord, freq, coord_proj, freq_proj })
}

impl ProjectorPair {
    pub fn grid_size(&self) -> usize {
        self.m
    }

    pub fn coord_window(&self) -> Window {
        self.coord
    }

    pub fn freq_window(&self) -> Window {
        self.freq
    }

    pub fn coord_projector(&self) -> &DMatrix<Complex64> {
        &self.coord_proj
    }

    pub fn freq_projector(&self) -> &DMatrix<Complex64> {
        &self.freq_proj
    }

    /// Largest idempotency and hermiticity residual over both projectors,
    /// max entry of |A^2 - A| and |A - A*|.
    pub fn projector_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for a in [&self.coord_proj, &self.freq_proj] {
            let sq = a * a;
            for (idem, orig) in sq.iter().zip(a.iter()) {
                worst = worst.max((idem - orig).norm());
            }
            let herm = a.adjoint();
            for (h, orig) in herm.iter().zip(a.iter()) {
                worst = worst.max((h - orig).norm());
            }
        }
        worst
    }

    /// norm(EP): the top singular value, from the spectrum of the hermitian
    /// compression of P onto the coordinate window (E P E restricted to its
    /// support).
    fn norm_ep(&self) -> f64 {
        let idx = self.coord.indices(self.m);
        let sub = DMatrix::from_fn(idx.len(), idx.len(), |r, c| self.freq_proj[(idx[r], idx[c])]);
        lambda_max(&sub).max(0.0).sqrt()
    }
}

/// λ_max of a hermitian matrix (symmetrized first to shed rounding skew).
fn lambda_max(a: &DMatrix<Complex64>) -> f64 {
    let sym = (a + a.adjoint()).map(|z| 0.5 * z);
    let eig = sym.symmetric_eigenvalues();
    eig.iter().fold(f64::NEG_INFINITY, |acc, &x| acc.max(x))
}

/// The operator chain norm(EP)^2 <= trace(EPE) = trace(PEP), evaluated
/// independently: the norm from a windowed eigensolve, trace(EPE) by summing
/// P's diagonal over the coordinate window, trace(PEP) from the full dense
/// triple product.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ChainReport {
    pub norm_ep: f64,
    pub trace_epe: f64,
    pub trace_pep: f64,
    /// sqrt of trace(EPE), for comparing against weaker single-number bounds
    /// stated with the root convention.
    pub sqrt_trace_epe: f64,
}

pub fn check_chain(pair: &ProjectorPair) -> ChainReport {
    let mut trace_epe = Kahan::default();
    for j in pair.coord.indices(pair.m) {
        trace_epe.add(pair.freq_proj[(j, j)].re);
    }
    let trace_epe = trace_epe.value();

    let pep = &pair.freq_proj * &pair.coord_proj * &pair.freq_proj;
    let mut trace_pep = Kahan::default();
    for j in 0..pair.m {
        trace_pep.add(pep[(j, j)].re);
    }

    ChainReport {
        norm_ep: pair.norm_ep(),
        trace_epe,
        trace_pep: trace_pep.value(),
        sqrt_trace_epe: trace_epe.max(0.0).sqrt(),
    }
}

/// Spectral form of the two-projector bound: the largest eigenvalue of
/// E + P against 1 + norm(EP). The maximizing state achieves equality, so
/// the two numbers agree to solver precision.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SumSpectrumReport {
    pub lambda_max: f64,
    pub bound: f64,
}

pub fn check_lp_inequality(pair: &ProjectorPair) -> SumSpectrumReport {
    let sum = &pair.coord_proj + &pair.freq_proj;
    SumSpectrumReport { lambda_max: lambda_max(&sum), bound: 1.0 + pair.norm_ep() }
}

/// Per-state check: window probabilities of a normalized grid state against
/// the counting bound. The strict bound prob_coord <= trace(EPE) is only
/// claimed when the state is band-limited (P psi = psi); `within_bound`
/// stays unset otherwise, and the slack grows with the residual when the
/// band limit is merely approximate.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct StateBoundReport {
    pub prob_coord: f64,
    pub prob_freq: f64,
    pub trace_bound: f64,
    /// prob_coord / trace_bound, reported even when the bound is not claimed.
    pub ratio: f64,
    pub band_limit_residual: f64,
    pub band_limited: bool,
    pub within_bound: Option<bool>,
}

pub fn state_bound_check(state: &[Complex64], pair: &ProjectorPair) -> Result<StateBoundReport> {
    if state.len() != pair.m {
        return Err(Error::GridSizeMismatch { len: state.len(), m: pair.m });
    }
    let mut norm = Kahan::default();
    for z in state {
        norm.add(z.norm_sqr());
    }
    let norm = norm.value();
    if (norm - 1.0).abs() > 1e-9 {
        return Err(Error::UnnormalizedState(norm));
    }

    let mut prob_coord = Kahan::default();
    for j in pair.coord.indices(pair.m) {
        prob_coord.add(state[j].norm_sqr());
    }
    let prob_coord = prob_coord.value();

    let psi = DMatrix::from_fn(pair.m, 1, |j, _| state[j]);
    let p_psi = &pair.freq_proj * &psi;
    let mut prob_freq = Kahan::default();
    let mut residual_sq = Kahan::default();
    for j in 0..pair.m {
        prob_freq.add((state[j].conj() * p_psi[(j, 0)]).re);
        residual_sq.add((p_psi[(j, 0)] - state[j]).norm_sqr());
    }
    // P is positive semidefinite, so the quadratic form is nonnegative;
    // discard float noise below zero.
    let prob_freq = prob_freq.value().max(0.0);
    let residual = residual_sq.value().max(0.0).sqrt();

    let trace_bound = pair.coord.width as f64 * pair.freq.width as f64 / pair.m as f64;
    let band_limited = residual < 1e-6;
    let within_bound = band_limited
        .then_some(prob_coord <= trace_bound + 2.0 * residual + residual * residual + 1e-12);

    Ok(StateBoundReport {
        prob_coord,
        prob_freq,
        trace_bound,
        ratio: prob_coord / trace_bound,
        band_limit_residual: residual,
        band_limited,
        within_bound,
    })
}

/// Sample a packet on the periodic grid and normalize on it. The box state
/// is extended antisymmetrically to the doubled interval [0, 2), so the grid
/// points are x_j = 2j/m and the discrete frequencies of packet (n, k) land
/// exactly on the half-turn indices n-k and n+k (mod m). Evaluated at T = 0.
pub fn sample_packet(packet: &ElementaryPacket, m: usize) -> Result<Vec<Complex64>> {
    if m < 2 {
        return Err(Error::GridTooSmall(m));
    }
    if m > MAX_GRID {
        return Err(Error::GridTooLarge(m, MAX_GRID));
    }
    let dom = DomainParams::default();
    let mut samples: Vec<Complex64> =
        (0..m).map(|j| packet.amplitude(2.0 * j as f64 / m as f64, &dom)).collect();
    let mut norm = Kahan::default();
    for z in &samples {
        norm.add(z.norm_sqr());
    }
    let scale = 1.0 / norm.value().sqrt();
    for z in &mut samples {
        *z *= scale;
    }
    Ok(samples)
}
