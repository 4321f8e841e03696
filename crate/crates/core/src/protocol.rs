//! Four-stage measurement sampling over a box harmonic: (i) accept every
//! event, (ii) post-select a single detector slice, (iii) momentum read-out
//! of the reduced state without selection, (iv) selective re-measurement of
//! the parent harmonic. Each stage yields an uncertainty product together
//! with the relative probability of the sampling that produced it.
//!
//! All stages evaluate at T = 0; the reduction is defined on the frozen
//! packet, and the products are translation invariant anyway.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::packet::{DomainParams, ElementaryPacket, PositionMoments};
use crate::quadrature::{position_moments_on, QuadratureSpec};
use crate::series::{cross_overlap, hermitian_moments, sine_coefficients};

/// Partition of [0,1] into N equal detector slices [(l-1)/N, l/N], l = 1..=N,
/// each carrying a normalized indicator of height sqrt(N).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StepBasis {
    detectors: u32,
}

impl StepBasis {
    pub fn new(detectors: u32) -> Result<Self> {
        if detectors < 1 {
            return Err(Error::NoDetectors);
        }
        Ok(StepBasis { detectors })
    }

    pub fn detectors(&self) -> u32 {
        self.detectors
    }

    /// Bounds of slice l (1-based). Adjacent slices share the dividing point
    /// bit-exactly, so the partition tiles [0,1] with no gaps.
    pub fn slice_bounds(&self, slice: u32) -> Result<(f64, f64)> {
        if slice < 1 || slice > self.detectors {
            return Err(Error::SliceOutOfRange { slice, detectors: self.detectors });
        }
        let n = self.detectors as f64;
        Ok(((slice - 1) as f64 / n, slice as f64 / n))
    }
}

/// One term of the step-basis expansion of a packet: the squared overlap
/// B_l with the slice's normalized indicator and the expansion amplitude
/// c_l = sqrt(B_l / N).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SliceWeight {
    pub slice: u32,
    pub overlap: f64,
    pub amplitude: f64,
}

/// Expand a packet over all N detector slices by closed form. The overlaps
/// telescope, so the squared amplitudes sum to 1 up to rounding.
pub fn decompose(packet: &ElementaryPacket, detectors: u32) -> Result<Vec<SliceWeight>> {
    let basis = StepBasis::new(detectors)?;
    let k = packet.k();
    let nf = detectors as f64;
    (1..=detectors)
        .map(|slice| {
            let (a, b) = basis.slice_bounds(slice)?;
            let overlap = nf * cross_overlap(k, k, a, b);
            Ok(SliceWeight { slice, overlap, amplitude: (overlap / nf).sqrt() })
        })
        .collect()
}

/// The packet renormalized on a single detector slice: the post-measurement
/// state after the slice's detector fired. Supported on [a, b) with density
/// (N / B) times the parent density.
#[derive(Debug, Clone)]
pub struct ReducedState {
    parent: ElementaryPacket,
    detectors: u32,
    slice: u32,
    overlap: f64,
}

/// Reduce a packet to slice l0 of an N-slice detector row. Slices whose
/// overlap with the packet falls below 1e-15 sit at a node of the density
/// and are rejected: the renormalization is undefined there.
pub fn reduce(packet: &ElementaryPacket, detectors: u32, slice: u32) -> Result<ReducedState> {
    let basis = StepBasis::new(detectors)?;
    let (a, b) = basis.slice_bounds(slice)?;
    let overlap = detectors as f64 * cross_overlap(packet.k(), packet.k(), a, b);
    if overlap < 1e-15 {
        return Err(Error::NodeSlice { slice, overlap });
    }
    Ok(ReducedState { parent: *packet, detectors, slice, overlap })
}

impl ReducedState {
    pub fn parent(&self) -> &ElementaryPacket {
        &self.parent
    }

    pub fn detectors(&self) -> u32 {
        self.detectors
    }

    pub fn slice(&self) -> u32 {
        self.slice
    }

    /// Squared overlap B with the slice indicator, in (0, 2].
    pub fn overlap(&self) -> f64 {
        self.overlap
    }

    /// Amplitude c = sqrt(B / N) of this slice in the parent's expansion;
    /// c^2 is the probability that this slice's detector fires.
    pub fn parent_amplitude(&self) -> f64 {
        (self.overlap / self.detectors as f64).sqrt()
    }

    pub fn slice_bounds(&self) -> (f64, f64) {
        let n = self.detectors as f64;
        ((self.slice - 1) as f64 / n, self.slice as f64 / n)
    }

    /// Amplitude at T = 0, zero outside [a, b).
    pub fn amplitude(&self, x: f64) -> num_complex::Complex64 {
        let (a, b) = self.slice_bounds();
        if (a..b).contains(&x) {
            let scale = (self.detectors as f64 / self.overlap).sqrt();
            self.parent.amplitude(x, &DomainParams::default()) * scale
        } else {
            num_complex::Complex64::new(0.0, 0.0)
        }
    }

    /// Probability density at T = 0, zero outside [a, b).
    pub fn density(&self, x: f64) -> f64 {
        let (a, b) = self.slice_bounds();
        if (a..b).contains(&x) {
            let scale = self.detectors as f64 / self.overlap;
            scale * self.parent.density(x, &DomainParams::default())
        } else {
            0.0
        }
    }

    /// Position moments by quadrature over the supporting slice. The smooth
    /// interior formula is integrated directly on [a, b]; sampling the masked
    /// density would clip the endpoint and bias the Simpson rule.
    pub fn position_moments(&self, spec: &QuadratureSpec) -> Result<PositionMoments> {
        let (a, b) = self.slice_bounds();
        let scale = self.detectors as f64 / self.overlap;
        let dom = DomainParams::default();
        position_moments_on(|x| scale * self.parent.density(x, &dom), a, b, spec)
    }
}

/// Protocol stage labels, serialized as lowercase roman numerals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Stage {
    I,
    Ii,
    Iii,
    Iv,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Stage::I => "i",
            Stage::Ii => "ii",
            Stage::Iii => "iii",
            Stage::Iv => "iv",
        };
        f.write_str(s)
    }
}

/// Inputs a stage actually consumed. Stages that take no detector row, slice
/// or cutoff leave those fields unset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProtocolParams {
    pub n: i32,
    #[serde(rename = "N", skip_serializing_if = "Option::is_none", default)]
    pub detectors: Option<u32>,
    #[serde(rename = "l0", skip_serializing_if = "Option::is_none", default)]
    pub slice: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub kmax: Option<usize>,
}

/// One stage's outcome: the uncertainty product U and the relative
/// probability P of the sampling that produced it. `approx` marks the
/// selective re-measurement stage, whose probability rests on the
/// coefficient identity rather than an exhaustive read-out;
/// `cumulative_probability` is the joint probability of the two selective
/// steps (slice post-selection then re-measurement), carried only by the
/// final stage.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasurementRecord {
    pub stage: Stage,
    #[serde(rename = "U")]
    pub uncertainty_product: f64,
    #[serde(rename = "P")]
    pub probability: f64,
    pub approx: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub cumulative_probability: Option<f64>,
    pub params: ProtocolParams,
}

/// Stage (i): accept every event. U is the packet's own product and never
/// falls below the 1/2 floor.
pub fn stage_i(packet: &ElementaryPacket) -> MeasurementRecord {
    let m = packet.analytic_moments(&DomainParams::default());
    MeasurementRecord {
        stage: Stage::I,
        uncertainty_product: m.sd_x * m.sd_p,
        probability: 1.0,
        approx: false,
        cumulative_probability: None,
        params: ProtocolParams { n: packet.n(), detectors: None, slice: None, kmax: None },
    }
}

/// Stage (ii): keep only events where slice l0's detector fired. U pairs the
/// parent's momentum spread with the reduced position spread and shrinks
/// like 1/N; P is the firing probability B / N.
pub fn stage_ii(packet: &ElementaryPacket, detectors: u32, slice: u32) -> Result<MeasurementRecord> {
    stage_ii_with(packet, detectors, slice, &QuadratureSpec::default())
}

/// Stage (ii) at a chosen quadrature resolution.
pub fn stage_ii_with(
    packet: &ElementaryPacket,
    detectors: u32,
    slice: u32,
    spec: &QuadratureSpec,
) -> Result<MeasurementRecord> {
    let reduced = reduce(packet, detectors, slice)?;
    let pos = reduced.position_moments(spec)?;
    let mom = packet.analytic_moments(&DomainParams::default());
    Ok(MeasurementRecord {
        stage: Stage::Ii,
        uncertainty_product: mom.sd_p * pos.sd,
        probability: reduced.overlap() / detectors as f64,
        approx: false,
        cumulative_probability: None,
        params: ProtocolParams {
            n: packet.n(),
            detectors: Some(detectors),
            slice: Some(slice),
            kmax: None,
        },
    })
}

/// Stage (iii): measure the reduced state's momentum without selection. The
/// momentum spread comes from the sine series truncated at kmax; U returns
/// above the 1/2 floor and P is 1.
pub fn stage_iii(
    packet: &ElementaryPacket,
    detectors: u32,
    slice: u32,
    kmax: usize,
) -> Result<MeasurementRecord> {
    stage_iii_with(packet, detectors, slice, kmax, &QuadratureSpec::default())
}

/// Stage (iii) at a chosen quadrature resolution.
pub fn stage_iii_with(
    packet: &ElementaryPacket,
    detectors: u32,
    slice: u32,
    kmax: usize,
    spec: &QuadratureSpec,
) -> Result<MeasurementRecord> {
    let reduced = reduce(packet, detectors, slice)?;
    let pos = reduced.position_moments(spec)?;
    let series = sine_coefficients(&reduced, kmax)?;
    let mom = hermitian_moments(&series)?;
    Ok(MeasurementRecord {
        stage: Stage::Iii,
        uncertainty_product: mom.sd * pos.sd,
        probability: 1.0,
        approx: false,
        cumulative_probability: None,
        params: ProtocolParams {
            n: packet.n(),
            detectors: Some(detectors),
            slice: Some(slice),
            kmax: Some(kmax),
        },
    })
}

/// Stage (iv): from the momentum read-out keep only the parent harmonic. U
/// repeats stage (ii)'s product by construction (same pure computation, so
/// the values are bit-identical); P is the squared series coefficient of the
/// parent harmonic, which equals c^2 analytically. The record is flagged
/// approximate and carries the joint probability of both selective steps.
pub fn stage_iv(packet: &ElementaryPacket, detectors: u32, slice: u32) -> Result<MeasurementRecord> {
    stage_iv_with(packet, detectors, slice, &QuadratureSpec::default())
}

/// Stage (iv) at a chosen quadrature resolution.
pub fn stage_iv_with(
    packet: &ElementaryPacket,
    detectors: u32,
    slice: u32,
    spec: &QuadratureSpec,
) -> Result<MeasurementRecord> {
    let base = stage_ii_with(packet, detectors, slice, spec)?;
    let reduced = reduce(packet, detectors, slice)?;
    let k = packet.k() as usize;
    let series = sine_coefficients(&reduced, k)?;
    let probability = series.coeff(k).norm_sqr();
    Ok(MeasurementRecord {
        stage: Stage::Iv,
        uncertainty_product: base.uncertainty_product,
        probability,
        approx: true,
        cumulative_probability: Some(base.probability * probability),
        params: ProtocolParams { kmax: None, ..base.params },
    })
}

/// Run all four stages for the ground-harmonic packet with Bloch index n.
pub fn run_protocol(n: i32, detectors: u32, slice: u32, kmax: usize) -> Result<Vec<MeasurementRecord>> {
    run_protocol_with(n, detectors, slice, kmax, &QuadratureSpec::default())
}

/// Run all four stages at a chosen quadrature resolution.
pub fn run_protocol_with(
    n: i32,
    detectors: u32,
    slice: u32,
    kmax: usize,
    spec: &QuadratureSpec,
) -> Result<Vec<MeasurementRecord>> {
    let packet = ElementaryPacket::new(n, 1)?;
    Ok(vec![
        stage_i(&packet),
        stage_ii_with(&packet, detectors, slice, spec)?,
        stage_iii_with(&packet, detectors, slice, kmax, spec)?,
        stage_iv_with(&packet, detectors, slice, spec)?,
    ])
}
