//! Numerical laboratory for uncertainty products under biased event
//! sampling.
//!
//! A box harmonic satisfies the usual 1/2 floor on the product of its
//! position and momentum spreads. Post-selecting measurement events on a
//! single narrow detector slice yields a product far below that floor, but
//! only with a correspondingly small relative probability; an unbiased
//! momentum read-out of the reduced state puts the product back above the
//! floor. The crate implements the packet and its analytic moments
//! ([`packet`]), Simpson quadrature with compensated summation
//! ([`quadrature`]), the sine-series spectral machinery ([`series`]), the
//! four-stage sampling protocol itself ([`protocol`]), a finite-dimensional
//! projector lab for the two-window inequalities that govern the trade-off
//! ([`landau_pollak`]), and an order-of-magnitude estimator for a
//! single-aperture optical analogue ([`diffraction`]).

pub mod diffraction;
pub mod error;
pub mod landau_pollak;
pub mod packet;
pub mod protocol;
pub mod quadrature;
pub mod series;

pub use diffraction::{
    detection_probability, momentum_uncertainty, uncertainty_product, DiffractionSetup, Estimate,
};
pub use error::{Error, Result};
pub use packet::{
    bloch_momentum, harmonic_momentum, kennard_product, DomainParams, ElementaryPacket, MomentSet,
    MomentumMoments, PositionMoments,
};
pub use landau_pollak::{
    build_projectors, check_chain, check_lp_inequality, sample_packet, state_bound_check,
    ChainReport, ProjectorPair, StateBoundReport, SumSpectrumReport, Window, MAX_GRID,
};
pub use protocol::{
    decompose, reduce, run_protocol, run_protocol_with, stage_i, stage_ii, stage_ii_with,
    stage_iii, stage_iii_with, stage_iv, stage_iv_with, MeasurementRecord, ProtocolParams,
    ReducedState, SliceWeight, Stage, StepBasis,
};
pub use quadrature::{
    integrate, integrate_on, position_moments, position_moments_on, QuadratureSpec,
};
pub use series::{
    hermitian_moments, hermitian_moments_quadrature, reconstruct_truncated, sine_coefficients,
    ReconstructedState, SineSeries,
};
