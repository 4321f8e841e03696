//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("harmonic index must be >= 1")]
    HarmonicIndexZero,
    #[error("panel count {0} invalid: composite rule needs an even count >= 100")]
    BadPanelCount(usize),
    #[error("integration interval [{a}, {b}] is empty, reversed, or not finite")]
    BadInterval { a: f64, b: f64 },
    #[error("density integrates to {integral:.9}, expected 1 within 1e-6")]
    UnnormalizedDensity { integral: f64 },
    #[error("variance {0:.3e} is negative beyond rounding slack")]
    NegativeVariance(f64),
    #[error("series has no coefficients")]
    EmptySeries,
    #[error("series squared norm {0:.12} exceeds 1 beyond rounding slack")]
    SeriesNormExceedsOne(f64),
    #[error("series has zero norm")]
    ZeroNormSeries,
    #[error("detector bank needs at least one detector")]
    NoDetectors,
    #[error("slice index {slice} outside 1..={detectors}")]
    SliceOutOfRange { slice: u32, detectors: u32 },
    #[error("slice {slice} sits at a node of the packet (overlap {overlap:.3e}); reduced state undefined")]
    NodeSlice { slice: u32, overlap: f64 },
    #[error("grid needs at least 2 points, got {0}")]
    GridTooSmall(usize),
    #[error("grid size {0} exceeds the dense-solver cap {1}")]
    GridTooLarge(usize, usize),
    #[error("window of width {width} invalid on a grid of {m} points (need 1..={m})")]
    BadWindow { width: usize, m: usize },
    #[error("state vector norm {0:.9} is not 1 within 1e-9")]
    UnnormalizedState(f64),
    #[error("state length {len} does not match grid size {m}")]
    GridSizeMismatch { len: usize, m: usize },
    #[error("parameter {name} = {value} must be positive and finite")]
    NotPositive { name: &'static str, value: f64 },
    #[error("ratio {name} = {value} must not exceed 1")]
    RatioExceedsUnity { name: &'static str, value: f64 },
    #[error(
        "aperture spread {dq_over_l:.3e} is at or beyond the crossover {crossover:.3e}; \
         the geometric term dominates and the small-product estimate does not apply"
    )]
    BeyondCrossover { dq_over_l: f64, crossover: f64 },
}
