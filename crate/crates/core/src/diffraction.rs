//! Order-of-magnitude estimates for a single-aperture optical analogue: a
//! beam of momentum p0 diffracts off an aperture and is caught by an annular
//! detector of radial size dq at radius q on a screen at unit distance.
//!
//! Every relation here is a scaling statement with unspecified O(1)
//! constants; results carry an explicit order-of-magnitude flag and are
//! meaningful as ratios, not absolute values.

use serde::Serialize;

use crate::error::{Error, Result};

/// Beam and detector geometry, all lengths relative to the screen distance
/// and momenta in units of the intrinsic beam scale.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiffractionSetup {
    p0: f64,
    dp0: f64,
    q_over_l: f64,
    dq_over_l: f64,
    annulus_norm: f64,
}

/// A scaling estimate; `order_of_magnitude` marks that the value has an
/// unspecified O(1) prefactor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub value: f64,
    pub order_of_magnitude: bool,
}

impl DiffractionSetup {
    pub fn new(p0: f64, dp0: f64, q_over_l: f64, dq_over_l: f64) -> Result<Self> {
        for (name, value) in
            [("p0", p0), ("dp0", dp0), ("q_over_l", q_over_l), ("dq_over_l", dq_over_l)]
        {
            if !value.is_finite() || value <= 0.0 {
                return Err(Error::NotPositive { name, value });
            }
        }
        for (name, value) in [("q_over_l", q_over_l), ("dq_over_l", dq_over_l)] {
            if value > 1.0 {
                return Err(Error::RatioExceedsUnity { name, value });
            }
        }
        Ok(DiffractionSetup { p0, dp0, q_over_l, dq_over_l, annulus_norm: 1.0 })
    }

    /// Replace the annulus normalization constant (the 2 pi |psi|^2 L^2
    /// factor of the detection probability), 1 by default.
    pub fn with_annulus_norm(mut self, annulus_norm: f64) -> Result<Self> {
        if !annulus_norm.is_finite() || annulus_norm <= 0.0 {
            return Err(Error::NotPositive { name: "annulus_norm", value: annulus_norm });
        }
        self.annulus_norm = annulus_norm;
        Ok(self)
    }

    pub fn p0(&self) -> f64 {
        self.p0
    }

    pub fn dp0(&self) -> f64 {
        self.dp0
    }

    pub fn q_over_l(&self) -> f64 {
        self.q_over_l
    }

    pub fn dq_over_l(&self) -> f64 {
        self.dq_over_l
    }

    /// Detector size at which the geometric term p0 dq/L catches up with the
    /// intrinsic term dp0 q/L; the small-product estimate needs dq below it.
    pub fn crossover(&self) -> f64 {
        self.dp0 * self.q_over_l / self.p0
    }
}

/// Transverse momentum spread seen by the detector: the geometric aperture
/// term plus the intrinsic beam term, delta_p = p0 dq/L + dp0 q/L.
pub fn momentum_uncertainty(setup: &DiffractionSetup) -> Estimate {
    Estimate {
        value: setup.p0 * setup.dq_over_l + setup.dp0 * setup.q_over_l,
        order_of_magnitude: true,
    }
}

/// Uncertainty product delta_p delta_q in the intrinsic regime, where it
/// reduces to dp0 (q/L) dq and drops far below 1 for a small detector. Above
/// the crossover the geometric term dominates and the reduction is invalid,
/// so that regime is rejected.
pub fn uncertainty_product(setup: &DiffractionSetup) -> Result<Estimate> {
    let crossover = setup.crossover();
    if setup.dq_over_l >= crossover {
        return Err(Error::BeyondCrossover { dq_over_l: setup.dq_over_l, crossover });
    }
    Ok(Estimate {
        value: setup.dp0 * setup.q_over_l * setup.dq_over_l,
        order_of_magnitude: true,
    })
}

/// Relative probability that the annular detector fires: the detector area
/// fraction, annulus_norm (q/L)(dq/L). With dp0 = 1 and the default
/// normalization this equals the uncertainty product, which is the point:
/// small products are bought at equally small probability.
pub fn detection_probability(setup: &DiffractionSetup) -> Estimate {
    Estimate {
        value: setup.annulus_norm * setup.q_over_l * setup.dq_over_l,
        order_of_magnitude: true,
    }
}
