//! Mittag-Leffler functions, the family `F_α(x) = E_α(x^α)`, and the
//! Laplace exponents built from Gamma ratios.

mod exponent;
mod mittag;

pub use exponent::{psi, psi_general, psi_integral, psi_minus, theta_root};
pub use mittag::{
    derivative_stack, f_family, f_remainder, mittag_leffler, mittag_leffler_with, FFamily,
    MlEvaluation, MlOptions, Regime, Remainder,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gamma::gamma;

/// Stability index α in the open interval (1, 2).
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct StabilityIndex(f64);

impl StabilityIndex {
    pub fn new(alpha: f64) -> Result<Self> {
        if alpha > 1.0 && alpha < 2.0 {
            Ok(StabilityIndex(alpha))
        } else {
            Err(Error::Domain(format!("alpha = {alpha} is not in (1, 2)")))
        }
    }

    pub fn alpha(self) -> f64 {
        self.0
    }
}

/// Stability index α in (0, 2) \ {1} with jump weights of a two-sided Lévy density.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeneralIndex {
    pub alpha: f64,
    pub c_plus: f64,
    pub c_minus: f64,
}

impl GeneralIndex {
    pub fn new(alpha: f64, c_plus: f64, c_minus: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 2.0) || alpha == 1.0 {
            return Err(Error::Domain(format!("alpha = {alpha} is not in (0, 2) minus {{1}}")));
        }
        if !(c_plus >= 0.0 && c_minus >= 0.0 && c_plus + c_minus > 0.0) {
            return Err(Error::Domain(format!(
                "jump weights c+ = {c_plus}, c- = {c_minus} must be nonnegative with positive sum"
            )));
        }
        Ok(GeneralIndex {
            alpha,
            c_plus,
            c_minus,
        })
    }

    /// The normalized spectrally negative case `c+ = 0, c- = 1/Γ(-α)`, α in (1, 2).
    pub fn spectrally_negative(alpha: StabilityIndex) -> Self {
        GeneralIndex {
            alpha: alpha.alpha(),
            c_plus: 0.0,
            c_minus: 1.0 / gamma(-alpha.alpha()),
        }
    }
}
