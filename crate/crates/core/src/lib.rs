//! Fractional derivatives, Mittag-Leffler functions and spectrally negative
//! stable laws, with numerical certificates for the intertwining relation
//! `Δ^α_+ V_α f = V_α D^α_- f` and its companion identities.

pub mod dist;
pub mod error;
pub mod fracops;
pub mod gamma;
pub mod hp;
pub mod quad;
pub mod pathsim;
pub mod resolvent;
pub mod stats;
pub mod verify;
pub mod specfun;

pub use error::{Error, Result};
pub use fracops::SmoothTestFunction;
pub use quad::QuadratureConfig;
pub use specfun::{GeneralIndex, StabilityIndex};
