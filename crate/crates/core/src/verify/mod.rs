//! Numerical certificates. Every check returns a [`VerificationReport`] whose
//! `passed` flag is `max_abs_residual <= tolerance`.

use std::time::Instant;

use serde::Serialize;
use serde_json::{Map, Value};

mod analytic;
mod cm;
mod stochastic;

pub use analytic::{
    check_factorization, check_intertwining, check_lamperti, check_rep, check_resolvent, ResolventPart,
    RESOLVENT_BOUNDARY_TOL, RESOLVENT_GENERATOR_TOL, RESOLVENT_MASS_TOL,
};
pub use cm::{check_cm, cm_derivatives, recip_cosh_sqrt_derivatives, CmTarget, CM_FD_SLACK, CM_ORACLE_TOL, CM_SLACK};
pub use stochastic::{
    check_identity_law, check_laplace_normalization, ks_two_sample, IdentityLawConfig, KsResult, LaplaceLaw, DEFAULT_TERMINAL_REFINEMENT,
};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Residual {
    pub at: f64,
    pub value: f64,
    /// Which quantity, when a report carries several per location.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub series: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub check: String,
    pub alpha: f64,
    pub params: Map<String, Value>,
    pub grid: Vec<f64>,
    pub residuals: Vec<Residual>,
    pub max_abs_residual: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub seed: Option<u64>,
    pub runtime_ms: u64,
}

impl VerificationReport {
    /// Zeroes the wall-clock field so that reports compare byte for byte.
    pub fn without_timing(mut self) -> Self {
        self.runtime_ms = 0;
        self
    }
}

/// Accumulates residuals; `finish` fixes the verdict.
pub(crate) struct ReportBuilder {
    check: String,
    alpha: f64,
    params: Map<String, Value>,
    grid: Vec<f64>,
    residuals: Vec<Residual>,
    tolerance: f64,
    seed: Option<u64>,
    start: Instant,
}

impl ReportBuilder {
    pub(crate) fn new(check: &str, alpha: f64, tolerance: f64) -> Self {
        ReportBuilder {
            check: check.to_string(),
            alpha,
            params: Map::new(),
            grid: Vec::new(),
            residuals: Vec::new(),
            tolerance,
            seed: None,
            start: Instant::now(),
        }
    }

    pub(crate) fn param(&mut self, key: &str, v: impl Serialize) -> &mut Self {
        self.params
            .insert(key.to_string(), serde_json::to_value(v).unwrap_or(Value::Null));
        self
    }

    pub(crate) fn grid(&mut self, g: &[f64]) -> &mut Self {
        self.grid = g.to_vec();
        self
    }

    pub(crate) fn seed(&mut self, s: u64) -> &mut Self {
        self.seed = Some(s);
        self
    }

    pub(crate) fn push(&mut self, at: f64, value: f64) {
        self.residuals.push(Residual { at, value, series: None });
    }

    pub(crate) fn push_series(&mut self, series: &str, at: f64, value: f64) {
        self.residuals.push(Residual {
            at,
            value,
            series: Some(series.to_string()),
        });
    }

    pub(crate) fn finish(self) -> VerificationReport {
        // NaN residuals fail the check
        let max = self
            .residuals
            .iter()
            .map(|r| if r.value.is_nan() { f64::INFINITY } else { r.value.abs() })
            .fold(0.0, f64::max);
        VerificationReport {
            check: self.check,
            alpha: self.alpha,
            params: self.params,
            grid: self.grid,
            residuals: self.residuals,
            max_abs_residual: max,
            tolerance: self.tolerance,
            passed: max <= self.tolerance,
            seed: self.seed,
            runtime_ms: self.start.elapsed().as_millis() as u64,
        }
    }
}
