use serde::{Deserialize, Serialize};

use super::{ReportBuilder, VerificationReport};
use crate::dist::{mean_and_se, mom_x, positive_stable_sample, stable_increment_sample, x_exact_sample, SamplePopulation};
use crate::error::{Error, Result};
use crate::pathsim::{bias_calibration, simulate_reflected, PathConfig, Reflect};
use crate::specfun::StabilityIndex;
use crate::stats::{ks_statistic, ks_threshold, KS_C_001};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KsResult {
    pub statistic: f64,
    pub threshold: f64,
    pub reject: bool,
}

/// Two-sample KS test; `c(0.01) = 1.63`, otherwise `sqrt(-ln(level/2)/2)`.
pub fn ks_two_sample(a: &SamplePopulation, b: &SamplePopulation, level: f64) -> Result<KsResult> {
    if a.values.is_empty() || b.values.is_empty() {
        return Err(Error::Domain("KS test needs two nonempty populations".into()));
    }
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::Domain(format!("level = {level} must be in (0, 1)")));
    }
    let c = if level == 0.01 {
        KS_C_001
    } else {
        (-(level / 2.0).ln() / 2.0).sqrt()
    };
    let statistic = ks_statistic(&a.values, &b.values);
    let threshold = ks_threshold(c, a.values.len(), b.values.len());
    Ok(KsResult {
        statistic,
        threshold,
        reject: statistic > threshold,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IdentityLawConfig {
    /// Exact `V_α × X̂₁` draws.
    pub n_exact: usize,
    pub n_paths: usize,
    pub n_steps: u32,
    /// Paths per rung of the bias calibration that sets the allowances.
    pub calibration_paths: usize,
    /// Dyadic halvings of the last step for both the check and its calibration.
    pub terminal_refinement: u32,
    pub seed: u64,
}

impl IdentityLawConfig {
    pub fn new(seed: u64) -> Self {
        IdentityLawConfig {
            n_exact: 100_000,
            n_paths: 10_000,
            n_steps: 1 << 12,
            calibration_paths: 10_000,
            terminal_refinement: DEFAULT_TERMINAL_REFINEMENT,
            seed,
        }
    }
}

/// Without refinement the walk's `S - Z` keeps an atom at 0 of size ≍ n^{-(1-1/α)}.
pub const DEFAULT_TERMINAL_REFINEMENT: u32 = 40;

const MOMENT_ORDERS: [f64; 3] = [0.25, 0.5, 0.75];
const CALIBRATION_SALT: u64 = 0x00CA_11B2_A7E0;

/// `X₁ ≐ V_α × X̂₁`: path-discretized X₁ (reflection at the supremum) against
/// exact products. Residuals are normalized so that the tolerance is 1:
/// `KS / (threshold + allowance)` and `|moment - E[X₁^s]| / (3 SE + allowance)`.
pub fn check_identity_law(alpha: StabilityIndex, cfg: &IdentityLawConfig) -> Result<VerificationReport> {
    if cfg.n_exact < 1000 || cfg.n_paths < 1000 {
        return Err(Error::Domain("identity-law populations need at least 1000 draws".into()));
    }
    let n = cfg.n_steps;
    let ladder = [(n >> 4).max(1), (n >> 2).max(1), n];
    let k = cfg.terminal_refinement;
    let cal = bias_calibration(alpha, &ladder, cfg.calibration_paths, cfg.seed ^ CALIBRATION_SALT, k)?;
    let rung = cal.rung(n).cloned().ok_or_else(|| Error::Domain("calibration rung missing".into()))?;
    let path_cfg = PathConfig::new(alpha, n, cfg.n_paths, cfg.seed, Reflect::AtSupremum).with_terminal_refinement(k);
    let path = simulate_reflected(&path_cfg)?;
    let exact = x_exact_sample(alpha, cfg.n_exact, cfg.seed)?;
    let ks = ks_two_sample(&path, &exact, 0.01)?;

    let mut b = ReportBuilder::new("identity-law", alpha.alpha(), 1.0);
    b.seed(cfg.seed)
        .grid(&MOMENT_ORDERS)
        .param("config", cfg)
        .param("ks", ks)
        .param("ks_allowance", rung.ks)
        .param("calibration", &cal);
    b.push_series("ks", 0.0, ks.statistic / (ks.threshold + rung.ks));
    let mut allowances = Vec::new();
    for (i, &s) in MOMENT_ORDERS.iter().enumerate() {
        let m = mom_x(alpha, s)?;
        let (_, gap, gap_se) = rung.moment_gaps[i];
        let allow = (gap.abs() + 3.0 * gap_se) * m;
        allowances.push(allow);
        let (pm, pse) = mean_and_se(path.values.iter().map(|v| v.powf(s)));
        let (em, ese) = mean_and_se(exact.values.iter().map(|v| v.powf(s)));
        b.push_series("path", s, (pm - m).abs() / (3.0 * pse + allow));
        b.push_series("exact", s, (em - m).abs() / (3.0 * ese));
    }
    b.param("moment_allowances", allowances);
    Ok(b.finish())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LaplaceLaw {
    /// `E[e^{λZ₁}] = e^{λ^α}`
    StableIncrement,
    /// `E[e^{-λT₁}] = e^{-λ^{1/α}}`
    PosStable,
}

/// Monte Carlo Laplace transforms against their closed forms; residual
/// `|mean - exact| / (3 SE)`, tolerance 1.
pub fn check_laplace_normalization(
    alpha: StabilityIndex,
    law: LaplaceLaw,
    lambdas: &[f64],
    n: usize,
    seed: u64,
) -> Result<VerificationReport> {
    if n < 10_000 {
        return Err(Error::Domain(format!("n = {n} is below 10^4")));
    }
    if lambdas.iter().any(|&l| !(l >= 0.0)) {
        return Err(Error::Domain("lambda grid must be nonnegative".into()));
    }
    let a = alpha.alpha();
    let pop = match law {
        LaplaceLaw::StableIncrement => stable_increment_sample(alpha, n, seed)?,
        LaplaceLaw::PosStable => positive_stable_sample(alpha, n, seed)?,
    };
    let mut b = ReportBuilder::new("laplace", a, 1.0);
    b.seed(seed).grid(lambdas).param("law", law).param("n", n);
    let mut estimates = Vec::new();
    for &l in lambdas {
        let (mean, se, exact) = match law {
            LaplaceLaw::StableIncrement => {
                let (m, se) = pop.mean_of(|z| (l * z).exp());
                (m, se, l.powf(a).exp())
            }
            LaplaceLaw::PosStable => {
                let (m, se) = pop.mean_of(|t| (-l * t).exp());
                (m, se, (-l.powf(1.0 / a)).exp())
            }
        };
        estimates.push([mean, se, exact]);
        let d = (mean - exact).abs();
        b.push(l, if d == 0.0 { 0.0 } else { d / (3.0 * se) });
    }
    b.param("estimates", estimates);
    Ok(b.finish())
}
