use serde::{Deserialize, Serialize};

use super::{ReportBuilder, VerificationReport};
use crate::error::{Error, Result};
use crate::hp::{exp_ratio_derivatives, f_minus_fprime_derivatives};
use crate::specfun::derivative_stack;

/// Sign slack for the recursion and series targets.
pub const CM_SLACK: f64 = 1e-10;
/// Sign slack for the finite-difference target.
pub const CM_FD_SLACK: f64 = 1e-6;
/// Relative agreement with closed forms at α = 1 and α = 2.
pub const CM_ORACLE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CmTarget {
    /// `1/E_α`
    RecipMl,
    /// `F_α - F_α'`
    FMinusFprime,
    /// `exp(-x E_α'(x)/E_α(x))`
    ExpRatio,
}

impl CmTarget {
    fn max_order(self) -> usize {
        match self {
            CmTarget::ExpRatio => 6,
            _ => 10,
        }
    }

    fn name(self) -> &'static str {
        match self {
            CmTarget::RecipMl => "recip-ml",
            CmTarget::FMinusFprime => "f-minus-fprime",
            CmTarget::ExpRatio => "exp-ratio",
        }
    }
}

/// `g(x), g'(x), ..., g^{(n_max)}(x)` for the target g.
pub fn cm_derivatives(target: CmTarget, alpha: f64, x: f64, n_max: usize) -> Result<Vec<f64>> {
    if !(1.0..=2.0).contains(&alpha) {
        return Err(Error::Domain(format!("alpha = {alpha} is not in [1, 2]")));
    }
    if n_max > target.max_order() {
        return Err(Error::Domain(format!(
            "n_max = {n_max} exceeds {} for {}",
            target.max_order(),
            target.name()
        )));
    }
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::Domain(format!("x = {x} must be positive")));
    }
    match target {
        CmTarget::RecipMl => Ok(reciprocal_jet(&derivative_stack(alpha, x, n_max)?)),
        CmTarget::FMinusFprime => f_minus_fprime_derivatives(alpha, x, n_max),
        CmTarget::ExpRatio => exp_ratio_derivatives(alpha, x, n_max),
    }
}

/// Derivatives of 1/e from those of e (Leibniz on e·r = 1).
fn reciprocal_jet(e: &[f64]) -> Vec<f64> {
    let mut r = vec![1.0 / e[0]];
    for n in 1..e.len() {
        let mut s = 0.0;
        let mut binom = 1.0;
        for k in 1..=n {
            binom *= (n - k + 1) as f64 / k as f64;
            s += binom * e[k] * r[n - k];
        }
        r.push(-s / e[0]);
    }
    r
}

/// Derivatives of `1/cosh √x` from the Taylor coefficients of `cosh √(x+t)`:
/// through the jet of `√(x+t)` for x ≥ 1, and for x < 1 (where that jet
/// cancels badly) from `Σ_n (x+t)^n/(2n)!` whose coefficients are all positive.
pub fn recip_cosh_sqrt_derivatives(x: f64, n_max: usize) -> Vec<f64> {
    let n = n_max + 1;
    let ch: Vec<f64> = if x >= 1.0 {
        // √(x+t) = √x Σ binom(1/2, k) (t/x)^k
        let mut s = vec![0.0; n];
        let mut c = x.sqrt();
        for (k, sk) in s.iter_mut().enumerate() {
            *sk = c;
            c *= (0.5 - k as f64) / ((k + 1) as f64 * x);
        }
        let exp_jet = |a: &[f64]| -> Vec<f64> {
            let mut b = vec![a[0].exp()];
            for k in 1..n {
                let v: f64 = (1..=k).map(|j| j as f64 * a[j] * b[k - j]).sum();
                b.push(v / k as f64);
            }
            b
        };
        let ep = exp_jet(&s);
        let neg: Vec<f64> = s.iter().map(|v| -v).collect();
        let em = exp_jet(&neg);
        ep.iter().zip(&em).map(|(a, b)| 0.5 * (a + b)).collect()
    } else {
        (0..n)
            .map(|k| {
                // Σ_{m ≥ k} binom(m, k) x^{m-k} / (2m)!
                let mut t: f64 = (1..=2 * k).map(|j| 1.0 / j as f64).product();
                let mut sum = 0.0;
                let mut m = k;
                while t > 1e-18 * sum || sum == 0.0 {
                    sum += t;
                    t *= (m + 1) as f64 / (m + 1 - k) as f64 * x / ((2 * m + 1) * (2 * m + 2)) as f64;
                    m += 1;
                    if t == 0.0 {
                        break;
                    }
                }
                sum
            })
            .collect()
    };
    let mut r = vec![1.0 / ch[0]];
    for k in 1..n {
        let v: f64 = (1..=k).map(|j| ch[j] * r[k - j]).sum();
        r.push(-v / ch[0]);
    }
    let mut fact = 1.0;
    r.iter()
        .enumerate()
        .map(|(k, v)| {
            if k > 0 {
                fact *= k as f64;
            }
            v * fact
        })
        .collect()
}

fn alternating_exp(x: f64, n: usize) -> f64 {
    if n.is_multiple_of(2) {
        (-x).exp()
    } else {
        -(-x).exp()
    }
}

fn oracle(target: CmTarget, alpha: f64, x: f64, n_max: usize) -> Option<Vec<f64>> {
    let alt = || (0..=n_max).map(|n| alternating_exp(x, n)).collect();
    match (target, alpha) {
        (CmTarget::RecipMl, 1.0) => Some(alt()),
        (CmTarget::RecipMl, 2.0) => Some(recip_cosh_sqrt_derivatives(x, n_max)),
        (CmTarget::FMinusFprime, 1.0) => Some(vec![0.0; n_max + 1]),
        (CmTarget::FMinusFprime, 2.0) => Some(alt()),
        (CmTarget::ExpRatio, 1.0) => Some(alt()),
        _ => None,
    }
}

/// Signs of `(-1)^n g^{(n)}` on the grid for n ≤ n_max; where α = 1 or 2 gives a
/// closed form, relative agreement with it instead.
pub fn check_cm(target: CmTarget, alpha: f64, n_max: usize, grid: &[f64]) -> Result<VerificationReport> {
    let has_oracle = oracle(target, alpha, 1.0, 0).is_some();
    let tol = if has_oracle {
        CM_ORACLE_TOL
    } else if target == CmTarget::ExpRatio {
        CM_FD_SLACK
    } else {
        CM_SLACK
    };
    let mut b = ReportBuilder::new("cm", alpha, tol);
    b.grid(grid)
        .param("target", target)
        .param("n_max", n_max)
        .param("mode", if has_oracle { "closed-form" } else { "sign" });
    for &x in grid {
        let d = cm_derivatives(target, alpha, x, n_max)?;
        let o = oracle(target, alpha, x, n_max);
        for (n, &v) in d.iter().enumerate() {
            let res = match &o {
                Some(o) => {
                    let w = o[n];
                    if w == 0.0 {
                        v.abs()
                    } else {
                        (v - w).abs() / w.abs()
                    }
                }
                None => {
                    let signed = if n % 2 == 0 { v } else { -v };
                    (-signed).max(0.0)
                }
            };
            b.push_series(&format!("n={n}"), x, res);
        }
    }
    Ok(b.finish())
}
