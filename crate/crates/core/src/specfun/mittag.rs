use serde::{Deserialize, Serialize};

use super::StabilityIndex;
use crate::error::{Error, Result};
use crate::gamma::{cos_pi, ln_gamma, rgamma, sin_pi};
use crate::quad::{self, QuadratureConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    Series,
    Asymptotic,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MlEvaluation {
    pub value: f64,
    pub regime: Regime,
    pub terms_used: usize,
    pub truncation_bound: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MlOptions {
    pub rel_tol: f64,
    pub max_terms: usize,
    /// The asymptotic form is used once `x^(1/α)` exceeds this.
    pub switch: f64,
    pub asymptotic_terms: usize,
}

impl Default for MlOptions {
    fn default() -> Self {
        MlOptions {
            rel_tol: 1e-14,
            max_terms: 4000,
            switch: 25.0,
            asymptotic_terms: 6,
        }
    }
}

/// `E_α^{(deriv)}(x)` for α in (0, 2], x ≥ 0, deriv ≤ 2.
pub fn mittag_leffler(alpha: f64, x: f64, deriv: u32) -> Result<MlEvaluation> {
    mittag_leffler_with(alpha, x, deriv, &MlOptions::default())
}

pub fn mittag_leffler_with(alpha: f64, x: f64, deriv: u32, opts: &MlOptions) -> Result<MlEvaluation> {
    if !(alpha > 0.0 && alpha <= 2.0) {
        return Err(Error::Domain(format!("alpha = {alpha} is not in (0, 2]")));
    }
    if !(x >= 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("x = {x} must be finite and nonnegative")));
    }
    if deriv > 2 {
        return Err(Error::Domain(format!("derivative order {deriv} > 2")));
    }
    let ev = if x.powf(1.0 / alpha) > opts.switch {
        ml_asymptotic(alpha, x, deriv, opts.asymptotic_terms)?
    } else {
        let (value, terms_used, truncation_bound) = ml_series(alpha, x, deriv, opts.max_terms)?;
        MlEvaluation {
            value,
            regime: Regime::Series,
            terms_used,
            truncation_bound,
        }
    };
    if ev.truncation_bound > opts.rel_tol * ev.value.abs() {
        return Err(Error::Series {
            partial: ev.value,
            bound: ev.truncation_bound,
            terms: ev.terms_used,
        });
    }
    Ok(ev)
}

/// Term-wise differentiated series: Σ_{n≥m} n!/(n-m)! x^{n-m}/Γ(αn+1).
fn ml_series(alpha: f64, x: f64, m: u32, max_terms: usize) -> Result<(f64, usize, f64)> {
    let m = m as usize;
    if x == 0.0 {
        let mf: f64 = (1..=m).map(|k| k as f64).product();
        return Ok((mf * rgamma(alpha * m as f64 + 1.0), 1, 0.0));
    }
    let lx = x.ln();
    let mut sum = 0.0;
    let mut prev = f64::INFINITY;
    for (k, n) in (m..m + max_terms).enumerate() {
        let nf = n as f64;
        let lt = ln_gamma(nf + 1.0) - ln_gamma(nf - m as f64 + 1.0) + (nf - m as f64) * lx
            - ln_gamma(alpha * nf + 1.0);
        if lt > 709.0 {
            return Err(Error::Domain(format!("E_alpha series term overflows at x = {x}")));
        }
        let t = lt.exp();
        sum += t;
        if t < prev && t <= 1e-17 * sum {
            let r = t / prev;
            let bound = if r < 1.0 { t * r / (1.0 - r) } else { t };
            return Ok((sum, k + 1, bound));
        }
        prev = t;
    }
    Err(Error::Series {
        partial: sum,
        bound: prev,
        terms: max_terms,
    })
}

fn ml_asymptotic(alpha: f64, x: f64, m: u32, k_terms: usize) -> Result<MlEvaluation> {
    let r = x.powf(1.0 / alpha);
    if r > 709.0 {
        return Err(Error::Domain(format!("E_alpha({x}) overflows")));
    }
    let ia = 1.0 / alpha;
    let e = r.exp();
    let lead = match m {
        0 => ia * e,
        1 => ia * ia * x.powf(ia - 1.0) * e,
        _ => ia * ia * ((ia - 1.0) * x.powf(ia - 2.0) + ia * x.powf(2.0 * ia - 2.0)) * e,
    };
    // k-th correction term of the m-th derivative of -Σ x^{-k}/Γ(1-αk).
    let corr = |k: usize| -> f64 {
        let kf = k as f64;
        let c = rgamma(1.0 - alpha * kf);
        match m {
            0 => -c * x.powf(-kf),
            1 => c * kf * x.powf(-kf - 1.0),
            _ => -c * kf * (kf + 1.0) * x.powf(-kf - 2.0),
        }
    };
    let mut value = lead;
    for k in 1..=k_terms {
        value += corr(k);
    }
    Ok(MlEvaluation {
        value,
        regime: Regime::Asymptotic,
        terms_used: k_terms,
        truncation_bound: corr(k_terms + 1).abs(),
    })
}

/// `(E_α(x), E_α'(x), ..., E_α^{(n_max)}(x))` from the term-wise differentiated series.
pub fn derivative_stack(alpha: f64, x: f64, n_max: usize) -> Result<Vec<f64>> {
    if !(alpha > 0.0 && alpha <= 2.0) {
        return Err(Error::Domain(format!("alpha = {alpha} is not in (0, 2]")));
    }
    if !(x >= 0.0) {
        return Err(Error::Domain(format!("x = {x} must be nonnegative")));
    }
    if n_max > 12 {
        return Err(Error::Domain(format!("n_max = {n_max} > 12")));
    }
    (0..=n_max)
        .map(|m| ml_series(alpha, x, m as u32, 10_000).map(|r| r.0))
        .collect()
}

/// Which remainder of `F_α - e^x/α`: A for F, B for F', C for F''.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Remainder {
    A,
    B,
    C,
}

impl Remainder {
    fn order(self) -> usize {
        match self {
            Remainder::A => 0,
            Remainder::B => 1,
            Remainder::C => 2,
        }
    }
}

const TABLE_LEN: usize = 512;
const ASYM_LEN: usize = 64;

/// Switch from the series to `e^x/α` plus corrections.
pub const F_SWITCH: f64 = 25.0;
const F_ASYM_TERMS: usize = 6;
const LAPLACE_MAX: f64 = 40.0;

/// Evaluator for `F_α(x) = E_α(x^α)` and its first two derivatives with
/// cached Gamma tables; cheap to call repeatedly inside quadratures.
#[derive(Debug, Clone)]
pub struct FFamily {
    alpha: f64,
    // lg[m][n] = ln Γ(αn + 1 - m)
    lg: [Vec<f64>; 3],
    // rg[k] = 1/Γ(1 - αk)
    rg: Vec<f64>,
    sin_pa: f64,
    cos_pa: f64,
}

impl FFamily {
    pub fn new(alpha: StabilityIndex) -> Self {
        let a = alpha.alpha();
        let table = |m: f64| -> Vec<f64> {
            (0..TABLE_LEN)
                .map(|n| {
                    let z = a * n as f64 + 1.0 - m;
                    if z > 0.0 {
                        ln_gamma(z)
                    } else {
                        f64::INFINITY
                    }
                })
                .collect()
        };
        FFamily {
            alpha: a,
            lg: [table(0.0), table(1.0), table(2.0)],
            rg: (0..ASYM_LEN).map(|k| rgamma(1.0 - a * k as f64)).collect(),
            sin_pa: sin_pi(a),
            cos_pa: cos_pi(a),
        }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Σ_{n ≥ n0} x^{αn - m - s}/Γ(αn + 1 - m), all terms positive.
    fn series_sum(&self, x: f64, m: usize, s: f64, n0: usize) -> Result<f64> {
        let a = self.alpha;
        if x == 0.0 {
            // only the term with αn - m - s = 0 survives
            for n in n0..TABLE_LEN {
                let e = a * n as f64 - m as f64 - s;
                if e.abs() < 1e-12 {
                    return Ok(rgamma(a * n as f64 + 1.0 - m as f64));
                }
                if e > 0.0 {
                    break;
                }
            }
            return Ok(0.0);
        }
        let lx = x.ln();
        let mut sum = 0.0;
        let mut prev = f64::INFINITY;
        for n in n0..TABLE_LEN {
            let lt = (a * n as f64 - m as f64 - s) * lx - self.lg[m][n];
            if lt > 709.0 {
                return Err(Error::Domain(format!("F_alpha series overflows at x = {x}")));
            }
            let t = lt.exp();
            sum += t;
            if t < prev && t <= 1e-17 * sum {
                return Ok(sum);
            }
            prev = t;
        }
        Err(Error::Series {
            partial: sum,
            bound: prev,
            terms: TABLE_LEN,
        })
    }

    /// `F^{(m)}(x)` from the series, any x ≥ 0 small enough not to overflow.
    pub fn series(&self, x: f64, m: usize) -> Result<f64> {
        if m > 2 {
            return Err(Error::Domain(format!("derivative order {m} > 2")));
        }
        if m == 2 && x == 0.0 {
            return Err(Error::Domain("F'' is singular at 0".into()));
        }
        let n0 = if m == 0 { 0 } else { 1 };
        self.series_sum(x, m, 0.0, n0)
    }

    /// `F^{(m)}(x)` from `e^x/α` plus `k` terms of the algebraic correction series.
    pub fn asymptotic(&self, x: f64, m: usize, k: usize) -> f64 {
        (x.exp() / self.alpha) + self.correction(x, m, k)
    }

    fn correction_term(&self, x: f64, m: usize, k: usize) -> f64 {
        let ak = self.alpha * k as f64;
        let c = self.rg[k];
        match m {
            0 => -c * x.powf(-ak),
            1 => c * ak * x.powf(-ak - 1.0),
            _ => -c * ak * (ak + 1.0) * x.powf(-ak - 2.0),
        }
    }

    fn correction(&self, x: f64, m: usize, k: usize) -> f64 {
        (1..=k).map(|j| self.correction_term(x, m, j)).sum()
    }

    /// `F_α^{(deriv)}(x)`: series up to the switch point, asymptotic form beyond.
    pub fn eval(&self, x: f64, deriv: usize) -> Result<f64> {
        if !(x >= 0.0) || !x.is_finite() {
            return Err(Error::Domain(format!("x = {x} must be finite and nonnegative")));
        }
        if x <= F_SWITCH {
            self.series(x, deriv)
        } else if x > 709.0 {
            Err(Error::Domain(format!("F_alpha({x}) overflows")))
        } else {
            if deriv > 2 {
                return Err(Error::Domain(format!("derivative order {deriv} > 2")));
            }
            Ok(self.asymptotic(x, deriv, F_ASYM_TERMS))
        }
    }

    /// `F'(x) x^{1-α} = E_{α,α}(x^α)`, smooth at 0.
    pub fn fprime_scaled(&self, x: f64) -> Result<f64> {
        if x <= F_SWITCH {
            self.series_sum(x, 1, self.alpha - 1.0, 1)
        } else {
            Ok(self.eval(x, 1)? * x.powf(1.0 - self.alpha))
        }
    }

    /// `F''(x) x^{2-α} = E_{α,α-1}(x^α)`, finite at 0.
    pub fn fsecond_scaled(&self, x: f64) -> Result<f64> {
        if x <= F_SWITCH {
            self.series_sum(x, 2, self.alpha - 2.0, 1)
        } else {
            Ok(self.eval(x, 2)? * x.powf(2.0 - self.alpha))
        }
    }

    /// `F^{(m)}(x) - e^x/α` without cancellation.
    pub fn remainder(&self, x: f64, which: Remainder) -> Result<f64> {
        let m = which.order();
        if !(x >= 0.0) || !x.is_finite() {
            return Err(Error::Domain(format!("x = {x} must be finite and nonnegative")));
        }
        if x <= 1.0 {
            Ok(self.series(x, m)? - x.exp() / self.alpha)
        } else if x <= LAPLACE_MAX {
            self.remainder_laplace(x, m)
        } else {
            Ok(self.remainder_asymptotic(x, m))
        }
    }

    /// Density of the Laplace representation `A(x) = ∫ e^{-xt} g(t) dt`.
    fn laplace_kernel(&self, t: f64) -> f64 {
        let ta = t.powf(self.alpha);
        -self.sin_pa / (std::f64::consts::PI * (ta * ta - 2.0 * ta * self.cos_pa + 1.0))
    }

    /// `(-1)^m ∫_0^∞ t^m e^{-xt} g(t) dt` with g(t) = t^{α-1} × laplace_kernel(t).
    pub fn remainder_laplace(&self, x: f64, m: usize) -> Result<f64> {
        let cfg = QuadratureConfig {
            rel_tol: 1e-13,
            abs_tol: 1e-300,
            max_subdivisions: 2000,
            ..Default::default()
        };
        let a = self.alpha;
        let split = (1.0 / x).min(1.0);
        let head = quad::integrate_left_weighted(
            |t| Ok((-x * t).exp() * self.laplace_kernel(t)),
            0.0,
            split,
            a - 1.0 + m as f64,
            &cfg,
        )?;
        let tail = quad::integrate_to_infinity(
            |t| Ok(t.powf(a - 1.0 + m as f64) * (-x * t).exp() * self.laplace_kernel(t)),
            split,
            &cfg,
        )?;
        let v = head.value + tail.value;
        Ok(if m % 2 == 1 { -v } else { v })
    }

    /// Correction series truncated where its envelope `Γ(αk+m) x^{-αk-m}` is smallest.
    fn remainder_asymptotic(&self, x: f64, m: usize) -> f64 {
        let lx = x.ln();
        let mut sum = 0.0;
        let mut prev_env = f64::INFINITY;
        for k in 1..ASYM_LEN {
            let z = self.alpha * k as f64 + m as f64;
            let env = (ln_gamma(z) - z * lx).exp();
            if env > prev_env {
                break;
            }
            sum += self.correction_term(x, m, k);
            if k > 1 && env <= 1e-18 * sum.abs() {
                break;
            }
            prev_env = env;
        }
        sum
    }
}

/// `F_α^{(deriv)}(x)`; builds a fresh evaluator, prefer [`FFamily`] in loops.
pub fn f_family(alpha: StabilityIndex, x: f64, deriv: u32) -> Result<f64> {
    FFamily::new(alpha).eval(x, deriv as usize)
}

/// Remainders `F^{(m)}(x) - e^x/α` for x > 0.
pub fn f_remainder(alpha: StabilityIndex, x: f64, which: Remainder) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::Domain(format!("x = {x} must be positive")));
    }
    FFamily::new(alpha).remainder(x, which)
}
