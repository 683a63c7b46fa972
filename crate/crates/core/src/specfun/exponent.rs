use super::{GeneralIndex, StabilityIndex};
use crate::error::{Error, Result};
use crate::gamma::{gamma, gamma_ratio, rgamma};
use crate::quad::{self, QuadratureConfig};

/// `ψ(λ) = Γ(λ+α)/Γ(λ)`, with ψ(0) = 0.
pub fn psi(alpha: StabilityIndex, lambda: f64) -> Result<f64> {
    if !(lambda >= 0.0) {
        return Err(Error::Domain(format!("lambda = {lambda} must be nonnegative")));
    }
    let a = alpha.alpha();
    if lambda == 0.0 {
        return Ok(0.0);
    }
    Ok(gamma_ratio(lambda + a, lambda))
}

/// `ψ_-(λ) = Γ(α(λ+1)-1)/Γ(αλ-1)`.
pub fn psi_minus(alpha: StabilityIndex, lambda: f64) -> Result<f64> {
    if !(lambda >= 0.0) {
        return Err(Error::Domain(format!("lambda = {lambda} must be nonnegative")));
    }
    let a = alpha.alpha();
    let num = a * (lambda + 1.0) - 1.0;
    let den = a * lambda - 1.0;
    if den > 0.0 {
        Ok(gamma_ratio(num, den))
    } else {
        Ok(gamma(num) * rgamma(den))
    }
}

/// `Γ(-α)(c- Γ(λ+α)/Γ(λ) + c+ Γ(1-λ)/Γ(1-α-λ))` on the strip -α < λ < 1.
pub fn psi_general(idx: GeneralIndex, lambda: f64) -> Result<f64> {
    let a = idx.alpha;
    if !(lambda > -a && lambda < 1.0) {
        return Err(Error::Domain(format!(
            "lambda = {lambda} is outside the strip ({}, 1)",
            -a
        )));
    }
    let minus = if idx.c_minus == 0.0 {
        0.0
    } else {
        idx.c_minus * gamma(lambda + a) * rgamma(lambda)
    };
    let plus = if idx.c_plus == 0.0 {
        0.0
    } else {
        idx.c_plus * gamma(1.0 - lambda) * rgamma(1.0 - a - lambda)
    };
    Ok(gamma(-a) * (minus + plus))
}

/// Smallest positive root of `λ ↦ ψ(-λ)` on (0, α).
pub fn theta_root(idx: GeneralIndex) -> Result<f64> {
    let a = idx.alpha;
    let upper = a - 1e-9;
    let g = |l: f64| psi_general(idx, -l);
    let n = 4096;
    let lo0 = 1e-9;
    let step = (upper - lo0) / n as f64;
    let mut lo = lo0;
    let mut glo = g(lo)?;
    for i in 1..=n {
        let hi = lo0 + step * i as f64;
        let ghi = g(hi)?;
        if ghi == 0.0 {
            return Ok(hi);
        }
        if glo.signum() != ghi.signum() {
            let (mut l, mut h, mut gl) = (lo, hi, glo);
            while h - l > 1e-13 {
                let m = 0.5 * (l + h);
                let gm = g(m)?;
                if gm == 0.0 {
                    return Ok(m);
                }
                if gm.signum() == gl.signum() {
                    l = m;
                    gl = gm;
                } else {
                    h = m;
                }
            }
            return Ok(0.5 * (l + h));
        }
        lo = hi;
        glo = ghi;
    }
    Err(Error::RootNotFound(format!(
        "no sign change of psi(-lambda) on (0, {a}) for {idx:?}"
    )))
}

/// Numerical value of the Lévy-Khintchine integral for ψ, written in the variable
/// `u = e^y - 1` and split at u = 1 (y = log 2).
pub fn psi_integral(alpha: StabilityIndex, lambda: f64, cfg: &QuadratureConfig) -> Result<f64> {
    cfg.validate()?;
    if !(lambda >= 0.0) {
        return Err(Error::Domain(format!("lambda = {lambda} must be nonnegative")));
    }
    if lambda == 0.0 {
        return Ok(0.0);
    }
    let a = alpha.alpha();
    let ga = gamma(-a);
    let linear = lambda / ((a - 1.0) * ga);

    // ∫_0^1 ((1+u)^{-λ} - 1 + λu) u^{-1-α} du = ∫_0^1 u^{1-α} q(u) du
    let q = |u: f64| -> Result<f64> {
        if u < 0.5 {
            // Σ_{k≥2} binom(-λ, k) u^{k-2}
            let mut b = -lambda;
            let mut sum = 0.0;
            let mut p = 1.0;
            for k in 2..200 {
                b *= (-lambda - (k as f64) + 1.0) / k as f64;
                let t = b * p;
                sum += t;
                if t.abs() <= 1e-18 * sum.abs() {
                    break;
                }
                p *= u;
            }
            Ok(sum)
        } else {
            Ok(((-lambda * u.ln_1p()).exp_m1() + lambda * u) / (u * u))
        }
    };
    let near = quad::integrate_left_weighted(q, 0.0, 1.0, 1.0 - a, cfg)?;

    // ∫_1^∞ ((1+u)^{-λ} - 1) u^{-1-α} du = ∫_0^1 t^{α+λ-1}(1+t)^{-λ} dt - 1/α  (t = 1/u)
    let far = quad::integrate_left_weighted(
        |t: f64| Ok((-lambda * t.ln_1p()).exp()),
        0.0,
        1.0,
        a + lambda - 1.0,
        cfg,
    )?;
    Ok(linear + (near.value + far.value - 1.0 / a) / ga)
}
