use std::sync::Arc;

use serde::Serialize;

use super::{ReportBuilder, VerificationReport};
use crate::dist::{kernel_apply, kernel_transform, mom_v, mom_x, mom_xhat, IminusLaw};
use crate::error::{Error, Result};
use crate::fracops::{delta_plus, is_in_domain_d, rl_right, RealFn, SmoothTestFunction};
use crate::quad::QuadratureConfig;
use crate::resolvent::{boundary_slope, rep_pointwise_with, Resolvent};
use crate::specfun::{psi, psi_integral, theta_root, GeneralIndex, StabilityIndex};

/// `Δ^α_+ V_α f = V_α D^α_- f` on a grid, relative residual with an absolute floor of 1e-6.
pub fn check_intertwining(
    f: &SmoothTestFunction,
    alpha: StabilityIndex,
    grid: &[f64],
    cfg: &QuadratureConfig,
    tolerance: f64,
) -> Result<VerificationReport> {
    let diag = is_in_domain_d(f, alpha);
    if !diag.in_domain {
        return Err(Error::Precondition(format!(
            "{} is not in the domain D: {}",
            f.name,
            diag.failed.join("; ")
        )));
    }
    let inner = cfg.inner();
    let vf = kernel_transform(f, alpha, &inner);
    let g = f.clone();
    let d: RealFn = Arc::new(move |y| rl_right(&g, alpha, y, &inner));
    let none = |k: u8| -> RealFn {
        Arc::new(move |_| Err(Error::Unsupported(format!("derivative {k} of D^alpha_- f is not tabulated"))))
    };
    let df = SmoothTestFunction::new(format!("D-[{}]", f.name), d, none(1), none(2), f.decay_gamma);
    let mut b = ReportBuilder::new("intertwining", alpha.alpha(), tolerance);
    b.grid(grid).param("fn", &f.name).param("cfg", cfg).param("floor", 1e-6);
    for &x in grid {
        let lhs = delta_plus(&vf, alpha, x, cfg)?;
        let rhs = kernel_apply(&df, alpha, x, cfg)?;
        b.push(x, (lhs - rhs).abs() / rhs.abs().max(1e-6));
    }
    Ok(b.finish())
}

/// `E[X₁^s] = E[V^s] E[X̂₁^s]` in closed form.
pub fn check_factorization(alpha: StabilityIndex, s_grid: &[f64]) -> Result<VerificationReport> {
    let mut b = ReportBuilder::new("factorization", alpha.alpha(), 1e-12);
    b.grid(s_grid);
    for &s in s_grid {
        let x = mom_x(alpha, s)?;
        let prod = mom_v(alpha, s)? * mom_xhat(alpha, s)?;
        b.push(s, (x - prod).abs() / x.abs());
    }
    Ok(b.finish())
}

pub const RESOLVENT_MASS_TOL: f64 = 1e-6;
pub const RESOLVENT_GENERATOR_TOL: f64 = 1e-3;
pub const RESOLVENT_BOUNDARY_TOL: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ResolventPart {
    /// Unit mass of both densities at each grid x.
    Mass,
    /// `Δ^α_+ Û₁f - Û₁f + f` and `D^α_- U₁f - U₁f + f` at each grid x.
    Generator,
    /// Slopes of `Û₁f` and `U₁f` at the origin.
    Boundary,
}

pub fn check_resolvent(
    f: &SmoothTestFunction,
    alpha: StabilityIndex,
    grid: &[f64],
    cfg: &QuadratureConfig,
    part: ResolventPart,
) -> Result<VerificationReport> {
    let r = Resolvent::new(alpha);
    let a = alpha.alpha();
    let (name, tol) = match part {
        ResolventPart::Mass => ("resolvent-mass", RESOLVENT_MASS_TOL),
        ResolventPart::Generator => ("resolvent-generator", RESOLVENT_GENERATOR_TOL),
        ResolventPart::Boundary => ("resolvent-boundary", RESOLVENT_BOUNDARY_TOL),
    };
    let mut b = ReportBuilder::new(name, a, tol);
    b.param("fn", &f.name).param("cfg", cfg);
    match part {
        ResolventPart::Mass => {
            b.grid(grid);
            for &x in grid {
                b.push_series("hat", x, r.uhat1_mass(x, cfg)? - 1.0);
                b.push_series("plain", x, r.u1_mass(x, cfg)? - 1.0);
            }
        }
        ResolventPart::Generator => {
            b.grid(grid);
            let inner = cfg.inner();
            let g = r.uhat1_transform(f, &inner)?;
            let u = r.u1_transform(f, &inner)?;
            for &x in grid {
                let fx = f.eval_f(x)?;
                b.push_series("hat", x, delta_plus(&g, alpha, x, cfg)? - g.eval_f(x)? + fx);
                b.push_series("plain", x, rl_right(&u, alpha, x, cfg)? - u.eval_f(x)? + fx);
            }
        }
        ResolventPart::Boundary => {
            b.grid(&[0.0]).param("stencil", "centered differences at 1e-4, 4e-4, 1.6e-3 (h = x/100), extrapolated through c x^(alpha-1) + d + e x");
            let tight = cfg.with_rel_tol(cfg.rel_tol.min(1e-11)).with_abs_tol(cfg.abs_tol.min(1e-14));
            b.push_series("hat", 0.0, boundary_slope(&|x| r.uhat1_apply(f, x.abs(), &tight), a)?);
            b.push_series("plain", 0.0, boundary_slope(&|x| r.u1_apply(f, x.abs(), &tight), a)?);
        }
    }
    Ok(b.finish())
}

/// Lévy-Khintchine integral against `Γ(λ+α)/Γ(λ)`, relative residuals.
pub fn check_lamperti(alpha: StabilityIndex, lambdas: &[f64], cfg: &QuadratureConfig) -> Result<VerificationReport> {
    let mut b = ReportBuilder::new("lamperti", alpha.alpha(), 1e-6);
    b.grid(lambdas).param("cfg", cfg);
    b.param("theta_root", theta_root(GeneralIndex::spectrally_negative(alpha))?);
    for &l in lambdas {
        let exact = psi(alpha, l)?;
        let num = psi_integral(alpha, l, cfg)?;
        let d = (num - exact).abs();
        b.push(l, if exact == 0.0 { d } else { d / exact.abs() });
    }
    Ok(b.finish())
}

/// Both sides of the entrance formula; a nonpositive side scores 1.
pub fn check_rep(alpha: StabilityIndex, y_grid: &[f64], cfg: &QuadratureConfig) -> Result<VerificationReport> {
    let law = IminusLaw::new(alpha)?;
    let mut b = ReportBuilder::new("rep", alpha.alpha(), 1e-4);
    b.grid(y_grid).param("cfg", cfg).param("t_min", law.t_min());
    for &y in y_grid {
        let p = rep_pointwise_with(&law, y, cfg)?;
        let v = if p.lhs > 0.0 && p.rhs > 0.0 {
            (p.lhs - p.rhs).abs() / p.rhs
        } else {
            1.0
        };
        b.push(y, v);
    }
    Ok(b.finish())
}
