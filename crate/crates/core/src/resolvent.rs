//! The q = 1 resolvents of the stable process reflected at its supremum (X)
//! and at its infimum (X̂), and the entrance formula of the recurrent extension.

use std::sync::Arc;

use serde::Serialize;

use crate::dist::{iminus_moment, IminusLaw};
use crate::error::{Error, Result};
use crate::fracops::{RealFn, SmoothTestFunction};
use crate::gamma::rgamma;
use crate::quad::{self, QuadratureConfig};
use crate::specfun::{FFamily, Remainder, StabilityIndex};

/// Below this argument the densities use `F_α` directly.
pub const PLAIN_MAX: f64 = 5.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Hat,
    Plain,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResolventDensityPoint {
    pub x: f64,
    pub y: f64,
    pub value: f64,
    pub side: Side,
}

fn nonneg(name: &str, v: f64) -> Result<()> {
    if v >= 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("{name} = {v} must be finite and nonnegative")))
    }
}

/// Evaluator for resolvent densities and resolvent-applied functions.
#[derive(Debug, Clone)]
pub struct Resolvent {
    fam: FFamily,
}

impl Resolvent {
    pub fn new(alpha: StabilityIndex) -> Self {
        Resolvent {
            fam: FFamily::new(alpha),
        }
    }

    pub fn alpha(&self) -> f64 {
        self.fam.alpha()
    }

    fn b(&self, d: f64) -> Result<f64> {
        self.fam.remainder(d, Remainder::B)
    }

    /// `û¹(x,y) = e^{-y}F(x) - F'(x-y) 1{y ≤ x}`
    pub fn uhat1_density(&self, x: f64, y: f64) -> Result<f64> {
        nonneg("x", x)?;
        nonneg("y", y)?;
        if y > x {
            return if x <= PLAIN_MAX {
                Ok((-y).exp() * self.fam.eval(x, 0)?)
            } else {
                Ok((x - y).exp() / self.alpha() + (-y).exp() * self.fam.remainder(x, Remainder::A)?)
            };
        }
        if x <= PLAIN_MAX {
            Ok((-y).exp() * self.fam.eval(x, 0)? - self.fam.eval(x - y, 1)?)
        } else {
            Ok((-y).exp() * self.fam.remainder(x, Remainder::A)? - self.b(x - y)?)
        }
    }

    /// `u¹(x,y) = e^{-x}F''(y) - F'(y-x) 1{y ≥ x}`, y > 0.
    pub fn u1_density(&self, x: f64, y: f64) -> Result<f64> {
        nonneg("x", x)?;
        if !(y > 0.0 && y.is_finite()) {
            return Err(Error::Domain(format!("y = {y} must be positive: F'' is singular at 0")));
        }
        if y < x {
            return if y <= PLAIN_MAX {
                Ok((-x).exp() * self.fam.eval(y, 2)?)
            } else {
                Ok((y - x).exp() / self.alpha() + (-x).exp() * self.c(y)?)
            };
        }
        if y <= PLAIN_MAX {
            Ok((-x).exp() * self.fam.eval(y, 2)? - self.fam.eval(y - x, 1)?)
        } else {
            Ok((-x).exp() * self.c(y)? - self.b(y - x)?)
        }
    }

    /// `C(y) = F''(y) - e^y/α`, y > 0.
    fn c(&self, y: f64) -> Result<f64> {
        if y <= 1.0 {
            let a = self.alpha();
            Ok(self.fam.fsecond_scaled(y)? * y.powf(a - 2.0) - y.exp() / a)
        } else {
            self.fam.remainder(y, Remainder::C)
        }
    }

    /// `∫_0^x B(x-y) h(y) dy`
    fn conv_b(&self, h: &dyn Fn(f64) -> Result<f64>, x: f64, cfg: &QuadratureConfig) -> Result<f64> {
        if x == 0.0 {
            return Ok(0.0);
        }
        let a = self.alpha();
        let split = (x - 1.0).max(0.0);
        // near y = x: B(d) = d^{α-1} E_{α,α}(d^α) - e^d/α
        let near_f = quad::integrate_right_weighted(
            |y, d| Ok(self.fam.fprime_scaled(d)? * h(y)?),
            split,
            x,
            a - 1.0,
            cfg,
        )?;
        let near_e = quad::integrate(|y| Ok((x - y).exp() * h(y)?), split, x, cfg)?;
        let mut v = near_f.value - near_e.value / a;
        if split > 0.0 {
            v += quad::integrate(|y| Ok(self.b(x - y)? * h(y)?), 0.0, split, cfg)?.value;
        }
        Ok(v)
    }

    /// `∫_0^∞ B(d) h(x+d) dd`
    fn shifted_b(&self, h: &dyn Fn(f64) -> Result<f64>, x: f64, cfg: &QuadratureConfig) -> Result<f64> {
        let a = self.alpha();
        let near_f =
            quad::integrate_left_weighted(|d| Ok(self.fam.fprime_scaled(d)? * h(x + d)?), 0.0, 1.0, a - 1.0, cfg)?;
        let near_e = quad::integrate(|d| Ok(d.exp() * h(x + d)?), 0.0, 1.0, cfg)?;
        let far = quad::integrate_to_infinity(
            |d| {
                let v = h(x + d)?;
                if v == 0.0 {
                    return Ok(0.0);
                }
                Ok(self.b(d)? * v)
            },
            1.0,
            cfg,
        )?;
        Ok(near_f.value - near_e.value / a + far.value)
    }

    /// `∫_0^∞ e^{-w} h(x+w) dw` through `u = e^{-w}`.
    fn exp_tail(h: &dyn Fn(f64) -> Result<f64>, x: f64, cfg: &QuadratureConfig) -> Result<f64> {
        Ok(quad::integrate(
            |u| {
                if u == 0.0 {
                    return Ok(0.0);
                }
                h(x - u.ln())
            },
            0.0,
            1.0,
            cfg,
        )?
        .value)
    }

    /// `λ F^{(m)}(x) + κ F'(x) - (F' ⋆ h)(x)` under `λ + κ = λ_h`, in the form
    /// `λ R_m(x) + κ B(x) - ∫_0^x B(x-y)h(y)dy + (1/α)∫_0^∞ e^{-w}h(x+w)dw`
    /// where the exponential parts have cancelled analytically.
    fn hat_form(
        &self,
        h: &dyn Fn(f64) -> Result<f64>,
        lambda: f64,
        kappa: f64,
        m: usize,
        x: f64,
        cfg: &QuadratureConfig,
    ) -> Result<f64> {
        let rm = match m {
            0 => self.fam.remainder(x, Remainder::A)?,
            1 => self.b(x)?,
            _ => self.c(x)?,
        };
        let kb = if kappa != 0.0 { kappa * self.b(x)? } else { 0.0 };
        Ok(lambda * rm + kb - self.conv_b(h, x, cfg)? + Self::exp_tail(h, x, cfg)? / self.alpha())
    }

    /// `Û₁f(x) = λ_f F(x) - (F' ⋆ f)(x)`
    pub fn uhat1_apply(&self, f: &SmoothTestFunction, x: f64, cfg: &QuadratureConfig) -> Result<f64> {
        nonneg("x", x)?;
        let lf = lambda_f(&|y| f.eval_f(y), cfg)?;
        self.hat_form(&|y| f.eval_f(y), lf, 0.0, 0, x, cfg)
    }

    /// `Û₁f` with its two derivatives as a test function; `(Û₁f)'(0) = 0`.
    pub fn uhat1_transform(&self, f: &SmoothTestFunction, cfg: &QuadratureConfig) -> Result<SmoothTestFunction> {
        let l0 = lambda_f(&|y| f.eval_f(y), cfg)?;
        let l1 = lambda_f(&|y| f.eval_f1(y), cfg)?;
        let fp0 = f.eval_f1(0.0)?;
        let cfg = *cfg;
        let mk = |k: u8| -> RealFn {
            let r = self.clone();
            let f = f.clone();
            Arc::new(move |x| match k {
                0 => r.hat_form(&|y| f.eval_f(y), l0, 0.0, 0, x, &cfg),
                1 => r.hat_form(&|y| f.eval_f1(y), l1, 0.0, 1, x, &cfg),
                _ => {
                    if x == 0.0 {
                        return Err(Error::Domain("second derivative is singular at 0".into()));
                    }
                    r.hat_form(&|y| f.eval_f2(y), l1, -fp0, 2, x, &cfg)
                }
            })
        };
        let mut g = SmoothTestFunction::new(format!("U1hat[{}]", f.name), mk(0), mk(1), mk(2), 0.0);
        g.origin_exponent_f2 = self.alpha() - 2.0;
        Ok(g)
    }

    /// `μ_f = ∫_0^∞ C(y) f(y) dy`
    fn mu(&self, h: &dyn Fn(f64) -> Result<f64>, cfg: &QuadratureConfig) -> Result<f64> {
        let a = self.alpha();
        let head = quad::integrate_left_weighted(|y| Ok(self.fam.fsecond_scaled(y)? * h(y)?), 0.0, 1.0, a - 2.0, cfg)?;
        let head_e = quad::integrate(|y| Ok(y.exp() * h(y)?), 0.0, 1.0, cfg)?;
        let tail = quad::integrate_to_infinity(
            |y| {
                let v = h(y)?;
                if v == 0.0 {
                    return Ok(0.0);
                }
                Ok(self.c(y)? * v)
            },
            1.0,
            cfg,
        )?;
        Ok(head.value - head_e.value / a + tail.value)
    }

    /// `J(x) = (1/α) ∫_0^x e^{y-x} f(y) dy`
    fn j(&self, h: &dyn Fn(f64) -> Result<f64>, x: f64, cfg: &QuadratureConfig) -> Result<f64> {
        if x == 0.0 {
            return Ok(0.0);
        }
        Ok(quad::integrate(|y| Ok((y - x).exp() * h(y)?), 0.0, x, cfg)?.value / self.alpha())
    }

    /// `U₁f(x) = e^{-x} μ_f + (1/α)∫_0^x e^{y-x}f(y)dy - ∫_0^∞ B(d) f(x+d) dd`
    pub fn u1_apply(&self, f: &SmoothTestFunction, x: f64, cfg: &QuadratureConfig) -> Result<f64> {
        nonneg("x", x)?;
        let mu = self.mu(&|y| f.eval_f(y), cfg)?;
        self.u1_with_mu(f, mu, x, 0, cfg)
    }

    fn u1_with_mu(&self, f: &SmoothTestFunction, mu: f64, x: f64, k: u8, cfg: &QuadratureConfig) -> Result<f64> {
        let h0 = |y| f.eval_f(y);
        let a = self.alpha();
        let e = (-x).exp() * mu;
        let j = self.j(&h0, x, cfg)?;
        Ok(match k {
            0 => e + j - self.shifted_b(&h0, x, cfg)?,
            1 => -e + f.eval_f(x)? / a - j - self.shifted_b(&|y| f.eval_f1(y), x, cfg)?,
            _ => e + (f.eval_f1(x)? - f.eval_f(x)?) / a + j - self.shifted_b(&|y| f.eval_f2(y), x, cfg)?,
        })
    }

    /// `U₁f` with its two derivatives as a test function.
    pub fn u1_transform(&self, f: &SmoothTestFunction, cfg: &QuadratureConfig) -> Result<SmoothTestFunction> {
        let mu = self.mu(&|y| f.eval_f(y), cfg)?;
        let cfg = *cfg;
        let mk = |k: u8| -> RealFn {
            let r = self.clone();
            let f = f.clone();
            Arc::new(move |x| r.u1_with_mu(&f, mu, x, k, &cfg))
        };
        Ok(SmoothTestFunction::new(
            format!("U1[{}]", f.name),
            mk(0),
            mk(1),
            mk(2),
            f.decay_gamma,
        ))
    }
}

impl Resolvent {
    /// `∫_0^∞ û¹(x, y) dy`
    pub fn uhat1_mass(&self, x: f64, cfg: &QuadratureConfig) -> Result<f64> {
        let mut m = quad::integrate_to_infinity(|y| self.uhat1_density(x, y), x, cfg)?.value;
        if x > 0.0 {
            m += quad::integrate(|y| self.uhat1_density(x, y), 0.0, x, cfg)?.value;
        }
        Ok(m)
    }

    /// `∫_0^∞ u¹(x, y) dy`, with the `y^{α-2}` origin singularity on its own panel.
    pub fn u1_mass(&self, x: f64, cfg: &QuadratureConfig) -> Result<f64> {
        let a = self.alpha();
        let split = if x > 0.0 { x } else { 1.0 };
        let head = quad::integrate_left_weighted(
            |y| Ok(self.u1_density(x, y)? * y.powf(2.0 - a)),
            0.0,
            split,
            a - 2.0,
            cfg,
        )?;
        Ok(head.value + quad::integrate_to_infinity(|y| self.u1_density(x, y), split, cfg)?.value)
    }
}

/// `λ_f = ∫_0^∞ e^{-y} f(y) dy` through `u = e^{-y}`.
pub fn lambda_f(f: &dyn Fn(f64) -> Result<f64>, cfg: &QuadratureConfig) -> Result<f64> {
    Resolvent::exp_tail(f, 0.0, cfg)
}

pub fn uhat1_density(alpha: StabilityIndex, x: f64, y: f64) -> Result<ResolventDensityPoint> {
    Ok(ResolventDensityPoint {
        x,
        y,
        value: Resolvent::new(alpha).uhat1_density(x, y)?,
        side: Side::Hat,
    })
}

pub fn u1_density(alpha: StabilityIndex, x: f64, y: f64) -> Result<ResolventDensityPoint> {
    Ok(ResolventDensityPoint {
        x,
        y,
        value: Resolvent::new(alpha).u1_density(x, y)?,
        side: Side::Plain,
    })
}

pub fn uhat1_apply(f: &SmoothTestFunction, alpha: StabilityIndex, x: f64, cfg: &QuadratureConfig) -> Result<f64> {
    Resolvent::new(alpha).uhat1_apply(f, x, cfg)
}

pub fn u1_apply(f: &SmoothTestFunction, alpha: StabilityIndex, x: f64, cfg: &QuadratureConfig) -> Result<f64> {
    Resolvent::new(alpha).u1_apply(f, x, cfg)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RepPoint {
    pub y: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub laplace: f64,
}

/// Both sides of the entrance formula at y:
/// `α y^{α-2} E[e^{-y^α I_-}] / (Γ(1-1/α) E[I_-^{1/α-1}])` and `F''(y) - F'(y)`.
pub fn rep_pointwise(alpha: StabilityIndex, y: f64, cfg: &QuadratureConfig) -> Result<RepPoint> {
    rep_pointwise_with(&IminusLaw::new(alpha)?, y, cfg)
}

/// [`rep_pointwise`] reusing a prepared law of `I_-`.
pub fn rep_pointwise_with(law: &IminusLaw, y: f64, cfg: &QuadratureConfig) -> Result<RepPoint> {
    if !(y > 0.0 && y.is_finite()) {
        return Err(Error::Domain(format!("y = {y} must be positive")));
    }
    let a = law.alpha();
    let alpha = StabilityIndex::new(a)?;
    let lap = law.laplace(y.powf(a), cfg)?;
    let norm = iminus_moment(alpha, 1.0 / a - 1.0)?;
    let lhs = a * y.powf(a - 2.0) * lap * rgamma(1.0 - 1.0 / a) / norm;
    let r = Resolvent::new(alpha);
    let rhs = r.u1_density(0.0, y)?;
    Ok(RepPoint {
        y,
        lhs,
        rhs,
        laplace: lap,
    })
}

/// Slope of g at 0 from centered differences at x = 1e-4, 4e-4, 1.6e-3
/// (step x/100), extrapolated through the model `c x^{α-1} + d + e x` that
/// resolvent-applied functions follow near the origin. Returns `d`.
pub fn boundary_slope(g: &dyn Fn(f64) -> Result<f64>, alpha: f64) -> Result<f64> {
    let xs = [1e-4, 4e-4, 1.6e-3];
    let mut rows = [[0.0; 4]; 3];
    for (row, &x) in rows.iter_mut().zip(&xs) {
        let h = x / 100.0;
        let s = (g(x + h)? - g(x - h)?) / (2.0 * h);
        *row = [x.powf(alpha - 1.0), 1.0, x, s];
    }
    // Cramer's rule on the 3x3 system for (c, d, e)
    let det = |m: [[f64; 3]; 3]| {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    };
    let a: [[f64; 3]; 3] = std::array::from_fn(|i| [rows[i][0], rows[i][1], rows[i][2]]);
    let ad: [[f64; 3]; 3] = std::array::from_fn(|i| [rows[i][0], rows[i][3], rows[i][2]]);
    Ok(det(ad) / det(a))
}
