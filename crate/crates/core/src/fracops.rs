//! Riemann-Liouville and Caputo fractional derivatives on the half-line and the
//! generators of the reflected stable processes built from them.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gamma::{gamma, rgamma};
use crate::quad::{self, Integral, QuadratureConfig};
use crate::specfun::{GeneralIndex, StabilityIndex};

pub type RealFn = Arc<dyn Fn(f64) -> Result<f64> + Send + Sync>;

/// A function on [0, ∞) with analytic first and second derivatives plus the
/// metadata that certifies membership in the domain D.
#[derive(Clone)]
pub struct SmoothTestFunction {
    pub name: String,
    f: RealFn,
    f1: RealFn,
    f2: RealFn,
    /// Supremum exponent γ with x^γ (|f| + |f''|) → 0.
    pub decay_gamma: f64,
    pub fprime0_is_zero: bool,
    /// f' behaves like u^σ at the origin (0 when bounded).
    pub origin_exponent_f1: f64,
    /// f'' behaves like u^σ at the origin (0 when bounded).
    pub origin_exponent_f2: f64,
    /// f grows like t^p at infinity (0 when bounded).
    pub growth: f64,
}

impl fmt::Debug for SmoothTestFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SmoothTestFunction")
            .field("name", &self.name)
            .field("decay_gamma", &self.decay_gamma)
            .field("fprime0_is_zero", &self.fprime0_is_zero)
            .finish()
    }
}

fn arc<F: Fn(f64) -> f64 + Send + Sync + 'static>(f: F) -> RealFn {
    Arc::new(move |x| Ok(f(x)))
}

impl SmoothTestFunction {
    pub fn new(name: impl Into<String>, f: RealFn, f1: RealFn, f2: RealFn, decay_gamma: f64) -> Self {
        let fprime0_is_zero = matches!(f1(0.0), Ok(v) if v.abs() <= 1e-12);
        SmoothTestFunction {
            name: name.into(),
            f,
            f1,
            f2,
            decay_gamma,
            fprime0_is_zero,
            origin_exponent_f1: 0.0,
            origin_exponent_f2: 0.0,
            growth: 0.0,
        }
    }

    /// Builds from plain closures.
    pub fn from_fns<F, F1, F2>(name: &str, f: F, f1: F1, f2: F2, decay_gamma: f64) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
        F1: Fn(f64) -> f64 + Send + Sync + 'static,
        F2: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self::new(name, arc(f), arc(f1), arc(f2), decay_gamma)
    }

    pub fn with_origin_exponents(mut self, f1: f64, f2: f64) -> Self {
        self.origin_exponent_f1 = f1;
        self.origin_exponent_f2 = f2;
        self
    }

    pub fn with_growth(mut self, growth: f64) -> Self {
        self.growth = growth;
        self
    }

    pub fn eval_f(&self, x: f64) -> Result<f64> {
        (self.f)(x)
    }

    pub fn eval_f1(&self, x: f64) -> Result<f64> {
        (self.f1)(x)
    }

    pub fn eval_f2(&self, x: f64) -> Result<f64> {
        (self.f2)(x)
    }

    /// `g = f'` as a test function; its second derivative is not available.
    pub fn first_derivative(&self) -> Self {
        let name = format!("d/dx {}", self.name);
        let unavailable: RealFn = Arc::new(|_| Err(Error::Unsupported("third derivative".into())));
        let mut g = SmoothTestFunction::new(name, self.f1.clone(), self.f2.clone(), unavailable, self.decay_gamma);
        g.origin_exponent_f1 = self.origin_exponent_f2;
        g.origin_exponent_f2 = f64::NAN;
        g
    }

    /// Σ c_i f_i, with the weakest certificates of the parts.
    pub fn linear_combination(terms: &[(f64, SmoothTestFunction)]) -> Self {
        let parts: Arc<Vec<(f64, SmoothTestFunction)>> = Arc::new(terms.to_vec());
        let mk = |k: usize| -> RealFn {
            let parts = parts.clone();
            Arc::new(move |x| {
                let mut s = 0.0;
                for (c, g) in parts.iter() {
                    let v = match k {
                        0 => g.eval_f(x)?,
                        1 => g.eval_f1(x)?,
                        _ => g.eval_f2(x)?,
                    };
                    s += c * v;
                }
                Ok(s)
            })
        };
        let name = terms
            .iter()
            .map(|(c, g)| format!("{c}*{}", g.name))
            .collect::<Vec<_>>()
            .join(" + ");
        let decay = terms.iter().map(|(_, g)| g.decay_gamma).fold(f64::INFINITY, f64::min);
        let mut h = SmoothTestFunction::new(name, mk(0), mk(1), mk(2), decay);
        h.origin_exponent_f1 = terms.iter().map(|(_, g)| g.origin_exponent_f1).fold(0.0, f64::min);
        h.origin_exponent_f2 = terms.iter().map(|(_, g)| g.origin_exponent_f2).fold(0.0, f64::min);
        h.growth = terms.iter().map(|(_, g)| g.growth).fold(0.0, f64::max);
        h
    }

    /// The three construction invariants: f'(0) flag, sampled decay, and
    /// finite-difference agreement of the derivative callables.
    pub fn validate(&self) -> Result<()> {
        let d = self.decay_diagnostic()?;
        if !d.0 {
            return Err(Error::Precondition(format!("{}: sampled decay check failed ({})", self.name, d.1)));
        }
        if self.fprime0_is_zero && self.eval_f1(0.0)?.abs() > 1e-12 {
            return Err(Error::Precondition(format!("{}: f'(0) is not zero", self.name)));
        }
        for &x in &[0.3, 0.7, 1.1, 1.9, 3.2] {
            let h1 = 1e-5;
            let fd1 = (self.eval_f(x + h1)? - self.eval_f(x - h1)?) / (2.0 * h1);
            let h2 = 1e-4;
            let fd2 = (self.eval_f(x + h2)? - 2.0 * self.eval_f(x)? + self.eval_f(x - h2)?) / (h2 * h2);
            let d1 = self.eval_f1(x)?;
            let d2 = self.eval_f2(x)?;
            if (fd1 - d1).abs() > 1e-6 * d1.abs().max(1.0) || (fd2 - d2).abs() > 1e-6 * d2.abs().max(1.0) {
                return Err(Error::Precondition(format!(
                    "{}: derivative callables disagree with finite differences at x = {x}",
                    self.name
                )));
            }
        }
        Ok(())
    }

    /// Envelope x^{γ-1}(|f| + |f''|) at x = 10², 10³, 10⁴ must be non-increasing and
    /// at most 10⁻³ at the last point.
    fn decay_diagnostic(&self) -> Result<(bool, String)> {
        let g = self.decay_gamma - 1.0;
        let mut env = Vec::new();
        for &x in &[1e2, 1e3, 1e4] {
            let v: f64 = self.eval_f(x)?.abs() + self.eval_f2(x)?.abs();
            env.push(if v == 0.0 { 0.0 } else { (g * x.ln() + v.ln()).exp() });
        }
        let ok = env.iter().all(|v| v.is_finite()) && env[1] <= env[0] && env[2] <= env[1] && env[2] <= 1e-3;
        Ok((ok, format!("envelope {env:?}")))
    }
}

/// `e^{-x²}`
pub fn gauss() -> SmoothTestFunction {
    SmoothTestFunction::from_fns(
        "gauss",
        |x| (-x * x).exp(),
        |x| -2.0 * x * (-x * x).exp(),
        |x| (4.0 * x * x - 2.0) * (-x * x).exp(),
        50.0,
    )
}

/// `(1+x²)^{-1}`
pub fn cauchy2() -> SmoothTestFunction {
    SmoothTestFunction::from_fns(
        "cauchy2",
        |x| 1.0 / (1.0 + x * x),
        |x| -2.0 * x / (1.0 + x * x).powi(2),
        |x| (6.0 * x * x - 2.0) / (1.0 + x * x).powi(3),
        2.0,
    )
}

/// `x² e^{-x}`
pub fn x2exp() -> SmoothTestFunction {
    SmoothTestFunction::from_fns(
        "x2exp",
        |x| x * x * (-x).exp(),
        |x| (2.0 * x - x * x) * (-x).exp(),
        |x| (2.0 - 4.0 * x + x * x) * (-x).exp(),
        50.0,
    )
}

/// `e^{-λx}`
pub fn exp_decay(lambda: f64) -> SmoothTestFunction {
    SmoothTestFunction::from_fns(
        &format!("exp(-{lambda}x)"),
        move |x| (-lambda * x).exp(),
        move |x| -lambda * (-lambda * x).exp(),
        move |x| lambda * lambda * (-lambda * x).exp(),
        50.0,
    )
}

/// Polynomial `c0 + c1 x + c2 x²` (no decay).
pub fn quadratic(c0: f64, c1: f64, c2: f64) -> SmoothTestFunction {
    let growth = if c2 != 0.0 {
        2.0
    } else if c1 != 0.0 {
        1.0
    } else {
        0.0
    };
    SmoothTestFunction::from_fns(
        &format!("{c0} + {c1}x + {c2}x^2"),
        move |x| c0 + x * (c1 + c2 * x),
        move |x| c1 + 2.0 * c2 * x,
        move |_| 2.0 * c2,
        if c0 == 0.0 && c1 == 0.0 && c2 == 0.0 { f64::INFINITY } else { 0.0 },
    )
    .with_growth(growth)
}

/// The built-in registry used by the command line.
pub fn builtin(name: &str) -> Option<SmoothTestFunction> {
    match name {
        "gauss" => Some(gauss()),
        "cauchy2" => Some(cauchy2()),
        "x2exp" => Some(x2exp()),
        _ => None,
    }
}

pub const BUILTIN_NAMES: [&str; 3] = ["gauss", "cauchy2", "x2exp"];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DomainDiagnostics {
    pub in_domain: bool,
    pub fprime0_is_zero: bool,
    pub decay_ok: bool,
    pub bounded_ok: bool,
    pub failed: Vec<String>,
}

/// Membership in D: f ∈ C²_b, f'(0) = 0, and decay exponent γ > 2 - α.
pub fn is_in_domain_d(f: &SmoothTestFunction, alpha: StabilityIndex) -> DomainDiagnostics {
    let a = alpha.alpha();
    let mut failed = Vec::new();
    let fprime0 = f.fprime0_is_zero && matches!(f.eval_f1(0.0), Ok(v) if v.abs() <= 1e-12);
    if !fprime0 {
        failed.push("f'(0) = 0".to_string());
    }
    let sampled = matches!(f.decay_diagnostic(), Ok((true, _)));
    let decay_ok = f.decay_gamma > 2.0 - a && sampled;
    if !decay_ok {
        failed.push(format!("decay exponent gamma = {} > 2 - alpha = {}", f.decay_gamma, 2.0 - a));
    }
    let mut bounded_ok = f.growth == 0.0;
    let mut x = 0.0;
    while bounded_ok && x <= 1e4 {
        let ok = [f.eval_f(x), f.eval_f1(x), f.eval_f2(x)]
            .iter()
            .all(|v| matches!(v, Ok(v) if v.is_finite() && v.abs() <= 1e6));
        bounded_ok &= ok;
        x = if x == 0.0 { 1e-3 } else { x * 1.37 };
    }
    if !bounded_ok {
        failed.push("f, f', f'' bounded".to_string());
    }
    DomainDiagnostics {
        in_domain: failed.is_empty(),
        fprime0_is_zero: fprime0,
        decay_ok,
        bounded_ok,
        failed,
    }
}

/// `∫_0^x h(u) (x-u)^ν du` with an optional `u^σ` behaviour of h at the origin.
fn left_convolution(
    h: &dyn Fn(f64) -> Result<f64>,
    sigma: f64,
    x: f64,
    nu: f64,
    cfg: &QuadratureConfig,
) -> Result<Integral> {
    let us = x * cfg.singular_split;
    let near = if sigma != 0.0 && sigma.is_finite() {
        quad::integrate_left_weighted(
            |u| Ok(h(u)? * u.powf(-sigma) * (x - u).powf(nu)),
            0.0,
            us,
            sigma,
            cfg,
        )?
    } else {
        quad::integrate(|u| Ok(h(u)? * (x - u).powf(nu)), 0.0, us, cfg)?
    };
    let far = quad::integrate_right_weighted(|u, _| h(u), us, x, nu, cfg)?;
    Ok(quad::sum(&[near, far]))
}

/// `∫_0^∞ u^ν h(x+u) du` truncated at an adaptive cutoff with an analytic tail bound.
fn right_convolution(
    h: &dyn Fn(f64) -> Result<f64>,
    sigma: f64,
    gamma_decay: f64,
    x: f64,
    nu: f64,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    if gamma_decay <= nu + 1.0 {
        return Err(Error::Precondition(format!(
            "decay exponent {gamma_decay} must exceed {} for the right-sided derivative",
            nu + 1.0
        )));
    }
    let head = if x == 0.0 && sigma != 0.0 && sigma.is_finite() {
        quad::integrate_left_weighted(|u| Ok(h(u)? * u.powf(-sigma)), 0.0, 1.0, nu + sigma, cfg)?
    } else {
        quad::integrate_left_weighted(|u| h(x + u), 0.0, 1.0, nu, cfg)?
    };
    let mut cutoff = cfg.tail_cutoff.max(1.0);
    loop {
        let body = quad::integrate(
            |s: f64| {
                let u = s.exp();
                Ok(u.powf(nu + 1.0) * h(x + u)?)
            },
            0.0,
            cutoff.ln(),
            cfg,
        )?;
        let value = head.value + body.value;
        // sup_{y ≥ x+T} y^γ |h(y)| sampled geometrically
        let mut sup: f64 = 0.0;
        let mut y = x + cutoff;
        for _ in 0..60 {
            let v = h(y)?.abs();
            if v > 0.0 {
                sup = sup.max((gamma_decay * y.ln() + v.ln()).exp());
            }
            y *= 2.0;
        }
        let bound = sup * cutoff.powf(nu + 1.0 - gamma_decay) / (gamma_decay - nu - 1.0);
        let tol = cfg.abs_tol.max(cfg.rel_tol * value.abs());
        if bound <= tol {
            return Ok(value);
        }
        if cutoff >= 1e12 {
            return Err(Error::Tail { bound, tol, cutoff });
        }
        cutoff *= 10.0;
    }
}

fn check_x(x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("x = {x} must be positive")))
    }
}

/// `ᶜD^α_+ f(x) = (1/Γ(2-α)) ∫_0^x f''(u)(x-u)^{1-α} du`
pub fn caputo(f: &SmoothTestFunction, alpha: StabilityIndex, x: f64, cfg: &QuadratureConfig) -> Result<f64> {
    cfg.validate()?;
    check_x(x)?;
    let a = alpha.alpha();
    let r = left_convolution(&|u| f.eval_f2(u), f.origin_exponent_f2, x, 1.0 - a, cfg)?;
    Ok(r.value * rgamma(2.0 - a))
}

/// `Δ^α_+ f = ᶜD^α_+ f + x^{1-α} f'(0)/Γ(2-α)`
pub fn delta_plus(f: &SmoothTestFunction, alpha: StabilityIndex, x: f64, cfg: &QuadratureConfig) -> Result<f64> {
    let c = caputo(f, alpha, x, cfg)?;
    if f.fprime0_is_zero {
        return Ok(c);
    }
    let a = alpha.alpha();
    Ok(c + x.powf(1.0 - a) * f.eval_f1(0.0)? * rgamma(2.0 - a))
}

/// `D^α_+ f = Δ^α_+ f + x^{-α} f(0)/Γ(1-α)`
pub fn rl_left_alpha(f: &SmoothTestFunction, alpha: StabilityIndex, x: f64, cfg: &QuadratureConfig) -> Result<f64> {
    let d = delta_plus(f, alpha, x, cfg)?;
    let a = alpha.alpha();
    Ok(d + x.powf(-a) * f.eval_f(0.0)? * rgamma(1.0 - a))
}

/// `D^{α-1}_+ g(x)` through its Caputo form plus the boundary term.
pub fn rl_left_alpha_minus1(
    g: &SmoothTestFunction,
    alpha: StabilityIndex,
    x: f64,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    cfg.validate()?;
    check_x(x)?;
    let a = alpha.alpha();
    let r = left_convolution(&|u| g.eval_f1(u), g.origin_exponent_f1, x, 1.0 - a, cfg)?;
    Ok((r.value + x.powf(1.0 - a) * g.eval_f(0.0)?) * rgamma(2.0 - a))
}

/// `D^α_- f(x) = (1/Γ(2-α)) ∫_0^∞ u^{1-α} f''(x+u) du`
pub fn rl_right(f: &SmoothTestFunction, alpha: StabilityIndex, x: f64, cfg: &QuadratureConfig) -> Result<f64> {
    cfg.validate()?;
    if !(x >= 0.0) {
        return Err(Error::Domain(format!("x = {x} must be nonnegative")));
    }
    let a = alpha.alpha();
    let v = right_convolution(
        &|y| f.eval_f2(y),
        f.origin_exponent_f2,
        f.decay_gamma,
        x,
        1.0 - a,
        cfg,
    )?;
    Ok(v * rgamma(2.0 - a))
}

/// Generator of the stable process reflected at its infimum, for a general
/// two-sided Lévy density: `Γ(-α)(c- D^α_+ f + c+ D^α_- f) + c- f(0)/(α x^α)`.
pub fn reflected_generator_general(
    f: &SmoothTestFunction,
    idx: GeneralIndex,
    x: f64,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    cfg.validate()?;
    check_x(x)?;
    let a = idx.alpha;
    if a == 1.0 {
        return Err(Error::Unsupported("alpha = 1".into()));
    }
    let (dplus, dminus) = if a > 1.0 {
        let si = StabilityIndex::new(a)?;
        let dp = if idx.c_minus != 0.0 { rl_left_alpha(f, si, x, cfg)? } else { 0.0 };
        let dm = if idx.c_plus != 0.0 { rl_right(f, si, x, cfg)? } else { 0.0 };
        (dp, dm)
    } else {
        let rg = rgamma(1.0 - a);
        let dp = if idx.c_minus != 0.0 {
            let r = left_convolution(&|u| f.eval_f1(u), f.origin_exponent_f1, x, -a, cfg)?;
            (f.eval_f(0.0)? * x.powf(-a) + r.value) * rg
        } else {
            0.0
        };
        let dm = if idx.c_plus != 0.0 {
            -rg * right_convolution(&|y| f.eval_f1(y), f.origin_exponent_f1, f.decay_gamma, x, -a, cfg)?
        } else {
            0.0
        };
        (dp, dm)
    };
    Ok(gamma(-a) * (idx.c_minus * dplus + idx.c_plus * dminus) + idx.c_minus * f.eval_f(0.0)? / (a * x.powf(a)))
}
