//! Globally adaptive Gauss-Kronrod (G10/K21) quadrature with a few analytic
//! substitutions for algebraic endpoint singularities and semi-infinite ranges.

use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
    /// Truncation point for improper integrals.
    pub tail_cutoff: f64,
    /// Fraction of the range given to the panel next to a weak singularity.
    pub singular_split: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            rel_tol: 1e-8,
            abs_tol: 1e-13,
            max_subdivisions: 1 << 10,
            tail_cutoff: 1e3,
            singular_split: 0.5,
        }
    }
}

impl QuadratureConfig {
    /// Looser settings for composite (nested) computations.
    pub fn composite() -> Self {
        QuadratureConfig {
            rel_tol: 1e-6,
            ..Default::default()
        }
    }

    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn with_abs_tol(mut self, abs_tol: f64) -> Self {
        self.abs_tol = abs_tol;
        self
    }

    /// Configuration for an inner integral nested in an outer one: ten times tighter.
    pub fn inner(&self) -> Self {
        QuadratureConfig {
            rel_tol: self.rel_tol / 10.0,
            abs_tol: self.abs_tol / 10.0,
            ..*self
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.rel_tol > 0.0
            && self.abs_tol > 0.0
            && self.max_subdivisions >= 8
            && self.tail_cutoff > 0.0
            && self.singular_split > 0.0
            && self.singular_split < 1.0;
        if ok {
            Ok(())
        } else {
            Err(Error::Domain(format!("invalid quadrature config {self:?}")))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub abs_err: f64,
    pub evals: usize,
}

const XGK: [f64; 11] = [
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077600525136030,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
];

// Gauss weights for the nodes XGK[1], XGK[3], ..., XGK[9].
const WG: [f64; 5] = [
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
];

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.err.total_cmp(&other.err)
    }
}

fn eval<F: FnMut(f64) -> Result<f64>>(f: &mut F, x: f64) -> Result<f64> {
    let v = f(x)?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFinite(x))
    }
}

/// One K21 rule on [a, b]: (value, error estimate, integral of |f|).
fn qk21<F: FnMut(f64) -> Result<f64>>(f: &mut F, a: f64, b: f64) -> Result<(f64, f64, f64)> {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = eval(f, c)?;
    let mut resk = fc * WGK[10];
    let mut resabs = resk.abs();
    let mut resg = 0.0;
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let dx = h * XGK[j];
        let f1 = eval(f, c - dx)?;
        let f2 = eval(f, c + dx)?;
        fv1[j] = f1;
        fv2[j] = f2;
        resk += WGK[j] * (f1 + f2);
        resabs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            resg += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * resk;
    let mut resasc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        resasc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = resk * h;
    let resabs = resabs * h.abs();
    let resasc = resasc * h.abs();
    let mut err = ((resk - resg) * h).abs();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * resabs);
    }
    Ok((value, err, resabs))
}

/// Integrates `f` over the union of the panels `[p[i], p[i+1]]`, refining
/// globally (largest error first) until the total error meets the tolerance.
pub fn integrate_panels<F>(mut f: F, points: &[f64], cfg: &QuadratureConfig) -> Result<Integral>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut heap = BinaryHeap::new();
    let mut total = 0.0;
    let mut total_err = 0.0;
    let mut total_abs = 0.0;
    let mut evals = 0;
    for w in points.windows(2) {
        if w[1] == w[0] {
            continue;
        }
        let (v, e, ab) = qk21(&mut f, w[0], w[1])?;
        evals += 21;
        total += v;
        total_err += e;
        total_abs += ab;
        heap.push(Segment {
            a: w[0],
            b: w[1],
            value: v,
            err: e,
        });
    }
    loop {
        let tol = cfg.abs_tol.max(cfg.rel_tol * total.abs());
        if total_err <= tol || total_err <= 50.0 * f64::EPSILON * total_abs {
            return Ok(Integral {
                value: total,
                abs_err: total_err,
                evals,
            });
        }
        if heap.len() >= cfg.max_subdivisions {
            break;
        }
        let seg = match heap.pop() {
            Some(s) => s,
            None => break,
        };
        let m = 0.5 * (seg.a + seg.b);
        if m <= seg.a.min(seg.b) || m >= seg.a.max(seg.b) {
            heap.push(seg);
            break;
        }
        let (v1, e1, _) = qk21(&mut f, seg.a, m)?;
        let (v2, e2, _) = qk21(&mut f, m, seg.b)?;
        evals += 42;
        total += v1 + v2 - seg.value;
        total_err += e1 + e2 - seg.err;
        heap.push(Segment {
            a: seg.a,
            b: m,
            value: v1,
            err: e1,
        });
        heap.push(Segment {
            a: m,
            b: seg.b,
            value: v2,
            err: e2,
        });
    }
    // Re-sum to shed accumulated rounding in the running totals.
    let value: f64 = heap.iter().map(|s| s.value).sum();
    let abs_err: f64 = heap.iter().map(|s| s.err).sum();
    let tol = cfg.abs_tol.max(cfg.rel_tol * value.abs());
    if abs_err <= tol {
        return Ok(Integral {
            value,
            abs_err,
            evals,
        });
    }
    Err(Error::Quadrature {
        value,
        abs_err,
        intervals: heap.len(),
    })
}

pub fn integrate<F>(f: F, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<Integral>
where
    F: FnMut(f64) -> Result<f64>,
{
    integrate_panels(f, &[a, b], cfg)
}

/// `∫_a^b (u-a)^beta phi(u) du` for beta > -1, via `w = (u-a)^(1+beta)`.
pub fn integrate_left_weighted<F>(
    mut phi: F,
    a: f64,
    b: f64,
    beta: f64,
    cfg: &QuadratureConfig,
) -> Result<Integral>
where
    F: FnMut(f64) -> Result<f64>,
{
    if beta <= -1.0 {
        return Err(Error::Domain(format!("endpoint weight exponent {beta} <= -1")));
    }
    let p = 1.0 + beta;
    let top = (b - a).powf(p);
    let r = integrate(|w: f64| phi(a + w.powf(1.0 / p)), 0.0, top, cfg)?;
    Ok(Integral {
        value: r.value / p,
        abs_err: r.abs_err / p,
        evals: r.evals,
    })
}

/// `∫_a^b (b-u)^beta phi(u) du` for beta > -1, via `w = (b-u)^(1+beta)`.
/// `phi` receives `(u, b - u)` so callers can avoid cancellation near `b`.
pub fn integrate_right_weighted<F>(
    mut phi: F,
    a: f64,
    b: f64,
    beta: f64,
    cfg: &QuadratureConfig,
) -> Result<Integral>
where
    F: FnMut(f64, f64) -> Result<f64>,
{
    if beta <= -1.0 {
        return Err(Error::Domain(format!("endpoint weight exponent {beta} <= -1")));
    }
    let p = 1.0 + beta;
    let top = (b - a).powf(p);
    let r = integrate(
        |w: f64| {
            let d = w.powf(1.0 / p);
            phi(b - d, d)
        },
        0.0,
        top,
        cfg,
    )?;
    Ok(Integral {
        value: r.value / p,
        abs_err: r.abs_err / p,
        evals: r.evals,
    })
}

/// `∫_a^∞ f(t) dt` through `t = a + (1-s)/s`.
pub fn integrate_to_infinity<F>(mut f: F, a: f64, cfg: &QuadratureConfig) -> Result<Integral>
where
    F: FnMut(f64) -> Result<f64>,
{
    integrate(
        |s: f64| {
            let t = a + (1.0 - s) / s;
            if t.is_infinite() {
                return Ok(0.0);
            }
            Ok(f(t)? / (s * s))
        },
        0.0,
        1.0,
        cfg,
    )
}

/// Adds two integrals, combining error estimates.
pub fn sum(parts: &[Integral]) -> Integral {
    parts.iter().fold(
        Integral {
            value: 0.0,
            abs_err: 0.0,
            evals: 0,
        },
        |acc, p| Integral {
            value: acc.value + p.value,
            abs_err: acc.abs_err + p.abs_err,
            evals: acc.evals + p.evals,
        },
    )
}
