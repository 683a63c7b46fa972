//! Extended-precision term-wise series for `F_α` and its derivatives.
//!
//! At moderate x the derivatives of `F_α - F_α'` are many orders of magnitude
//! below the individual series terms, so f64 summation loses every digit.

use rug::ops::Pow;
use rug::Float;

use crate::error::{Error, Result};

/// Multiprecision evaluator of `F_α^{(m)}(x) = Σ_n x^{αn-m}/Γ(αn-m+1)`.
#[derive(Debug, Clone)]
pub struct MpFamily {
    alpha: f64,
    prec: u32,
    // 1/Γ(αn + 1)
    rg: Vec<Float>,
}

impl MpFamily {
    pub fn new(alpha: f64, prec: u32) -> Self {
        MpFamily {
            alpha,
            prec,
            rg: Vec::new(),
        }
    }

    fn rg(&mut self, n: usize) -> Float {
        while self.rg.len() <= n {
            let k = self.rg.len();
            let z = Float::with_val(self.prec, self.alpha) * k as u32 + 1u32;
            self.rg.push(z.gamma().recip());
        }
        self.rg[n].clone()
    }

    /// `(F(x), F'(x), ..., F^{(n_max)}(x))` at x > 0.
    pub fn derivatives(&mut self, x: f64, n_max: usize) -> Result<Vec<Float>> {
        if !(x > 0.0) {
            return Err(Error::Domain(format!("x = {x} must be positive")));
        }
        let prec = self.prec;
        let a = Float::with_val(prec, self.alpha);
        let xf = Float::with_val(prec, x);
        let lx = xf.clone().ln();
        let mut acc: Vec<Float> = (0..=n_max).map(|_| Float::with_val(prec, 0)).collect();
        let tiny = Float::with_val(prec, 2).pow(-(prec as i32));
        for n in 0..100_000usize {
            let an = Float::with_val(prec, &a * n as u32);
            // x^{αn}
            let mut p = Float::with_val(prec, &an * &lx).exp();
            let mut r = self.rg(n);
            let mut big = Float::with_val(prec, 0);
            for (m, slot) in acc.iter_mut().enumerate() {
                if m > 0 {
                    // 1/Γ(q) = q/Γ(q+1) with q = αn + 1 - m
                    let q = Float::with_val(prec, &an + 1u32) - m as u32;
                    r *= q;
                    p /= &xf;
                }
                let t = Float::with_val(prec, &r * &p);
                *slot += &t;
                let ta = t.abs();
                if ta > big {
                    big = ta;
                }
            }
            let past_peak = self.alpha * n as f64 > 2.0 * x + n_max as f64 + 20.0;
            if past_peak {
                let scale = acc.iter().map(|v| v.clone().abs()).fold(Float::with_val(prec, 1), |m, v| if v > m { v } else { m });
                if big < Float::with_val(prec, &tiny * &scale) {
                    return Ok(acc);
                }
            }
        }
        Err(Error::Series {
            partial: acc[0].to_f64(),
            bound: f64::NAN,
            terms: 100_000,
        })
    }
}

/// `(F - F')^{(m)}(x)` for m = 0..=n_max, rounded to f64.
pub fn f_minus_fprime_derivatives(alpha: f64, x: f64, n_max: usize) -> Result<Vec<f64>> {
    let mut fam = MpFamily::new(alpha, 256);
    let d = fam.derivatives(x, n_max + 1)?;
    Ok((0..=n_max)
        .map(|m| Float::with_val(256, &d[m] - &d[m + 1]).to_f64())
        .collect())
}

/// Multiprecision `E_α` and `E_α'` on the whole real line.
#[derive(Debug, Clone)]
pub struct MpMittag {
    prec: u32,
    // 1/Γ(αn + 1)
    rg: Vec<Float>,
    alpha: f64,
}

impl MpMittag {
    pub fn new(alpha: f64, prec: u32) -> Self {
        MpMittag {
            prec,
            rg: Vec::new(),
            alpha,
        }
    }

    fn rg(&mut self, n: usize) -> &Float {
        while self.rg.len() <= n {
            let k = self.rg.len();
            let z = Float::with_val(self.prec, self.alpha) * k as u32 + 1u32;
            self.rg.push(z.gamma().recip());
        }
        &self.rg[n]
    }

    /// `(E_α(x), E_α'(x))`
    pub fn eval(&mut self, x: &Float) -> Result<(Float, Float)> {
        let prec = self.prec;
        let mut e = Float::with_val(prec, 0);
        let mut d = Float::with_val(prec, 0);
        // x^{n-1}
        let mut p_prev = Float::with_val(prec, 0);
        let mut p = Float::with_val(prec, 1);
        let tiny = Float::with_val(prec, 2).pow(-(prec as i32));
        for n in 0..100_000usize {
            let r = self.rg(n).clone();
            let t = Float::with_val(prec, &p * &r);
            e += &t;
            if n > 0 {
                d += Float::with_val(prec, &p_prev * &r) * n as u32;
            }
            if n as f64 * self.alpha > 2.0 * x.to_f64().abs().powf(1.0 / self.alpha) + 20.0
                && t.clone().abs() < Float::with_val(prec, e.clone().abs() * &tiny)
            {
                return Ok((e, d));
            }
            p_prev = p.clone();
            p *= x;
        }
        Err(Error::Series {
            partial: e.to_f64(),
            bound: f64::NAN,
            terms: 100_000,
        })
    }

    /// `exp(-x E_α'(x)/E_α(x))`
    pub fn exp_ratio(&mut self, x: &Float) -> Result<Float> {
        let (e, d) = self.eval(x)?;
        Ok(Float::with_val(self.prec, -(Float::with_val(self.prec, x * d) / e)).exp())
    }
}

/// `d^n/dx^n` of `exp(-x E_α'(x)/E_α(x))` for n = 0..=n_max at x > 0, by
/// central differences in 256-bit arithmetic with Richardson extrapolation
/// in h² until successive diagonal entries agree to `1e-14` relative.
pub fn exp_ratio_derivatives(alpha: f64, x: f64, n_max: usize) -> Result<Vec<f64>> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::Domain(format!("x = {x} must be positive")));
    }
    let prec = 256;
    let mut ml = MpMittag::new(alpha, prec);
    let xf = Float::with_val(prec, x);
    let mut out = vec![ml.exp_ratio(&xf)?.to_f64()];
    for n in 1..=n_max {
        // stencil stays inside (0, 2x)
        let mut h = (x / n as f64).min(0.25);
        let mut table: Vec<Vec<Float>> = Vec::new();
        let mut best = None;
        for level in 0..10 {
            let hf = Float::with_val(prec, h);
            let mut acc = Float::with_val(prec, 0);
            let mut binom = Float::with_val(prec, 1);
            for k in 0..=n {
                let off = Float::with_val(prec, n as f64 / 2.0 - k as f64) * &hf;
                let g = ml.exp_ratio(&Float::with_val(prec, &xf + &off))?;
                let t = Float::with_val(prec, &g * &binom);
                if k % 2 == 0 {
                    acc += t;
                } else {
                    acc -= t;
                }
                binom *= (n - k) as u32;
                binom /= (k + 1) as u32;
            }
            let mut row = vec![Float::with_val(prec, acc / hf.pow(n as u32))];
            let mut four = Float::with_val(prec, 1);
            for j in 1..=level {
                four *= 4u32;
                let prev = &table[level - 1][j - 1];
                let cur = &row[j - 1];
                let num = Float::with_val(prec, cur * &four) - prev;
                let den = Float::with_val(prec, &four - 1u32);
                row.push(Float::with_val(prec, num / den));
            }
            if level > 0 {
                let a = row[level].to_f64();
                let b = table[level - 1][level - 1].to_f64();
                if (a - b).abs() <= 1e-14 * a.abs().max(1e-300) {
                    best = Some(a);
                    table.push(row);
                    break;
                }
            }
            table.push(row);
            h /= 2.0;
        }
        match best {
            Some(v) => out.push(v),
            None => {
                let last = table.last().and_then(|r| r.last()).map(|v| v.to_f64()).unwrap_or(f64::NAN);
                return Err(Error::Series {
                    partial: last,
                    bound: f64::NAN,
                    terms: table.len(),
                });
            }
        }
    }
    Ok(out)
}
