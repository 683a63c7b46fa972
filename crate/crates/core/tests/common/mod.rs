#![allow(dead_code)]

use rug::ops::Pow;
use rug::Float;

pub const PREC: u32 = 256;

pub fn mp(x: f64) -> Float {
    Float::with_val(PREC, x)
}

/// E_α^{(m)}(x) by the differentiated power series in 256-bit arithmetic.
pub fn mp_ml(alpha: f64, x: f64, m: u32) -> f64 {
    let a = mp(alpha);
    let mut sum = mp(0.0);
    for n in m..3000 {
        let mut c = mp(1.0);
        for j in 0..m {
            c *= n - j;
        }
        let g = (Float::with_val(PREC, &a * n) + 1u32).gamma();
        let t = Float::with_val(PREC, mp(x).pow(n - m) * c / g);
        sum += &t;
        if n > m + 10 && t < Float::with_val(PREC, &sum * 1e-70) {
            break;
        }
    }
    sum.to_f64()
}

/// F_α^{(m)}(x) = Σ_n x^{αn-m}/Γ(αn-m+1) in 256-bit arithmetic (x > 0).
pub fn mp_f(alpha: f64, x: f64, m: u32) -> Float {
    let a = mp(alpha);
    let lx = mp(x).ln();
    let mut sum = mp(0.0);
    for n in 0..5000u32 {
        let q = Float::with_val(PREC, &a * n) + (1.0 - f64::from(m));
        if q <= 0 && q.is_integer() {
            continue;
        }
        let e = Float::with_val(PREC, &a * n) - m;
        let t = Float::with_val(PREC, (e * &lx).exp() / q.gamma());
        sum += &t;
        if f64::from(n) * alpha > 2.0 * x + 60.0 && t.clone().abs() < Float::with_val(PREC, &sum * 1e-70) {
            break;
        }
    }
    sum
}

/// F^{(m)}(x) - e^x/α in 256-bit arithmetic.
pub fn mp_remainder(alpha: f64, x: f64, m: u32) -> f64 {
    let e = Float::with_val(PREC, mp(x).exp() / alpha);
    Float::with_val(PREC, mp_f(alpha, x, m) - e).to_f64()
}

pub fn mp_gamma(x: f64) -> f64 {
    mp(x).gamma().to_f64()
}

pub fn rel(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        a.abs()
    } else {
        ((a - b) / b).abs()
    }
}
