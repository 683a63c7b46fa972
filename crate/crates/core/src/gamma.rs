//! Gamma function helpers with an exact pole convention.
//!
//! Positive arguments go through the Lanczos evaluation in `statrs`; arguments
//! below 1/2 use the reflection formula with an argument-reduced `sin(pi x)`, so
//! that `rgamma` returns exact zeros at 0, -1, -2, ...

use std::f64::consts::PI;

use statrs::function::gamma as sg;

/// `sin(pi x)` with exact zeros at the integers.
pub fn sin_pi(x: f64) -> f64 {
    if !x.is_finite() {
        return f64::NAN;
    }
    let r = x - 2.0 * (x / 2.0).floor();
    // r in [0, 2)
    let (r, sign) = if r >= 1.0 { (r - 1.0, -1.0) } else { (r, 1.0) };
    if r == 0.0 {
        return 0.0;
    }
    let v = if r <= 0.25 {
        (PI * r).sin()
    } else if r <= 0.75 {
        (PI * (0.5 - r)).cos()
    } else {
        (PI * (1.0 - r)).sin()
    };
    sign * v
}

/// `cos(pi x)` with exact zeros at half-integers.
pub fn cos_pi(x: f64) -> f64 {
    sin_pi(x + 0.5)
}

fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.floor()
}

/// Gamma function. Poles return signed infinity (`+inf` at 0).
pub fn gamma(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if is_nonpositive_integer(x) {
        return f64::INFINITY;
    }
    if x >= 0.5 {
        if x > 171.7 {
            return f64::INFINITY;
        }
        if x == x.floor() && x <= 23.0 {
            return factorial(x as usize - 1);
        }
        if x > 3.0 {
            // Lanczos is most accurate near [1, 3]; recur upward from there.
            let n = (x - 2.0).floor();
            let mut y = x - n;
            let mut p = sg::gamma(y);
            while y < x - 0.5 {
                p *= y;
                y += 1.0;
            }
            return p;
        }
        sg::gamma(x)
    } else {
        PI / (sin_pi(x) * gamma(1.0 - x))
    }
}

/// Reciprocal Gamma function, exactly zero at the poles of Gamma.
pub fn rgamma(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if is_nonpositive_integer(x) {
        return 0.0;
    }
    if x >= 0.5 {
        if x > 170.0 {
            return (-sg::ln_gamma(x)).exp();
        }
        1.0 / gamma(x)
    } else {
        let s = sin_pi(x);
        if 1.0 - x > 170.0 {
            // |1/Gamma(x)| = |sin(pi x)| Gamma(1-x) / pi overflows; keep the sign.
            return s.signum() * f64::INFINITY;
        }
        s * gamma(1.0 - x) / PI
    }
}

/// `ln |Gamma(x)|`.
pub fn ln_gamma(x: f64) -> f64 {
    if is_nonpositive_integer(x) {
        return f64::INFINITY;
    }
    if x >= 0.5 {
        sg::ln_gamma(x)
    } else {
        PI.ln() - sin_pi(x).abs().ln() - sg::ln_gamma(1.0 - x)
    }
}

/// `Gamma(a) / Gamma(b)` for positive `a`, `b`, stable for large arguments.
pub fn gamma_ratio(a: f64, b: f64) -> f64 {
    if a > 0.0 && b > 0.0 && (a > 150.0 || b > 150.0) {
        (sg::ln_gamma(a) - sg::ln_gamma(b)).exp()
    } else {
        gamma(a) * rgamma(b)
    }
}

/// `sin(x)/x` without cancellation near zero.
pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 - x2 / 6.0 * (1.0 - x2 / 20.0)
    } else {
        x.sin() / x
    }
}
