use fracstable::gamma::{gamma, ln_gamma, rgamma};
use rug::Float;

fn mp_gamma(x: f64) -> f64 {
    Float::with_val(200, x).gamma().to_f64()
}

#[test]
fn gamma_matches_mpfr_to_1e13() {
    let mut worst: f64 = 0.0;
    let mut x: f64 = -19.95;
    while x < 60.0 {
        if (x - x.round()).abs() > 1e-3 || x > 0.0 {
            let rel = (gamma(x) / mp_gamma(x) - 1.0).abs();
            worst = worst.max(rel);
            let rr = (rgamma(x) * mp_gamma(x) - 1.0).abs();
            worst = worst.max(rr);
        }
        x += 0.0731;
    }
    assert!(worst < 1e-13, "worst relative error {worst:e}");
}

#[test]
fn ln_gamma_matches_mpfr() {
    for &x in &[0.1, 0.7, 1.3, 2.9, 10.5, 55.5, 150.25, 400.0] {
        let exact = Float::with_val(200, x).ln_abs_gamma().0.to_f64();
        assert!((ln_gamma(x) - exact).abs() < 1e-13 * exact.abs().max(1.0), "{x}");
    }
}
