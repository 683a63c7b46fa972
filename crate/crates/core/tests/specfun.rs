mod common;

use common::{mp_f, mp_ml, mp_remainder, rel};
use fracstable::specfun::{
    derivative_stack, f_family, f_remainder, mittag_leffler, psi, psi_general, psi_integral,
    psi_minus, theta_root, FFamily, Regime, Remainder,
};
use fracstable::{GeneralIndex, QuadratureConfig, StabilityIndex};
use proptest::prelude::*;

fn idx(a: f64) -> StabilityIndex {
    StabilityIndex::new(a).unwrap()
}

#[test]
fn stability_index_rejects_outside() {
    assert!(StabilityIndex::new(1.0).is_err());
    assert!(StabilityIndex::new(2.0).is_err());
    assert!(GeneralIndex::new(1.0, 1.0, 1.0).is_err());
    assert!(GeneralIndex::new(0.5, 0.0, 0.0).is_err());
}

#[test]
fn ml_examples() {
    let e = mittag_leffler(1.0, 1.0, 0).unwrap();
    assert!(rel(e.value, std::f64::consts::E) < 1e-15);
    assert_eq!(e.regime, Regime::Series);
    let c = mittag_leffler(2.0, 4.0, 0).unwrap();
    assert!((c.value - 3.7621956910836314).abs() < 1e-13);
    assert!(rel(c.value, mp_ml(2.0, 4.0, 0)) < 1e-14);
    for &a in &[0.4, 0.9, 1.2, 1.5, 1.8, 2.0] {
        assert_eq!(mittag_leffler(a, 0.0, 0).unwrap().value, 1.0);
    }
}

#[test]
fn ml_matches_multiprecision_series() {
    for &a in &[0.6, 1.2, 1.5, 1.8, 2.0] {
        for &x in &[0.3, 1.0, 4.0, 10.0, 30.0] {
            for d in 0..=2u32 {
                let ev = mittag_leffler(a, x, d).unwrap();
                let oracle = mp_ml(a, x, d);
                assert!(rel(ev.value, oracle) < 1e-12, "a={a} x={x} d={d} {} {oracle}", ev.value);
                assert!(ev.truncation_bound >= 0.0);
            }
        }
    }
}

#[test]
fn ml_asymptotic_regime_matches_oracle() {
    // x^(1/α) > 25
    for &(a, x) in &[(1.2f64, 60.0f64), (1.5, 200.0), (1.8, 500.0), (0.8, 20.0)] {
        for d in 0..=2u32 {
            let ev = mittag_leffler(a, x, d).unwrap();
            assert_eq!(ev.regime, Regime::Asymptotic);
            assert!(rel(ev.value, mp_ml(a, x, d)) < 1e-12, "a={a} x={x} d={d}");
        }
    }
}

#[test]
fn f_family_examples() {
    let a = idx(1.5);
    assert_eq!(f_family(a, 0.0, 0).unwrap(), 1.0);
    assert_eq!(f_family(a, 0.0, 1).unwrap(), 0.0);
    assert!(f_family(a, 0.0, 2).is_err());
    let v = f_family(a, 2.0, 0).unwrap();
    assert!(rel(v, mp_f(1.5, 2.0, 0).to_f64()) < 1e-14);
    assert!(rel(v, 4.996647361394793) < 1e-14);
}

#[test]
fn f_family_matches_oracle_on_grid() {
    for &a in &[1.2, 1.5, 1.8] {
        let fam = FFamily::new(idx(a));
        for &x in &[0.01, 0.2, 1.0, 3.0, 7.5, 15.0, 24.0, 26.0, 35.0, 60.0] {
            for m in 0..=2usize {
                let v = fam.eval(x, m).unwrap();
                let o = mp_f(a, x, m as u32).to_f64();
                assert!(rel(v, o) < 1e-12, "a={a} x={x} m={m}: {v} vs {o}");
            }
        }
    }
}

#[test]
fn series_and_asymptotic_agree_across_switch() {
    for &a in &[1.2, 1.5, 1.8] {
        let fam = FFamily::new(idx(a));
        let mut x = 20.0;
        while x <= 30.0 {
            for m in 0..=2 {
                let s = fam.series(x, m).unwrap();
                let t = fam.asymptotic(x, m, 6);
                assert!(rel(t, s) < 1e-8, "a={a} x={x} m={m}");
            }
            x += 0.5;
        }
    }
}

#[test]
fn remainders_match_oracle() {
    for &a in &[1.2, 1.5, 1.8] {
        let fam = FFamily::new(idx(a));
        for &x in &[0.05, 0.7, 1.5, 4.0, 10.0, 25.0, 39.0, 41.0, 80.0] {
            for (m, w) in [(0, Remainder::A), (1, Remainder::B), (2, Remainder::C)] {
                let v = fam.remainder(x, w).unwrap();
                let o = mp_remainder(a, x, m);
                assert!((v - o).abs() <= 1e-11 * o.abs().max(1e-3), "a={a} x={x} m={m}: {v} vs {o}");
            }
        }
    }
    let a0 = f_remainder(idx(1.5), 1e-12, Remainder::A).unwrap();
    assert!((a0 - (1.0 - 1.0 / 1.5)).abs() < 1e-10);
    let v = f_remainder(idx(1.2), 10.0, Remainder::A).unwrap();
    assert!(rel(v, mp_remainder(1.2, 10.0, 0)) < 1e-11);
}

#[test]
fn fprime_remainder_decays_like_power() {
    // α F'(x) - e^x = α B(x); log-log slope over [20, 60] at most -(1+α) + 0.2
    for &a in &[1.2, 1.5, 1.8] {
        let fam = FFamily::new(idx(a));
        let b20 = fam.remainder(20.0, Remainder::B).unwrap().abs();
        let b60 = fam.remainder(60.0, Remainder::B).unwrap().abs();
        let slope = (b60.ln() - b20.ln()) / (60f64.ln() - 20f64.ln());
        assert!(slope <= -(1.0 + a) + 0.2, "a={a} slope={slope}");
    }
}

#[test]
fn derivative_stack_examples() {
    let s = derivative_stack(1.0, 1.0, 3).unwrap();
    for v in s {
        assert!(rel(v, std::f64::consts::E) < 1e-15);
    }
    let s = derivative_stack(1.5, 0.0, 2).unwrap();
    assert_eq!(s[0], 1.0);
    assert!(rel(s[1], 1.0 / common::mp_gamma(2.5)) < 1e-14);
    assert!(rel(s[2], 2.0 / common::mp_gamma(4.0)) < 1e-14);
    let s = derivative_stack(1.8, 2.0, 5).unwrap();
    assert!(s.iter().all(|v| *v > 0.0));
    for (m, v) in s.iter().enumerate() {
        assert!(rel(*v, mp_ml(1.8, 2.0, m as u32)) < 1e-13);
    }
}

#[test]
fn psi_examples() {
    let a = idx(1.5);
    assert_eq!(psi(a, 0.0).unwrap(), 0.0);
    assert!(rel(psi(a, 1.0).unwrap(), 1.329340388179137) < 1e-13);
    assert!(rel(psi(a, 2.0).unwrap(), 3.3233509704478426) < 1e-13);
    assert_eq!(psi_minus(a, 0.0).unwrap(), 0.0);
    assert!(rel(psi_minus(a, 1.0).unwrap(), 0.5641895835477563) < 1e-13);
    // Γ(1.4)/Γ(0.2)
    assert!(rel(psi_minus(idx(1.2), 1.0).unwrap(), common::mp_gamma(1.4) / common::mp_gamma(0.2)) < 1e-13);
}

#[test]
fn psi_integral_matches_gamma_ratio() {
    let cfg = QuadratureConfig::default();
    for &a in &[1.2, 1.5, 1.8] {
        assert_eq!(psi_integral(idx(a), 0.0, &cfg).unwrap(), 0.0);
        for &l in &[0.5, 1.0, 2.0, 5.0] {
            let i = psi_integral(idx(a), l, &cfg).unwrap();
            let p = psi(idx(a), l).unwrap();
            assert!(rel(i, p) < 1e-6, "a={a} l={l}: {i} vs {p}");
        }
    }
}

#[test]
fn psi_general_reduces_and_roots() {
    for &a in &[1.2, 1.5, 1.8] {
        let g = GeneralIndex::spectrally_negative(idx(a));
        for &l in &[0.0, 0.1, 0.5, 0.9] {
            let v = psi_general(g, l).unwrap();
            let p = psi(idx(a), l).unwrap();
            assert!((v - p).abs() <= 1e-12 * p.abs().max(1e-300), "a={a} l={l}");
        }
        assert!((theta_root(g).unwrap() - 1.0).abs() < 1e-10);
    }
    let g = GeneralIndex::new(1.5, 1.0, 1.0).unwrap();
    assert!(rel(psi_general(g, 0.5).unwrap(), 1.3333333333333333) < 1e-12);
    let direct = common::mp_gamma(-1.5) / common::mp_gamma(-0.5);
    assert!(rel(psi_general(g, 0.0).unwrap(), direct) < 1e-13);
    let th = theta_root(g).unwrap();
    assert!(th > 0.0 && th < 1.5);
    assert!(psi_general(g, -th).unwrap().abs() < 1e-10);
    assert!(psi_general(g, 1.0).is_err());
    assert!(psi_general(g, -1.5).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn f_derivatives_positive_and_ordered(a in 1.05f64..1.95, x in 0.01f64..40.0) {
        let fam = FFamily::new(idx(a));
        let f0 = fam.eval(x, 0).unwrap();
        let f1 = fam.eval(x, 1).unwrap();
        let f2 = fam.eval(x, 2).unwrap();
        prop_assert!(f0 > 0.0 && f1 > 0.0 && f2 > 0.0);
        // F - F' and F'' - F' are positive (Laplace transforms of positive densities)
        prop_assert!(fam.remainder(x, Remainder::A).unwrap() > fam.remainder(x, Remainder::B).unwrap());
        prop_assert!(fam.remainder(x, Remainder::C).unwrap() > fam.remainder(x, Remainder::B).unwrap());
    }

    #[test]
    fn psi_recurrence(a in 1.05f64..1.95, l in 0.01f64..20.0) {
        // ψ(λ+1) = ψ(λ)(λ+α)/λ
        let p0 = psi(idx(a), l).unwrap();
        let p1 = psi(idx(a), l + 1.0).unwrap();
        prop_assert!(rel(p1, p0 * (l + a) / l) < 1e-12);
    }

    #[test]
    fn scaled_derivatives_consistent(a in 1.05f64..1.95, x in 0.01f64..20.0) {
        let fam = FFamily::new(idx(a));
        prop_assert!(rel(fam.fprime_scaled(x).unwrap() * x.powf(a - 1.0), fam.eval(x, 1).unwrap()) < 1e-13);
        prop_assert!(rel(fam.fsecond_scaled(x).unwrap() * x.powf(a - 2.0), fam.eval(x, 2).unwrap()) < 1e-13);
    }
}
