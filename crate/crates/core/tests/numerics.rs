mod common;

use std::f64::consts::PI;

use common::{agree, rng};
use crinv::gauss::GaussRational;
use crinv::renorm::*;
use crinv::surface::HolPoly;
use crinv::MultiSeries;
use rand::Rng;

fn hol(terms: &[(u16, u16, (i64, i64))]) -> MultiSeries {
    let t: Vec<_> = terms.iter().map(|&(e, k, (re, im))| (e, k, GaussRational::from_parts((re, 1), (im, 1)))).collect();
    sphere_pluriharmonic(&HolPoly::from_n1(&t))
}

#[test]
fn cayley_scaling_reproduces_sphere_curvature() {
    let d = 8;
    let inv = cayley_scaling(d).unwrap();
    let sphere = sphere_tw_data().unwrap();
    let expected = MultiSeries::constant(inv.scal.value.vars(), d, &sphere.scal * &GaussRational::from_int(2));
    assert!(agree(&inv.scal.value, &expected, 5));
    assert!(agree(&inv.a11.value, &MultiSeries::zero(inv.a11.value.vars(), d), 5));
}

#[test]
fn sphere_total_q_prime_and_burns_epstein() {
    let s = sphere_tw_data().unwrap();
    let exact = s.total_q_prime();
    assert!((exact - 8.0 * PI * PI).abs() < 1e-12);
    let quad = total_q_prime_quadrature(&s, DEFAULT_RESOLUTION).unwrap();
    assert!((quad - exact).abs() < 1e-10 * exact);
    assert!((burns_epstein(quad) + 1.0).abs() < 1e-12);
}

#[test]
fn ball_log_terms_match_total_q_prime() {
    let eps = EpsGrid::default().values();
    let b = renormalized_volume_integral(&eps, &BallQuadrature::default()).unwrap();
    let k = 8.0 * PI * PI;
    for (i, &e) in eps.iter().enumerate() {
        let a = k * ((e.powi(-2) - 1.0) / 2.0 - 2.0 * (1.0 / e - 1.0) - e.ln());
        let t = -k * ((1.0 / e - 1.0) + e.ln());
        assert!((b.weighted_norm[i] - a).abs() < 1e-10 * a.abs(), "{} vs {a}", b.weighted_norm[i]);
        assert!((b.top_form[i] - t).abs() < 1e-10 * t.abs().max(1.0));
    }
    let fa = fit_log_term(&b.weighted_norm, &eps, 1, DEFAULT_FIT_THRESHOLD).unwrap();
    let fb = fit_log_term(&b.top_form, &eps, 1, DEFAULT_FIT_THRESHOLD).unwrap();
    assert!(fa.valid && fb.valid);
    let target = log_term_constant(1) * sphere_tw_data().unwrap().total_q_prime();
    assert!(((fa.log_coefficient - target) / target).abs() < 1e-2);
    assert!(((fb.log_coefficient - target) / target).abs() < 1e-2);
    let tol = 10.0 * fa.log_coefficient_uncertainty.max(fb.log_coefficient_uncertainty);
    assert!((fa.log_coefficient - fb.log_coefficient).abs() < tol);
}

#[test]
fn ball_densities_are_positive() {
    let mut r = rng(4);
    for _ in 0..50 {
        let z = num_complex::Complex64::new(r.gen_range(-0.5..0.5), r.gen_range(-0.5..0.5));
        let w = num_complex::Complex64::new(r.gen_range(-0.5..0.5), r.gen_range(-0.5..0.5));
        let (a, _) = ball_densities([z, w]);
        assert!(a > 0.0);
    }
}

#[test]
fn ball_rejects_bad_eps() {
    assert!(renormalized_volume_integral(&[0.0], &BallQuadrature::default()).is_err());
    assert!(renormalized_volume_integral(&[1.0], &BallQuadrature::default()).is_err());
}

#[test]
fn fit_synthetic_data() {
    let eps = EpsGrid::default().values();
    let v: Vec<f64> = eps.iter().map(|e| 3.0 / (e * e) + 5.0 * e.ln() + 7.0).collect();
    let f = fit_log_term(&v, &eps, 1, DEFAULT_FIT_THRESHOLD).unwrap();
    assert!((f.log_coefficient - 5.0).abs() < 5e-10);
    assert!((f.coefficients[0] - 3.0).abs() < 1e-9 && f.coefficients[1].abs() < 1e-8);
    assert!((f.constant - 7.0).abs() < 1e-8);
    assert!(f.valid);

    let mut r = rng(9);
    let noisy: Vec<f64> = v.iter().zip(&eps).map(|(x, e)| x + e * r.gen_range(-1e-4..1e-4)).collect();
    let g = fit_log_term(&noisy, &eps, 1, DEFAULT_FIT_THRESHOLD).unwrap();
    assert!((g.log_coefficient - 5.0).abs() < 1e-3, "{}", g.log_coefficient);
}

#[test]
fn fit_preconditions() {
    let eps = [0.1, 0.11, 0.12, 0.13, 0.14];
    let v = [1.0; 5];
    assert!(fit_log_term(&v, &eps, 1, DEFAULT_FIT_THRESHOLD).is_err());
    assert!(fit_log_term(&v[..4], &eps[..4], 1, DEFAULT_FIT_THRESHOLD).is_err());
    assert!(fit_log_term(&v[..4], &eps, 1, DEFAULT_FIT_THRESHOLD).is_err());
}

fn battery() -> Vec<(MultiSeries, MultiSeries)> {
    let re_z = hol(&[(1, 0, (1, 0))]);
    vec![
        (re_z.clone(), hol(&[(0, 2, (1, 0))])),
        (re_z.clone(), hol(&[(1, 1, (1, 0))])),
        (hol(&[(0, 1, (0, 1))]), hol(&[(2, 0, (1, 0))])),
        (hol(&[(3, 0, (1, 0))]), hol(&[(1, 2, (2, -1))])),
        (hol(&[(2, 1, (1, 1))]), hol(&[(0, 3, (1, 0)), (1, 0, (1, 0))])),
        (hol(&[(1, 1, (1, 0)), (0, 2, (0, 1))]), hol(&[(2, 2, (1, 0))])),
    ]
}

#[test]
fn p_prime_is_self_adjoint_on_pluriharmonics() {
    let s = sphere_tw_data().unwrap();
    for (f1, f2) in battery() {
        let r = self_adjointness_residual(&s, &f1, &f2, SphereOperator::PPrime, DEFAULT_RESOLUTION).unwrap();
        assert!(r.residual < 1e-8, "{r:?}");
        assert!(r.residual <= (r.coarse_residual / 2.0).max(1e-13));
    }
    let f = &battery()[0].1;
    assert_eq!(self_adjointness_residual(&s, f, f, SphereOperator::PPrime, 8).unwrap().residual, 0.0);
}

#[test]
fn paneitz_is_self_adjoint() {
    let s = sphere_tw_data().unwrap();
    let z = MultiSeries::var(&sphere_vars(), SPHERE_TRUNC, "z1").unwrap();
    let w = MultiSeries::var(&sphere_vars(), SPHERE_TRUNC, "z2").unwrap();
    let zz = &z * &z.conj();
    let general = vec![
        (zz.clone(), (&(&z * &w.conj()).re() + &zz.pow(2))),
        (&(&z.pow(2) * &w.conj()).re() + &zz, (&w * &w.conj()).pow(2)),
        (&(&z * &w).im() + &zz.pow(3), &(&w.pow(2) * &z.conj()).re() + &zz),
    ];
    for (f1, f2) in general {
        let r = self_adjointness_residual(&s, &f1, &f2, SphereOperator::Paneitz, DEFAULT_RESOLUTION).unwrap();
        assert!(r.residual < 1e-8, "{r:?}");
    }
    for (f1, f2) in battery() {
        assert!(apply_operator(&s, SphereOperator::Paneitz, &f1).unwrap().is_zero());
        let r = self_adjointness_residual(&s, &f1, &f2, SphereOperator::Paneitz, DEFAULT_RESOLUTION).unwrap();
        assert!(r.residual < 1e-8);
    }
}

#[test]
fn p_prime_needs_pluriharmonic_input() {
    let s = sphere_tw_data().unwrap();
    let z = MultiSeries::var(&sphere_vars(), SPHERE_TRUNC, "z1").unwrap();
    let zz = &z * &z.conj();
    assert!(apply_operator(&s, SphereOperator::PPrime, &zz).is_err());
}

#[test]
fn total_q_prime_is_invariant() {
    let s = sphere_tw_data().unwrap();
    for (u, _) in battery() {
        let v = total_q_prime_variation(&s, &u, DEFAULT_RESOLUTION).unwrap();
        assert!(v.abs() < 1e-9, "{v}");
    }
}
