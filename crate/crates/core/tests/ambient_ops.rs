mod common;

use common::{first_commutator, perturbed, random_element, random_series, rng, second_commutator};
use crinv::ambient::AmbientElement;
use crinv::gauss::GaussRational;
use crinv::invariants::{gjms, gjms_via_expansion, harmonic_expansion};
use crinv::metric::AmbientMetric;
use crinv::monge::fefferman_improve;
use crinv::surface::Hypersurface;
use crinv::{MultiSeries, Vars};

const D: u32 = 8;

fn metrics() -> Vec<(AmbientMetric, Hypersurface)> {
    let mut out = Vec::new();
    let ball = Hypersurface::ball(1, D);
    out.push((AmbientMetric::build(&ball.rho).unwrap(), ball));
    let h = Hypersurface::rigid(&perturbed(D, (1, 5), (1, 2))).unwrap();
    let r = fefferman_improve(&h, 3).unwrap().r;
    out.push((AmbientMetric::build(&r).unwrap(), h));
    out
}

#[test]
fn commutators_with_powers_of_r_sharp() {
    let mut r = rng(31);
    for (m, _) in metrics() {
        for k in 0..12 {
            let f = random_element(&mut r, 1, D);
            let l = 1 + k % 3;
            assert!(first_commutator(&m, &f, l), "first, l = {l}, f bidegree ({}, {})", f.p, f.q);
            assert!(second_commutator(&m, &f, 1 + k % 2), "second, f bidegree ({}, {})", f.p, f.q);
        }
    }
}

#[test]
fn euler_operators_act_by_weight() {
    let mut r = rng(32);
    let v = Vars::base(1);
    for w in -2..=2 {
        let f = AmbientElement::weighted(w, random_series(&mut r, &v, D, 3, false));
        assert_eq!(f.euler(false).unwrap(), f.scale(&GaussRational::from_int(w)));
        assert_eq!(f.euler(true).unwrap(), f.scale(&GaussRational::from_int(w)));
    }
}

#[test]
fn gjms_is_independent_of_the_extension() {
    let mut r = rng(33);
    for (m, h) in metrics() {
        let v = m.vars().clone();
        for _ in 0..5 {
            let f = AmbientElement::weighted(0, random_series(&mut r, &v, D, 4, true));
            let phi = AmbientElement::weighted(-1, random_series(&mut r, &v, D, 3, false));
            let g = f.add(&m.r_sharp().mul(&phi).unwrap()).unwrap();
            let a = gjms(&m, &h, &f).unwrap();
            let b = gjms(&m, &h, &g).unwrap();
            assert!(matches!(a.equal_through(&b), Some(d) if d >= 1), "{a} vs {b}");
        }
    }
}

#[test]
fn gjms_matches_the_expansion_and_its_constant() {
    let mut r = rng(34);
    let mut cases: Vec<(AmbientMetric, Hypersurface, u16)> = metrics().into_iter().map(|(m, h)| (m, h, 4)).collect();
    let ball2 = Hypersurface::ball(2, 6);
    cases.push((AmbientMetric::build(&ball2.rho).unwrap(), ball2, 3));
    for (m, h, deg) in cases {
        let n = m.n as i64;
        let fact = |k: i64| (1..=k).product::<i64>();
        let sign = if (n + 1) % 2 == 0 { 1 } else { -1 };
        for _ in 0..4 {
            let f = AmbientElement::weighted(0, random_series(&mut r, m.vars(), m.trunc(), deg, true));
            let direct = gjms(&m, &h, &f).unwrap();
            assert!(matches!(gjms_via_expansion(&m, &h, &f).unwrap().equal_through(&direct), Some(d) if d >= 0));
            let b0 = harmonic_expansion(&m, &h, &f).unwrap().log_coefficient;
            let want = direct.scale(&GaussRational::from_frac(sign, fact(n + 1) * fact(n)));
            assert!(matches!(b0.equal_through(&want), Some(d) if d >= 0));
        }
        let one = AmbientElement::weighted(0, MultiSeries::one(m.vars(), m.trunc()));
        assert!(gjms(&m, &h, &one).unwrap().is_zero());
    }
}
