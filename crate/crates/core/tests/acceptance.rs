//! Acceptance run: one PASS/FAIL line per criterion, exit status 1 on any failure not
//! listed in `KNOWN_UNATTAINABLE`.

mod common;

use std::f64::consts::PI;
use std::time::Instant;

use common::{agree, first_commutator, perturbed, random_element, random_hol, random_series, rng, second_commutator, vanishes};
use crinv::ambient::AmbientElement;
use crinv::gauss::GaussRational;
use crinv::invariants::{gjms, gjms_via_expansion, harmonic_expansion, q_curvature_ambient, q_prime};
use crinv::metric::AmbientMetric;
use crinv::monge::{fefferman_improve, verify_order};
use crinv::renorm::*;
use crinv::surface::{HolPoly, Hypersurface, RigidSurface};
use crinv::tw::{Dir, PseudoHermitian};
use crinv::tw3::*;
use crinv::MultiSeries;

/// Criteria that cannot hold as stated; the analysis is printed with the line.
const KNOWN_UNATTAINABLE: &[&str] = &["6"];

struct Line {
    id: &'static str,
    passed: bool,
    detail: String,
}

fn flat(d: u32) -> (RigidSurface, Hypersurface, AmbientMetric, PseudoHermitian) {
    let s = RigidSurface::quadric(1, d);
    let h = Hypersurface::rigid(&s).unwrap();
    let m = AmbientMetric::build(&h.rho).unwrap();
    let p = PseudoHermitian::rigid(&s).unwrap();
    (s, h, m, p)
}

fn int(k: i64) -> GaussRational {
    GaussRational::from_int(k)
}

fn model_grid() -> (Line, Line) {
    let d = 8;
    let start = Instant::now();
    let (s, h, m, base) = flat(d);
    let (mut closed, mut cross, mut rows) = (true, true, 0);
    for a in -2..=2i64 {
        for b in -2..=2i64 {
            let (ga, gb) = (int(a), int(b));
            let hol = HolPoly::model_family(&ga, &gb);
            let u = pluriharmonic_field(&s, &hol).unwrap();
            let inv = scaled_invariants(&base, &u).unwrap();
            let qa = q_prime(&m, &h, &hol.real_part2(d)).unwrap().constant_term();
            let qt = q_prime_tw(&inv).field.at_origin();
            let [sub, sq, tor] = q_prime_terms(&inv).map(|t| t.constant_term());
            let scal0 = inv.structure.apply(Dir::T, &inv.structure.scal).constant_term();
            closed &= qa == int(8 * (a * a + b * b))
                && sub == int(-8 * a * a * (a + b - 2))
                && &sq * &int(2) == int(4 * (a * a + 2 * b) * (a * a + 2 * b))
                && scal0 == int(8 * b * (a * a + b))
                && &tor * &GaussRational::from_frac(-1, 2) == int(a * a * (a - 2) * (a - 2));
            cross &= qa == qt;
            rows += 1;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    (
        Line {
            id: "1",
            passed: closed && secs < 60.0,
            detail: format!("{rows} rows at D = {d}: Q′(0) = 8(a²+b²) and the four curvature terms exact; {secs:.2} s"),
        },
        Line { id: "2", passed: cross, detail: format!("ambient Q′(0) = pseudohermitian Q′(0) on all {rows} rows") },
    )
}

fn transformation_laws() -> Line {
    let d = 8;
    let (s, _, _, base) = flat(d);
    let inv = scaled_invariants(&base, &base.zero()).unwrap();
    let mut r = rng(101);
    let (mut ok, mut pairs) = (true, 0);
    for _ in 0..12 {
        let u = pluriharmonic_field(&s, &random_hol(&mut r, 3, false)).unwrap();
        let f = pluriharmonic_field(&s, &random_hol(&mut r, 3, true)).unwrap();
        let hat = scaled_invariants(&base, &u).unwrap();
        let back = u.scale_int(-1);
        let pf = PHField::new(f.clone(), 0);
        let lp = &p_prime_tw(&hat, &pf).unwrap().rescaled(&back).unwrap().value - &p_prime_tw(&inv, &pf).unwrap().value;
        ok &= agree(&lp, &paneitz_tw(&base, &(&u * &f)), 3);
        let lq = &q_prime_tw(&hat).field.rescaled(&back).unwrap().value - &q_prime_tw(&inv).field.value;
        let rq = &p_prime_tw(&inv, &PHField::new(u.clone(), 0)).unwrap().value.scale_int(2) + &paneitz_tw(&base, &(&u * &u));
        ok &= agree(&lq, &rq, 3);
        pairs += 1;
    }
    Line { id: "3", passed: ok, detail: format!("P̂′f = P′f + P(Υf) and Q̂′ = Q′ + 2P′Υ + P(Υ²) on {pairs} random cubic pairs") }
}

fn monge_ampere() -> Line {
    let d = 8;
    let mut ok = true;
    for h in [Hypersurface::ball(1, d), Hypersurface::quadric(1, d)] {
        let rep = fefferman_improve(&h, 3).unwrap();
        let again = verify_order(&h, &rep.r).unwrap();
        ok &= rep.exact && again.exact && rep.obstruction.as_ref().map(vanishes_any).unwrap_or(false);
    }
    let surfaces = [perturbed(d, (1, 10), (0, 1)), perturbed(d, (0, 1), (1, 1)), perturbed(d, (1, 3), (-1, 2)), perturbed(d, (2, 1), (1, 4))];
    for s in &surfaces {
        let h = Hypersurface::rigid(s).unwrap();
        let rep = fefferman_improve(&h, 3).unwrap();
        ok &= rep.order_achieved == 3 && verify_order(&h, &rep.r).unwrap().order == 3;
    }
    Line {
        id: "4",
        passed: ok,
        detail: format!("𝒥 = 1 exactly and obstruction ≡ 0 for ball and quadric; order 3 recomputed on {} perturbed surfaces", surfaces.len()),
    }
}

fn vanishes_any(s: &MultiSeries) -> bool {
    vanishes(s, 0)
}

fn operator_identities() -> Line {
    let d = 8;
    let mut r = rng(102);
    let ball = Hypersurface::ball(1, d);
    let hp = Hypersurface::rigid(&perturbed(d, (1, 5), (1, 2))).unwrap();
    let rp = fefferman_improve(&hp, 3).unwrap().r;
    let cases = [(AmbientMetric::build(&ball.rho).unwrap(), ball), (AmbientMetric::build(&rp).unwrap(), hp)];
    let (mut ok, mut elements, mut gj) = (true, 0, 0);
    for (m, h) in &cases {
        for k in 0..12 {
            let f = random_element(&mut r, 1, d);
            ok &= first_commutator(m, &f, 1 + k % 3) && second_commutator(m, &f, 1 + k % 2);
            let fe = AmbientElement::weighted(0, random_series(&mut r, m.vars(), d, 4, true));
            let phi = AmbientElement::weighted(-1, random_series(&mut r, m.vars(), d, 3, false));
            let g = fe.add(&m.r_sharp().mul(&phi).unwrap()).unwrap();
            ok &= agree(&gjms(m, h, &fe).unwrap(), &gjms(m, h, &g).unwrap(), 1);
            elements += 1;
        }
        for _ in 0..6 {
            let f = AmbientElement::weighted(0, random_series(&mut r, m.vars(), d, 4, true));
            let direct = gjms(m, h, &f).unwrap();
            ok &= agree(&gjms_via_expansion(m, h, &f).unwrap(), &direct, 0);
            // B₀ = ((−1)^{n+1}/((n+1)! n!)) P f with n = 1
            let b0 = harmonic_expansion(m, h, &f).unwrap().log_coefficient;
            ok &= agree(&b0, &direct.scale(&GaussRational::from_frac(1, 2)), 0);
            gj += 1;
        }
    }
    Line {
        id: "5",
        passed: ok,
        detail: format!("both commutators and extension independence on {elements} random elements; gjms = expansion with constant 1/2 on {gj} inputs"),
    }
}

fn pseudo_einstein() -> (Line, Line) {
    let d = 8;
    let (s, h, m, base) = flat(d);
    let mut r = rng(103);
    let mut ph_ok = true;
    for _ in 0..5 {
        let hol = random_hol(&mut r, 3, false);
        let u = pluriharmonic_field(&s, &hol).unwrap();
        let inv = scaled_invariants(&base, &u).unwrap();
        ph_ok &= pseudo_einstein_test(&inv) && vanishes(&q_curvature_tw(&inv).value, 2);
        ph_ok &= vanishes(&q_curvature_ambient(&m, &h, &hol.real_part2(d)).unwrap(), 2);
    }
    let z = MultiSeries::var(&h.base_vars(), d, "z1").unwrap();
    let zz = &z * &z.conj();
    let facts = |ext: &MultiSeries| {
        let u = h.restrict(ext).unwrap();
        let inv = scaled_invariants(&base, &u).unwrap();
        let s1 = s_tensor(&inv).s;
        let qt = q_curvature_tw(&inv).value;
        let qa = &q_curvature_ambient(&m, &h, ext).unwrap() * &u.scale_int(-2).exp().unwrap();
        (!s1.low_part(3).is_zero(), !qt.low_part(3).is_zero(), agree(&qa, &qt, 2))
    };
    let (s1_z, q_z, _) = facts(&zz);
    let (s1_q, q_q, cross) = facts(&zz.pow(2));
    let w = MultiSeries::var(&h.base_vars(), d, "z2").unwrap();
    let zz_is_re_w = h.restrict(&zz).unwrap() == h.restrict(&(&w + &w.conj())).unwrap();
    (
        Line {
            id: "6",
            passed: ph_ok && s1_z && q_z,
            detail: format!(
                "S₁ ≡ 0 and Q ≡ 0 for 5 pluriharmonic Υ: {ph_ok}; Υ = zz̄: S₁ ≢ 0 {s1_z}, Q ≢ 0 {q_z}. On the model w + w̄ = |z|², \
                 so zz̄ restricts to 2 Re w (confirmed: {zz_is_re_w}), which is CR pluriharmonic, so S₁ and Q of e^{{zz̄}}θ₀ vanish identically"
            ),
        },
        Line {
            id: "6 (supplementary)",
            passed: ph_ok && s1_q && q_q && cross,
            detail: format!("Υ = |z|⁴, not pluriharmonic: S₁ ≢ 0 {s1_q}, Q ≢ 0 {q_q}, ambient Q = pseudohermitian Q {cross}"),
        },
    )
}

fn renormalized_volume() -> Line {
    let start = Instant::now();
    let eps = EpsGrid::default().values();
    let b = renormalized_volume_integral(&eps, &BallQuadrature::default()).unwrap();
    let fa = fit_log_term(&b.weighted_norm, &eps, 1, DEFAULT_FIT_THRESHOLD).unwrap();
    let fb = fit_log_term(&b.top_form, &eps, 1, DEFAULT_FIT_THRESHOLD).unwrap();
    let s = sphere_tw_data().unwrap();
    let target = log_term_constant(1) * s.total_q_prime();
    let (ea, eb) = (((fa.log_coefficient - target) / target).abs(), ((fb.log_coefficient - target) / target).abs());
    let secs = start.elapsed().as_secs_f64();
    Line {
        id: "7",
        passed: fa.valid && fb.valid && ea < 1e-2 && eb < 1e-2 && secs < 300.0,
        detail: format!(
            "c = {:.10} and {:.10} against −Q̄′(S³) = {:.10} (relative errors {ea:.1e}, {eb:.1e}); {secs:.2} s",
            fa.log_coefficient, fb.log_coefficient, target
        ),
    }
}

fn battery() -> Vec<(MultiSeries, MultiSeries)> {
    let g = |re: i64, im: i64| GaussRational::from_parts((re, 1), (im, 1));
    let h = |t: &[(u16, u16, GaussRational)]| sphere_pluriharmonic(&HolPoly::from_n1(t));
    vec![
        (h(&[(1, 0, g(1, 0))]), h(&[(0, 2, g(1, 0))])),
        (h(&[(1, 0, g(1, 0))]), h(&[(1, 1, g(1, 0))])),
        (h(&[(0, 1, g(0, 1))]), h(&[(2, 0, g(1, 0))])),
        (h(&[(3, 0, g(1, 0))]), h(&[(1, 2, g(2, -1))])),
        (h(&[(2, 1, g(1, 1))]), h(&[(0, 3, g(1, 0)), (1, 0, g(1, 0))])),
        (h(&[(1, 1, g(1, 0)), (0, 2, g(0, 1))]), h(&[(2, 2, g(1, 0))])),
    ]
}

fn self_adjointness() -> Line {
    let s = sphere_tw_data().unwrap();
    let (mut ok, mut worst) = (true, 0.0f64);
    for (f1, f2) in battery() {
        for op in [SphereOperator::PPrime, SphereOperator::Paneitz] {
            let r = self_adjointness_residual(&s, &f1, &f2, op, DEFAULT_RESOLUTION).unwrap();
            ok &= r.residual < 1e-8 && r.residual <= (r.coarse_residual / 2.0).max(1e-13);
            worst = worst.max(r.residual);
        }
    }
    Line { id: "8", passed: ok, detail: format!("6-pair battery for P′ and P, max residual {worst:.2e}, halving or at the rounding floor") }
}

fn cartan_layer() -> Line {
    let d = 8;
    let (s, _, _, base) = flat(d);
    let mut r = rng(104);
    let mut flat_ok = true;
    let mut scalings = vec![base.zero()];
    for _ in 0..4 {
        scalings.push(pluriharmonic_field(&s, &random_hol(&mut r, 3, false)).unwrap());
    }
    for u in &scalings {
        let c = cartan_obstruction(&scaled_invariants(&base, u).unwrap());
        flat_ok &= vanishes(&c.o11.s, 2) && vanishes(&c.double_divergence.im(), 0);
    }
    let mut curved_ok = true;
    for surf in [perturbed(10, (0, 1), (1, 1)), perturbed(10, (1, 3), (1, 2))] {
        let c = cartan_obstruction(&tw_from_rigid_surface(&surf).unwrap());
        curved_ok &= vanishes(&c.double_divergence.im(), 1) && !c.o11.s.low_part(2).is_zero();
    }
    let k = 8.0 * PI * PI;
    let sign_ok = burns_epstein(k) == -1.0 && burns_epstein(-k) == 1.0 && burns_epstein(0.0) == 0.0;
    Line {
        id: "9",
        passed: flat_ok && curved_ok && sign_ok,
        detail: format!(
            "𝒪¹¹ ≡ 0 for the flat model and 4 pluriharmonic scalings: {flat_ok}; Im P*₁₁𝒪¹¹ ≡ 0 on curved surfaces: {curved_ok}; ∫Q′ = −8π²μ: {sign_ok}"
        ),
    }
}

fn main() {
    let (c1, c2) = model_grid();
    let (c6, c6s) = pseudo_einstein();
    let lines =
        [c1, c2, transformation_laws(), monge_ampere(), operator_identities(), c6, c6s, renormalized_volume(), self_adjointness(), cartan_layer()];
    let mut unexpected = 0;
    for l in &lines {
        let known = KNOWN_UNATTAINABLE.contains(&l.id);
        let tag = match (l.passed, known) {
            (true, _) => "PASS",
            (false, true) => "FAIL (known unattainable)",
            (false, false) => "FAIL",
        };
        println!("criterion {:<18} {tag}: {}", l.id, l.detail);
        if !l.passed && !known {
            unexpected += 1;
        }
    }
    if unexpected > 0 {
        eprintln!("{unexpected} criteria failed");
        std::process::exit(1);
    }
}
