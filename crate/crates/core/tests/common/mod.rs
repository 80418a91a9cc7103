#![allow(dead_code)]

use crinv::ambient::AmbientElement;
use crinv::gauss::GaussRational;
use crinv::metric::AmbientMetric;
use crinv::surface::{HolPoly, RigidSurface, tangential_vars};
use crinv::MultiSeries;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn small_rational(r: &mut ChaCha8Rng) -> GaussRational {
    let re = GaussRational::from_frac(r.gen_range(-3..=3), r.gen_range(1..=3));
    let im = GaussRational::from_frac(r.gen_range(-3..=3), r.gen_range(1..=3));
    &re + &im.mul_i()
}

/// Random holomorphic polynomial in `(z, w)` of total degree ≤ `deg`; no constant term
/// unless `constant` is set.
pub fn random_hol(r: &mut ChaCha8Rng, deg: u16, constant: bool) -> HolPoly {
    let mut terms = Vec::new();
    for a in 0..=deg {
        for k in 0..=(deg - a) {
            if a + k == 0 && !constant {
                continue;
            }
            if r.gen_bool(0.6) {
                terms.push((a, k, small_rational(r)));
            }
        }
    }
    if terms.is_empty() {
        terms.push((1, 0, GaussRational::one()));
    }
    HolPoly::from_n1(&terms)
}

/// True when `a` and `b` are known to agree through at least degree `d`.
pub fn agree(a: &MultiSeries, b: &MultiSeries, d: i32) -> bool {
    matches!(a.equal_through(b), Some(k) if k >= d)
}

pub fn vanishes(a: &MultiSeries, d: i32) -> bool {
    agree(a, &MultiSeries::zero(a.vars(), a.trunc()), d)
}

/// `|z|² + c (z²z̄³ + z³z̄²) + e |z|⁴`, a family of rigid perturbations of the quadric.
pub fn perturbed(d: u32, c: (i64, i64), e: (i64, i64)) -> RigidSurface {
    let v = tangential_vars(1);
    let z = MultiSeries::var(&v, d, "z1").unwrap();
    let zb = z.conj();
    let bump = &(&z.pow(2) * &zb.pow(3)) + &(&z.pow(3) * &zb.pow(2));
    let quart = (&z * &zb).pow(2);
    let f = &(&(&z * &zb) + &bump.scale(&GaussRational::from_frac(c.0, c.1))) + &quart.scale(&GaussRational::from_frac(e.0, e.1));
    RigidSurface::new(1, f).unwrap()
}

/// Random real or complex series in `vars` with terms of total degree ≤ `deg`.
pub fn random_series(r: &mut ChaCha8Rng, vars: &crinv::Vars, trunc: u32, deg: u16, real: bool) -> MultiSeries {
    let k = vars.len();
    let mut s = MultiSeries::zero(vars, trunc);
    for _ in 0..r.gen_range(2..=5) {
        let mut e = vec![0u16; k];
        let mut left = r.gen_range(0..=deg);
        while left > 0 {
            e[r.gen_range(0..k)] += 1;
            left -= 1;
        }
        s = &s + &MultiSeries::monomial(vars, trunc, e, small_rational(r));
    }
    if real {
        s.re()
    } else {
        s
    }
}

/// Random ambient element over `Vars::base(n)`: bidegree `(p, q)` with `p, q ∈ {−1, 0, 1}`,
/// optionally carrying a `Λ` term.
pub fn random_element(r: &mut ChaCha8Rng, n: usize, trunc: u32) -> AmbientElement {
    let v = crinv::Vars::base(n);
    let p = r.gen_range(-1..=1);
    let q = if r.gen_bool(0.5) { p } else { r.gen_range(-1..=1) };
    let s0 = random_series(r, &v, trunc, 3, false);
    let mut e = AmbientElement::from_series(p, q, s0);
    if r.gen_bool(0.4) {
        let s1 = random_series(r, &v, trunc, 2, false);
        let l = AmbientElement::lambda(&v, trunc).mul(&AmbientElement::weighted(0, s1)).unwrap();
        e = e.add(&l.shift(&e.p, &e.q)).unwrap();
    }
    e
}

/// Agreement of every log coefficient, through at least degree `d`.
pub fn same(a: &AmbientElement, b: &AmbientElement, d: i32) -> bool {
    if !(a.same_bidegree(b) || a.is_zero() || b.is_zero()) {
        return false;
    }
    let k = a.log_degree().max(b.log_degree());
    (0..=k).all(|i| matches!(a.log_coeff(i).equal_through(&b.log_coeff(i)), Some(x) if x >= d))
}

pub fn r_sharp_pow(m: &AmbientMetric, l: usize) -> AmbientElement {
    let mut x = AmbientElement::weighted(0, MultiSeries::one(m.vars(), m.trunc()));
    for _ in 0..l {
        x = x.mul(&m.r_sharp()).unwrap();
    }
    x
}

/// `(Z + Z̄ + c) f`.
pub fn euler_plus(f: &AmbientElement, c: i64) -> AmbientElement {
    let z = f.euler(false).unwrap().add(&f.euler(true).unwrap()).unwrap();
    z.add(&f.scale(&GaussRational::from_int(c))).unwrap()
}

/// `[Δ̃, r♯^ℓ] = ℓ r♯^{ℓ−1}(Z + Z̄ + n + ℓ + 1)`.
pub fn first_commutator(m: &AmbientMetric, f: &AmbientElement, l: usize) -> bool {
    let lhs = m.laplacian(&r_sharp_pow(m, l).mul(f).unwrap()).unwrap().sub(&r_sharp_pow(m, l).mul(&m.laplacian(f).unwrap()).unwrap()).unwrap();
    let rhs = r_sharp_pow(m, l - 1).mul(&euler_plus(f, (m.n + l + 1) as i64)).unwrap().scale(&GaussRational::from_int(l as i64));
    same(&lhs, &rhs, 2)
}

/// `[Δ̃^ℓ, r♯] = ℓ (Z + Z̄ + n + ℓ + 1) Δ̃^{ℓ−1}`.
pub fn second_commutator(m: &AmbientMetric, f: &AmbientElement, l: usize) -> bool {
    let rs = m.r_sharp();
    let lhs = m.laplacian_pow(&rs.mul(f).unwrap(), l).unwrap().sub(&rs.mul(&m.laplacian_pow(f, l).unwrap()).unwrap()).unwrap();
    let rhs = euler_plus(&m.laplacian_pow(f, l - 1).unwrap(), (m.n + l + 1) as i64).scale(&GaussRational::from_int(l as i64));
    same(&lhs, &rhs, 1)
}
