//! Invariants of pseudohermitian 3-manifolds: scaled structures `θ̂ = e^Υ θ`, hatted
//! derivatives, `Q′`, `P′`, `Q`, `S₁`, the pluriharmonic test, Cartan curvature and the
//! Burns–Epstein integrand.
//!
//! Every field is stored as its representative with respect to the structure it was
//! computed in; a weight-`w` density changes by `e^{wΥ}` under `θ ↦ e^Υ θ`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gauss::GaussRational;
use crate::series::{MultiSeries, SeriesJson};
use crate::surface::{HolPoly, Hypersurface, RigidSurface};
use crate::tw::{Dir, PseudoHermitian, Tensor};

#[derive(Clone, Debug, PartialEq)]
pub struct PHField {
    pub value: MultiSeries,
    /// Density weight `w` (the field lies in `𝓔(w)`).
    pub weight: i32,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PHFieldJson {
    pub weight: i32,
    #[serde(flatten)]
    pub series: SeriesJson,
}

impl PHField {
    pub fn new(value: MultiSeries, weight: i32) -> Self {
        PHField { value, weight }
    }

    pub fn is_real(&self) -> bool {
        self.value.is_real()
    }

    /// Representative after `θ ↦ e^Υ θ`.
    pub fn rescaled(&self, upsilon: &MultiSeries) -> Result<Self> {
        if self.weight == 0 {
            return Ok(self.clone());
        }
        let e = upsilon.scale_int(self.weight as i64).exp()?;
        Ok(PHField { value: &self.value * &e, weight: self.weight })
    }

    pub fn at_origin(&self) -> GaussRational {
        self.value.constant_term()
    }

    pub fn to_json(&self) -> PHFieldJson {
        PHFieldJson { weight: self.weight, series: self.value.to_json() }
    }

    pub fn from_json(j: &PHFieldJson) -> Result<Self> {
        Ok(PHField { value: MultiSeries::from_json(&j.series)?, weight: j.weight })
    }
}

/// The structure `θ̂ = e^Υ θ` together with its curvature, and the structure it came from.
#[derive(Clone, Debug)]
pub struct PHInvariants {
    pub upsilon: PHField,
    /// Weight −1.
    pub scal: PHField,
    /// Weight 0, in the coframe `θ̂¹ = θ¹ + iΥ¹θ`.
    pub a11: PHField,
    pub structure: PseudoHermitian,
    pub base: PseudoHermitian,
}

/// `2 Re(hol)` restricted to a rigid surface, as a field in `(z, z̄, t)`.
pub fn pluriharmonic_field(surface: &RigidSurface, hol: &HolPoly) -> Result<MultiSeries> {
    if hol.n != surface.n {
        return Err(Error::Mismatch("holomorphic data and surface differ in dimension".into()));
    }
    let h = Hypersurface::rigid(surface)?;
    h.restrict(&hol.real_part2(surface.trunc()))
}

fn scalar(s: &MultiSeries) -> Tensor {
    Tensor::scalar(s.clone())
}

fn expect_eq(name: &str, a: &MultiSeries, b: &MultiSeries) -> Result<()> {
    if a.equal_through(b).is_none() {
        return Err(Error::Validation(format!("{name}: structure equations and transformation rule disagree")));
    }
    Ok(())
}

/// `Υ_1` and `Υ¹ = Υ_1̄/h` in a structure.
fn grad(p: &PseudoHermitian, u: &MultiSeries) -> (MultiSeries, MultiSeries) {
    let u1 = p.apply(Dir::Z, u);
    let up1 = &p.apply(Dir::Zb, u) * &p.h_inv;
    (u1, up1)
}

/// Solves the structure equations of `e^Υ θ` and checks the result against the
/// transformation rules `Â₁₁ = A₁₁ + iΥ₁₁ − iΥ₁Υ₁` and
/// `e^Υ Ŝcal = Scal + 2Δ_bΥ − 2Υ₁Υ¹`.
pub fn scaled_invariants(base: &PseudoHermitian, upsilon: &MultiSeries) -> Result<PHInvariants> {
    let p = base.scaled(upsilon)?;
    let i = GaussRational::i();
    let (u1, up1) = grad(base, upsilon);
    let u11 = base.covs(&[Dir::Z, Dir::Z], &scalar(upsilon)).s;
    let a_rule = &(&base.a11 + &u11.scale(&i)) - &(&u1 * &u1).scale(&i);
    expect_eq("A₁₁", &p.a11, &a_rule)?;
    let s_rule = &(&base.scal + &base.sublaplacian(upsilon).scale_int(2)) - &(&u1 * &up1).scale_int(2);
    expect_eq("Scal", &(&p.scal * &upsilon.exp()?), &s_rule)?;
    Ok(PHInvariants {
        upsilon: PHField::new(upsilon.clone(), 0),
        scal: PHField::new(p.scal.clone(), -1),
        a11: PHField::new(p.a11.clone(), 0),
        structure: p,
        base: base.clone(),
    })
}

/// Invariants of a rigid surface with its own contact form (`Υ = 0`).
pub fn tw_from_rigid_surface(surface: &RigidSurface) -> Result<PHInvariants> {
    let base = PseudoHermitian::rigid(surface)?;
    let zero = base.zero();
    scaled_invariants(&base, &zero)
}

#[derive(Clone, Debug)]
pub struct HatDerivatives {
    pub d1: PHField,
    pub d0: PHField,
    pub sublaplacian: PHField,
}

/// `∇̂₁f`, `∇̂₀f`, `Δ̂_b f` for a weight-`w` density given by its representative in the base
/// structure; computed in the scaled structure and checked against the transformation rules.
pub fn hat_derivatives(inv: &PHInvariants, f: &PHField) -> Result<HatDerivatives> {
    let base = &inv.base;
    let p = &inv.structure;
    let u = &inv.upsilon.value;
    let w = f.weight as i64;
    let fh = f.rescaled(u)?.value;
    let d1 = p.apply(Dir::Z, &fh);
    let d0 = p.apply(Dir::T, &fh);
    let lap = p.sublaplacian(&fh);

    let i = GaussRational::i();
    let (u1, up1) = grad(base, u);
    let f1 = base.apply(Dir::Z, &f.value);
    let f1b = base.apply(Dir::Zb, &f.value);
    let fup1 = &f1b * &base.h_inv;
    let ew = u.scale_int(w).exp()?;
    let ew1 = u.scale_int(w - 1).exp()?;
    // ∇̂₁f = f₁ + wΥ₁f
    let r1 = &ew * &(&f1 + &(&u1 * &f.value).scale_int(w));
    expect_eq("∇̂₁", &d1, &r1)?;
    // ∇̂₀f = f₀ + iΥ₁f¹ − iΥ¹f₁ + (2w/3)(Υ₀ + Im Υ₁¹) f
    let u0 = base.apply(Dir::T, u);
    let u11b = base.covs(&[Dir::Z, Dir::Zb], &scalar(u)).s;
    let im_trace = (&u11b * &base.h_inv).im();
    let mut r0 = base.apply(Dir::T, &f.value);
    r0 = &r0 + &(&u1 * &fup1).scale(&i);
    r0 = &r0 - &(&up1 * &f1).scale(&i);
    r0 = &r0 + &(&(&u0 + &im_trace) * &f.value).scale(&GaussRational::from_frac(2 * w, 3));
    expect_eq("∇̂₀", &d0, &(&ew1 * &r0))?;
    // Δ̂_b f = Δ_b f + w(Δ_bΥ)f − (1+2w)(Υ¹f₁ + Υ₁f¹) − 2w(1+w)Υ¹Υ₁f
    let mut rl = base.sublaplacian(&f.value);
    rl = &rl + &(&base.sublaplacian(u) * &f.value).scale_int(w);
    rl = &rl - &(&(&up1 * &f1) + &(&u1 * &fup1)).scale_int(1 + 2 * w);
    rl = &rl - &(&(&up1 * &u1) * &f.value).scale_int(2 * w * (1 + w));
    expect_eq("Δ̂_b", &lap, &(&ew1 * &rl))?;
    Ok(HatDerivatives {
        d1: PHField::new(d1, f.weight),
        d0: PHField::new(d0, f.weight - 1),
        sublaplacian: PHField::new(lap, f.weight - 1),
    })
}

fn structure_of(inv: &PHInvariants) -> &PseudoHermitian {
    &inv.structure
}

/// `S₁ = Scal,₁ − i A₁₁,¹`.
pub fn s_tensor(inv: &PHInvariants) -> Tensor {
    let p = structure_of(inv);
    let ds = p.cov(Dir::Z, &scalar(&p.scal));
    let da = p.raise(&p.cov(Dir::Zb, &p.a11_tensor()));
    Tensor { c1: 1, c2: 0, s: &ds.s - &da.s.scale(&GaussRational::i()) }
}

/// `S₁ ≡ 0`, as far as the truncation allows.
pub fn pseudo_einstein_test(inv: &PHInvariants) -> bool {
    let s = s_tensor(inv).s;
    s.equal_through(&MultiSeries::zero(s.vars(), s.trunc())).is_some()
}

/// `A₁₁,¹¹`.
fn double_div_torsion(p: &PseudoHermitian) -> MultiSeries {
    let a = p.covs(&[Dir::Zb, Dir::Zb], &p.a11_tensor());
    &(&a.s * &p.h_inv) * &p.h_inv
}

/// `Q = (Δ_b Scal − 2 Im A₁₁,¹¹)/6`, weight −2.
pub fn q_curvature_tw(inv: &PHInvariants) -> PHField {
    let p = structure_of(inv);
    let v = &p.sublaplacian(&p.scal) - &double_div_torsion(p).im().scale_int(2);
    PHField::new(v.scale(&GaussRational::from_frac(1, 6)), -2)
}

#[derive(Clone, Debug)]
pub struct QPrimeTw {
    pub field: PHField,
    /// `Q′` is an invariant of the structure only for pseudo-Einstein contact forms.
    pub pseudo_einstein: bool,
}

/// `Q′ = Δ_b Scal + ½ Scal² − 2|A|²`, weight −2.
pub fn q_prime_tw(inv: &PHInvariants) -> QPrimeTw {
    let p = structure_of(inv);
    let s = &p.scal;
    let mut v = p.sublaplacian(s);
    v = &v + &(s * s).scale(&GaussRational::from_frac(1, 2));
    v = &v - &p.torsion_norm().scale_int(2);
    QPrimeTw { field: PHField::new(v, -2), pseudo_einstein: pseudo_einstein_test(inv) }
}

/// The three summands of `Q′` (sublaplacian, square, torsion), for reporting.
pub fn q_prime_terms(inv: &PHInvariants) -> [MultiSeries; 3] {
    let p = structure_of(inv);
    let s = &p.scal;
    [p.sublaplacian(s), (s * s).scale(&GaussRational::from_frac(1, 2)), p.torsion_norm().scale_int(-2)]
}

/// `Df = Δ_b²f − Re ∇¹(Scal f₁ − 2i A₁₁ f¹)`.
pub fn d_operator(inv: &PHInvariants, f: &MultiSeries) -> MultiSeries {
    let p = structure_of(inv);
    let f1 = p.cov(Dir::Z, &scalar(f));
    let fup = p.raise(&p.cov(Dir::Zb, &scalar(f)));
    let x = Tensor { c1: 1, c2: 0, s: &(&p.scal * &f1.s) - &(&p.a11 * &fup.s).scale(&GaussRational::from_parts((0, 1), (2, 1))) };
    let div = p.raise(&p.cov(Dir::Zb, &x)).s;
    &p.sublaplacian(&p.sublaplacian(f)) - &div.re()
}

/// `P′f = Df + (2/3) Re(S¹f₁) + Q f` on weight-0 `f`, giving a weight −2 field.
pub fn p_prime_tw(inv: &PHInvariants, f: &PHField) -> Result<PHField> {
    if f.weight != 0 {
        return Err(Error::Precondition("P′ acts on weight-0 functions".into()));
    }
    let p = structure_of(inv);
    let fv = &f.value;
    let s1 = s_tensor(inv);
    let s_up = &s1.s.conj() * &p.h_inv;
    let cross = (&s_up * &p.apply(Dir::Z, fv)).re().scale(&GaussRational::from_frac(2, 3));
    let q = q_curvature_tw(inv).value;
    let v = &(&d_operator(inv, fv) + &cross) + &(&q * fv);
    Ok(PHField::new(v, -2))
}

/// `P₁f = f_{1̄}{}^{1̄}{}_1 + i A₁₁ f¹` in a given structure.
pub fn p1_operator(p: &PseudoHermitian, f: &MultiSeries) -> Tensor {
    let a = p.cov(Dir::Z, &p.raise(&p.covs(&[Dir::Zb, Dir::Z], &scalar(f))));
    let fup = p.raise(&p.cov(Dir::Zb, &scalar(f)));
    Tensor { c1: 1, c2: 0, s: &a.s + &(&p.a11 * &fup.s).scale(&GaussRational::i()) }
}

/// `(P₁f = 0, P₁f)`.
pub fn pluriharmonic_test(p: &PseudoHermitian, f: &MultiSeries) -> (bool, MultiSeries) {
    let w = p1_operator(p, f).s;
    let ok = w.equal_through(&MultiSeries::zero(w.vars(), w.trunc())).is_some();
    (ok, w)
}

/// The Paneitz operator `P f = (P₁f),¹`, weight 0 to weight −2, normalized to agree
/// with `Δ̃²` of an ambient extension.
pub fn paneitz_tw(p: &PseudoHermitian, f: &MultiSeries) -> MultiSeries {
    let x = p1_operator(p, f);
    p.raise(&p.cov(Dir::Zb, &x)).s
}

/// `P₁₁f = f,₁₁ + i A₁₁ f`.
pub fn p11_operator(p: &PseudoHermitian, f: &MultiSeries) -> Tensor {
    let d = p.covs(&[Dir::Z, Dir::Z], &scalar(f));
    Tensor { c1: 2, c2: 0, s: &d.s + &(&p.a11 * f).scale(&GaussRational::i()) }
}

#[derive(Clone, Debug)]
pub struct CartanCurvature {
    /// `𝒪¹¹`.
    pub o11: Tensor,
    /// `P*₁₁𝒪¹¹ = 𝒪¹¹,₁₁ + i A₁₁ 𝒪¹¹`.
    pub double_divergence: MultiSeries,
}

/// `𝒪¹¹ = (1/6)Scal¹¹ − (i/2)Scal A¹¹ − A¹¹,₀ + (2i/3)A¹¹,₁¹`.
pub fn cartan_obstruction(inv: &PHInvariants) -> CartanCurvature {
    let p = structure_of(inv);
    let i = GaussRational::i();
    let raise2 = |t: &Tensor| p.raise(&p.raise(t));
    let scal_up = raise2(&p.covs(&[Dir::Zb, Dir::Zb], &scalar(&p.scal)));
    let a_up = raise2(&p.a11_tensor().conj());
    let a_up0 = p.cov(Dir::T, &a_up);
    let a_up11 = p.raise(&p.covs(&[Dir::Z, Dir::Zb], &a_up));
    let mut o = scal_up.s.scale(&GaussRational::from_frac(1, 6));
    o = &o - &(&p.scal * &a_up.s).scale(&GaussRational::from_parts((0, 1), (1, 2)));
    o = &o - &a_up0.s;
    o = &o + &a_up11.s.scale(&GaussRational::from_parts((0, 1), (2, 3)));
    let o11 = Tensor { c1: -2, c2: 0, s: o };
    let dd = p.covs(&[Dir::Z, Dir::Z], &o11);
    let double_divergence = &dd.s + &(&p.a11 * &o11.s).scale(&i);
    CartanCurvature { o11, double_divergence }
}

/// `Scal² − 4|A|²`; the Burns–Epstein form is `−(1/16π²)` times this against `θ∧dθ`.
pub fn burns_epstein_integrand(inv: &PHInvariants) -> PHField {
    let p = structure_of(inv);
    PHField::new(&(&p.scal * &p.scal) - &p.torsion_norm().scale_int(4), -2)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn family(a: i64, b: i64, d: u32) -> PHInvariants {
        let s = RigidSurface::quadric(1, d);
        let hol = HolPoly::model_family(&GaussRational::from_int(a), &GaussRational::from_int(b));
        let u = pluriharmonic_field(&s, &hol).unwrap();
        scaled_invariants(&PseudoHermitian::rigid(&s).unwrap(), &u).unwrap()
    }

    #[test]
    fn family_values_at_origin() {
        for (a, b) in [(1, 0), (0, 1), (1, 1), (2, -1)] {
            let inv = family(a, b, 8);
            let g = GaussRational::from_int;
            assert_eq!(inv.scal.at_origin(), g(-4 * b - 2 * a * a), "Scal a={a} b={b}");
            assert_eq!(inv.a11.at_origin(), GaussRational::from_int(2 * a - a * a).mul_i());
            let [lap, sq, tor] = q_prime_terms(&inv);
            assert_eq!(lap.constant_term(), g(-8 * a * a * (a + b - 2)));
            assert_eq!(sq.constant_term(), g(2 * (a * a + 2 * b) * (a * a + 2 * b)));
            assert_eq!(tor.constant_term(), g(-2 * a * a * (a - 2) * (a - 2)));
            let q = q_prime_tw(&inv);
            assert!(q.pseudo_einstein);
            assert_eq!(q.field.at_origin(), g(8 * (a * a + b * b)));
            let q = q_curvature_tw(&inv).value;
            assert!(q.equal_through(&MultiSeries::zero(q.vars(), q.trunc())).is_some());
        }
    }

    #[test]
    fn scal_time_derivative_at_origin() {
        for (a, b) in [(1, 0), (0, 1), (1, 1), (2, -1), (-1, 2)] {
            let inv = family(a, b, 8);
            let s0 = inv.structure.apply(Dir::T, &inv.structure.scal).constant_term();
            assert_eq!(s0, GaussRational::from_int(8 * b * (a * a + b)), "a={a} b={b}");
        }
    }
}

