//! Pseudohermitian structures on 3-dimensional CR manifolds.
//!
//! A structure is stored as a contact form `θ`, an admissible coframe `θ¹`, the Levi
//! function `h` with `dθ = i h θ¹∧θ̄¹`, and the dual frame `(T, Z, Z̄)`. The Tanaka–Webster
//! connection form `ω`, torsion and scalar curvature are read off the structure
//! equations by evaluating exterior derivatives on frame pairs.
//!
//! Fields and forms have one component per coordinate of the ambient variable set.
//! Rigid hypersurfaces use the tangential coordinates `(z, z̄, t)`; the unit sphere
//! uses `(z, w, z̄, w̄)` with polynomials taken modulo `|z|² + |w|² = 1`.

use crate::error::{Error, Result};
use crate::gauss::GaussRational;
use crate::series::{MultiSeries, Vars};
use crate::surface::RigidSurface;

/// `Σ_k comps[k] ∂_k` over the structure's variables.
#[derive(Clone, Debug, PartialEq)]
pub struct VecField {
    pub comps: Vec<MultiSeries>,
}

/// `Σ_k comps[k] dx_k` over the structure's variables.
#[derive(Clone, Debug, PartialEq)]
pub struct Form1 {
    pub comps: Vec<MultiSeries>,
}

const Z: usize = 0;
const ZB: usize = 1;

fn conj_comps(v: &[MultiSeries]) -> Vec<MultiSeries> {
    let vars = v[0].vars();
    (0..v.len()).map(|k| v[vars.conj_index(k)].conj()).collect()
}

impl VecField {
    pub fn apply(&self, f: &MultiSeries) -> MultiSeries {
        let mut out = MultiSeries::zero(f.vars(), f.trunc());
        for (k, c) in self.comps.iter().enumerate() {
            if !c.is_zero() {
                out = &out + &(c * &f.derivative(k));
            }
        }
        out
    }

    pub fn conj(&self) -> Self {
        VecField { comps: conj_comps(&self.comps) }
    }

    pub fn bracket(&self, o: &Self) -> Self {
        let comps = self.comps.iter().zip(&o.comps).map(|(a, b)| &self.apply(b) - &o.apply(a)).collect();
        VecField { comps }
    }

    pub fn scale(&self, s: &MultiSeries) -> Self {
        VecField { comps: self.comps.iter().map(|c| c * s).collect() }
    }

    pub fn add(&self, o: &Self) -> Self {
        VecField { comps: self.comps.iter().zip(&o.comps).map(|(a, b)| a + b).collect() }
    }
}

impl Form1 {
    pub fn eval(&self, x: &VecField) -> MultiSeries {
        let mut it = self.comps.iter().zip(&x.comps).map(|(a, b)| a * b);
        let first = it.next().expect("nonempty form");
        it.fold(first, |acc, t| &acc + &t)
    }

    pub fn conj(&self) -> Self {
        Form1 { comps: conj_comps(&self.comps) }
    }

    pub fn scale(&self, s: &MultiSeries) -> Self {
        Form1 { comps: self.comps.iter().map(|c| c * s).collect() }
    }

    pub fn add(&self, o: &Self) -> Self {
        Form1 { comps: self.comps.iter().zip(&o.comps).map(|(a, b)| a + b).collect() }
    }
}

/// Polynomial relation the coordinates satisfy on the manifold.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Relation {
    /// Coordinates are independent.
    Free,
    /// `z1 zb1 + z2 zb2 = 1`; normal forms have no monomial divisible by `z2 zb2`.
    UnitSphere,
}

impl Relation {
    /// Normal form modulo the relation. The reliability marker is kept.
    pub fn reduce(&self, s: &MultiSeries) -> MultiSeries {
        match self {
            Relation::Free => s.clone(),
            Relation::UnitSphere => reduce_unit_sphere(s),
        }
    }
}

fn reduce_unit_sphere(s: &MultiSeries) -> MultiSeries {
    let v = s.vars();
    let idx = |n: &str| v.index(n).expect("sphere coordinates z1, z2, zb1, zb2");
    let (z, w, zb, wb) = (idx("z1"), idx("z2"), idx("zb1"), idx("zb2"));
    let mut out = Vec::new();
    for (e, c) in s.terms() {
        let m = e[w].min(e[wb]);
        let mut base = e.clone();
        base[w] -= m;
        base[wb] -= m;
        // (w w̄)^m = (1 − z z̄)^m
        let mut binom = GaussRational::one();
        for k in 0..=m {
            let mut f = base.clone();
            f[z] += k;
            f[zb] += k;
            let sign = if k % 2 == 0 { binom.clone() } else { -binom.clone() };
            out.push((f, &sign * c));
            binom = &binom * &GaussRational::from_frac((m - k) as i64, (k + 1) as i64);
        }
    }
    MultiSeries::from_terms(v, s.trunc(), out).with_rel(s.rel())
}

/// A component of a tensor in the frame, with one charge per kind of index:
/// lower `1` and upper `1̄` count `+1`/`−1` in `c1`; lower `1̄` and upper `1` likewise in `c2`.
///
/// Upper `1` on lowering becomes lower `1̄`, so a lower `1̄` raised becomes upper `1`:
/// charge `(c1, c2) ↦ (c1 − 1, c2 − 1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Tensor {
    pub c1: i32,
    pub c2: i32,
    pub s: MultiSeries,
}

impl Tensor {
    pub fn scalar(s: MultiSeries) -> Self {
        Tensor { c1: 0, c2: 0, s }
    }

    pub fn conj(&self) -> Self {
        Tensor { c1: self.c2, c2: self.c1, s: self.s.conj() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        Tensor { c1: self.c1 + o.c1, c2: self.c2 + o.c2, s: &self.s * &o.s }
    }

    pub fn scale(&self, c: &GaussRational) -> Self {
        Tensor { c1: self.c1, c2: self.c2, s: self.s.scale(c) }
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        if (self.c1, self.c2) != (o.c1, o.c2) && !self.s.is_zero() && !o.s.is_zero() {
            return Err(Error::Mismatch(format!(
                "cannot add tensor components of types ({}, {}) and ({}, {})",
                self.c1, self.c2, o.c1, o.c2
            )));
        }
        let (c1, c2) = if self.s.is_zero() { (o.c1, o.c2) } else { (self.c1, self.c2) };
        Ok(Tensor { c1, c2, s: &self.s + &o.s })
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.add(&o.scale(&-GaussRational::one()))
    }
}

/// Direction of a covariant derivative.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Dir {
    /// `,0` along `T`.
    T,
    /// `,1` along `Z`.
    Z,
    /// `,1̄` along `Z̄`.
    Zb,
}

#[derive(Clone, Debug)]
pub struct PseudoHermitian {
    pub vars: Vars,
    pub trunc: u32,
    pub relation: Relation,
    pub theta: Form1,
    pub theta1: Form1,
    pub h: MultiSeries,
    pub h_inv: MultiSeries,
    pub t_field: VecField,
    pub z_field: VecField,
    /// `ω₁¹` on `T`, `Z`, `Z̄`.
    pub omega: [MultiSeries; 3],
    /// `A₁₁`.
    pub a11: MultiSeries,
    pub scal: MultiSeries,
}

fn zero(v: &Vars, d: u32) -> MultiSeries {
    MultiSeries::zero(v, d)
}

fn check(rel: &Relation, name: &str, a: &MultiSeries, b: &MultiSeries) -> Result<()> {
    let d = rel.reduce(&(a - b));
    if d.equal_through(&MultiSeries::zero(d.vars(), d.trunc())).is_none() {
        return Err(Error::Validation(format!("structure check failed: {name}")));
    }
    Ok(())
}

impl PseudoHermitian {
    /// Solves the structure equations for the given data and validates the duality and
    /// `dθ = i h θ¹∧θ̄¹` relations.
    pub fn new(theta: Form1, theta1: Form1, h: MultiSeries, t_field: VecField, z_field: VecField) -> Result<Self> {
        Self::with_relation(Relation::Free, theta, theta1, h, t_field, z_field)
    }

    /// As [`PseudoHermitian::new`], with all identities taken modulo `relation`.
    pub fn with_relation(
        relation: Relation,
        theta: Form1,
        theta1: Form1,
        h: MultiSeries,
        t_field: VecField,
        z_field: VecField,
    ) -> Result<Self> {
        let h = relation.reduce(&h);
        let vars = h.vars().clone();
        let trunc = h.trunc();
        if h.constant_term().is_zero() {
            return Err(Error::Domain("Levi form degenerates at the base point".into()));
        }
        let h_inv = h.unit_inverse()?;
        let zb_field = z_field.conj();
        let one = MultiSeries::one(&vars, trunc);
        let nil = zero(&vars, trunc);
        let theta1b = theta1.conj();
        check(&relation, "θ(T) = 1", &theta.eval(&t_field), &one)?;
        check(&relation, "θ(Z) = 0", &theta.eval(&z_field), &nil)?;
        check(&relation, "θ¹(T) = 0", &theta1.eval(&t_field), &nil)?;
        check(&relation, "θ¹(Z) = 1", &theta1.eval(&z_field), &one)?;
        check(&relation, "θ¹(Z̄) = 0", &theta1.eval(&zb_field), &nil)?;

        let tz = t_field.bracket(&z_field);
        let tzb = t_field.bracket(&zb_field);
        let zzb = z_field.bracket(&zb_field);
        // dθ(X, Y) = −θ([X, Y]) on frame fields
        check(&relation, "dθ(T, Z) = 0", &theta.eval(&tz), &nil)?;
        check(&relation, "dθ(Z, Z̄) = i h", &-&theta.eval(&zzb), &h.mul_i())?;

        let red = |x: MultiSeries| relation.reduce(&x);
        let w_t = red(theta1.eval(&tz));
        let a_up = red(-&theta1.eval(&tzb));
        let w_zb = red(-&theta1.eval(&zzb));
        let w_z = red(&(&z_field.apply(&h) * &h_inv) - &w_zb.conj());
        check(&relation, "Re ω(T) = Th/2h", &w_t.re(), &(&t_field.apply(&h) * &h_inv).scale(&GaussRational::from_frac(1, 2)))?;

        let omega = [w_t, w_z, w_zb];
        let a11 = red((&h * &a_up).conj());
        let mut ph = PseudoHermitian {
            vars: vars.clone(),
            trunc,
            relation: relation.clone(),
            theta,
            theta1,
            h,
            h_inv,
            t_field,
            z_field,
            omega,
            a11,
            scal: nil,
        };
        let w_of_bracket = ph.omega_of(&zzb, &theta1b);
        let dw = &(&ph.z_field.apply(&ph.omega[2]) - &zb_field.apply(&ph.omega[1])) - &w_of_bracket;
        ph.scal = relation.reduce(&(&dw * &ph.h_inv));
        Ok(ph)
    }

    /// The rigid structure `θ = (i/2)(∂ − ∂̄)ρ` with `θ¹ = dz`, `Z = ∂_z − (i/2)F_z ∂_t`, `T = −∂_t`.
    pub fn rigid(surface: &RigidSurface) -> Result<Self> {
        if surface.n != 1 {
            return Err(Error::Precondition("the pseudohermitian engine handles n = 1 only".into()));
        }
        let vars = Vars::boundary(1);
        let trunc = surface.trunc();
        let f = surface.f.embed(&vars)?;
        let fz = f.derivative(Z);
        let fzb = f.derivative(ZB);
        let h = fz.derivative(ZB);
        let one = MultiSeries::one(&vars, trunc);
        let nil = zero(&vars, trunc);
        let half_i = GaussRational::from_parts((0, 1), (1, 2));
        let theta = Form1 { comps: vec![-&fz.scale(&half_i), fzb.scale(&half_i), -&one] };
        let theta1 = Form1 { comps: vec![one.clone(), nil.clone(), nil.clone()] };
        let t_field = VecField { comps: vec![nil.clone(), nil.clone(), -&one] };
        let z_field = VecField { comps: vec![one, nil, -&fz.scale(&half_i)] };
        Self::new(theta, theta1, h, t_field, z_field)
    }

    /// The Heisenberg model `F = |z|²` (flat).
    pub fn flat(trunc: u32) -> Self {
        Self::rigid(&RigidSurface::quadric(1, trunc)).expect("flat model")
    }

    /// The structure of `θ̂ = e^Υ θ` with coframe `θ̂¹ = θ¹ + iΥ¹θ`.
    pub fn scaled(&self, upsilon: &MultiSeries) -> Result<Self> {
        if upsilon.vars() != &self.vars {
            return Err(Error::Mismatch("scaling must be a field in (z, z̄, t)".into()));
        }
        if !upsilon.is_real() {
            return Err(Error::Precondition("scaling must be real".into()));
        }
        if !upsilon.constant_term().is_zero() {
            return Err(Error::Domain("scaling must vanish at the base point so that e^Υ stays rational".into()));
        }
        let e = upsilon.exp()?;
        let e_inv = (-upsilon).exp()?;
        let zb_field = self.z_field.conj();
        let up1 = &zb_field.apply(upsilon) * &self.h_inv;
        let up1b = up1.conj();
        let i = GaussRational::i();
        let theta = self.theta.scale(&e);
        let theta1 = self.theta1.add(&self.theta.scale(&up1.scale(&i)));
        let h = &self.h * &e;
        let t_field = self
            .t_field
            .add(&self.z_field.scale(&-&up1.scale(&i)))
            .add(&zb_field.scale(&up1b.scale(&i)))
            .scale(&e_inv);
        Self::with_relation(self.relation.clone(), theta, theta1, h, t_field, self.z_field.clone())
    }

    pub fn zb_field(&self) -> VecField {
        self.z_field.conj()
    }

    fn field(&self, d: Dir) -> VecField {
        match d {
            Dir::T => self.t_field.clone(),
            Dir::Z => self.z_field.clone(),
            Dir::Zb => self.zb_field(),
        }
    }

    /// `ω₁¹(X)` for an arbitrary vector field.
    fn omega_of(&self, x: &VecField, theta1b: &Form1) -> MultiSeries {
        let a = &self.theta.eval(x) * &self.omega[0];
        let b = &self.theta1.eval(x) * &self.omega[1];
        let c = &theta1b.eval(x) * &self.omega[2];
        &(&a + &b) + &c
    }

    fn omega_dir(&self, d: Dir) -> MultiSeries {
        match d {
            Dir::T => self.omega[0].clone(),
            Dir::Z => self.omega[1].clone(),
            Dir::Zb => self.omega[2].clone(),
        }
    }

    /// `conj(ω₁¹(X̄))`, the connection form acting on barred indices.
    fn omega_bar_dir(&self, d: Dir) -> MultiSeries {
        match d {
            Dir::T => self.omega[0].conj(),
            Dir::Z => self.omega[2].conj(),
            Dir::Zb => self.omega[1].conj(),
        }
    }

    pub fn apply(&self, d: Dir, f: &MultiSeries) -> MultiSeries {
        self.relation.reduce(&self.field(d).apply(f))
    }

    pub fn reduce(&self, f: &MultiSeries) -> MultiSeries {
        self.relation.reduce(f)
    }

    /// Covariant derivative, appending the index `d`.
    pub fn cov(&self, d: Dir, x: &Tensor) -> Tensor {
        let mut s = self.apply(d, &x.s);
        if x.c1 != 0 {
            s = &s - &(&self.omega_dir(d) * &x.s).scale_int(x.c1 as i64);
        }
        if x.c2 != 0 {
            s = &s - &(&self.omega_bar_dir(d) * &x.s).scale_int(x.c2 as i64);
        }
        let s = self.relation.reduce(&s);
        let (c1, c2) = match d {
            Dir::T => (x.c1, x.c2),
            Dir::Z => (x.c1 + 1, x.c2),
            Dir::Zb => (x.c1, x.c2 + 1),
        };
        Tensor { c1, c2, s }
    }

    /// Iterated covariant derivatives, innermost first.
    pub fn covs(&self, dirs: &[Dir], x: &Tensor) -> Tensor {
        dirs.iter().fold(x.clone(), |acc, &d| self.cov(d, &acc))
    }

    /// Turns the last lower `1̄` into an upper `1` (or a lower `1` into an upper `1̄`,
    /// since both shift the charges the same way).
    pub fn raise(&self, x: &Tensor) -> Tensor {
        Tensor { c1: x.c1 - 1, c2: x.c2 - 1, s: &x.s * &self.h_inv }
    }

    pub fn lower(&self, x: &Tensor) -> Tensor {
        Tensor { c1: x.c1 + 1, c2: x.c2 + 1, s: &x.s * &self.h }
    }

    /// `Δ_b f = −(f_{11̄} + f_{1̄1})/h` on a scalar.
    pub fn sublaplacian(&self, f: &MultiSeries) -> MultiSeries {
        let f = Tensor::scalar(f.clone());
        let a = self.covs(&[Dir::Z, Dir::Zb], &f).s;
        let b = self.covs(&[Dir::Zb, Dir::Z], &f).s;
        -&(&(&a + &b) * &self.h_inv)
    }

    pub fn a11_tensor(&self) -> Tensor {
        Tensor { c1: 2, c2: 0, s: self.a11.clone() }
    }

    /// `|A|² = A₁₁ A^{11}`.
    pub fn torsion_norm(&self) -> MultiSeries {
        &(&self.a11 * &self.a11.conj()) * &(&self.h_inv * &self.h_inv)
    }

    pub fn one(&self) -> MultiSeries {
        MultiSeries::one(&self.vars, self.trunc)
    }

    pub fn zero(&self) -> MultiSeries {
        zero(&self.vars, self.trunc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_model_has_no_curvature() {
        let p = PseudoHermitian::flat(6);
        assert!(p.scal.is_zero());
        assert!(p.a11.is_zero());
        assert!(p.omega.iter().all(|w| w.is_zero()));
    }

    #[test]
    fn commutator_on_functions() {
        let p = PseudoHermitian::flat(8);
        let v = p.vars.clone();
        let z = MultiSeries::var(&v, 8, "z1").unwrap();
        let t = MultiSeries::var(&v, 8, "t").unwrap();
        let ups = &(&(&z * &z.conj()) * &t).scale_int(1) + &(&z.pow(2) + &z.conj().pow(2));
        let q = p.scaled(&ups).unwrap();
        let f = Tensor::scalar(&(&z.pow(3) * &t) + &(&z.conj().pow(3) * &t));
        let a = q.covs(&[Dir::Z, Dir::Zb], &f).s;
        let b = q.covs(&[Dir::Zb, Dir::Z], &f).s;
        let f0 = q.apply(Dir::T, &f.s);
        let rhs = (&q.h * &f0).mul_i();
        assert!((&a - &b).equal_through(&rhs).is_some());
    }
}
