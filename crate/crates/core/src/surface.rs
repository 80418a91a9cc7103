//! Hypersurfaces `ρ = w + w̄ − G = 0` near the origin and their boundary charts.
//!
//! The chart uses coordinates `(z, z̄, t, s)` on a neighbourhood of the origin with
//! `w = u/2 + it`, where `u = w + w̄` solves `u = s + G(z, z̄, u/2 + it, u/2 − it)`.
//! On the chart `ρ = s` exactly, so the `s^k` coefficient of a function is its `ρ^k`
//! Taylor coefficient, and `s = 0` is the hypersurface with coordinates `(z, t)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gauss::GaussRational;
use crate::series::{EXACT, MultiSeries, Vars};

/// Chart variables `z1..zn, zb1..zbn, t, s`.
pub fn chart_vars(n: usize) -> Vars {
    let mut v: Vec<String> = (1..=n).map(|k| format!("z{k}")).collect();
    v.extend((1..=n).map(|k| format!("zb{k}")));
    v.push("t".into());
    v.push("s".into());
    Vars::new(&v).expect("chart vars")
}

/// Tangential variables `z1..zn, zb1..zbn` (no `w`).
pub fn tangential_vars(n: usize) -> Vars {
    let mut v: Vec<String> = (1..=n).map(|k| format!("z{k}")).collect();
    v.extend((1..=n).map(|k| format!("zb{k}")));
    Vars::new(&v).expect("tangential vars")
}

/// A rigid hypersurface `w + w̄ = F(z, z̄)` with `F = |z|² + O(|z|³)` real.
#[derive(Clone, Debug, PartialEq)]
pub struct RigidSurface {
    pub n: usize,
    pub f: MultiSeries,
}

impl RigidSurface {
    pub fn new(n: usize, f: MultiSeries) -> Result<Self> {
        if !(1..=2).contains(&n) {
            return Err(Error::Precondition(format!("CR dimension must be 1 or 2, got {n}")));
        }
        if f.vars() != &tangential_vars(n) {
            return Err(Error::Mismatch("F must be a series in z1..zn, zb1..zbn".into()));
        }
        if !f.is_real() {
            return Err(Error::Precondition("F is not real".into()));
        }
        for (e, c) in f.terms() {
            let hol: u32 = e[..n].iter().map(|&x| x as u32).sum();
            let anti: u32 = e[n..].iter().map(|&x| x as u32).sum();
            let deg = hol + anti;
            if deg < 2 {
                return Err(Error::Precondition("F has constant or linear terms".into()));
            }
            if hol == 0 || anti == 0 {
                return Err(Error::Precondition("F has pure (anti)holomorphic terms".into()));
            }
            if deg == 2 {
                let diag = (0..n).any(|j| e[j] == 1 && e[n + j] == 1);
                if !diag || *c != GaussRational::one() {
                    return Err(Error::Precondition("quadratic part of F must be Σ|z_j|²".into()));
                }
            }
        }
        for j in 0..n {
            let mut e = vec![0; 2 * n];
            e[j] = 1;
            e[n + j] = 1;
            if f.coeff(&e) != GaussRational::one() {
                return Err(Error::Precondition("quadratic part of F must be Σ|z_j|²".into()));
            }
        }
        Ok(RigidSurface { n, f })
    }

    pub fn quadric(n: usize, trunc: u32) -> Self {
        let v = tangential_vars(n);
        let mut f = MultiSeries::zero(&v, trunc);
        for j in 1..=n {
            let z = MultiSeries::var(&v, trunc, &format!("z{j}")).unwrap();
            f = &f + &(&z * &z.conj());
        }
        RigidSurface { n, f }
    }

    pub fn trunc(&self) -> u32 {
        self.f.trunc()
    }

    pub fn to_json(&self) -> SurfaceJson {
        let n = self.n;
        SurfaceJson {
            n,
            f_terms: self
                .f
                .terms()
                .map(|(e, c)| SurfaceTerm { exp_z: e[..n].to_vec(), exp_zbar: e[n..].to_vec(), coeff: c.to_string() })
                .collect(),
            trunc: self.trunc(),
        }
    }

    pub fn from_json(j: &SurfaceJson) -> Result<Self> {
        let n = j.n;
        if !(1..=2).contains(&n) {
            return Err(Error::Parse(format!("n must be 1 or 2, got {n}")));
        }
        if j.trunc == 0 || j.trunc > 40 {
            return Err(Error::Parse("trunc must lie in 1..=40".into()));
        }
        let v = tangential_vars(n);
        let mut terms = Vec::new();
        for t in &j.f_terms {
            if t.exp_z.len() != n || t.exp_zbar.len() != n {
                return Err(Error::Parse("exp_z and exp_zbar must have length n".into()));
            }
            let mut e = t.exp_z.clone();
            e.extend_from_slice(&t.exp_zbar);
            if e.iter().map(|&x| x as u32).sum::<u32>() > 4 * j.trunc {
                return Err(Error::Parse("term degree far above trunc".into()));
            }
            terms.push((e, GaussRational::parse(&t.coeff)?));
        }
        Self::new(n, MultiSeries::from_terms(&v, j.trunc, terms))
    }

    pub fn decode(text: &str) -> Result<Self> {
        let j: SurfaceJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_json(&j)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct SurfaceTerm {
    pub exp_z: Vec<u16>,
    pub exp_zbar: Vec<u16>,
    pub coeff: String,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct SurfaceJson {
    pub n: usize,
    #[serde(rename = "F_terms")]
    pub f_terms: Vec<SurfaceTerm>,
    pub trunc: u32,
}

/// A hypersurface `ρ = w + w̄ − G(z, z̄, w, w̄)` through the origin, `G = O(2)`.
#[derive(Clone, Debug)]
pub struct Hypersurface {
    pub n: usize,
    /// `ρ` in the base variables.
    pub rho: MultiSeries,
    /// `u = w + w̄` on the chart.
    u: MultiSeries,
}

impl Hypersurface {
    /// From `G` given in the base variables.
    pub fn from_g(n: usize, g: &MultiSeries) -> Result<Self> {
        let base = Vars::base(n);
        if g.vars() != &base {
            return Err(Error::Mismatch("G must be a series in the base variables".into()));
        }
        if let Some(d) = g.min_degree() {
            if d < 2 {
                return Err(Error::Domain("G must vanish to second order at the origin".into()));
            }
        }
        let trunc = g.trunc();
        let w = MultiSeries::var(&base, trunc, &format!("z{}", n + 1))?;
        let rho = &(&w + &w.conj()) - g;
        let cv = chart_vars(n);
        let s = MultiSeries::var(&cv, trunc, "s")?;
        let it = MultiSeries::var(&cv, trunc, "t")?.mul_i();
        let half = GaussRational::from_frac(1, 2);
        let mut u = s.clone();
        for _ in 0..=trunc {
            let images = Self::images_for(n, &cv, trunc, &u.scale(&half), &it);
            let next = &s + &g.compose(&cv, trunc, &images)?;
            if next == u {
                break;
            }
            u = next;
        }
        Ok(Hypersurface { n, rho, u })
    }

    pub fn rigid(s: &RigidSurface) -> Result<Self> {
        let base = Vars::base(s.n);
        let g = s.f.embed(&base)?;
        Self::from_g(s.n, &g)
    }

    pub fn quadric(n: usize, trunc: u32) -> Self {
        Self::rigid(&RigidSurface::quadric(n, trunc)).expect("quadric")
    }

    /// The unit ball moved so that the boundary point `w = 1` sits at the origin
    /// (`w ↦ 1 − w`): `ρ = w + w̄ − |z|² − |w|²`.
    pub fn ball(n: usize, trunc: u32) -> Self {
        let base = Vars::base(n);
        let mut g = MultiSeries::zero(&base, trunc);
        for j in 1..=n + 1 {
            let z = MultiSeries::var(&base, trunc, &format!("z{j}")).unwrap();
            g = &g + &(&z * &z.conj());
        }
        Self::from_g(n, &g).expect("ball")
    }

    pub fn trunc(&self) -> u32 {
        self.rho.trunc()
    }

    pub fn base_vars(&self) -> Vars {
        self.rho.vars().clone()
    }

    fn images_for(n: usize, target: &Vars, trunc: u32, half_u: &MultiSeries, it: &MultiSeries) -> Vec<MultiSeries> {
        let mut images = Vec::with_capacity(2 * n + 2);
        for j in 1..=n {
            images.push(MultiSeries::var(target, trunc, &format!("z{j}")).unwrap());
        }
        images.push(half_u + it);
        for j in 1..=n {
            images.push(MultiSeries::var(target, trunc, &format!("zb{j}")).unwrap());
        }
        images.push(half_u - it);
        images
    }

    /// Rewrites a base series in chart coordinates `(z, z̄, t, s)`.
    pub fn to_chart(&self, f: &MultiSeries) -> Result<MultiSeries> {
        let cv = chart_vars(self.n);
        let trunc = f.trunc().min(self.u.trunc());
        let it = MultiSeries::var(&cv, trunc, "t")?.mul_i();
        let half_u = self.u.with_trunc(trunc).scale(&GaussRational::from_frac(1, 2));
        let images = Self::images_for(self.n, &cv, trunc, &half_u, &it);
        f.compose(&cv, trunc, &images)
    }

    /// Coefficient of `s^k` of a chart series, as a boundary series in `(z, z̄, t)`.
    pub fn s_coefficient(&self, chart: &MultiSeries, k: u16) -> MultiSeries {
        let bv = Vars::boundary(self.n);
        let m = bv.len();
        let mut out = Vec::new();
        for (e, c) in chart.terms() {
            if e[m] == k {
                out.push((e[..m].to_vec(), c.clone()));
            }
        }
        let rel = chart.rel();
        let c = MultiSeries::from_terms(&bv, chart.trunc(), out);
        if rel == EXACT {
            c
        } else {
            c.with_rel(rel - k as i32)
        }
    }

    /// Restriction of a base series to the hypersurface.
    pub fn restrict(&self, f: &MultiSeries) -> Result<MultiSeries> {
        Ok(self.s_coefficient(&self.to_chart(f)?, 0))
    }

    /// Extends a boundary series off the surface via `t = (w − w̄)/(2i)`.
    pub fn extend(&self, c: &MultiSeries) -> Result<MultiSeries> {
        let base = self.base_vars();
        let n = self.n;
        let trunc = c.trunc();
        let w = MultiSeries::var(&base, trunc, &format!("z{}", n + 1))?;
        let t = (&w - &w.conj()).scale(&GaussRational::from_parts((0, 1), (-1, 2)));
        let mut images = Vec::with_capacity(2 * n + 1);
        for j in 1..=n {
            images.push(MultiSeries::var(&base, trunc, &format!("z{j}"))?);
        }
        for j in 1..=n {
            images.push(MultiSeries::var(&base, trunc, &format!("zb{j}"))?);
        }
        images.push(t);
        c.compose(&base, trunc, &images)
    }
}

/// A holomorphic polynomial `Σ c z^e w^k`, used through `2 Re(·)`.
#[derive(Clone, Debug, PartialEq)]
pub struct HolPoly {
    pub n: usize,
    pub terms: Vec<(Vec<u16>, u16, GaussRational)>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum ExpZ {
    Scalar(u16),
    Multi(Vec<u16>),
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct HolTerm {
    pub exp_z: ExpZ,
    pub exp_w: u16,
    pub coeff: String,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct HolJson {
    pub hol_terms: Vec<HolTerm>,
}

impl HolPoly {
    pub fn new(n: usize, terms: Vec<(Vec<u16>, u16, GaussRational)>) -> Self {
        HolPoly { n, terms }
    }

    pub fn zero(n: usize) -> Self {
        HolPoly { n, terms: Vec::new() }
    }

    /// n = 1 convenience: `Σ c z^e w^k`.
    pub fn from_n1(terms: &[(u16, u16, GaussRational)]) -> Self {
        HolPoly { n: 1, terms: terms.iter().map(|(e, k, c)| (vec![*e], *k, c.clone())).collect() }
    }

    /// The scaling family `a(z² + z) + b(1 + i)w`.
    pub fn model_family(a: &GaussRational, b: &GaussRational) -> Self {
        let bi = b * &GaussRational::from_parts((1, 1), (1, 1));
        Self::from_n1(&[(2, 0, a.clone()), (1, 0, a.clone()), (0, 1, bi)])
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut terms = self.terms.clone();
        terms.extend(o.terms.iter().cloned());
        HolPoly { n: self.n, terms }
    }

    pub fn scale(&self, c: &GaussRational) -> Self {
        HolPoly { n: self.n, terms: self.terms.iter().map(|(e, k, x)| (e.clone(), *k, x * c)).collect() }
    }

    pub fn degree(&self) -> u32 {
        self.terms.iter().map(|(e, k, _)| e.iter().map(|&x| x as u32).sum::<u32>() + *k as u32).max().unwrap_or(0)
    }

    pub fn has_constant(&self) -> bool {
        self.terms.iter().any(|(e, k, c)| *k == 0 && e.iter().all(|&x| x == 0) && !c.is_zero())
    }

    /// The holomorphic polynomial itself in base variables.
    pub fn holomorphic(&self, trunc: u32) -> MultiSeries {
        let v = Vars::base(self.n);
        let m = self.n + 1;
        let terms = self.terms.iter().map(|(e, k, c)| {
            let mut x = vec![0; 2 * m];
            x[..self.n].copy_from_slice(e);
            x[self.n] = *k;
            (x, c.clone())
        });
        MultiSeries::from_terms(&v, trunc, terms)
    }

    /// `2 Re(Σ c z^e w^k)` in base variables.
    pub fn real_part2(&self, trunc: u32) -> MultiSeries {
        let h = self.holomorphic(trunc);
        &h + &h.conj()
    }

    pub fn to_json(&self) -> HolJson {
        HolJson {
            hol_terms: self
                .terms
                .iter()
                .map(|(e, k, c)| HolTerm {
                    exp_z: if self.n == 1 { ExpZ::Scalar(e[0]) } else { ExpZ::Multi(e.clone()) },
                    exp_w: *k,
                    coeff: c.to_string(),
                })
                .collect(),
        }
    }

    pub fn from_json(n: usize, j: &HolJson) -> Result<Self> {
        let mut terms = Vec::new();
        for t in &j.hol_terms {
            let e = match &t.exp_z {
                ExpZ::Scalar(x) => vec![*x],
                ExpZ::Multi(v) => v.clone(),
            };
            if e.len() != n {
                return Err(Error::Parse(format!("exp_z must have {n} entries")));
            }
            if e.iter().map(|&x| x as u32).sum::<u32>() + t.exp_w as u32 > 64 {
                return Err(Error::Parse("hol term degree too large".into()));
            }
            terms.push((e, t.exp_w, GaussRational::parse(&t.coeff)?));
        }
        Ok(HolPoly { n, terms })
    }

    pub fn decode(n: usize, text: &str) -> Result<Self> {
        let j: HolJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_json(n, &j)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::mono;

    #[test]
    fn quadric_chart_restricts_w() {
        let h = Hypersurface::quadric(1, 6);
        let base = h.base_vars();
        let w = MultiSeries::var(&base, 6, "z2").unwrap();
        let bw = h.restrict(&w).unwrap();
        let bv = Vars::boundary(1);
        let expect = &mono(&bv, 6, GaussRational::from_frac(1, 2), &[("z1", 1), ("zb1", 1)])
            + &mono(&bv, 6, GaussRational::i(), &[("t", 1)]);
        assert_eq!(bw, expect);
        let rho_chart = h.to_chart(&h.rho).unwrap();
        assert_eq!(rho_chart, MultiSeries::var(&chart_vars(1), 6, "s").unwrap());
    }

    #[test]
    fn ball_chart_makes_rho_the_s_coordinate() {
        let h = Hypersurface::ball(1, 7);
        let rho_chart = h.to_chart(&h.rho).unwrap();
        assert_eq!(rho_chart, MultiSeries::var(&chart_vars(1), 7, "s").unwrap());
    }

    #[test]
    fn extension_restricts_back() {
        let h = Hypersurface::quadric(1, 6);
        let bv = Vars::boundary(1);
        let c = &mono(&bv, 6, GaussRational::from_int(3), &[("t", 2), ("z1", 1)]) + &MultiSeries::one(&bv, 6);
        assert_eq!(h.restrict(&h.extend(&c).unwrap()).unwrap(), c);
    }

    #[test]
    fn surface_validation() {
        let text = r#"{"n":1,"F_terms":[{"exp_z":[1],"exp_zbar":[1],"coeff":"1"},{"exp_z":[2],"exp_zbar":[3],"coeff":"1/10"},{"exp_z":[3],"exp_zbar":[2],"coeff":"1/10"}],"trunc":8}"#;
        let s = RigidSurface::decode(text).unwrap();
        assert_eq!(RigidSurface::from_json(&s.to_json()).unwrap(), s);
        let unreal = r#"{"n":1,"F_terms":[{"exp_z":[1],"exp_zbar":[1],"coeff":"1"},{"exp_z":[2],"exp_zbar":[3],"coeff":"1/10"}],"trunc":8}"#;
        assert!(matches!(RigidSurface::decode(unreal), Err(Error::Precondition(_))));
        let pure = r#"{"n":1,"F_terms":[{"exp_z":[1],"exp_zbar":[1],"coeff":"1"},{"exp_z":[3],"exp_zbar":[0],"coeff":"1"},{"exp_z":[0],"exp_zbar":[3],"coeff":"1"}],"trunc":8}"#;
        assert!(RigidSurface::decode(pure).is_err());
        assert!(matches!(RigidSurface::decode("{"), Err(Error::Parse(_))));
    }

    #[test]
    fn hol_json_round_trip() {
        let p = HolPoly::model_family(&GaussRational::from_int(2), &GaussRational::from_frac(-1, 3));
        let back = HolPoly::from_json(1, &p.to_json()).unwrap();
        assert_eq!(back, p);
        assert!(p.real_part2(6).is_real());
    }
}
