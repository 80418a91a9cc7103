//! The ambient metric `g̃ = −i∂∂̄(|z⁰|² r)` and its Laplacian.
//!
//! In coordinates `(z⁰, z¹..z^{n+1})` the metric factors as `g_{IJ̄} = −(z⁰)^{e_I} M_{IJ} (z̄⁰)^{e_J}`
//! with `e_0 = 0`, `e_j = 1` and the bordered Hessian
//! `M = [[r, r_k̄], [r_j, r_{jk̄}]]` of the base series `r`. Everything the engine needs
//! (inverse, determinant, Laplacian) reduces to series arithmetic on `M`.

use std::sync::OnceLock;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::ambient::{AmbientElement, Index};
use crate::error::{Error, Result};
use crate::gauss::GaussRational;
use crate::series::{MultiSeries, Vars};

pub type SeriesMatrix = Vec<Vec<MultiSeries>>;

pub fn determinant(m: &SeriesMatrix) -> MultiSeries {
    let k = m.len();
    match k {
        0 => panic!("empty matrix"),
        1 => m[0][0].clone(),
        2 => &(&m[0][0] * &m[1][1]) - &(&m[0][1] * &m[1][0]),
        _ => {
            let mut acc = MultiSeries::zero(m[0][0].vars(), m[0][0].trunc());
            for j in 0..k {
                if m[0][j].is_zero() {
                    continue;
                }
                let term = &m[0][j] * &determinant(&minor(m, 0, j));
                acc = if j % 2 == 0 { &acc + &term } else { &acc - &term };
            }
            acc
        }
    }
}

fn minor(m: &SeriesMatrix, row: usize, col: usize) -> SeriesMatrix {
    m.iter()
        .enumerate()
        .filter(|(i, _)| *i != row)
        .map(|(_, r)| r.iter().enumerate().filter(|(j, _)| *j != col).map(|(_, x)| x.clone()).collect())
        .collect()
}

/// Adjugate: `adj[i][j] = (−1)^{i+j} det(minor(j, i))`.
pub fn adjugate(m: &SeriesMatrix) -> SeriesMatrix {
    let k = m.len();
    (0..k)
        .map(|i| {
            (0..k)
                .map(|j| {
                    let d = if k == 1 { MultiSeries::one(m[0][0].vars(), m[0][0].trunc()) } else { determinant(&minor(m, j, i)) };
                    if (i + j) % 2 == 0 {
                        d
                    } else {
                        -&d
                    }
                })
                .collect()
        })
        .collect()
}

/// Holomorphic base-variable name for index `j ∈ 1..=n+1`.
fn zname(j: usize) -> String {
    format!("z{j}")
}

fn zbname(j: usize) -> String {
    format!("zb{j}")
}

/// Number of holomorphic base variables (`n + 1`).
fn base_dim(v: &Vars) -> usize {
    v.len() / 2
}

/// The bordered Hessian `M` of `r`.
pub fn bordered_hessian(r: &MultiSeries) -> Result<SeriesMatrix> {
    let v = r.vars();
    let m = base_dim(v);
    let mut out = vec![vec![MultiSeries::zero(v, r.trunc()); m + 1]; m + 1];
    out[0][0] = r.clone();
    let mut dz = Vec::with_capacity(m);
    for j in 1..=m {
        let d = r.derivative_by(&zname(j))?;
        out[0][j] = r.derivative_by(&zbname(j))?;
        out[j][0] = d.clone();
        dz.push(d);
    }
    for j in 1..=m {
        for k in 1..=m {
            out[j][k] = dz[j - 1].derivative_by(&zbname(k))?;
        }
    }
    Ok(out)
}

/// `det M` without the calibration sign.
pub fn bordered_determinant(r: &MultiSeries) -> Result<MultiSeries> {
    Ok(determinant(&bordered_hessian(r)?))
}

/// Unit ball defining function `1 − Σ|z_j|²` in the base variables of dimension `n`.
pub fn ball_defining(n: usize, trunc: u32) -> MultiSeries {
    let v = Vars::base(n);
    let mut r = MultiSeries::one(&v, trunc);
    for j in 1..=n + 1 {
        let z = MultiSeries::var(&v, trunc, &zname(j)).unwrap();
        r = &r - &(&z * &z.conj());
    }
    r
}

/// The calibration sign: `σ det M[1 − |ζ|²] = +1`.
pub fn sigma(n: usize) -> i64 {
    static CACHE: OnceLock<[i64; 4]> = OnceLock::new();
    let table = CACHE.get_or_init(|| {
        let mut t = [0i64; 4];
        for (k, slot) in t.iter_mut().enumerate().skip(1) {
            let d = bordered_determinant(&ball_defining(k, 4)).expect("ball determinant");
            let one = MultiSeries::one(d.vars(), d.trunc());
            *slot = if d == one {
                1
            } else if d == -&one {
                -1
            } else {
                panic!("ball determinant is not ±1")
            };
        }
        t
    });
    if n < table.len() {
        table[n]
    } else {
        let d = bordered_determinant(&ball_defining(n, 4)).expect("ball determinant");
        if d.constant_term() == GaussRational::one() {
            1
        } else {
            -1
        }
    }
}

/// The Monge–Ampère operator `𝒥[r] = σ det M`.
pub fn monge_ampere(r: &MultiSeries) -> Result<MultiSeries> {
    let v = r.vars();
    if v.len() % 2 != 0 || v.len() < 4 {
        return Err(Error::Mismatch("monge_ampere expects base variables z1..z{n+1}, zb1..zb{n+1}".into()));
    }
    let n = base_dim(v) - 1;
    if r.constant_term().is_zero() && r.min_degree().map(|d| d >= 2).unwrap_or(true) {
        return Err(Error::Domain("defining function has vanishing gradient at the origin".into()));
    }
    Ok(bordered_determinant(r)?.scale_int(sigma(n)))
}

/// Inertia `(positive, negative, zero)` of a constant hermitian matrix.
pub fn inertia(h: &[Vec<GaussRational>]) -> (usize, usize, usize) {
    let mut a: Vec<Vec<GaussRational>> = h.to_vec();
    let mut pos = 0;
    let mut neg = 0;
    let mut k = a.len();
    while k > 0 {
        // find a nonzero diagonal entry
        let mut piv = (0..k).find(|&i| !a[i][i].is_zero());
        if piv.is_none() {
            if let Some((i, j)) = (0..k).flat_map(|i| (0..k).map(move |j| (i, j))).find(|&(i, j)| !a[i][j].is_zero()) {
                // row/col i += c·(row/col j) with c chosen so the new diagonal is 2 Re(c a_ij) ≠ 0
                let c = a[i][j].conj();
                let kk = a.len();
                for col in 0..kk {
                    let x = &a[j][col] * &c.conj();
                    a[i][col] += &x;
                }
                for row in 0..kk {
                    let x = &a[row][j] * &c;
                    a[row][i] += &x;
                }
                piv = Some(i);
            } else {
                break;
            }
        }
        let p = piv.unwrap();
        a.swap(p, k - 1);
        for row in a.iter_mut() {
            row.swap(p, k - 1);
        }
        let d = a[k - 1][k - 1].clone();
        if d.re > BigRational::zero() {
            pos += 1;
        } else {
            neg += 1;
        }
        let dinv = d.inv().expect("nonzero pivot");
        for i in 0..k - 1 {
            let f = &a[i][k - 1] * &dinv;
            for j in 0..k - 1 {
                let x = &f * &a[k - 1][j];
                a[i][j] -= &x;
            }
        }
        k -= 1;
        a.truncate(k);
        for row in a.iter_mut() {
            row.truncate(k);
        }
    }
    let zero = h.len() - pos - neg;
    (pos, neg, zero)
}

#[derive(Clone, Debug)]
pub struct AmbientMetric {
    pub n: usize,
    pub r: MultiSeries,
    /// Bordered Hessian `M`.
    pub m: SeriesMatrix,
    pub m_inv: SeriesMatrix,
    pub det_m: MultiSeries,
    pub sigma: i64,
    pub det_identity_checked: bool,
}

fn e(i: usize) -> BigRational {
    if i == 0 {
        BigRational::zero()
    } else {
        BigRational::one()
    }
}

impl AmbientMetric {
    pub fn build(r: &MultiSeries) -> Result<Self> {
        let v = r.vars();
        let n = base_dim(v) - 1;
        if !r.is_real() {
            return Err(Error::Precondition("defining series must be real".into()));
        }
        let m = bordered_hessian(r)?;
        let det_m = determinant(&m);
        if det_m.constant_term().is_zero() {
            return Err(Error::Domain("metric determinant is not a unit series (Levi-degenerate input)".into()));
        }
        let inv_det = det_m.unit_inverse()?;
        let adj = adjugate(&m);
        let m_inv: SeriesMatrix = adj.iter().map(|row| row.iter().map(|x| x * &inv_det).collect()).collect();
        let metric = AmbientMetric { n, r: r.clone(), m, m_inv, det_m, sigma: sigma(n), det_identity_checked: false };
        metric.check_inverse()?;
        let mut metric = metric;
        metric.check_determinant()?;
        metric.det_identity_checked = true;
        Ok(metric)
    }

    pub fn vars(&self) -> &Vars {
        self.r.vars()
    }

    pub fn trunc(&self) -> u32 {
        self.r.trunc()
    }

    pub fn size(&self) -> usize {
        self.n + 2
    }

    fn index(i: usize) -> Index {
        if i == 0 {
            Index::Fiber
        } else {
            Index::Base(i)
        }
    }

    /// `g_{IJ̄}` as an ambient element.
    pub fn g_lower(&self, i: usize, j: usize) -> AmbientElement {
        AmbientElement::new(e(i), e(j), vec![-&self.m[i][j]]).expect("metric entry")
    }

    /// `g^{IJ̄}` with `Σ_J g_{IJ̄} g^{KJ̄} = δ_I^K`.
    pub fn g_upper(&self, i: usize, j: usize) -> AmbientElement {
        AmbientElement::new(-e(i), -e(j), vec![-&self.m_inv[j][i]]).expect("inverse entry")
    }

    fn check_inverse(&self) -> Result<()> {
        let k = self.size();
        let v = self.vars();
        for i in 0..k {
            for j in 0..k {
                let mut acc = MultiSeries::zero(v, self.trunc());
                for l in 0..k {
                    acc = &acc + &(&self.m[i][l] * &self.m_inv[l][j]);
                }
                let want = if i == j { MultiSeries::one(v, self.trunc()) } else { MultiSeries::zero(v, self.trunc()) };
                if acc != want {
                    return Err(Error::Validation("M · M⁻¹ ≠ 1 up to truncation".into()));
                }
            }
        }
        Ok(())
    }

    /// `det g = (−1)^{n+2} |z⁰|^{2(n+1)} det M`, verified by expanding `det g` over ambient elements.
    fn check_determinant(&self) -> Result<()> {
        let k = self.size();
        let entries: Vec<Vec<AmbientElement>> = (0..k).map(|i| (0..k).map(|j| self.g_lower(i, j)).collect()).collect();
        let det = ambient_det(&entries)?;
        let np1 = BigRational::from_integer((self.n as i64 + 1).into());
        let sign = if (self.n + 2) % 2 == 0 { 1 } else { -1 };
        let j = bordered_determinant(&self.r)?.scale_int(self.sigma);
        let want = AmbientElement::new(np1.clone(), np1, vec![j.scale_int(sign * self.sigma)])?;
        if det != want {
            return Err(Error::Validation("det g̃ does not match σ𝒥 times the fiber factor".into()));
        }
        Ok(())
    }

    /// Constant-term inertia of `g̃` at `z⁰ = 1` over the origin.
    pub fn signature_at_origin(&self) -> (usize, usize, usize) {
        let k = self.size();
        let h: Vec<Vec<GaussRational>> = (0..k).map(|i| (0..k).map(|j| -self.m[i][j].constant_term()).collect()).collect();
        inertia(&h)
    }

    pub fn is_hermitian(&self) -> bool {
        let k = self.size();
        (0..k).all(|i| (0..k).all(|j| self.m[i][j].conj() == self.m[j][i]))
    }

    /// `r♯ = |z⁰|² r`.
    pub fn r_sharp(&self) -> AmbientElement {
        AmbientElement::from_series(1, 1, self.r.clone())
    }

    /// `Δ̃e = −Σ g^{IJ̄} ∂_I ∂_J̄ e`.
    pub fn laplacian(&self, el: &AmbientElement) -> Result<AmbientElement> {
        let k = self.size();
        let mut acc: Option<AmbientElement> = None;
        let one = BigRational::one();
        let target = (&el.p - &one, &el.q - &one);
        for i in 0..k {
            let di = el.partial(Self::index(i), false)?;
            for j in 0..k {
                let c = &self.m_inv[j][i];
                if c.is_zero() {
                    continue;
                }
                let dij = di.partial(Self::index(j), true)?;
                if dij.is_zero() {
                    continue;
                }
                let term = dij.mul_series(c)?.shift(&-e(i), &-e(j));
                acc = Some(match acc {
                    None => term,
                    Some(a) => a.add(&term)?,
                });
            }
        }
        Ok(match acc {
            Some(a) if !a.is_zero() => a,
            _ => AmbientElement::zero(el.vars(), el.trunc(), target.0, target.1),
        })
    }

    pub fn laplacian_pow(&self, el: &AmbientElement, k: usize) -> Result<AmbientElement> {
        let mut x = el.clone();
        for _ in 0..k {
            x = self.laplacian(&x)?;
        }
        Ok(x)
    }
}

/// Determinant of a small matrix of ambient elements by cofactor expansion.
pub fn ambient_det(m: &[Vec<AmbientElement>]) -> Result<AmbientElement> {
    let k = m.len();
    if k == 1 {
        return Ok(m[0][0].clone());
    }
    let mut acc: Option<AmbientElement> = None;
    for j in 0..k {
        let sub: Vec<Vec<AmbientElement>> =
            m[1..].iter().map(|row| row.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, x)| x.clone()).collect()).collect();
        let mut term = m[0][j].mul(&ambient_det(&sub)?)?;
        if j % 2 == 1 {
            term = term.neg();
        }
        acc = Some(match acc {
            None => term,
            Some(a) => a.add(&term)?,
        });
    }
    Ok(acc.unwrap())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::Hypersurface;

    #[test]
    fn ball_and_quadric_have_unit_determinant() {
        assert_eq!(monge_ampere(&ball_defining(1, 6)).unwrap(), MultiSeries::one(&Vars::base(1), 6));
        assert_eq!(monge_ampere(&ball_defining(2, 5)).unwrap(), MultiSeries::one(&Vars::base(2), 5));
        let q = Hypersurface::quadric(1, 6);
        assert_eq!(monge_ampere(&q.rho).unwrap(), MultiSeries::one(&Vars::base(1), 6));
    }

    #[test]
    fn lorentz_signature() {
        let q = Hypersurface::quadric(1, 6);
        let m = AmbientMetric::build(&q.rho).unwrap();
        assert_eq!(m.signature_at_origin(), (2, 1, 0));
        assert!(m.is_hermitian());
        let b = AmbientMetric::build(&ball_defining(2, 5)).unwrap();
        assert_eq!(b.signature_at_origin(), (3, 1, 0));
    }

    #[test]
    fn inertia_of_off_diagonal_block() {
        let o = GaussRational::one();
        let z = GaussRational::zero();
        let h = vec![vec![z.clone(), o.clone()], vec![o.clone(), z.clone()]];
        assert_eq!(inertia(&h), (1, 1, 0));
        let hi = vec![vec![z.clone(), GaussRational::i()], vec![-GaussRational::i(), z.clone()]];
        assert_eq!(inertia(&hi), (1, 1, 0));
    }
}
