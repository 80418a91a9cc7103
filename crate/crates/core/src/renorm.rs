//! Floating-point layer: the unit sphere `S³ ⊂ ℂ²` with its standard contact form, Hopf
//! product quadrature, the renormalized volume integrals of the ball, log-term extraction,
//! self-adjointness residuals and the Burns–Epstein relation.
//!
//! Everything symbolic (structure equations, operators) is exact; only integration uses `f64`.

use std::f64::consts::PI;
use std::num::NonZeroUsize;

use gauss_quad::legendre::GaussLegendre;
use nalgebra::{DMatrix, DVector, Matrix2};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gauss::GaussRational;
use crate::series::{MultiSeries, Vars};
use crate::surface::{HolPoly, RigidSurface};
use crate::tw::{Form1, PseudoHermitian, Relation, VecField};
use crate::tw3::{p_prime_tw, paneitz_tw, pluriharmonic_field, pluriharmonic_test, q_prime_tw, scaled_invariants, PHField, PHInvariants};

/// Degree cap for sphere polynomials; all sphere computations are exact polynomials well below it.
pub const SPHERE_TRUNC: u32 = 24;
pub const DEFAULT_RESOLUTION: usize = 16;
pub const DEFAULT_EPS_LO: f64 = 0.02;
pub const DEFAULT_EPS_HI: f64 = 0.4;
pub const DEFAULT_EPS_COUNT: usize = 12;
/// Relative change allowed between a quadrature and its refinement.
pub const REFINEMENT_TOL: f64 = 1e-8;
pub const DEFAULT_FIT_THRESHOLD: f64 = 1e-8;

fn gl(n: usize) -> Vec<(f64, f64)> {
    let n = NonZeroUsize::new(n.max(1)).expect("positive");
    GaussLegendre::new(n).as_node_weight_pairs().to_vec()
}

/// Variables `z1 = z, z2 = w, zb1, zb2` of sphere polynomials.
pub fn sphere_vars() -> Vars {
    Vars::base(1)
}

fn var(name: &str) -> MultiSeries {
    MultiSeries::var(&sphere_vars(), SPHERE_TRUNC, name).expect("sphere variable")
}

/// The sphere `|z|² + |w|² = 1` with `θ = (i/2)(∂ − ∂̄)ρ`, `ρ = 1 − |z|² − |w|²`,
/// coframe `θ¹ = w dz − z dw`, frame `Z = w̄∂_z − z̄∂_w` and Reeb field
/// `T = i(z∂_z + w∂_w − z̄∂_z̄ − w̄∂_w̄)`. The Levi function is read off `dθ(Z, Z̄) = ih`.
pub fn sphere_structure() -> Result<PseudoHermitian> {
    let (z, w, zb, wb) = (var("z1"), var("z2"), var("zb1"), var("zb2"));
    let nil = MultiSeries::zero(&sphere_vars(), SPHERE_TRUNC);
    let half_i = GaussRational::from_parts((0, 1), (1, 2));
    let i = GaussRational::i();
    let theta = Form1 { comps: vec![-&zb.scale(&half_i), -&wb.scale(&half_i), z.scale(&half_i), w.scale(&half_i)] };
    let theta1 = Form1 { comps: vec![w.clone(), -&z, nil.clone(), nil.clone()] };
    let t_field = VecField { comps: vec![z.scale(&i), w.scale(&i), -&zb.scale(&i), -&wb.scale(&i)] };
    let z_field = VecField { comps: vec![wb, -&zb, nil.clone(), nil] };
    let bracket = z_field.bracket(&z_field.conj());
    let h = Relation::UnitSphere.reduce(&theta.eval(&bracket).scale(&i));
    PseudoHermitian::with_relation(Relation::UnitSphere, theta, theta1, h, t_field, z_field)
}

/// Sphere data: the structure with its (constant) curvature.
#[derive(Clone, Debug)]
pub struct SphereData {
    pub invariants: PHInvariants,
    /// Constant value of the scalar curvature.
    pub scal: GaussRational,
    /// Exact `θ∧dθ` volume.
    pub volume: f64,
}

impl SphereData {
    pub fn structure(&self) -> &PseudoHermitian {
        &self.invariants.structure
    }

    /// `Δ_b` on a sphere polynomial.
    pub fn sublaplacian(&self, f: &MultiSeries) -> MultiSeries {
        self.structure().sublaplacian(f)
    }

    /// `Q′` as an exact constant: `½ Scal²` since the torsion and `Δ_b Scal` vanish.
    pub fn q_prime(&self) -> GaussRational {
        &(&self.scal * &self.scal) * &GaussRational::from_frac(1, 2)
    }

    /// `Q̄′ = ∫ Q′ θ∧dθ`.
    pub fn total_q_prime(&self) -> f64 {
        self.q_prime().to_f64_pair().0 * self.volume
    }
}

/// Solves the sphere structure equations and checks that the scalar curvature reduces to a
/// constant and the torsion to zero.
pub fn sphere_tw_data() -> Result<SphereData> {
    let p = sphere_structure()?;
    let zero = p.zero();
    let inv = scaled_invariants(&p, &zero)?;
    let s = &inv.structure.scal;
    let c = s.constant_term();
    if s.len() > usize::from(!c.is_zero()) {
        return Err(Error::Validation(format!("sphere scalar curvature is not constant: {s}")));
    }
    if !inv.structure.a11.is_zero() {
        return Err(Error::Validation("sphere torsion does not vanish".into()));
    }
    Ok(SphereData { invariants: inv, scal: c, volume: hopf_volume() })
}

/// The flat model rescaled by `Υ = −2 Re log(1 + w)`, with `log` expanded through the
/// truncation degree.
///
/// The Cayley map `(z, w) ↦ (√2 z, 1 − w)/(1 + w)` sends the model onto the sphere and pulls
/// the sphere's `θ` back to `2 e^Υ θ₀`, so the scalar curvature of this structure is twice
/// the sphere's.
pub fn cayley_scaling(trunc: u32) -> Result<PHInvariants> {
    let s = RigidSurface::quadric(1, trunc);
    let terms: Vec<(u16, u16, GaussRational)> = (1..=trunc as i64)
        .map(|k| (0, k as u16, GaussRational::from_frac(if k % 2 == 0 { 1 } else { -1 }, k)))
        .collect();
    let u = pluriharmonic_field(&s, &HolPoly::from_n1(&terms))?.with_rel(trunc as i32);
    scaled_invariants(&PseudoHermitian::rigid(&s)?, &u)
}

/// `θ∧dθ` volume from the Hopf parametrization `z = √(1−u) e^{iξ₁}`, `w = √u e^{iξ₂}`:
/// there `θ = (1−u)dξ₁ + u dξ₂` and `θ∧dθ = du∧dξ₁∧dξ₂` up to orientation, over
/// `u ∈ [0, 1]`, `ξ ∈ [0, 2π)²`.
pub fn hopf_volume() -> f64 {
    let u_length = 1.0;
    u_length * (2.0 * PI) * (2.0 * PI)
}

/// Product quadrature for `θ∧dθ` on `S³`: Gauss–Legendre in `u`, trapezoid in the two
/// Hopf angles. Exact for polynomials in `z, w, z̄, w̄` of degree below `resolution`.
#[derive(Clone, Debug)]
pub struct SphereGrid {
    pub resolution: usize,
    /// Points `(z, w, z̄, w̄)` in sphere variable order.
    pub nodes: Vec<[Complex64; 4]>,
    pub weights: Vec<f64>,
}

impl SphereGrid {
    pub fn new(resolution: usize) -> Result<Self> {
        if resolution == 0 {
            return Err(Error::Precondition("quadrature resolution must be positive".into()));
        }
        let angles = 2 * resolution;
        let da = 2.0 * PI / angles as f64;
        let mut nodes = Vec::new();
        let mut weights = Vec::new();
        for (x, wx) in gl(resolution) {
            let u = 0.5 * (x + 1.0);
            let (a, b) = ((1.0 - u).sqrt(), u.sqrt());
            for j in 0..angles {
                let zj = Complex64::from_polar(a, j as f64 * da);
                for k in 0..angles {
                    let wk = Complex64::from_polar(b, k as f64 * da);
                    nodes.push([zj, wk, zj.conj(), wk.conj()]);
                    weights.push(0.5 * wx * da * da);
                }
            }
        }
        Ok(SphereGrid { resolution, nodes, weights })
    }

    pub fn integrate(&self, f: &MultiSeries) -> Complex64 {
        self.nodes.iter().zip(&self.weights).map(|(p, w)| f.eval_f64(p) * w).sum()
    }

    /// `∫ f g` of two real fields, without forming the product symbolically.
    pub fn pairing(&self, f: &MultiSeries, g: &MultiSeries) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(p, w)| (f.eval_f64(p) * g.eval_f64(p)).re * w).sum()
    }

    pub fn l2_norm(&self, f: &MultiSeries) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(p, w)| f.eval_f64(p).norm_sqr() * w).sum::<f64>().sqrt()
    }
}

/// `2 Re(hol)` as a sphere polynomial.
pub fn sphere_pluriharmonic(hol: &HolPoly) -> MultiSeries {
    hol.real_part2(SPHERE_TRUNC)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SphereOperator {
    /// The Paneitz operator, self-adjoint on all functions.
    Paneitz,
    /// `P′`, self-adjoint on CR pluriharmonic functions.
    PPrime,
}

/// Applies `P` or `P′` of the standard sphere structure to a real sphere polynomial.
pub fn apply_operator(data: &SphereData, op: SphereOperator, f: &MultiSeries) -> Result<MultiSeries> {
    if f.vars() != &sphere_vars() {
        return Err(Error::Mismatch("sphere functions are polynomials in z1, z2, zb1, zb2".into()));
    }
    if !f.is_real() {
        return Err(Error::Precondition("sphere function must be real".into()));
    }
    match op {
        SphereOperator::Paneitz => Ok(paneitz_tw(data.structure(), f)),
        SphereOperator::PPrime => {
            if !pluriharmonic_test(data.structure(), f).0 {
                return Err(Error::Precondition("P′ acts on CR pluriharmonic functions".into()));
            }
            Ok(p_prime_tw(&data.invariants, &PHField::new(f.clone(), 0))?.value)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SelfAdjointness {
    pub residual: f64,
    /// Residual at half the resolution.
    pub coarse_residual: f64,
    pub resolution: usize,
}

fn residual_on(grid: &SphereGrid, f1: &MultiSeries, f2: &MultiSeries, o1: &MultiSeries, o2: &MultiSeries) -> (f64, f64, f64) {
    let num = grid.pairing(f1, o2) - grid.pairing(f2, o1);
    let den = grid.l2_norm(f1) * grid.l2_norm(o2) + grid.l2_norm(f2) * grid.l2_norm(o1);
    let r = if den == 0.0 { 0.0 } else { num.abs() / den };
    (r, num, den)
}

/// `|∫(f₁𝖮f₂ − f₂𝖮f₁)θ∧dθ| / (‖f₁‖‖𝖮f₂‖ + ‖f₂‖‖𝖮f₁‖)` at `resolution` and at half of it;
/// fails if the two quadratures of the pairing or the norms differ by more than the
/// refinement tolerance. Both operators annihilate some inputs; `0/0` is reported as 0.
pub fn self_adjointness_residual(
    data: &SphereData,
    f1: &MultiSeries,
    f2: &MultiSeries,
    op: SphereOperator,
    resolution: usize,
) -> Result<SelfAdjointness> {
    if resolution < 2 {
        return Err(Error::Precondition("resolution must be at least 2".into()));
    }
    let o1 = apply_operator(data, op, f1)?;
    let o2 = apply_operator(data, op, f2)?;
    let fine = SphereGrid::new(resolution)?;
    let coarse = SphereGrid::new(resolution / 2)?;
    let (r, num, den) = residual_on(&fine, f1, f2, &o1, &o2);
    let (rc, numc, denc) = residual_on(&coarse, f1, f2, &o1, &o2);
    let scale = den.max(1.0);
    if (num - numc).abs() > REFINEMENT_TOL * scale || (den - denc).abs() > REFINEMENT_TOL * scale {
        return Err(Error::Validation(format!(
            "quadrature under-resolved at resolution {resolution}: refinement changes the pairing by {:.3e}",
            (num - numc).abs().max((den - denc).abs())
        )));
    }
    Ok(SelfAdjointness { residual: r, coarse_residual: rc, resolution })
}

/// `∫(2P′Υ + P(Υ²))θ∧dθ`, which vanishes when total `Q′` is independent of the pseudo-Einstein
/// contact form.
pub fn total_q_prime_variation(data: &SphereData, upsilon: &MultiSeries, resolution: usize) -> Result<f64> {
    let pp = apply_operator(data, SphereOperator::PPrime, upsilon)?;
    let sq = apply_operator(data, SphereOperator::Paneitz, &(upsilon * upsilon))?;
    let grid = SphereGrid::new(resolution)?;
    Ok(grid.integrate(&(&pp.scale_int(2) + &sq)).re)
}

/// `∫ Q′ θ∧dθ` by quadrature of the `Q′` field computed from the structure.
pub fn total_q_prime_quadrature(data: &SphereData, resolution: usize) -> Result<f64> {
    let q = q_prime_tw(&data.invariants).field.value;
    Ok(SphereGrid::new(resolution)?.integrate(&q).re)
}

/// `μ = −Q̄′/(8π²)`.
pub fn burns_epstein(total_q_prime: f64) -> f64 {
    -total_q_prime / (8.0 * PI * PI)
}

/// Log-spaced `ε` values, parsed from `lo:hi:count`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EpsGrid {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

impl Default for EpsGrid {
    fn default() -> Self {
        EpsGrid { lo: DEFAULT_EPS_LO, hi: DEFAULT_EPS_HI, count: DEFAULT_EPS_COUNT }
    }
}

impl EpsGrid {
    pub fn new(lo: f64, hi: f64, count: usize) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite()) || lo <= 0.0 || hi >= 1.0 || lo >= hi {
            return Err(Error::Domain(format!("ε grid must satisfy 0 < lo < hi < 1, got {lo}:{hi}")));
        }
        if count < 2 {
            return Err(Error::Precondition("ε grid needs at least 2 points".into()));
        }
        Ok(EpsGrid { lo, hi, count })
    }

    pub fn parse(text: &str) -> Result<Self> {
        let parts: Vec<&str> = text.trim().split(':').collect();
        if parts.len() != 3 {
            return Err(Error::Parse(format!("ε grid `{text}` is not lo:hi:count")));
        }
        let num = |s: &str| s.trim().parse::<f64>().map_err(|e| Error::Parse(format!("ε grid `{text}`: {e}")));
        let count = parts[2].trim().parse::<usize>().map_err(|e| Error::Parse(format!("ε grid `{text}`: {e}")))?;
        if count > 10_000 {
            return Err(Error::Parse("ε grid count above 10000".into()));
        }
        Self::new(num(parts[0])?, num(parts[1])?, count)
    }

    pub fn values(&self) -> Vec<f64> {
        let (a, b) = (self.lo.ln(), self.hi.ln());
        (0..self.count).map(|k| (a + (b - a) * k as f64 / (self.count - 1) as f64).exp()).collect()
    }
}

/// Quadrature sizes for the ball integrals.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BallQuadrature {
    /// Gauss–Legendre nodes in `log r`.
    pub radial: usize,
    /// Hopf grid resolution for the directions.
    pub angular: usize,
}

impl Default for BallQuadrature {
    fn default() -> Self {
        BallQuadrature { radial: 48, angular: 4 }
    }
}

impl BallQuadrature {
    pub fn refined(&self) -> Self {
        BallQuadrature { radial: 2 * self.radial, angular: 2 * self.angular }
    }
}

/// Both renormalized volume integrals of the ball `r = 1 − |z|² − |w|² > ε`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BallIntegrals {
    pub eps: Vec<f64>,
    /// `∫ ‖d log r‖² dv_g`.
    pub weighted_norm: Vec<f64>,
    /// `−(2/(n+1)!) ∫ (∂∂̄r/(ir))^{n+1}`.
    pub top_form: Vec<f64>,
}

/// Integrand densities against Lebesgue measure at `ζ ∈ ℂ²` with `|ζ| < 1`, from the
/// closed-form Kähler metric `g_{jk̄} = −∂_j∂_k̄ log r = δ_{jk}/r + ζ̄_j ζ_k/r²`.
///
/// Conventions: `ω = i g_{jk̄} dζ^j∧dζ̄^k`, `dv_g = ω²/2! = 4 det(g) dLeb`, and the Riemannian
/// norm `‖dφ‖² = 2 g^{jk̄} ∂_jφ ∂_k̄φ` for real `φ`.
pub fn ball_densities(zeta: [Complex64; 2]) -> (f64, f64) {
    let r = 1.0 - zeta[0].norm_sqr() - zeta[1].norm_sqr();
    let one = Complex64::new(1.0, 0.0);
    let g = Matrix2::from_fn(|j, k| {
        let d = if j == k { one } else { Complex64::new(0.0, 0.0) };
        d / r + zeta[j].conj() * zeta[k] / (r * r)
    });
    let ginv = g.try_inverse().expect("Kähler metric is positive definite inside the ball");
    // ∂_j log r = −ζ̄_j / r
    let a = [-zeta[0].conj() / r, -zeta[1].conj() / r];
    let mut norm = Complex64::new(0.0, 0.0);
    for j in 0..2 {
        for k in 0..2 {
            norm += a[k].conj() * ginv[(k, j)] * a[j];
        }
    }
    let norm = 2.0 * norm.re;
    let dv = 4.0 * g.determinant().re;
    // (∂∂̄r/(ir))² = 2 det(a) (dζ∧dζ̄)² with dζ∧dζ̄ = −2i dx∧dy, a_{jk̄} = ∂_j∂_k̄ r/(ir) = −δ_{jk}/(ir)
    let ir = Complex64::new(0.0, r);
    let amat = Matrix2::from_fn(|j, k| if j == k { -one / ir } else { Complex64::new(0.0, 0.0) });
    let top = 2.0 * amat.determinant() * Complex64::new(0.0, -2.0).powu(2);
    let weighted_top = -(2.0 / 2.0) * top.re;
    (norm * dv, weighted_top)
}

fn ball_at(eps: f64, dirs: &SphereGrid, radial: &[(f64, f64)]) -> (f64, f64) {
    let (lo, hi) = (eps.ln(), 0.0);
    let half = 0.5 * (hi - lo);
    let (mut a, mut b) = (0.0, 0.0);
    for &(x, wx) in radial {
        let s = lo + half * (x + 1.0);
        let r = s.exp();
        let big_r = 1.0 - r;
        let rho = big_r.sqrt();
        // dLeb = (R/4) dR du dξ₁ dξ₂ with |dR| = r ds; the Hopf weights carry du dξ₁ dξ₂.
        let jac = 0.25 * big_r * r * half * wx;
        for (p, w) in dirs.nodes.iter().zip(&dirs.weights) {
            let (da, db) = ball_densities([p[0] * rho, p[1] * rho]);
            a += jac * w * da;
            b += jac * w * db;
        }
    }
    (a, b)
}

fn ball_integrals_with(eps: &[f64], q: &BallQuadrature) -> Result<BallIntegrals> {
    if let Some(e) = eps.iter().find(|e| !(**e > 0.0 && **e < 1.0)) {
        return Err(Error::Domain(format!("ε = {e} is outside (0, 1)")));
    }
    let dirs = SphereGrid::new(q.angular)?;
    let radial = gl(q.radial);
    let (mut wn, mut tf) = (Vec::new(), Vec::new());
    for &e in eps {
        let (a, b) = ball_at(e, &dirs, &radial);
        wn.push(a);
        tf.push(b);
    }
    Ok(BallIntegrals { eps: eps.to_vec(), weighted_norm: wn, top_form: tf })
}

/// Product quadrature of both integrals over `r > ε` for each `ε`, checked against the
/// refined quadrature.
pub fn renormalized_volume_integral(eps: &[f64], q: &BallQuadrature) -> Result<BallIntegrals> {
    let out = ball_integrals_with(eps, q)?;
    let fine = ball_integrals_with(eps, &q.refined())?;
    for (x, y) in out.weighted_norm.iter().chain(&out.top_form).zip(fine.weighted_norm.iter().chain(&fine.top_form)) {
        if (x - y).abs() > REFINEMENT_TOL * x.abs().max(1.0) {
            return Err(Error::Validation(format!("ball quadrature under-resolved: {x} vs refined {y}")));
        }
    }
    Ok(out)
}

/// Least-squares fit of `Σ a_j ε^{j−n−1} + c log ε + const`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LogFitResult {
    /// Coefficients of `ε^{−n−1}, …, ε^{−1}`.
    pub coefficients: Vec<f64>,
    pub log_coefficient: f64,
    pub constant: f64,
    /// `‖fit − data‖₂ / ‖data‖₂`.
    pub residual: f64,
    /// `‖fit − data‖₂` propagated to the log coefficient through the pseudo-inverse.
    pub log_coefficient_uncertainty: f64,
    pub eps: Vec<f64>,
    pub threshold: f64,
    pub valid: bool,
}

/// Largest admissible condition number of the column-normalized basis matrix.
pub const MAX_CONDITION: f64 = 1e12;

pub fn fit_log_term(values: &[f64], eps: &[f64], n: usize, threshold: f64) -> Result<LogFitResult> {
    if values.len() != eps.len() {
        return Err(Error::Mismatch("values and ε grid differ in length".into()));
    }
    if eps.len() < n + 4 {
        return Err(Error::Precondition(format!("log fit needs at least {} points", n + 4)));
    }
    if eps.iter().chain(values).any(|x| !x.is_finite()) || eps.iter().any(|&e| e <= 0.0) {
        return Err(Error::Domain("ε values must be positive and data finite".into()));
    }
    let (lo, hi) = eps.iter().fold((f64::INFINITY, 0.0f64), |(a, b), &e| (a.min(e), b.max(e)));
    if hi < 4.0 * lo {
        return Err(Error::Precondition("ε grid must span at least a factor 4".into()));
    }
    let cols = n + 3;
    let mut a = DMatrix::from_fn(eps.len(), cols, |i, j| {
        let e = eps[i];
        if j <= n {
            e.powi(j as i32 - n as i32 - 1)
        } else if j == n + 1 {
            e.ln()
        } else {
            1.0
        }
    });
    let scales: Vec<f64> = (0..cols).map(|j| a.column(j).norm()).collect();
    for (j, s) in scales.iter().enumerate() {
        a.column_mut(j).scale_mut(1.0 / s);
    }
    let svd = a.clone().svd(true, true);
    let sv = &svd.singular_values;
    let cond = sv.max() / sv.min();
    if !(cond < MAX_CONDITION) {
        return Err(Error::Precondition(format!("ill-conditioned log fit (condition number {cond:.3e})")));
    }
    let b = DVector::from_column_slice(values);
    let x = svd.solve(&b, 0.0).map_err(|e| Error::Validation(e.to_string()))?;
    let fit = &a * &x;
    let bn = b.norm();
    let abs_res = (fit - &b).norm();
    let residual = if bn == 0.0 { abs_res } else { abs_res / bn };
    let vt = svd.v_t.as_ref().expect("computed");
    let pinv_row: f64 = (0..cols).map(|k| (vt[(k, n + 1)] / sv[k]).powi(2)).sum::<f64>().sqrt();
    let log_coefficient_uncertainty = pinv_row / scales[n + 1] * abs_res;
    let coef: Vec<f64> = (0..cols).map(|j| x[j] / scales[j]).collect();
    Ok(LogFitResult {
        coefficients: coef[..=n].to_vec(),
        log_coefficient: coef[n + 1],
        constant: coef[n + 2],
        residual,
        log_coefficient_uncertainty,
        eps: eps.to_vec(),
        threshold,
        valid: residual < threshold,
    })
}

/// `lp_cn = (−1)ⁿ/(n!)³`.
pub fn log_term_constant(n: usize) -> f64 {
    let f: f64 = (1..=n).map(|k| k as f64).product();
    (if n % 2 == 0 { 1.0 } else { -1.0 }) / (f * f * f)
}

/// Formats with 17 significant digits.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}
