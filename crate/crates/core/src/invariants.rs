//! Invariants built from ambient Laplacians: GJMS operators, `Q`, `P′` and `Q′`.
//!
//! Scalings `Υ` enter through `log h_θ = Λ − Υ̃`, where `Υ̃` is a weight-0 extension
//! given as a real series in the base variables.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::ambient::AmbientElement;
use crate::error::{Error, Result};
use crate::gauss::GaussRational;
use crate::metric::AmbientMetric;
use crate::series::MultiSeries;
use crate::surface::Hypersurface;

/// Power of `Δ̃` in the GJMS operator of weight `w`: `n + 2w + 1`, for `2w ∈ [−n, 0] ∩ ℤ`.
pub fn gjms_power(n: usize, w: &BigRational) -> Result<usize> {
    let two_w = w * BigRational::from_integer(BigInt::from(2));
    if !two_w.is_integer() || two_w.is_positive() || two_w < BigRational::from_integer(BigInt::from(-(n as i64))) {
        return Err(Error::Precondition(format!("weight {w} is not admissible: need 2w ∈ [−{n}, 0] ∩ ℤ")));
    }
    Ok((n as i64 + two_w.to_integer().to_i64().unwrap_or(0) + 1) as usize)
}

fn check_sizes(m: &AmbientMetric, h: &Hypersurface) -> Result<()> {
    if m.n != h.n || m.vars() != &h.base_vars() {
        return Err(Error::Mismatch("metric and hypersurface live in different dimensions".into()));
    }
    Ok(())
}

/// Restricts an ambient element to `𝒩`, dropping the fiber factor.
///
/// Log coefficients must vanish on the surface wherever they are reliably known.
pub fn restrict_density(h: &Hypersurface, el: &AmbientElement) -> Result<MultiSeries> {
    for k in 1..=el.log_degree() {
        let c = h.restrict(&el.log_coeff(k))?;
        let zero = MultiSeries::zero(c.vars(), c.trunc());
        if c.equal_through(&zero).is_none() {
            return Err(Error::Validation(format!("coefficient of Λ^{k} does not vanish on the surface")));
        }
    }
    h.restrict(&el.log_coeff(0))
}

/// True when every mixed second derivative `∂_j ∂_k̄` vanishes (as far as known).
pub fn is_pluriharmonic(s: &MultiSeries) -> bool {
    let v = s.vars().clone();
    let m = v.len() / 2;
    for j in 0..m {
        let dj = s.derivative(j);
        for k in 0..m {
            let d = dj.derivative(m + k);
            if d.equal_through(&MultiSeries::zero(&v, d.trunc())).is_none() {
                return false;
            }
        }
    }
    true
}

/// `Δ̃^{n+2w+1} f` restricted to the surface, for a balanced log-free `f` of admissible weight.
pub fn gjms(m: &AmbientMetric, h: &Hypersurface, f: &AmbientElement) -> Result<MultiSeries> {
    check_sizes(m, h)?;
    if !f.is_balanced() {
        return Err(Error::Precondition("GJMS input must have balanced bidegree".into()));
    }
    if f.log_degree() > 0 {
        return Err(Error::Precondition("GJMS input must be log-free".into()));
    }
    let k = gjms_power(m.n, &f.p)?;
    let out = m.laplacian_pow(f, k)?;
    restrict_density(h, &out)
}

/// Stages of the inductive harmonic extension `A_k` of a weight-0 function.
#[derive(Clone, Debug)]
pub struct ExpansionTrace {
    /// `φ_k` with `Δ̃A_k = r♯^k φ_k`, for `k = 0..=n`.
    pub phi: Vec<AmbientElement>,
    /// `B₀ = −φ_n/(n+1)` restricted to the surface: the leading log coefficient.
    pub log_coefficient: MultiSeries,
}

/// Builds `A_{k+1} = A_k + r♯^{k+1} ψ_{k+1}` with `ψ_{k+1} = −φ_k/((k+1)(n−k))`, checking
/// `Δ̃A_k = r♯^k φ_k` at each stage, and reads off the log coefficient at `k = n`.
pub fn harmonic_expansion(m: &AmbientMetric, h: &Hypersurface, f: &AmbientElement) -> Result<ExpansionTrace> {
    check_sizes(m, h)?;
    if !f.is_balanced() || !f.p.is_zero() || f.log_degree() > 0 {
        return Err(Error::Precondition("expansion input must be a log-free weight-0 element".into()));
    }
    let n = m.n;
    let rs = m.r_sharp();
    let mut a = f.clone();
    let mut rs_pow = AmbientElement::weighted(0, MultiSeries::one(f.vars(), f.trunc()));
    let mut phi = vec![m.laplacian(f)?];
    for k in 0..n {
        let denom = ((k + 1) * (n - k)) as i64;
        let psi = phi[k].scale(&GaussRational::from_frac(-1, denom));
        rs_pow = rs_pow.mul(&rs)?;
        a = a.add(&rs_pow.mul(&psi)?)?;
        let next = m.laplacian(&psi)?;
        let lhs = m.laplacian(&a)?;
        let rhs = rs_pow.mul(&next)?;
        if !same_through_rel(&lhs, &rhs) {
            return Err(Error::Validation(format!("Δ̃A_{} ≠ r♯^{} φ_{}", k + 1, k + 1, k + 1)));
        }
        phi.push(next);
    }
    let b0 = phi[n].scale(&GaussRational::from_frac(-1, n as i64 + 1));
    let log_coefficient = restrict_density(h, &b0)?;
    Ok(ExpansionTrace { phi, log_coefficient })
}

fn same_through_rel(a: &AmbientElement, b: &AmbientElement) -> bool {
    if !a.same_bidegree(b) && !(a.is_zero() || b.is_zero()) {
        return false;
    }
    let k = a.log_degree().max(b.log_degree());
    (0..=k).all(|i| a.log_coeff(i).equal_through(&b.log_coeff(i)).is_some())
}

/// The GJMS operator at weight 0 recovered from the log coefficient:
/// `P f = (−1)^{n+1} (n+1)! n! B₀`.
pub fn gjms_via_expansion(m: &AmbientMetric, h: &Hypersurface, f: &AmbientElement) -> Result<MultiSeries> {
    let t = harmonic_expansion(m, h, f)?;
    let n = m.n as i64;
    let fact = |k: i64| (1..=k).product::<i64>();
    let sign = if (n + 1) % 2 == 0 { 1 } else { -1 };
    Ok(t.log_coefficient.scale_int(sign * fact(n + 1) * fact(n)))
}

/// `log h_θ = Λ − Υ̃`.
pub fn log_h(upsilon: &MultiSeries) -> Result<AmbientElement> {
    if !upsilon.is_real() {
        return Err(Error::Precondition("the scaling must be real".into()));
    }
    let lam = AmbientElement::lambda(upsilon.vars(), upsilon.trunc());
    lam.sub(&AmbientElement::weighted(0, upsilon.clone()))
}

fn top_power(m: &AmbientMetric, el: &AmbientElement) -> Result<AmbientElement> {
    m.laplacian_pow(el, m.n + 1)
}

/// `Q = −Δ̃^{n+1}(Λ − Υ̃)` on the surface.
pub fn q_curvature_ambient(m: &AmbientMetric, h: &Hypersurface, upsilon: &MultiSeries) -> Result<MultiSeries> {
    check_sizes(m, h)?;
    let out = top_power(m, &log_h(upsilon)?)?;
    Ok(-&restrict_density(h, &out)?)
}

/// `P′f = −Δ̃^{n+1}(f̃ (Λ − Υ̃))` for pluriharmonic `f̃` and `Υ̃`.
pub fn p_prime(m: &AmbientMetric, h: &Hypersurface, upsilon: &MultiSeries, f: &MultiSeries) -> Result<MultiSeries> {
    check_sizes(m, h)?;
    if !f.is_real() || !is_pluriharmonic(f) {
        return Err(Error::Precondition("P′ input must be a real pluriharmonic extension".into()));
    }
    if !is_pluriharmonic(upsilon) {
        return Err(Error::Precondition("P′ needs a pluriharmonic (pseudo-Einstein) scaling".into()));
    }
    let el = AmbientElement::weighted(0, f.clone()).mul(&log_h(upsilon)?)?;
    let out = top_power(m, &el)?;
    Ok(-&restrict_density(h, &out)?)
}

/// `Q′ = Δ̃^{n+1}(Λ − Υ̃)²` for pluriharmonic `Υ̃`.
pub fn q_prime(m: &AmbientMetric, h: &Hypersurface, upsilon: &MultiSeries) -> Result<MultiSeries> {
    check_sizes(m, h)?;
    if !is_pluriharmonic(upsilon) {
        return Err(Error::Precondition("Q′ needs a pluriharmonic (pseudo-Einstein) scaling".into()));
    }
    let l = log_h(upsilon)?;
    let out = top_power(m, &l.mul(&l)?)?;
    restrict_density(h, &out)
}

/// Function representative of a weight-`w` density after rescaling `θ̂ = e^Υ θ`: multiplies by `e^{wΥ}`.
pub fn density_as_function(e: &MultiSeries, weight: &BigRational, upsilon: &MultiSeries) -> Result<MultiSeries> {
    if weight.is_zero() {
        return Ok(e.clone());
    }
    if !upsilon.constant_term().is_zero() {
        return Err(Error::Domain("e^{wΥ} needs Υ(0) = 0 to stay rational".into()));
    }
    let factor = upsilon.scale_rat(weight).exp()?;
    e.try_mul(&factor)
}

/// `Δ̃^{n+1}|f|²` for holomorphic `f`, the intermediate of `Q′`.
pub fn top_laplacian_of_norm(m: &AmbientMetric, h: &Hypersurface, f_hol: &MultiSeries) -> Result<MultiSeries> {
    check_sizes(m, h)?;
    let el = AmbientElement::weighted(0, f_hol * &f_hol.conj());
    restrict_density(h, &top_power(m, &el)?)
}
