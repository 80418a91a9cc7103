//! Order-by-order normalization `𝒥[r] = 1 + O(ρ^s)` of a defining function.
//!
//! Stage 0 rescales `ρ` by `𝒥[ρ]^{−1/(n+2)}`. Stage `s ≥ 1` replaces `r` by
//! `r(1 + c ρ^s)`, where `c` solves the linear equation on the `ρ^s` coefficient of
//! `𝒥`. The linear factor is measured by probing with `c = 1`; it must be a nonzero
//! constant for `s ≤ n+1` and vanishes at `s = n+2`, where the leftover coefficient
//! is the obstruction.
//!
//! Every comparison is made only through the degree each series reports as reliable.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gauss::GaussRational;
use crate::metric::monge_ampere;
use crate::series::MultiSeries;
use crate::surface::Hypersurface;

#[derive(Clone, Debug)]
pub struct MongeAmpereReport {
    pub n: usize,
    pub r: MultiSeries,
    /// Largest `s ≤ n+2` with `𝒥[r] = 1 + O(ρ^s)`, checked up to `reliable_degree`.
    pub order_achieved: u32,
    /// `𝒥[r] − 1` vanishes identically (not just to the reliable degree).
    pub exact: bool,
    /// Degree through which the `ρ⁰` coefficient of `𝒥[r]` is trustworthy; the
    /// `ρ^k` coefficient is trustworthy through `reliable_degree − k`.
    pub reliable_degree: u32,
    /// Linear factors found at stages `1..`.
    pub stage_factors: Vec<GaussRational>,
    /// `ρ^{n+2}` coefficient of `𝒥[r]` on the surface (present when the obstruction stage is reached).
    pub obstruction: Option<MultiSeries>,
    /// The same coefficient taken against `r^{n+2}` instead of `ρ^{n+2}`.
    pub eta_tilde: Option<MultiSeries>,
}

/// Summary of `𝒥[r]` in the `ρ`-expansion.
#[derive(Clone, Debug, Serialize)]
pub struct JetCheck {
    pub order: u32,
    pub exact: bool,
}

/// True when `c` is known to equal `want` through a nonnegative degree.
fn known_equal(c: &MultiSeries, want: &MultiSeries) -> bool {
    matches!(c.equal_through(want), Some(d) if d >= 0)
}

/// Finds the largest `s ≤ cap` with `𝒥 = 1 + O(ρ^s)` given the chart expansion of `𝒥`.
fn order_of(h: &Hypersurface, j_chart: &MultiSeries, cap: u32) -> u32 {
    let bv_one = MultiSeries::one(&crate::series::Vars::boundary(h.n), j_chart.trunc());
    let mut order = 0;
    for k in 0..cap {
        let c = h.s_coefficient(j_chart, k as u16);
        let want = if k == 0 { bv_one.clone() } else { MultiSeries::zero(bv_one.vars(), bv_one.trunc()) };
        if !known_equal(&c, &want) {
            break;
        }
        order = k + 1;
    }
    order
}

/// Independent check of a defining function: recomputes `𝒥[r]` and reads off its order.
pub fn verify_order(h: &Hypersurface, r: &MultiSeries) -> Result<JetCheck> {
    let j = monge_ampere(r)?;
    let exact = j == MultiSeries::one(j.vars(), j.trunc()) && j.is_exact();
    let jc = h.to_chart(&j)?;
    let order = if exact { h.n as u32 + 2 } else { order_of(h, &jc, h.n as u32 + 2) };
    Ok(JetCheck { order, exact })
}

pub fn fefferman_improve(h: &Hypersurface, target_order: u32) -> Result<MongeAmpereReport> {
    let n = h.n;
    let top = n as u32 + 2;
    if target_order == 0 {
        return Err(Error::Precondition("target order must be at least 1".into()));
    }
    if target_order > top {
        return Err(Error::Precondition(format!(
            "target order {target_order} exceeds n+2 = {top}: the obstruction blocks further improvement"
        )));
    }
    let trunc = h.trunc();
    let rho = h.rho.clone();
    let j0 = monge_ampere(&rho)?;
    let c0 = j0.constant_term();
    if c0.is_zero() {
        return Err(Error::Domain("𝒥[ρ] vanishes at the origin (degenerate surface)".into()));
    }
    if c0 != GaussRational::one() {
        return Err(Error::Domain(format!("𝒥[ρ](0) = {c0}; only surfaces normalized to 1 at the origin are supported")));
    }
    let alpha = BigRational::new(BigInt::from(-1), BigInt::from(n as i64 + 2));
    let mut r = &rho * &j0.pow_unit(&alpha)?;
    let mut factors = Vec::new();

    for s in 1..target_order {
        let j = monge_ampere(&r)?;
        let jc = h.to_chart(&j)?;
        if order_of(h, &jc, s) < s {
            return Err(Error::Validation(format!("stage {s}: lower-order coefficients of 𝒥 did not vanish")));
        }
        let es = h.s_coefficient(&jc, s as u16);
        let rho_s = rho.pow(s);
        let probe = &r * &(&MultiSeries::one(rho.vars(), trunc) + &rho_s);
        let jp = h.to_chart(&monge_ampere(&probe)?)?;
        let lambda = &h.s_coefficient(&jp, s as u16) - &es;
        let l0 = lambda.constant_term();
        let lconst = MultiSeries::constant(lambda.vars(), lambda.trunc(), l0.clone());
        if lambda.equal_through(&lconst).is_none() {
            return Err(Error::Validation(format!("stage {s}: linear factor is not constant")));
        }
        if l0.is_zero() {
            return Err(Error::Validation(format!("stage {s}: linear factor vanishes before the obstruction order")));
        }
        let c = es.scale(&(-&l0.inv()?));
        let cx = h.extend(&c)?;
        r = &r + &(&r * &(&cx * &rho_s));
        factors.push(l0);
    }

    let j = monge_ampere(&r)?;
    let exact = j == MultiSeries::one(j.vars(), j.trunc()) && j.is_exact();
    let jc = h.to_chart(&j)?;
    let rel_j = jc.rel().clamp(0, trunc as i32) as u32;
    let order = if exact { top } else { order_of(h, &jc, top) };
    if order < target_order {
        return Err(Error::Validation(format!("recomputed 𝒥 has order {order} < target {target_order}")));
    }

    let (mut obstruction, mut eta_tilde) = (None, None);
    if target_order == top {
        let s = top;
        let es = h.s_coefficient(&jc, s as u16);
        let rho_s = rho.pow(s);
        let probe = &r * &(&MultiSeries::one(rho.vars(), trunc) + &rho_s);
        let jp = h.to_chart(&monge_ampere(&probe)?)?;
        let lambda = &h.s_coefficient(&jp, s as u16) - &es;
        let zero = MultiSeries::zero(lambda.vars(), lambda.trunc());
        if lambda.equal_through(&zero).is_none() {
            return Err(Error::Validation("linear factor at order n+2 does not vanish".into()));
        }
        factors.push(lambda.constant_term());
        let keep = es.rel().max(0) as u32;
        let obs = es.low_part(keep);
        // r = ρ·u on the chart; η̃ multiplies r^{n+2} = u^{n+2} ρ^{n+2}
        let u = h.s_coefficient(&h.to_chart(&r)?, 1);
        let eta = (&es * &u.pow(s).unit_inverse()?).low_part(keep);
        obstruction = Some(obs);
        eta_tilde = Some(eta);
    }

    Ok(MongeAmpereReport {
        n,
        r,
        order_achieved: order,
        exact,
        reliable_degree: rel_j,
        stage_factors: factors,
        obstruction,
        eta_tilde,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::{tangential_vars, RigidSurface};

    #[test]
    fn quadric_is_already_normalized() {
        let h = Hypersurface::quadric(1, 6);
        let rep = fefferman_improve(&h, 3).unwrap();
        assert_eq!(rep.r, h.rho);
        assert!(rep.exact);
        assert!(rep.obstruction.unwrap().is_zero());
    }

    #[test]
    fn perturbed_surface_reaches_order_three() {
        let v = tangential_vars(1);
        let z = MultiSeries::var(&v, 10, "z1").unwrap();
        let zb = z.conj();
        let bump = &(&z.pow(2) * &zb.pow(3)) + &(&z.pow(3) * &zb.pow(2));
        let f = &(&z * &zb) + &bump.scale(&GaussRational::from_frac(1, 10));
        let s = RigidSurface::new(1, f).unwrap();
        let h = Hypersurface::rigid(&s).unwrap();
        let rep = fefferman_improve(&h, 3).unwrap();
        assert_eq!(rep.order_achieved, 3);
        // probing with r(1 + ρ^s) acts like r^{s+1}, giving the factor (s+1)(n+2−s)
        let want: Vec<GaussRational> = (1..=3).map(|s| GaussRational::from_int((s + 1) * (3 - s))).collect();
        assert_eq!(rep.stage_factors, want);
        assert!(rep.obstruction.is_some());
        let check = verify_order(&h, &rep.r).unwrap();
        assert!(check.order >= 3);
    }
}
