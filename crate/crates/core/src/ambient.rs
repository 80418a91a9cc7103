//! Functions on the ambient space: `(z⁰)^p (z̄⁰)^q · Σ_k S_k Λ^k` with `Λ = log|z⁰|²`.
//!
//! The `S_k` are [`MultiSeries`] in the base variables `z1..z{n+1}, zb1..zb{n+1}`
//! (the last holomorphic variable plays the role of `w`). Log-degree is capped at 2.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::gauss::GaussRational;
use crate::series::{MultiSeries, Vars};

pub const MAX_LOG_DEGREE: usize = 2;

/// Which direction an ambient derivative is taken in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Index {
    /// `∂/∂z⁰` (fiber) or `∂/∂z̄⁰`.
    Fiber,
    /// A base variable by 1-based holomorphic index `j ∈ 1..=n+1`.
    Base(usize),
}

#[derive(Clone, Debug, PartialEq)]
pub struct AmbientElement {
    pub p: BigRational,
    pub q: BigRational,
    logs: Vec<MultiSeries>,
}

fn int(k: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(k))
}

impl AmbientElement {
    /// Builds an element from log coefficients `[S_0, S_1, ...]`, trimming trailing zeros.
    pub fn new(p: BigRational, q: BigRational, logs: Vec<MultiSeries>) -> Result<Self> {
        if logs.is_empty() {
            return Err(Error::Mismatch("ambient element needs at least one coefficient".into()));
        }
        let vars = logs[0].vars().clone();
        let trunc = logs.iter().map(|s| s.trunc()).min().unwrap_or(0);
        let mut logs: Vec<MultiSeries> = logs.into_iter().map(|s| s.with_trunc(trunc)).collect();
        for s in &logs {
            if s.vars() != &vars {
                return Err(Error::Mismatch("log coefficients use different variables".into()));
            }
        }
        while logs.len() > 1 && logs.last().map(|s| s.is_zero()).unwrap_or(false) {
            logs.pop();
        }
        if logs.len() > MAX_LOG_DEGREE + 1 {
            return Err(Error::Domain(format!(
                "log-degree {} exceeds the supported maximum {MAX_LOG_DEGREE}",
                logs.len() - 1
            )));
        }
        Ok(AmbientElement { p, q, logs })
    }

    /// A log-free element `(z⁰)^p (z̄⁰)^q S`.
    pub fn from_series(p: i64, q: i64, s: MultiSeries) -> Self {
        AmbientElement { p: int(p), q: int(q), logs: vec![s] }
    }

    /// A weight-`w` log-free element.
    pub fn weighted(w: i64, s: MultiSeries) -> Self {
        Self::from_series(w, w, s)
    }

    pub fn zero(vars: &Vars, trunc: u32, p: BigRational, q: BigRational) -> Self {
        AmbientElement { p, q, logs: vec![MultiSeries::zero(vars, trunc)] }
    }

    /// `Λ = log|z⁰|²` as a weight-0 element.
    pub fn lambda(vars: &Vars, trunc: u32) -> Self {
        AmbientElement {
            p: BigRational::zero(),
            q: BigRational::zero(),
            logs: vec![MultiSeries::zero(vars, trunc), MultiSeries::one(vars, trunc)],
        }
    }

    pub fn vars(&self) -> &Vars {
        self.logs[0].vars()
    }

    pub fn trunc(&self) -> u32 {
        self.logs[0].trunc()
    }

    pub fn log_degree(&self) -> usize {
        self.logs.len() - 1
    }

    /// Coefficient of `Λ^k` (zero beyond the stored degree).
    pub fn log_coeff(&self, k: usize) -> MultiSeries {
        self.logs.get(k).cloned().unwrap_or_else(|| MultiSeries::zero(self.vars(), self.trunc()))
    }

    pub fn logs(&self) -> &[MultiSeries] {
        &self.logs
    }

    pub fn is_balanced(&self) -> bool {
        self.p == self.q
    }

    pub fn is_zero(&self) -> bool {
        self.logs.iter().all(|s| s.is_zero())
    }

    pub fn same_bidegree(&self, o: &Self) -> bool {
        self.p == o.p && self.q == o.q
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        if !self.same_bidegree(o) {
            if o.is_zero() {
                return Ok(self.clone());
            }
            if self.is_zero() {
                return Ok(o.clone());
            }
            return Err(Error::Mismatch(format!(
                "cannot add bidegrees ({}, {}) and ({}, {})",
                self.p, self.q, o.p, o.q
            )));
        }
        let k = self.logs.len().max(o.logs.len());
        let logs = (0..k).map(|i| self.log_coeff(i).try_add(&o.log_coeff(i))).collect::<Result<_>>()?;
        Self::new(self.p.clone(), self.q.clone(), logs)
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        AmbientElement { p: self.p.clone(), q: self.q.clone(), logs: self.logs.iter().map(|s| -s).collect() }
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        let k = self.logs.len() + o.logs.len() - 1;
        let mut logs: Vec<MultiSeries> = Vec::with_capacity(k);
        let trunc = self.trunc().min(o.trunc());
        for _ in 0..k {
            logs.push(MultiSeries::zero(self.vars(), trunc));
        }
        for (i, a) in self.logs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.logs.iter().enumerate() {
                logs[i + j] = logs[i + j].try_add(&a.try_mul(b)?)?;
            }
        }
        Self::new(&self.p + &o.p, &self.q + &o.q, logs)
    }

    /// Multiplies every log coefficient by a base series (bidegree unchanged).
    pub fn mul_series(&self, s: &MultiSeries) -> Result<Self> {
        let logs = self.logs.iter().map(|a| a.try_mul(s)).collect::<Result<_>>()?;
        Self::new(self.p.clone(), self.q.clone(), logs)
    }

    pub fn scale(&self, c: &GaussRational) -> Self {
        AmbientElement { p: self.p.clone(), q: self.q.clone(), logs: self.logs.iter().map(|s| s.scale(c)).collect() }
    }

    /// Multiplies by `(z⁰)^dp (z̄⁰)^dq`.
    pub fn shift(&self, dp: &BigRational, dq: &BigRational) -> Self {
        AmbientElement { p: &self.p + dp, q: &self.q + dq, logs: self.logs.clone() }
    }

    pub fn conj(&self) -> Self {
        AmbientElement { p: self.q.clone(), q: self.p.clone(), logs: self.logs.iter().map(|s| s.conj()).collect() }
    }

    pub fn truncate(&self, d: u32) -> Self {
        AmbientElement { p: self.p.clone(), q: self.q.clone(), logs: self.logs.iter().map(|s| s.truncate(d)).collect() }
    }

    /// `∂_I` (holomorphic) or `∂_Ī` (`bar = true`).
    pub fn partial(&self, index: Index, bar: bool) -> Result<Self> {
        match index {
            Index::Fiber => {
                // ∂₀[(z⁰)^p Λ^k S] = (z⁰)^{p-1} (p S Λ^k + k S Λ^{k-1})
                let e = if bar { &self.q } else { &self.p };
                let mut logs = Vec::with_capacity(self.logs.len());
                for k in 0..self.logs.len() {
                    let mut s = self.logs[k].scale_rat(e);
                    if k + 1 < self.logs.len() {
                        s = &s + &self.logs[k + 1].scale_int((k + 1) as i64);
                    }
                    logs.push(s);
                }
                let (mut p, mut q) = (self.p.clone(), self.q.clone());
                if bar {
                    q -= BigRational::one();
                } else {
                    p -= BigRational::one();
                }
                Self::new(p, q, logs)
            }
            Index::Base(j) => {
                let n1 = self.vars().len() / 2;
                if j == 0 || j > n1 {
                    return Err(Error::Mismatch(format!("base index {j} out of range 1..={n1}")));
                }
                let name = if bar { format!("zb{j}") } else { format!("z{j}") };
                let i = self.vars().index(&name)?;
                let logs = self.logs.iter().map(|s| s.derivative(i)).collect();
                Self::new(self.p.clone(), self.q.clone(), logs)
            }
        }
    }

    /// Euler operator `Z = z⁰∂₀` (or `Z̄`); bidegree unchanged.
    pub fn euler(&self, bar: bool) -> Result<Self> {
        let d = self.partial(Index::Fiber, bar)?;
        Ok(if bar { d.shift(&BigRational::zero(), &BigRational::one()) } else { d.shift(&BigRational::one(), &BigRational::zero()) })
    }

    pub fn agrees_to_degree(&self, o: &Self, d: u32) -> bool {
        if self.is_zero() && o.is_zero() {
            return true;
        }
        if !self.same_bidegree(o) {
            return false;
        }
        let k = self.logs.len().max(o.logs.len());
        (0..k).all(|i| self.log_coeff(i).agrees_to_degree(&o.log_coeff(i), d))
    }
}
