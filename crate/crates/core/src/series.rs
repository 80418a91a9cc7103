//! Truncated multivariate power series over [`GaussRational`].
//!
//! A series lives in an ordered variable set [`Vars`] and carries a total-degree
//! cap `trunc`. Holomorphic variables are named `z<k>` and pair with formal
//! conjugates `zb<k>`; every other name (`t`, `s`, ...) is a real variable.
//!
//! Invariants:
//! - no stored exponent exceeds total degree `trunc`, and no stored coefficient is zero;
//! - `conj` swaps paired exponents and conjugates coefficients, and is an involution;
//! - all products are truncated, so ring identities hold up to degree `trunc`.
//!
//! Derivatives keep the cap. A derivative of a truncated (non-polynomial) series is
//! only reliable one degree below the cap; callers that chain derivatives track
//! the reliable degree themselves (see [`MultiSeries::agrees_to_degree`]).

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gauss::{format_rational, parse_rational, GaussRational};

pub type Exponent = Vec<u16>;

#[derive(Clone, Debug, PartialEq, Eq)]
struct VarsInner {
    names: Vec<String>,
    conj: Vec<usize>,
}

/// Ordered variable names with the conjugation pairing precomputed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vars(Arc<VarsInner>);

fn partner_name(name: &str) -> Option<String> {
    if let Some(k) = name.strip_prefix("zb") {
        if !k.is_empty() && k.bytes().all(|b| b.is_ascii_digit()) {
            return Some(format!("z{k}"));
        }
        return None;
    }
    if let Some(k) = name.strip_prefix('z') {
        if !k.is_empty() && k.bytes().all(|b| b.is_ascii_digit()) {
            return Some(format!("zb{k}"));
        }
    }
    None
}

impl Vars {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Result<Vars> {
        let names: Vec<String> = names.iter().map(|s| s.as_ref().to_string()).collect();
        let mut conj = Vec::with_capacity(names.len());
        for (i, n) in names.iter().enumerate() {
            if n.is_empty() || !n.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'_') {
                return Err(Error::Parse(format!("invalid variable name `{n}`")));
            }
            if names[..i].contains(n) {
                return Err(Error::Parse(format!("duplicate variable `{n}`")));
            }
            match partner_name(n) {
                Some(p) => match names.iter().position(|m| *m == p) {
                    Some(j) => conj.push(j),
                    None => {
                        return Err(Error::Mismatch(format!("variable `{n}` has no conjugate `{p}`")))
                    }
                },
                None => conj.push(i),
            }
        }
        Ok(Vars(Arc::new(VarsInner { names, conj })))
    }

    /// Base variables of the ambient engine: `z1..z{m}, zb1..zb{m}` with `m = n+1`
    /// (the last holomorphic variable is `w`).
    pub fn base(n: usize) -> Vars {
        let m = n + 1;
        let mut v: Vec<String> = (1..=m).map(|k| format!("z{k}")).collect();
        v.extend((1..=m).map(|k| format!("zb{k}")));
        Vars::new(&v).expect("base vars")
    }

    /// Boundary coordinates `z1..zn, zb1..zbn, t`.
    pub fn boundary(n: usize) -> Vars {
        let mut v: Vec<String> = (1..=n).map(|k| format!("z{k}")).collect();
        v.extend((1..=n).map(|k| format!("zb{k}")));
        v.push("t".into());
        Vars::new(&v).expect("boundary vars")
    }

    pub fn names(&self) -> &[String] {
        &self.0.names
    }

    pub fn len(&self) -> usize {
        self.0.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.names.is_empty()
    }

    pub fn index(&self, name: &str) -> Result<usize> {
        self.0
            .names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::Mismatch(format!("unknown variable `{name}`")))
    }

    pub fn conj_index(&self, i: usize) -> usize {
        self.0.conj[i]
    }

    fn same(&self, o: &Vars) -> bool {
        Arc::ptr_eq(&self.0, &o.0) || self.0.names == o.0.names
    }
}

/// Reliability marker for a series that is an exact polynomial.
pub const EXACT: i32 = i32::MAX;

#[derive(Clone, Debug)]
pub struct MultiSeries {
    vars: Vars,
    trunc: u32,
    terms: BTreeMap<Exponent, GaussRational>,
    /// Stored coefficients of total degree ≤ `rel` are known to be final; `EXACT`
    /// marks a polynomial without dropped terms, `-1` means nothing is known.
    rel: i32,
}

fn sat_add(a: i32, b: i32) -> i32 {
    if a == EXACT || b == EXACT {
        EXACT
    } else {
        a.saturating_add(b)
    }
}

impl PartialEq for MultiSeries {
    fn eq(&self, o: &Self) -> bool {
        self.vars.same(&o.vars) && self.trunc == o.trunc && self.terms == o.terms
    }
}

fn degree(e: &[u16]) -> u32 {
    e.iter().map(|&x| x as u32).sum()
}

impl MultiSeries {
    pub fn zero(vars: &Vars, trunc: u32) -> Self {
        MultiSeries { vars: vars.clone(), trunc, terms: BTreeMap::new(), rel: EXACT }
    }

    pub fn constant(vars: &Vars, trunc: u32, c: GaussRational) -> Self {
        Self::monomial(vars, trunc, vec![0; vars.len()], c)
    }

    pub fn one(vars: &Vars, trunc: u32) -> Self {
        Self::constant(vars, trunc, GaussRational::one())
    }

    pub fn monomial(vars: &Vars, trunc: u32, exp: Exponent, c: GaussRational) -> Self {
        assert_eq!(exp.len(), vars.len(), "exponent length");
        let mut s = Self::zero(vars, trunc);
        if degree(&exp) <= trunc && !c.is_zero() {
            s.terms.insert(exp, c);
        }
        s
    }

    /// The series of a single variable.
    pub fn var(vars: &Vars, trunc: u32, name: &str) -> Result<Self> {
        let i = vars.index(name)?;
        let mut e = vec![0; vars.len()];
        e[i] = 1;
        Ok(Self::monomial(vars, trunc, e, GaussRational::one()))
    }

    /// Builds a series, summing repeated exponents and dropping zeros and over-cap terms.
    pub fn from_terms<I>(vars: &Vars, trunc: u32, terms: I) -> Self
    where
        I: IntoIterator<Item = (Exponent, GaussRational)>,
    {
        let mut s = Self::zero(vars, trunc);
        for (e, c) in terms {
            assert_eq!(e.len(), vars.len(), "exponent length");
            if degree(&e) <= trunc {
                s.add_term(e, &c);
            } else if !c.is_zero() {
                s.rel = trunc as i32;
            }
        }
        s
    }

    /// Degree through which the coefficients are final (`EXACT` for polynomials).
    pub fn rel(&self) -> i32 {
        self.rel
    }

    pub fn is_exact(&self) -> bool {
        self.rel == EXACT
    }

    /// Overrides the reliability marker (only ever lowers it).
    pub fn with_rel(mut self, rel: i32) -> Self {
        self.rel = self.rel.min(rel);
        self
    }

    /// Declares the stored terms to be an exact polynomial.
    pub fn as_exact(mut self) -> Self {
        self.rel = EXACT;
        self
    }

    /// Lower bound for the true lowest degree, given what is known.
    fn low(&self) -> i32 {
        let stored = self.min_degree().map(|d| d as i32).unwrap_or(EXACT);
        if self.rel == EXACT {
            stored
        } else {
            stored.min(self.rel.saturating_add(1))
        }
    }

    /// If the two series agree wherever both are known, the degree through which they
    /// agree (`EXACT` when both are exact and equal).
    pub fn equal_through(&self, o: &Self) -> Option<i32> {
        self.check(o).ok()?;
        let d = self.rel.min(o.rel);
        if d == EXACT {
            return if self.terms == o.terms { Some(EXACT) } else { None };
        }
        if d < 0 {
            return Some(-1);
        }
        if self.agrees_to_degree(o, d as u32) {
            Some(d)
        } else {
            None
        }
    }

    /// True when the series is known to vanish through degree `d` (or identically).
    pub fn vanishes_through(&self, d: u32) -> bool {
        self.rel >= d as i32 && self.low_part(d).is_zero()
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn trunc(&self) -> u32 {
        self.trunc
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &GaussRational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, e: &[u16]) -> GaussRational {
        self.terms.get(e).cloned().unwrap_or_default()
    }

    pub fn constant_term(&self) -> GaussRational {
        self.coeff(&vec![0; self.vars.len()])
    }

    /// Highest total degree present (0 for the zero series).
    pub fn max_degree(&self) -> u32 {
        self.terms.keys().map(|e| degree(e)).max().unwrap_or(0)
    }

    pub fn min_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| degree(e)).min()
    }

    fn add_term(&mut self, e: Exponent, c: &GaussRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check(&self, o: &Self) -> Result<()> {
        if !self.vars.same(&o.vars) {
            return Err(Error::Mismatch(format!(
                "variable sets differ: {:?} vs {:?}",
                self.vars.names(),
                o.vars.names()
            )));
        }
        Ok(())
    }

    pub fn try_add(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        let trunc = self.trunc.min(o.trunc);
        let mut s = self.truncate(trunc);
        let o = o.truncate(trunc);
        for (e, c) in &o.terms {
            s.add_term(e.clone(), c);
        }
        s.rel = s.rel.min(o.rel);
        Ok(s)
    }

    pub fn try_sub(&self, o: &Self) -> Result<Self> {
        self.try_add(&o.neg_ref())
    }

    fn neg_ref(&self) -> Self {
        MultiSeries {
            vars: self.vars.clone(),
            trunc: self.trunc,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
            rel: self.rel,
        }
    }

    /// Truncated product. Operands must share variables; the cap is the smaller cap.
    pub fn try_mul(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        let trunc = self.trunc.min(o.trunc);
        let mut rel = sat_add(self.rel, o.low()).min(sat_add(o.rel, self.low()));
        if self.is_zero() || o.is_zero() {
            return Ok(Self::zero(&self.vars, trunc).with_rel(rel));
        }
        let mut dropped = false;
        let mut b: Vec<(&Exponent, u32, &GaussRational)> =
            o.terms.iter().map(|(e, c)| (e, degree(e), c)).collect();
        b.sort_by_key(|x| x.1);
        let mut acc: HashMap<Exponent, GaussRational> = HashMap::new();
        let n = self.vars.len();
        for (ea, ca) in &self.terms {
            let da = degree(ea);
            if da > trunc {
                dropped = true;
                continue;
            }
            let lim = trunc - da;
            for &(eb, db, cb) in &b {
                if db > lim {
                    dropped = true;
                    break;
                }
                let mut e = Vec::with_capacity(n);
                for k in 0..n {
                    e.push(ea[k] + eb[k]);
                }
                let p = ca * cb;
                acc.entry(e).and_modify(|x| *x += &p).or_insert(p);
            }
        }
        if dropped {
            rel = rel.min(trunc as i32);
        }
        let terms = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Ok(MultiSeries { vars: self.vars.clone(), trunc, terms, rel })
    }

    pub fn scale(&self, k: &GaussRational) -> Self {
        if k.is_zero() {
            return Self::zero(&self.vars, self.trunc);
        }
        MultiSeries {
            vars: self.vars.clone(),
            trunc: self.trunc,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * k)).collect(),
            rel: self.rel,
        }
    }

    pub fn scale_rat(&self, k: &BigRational) -> Self {
        self.scale(&GaussRational::from_real(k.clone()))
    }

    pub fn scale_int(&self, k: i64) -> Self {
        self.scale(&GaussRational::from_int(k))
    }

    pub fn mul_i(&self) -> Self {
        self.scale(&GaussRational::i())
    }

    fn cut(&self, d: u32, trunc: u32) -> Self {
        let mut rel = self.rel;
        if self.max_degree() > d {
            rel = rel.min(d as i32);
        }
        MultiSeries {
            vars: self.vars.clone(),
            trunc,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| degree(e) <= d)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
            rel,
        }
    }

    pub fn truncate(&self, d: u32) -> Self {
        let d = d.min(self.trunc);
        self.cut(d, d)
    }

    /// Same terms, new cap (dropping terms above it).
    pub fn with_trunc(&self, d: u32) -> Self {
        let mut s = self.cut(d, d);
        if d > self.trunc && !self.is_exact() {
            s.rel = s.rel.min(self.trunc as i32);
        }
        s
    }

    /// Keeps only the terms of total degree ≤ `d`, leaving the cap alone.
    pub fn low_part(&self, d: u32) -> Self {
        self.cut(d, self.trunc)
    }

    /// Coefficient-wise equality for all total degrees ≤ `d`.
    pub fn agrees_to_degree(&self, o: &Self, d: u32) -> bool {
        self.check(o).is_ok() && self.low_part(d).terms == o.low_part(d).terms
    }

    pub fn conj(&self) -> Self {
        let n = self.vars.len();
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mut f = vec![0; n];
                for (i, &x) in e.iter().enumerate() {
                    f[self.vars.conj_index(i)] = x;
                }
                (f, c.conj())
            })
            .collect();
        MultiSeries { vars: self.vars.clone(), trunc: self.trunc, terms, rel: self.rel }
    }

    pub fn is_real(&self) -> bool {
        self.conj().terms == self.terms
    }

    /// `(S + conj S) / 2`.
    pub fn re(&self) -> Self {
        (self + &self.conj()).scale(&GaussRational::from_frac(1, 2))
    }

    /// `(S − conj S) / (2i)`.
    pub fn im(&self) -> Self {
        (self - &self.conj()).scale(&GaussRational::from_parts((0, 1), (-1, 2)))
    }

    pub fn derivative(&self, i: usize) -> Self {
        let mut s = Self::zero(&self.vars, self.trunc);
        for (e, c) in &self.terms {
            let k = e[i];
            if k == 0 {
                continue;
            }
            let mut f = e.clone();
            f[i] -= 1;
            s.terms.insert(f, c.scale(&BigRational::from_integer(BigInt::from(k))));
        }
        s.rel = if self.rel == EXACT { EXACT } else { self.rel - 1 };
        s
    }

    pub fn derivative_by(&self, name: &str) -> Result<Self> {
        Ok(self.derivative(self.vars.index(name)?))
    }

    /// Multiplicative inverse of a series with nonzero constant term.
    pub fn unit_inverse(&self) -> Result<Self> {
        let c0 = self.constant_term();
        if c0.is_zero() {
            return Err(Error::Domain("unit_inverse: zero constant term".into()));
        }
        let inv0 = c0.inv()?;
        // 1/(c0(1+u)) = inv0 Σ (−u)^k
        let u = (self - &Self::constant(&self.vars, self.trunc, c0)).scale(&inv0);
        let mut result = Self::one(&self.vars, self.trunc);
        let mut power = Self::one(&self.vars, self.trunc);
        let neg_u = -&u;
        for _ in 0..self.trunc {
            power = &power * &neg_u;
            if power.is_zero() {
                break;
            }
            result = &result + &power;
        }
        Ok(result.scale(&inv0))
    }

    /// Formal exponential; the constant term must vanish.
    pub fn exp(&self) -> Result<Self> {
        if !self.constant_term().is_zero() {
            return Err(Error::Domain("exp: nonzero constant term".into()));
        }
        let mut result = Self::one(&self.vars, self.trunc);
        let mut term = Self::one(&self.vars, self.trunc);
        for k in 1..=self.trunc as i64 {
            term = (&term * self).scale(&GaussRational::from_frac(1, k));
            if term.is_zero() {
                break;
            }
            result = &result + &term;
        }
        Ok(result)
    }

    /// Formal `log(1 + a)`; the constant term of `a` must vanish.
    pub fn log1p(&self) -> Result<Self> {
        if !self.constant_term().is_zero() {
            return Err(Error::Domain("log1p: nonzero constant term".into()));
        }
        let mut result = Self::zero(&self.vars, self.trunc);
        let mut power = Self::one(&self.vars, self.trunc);
        for k in 1..=self.trunc as i64 {
            power = &power * self;
            if power.is_zero() {
                break;
            }
            let sign = if k % 2 == 1 { 1 } else { -1 };
            result = &result + &power.scale(&GaussRational::from_frac(sign, k));
        }
        Ok(result)
    }

    /// `log(self)` for a series with constant term exactly 1.
    pub fn log_unit(&self) -> Result<Self> {
        if self.constant_term() != GaussRational::one() {
            return Err(Error::Domain("log: constant term must be 1".into()));
        }
        (self - &Self::one(&self.vars, self.trunc)).log1p()
    }

    /// `self^alpha` for a series with constant term exactly 1.
    pub fn pow_unit(&self, alpha: &BigRational) -> Result<Self> {
        if self.constant_term() != GaussRational::one() {
            return Err(Error::Domain("pow_unit: constant term must be 1".into()));
        }
        let u = self - &Self::one(&self.vars, self.trunc);
        u.log1p()?.scale_rat(alpha).exp()
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut r = Self::one(&self.vars, self.trunc);
        for _ in 0..k {
            r = &r * self;
        }
        r
    }

    /// Replaces variable `name` by `expr` (same variable set).
    pub fn substitute(&self, name: &str, expr: &Self) -> Result<Self> {
        self.check(expr)?;
        let i = self.vars.index(name)?;
        let mut images = Vec::with_capacity(self.vars.len());
        for (j, _) in self.vars.names().iter().enumerate() {
            if j == i {
                images.push(expr.clone());
            } else {
                let mut e = vec![0; self.vars.len()];
                e[j] = 1;
                images.push(Self::monomial(&self.vars, self.trunc, e, GaussRational::one()));
            }
        }
        self.compose(&self.vars, self.trunc, &images)
    }

    /// Composition `S(images[0], images[1], ...)` into `target` variables.
    ///
    /// Images of variables that occur in `S` must have zero constant term: a
    /// truncated series cannot be re-expanded around a shifted point.
    pub fn compose(&self, target: &Vars, trunc: u32, images: &[Self]) -> Result<Self> {
        if images.len() != self.vars.len() {
            return Err(Error::Mismatch("compose: one image per variable required".into()));
        }
        let mut used = vec![false; images.len()];
        for e in self.terms.keys() {
            for (k, &x) in e.iter().enumerate() {
                if x > 0 {
                    used[k] = true;
                }
            }
        }
        let mut monomial_img: Vec<Option<(Exponent, GaussRational)>> = Vec::new();
        for (k, img) in images.iter().enumerate() {
            if !img.vars.same(target) {
                return Err(Error::Mismatch("compose: image in wrong variable set".into()));
            }
            if used[k] && !img.constant_term().is_zero() {
                return Err(Error::Domain(format!(
                    "compose: image of `{}` has a constant term; would need terms beyond the cap",
                    self.vars.names()[k]
                )));
            }
            monomial_img.push(match img.terms.len() {
                0 => Some((vec![0; target.len()], GaussRational::zero())),
                1 => img.terms.iter().next().map(|(e, c)| (e.clone(), c.clone())),
                _ => None,
            });
        }
        let general: Vec<usize> = (0..images.len()).filter(|&k| monomial_img[k].is_none()).collect();
        // group by exponents on the general variables; monomial images applied inline
        let mut groups: BTreeMap<Vec<u16>, MultiSeries> = BTreeMap::new();
        for (e, c) in &self.terms {
            let key: Vec<u16> = general.iter().map(|&k| e[k]).collect();
            let mut coeff = c.clone();
            let mut mexp = vec![0u16; target.len()];
            let mut dead = false;
            for (k, &x) in e.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                if let Some((me, mc)) = &monomial_img[k] {
                    if mc.is_zero() {
                        dead = true;
                        break;
                    }
                    for _ in 0..x {
                        coeff = &coeff * mc;
                    }
                    for (t, &y) in me.iter().enumerate() {
                        mexp[t] += y * x;
                    }
                }
            }
            if dead {
                continue;
            }
            let g = groups.entry(key).or_insert_with(|| MultiSeries::zero(target, trunc));
            if degree(&mexp) <= trunc {
                g.add_term(mexp, &coeff);
            } else {
                g.rel = g.rel.min(trunc as i32);
            }
        }
        let mut powers: Vec<Vec<MultiSeries>> = general
            .iter()
            .map(|&k| vec![MultiSeries::one(target, trunc), images[k].with_trunc(trunc)])
            .collect();
        let mut result = MultiSeries::zero(target, trunc);
        for (key, g) in groups {
            let mut prod = g;
            for (slot, &x) in key.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                while powers[slot].len() <= x as usize {
                    let next = &powers[slot][powers[slot].len() - 1] * &powers[slot][1];
                    powers[slot].push(next);
                }
                prod = &prod * &powers[slot][x as usize];
                if prod.is_zero() {
                    break;
                }
            }
            result = &result + &prod;
        }
        let mut bound = self.rel;
        for (k, img) in images.iter().enumerate() {
            if used[k] {
                bound = bound.min(img.rel);
            }
        }
        result.rel = result.rel.min(bound);
        Ok(result)
    }

    /// Re-expresses a series in a larger variable set containing all current variables.
    pub fn embed(&self, target: &Vars) -> Result<Self> {
        let map: Vec<usize> =
            self.vars.names().iter().map(|n| target.index(n)).collect::<Result<_>>()?;
        let mut s = Self::zero(target, self.trunc);
        for (e, c) in &self.terms {
            let mut f = vec![0; target.len()];
            for (k, &x) in e.iter().enumerate() {
                f[map[k]] = x;
            }
            s.terms.insert(f, c.clone());
        }
        s.rel = self.rel;
        Ok(s)
    }

    /// Numeric evaluation at a point (one complex value per variable).
    pub fn eval_f64(&self, point: &[Complex64]) -> Complex64 {
        assert_eq!(point.len(), self.vars.len());
        let mut acc = Complex64::new(0.0, 0.0);
        for (e, c) in &self.terms {
            let (re, im) = c.to_f64_pair();
            let mut m = Complex64::new(re, im);
            for (k, &x) in e.iter().enumerate() {
                if x > 0 {
                    m *= point[k].powu(x as u32);
                }
            }
            acc += m;
        }
        acc
    }

    /// Exact evaluation at a point with exact coordinates (a polynomial evaluation of the stored terms).
    pub fn eval_exact(&self, point: &[GaussRational]) -> GaussRational {
        assert_eq!(point.len(), self.vars.len());
        let mut acc = GaussRational::zero();
        for (e, c) in &self.terms {
            let mut m = c.clone();
            for (k, &x) in e.iter().enumerate() {
                for _ in 0..x {
                    m = &m * &point[k];
                }
            }
            acc += &m;
        }
        acc
    }

    pub fn to_json(&self) -> SeriesJson {
        SeriesJson {
            vars: self.vars.names().to_vec(),
            trunc: self.trunc,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| TermJson {
                    exp: e.clone(),
                    re: format_rational(&c.re),
                    im: format_rational(&c.im),
                })
                .collect(),
        }
    }

    pub fn from_json(j: &SeriesJson) -> Result<Self> {
        let vars = Vars::new(&j.vars)?;
        let mut s = Self::zero(&vars, j.trunc);
        s.rel = j.trunc as i32;
        let mut seen = std::collections::HashSet::new();
        for t in &j.terms {
            if t.exp.len() != vars.len() {
                return Err(Error::Parse("term exponent length differs from vars".into()));
            }
            if degree(&t.exp) > j.trunc {
                return Err(Error::Parse("term degree exceeds trunc".into()));
            }
            if !seen.insert(t.exp.clone()) {
                return Err(Error::Parse("duplicate exponent".into()));
            }
            let c = GaussRational::new(parse_rational(&t.re)?, parse_rational(&t.im)?);
            if !c.is_zero() {
                s.terms.insert(t.exp.clone(), c);
            }
        }
        Ok(s)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&self.to_json()).expect("series serializes")
    }

    pub fn decode(text: &str) -> Result<Self> {
        let j: SeriesJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        if j.trunc > 64 {
            return Err(Error::Parse("trunc above 64 is not supported".into()));
        }
        Self::from_json(&j)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct TermJson {
    pub exp: Vec<u16>,
    pub re: String,
    pub im: String,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct SeriesJson {
    pub vars: Vec<String>,
    pub trunc: u32,
    pub terms: Vec<TermJson>,
}

impl fmt::Display for MultiSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})")?;
            for (k, &x) in e.iter().enumerate() {
                match x {
                    0 => {}
                    1 => write!(f, "*{}", self.vars.names()[k])?,
                    _ => write!(f, "*{}^{x}", self.vars.names()[k])?,
                }
            }
        }
        Ok(())
    }
}

impl Add for &MultiSeries {
    type Output = MultiSeries;
    fn add(self, o: &MultiSeries) -> MultiSeries {
        self.try_add(o).expect("series add")
    }
}

impl Sub for &MultiSeries {
    type Output = MultiSeries;
    fn sub(self, o: &MultiSeries) -> MultiSeries {
        self.try_sub(o).expect("series sub")
    }
}

impl Mul for &MultiSeries {
    type Output = MultiSeries;
    fn mul(self, o: &MultiSeries) -> MultiSeries {
        self.try_mul(o).expect("series mul")
    }
}

impl Neg for &MultiSeries {
    type Output = MultiSeries;
    fn neg(self) -> MultiSeries {
        self.neg_ref()
    }
}

impl Add for MultiSeries {
    type Output = MultiSeries;
    fn add(self, o: MultiSeries) -> MultiSeries {
        &self + &o
    }
}

impl Sub for MultiSeries {
    type Output = MultiSeries;
    fn sub(self, o: MultiSeries) -> MultiSeries {
        &self - &o
    }
}

impl Mul for MultiSeries {
    type Output = MultiSeries;
    fn mul(self, o: MultiSeries) -> MultiSeries {
        &self * &o
    }
}

impl Neg for MultiSeries {
    type Output = MultiSeries;
    fn neg(self) -> MultiSeries {
        self.neg_ref()
    }
}

/// Small helper for tests and builders: `c·Π var^k` from `(name, power)` pairs.
pub fn mono(vars: &Vars, trunc: u32, c: GaussRational, powers: &[(&str, u16)]) -> MultiSeries {
    let mut e = vec![0; vars.len()];
    for &(n, k) in powers {
        e[vars.index(n).expect("known variable")] += k;
    }
    MultiSeries::monomial(vars, trunc, e, c)
}

pub fn rat(p: i64, q: i64) -> GaussRational {
    GaussRational::from_frac(p, q)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v1() -> Vars {
        Vars::new(&["z1", "zb1", "t"]).unwrap()
    }

    #[test]
    fn difference_of_squares() {
        let v = v1();
        let one = MultiSeries::one(&v, 6);
        let z = MultiSeries::var(&v, 6, "z1").unwrap();
        let p = &(&one + &z) * &(&one - &z);
        assert_eq!(p, &one - &(&z * &z));
        assert!((&p * &MultiSeries::zero(&v, 6)).is_zero());
    }

    #[test]
    fn geometric_inverse() {
        let v = v1();
        let one = MultiSeries::one(&v, 5);
        let z = MultiSeries::var(&v, 5, "z1").unwrap();
        let inv = (&one + &z).unit_inverse().unwrap();
        for k in 0..=5u16 {
            let sign = if k % 2 == 0 { 1 } else { -1 };
            assert_eq!(inv.coeff(&[k, 0, 0]), GaussRational::from_int(sign));
        }
        let c = MultiSeries::constant(&v, 5, GaussRational::from_parts((2, 1), (1, 1)));
        assert_eq!(c.unit_inverse().unwrap().constant_term(), GaussRational::from_parts((2, 5), (-1, 5)));
        assert!(z.unit_inverse().is_err());
    }

    #[test]
    fn log_exp_pair() {
        let v = v1();
        let s = &MultiSeries::var(&v, 6, "z1").unwrap() + &MultiSeries::var(&v, 6, "zb1").unwrap();
        let back = (&s.exp().unwrap() - &MultiSeries::one(&v, 6)).log1p().unwrap();
        assert_eq!(back, s);
        assert_eq!(MultiSeries::zero(&v, 6).exp().unwrap(), MultiSeries::one(&v, 6));
        assert!(MultiSeries::one(&v, 6).exp().is_err());
    }

    #[test]
    fn substitution_examples() {
        let v = Vars::new(&["z1", "z2", "zb1", "zb2"]).unwrap();
        let one = MultiSeries::one(&v, 6);
        let z = MultiSeries::var(&v, 6, "z1").unwrap();
        let w = MultiSeries::var(&v, 6, "z2").unwrap();
        let s = &(&one + &z) + &w;
        assert_eq!(s.substitute("z1", &MultiSeries::zero(&v, 6)).unwrap(), &one + &w);
        let w2 = &w * &w;
        assert_eq!(w2.substitute("z2", &(&z * &z)).unwrap(), z.pow(4));
        assert!(w2.substitute("z2", &(&one + &z)).is_err());
    }

    #[test]
    fn conj_pairs_and_reality() {
        let v = v1();
        let z = MultiSeries::var(&v, 4, "z1").unwrap();
        let zb = MultiSeries::var(&v, 4, "zb1").unwrap();
        let t = MultiSeries::var(&v, 4, "t").unwrap();
        assert_eq!(z.conj(), zb);
        assert_eq!(t.conj(), t);
        assert!((&z * &zb).is_real());
        assert!(!z.mul_i().is_real());
        assert!(Vars::new(&["z1", "t"]).is_err());
    }

    #[test]
    fn json_round_trip() {
        let v = v1();
        let s = &mono(&v, 5, GaussRational::from_parts((3, 4), (-1, 6)), &[("z1", 2), ("t", 1)])
            + &MultiSeries::constant(&v, 5, rat(-2, 1));
        let text = s.to_json_string();
        assert_eq!(MultiSeries::decode(&text).unwrap(), s);
        assert!(text.contains("\"3/4\""));
        assert!(MultiSeries::decode(r#"{"vars":["z1"],"trunc":2,"terms":[]}"#).is_err());
    }
}
