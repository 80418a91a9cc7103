//! Exact complex rationals `re + im·i` with arbitrary-precision parts.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct GaussRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussRational { re, im }
    }

    pub fn zero() -> Self {
        GaussRational { re: BigRational::zero(), im: BigRational::zero() }
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn i() -> Self {
        GaussRational { re: BigRational::zero(), im: BigRational::one() }
    }

    pub fn from_int(n: i64) -> Self {
        GaussRational { re: BigRational::from_integer(BigInt::from(n)), im: BigRational::zero() }
    }

    pub fn from_frac(p: i64, q: i64) -> Self {
        GaussRational { re: ratio(p, q), im: BigRational::zero() }
    }

    pub fn from_real(re: BigRational) -> Self {
        GaussRational { re, im: BigRational::zero() }
    }

    pub fn from_parts(re: (i64, i64), im: (i64, i64)) -> Self {
        GaussRational { re: ratio(re.0, re.1), im: ratio(im.0, im.1) }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussRational { re: self.re.clone(), im: -self.im.clone() }
    }

    /// `|q|²`, always real.
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Result<Self> {
        let n = self.norm_sqr();
        if n.is_zero() {
            return Err(Error::Domain("division by zero".into()));
        }
        Ok(GaussRational { re: &self.re / &n, im: -(&self.im / &n) })
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        GaussRational { re: &self.re * k, im: &self.im * k }
    }

    pub fn mul_i(&self) -> Self {
        GaussRational { re: -self.im.clone(), im: self.re.clone() }
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (self.re.to_f64().unwrap_or(f64::NAN), self.im.to_f64().unwrap_or(f64::NAN))
    }

    /// Parses `a`, `bi`, `a+bi`, `a-bi`, `i`, `-i`; `a`, `b` are integers or `p/q`.
    pub fn parse(s: &str) -> Result<Self> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if t.is_empty() {
            return Err(Error::Parse("empty coefficient".into()));
        }
        if let Some(body) = t.strip_suffix('i') {
            // find the split between real and imaginary parts: last +/- not at start
            // and not following '/'
            let bytes = body.as_bytes();
            let mut split = None;
            for k in (1..bytes.len()).rev() {
                if (bytes[k] == b'+' || bytes[k] == b'-') && bytes[k - 1] != b'/' {
                    split = Some(k);
                    break;
                }
            }
            let (re_s, im_s) = match split {
                Some(k) => (&body[..k], &body[k..]),
                None => ("", body),
            };
            let re = if re_s.is_empty() { BigRational::zero() } else { parse_rational(re_s)? };
            let im = match im_s {
                "" | "+" => BigRational::one(),
                "-" => -BigRational::one(),
                other => parse_rational(other)?,
            };
            Ok(GaussRational { re, im })
        } else {
            Ok(GaussRational { re: parse_rational(&t)?, im: BigRational::zero() })
        }
    }
}

pub fn ratio(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// Parses `p` or `p/q` (optional sign) into a reduced rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let t = s.trim();
    let t = t.strip_prefix('+').unwrap_or(t);
    let bad = || Error::Parse(format!("invalid rational `{s}`"));
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n, d),
        None => (t, "1"),
    };
    if num.is_empty() || den.is_empty() || den.starts_with(['+', '-']) {
        return Err(bad());
    }
    let digits = |x: &str| {
        let x = x.strip_prefix('-').unwrap_or(x);
        !x.is_empty() && x.bytes().all(|b| b.is_ascii_digit())
    };
    if !digits(num) || !digits(den) {
        return Err(bad());
    }
    let n: BigInt = num.parse().map_err(|_| bad())?;
    let d: BigInt = den.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(Error::Parse(format!("zero denominator in `{s}`")));
    }
    Ok(BigRational::new(n, d))
}

/// `p/q` in lowest terms, or `p` when `q = 1`.
pub fn format_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Decimal rendering with 17 significant digits.
pub fn decimal(q: &BigRational) -> String {
    format_f64(q.to_f64().unwrap_or(f64::NAN))
}

pub fn format_f64(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    format!("{:.16e}", x)
}

impl fmt::Display for GaussRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", format_rational(&self.re));
        }
        let im_abs = self.im.abs();
        let im_s = if im_abs.is_one() { String::new() } else { format_rational(&im_abs) };
        let sign = if self.im.is_negative() { "-" } else { "+" };
        if self.re.is_zero() {
            let lead = if self.im.is_negative() { "-" } else { "" };
            write!(f, "{lead}{im_s}i")
        } else {
            write!(f, "{}{sign}{im_s}i", format_rational(&self.re))
        }
    }
}

impl Add for &GaussRational {
    type Output = GaussRational;
    fn add(self, o: &GaussRational) -> GaussRational {
        GaussRational { re: &self.re + &o.re, im: &self.im + &o.im }
    }
}

impl Sub for &GaussRational {
    type Output = GaussRational;
    fn sub(self, o: &GaussRational) -> GaussRational {
        GaussRational { re: &self.re - &o.re, im: &self.im - &o.im }
    }
}

impl Mul for &GaussRational {
    type Output = GaussRational;
    fn mul(self, o: &GaussRational) -> GaussRational {
        if self.im.is_zero() && o.im.is_zero() {
            return GaussRational { re: &self.re * &o.re, im: BigRational::zero() };
        }
        GaussRational {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }
}

impl Div for &GaussRational {
    type Output = GaussRational;
    fn div(self, o: &GaussRational) -> GaussRational {
        self * &o.inv().expect("division by zero GaussRational")
    }
}

impl Neg for &GaussRational {
    type Output = GaussRational;
    fn neg(self) -> GaussRational {
        GaussRational { re: -self.re.clone(), im: -self.im.clone() }
    }
}

impl Neg for GaussRational {
    type Output = GaussRational;
    fn neg(self) -> GaussRational {
        GaussRational { re: -self.re, im: -self.im }
    }
}

impl Add for GaussRational {
    type Output = GaussRational;
    fn add(self, o: GaussRational) -> GaussRational {
        &self + &o
    }
}

impl Sub for GaussRational {
    type Output = GaussRational;
    fn sub(self, o: GaussRational) -> GaussRational {
        &self - &o
    }
}

impl Mul for GaussRational {
    type Output = GaussRational;
    fn mul(self, o: GaussRational) -> GaussRational {
        &self * &o
    }
}

impl AddAssign<&GaussRational> for GaussRational {
    fn add_assign(&mut self, o: &GaussRational) {
        self.re += &o.re;
        self.im += &o.im;
    }
}

impl SubAssign<&GaussRational> for GaussRational {
    fn sub_assign(&mut self, o: &GaussRational) {
        self.re -= &o.re;
        self.im -= &o.im;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(GaussRational::parse("3/6").unwrap(), GaussRational::from_frac(1, 2));
        assert_eq!(GaussRational::parse("i").unwrap(), GaussRational::i());
        assert_eq!(GaussRational::parse("-i").unwrap(), -GaussRational::i());
        assert_eq!(
            GaussRational::parse("1/2 - 3/4i").unwrap(),
            GaussRational::from_parts((1, 2), (-3, 4))
        );
        assert_eq!(GaussRational::parse("-2/3i").unwrap(), GaussRational::from_parts((0, 1), (-2, 3)));
        assert_eq!(GaussRational::parse("-1+i").unwrap(), GaussRational::from_parts((-1, 1), (1, 1)));
        assert!(GaussRational::parse("1/0").is_err());
        assert!(GaussRational::parse("x").is_err());
        assert!(GaussRational::parse("1//2").is_err());
        assert!(GaussRational::parse("").is_err());
    }

    #[test]
    fn display_round_trips() {
        for s in ["0", "5", "-1/3", "i", "-i", "2/7i", "1/2+3i", "-4-5/6i"] {
            let q = GaussRational::parse(s).unwrap();
            assert_eq!(GaussRational::parse(&q.to_string()).unwrap(), q, "{s}");
        }
    }

    #[test]
    fn norm_is_real_and_conj_involutive() {
        let q = GaussRational::from_parts((3, 5), (-7, 2));
        let p = &q * &q.conj();
        assert!(p.is_real());
        assert_eq!(p.re, q.norm_sqr());
        assert_eq!(q.conj().conj(), q);
        assert_eq!(&q * &q.inv().unwrap(), GaussRational::one());
    }
}
