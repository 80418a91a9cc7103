//! Report envelope and value encodings shared by all subcommands.

use crinv::gauss::{format_f64, GaussRational};
use crinv::series::SeriesJson;
use crinv::MultiSeries;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::value::RawValue;

/// A float written with 17 significant digits.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct F17(pub f64);

impl Serialize for F17 {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return s.serialize_str(&self.0.to_string());
        }
        let text = if self.0 == 0.0 { "0.0".to_string() } else { format!("{:.16e}", self.0) };
        RawValue::from_string(text).map_err(serde::ser::Error::custom)?.serialize(s)
    }
}

impl<'de> Deserialize<'de> for F17 {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Num {
            F(f64),
            S(String),
        }
        match Num::deserialize(d)? {
            Num::F(x) => Ok(F17(x)),
            Num::S(s) => s.parse().map(F17).map_err(serde::de::Error::custom),
        }
    }
}

pub fn f17s(v: &[f64]) -> Vec<F17> {
    v.iter().map(|&x| F17(x)).collect()
}

/// An exact Gaussian rational with its decimal rendering.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Exact {
    pub exact: String,
    pub decimal: String,
}

impl Exact {
    pub fn new(g: &GaussRational) -> Self {
        let (re, im) = g.to_f64_pair();
        let decimal = if im == 0.0 {
            format_f64(re)
        } else {
            format!("{} {} {}i", format_f64(re), if im < 0.0 { "-" } else { "+" }, format_f64(im.abs()))
        };
        Exact { exact: g.to_string(), decimal }
    }

    pub fn parse(&self) -> crinv::Result<GaussRational> {
        GaussRational::parse(&self.exact)
    }
}

/// A series together with its value at the base point and the degree through which it is final.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesReport {
    pub at_origin: Exact,
    /// `null` for exact polynomials.
    pub reliable_degree: Option<i32>,
    pub series: SeriesJson,
}

impl SeriesReport {
    pub fn new(s: &MultiSeries) -> Self {
        SeriesReport {
            at_origin: Exact::new(&s.constant_term()),
            reliable_degree: if s.is_exact() { None } else { Some(s.rel()) },
            series: s.to_json(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
}

#[derive(Default, Clone, Debug)]
pub struct Checks(pub Vec<Check>);

impl Checks {
    pub fn add(&mut self, name: &str, passed: bool) {
        self.0.push(Check { name: name.to_string(), passed });
    }

    pub fn all_passed(&self) -> bool {
        self.0.iter().all(|c| c.passed)
    }
}

/// True when the two series agree wherever both are known, through a nonnegative degree.
pub fn agree(a: &MultiSeries, b: &MultiSeries) -> bool {
    matches!(a.equal_through(b), Some(d) if d >= 0)
}
