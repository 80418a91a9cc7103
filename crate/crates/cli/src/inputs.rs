//! Input files and built-in surfaces.

use std::path::Path;

use crinv::error::{Error, Result};
use crinv::series::SeriesJson;
use crinv::surface::{HolJson, HolPoly, Hypersurface, RigidSurface};
use crinv::{MultiSeries, Vars};

pub const DEFAULT_TRUNC: u32 = 8;

pub fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))
}

/// A surface argument: a built-in name (`quadric`, `ball`, optionally `:n`) or a surface JSON file.
#[derive(Clone, Debug)]
pub enum SurfaceSpec {
    Quadric(usize),
    Ball(usize),
    Rigid(RigidSurface),
}

fn builtin(text: &str) -> Option<Result<SurfaceSpec>> {
    let (name, n) = match text.split_once(':') {
        Some((a, b)) => (a, Some(b)),
        None => (text, None),
    };
    if name != "quadric" && name != "ball" {
        return None;
    }
    let n = match n.map(|s| s.parse::<usize>()) {
        None => 1,
        Some(Ok(k)) if (1..=4).contains(&k) => k,
        Some(_) => return Some(Err(Error::Parse(format!("bad dimension in `{text}`")))),
    };
    Some(Ok(if name == "ball" { SurfaceSpec::Ball(n) } else { SurfaceSpec::Quadric(n) }))
}

impl SurfaceSpec {
    pub fn load(arg: Option<&str>, trunc: Option<u32>) -> Result<Self> {
        let arg = arg.unwrap_or("quadric");
        if let Some(b) = builtin(arg) {
            return b;
        }
        let s = RigidSurface::decode(&read(Path::new(arg))?)?;
        match trunc {
            Some(d) if d != s.trunc() => Ok(SurfaceSpec::Rigid(RigidSurface::new(s.n, s.f.with_trunc(d))?)),
            _ => Ok(SurfaceSpec::Rigid(s)),
        }
    }

    pub fn n(&self) -> usize {
        match self {
            SurfaceSpec::Quadric(n) | SurfaceSpec::Ball(n) => *n,
            SurfaceSpec::Rigid(s) => s.n,
        }
    }

    pub fn trunc(&self, over: Option<u32>) -> u32 {
        match self {
            SurfaceSpec::Rigid(s) => s.trunc(),
            _ => over.unwrap_or(DEFAULT_TRUNC),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            SurfaceSpec::Quadric(n) => format!("quadric:{n}"),
            SurfaceSpec::Ball(n) => format!("ball:{n}"),
            SurfaceSpec::Rigid(s) => format!("rigid n={} F={}", s.n, s.f),
        }
    }

    pub fn hypersurface(&self, over: Option<u32>) -> Result<Hypersurface> {
        let d = self.trunc(over);
        match self {
            SurfaceSpec::Quadric(n) => Ok(Hypersurface::quadric(*n, d)),
            SurfaceSpec::Ball(n) => Ok(Hypersurface::ball(*n, d)),
            SurfaceSpec::Rigid(s) => Hypersurface::rigid(s),
        }
    }

    /// The rigid surface, for the pseudohermitian engine (the ball is not rigid in these coordinates).
    pub fn rigid(&self, over: Option<u32>) -> Result<RigidSurface> {
        match self {
            SurfaceSpec::Quadric(n) => Ok(RigidSurface::quadric(*n, self.trunc(over))),
            SurfaceSpec::Rigid(s) => Ok(s.clone()),
            SurfaceSpec::Ball(_) => {
                Err(Error::Precondition("this command needs a rigid surface; the ball is only used by fefferman, build-ambient and total-qprime".into()))
            }
        }
    }
}

/// A scaling or test function: `2 Re(hol)` from a holomorphic-terms file, or a general real series
/// in the base variables (its own ambient extension).
#[derive(Clone, Debug)]
pub enum FieldInput {
    Pluriharmonic(HolPoly),
    General(MultiSeries),
}

impl FieldInput {
    pub fn load(path: &Path, n: usize) -> Result<Self> {
        let text = read(path)?;
        let v: serde_json::Value = serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
        if v.get("hol_terms").is_some() {
            let j: HolJson = serde_json::from_value(v).map_err(|e| Error::Parse(e.to_string()))?;
            return Ok(FieldInput::Pluriharmonic(HolPoly::from_json(n, &j)?));
        }
        let j: SeriesJson = serde_json::from_value(v).map_err(|e| Error::Parse(e.to_string()))?;
        if j.trunc > 64 {
            return Err(Error::Parse("trunc above 64 is not supported".into()));
        }
        let s = MultiSeries::from_json(&j)?.as_exact();
        if s.vars() != &Vars::base(n) {
            return Err(Error::Mismatch(format!("series inputs must use the base variables {:?}", Vars::base(n).names())));
        }
        if !s.is_real() {
            return Err(Error::Precondition("scalings and test functions must be real".into()));
        }
        Ok(FieldInput::General(s))
    }

    /// Ambient extension in the base variables.
    pub fn extension(&self, trunc: u32) -> MultiSeries {
        match self {
            FieldInput::Pluriharmonic(h) => h.real_part2(trunc),
            FieldInput::General(s) => s.with_trunc(trunc),
        }
    }

    pub fn is_declared_pluriharmonic(&self) -> bool {
        matches!(self, FieldInput::Pluriharmonic(_))
    }
}
