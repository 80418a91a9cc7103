//! Subcommand implementations. Each builds a typed result, a list of self-validation
//! checks and the resolved configuration, and renders them as one report.

use std::path::Path;

use crinv::ambient::AmbientElement;
use crinv::error::{Error, Result};
use crinv::gauss::GaussRational;
use crinv::invariants::{gjms, is_pluriharmonic, p_prime, q_curvature_ambient, q_prime};
use crinv::metric::AmbientMetric;
use crinv::monge::{fefferman_improve, verify_order, MongeAmpereReport};
use crinv::renorm::{
    burns_epstein, fit_log_term, fmt17, log_term_constant, renormalized_volume_integral, self_adjointness_residual,
    sphere_pluriharmonic, sphere_tw_data, sphere_vars, total_q_prime_quadrature, total_q_prime_variation, BallQuadrature,
    EpsGrid, LogFitResult, SphereOperator, DEFAULT_FIT_THRESHOLD, DEFAULT_RESOLUTION, SPHERE_TRUNC,
};
use crinv::series::SeriesJson;
use crinv::surface::{HolJson, HolPoly, Hypersurface, RigidSurface};
use crinv::tw::{Dir, PseudoHermitian};
use crinv::tw3::{
    cartan_obstruction, p_prime_tw, paneitz_tw, pluriharmonic_field, pluriharmonic_test, pseudo_einstein_test,
    q_curvature_tw, q_prime_terms, q_prime_tw, s_tensor, scaled_invariants, PHField, PHFieldJson, PHInvariants,
};
use crinv::{MultiSeries, Vars};
use serde::{Deserialize, Serialize};

use crate::inputs::{read, FieldInput, SurfaceSpec, DEFAULT_TRUNC};
use crate::report::{agree, f17s, Check, Checks, Exact, SeriesReport, F17};
use crate::{Command, Format, Options, Outcome};

/// Resolved configuration, echoed in every report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: Command,
    pub version: String,
    pub surface: Option<String>,
    pub upsilon: Option<String>,
    pub f: Option<String>,
    pub trunc: Option<u32>,
    pub a: Option<Vec<String>>,
    pub b: Option<Vec<String>>,
    pub eps_grid: Option<EpsGrid>,
    pub resolution: Option<usize>,
    pub out: Option<String>,
    pub format: Format,
    pub require_pseudo_einstein: bool,
    /// Exact values are rendered as `p/q` strings with a decimal beside them.
    pub rendering: String,
}

impl RunConfig {
    fn new(command: Command, opts: &Options) -> Self {
        let path = |p: &Option<std::path::PathBuf>| p.as_ref().map(|p| p.display().to_string());
        RunConfig {
            command,
            version: env!("CARGO_PKG_VERSION").to_string(),
            surface: None,
            upsilon: path(&opts.upsilon),
            f: path(&opts.f),
            trunc: opts.trunc,
            a: None,
            b: None,
            eps_grid: None,
            resolution: None,
            out: path(&opts.out),
            format: opts.format,
            require_pseudo_einstein: opts.require_pseudo_einstein,
            rendering: "exact+decimal".into(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Report<T> {
    pub command: Command,
    pub config: RunConfig,
    pub ok: bool,
    pub checks: Vec<Check>,
    pub result: T,
}

fn finish<T: Serialize>(config: RunConfig, checks: Checks, result: T, csv: Option<String>) -> Result<Outcome> {
    let ok = checks.all_passed();
    let text = match config.format {
        Format::Csv => csv.ok_or_else(|| {
            Error::Precondition("CSV output is available for model-table, total-qprime and selfadjoint".into())
        })?,
        Format::Json => {
            let r = Report { command: config.command, config, ok, checks: checks.0, result };
            let mut s = serde_json::to_string_pretty(&r).map_err(|e| Error::Validation(e.to_string()))?;
            s.push('\n');
            s
        }
    };
    Ok(Outcome { text, ok })
}

pub fn dispatch(cmd: Command, opts: &Options) -> Result<Outcome> {
    if opts.format == Format::Csv && !matches!(cmd, Command::ModelTable | Command::TotalQprime | Command::Selfadjoint) {
        return Err(Error::Precondition("CSV output is available for model-table, total-qprime and selfadjoint".into()));
    }
    let config = RunConfig::new(cmd, opts);
    match cmd {
        Command::Fefferman => fefferman(config, opts),
        Command::BuildAmbient => build_ambient(config, opts),
        Command::Invariants => invariants(config, opts),
        Command::ModelTable => model_table(config, opts),
        Command::TotalQprime => total_qprime(config, opts),
        Command::Selfadjoint => selfadjoint(config, opts),
        Command::PluriharmonicTest => pluriharmonic(config, opts),
        Command::Cartan => cartan(config, opts),
    }
}

fn vanishes(s: &MultiSeries) -> bool {
    agree(s, &MultiSeries::zero(s.vars(), s.trunc()))
}

/// Fails when truncation leaves no reliable degree of `s`.
fn known(name: &str, s: &MultiSeries) -> Result<()> {
    if s.rel() < 0 {
        return Err(Error::Precondition(format!("{name} is not determined at this truncation; raise --trunc")));
    }
    Ok(())
}

fn solve(spec: &SurfaceSpec, trunc: Option<u32>) -> Result<(Hypersurface, MongeAmpereReport)> {
    let h = spec.hypersurface(trunc)?;
    let rep = fefferman_improve(&h, spec.n() as u32 + 2)?;
    Ok((h, rep))
}

// ---------------------------------------------------------------- fefferman

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FeffermanResult {
    pub n: usize,
    pub trunc: u32,
    pub r: SeriesReport,
    pub order_achieved: u32,
    pub exact: bool,
    pub reliable_degree: u32,
    pub stage_factors: Vec<Exact>,
    pub obstruction: Option<SeriesReport>,
    pub obstruction_vanishes: Option<bool>,
    pub eta_tilde: Option<SeriesReport>,
    pub recomputed_order: u32,
    pub recomputed_exact: bool,
}

fn fefferman(mut config: RunConfig, opts: &Options) -> Result<Outcome> {
    let spec = SurfaceSpec::load(opts.surface.as_deref(), opts.trunc)?;
    config.surface = Some(spec.describe());
    let (h, rep) = solve(&spec, opts.trunc)?;
    let again = verify_order(&h, &rep.r)?;
    let n = spec.n();
    let mut checks = Checks::default();
    checks.add("independent recomputation of 𝒥 confirms the order", again.order == rep.order_achieved && again.exact == rep.exact);
    checks.add("𝒥 = 1 + O(ρ^{n+2})", rep.order_achieved == n as u32 + 2);
    let result = FeffermanResult {
        n,
        trunc: h.trunc(),
        r: SeriesReport::new(&rep.r),
        order_achieved: rep.order_achieved,
        exact: rep.exact,
        reliable_degree: rep.reliable_degree,
        stage_factors: rep.stage_factors.iter().map(Exact::new).collect(),
        obstruction: rep.obstruction.as_ref().map(SeriesReport::new),
        obstruction_vanishes: rep.obstruction.as_ref().map(vanishes),
        eta_tilde: rep.eta_tilde.as_ref().map(SeriesReport::new),
        recomputed_order: again.order,
        recomputed_exact: again.exact,
    };
    finish(config, checks, result, None)
}

// ---------------------------------------------------------------- build-ambient

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Signature {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AmbientResult {
    pub n: usize,
    pub sigma: i64,
    pub r: SeriesReport,
    pub det_m: SeriesReport,
    pub hermitian: bool,
    pub det_identity_checked: bool,
    pub signature: Signature,
    /// `g̃_{IJ̄}` at `z⁰ = 1` over the base point.
    pub g_at_origin: Vec<Vec<Exact>>,
}

fn build_ambient(mut config: RunConfig, opts: &Options) -> Result<Outcome> {
    let spec = SurfaceSpec::load(opts.surface.as_deref(), opts.trunc)?;
    config.surface = Some(spec.describe());
    let (_, rep) = solve(&spec, opts.trunc)?;
    let m = AmbientMetric::build(&rep.r)?;
    let (positive, negative, zero) = m.signature_at_origin();
    let k = m.size();
    let g = (0..k).map(|i| (0..k).map(|j| Exact::new(&-m.m[i][j].constant_term())).collect()).collect();
    let mut checks = Checks::default();
    checks.add("g̃ is hermitian", m.is_hermitian());
    checks.add("det g̃ identity verified", m.det_identity_checked);
    checks.add("signature (n+1, 1)", positive == m.n + 1 && negative == 1 && zero == 0);
    let result = AmbientResult {
        n: m.n,
        sigma: m.sigma,
        r: SeriesReport::new(&m.r),
        det_m: SeriesReport::new(&m.det_m),
        hermitian: m.is_hermitian(),
        det_identity_checked: m.det_identity_checked,
        signature: Signature { positive, negative, zero },
        g_at_origin: g,
    };
    finish(config, checks, result, None)
}

// ---------------------------------------------------------------- pseudohermitian setup

/// The contact form `e^Υ θ_r` on a rigid surface, where `θ_r` belongs to the normalized
/// defining function `r`, together with the ambient metric of `r`.
struct Scaled {
    surface: RigidSurface,
    h: Hypersurface,
    m: AmbientMetric,
    /// Extension in the base variables.
    ext: MultiSeries,
    /// `e^{−2Υ}`, converting weight −2 ambient values to the scaled form.
    to_hat: MultiSeries,
    pluriharmonic: bool,
    witness: MultiSeries,
    inv: PHInvariants,
}

fn load_rigid(config: &mut RunConfig, opts: &Options) -> Result<RigidSurface> {
    let spec = SurfaceSpec::load(opts.surface.as_deref(), opts.trunc)?;
    config.surface = Some(spec.describe());
    let s = spec.rigid(opts.trunc)?;
    if s.n != 1 {
        return Err(Error::Precondition("pseudohermitian invariants are implemented for n = 1".into()));
    }
    Ok(s)
}

fn scaled_setup(config: &mut RunConfig, opts: &Options) -> Result<Scaled> {
    let surface = load_rigid(config, opts)?;
    let d = surface.trunc();
    let h = Hypersurface::rigid(&surface)?;
    let upsilon = match &opts.upsilon {
        Some(p) => FieldInput::load(p, 1)?,
        None => FieldInput::Pluriharmonic(HolPoly::zero(1)),
    };
    let ext = upsilon.extension(d);
    let ups = h.restrict(&ext)?;
    if !ups.constant_term().is_zero() {
        return Err(Error::Domain("the scaling must vanish at the base point".into()));
    }
    let rigid = PseudoHermitian::rigid(&surface)?;
    let (pluriharmonic, witness) = pluriharmonic_test(&rigid, &ups);
    if opts.require_pseudo_einstein && !pluriharmonic {
        return Err(Error::Precondition("Υ is not CR pluriharmonic, so e^Υ θ is not pseudo-Einstein".into()));
    }
    let rep = fefferman_improve(&h, 3)?;
    let m = AmbientMetric::build(&rep.r)?;
    let u = h.s_coefficient(&h.to_chart(&rep.r)?, 1);
    let base = rigid.scaled(&u.log_unit()?)?;
    let inv = scaled_invariants(&base, &ups)?;
    let to_hat = ups.scale_int(-2).exp()?;
    Ok(Scaled { surface, h, m, ext, to_hat, pluriharmonic, witness, inv })
}

/// A weight-tagged field from the pseudohermitian engine, the ambient value when it is
/// defined, and the degree through which they agree.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Compared {
    pub at_origin: Exact,
    pub reliable_degree: Option<i32>,
    pub agreement_degree: Option<i32>,
    pub tw: PHFieldJson,
    pub ambient: Option<PHFieldJson>,
}

fn compared(tw: &PHField, ambient: Option<&MultiSeries>) -> Compared {
    Compared {
        at_origin: Exact::new(&tw.at_origin()),
        reliable_degree: if tw.value.is_exact() { None } else { Some(tw.value.rel()) },
        agreement_degree: ambient.and_then(|a| a.equal_through(&tw.value)),
        tw: tw.to_json(),
        ambient: ambient.map(|a| PHField::new(a.clone(), tw.weight).to_json()),
    }
}

fn agreed(c: &Compared) -> bool {
    matches!(c.agreement_degree, Some(d) if d >= 0)
}

// ---------------------------------------------------------------- invariants

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct InvariantsResult {
    pub trunc: u32,
    pub upsilon_pluriharmonic: bool,
    pub pluriharmonic_witness: SeriesReport,
    pub pseudo_einstein: bool,
    pub s1: SeriesReport,
    pub scal: PHFieldJson,
    pub a11: PHFieldJson,
    pub q: Compared,
    pub q_prime: Compared,
    pub p_prime_f: Option<Compared>,
    pub paneitz_f: Option<Compared>,
}

fn invariants(mut config: RunConfig, opts: &Options) -> Result<Outcome> {
    let sc = scaled_setup(&mut config, opts)?;
    let d = sc.surface.trunc();
    let f = opts.f.as_ref().map(|p| FieldInput::load(p, 1)).transpose()?;
    let mut checks = Checks::default();

    let qa = &q_curvature_ambient(&sc.m, &sc.h, &sc.ext)? * &sc.to_hat;
    let qt = q_curvature_tw(&sc.inv);
    known("Q", &qt.value)?;
    let q = compared(&qt, Some(&qa));
    checks.add("ambient and pseudohermitian Q agree", agreed(&q));

    let qa = if is_pluriharmonic(&sc.ext) { Some(&q_prime(&sc.m, &sc.h, &sc.ext)? * &sc.to_hat) } else { None };
    let qp = compared(&q_prime_tw(&sc.inv).field, qa.as_ref());
    if qa.is_some() {
        checks.add("ambient and pseudohermitian Q′ agree", agreed(&qp));
    }
    let pe = pseudo_einstein_test(&sc.inv);
    checks.add("S₁ ≡ 0 exactly when Υ is CR pluriharmonic", pe == sc.pluriharmonic);

    let (mut pp, mut pf) = (None, None);
    if let Some(f) = &f {
        let fe = f.extension(d);
        let fr = sc.h.restrict(&fe)?;
        let pa = &gjms(&sc.m, &sc.h, &AmbientElement::weighted(0, fe.clone()))? * &sc.to_hat;
        let c = compared(&PHField::new(paneitz_tw(&sc.inv.structure, &fr), -2), Some(&pa));
        checks.add("ambient and pseudohermitian Pf agree", agreed(&c));
        pf = Some(c);
        if pluriharmonic_test(&sc.inv.base, &fr).0 {
            let pa = if is_pluriharmonic(&fe) && is_pluriharmonic(&sc.ext) {
                Some(&p_prime(&sc.m, &sc.h, &sc.ext, &fe)? * &sc.to_hat)
            } else {
                None
            };
            let c = compared(&p_prime_tw(&sc.inv, &PHField::new(fr, 0))?, pa.as_ref());
            if pa.is_some() {
                checks.add("ambient and pseudohermitian P′f agree", agreed(&c));
            }
            pp = Some(c);
        }
    }
    let result = InvariantsResult {
        trunc: d,
        upsilon_pluriharmonic: sc.pluriharmonic,
        pluriharmonic_witness: SeriesReport::new(&sc.witness),
        pseudo_einstein: pe,
        s1: SeriesReport::new(&s_tensor(&sc.inv).s),
        scal: sc.inv.scal.to_json(),
        a11: sc.inv.a11.to_json(),
        q,
        q_prime: qp,
        p_prime_f: pp,
        paneitz_f: pf,
    };
    finish(config, checks, result, None)
}

// ---------------------------------------------------------------- cartan

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CartanResult {
    pub trunc: u32,
    pub upsilon_pluriharmonic: bool,
    pub o11: SeriesReport,
    pub o11_vanishes: bool,
    pub double_divergence: SeriesReport,
}

fn cartan(mut config: RunConfig, opts: &Options) -> Result<Outcome> {
    let sc = scaled_setup(&mut config, opts)?;
    let c = cartan_obstruction(&sc.inv);
    known("P*₁₁𝒪¹¹", &c.double_divergence)?;
    let mut checks = Checks::default();
    checks.add("P*₁₁𝒪¹¹ is real", vanishes(&c.double_divergence.im()));
    let flat = sc.surface == RigidSurface::quadric(1, sc.surface.trunc());
    if flat && sc.pluriharmonic {
        checks.add("𝒪¹¹ ≡ 0 for pseudo-Einstein forms on the quadric", vanishes(&c.o11.s));
    }
    let result = CartanResult {
        trunc: sc.surface.trunc(),
        upsilon_pluriharmonic: sc.pluriharmonic,
        o11: SeriesReport::new(&c.o11.s),
        o11_vanishes: vanishes(&c.o11.s),
        double_divergence: SeriesReport::new(&c.double_divergence),
    };
    finish(config, checks, result, None)
}

// ---------------------------------------------------------------- pluriharmonic-test

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PluriharmonicResult {
    pub pluriharmonic: bool,
    pub function: SeriesReport,
    /// `P₁f`.
    pub witness: SeriesReport,
}

/// A function on the surface: holomorphic terms (as `2 Re`), or a real series in the base
/// variables (restricted) or in the surface coordinates `(z, z̄, t)`.
fn surface_function(path: &Path, surface: &RigidSurface, h: &Hypersurface) -> Result<(MultiSeries, bool)> {
    let text = read(path)?;
    let v: serde_json::Value = serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
    if v.get("hol_terms").is_some() {
        let j: HolJson = serde_json::from_value(v).map_err(|e| Error::Parse(e.to_string()))?;
        return Ok((pluriharmonic_field(surface, &HolPoly::from_json(1, &j)?)?, true));
    }
    let j: SeriesJson = serde_json::from_value(v).map_err(|e| Error::Parse(e.to_string()))?;
    if j.trunc > 64 {
        return Err(Error::Parse("trunc above 64 is not supported".into()));
    }
    let s = MultiSeries::from_json(&j)?.as_exact();
    if !s.is_real() {
        return Err(Error::Precondition("the test function must be real".into()));
    }
    let d = surface.trunc();
    if s.vars() == &Vars::base(1) {
        Ok((h.restrict(&s.with_trunc(d))?, false))
    } else if s.vars() == &Vars::boundary(1) {
        Ok((s.with_trunc(d), false))
    } else {
        Err(Error::Mismatch(format!(
            "test functions use {:?} or {:?}",
            Vars::base(1).names(),
            Vars::boundary(1).names()
        )))
    }
}

fn pluriharmonic(mut config: RunConfig, opts: &Options) -> Result<Outcome> {
    let surface = load_rigid(&mut config, opts)?;
    let path = opts.f.as_ref().ok_or_else(|| Error::Parse("pluriharmonic-test needs --f".into()))?;
    let h = Hypersurface::rigid(&surface)?;
    let (f, declared) = surface_function(path, &surface, &h)?;
    let p = PseudoHermitian::rigid(&surface)?;
    let (ok, w) = pluriharmonic_test(&p, &f);
    let mut checks = Checks::default();
    if declared {
        checks.add("2 Re of a holomorphic polynomial passes the test", ok);
    }
    let result = PluriharmonicResult { pluriharmonic: ok, function: SeriesReport::new(&f), witness: SeriesReport::new(&w) };
    finish(config, checks, result, None)
}

// ---------------------------------------------------------------- model-table

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ModelRow {
    pub a: Exact,
    pub b: Exact,
    pub sublaplacian_scal: Exact,
    pub scal_squared: Exact,
    pub scal_0: Exact,
    pub torsion_norm: Exact,
    pub q_prime_ambient: Exact,
    pub q_prime_tw: Exact,
    pub equal: bool,
    pub closed_forms: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ModelTable {
    pub trunc: u32,
    pub rows: Vec<ModelRow>,
}

fn rationals(text: Option<&str>) -> Result<Vec<GaussRational>> {
    let text = text.unwrap_or("-2,-1,0,1,2");
    let mut out = Vec::new();
    for part in text.split(',') {
        let g = GaussRational::parse(part.trim())?;
        if !g.is_real() {
            return Err(Error::Parse(format!("`{part}` is not a real rational")));
        }
        out.push(g);
    }
    Ok(out)
}

fn model_table(mut config: RunConfig, opts: &Options) -> Result<Outcome> {
    let a_list = rationals(opts.a.as_deref())?;
    let b_list = rationals(opts.b.as_deref())?;
    let d = opts.trunc.unwrap_or(DEFAULT_TRUNC);
    if d < 4 {
        return Err(Error::Precondition("model-table needs --trunc of at least 4".into()));
    }
    config.surface = Some("quadric:1".into());
    config.trunc = Some(d);
    config.a = Some(a_list.iter().map(|g| g.to_string()).collect());
    config.b = Some(b_list.iter().map(|g| g.to_string()).collect());
    let s = RigidSurface::quadric(1, d);
    let h = Hypersurface::rigid(&s)?;
    let m = AmbientMetric::build(&h.rho)?;
    let flat = PseudoHermitian::rigid(&s)?;
    let g = GaussRational::from_int;
    let mut rows = Vec::new();
    for a in &a_list {
        for b in &b_list {
            let hol = HolPoly::model_family(a, b);
            let u = pluriharmonic_field(&s, &hol)?;
            let inv = scaled_invariants(&flat, &u)?;
            let [sub, sq, tor] = q_prime_terms(&inv);
            let scal0 = inv.structure.apply(Dir::T, &inv.structure.scal);
            let qa = &q_prime(&m, &h, &hol.real_part2(d))? * &u.scale_int(-2).exp()?;
            let qt = q_prime_tw(&inv).field.value;
            let known = [&sub, &sq, &tor, &scal0, &qa, &qt].iter().all(|x| x.rel() >= 0);
            let v = |x: &MultiSeries| x.constant_term();
            let (sub, sq, tor) = (v(&sub), &v(&sq) * &g(2), &v(&tor) * &GaussRational::from_frac(-1, 2));
            let (scal0, qa, qt) = (v(&scal0), v(&qa), v(&qt));
            let a2 = a * a;
            let a2b = &a2 + &(b * &g(2));
            let am2 = a - &g(2);
            let closed = sub == &(&a2 * &g(-8)) * &(&(a + b) - &g(2))
                && sq == &(&a2b * &a2b) * &g(4)
                && scal0 == &(b * &g(8)) * &(&a2 + b)
                && tor == &a2 * &(&am2 * &am2)
                && qa == &(&a2 + &(b * b)) * &g(8);
            rows.push(ModelRow {
                a: Exact::new(a),
                b: Exact::new(b),
                sublaplacian_scal: Exact::new(&sub),
                scal_squared: Exact::new(&sq),
                scal_0: Exact::new(&scal0),
                torsion_norm: Exact::new(&tor),
                q_prime_ambient: Exact::new(&qa),
                q_prime_tw: Exact::new(&qt),
                equal: known && qa == qt,
                closed_forms: known && closed,
            });
        }
    }
    let mut checks = Checks::default();
    checks.add("ambient Q′ equals pseudohermitian Q′ on every row", rows.iter().all(|r| r.equal));
    checks.add("curvature terms and Q′ = 8(a²+b²) match their closed forms", rows.iter().all(|r| r.closed_forms));
    let mut csv = String::from("a,b,sublaplacian_scal,scal_squared,scal_0,torsion_norm,q_prime_ambient,q_prime_tw,equal\n");
    for r in &rows {
        let cells = [&r.a, &r.b, &r.sublaplacian_scal, &r.scal_squared, &r.scal_0, &r.torsion_norm, &r.q_prime_ambient, &r.q_prime_tw];
        let cells: Vec<&str> = cells.iter().map(|c| c.exact.as_str()).collect();
        csv.push_str(&format!("{},{}\n", cells.join(","), r.equal));
    }
    finish(config, checks, ModelTable { trunc: d, rows }, Some(csv))
}

// ---------------------------------------------------------------- sphere and ball numerics

fn sphere_only(config: &mut RunConfig, opts: &Options) -> Result<usize> {
    match opts.surface.as_deref() {
        None | Some("ball") | Some("ball:1") => {}
        Some(s) => return Err(Error::Precondition(format!("this command runs on the unit ball only, got `{s}`"))),
    }
    config.surface = Some("ball:1".into());
    let res = opts.resolution.unwrap_or(DEFAULT_RESOLUTION);
    if !(2..=1024).contains(&res) {
        return Err(Error::Precondition("--resolution must lie in 2..=1024".into()));
    }
    config.resolution = Some(res);
    Ok(res)
}

/// Pluriharmonic pairs on the sphere, as `2 Re` of holomorphic polynomials in `(z, w)`.
fn battery() -> Vec<(&'static str, HolPoly, &'static str, HolPoly)> {
    let g = |re: i64, im: i64| GaussRational::from_parts((re, 1), (im, 1));
    let p = |t: &[(u16, u16, GaussRational)]| HolPoly::from_n1(t);
    vec![
        ("2Re(z)", p(&[(1, 0, g(1, 0))]), "2Re(w²)", p(&[(0, 2, g(1, 0))])),
        ("2Re(z)", p(&[(1, 0, g(1, 0))]), "2Re(zw)", p(&[(1, 1, g(1, 0))])),
        ("2Re(iw)", p(&[(0, 1, g(0, 1))]), "2Re(z²)", p(&[(2, 0, g(1, 0))])),
        ("2Re(z³)", p(&[(3, 0, g(1, 0))]), "2Re((2−i)zw²)", p(&[(1, 2, g(2, -1))])),
        ("2Re((1+i)z²w)", p(&[(2, 1, g(1, 1))]), "2Re(w³ + z)", p(&[(0, 3, g(1, 0)), (1, 0, g(1, 0))])),
        ("2Re(zw + iw²)", p(&[(1, 1, g(1, 0)), (0, 2, g(0, 1))]), "2Re(z²w²)", p(&[(2, 2, g(1, 0))])),
    ]
}

/// Non-pluriharmonic pairs for the Paneitz operator.
fn general_pairs() -> Vec<(&'static str, MultiSeries, &'static str, MultiSeries)> {
    let v = sphere_vars();
    let z = MultiSeries::var(&v, SPHERE_TRUNC, "z1").expect("sphere variable");
    let w = MultiSeries::var(&v, SPHERE_TRUNC, "z2").expect("sphere variable");
    let zz = &z * &z.conj();
    vec![
        ("|z|²", zz.clone(), "Re(zw̄) + |z|⁴", &(&z * &w.conj()).re() + &zz.pow(2)),
        ("Re(z²w̄) + |z|²", &(&z.pow(2) * &w.conj()).re() + &zz, "|w|⁴", (&w * &w.conj()).pow(2)),
        ("Im(zw) + |z|⁶", &(&z * &w).im() + &zz.pow(3), "Re(w²z̄) + |z|²", &(&w.pow(2) * &z.conj()).re() + &zz),
    ]
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FitReport {
    pub coefficients: Vec<F17>,
    pub log_coefficient: F17,
    pub constant: F17,
    pub residual: F17,
    pub log_coefficient_uncertainty: F17,
    pub threshold: F17,
    pub valid: bool,
}

impl FitReport {
    fn new(f: &LogFitResult) -> Self {
        FitReport {
            coefficients: f17s(&f.coefficients),
            log_coefficient: F17(f.log_coefficient),
            constant: F17(f.constant),
            residual: F17(f.residual),
            log_coefficient_uncertainty: F17(f.log_coefficient_uncertainty),
            threshold: F17(f.threshold),
            valid: f.valid,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Variation {
    pub upsilon: String,
    /// `∫(2P′Υ + P(Υ²))θ∧dθ`.
    pub value: F17,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TotalQPrimeResult {
    pub eps: Vec<F17>,
    pub radial_nodes: usize,
    pub angular_resolution: usize,
    pub weighted_norm: Vec<F17>,
    pub top_form: Vec<F17>,
    pub weighted_norm_fit: FitReport,
    pub top_form_fit: FitReport,
    pub sphere_scal: Exact,
    pub sphere_q_prime: Exact,
    pub sphere_volume: F17,
    pub total_q_prime: F17,
    pub total_q_prime_quadrature: F17,
    pub log_term_constant: F17,
    pub target_log_coefficient: F17,
    pub weighted_norm_relative_error: F17,
    pub top_form_relative_error: F17,
    pub burns_epstein_mu: F17,
    pub invariance: Vec<Variation>,
}

fn total_qprime(mut config: RunConfig, opts: &Options) -> Result<Outcome> {
    let res = sphere_only(&mut config, opts)?;
    let grid = opts.eps_grid.as_deref().map(EpsGrid::parse).transpose()?.unwrap_or_default();
    config.eps_grid = Some(grid.clone());
    let eps = grid.values();
    let quad = BallQuadrature { radial: 3 * res, angular: (res / 4).max(2) };
    let b = renormalized_volume_integral(&eps, &quad)?;
    let fa = fit_log_term(&b.weighted_norm, &eps, 1, DEFAULT_FIT_THRESHOLD)?;
    let fb = fit_log_term(&b.top_form, &eps, 1, DEFAULT_FIT_THRESHOLD)?;
    let s = sphere_tw_data()?;
    let total = s.total_q_prime();
    let quadrature = total_q_prime_quadrature(&s, res)?;
    let lp = log_term_constant(1);
    let target = lp * total;
    let rel = |c: f64| ((c - target) / target).abs();
    let mut invariance = Vec::new();
    for (name, hol, _, _) in battery() {
        let v = total_q_prime_variation(&s, &sphere_pluriharmonic(&hol), res)?;
        if !invariance.iter().any(|x: &Variation| x.upsilon == name) {
            invariance.push(Variation { upsilon: name.to_string(), value: F17(v) });
        }
    }
    let mut checks = Checks::default();
    checks.add("both log fits are valid", fa.valid && fb.valid);
    checks.add("weighted-norm log coefficient within 1% of lp_cn·Q̄′", rel(fa.log_coefficient) < 1e-2);
    checks.add("top-form log coefficient within 1% of lp_cn·Q̄′", rel(fb.log_coefficient) < 1e-2);
    let tol = 10.0 * fa.log_coefficient_uncertainty.max(fb.log_coefficient_uncertainty);
    checks.add("the two log coefficients agree within 10× the fit uncertainty", (fa.log_coefficient - fb.log_coefficient).abs() <= tol);
    checks.add("quadrature of Q′ matches Q′·vol", (quadrature - total).abs() < 1e-10 * total.abs());
    checks.add("total Q′ is invariant under pluriharmonic scalings", invariance.iter().all(|v| v.value.0.abs() < 1e-9));
    let mut csv = String::from("eps,weighted_norm,top_form\n");
    for i in 0..eps.len() {
        csv.push_str(&format!("{},{},{}\n", fmt17(eps[i]), fmt17(b.weighted_norm[i]), fmt17(b.top_form[i])));
    }
    let result = TotalQPrimeResult {
        eps: f17s(&eps),
        radial_nodes: quad.radial,
        angular_resolution: quad.angular,
        weighted_norm: f17s(&b.weighted_norm),
        top_form: f17s(&b.top_form),
        weighted_norm_fit: FitReport::new(&fa),
        top_form_fit: FitReport::new(&fb),
        sphere_scal: Exact::new(&s.scal),
        sphere_q_prime: Exact::new(&s.q_prime()),
        sphere_volume: F17(s.volume),
        total_q_prime: F17(total),
        total_q_prime_quadrature: F17(quadrature),
        log_term_constant: F17(lp),
        target_log_coefficient: F17(target),
        weighted_norm_relative_error: F17(rel(fa.log_coefficient)),
        top_form_relative_error: F17(rel(fb.log_coefficient)),
        burns_epstein_mu: F17(burns_epstein(total)),
        invariance,
    };
    finish(config, checks, result, Some(csv))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PairResidual {
    pub operator: SphereOperator,
    pub f1: String,
    pub f2: String,
    pub residual: F17,
    pub coarse_residual: F17,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SelfAdjointResult {
    pub resolution: usize,
    pub pairs: Vec<PairResidual>,
    pub max_residual: F17,
    pub diagonal_residual: F17,
}

/// Bound on every self-adjointness residual.
const RESIDUAL_TOL: f64 = 1e-8;

fn selfadjoint(mut config: RunConfig, opts: &Options) -> Result<Outcome> {
    let res = sphere_only(&mut config, opts)?;
    let s = sphere_tw_data()?;
    let mut pairs = Vec::new();
    let mut halving = true;
    for (n1, h1, n2, h2) in battery() {
        let (f1, f2) = (sphere_pluriharmonic(&h1), sphere_pluriharmonic(&h2));
        for op in [SphereOperator::PPrime, SphereOperator::Paneitz] {
            let r = self_adjointness_residual(&s, &f1, &f2, op, res)?;
            if op == SphereOperator::PPrime {
                halving &= r.residual <= (r.coarse_residual / 2.0).max(1e-13);
            }
            pairs.push(PairResidual { operator: op, f1: n1.into(), f2: n2.into(), residual: F17(r.residual), coarse_residual: F17(r.coarse_residual) });
        }
    }
    for (n1, f1, n2, f2) in general_pairs() {
        let r = self_adjointness_residual(&s, &f1, &f2, SphereOperator::Paneitz, res)?;
        pairs.push(PairResidual {
            operator: SphereOperator::Paneitz,
            f1: n1.into(),
            f2: n2.into(),
            residual: F17(r.residual),
            coarse_residual: F17(r.coarse_residual),
        });
    }
    let f = sphere_pluriharmonic(&battery()[0].3);
    let diagonal = self_adjointness_residual(&s, &f, &f, SphereOperator::PPrime, res)?.residual;
    let max = pairs.iter().map(|p| p.residual.0).fold(0.0, f64::max);
    let mut checks = Checks::default();
    checks.add("every residual below 1e-8", max < RESIDUAL_TOL);
    checks.add("P′ residuals at least halve under refinement or sit at rounding level", halving);
    checks.add("f₁ = f₂ gives a zero residual", diagonal == 0.0);
    let mut csv = String::from("operator,f1,f2,residual,coarse_residual\n");
    for p in &pairs {
        let op = match p.operator {
            SphereOperator::PPrime => "p_prime",
            SphereOperator::Paneitz => "paneitz",
        };
        csv.push_str(&format!("{op},{},{},{},{}\n", p.f1, p.f2, fmt17(p.residual.0), fmt17(p.coarse_residual.0)));
    }
    let result = SelfAdjointResult { resolution: res, pairs, max_residual: F17(max), diagonal_residual: F17(diagonal) };
    finish(config, checks, result, Some(csv))
}
