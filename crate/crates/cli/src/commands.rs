//! One function per subcommand. Each returns the JSON result and, where a
//! tabular form exists, the CSV rows.

use gapcert_core::applications::{
    dirac2d_constants_b, dirac2d_constants_t, dirac2d_envelope, dirac3d_coulomb, manifold_relbounds,
    two_channel_bound, CoulombSpec, DiracSpec, ManifoldSpec, TwoChannelSpec,
};
use gapcert_core::enclosures::{
    crossover_point, gk_sector_cover, hyperbola_excluded, hyperbola_height, isolated_eigenvalue_strip,
    lower_semicont_balls, optimal_conversion_eps, optimal_shift_linear, perturbed_strip, perturbed_strip_linear,
    quad_from_linear, resolvent_bound_offreal, resolvent_bound_strip, resolvent_bound_strip_refined,
    semibounded_lower_bound, subordinate_sector_cover, subordination_family, symmetric_gap_strip, IsolatedEigSpec,
};
use gapcert_core::region::{sample_region, ClipBox, RegionSpec};
use gapcert_core::sequences::{
    kappa_s, kappa_s_model, necessary_growth_check, per_gap_criterion, powerlaw_example, ratio_criterion,
    BandProfile, GapSequence, Growth, LengthData, PerGapConstants, PowerLawModel, TailModel,
};
use gapcert_core::structured::{
    almost_gap_eig_bound, even_lowerbound, even_lowerbound_root_form, odd_symmetric_gap, offdiag_gap,
    AlmostGapCase, BlockMinima, DiagBounds, NumRangeBounds, OffDiagBounds,
};
use gapcert_core::{ComplexPoint, Error as CoreError, Gap, LinBound, QuadBound, RelativeBound};
use gapcert_lab::instance::{InstanceSpec, MatrixInstance, Structure};
use gapcert_lab::suite::{run_suite, SuiteKind, SuiteReport};
use gapcert_lab::{gen_instance, verify_instance, VerificationReport, VerifyOptions};
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::error::{param, CliError, Result};
use crate::params::{strict, typed};

pub const REGION_HEADER: [&str; 3] = ["segment", "re", "im"];
pub const SUITE_HEADER: [&str; 4] = ["instance", "check", "margin", "pass"];

pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

pub struct Output {
    pub json: Value,
    pub table: Option<Table>,
}

impl Output {
    fn json(json: Value) -> Self {
        Self { json, table: None }
    }
}

/// A result whose hypotheses may fail: domain failures become a
/// `not-applicable` status, malformed input an error.
fn domain<T>(r: gapcert_core::Result<T>) -> Result<std::result::Result<T, Value>> {
    match r {
        Ok(v) => Ok(Ok(v)),
        Err(CoreError::NotApplicable(m)) | Err(CoreError::BoundNotValid(m)) => {
            Ok(Err(json!({ "status": "not-applicable", "reason": m })))
        }
        Err(CoreError::InvalidParameter(m)) => Err(CliError::Param(m)),
    }
}

fn core<T>(r: gapcert_core::Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        CoreError::InvalidParameter(m) => CliError::Param(m),
        other => CliError::Param(other.to_string()),
    })
}

/// Propagates a not-applicable answer as the command result.
macro_rules! applicable {
    ($e:expr) => {
        match domain($e)? {
            Ok(v) => v,
            Err(na) => return Ok(Output::json(na)),
        }
    };
}

fn with_status<T: Serialize>(value: &T, status: &str) -> Result<Value> {
    let mut v = serde_json::to_value(value).map_err(|e| CliError::Numerical(e.to_string()))?;
    match v.as_object_mut() {
        Some(obj) => {
            obj.insert("status".into(), json!(status));
            Ok(v)
        }
        None => Ok(json!({ "status": status, "value": v })),
    }
}

fn open_status(open: bool) -> &'static str {
    if open {
        "open"
    } else {
        "closed"
    }
}

fn quad(a: Option<f64>, b: Option<f64>) -> Result<QuadBound> {
    core(QuadBound::new(a.unwrap_or(0.0), b.unwrap_or(0.0)))
}

fn point(re: Option<f64>, im: Option<f64>) -> Option<ComplexPoint> {
    match (re, im) {
        (None, None) => None,
        (re, im) => Some(ComplexPoint::new(re.unwrap_or(0.0), im.unwrap_or(0.0))),
    }
}

/// Quadratic constants, or linear ones when `a_lin`/`b_lin` are present.
fn relative(a: Option<f64>, b: Option<f64>, a_lin: Option<f64>, b_lin: Option<f64>) -> Result<RelativeBound> {
    match (a_lin.is_some() || b_lin.is_some(), a.is_some() || b.is_some()) {
        (true, true) => Err(param("give either a, b or a_lin, b_lin, not both")),
        (true, false) => Ok(RelativeBound::Linear(core(LinBound::new(a_lin.unwrap_or(0.0), b_lin.unwrap_or(0.0)))?)),
        (false, _) => Ok(RelativeBound::Quad(quad(a, b)?)),
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct EncloseParams {
    a: Option<f64>,
    b: Option<f64>,
    a_lin: Option<f64>,
    b_lin: Option<f64>,
    eps: Option<f64>,
    x: Option<f64>,
    re: Option<f64>,
    im: Option<f64>,
    beta: Option<f64>,
}

pub fn enclose(p: &Map<String, Value>) -> Result<Output> {
    let p: EncloseParams = typed(p)?;
    let rel = relative(p.a, p.b, p.a_lin, p.b_lin)?;
    let mut out = Map::new();
    let q = match rel {
        RelativeBound::Quad(q) => q,
        RelativeBound::Linear(lin) => {
            let eps = match (p.eps, p.x) {
                (Some(e), _) => e,
                (None, Some(x)) => optimal_conversion_eps(lin, x)
                    .ok_or_else(|| param("no finite optimal eps: need a_lin > 0 and b_lin*|x| > 0"))?,
                (None, None) => return Err(param("linear constants need eps, or x to choose the optimal eps")),
            };
            if let Some(x) = p.x {
                out.insert("optimal_shift".into(), json!(optimal_shift_linear(lin, x)));
            }
            out.insert("eps".into(), json!(eps));
            core(quad_from_linear(lin, eps))?
        }
    };
    out.insert("a".into(), json!(q.a));
    out.insert("b".into(), json!(q.b));
    if let Some(beta) = p.beta {
        let lower = match rel {
            RelativeBound::Linear(lin) => semibounded_lower_bound(RelativeBound::Linear(lin), beta),
            RelativeBound::Quad(q) => semibounded_lower_bound(RelativeBound::Quad(q), beta),
        };
        out.insert("lower_bound".into(), json!(applicable!(lower)));
    }
    let h0 = applicable!(hyperbola_height(q, 0.0));
    out.insert("height_at_zero".into(), json!(h0));
    out.insert("asymptotic_slope".into(), json!(q.b / (1.0 - q.b * q.b).sqrt()));
    if let Some(re) = p.re {
        out.insert("height".into(), json!(applicable!(hyperbola_height(q, re))));
    }
    if let Some(z) = point(p.re, p.im) {
        let excluded = applicable!(hyperbola_excluded(q, z));
        out.insert("excluded".into(), json!(excluded));
        if excluded {
            if let Ok(r) = resolvent_bound_offreal(q, z) {
                out.insert("resolvent_bound".into(), json!(r));
            }
        }
    }
    out.insert("status".into(), json!("ok"));
    Ok(Output::json(Value::Object(out)))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct StripParams {
    a: Option<f64>,
    b: Option<f64>,
    a_lin: Option<f64>,
    b_lin: Option<f64>,
    alpha: f64,
    beta: f64,
    #[serde(default)]
    symmetric: bool,
}

pub fn strip(p: &Map<String, Value>) -> Result<Output> {
    let p: StripParams = typed(p)?;
    let g = core(Gap::new(p.alpha, p.beta))?;
    let s = match relative(p.a, p.b, p.a_lin, p.b_lin)? {
        RelativeBound::Quad(q) => applicable!(perturbed_strip(q, g)),
        RelativeBound::Linear(lin) => perturbed_strip_linear(lin, g),
    };
    let mut v = with_status(&s, open_status(s.open))?;
    if p.symmetric {
        let RelativeBound::Quad(q) = relative(p.a, p.b, p.a_lin, p.b_lin)? else {
            return Err(param("the balls need quadratic constants a, b"));
        };
        v["balls"] = json!(applicable!(lower_semicont_balls(q, g)));
    }
    Ok(Output::json(v))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ResolventParams {
    a: Option<f64>,
    b: Option<f64>,
    re: Option<f64>,
    im: Option<f64>,
    alpha: Option<f64>,
    beta: Option<f64>,
}

pub fn resolvent(p: &Map<String, Value>) -> Result<Output> {
    let p: ResolventParams = typed(p)?;
    let q = quad(p.a, p.b)?;
    let z = point(p.re, p.im).ok_or_else(|| param("resolvent needs a point re, im"))?;
    let v = match (p.alpha, p.beta) {
        (None, None) => {
            let bound = applicable!(resolvent_bound_offreal(q, z));
            json!({ "status": "ok", "kind": "off-real", "bound": bound })
        }
        (Some(alpha), Some(beta)) => {
            let g = core(Gap::new(alpha, beta))?;
            let bound = applicable!(resolvent_bound_strip(q, g, z));
            let refined = applicable!(resolvent_bound_strip_refined(q, g, z));
            json!({
                "status": "ok",
                "kind": "strip",
                "bound": bound,
                "refined": refined,
                "crossover": crossover_point(q, g),
            })
        }
        _ => return Err(param("give both alpha and beta, or neither")),
    };
    Ok(Output::json(v))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SymmetricParams {
    a: Option<f64>,
    b: Option<f64>,
    beta: f64,
    re: Option<f64>,
    im: Option<f64>,
}

pub fn symmetric_gap(p: &Map<String, Value>) -> Result<Output> {
    let p: SymmetricParams = typed(p)?;
    let sg = applicable!(symmetric_gap_strip(quad(p.a, p.b)?, p.beta));
    let mut v = with_status(&sg, open_status(sg.open))?;
    if let Some(z) = point(p.re, p.im) {
        v["resolvent_bound"] = json!(applicable!(sg.resolvent_bound(z)));
    }
    Ok(Output::json(v))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CoverParams {
    eps: f64,
    a_eps: Option<f64>,
    b_eps: Option<f64>,
    c: Option<f64>,
    p: Option<f64>,
    re: Option<f64>,
    im: Option<f64>,
}

pub fn gk_cover(p: &Map<String, Value>) -> Result<Output> {
    let p: CoverParams = typed(p)?;
    let cover = match (p.c.is_some() || p.p.is_some(), p.a_eps.is_some() || p.b_eps.is_some()) {
        (true, true) => return Err(param("give either a_eps, b_eps or the subordination data c, p")),
        (true, false) => {
            let sub = core(subordination_family(p.c.unwrap_or(0.0), p.p.unwrap_or(0.0)))?;
            applicable!(subordinate_sector_cover(sub, p.eps))
        }
        (false, _) => {
            let q = QuadBound { a: p.a_eps.unwrap_or(0.0), b: p.b_eps.unwrap_or(0.0) };
            applicable!(gk_sector_cover(|_| q, p.eps))
        }
    };
    let mut v = with_status(&cover, "ok")?;
    if let Some(z) = point(p.re, p.im) {
        v["contains"] = json!(cover.contains(z));
    }
    Ok(Output::json(v))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct EigStripParams {
    a: Option<f64>,
    b: Option<f64>,
    lambda: f64,
    alpha: f64,
    beta: f64,
    #[serde(default = "one_usize")]
    mult: usize,
}

fn one_usize() -> usize {
    1
}

pub fn eig_strip(p: &Map<String, Value>) -> Result<Output> {
    let p: EigStripParams = typed(p)?;
    let spec = core(IsolatedEigSpec::new(p.lambda, p.alpha, p.beta, p.mult))?;
    let es = applicable!(isolated_eigenvalue_strip(quad(p.a, p.b)?, spec));
    Ok(Output::json(with_status(&es, "open")?))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GapsParams {
    #[serde(default)]
    delta_a: f64,
    model: Option<TailModel>,
    alphas: Option<Vec<f64>>,
    betas: Option<Vec<f64>>,
    window: Option<usize>,
    a_n: Option<Vec<f64>>,
    b_n: Option<Vec<f64>>,
}

fn finite_model(alphas: &Option<Vec<f64>>, betas: &Option<Vec<f64>>, window: Option<usize>) -> Option<TailModel> {
    match (alphas, betas) {
        (Some(a), Some(b)) => Some(TailModel::FiniteData { alphas: a.clone(), betas: b.clone(), window }),
        _ => None,
    }
}

pub fn gaps(p: &Map<String, Value>) -> Result<Output> {
    let p: GapsParams = typed(p)?;
    let model = match (&p.model, finite_model(&p.alphas, &p.betas, p.window)) {
        (Some(_), Some(_)) => return Err(param("give either a model or alphas and betas, not both")),
        (Some(m), None) => m.clone(),
        (None, Some(m)) => m,
        (None, None) => return Err(param("gaps needs a model or alphas and betas")),
    };
    let ratio = applicable!(ratio_criterion(&model, p.delta_a));
    let mut v = json!({ "status": "ok", "ratio": ratio });
    match (&p.a_n, &p.b_n, &p.alphas, &p.betas) {
        (Some(a), Some(b), Some(al), Some(be)) => {
            let seq = core(GapSequence::new(al.clone(), be.clone()))?;
            let consts = core(PerGapConstants::new(a.clone(), b.clone()))?;
            v["per_gap"] = json!(applicable!(per_gap_criterion(&seq, &consts, p.window)));
        }
        (None, None, _, _) => {}
        _ => return Err(param("per-gap constants need a_n, b_n together with alphas and betas")),
    }
    Ok(Output::json(v))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct KappaModel {
    l: Growth,
    w: Growth,
    a: Growth,
    b: Growth,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct KappaParams {
    lengths: Option<Vec<f64>>,
    widths: Option<Vec<f64>>,
    alphas: Option<Vec<f64>>,
    betas: Option<Vec<f64>>,
    a_n: Option<Vec<f64>>,
    b_n: Option<Vec<f64>>,
    window: Option<usize>,
    model: Option<KappaModel>,
}

pub fn kappa(p: &Map<String, Value>) -> Result<Output> {
    let p: KappaParams = typed(p)?;
    if let Some(m) = p.model {
        let k = applicable!(kappa_s_model(m.l, m.w, m.a, m.b));
        return Ok(Output::json(json!({
            "status": "ok",
            "kappa": k,
            "unbounded": k.is_infinite(),
            "below_one": k < 1.0,
            "analytic": true,
        })));
    }
    let profile = match (p.lengths, p.widths, p.alphas, p.betas) {
        (Some(l), Some(w), None, None) => core(BandProfile::new(l, w))?,
        (None, None, Some(a), Some(b)) => BandProfile::from_sequence(&core(GapSequence::new(a, b))?),
        _ => return Err(param("kappa needs a model, lengths and widths, or alphas and betas")),
    };
    let (Some(a), Some(b)) = (p.a_n, p.b_n) else {
        return Err(param("kappa needs the per-gap constants a_n and b_n"));
    };
    let consts = core(PerGapConstants::new(a, b))?;
    let r = applicable!(kappa_s(&profile, &consts, p.window));
    Ok(Output::json(with_status(&r, "ok")?))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GrowthParams {
    #[serde(default)]
    delta_a: f64,
    model: Option<TailModel>,
    alphas: Option<Vec<f64>>,
    betas: Option<Vec<f64>>,
    window: Option<usize>,
    lengths: Option<LengthData>,
}

pub fn growth_check(p: &Map<String, Value>) -> Result<Output> {
    let p: GrowthParams = typed(p)?;
    let model = match (&p.model, finite_model(&p.alphas, &p.betas, p.window)) {
        (Some(m), None) => m.clone(),
        (None, Some(m)) => m,
        _ => return Err(param("growth-check needs exactly one of a model or alphas and betas")),
    };
    let d = applicable!(necessary_growth_check(&model, p.delta_a, p.lengths.as_ref()));
    let mut v = with_status(&d, "ok")?;
    v["passed"] = json!(d.passed());
    Ok(Output::json(v))
}

pub fn powerlaw(p: &Map<String, Value>) -> Result<Output> {
    let m: PowerLawModel = strict(p, &["p1", "p2", "q1", "q2", "l_prefactor", "w_prefactor", "a", "b"])?;
    let r = applicable!(powerlaw_example(&m));
    Ok(Output::json(with_status(&r, "ok")?))
}

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
enum StructuredParams {
    AlmostGap {
        case: String,
        a: Option<f64>,
        b: Option<f64>,
        alpha: f64,
        beta: f64,
        #[serde(default)]
        m: usize,
        inf_w: Option<f64>,
        sup_w: Option<f64>,
    },
    Offdiag {
        #[serde(default)]
        a12: f64,
        #[serde(default)]
        a21: f64,
        #[serde(default)]
        b12: f64,
        #[serde(default)]
        b21: f64,
        alpha: f64,
        beta: f64,
    },
    Even {
        #[serde(default)]
        a12: f64,
        #[serde(default)]
        a21: f64,
        #[serde(default)]
        b12: f64,
        #[serde(default)]
        b21: f64,
        beta1: f64,
        beta2: f64,
    },
    Odd {
        #[serde(default)]
        a11: f64,
        #[serde(default)]
        a22: f64,
        #[serde(default)]
        b11: f64,
        #[serde(default)]
        b22: f64,
        beta: f64,
    },
}

pub fn structured(p: &Map<String, Value>) -> Result<Output> {
    let v = match typed::<StructuredParams>(p)? {
        StructuredParams::AlmostGap { case, a, b, alpha, beta, m, inf_w, sup_w } => {
            let case: AlmostGapCase = core(case.parse())?;
            let w = core(NumRangeBounds::new(inf_w, sup_w))?;
            let g = core(Gap::new(alpha, beta))?;
            let r = applicable!(almost_gap_eig_bound(case, quad(a, b)?, g, m, w));
            with_status(&r, open_status(r.interval.open))?
        }
        StructuredParams::Offdiag { a12, a21, b12, b21, alpha, beta } => {
            let bb = core(OffDiagBounds::new(a12, a21, b12, b21).or_else(|e| match e {
                CoreError::InvalidParameter(_) => Err(e),
                _ => Ok(OffDiagBounds { a12, a21, b12, b21 }),
            }))?;
            let g = core(Gap::new(alpha, beta))?;
            let r = applicable!(offdiag_gap(bb, g));
            with_status(&r, "open")?
        }
        StructuredParams::Even { a12, a21, b12, b21, beta1, beta2 } => {
            let bb = OffDiagBounds { a12, a21, b12, b21 };
            let mins = BlockMinima { beta1, beta2 };
            let r = applicable!(even_lowerbound(bb, mins));
            let mut v = with_status(&r, "ok")?;
            v["root_form"] = json!(applicable!(even_lowerbound_root_form(bb, mins)));
            v
        }
        StructuredParams::Odd { a11, a22, b11, b22, beta } => {
            let r = applicable!(odd_symmetric_gap(DiagBounds { a11, a22, b11, b22 }, beta));
            let mut v = with_status(&r, "open")?;
            v["strip"] = json!(r.strip());
            v["disk_radius"] = json!(r.disk_radius());
            v
        }
    };
    Ok(Output::json(v))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DiracParams {
    p: f64,
    v_norm: f64,
    #[serde(default = "default_samples")]
    samples: usize,
    b_min: Option<f64>,
    b: Option<f64>,
    t: Option<f64>,
}

fn default_samples() -> usize {
    200
}

pub fn dirac_envelope(p: &Map<String, Value>) -> Result<Output> {
    let p: DiracParams = typed(p)?;
    let spec = core(DiracSpec::new(p.v_norm, p.p))?;
    let env = applicable!(dirac2d_envelope(spec, p.samples, p.b_min));
    let mut v = with_status(&env, "ok")?;
    if let Some(b) = p.b {
        v["constants_at_b"] = json!(applicable!(dirac2d_constants_b(spec, b)));
    }
    if let Some(t) = p.t {
        v["constants_at_t"] = json!(applicable!(dirac2d_constants_t(spec, t)));
    }
    let rows = env.points.iter().map(|pt| vec!["0".to_string(), num(pt.re), num(pt.im)]).collect();
    Ok(Output { json: v, table: Some(Table { header: REGION_HEADER.to_vec(), rows }) })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CoulombParams {
    #[serde(default)]
    c1: f64,
    #[serde(default)]
    c2: f64,
    m: f64,
    re: Option<f64>,
    im: Option<f64>,
}

pub fn coulomb(p: &Map<String, Value>) -> Result<Output> {
    let p: CoulombParams = typed(p)?;
    let r = applicable!(dirac3d_coulomb(CoulombSpec { c1: p.c1, c2: p.c2, m: p.m }));
    let mut v = with_status(&r, "open")?;
    if let Some(z) = point(p.re, p.im) {
        v["contains"] = json!(r.contains(z));
    }
    Ok(Output::json(v))
}

pub fn manifold(p: &Map<String, Value>) -> Result<Output> {
    let mut p = p.clone();
    let n = match p.remove("n") {
        None => 10,
        Some(v) => serde_json::from_value::<u64>(v).map_err(|e| param(format!("n: {e}")))?,
    };
    let spec: ManifoldSpec = strict(&p, &["c", "p", "case", "eps_geom", "l_prefactor", "w_prefactor"])?;
    let bounds = applicable!(manifold_relbounds(spec, n));
    let pl = applicable!(powerlaw_example(&bounds.model));
    let mut v = with_status(&bounds, "ok")?;
    v["powerlaw"] = json!(pl);
    Ok(Output::json(v))
}

pub fn two_channel(p: &Map<String, Value>) -> Result<Output> {
    let spec: TwoChannelSpec = strict(p, &["d", "p", "v12_norm", "p0", "p1", "p2"])?;
    let r = applicable!(two_channel_bound(&spec));
    Ok(Output::json(with_status(&r, "ok")?))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct VerifyParams {
    suite: Option<String>,
    instances: Option<usize>,
    #[serde(default = "one_u64")]
    seed: u64,
    dim: Option<usize>,
    structure: Option<Structure>,
    ratio: Option<f64>,
    gap: Option<[f64; 2]>,
    #[serde(default)]
    tight: bool,
    #[serde(default)]
    hermitian: bool,
    mult: Option<usize>,
    instance: Option<MatrixInstance>,
    s_points: Option<usize>,
    z_re: Option<usize>,
    z_im: Option<usize>,
    inset: Option<f64>,
    mutation: Option<f64>,
    resolvent: Option<bool>,
    #[serde(default)]
    full: bool,
}

fn one_u64() -> u64 {
    1
}

fn report_rows(r: &VerificationReport) -> impl Iterator<Item = Vec<String>> + '_ {
    r.checks.iter().map(|c| {
        vec![r.seed.to_string(), c.check.clone(), c.margin.map(num).unwrap_or_default(), c.pass.to_string()]
    })
}

fn suite_summary(r: &SuiteReport, full: bool) -> Result<Value> {
    let mut names: Vec<&str> = Vec::new();
    for rep in &r.reports {
        for c in &rep.checks {
            if !names.contains(&c.check.as_str()) {
                names.push(&c.check);
            }
        }
    }
    let checks: Vec<Value> = names
        .iter()
        .map(|name| {
            let entries: Vec<_> = r.reports.iter().filter_map(|rep| rep.check(name)).collect();
            let worst = entries.iter().filter_map(|c| c.margin).fold(f64::INFINITY, f64::min);
            json!({
                "check": name,
                "instances": entries.len(),
                "failing": entries.iter().filter(|c| !c.pass).count(),
                "samples": entries.iter().map(|c| c.samples).sum::<usize>(),
                "worst_margin": worst.is_finite().then_some(worst),
            })
        })
        .collect();
    let failures: Vec<Value> = r
        .reports
        .iter()
        .flat_map(|rep| rep.failures().map(move |c| json!({ "instance": rep.seed, "structure": rep.structure, "check": c })))
        .collect();
    let mut v = json!({
        "status": "ok",
        "suite": r.suite,
        "seed": r.seed,
        "instances": r.instances,
        "failed_instances": r.failed_instances,
        "pass": r.pass(),
        "checks": checks,
        "failures": failures,
    });
    if full {
        v["reports"] = serde_json::to_value(&r.reports).map_err(|e| CliError::Numerical(e.to_string()))?;
    }
    Ok(v)
}

pub fn verify(p: &Map<String, Value>) -> Result<Output> {
    let p: VerifyParams = typed(p)?;
    let mut opts = VerifyOptions { mutation: p.mutation, ..VerifyOptions::default() };
    if let Some(v) = p.s_points {
        opts.s_points = v;
    }
    if let Some(v) = p.z_re {
        opts.z_re = v;
    }
    if let Some(v) = p.z_im {
        opts.z_im = v;
    }
    if let Some(v) = p.inset {
        opts.inset = v;
    }
    if let Some(v) = p.resolvent {
        opts.resolvent = v;
    }
    let single = p.instance.is_some() || p.dim.is_some() || p.structure.is_some();
    if single {
        if p.suite.is_some() || p.instances.is_some() {
            return Err(param("suite options cannot be combined with a single instance"));
        }
        let inst = match p.instance {
            Some(inst) => inst,
            None => {
                let mut spec = InstanceSpec::new(
                    p.dim.unwrap_or(8),
                    p.structure.unwrap_or(Structure::None),
                    p.ratio.unwrap_or(0.7),
                );
                spec.gap = p.gap;
                spec.tight = p.tight;
                spec.hermitian = p.hermitian;
                spec.mult = p.mult;
                gen_instance(&spec, p.seed)?
            }
        };
        let r = verify_instance(&inst, &opts)?;
        let rows = report_rows(&r).collect();
        let mut v = with_status(&r, "ok")?;
        if p.full {
            v["instance"] = serde_json::to_value(&inst).map_err(|e| CliError::Numerical(e.to_string()))?;
        }
        return Ok(Output { json: v, table: Some(Table { header: SUITE_HEADER.to_vec(), rows }) });
    }
    let kind: SuiteKind = p.suite.as_deref().unwrap_or("standard").parse()?;
    let n = p.instances.unwrap_or_else(|| kind.default_size());
    if n == 0 {
        return Err(param("instances must be positive"));
    }
    let r = run_suite(kind, n, p.seed, &opts)?;
    let rows = r.reports.iter().flat_map(report_rows).collect();
    Ok(Output { json: suite_summary(&r, p.full)?, table: Some(Table { header: SUITE_HEADER.to_vec(), rows }) })
}

/// Default clip half-width: ten times the largest input magnitude.
fn default_clip(spec: &RegionSpec) -> ClipBox {
    let m = 10.0 * spec.magnitude();
    let m = if m > 0.0 { m } else { 10.0 };
    ClipBox { re: m, im: m }
}

pub fn sample_region_cmd(p: &Map<String, Value>) -> Result<Output> {
    let mut p = p.clone();
    let resolution = match p.remove("resolution") {
        None => 100,
        Some(v) => serde_json::from_value::<usize>(v).map_err(|e| param(format!("resolution: {e}")))?,
    };
    let clip = match p.remove("clip") {
        None => None,
        Some(v) => Some(serde_json::from_value::<ClipBox>(v).map_err(|e| param(format!("clip: {e}")))?),
    };
    let spec: RegionSpec = typed(&p)?;
    let clip = if spec.is_unbounded() { Some(clip.unwrap_or_else(|| default_clip(&spec))) } else { clip };
    let segments = applicable!(sample_region(&spec, resolution, clip));
    let rows = segments
        .iter()
        .flat_map(|s| s.points.iter().map(move |[re, im]| vec![s.id.to_string(), num(*re), num(*im)]))
        .collect();
    let v = json!({ "status": "ok", "region": spec, "clip": clip, "resolution": resolution, "segments": segments });
    Ok(Output { json: v, table: Some(Table { header: REGION_HEADER.to_vec(), rows }) })
}

/// Shortest text that reads back to the same `f64`.
pub fn num(x: f64) -> String {
    format!("{x:?}")
}
