//! Empirical certification of every applicable enclosure on one instance.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use gapcert_core::enclosures::{
    hyperbola_height, isolated_eigenvalue_strip, lower_semicont_balls, perturbed_strip, resolvent_bound_offreal,
    resolvent_bound_strip, resolvent_bound_strip_refined, semibounded_lower_bound, symmetric_gap_strip,
};
use gapcert_core::structured::{
    almost_gap_eig_bound, even_lowerbound, odd_symmetric_gap, offdiag_gap, AlmostGapCase, DiagBounds, OffDiagBounds,
};
use gapcert_core::{Gap, QuadBound, RelativeBound, StripResult};

use crate::error::{LabError, Result};
use crate::instance::{MatrixInstance, Structure};
use crate::linalg::{self, c, CMatrix};

/// Slack on strict-inequality region checks, relative.
pub const REGION_TOL: f64 = 1e-9;
/// Factor slack on resolvent bounds.
pub const RESOLVENT_TOL: f64 = 1e-8;
/// Slack on refined ≤ plain, relative.
pub const REFINED_TOL: f64 = 1e-12;
/// Trace and determinant agreement, relative.
pub const SANITY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyOptions {
    #[serde(default = "default_s_points")]
    pub s_points: usize,
    #[serde(default = "default_z_re")]
    pub z_re: usize,
    #[serde(default = "default_z_im")]
    pub z_im: usize,
    #[serde(default = "default_inset")]
    pub inset: f64,
    /// Widening factor applied to every certified free strip before checking.
    #[serde(default)]
    pub mutation: Option<f64>,
    #[serde(default = "yes")]
    pub resolvent: bool,
}

fn default_s_points() -> usize {
    11
}
fn default_z_re() -> usize {
    15
}
fn default_z_im() -> usize {
    7
}
fn default_inset() -> f64 {
    1e-6
}
fn yes() -> bool {
    true
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            s_points: default_s_points(),
            z_re: default_z_re(),
            z_im: default_z_im(),
            inset: default_inset(),
            mutation: None,
            resolvent: true,
        }
    }
}

impl VerifyOptions {
    pub fn validate(&self) -> Result<()> {
        if self.s_points < 2 || self.z_re == 0 || self.z_im == 0 {
            return Err(LabError::InvalidParameter("s_points must be at least 2 and z_re, z_im positive".into()));
        }
        if !(self.inset > 0.0 && self.inset < 0.5) {
            return Err(LabError::InvalidParameter(format!("inset must lie in (0, 0.5), got {}", self.inset)));
        }
        if let Some(f) = self.mutation {
            if !(f.is_finite() && f > 0.0) {
                return Err(LabError::InvalidParameter(format!("mutation factor must be positive, got {f}")));
            }
        }
        Ok(())
    }

    pub fn s_grid(&self) -> Vec<f64> {
        let n = self.s_points;
        (0..n).map(|k| k as f64 / (n - 1) as f64).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub s: f64,
    pub re: f64,
    pub im: f64,
    /// Observed quantity: eigenvalue coordinate, resolvent norm or count.
    pub value: f64,
    /// The certified bound it was compared against.
    pub bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub check: String,
    pub pass: bool,
    pub samples: usize,
    /// Smallest relative margin seen; `None` when nothing was sampled.
    pub margin: Option<f64>,
    /// Sample attaining the smallest margin.
    pub witness: Option<Witness>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub seed: u64,
    pub structure: Structure,
    pub tight: bool,
    pub dim: usize,
    pub quad_bound: QuadBound,
    pub ratio: f64,
    pub s_grid: Vec<f64>,
    pub checks: Vec<CheckResult>,
    pub pass: bool,
}

impl VerificationReport {
    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.check == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

struct Tally {
    name: &'static str,
    threshold: f64,
    samples: usize,
    worst: Option<(f64, Witness)>,
}

impl Tally {
    fn new(name: &'static str, threshold: f64) -> Self {
        Self { name, threshold, samples: 0, worst: None }
    }

    fn record(&mut self, margin: f64, w: Witness) {
        self.samples += 1;
        // NaN margins count as failures
        let margin = if margin.is_nan() { f64::NEG_INFINITY } else { margin };
        if self.worst.as_ref().is_none_or(|(m, _)| margin < *m) {
            self.worst = Some((margin, w));
        }
    }

    fn finish(self) -> CheckResult {
        let pass = self.worst.as_ref().is_none_or(|(m, _)| *m >= self.threshold);
        CheckResult {
            check: self.name.to_string(),
            pass,
            samples: self.samples,
            margin: self.worst.map(|(m, _)| m),
            witness: self.worst.map(|(_, w)| w),
        }
    }
}

fn rel(x: f64, scale: f64) -> f64 {
    x / scale.abs().max(1.0)
}

/// Relative distance of `re` outside the open strip; negative inside.
fn strip_margin(s: &StripResult, re: f64) -> f64 {
    rel((s.lo - re).max(re - s.hi), s.lo.abs().max(s.hi.abs()))
}

fn witness(s: f64, z: Complex64, value: f64, bound: f64) -> Witness {
    Witness { s, re: z.re, im: z.im, value, bound }
}

/// Spectral gaps of `T`: pairs of consecutive distinct eigenvalues.
fn spectral_gaps(spectrum: &[f64]) -> Vec<Gap> {
    spectrum
        .windows(2)
        .filter(|w| w[1] - w[0] > 1e-9 * w[0].abs().max(w[1].abs()).max(1.0))
        .map(|w| Gap { alpha: w[0], beta: w[1] })
        .collect()
}

fn scaled_offdiag(bb: OffDiagBounds, s: f64) -> OffDiagBounds {
    OffDiagBounds { a12: bb.a12 * s, a21: bb.a21 * s, b12: bb.b12 * s, b21: bb.b21 * s }
}

fn scaled_diag(d: DiagBounds, s: f64) -> DiagBounds {
    DiagBounds { a11: d.a11 * s, a22: d.a22 * s, b11: d.b11 * s, b22: d.b22 * s }
}

fn mutate(s: StripResult, factor: Option<f64>) -> StripResult {
    match factor {
        Some(f) => s.widened(f),
        None => s,
    }
}

fn count_in(ev: &[Complex64], lo: f64, hi: f64) -> usize {
    ev.iter().filter(|z| lo < z.re && z.re < hi).count()
}

/// Count in the interval shrunk by the region tolerance, so eigenvalues on
/// the boundary up to rounding are not counted.
fn count_strictly_in(ev: &[Complex64], lo: f64, hi: f64) -> usize {
    let pad = REGION_TOL * lo.abs().max(hi.abs()).max(1.0);
    count_in(ev, lo + pad, hi - pad)
}

/// Runs every check that applies to `inst`. Failures are report entries.
pub fn verify_instance(inst: &MatrixInstance, opts: &VerifyOptions) -> Result<VerificationReport> {
    opts.validate()?;
    inst.validate()?;
    let q = inst.constants.quad;
    q.require_subunit().map_err(LabError::from)?;
    let s_grid = opts.s_grid();
    let spectrum = inst.spectrum_t();
    let gaps = spectral_gaps(&spectrum);
    let t_min = spectrum.first().copied().unwrap_or(0.0);

    let mut sanity = Tally::new("eig-sanity", -SANITY_TOL);
    let mut hyper = Tally::new("hyperbola", -REGION_TOL);
    let mut strip = Tally::new("strip", -REGION_TOL);
    let mut semib = Tally::new("semibounded", -REGION_TOL);
    let mut off = Tally::new("strip-offdiag", -REGION_TOL);
    let mut even = Tally::new("even-bound", -REGION_TOL);
    let mut odd_strip = Tally::new("strip-odd", -REGION_TOL);
    let mut odd_disk = Tally::new("disk-odd", -REGION_TOL);
    let mut count = Tally::new("eig-count", -0.5);

    let mut final_ev = Vec::new();
    for &s in &s_grid {
        let m = inst.perturbed(s);
        let ev = linalg::eig(&m)?;
        sanity_check(&mut sanity, &m, &ev, s);
        let qs = q.scaled(s);
        for &z in &ev {
            let h = hyperbola_height(qs, z.re)?;
            hyper.record(rel(h - z.im.abs(), h.max(z.im.abs())), witness(s, z, z.im.abs(), h));
        }
        for g in &gaps {
            let st = perturbed_strip(qs, *g)?;
            if !st.open {
                continue;
            }
            let st = mutate(st, opts.mutation);
            for &z in &ev {
                strip.record(strip_margin(&st, z.re), witness(s, z, z.re, st.lo));
            }
        }
        let lower = semibounded_lower_bound(RelativeBound::Quad(qs), t_min)?;
        for &z in &ev {
            semib.record(rel(z.re - lower, lower), witness(s, z, z.re, lower));
        }
        if let (Structure::Offdiag, Some(bb), Some(g)) = (inst.structure, inst.constants.offdiag, inst.gap) {
            if let Ok(r) = offdiag_gap(scaled_offdiag(bb, s), g) {
                let st = mutate(r.strip, opts.mutation);
                for &z in &ev {
                    off.record(strip_margin(&st, z.re), witness(s, z, z.re, st.lo));
                }
            }
        }
        if let (Structure::Even, Some(bb), Some(mins)) = (inst.structure, inst.constants.offdiag, inst.minima) {
            if let Ok(r) = even_lowerbound(scaled_offdiag(bb, s), mins) {
                for &z in &ev {
                    even.record(rel(z.re - r.lower_bound, r.lower_bound), witness(s, z, z.re, r.lower_bound));
                }
            }
        }
        if let (Some(d), Some(beta)) = (inst.constants.diag, inst.odd_beta) {
            if let Ok(r) = odd_symmetric_gap(scaled_diag(d, s), beta) {
                let st = mutate(r.strip(), opts.mutation);
                for &z in &ev {
                    odd_strip.record(strip_margin(&st, z.re), witness(s, z, z.re, st.hi));
                    let radius = r.disk_radius();
                    odd_disk.record(rel(z.norm() - radius, radius), witness(s, z, z.norm(), radius));
                }
            }
        }
        if let Some(iso) = inst.isolated {
            // at s = 0 the strip degenerates to a line
            if let Some(es) = isolated_eigenvalue_strip(qs, iso).ok().filter(|e| e.hi > e.lo) {
                let k = count_in(&ev, es.lo, es.hi);
                let z = c(iso.lambda, 0.0);
                count.record(-(k as f64 - es.count as f64).abs(), witness(s, z, k as f64, es.count as f64));
            }
        }
        if s == 1.0 {
            final_ev = ev;
        }
    }

    let mut checks = vec![sanity.finish(), hyper.finish(), strip.finish(), semib.finish()];
    match inst.structure {
        Structure::Offdiag => checks.push(off.finish()),
        Structure::Even => checks.push(even.finish()),
        Structure::DiagBlocks => {
            checks.push(odd_strip.finish());
            checks.push(odd_disk.finish());
        }
        Structure::Isolated => checks.push(count.finish()),
        _ => {}
    }
    if inst.hermitian {
        checks.extend(hermitian_checks(inst, q, &final_ev)?);
    }
    if opts.resolvent {
        checks.extend(resolvent_checks(inst, q, &spectrum, opts)?);
    }
    let pass = checks.iter().all(|c| c.pass);
    Ok(VerificationReport {
        seed: inst.seed,
        structure: inst.structure,
        tight: inst.tight,
        dim: inst.dim(),
        quad_bound: q,
        ratio: inst.ratio,
        s_grid,
        checks,
        pass,
    })
}

fn sanity_check(t: &mut Tally, m: &CMatrix, ev: &[Complex64], s: f64) {
    let sum: Complex64 = ev.iter().sum();
    let tr = linalg::trace(m);
    let scale = ev.iter().map(|z| z.norm()).sum::<f64>().max(tr.norm()).max(1.0);
    let e_tr = (sum - tr).norm() / scale;
    let prod: Complex64 = ev.iter().product();
    let det = linalg::determinant(m);
    let e_det = (prod - det).norm() / det.norm().max(prod.norm()).max(f64::MIN_POSITIVE);
    let err = e_tr.max(e_det);
    t.record(-err, witness(s, prod, prod.norm(), det.norm()));
}

fn hermitian_checks(inst: &MatrixInstance, q: QuadBound, ev: &[Complex64]) -> Result<Vec<CheckResult>> {
    let mut balls = Tally::new("balls", -REGION_TOL);
    let mut almost = Tally::new("almost-gap-count", -0.5);
    let Some(g) = inst.gap else { return Ok(Vec::new()) };
    // balls need a genuine gap of T
    if inst.isolated.is_none() {
        for disk in lower_semicont_balls(q, g)? {
            let d = ev.iter().map(|z| (z - c(disk.center, 0.0)).norm()).fold(f64::INFINITY, f64::min);
            let z = c(disk.center, disk.radius);
            balls.record(rel(disk.radius - d, disk.radius), witness(1.0, z, d, disk.radius));
        }
    }
    let m = inst.isolated.map_or(0, |iso| iso.mult);
    let w = linalg::numrange_extremes(&inst.a)?;
    for case in [AlmostGapCase::I, AlmostGapCase::Ii, AlmostGapCase::Iii, AlmostGapCase::Iv] {
        if let Ok(r) = almost_gap_eig_bound(case, q, g, m, w) {
            let k = count_strictly_in(ev, r.interval.lo, r.interval.hi);
            let z = c(0.5 * (r.interval.lo + r.interval.hi), 0.0);
            almost.record(r.max_count as f64 - k as f64, witness(1.0, z, k as f64, r.max_count as f64));
        }
    }
    let mut out = vec![almost.finish()];
    if inst.isolated.is_none() {
        out.insert(0, balls.finish());
    }
    Ok(out)
}

fn grid(lo: f64, hi: f64, n: usize, inset: f64) -> Vec<f64> {
    let w = hi - lo;
    (0..n)
        .map(|k| {
            let t = if n == 1 { 0.5 } else { k as f64 / (n - 1) as f64 };
            lo + w * (inset + (1.0 - 2.0 * inset) * t)
        })
        .collect()
}

fn resolvent_checks(
    inst: &MatrixInstance,
    q: QuadBound,
    spectrum: &[f64],
    opts: &VerifyOptions,
) -> Result<Vec<CheckResult>> {
    let m = inst.perturbed(1.0);
    let mut offreal = Tally::new("resolvent-offreal", -RESOLVENT_TOL);
    let mut plain = Tally::new("resolvent-strip", -RESOLVENT_TOL);
    let mut refined = Tally::new("resolvent-refined", -RESOLVENT_TOL);
    let mut order = Tally::new("refined-le-plain", -REFINED_TOL);
    let mut sym = Tally::new("resolvent-symmetric", -RESOLVENT_TOL);
    let resolvent = |z: Complex64| -> Result<f64> { linalg::resolvent_norm(&m, z) };

    // off the hyperbolas
    let (t_lo, t_hi) = (spectrum[0], spectrum[spectrum.len() - 1]);
    let pad = 0.1 * (t_hi - t_lo) + 1.0;
    let scale = t_lo.abs().max(t_hi.abs()).max(1.0);
    let levels = [0.0, 0.02, 0.1, 0.3, 1.0, 3.0, 10.0];
    for (i, re) in grid(t_lo - pad, t_hi + pad, opts.z_re, 0.0).into_iter().enumerate() {
        let h = hyperbola_height(q, re)?;
        for level in levels.iter().take(opts.z_im) {
            let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
            let im = sign * (h * (1.0 + opts.inset) + opts.inset * scale + level * scale);
            let z = c(re, im);
            let Ok(bound) = resolvent_bound_offreal(q, z) else { continue };
            let r = resolvent(z)?;
            offreal.record(1.0 - r / bound, witness(1.0, z, r, bound));
        }
    }

    // inside the free strip of the scaling gap
    if let Some(g) = inst.gap.filter(|_| inst.isolated.is_none()) {
        let st = perturbed_strip(q, g)?;
        if st.open {
            let width = st.width();
            let ims = [0.0, 0.1, -0.3, 1.0, -3.0, 10.0, -30.0];
            let symmetric = (g.alpha + g.beta).abs() <= 1e-12 * g.beta.abs();
            let sg = if symmetric { Some(symmetric_gap_strip(q, g.beta)?) } else { None };
            for re in grid(st.lo, st.hi, opts.z_re, opts.inset) {
                for im in ims.iter().take(opts.z_im) {
                    let z = c(re, im * width);
                    let r = resolvent(z)?;
                    let b_plain = resolvent_bound_strip(q, g, z)?;
                    let b_ref = resolvent_bound_strip_refined(q, g, z)?;
                    plain.record(1.0 - r / b_plain, witness(1.0, z, r, b_plain));
                    refined.record(1.0 - r / b_ref, witness(1.0, z, r, b_ref));
                    order.record(1.0 - b_ref / b_plain, witness(1.0, z, b_ref, b_plain));
                    if let Some(sg) = sg.filter(|sg| sg.open) {
                        if let Ok(b_sym) = sg.resolvent_bound(z) {
                            sym.record(1.0 - r / b_sym, witness(1.0, z, r, b_sym));
                        }
                    }
                }
            }
        }
    }
    let mut out = vec![offreal.finish(), plain.finish(), refined.finish(), order.finish()];
    if sym.samples > 0 {
        out.push(sym.finish());
    }
    Ok(out)
}
