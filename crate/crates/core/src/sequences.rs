//! Criteria for infinitely many spectral gaps surviving a perturbation.
//!
//! Asymptotic conditions are evaluated in two ways. Analytic models give
//! exact limits. Finite data is reduced to a tail window (by default the last
//! `max(⌈N/4⌉, 2)` terms), where `limsup` and `liminf` become the window
//! maximum and minimum. Finite-data verdicts are estimates, not certificates.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::enclosures::perturbed_strip;
use crate::error::{invalid, not_applicable, Result};
use crate::types::{check_finite, Gap, QuadBound, StripResult};

/// Half-width of the band around a threshold inside which a comparison is
/// reported as inconclusive, relative to `max(1, threshold)`.
pub const STRADDLE_TOL: f64 = 1e-6;

/// Margin below one used when choosing the largest admissible scale.
pub const SCALE_MARGIN: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    InfinitelyMany,
    CofinitelyMany,
    Inconclusive,
}

/// Gaps `(α_n, β_n)` of `T` with `α_n < β_n ≤ α_{n+1}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapSequence {
    pub alphas: Vec<f64>,
    pub betas: Vec<f64>,
}

impl GapSequence {
    pub fn new(alphas: Vec<f64>, betas: Vec<f64>) -> Result<Self> {
        if alphas.len() != betas.len() {
            return Err(invalid(format!(
                "alphas and betas differ in length ({} vs {})",
                alphas.len(),
                betas.len()
            )));
        }
        if alphas.is_empty() {
            return Err(invalid("gap sequence is empty"));
        }
        for (n, (&a, &b)) in alphas.iter().zip(&betas).enumerate() {
            check_finite("alpha_n", a)?;
            check_finite("beta_n", b)?;
            if a >= b {
                return Err(invalid(format!("gap {n}: alpha_n = {a} is not below beta_n = {b}")));
            }
            if let Some(&next) = alphas.get(n + 1) {
                if b > next {
                    return Err(invalid(format!("gap {n}: beta_n = {b} exceeds alpha_(n+1) = {next}")));
                }
            }
        }
        Ok(Self { alphas, betas })
    }

    pub fn len(&self) -> usize {
        self.alphas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alphas.is_empty()
    }

    pub fn gap(&self, n: usize) -> Gap {
        Gap { alpha: self.alphas[n], beta: self.betas[n] }
    }
}

/// Gap lengths `l_n = β_n − α_n` and band widths `w_n = α_{n+1} − β_n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BandProfile {
    pub lengths: Vec<f64>,
    pub widths: Vec<f64>,
}

impl BandProfile {
    /// `widths` may have the same length as `lengths` or be one shorter; the
    /// last band width never enters the criteria.
    pub fn new(lengths: Vec<f64>, widths: Vec<f64>) -> Result<Self> {
        if lengths.is_empty() {
            return Err(invalid("band profile is empty"));
        }
        if widths.len() + 1 != lengths.len() && widths.len() != lengths.len() {
            return Err(invalid(format!(
                "need {} or {} band widths for {} gaps, got {}",
                lengths.len() - 1,
                lengths.len(),
                lengths.len(),
                widths.len()
            )));
        }
        if let Some(l) = lengths.iter().find(|l| !(l.is_finite() && **l > 0.0)) {
            return Err(invalid(format!("gap lengths must be positive, got {l}")));
        }
        if let Some(w) = widths.iter().find(|w| !(w.is_finite() && **w >= 0.0)) {
            return Err(invalid(format!("band widths must be nonnegative, got {w}")));
        }
        Ok(Self { lengths, widths })
    }

    pub fn from_sequence(seq: &GapSequence) -> Self {
        let lengths = seq.alphas.iter().zip(&seq.betas).map(|(a, b)| b - a).collect();
        let widths = seq.betas.iter().zip(seq.alphas.iter().skip(1)).map(|(b, next)| next - b).collect();
        Self { lengths, widths }
    }

    /// `Σ_{j<n} (l_j + w_j)` for every `n`, starting with the empty sum.
    pub fn partial_sums(&self) -> Vec<f64> {
        let mut acc = 0.0;
        let mut out = Vec::with_capacity(self.lengths.len());
        for (n, l) in self.lengths.iter().enumerate() {
            out.push(acc);
            acc += l + self.widths.get(n).copied().unwrap_or(0.0);
        }
        out
    }
}

/// Constants `(a_n, b_n)` of the relative bound on each gap.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerGapConstants {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
}

impl PerGapConstants {
    pub fn new(a: Vec<f64>, b: Vec<f64>) -> Result<Self> {
        if a.len() != b.len() {
            return Err(invalid(format!("a_n and b_n differ in length ({} vs {})", a.len(), b.len())));
        }
        if let Some(x) = a.iter().chain(&b).find(|x| !(x.is_finite() && **x >= 0.0)) {
            return Err(invalid(format!("per-gap constants must be nonnegative, got {x}")));
        }
        if let Some(x) = b.iter().find(|x| **x >= 1.0) {
            return Err(not_applicable(format!("per-gap relative bound b_n = {x} is not < 1")));
        }
        Ok(Self { a, b })
    }

    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }
}

/// Asymptotic model `coef · ratioⁿ · n^exponent · (log n)^log_exponent`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Growth {
    pub coef: f64,
    #[serde(default = "one")]
    pub ratio: f64,
    #[serde(default)]
    pub exponent: f64,
    #[serde(default)]
    pub log_exponent: f64,
}

fn one() -> f64 {
    1.0
}

impl Growth {
    pub const ZERO: Growth = Growth { coef: 0.0, ratio: 1.0, exponent: 0.0, log_exponent: 0.0 };

    pub fn power_log(coef: f64, exponent: f64, log_exponent: f64) -> Self {
        Self { coef, ratio: 1.0, exponent, log_exponent }
    }

    pub fn constant(coef: f64) -> Self {
        Self::power_log(coef, 0.0, 0.0)
    }

    pub fn validate(&self, name: &str) -> Result<()> {
        for v in [self.coef, self.ratio, self.exponent, self.log_exponent] {
            check_finite(name, v)?;
        }
        if self.ratio <= 0.0 {
            return Err(invalid(format!("{name}: geometric ratio must be positive, got {}", self.ratio)));
        }
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.coef == 0.0
    }

    pub fn eval(&self, n: f64) -> f64 {
        let mut v = self.coef * self.ratio.powf(n) * n.powf(self.exponent);
        if self.log_exponent != 0.0 {
            v *= n.ln().powf(self.log_exponent);
        }
        v
    }

    fn key(&self) -> (f64, f64, f64) {
        (self.ratio, self.exponent, self.log_exponent)
    }

    /// Compares orders of growth, ignoring coefficients.
    pub fn order_cmp(&self, other: &Growth) -> Ordering {
        let (a, b) = (self.key(), other.key());
        a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)).then(a.2.total_cmp(&b.2))
    }

    pub fn mul(&self, o: &Growth) -> Growth {
        Growth {
            coef: self.coef * o.coef,
            ratio: self.ratio * o.ratio,
            exponent: self.exponent + o.exponent,
            log_exponent: self.log_exponent + o.log_exponent,
        }
    }

    pub fn div(&self, o: &Growth) -> Result<Growth> {
        if o.is_zero() {
            return Err(invalid("division by the zero sequence"));
        }
        Ok(Growth {
            coef: self.coef / o.coef,
            ratio: self.ratio / o.ratio,
            exponent: self.exponent - o.exponent,
            log_exponent: self.log_exponent - o.log_exponent,
        })
    }

    /// Leading term of `self + o`.
    pub fn add(&self, o: &Growth) -> Growth {
        if self.is_zero() {
            return *o;
        }
        if o.is_zero() {
            return *self;
        }
        match self.order_cmp(o) {
            Ordering::Greater => *self,
            Ordering::Less => *o,
            Ordering::Equal => Growth { coef: self.coef + o.coef, ..*self },
        }
    }

    /// Leading term of `Σ_{j<n} self(j)`; fails for sums that stay bounded,
    /// whose limit is not determined by the asymptotics.
    pub fn partial_sum(&self) -> Result<Growth> {
        if self.is_zero() {
            return Ok(*self);
        }
        if self.ratio > 1.0 {
            return Ok(Growth { coef: self.coef / (self.ratio - 1.0), ..*self });
        }
        if self.ratio == 1.0 {
            if self.exponent > -1.0 {
                return Ok(Growth {
                    coef: self.coef / (self.exponent + 1.0),
                    exponent: self.exponent + 1.0,
                    ..*self
                });
            }
            if self.exponent == -1.0 && self.log_exponent > -1.0 {
                return Ok(Growth {
                    coef: self.coef / (self.log_exponent + 1.0),
                    exponent: 0.0,
                    log_exponent: self.log_exponent + 1.0,
                    ..*self
                });
            }
        }
        Err(not_applicable("partial sums do not diverge like a power-log or geometric model"))
    }

    /// `lim_{n→∞}`, possibly `±∞`.
    pub fn limit(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        match self.order_cmp(&Growth::constant(1.0)) {
            Ordering::Greater => f64::INFINITY.copysign(self.coef),
            Ordering::Equal => self.coef,
            Ordering::Less => 0.0,
        }
    }
}

/// Asymptotic description of a gap sequence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum TailModel {
    /// Gap lengths and band widths `l_n ≈ L n^{p1}(log n)^{p2}`,
    /// `w_n ≈ W n^{q1}(log n)^{q2}`.
    PowerLog {
        p1: f64,
        #[serde(default)]
        p2: f64,
        q1: f64,
        #[serde(default)]
        q2: f64,
        #[serde(default = "one")]
        l_prefactor: f64,
        #[serde(default = "one")]
        w_prefactor: f64,
    },
    /// `α_n = n^exponent (log n)^log_exponent`, `β_n = α_n + θ(α_{n+1} − α_n)`.
    PowerGrowth {
        exponent: f64,
        #[serde(default)]
        log_exponent: f64,
        theta: f64,
    },
    /// `α_n = ratioⁿ`, `β_n = α_n + θ_{n mod k}(α_{n+1} − α_n)` for the
    /// periodic fractions `gap_fractions = [θ_0, …, θ_{k−1}]`.
    Geometric { ratio: f64, gap_fractions: Vec<f64> },
    FiniteData {
        alphas: Vec<f64>,
        betas: Vec<f64>,
        #[serde(default)]
        window: Option<usize>,
    },
}

impl TailModel {
    pub fn power_log(p1: f64, p2: f64, q1: f64, q2: f64) -> Self {
        TailModel::PowerLog { p1, p2, q1, q2, l_prefactor: 1.0, w_prefactor: 1.0 }
    }

    /// `(liminf, limsup)` of `β_n / α_n`.
    pub fn ratio_limits(&self) -> Result<(f64, f64)> {
        match self {
            TailModel::PowerLog { p1, p2, q1, q2, l_prefactor, w_prefactor } => {
                for v in [p1, p2, q1, q2] {
                    check_finite("exponent", *v)?;
                }
                if !(*p1 > 0.0 && *q1 > 0.0) {
                    return Err(invalid(format!("power-log model needs p1, q1 > 0, got {p1}, {q1}")));
                }
                if !(*l_prefactor > 0.0 && *w_prefactor > 0.0) {
                    return Err(invalid("power-log prefactors must be positive"));
                }
                // α_n grows like Σ(l_j + w_j), one power faster than l_n
                Ok((1.0, 1.0))
            }
            TailModel::PowerGrowth { exponent, log_exponent, theta } => {
                check_finite("exponent", *exponent)?;
                check_finite("log_exponent", *log_exponent)?;
                if !(*theta > 0.0 && *theta <= 1.0) {
                    return Err(invalid(format!("theta must lie in (0, 1], got {theta}")));
                }
                if exponent.total_cmp(&0.0).then(log_exponent.total_cmp(&0.0)) != Ordering::Greater {
                    return Err(invalid("power-growth model must be increasing and unbounded"));
                }
                Ok((1.0, 1.0))
            }
            TailModel::Geometric { ratio, gap_fractions } => {
                if !(*ratio > 1.0 && ratio.is_finite()) {
                    return Err(invalid(format!("geometric ratio must exceed 1, got {ratio}")));
                }
                if gap_fractions.is_empty() || gap_fractions.iter().any(|t| !(*t > 0.0 && *t <= 1.0)) {
                    return Err(invalid("gap fractions must be a nonempty list in (0, 1]"));
                }
                let lo = gap_fractions.iter().copied().fold(f64::INFINITY, f64::min);
                let hi = gap_fractions.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                Ok((1.0 + lo * (ratio - 1.0), 1.0 + hi * (ratio - 1.0)))
            }
            TailModel::FiniteData { alphas, betas, window } => {
                let seq = GapSequence::new(alphas.clone(), betas.clone())?;
                let ratios = tail_ratios(&seq, *window)?;
                Ok(min_max(&ratios))
            }
        }
    }

    /// `liminf α_{n+1}/α_n`.
    pub fn growth_liminf(&self) -> Result<f64> {
        match self {
            TailModel::PowerLog { .. } | TailModel::PowerGrowth { .. } => {
                self.ratio_limits()?;
                Ok(1.0)
            }
            TailModel::Geometric { ratio, .. } => {
                self.ratio_limits()?;
                Ok(*ratio)
            }
            TailModel::FiniteData { alphas, betas, window } => {
                let seq = GapSequence::new(alphas.clone(), betas.clone())?;
                growth_ratios(&seq, *window)?
                    .map(|r| min_max(&r).0)
                    .ok_or_else(|| invalid("need at least two gaps in the tail window"))
            }
        }
    }
}

/// Default tail window `max(⌈N/4⌉, 2)`, clamped to `N`.
pub fn default_window(n: usize) -> usize {
    n.div_ceil(4).max(2).min(n)
}

fn window_range(n: usize, window: Option<usize>) -> Result<std::ops::Range<usize>> {
    let w = window.unwrap_or_else(|| default_window(n));
    if w == 0 || w > n {
        return Err(invalid(format!("tail window {w} is not within 1..={n}")));
    }
    Ok(n - w..n)
}

fn require_positive_alphas(seq: &GapSequence, range: std::ops::Range<usize>) -> Result<()> {
    match range.clone().find(|&n| seq.alphas[n] <= 0.0) {
        Some(n) => Err(invalid(format!(
            "alpha_n must be positive in the tail window, got alpha_{n} = {}",
            seq.alphas[n]
        ))),
        None => Ok(()),
    }
}

fn tail_ratios(seq: &GapSequence, window: Option<usize>) -> Result<Vec<f64>> {
    let range = window_range(seq.len(), window)?;
    require_positive_alphas(seq, range.clone())?;
    Ok(range.map(|n| seq.betas[n] / seq.alphas[n]).collect())
}

/// `α_{n+1}/α_n` over the same window as the gap ratios, dropping the last
/// gap whose successor is unknown. `None` if that leaves nothing.
fn growth_ratios(seq: &GapSequence, window: Option<usize>) -> Result<Option<Vec<f64>>> {
    let range = window_range(seq.len(), window)?;
    require_positive_alphas(seq, range.clone())?;
    let r: Vec<f64> = (range.start..range.end - 1).map(|n| seq.alphas[n + 1] / seq.alphas[n]).collect();
    Ok((!r.is_empty()).then_some(r))
}

fn min_max(v: &[f64]) -> (f64, f64) {
    v.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)))
}

fn band(threshold: f64) -> f64 {
    STRADDLE_TOL * threshold.abs().max(1.0)
}

fn check_delta(delta_a: f64) -> Result<()> {
    if !delta_a.is_finite() || delta_a < 0.0 {
        return Err(invalid(format!("delta_A must be finite and >= 0, got {delta_a}")));
    }
    if delta_a >= 1.0 {
        return Err(not_applicable(format!("relative bound delta_A = {delta_a} is not < 1")));
    }
    Ok(())
}

/// `(1 + δ_A)/(1 − δ_A)`.
pub fn ratio_threshold(delta_a: f64) -> f64 {
    (1.0 + delta_a) / (1.0 - delta_a)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatioReport {
    pub verdict: Verdict,
    pub threshold: f64,
    pub liminf: f64,
    pub limsup: f64,
    pub analytic: bool,
}

/// Compares `liminf` and `limsup` of `β_n/α_n` with `(1 + δ_A)/(1 − δ_A)`.
pub fn ratio_criterion(model: &TailModel, delta_a: f64) -> Result<RatioReport> {
    check_delta(delta_a)?;
    let threshold = ratio_threshold(delta_a);
    let (liminf, limsup) = model.ratio_limits()?;
    let tol = band(threshold);
    let verdict = if liminf > threshold + tol {
        Verdict::CofinitelyMany
    } else if limsup > threshold + tol {
        Verdict::InfinitelyMany
    } else {
        Verdict::Inconclusive
    };
    Ok(RatioReport {
        verdict,
        threshold,
        liminf,
        limsup,
        analytic: !matches!(model, TailModel::FiniteData { .. }),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerGapReport {
    /// `(√(a_n²+b_n²α_n²) + √(a_n²+b_n²β_n²))/(β_n − α_n)` for every gap.
    pub ratios: Vec<f64>,
    pub strips: Vec<StripResult>,
    pub liminf: f64,
    pub limsup: f64,
    pub window: usize,
    pub verdict: Verdict,
}

pub fn per_gap_criterion(seq: &GapSequence, consts: &PerGapConstants, window: Option<usize>) -> Result<PerGapReport> {
    if seq.len() != consts.len() {
        return Err(invalid(format!(
            "{} gaps but {} pairs of per-gap constants",
            seq.len(),
            consts.len()
        )));
    }
    let mut ratios = Vec::with_capacity(seq.len());
    let mut strips = Vec::with_capacity(seq.len());
    for n in 0..seq.len() {
        let q = QuadBound { a: consts.a[n], b: consts.b[n] };
        let g = seq.gap(n);
        ratios.push((q.shift(g.alpha) + q.shift(g.beta)) / g.length());
        strips.push(perturbed_strip(q, g)?);
    }
    let range = window_range(seq.len(), window)?;
    let (liminf, limsup) = min_max(&ratios[range.clone()]);
    let tol = band(1.0);
    let verdict = if limsup < 1.0 - tol {
        Verdict::CofinitelyMany
    } else if liminf < 1.0 - tol {
        Verdict::InfinitelyMany
    } else {
        Verdict::Inconclusive
    };
    Ok(PerGapReport { ratios, strips, liminf, limsup, window: range.len(), verdict })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KappaReport {
    /// `b_n + (2/l_n)(a_n + b_n Σ_{j<n}(l_j + w_j))` for every gap.
    pub terms: Vec<f64>,
    pub kappa: f64,
    pub window: usize,
    pub below_one: bool,
}

/// Tail estimate of `κ_s`; a value below one certifies the `limsup` condition
/// of the per-gap criterion.
pub fn kappa_s(profile: &BandProfile, consts: &PerGapConstants, window: Option<usize>) -> Result<KappaReport> {
    if profile.lengths.len() != consts.len() {
        return Err(invalid(format!(
            "{} gap lengths but {} pairs of per-gap constants",
            profile.lengths.len(),
            consts.len()
        )));
    }
    let sums = profile.partial_sums();
    let terms: Vec<f64> = (0..consts.len())
        .map(|n| {
            let (a, b, l) = (consts.a[n], consts.b[n], profile.lengths[n]);
            b + 2.0 / l * (a + b * sums[n])
        })
        .collect();
    let range = window_range(terms.len(), window)?;
    let kappa = min_max(&terms[range.clone()]).1;
    Ok(KappaReport { terms, kappa, window: range.len(), below_one: kappa < 1.0 - band(1.0) })
}

/// Exact `κ_s` for asymptotic models of `l_n, w_n, a_n, b_n`.
pub fn kappa_s_model(l: Growth, w: Growth, a: Growth, b: Growth) -> Result<f64> {
    for (name, g) in [("l", &l), ("w", &w), ("a", &a), ("b", &b)] {
        g.validate(name)?;
        if g.coef < 0.0 {
            return Err(invalid(format!("{name}-model coefficient must be nonnegative")));
        }
    }
    if l.is_zero() {
        return Err(invalid("gap lengths cannot vanish"));
    }
    let s = l.add(&w).partial_sum()?;
    Ok(b.limit() + 2.0 * a.div(&l)?.limit() + 2.0 * b.mul(&s).div(&l)?.limit())
}

/// Outcome of the necessary conditions on gap growth.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthDiagnostic {
    pub delta_a: f64,
    pub threshold: f64,
    /// `liminf α_{n+1}/α_n`, checked when `δ_A > 0`.
    pub growth_liminf: Option<f64>,
    pub growth_ok: Option<bool>,
    /// `limsup 2a_n/l_n`, checked when `δ_A = 0` and `a_n` is supplied.
    pub length_limsup: Option<f64>,
    pub length_ok: Option<bool>,
    pub failures: Vec<String>,
}

impl GrowthDiagnostic {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Input to [`necessary_growth_check`] for the `δ_A = 0` case.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum LengthData {
    Model { l: Growth, a: Growth },
    Finite {
        lengths: Vec<f64>,
        a: Vec<f64>,
        #[serde(default)]
        window: Option<usize>,
    },
}

pub fn necessary_growth_check(model: &TailModel, delta_a: f64, lengths: Option<&LengthData>) -> Result<GrowthDiagnostic> {
    check_delta(delta_a)?;
    let threshold = ratio_threshold(delta_a);
    let mut d = GrowthDiagnostic {
        delta_a,
        threshold,
        growth_liminf: None,
        growth_ok: None,
        length_limsup: None,
        length_ok: None,
        failures: Vec::new(),
    };
    if delta_a > 0.0 {
        let g = model.growth_liminf()?;
        let ok = g >= threshold;
        d.growth_liminf = Some(g);
        d.growth_ok = Some(ok);
        if !ok {
            d.failures.push(format!(
                "liminf alpha_(n+1)/alpha_n = {g} is below (1+delta_A)/(1-delta_A) = {threshold}"
            ));
        }
    } else if let Some(data) = lengths {
        let v = match data {
            LengthData::Model { l, a } => {
                l.validate("l")?;
                a.validate("a")?;
                2.0 * a.div(l)?.limit()
            }
            LengthData::Finite { lengths, a, window } => {
                if lengths.len() != a.len() {
                    return Err(invalid("lengths and a_n differ in length"));
                }
                if lengths.iter().any(|l| l.is_nan() || *l <= 0.0) {
                    return Err(invalid("gap lengths must be positive"));
                }
                let r: Vec<f64> = lengths.iter().zip(a).map(|(l, a)| 2.0 * a / l).collect();
                let range = window_range(r.len(), *window)?;
                min_max(&r[range]).1
            }
        };
        let ok = v < 1.0;
        d.length_limsup = Some(v);
        d.length_ok = Some(ok);
        if !ok {
            d.failures.push(format!("limsup 2a_n/l_n = {v} is not below 1"));
        }
    }
    Ok(d)
}

/// Power-law bounds `l_n ≈ L n^{p1}(log n)^{p2}`, `w_n ≲ W n^{q1}(log n)^{q2}`
/// together with models for `a_n` and `b_n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerLawModel {
    pub p1: f64,
    #[serde(default)]
    pub p2: f64,
    pub q1: f64,
    #[serde(default)]
    pub q2: f64,
    #[serde(default = "one")]
    pub l_prefactor: f64,
    #[serde(default = "one")]
    pub w_prefactor: f64,
    pub a: Growth,
    pub b: Growth,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerLawResult {
    pub kappa_bound: f64,
    /// Largest scale `ε` with `ε·κ < 1` after the margin; `None` when unbounded.
    pub eps0: Option<f64>,
    pub unbounded: bool,
}

/// Bound `2 limsup{a_n/l_n + b_n(1/2 + n + (W/L) n^{q1−p1+1}(log n)^{q2−p2})}`
/// on `κ_s` and the resulting admissible scale of the perturbation.
pub fn powerlaw_example(m: &PowerLawModel) -> Result<PowerLawResult> {
    for v in [m.p1, m.p2, m.q1, m.q2] {
        check_finite("exponent", v)?;
    }
    if !(m.p1 > 0.0 && m.q1 > 0.0) {
        return Err(not_applicable(format!("need p1, q1 > 0, got p1 = {}, q1 = {}", m.p1, m.q1)));
    }
    if !(m.l_prefactor > 0.0 && m.w_prefactor > 0.0) {
        return Err(invalid("prefactors must be positive"));
    }
    m.a.validate("a")?;
    m.b.validate("b")?;
    if m.a.coef < 0.0 || m.b.coef < 0.0 {
        return Err(invalid("a- and b-model coefficients must be nonnegative"));
    }
    let l = Growth::power_log(m.l_prefactor, m.p1, m.p2);
    let a_cap = Growth::power_log(1.0, m.p1, m.p2);
    let b_caps = [Growth::power_log(1.0, -1.0, 0.0), Growth::power_log(1.0, m.p1 - m.q1 - 1.0, m.p2 - m.q2)];
    if !m.a.is_zero() && m.a.order_cmp(&a_cap) == Ordering::Greater {
        return Err(not_applicable("a_n grows faster than n^p1 (log n)^p2"));
    }
    if !m.b.is_zero() && b_caps.iter().any(|c| m.b.order_cmp(c) == Ordering::Greater) {
        return Err(not_applicable("b_n decays slower than min{1/n, n^(p1-q1-1) (log n)^(p2-q2)}"));
    }
    let n = Growth::power_log(1.0, 1.0, 0.0);
    let band_term = Growth::power_log(m.w_prefactor / m.l_prefactor, m.q1 - m.p1 + 1.0, m.q2 - m.p2);
    let kappa_bound = 2.0
        * (m.a.div(&l)?.limit()
            + 0.5 * m.b.limit()
            + m.b.mul(&n).limit()
            + m.b.mul(&band_term).limit());
    if kappa_bound == 0.0 {
        return Ok(PowerLawResult { kappa_bound, eps0: None, unbounded: true });
    }
    Ok(PowerLawResult { kappa_bound, eps0: Some((1.0 - SCALE_MARGIN) / kappa_bound), unbounded: false })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn geometric_seq(n: usize) -> GapSequence {
        let alphas: Vec<f64> = (1..=n).map(|k| 2f64.powi(k as i32)).collect();
        let betas: Vec<f64> = (1..=n).map(|k| 2f64.powi(k as i32 + 1)).collect();
        GapSequence::new(alphas, betas).unwrap()
    }

    #[test]
    fn sequence_validation() {
        assert!(GapSequence::new(vec![1.0, 2.0], vec![2.0, 3.0]).is_ok());
        assert!(GapSequence::new(vec![1.0, 2.0], vec![2.5, 3.0]).is_err());
        assert!(GapSequence::new(vec![1.0], vec![1.0]).is_err());
        assert!(GapSequence::new(vec![1.0], vec![]).is_err());
    }

    #[test]
    fn geometric_doubling_is_cofinite() {
        let m = TailModel::Geometric { ratio: 2.0, gap_fractions: vec![1.0] };
        let r = ratio_criterion(&m, 0.2).unwrap();
        assert_eq!(r.verdict, Verdict::CofinitelyMany);
        assert_eq!((r.liminf, r.limsup), (2.0, 2.0));

        let fd = TailModel::FiniteData { alphas: geometric_seq(20).alphas, betas: geometric_seq(20).betas, window: None };
        assert_eq!(ratio_criterion(&fd, 0.2).unwrap().verdict, Verdict::CofinitelyMany);
    }

    #[test]
    fn ratio_criterion_limits() {
        let gamma = TailModel::Geometric { ratio: 3.0, gap_fractions: vec![0.5] };
        assert_eq!(ratio_criterion(&gamma, 0.0).unwrap().verdict, Verdict::CofinitelyMany);
        let slow = TailModel::PowerGrowth { exponent: 1.0, log_exponent: 0.0, theta: 0.5 };
        assert_eq!(ratio_criterion(&slow, 0.1).unwrap().verdict, Verdict::Inconclusive);
        let mixed = TailModel::Geometric { ratio: 2.0, gap_fractions: vec![1.0, 0.5] };
        assert_eq!(ratio_criterion(&mixed, 0.3).unwrap().verdict, Verdict::InfinitelyMany);
        assert_eq!(ratio_criterion(&mixed, 0.1).unwrap().verdict, Verdict::CofinitelyMany);
        assert!(ratio_criterion(&mixed, 1.0).is_err());
    }

    #[test]
    fn straddling_estimate_is_inconclusive() {
        // threshold 1.5 for delta = 0.2; ratio sits inside the band
        let m = TailModel::Geometric { ratio: 1.5 + 1e-7, gap_fractions: vec![1.0] };
        assert_eq!(ratio_criterion(&m, 0.2).unwrap().verdict, Verdict::Inconclusive);
    }

    #[test]
    fn per_gap_zero_constants() {
        let seq = geometric_seq(8);
        let c = PerGapConstants::new(vec![0.0; 8], vec![0.0; 8]).unwrap();
        let r = per_gap_criterion(&seq, &c, None).unwrap();
        assert!(r.ratios.iter().all(|x| *x == 0.0));
        assert_eq!(r.verdict, Verdict::CofinitelyMany);
        let short = PerGapConstants::new(vec![0.0; 7], vec![0.0; 7]).unwrap();
        assert!(per_gap_criterion(&seq, &short, None).is_err());
    }

    #[test]
    fn single_gap_matches_gap_condition() {
        let seq = GapSequence::new(vec![0.0], vec![3.0]).unwrap();
        for a in [0.5, 1.0, 1.6] {
            let c = PerGapConstants::new(vec![a], vec![0.1]).unwrap();
            let r = per_gap_criterion(&seq, &c, Some(1)).unwrap();
            let q = QuadBound { a, b: 0.1 };
            let open = crate::enclosures::gap_condition(q, Gap { alpha: 0.0, beta: 3.0 }).unwrap();
            assert_eq!(r.strips[0].open, open);
            assert_eq!(r.ratios[0] < 1.0, open);
        }
    }

    #[test]
    fn kappa_examples() {
        let p = BandProfile::new(vec![1.0; 10], vec![1.0; 9]).unwrap();
        let zero = PerGapConstants::new(vec![0.0; 10], vec![0.0; 10]).unwrap();
        assert_eq!(kappa_s(&p, &zero, None).unwrap().kappa, 0.0);

        let c = PerGapConstants::new(vec![0.3; 10], vec![0.0; 10]).unwrap();
        assert_relative_eq!(kappa_s(&p, &c, None).unwrap().kappa, 0.6);
        let c = PerGapConstants::new(vec![0.7; 10], vec![0.0; 10]).unwrap();
        assert!(!kappa_s(&p, &c, None).unwrap().below_one);

        // l = w = n², a = n, b = n^-2: every term of the limit vanishes
        let k = kappa_s_model(
            Growth::power_log(1.0, 2.0, 0.0),
            Growth::power_log(1.0, 2.0, 0.0),
            Growth::power_log(1.0, 1.0, 0.0),
            Growth::power_log(1.0, -2.0, 0.0),
        )
        .unwrap();
        assert_eq!(k, 0.0);
    }

    #[test]
    fn kappa_finite_data_tracks_model() {
        // l = w = n, a = 0, b = 1/(4n): S_n ~ n², so 2b_n S_n/l_n → 0.5
        let n = 4000;
        let lengths: Vec<f64> = (1..=n).map(|k| k as f64).collect();
        let widths = lengths[..n - 1].to_vec();
        let b: Vec<f64> = (1..=n).map(|k| 0.25 / k as f64).collect();
        let p = BandProfile::new(lengths, widths).unwrap();
        let c = PerGapConstants::new(vec![0.0; n], b).unwrap();
        let est = kappa_s(&p, &c, None).unwrap().kappa;
        let exact = kappa_s_model(
            Growth::power_log(1.0, 1.0, 0.0),
            Growth::power_log(1.0, 1.0, 0.0),
            Growth::ZERO,
            Growth::power_log(0.25, -1.0, 0.0),
        )
        .unwrap();
        assert_relative_eq!(exact, 0.5);
        assert!((est - exact).abs() < 1e-3, "estimate {est}");
    }

    #[test]
    fn partial_sums_match_alpha_differences() {
        let seq = GapSequence::new(vec![0.0, 2.0, 2.5, 7.0], vec![1.0, 2.5, 4.0, 9.0]).unwrap();
        let p = BandProfile::from_sequence(&seq);
        let s = p.partial_sums();
        for (n, sum) in s.iter().enumerate() {
            assert_eq!(*sum, seq.alphas[n] - seq.alphas[0]);
        }
        // single spectral point between gaps 1 and 2
        assert_eq!(p.widths[1], 0.0);
    }

    #[test]
    fn growth_check_examples() {
        let linear = TailModel::PowerGrowth { exponent: 1.0, log_exponent: 0.0, theta: 0.5 };
        let d = necessary_growth_check(&linear, 0.3, None).unwrap();
        assert!(!d.passed());
        assert_relative_eq!(d.threshold, 13.0 / 7.0);

        let triple = TailModel::Geometric { ratio: 3.0, gap_fractions: vec![0.5] };
        assert!(necessary_growth_check(&triple, 0.3, None).unwrap().passed());

        let lengths = LengthData::Model { l: Growth::constant(1.0), a: Growth::power_log(1.0, 1.0, 0.0) };
        let d = necessary_growth_check(&linear, 0.0, Some(&lengths)).unwrap();
        assert_eq!(d.length_ok, Some(false));
        assert_eq!(d.length_limsup, Some(f64::INFINITY));
    }

    #[test]
    fn growth_algebra() {
        let g = Growth { coef: 3.0, ratio: 2.0, exponent: 1.0, log_exponent: 0.0 };
        assert_eq!(g.partial_sum().unwrap().coef, 3.0);
        let h = Growth::power_log(2.0, 2.0, 0.0).partial_sum().unwrap();
        assert_relative_eq!(h.coef, 2.0 / 3.0);
        assert_eq!(h.exponent, 3.0);
        assert!(Growth::power_log(1.0, -2.0, 0.0).partial_sum().is_err());
        assert_eq!(Growth::power_log(1.0, 0.0, -0.1).limit(), 0.0);
        assert_eq!(Growth::power_log(1.0, 0.0, 0.1).limit(), f64::INFINITY);
    }

    fn case_one(prefactor: f64) -> PowerLawModel {
        PowerLawModel {
            p1: 2.0,
            p2: 0.0,
            q1: 2.0,
            q2: -0.5,
            l_prefactor: 1.0,
            w_prefactor: 1.0,
            a: Growth::power_log(prefactor, 1.0, 0.0),
            b: Growth::power_log(prefactor, -1.0, 0.0),
        }
    }

    #[test]
    fn powerlaw_examples() {
        let zero = PowerLawModel { a: Growth::ZERO, b: Growth::ZERO, ..case_one(1.0) };
        let r = powerlaw_example(&zero).unwrap();
        assert!(r.unbounded && r.eps0.is_none() && r.kappa_bound == 0.0);

        let r = powerlaw_example(&case_one(0.4)).unwrap();
        assert_relative_eq!(r.kappa_bound, 0.8);
        let r2 = powerlaw_example(&case_one(0.8)).unwrap();
        assert_relative_eq!(r2.eps0.unwrap(), 0.5 * r.eps0.unwrap(), max_relative = 1e-15);

        let too_big = PowerLawModel { b: Growth::power_log(1.0, -0.5, 0.0), ..case_one(1.0) };
        assert!(matches!(powerlaw_example(&too_big), Err(crate::Error::NotApplicable(_))));
        let bad_p = PowerLawModel { p1: 0.0, ..case_one(1.0) };
        assert!(powerlaw_example(&bad_p).is_err());
    }

    #[test]
    fn powerlaw_bound_dominates_exact_kappa() {
        let m = case_one(0.3);
        let bound = powerlaw_example(&m).unwrap().kappa_bound;
        let exact = kappa_s_model(
            Growth::power_log(m.l_prefactor, m.p1, m.p2),
            Growth::power_log(m.w_prefactor, m.q1, m.q2),
            m.a,
            m.b,
        )
        .unwrap();
        assert!(exact <= bound, "exact {exact} > bound {bound}");
    }
}
