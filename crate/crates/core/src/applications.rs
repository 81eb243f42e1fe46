//! Closed-form constants for concrete operator families: the massless Dirac
//! operator in the plane, the massive Dirac operator with a Coulomb-like
//! potential, point-coupled periodic manifolds, and a two-channel
//! Hamiltonian with dissipation.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use statrs::function::{beta::beta, gamma::gamma};

use crate::enclosures::{hyperbola_height, symmetric_gap_strip, SymmetricGap};
use crate::error::{invalid, not_applicable, Result};
use crate::sequences::{Growth, PowerLawModel};
use crate::structured::{even_lowerbound, BlockMinima, OffDiagBounds};
use crate::types::{check_nonnegative, ComplexPoint, QuadBound};

/// A potential `V ∈ L^p(ℝ², M(2, ℂ))` with `p > 2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiracSpec {
    pub v_norm: f64,
    pub p: f64,
}

impl DiracSpec {
    pub fn new(v_norm: f64, p: f64) -> Result<Self> {
        let s = Self { v_norm, p };
        s.validate()?;
        Ok(s)
    }

    fn validate(&self) -> Result<()> {
        check_nonnegative("v_norm", self.v_norm)?;
        if !(self.p > 2.0 && self.p.is_finite()) {
            return Err(invalid(format!("p must be finite and > 2, got {}", self.p)));
        }
        Ok(())
    }

    /// `C_p = ‖V‖_p (2π)^{−2/p} (2π/(p−2))^{1/p}`.
    pub fn c_p(&self) -> f64 {
        let p = self.p;
        self.v_norm * (2.0 * PI).powf(-2.0 / p) * (2.0 * PI / (p - 2.0)).powf(1.0 / p)
    }

    /// Parameter `b = √(2/p)` at which the envelope meets the imaginary axis.
    pub fn b_max(&self) -> f64 {
        (2.0 / self.p).sqrt()
    }

    /// `√(p/(p−2))·(4π)^{−1/p}·‖V‖_p`, so that `|Im z| ≈ coef·|Re z|^{2/p}`.
    pub fn asymptote_coefficient(&self) -> f64 {
        let p = self.p;
        (p / (p - 2.0)).sqrt() * (4.0 * PI).powf(-1.0 / p) * self.v_norm
    }
}

/// `(a_p(t), b_p(t)) = (C_p t^{−2/p}, C_p t^{(p−2)/p})`.
pub fn dirac2d_constants_t(spec: DiracSpec, t: f64) -> Result<QuadBound> {
    spec.validate()?;
    if !(t > 0.0 && t.is_finite()) {
        return Err(invalid(format!("t must be positive, got {t}")));
    }
    let c = spec.c_p();
    Ok(QuadBound { a: c * t.powf(-2.0 / spec.p), b: c * t.powf((spec.p - 2.0) / spec.p) })
}

/// `(a_p(b), b)` with `a_p(b) = C_p^{p/(p−2)} b^{−2/(p−2)}`.
pub fn dirac2d_constants_b(spec: DiracSpec, b: f64) -> Result<QuadBound> {
    spec.validate()?;
    if !(b > 0.0 && b.is_finite()) {
        return Err(invalid(format!("b must be positive, got {b}")));
    }
    let p = spec.p;
    Ok(QuadBound { a: spec.c_p().powf(p / (p - 2.0)) * b.powf(-2.0 / (p - 2.0)), b })
}

/// The parameter `t` with `b_p(t) = b`.
pub fn dirac2d_t_of_b(spec: DiracSpec, b: f64) -> f64 {
    (b / spec.c_p()).powf(spec.p / (spec.p - 2.0))
}

/// Envelope point `(x, y) = (|Re z|², |Im z|²)` at parameter `b`; `x` is
/// negative for `b > √(2/p)`.
pub fn dirac2d_envelope_xy(spec: DiracSpec, b: f64) -> (f64, f64) {
    let (p, c) = (spec.p, spec.c_p());
    let ratio = c / b;
    let x = ratio.powf(2.0 * p / (p - 2.0)) * (2.0 - b * b * p) / (p - 2.0);
    let y = p * c * c / (p - 2.0) * ratio.powf(4.0 / (p - 2.0));
    (x, y)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnvelopePoint {
    pub b: f64,
    pub x: f64,
    pub y: f64,
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiracEnvelope {
    pub p: f64,
    pub v_norm: f64,
    pub c_p: f64,
    pub coefficient: f64,
    pub exponent: f64,
    pub b_min: f64,
    pub b_max: f64,
    /// Parameters `b ≥ √(2/p)`, where `x(b) ≤ 0`, are left out.
    pub clipped: bool,
    pub points: Vec<EnvelopePoint>,
}

/// Default ratio `b_min / b_max` of the sampling grid.
pub const ENVELOPE_B_RANGE: f64 = 1e-3;

/// Samples the boundary curve of the intersection of all hyperbolic
/// enclosures over `0 < b < 1` on a log grid from `b = √(2/p)` (where the
/// curve crosses the imaginary axis) down to `b_min`.
pub fn dirac2d_envelope(spec: DiracSpec, samples: usize, b_min: Option<f64>) -> Result<DiracEnvelope> {
    spec.validate()?;
    if samples < 2 {
        return Err(invalid(format!("need at least 2 samples, got {samples}")));
    }
    if spec.v_norm == 0.0 {
        return Err(not_applicable("the envelope of the zero potential is the real axis"));
    }
    let b_max = spec.b_max();
    let b_min = b_min.unwrap_or(b_max * ENVELOPE_B_RANGE);
    if !(b_min > 0.0 && b_min < b_max) {
        return Err(invalid(format!("b_min must lie in (0, {b_max}), got {b_min}")));
    }
    let step = (b_min / b_max).ln() / (samples - 1) as f64;
    let points = (0..samples)
        .map(|k| {
            let b = if k == 0 { b_max } else { b_max * (step * k as f64).exp() };
            let (x, y) = dirac2d_envelope_xy(spec, b);
            // x(b_max) vanishes exactly
            let x = if k == 0 { 0.0 } else { x.max(0.0) };
            EnvelopePoint { b, x, y, re: x.sqrt(), im: y.sqrt() }
        })
        .collect();
    Ok(DiracEnvelope {
        p: spec.p,
        v_norm: spec.v_norm,
        c_p: spec.c_p(),
        coefficient: spec.asymptote_coefficient(),
        exponent: 2.0 / spec.p,
        b_min,
        b_max,
        clipped: true,
        points,
    })
}

/// `|Im z| / (coef·|Re z|^{2/p})` along the envelope, equal to
/// `(1 − p b²/2)^{−1/p}`.
pub fn dirac2d_asymptote_ratio(spec: DiracSpec, b: f64) -> f64 {
    (1.0 - 0.5 * spec.p * b * b).powf(-1.0 / spec.p)
}

/// `‖V(x)‖² ≤ C1² + C2²|x|^{−2}` for a Dirac operator of mass `m` in ℝ³.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoulombSpec {
    pub c1: f64,
    pub c2: f64,
    pub m: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoulombRegion {
    /// Relative-bound constants `(C1, 2·C2)` obtained through Hardy's inequality.
    pub bound: QuadBound,
    /// `√(C1² + 4C2²m²)`.
    pub shift: f64,
    /// `m − √(C1² + 4C2²m²)`; the spectrum satisfies `|Re z| ≥ gap_half_width`.
    pub gap_half_width: f64,
    pub bisectorial: bool,
    pub symmetric_gap: SymmetricGap,
}

impl CoulombRegion {
    /// Largest `|Im z|` allowed above `re`: `√((C1² + 4C2²re²)/(1 − 4C2²))`.
    pub fn height(&self, re: f64) -> f64 {
        hyperbola_height(self.bound, re).unwrap_or(f64::INFINITY)
    }

    pub fn contains(&self, z: ComplexPoint) -> bool {
        z.re.abs() >= self.gap_half_width && z.im.abs() <= self.height(z.re)
    }
}

pub fn dirac3d_coulomb(spec: CoulombSpec) -> Result<CoulombRegion> {
    check_nonnegative("C1", spec.c1)?;
    check_nonnegative("C2", spec.c2)?;
    if !(spec.m > 0.0 && spec.m.is_finite()) {
        return Err(invalid(format!("mass must be positive, got {}", spec.m)));
    }
    let bound = QuadBound { a: spec.c1, b: 2.0 * spec.c2 };
    let sg = symmetric_gap_strip(bound, spec.m)?;
    if !sg.open {
        return Err(not_applicable(format!(
            "sqrt(C1^2 + 4 C2^2 m^2) = {} is not below m = {}; the spectrum may not remain separated",
            bound.shift(spec.m),
            spec.m
        )));
    }
    Ok(CoulombRegion {
        bound,
        shift: bound.shift(spec.m),
        gap_half_width: sg.beta_perturbed,
        bisectorial: true,
        symmetric_gap: sg,
    })
}

/// Case 1: spheres touching at points; case 2: spheres joined by segments.
/// Serialized as the number `1` or `2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "CaseRepr", into = "u8")]
pub enum ManifoldCase {
    Touching,
    Segments,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum CaseRepr {
    Num(u8),
    Str(String),
}

impl TryFrom<CaseRepr> for ManifoldCase {
    type Error = crate::Error;

    fn try_from(v: CaseRepr) -> Result<Self> {
        match v {
            CaseRepr::Num(n) => n.try_into(),
            CaseRepr::Str(s) => match s.as_str() {
                "1" | "touching" => Ok(Self::Touching),
                "2" | "segments" => Ok(Self::Segments),
                other => Err(invalid(format!("manifold case must be 1 or 2, got {other:?}"))),
            },
        }
    }
}

impl From<ManifoldCase> for u8 {
    fn from(c: ManifoldCase) -> u8 {
        match c {
            ManifoldCase::Touching => 1,
            ManifoldCase::Segments => 2,
        }
    }
}

impl TryFrom<u8> for ManifoldCase {
    type Error = crate::Error;

    fn try_from(v: u8) -> Result<Self> {
        match v {
            1 => Ok(Self::Touching),
            2 => Ok(Self::Segments),
            other => Err(invalid(format!("manifold case must be 1 or 2, got {other}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ManifoldSpec {
    /// `sup_m ‖V_m‖_{L^p(S²)}`.
    pub c: f64,
    pub p: f64,
    pub case: ManifoldCase,
    pub eps_geom: f64,
    #[serde(default = "one")]
    pub l_prefactor: f64,
    #[serde(default = "one")]
    pub w_prefactor: f64,
}

fn one() -> f64 {
    1.0
}

impl ManifoldSpec {
    pub fn new(c: f64, p: f64, case: ManifoldCase, eps_geom: f64) -> Result<Self> {
        let s = Self { c, p, case, eps_geom, l_prefactor: 1.0, w_prefactor: 1.0 };
        s.validate()?;
        Ok(s)
    }

    fn validate(&self) -> Result<()> {
        if !(self.c > 0.0 && self.c.is_finite()) {
            return Err(invalid(format!("c must be positive, got {}", self.c)));
        }
        if !(self.p > 2.0 && self.p.is_finite()) {
            return Err(invalid(format!("p must lie in (2, inf), got {}", self.p)));
        }
        if !(self.eps_geom > 0.0 && self.eps_geom < 1.0) {
            return Err(invalid(format!("eps_geom must lie in (0, 1), got {}", self.eps_geom)));
        }
        if !(self.l_prefactor > 0.0 && self.w_prefactor > 0.0) {
            return Err(invalid("prefactors must be positive"));
        }
        Ok(())
    }

    /// `c(4π)^{−1/p}`.
    fn scale(&self) -> f64 {
        self.c * (4.0 * PI).powf(-1.0 / self.p)
    }

    /// Common limit `K = c(4π)^{−1/p}/√(p−2)` of `a_n/n` and `n·b_n`.
    pub fn asymptotic_constant(&self) -> f64 {
        self.scale() / (self.p - 2.0).sqrt()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifoldBounds {
    pub n: u64,
    pub bound: QuadBound,
    pub asymptotic_constant: f64,
    /// Band model and asymptotic models `a_n ≈ K n`, `b_n ≈ K/n`.
    pub model: PowerLawModel,
}

/// `a_n = c(4π)^{−1/p}√(1 + n²/(p−2))`, `b_n = c(4π)^{−1/p}/(n√(p−2))`.
pub fn manifold_relbounds(spec: ManifoldSpec, n: u64) -> Result<ManifoldBounds> {
    spec.validate()?;
    if n < 2 {
        return Err(invalid(format!("n must be at least 2, got {n}")));
    }
    let nf = n as f64;
    let s = spec.scale();
    let bound = QuadBound {
        a: s * (1.0 + nf * nf / (spec.p - 2.0)).sqrt(),
        b: s / (nf * (spec.p - 2.0).sqrt()),
    };
    let k = spec.asymptotic_constant();
    let (q1, q2) = match spec.case {
        ManifoldCase::Touching => (2.0, -spec.eps_geom),
        ManifoldCase::Segments => (2.0 - spec.eps_geom, 0.0),
    };
    let model = PowerLawModel {
        p1: 2.0,
        p2: 0.0,
        q1,
        q2,
        l_prefactor: spec.l_prefactor,
        w_prefactor: spec.w_prefactor,
        a: Growth::power_log(k, 1.0, 0.0),
        b: Growth::power_log(k, -1.0, 0.0),
    };
    Ok(ManifoldBounds { n, bound, asymptotic_constant: k, model })
}

/// Two-channel Hamiltonian with a harmonic-oscillator channel in ℝ^d.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TwoChannelSpec {
    pub d: u32,
    pub p: f64,
    pub v12_norm: f64,
    #[serde(default)]
    pub p0: f64,
    /// Coefficients `p_{1,α}` for `|α| = 1`, at most `d` of them.
    #[serde(default)]
    pub p1: Vec<f64>,
    /// Coefficients `p_{2,α}` for `|α| = 2`, at most `d(d+1)/2` of them.
    #[serde(default)]
    pub p2: Vec<f64>,
}

impl TwoChannelSpec {
    fn validate(&self) -> Result<()> {
        if self.d == 0 {
            return Err(invalid("dimension d must be positive"));
        }
        let d = self.d as f64;
        if !(self.p.is_finite() && self.p > 0.5 * d && self.p >= 2.0) {
            return Err(invalid(format!("need p > d/2 and p >= 2, got p = {} for d = {}", self.p, self.d)));
        }
        check_nonnegative("v12_norm", self.v12_norm)?;
        check_nonnegative("p0", self.p0)?;
        for v in self.p1.iter().chain(&self.p2) {
            check_nonnegative("potential coefficient", *v)?;
        }
        let d = self.d as usize;
        if self.p1.len() > d {
            return Err(invalid(format!("at most {d} first-order coefficients, got {}", self.p1.len())));
        }
        if self.p2.len() > d * (d + 1) / 2 {
            return Err(invalid(format!(
                "at most {} second-order coefficients, got {}",
                d * (d + 1) / 2,
                self.p2.len()
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoChannelBound {
    pub b21: f64,
    pub c_p: f64,
    /// Lower bound on `Re σ(H)`.
    pub lower_bound: f64,
}

/// `C_p = ‖V12‖_p (2π)^{−d/p} (2π^{d/2}/Γ(d/2)) B(d/2, p − d/2)`.
pub fn two_channel_cp(spec: &TwoChannelSpec) -> Result<f64> {
    spec.validate()?;
    let (d, p) = (spec.d as f64, spec.p);
    let sphere = 2.0 * PI.powf(0.5 * d) / gamma(0.5 * d);
    Ok(spec.v12_norm * (2.0 * PI).powf(-d / p) * sphere * beta(0.5 * d, p - 0.5 * d))
}

/// `b21² = 2p0²/d² + (1/d)Σ p1,α² + 2Σ p2,α²`.
pub fn two_channel_b21(spec: &TwoChannelSpec) -> Result<f64> {
    spec.validate()?;
    let d = spec.d as f64;
    let s1: f64 = spec.p1.iter().map(|x| x * x).sum();
    let s2: f64 = spec.p2.iter().map(|x| x * x).sum();
    Ok((2.0 * spec.p0 * spec.p0 / (d * d) + s1 / d + 2.0 * s2).sqrt())
}

/// `a_{12,p}(b) = C_p^{2p/(2p−d)} b^{−d/(2p−d)}`.
pub fn two_channel_a12(c_p: f64, d: u32, p: f64, b12: f64) -> f64 {
    let d = d as f64;
    c_p.powf(2.0 * p / (2.0 * p - d)) * b12.powf(-d / (2.0 * p - d))
}

/// Lower bound `−√X·tan(½·arctan(2√X/d))` on `Re σ(H)`, where
/// `X = d·(b21·C_p)^{2p/(2p−d)}`: the even block bound with `β1 = d`,
/// `β2 = 0`, `a21 = 0` in the limit `b12 → 1/b21`.
pub fn two_channel_bound(spec: &TwoChannelSpec) -> Result<TwoChannelBound> {
    let c_p = two_channel_cp(spec)?;
    let b21 = two_channel_b21(spec)?;
    let (d, p) = (spec.d as f64, spec.p);
    let lower_bound = if b21 == 0.0 || c_p == 0.0 {
        0.0
    } else {
        // a12 at b12 = 1/b21
        let a12 = c_p.powf(2.0 * p / (2.0 * p - d)) * b21.powf(d / (2.0 * p - d));
        let bb = OffDiagBounds { a12, a21: 0.0, b12: 0.0, b21 };
        even_lowerbound(bb, BlockMinima { beta1: d, beta2: 0.0 })?.lower_bound
    };
    Ok(TwoChannelBound { b21, c_p, lower_bound })
}
