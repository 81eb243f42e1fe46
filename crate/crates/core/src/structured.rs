//! Bounds for symmetric perturbations and for perturbations that are
//! diagonal or off-diagonal with respect to a splitting of the space.
//!
//! Block constants follow the convention `‖A_ij x‖² ≤ a_ij²‖x‖² + b_ij²‖T_jj x‖²`.

use serde::{Deserialize, Serialize};

use crate::enclosures::perturbed_strip;
use crate::error::{invalid, not_applicable, Result};
use crate::types::{check_finite, check_nonnegative, Gap, QuadBound, StripResult};

/// Extremes of the numerical range of a symmetric perturbation; `None`
/// marks an unbounded side.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct NumRangeBounds {
    #[serde(default)]
    pub sup_w: Option<f64>,
    #[serde(default)]
    pub inf_w: Option<f64>,
}

impl NumRangeBounds {
    pub fn new(inf_w: Option<f64>, sup_w: Option<f64>) -> Result<Self> {
        if let Some(v) = inf_w {
            check_finite("inf_W", v)?;
        }
        if let Some(v) = sup_w {
            check_finite("sup_W", v)?;
        }
        if let (Some(lo), Some(hi)) = (inf_w, sup_w) {
            if lo > hi {
                return Err(invalid(format!("inf_W = {lo} exceeds sup_W = {hi}")));
            }
        }
        Ok(Self { sup_w, inf_w })
    }
}

/// Which ends of the gap are estimated through the numerical range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AlmostGapCase {
    /// Relative bound at both ends.
    I,
    /// `sup W(A)` at the lower end.
    Ii,
    /// `inf W(A)` at the upper end.
    Iii,
    /// Numerical range at both ends.
    Iv,
}

impl std::str::FromStr for AlmostGapCase {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "i" | "1" => Ok(Self::I),
            "ii" | "2" => Ok(Self::Ii),
            "iii" | "3" => Ok(Self::Iii),
            "iv" | "4" => Ok(Self::Iv),
            other => Err(invalid(format!("unknown case {other:?}, expected i, ii, iii or iv"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlmostGapResult {
    pub interval: StripResult,
    /// Upper bound on the number of eigenvalues of `T + A` in the interval.
    pub max_count: usize,
}

/// Interval `(α_{T+A}, β_{T+A})` for symmetric `A` when `(α, β)` contains
/// `m` eigenvalues of `T`; it then holds at most `m` eigenvalues of `T + A`.
pub fn almost_gap_eig_bound(
    case: AlmostGapCase,
    q: QuadBound,
    g: Gap,
    m: usize,
    w: NumRangeBounds,
) -> Result<AlmostGapResult> {
    q.require_subunit()?;
    let (sa, sb) = (q.shift(g.alpha), q.shift(g.beta));
    let need_sup = || w.sup_w.ok_or_else(|| not_applicable("case needs A bounded above (sup W finite)"));
    let need_inf = || w.inf_w.ok_or_else(|| not_applicable("case needs A bounded below (inf W finite)"));
    let (lo_shift, hi_shift) = match case {
        AlmostGapCase::I => (sa, sb),
        AlmostGapCase::Ii => (need_sup()?, sb),
        AlmostGapCase::Iii => (sa, -need_inf()?),
        AlmostGapCase::Iv => (need_sup()?, -need_inf()?),
    };
    if lo_shift + hi_shift >= g.length() {
        return Err(not_applicable(format!(
            "case {case:?}: {lo_shift} + {hi_shift} is not below the gap length {}",
            g.length()
        )));
    }
    let interval = if case == AlmostGapCase::I {
        perturbed_strip(q, g)?
    } else {
        StripResult { lo: g.alpha + lo_shift, hi: g.beta - hi_shift, open: true }
    };
    Ok(AlmostGapResult { interval, max_count: m })
}

/// Constants of a perturbation that is off-diagonal with respect to
/// `H = H_1 ⊕ H_2`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct OffDiagBounds {
    pub a12: f64,
    pub a21: f64,
    pub b12: f64,
    pub b21: f64,
}

impl OffDiagBounds {
    pub fn new(a12: f64, a21: f64, b12: f64, b21: f64) -> Result<Self> {
        let bb = Self { a12, a21, b12, b21 };
        bb.validate()?;
        Ok(bb)
    }

    pub fn uniform(a: f64, b: f64) -> Self {
        Self { a12: a, a21: a, b12: b, b21: b }
    }

    fn validate(&self) -> Result<()> {
        for (n, v) in [("a12", self.a12), ("a21", self.a21), ("b12", self.b12), ("b21", self.b21)] {
            check_nonnegative(n, v)?;
        }
        if self.b12 * self.b21 >= 1.0 {
            return Err(not_applicable(format!("b12*b21 = {} is not < 1", self.b12 * self.b21)));
        }
        Ok(())
    }
}

/// Constants of a perturbation that is block diagonal, measured against the
/// off-diagonal blocks of `T`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct DiagBounds {
    pub a11: f64,
    pub a22: f64,
    pub b11: f64,
    pub b22: f64,
}

impl DiagBounds {
    pub fn new(a11: f64, a22: f64, b11: f64, b22: f64) -> Result<Self> {
        for (n, v) in [("a11", a11), ("a22", a22), ("b11", b11), ("b22", b22)] {
            check_nonnegative(n, v)?;
        }
        Ok(Self { a11, a22, b11, b22 })
    }

    pub fn uniform(a: f64, b: f64) -> Self {
        Self { a11: a, a22: a, b11: b, b22: b }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OffDiagGap {
    pub delta: f64,
    pub strip: StripResult,
}

/// Free strip `(α + δ, β − δ) + iℝ` for an off-diagonal perturbation across a
/// gap containing zero, with `H_1` the spectral subspace of `(−∞, α]`.
pub fn offdiag_gap(bb: OffDiagBounds, g: Gap) -> Result<OffDiagGap> {
    bb.validate()?;
    if !g.contains(0.0) {
        return Err(not_applicable(format!(
            "gap ({}, {}) does not contain 0",
            g.alpha, g.beta
        )));
    }
    let product = (bb.a12 * bb.a12 + bb.b12 * bb.b12 * g.beta * g.beta).sqrt()
        * (bb.a21 * bb.a21 + bb.b21 * bb.b21 * g.alpha * g.alpha).sqrt();
    let half = 0.5 * g.length();
    if product >= half * half {
        return Err(not_applicable(format!(
            "coupling {product} is not below ((beta-alpha)/2)^2 = {}",
            half * half
        )));
    }
    let delta = half - (half * half - product).sqrt();
    Ok(OffDiagGap {
        delta,
        strip: StripResult { lo: g.alpha + delta, hi: g.beta - delta, open: true },
    })
}

/// Minima `β_{T,i} = min σ(T_ii)` of the diagonal blocks of a nonnegative `T`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlockMinima {
    pub beta1: f64,
    pub beta2: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvenBound {
    /// Geometric mean `√(√(a12²+b12²β2²)·√(a21²+b21²β1²))` of the couplings.
    pub coupling: f64,
    pub delta_plus: f64,
    pub lower_bound: f64,
}

fn even_coupling(bb: &OffDiagBounds, mins: &BlockMinima) -> f64 {
    let s12 = bb.a12.hypot(bb.b12 * mins.beta2);
    let s21 = bb.a21.hypot(bb.b21 * mins.beta1);
    (s12 * s21).sqrt()
}

fn check_minima(mins: &BlockMinima) -> Result<()> {
    for (n, v) in [("beta1", mins.beta1), ("beta2", mins.beta2)] {
        check_finite(n, v)?;
        if v < 0.0 {
            return Err(invalid(format!("{n} = {v}: T must be nonnegative")));
        }
    }
    Ok(())
}

/// Lower bound `min{β1, β2} − δ⊕` on `Re σ(T + A)` for block-diagonal
/// nonnegative `T` and off-diagonal `A`, with
/// `δ⊕ = g·tan(½·arctan(2g/(max{β1,β2} − min{β1,β2})))`.
pub fn even_lowerbound(bb: OffDiagBounds, mins: BlockMinima) -> Result<EvenBound> {
    bb.validate()?;
    check_minima(&mins)?;
    let g = even_coupling(&bb, &mins);
    let spread = (mins.beta1 - mins.beta2).abs();
    let delta_plus = if g == 0.0 {
        0.0
    } else if spread == 0.0 {
        // arctan(+∞) = π/2 and tan(π/4) = 1
        g
    } else {
        g * (0.5 * (2.0 * g / spread).atan()).tan()
    };
    Ok(EvenBound { coupling: g, delta_plus, lower_bound: mins.beta1.min(mins.beta2) - delta_plus })
}

/// The same bound as the smaller root `(β1+β2)/2 − √(((β1−β2)/2)² + g²)`.
pub fn even_lowerbound_root_form(bb: OffDiagBounds, mins: BlockMinima) -> Result<f64> {
    bb.validate()?;
    check_minima(&mins)?;
    let g = even_coupling(&bb, &mins);
    Ok(0.5 * (mins.beta1 + mins.beta2) - (0.5 * (mins.beta1 - mins.beta2)).hypot(g))
}

/// Free region for an odd `T` with symmetric gap `(−β, β)` and a diagonal `A`.
///
/// The disk `|z| < β⊕` is free of `σ(T + sA)` for all `s ∈ [0, 1]`. The full
/// strip `|Re z| < β⊕` can fail once one block constant exceeds `β`:
/// `T = [[0, 1], [1, 0]]`, `A = diag(2.1i, 0)` gives `β⊕ ≈ 0.40` and an
/// eigenvalue near `0.73i`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OddGap {
    pub beta: f64,
    /// `√(a11² + b11²β²)`.
    pub s11: f64,
    /// `√(a22² + b22²β²)`.
    pub s22: f64,
    pub beta_plus: f64,
}

impl OddGap {
    /// The strip `|Re z| < β⊕`.
    ///
    /// Only the disk `|z| < β⊕` follows from the product estimate on the
    /// quadratic complement. The strip can fail when one of `s11`, `s22`
    /// exceeds `β`: for `T = [[0, 1], [1, 0]]` and `A = diag(2.1i, 0)` both
    /// eigenvalues of `T + A` are purely imaginary.
    pub fn strip(&self) -> StripResult {
        StripResult { lo: -self.beta_plus, hi: self.beta_plus, open: true }
    }

    /// Radius of the disk about the origin that is free of `σ(T + sA)`.
    pub fn disk_radius(&self) -> f64 {
        self.beta_plus
    }
}

/// `β⊕ = √(β² + ((s11 − s22)/2)²) − (s11 + s22)/2` for off-diagonal `T` with
/// symmetric gap `(−β, β)` and block-diagonal `A`.
pub fn odd_symmetric_gap(bb: DiagBounds, beta: f64) -> Result<OddGap> {
    DiagBounds::new(bb.a11, bb.a22, bb.b11, bb.b22)?;
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(invalid(format!("beta must be positive, got {beta}")));
    }
    if bb.b11 * bb.b22 >= 1.0 {
        return Err(not_applicable(format!("b11*b22 = {} is not < 1", bb.b11 * bb.b22)));
    }
    let s11 = bb.a11.hypot(bb.b11 * beta);
    let s22 = bb.a22.hypot(bb.b22 * beta);
    if s11 * s22 >= beta * beta {
        return Err(not_applicable(format!(
            "s11*s22 = {} is not below beta^2 = {}",
            s11 * s22,
            beta * beta
        )));
    }
    let beta_plus = beta.hypot(0.5 * (s11 - s22)) - 0.5 * (s11 + s22);
    Ok(OddGap { beta, s11, s22, beta_plus })
}
