use serde::{Deserialize, Serialize};

use crate::error::{invalid, not_applicable, Result};

/// A point of the complex plane.
pub type ComplexPoint = num_complex::Complex64;

/// Constants `(a, b)` with `‖Ax‖² ≤ a²‖x‖² + b²‖Tx‖²` for all `x ∈ D(T)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadBound {
    pub a: f64,
    pub b: f64,
}

impl QuadBound {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        check_nonnegative("a", a)?;
        check_nonnegative("b", b)?;
        Ok(Self { a, b })
    }

    /// The zero perturbation.
    pub const ZERO: QuadBound = QuadBound { a: 0.0, b: 0.0 };

    /// `√(a² + b²x²)`, the amount by which a spectral point `x` of `T` may move.
    pub fn shift(&self, x: f64) -> f64 {
        self.a.hypot(self.b * x)
    }

    /// Rejects `b ≥ 1`; every quadratic-form enclosure needs a relative bound below one.
    pub fn require_subunit(&self) -> Result<()> {
        if self.b < 1.0 {
            Ok(())
        } else {
            Err(not_applicable(format!("relative bound b = {} is not < 1", self.b)))
        }
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self { a: self.a * s, b: self.b * s }
    }
}

/// Constants `(a', b')` with `‖Ax‖ ≤ a'‖x‖ + b'‖Tx‖` for all `x ∈ D(T)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinBound {
    pub a: f64,
    pub b: f64,
}

impl LinBound {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        check_nonnegative("a'", a)?;
        check_nonnegative("b'", b)?;
        Ok(Self { a, b })
    }

    /// `a' + b'|x|`.
    pub fn shift(&self, x: f64) -> f64 {
        self.a + self.b * x.abs()
    }
}

/// Either form of relative-boundedness constants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "kebab-case")]
pub enum RelativeBound {
    Quad(QuadBound),
    Linear(LinBound),
}

/// A spectral gap `(alpha, beta)` of `T`: `σ(T) ∩ (alpha, beta) = ∅`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Gap {
    pub alpha: f64,
    pub beta: f64,
}

impl Gap {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha.is_finite() && beta.is_finite()) {
            return Err(invalid(format!("gap endpoints must be finite, got ({alpha}, {beta})")));
        }
        if alpha >= beta {
            return Err(invalid(format!("gap requires alpha < beta, got ({alpha}, {beta})")));
        }
        Ok(Self { alpha, beta })
    }

    pub fn length(&self) -> f64 {
        self.beta - self.alpha
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.alpha + self.beta)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.alpha < x && x < self.beta
    }
}

/// The perturbed interval `(lo, hi)`; when `open`, the vertical strip
/// `(lo, hi) + iℝ` is free of `σ(T + sA)` for every `s ∈ [0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StripResult {
    pub lo: f64,
    pub hi: f64,
    pub open: bool,
}

impl StripResult {
    /// Whether `re` lies strictly inside an open strip.
    pub fn contains_re(&self, re: f64) -> bool {
        self.open && self.lo < re && re < self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    /// The same strip with its width multiplied by `factor` about its centre.
    pub fn widened(&self, factor: f64) -> Self {
        let c = 0.5 * (self.lo + self.hi);
        let h = 0.5 * self.width() * factor;
        Self { lo: c - h, hi: c + h, open: self.open }
    }
}

/// Closed disk `{ z : |z − center| ≤ radius }` with real centre.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Disk {
    pub center: f64,
    pub radius: f64,
}

impl Disk {
    pub fn contains(&self, z: ComplexPoint) -> bool {
        (z - self.center).norm() <= self.radius
    }
}

pub(crate) fn check_nonnegative(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v >= 0.0 {
        Ok(())
    } else {
        Err(invalid(format!("{name} must be finite and >= 0, got {v}")))
    }
}

pub(crate) fn check_finite(name: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(invalid(format!("{name} must be finite, got {v}")))
    }
}
