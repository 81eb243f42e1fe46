//! Enclosures for a single spectral gap and the accompanying resolvent
//! estimates.
//!
//! Strict inequalities are evaluated with plain floating-point comparison.
//! Callers that sample boundaries should add their own margin.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, not_applicable, Error, Result};
use crate::types::{check_finite, check_nonnegative, ComplexPoint, Disk, Gap, LinBound, QuadBound, RelativeBound, StripResult};

/// Converts linear constants into quadratic ones:
/// `a² = a'²(1 + eps)`, `b² = b'²(1 + 1/eps)`.
pub fn quad_from_linear(lin: LinBound, eps: f64) -> Result<QuadBound> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(invalid(format!("eps must be positive and finite, got {eps}")));
    }
    Ok(QuadBound {
        a: lin.a * (1.0 + eps).sqrt(),
        b: lin.b * (1.0 + 1.0 / eps).sqrt(),
    })
}

/// `a' + b'|x|`, the infimum over `eps > 0` of the shift `√(a² + b²x²)`
/// produced by [`quad_from_linear`]. For `a' > 0` and `b'|x| > 0` it is
/// attained at [`optimal_conversion_eps`]; for `a' = 0` it is only approached.
pub fn optimal_shift_linear(lin: LinBound, x: f64) -> f64 {
    lin.shift(x)
}

/// Minimiser `eps = b'|x| / a'` of the converted shift, when it exists.
pub fn optimal_conversion_eps(lin: LinBound, x: f64) -> Option<f64> {
    let num = lin.b * x.abs();
    (lin.a > 0.0 && num > 0.0).then(|| num / lin.a)
}

/// Height `√((a² + b²re²)/(1 − b²))` of the hyperbolic enclosure above `re`.
pub fn hyperbola_height(q: QuadBound, re: f64) -> Result<f64> {
    q.require_subunit()?;
    Ok(((q.a * q.a + q.b * q.b * re * re) / (1.0 - q.b * q.b)).sqrt())
}

/// True iff `|Im z|² > (a² + b²|Re z|²)/(1 − b²)`, i.e. `z` is certified to
/// lie in the resolvent set of `T + A`.
pub fn hyperbola_excluded(q: QuadBound, z: ComplexPoint) -> Result<bool> {
    q.require_subunit()?;
    let rhs = (q.a * q.a + q.b * q.b * z.re * z.re) / (1.0 - q.b * q.b);
    Ok(z.im * z.im > rhs)
}

/// `√(a² + b²α²) + √(a² + b²β²) < β − α`.
pub fn gap_condition(q: QuadBound, g: Gap) -> Result<bool> {
    q.require_subunit()?;
    Ok(q.shift(g.alpha) + q.shift(g.beta) < g.length())
}

/// Stable spectral free strip `(α + √(a²+b²α²), β − √(a²+b²β²)) + iℝ`.
pub fn perturbed_strip(q: QuadBound, g: Gap) -> Result<StripResult> {
    let open = gap_condition(q, g)?;
    Ok(StripResult {
        lo: g.alpha + q.shift(g.alpha),
        hi: g.beta - q.shift(g.beta),
        open,
    })
}

/// The strip in terms of linear constants, with `a' + b'|x|` in place of
/// `√(a² + b²x²)`.
pub fn perturbed_strip_linear(lin: LinBound, g: Gap) -> StripResult {
    let (sa, sb) = (lin.shift(g.alpha), lin.shift(g.beta));
    StripResult {
        lo: g.alpha + sa,
        hi: g.beta - sb,
        open: sa + sb < g.length(),
    }
}

/// For symmetric `A`: each of the two disks around the gap endpoints
/// contains at least one point of `σ(T + A)`. Symmetry is the caller's
/// responsibility.
pub fn lower_semicont_balls(q: QuadBound, g: Gap) -> Result<[Disk; 2]> {
    q.require_subunit()?;
    Ok([
        Disk { center: g.alpha, radius: q.shift(g.alpha) },
        Disk { center: g.beta, radius: q.shift(g.beta) },
    ])
}

/// `‖(T + A − z)⁻¹‖ ≤ 1/(|Im z| − √(a² + b²|z|²))` off the hyperbolas.
pub fn resolvent_bound_offreal(q: QuadBound, z: ComplexPoint) -> Result<f64> {
    if !hyperbola_excluded(q, z)? {
        return Err(Error::BoundNotValid(format!("z = {z} is not outside the hyperbolic enclosure")));
    }
    let denom = z.im.abs() - q.a.hypot(q.b * z.norm());
    if denom > 0.0 {
        Ok(1.0 / denom)
    } else {
        Err(Error::BoundNotValid(format!("z = {z} is on the enclosure boundary within rounding")))
    }
}

/// `max{b, √(a²+b²α²)/(μ−α), √(a²+b²β²)/(β−μ)}`, the bound on
/// `‖A(T − μ)⁻¹‖` for `μ` inside the gap.
pub fn relative_resolvent_factor(q: QuadBound, g: Gap, mu: f64) -> f64 {
    let left = q.shift(g.alpha) / (mu - g.alpha);
    let right = q.shift(g.beta) / (g.beta - mu);
    q.b.max(left).max(right)
}

fn strip_point(q: QuadBound, g: Gap, z: ComplexPoint) -> Result<StripResult> {
    let strip = perturbed_strip(q, g)?;
    if !strip.open {
        return Err(Error::BoundNotValid("gap condition fails; no free strip".into()));
    }
    if !strip.contains_re(z.re) {
        return Err(Error::BoundNotValid(format!(
            "Re z = {} is outside the free strip ({}, {})",
            z.re, strip.lo, strip.hi
        )));
    }
    Ok(strip)
}

/// Resolvent estimate inside the free strip:
/// `1/√(min{μ−α, β−μ}² + ν²) · 1/(1 − max{b, ·, ·})` with `z = μ + iν`.
pub fn resolvent_bound_strip(q: QuadBound, g: Gap, z: ComplexPoint) -> Result<f64> {
    strip_point(q, g, z)?;
    let mu = z.re;
    let (da, db) = (mu - g.alpha, g.beta - mu);
    let dist = da.min(db).hypot(z.im);
    let (sa, sb) = (q.shift(g.alpha), q.shift(g.beta));
    let amp = if q.b >= sa / da && q.b >= sb / db {
        1.0 / (1.0 - q.b)
    } else if sa / da >= sb / db {
        amplification(da, sa)?
    } else {
        amplification(db, sb)?
    };
    Ok(1.0 / dist * amp)
}

/// `d/(d − s)`, i.e. `1/(1 − s/d)` without the extra rounding of the quotient.
fn amplification(d: f64, shift: f64) -> Result<f64> {
    let room = d - shift;
    if room > 0.0 {
        Ok(d / room)
    } else {
        Err(Error::BoundNotValid("point lies on the strip boundary within rounding".into()))
    }
}

/// Crossover point `ζ` of the piecewise estimate, where the two endpoint
/// ratios `√(a²+b²α²)/(μ−α)` and `√(a²+b²β²)/(β−μ)` coincide. For the
/// zero perturbation it is the midpoint of the gap.
pub fn crossover_point(q: QuadBound, g: Gap) -> f64 {
    let (sa, sb) = (q.shift(g.alpha), q.shift(g.beta));
    let total = sa + sb;
    if total == 0.0 {
        return g.midpoint();
    }
    let zeta = g.alpha + g.length() / total * sa;
    debug_assert!({
        let other = g.beta - g.length() / total * sb;
        (zeta - other).abs() <= crate::ALGEBRAIC_TOL * g.alpha.abs().max(g.beta.abs()).max(g.length())
    });
    zeta
}

/// Piecewise form of [`resolvent_bound_strip`] that uses the distance to the
/// nearest gap endpoint and whichever endpoint ratio dominates at `Re z`.
pub fn resolvent_bound_strip_refined(q: QuadBound, g: Gap, z: ComplexPoint) -> Result<f64> {
    let strip = strip_point(q, g, z)?;
    let (alpha, beta, mu, nu) = (g.alpha, g.beta, z.re, z.im);
    let zeta = crossover_point(q, g);
    let mid = g.midpoint();

    let from_alpha = 1.0 / (mu - alpha).hypot(nu);
    let from_beta = 1.0 / (beta - mu).hypot(nu);
    let left_ratio = amplification(mu - alpha, q.shift(alpha))?;
    let right_ratio = amplification(beta - mu, q.shift(beta))?;

    let bound = if alpha.abs() <= beta.abs() {
        if mu <= zeta {
            from_alpha * left_ratio
        } else if mu <= mid.min(strip.hi) {
            from_alpha * right_ratio
        } else {
            from_beta * right_ratio
        }
    } else if mu <= strip.lo.max(mid) {
        from_alpha * left_ratio
    } else if mu <= zeta {
        from_beta * left_ratio
    } else {
        from_beta * right_ratio
    };
    Ok(bound)
}

/// Free strip `(−β_{T+A}, β_{T+A}) + iℝ` for a gap `(−β, β)` symmetric to the origin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SymmetricGap {
    pub beta: f64,
    pub beta_perturbed: f64,
    pub open: bool,
}

impl SymmetricGap {
    pub fn strip(&self) -> StripResult {
        StripResult { lo: -self.beta_perturbed, hi: self.beta_perturbed, open: self.open }
    }

    /// `1/√((β − |Re z|)² + |Im z|²) · (β − |Re z|)/(β_{T+A} − |Re z|)`.
    pub fn resolvent_bound(&self, z: ComplexPoint) -> Result<f64> {
        let x = z.re.abs();
        if !self.open || x >= self.beta_perturbed {
            return Err(Error::BoundNotValid(format!(
                "|Re z| = {x} is outside the symmetric free strip (open = {}, half-width {})",
                self.open, self.beta_perturbed
            )));
        }
        let d = self.beta - x;
        Ok(1.0 / d.hypot(z.im) * d / (self.beta_perturbed - x))
    }
}

/// Symmetric spectral gap `(−β, β)`: open iff `√(a² + b²β²) < β`.
pub fn symmetric_gap_strip(q: QuadBound, beta: f64) -> Result<SymmetricGap> {
    q.require_subunit()?;
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(invalid(format!("beta must be positive, got {beta}")));
    }
    let shift = q.shift(beta);
    Ok(SymmetricGap { beta, beta_perturbed: beta - shift, open: shift < beta })
}

/// Lower bound on `Re σ(T + A)` when `T ≥ beta`: `beta − √(a² + b²β²)` or
/// `beta − (a' + b'|beta|)`.
pub fn semibounded_lower_bound(bound: RelativeBound, beta: f64) -> Result<f64> {
    check_finite("beta", beta)?;
    match bound {
        RelativeBound::Quad(q) => {
            q.require_subunit()?;
            Ok(beta - q.shift(beta))
        }
        RelativeBound::Linear(lin) => Ok(beta - lin.shift(beta)),
    }
}

/// Ball-plus-double-sector cover `σ(T + A) ⊂ K(0, r_eps) ∪ Σ_eps ∪ (−Σ_eps)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GkCover {
    /// Radius below which the hyperbolic enclosure is used directly.
    pub r0: f64,
    pub r_eps: f64,
    pub half_angle: f64,
}

impl GkCover {
    pub fn contains(&self, z: ComplexPoint) -> bool {
        if z.norm() <= self.r_eps {
            return true;
        }
        let angle = z.im.abs().atan2(z.re.abs());
        angle <= self.half_angle
    }
}

/// Sector cover for a family of constants `eps ↦ (a_eps, b_eps)` with
/// `b_eps²/(1 − b_eps²) < eps²/2`, as available for perturbations of
/// relative bound zero.
pub fn gk_sector_cover<F>(family: F, eps: f64) -> Result<GkCover>
where
    F: Fn(f64) -> QuadBound,
{
    if !(eps > 0.0 && eps < std::f64::consts::FRAC_PI_2) {
        return Err(invalid(format!("half angle eps must lie in (0, pi/2), got {eps}")));
    }
    let q = family(eps);
    check_nonnegative("a_eps", q.a)?;
    check_nonnegative("b_eps", q.b)?;
    q.require_subunit()?;
    let b2 = q.b * q.b;
    let denom = 1.0 - b2;
    if b2 / denom >= 0.5 * eps * eps {
        return Err(not_applicable(format!(
            "b_eps = {} violates b²/(1-b²) < eps²/2 for eps = {eps}",
            q.b
        )));
    }
    let r0_sq = q.a * q.a / denom * 2.0 / (eps * eps);
    let r_eps_sq = r0_sq + (q.a * q.a + b2 * r0_sq) / denom;
    Ok(GkCover { r0: r0_sq.sqrt(), r_eps: r_eps_sq.sqrt(), half_angle: eps })
}

/// Optimal linear constants for a `p`-subordinate perturbation,
/// `‖Ax‖ ≤ c‖x‖^{1−p}‖Tx‖^p`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Subordination {
    pub c: f64,
    pub p: f64,
}

impl Subordination {
    /// Smallest `a(b)` with `c·u^{1−p}v^p ≤ a(b)·u + b·v` for all `u, v ≥ 0`:
    /// `a(b) = (1−p)·p^{p/(1−p)}·c^{1/(1−p)}·b^{−p/(1−p)}`.
    pub fn a_of_b(&self, b: f64) -> Result<f64> {
        if self.p == 0.0 {
            return Ok(self.c);
        }
        if !(b > 0.0 && b.is_finite()) {
            return Err(invalid(format!("b must be positive for p > 0, got {b}")));
        }
        let e = 1.0 / (1.0 - self.p);
        Ok((1.0 - self.p) * self.p.powf(self.p * e) * self.c.powf(e) * b.powf(-self.p * e))
    }

    pub fn linear_bound(&self, b: f64) -> Result<LinBound> {
        Ok(LinBound { a: self.a_of_b(b)?, b })
    }
}

pub fn subordination_family(c: f64, p: f64) -> Result<Subordination> {
    check_nonnegative("c", c)?;
    if !(0.0..1.0).contains(&p) {
        return Err(invalid(format!("subordination exponent p must lie in [0, 1), got {p}")));
    }
    Ok(Subordination { c, p })
}

/// Sector cover for a `p`-subordinate perturbation. The linear constants are
/// converted with `eps = 1` (`a = √2·a'`, `b = √2·b'`) and `b'` is taken at
/// half of the largest value admitted by the smallness condition.
pub fn subordinate_sector_cover(sub: Subordination, eps: f64) -> Result<GkCover> {
    // b²/(1-b²) < eps²/2  <=>  b² < eps²/(2 + eps²)
    let b_max = (eps * eps / (2.0 + eps * eps)).sqrt();
    let b_lin = 0.5 * b_max / std::f64::consts::SQRT_2;
    let q = quad_from_linear(sub.linear_bound(b_lin)?, 1.0)?;
    gk_sector_cover(|_| q, eps)
}

/// An isolated eigenvalue `lambda` of `T` with multiplicity `mult` and
/// nearest other spectral points `alpha < lambda < beta`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IsolatedEigSpec {
    pub lambda: f64,
    pub alpha: f64,
    pub beta: f64,
    pub mult: usize,
}

impl IsolatedEigSpec {
    pub fn new(lambda: f64, alpha: f64, beta: f64, mult: usize) -> Result<Self> {
        for (n, v) in [("lambda", lambda), ("alpha", alpha), ("beta", beta)] {
            check_finite(n, v)?;
        }
        if !(alpha < lambda && lambda < beta) {
            return Err(invalid(format!("need alpha < lambda < beta, got {alpha}, {lambda}, {beta}")));
        }
        Ok(Self { lambda, alpha, beta, mult })
    }
}

/// Certificate that the strip `(lo, hi) + iℝ` contains exactly `count`
/// eigenvalues of `T + A`, counted with algebraic multiplicity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EigenvalueStrip {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

pub fn isolated_eigenvalue_strip(q: QuadBound, spec: IsolatedEigSpec) -> Result<EigenvalueStrip> {
    q.require_subunit()?;
    let IsolatedEigSpec { lambda, alpha, beta, mult } = spec;
    let s = q.shift(lambda);
    let below = q.shift(alpha) + s < lambda - alpha;
    let above = s + q.shift(beta) < beta - lambda;
    if !(below && above) {
        return Err(not_applicable(format!(
            "isolation condition fails (below: {below}, above: {above})"
        )));
    }
    Ok(EigenvalueStrip { lo: lambda - s, hi: lambda + s, count: mult })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn q(a: f64, b: f64) -> QuadBound {
        QuadBound::new(a, b).unwrap()
    }
    fn gap(a: f64, b: f64) -> Gap {
        Gap::new(a, b).unwrap()
    }
    fn z(re: f64, im: f64) -> ComplexPoint {
        ComplexPoint::new(re, im)
    }

    #[test]
    fn linear_to_quadratic_conversion() {
        let r = quad_from_linear(LinBound { a: 1.0, b: 0.0 }, 1.0).unwrap();
        assert_relative_eq!(r.a, 2f64.sqrt());
        assert_eq!(r.b, 0.0);

        let r = quad_from_linear(LinBound { a: 3.0, b: 0.5 }, 2.0 / 3.0).unwrap();
        assert_relative_eq!(r.a, 15f64.sqrt(), max_relative = 1e-15);
        assert_relative_eq!(r.b, 0.625f64.sqrt(), max_relative = 1e-15);
        assert_relative_eq!(r.shift(4.0), 5.0, max_relative = 1e-14);

        let r = quad_from_linear(LinBound { a: 0.0, b: 0.5 }, 1e12).unwrap();
        assert!(r.b > 0.5 && r.b - 0.5 < 1e-12);

        assert!(matches!(quad_from_linear(LinBound { a: 1.0, b: 1.0 }, 0.0), Err(Error::InvalidParameter(_))));
        assert!(quad_from_linear(LinBound { a: 1.0, b: 1.0 }, -2.0).is_err());
    }

    #[test]
    fn optimal_shift_matches_scan() {
        let lin = LinBound { a: 3.0, b: 0.5 };
        assert_eq!(optimal_shift_linear(lin, 4.0), 5.0);
        // scan over eps in (0, 100]
        let best = (1..=1_000_000)
            .map(|k| k as f64 * 1e-4)
            .map(|e| quad_from_linear(lin, e).unwrap().shift(4.0))
            .fold(f64::INFINITY, f64::min);
        assert!((best - 5.0).abs() < 1e-8, "scan minimum {best}");
        assert_relative_eq!(optimal_conversion_eps(lin, 4.0).unwrap(), 2.0 / 3.0);

        assert_eq!(optimal_shift_linear(LinBound { a: 1.0, b: 0.0 }, 7.0), 1.0);
        assert_relative_eq!(optimal_shift_linear(LinBound { a: 0.0, b: 0.3 }, -2.0), 0.6);
        assert_eq!(optimal_conversion_eps(LinBound { a: 0.0, b: 0.3 }, -2.0), None);
    }

    #[test]
    fn hyperbola_examples() {
        assert!(hyperbola_excluded(q(1.0, 0.0), z(0.0, 2.0)).unwrap());
        assert!(hyperbola_excluded(q(0.0, 0.5), z(1.0, 1.0)).unwrap());
        assert!(!hyperbola_excluded(q(0.1, 0.1), z(5.0, 0.0)).unwrap());
        assert!(matches!(hyperbola_excluded(q(0.1, 1.0), z(0.0, 9.0)), Err(Error::NotApplicable(_))));
    }

    #[test]
    fn bounded_perturbation_degenerates_to_lines() {
        for &(a, re, im) in &[(1.0, 3.0, 1.0 + 1e-12), (1.0, -8.0, 0.999), (2.5, 0.0, -2.6)] {
            let ex = hyperbola_excluded(q(a, 0.0), z(re, im)).unwrap();
            assert_eq!(ex, im.abs() > a);
        }
    }

    #[test]
    fn gap_condition_examples() {
        assert!(gap_condition(q(1.0, 0.0), gap(0.0, 3.0)).unwrap());
        assert!(!gap_condition(q(2.0, 0.0), gap(0.0, 3.0)).unwrap());
        assert!(gap_condition(q(0.0, 0.0), gap(10.0, 10.5)).unwrap());
        assert!(gap_condition(q(0.0, 1.2), gap(0.0, 3.0)).is_err());
    }

    #[test]
    fn strip_examples() {
        assert_eq!(perturbed_strip(q(0.0, 0.0), gap(-1.0, 1.0)).unwrap(), StripResult { lo: -1.0, hi: 1.0, open: true });
        assert_eq!(perturbed_strip(q(1.0, 0.0), gap(0.0, 3.0)).unwrap(), StripResult { lo: 1.0, hi: 2.0, open: true });
        assert_eq!(perturbed_strip(q(2.0, 0.0), gap(0.0, 3.0)).unwrap(), StripResult { lo: 2.0, hi: 1.0, open: false });
    }

    #[test]
    fn linear_strip_examples() {
        let s = perturbed_strip_linear(LinBound { a: 0.0, b: 0.0 }, gap(-1.0, 1.0));
        assert_eq!(s, StripResult { lo: -1.0, hi: 1.0, open: true });
        let s = perturbed_strip_linear(LinBound { a: 1.0, b: 0.1 }, gap(0.0, 4.0));
        assert_relative_eq!(s.lo, 1.0);
        assert_relative_eq!(s.hi, 2.6, max_relative = 1e-15);
        assert!(s.open);
        assert!(!perturbed_strip_linear(LinBound { a: 3.0, b: 0.5 }, gap(-4.0, 4.0)).open);
    }

    #[test]
    fn ball_examples() {
        let [l, r] = lower_semicont_balls(q(0.0, 0.0), gap(-1.0, 2.0)).unwrap();
        assert_eq!((l.radius, r.radius), (0.0, 0.0));
        let [l, r] = lower_semicont_balls(q(0.5, 0.0), gap(0.0, 2.0)).unwrap();
        assert_eq!((l.center, l.radius, r.center, r.radius), (0.0, 0.5, 2.0, 0.5));
        let [l, r] = lower_semicont_balls(q(0.0, 0.25), gap(-4.0, 4.0)).unwrap();
        assert_eq!((l.radius, r.radius), (1.0, 1.0));
    }

    #[test]
    fn offreal_resolvent_examples() {
        assert_relative_eq!(resolvent_bound_offreal(q(1.0, 0.0), z(0.0, 3.0)).unwrap(), 0.5);
        for nu in [0.3, -2.0, 7.5] {
            assert_relative_eq!(resolvent_bound_offreal(q(0.0, 0.0), z(0.0, nu)).unwrap(), 1.0 / nu.abs());
        }
        assert_relative_eq!(resolvent_bound_offreal(q(0.0, 0.5), z(0.0, 2.0)).unwrap(), 1.0);
        assert!(matches!(resolvent_bound_offreal(q(1.0, 0.0), z(0.0, 0.5)), Err(Error::BoundNotValid(_))));
    }

    #[test]
    fn strip_resolvent_examples() {
        assert_relative_eq!(resolvent_bound_strip(q(0.0, 0.0), gap(-1.0, 1.0), z(0.0, 0.0)).unwrap(), 1.0);
        let at_real = resolvent_bound_strip(q(1.0, 0.0), gap(0.0, 4.0), z(2.0, 0.0)).unwrap();
        assert_relative_eq!(at_real, 1.0, max_relative = 1e-15);
        let off = resolvent_bound_strip(q(1.0, 0.0), gap(0.0, 4.0), z(2.0, 1.0)).unwrap();
        assert!(off < at_real);
        assert_relative_eq!(off, 2.0 / 5f64.sqrt(), max_relative = 1e-15);
        assert!(resolvent_bound_strip(q(1.0, 0.0), gap(0.0, 4.0), z(0.5, 0.0)).is_err());
        assert!(resolvent_bound_strip(q(2.0, 0.0), gap(0.0, 3.0), z(1.5, 0.0)).is_err());
    }

    #[test]
    fn crossover_point_forms() {
        assert_eq!(crossover_point(q(0.3, 0.2), gap(-2.0, 2.0)), 0.0);
        assert_eq!(crossover_point(q(0.0, 0.0), gap(1.0, 3.0)), 2.0);
        let g = gap(-1.0, 5.0);
        let qq = q(0.4, 0.1);
        let zeta = crossover_point(qq, g);
        let other = g.beta - g.length() / (qq.shift(g.alpha) + qq.shift(g.beta)) * qq.shift(g.beta);
        assert!((zeta - other).abs() < 1e-12);
        // the endpoint ratios coincide at zeta
        let left = qq.shift(g.alpha) / (zeta - g.alpha);
        let right = qq.shift(g.beta) / (g.beta - zeta);
        assert_relative_eq!(left, right, max_relative = 1e-12);
    }

    #[test]
    fn refined_first_branch() {
        // alpha = 0, beta = 4, a = 1: strip (1, 3), zeta = 2
        let b = resolvent_bound_strip_refined(q(1.0, 0.0), gap(0.0, 4.0), z(1.5, 0.0)).unwrap();
        assert_relative_eq!(b, 1.0 / 1.5 * 1.5 / 0.5, max_relative = 1e-15);
        let plain = resolvent_bound_strip(q(1.0, 0.0), gap(0.0, 4.0), z(1.5, 0.0)).unwrap();
        assert!(b <= plain * (1.0 + 1e-12));
    }

    #[test]
    fn refined_never_exceeds_plain_on_grid() {
        let cases = [
            (q(1.0, 0.0), gap(0.0, 4.0)),
            (q(0.2, 0.1), gap(-6.0, 1.0)),
            (q(0.5, 0.05), gap(-1.0, 9.0)),
            (q(0.0, 0.3), gap(2.0, 7.0)),
            (q(0.3, 0.3), gap(-3.0, -0.5)),
        ];
        for (qq, g) in cases {
            let s = perturbed_strip(qq, g).unwrap();
            assert!(s.open);
            for i in 1..60 {
                let re = s.lo + s.width() * i as f64 / 60.0;
                for j in -5..=5 {
                    let zz = z(re, j as f64 * 0.4);
                    let r = resolvent_bound_strip_refined(qq, g, zz).unwrap();
                    let p = resolvent_bound_strip(qq, g, zz).unwrap();
                    assert!(r <= p * (1.0 + 1e-12), "refined {r} > plain {p} at {zz}");
                }
            }
        }
    }

    #[test]
    fn symmetric_gap_examples() {
        let sg = symmetric_gap_strip(q(0.0, 0.0), 1.0).unwrap();
        assert_eq!(sg.beta_perturbed, 1.0);
        let zz = z(0.3, 0.4);
        assert_relative_eq!(sg.resolvent_bound(zz).unwrap(), 1.0 / (0.7f64).hypot(0.4));
        assert_relative_eq!(symmetric_gap_strip(q(0.6, 0.0), 1.0).unwrap().beta_perturbed, 0.4);
        assert_eq!(symmetric_gap_strip(q(0.0, 0.5), 2.0).unwrap().beta_perturbed, 1.0);
        assert!(!symmetric_gap_strip(q(1.5, 0.0), 1.0).unwrap().open);
        assert!(symmetric_gap_strip(q(0.0, 1.0), 1.0).is_err());
    }

    #[test]
    fn symmetric_gap_matches_general_strip() {
        let qq = q(0.3, 0.2);
        let sg = symmetric_gap_strip(qq, 2.0).unwrap();
        let gs = perturbed_strip(qq, gap(-2.0, 2.0)).unwrap();
        assert_eq!(sg.strip(), gs);
        let zz = z(0.7, -0.4);
        let via_strip = resolvent_bound_strip_refined(qq, gap(-2.0, 2.0), zz).unwrap();
        assert_relative_eq!(sg.resolvent_bound(zz).unwrap(), via_strip, max_relative = 1e-12);
    }

    #[test]
    fn semibounded_examples() {
        assert_eq!(semibounded_lower_bound(RelativeBound::Quad(q(0.0, 0.0)), 5.0).unwrap(), 5.0);
        let lin = RelativeBound::Linear(LinBound { a: 1.0, b: 0.5 });
        assert_eq!(semibounded_lower_bound(lin, 2.0).unwrap(), 0.0);
        assert_eq!(semibounded_lower_bound(RelativeBound::Quad(q(3.0, 0.0)), 1.0).unwrap(), -2.0);
        assert!(semibounded_lower_bound(RelativeBound::Quad(q(0.0, 1.0)), 1.0).is_err());
    }

    #[test]
    fn sector_cover_examples() {
        let c = gk_sector_cover(|_| q(1.0, 0.0), 1.0).unwrap();
        assert_relative_eq!(c.r0, 2f64.sqrt(), max_relative = 1e-15);
        assert_relative_eq!(c.r_eps, 3f64.sqrt(), max_relative = 1e-15);

        let c = gk_sector_cover(|_| q(0.0, 0.0), 0.5).unwrap();
        assert_eq!(c.r_eps, 0.0);
        assert!(c.contains(z(100.0, 40.0)));
        assert!(!c.contains(z(1.0, 1.0)));

        // r0² = 4/0.99 · 8, r² = r0² + (4 + 0.01 r0²)/0.99
        let c = gk_sector_cover(|_| q(2.0, 0.1), 0.5).unwrap();
        assert_relative_eq!(c.r_eps, 6.057_238_121_440_384, max_relative = 1e-12);

        assert!(matches!(gk_sector_cover(|_| q(1.0, 0.5), 0.5), Err(Error::NotApplicable(_))));
        assert!(gk_sector_cover(|_| q(1.0, 0.0), 0.0).is_err());
    }

    #[test]
    fn sector_cover_contains_hyperbolic_enclosure() {
        // points on the hyperbola boundary must be covered
        let qq = q(1.5, 0.2);
        let c = gk_sector_cover(|_| qq, 0.6).unwrap();
        for i in 0..400 {
            let re = -200.0 + i as f64;
            let h = hyperbola_height(qq, re).unwrap();
            assert!(c.contains(z(re, h * (1.0 - 1e-12))), "re = {re}");
        }
    }

    /// Brute-force maximum of `c·v^p − b·v` over a fine grid in `v`.
    fn subordination_oracle(c: f64, p: f64, b: f64) -> f64 {
        let v_star = (c * p / b).powf(1.0 / (1.0 - p));
        let mut best = 0.0f64;
        // log grid refined around the stationary point scale
        for k in 0..200_000 {
            let v = v_star * 10f64.powf(-3.0 + 6.0 * k as f64 / 200_000.0);
            best = best.max(c * v.powf(p) - b * v);
        }
        best
    }

    #[test]
    fn subordination_examples() {
        let s = subordination_family(1.0, 0.0).unwrap();
        assert_eq!(s.a_of_b(0.3).unwrap(), 1.0);
        let s = subordination_family(2.0, 0.5).unwrap();
        assert_relative_eq!(s.a_of_b(1.0).unwrap(), 1.0, max_relative = 1e-15);
        assert!(subordination_family(1.0, 1.0).is_err());
        assert!(subordination_family(-1.0, 0.5).is_err());
    }

    #[test]
    fn subordination_matches_brute_force() {
        for &(c, p, b) in &[(1.0, 0.3, 0.2), (2.0, 0.5, 1.0), (0.7, 0.8, 0.05), (3.0, 0.1, 2.0), (1.3, 0.65, 0.4)] {
            let closed = subordination_family(c, p).unwrap().a_of_b(b).unwrap();
            let brute = subordination_oracle(c, p, b);
            assert_relative_eq!(closed, brute, max_relative = 1e-8);
        }
    }

    #[test]
    fn subordinate_cover_is_valid() {
        let s = subordination_family(2.0, 0.5).unwrap();
        for eps in [0.1, 0.5, 1.2] {
            let c = subordinate_sector_cover(s, eps).unwrap();
            assert!(c.r_eps >= c.r0 && c.half_angle == eps);
        }
    }

    #[test]
    fn isolated_strip_examples() {
        let spec = IsolatedEigSpec::new(0.0, -2.0, 2.0, 1).unwrap();
        let s = isolated_eigenvalue_strip(q(0.1, 0.0), spec).unwrap();
        assert_eq!((s.lo, s.hi, s.count), (-0.1, 0.1, 1));

        // lambda = 0, a = 0: any b < 1 passes, strip collapses to the imaginary axis
        for b in [0.0, 0.5, 0.99] {
            let s = isolated_eigenvalue_strip(q(0.0, b), IsolatedEigSpec::new(0.0, -3.0, 1.0, 2).unwrap()).unwrap();
            assert_eq!((s.lo, s.hi), (0.0, 0.0));
        }

        let s = isolated_eigenvalue_strip(q(0.0, 0.0), IsolatedEigSpec::new(1.0, 0.0, 3.0, 3).unwrap()).unwrap();
        assert_eq!((s.lo, s.hi, s.count), (1.0, 1.0, 3));

        let bad = isolated_eigenvalue_strip(q(1.0, 0.0), IsolatedEigSpec::new(0.0, -1.5, 2.0, 1).unwrap());
        assert!(matches!(bad, Err(Error::NotApplicable(_))));
        assert!(IsolatedEigSpec::new(3.0, 0.0, 2.0, 1).is_err());
    }
}
