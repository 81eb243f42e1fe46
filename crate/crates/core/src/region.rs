//! Boundary polylines of the certified regions, for plotting.
//!
//! Every segment carries exactly `resolution` points. Regions that reach
//! infinity are cut off at a [`ClipBox`].

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::applications::{dirac2d_envelope, dirac3d_coulomb, CoulombSpec, DiracSpec};
use crate::enclosures::hyperbola_height;
use crate::error::{invalid, Result};
use crate::types::{check_finite, QuadBound};

/// The rectangle `|Re z| ≤ re`, `|Im z| ≤ im`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClipBox {
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "region", rename_all = "kebab-case")]
pub enum RegionSpec {
    /// `|Im z|² ≤ (a² + b²|Re z|²)/(1 − b²)`.
    Hyperbola { a: f64, b: f64 },
    /// The vertical strip `lo < Re z < hi`.
    Strip { lo: f64, hi: f64 },
    /// Disk of radius `r_eps` together with the double sector of half angle `half_angle`.
    Sector { r_eps: f64, half_angle: f64 },
    Coulomb { c1: f64, c2: f64, m: f64 },
    /// Envelope curves for several exponents `p` at a common `‖V‖_p`,
    /// in the quadrant `Re z, Im z ≥ 0`.
    Dirac { v_norm: f64, ps: Vec<f64> },
}

impl RegionSpec {
    /// Whether the region needs a clip box to have a finite boundary.
    pub fn is_unbounded(&self) -> bool {
        !matches!(self, RegionSpec::Dirac { .. })
    }

    /// Largest absolute value among the numeric inputs.
    pub fn magnitude(&self) -> f64 {
        let vals: Vec<f64> = match self {
            RegionSpec::Hyperbola { a, b } => vec![*a, *b],
            RegionSpec::Strip { lo, hi } => vec![*lo, *hi],
            RegionSpec::Sector { r_eps, half_angle } => vec![*r_eps, *half_angle],
            RegionSpec::Coulomb { c1, c2, m } => vec![*c1, *c2, *m],
            RegionSpec::Dirac { v_norm, .. } => vec![*v_norm],
        };
        vals.into_iter().map(f64::abs).fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub id: usize,
    pub label: String,
    /// `(re, im)` pairs.
    pub points: Vec<[f64; 2]>,
}

fn linspace(a: f64, b: f64, n: usize) -> impl Iterator<Item = f64> {
    let step = (b - a) / (n - 1) as f64;
    (0..n).map(move |k| if k + 1 == n { b } else { a + step * k as f64 })
}

fn line(label: &str, from: [f64; 2], to: [f64; 2], n: usize) -> (String, Vec<[f64; 2]>) {
    let pts = linspace(0.0, 1.0, n)
        .map(|t| [from[0] + t * (to[0] - from[0]), from[1] + t * (to[1] - from[1])])
        .collect();
    (label.to_string(), pts)
}

fn curve(label: &str, res: &[f64], f: impl Fn(f64) -> f64) -> (String, Vec<[f64; 2]>) {
    (label.to_string(), res.iter().map(|&x| [x, f(x)]).collect())
}

/// Boundary polylines of `spec`, `resolution` points per segment.
pub fn sample_region(spec: &RegionSpec, resolution: usize, clip: Option<ClipBox>) -> Result<Vec<Segment>> {
    if resolution < 2 {
        return Err(invalid(format!("resolution must be at least 2, got {resolution}")));
    }
    let clip = match (clip, spec.is_unbounded()) {
        (Some(c), _) => {
            check_finite("clip.re", c.re)?;
            check_finite("clip.im", c.im)?;
            if !(c.re > 0.0 && c.im > 0.0) {
                return Err(invalid("clip box half-widths must be positive"));
            }
            Some(c)
        }
        (None, true) => return Err(invalid("unbounded region needs a clipping box")),
        (None, false) => None,
    };
    let n = resolution;
    let raw: Vec<(String, Vec<[f64; 2]>)> = match spec {
        RegionSpec::Hyperbola { a, b } => {
            let q = QuadBound::new(*a, *b)?;
            q.require_subunit()?;
            let c = clip.expect("checked above");
            let xs: Vec<f64> = linspace(-c.re, c.re, n).collect();
            let h = |x: f64| hyperbola_height(q, x).expect("subunit checked").min(c.im);
            vec![curve("upper", &xs, h), curve("lower", &xs, |x| -h(x))]
        }
        RegionSpec::Strip { lo, hi } => {
            check_finite("lo", *lo)?;
            check_finite("hi", *hi)?;
            if lo >= hi {
                return Err(invalid(format!("strip needs lo < hi, got ({lo}, {hi})")));
            }
            let c = clip.expect("checked above");
            let (lo, hi) = (lo.max(-c.re), hi.min(c.re));
            vec![
                line("left", [lo, -c.im], [lo, c.im], n),
                line("top", [lo, c.im], [hi, c.im], n),
                line("right", [hi, c.im], [hi, -c.im], n),
                line("bottom", [hi, -c.im], [lo, -c.im], n),
            ]
        }
        RegionSpec::Sector { r_eps, half_angle } => {
            check_finite("r_eps", *r_eps)?;
            if *r_eps < 0.0 || !(*half_angle > 0.0 && *half_angle < 0.5 * PI) {
                return Err(invalid("sector needs r_eps >= 0 and half_angle in (0, pi/2)"));
            }
            let c = clip.expect("checked above");
            let circle = (
                "disk".to_string(),
                linspace(0.0, 2.0 * PI, n).map(|t| [r_eps * t.cos(), r_eps * t.sin()]).collect(),
            );
            let mut segs = vec![circle];
            for (label, angle) in [
                ("ray+", *half_angle),
                ("ray-", -*half_angle),
                ("ray-left+", PI - *half_angle),
                ("ray-left-", PI + *half_angle),
            ] {
                let (dx, dy) = (angle.cos(), angle.sin());
                // distance to the clip box along the ray
                let reach = (c.re / dx.abs()).min(c.im / dy.abs()).max(*r_eps);
                segs.push(line(label, [r_eps * dx, r_eps * dy], [reach * dx, reach * dy], n));
            }
            segs
        }
        RegionSpec::Coulomb { c1, c2, m } => {
            let r = dirac3d_coulomb(CoulombSpec { c1: *c1, c2: *c2, m: *m })?;
            let c = clip.expect("checked above");
            let edge = r.gap_half_width;
            let far = c.re.max(edge);
            let xs: Vec<f64> = linspace(edge, far, n).collect();
            let neg: Vec<f64> = xs.iter().map(|x| -x).collect();
            let h = |x: f64| r.height(x).min(c.im);
            let he = h(edge);
            vec![
                curve("right-upper", &xs, h),
                curve("right-lower", &xs, |x| -h(x)),
                curve("left-upper", &neg, h),
                curve("left-lower", &neg, |x| -h(x)),
                line("right-edge", [edge, -he], [edge, he], n),
                line("left-edge", [-edge, -he], [-edge, he], n),
            ]
        }
        RegionSpec::Dirac { v_norm, ps } => {
            if ps.is_empty() {
                return Err(invalid("need at least one exponent p"));
            }
            let mut segs = Vec::with_capacity(ps.len());
            for &p in ps {
                let env = dirac2d_envelope(DiracSpec::new(*v_norm, p)?, n, None)?;
                let pts = env.points.iter().map(|pt| [pt.re, pt.im]);
                let pts: Vec<[f64; 2]> = match clip {
                    Some(c) => pts.map(|[x, y]| [x.min(c.re), y.min(c.im)]).collect(),
                    None => pts.collect(),
                };
                segs.push((format!("p={p}"), pts));
            }
            segs
        }
    };
    Ok(raw
        .into_iter()
        .enumerate()
        .map(|(id, (label, points))| Segment { id, label, points })
        .collect())
}
