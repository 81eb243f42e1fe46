//! Seeded construction of `(T, A)` pairs with prescribed structure.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use gapcert_core::enclosures::IsolatedEigSpec;
use gapcert_core::structured::{BlockMinima, DiagBounds, OffDiagBounds};
use gapcert_core::{Gap, QuadBound};

use crate::error::{LabError, Result};
use crate::linalg::{c, diag, measure_relative, CMatrix};

pub const MIN_DIM: usize = 2;
pub const MAX_DIM: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Structure {
    /// Dense non-Hermitian `A`.
    None,
    /// Hermitian `A`.
    Symmetric,
    /// `A` off-diagonal with respect to the spectral split at a gap containing 0.
    Offdiag,
    /// `T ≥ 0` block diagonal, `A` off-diagonal.
    Even,
    /// `T` off-diagonal with a symmetric gap, `A` block diagonal.
    DiagBlocks,
    /// `T` has an isolated eigenvalue of multiplicity `m` inside a gap.
    Isolated,
}

impl Structure {
    pub const ALL: [Structure; 6] = [
        Structure::None,
        Structure::Symmetric,
        Structure::Offdiag,
        Structure::Even,
        Structure::DiagBlocks,
        Structure::Isolated,
    ];
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceSpec {
    pub dim: usize,
    pub structure: Structure,
    /// Target value of the structure's governing condition, e.g.
    /// `(√(a²+b²α²) + √(a²+b²β²))/(β − α)`; below one the enclosure is open.
    #[serde(alias = "magnitude", default = "default_ratio")]
    pub ratio: f64,
    /// Gap `(α, β)` of `T`; drawn at random when absent.
    #[serde(default)]
    pub gap: Option<[f64; 2]>,
    /// Build `A` so that the enclosure boundary is attained.
    #[serde(default)]
    pub tight: bool,
    /// Isolated structure only: Hermitian `A`.
    #[serde(default)]
    pub hermitian: bool,
    /// Isolated structure only: multiplicity of the isolated eigenvalue.
    #[serde(default)]
    pub mult: Option<usize>,
}

fn default_ratio() -> f64 {
    0.7
}

impl InstanceSpec {
    pub fn new(dim: usize, structure: Structure, ratio: f64) -> Self {
        Self { dim, structure, ratio, gap: None, tight: false, hermitian: false, mult: None }
    }
}

/// Relative-bound constants of `A` with respect to `T`, measured exactly.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Constants {
    pub quad: QuadBound,
    #[serde(default)]
    pub offdiag: Option<OffDiagBounds>,
    #[serde(default)]
    pub diag: Option<DiagBounds>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixInstance {
    pub seed: u64,
    pub structure: Structure,
    pub tight: bool,
    #[serde(with = "matrix_serde")]
    pub t: CMatrix,
    #[serde(with = "matrix_serde")]
    pub a: CMatrix,
    /// Number of leading basis vectors spanning the first block.
    pub block_split: Option<usize>,
    /// The gap the instance was scaled against.
    pub gap: Option<Gap>,
    pub isolated: Option<IsolatedEigSpec>,
    pub minima: Option<BlockMinima>,
    /// Half-width of the symmetric gap of an off-diagonal `T`.
    pub odd_beta: Option<f64>,
    pub hermitian: bool,
    pub constants: Constants,
    /// Value of the governing condition after scaling.
    pub ratio: f64,
}

impl MatrixInstance {
    pub fn dim(&self) -> usize {
        self.t.nrows()
    }

    /// Shape, finiteness and self-adjointness of `T`, for instances read from disk.
    pub fn validate(&self) -> Result<()> {
        let n = self.t.nrows();
        if n == 0 || !self.t.is_square() || self.a.shape() != (n, n) {
            return Err(LabError::InvalidParameter(format!(
                "t and a must be nonempty square matrices of equal size, got {:?} and {:?}",
                self.t.shape(),
                self.a.shape()
            )));
        }
        if self.t.iter().chain(self.a.iter()).any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(LabError::InvalidParameter("matrix entries must be finite".into()));
        }
        if !crate::linalg::is_hermitian(&self.t, 1e-12) {
            return Err(LabError::InvalidParameter("t must be Hermitian".into()));
        }
        Ok(())
    }

    /// `T + sA`.
    pub fn perturbed(&self, s: f64) -> CMatrix {
        &self.t + &self.a * c(s, 0.0)
    }

    /// Eigenvalues of `T`, sorted.
    pub fn spectrum_t(&self) -> Vec<f64> {
        crate::linalg::eig_hermitian(&self.t)
    }
}

/// Complex matrices as row lists of `[re, im]` pairs.
pub mod matrix_serde {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(m: &CMatrix, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<[f64; 2]>> =
            (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect()).collect();
        rows.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<CMatrix, D::Error> {
        let rows = Vec::<Vec<[f64; 2]>>::deserialize(d)?;
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(serde::de::Error::custom("matrix must be square"));
        }
        Ok(DMatrix::from_fn(n, n, |i, j| Complex64::new(rows[i][j][0], rows[i][j][1])))
    }
}

fn gaussian_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> CMatrix {
    let scale = 1.0 / ((2 * rows.max(cols)) as f64).sqrt();
    DMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        c(re * scale, im * scale)
    })
}

fn hermitian_matrix(rng: &mut ChaCha8Rng, n: usize) -> CMatrix {
    let g = gaussian_matrix(rng, n, n);
    (&g + g.adjoint()) * c(0.5, 0.0)
}

/// Block matrix `[[a11, a12], [a21, a22]]`.
fn blocks(a11: &CMatrix, a12: &CMatrix, a21: &CMatrix, a22: &CMatrix) -> CMatrix {
    let (k, l) = (a11.nrows(), a22.nrows());
    let mut m = CMatrix::zeros(k + l, k + l);
    m.view_mut((0, 0), (k, k)).copy_from(a11);
    m.view_mut((0, k), (k, l)).copy_from(a12);
    m.view_mut((k, 0), (l, k)).copy_from(a21);
    m.view_mut((k, k), (l, l)).copy_from(a22);
    m
}

/// Smallest `t` with `f(t) ≥ target` for a nondecreasing continuous `f`.
fn solve_scale(target: f64, f: impl Fn(f64) -> f64) -> Result<f64> {
    if f(0.0) >= target {
        return Ok(0.0);
    }
    let mut hi = 1.0;
    let mut doublings = 0;
    while f(hi) < target {
        hi *= 2.0;
        doublings += 1;
        if doublings > 200 {
            return Err(LabError::InvalidParameter(format!("target ratio {target} is not reachable")));
        }
    }
    let mut lo = 0.0;
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Eigenvalues `≤ alpha` and `≥ beta`, both endpoints attained.
fn sample_outside(rng: &mut ChaCha8Rng, n_left: usize, n_right: usize, alpha: f64, beta: f64) -> (Vec<f64>, Vec<f64>) {
    let spread = rng.random_range(1.0..10.0);
    let mut left: Vec<f64> = (1..n_left).map(|_| alpha - rng.random_range(0.0..spread)).collect();
    left.push(alpha);
    let mut right = vec![beta];
    right.extend((1..n_right).map(|_| beta + rng.random_range(0.0..spread)));
    left.sort_by(f64::total_cmp);
    right.sort_by(f64::total_cmp);
    (left, right)
}

fn random_gap(rng: &mut ChaCha8Rng, containing_zero: bool) -> Gap {
    if containing_zero {
        Gap { alpha: -rng.random_range(0.2..4.0), beta: rng.random_range(0.2..4.0) }
    } else {
        let alpha = rng.random_range(-5.0..5.0);
        let len = rng.random_range(1.0..6.0);
        if rng.random_bool(0.25) {
            // symmetric about the origin
            Gap { alpha: -0.5 * len, beta: 0.5 * len }
        } else {
            Gap { alpha, beta: alpha + len }
        }
    }
}

fn gap_ratio(q: QuadBound, g: Gap) -> f64 {
    (q.shift(g.alpha) + q.shift(g.beta)) / g.length()
}

/// A `b` small enough that the ratio at `a = 0` stays below half the target.
fn admissible_b(rng: &mut ChaCha8Rng, target: f64, points: &[(f64, f64)]) -> f64 {
    let cap = points
        .iter()
        .map(|&(x, y)| (y - x) / (x.abs() + y.abs()).max(1e-300))
        .fold(f64::INFINITY, f64::min);
    rng.random_range(0.0..1.0) * (0.5 * target * cap).min(0.9)
}

fn check_spec(spec: &InstanceSpec) -> Result<()> {
    if !(MIN_DIM..=MAX_DIM).contains(&spec.dim) {
        return Err(LabError::InvalidParameter(format!("dim must lie in [{MIN_DIM}, {MAX_DIM}], got {}", spec.dim)));
    }
    if !(spec.ratio.is_finite() && spec.ratio > 0.0) {
        return Err(LabError::InvalidParameter(format!("ratio must be positive, got {}", spec.ratio)));
    }
    if let Some([a, b]) = spec.gap {
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(LabError::InvalidParameter(format!("gap needs alpha < beta, got ({a}, {b})")));
        }
    }
    let need = match spec.structure {
        Structure::DiagBlocks => 2,
        Structure::Isolated => 2 + spec.mult.unwrap_or(1),
        _ => 2,
    };
    if spec.dim < need {
        return Err(LabError::InvalidParameter(format!("{:?} needs dim >= {need}", spec.structure)));
    }
    if spec.structure == Structure::DiagBlocks && spec.dim % 2 == 1 {
        return Err(LabError::InvalidParameter("diag-blocks needs an even dimension".into()));
    }
    if let Some(m) = spec.mult {
        if m == 0 {
            return Err(LabError::InvalidParameter("multiplicity must be positive".into()));
        }
    }
    Ok(())
}

/// Builds the instance described by `spec`; identical seeds give identical instances.
pub fn gen_instance(spec: &InstanceSpec, seed: u64) -> Result<MatrixInstance> {
    check_spec(spec)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match spec.structure {
        Structure::None | Structure::Symmetric => gen_plain(spec, seed, &mut rng),
        Structure::Offdiag => gen_offdiag(spec, seed, &mut rng),
        Structure::Even => gen_even(spec, seed, &mut rng),
        Structure::DiagBlocks => gen_odd(spec, seed, &mut rng),
        Structure::Isolated => gen_isolated(spec, seed, &mut rng),
    }
}

fn base(seed: u64, spec: &InstanceSpec, t: CMatrix, a: CMatrix, quad: QuadBound, ratio: f64) -> MatrixInstance {
    MatrixInstance {
        seed,
        structure: spec.structure,
        tight: spec.tight,
        t,
        a,
        block_split: None,
        gap: None,
        isolated: None,
        minima: None,
        odd_beta: None,
        hermitian: false,
        constants: Constants { quad, offdiag: None, diag: None },
        ratio,
    }
}

fn gen_plain(spec: &InstanceSpec, seed: u64, rng: &mut ChaCha8Rng) -> Result<MatrixInstance> {
    let n = spec.dim;
    let g = match spec.gap {
        Some([alpha, beta]) => Gap::new(alpha, beta)?,
        None => random_gap(rng, false),
    };
    // dim = 2 keeps exactly the endpoints
    let n_left = if n == 2 { 1 } else { rng.random_range(1..n) };
    let (left, right) = sample_outside(rng, n_left, n - n_left, g.alpha, g.beta);
    let spectrum: Vec<f64> = left.iter().chain(&right).copied().collect();
    let t = diag(&spectrum);
    let b = admissible_b(rng, spec.ratio, &[(g.alpha, g.beta)]);
    let hermitian = spec.structure == Structure::Symmetric;

    let (a, quad) = if spec.tight {
        // A = diag(±√(a² + b²t²)) moves α and β exactly onto the strip edges
        let target = spec.ratio;
        let a0 = solve_scale(target, |x| gap_ratio(QuadBound { a: x, b }, g))?;
        let q = QuadBound { a: a0, b };
        let entries: Vec<f64> =
            spectrum.iter().map(|&x| if x <= g.alpha { q.shift(x) } else { -q.shift(x) }).collect();
        let a = diag(&entries);
        let measured = measure_relative(&a, &t, b);
        (a, QuadBound { a: measured, b })
    } else {
        let a0 = if hermitian { hermitian_matrix(rng, n) } else { gaussian_matrix(rng, n, n) };
        let ratio_at = |s: f64| gap_ratio(QuadBound { a: measure_relative(&(&a0 * c(s, 0.0)), &t, b), b }, g);
        let s = solve_scale(spec.ratio, ratio_at)?;
        let a = &a0 * c(s, 0.0);
        let measured = measure_relative(&a, &t, b);
        (a, QuadBound { a: measured, b })
    };
    let ratio = gap_ratio(quad, g);
    let mut inst = base(seed, spec, t, a, quad, ratio);
    inst.gap = Some(g);
    inst.hermitian = hermitian;
    Ok(inst)
}

fn offdiag_ratio(bb: &OffDiagBounds, g: Gap) -> f64 {
    let p = bb.a12.hypot(bb.b12 * g.beta) * bb.a21.hypot(bb.b21 * g.alpha);
    let half = 0.5 * g.length();
    p / (half * half)
}

fn gen_offdiag(spec: &InstanceSpec, seed: u64, rng: &mut ChaCha8Rng) -> Result<MatrixInstance> {
    let n = spec.dim;
    let g = match spec.gap {
        Some([alpha, beta]) => {
            let g = Gap::new(alpha, beta)?;
            if !g.contains(0.0) {
                return Err(LabError::InvalidParameter("offdiag instances need a gap containing 0".into()));
            }
            g
        }
        None => random_gap(rng, true),
    };
    let k = if n == 2 { 1 } else { rng.random_range(1..n) };
    let (left, right) = sample_outside(rng, k, n - k, g.alpha, g.beta);
    let (t11, t22) = (diag(&left), diag(&right));
    let t = blocks(&t11, &CMatrix::zeros(k, n - k), &CMatrix::zeros(n - k, k), &t22);

    let (a12, a21, b12, b21) = if spec.tight {
        // couple the eigenvectors at α and β with x·y = −P
        let half = 0.5 * g.length();
        let p = spec.ratio * half * half;
        let mut a12 = CMatrix::zeros(k, n - k);
        let mut a21 = CMatrix::zeros(n - k, k);
        a12[(k - 1, 0)] = c(p.sqrt(), 0.0);
        a21[(0, k - 1)] = c(-p.sqrt(), 0.0);
        (a12, a21, 0.0, 0.0)
    } else {
        let b12 = rng.random_range(0.0..0.5);
        let b21 = rng.random_range(0.0..0.5);
        let x0 = gaussian_matrix(rng, k, n - k);
        let y0 = gaussian_matrix(rng, n - k, k);
        let bounds_at = |s: f64| OffDiagBounds {
            a12: measure_relative(&(&x0 * c(s, 0.0)), &t22, b12),
            a21: measure_relative(&(&y0 * c(s, 0.0)), &t11, b21),
            b12,
            b21,
        };
        let s = solve_scale(spec.ratio, |s| offdiag_ratio(&bounds_at(s), g))?;
        (&x0 * c(s, 0.0), &y0 * c(s, 0.0), b12, b21)
    };
    let bb = OffDiagBounds {
        a12: measure_relative(&a12, &t22, b12),
        a21: measure_relative(&a21, &t11, b21),
        b12,
        b21,
    };
    let a = blocks(&CMatrix::zeros(k, k), &a12, &a21, &CMatrix::zeros(n - k, n - k));
    let b = rng.random_range(0.0..0.5);
    let quad = QuadBound { a: measure_relative(&a, &t, b), b };
    let mut inst = base(seed, spec, t, a, quad, offdiag_ratio(&bb, g));
    inst.gap = Some(g);
    inst.block_split = Some(k);
    inst.constants.offdiag = Some(bb);
    Ok(inst)
}

fn even_coupling(bb: &OffDiagBounds, m: &BlockMinima) -> f64 {
    (bb.a12.hypot(bb.b12 * m.beta2) * bb.a21.hypot(bb.b21 * m.beta1)).sqrt()
}

fn gen_even(spec: &InstanceSpec, seed: u64, rng: &mut ChaCha8Rng) -> Result<MatrixInstance> {
    let n = spec.dim;
    let k = if n == 2 { 1 } else { rng.random_range(1..n) };
    let beta1 = rng.random_range(0.0..5.0);
    let beta2 = if rng.random_bool(0.2) { 0.0 } else { rng.random_range(0.0..5.0) };
    let mins = BlockMinima { beta1, beta2 };
    let spread = rng.random_range(1.0..10.0);
    let mut d1 = vec![beta1];
    d1.extend((1..k).map(|_| beta1 + rng.random_range(0.0..spread)));
    let mut d2 = vec![beta2];
    d2.extend((1..n - k).map(|_| beta2 + rng.random_range(0.0..spread)));
    let (t11, t22) = (diag(&d1), diag(&d2));
    let t = blocks(&t11, &CMatrix::zeros(k, n - k), &CMatrix::zeros(n - k, k), &t22);
    let scale = beta1.max(beta2).max(1.0);

    let (a12, a21, b12, b21) = if spec.tight {
        // [[β1, g], [g, β2]] on the minimal eigenvectors attains the bound
        let gc = spec.ratio * scale;
        let mut a12 = CMatrix::zeros(k, n - k);
        let mut a21 = CMatrix::zeros(n - k, k);
        a12[(0, 0)] = c(gc, 0.0);
        a21[(0, 0)] = c(gc, 0.0);
        (a12, a21, 0.0, 0.0)
    } else {
        let b12 = rng.random_range(0.0..0.25);
        let b21 = rng.random_range(0.0..0.25);
        let x0 = gaussian_matrix(rng, k, n - k);
        let y0 = gaussian_matrix(rng, n - k, k);
        let coupling_at = |s: f64| {
            let bb = OffDiagBounds {
                a12: measure_relative(&(&x0 * c(s, 0.0)), &t22, b12),
                a21: measure_relative(&(&y0 * c(s, 0.0)), &t11, b21),
                b12,
                b21,
            };
            even_coupling(&bb, &mins) / scale
        };
        let s = solve_scale(spec.ratio, coupling_at)?;
        (&x0 * c(s, 0.0), &y0 * c(s, 0.0), b12, b21)
    };
    let bb = OffDiagBounds {
        a12: measure_relative(&a12, &t22, b12),
        a21: measure_relative(&a21, &t11, b21),
        b12,
        b21,
    };
    let a = blocks(&CMatrix::zeros(k, k), &a12, &a21, &CMatrix::zeros(n - k, n - k));
    let b = rng.random_range(0.0..0.5);
    let quad = QuadBound { a: measure_relative(&a, &t, b), b };
    let ratio = even_coupling(&bb, &mins) / scale;
    let mut inst = base(seed, spec, t, a, quad, ratio);
    inst.block_split = Some(k);
    inst.minima = Some(mins);
    inst.constants.offdiag = Some(bb);
    Ok(inst)
}

fn odd_ratio(d: &DiagBounds, beta: f64) -> f64 {
    d.a11.hypot(d.b11 * beta) * d.a22.hypot(d.b22 * beta) / (beta * beta)
}

fn gen_odd(spec: &InstanceSpec, seed: u64, rng: &mut ChaCha8Rng) -> Result<MatrixInstance> {
    let n = spec.dim;
    let k = n / 2;
    let beta = match spec.gap {
        Some([alpha, beta]) if (alpha + beta).abs() <= 1e-12 * beta.abs() && beta > 0.0 => beta,
        Some(_) => return Err(LabError::InvalidParameter("diag-blocks needs a gap (-beta, beta)".into())),
        None => rng.random_range(0.5..5.0),
    };
    let spread = rng.random_range(1.0..10.0);
    let mut d = vec![beta];
    d.extend((1..k).map(|_| beta + rng.random_range(0.0..spread)));
    let dm = diag(&d);
    let zero = CMatrix::zeros(k, k);
    let t = blocks(&zero, &dm, &dm, &zero);
    // block scales differ by a log-uniform factor in [1/4, 4]
    let imbalance = rng.random_range(-(2f64.ln())..2f64.ln()).exp();

    let (a11, a22, b11, b22) = if spec.tight {
        let prod = spec.ratio * beta * beta;
        let (s1, s2) = (prod.sqrt() * imbalance, prod.sqrt() / imbalance);
        let mut a11 = CMatrix::zeros(k, k);
        let mut a22 = CMatrix::zeros(k, k);
        a11[(0, 0)] = c(-s1, 0.0);
        a22[(0, 0)] = c(-s2, 0.0);
        (a11, a22, 0.0, 0.0)
    } else {
        let tilt = rng.random_range(-(3f64.ln())..3f64.ln()).exp();
        let b11 = rng.random_range(0.0..0.5) * tilt;
        let b22 = rng.random_range(0.0..0.5) / tilt;
        let x0 = gaussian_matrix(rng, k, k) * c(imbalance, 0.0);
        let y0 = gaussian_matrix(rng, k, k) * c(1.0 / imbalance, 0.0);
        let bounds_at = |s: f64| DiagBounds {
            a11: measure_relative(&(&x0 * c(s, 0.0)), &dm, b11),
            a22: measure_relative(&(&y0 * c(s, 0.0)), &dm, b22),
            b11,
            b22,
        };
        let s = solve_scale(spec.ratio, |s| odd_ratio(&bounds_at(s), beta))?;
        (&x0 * c(s, 0.0), &y0 * c(s, 0.0), b11, b22)
    };
    // ‖A11x‖ is measured against ‖T12* x‖ = ‖Dx‖, and likewise for A22
    let db = DiagBounds { a11: measure_relative(&a11, &dm, b11), a22: measure_relative(&a22, &dm, b22), b11, b22 };
    let a = blocks(&a11, &CMatrix::zeros(k, k), &CMatrix::zeros(k, k), &a22);
    let b = rng.random_range(0.0..0.5);
    let quad = QuadBound { a: measure_relative(&a, &t, b), b };
    let mut inst = base(seed, spec, t, a, quad, odd_ratio(&db, beta));
    inst.gap = Some(Gap { alpha: -beta, beta });
    inst.block_split = Some(k);
    inst.odd_beta = Some(beta);
    inst.constants.diag = Some(db);
    Ok(inst)
}

fn isolation_ratio(q: QuadBound, iso: &IsolatedEigSpec) -> f64 {
    let s = q.shift(iso.lambda);
    let below = (q.shift(iso.alpha) + s) / (iso.lambda - iso.alpha);
    let above = (s + q.shift(iso.beta)) / (iso.beta - iso.lambda);
    below.max(above)
}

fn gen_isolated(spec: &InstanceSpec, seed: u64, rng: &mut ChaCha8Rng) -> Result<MatrixInstance> {
    let n = spec.dim;
    let m = spec.mult.unwrap_or_else(|| rng.random_range(1..=3usize.min(n - 2)));
    let g = match spec.gap {
        Some([alpha, beta]) => Gap::new(alpha, beta)?,
        None => {
            let alpha = rng.random_range(-5.0..5.0);
            Gap { alpha, beta: alpha + rng.random_range(2.0..8.0) }
        }
    };
    let lambda = g.alpha + g.length() * rng.random_range(0.3..0.7);
    let iso = IsolatedEigSpec::new(lambda, g.alpha, g.beta, m)?;
    let rest = n - m;
    let n_left = if rest == 2 { 1 } else { rng.random_range(1..rest) };
    let (left, right) = sample_outside(rng, n_left, rest - n_left, g.alpha, g.beta);
    let mut spectrum = left;
    spectrum.extend(std::iter::repeat_n(lambda, m));
    spectrum.extend(right);
    let t = diag(&spectrum);
    let b = admissible_b(rng, spec.ratio, &[(g.alpha, lambda), (lambda, g.beta)]);
    let a0 = if spec.hermitian { hermitian_matrix(rng, n) } else { gaussian_matrix(rng, n, n) };
    let ratio_at = |s: f64| isolation_ratio(QuadBound { a: measure_relative(&(&a0 * c(s, 0.0)), &t, b), b }, &iso);
    let s = solve_scale(spec.ratio, ratio_at)?;
    let a = &a0 * c(s, 0.0);
    let quad = QuadBound { a: measure_relative(&a, &t, b), b };
    let ratio = isolation_ratio(quad, &iso);
    let mut inst = base(seed, spec, t, a, quad, ratio);
    inst.gap = Some(g);
    inst.isolated = Some(iso);
    inst.hermitian = spec.hermitian;
    Ok(inst)
}
