//! Seeded collections of instances and their merged reports.

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::instance::{gen_instance, InstanceSpec, MatrixInstance, Structure};
use crate::verify::{verify_instance, VerificationReport, VerifyOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SuiteKind {
    /// Mixed structures, dimensions 4 to 40, about one in ten tight.
    Standard,
    /// Isolated eigenvalues of multiplicity 1 to 3.
    Counting,
    /// Hermitian perturbations.
    Symmetric,
    /// Gap conditions violated on purpose; enclosures must close.
    Negative,
}

impl std::str::FromStr for SuiteKind {
    type Err = LabError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "standard" => Ok(Self::Standard),
            "counting" => Ok(Self::Counting),
            "symmetric" => Ok(Self::Symmetric),
            "negative" => Ok(Self::Negative),
            other => Err(LabError::InvalidParameter(format!(
                "unknown suite {other:?}, expected standard, counting, symmetric or negative"
            ))),
        }
    }
}

impl SuiteKind {
    pub fn default_size(self) -> usize {
        match self {
            SuiteKind::Standard => 500,
            _ => 100,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: SuiteKind,
    pub seed: u64,
    pub instances: usize,
    pub failed_instances: usize,
    pub reports: Vec<VerificationReport>,
}

impl SuiteReport {
    pub fn pass(&self) -> bool {
        self.failed_instances == 0
    }

    /// Whether any instance has a failing entry for `check`.
    pub fn any_failure(&self, check: &str) -> bool {
        self.reports.iter().any(|r| r.check(check).is_some_and(|c| !c.pass))
    }

    /// `instance,check,margin,pass` rows, one per check and instance.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let io = |e: csv::Error| LabError::NumericalFailure(format!("csv: {e}"));
        w.write_record(["instance", "check", "margin", "pass"]).map_err(io)?;
        for r in &self.reports {
            for c in &r.checks {
                let margin = c.margin.map(|m| m.to_string()).unwrap_or_default();
                w.write_record([r.seed.to_string(), c.check.clone(), margin, c.pass.to_string()])
                    .map_err(io)?;
            }
        }
        w.flush().map_err(|e| LabError::NumericalFailure(format!("csv: {e}")))?;
        Ok(())
    }
}

/// Seed of the `index`-th instance of a suite.
pub fn instance_seed(suite_seed: u64, index: usize) -> u64 {
    suite_seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(index as u64)
}

fn pick_structure(rng: &mut ChaCha8Rng) -> Structure {
    let r: f64 = rng.random();
    match r {
        r if r < 0.25 => Structure::None,
        r if r < 0.40 => Structure::Symmetric,
        r if r < 0.55 => Structure::Offdiag,
        r if r < 0.70 => Structure::Even,
        r if r < 0.85 => Structure::DiagBlocks,
        _ => Structure::Isolated,
    }
}

/// The instance specifications of a suite, in seed order.
pub fn suite_specs(kind: SuiteKind, n: usize, seed: u64) -> Vec<(InstanceSpec, u64)> {
    (0..n)
        .map(|i| {
            let s = instance_seed(seed, i);
            // the layout stream is separate from the instance stream
            let mut rng = ChaCha8Rng::seed_from_u64(s ^ 0x05EE_D0F5_111E);
            let mut dim = rng.random_range(4..=40usize);
            let ratio = rng.random_range(0.3..0.95);
            let spec = match kind {
                SuiteKind::Standard => {
                    let structure = pick_structure(&mut rng);
                    match structure {
                        Structure::DiagBlocks => dim -= dim % 2,
                        Structure::Isolated => dim = dim.max(5),
                        _ => {}
                    }
                    let mut spec = InstanceSpec::new(dim, structure, ratio);
                    spec.tight = structure != Structure::Isolated && rng.random_bool(0.1);
                    spec.hermitian = structure == Structure::Isolated && rng.random_bool(0.5);
                    spec
                }
                SuiteKind::Counting => {
                    let mut spec = InstanceSpec::new(dim.max(5), Structure::Isolated, ratio);
                    spec.mult = Some(1 + i % 3);
                    spec.hermitian = rng.random_bool(0.5);
                    spec
                }
                SuiteKind::Symmetric => {
                    let mut spec = InstanceSpec::new(dim, Structure::Symmetric, ratio);
                    spec.tight = rng.random_bool(0.1);
                    spec
                }
                SuiteKind::Negative => InstanceSpec::new(dim, Structure::None, rng.random_range(1.05..2.0)),
            };
            (spec, s)
        })
        .collect()
}

pub fn build_suite(kind: SuiteKind, n: usize, seed: u64) -> Result<Vec<MatrixInstance>> {
    suite_specs(kind, n, seed).par_iter().map(|(spec, s)| gen_instance(spec, *s)).collect()
}

/// Generates and verifies a suite; reports are in seed order.
pub fn run_suite(kind: SuiteKind, n: usize, seed: u64, opts: &VerifyOptions) -> Result<SuiteReport> {
    let reports: Vec<VerificationReport> = suite_specs(kind, n, seed)
        .par_iter()
        .map(|(spec, s)| verify_instance(&gen_instance(spec, *s)?, opts))
        .collect::<Result<_>>()?;
    let failed_instances = reports.iter().filter(|r| !r.pass).count();
    Ok(SuiteReport { suite: kind, seed, instances: n, failed_instances, reports })
}
