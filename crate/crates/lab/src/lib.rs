//! Finite-dimensional oracle for the enclosures of `gapcert-core`.
//!
//! Instances pair a self-adjoint `T` with a perturbation `A` whose
//! relative-bound constants are measured exactly. Every certified region is
//! then compared against eigenvalues of `T + sA` on a homotopy grid and
//! against resolvent norms on sample grids.

mod error;
pub mod instance;
pub mod linalg;
pub mod suite;
pub mod verify;

pub use error::{LabError, Result};
pub use instance::{gen_instance, InstanceSpec, MatrixInstance, Structure};
pub use linalg::{eig, measure_quad_bound, numrange_extremes, resolvent_norm, CMatrix};
pub use suite::{run_suite, SuiteKind, SuiteReport};
pub use verify::{verify_instance, CheckResult, VerificationReport, VerifyOptions};
