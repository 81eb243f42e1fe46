//! Certified spectral enclosures for non-symmetric, relatively bounded
//! perturbations `T + A` of a self-adjoint operator `T`.
//!
//! Every routine here is a pure closed-form evaluation. The perturbation is
//! described only through its relative-boundedness constants, either in the
//! quadratic form `‖Ax‖² ≤ a²‖x‖² + b²‖Tx‖²` ([`QuadBound`]) or the linear
//! form `‖Ax‖ ≤ a'‖x‖ + b'‖Tx‖` ([`LinBound`]).
//!
//! * [`enclosures`]: hyperbolic enclosure, stable spectral free strips,
//!   resolvent estimates, sector covers and isolated eigenvalue strips.
//! * [`sequences`]: criteria for infinitely many spectral gaps.
//! * [`structured`]: symmetric and block-structured perturbations.
//! * [`applications`]: Dirac, periodic-manifold and two-channel presets.
//! * [`region`]: boundary polylines of the certified regions.

pub mod applications;
pub mod enclosures;
mod error;
pub mod region;
pub mod sequences;
pub mod structured;
mod types;

pub use error::{Error, Result};
pub use types::{ComplexPoint, Disk, Gap, LinBound, QuadBound, RelativeBound, StripResult};

/// Relative slack used when the library itself compares two algebraically
/// equivalent expressions.
pub const ALGEBRAIC_TOL: f64 = 1e-12;
