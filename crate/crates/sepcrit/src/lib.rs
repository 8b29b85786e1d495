//! Numerical toolkit for bipartite entanglement detection.
//!
//! Implements and cross-checks the standard computable separability
//! criteria on dense complex matrices:
//!
//! * **PPT** — positivity of the partial transpose;
//! * **CCN / realignment** — the operator Schmidt coefficient sum
//!   `sum_k lambda_k`, equivalently the trace norm of the realigned
//!   matrix, exceeds 1 only for entangled states;
//! * **CCN witness** — `W = 1 - sum_k G^A_k x G^B_k`, built either from
//!   the Schmidt operators or from the SVD of the realigned matrix;
//! * **LURs** — local uncertainty relations over local orthogonal
//!   observables (LOOs), a nonlinear strengthening that detects every
//!   CCN-detected state and more, including PPT bound entanglement;
//! * **nonlinear witnesses** — Jamiolkowski-based quadratic improvements
//!   of the CCN witness.
//!
//! The `sepcrit` binary exposes `check`, `scan` and `demo` subcommands;
//! `demo` reproduces the reference detection thresholds (noisy singlet:
//! CCN 0.292, LUR 0.250; Tiles family: CCN 0.8897, LUR 0.8885).
//!
//! ```
//! use sepcrit::criteria::{ccn_check, lur_detect, ppt_check};
//! use sepcrit::states;
//! use sepcrit::TOL_DETECT;
//!
//! # fn main() -> sepcrit::Result<()> {
//! let rho = states::noisy_singlet(0.28)?;
//! assert!(ppt_check(&rho, TOL_DETECT)?.detected); // entangled for any p > 0
//! assert!(!ccn_check(&rho, TOL_DETECT)?.detected); // CCN onset is 0.292
//! assert!(lur_detect(&rho, TOL_DETECT)?.detected); // the LUR still sees it
//! # Ok(())
//! # }
//! ```

pub mod criteria;
pub mod demo;
pub mod error;
pub mod io;
mod jacobi;
pub mod loo_basis;
pub mod nonlinear_witness;
pub mod operator_algebra;
pub mod scan;
pub mod schmidt_realign;
pub mod states;

pub use crate::criteria::{Criterion, CriterionReport, Witness, WitnessOrigin, TOL_DETECT};
pub use crate::error::{Error, Result};
pub use crate::loo_basis::LooBasis;
pub use crate::operator_algebra::{
    CMatrix, CVector, DensityMatrix, Observable, Subsystem, Tolerances,
};
pub use crate::scan::{ScanCriterion, ScanResult};
pub use crate::schmidt_realign::{CoefficientMatrix, OperatorSchmidt};
pub use crate::states::StateFamily;
