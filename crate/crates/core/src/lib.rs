//! Real generalized eigenvalues (H-, Z-, D- and general `B`-eigenvalues) of
//! even-order symmetric tensors through unconstrained variational
//! objectives, plus a multi-start positive semidefiniteness check.
//!
//! The main pieces:
//!
//! * [`tensor`]: dense storage and the contractions `A x^m`, `A x^{m-1}`;
//! * [`metric`]: the positive definite metric `B` in closed or dense form;
//! * [`variational`]: the objectives `f1`, `f2` and their shifted versions;
//! * [`bfgs`]: the quasi-Newton minimizer;
//! * [`psd`]: the positive semidefiniteness decision procedure;
//! * [`sshopm`]: the shifted power method used as a baseline;
//! * [`generators`], [`bench`]: test families and the experiment harness;
//! * [`tns`], [`cli`]: the on-disk tensor format and command-line front end.

pub mod bench;
pub mod bfgs;
pub mod cli;
pub mod error;
pub mod generators;
mod linalg;
pub mod metric;
pub mod psd;
pub mod sshopm;
pub mod tensor;
pub mod tns;
pub mod variational;

pub use bfgs::{minimize, normalized_random_start, SolveReport, SolverConfig, Termination};
pub use error::{Error, Result};
pub use metric::{BOperator, MetricTag};
pub use psd::{psd_check, Decision, PsdConfig, PsdMetric, PsdVerdict};
pub use sshopm::{sshopm_run, SshopmConfig};
pub use tensor::{residual, symmetrize, Eigenpair, SymmetricTensor};
pub use variational::{Flavor, Objective, ZeroBand};
