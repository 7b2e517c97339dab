//! Shared numerical kernels: dense symmetric eigensolver, tridiagonal QL,
//! deflated Lanczos, bracketing root finder, periodic quadrature with
//! logarithmic-kernel corrections, and adaptive 1D integration.

mod dense;
mod lanczos;
pub(crate) mod par;
mod quad;
mod roots;
mod tridiag;
mod trig;

pub use dense::{symmetric_eigen, DMat, SymmetricEigenResult};
pub use lanczos::deflated_lanczos_topk;
pub use quad::{adaptive_integrate, gauss7, periodic_log_quadrature, PeriodicLogWeights};
pub use roots::bracket_root;
pub use tridiag::tridiag_eigen;
pub use trig::TrigInterp;
