//! Spectral solver for two-dimensional Schrödinger operators with an
//! attractive delta interaction supported on a finite planar curve.
//!
//! The negative eigenvalues `E = -kappa^2` of the Hamiltonian are computed
//! through the Birman-Schwinger boundary integral operator on the curve: a
//! Nyström discretization with logarithmic-singularity-corrected quadrature
//! produces the operator spectrum, and the bound states are the couplings at
//! which `alpha * lambda_j(kappa) = 1`. On top of the solver sits a
//! certificate engine that evaluates an explicit lower bound on the first
//! spectral gap `E1 - E0` in terms of curve geometry (length, diameter,
//! curvature, injectivity modulus) and checks it against the measured gap.
//!
//! Module map:
//! * [`geometry`] — curve construction, arc-length resampling, curvature,
//!   enclosing disk, injectivity modulus, transversal probes;
//! * [`specfun`] — Macdonald functions `K0`, `K1`, the free resolvent kernel
//!   and its gradient, kernel floor constants;
//! * [`numerics`] — dense symmetric eigensolvers, Lanczos, root bracketing,
//!   periodic log-kernel quadrature, adaptive integration;
//! * [`bs`] — the Birman-Schwinger discretization and bound-state solver;
//! * [`eigenfunction`] — eigenfunction reconstruction off the curve and the
//!   pointwise diagnostics (positivity floor, decay envelope, trace identity,
//!   norm inequalities);
//! * [`comparison1d`] — the strong-coupling comparison operator
//!   `-d²/ds² - curvature²/4` and Kirsch-Simon gap brackets;
//! * [`certificate`] — the constant chain, calibration of `eta0`/`beta0`,
//!   and the certified gap lower bound;
//! * [`fd`] — independent thin-well finite-difference oracle;
//! * [`report`] — deterministic JSON/CSV serialization.

pub mod bs;
pub mod certificate;
pub mod comparison1d;
pub mod eigenfunction;
pub mod error;
pub mod fd;
pub mod geometry;
pub mod numerics;
pub mod report;
pub mod specfun;

pub use bs::{BoundState, BsDiscretization, SpectralResult};
pub use certificate::{GapCertificate, GapConstants};
pub use comparison1d::ComparisonSpectrum;
pub use eigenfunction::{DecayEnvelope, FieldSample};
pub use error::{Error, Result};
pub use geometry::{Curve, CurveSpec, GeometrySummary, TransversalProbe};
