//! Shared fixtures for the benchmark suite.

use leaky_gap_core::geometry::{build_curve, Curve, CurveSpec};

pub fn unit_circle(n: usize) -> Curve {
    build_curve(&CurveSpec::circle(1.0), n).expect("unit circle")
}

pub fn segment(n: usize) -> Curve {
    build_curve(&CurveSpec::segment([-1.0, 0.0], [1.0, 0.0]), n).expect("segment")
}
