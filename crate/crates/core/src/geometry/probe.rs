//! Transversal segments through curve points. A probe carries the admissible
//! window: the arc radius `delta0` on which the chord-distance lower bound
//! holds, and the reach `b1 = M delta0 / 2` within which the logarithmic
//! distance integrals stay controlled.

use super::summary::injectivity_modulus;
use super::Curve;
use crate::error::{Error, Result};

/// Largest admissible tangency: probes must meet the curve at an angle of at
/// least pi/6, i.e. `|cos theta| <= sqrt(3)/2`.
pub const MAX_COS_THETA: f64 = 0.866_025_403_784_438_6;

#[derive(Debug, Clone, Copy)]
pub struct TransversalProbe {
    pub base_index: usize,
    pub base_point: [f64; 2],
    /// Unit direction of the segment.
    pub direction: [f64; 2],
    /// Intersection angle with the curve tangent.
    pub theta: f64,
    /// Effective half-length after clamping to `min{1, b1}`.
    pub half_length: f64,
    pub requested_half_length: f64,
    pub clamped: bool,
    pub delta0: f64,
    pub b1: f64,
}

/// `delta0 = min{L/2, (M / 2K) (1 - |cos theta|) / 2}`; the curvature term
/// is vacuous for straight curves (K = 0).
pub fn delta0_for(modulus: f64, max_curvature: f64, length: f64, cos_theta: f64) -> f64 {
    let half = 0.5 * length;
    if max_curvature <= 0.0 {
        half
    } else {
        half.min(modulus / (2.0 * max_curvature) * 0.5 * (1.0 - cos_theta.abs()))
    }
}

/// Builds the probe through `gamma(s_index)` along the curve normal
/// (`theta = pi/2`, the admissible angle closest to a right angle).
pub fn transversal_probe(curve: &Curve, index: usize, b: f64) -> Result<TransversalProbe> {
    if !(b > 0.0) {
        return Err(Error::Domain(format!("probe half-length must be positive, got {b}")));
    }
    if index >= curve.n_samples {
        return Err(Error::Domain(format!(
            "probe index {index} out of range (n = {})",
            curve.n_samples
        )));
    }
    let modulus = curve_modulus(curve)?;
    let k = curve.max_curvature();
    let theta = 0.5 * std::f64::consts::PI;
    let delta0 = delta0_for(modulus, k, curve.length, theta.cos());
    let b1 = 0.5 * modulus * delta0;
    let half_length = b.min(1.0).min(b1);
    Ok(TransversalProbe {
        base_index: index,
        base_point: curve.gamma[index],
        direction: curve.normal[index],
        theta,
        half_length,
        requested_half_length: b,
        clamped: half_length < b,
        delta0,
        b1,
    })
}

/// A probe direction at a prescribed intersection angle, used when sampling
/// admissible points for the gradient-bound checks. `theta` must satisfy
/// `|cos theta| <= sqrt(3)/2`.
pub fn probe_direction(curve: &Curve, index: usize, theta: f64) -> Result<[f64; 2]> {
    if theta.cos().abs() > MAX_COS_THETA + 1e-12 {
        return Err(Error::Domain(format!(
            "probe angle too tangential: |cos theta| = {:.4} > sqrt(3)/2",
            theta.cos().abs()
        )));
    }
    let t = curve.tangent[index];
    let n = curve.normal[index];
    let (s, c) = theta.sin_cos();
    Ok([c * t[0] + s * n[0], c * t[1] + s * n[1]])
}

pub(crate) fn curve_modulus(curve: &Curve) -> Result<f64> {
    if curve.closed {
        injectivity_modulus(curve, 0.5 * curve.length)
    } else {
        injectivity_modulus(curve, curve.length)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{build_curve, CurveSpec};

    #[test]
    fn unit_circle_probe() {
        let c = build_curve(&CurveSpec::circle(1.0), 256).unwrap();
        let p = transversal_probe(&c, 17, 1.0).unwrap();
        assert!((p.theta - 0.5 * std::f64::consts::PI).abs() < 1e-12);
        assert!((p.delta0 - 0.15915).abs() < 2e-4, "delta0 = {}", p.delta0);
        assert!((p.b1 - 0.05066).abs() < 2e-4, "b1 = {}", p.b1);
        assert!(p.clamped);
        assert_eq!(p.half_length, p.b1.min(1.0));
        // Direction is the outward or inward normal: orthogonal to tangent.
        let t = c.tangent[17];
        assert!((p.direction[0] * t[0] + p.direction[1] * t[1]).abs() < 1e-12);
    }

    #[test]
    fn segment_probe_has_half_length_window() {
        let c = build_curve(&CurveSpec::segment([-1.0, 0.0], [1.0, 0.0]), 64).unwrap();
        let p = transversal_probe(&c, 30, 0.2).unwrap();
        assert!((p.delta0 - 1.0).abs() < 1e-12, "K = 0 leaves delta0 = L/2");
        assert!((p.b1 - 0.5).abs() < 1e-12);
        assert!(!p.clamped);
        assert_eq!(p.half_length, 0.2);
    }

    #[test]
    fn worst_angle_window() {
        // delta0 at |cos theta| = sqrt(3)/2 on the unit circle.
        let c = build_curve(&CurveSpec::circle(1.0), 512).unwrap();
        let m = curve_modulus(&c).unwrap();
        let d0 = delta0_for(m, c.max_curvature(), c.length, MAX_COS_THETA);
        assert!((d0 - 0.021321).abs() < 5e-5, "{d0}");
        let b1 = 0.5 * m * d0;
        assert!((b1 - 0.006787).abs() < 2e-5, "{b1}");
    }

    #[test]
    fn rejects_tangential_probe_direction() {
        let c = build_curve(&CurveSpec::circle(1.0), 64).unwrap();
        assert!(probe_direction(&c, 0, 0.1).is_err());
        assert!(probe_direction(&c, 0, 1.2).is_ok());
    }
}
