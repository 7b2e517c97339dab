//! Global geometric quantities of a curve: diameter, smallest enclosing
//! disk (inflated by 1 for the certificate's ball `B_R`), and the
//! injectivity modulus.

use super::Curve;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy)]
pub struct GeometrySummary {
    pub length: f64,
    /// Maximum curvature K over the fine sample table.
    pub max_curvature: f64,
    /// Largest pairwise distance between curve points.
    pub diameter: f64,
    /// Radius R of the smallest disk containing the 1-neighborhood hull:
    /// (smallest enclosing disk of the curve) + 1.
    pub enclosing_radius: f64,
    /// Center of that disk.
    pub center: [f64; 2],
    /// Injectivity modulus at separation L/2, minimized over the original
    /// and the half-period-shifted parameterization for closed curves.
    pub m_half: f64,
    /// Injectivity modulus over the full length (open curves); equals
    /// `m_half` for closed curves, where chordal arc distance caps at L/2.
    pub m_full: f64,
    pub closed: bool,
}

impl GeometrySummary {
    /// The modulus entering the gradient-bound constants: `M_gamma(L)` for
    /// open curves, the shifted-parameterization minimum at L/2 otherwise.
    pub fn modulus(&self) -> f64 {
        if self.closed {
            self.m_half
        } else {
            self.m_full
        }
    }
}

pub fn geometry_summary(curve: &Curve) -> GeometrySummary {
    let pts = &curve.gamma;
    let mut diameter = 0.0_f64;
    for i in 0..pts.len() {
        for j in (i + 1)..pts.len() {
            let d = dist(pts[i], pts[j]);
            if d > diameter {
                diameter = d;
            }
        }
    }
    let (center, disk_r) = smallest_enclosing_disk(pts);
    let m_half = injectivity_modulus(curve, 0.5 * curve.length).expect("valid half-length");
    let m_full = if curve.closed {
        m_half
    } else {
        injectivity_modulus(curve, curve.length).expect("valid full length")
    };
    GeometrySummary {
        length: curve.length,
        max_curvature: curve.max_curvature(),
        diameter,
        enclosing_radius: disk_r + 1.0,
        center,
        m_half,
        m_full,
        closed: curve.closed,
    }
}

/// Largest constant `M` with `M |s - s'| <= |gamma(s) - gamma(s')|` over all
/// sample pairs with arc separation at most `m`. Closed curves use the
/// chordal arc distance `min(|s - s'|, L - |s - s'|)`, which realizes the
/// minimum over the two parameterizations.
pub fn injectivity_modulus(curve: &Curve, m: f64) -> Result<f64> {
    let cap = if curve.closed { 0.5 * curve.length } else { curve.length };
    if !(m > 0.0) || m > curve.length {
        return Err(Error::Domain(format!(
            "injectivity modulus needs 0 < m <= L = {}, got {m}",
            curve.length
        )));
    }
    let m = m.min(cap);
    let n = curve.n_samples;
    let mut best = f64::INFINITY;
    for i in 0..n {
        for j in (i + 1)..n {
            let mut ds = curve.s[j] - curve.s[i];
            if curve.closed {
                ds = ds.min(curve.length - ds);
            }
            if ds <= 0.0 || ds > m {
                continue;
            }
            let ratio = dist(curve.gamma[i], curve.gamma[j]) / ds;
            if ratio < best {
                best = ratio;
            }
        }
    }
    Ok(best.min(1.0))
}

fn dist(a: [f64; 2], b: [f64; 2]) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt()
}

/// Welzl-type exact smallest enclosing disk of a point set.
pub fn smallest_enclosing_disk(points: &[[f64; 2]]) -> ([f64; 2], f64) {
    // Deterministic shuffle so the expected-linear behavior is reproducible.
    let mut idx: Vec<usize> = (0..points.len()).collect();
    let mut state = 0x853c49e6748fea9b_u64;
    for i in (1..idx.len()).rev() {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        let j = (state >> 33) as usize % (i + 1);
        idx.swap(i, j);
    }

    let mut center = points[idx[0]];
    let mut r2 = 0.0_f64;
    let inside = |c: [f64; 2], r2: f64, p: [f64; 2]| {
        (p[0] - c[0]).powi(2) + (p[1] - c[1]).powi(2) <= r2 * (1.0 + 1e-12) + 1e-300
    };

    for i in 1..idx.len() {
        let p = points[idx[i]];
        if inside(center, r2, p) {
            continue;
        }
        center = p;
        r2 = 0.0;
        for j in 0..i {
            let q = points[idx[j]];
            if inside(center, r2, q) {
                continue;
            }
            center = [(p[0] + q[0]) / 2.0, (p[1] + q[1]) / 2.0];
            r2 = 0.25 * ((p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2));
            for k in 0..j {
                let t = points[idx[k]];
                if inside(center, r2, t) {
                    continue;
                }
                (center, r2) = circumdisk(p, q, t);
            }
        }
    }
    (center, r2.sqrt())
}

fn circumdisk(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> ([f64; 2], f64) {
    let d = 2.0 * (a[0] * (b[1] - c[1]) + b[0] * (c[1] - a[1]) + c[0] * (a[1] - b[1]));
    if d.abs() < 1e-14 {
        // Collinear: diametral disk of the farthest pair.
        let pairs = [(a, b), (a, c), (b, c)];
        let (p, q) = pairs
            .iter()
            .max_by(|x, y| {
                let dx = (x.0[0] - x.1[0]).powi(2) + (x.0[1] - x.1[1]).powi(2);
                let dy = (y.0[0] - y.1[0]).powi(2) + (y.0[1] - y.1[1]).powi(2);
                dx.partial_cmp(&dy).unwrap()
            })
            .copied()
            .unwrap();
        let center = [(p[0] + q[0]) / 2.0, (p[1] + q[1]) / 2.0];
        let r2 = 0.25 * ((p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2));
        return (center, r2);
    }
    let a2 = a[0] * a[0] + a[1] * a[1];
    let b2 = b[0] * b[0] + b[1] * b[1];
    let c2 = c[0] * c[0] + c[1] * c[1];
    let ux = (a2 * (b[1] - c[1]) + b2 * (c[1] - a[1]) + c2 * (a[1] - b[1])) / d;
    let uy = (a2 * (c[0] - b[0]) + b2 * (a[0] - c[0]) + c2 * (b[0] - a[0])) / d;
    let r2 = (a[0] - ux).powi(2) + (a[1] - uy).powi(2);
    ([ux, uy], r2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{build_curve, CurveSpec};

    #[test]
    fn unit_circle_summary() {
        let c = build_curve(&CurveSpec::circle(1.0), 256).unwrap();
        let g = geometry_summary(&c);
        assert!((g.diameter - 2.0).abs() < 1e-6);
        assert!((g.enclosing_radius - 2.0).abs() < 1e-6);
        assert!(g.center[0].abs() < 1e-9 && g.center[1].abs() < 1e-9);
        assert!((g.m_half - 2.0 / std::f64::consts::PI).abs() < 1e-4, "{}", g.m_half);
    }

    #[test]
    fn segment_summary() {
        let c = build_curve(&CurveSpec::segment([-1.0, 0.0], [1.0, 0.0]), 64).unwrap();
        let g = geometry_summary(&c);
        assert!((g.enclosing_radius - 2.0).abs() < 1e-12);
        assert!((g.m_half - 1.0).abs() < 1e-12);
        assert!((g.m_full - 1.0).abs() < 1e-12);
        assert!((injectivity_modulus(&c, 1.3).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn ellipse_summary() {
        let c = build_curve(&CurveSpec::ellipse(2.0, 1.0), 512).unwrap();
        let g = geometry_summary(&c);
        assert!((g.diameter - 4.0).abs() < 1e-5);
        assert!((g.enclosing_radius - 3.0).abs() < 1e-5);
        assert!(g.m_half > 0.0 && g.m_half < 1.0);
        // R >= 1 + diameter / 2 within tolerance.
        assert!(g.enclosing_radius >= 1.0 + 0.5 * g.diameter - 1e-9);
    }

    #[test]
    fn circle_modulus_analytic() {
        // chord/arc = 2 sin(d/2) / d, minimized at d = m.
        let c = build_curve(&CurveSpec::circle(1.0), 512).unwrap();
        let m = std::f64::consts::PI;
        let got = injectivity_modulus(&c, m).unwrap();
        assert!((got - 2.0 / std::f64::consts::PI).abs() < 1e-4, "{got}");
    }

    #[test]
    fn modulus_monotone_in_m() {
        let c = build_curve(&CurveSpec::ellipse(2.0, 1.0), 256).unwrap();
        let l = c.length;
        let mut prev = f64::INFINITY;
        for k in 1..=8 {
            let m = l * k as f64 / 16.0;
            let v = injectivity_modulus(&c, m).unwrap();
            assert!(v <= prev + 1e-12, "modulus must be non-increasing in m");
            prev = v;
        }
        assert!(prev > 0.0 && prev < 1.0);
    }

    #[test]
    fn modulus_domain_errors() {
        let c = build_curve(&CurveSpec::circle(1.0), 64).unwrap();
        assert!(injectivity_modulus(&c, 0.0).is_err());
        assert!(injectivity_modulus(&c, c.length * 1.5).is_err());
    }

    #[test]
    fn disk_of_collinear_points() {
        let pts = vec![[0.0, 0.0], [1.0, 0.0], [2.0, 0.0], [3.0, 0.0]];
        let (c, r) = smallest_enclosing_disk(&pts);
        assert!((c[0] - 1.5).abs() < 1e-12 && c[1].abs() < 1e-12);
        assert!((r - 1.5).abs() < 1e-12);
    }
}
