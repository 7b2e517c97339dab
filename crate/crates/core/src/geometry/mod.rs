//! Finite planar C² curves: construction from a declarative spec,
//! arc-length reparameterization, curvature tables, and fine lookup tables
//! for downstream kernel evaluation.

mod param;
mod probe;
mod spec;
mod summary;

pub use probe::{delta0_for, probe_direction, transversal_probe, TransversalProbe, MAX_COS_THETA};
pub use spec::{CurveKind, CurveSpec};
pub use summary::{geometry_summary, injectivity_modulus, smallest_enclosing_disk, GeometrySummary};

use crate::error::{Error, Result};
use crate::numerics::gauss7;
use param::Parameterization;

/// An arc-length-parameterized planar curve with tangent/normal/curvature
/// tables at `n_samples` nodes plus a finer private table for interpolation.
#[derive(Debug, Clone)]
pub struct Curve {
    pub n_samples: usize,
    /// Arc-length grid, ascending from 0. Closed curves omit the seam
    /// duplicate; open curves include both endpoints.
    pub s: Vec<f64>,
    pub gamma: Vec<[f64; 2]>,
    pub tangent: Vec<[f64; 2]>,
    pub normal: Vec<[f64; 2]>,
    pub kappa: Vec<f64>,
    pub length: f64,
    pub closed: bool,
    fine: FineTable,
}

#[derive(Debug, Clone)]
struct FineTable {
    m: usize,
    gamma: Vec<[f64; 2]>,
    tangent: Vec<[f64; 2]>,
    kappa: Vec<f64>,
}

/// Builds an arc-length-parameterized curve with `n_samples >= 16` nodes.
pub fn build_curve(spec: &CurveSpec, n_samples: usize) -> Result<Curve> {
    if n_samples < 16 {
        return Err(Error::InvalidCurve(format!("n_samples must be >= 16, got {n_samples}")));
    }
    spec.validate()?;
    let param = Parameterization::from_spec(spec)?;

    // Cumulative arc length over a dense parameter table.
    let dense = (16 * n_samples).max(4096);
    let (t0, t1) = param.domain();
    let dt = (t1 - t0) / dense as f64;
    let mut cum = Vec::with_capacity(dense + 1);
    cum.push(0.0);
    let mut acc = 0.0;
    for k in 0..dense {
        let a = t0 + k as f64 * dt;
        acc += gauss7(&mut |t| param.speed(t), a, a + dt);
        cum.push(acc);
    }
    let length = acc;
    if !(length.is_finite() && length > 0.0) {
        return Err(Error::InvalidCurve("curve has degenerate length".into()));
    }

    // Inverse of the arc-length map by bracketed Newton on the table.
    let t_of_s = |s: f64| -> f64 {
        let s = s.clamp(0.0, length);
        let mut lo = match cum.binary_search_by(|c| c.partial_cmp(&s).unwrap()) {
            Ok(i) => i,
            Err(i) => i.saturating_sub(1),
        };
        lo = lo.min(dense - 1);
        let mut t = t0 + (lo as f64 + (s - cum[lo]) / (cum[lo + 1] - cum[lo]).max(1e-300)) * dt;
        let (mut blo, mut bhi) = (t0 + lo as f64 * dt, t0 + (lo + 1) as f64 * dt);
        for _ in 0..60 {
            // Residual by local quadrature from the bracket edge.
            let r = cum[lo] + gauss7(&mut |x| param.speed(x), t0 + lo as f64 * dt, t) - s;
            if r.abs() <= 1e-14 * length {
                break;
            }
            if r > 0.0 {
                bhi = t;
            } else {
                blo = t;
            }
            let step = r / param.speed(t).max(1e-300);
            t -= step;
            if !(t > blo && t < bhi) {
                t = 0.5 * (blo + bhi);
            }
        }
        t
    };

    let sample_grid = |count: usize, closed: bool| -> Vec<f64> {
        if closed {
            (0..count).map(|i| length * i as f64 / count as f64).collect()
        } else {
            (0..count).map(|i| length * i as f64 / (count - 1) as f64).collect()
        }
    };

    let fill = |ss: &[f64]| {
        let mut gamma = Vec::with_capacity(ss.len());
        let mut tangent = Vec::with_capacity(ss.len());
        let mut normal = Vec::with_capacity(ss.len());
        let mut kappa = Vec::with_capacity(ss.len());
        for &s in ss {
            let t = t_of_s(s);
            let p = param.point(t);
            let d1 = param.d1(t);
            let d2 = param.d2(t);
            let sp = (d1[0] * d1[0] + d1[1] * d1[1]).sqrt();
            let tg = [d1[0] / sp, d1[1] / sp];
            gamma.push(p);
            tangent.push(tg);
            normal.push([-tg[1], tg[0]]);
            kappa.push((d1[0] * d2[1] - d1[1] * d2[0]).abs() / (sp * sp * sp));
        }
        (gamma, tangent, normal, kappa)
    };

    let s = sample_grid(n_samples, spec.closed);
    let (gamma, tangent, normal, kappa) = fill(&s);

    let fine_m = (8 * n_samples).max(8192);
    let fine_s = sample_grid(if spec.closed { fine_m } else { fine_m + 1 }, spec.closed);
    let (fg, ft, _fn_, fk) = fill(&fine_s);
    let fine = FineTable { m: fine_m, gamma: fg, tangent: ft, kappa: fk };

    let curve = Curve {
        n_samples,
        s,
        gamma,
        tangent,
        normal,
        kappa,
        length,
        closed: spec.closed,
        fine,
    };
    curve.check_self_intersection()?;
    if spec.closed {
        curve.check_seam(&param, t0, t1)?;
    }
    Ok(curve)
}

impl Curve {
    pub fn max_curvature(&self) -> f64 {
        self.fine.kappa.iter().copied().fold(0.0, f64::max)
    }

    /// Curve point at arc length `s` (periodic wrap for closed curves) by
    /// 4-point local interpolation of the fine table.
    pub fn point_at(&self, s: f64) -> [f64; 2] {
        self.interp(&self.fine.gamma, s)
    }

    pub fn tangent_at(&self, s: f64) -> [f64; 2] {
        let t = self.interp(&self.fine.tangent, s);
        let n = (t[0] * t[0] + t[1] * t[1]).sqrt();
        [t[0] / n, t[1] / n]
    }

    pub fn kappa_at(&self, s: f64) -> f64 {
        let (idx, x) = self.fine_stencil(s);
        cubic4(
            self.fine.kappa[idx[0]],
            self.fine.kappa[idx[1]],
            self.fine.kappa[idx[2]],
            self.fine.kappa[idx[3]],
            x,
        )
    }

    /// Distance from `x` to the sampled curve (fine resolution).
    pub fn distance_to(&self, x: [f64; 2]) -> f64 {
        let mut best = f64::INFINITY;
        for g in &self.fine.gamma {
            let d = (x[0] - g[0]).powi(2) + (x[1] - g[1]).powi(2);
            if d < best {
                best = d;
            }
        }
        best.sqrt()
    }

    /// Arc-length position of the fine node closest to `x`.
    pub fn closest_s(&self, x: [f64; 2]) -> f64 {
        let mut best = f64::INFINITY;
        let mut arg = 0usize;
        for (k, g) in self.fine.gamma.iter().enumerate() {
            let d = (x[0] - g[0]).powi(2) + (x[1] - g[1]).powi(2);
            if d < best {
                best = d;
                arg = k;
            }
        }
        arg as f64 * self.fine_h()
    }

    fn fine_h(&self) -> f64 {
        self.length / self.fine.m as f64
    }

    /// Four consecutive table indices and the evaluation abscissa relative
    /// to the second of them. Closed curves wrap; open curves shift the
    /// stencil at the ends so the four nodes stay distinct.
    fn fine_stencil(&self, s: f64) -> ([usize; 4], f64) {
        let m = self.fine.m;
        let h = self.fine_h();
        if self.closed {
            let raw = s.rem_euclid(self.length) / h;
            let i = raw.floor() as isize;
            let wrap = |k: isize| (k).rem_euclid(m as isize) as usize;
            ([wrap(i - 1), wrap(i), wrap(i + 1), wrap(i + 2)], raw - i as f64)
        } else {
            // Table has m + 1 entries (both endpoints present).
            let raw = s.clamp(0.0, self.length) / h;
            let base = ((raw.floor() as isize) - 1).clamp(0, m as isize - 3) as usize;
            let x = raw - (base + 1) as f64;
            ([base, base + 1, base + 2, base + 3], x)
        }
    }

    fn interp(&self, table: &[[f64; 2]], s: f64) -> [f64; 2] {
        let (idx, x) = self.fine_stencil(s);
        let (a, b, c, d) = (table[idx[0]], table[idx[1]], table[idx[2]], table[idx[3]]);
        [
            cubic4(a[0], b[0], c[0], d[0], x),
            cubic4(a[1], b[1], c[1], d[1], x),
        ]
    }

    fn check_self_intersection(&self) -> Result<()> {
        let n = self.n_samples;
        let segs = if self.closed { n } else { n - 1 };
        let at = |i: usize| self.gamma[i % n];
        for i in 0..segs {
            for j in (i + 2)..segs {
                // Skip the wrap-around adjacency of closed curves.
                if self.closed && i == 0 && j == segs - 1 {
                    continue;
                }
                if segments_cross(at(i), at(i + 1), at(j), at(j + 1)) {
                    let d = dist(self.gamma[i], self.gamma[j % n]);
                    return Err(Error::SelfIntersection { i, j, dist: d });
                }
            }
        }
        Ok(())
    }

    fn check_seam(&self, param: &Parameterization, t0: f64, t1: f64) -> Result<()> {
        let scale = self.length.max(1.0);
        let p0 = param.point(t0);
        let p1 = param.point(t1);
        let d0 = param.d1(t0);
        let d1 = param.d1(t1);
        let s0 = param.d2(t0);
        let s1 = param.d2(t1);
        let tol = 1e-8 * scale;
        if dist(p0, p1) > tol {
            return Err(Error::InvalidCurve(format!(
                "closed curve endpoints differ by {:.3e}",
                dist(p0, p1)
            )));
        }
        // First two derivatives must match at the seam; tolerance fixed at
        // 1e-8 relative to the length scale.
        if dist(d0, d1) > tol * 10.0 || dist(s0, s1) > tol * 100.0 {
            return Err(Error::InvalidCurve(
                "closed curve derivatives do not match at the seam".into(),
            ));
        }
        Ok(())
    }
}

#[inline]
fn dist(a: [f64; 2], b: [f64; 2]) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt()
}

/// Lagrange cubic through values at -1, 0, 1, 2 evaluated at `x` in [0, 1].
#[inline]
fn cubic4(fm1: f64, f0: f64, f1: f64, f2: f64, x: f64) -> f64 {
    let a = fm1 * (-x * (x - 1.0) * (x - 2.0) / 6.0);
    let b = f0 * ((x + 1.0) * (x - 1.0) * (x - 2.0) / 2.0);
    let c = f1 * (-(x + 1.0) * x * (x - 2.0) / 2.0);
    let d = f2 * ((x + 1.0) * x * (x - 1.0) / 6.0);
    a + b + c + d
}

fn segments_cross(a: [f64; 2], b: [f64; 2], c: [f64; 2], d: [f64; 2]) -> bool {
    let orient = |p: [f64; 2], q: [f64; 2], r: [f64; 2]| {
        (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])
    };
    let o1 = orient(a, b, c);
    let o2 = orient(a, b, d);
    let o3 = orient(c, d, a);
    let o4 = orient(c, d, b);
    (o1 * o2 < 0.0) && (o3 * o4 < 0.0)
}
