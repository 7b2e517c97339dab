//! Raw parameterizations behind each curve kind, before arc-length
//! resampling. Analytic derivatives where the kind permits; cubic splines on
//! chord-length parameter for sampled data.

use super::spec::{CurveKind, CurveSpec};
use crate::error::{Error, Result};

#[derive(Debug)]
pub(super) enum Parameterization {
    Circle { r: f64, c: [f64; 2] },
    Segment { start: [f64; 2], dir: [f64; 2], len: f64 },
    Arc { r: f64, c: [f64; 2], a0: f64, a1: f64 },
    Ellipse { a: f64, b: f64 },
    Fourier { a0: [f64; 2], cos: Vec<[f64; 2]>, sin: Vec<[f64; 2]> },
    Spline { x: Spline, y: Spline },
}

impl Parameterization {
    pub(super) fn from_spec(spec: &CurveSpec) -> Result<Self> {
        Ok(match &spec.kind {
            CurveKind::Circle { radius, center } => Self::Circle { r: *radius, c: *center },
            CurveKind::Segment { start, end } => {
                let d = [end[0] - start[0], end[1] - start[1]];
                let len = (d[0] * d[0] + d[1] * d[1]).sqrt();
                Self::Segment { start: *start, dir: [d[0] / len, d[1] / len], len }
            }
            CurveKind::Arc { radius, center, angle_start, angle_end } => {
                Self::Arc { r: *radius, c: *center, a0: *angle_start, a1: *angle_end }
            }
            CurveKind::Ellipse { a, b } => Self::Ellipse { a: *a, b: *b },
            CurveKind::Fourier { a0, cos, sin } => {
                let p = Self::Fourier { a0: *a0, cos: cos.clone(), sin: sin.clone() };
                // Reject degenerate parameterizations with vanishing speed.
                let (t0, t1) = p.domain();
                for k in 0..2048 {
                    let t = t0 + (t1 - t0) * k as f64 / 2048.0;
                    if p.speed(t) < 1e-9 {
                        return Err(Error::InvalidCurve(format!(
                            "fourier parameterization has near-zero speed at t = {t:.4}"
                        )));
                    }
                }
                p
            }
            CurveKind::Samples { points } => {
                // Chord-length parameter.
                let n = points.len();
                let mut u = Vec::with_capacity(n + 1);
                u.push(0.0);
                for i in 1..n {
                    let d = ((points[i][0] - points[i - 1][0]).powi(2)
                        + (points[i][1] - points[i - 1][1]).powi(2))
                    .sqrt();
                    u.push(u[i - 1] + d);
                }
                let (xs, ys): (Vec<f64>, Vec<f64>) =
                    points.iter().map(|p| (p[0], p[1])).unzip();
                if spec.closed {
                    let back = ((points[0][0] - points[n - 1][0]).powi(2)
                        + (points[0][1] - points[n - 1][1]).powi(2))
                    .sqrt();
                    let period = u[n - 1] + back;
                    Self::Spline {
                        x: Spline::periodic(&u, &xs, period)?,
                        y: Spline::periodic(&u, &ys, period)?,
                    }
                } else {
                    Self::Spline { x: Spline::natural(&u, &xs)?, y: Spline::natural(&u, &ys)? }
                }
            }
        })
    }

    pub(super) fn domain(&self) -> (f64, f64) {
        match self {
            Self::Circle { .. } | Self::Ellipse { .. } | Self::Fourier { .. } => {
                (0.0, 2.0 * std::f64::consts::PI)
            }
            Self::Segment { len, .. } => (0.0, *len),
            Self::Arc { a0, a1, .. } => (a0.min(*a1), a0.max(*a1)),
            Self::Spline { x, .. } => x.domain(),
        }
    }

    pub(super) fn point(&self, t: f64) -> [f64; 2] {
        match self {
            Self::Circle { r, c } => [c[0] + r * t.cos(), c[1] + r * t.sin()],
            Self::Segment { start, dir, .. } => [start[0] + dir[0] * t, start[1] + dir[1] * t],
            Self::Arc { r, c, .. } => [c[0] + r * t.cos(), c[1] + r * t.sin()],
            Self::Ellipse { a, b } => [a * t.cos(), b * t.sin()],
            Self::Fourier { a0, cos, sin } => {
                let mut p = *a0;
                for (k, c) in cos.iter().enumerate() {
                    let w = ((k + 1) as f64 * t).cos();
                    p[0] += c[0] * w;
                    p[1] += c[1] * w;
                }
                for (k, s) in sin.iter().enumerate() {
                    let w = ((k + 1) as f64 * t).sin();
                    p[0] += s[0] * w;
                    p[1] += s[1] * w;
                }
                p
            }
            Self::Spline { x, y } => [x.eval(t), y.eval(t)],
        }
    }

    pub(super) fn d1(&self, t: f64) -> [f64; 2] {
        match self {
            Self::Circle { r, .. } | Self::Arc { r, .. } => [-r * t.sin(), r * t.cos()],
            Self::Segment { dir, .. } => *dir,
            Self::Ellipse { a, b } => [-a * t.sin(), b * t.cos()],
            Self::Fourier { cos, sin, .. } => {
                let mut p = [0.0, 0.0];
                for (k, c) in cos.iter().enumerate() {
                    let m = (k + 1) as f64;
                    let w = -m * (m * t).sin();
                    p[0] += c[0] * w;
                    p[1] += c[1] * w;
                }
                for (k, s) in sin.iter().enumerate() {
                    let m = (k + 1) as f64;
                    let w = m * (m * t).cos();
                    p[0] += s[0] * w;
                    p[1] += s[1] * w;
                }
                p
            }
            Self::Spline { x, y } => [x.deriv1(t), y.deriv1(t)],
        }
    }

    pub(super) fn d2(&self, t: f64) -> [f64; 2] {
        match self {
            Self::Circle { r, .. } | Self::Arc { r, .. } => [-r * t.cos(), -r * t.sin()],
            Self::Segment { .. } => [0.0, 0.0],
            Self::Ellipse { a, b } => [-a * t.cos(), -b * t.sin()],
            Self::Fourier { cos, sin, .. } => {
                let mut p = [0.0, 0.0];
                for (k, c) in cos.iter().enumerate() {
                    let m = (k + 1) as f64;
                    let w = -m * m * (m * t).cos();
                    p[0] += c[0] * w;
                    p[1] += c[1] * w;
                }
                for (k, s) in sin.iter().enumerate() {
                    let m = (k + 1) as f64;
                    let w = -m * m * (m * t).sin();
                    p[0] += s[0] * w;
                    p[1] += s[1] * w;
                }
                p
            }
            Self::Spline { x, y } => [x.deriv2(t), y.deriv2(t)],
        }
    }

    pub(super) fn speed(&self, t: f64) -> f64 {
        let d = self.d1(t);
        (d[0] * d[0] + d[1] * d[1]).sqrt()
    }
}

/// Cubic spline on a strictly increasing knot vector; natural or periodic
/// end conditions.
#[derive(Debug)]
pub(super) struct Spline {
    u: Vec<f64>,
    y: Vec<f64>,
    y2: Vec<f64>,
    period: Option<f64>,
}

impl Spline {
    fn natural(u: &[f64], y: &[f64]) -> Result<Self> {
        let n = u.len();
        if n < 3 {
            return Err(Error::InvalidCurve("spline needs at least 3 knots".into()));
        }
        let mut diag = vec![0.0; n];
        let mut sub = vec![0.0; n - 1];
        let mut sup = vec![0.0; n - 1];
        let mut rhs = vec![0.0; n];
        diag[0] = 1.0;
        diag[n - 1] = 1.0;
        for i in 1..n - 1 {
            let hm = u[i] - u[i - 1];
            let hp = u[i + 1] - u[i];
            sub[i - 1] = hm / 6.0;
            diag[i] = (hm + hp) / 3.0;
            sup[i] = hp / 6.0;
            rhs[i] = (y[i + 1] - y[i]) / hp - (y[i] - y[i - 1]) / hm;
        }
        let y2 = solve_tridiag(&sub, &diag, &sup, &rhs);
        Ok(Self { u: u.to_vec(), y: y.to_vec(), y2, period: None })
    }

    fn periodic(u: &[f64], y: &[f64], period: f64) -> Result<Self> {
        let n = u.len();
        if n < 3 {
            return Err(Error::InvalidCurve("spline needs at least 3 knots".into()));
        }
        // Cyclic system via Sherman-Morrison on the natural tridiagonal part.
        let h = |i: usize| -> f64 {
            if i + 1 < n {
                u[i + 1] - u[i]
            } else {
                period - u[n - 1]
            }
        };
        let yv = |i: usize| y[i % n];
        let mut diag = vec![0.0; n];
        let mut sub = vec![0.0; n - 1];
        let mut sup = vec![0.0; n - 1];
        let mut rhs = vec![0.0; n];
        for i in 0..n {
            let hm = if i == 0 { h(n - 1) } else { h(i - 1) };
            let hp = h(i);
            diag[i] = (hm + hp) / 3.0;
            if i > 0 {
                sub[i - 1] = hm / 6.0;
            }
            if i < n - 1 {
                sup[i] = hp / 6.0;
            }
            let prev = if i == 0 { yv(n - 1) } else { yv(i - 1) };
            rhs[i] = (yv(i + 1) - yv(i)) / hp - (yv(i) - prev) / hm;
        }
        // Corner couplings: (0, n-1) and (n-1, 0), both h(n-1)/6.
        let corner = h(n - 1) / 6.0;
        let gamma = -diag[0];
        let mut diag_mod = diag.clone();
        diag_mod[0] -= gamma;
        diag_mod[n - 1] -= corner * corner / gamma;
        let x1 = solve_tridiag(&sub, &diag_mod, &sup, &rhs);
        let mut uvec = vec![0.0; n];
        uvec[0] = gamma;
        uvec[n - 1] = corner;
        let x2 = solve_tridiag(&sub, &diag_mod, &sup, &uvec);
        let factor = (x1[0] + corner * x1[n - 1] / gamma)
            / (1.0 + x2[0] + corner * x2[n - 1] / gamma);
        let y2: Vec<f64> = x1.iter().zip(&x2).map(|(a, b)| a - factor * b).collect();
        Ok(Self { u: u.to_vec(), y: y.to_vec(), y2, period: Some(period) })
    }

    fn domain(&self) -> (f64, f64) {
        match self.period {
            Some(p) => (0.0, p),
            None => (self.u[0], self.u[self.u.len() - 1]),
        }
    }

    fn locate(&self, t: f64) -> (usize, usize, f64, f64) {
        let n = self.u.len();
        match self.period {
            Some(p) => {
                let tw = t.rem_euclid(p);
                let i = match self.u.binary_search_by(|v| v.partial_cmp(&tw).unwrap()) {
                    Ok(i) => i,
                    Err(i) => i.saturating_sub(1),
                };
                let i = i.min(n - 1);
                let next = (i + 1) % n;
                let hi = if i + 1 < n { self.u[i + 1] } else { p };
                (i, next, tw - self.u[i], hi - self.u[i])
            }
            None => {
                let tc = t.clamp(self.u[0], self.u[n - 1]);
                let i = match self.u.binary_search_by(|v| v.partial_cmp(&tc).unwrap()) {
                    Ok(i) => i.min(n - 2),
                    Err(i) => i.saturating_sub(1).min(n - 2),
                };
                (i, i + 1, tc - self.u[i], self.u[i + 1] - self.u[i])
            }
        }
    }

    fn eval(&self, t: f64) -> f64 {
        let (i, j, dt, h) = self.locate(t);
        let a = (h - dt) / h;
        let b = dt / h;
        a * self.y[i]
            + b * self.y[j]
            + ((a * a * a - a) * self.y2[i] + (b * b * b - b) * self.y2[j]) * h * h / 6.0
    }

    fn deriv1(&self, t: f64) -> f64 {
        let (i, j, dt, h) = self.locate(t);
        let a = (h - dt) / h;
        let b = dt / h;
        (self.y[j] - self.y[i]) / h
            - (3.0 * a * a - 1.0) / 6.0 * h * self.y2[i]
            + (3.0 * b * b - 1.0) / 6.0 * h * self.y2[j]
    }

    fn deriv2(&self, t: f64) -> f64 {
        let (i, j, dt, h) = self.locate(t);
        let a = (h - dt) / h;
        let b = dt / h;
        a * self.y2[i] + b * self.y2[j]
    }
}

fn solve_tridiag(sub: &[f64], diag: &[f64], sup: &[f64], rhs: &[f64]) -> Vec<f64> {
    let n = diag.len();
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    c[0] = if n > 1 { sup[0] / diag[0] } else { 0.0 };
    d[0] = rhs[0] / diag[0];
    for i in 1..n {
        let m = diag[i] - sub[i - 1] * c[i - 1];
        if i < n - 1 {
            c[i] = sup[i] / m;
        }
        d[i] = (rhs[i] - sub[i - 1] * d[i - 1]) / m;
    }
    let mut x = vec![0.0; n];
    x[n - 1] = d[n - 1];
    for i in (0..n - 1).rev() {
        x[i] = d[i] - c[i] * x[i + 1];
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn natural_spline_reproduces_line() {
        let u = [0.0, 1.0, 2.0, 3.0];
        let y = [1.0, 3.0, 5.0, 7.0];
        let s = Spline::natural(&u, &y).unwrap();
        for k in 0..30 {
            let t = 0.1 * k as f64;
            assert!((s.eval(t) - (1.0 + 2.0 * t)).abs() < 1e-12);
            assert!((s.deriv1(t) - 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn periodic_spline_tracks_sine() {
        let n = 64;
        let period = 2.0 * std::f64::consts::PI;
        let u: Vec<f64> = (0..n).map(|i| period * i as f64 / n as f64).collect();
        let y: Vec<f64> = u.iter().map(|t| t.sin()).collect();
        let s = Spline::periodic(&u, &y, period).unwrap();
        for k in 0..100 {
            let t = 0.063 * k as f64;
            assert!((s.eval(t) - t.sin()).abs() < 1e-5, "t = {t}: {}", s.eval(t));
            assert!((s.deriv1(t) - t.cos()).abs() < 1e-3);
        }
        // Seam continuity.
        assert!((s.eval(0.0) - s.eval(period - 1e-12)).abs() < 1e-9);
        assert!((s.deriv1(1e-12) - s.deriv1(period - 1e-12)).abs() < 1e-6);
    }
}
