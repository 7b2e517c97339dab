//! Trigonometric interpolation of periodic samples on equispaced grids
//! (arbitrary phase offset). Used to upsample Nyström charge densities for
//! near-curve field evaluation.

/// Interpolant through `n` samples at `t_j = t0 + 2 pi j / n`.
///
/// Stores the complex Fourier coefficients `c_m`, `m = 0..n/2`, of the
/// unique balanced trigonometric interpolant. Construction is a direct
/// O(n^2) transform; evaluation costs O(n) per point.
#[derive(Debug, Clone)]
pub struct TrigInterp {
    half: usize,
    /// (Re c_m, Im c_m) for m = 0..=n/2.
    coef: Vec<(f64, f64)>,
}

impl TrigInterp {
    pub fn new(samples: &[f64], t0: f64) -> Self {
        let n = samples.len();
        assert!(n >= 2 && n % 2 == 0, "need an even number of samples");
        let half = n / 2;
        let mut coef = Vec::with_capacity(half + 1);
        for m in 0..=half {
            let mut re = 0.0;
            let mut im = 0.0;
            for (j, &f) in samples.iter().enumerate() {
                let t = t0 + 2.0 * std::f64::consts::PI * j as f64 / n as f64;
                let (s, c) = (m as f64 * t).sin_cos();
                re += f * c;
                im -= f * s;
            }
            coef.push((re / n as f64, im / n as f64));
        }
        Self { half, coef }
    }

    /// Evaluates the interpolant at angle `t`.
    pub fn eval(&self, t: f64) -> f64 {
        let (c0_re, _) = self.coef[0];
        let mut acc = c0_re;
        for m in 1..self.half {
            let (re, im) = self.coef[m];
            let (s, c) = (m as f64 * t).sin_cos();
            acc += 2.0 * (re * c - im * s);
        }
        let (re, im) = self.coef[self.half];
        let (s, c) = (self.half as f64 * t).sin_cos();
        acc += re * c - im * s;
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(n: usize, t0: f64) -> Vec<f64> {
        (0..n)
            .map(|j| t0 + 2.0 * std::f64::consts::PI * j as f64 / n as f64)
            .collect()
    }

    #[test]
    fn reproduces_samples_standard_grid() {
        let n = 16;
        let ts = grid(n, 0.0);
        let f: Vec<f64> = ts.iter().map(|t| (t.cos() + 0.3 * (3.0 * t).sin()).exp()).collect();
        let interp = TrigInterp::new(&f, 0.0);
        for (t, v) in ts.iter().zip(&f) {
            assert!((interp.eval(*t) - v).abs() < 1e-12);
        }
    }

    #[test]
    fn reproduces_samples_offset_grid() {
        let n = 20;
        let t0 = std::f64::consts::PI / n as f64;
        let ts = grid(n, t0);
        let f: Vec<f64> = ts.iter().map(|t| 1.0 / (2.0 + t.sin())).collect();
        let interp = TrigInterp::new(&f, t0);
        for (t, v) in ts.iter().zip(&f) {
            assert!((interp.eval(*t) - v).abs() < 1e-12, "at t = {t}");
        }
    }

    #[test]
    fn spectral_accuracy_off_grid() {
        let n = 64;
        let t0 = 0.0;
        let target = |t: f64| (t.cos()).exp() * (2.0 * t).sin() + 2.0;
        let f: Vec<f64> = grid(n, t0).iter().map(|&t| target(t)).collect();
        let interp = TrigInterp::new(&f, t0);
        for k in 0..200 {
            let t = 0.031 * k as f64;
            assert!(
                (interp.eval(t) - target(t)).abs() < 1e-10,
                "t = {t}: {} vs {}",
                interp.eval(t),
                target(t)
            );
        }
    }
}
