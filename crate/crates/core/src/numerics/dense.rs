//! Dense row-major matrix and the cyclic Jacobi eigensolver.
//!
//! Jacobi is preferred over QR here: the matrices stay below ~2048² and the
//! small eigenvalues retain high relative accuracy, which matters when the
//! Birman-Schwinger branch values are compared against `1/alpha`.

use crate::error::{Error, Result};

/// Dense square matrix, row-major.
#[derive(Debug, Clone)]
pub struct DMat {
    n: usize,
    a: Vec<f64>,
}

impl DMat {
    pub fn zeros(n: usize) -> Self {
        Self { n, a: vec![0.0; n * n] }
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m.a[i * n + j] = f(i, j);
            }
        }
        m
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.a[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.a[i * self.n + j] = v;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.a[i * self.n..(i + 1) * self.n]
    }

    pub fn rows_mut(&mut self) -> std::slice::ChunksMut<'_, f64> {
        self.a.chunks_mut(self.n)
    }

    pub fn mul_vec(&self, x: &[f64], out: &mut [f64]) {
        let n = self.n;
        for i in 0..n {
            let row = &self.a[i * n..(i + 1) * n];
            let mut acc = 0.0;
            for j in 0..n {
                acc += row[j] * x[j];
            }
            out[i] = acc;
        }
    }

    /// Maximum absolute entry of `A - A^T`.
    pub fn asymmetry(&self) -> f64 {
        let n = self.n;
        let mut worst = 0.0_f64;
        for i in 0..n {
            for j in (i + 1)..n {
                worst = worst.max((self.a[i * n + j] - self.a[j * n + i]).abs());
            }
        }
        worst
    }

    pub fn frobenius(&self) -> f64 {
        self.a.iter().map(|v| v * v).sum::<f64>().sqrt()
    }
}

/// Full spectrum of a symmetric matrix.
#[derive(Debug, Clone)]
pub struct SymmetricEigenResult {
    /// Eigenvalues sorted descending.
    pub eigenvalues: Vec<f64>,
    /// `eigenvectors[j]` is the unit eigenvector for `eigenvalues[j]`.
    pub eigenvectors: Vec<Vec<f64>>,
}

/// Cyclic Jacobi diagonalization. Convergence is declared when the
/// off-diagonal Frobenius norm drops below `1e-14` times the matrix norm.
pub fn symmetric_eigen(mat: &DMat) -> Result<SymmetricEigenResult> {
    let defect = mat.asymmetry();
    if defect > 1e-12 {
        return Err(Error::NotSymmetric(defect));
    }
    let n = mat.n();
    let mut a = mat.clone();
    let mut v = DMat::zeros(n);
    for i in 0..n {
        v.set(i, i, 1.0);
    }

    let anorm = a.frobenius().max(f64::MIN_POSITIVE);
    let tol = 1e-14 * anorm;

    let mut converged = false;
    for _sweep in 0..60 {
        let mut off = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                let x = a.get(i, j);
                off += 2.0 * x * x;
            }
        }
        if off.sqrt() <= tol {
            converged = true;
            break;
        }

        for p in 0..n.saturating_sub(1) {
            for q in (p + 1)..n {
                let apq = a.get(p, q);
                if apq == 0.0 {
                    continue;
                }
                let app = a.get(p, p);
                let aqq = a.get(q, q);
                let theta = 0.5 * (aqq - app) / apq;
                let t = if theta.abs() > 1e150 {
                    0.5 / theta
                } else {
                    let s = theta.signum();
                    s / (theta.abs() + (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let tau = s / (1.0 + c);

                a.set(p, p, app - t * apq);
                a.set(q, q, aqq + t * apq);
                a.set(p, q, 0.0);
                a.set(q, p, 0.0);

                for j in 0..n {
                    if j != p && j != q {
                        let ajp = a.get(j, p);
                        let ajq = a.get(j, q);
                        let np = ajp - s * (ajq + tau * ajp);
                        let nq = ajq + s * (ajp - tau * ajq);
                        a.set(j, p, np);
                        a.set(p, j, np);
                        a.set(j, q, nq);
                        a.set(q, j, nq);
                    }
                }
                for j in 0..n {
                    let vjp = v.get(j, p);
                    let vjq = v.get(j, q);
                    v.set(j, p, vjp - s * (vjq + tau * vjp));
                    v.set(j, q, vjq + s * (vjp - tau * vjq));
                }
            }
        }
    }
    if !converged {
        // One more norm check: the last sweep may have finished the job.
        let mut off = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                let x = a.get(i, j);
                off += 2.0 * x * x;
            }
        }
        if off.sqrt() > tol {
            return Err(Error::NoConvergence(format!(
                "Jacobi sweeps exhausted (off-norm {:.3e}, target {:.3e})",
                off.sqrt(),
                tol
            )));
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a.get(j, j).partial_cmp(&a.get(i, i)).unwrap());

    let eigenvalues: Vec<f64> = order.iter().map(|&i| a.get(i, i)).collect();
    let eigenvectors: Vec<Vec<f64>> = order
        .iter()
        .map(|&col| (0..n).map(|row| v.get(row, col)).collect())
        .collect();

    Ok(SymmetricEigenResult { eigenvalues, eigenvectors })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_and_diagonal() {
        let id = DMat::from_fn(3, |i, j| if i == j { 1.0 } else { 0.0 });
        let r = symmetric_eigen(&id).unwrap();
        assert_eq!(r.eigenvalues, vec![1.0, 1.0, 1.0]);

        let d = DMat::from_fn(3, |i, j| {
            if i == j {
                [3.0, 1.0, 2.0][i]
            } else {
                0.0
            }
        });
        let r = symmetric_eigen(&d).unwrap();
        assert_eq!(r.eigenvalues, vec![3.0, 2.0, 1.0]);
    }

    #[test]
    fn exchange_matrix() {
        let m = DMat::from_fn(2, |i, j| if i != j { 1.0 } else { 0.0 });
        let r = symmetric_eigen(&m).unwrap();
        assert!((r.eigenvalues[0] - 1.0).abs() < 1e-14);
        assert!((r.eigenvalues[1] + 1.0).abs() < 1e-14);
        let v = &r.eigenvectors[0];
        let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
        assert!((v[0].abs() - inv_sqrt2).abs() < 1e-12);
        assert!((v[1].abs() - inv_sqrt2).abs() < 1e-12);
        assert!((v[0] - v[1]).abs() < 1e-12, "eigenvector for +1 is (1,1)/sqrt2");
    }

    #[test]
    fn rejects_asymmetric() {
        let mut m = DMat::zeros(2);
        m.set(0, 1, 1.0);
        m.set(1, 0, 1.0 + 1e-9);
        assert!(matches!(symmetric_eigen(&m), Err(Error::NotSymmetric(_))));
    }

    #[test]
    fn residual_and_orthogonality_on_random_matrix() {
        let n = 40;
        let mut state = 123456789_u64;
        let mut rnd = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        let mut m = DMat::zeros(n);
        for i in 0..n {
            for j in i..n {
                let v = rnd();
                m.set(i, j, v);
                m.set(j, i, v);
            }
        }
        let r = symmetric_eigen(&m).unwrap();
        let anorm = m.frobenius();
        let mut av = vec![0.0; n];
        for (lam, vec) in r.eigenvalues.iter().zip(&r.eigenvectors) {
            m.mul_vec(vec, &mut av);
            let resid: f64 = av
                .iter()
                .zip(vec)
                .map(|(a, v)| (a - lam * v) * (a - lam * v))
                .sum::<f64>()
                .sqrt();
            assert!(resid <= 1e-10 * anorm, "residual {resid:.3e}");
        }
        for i in 0..n {
            for j in i..n {
                let dot: f64 = r.eigenvectors[i]
                    .iter()
                    .zip(&r.eigenvectors[j])
                    .map(|(a, b)| a * b)
                    .sum();
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((dot - expect).abs() <= 1e-10);
            }
        }
    }

    // Eigenvalues of random 4x4 matrices against the roots of the
    // characteristic polynomial (Faddeev-LeVerrier coefficients plus
    // Durand-Kerner root iteration).
    #[test]
    fn charpoly_cross_check_4x4() {
        fn charpoly4(m: &DMat) -> [f64; 5] {
            // det(lambda I - A) = l^4 + c3 l^3 + c2 l^2 + c1 l + c0
            let n = 4;
            let mut coeffs = [0.0; 5];
            coeffs[4] = 1.0;
            let mut mk = DMat::from_fn(n, |i, j| m.get(i, j));
            let mut c = -trace(&mk);
            coeffs[3] = c;
            for k in 2..=n {
                // M_{k} = A (M_{k-1} + c_{k-1} I)
                let mut shifted = mk.clone();
                for i in 0..n {
                    shifted.set(i, i, shifted.get(i, i) + c);
                }
                let mut next = DMat::zeros(n);
                for i in 0..n {
                    for j in 0..n {
                        let mut acc = 0.0;
                        for l in 0..n {
                            acc += m.get(i, l) * shifted.get(l, j);
                        }
                        next.set(i, j, acc);
                    }
                }
                mk = next;
                c = -trace(&mk) / k as f64;
                coeffs[4 - k] = c;
            }
            coeffs
        }
        fn trace(m: &DMat) -> f64 {
            (0..m.n()).map(|i| m.get(i, i)).sum()
        }
        fn roots_durand_kerner(c: [f64; 5]) -> Vec<f64> {
            // Monic quartic with real coefficients; all roots real here.
            let mut z: Vec<(f64, f64)> =
                vec![(0.4, 0.9), (-0.91, 0.7), (0.65, -0.72), (-0.3, -1.1)];
            let eval = |x: (f64, f64)| {
                let mut re = c[4];
                let mut im = 0.0;
                for k in (0..4).rev() {
                    let nre = re * x.0 - im * x.1 + c[k];
                    let nim = re * x.1 + im * x.0;
                    re = nre;
                    im = nim;
                }
                (re, im)
            };
            for _ in 0..200 {
                let old = z.clone();
                for i in 0..4 {
                    let (mut dre, mut dim) = (1.0, 0.0);
                    for j in 0..4 {
                        if j != i {
                            let (are, aim) = (old[i].0 - old[j].0, old[i].1 - old[j].1);
                            let nre = dre * are - dim * aim;
                            let nim = dre * aim + dim * are;
                            dre = nre;
                            dim = nim;
                        }
                    }
                    let (pre, pim) = eval(old[i]);
                    let denom = dre * dre + dim * dim;
                    z[i] = (
                        old[i].0 - (pre * dre + pim * dim) / denom,
                        old[i].1 - (pim * dre - pre * dim) / denom,
                    );
                }
            }
            let mut r: Vec<f64> = z.iter().map(|p| p.0).collect();
            r.sort_by(|a, b| b.partial_cmp(a).unwrap());
            r
        }

        let mut state = 42_u64;
        let mut rnd = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        for _case in 0..20 {
            let mut m = DMat::zeros(4);
            for i in 0..4 {
                for j in i..4 {
                    let v = 2.0 * rnd();
                    m.set(i, j, v);
                    m.set(j, i, v);
                }
            }
            let jac = symmetric_eigen(&m).unwrap();
            let roots = roots_durand_kerner(charpoly4(&m));
            for (a, b) in jac.eigenvalues.iter().zip(&roots) {
                assert!((a - b).abs() < 1e-9, "{a} vs {b}");
            }
        }
    }
}
