//! Deflated Lanczos iteration for the leading eigenpairs of a symmetric
//! positive operator given through its matrix action.
//!
//! One eigenpair is extracted per restart; converged vectors are deflated
//! out of the next Krylov space, so repeated eigenvalues come out with their
//! full multiplicity. Full reorthogonalization keeps the basis clean.

use super::tridiag::tridiag_eigen;
use crate::error::{Error, Result};

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn orthogonalize(v: &mut [f64], basis: &[Vec<f64>]) {
    for b in basis {
        let c = dot(v, b);
        for (x, y) in v.iter_mut().zip(b) {
            *x -= c * y;
        }
    }
}

/// Deterministic start vector with energy in every eigenspace.
fn seeded_vector(n: usize, seed: u64) -> Vec<f64> {
    let mut state = seed.wrapping_mul(0x9e3779b97f4a7c15).wrapping_add(0x2545f4914f6cdd1d);
    (0..n)
        .map(|_| {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        })
        .collect()
}

/// Computes the `k` largest eigenvalues (with multiplicity) and unit
/// eigenvectors of the symmetric operator `apply`. `max_steps` bounds the
/// Krylov dimension per restart.
pub fn deflated_lanczos_topk(
    n: usize,
    k: usize,
    mut apply: impl FnMut(&[f64], &mut [f64]),
    tol: f64,
    max_steps: usize,
) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    assert!(k <= n);
    let mut values: Vec<f64> = Vec::with_capacity(k);
    let mut vectors: Vec<Vec<f64>> = Vec::with_capacity(k);
    let mut scale_hint = 0.0_f64;

    for found in 0..k {
        let mut converged = false;
        for attempt in 0..3 {
            let mut basis: Vec<Vec<f64>> = Vec::new();
            let mut alphas: Vec<f64> = Vec::new();
            let mut betas: Vec<f64> = Vec::new();

            let mut v = seeded_vector(n, (found * 7 + attempt + 1) as u64);
            orthogonalize(&mut v, &vectors);
            let nv = norm(&v);
            if nv < 1e-300 {
                continue;
            }
            for x in v.iter_mut() {
                *x /= nv;
            }

            let mut w = vec![0.0; n];
            let steps = max_steps.min(n - found);
            let mut ritz = f64::NEG_INFINITY;
            let mut ritz_resid = f64::INFINITY;

            for step in 0..steps {
                apply(&v, &mut w);
                // Deflate converged eigenvectors, then project out the whole
                // Krylov basis (two passes; subsumes the three-term recurrence).
                orthogonalize(&mut w, &vectors);
                let alpha = dot(&w, &v);
                basis.push(std::mem::replace(&mut v, Vec::new()));
                orthogonalize(&mut w, &basis);
                orthogonalize(&mut w, &basis);
                orthogonalize(&mut w, &vectors);

                alphas.push(alpha);
                let beta = norm(&w);
                scale_hint = scale_hint.max(alpha.abs()).max(beta);

                let exhausted = step + 1 == steps || beta <= 1e-14 * scale_hint;
                let check_now = exhausted || (step + 1 >= 8 && step % 4 == 0);
                if check_now {
                    let (tvals, tvecs) = tridiag_eigen(&alphas, &betas, true)?;
                    let m = tvals.len();
                    let top = tvals[m - 1];
                    let s_last = tvecs.as_ref().unwrap()[m - 1][m - 1];
                    ritz = top;
                    ritz_resid = (beta * s_last).abs();
                    if ritz_resid <= tol * scale_hint.max(top.abs()) || beta <= 1e-14 * scale_hint {
                        // Assemble the Ritz vector from the Krylov basis.
                        let coeffs = &tvecs.as_ref().unwrap()[m - 1];
                        let mut ritz_vec = vec![0.0; n];
                        for (c, b) in coeffs.iter().zip(&basis) {
                            for (x, y) in ritz_vec.iter_mut().zip(b) {
                                *x += c * y;
                            }
                        }
                        orthogonalize(&mut ritz_vec, &vectors);
                        let nrm = norm(&ritz_vec);
                        if nrm > 1e-200 {
                            for x in ritz_vec.iter_mut() {
                                *x /= nrm;
                            }
                            values.push(ritz);
                            vectors.push(ritz_vec);
                            converged = true;
                        }
                        break;
                    }
                }

                betas.push(beta);
                if beta <= 1e-300 {
                    break;
                }
                v = w.iter().map(|y| y / beta).collect();
            }
            if converged {
                break;
            }
            if attempt == 2 {
                return Err(Error::NoConvergence(format!(
                    "Lanczos failed for eigenpair {found} (last Ritz {ritz:.6e}, residual {ritz_resid:.3e})"
                )));
            }
        }
    }

    // Largest-first ordering; restarts already produce it, but make it firm.
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&i, &j| values[j].partial_cmp(&values[i]).unwrap());
    let values: Vec<f64> = order.iter().map(|&i| values[i]).collect();
    let vectors: Vec<Vec<f64>> = order.iter().map(|&i| vectors[i].clone()).collect();
    Ok((values, vectors))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::dense::{symmetric_eigen, DMat};

    #[test]
    fn matches_jacobi_on_random_spd() {
        let n = 80;
        let mut state = 99_u64;
        let mut rnd = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        // SPD matrix B^T B + small shift.
        let b = DMat::from_fn(n, |_, _| rnd());
        let mut m = DMat::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = 0.0;
                for l in 0..n {
                    acc += b.get(l, i) * b.get(l, j);
                }
                m.set(i, j, acc + if i == j { 0.01 } else { 0.0 });
            }
        }
        let full = symmetric_eigen(&m).unwrap();
        let (vals, vecs) =
            deflated_lanczos_topk(n, 5, |x, y| m.mul_vec(x, y), 1e-13, 200).unwrap();
        for j in 0..5 {
            assert!(
                (vals[j] - full.eigenvalues[j]).abs() <= 1e-9 * full.eigenvalues[0],
                "lambda_{j}: {} vs {}",
                vals[j],
                full.eigenvalues[j]
            );
        }
        let mut av = vec![0.0; n];
        for (lam, v) in vals.iter().zip(&vecs) {
            m.mul_vec(v, &mut av);
            let resid: f64 = av
                .iter()
                .zip(v)
                .map(|(a, x)| (a - lam * x) * (a - lam * x))
                .sum::<f64>()
                .sqrt();
            assert!(resid <= 1e-8 * full.eigenvalues[0], "residual {resid:.3e}");
        }
    }

    #[test]
    fn resolves_degenerate_pairs() {
        // diag(4, 4, 3, 1, ...): the double eigenvalue must appear twice.
        let n = 30;
        let m = DMat::from_fn(n, |i, j| {
            if i != j {
                0.0
            } else if i < 2 {
                4.0
            } else if i == 2 {
                3.0
            } else {
                1.0 / (i + 1) as f64
            }
        });
        let (vals, vecs) = deflated_lanczos_topk(n, 3, |x, y| m.mul_vec(x, y), 1e-13, 100).unwrap();
        assert!((vals[0] - 4.0).abs() < 1e-10);
        assert!((vals[1] - 4.0).abs() < 1e-10);
        assert!((vals[2] - 3.0).abs() < 1e-10);
        let d01 = dot(&vecs[0], &vecs[1]).abs();
        assert!(d01 < 1e-8, "degenerate eigenvectors must be orthogonal, got {d01:.3e}");
    }
}
