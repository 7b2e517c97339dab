//! Symmetric tridiagonal eigensolver (implicit QL with Wilkinson shifts).

use crate::error::{Error, Result};

/// Eigen decomposition of a symmetric tridiagonal matrix with diagonal `d`
/// and off-diagonal `e` (`e[i]` couples rows `i` and `i+1`).
///
/// Returns eigenvalues in ascending order; `vectors[j]` is the eigenvector
/// for `values[j]`.
pub fn tridiag_eigen(
    d: &[f64],
    e: &[f64],
    want_vectors: bool,
) -> Result<(Vec<f64>, Option<Vec<Vec<f64>>>)> {
    let n = d.len();
    assert!(n == 0 || e.len() == n - 1, "off-diagonal length mismatch");
    if n == 0 {
        return Ok((vec![], if want_vectors { Some(vec![]) } else { None }));
    }

    let mut dd = d.to_vec();
    let mut ee = vec![0.0; n];
    ee[..n - 1].copy_from_slice(e);

    // z[row][col]: accumulated rotations; column col ends up the eigenvector.
    let mut z: Vec<Vec<f64>> = if want_vectors {
        (0..n)
            .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
            .collect()
    } else {
        Vec::new()
    };

    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let scale = dd[m].abs() + dd[m + 1].abs();
                if ee[m].abs() <= f64::EPSILON * scale {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 50 {
                return Err(Error::NoConvergence("tridiagonal QL exceeded 50 iterations".into()));
            }

            let mut g = (dd[l + 1] - dd[l]) / (2.0 * ee[l]);
            let mut r = g.hypot(1.0);
            g = dd[m] - dd[l] + ee[l] / (g + r.copysign(g));
            let (mut s, mut c) = (1.0_f64, 1.0_f64);
            let mut p = 0.0;
            let mut underflow_break = false;

            for i in (l..m).rev() {
                let mut f = s * ee[i];
                let b = c * ee[i];
                r = f.hypot(g);
                ee[i + 1] = r;
                if r == 0.0 {
                    dd[i + 1] -= p;
                    ee[m] = 0.0;
                    underflow_break = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = dd[i + 1] - p;
                r = (dd[i] - g) * s + 2.0 * c * b;
                p = s * r;
                dd[i + 1] = g + p;
                g = c * r - b;
                if want_vectors {
                    for row in z.iter_mut() {
                        f = row[i + 1];
                        row[i + 1] = s * row[i] + c * f;
                        row[i] = c * row[i] - s * f;
                    }
                }
            }
            if underflow_break {
                continue;
            }
            dd[l] -= p;
            ee[l] = g;
            ee[m] = 0.0;
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| dd[i].partial_cmp(&dd[j]).unwrap());
    let values: Vec<f64> = order.iter().map(|&i| dd[i]).collect();
    let vectors = if want_vectors {
        Some(
            order
                .iter()
                .map(|&col| (0..n).map(|row| z[row][col]).collect())
                .collect(),
        )
    } else {
        None
    };
    Ok((values, vectors))
}
