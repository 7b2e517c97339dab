//! Nyström discretization of the Birman-Schwinger operator on the curve and
//! the bound-state solver built on top of it.
//!
//! The operator acts on densities over the curve with kernel
//! `K0(kappa |x - x'|) / 2 pi`. Closed curves use equispaced arc-length
//! nodes and the periodic trapezoid with logarithmic correction weights,
//! after splitting `K0(kappa r) = -ln(r) I0(kappa r) + smooth`. Open curves
//! use the cosine substitution `s = L (1 - cos u) / 2`: it grades the mesh
//! toward the endpoints, absorbs the inverse-square-root density
//! singularity, and turns the arc into an even periodic problem to which
//! the same correction weights apply after folding the reflected nodes.
//!
//! A bound state of the Hamiltonian at coupling `alpha` is a solution of
//! `alpha lambda_j(kappa) = 1`; each branch is strictly decreasing in
//! `kappa`, so bracketing plus Brent iteration pins `kappa_j` and the energy
//! `E_j = -kappa_j^2`.

use crate::error::{Error, Result};
use crate::geometry::Curve;
use crate::numerics::{
    bracket_root, deflated_lanczos_topk, periodic_log_quadrature, symmetric_eigen, DMat,
};
use crate::specfun::{i0, k0, EULER_GAMMA};

/// Taper scale of the kernel split. The log coefficient carries
/// `I0(kappa r)`, which grows like `e^{kappa r}` and would poison the split
/// with cancellation noise at large separations where the kernel is smooth
/// anyway. A super-Gaussian factor `exp(-(z/8)^6)` caps the coefficient near
/// 160 while staying entire with value exactly 1 at the diagonal, so the
/// smooth remainder keeps a `z^6 ln z` defect only — below quadrature
/// resolution at the node counts in use.
const TAPER_SCALE: f64 = 8.0;

fn split_window(z: f64) -> f64 {
    let t = z / TAPER_SCALE;
    let t2 = t * t;
    (-t2 * t2 * t2).exp()
}

/// Log-singularity coefficient `-(1/4pi) I0(z) chi(z)`; identically zero
/// once the taper underflows (z > 15).
fn log_coefficient(z: f64) -> f64 {
    if z >= 15.0 {
        0.0
    } else {
        -i0(z) * split_window(z) / (4.0 * std::f64::consts::PI)
    }
}

/// Symmetric Nyström matrix of the Birman-Schwinger operator at fixed
/// `kappa`, together with the node positions and the quadrature weights of
/// the `L^2(sigma_Gamma)` inner product.
#[derive(Debug, Clone)]
pub struct BsDiscretization {
    pub kappa: f64,
    pub n: usize,
    /// Arc-length node positions.
    pub nodes: Vec<f64>,
    /// Weights: `sum_i weights[i] f(s_i)` approximates the line integral.
    pub weights: Vec<f64>,
    /// Weight-symmetrized matrix; its eigenvalues approximate the operator
    /// spectrum on `L^2(sigma_Gamma)`.
    pub matrix: DMat,
    pub closed: bool,
}

/// One bound state `E_j = -kappa_j^2` with its boundary charge density.
#[derive(Debug, Clone)]
pub struct BoundState {
    pub index: usize,
    pub alpha: f64,
    pub energy: f64,
    pub kappa: f64,
    /// Charge density at the nodes, normalized in `L^2(sigma_Gamma)`. The
    /// ground-state density is sign-fixed positive.
    pub charge: Vec<f64>,
    /// Node positions and weights carried over from the discretization.
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub closed: bool,
    pub curve_length: f64,
    /// `|alpha lambda_j(R^kappa) - 1|` at the converged root.
    pub bs_eigenvalue_residual: f64,
}

/// All bound states found above a given `kappa_min`.
#[derive(Debug, Clone)]
pub struct SpectralResult {
    pub alpha: f64,
    /// States sorted ascending in energy (deepest first).
    pub states: Vec<BoundState>,
    pub n_states: usize,
    pub n_nodes: usize,
    pub kappa_min: f64,
}

/// Assembles the Nyström matrix at spectral parameter `kappa`.
pub fn assemble(curve: &Curve, kappa: f64, n: usize) -> Result<BsDiscretization> {
    if !(kappa > 0.0) {
        return Err(Error::Domain(format!("assemble requires kappa > 0, got {kappa}")));
    }
    if n < 32 || n % 2 != 0 {
        return Err(Error::Domain(format!("assemble requires even n >= 32, got {n}")));
    }
    if curve.closed {
        assemble_closed(curve, kappa, n)
    } else {
        assemble_open(curve, kappa, n)
    }
}

fn assemble_closed(curve: &Curve, kappa: f64, n: usize) -> Result<BsDiscretization> {
    let length = curve.length;
    let two_pi = 2.0 * std::f64::consts::PI;
    let quad = periodic_log_quadrature(n)?;

    let nodes: Vec<f64> = (0..n).map(|i| length * i as f64 / n as f64).collect();
    let pts: Vec<[f64; 2]> = nodes.iter().map(|&s| curve.point_at(s)).collect();
    let lnsin: Vec<f64> = (0..n)
        .map(|k| {
            if k == 0 {
                0.0
            } else {
                let s = (std::f64::consts::PI * k as f64 / n as f64).sin();
                (4.0 * s * s).ln()
            }
        })
        .collect();

    // b(s, s) = (1/2pi)(-gamma_E - ln(kappa L / 4 pi)) in the angle variable.
    let diag_smooth = (-EULER_GAMMA - (kappa * length / (2.0 * two_pi)).ln()) / two_pi;
    let jac = length / two_pi;

    let mut matrix = DMat::zeros(n);
    {
        let rows: Vec<&mut [f64]> = matrix.rows_mut().collect();
        par_rows(rows, |i, row| {
            for (j, rj) in row.iter_mut().enumerate() {
                let k = if i >= j { i - j } else { j - i };
                if i == j {
                    *rj = jac * (quad.log_weights[0] * log_coefficient(0.0) + quad.plain * diag_smooth);
                } else {
                    let dx = pts[i][0] - pts[j][0];
                    let dy = pts[i][1] - pts[j][1];
                    let r = (dx * dx + dy * dy).sqrt();
                    let z = kappa * r;
                    let a = log_coefficient(z);
                    let b = k0(z) / two_pi - a * lnsin[k];
                    *rj = jac * (quad.log_weights[k] * a + quad.plain * b);
                }
            }
        });
    }
    symmetrize(&mut matrix);

    let weights = vec![length / n as f64; n];
    Ok(BsDiscretization { kappa, n, nodes, weights, matrix, closed: true })
}

fn assemble_open(curve: &Curve, kappa: f64, n: usize) -> Result<BsDiscretization> {
    let length = curve.length;
    let two_pi = 2.0 * std::f64::consts::PI;
    let big_n = 2 * n;
    let quad = periodic_log_quadrature(big_n)?;

    // Offset nodes in (0, pi); the reflected half makes up the full circle.
    let u: Vec<f64> = (0..n)
        .map(|i| std::f64::consts::PI * (2 * i + 1) as f64 / big_n as f64)
        .collect();
    let nodes: Vec<f64> = u.iter().map(|&ui| 0.5 * length * (1.0 - ui.cos())).collect();
    let jacobian: Vec<f64> = u.iter().map(|&ui| 0.5 * length * ui.sin()).collect();
    let pts: Vec<[f64; 2]> = nodes.iter().map(|&s| curve.point_at(s)).collect();

    // ln(4 sin^2(pi k / (2n))) for k = 1..2n-1 serves both index offsets.
    let lnsin: Vec<f64> = (0..big_n)
        .map(|k| {
            if k == 0 {
                0.0
            } else {
                let s = (std::f64::consts::PI * k as f64 / big_n as f64).sin();
                (4.0 * s * s).ln()
            }
        })
        .collect();

    let diag_smooth = (-EULER_GAMMA - (kappa * length / 8.0).ln()) / two_pi;

    let mut matrix = DMat::zeros(n);
    {
        let rows: Vec<&mut [f64]> = matrix.rows_mut().collect();
        par_rows(rows, |i, row| {
            for (j, rj) in row.iter_mut().enumerate() {
                let kd = if i >= j { i - j } else { j - i };
                let ks = i + j + 1;
                // The direct and the reflected node carry the same kernel;
                // folding sums their log weights and doubles the coefficient.
                let wlog = 0.5 * (quad.log_weights[kd] + quad.log_weights[ks]);
                let (coeff, smooth) = if i == j {
                    // Both logs combine with the kernel singularity; the
                    // Jacobian factor sin(u) cancels in the limit.
                    (2.0 * log_coefficient(0.0), diag_smooth)
                } else {
                    let dx = pts[i][0] - pts[j][0];
                    let dy = pts[i][1] - pts[j][1];
                    let z = kappa * (dx * dx + dy * dy).sqrt();
                    let lc = log_coefficient(z);
                    (2.0 * lc, k0(z) / two_pi - lc * (lnsin[kd] + lnsin[ks]))
                };
                *rj = (wlog * coeff + quad.plain * smooth) * (jacobian[i] * jacobian[j]).sqrt();
            }
        });
    }
    symmetrize(&mut matrix);

    let weights: Vec<f64> = jacobian.iter().map(|j| quad.plain * j).collect();
    Ok(BsDiscretization { kappa, n, nodes, weights, matrix, closed: false })
}

fn symmetrize(m: &mut DMat) {
    let n = m.n();
    for i in 0..n {
        for j in (i + 1)..n {
            let v = 0.5 * (m.get(i, j) + m.get(j, i));
            m.set(i, j, v);
            m.set(j, i, v);
        }
    }
}

fn par_rows(rows: Vec<&mut [f64]>, f: impl Fn(usize, &mut [f64]) + Sync) {
    use rayon::prelude::*;
    rows.into_par_iter().enumerate().for_each(|(i, row)| f(i, row));
}

/// Top-`k` eigenpairs of the discretized operator: eigenvalues descending,
/// charge densities orthonormal in the weighted inner product.
pub fn bs_spectrum(disc: &BsDiscretization, k: usize) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    if k > disc.n {
        return Err(Error::Domain(format!("requested {k} eigenpairs from an {}-point grid", disc.n)));
    }
    let (values, vectors) = if disc.n <= 320 || k > disc.n / 6 {
        let full = symmetric_eigen(&disc.matrix)?;
        (full.eigenvalues[..k].to_vec(), full.eigenvectors[..k].to_vec())
    } else {
        deflated_lanczos_topk(disc.n, k, |x, y| disc.matrix.mul_vec(x, y), 1e-13, 260)?
    };
    let densities: Vec<Vec<f64>> = vectors
        .iter()
        .map(|v| {
            v.iter()
                .zip(&disc.weights)
                .map(|(x, w)| x / w.sqrt())
                .collect()
        })
        .collect();
    Ok((values, densities))
}

/// `lambda_j` of the operator at given `kappa`, values only.
fn branch_value(curve: &Curve, kappa: f64, j: usize, n: usize) -> Result<f64> {
    let disc = assemble(curve, kappa, n)?;
    let (values, _) = deflated_lanczos_topk(disc.n, j + 1, |x, y| disc.matrix.mul_vec(x, y), 1e-12, 260)?;
    Ok(values[j])
}

/// Default scan floor: keeps the solver away from the logarithmic blow-up
/// of the kernel as `kappa -> 0`.
pub fn default_kappa_min(alpha: f64) -> f64 {
    1e-3 * alpha
}

/// Solves `alpha lambda_j(kappa) = 1` for the `j`-th branch.
pub fn solve_bound_state(
    curve: &Curve,
    alpha: f64,
    j: usize,
    n: usize,
    tol: f64,
) -> Result<BoundState> {
    solve_bound_state_from(curve, alpha, j, n, tol, default_kappa_min(alpha))
}

pub fn solve_bound_state_from(
    curve: &Curve,
    alpha: f64,
    j: usize,
    n: usize,
    tol: f64,
    kappa_min: f64,
) -> Result<BoundState> {
    if !(alpha > 0.0) {
        return Err(Error::Domain(format!("alpha must be positive, got {alpha}")));
    }
    let lo = kappa_min.max(1e-12);
    let h = |kappa: f64| -> Result<f64> { Ok(alpha * branch_value(curve, kappa, j, n)? - 1.0) };

    if h(lo)? <= 0.0 {
        return Err(Error::StateNotFound { j, alpha, kappa_min: lo });
    }
    let mut hi = alpha.max(2.0 * lo);
    let mut iter = 0;
    while h(hi)? > 0.0 {
        hi *= 2.0;
        iter += 1;
        if iter > 24 {
            return Err(Error::NoConvergence(format!(
                "branch {j} shows no crossing up to kappa = {hi}"
            )));
        }
    }

    let mut inner_err: Option<Error> = None;
    let kappa_j = bracket_root(
        |kappa| match branch_value(curve, kappa, j, n) {
            Ok(v) => alpha * v - 1.0,
            Err(e) => {
                inner_err = Some(e);
                0.0
            }
        },
        lo,
        hi,
        tol,
    )?;
    if let Some(e) = inner_err {
        return Err(e);
    }

    let disc = assemble(curve, kappa_j, n)?;
    let (values, densities) = bs_spectrum(&disc, j + 1)?;
    let mut charge = densities[j].clone();
    let residual = (alpha * values[j] - 1.0).abs();

    // Perron sign convention for the ground state; excited states are
    // sign-fixed by their first node for determinism.
    let mean: f64 = charge.iter().zip(&disc.weights).map(|(c, w)| c * w).sum();
    let flip = if j == 0 { mean < 0.0 } else { charge[0] < 0.0 };
    if flip {
        for c in charge.iter_mut() {
            *c = -*c;
        }
    }
    if j == 0 && charge.iter().any(|&c| c <= 0.0) {
        return Err(Error::NoConvergence(
            "ground-state charge density is not strictly positive".into(),
        ));
    }

    Ok(BoundState {
        index: j,
        alpha,
        energy: -kappa_j * kappa_j,
        kappa: kappa_j,
        charge,
        nodes: disc.nodes,
        weights: disc.weights,
        closed: disc.closed,
        curve_length: curve.length,
        bs_eigenvalue_residual: residual,
    })
}

/// Finds every bound state with `kappa_j > kappa_min`: counts the
/// Birman-Schwinger eigenvalues above `1/alpha` at the scan floor, then
/// solves each branch.
pub fn discrete_spectrum(
    curve: &Curve,
    alpha: f64,
    n: usize,
    kappa_min: f64,
) -> Result<SpectralResult> {
    if !(kappa_min > 0.0) {
        return Err(Error::Domain(format!("kappa_min must be positive, got {kappa_min}")));
    }
    let disc = assemble(curve, kappa_min, n)?;
    let full = symmetric_eigen(&disc.matrix)?;
    let count = full
        .eigenvalues
        .iter()
        .take_while(|&&v| alpha * v > 1.0 + 1e-12)
        .count();

    let mut states = Vec::with_capacity(count);
    for j in 0..count {
        let state = solve_bound_state_from(curve, alpha, j, n, 1e-10, kappa_min).map_err(|e| {
            Error::NoConvergence(format!(
                "branch {j} counted at kappa_min = {kappa_min} but failed to solve: {e}"
            ))
        })?;
        states.push(state);
    }
    states.sort_by(|a, b| a.energy.partial_cmp(&b.energy).unwrap());
    Ok(SpectralResult { alpha, n_states: states.len(), states, n_nodes: n, kappa_min })
}
