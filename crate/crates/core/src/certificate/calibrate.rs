//! Calibration of the "absolute" constants `eta0` and `beta0` over a
//! declared parameter domain, and the technical function
//! `xi(b, kappa0, rho) = b (S + alpha c4 (|ln b| + 1)) T D (T D + 1)`.
//!
//! `eta0` is the smallest exponent for which the square-variation condition
//! behind the norm lower bound holds on the whole grid: a path of length
//! `4b` times the gradient bound stays below 1/2 at
//! `b = rho e^{-eta rho} / ((c5 a + 1)^2 (k^2 + 1))`. `beta0 >= 2 eta0 + 5`
//! is then pushed up until `sup xi(b_beta) <= 1/4` with margin and
//! `b_beta <= min(1, b1)` everywhere.

use super::logdomain::LogVal;
use super::{d_factor_ln, s_script_ln, t_factor_ln, zeta, CurveConstants};
use crate::error::{Error, Result};

/// Declared `(alpha, kappa0, rho)` ranges for the calibration. The `rho`
/// axis starts at `kappa0` (the enclosing radius is at least 1).
#[derive(Debug, Clone, Copy)]
pub struct CalibrationDomain {
    pub alpha: (f64, f64),
    pub n_alpha: usize,
    pub kappa0: (f64, f64),
    pub n_kappa: usize,
    pub rho_max: f64,
    pub n_rho: usize,
}

impl Default for CalibrationDomain {
    fn default() -> Self {
        Self {
            alpha: (0.5, 64.0),
            n_alpha: 8,
            kappa0: (0.02, 32.0),
            n_kappa: 13,
            rho_max: 48.0,
            n_rho: 12,
        }
    }
}

impl CalibrationDomain {
    /// Doubles every axis resolution; used for re-verification.
    pub fn refined(&self) -> Self {
        Self {
            n_alpha: self.n_alpha * 2,
            n_kappa: self.n_kappa * 2,
            n_rho: self.n_rho * 2,
            ..*self
        }
    }

    fn grid(&self) -> Vec<(f64, f64, f64)> {
        let logspace = |lo: f64, hi: f64, n: usize| -> Vec<f64> {
            (0..n)
                .map(|i| lo * (hi / lo).powf(i as f64 / (n - 1).max(1) as f64))
                .collect()
        };
        let mut pts = Vec::new();
        for &a in &logspace(self.alpha.0, self.alpha.1, self.n_alpha) {
            for &k in &logspace(self.kappa0.0, self.kappa0.1, self.n_kappa) {
                for &r in &logspace(k, self.rho_max.max(2.0 * k), self.n_rho) {
                    pts.push((a, k, r));
                }
            }
        }
        pts
    }
}

#[derive(Debug, Clone, Copy)]
pub struct CalibrationResult {
    pub eta0: f64,
    pub beta0: f64,
    /// Supremum of `xi(b_beta0)` over the calibration grid.
    pub xi_sup: f64,
    /// Supremum of `b_beta0` over the grid.
    pub b_beta_sup: f64,
}

/// `xi` in the log domain; `b` must lie in `(0, 1/e)`.
pub fn xi_eval_ln(
    cc: &CurveConstants,
    b_ln: f64,
    kappa0: f64,
    rho: f64,
    alpha: f64,
    eta0: f64,
) -> LogVal {
    let s = s_script_ln(cc, kappa0, rho, alpha);
    let log_term = LogVal::of(alpha * cc.cg4 * (b_ln.abs() + 1.0));
    let t = t_factor_ln(cc, kappa0, rho, alpha);
    let d = d_factor_ln(eta0, rho);
    let td = t.mul(d);
    LogVal::from_ln(b_ln)
        .mul(s.add(log_term))
        .mul(td)
        .mul(td.add_one())
}

/// `xi` as an f64 (may underflow to 0 or overflow to infinity; the log
/// variant is authoritative).
pub fn xi_eval(cc: &CurveConstants, b: f64, kappa0: f64, rho: f64, alpha: f64, eta0: f64) -> Result<f64> {
    if !(b > 0.0 && b < (-1.0_f64).exp()) {
        return Err(Error::Domain(format!("xi needs b in (0, 1/e), got {b}")));
    }
    Ok(xi_eval_ln(cc, b.ln(), kappa0, rho, alpha, eta0).value())
}

/// `ln b_beta` at a grid point.
pub fn b_beta_ln(cc: &CurveConstants, kappa0: f64, rho: f64, alpha: f64, beta: f64) -> f64 {
    2.0 * (kappa0 * rho).ln() + rho.ln()
        - 6.0 * (alpha * cc.cg5 + 1.0).ln()
        - 4.0 * (kappa0 * kappa0 + 1.0).ln()
        - zeta(kappa0).ln()
        - beta * rho
}

/// Runs the two-stage calibration. Fails with the first violating grid
/// point if the search caps out.
pub fn calibrate(cc: &CurveConstants, domain: &CalibrationDomain) -> Result<CalibrationResult> {
    let grid = domain.grid();
    let b_cap_ln = cc.b1.min(1.0).ln().min(-1.0) - 1e-9;

    // Stage 1: eta0 by scan. The condition is monotone in eta, so the first
    // passing value on the grid is the calibrated constant.
    let eta_ok = |eta: f64| -> bool {
        grid.iter().all(|&(alpha, kappa, rho)| {
            let b_ln = rho.ln() - eta * rho - 2.0 * (cc.cg5 * alpha + 1.0).ln() - (kappa * kappa + 1.0).ln();
            if b_ln > b_cap_ln {
                return false;
            }
            let s = s_script_ln(cc, kappa, rho, alpha);
            let g = s.add(LogVal::of(alpha * cc.cg4 * (b_ln.abs() + 1.0)));
            // 4 b (S + grad log term) <= 1/2
            (4.0_f64).ln() + b_ln + g.ln <= -(2.0_f64).ln()
        })
    };
    let mut eta0 = f64::NAN;
    let mut eta = 0.05;
    while eta <= 64.0 {
        if eta_ok(eta) {
            eta0 = eta;
            break;
        }
        eta += 0.05;
    }
    if !eta0.is_finite() {
        return Err(Error::Calibration("eta search exhausted at eta = 64".into()));
    }

    // Stage 2: beta0 with a 5% margin against the quarter bound, so a
    // refined grid cannot flip the verdict.
    let beta_stats = |beta: f64| -> (f64, f64) {
        let mut xi_sup = f64::NEG_INFINITY;
        let mut b_sup = f64::NEG_INFINITY;
        for &(alpha, kappa, rho) in &grid {
            let b_ln = b_beta_ln(cc, kappa, rho, alpha, beta);
            b_sup = b_sup.max(b_ln);
            xi_sup = xi_sup.max(xi_eval_ln(cc, b_ln.min(-1.0 - 1e-12), kappa, rho, alpha, eta0).ln);
        }
        (xi_sup, b_sup)
    };
    let quarter_margin = (0.25 * 0.95_f64).ln();
    let mut beta = (2.0 * eta0 + 5.0 + 0.25).ceil();
    let mut result = None;
    while beta <= 1e4 {
        let (xi_sup_ln, b_sup_ln) = beta_stats(beta);
        if xi_sup_ln <= quarter_margin && b_sup_ln <= b_cap_ln {
            result = Some(CalibrationResult {
                eta0,
                beta0: beta,
                xi_sup: xi_sup_ln.exp(),
                b_beta_sup: b_sup_ln.exp(),
            });
            break;
        }
        beta += 0.25;
    }
    result.ok_or_else(|| {
        let (xi_sup_ln, b_sup_ln) = beta_stats(1e4);
        Error::Calibration(format!(
            "beta search exhausted at 1e4 (sup ln xi = {xi_sup_ln:.3}, sup ln b = {b_sup_ln:.3})"
        ))
    })
}

/// Re-verifies a calibrated pair on a refined grid: `xi <= 1/4` and
/// `b_beta <= min(1, b1)` must hold everywhere.
pub fn verify_calibration(
    cc: &CurveConstants,
    calib: &CalibrationResult,
    domain: &CalibrationDomain,
) -> Result<(f64, f64)> {
    let grid = domain.grid();
    let mut xi_sup_ln = f64::NEG_INFINITY;
    let mut b_sup_ln = f64::NEG_INFINITY;
    for &(alpha, kappa, rho) in &grid {
        let b_ln = b_beta_ln(cc, kappa, rho, alpha, calib.beta0);
        b_sup_ln = b_sup_ln.max(b_ln);
        xi_sup_ln = xi_sup_ln.max(xi_eval_ln(cc, b_ln.min(-1.0 - 1e-12), kappa, rho, alpha, calib.eta0).ln);
    }
    if xi_sup_ln > (0.25_f64).ln() {
        return Err(Error::Calibration(format!(
            "refined grid breaks the quarter bound: sup xi = {:.6e}",
            xi_sup_ln.exp()
        )));
    }
    if b_sup_ln > cc.b1.min(1.0).ln() {
        return Err(Error::Calibration(format!(
            "refined grid breaks b_beta <= min(1, b1): sup b = {:.6e}",
            b_sup_ln.exp()
        )));
    }
    Ok((xi_sup_ln.exp(), b_sup_ln.exp()))
}
