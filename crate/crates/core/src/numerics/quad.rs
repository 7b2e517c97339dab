//! Quadrature rules: the periodic trapezoid with Martensen-Kussmaul
//! correction weights for logarithmic kernels, a fixed 7-point Gauss panel,
//! and an adaptive panel-splitting integrator.

use crate::error::{Error, Result};

/// Weights for periodic integrands of the form
/// `a(t) ln(4 sin^2((s - t)/2)) + b(t)` on an equispaced `n`-point grid.
///
/// The smooth part integrates with the plain trapezoid weight `2 pi / n`;
/// the logarithmic part uses `log_weights[|i - j|]`, which renders the rule
/// exact for trigonometric polynomials of degree below `n/2`.
#[derive(Debug, Clone)]
pub struct PeriodicLogWeights {
    pub n: usize,
    pub plain: f64,
    pub log_weights: Vec<f64>,
}

pub fn periodic_log_quadrature(n: usize) -> Result<PeriodicLogWeights> {
    if n < 16 || n % 2 != 0 {
        return Err(Error::Domain(format!(
            "periodic log quadrature needs even n >= 16, got {n}"
        )));
    }
    let nf = n as f64;
    let two_pi = 2.0 * std::f64::consts::PI;
    let half = n / 2;
    let mut log_weights = vec![0.0; n];
    for (k, w) in log_weights.iter_mut().enumerate() {
        let mut acc = 0.0;
        for m in 1..half {
            acc += (two_pi * (m * k) as f64 / nf).cos() / m as f64;
        }
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        *w = -(2.0 * two_pi / nf) * acc - (two_pi * 2.0 / (nf * nf)) * sign;
    }
    Ok(PeriodicLogWeights { n, plain: two_pi / nf, log_weights })
}

const G7_X: [f64; 7] = [
    -0.949_107_912_342_758_5,
    -0.741_531_185_599_394_4,
    -0.405_845_151_377_397_2,
    0.0,
    0.405_845_151_377_397_2,
    0.741_531_185_599_394_4,
    0.949_107_912_342_758_5,
];
const G7_W: [f64; 7] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
    0.381_830_050_505_118_9,
    0.279_705_391_489_276_7,
    0.129_484_966_168_869_7,
];

/// 7-point Gauss-Legendre rule on `[a, b]`. Nodes are interior, so endpoint
/// singularities of the integrand are never touched.
pub fn gauss7(f: &mut impl FnMut(f64) -> f64, a: f64, b: f64) -> f64 {
    let mid = 0.5 * (a + b);
    let hal = 0.5 * (b - a);
    let mut acc = 0.0;
    for (x, w) in G7_X.iter().zip(G7_W.iter()) {
        acc += w * f(mid + hal * x);
    }
    acc * hal
}

/// Adaptive integration of `f` over `[a, b]` to absolute tolerance `tol`.
///
/// Works on a panel list refined worst-first: each panel carries the defect
/// between its Gauss value and the sum over its halves, and splitting stops
/// once the summed defects drop below `tol`. Integrable endpoint
/// singularities are fine (Gauss nodes stay interior); a panel that reaches
/// split depth 50 without settling is a convergence failure.
pub fn adaptive_integrate(mut f: impl FnMut(f64) -> f64, a: f64, b: f64, tol: f64) -> Result<f64> {
    if !(b > a) {
        if b == a {
            return Ok(0.0);
        }
        return Err(Error::Domain(format!("adaptive_integrate needs b > a, got [{a}, {b}]")));
    }

    struct Panel {
        a: f64,
        b: f64,
        left: f64,
        right: f64,
        defect: f64,
        depth: usize,
    }
    fn make(f: &mut impl FnMut(f64) -> f64, a: f64, b: f64, whole: f64, depth: usize) -> Panel {
        let mid = 0.5 * (a + b);
        let left = gauss7(f, a, mid);
        let right = gauss7(f, mid, b);
        Panel { a, b, left, right, defect: (left + right - whole).abs(), depth }
    }

    let whole = gauss7(&mut f, a, b);
    let mut panels = vec![make(&mut f, a, b, whole, 0)];
    loop {
        let total_defect: f64 = panels.iter().map(|p| p.defect).sum();
        if total_defect <= tol || panels.len() > 100_000 {
            break;
        }
        let worst = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.defect.partial_cmp(&y.1.defect).unwrap())
            .map(|(i, _)| i)
            .unwrap();
        let p = panels.swap_remove(worst);
        if p.depth >= 50 {
            return Err(Error::NoConvergence(format!(
                "adaptive integration stalled on [{}, {}] (defect {:.3e}, tol {tol:.3e})",
                p.a, p.b, p.defect
            )));
        }
        let mid = 0.5 * (p.a + p.b);
        panels.push(make(&mut f, p.a, mid, p.left, p.depth + 1));
        panels.push(make(&mut f, mid, p.b, p.right, p.depth + 1));
    }
    Ok(panels.iter().map(|p| p.left + p.right).sum())
}
