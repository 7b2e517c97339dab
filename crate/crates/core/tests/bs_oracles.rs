//! Independent oracles for the boundary-integral solver: the analytic
//! circle spectrum through Bessel products, and a brute-force graded-mesh
//! trapezoid discretization for open arcs.

use leaky_gap_core::bs::{assemble, bs_spectrum, solve_bound_state};
use leaky_gap_core::geometry::{build_curve, CurveSpec};
use leaky_gap_core::numerics::{adaptive_integrate, deflated_lanczos_topk};
use leaky_gap_core::specfun::{i0, i1, k0, k1};

/// Brute-force reference for the largest eigenvalue of the operator on a
/// segment of length `l`: power-graded trapezoid mesh, symmetrized weights,
/// diagonal cells integrated adaptively. Entirely independent of the
/// production Nyström path.
fn graded_mesh_lambda_max(l: f64, kappa: f64, m: usize) -> f64 {
    let q = 2.0;
    let grade = |t: f64| -> f64 {
        let a = t.powf(q);
        let b = (1.0 - t).powf(q);
        a / (a + b)
    };
    let s: Vec<f64> = (0..=m).map(|i| l * grade(i as f64 / m as f64)).collect();
    // Cell weights from the midpoints.
    let mut w = vec![0.0; m + 1];
    for i in 0..=m {
        let lo = if i == 0 { s[0] } else { 0.5 * (s[i - 1] + s[i]) };
        let hi = if i == m { s[m] } else { 0.5 * (s[i] + s[i + 1]) };
        w[i] = hi - lo;
    }
    let two_pi = 2.0 * std::f64::consts::PI;
    let n = m + 1;
    let mut mat = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let g = k0(kappa * (s[i] - s[j]).abs()) / two_pi;
            mat[i * n + j] = g * (w[i] * w[j]).sqrt();
        }
    }
    for i in 0..n {
        let lo = if i == 0 { s[0] } else { 0.5 * (s[i - 1] + s[i]) };
        let hi = if i == m { s[m] } else { 0.5 * (s[i] + s[i + 1]) };
        let cell = adaptive_integrate(
            |t: f64| k0(kappa * (t - s[i]).abs().max(1e-300)) / two_pi,
            lo,
            hi,
            1e-13,
        )
        .unwrap();
        mat[i * n + i] = cell; // sqrt(w_i w_i) / w_i * integral
    }
    let (vals, _) = deflated_lanczos_topk(
        n,
        1,
        |x, y| {
            for i in 0..n {
                let mut acc = 0.0;
                for j in 0..n {
                    acc += mat[i * n + j] * x[j];
                }
                y[i] = acc;
            }
        },
        1e-12,
        300,
    )
    .unwrap();
    vals[0]
}

#[test]
fn segment_lambda_max_against_graded_mesh() {
    let spec = CurveSpec::segment([-1.0, 0.0], [1.0, 0.0]);
    let curve = build_curve(&spec, 256).unwrap();
    let disc = assemble(&curve, 1.0, 128).unwrap();
    let (vals, _) = bs_spectrum(&disc, 1).unwrap();

    // The graded trapezoid converges first order in the cell count; one
    // Richardson step gives a clean reference.
    let coarse = graded_mesh_lambda_max(2.0, 1.0, 2000);
    let fine = graded_mesh_lambda_max(2.0, 1.0, 4000);
    let reference = 2.0 * fine - coarse;
    assert!(
        (vals[0] - reference).abs() < 1e-5,
        "nystrom {} vs graded-mesh {} (diff {:.2e})",
        vals[0],
        reference,
        (vals[0] - reference).abs()
    );
}

#[test]
fn circle_branches_against_bessel_products() {
    // lambda_m(kappa) = a I_m(kappa a) K_m(kappa a); the m = 0, 1 branches
    // come from the series/CF implementations directly.
    let curve = build_curve(&CurveSpec::circle(1.0), 256).unwrap();
    for &kappa in &[0.7, 1.3, 3.0, 8.0] {
        let disc = assemble(&curve, kappa, 128).unwrap();
        let (vals, _) = bs_spectrum(&disc, 3).unwrap();
        let l0 = i0(kappa) * k0(kappa);
        let l1 = i1(kappa) * k1(kappa);
        assert!((vals[0] - l0).abs() < 1e-10, "kappa {kappa}: {} vs {l0}", vals[0]);
        assert!((vals[1] - l1).abs() < 1e-10, "kappa {kappa}: {} vs {l1}", vals[1]);
        assert!((vals[2] - l1).abs() < 1e-10, "m = 1 is twofold degenerate");
    }
}

#[test]
fn weak_coupling_segment_has_single_state() {
    // Small alpha keeps exactly one shallow state above the scan floor.
    let spec = CurveSpec::segment([-1.0, 0.0], [1.0, 0.0]);
    let curve = build_curve(&spec, 128).unwrap();
    let alpha = 0.5;
    let ground = solve_bound_state(&curve, alpha, 0, 128, 1e-9).unwrap();
    assert!(ground.energy < 0.0);
    assert!(matches!(
        solve_bound_state(&curve, alpha, 1, 128, 1e-9),
        Err(leaky_gap_core::Error::StateNotFound { .. })
    ));
}

#[test]
fn state_count_nondecreasing_in_alpha() {
    let curve = build_curve(&CurveSpec::circle(1.0), 128).unwrap();
    let mut prev = 0;
    for &alpha in &[2.0, 5.0, 10.0] {
        let res = leaky_gap_core::bs::discrete_spectrum(&curve, alpha, 96, 1e-3 * alpha).unwrap();
        assert!(
            res.n_states >= prev,
            "count dropped from {prev} to {} at alpha {alpha}",
            res.n_states
        );
        prev = res.n_states;
        // Ordering invariant.
        for w in res.states.windows(2) {
            assert!(w[0].energy < w[1].energy);
        }
        assert!(res.states.last().unwrap().energy < 0.0);
    }
}

#[test]
fn branch_values_continuous_in_kappa() {
    // Coarse continuity scan: adjacent kappa samples stay within the local
    // slope bound, and every branch decreases.
    let curve = build_curve(&CurveSpec::circle(1.0), 128).unwrap();
    let kappas: Vec<f64> = (0..8).map(|i| 0.4 * 1.5_f64.powi(i)).collect();
    let mut prev: Option<Vec<f64>> = None;
    for &k in &kappas {
        let disc = assemble(&curve, k, 96).unwrap();
        let (vals, _) = bs_spectrum(&disc, 5).unwrap();
        if let Some(p) = prev {
            for (a, b) in p.iter().zip(&vals) {
                assert!(b < a, "branch must decrease: {a} -> {b} at kappa {k}");
            }
        }
        prev = Some(vals);
    }
}
