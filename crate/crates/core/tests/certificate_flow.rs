//! End-to-end certificate flow on a light instance, plus determinism and
//! constant-chain monotonicity.

use leaky_gap_core::bs::solve_bound_state;
use leaky_gap_core::certificate::{
    calibrate, certified_bound, curve_constants, gap_identity_diagnostics, CalibrationDomain,
    GridOptions, WorstAnglePolicy,
};
use leaky_gap_core::geometry::{build_curve, geometry_summary, CurveSpec};

#[test]
fn circle_certificate_holds_with_huge_ratio() {
    let curve = build_curve(&CurveSpec::circle(1.0), 256).unwrap();
    let alpha = 10.0;
    let ground = solve_bound_state(&curve, alpha, 0, 128, 1e-10).unwrap();
    let excited = solve_bound_state(&curve, alpha, 1, 128, 1e-10).unwrap();

    let summary = geometry_summary(&curve);
    let cc = curve_constants(&summary, WorstAnglePolicy::WorstAdmissible).unwrap();
    let calib = calibrate(&cc, &CalibrationDomain::default()).unwrap();
    let cert = certified_bound(ground.energy, excited.energy, alpha, &cc, &calib).unwrap();

    assert!(cert.holds);
    assert!(cert.gap > 0.0);
    // The bound is astronomically conservative; the slack exceeds 1e6 by
    // construction of the constant chain.
    assert!(cert.ratio_log10 > 6.0, "log10 ratio = {}", cert.ratio_log10);
    assert!(cert.bound_log10 < 0.0);
    for d in &cert.diagnostics {
        assert!(d.pass, "diagnostic {} failed: {}", d.name, d.detail);
    }

    // Reassembled constants are monotone in the coupling: mu shrinks as
    // alpha grows with everything else fixed.
    let cert_stronger = certified_bound(ground.energy, excited.energy, 2.0 * alpha, &cc, &calib).unwrap();
    assert!(cert_stronger.constants.mu_ln < cert.constants.mu_ln);

    // Determinism: the serialized report is byte-identical across runs.
    let once = cert.to_json().to_text();
    let cert2 = certified_bound(ground.energy, excited.energy, alpha, &cc, &calib).unwrap();
    assert_eq!(once, cert2.to_json().to_text());
}

#[test]
fn gap_identity_on_light_instance() {
    let curve = build_curve(&CurveSpec::circle(1.0), 256).unwrap();
    let alpha = 10.0;
    let ground = solve_bound_state(&curve, alpha, 0, 128, 1e-10).unwrap();
    let excited = solve_bound_state(&curve, alpha, 1, 128, 1e-10).unwrap();
    let summary = geometry_summary(&curve);
    let cc = curve_constants(&summary, WorstAnglePolicy::WorstAdmissible).unwrap();

    let opts = GridOptions { spacing_frac: 60.0, n_probes: 120 };
    let report = gap_identity_diagnostics(&curve, &summary, &cc, &ground, &excited, opts).unwrap();
    assert!(report.quotient_rel_dev < 0.05, "quotient off by {:.3}", report.quotient_rel_dev);
    assert!(report.holder_ok);
    assert!(report.holder_lower > 0.0);
    assert_eq!(report.grad_bound_violations, 0);
    assert_eq!(report.leqgrad_violations, 0);
    assert!(report.min_psi0_on_ball > 0.0);
}

#[test]
fn certificate_refused_for_single_state() {
    let spec = CurveSpec::segment([-1.0, 0.0], [1.0, 0.0]);
    let curve = build_curve(&spec, 128).unwrap();
    let summary = geometry_summary(&curve);
    let cc = curve_constants(&summary, WorstAnglePolicy::WorstAdmissible).unwrap();
    let calib = calibrate(&cc, &CalibrationDomain::default()).unwrap();
    // Fabricated one-state input: the API refuses rather than certifying.
    assert!(matches!(
        certified_bound(-0.5, 0.3, 0.3, &cc, &calib),
        Err(leaky_gap_core::Error::CertificateRefused(_))
    ));
}
