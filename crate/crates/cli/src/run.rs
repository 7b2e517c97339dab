//! Command dispatch. Every command produces a `Report`: a JSON document
//! plus optional CSV tables, written under the output prefix.

use crate::config::{Command, JobConfig};
use leaky_gap_core::bs::{self, SpectralResult};
use leaky_gap_core::certificate::{
    calibrate, certified_bound, curve_constants, gap_identity_diagnostics, CalibrationDomain,
    GridOptions, WorstAnglePolicy,
};
use leaky_gap_core::comparison1d::{self, BoundaryCondition};
use leaky_gap_core::eigenfunction::{self, Normalization};
use leaky_gap_core::geometry::{build_curve, geometry_summary, Curve};
use leaky_gap_core::report::{format_float, Json};
use leaky_gap_core::{fd, Error};

#[derive(Debug, Clone)]
pub struct Report {
    pub json: Json,
    pub sweep_csv: Option<String>,
    pub field_csv: Option<String>,
    /// Set when a certificate was refused (one bound state); maps to exit 2.
    pub refused: bool,
}

impl Report {
    fn plain(json: Json) -> Self {
        Self { json, sweep_csv: None, field_csv: None, refused: false }
    }
}

pub fn run(cfg: &JobConfig) -> Result<Report, Error> {
    let curve = build_curve(&cfg.curve, cfg.n_nodes().max(128))?;
    match cfg.command {
        Command::Geometry => geometry_report(&curve),
        Command::Solve => solve_report(cfg, &curve),
        Command::Certify => certify_report(cfg, &curve),
        Command::Asymptotics => asymptotics_report(cfg, &curve),
        Command::Oracle => oracle_report(cfg, &curve),
        Command::Diagnostics => diagnostics_report(cfg, &curve),
    }
}

fn geometry_report(curve: &Curve) -> Result<Report, Error> {
    let g = geometry_summary(curve);
    let mut json = Json::obj();
    json.push("L", Json::num(g.length));
    json.push("K", Json::num(g.max_curvature));
    json.push("diameter", Json::num(g.diameter));
    json.push("R", Json::num(g.enclosing_radius));
    json.push("x0", Json::Arr(vec![Json::num(g.center[0]), Json::num(g.center[1])]));
    json.push("M_half", Json::num(g.m_half));
    if !g.closed {
        json.push("M_full", Json::num(g.m_full));
    }
    json.push("closed", Json::Bool(g.closed));
    Ok(Report::plain(json))
}

fn spectral_json(result: &SpectralResult) -> Json {
    let mut json = Json::obj();
    json.push("alpha", Json::num(result.alpha));
    json.push("n_nodes", Json::Int(result.n_nodes as i64));
    json.push("kappa_min", Json::num(result.kappa_min));
    json.push("n_states", Json::Int(result.n_states as i64));
    let states = result
        .states
        .iter()
        .map(|s| {
            let mut o = Json::obj();
            o.push("index", Json::Int(s.index as i64));
            o.push("energy", Json::num(s.energy));
            o.push("kappa", Json::num(s.kappa));
            o.push("bs_residual", Json::num(s.bs_eigenvalue_residual));
            o
        })
        .collect();
    json.push("states", Json::Arr(states));
    json
}

fn solve_report(cfg: &JobConfig, curve: &Curve) -> Result<Report, Error> {
    let result = bs::discrete_spectrum(curve, cfg.alpha()?, cfg.n_nodes(), cfg.kappa_min()?)?;
    Ok(Report::plain(spectral_json(&result)))
}

/// Solves the two lowest states only; `Ok(None)` for the second state means
/// the spectrum genuinely holds a single state above the scan floor.
fn two_lowest(cfg: &JobConfig, curve: &Curve) -> Result<(bs::BoundState, Option<bs::BoundState>), Error> {
    let alpha = cfg.alpha()?;
    let ground = bs::solve_bound_state_from(curve, alpha, 0, cfg.n_nodes(), cfg.tol(), cfg.kappa_min()?)?;
    match bs::solve_bound_state_from(curve, alpha, 1, cfg.n_nodes(), cfg.tol(), cfg.kappa_min()?) {
        Ok(excited) => Ok((ground, Some(excited))),
        Err(Error::StateNotFound { .. }) => Ok((ground, None)),
        Err(e) => Err(e),
    }
}

fn certify_report(cfg: &JobConfig, curve: &Curve) -> Result<Report, Error> {
    let (ground, excited) = two_lowest(cfg, curve)?;
    let Some(excited) = excited else {
        let mut json = Json::obj();
        json.push("refused", Json::Bool(true));
        json.push(
            "reason",
            Json::Str("only one bound state above the scan floor; the gap hypothesis is empty".into()),
        );
        json.push("E0", Json::num(ground.energy));
        json.push("n_states", Json::Int(1));
        return Ok(Report { json, sweep_csv: None, field_csv: None, refused: true });
    };

    let summary = geometry_summary(curve);
    let cc = curve_constants(&summary, WorstAnglePolicy::WorstAdmissible)?;
    let calib = calibrate(&cc, &CalibrationDomain::default())?;
    let cert = certified_bound(ground.energy, excited.energy, cfg.alpha()?, &cc, &calib)?;
    Ok(Report::plain(cert.to_json()))
}

fn asymptotics_report(cfg: &JobConfig, curve: &Curve) -> Result<Report, Error> {
    let alpha = cfg.alpha()?;
    let alphas = [alpha, 2.0 * alpha, 4.0 * alpha];
    let (mu0, mu1, bracket) = if curve.closed {
        let spec = comparison1d::comparison_spectrum(curve, BoundaryCondition::Periodic, 32, 512)?;
        (spec.mu[0], spec.mu[1], None)
    } else {
        let neu = comparison1d::comparison_spectrum(curve, BoundaryCondition::Neumann, 0, 512)?;
        let dir = comparison1d::comparison_spectrum(curve, BoundaryCondition::Dirichlet, 0, 512)?;
        (
            0.5 * (neu.mu[0] + dir.mu[0]),
            0.5 * (neu.mu[1] + dir.mu[1]),
            Some(((neu.mu[0], dir.mu[0]), (neu.mu[1], dir.mu[1]))),
        )
    };

    let mut csv = String::from("alpha,E0,E1,residual0,residual1\n");
    let mut rows = Vec::new();
    for &a in &alphas {
        let n = comparison1d::nodes_for(a, curve.length, cfg.n_nodes());
        let e0 = bs::solve_bound_state(curve, a, 0, n, cfg.tol())?.energy;
        let e1 = bs::solve_bound_state(curve, a, 1, n, cfg.tol())?.energy;
        let r0 = e0 + 0.25 * a * a - mu0;
        let r1 = e1 + 0.25 * a * a - mu1;
        csv.push_str(&format!(
            "{},{},{},{},{}\n",
            format_float(a),
            format_float(e0),
            format_float(e1),
            format_float(r0),
            format_float(r1)
        ));
        let mut o = Json::obj();
        o.push("alpha", Json::num(a));
        o.push("E0", Json::num(e0));
        o.push("E1", Json::num(e1));
        o.push("residual0", Json::num(r0));
        o.push("residual1", Json::num(r1));
        rows.push(o);
    }

    let mut json = Json::obj();
    json.push("mu0", Json::num(mu0));
    json.push("mu1", Json::num(mu1));
    if let Some(((n0, d0), (n1, d1))) = bracket {
        let mut b = Json::obj();
        b.push("mu0_neumann", Json::num(n0));
        b.push("mu0_dirichlet", Json::num(d0));
        b.push("mu1_neumann", Json::num(n1));
        b.push("mu1_dirichlet", Json::num(d1));
        json.push("bracket", b);
    }
    json.push("rows", Json::Arr(rows));
    Ok(Report { json, sweep_csv: Some(csv), field_csv: None, refused: false })
}

fn oracle_report(cfg: &JobConfig, curve: &Curve) -> Result<Report, Error> {
    let (ground, excited) = two_lowest(cfg, curve)?;
    let mut states = vec![ground];
    if let Some(e) = excited {
        states.push(e);
    }
    let result = SpectralResult {
        alpha: cfg.alpha()?,
        n_states: states.len(),
        states,
        n_nodes: cfg.n_nodes(),
        kappa_min: cfg.kappa_min()?,
    };

    let mut json = Json::obj();
    if let (Some(a), Some(h), Some(eps)) = (cfg.oracle.a_half, cfg.oracle.h, cfg.oracle.eps) {
        // Explicit single-grid run, reported without extrapolation.
        let op = fd::build(curve, result.alpha, a, h, eps)?;
        let vals = fd::lowest_modes(&op, result.states.len().min(2))?;
        json.push("A", Json::num(a));
        json.push("h", Json::num(h));
        json.push("eps", Json::num(eps));
        json.push("extrapolated", Json::Bool(false));
        let rows = vals
            .iter()
            .enumerate()
            .map(|(j, e)| {
                let mut o = Json::obj();
                o.push("index", Json::Int(j as i64));
                o.push("E_bs", Json::num(result.states[j].energy));
                o.push("E_fd", Json::num(*e));
                o.push(
                    "rel_discrepancy",
                    Json::num((result.states[j].energy - e).abs() / result.states[j].energy.abs()),
                );
                o
            })
            .collect();
        json.push("rows", Json::Arr(rows));
    } else {
        let report = fd::crosscheck(curve, result.alpha, &result)?;
        json.push("A", Json::num(report.a_half));
        json.push("h", Json::num(report.h));
        json.push("eps", Json::num(report.eps));
        json.push("extrapolated", Json::Bool(true));
        let rows = report
            .rows
            .iter()
            .map(|r| {
                let mut o = Json::obj();
                o.push("index", Json::Int(r.index as i64));
                o.push("E_bs", Json::num(r.e_bs));
                o.push("E_fd", Json::num(r.e_extrapolated));
                o.push("rel_discrepancy", Json::num(r.rel_discrepancy));
                o
            })
            .collect();
        json.push("rows", Json::Arr(rows));
    }
    Ok(Report::plain(json))
}

fn diagnostics_report(cfg: &JobConfig, curve: &Curve) -> Result<Report, Error> {
    let (ground, excited) = two_lowest(cfg, curve)?;
    let summary = geometry_summary(curve);

    let trace_defect = eigenfunction::trace_consistency(curve, &ground)?;
    let norms = eigenfunction::norm_report(curve, &ground, &summary, None)?;
    let lemmas = eigenfunction::lemma_diagnostics(curve, &ground, excited.as_ref(), &summary)?;

    let mut json = Json::obj();
    json.push("trace_defect", Json::num(trace_defect));

    let mut norm_json = Json::obj();
    norm_json.push("l2_lower", Json::num(norms.l2_lower));
    norm_json.push("l2_upper", Json::num(norms.l2_upper));
    norm_json.push("sup", Json::num(norms.sup));
    norm_json.push("argmax", Json::Arr(vec![Json::num(norms.argmax[0]), Json::num(norms.argmax[1])]));
    norm_json.push("argmax_dist_to_curve", Json::num(norms.argmax_dist_to_curve));
    norm_json.push("norm1_slack", Json::num(norms.norm1_slack));
    json.push("norms", norm_json);

    let mut lem = Json::obj();
    lem.push("min_on_ball", Json::num(lemmas.min_on_ball));
    lem.push("floor", Json::num(lemmas.floor));
    lem.push("floor_ok", Json::Bool(lemmas.floor_ok));
    lem.push("decay_violations", Json::Int(lemmas.decay_violations as i64));
    lem.push("decay_samples", Json::Int(lemmas.decay_samples as i64));
    lem.push(
        "extrema_max_dist",
        Json::num(lemmas.extrema_distances.iter().copied().fold(0.0, f64::max)),
    );
    lem.push("grid_spacing", Json::num(lemmas.grid_spacing));
    if let Some(flag) = lemmas.excited_zero_in_hull {
        lem.push("excited_zero_in_hull", Json::Bool(flag));
    }
    json.push("lemmas", lem);

    if let Some(excited) = &excited {
        let cc = curve_constants(&summary, WorstAnglePolicy::WorstAdmissible)?;
        let gi = gap_identity_diagnostics(curve, &summary, &cc, &ground, excited, GridOptions::default())?;
        let mut g = Json::obj();
        g.push("gap", Json::num(gi.gap));
        g.push("quotient", Json::num(gi.quotient));
        g.push("quotient_rel_dev", Json::num(gi.quotient_rel_dev));
        g.push("holder_lower", Json::num(gi.holder_lower));
        g.push("holder_ok", Json::Bool(gi.holder_ok));
        g.push("grad_bound_violations", Json::Int(gi.grad_bound_violations as i64));
        g.push("grad_bound_samples", Json::Int(gi.grad_bound_samples as i64));
        g.push("leqgrad_violations", Json::Int(gi.leqgrad_violations as i64));
        json.push("gap_identity", g);
    }

    // Coarse field table for plotting.
    let r = summary.enclosing_radius;
    let m = 41;
    let mut pts = Vec::with_capacity(m * m);
    for i in 0..m {
        for j in 0..m {
            let x = summary.center[0] - r + 2.0 * r * i as f64 / (m - 1) as f64;
            let y = summary.center[1] - r + 2.0 * r * j as f64 / (m - 1) as f64;
            pts.push([x, y]);
        }
    }
    let field = eigenfunction::evaluate(curve, &ground, &pts, false, Normalization::SupOne)?;
    let mut csv = Vec::new();
    eigenfunction::write_field_csv(&field, &mut csv)?;
    let field_csv = String::from_utf8(csv).expect("csv is utf8");

    Ok(Report { json, sweep_csv: None, field_csv: Some(field_csv), refused: false })
}

/// Writes `<prefix>.json` plus any CSV tables; returns the paths written.
pub fn write_report(report: &Report, prefix: &str) -> Result<Vec<String>, Error> {
    let mut written = Vec::new();
    let json_path = format!("{prefix}.json");
    std::fs::write(&json_path, report.json.to_text())?;
    written.push(json_path);
    if let Some(csv) = &report.sweep_csv {
        let path = format!("{prefix}_sweep.csv");
        std::fs::write(&path, csv)?;
        written.push(path);
    }
    if let Some(csv) = &report.field_csv {
        let path = format!("{prefix}_field.csv");
        std::fs::write(&path, csv)?;
        written.push(path);
    }
    Ok(written)
}
