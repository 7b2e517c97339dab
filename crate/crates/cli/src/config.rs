//! Job configuration schema. Unknown keys are rejected with the offending
//! name; spectral commands require a positive coupling.

use leaky_gap_core::{CurveSpec, Error};
use serde::Deserialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Geometry,
    Solve,
    Certify,
    Asymptotics,
    Oracle,
    Diagnostics,
}

#[derive(Debug, Clone, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct SolverOptions {
    pub n_nodes: Option<usize>,
    pub tol: Option<f64>,
    pub kappa_min: Option<f64>,
}

#[derive(Debug, Clone, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct OracleOptions {
    #[serde(rename = "A")]
    pub a_half: Option<f64>,
    pub h: Option<f64>,
    pub eps: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobConfig {
    pub curve: CurveSpec,
    #[serde(default)]
    pub alpha: Option<f64>,
    pub command: Command,
    #[serde(default)]
    pub solver: SolverOptions,
    #[serde(default)]
    pub oracle: OracleOptions,
    #[serde(default)]
    pub output: Option<String>,
}

impl JobConfig {
    pub fn n_nodes(&self) -> usize {
        self.solver.n_nodes.unwrap_or(256)
    }

    pub fn tol(&self) -> f64 {
        self.solver.tol.unwrap_or(1e-10)
    }

    pub fn alpha(&self) -> Result<f64, Error> {
        match self.alpha {
            Some(a) if a > 0.0 => Ok(a),
            Some(a) => Err(Error::Config(format!("alpha must be positive, got {a}"))),
            None => Err(Error::Config("this command requires \"alpha\"".into())),
        }
    }

    pub fn kappa_min(&self) -> Result<f64, Error> {
        match self.solver.kappa_min {
            Some(k) if k > 0.0 => Ok(k),
            Some(k) => Err(Error::Config(format!("kappa_min must be positive, got {k}"))),
            None => Ok(1e-3 * self.alpha()?),
        }
    }
}

/// Parses a config document, filling defaults and validating ranges.
pub fn parse_config(text: &str) -> Result<JobConfig, Error> {
    let cfg: JobConfig =
        serde_json::from_str(text).map_err(|e| Error::Config(format!("config: {e}")))?;
    let spectral = !matches!(cfg.command, Command::Geometry);
    if spectral {
        cfg.alpha()?;
        cfg.kappa_min()?;
    }
    if cfg.n_nodes() < 32 {
        return Err(Error::Config(format!("solver.n_nodes must be >= 32, got {}", cfg.n_nodes())));
    }
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_circle_job_gets_defaults() {
        let cfg = parse_config(
            r#"{"curve":{"kind":"circle","params":{"radius":1}},"alpha":10,"command":"solve"}"#,
        )
        .unwrap();
        assert_eq!(cfg.n_nodes(), 256);
        assert_eq!(cfg.tol(), 1e-10);
        assert!((cfg.kappa_min().unwrap() - 0.01).abs() < 1e-15);
    }

    #[test]
    fn unknown_key_rejected_by_name() {
        let err = parse_config(
            r#"{"curve":{"kind":"circle","params":{"radius":1}},"alpha2":10,"command":"solve"}"#,
        )
        .unwrap_err();
        assert!(format!("{err}").contains("alpha2"), "{err}");
    }

    #[test]
    fn negative_alpha_rejected() {
        let err = parse_config(
            r#"{"curve":{"kind":"circle","params":{"radius":1}},"alpha":-2,"command":"solve"}"#,
        )
        .unwrap_err();
        assert!(format!("{err}").contains("positive"));
    }

    #[test]
    fn geometry_does_not_need_alpha() {
        let cfg = parse_config(
            r#"{"curve":{"kind":"ellipse","params":{"a":2,"b":1}},"command":"geometry"}"#,
        )
        .unwrap();
        assert_eq!(cfg.command, Command::Geometry);
    }
}
