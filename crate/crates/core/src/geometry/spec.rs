//! Declarative curve specifications and their JSON wire format:
//! `{"kind": "circle" | "segment" | "arc" | "ellipse" | "fourier" | "samples",
//!   "params": {...}, "closed": bool}`.

use crate::error::{Error, Result};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Debug, Clone, PartialEq)]
pub enum CurveKind {
    Circle { radius: f64, center: [f64; 2] },
    Segment { start: [f64; 2], end: [f64; 2] },
    Arc { radius: f64, center: [f64; 2], angle_start: f64, angle_end: f64 },
    Ellipse { a: f64, b: f64 },
    Fourier { a0: [f64; 2], cos: Vec<[f64; 2]>, sin: Vec<[f64; 2]> },
    Samples { points: Vec<[f64; 2]> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurveSpec {
    pub kind: CurveKind,
    pub closed: bool,
}

impl CurveSpec {
    pub fn circle(radius: f64) -> Self {
        Self { kind: CurveKind::Circle { radius, center: [0.0, 0.0] }, closed: true }
    }

    pub fn circle_at(radius: f64, center: [f64; 2]) -> Self {
        Self { kind: CurveKind::Circle { radius, center }, closed: true }
    }

    pub fn segment(start: [f64; 2], end: [f64; 2]) -> Self {
        Self { kind: CurveKind::Segment { start, end }, closed: false }
    }

    pub fn arc(radius: f64, angle_start: f64, angle_end: f64) -> Self {
        Self {
            kind: CurveKind::Arc { radius, center: [0.0, 0.0], angle_start, angle_end },
            closed: false,
        }
    }

    pub fn ellipse(a: f64, b: f64) -> Self {
        Self { kind: CurveKind::Ellipse { a, b }, closed: true }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidCurve(msg));
        match &self.kind {
            CurveKind::Circle { radius, .. } => {
                if !(*radius > 0.0) {
                    return bad(format!("circle radius must be positive, got {radius}"));
                }
                if !self.closed {
                    return bad("a circle is a closed curve".into());
                }
            }
            CurveKind::Segment { start, end } => {
                if start == end {
                    return bad("segment endpoints coincide".into());
                }
                if self.closed {
                    return bad("a segment is an open curve".into());
                }
            }
            CurveKind::Arc { radius, angle_start, angle_end, .. } => {
                if !(*radius > 0.0) {
                    return bad(format!("arc radius must be positive, got {radius}"));
                }
                let sweep = (angle_end - angle_start).abs();
                if !(sweep > 0.0) || sweep >= 2.0 * std::f64::consts::PI {
                    return bad("arc sweep must lie in (0, 2 pi); use a circle for the full turn".into());
                }
                if self.closed {
                    return bad("an arc is an open curve".into());
                }
            }
            CurveKind::Ellipse { a, b } => {
                if !(*a > 0.0 && *b > 0.0) {
                    return bad(format!("ellipse half-axes must be positive, got ({a}, {b})"));
                }
                if !self.closed {
                    return bad("an ellipse is a closed curve".into());
                }
            }
            CurveKind::Fourier { cos, sin, .. } => {
                if cos.is_empty() && sin.is_empty() {
                    return bad("fourier curve needs at least one coefficient pair".into());
                }
                if !self.closed {
                    return bad("fourier curves are closed by construction".into());
                }
            }
            CurveKind::Samples { points } => {
                if points.len() < 4 {
                    return bad(format!("need at least 4 sample points, got {}", points.len()));
                }
                for i in 0..points.len() {
                    for j in (i + 1)..points.len() {
                        if points[i] == points[j] {
                            return bad(format!("sample points {i} and {j} coincide"));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    fn kind_name(&self) -> &'static str {
        match self.kind {
            CurveKind::Circle { .. } => "circle",
            CurveKind::Segment { .. } => "segment",
            CurveKind::Arc { .. } => "arc",
            CurveKind::Ellipse { .. } => "ellipse",
            CurveKind::Fourier { .. } => "fourier",
            CurveKind::Samples { .. } => "samples",
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecWire {
    kind: String,
    params: serde_json::Value,
    #[serde(default)]
    closed: Option<bool>,
}

fn get_f64(map: &serde_json::Map<String, serde_json::Value>, key: &str) -> Result<f64> {
    map.get(key)
        .and_then(|v| v.as_f64())
        .ok_or_else(|| Error::Config(format!("curve params: missing or non-numeric \"{key}\"")))
}

fn get_point(map: &serde_json::Map<String, serde_json::Value>, key: &str) -> Result<[f64; 2]> {
    let v = map
        .get(key)
        .ok_or_else(|| Error::Config(format!("curve params: missing \"{key}\"")))?;
    parse_point(v).map_err(|_| Error::Config(format!("curve params: \"{key}\" must be [x, y]")))
}

fn parse_point(v: &serde_json::Value) -> std::result::Result<[f64; 2], ()> {
    let arr = v.as_array().ok_or(())?;
    if arr.len() != 2 {
        return Err(());
    }
    Ok([arr[0].as_f64().ok_or(())?, arr[1].as_f64().ok_or(())?])
}

fn get_points(map: &serde_json::Map<String, serde_json::Value>, key: &str) -> Result<Vec<[f64; 2]>> {
    let v = map
        .get(key)
        .ok_or_else(|| Error::Config(format!("curve params: missing \"{key}\"")))?;
    let arr = v
        .as_array()
        .ok_or_else(|| Error::Config(format!("curve params: \"{key}\" must be a list of [x, y]")))?;
    arr.iter()
        .map(|p| parse_point(p).map_err(|_| Error::Config(format!("curve params: \"{key}\" must be a list of [x, y]"))))
        .collect()
}

fn check_keys(map: &serde_json::Map<String, serde_json::Value>, allowed: &[&str]) -> Result<()> {
    for k in map.keys() {
        if !allowed.contains(&k.as_str()) {
            return Err(Error::Config(format!("curve params: unknown key \"{k}\"")));
        }
    }
    Ok(())
}

impl TryFrom<SpecWire> for CurveSpec {
    type Error = Error;

    fn try_from(w: SpecWire) -> Result<Self> {
        let map = w
            .params
            .as_object()
            .ok_or_else(|| Error::Config("curve params must be a JSON object".into()))?;
        let default_closed = matches!(w.kind.as_str(), "circle" | "ellipse" | "fourier");
        let closed = w.closed.unwrap_or(default_closed);
        let kind = match w.kind.as_str() {
            "circle" => {
                check_keys(map, &["radius", "center"])?;
                let center = if map.contains_key("center") { get_point(map, "center")? } else { [0.0, 0.0] };
                CurveKind::Circle { radius: get_f64(map, "radius")?, center }
            }
            "segment" => {
                check_keys(map, &["start", "end"])?;
                CurveKind::Segment { start: get_point(map, "start")?, end: get_point(map, "end")? }
            }
            "arc" => {
                check_keys(map, &["radius", "center", "angle_start", "angle_end"])?;
                let center = if map.contains_key("center") { get_point(map, "center")? } else { [0.0, 0.0] };
                CurveKind::Arc {
                    radius: get_f64(map, "radius")?,
                    center,
                    angle_start: get_f64(map, "angle_start")?,
                    angle_end: get_f64(map, "angle_end")?,
                }
            }
            "ellipse" => {
                check_keys(map, &["a", "b"])?;
                CurveKind::Ellipse { a: get_f64(map, "a")?, b: get_f64(map, "b")? }
            }
            "fourier" => {
                check_keys(map, &["a0", "cos", "sin"])?;
                let a0 = if map.contains_key("a0") { get_point(map, "a0")? } else { [0.0, 0.0] };
                let cos = if map.contains_key("cos") { get_points(map, "cos")? } else { vec![] };
                let sin = if map.contains_key("sin") { get_points(map, "sin")? } else { vec![] };
                CurveKind::Fourier { a0, cos, sin }
            }
            "samples" => {
                check_keys(map, &["points"])?;
                CurveKind::Samples { points: get_points(map, "points")? }
            }
            other => return Err(Error::Config(format!("unknown curve kind \"{other}\""))),
        };
        let spec = CurveSpec { kind, closed };
        spec.validate()?;
        Ok(spec)
    }
}

impl<'de> Deserialize<'de> for CurveSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let wire = SpecWire::deserialize(d)?;
        CurveSpec::try_from(wire).map_err(D::Error::custom)
    }
}

impl Serialize for CurveSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde_json::{json, Value};
        let params: Value = match &self.kind {
            CurveKind::Circle { radius, center } => json!({"radius": radius, "center": center}),
            CurveKind::Segment { start, end } => json!({"start": start, "end": end}),
            CurveKind::Arc { radius, center, angle_start, angle_end } => json!({
                "radius": radius, "center": center,
                "angle_start": angle_start, "angle_end": angle_end,
            }),
            CurveKind::Ellipse { a, b } => json!({"a": a, "b": b}),
            CurveKind::Fourier { a0, cos, sin } => json!({"a0": a0, "cos": cos, "sin": sin}),
            CurveKind::Samples { points } => json!({"points": points}),
        };
        let wire = json!({"kind": self.kind_name(), "params": params, "closed": self.closed});
        wire.serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_minimal_circle() {
        let spec: CurveSpec =
            serde_json::from_str(r#"{"kind":"circle","params":{"radius":1}}"#).unwrap();
        assert_eq!(spec, CurveSpec::circle(1.0));
        assert!(spec.closed);
    }

    #[test]
    fn rejects_unknown_keys() {
        let r: std::result::Result<CurveSpec, _> =
            serde_json::from_str(r#"{"kind":"circle","params":{"radius":1,"rad":2}}"#);
        let msg = format!("{}", r.unwrap_err());
        assert!(msg.contains("rad"), "{msg}");

        let r: std::result::Result<CurveSpec, _> =
            serde_json::from_str(r#"{"kind":"circle","params":{"radius":1},"open":true}"#);
        assert!(r.is_err());
    }

    #[test]
    fn rejects_degenerate() {
        let r: std::result::Result<CurveSpec, _> =
            serde_json::from_str(r#"{"kind":"circle","params":{"radius":0}}"#);
        assert!(r.is_err());
        let r: std::result::Result<CurveSpec, _> = serde_json::from_str(
            r#"{"kind":"segment","params":{"start":[1,0],"end":[1,0]}}"#,
        );
        assert!(r.is_err());
    }

    #[test]
    fn fourier_forced_closed() {
        let r: std::result::Result<CurveSpec, _> = serde_json::from_str(
            r#"{"kind":"fourier","params":{"cos":[[1,0]],"sin":[[0,1]]},"closed":false}"#,
        );
        assert!(r.is_err());
    }

    #[test]
    fn roundtrip() {
        let spec = CurveSpec::ellipse(2.0, 1.0);
        let text = serde_json::to_string(&spec).unwrap();
        let back: CurveSpec = serde_json::from_str(&text).unwrap();
        assert_eq!(spec, back);
    }
}
