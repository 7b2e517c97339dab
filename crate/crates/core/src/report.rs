//! Deterministic report serialization. Floats are printed with 17
//! significant digits so reruns of the same job are byte-identical and
//! round-trip exactly.

use std::fmt::Write as _;

/// 17-significant-digit scientific representation.
pub fn format_float(v: f64) -> String {
    if v == 0.0 {
        return "0.0".into();
    }
    if !v.is_finite() {
        // JSON has no infinities; clamp to the largest representable and
        // let the magnitude speak.
        let capped = if v > 0.0 { f64::MAX } else { -f64::MAX };
        return format!("{capped:.16e}");
    }
    format!("{v:.16e}")
}

/// Order-preserving JSON value for report output.
#[derive(Debug, Clone)]
pub enum Json {
    Null,
    Bool(bool),
    Int(i64),
    Num(f64),
    Str(String),
    Arr(Vec<Json>),
    Obj(Vec<(String, Json)>),
}

impl Json {
    pub fn obj() -> Self {
        Json::Obj(Vec::new())
    }

    pub fn push(&mut self, key: &str, value: Json) -> &mut Self {
        if let Json::Obj(entries) = self {
            entries.push((key.to_string(), value));
        } else {
            panic!("push on a non-object Json");
        }
        self
    }

    pub fn num(v: f64) -> Json {
        Json::Num(v)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        self.write(&mut out, 0);
        out.push('\n');
        out
    }

    fn write(&self, out: &mut String, depth: usize) {
        match self {
            Json::Null => out.push_str("null"),
            Json::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
            Json::Int(i) => {
                let _ = write!(out, "{i}");
            }
            Json::Num(v) => out.push_str(&format_float(*v)),
            Json::Str(s) => {
                out.push('"');
                for ch in s.chars() {
                    match ch {
                        '"' => out.push_str("\\\""),
                        '\\' => out.push_str("\\\\"),
                        '\n' => out.push_str("\\n"),
                        '\t' => out.push_str("\\t"),
                        c if (c as u32) < 0x20 => {
                            let _ = write!(out, "\\u{:04x}", c as u32);
                        }
                        c => out.push(c),
                    }
                }
                out.push('"');
            }
            Json::Arr(items) => {
                if items.is_empty() {
                    out.push_str("[]");
                    return;
                }
                out.push('[');
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    out.push('\n');
                    indent(out, depth + 1);
                    item.write(out, depth + 1);
                }
                out.push('\n');
                indent(out, depth);
                out.push(']');
            }
            Json::Obj(entries) => {
                if entries.is_empty() {
                    out.push_str("{}");
                    return;
                }
                out.push('{');
                for (i, (k, v)) in entries.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    out.push('\n');
                    indent(out, depth + 1);
                    let _ = write!(out, "\"{k}\": ");
                    v.write(out, depth + 1);
                }
                out.push('\n');
                indent(out, depth);
                out.push('}');
            }
        }
    }
}

fn indent(out: &mut String, depth: usize) {
    for _ in 0..depth {
        out.push_str("  ");
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_formatting_round_trips() {
        for &v in &[1.0, -0.25, 3.141592653589793, 1e-300, -2.2250738585072014e-308, 12345.6789] {
            let s = format_float(v);
            let back: f64 = s.parse().unwrap();
            assert_eq!(back, v, "{s}");
        }
        assert_eq!(format_float(0.0), "0.0");
    }

    #[test]
    fn object_order_preserved_and_parseable() {
        let mut o = Json::obj();
        o.push("zeta", Json::num(1.5));
        o.push("alpha", Json::Bool(true));
        o.push("list", Json::Arr(vec![Json::Int(1), Json::num(0.5)]));
        let text = o.to_text();
        let z = text.find("zeta").unwrap();
        let a = text.find("alpha").unwrap();
        assert!(z < a, "insertion order kept");
        let parsed: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(parsed["zeta"], serde_json::json!(1.5));
    }

    #[test]
    fn deterministic_output() {
        let make = || {
            let mut o = Json::obj();
            o.push("x", Json::num(0.1 + 0.2));
            o.to_text()
        };
        assert_eq!(make(), make());
    }
}
