//! Report assembly: a text rendering for the terminal and a JSON object,
//! both with floats at 9 significant digits.

use krein_frames::linalg::CMat;
use serde_json::{json, Map, Value};

use crate::problem::matrix_json;

/// Rounds to 9 significant digits. Non-finite values pass through.
pub fn round9(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.8e}").parse().unwrap_or(x)
}

/// `%.9g`-style rendering.
pub fn fmt9(x: f64) -> String {
    if x.is_nan() {
        return "n/a".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let x = round9(x);
    let exp = x.abs().log10().floor() as i32;
    if (-5..9).contains(&exp) {
        let decimals = (8 - exp).max(0) as usize;
        let s = format!("{x:.decimals$}");
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    } else {
        let s = format!("{x:.8e}");
        let (mant, e) = s.split_once('e').unwrap_or((&s, "0"));
        let mant = if mant.contains('.') { mant.trim_end_matches('0').trim_end_matches('.') } else { mant };
        format!("{mant}e{e}")
    }
}

/// JSON number at 9 significant digits; `null` for NaN and infinities.
pub fn num(x: f64) -> Value {
    if x.is_finite() {
        json!(round9(x))
    } else {
        Value::Null
    }
}

pub fn mat(a: &CMat) -> Value {
    serde_json::to_value(matrix_json(a, round9)).unwrap_or(Value::Null)
}

/// Text rows of a matrix; parts below `1e-13` of the largest entry print as 0.
pub fn mat_lines(a: &CMat) -> Vec<String> {
    let scale = a.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let clean = |x: f64| if x.abs() <= 1e-13 * scale { 0.0 } else { x };
    let cells: Vec<Vec<String>> = (0..a.nrows())
        .map(|i| {
            (0..a.ncols())
                .map(|j| {
                    let (re, im) = (clean(a[(i, j)].re), clean(a[(i, j)].im));
                    match (re == 0.0, im == 0.0) {
                        (_, true) => fmt9(re),
                        (true, false) => format!("{}i", fmt9(im)),
                        (false, false) => {
                            let sign = if im < 0.0 { '-' } else { '+' };
                            format!("{}{sign}{}i", fmt9(re), fmt9(im.abs()))
                        }
                    }
                })
                .collect()
        })
        .collect();
    let width = cells.iter().flatten().map(String::len).max().unwrap_or(1);
    cells.iter().map(|row| format!("  [ {} ]", row.iter().map(|c| format!("{c:>width$}")).collect::<Vec<_>>().join("  "))).collect()
}

fn depth(v: &Value) -> Option<usize> {
    match v {
        Value::Object(_) => None,
        Value::Array(items) => {
            let mut d = 0;
            for item in items {
                d = d.max(depth(item)?);
            }
            Some(d + 1)
        }
        _ => Some(0),
    }
}

/// Pretty JSON with scalar lists and matrix rows kept on one line.
pub fn render(v: &Value) -> String {
    let mut out = String::new();
    render_into(v, 0, &mut out);
    out.push('\n');
    out
}

fn render_into(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent + 1);
    match v {
        Value::Object(map) if !map.is_empty() => {
            out.push_str("{\n");
            for (k, (key, item)) in map.iter().enumerate() {
                out.push_str(&format!("{pad}{}: ", Value::String(key.clone())));
                render_into(item, indent + 1, out);
                out.push_str(if k + 1 < map.len() { ",\n" } else { "\n" });
            }
            out.push_str(&format!("{}}}", "  ".repeat(indent)));
        }
        Value::Array(items) if !items.is_empty() && (depth(v).is_none_or(|d| d > 2) || v.to_string().len() > 100) => {
            out.push_str("[\n");
            for (k, item) in items.iter().enumerate() {
                out.push_str(&pad);
                render_into(item, indent + 1, out);
                out.push_str(if k + 1 < items.len() { ",\n" } else { "\n" });
            }
            out.push_str(&format!("{}]", "  ".repeat(indent)));
        }
        _ => out.push_str(&v.to_string()),
    }
}

/// A report under construction: ordered JSON fields plus text lines.
#[derive(Debug, Default)]
pub struct Report {
    pub json: Map<String, Value>,
    pub text: Vec<String>,
    notes: Vec<String>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        let mut r = Self::default();
        r.json.insert("command".into(), json!(command));
        r
    }

    pub fn set(&mut self, key: &str, value: Value) {
        self.json.insert(key.into(), value);
    }

    pub fn line(&mut self, s: impl Into<String>) {
        self.text.push(s.into());
    }

    pub fn matrix(&mut self, name: &str, a: &CMat) {
        self.line(format!("{name} ="));
        self.text.extend(mat_lines(a));
    }

    pub fn note(&mut self, s: impl Into<String>) {
        let s = s.into();
        self.text.push(format!("note: {s}"));
        self.notes.push(s);
    }

    pub fn finish(mut self, pass: bool) -> (bool, Value, String) {
        self.json.insert("pass".into(), json!(pass));
        self.json.insert("notes".into(), json!(self.notes));
        let mut text = self.text.join("\n");
        text.push('\n');
        (pass, Value::Object(self.json), text)
    }
}
