//! Number formatting, output files and plot emission.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;
use spectral_fields::Result;

/// `x` rounded to 12 significant digits, in the shortest form that
/// round-trips the rounded value. Always uses `.` as decimal separator.
pub fn sig(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let rounded = round12(x);
    let a = rounded.abs();
    if (1e-4..1e12).contains(&a) {
        format!("{rounded}")
    } else {
        format!("{rounded:e}")
    }
}

fn round12(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

/// Rounds every non-integer number of a JSON tree to 12 significant digits.
pub fn round_json(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = round12(n.as_f64().unwrap_or(0.0));
            serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
        }
        Value::Array(a) => Value::Array(a.into_iter().map(round_json).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, round_json(v))).collect()),
        other => other,
    }
}

/// Output directory plus the record of files read and written.
pub struct Ctx {
    pub seed: u64,
    pub out: PathBuf,
    pub inputs: Vec<PathBuf>,
    pub outputs: Vec<PathBuf>,
}

impl Ctx {
    pub fn new(seed: u64, out: PathBuf) -> Result<Self> {
        std::fs::create_dir_all(&out)?;
        Ok(Ctx {
            seed,
            out,
            inputs: Vec::new(),
            outputs: Vec::new(),
        })
    }

    pub fn write_text(&mut self, name: &str, text: &str) -> Result<PathBuf> {
        let path = self.out.join(name);
        std::fs::write(&path, text)?;
        self.outputs.push(path.clone());
        Ok(path)
    }

    pub fn write_json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<PathBuf> {
        let v = round_json(serde_json::to_value(value)?);
        let text = serde_json::to_string_pretty(&v)? + "\n";
        self.write_text(name, &text)
    }

    pub fn write_csv(&mut self, name: &str, header: &str, rows: &[(f64, f64)]) -> Result<PathBuf> {
        let mut text = String::with_capacity(rows.len() * 32);
        text.push_str(header);
        text.push('\n');
        for (x, y) in rows {
            let _ = writeln!(text, "{},{}", sig(*x), sig(*y));
        }
        self.write_text(name, &text)
    }
}

/// Scatter plot with a frame and min/max tick labels.
pub fn scatter_svg(rows: &[(f64, f64)], xlabel: &str, ylabel: &str) -> String {
    const W: f64 = 800.0;
    const H: f64 = 600.0;
    const M: f64 = 60.0;
    let range = |vals: &mut dyn Iterator<Item = f64>| {
        let (lo, hi) = vals.fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), v| {
            (l.min(v), h.max(v))
        });
        if !lo.is_finite() {
            (0.0, 1.0)
        } else if hi - lo < 1e-12 {
            (lo - 0.5, hi + 0.5)
        } else {
            (lo, hi)
        }
    };
    let (x0, x1) = range(&mut rows.iter().map(|r| r.0));
    let (y0, y1) = range(&mut rows.iter().map(|r| r.1));
    let px = |x: f64| M + (x - x0) / (x1 - x0) * (W - 2.0 * M);
    let py = |y: f64| H - M - (y - y0) / (y1 - y0) * (H - 2.0 * M);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#
    );
    let _ = writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<rect x="{M}" y="{M}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        W - 2.0 * M,
        H - 2.0 * M
    );
    let _ = writeln!(s, r#"<g fill="black" fill-opacity="0.6">"#);
    for &(x, y) in rows {
        let _ = writeln!(
            s,
            r#"<circle cx="{:.2}" cy="{:.2}" r="0.8"/>"#,
            px(x),
            py(y)
        );
    }
    let _ = writeln!(s, "</g>");
    let text = |s: &mut String, x: f64, y: f64, anchor: &str, label: &str| {
        let _ = writeln!(
            s,
            r#"<text x="{x:.2}" y="{y:.2}" font-family="sans-serif" font-size="12" text-anchor="{anchor}">{label}</text>"#
        );
    };
    text(&mut s, M, H - M + 16.0, "start", &format!("{x0:.4}"));
    text(&mut s, W - M, H - M + 16.0, "end", &format!("{x1:.4}"));
    text(&mut s, M - 6.0, H - M, "end", &format!("{y0:.4}"));
    text(&mut s, M - 6.0, M + 4.0, "end", &format!("{y1:.4}"));
    text(&mut s, W / 2.0, H - M + 36.0, "middle", xlabel);
    text(&mut s, 16.0, H / 2.0, "middle", ylabel);
    s.push_str("</svg>\n");
    s
}

/// Largest deviation between two output files of the same kind, or `None`
/// if they differ structurally. Numbers are compared with relative
/// tolerance `max(1, |a|)`; everything else must match exactly.
pub fn compare_files(a: &Path, b: &Path) -> Result<Option<f64>> {
    let ta = std::fs::read_to_string(a)?;
    let tb = std::fs::read_to_string(b)?;
    match a.extension().and_then(|e| e.to_str()) {
        Some("json") => Ok(compare_json(
            &serde_json::from_str(&ta)?,
            &serde_json::from_str(&tb)?,
        )),
        Some("csv") => Ok(compare_csv(&ta, &tb)),
        _ => Ok((ta == tb).then_some(0.0)),
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(1.0)
}

fn compare_json(a: &Value, b: &Value) -> Option<f64> {
    match (a, b) {
        (Value::Number(x), Value::Number(y)) => Some(rel(x.as_f64()?, y.as_f64()?)),
        (Value::Array(x), Value::Array(y)) if x.len() == y.len() => x
            .iter()
            .zip(y)
            .try_fold(0.0, |m: f64, (u, v)| Some(m.max(compare_json(u, v)?))),
        (Value::Object(x), Value::Object(y)) if x.len() == y.len() => {
            x.iter().try_fold(0.0, |m: f64, (k, u)| {
                Some(m.max(compare_json(u, y.get(k)?)?))
            })
        }
        _ => (a == b).then_some(0.0),
    }
}

fn compare_csv(a: &str, b: &str) -> Option<f64> {
    let (la, lb): (Vec<&str>, Vec<&str>) = (a.lines().collect(), b.lines().collect());
    if la.len() != lb.len() {
        return None;
    }
    let mut worst: f64 = 0.0;
    for (ra, rb) in la.iter().zip(&lb) {
        let (fa, fb): (Vec<&str>, Vec<&str>) = (ra.split(',').collect(), rb.split(',').collect());
        if fa.len() != fb.len() {
            return None;
        }
        for (x, y) in fa.iter().zip(&fb) {
            match (x.parse::<f64>(), y.parse::<f64>()) {
                (Ok(x), Ok(y)) => worst = worst.max(rel(x, y)),
                _ if x == y => {}
                _ => return None,
            }
        }
    }
    Some(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_digits() {
        assert_eq!(sig(0.0), "0");
        assert_eq!(sig(-0.0), "0");
        assert_eq!(sig(2.0), "2");
        assert_eq!(sig(std::f64::consts::PI), "3.14159265359");
        assert_eq!(sig(-1.0 / 3.0), "-0.333333333333");
        assert_eq!(sig(1.5e-15), "1.5e-15");
        assert_eq!(sig(2.0f64.sqrt() * 1e13), "1.41421356237e13");
    }

    #[test]
    fn json_rounding_keeps_integers() {
        let v = serde_json::json!({"n": 7, "x": [0.1234567890123456, 2.5]});
        let r = round_json(v);
        assert_eq!(r["n"], 7);
        assert_eq!(r["x"][0].as_f64().unwrap(), 0.123456789012);
        assert_eq!(r["x"][1].as_f64().unwrap(), 2.5);
    }

    #[test]
    fn structural_comparison() {
        let a = serde_json::json!({"x": [1.0, 2.0], "s": "a"});
        let b = serde_json::json!({"x": [1.0, 2.0 + 1e-10], "s": "a"});
        assert!(compare_json(&a, &b).unwrap() < 1e-9);
        let c = serde_json::json!({"x": [1.0], "s": "a"});
        assert!(compare_json(&a, &c).is_none());
        assert_eq!(compare_csv("x,y\n1,2\n", "x,y\n1,2\n"), Some(0.0));
        assert!(compare_csv("x,y\n1,2\n", "x,y\n1,2\n3,4\n").is_none());
    }

    #[test]
    fn svg_is_well_formed() {
        let s = scatter_svg(&[(0.0, -1.0), (1.0, 1.0)], "theta", "eigenvalue");
        assert!(s.starts_with("<svg"));
        assert!(s.trim_end().ends_with("</svg>"));
        assert_eq!(s.matches("<circle").count(), 2);
    }
}
