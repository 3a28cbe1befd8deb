//! Report emission: deterministic JSON (non-finite values rendered as the
//! strings "inf"/"-inf"/"nan"), CSV tables, and a dependency-free SVG
//! log-log plot. Timestamps go to a separate metadata file so the report
//! itself is byte-identical across reruns.

use std::collections::BTreeMap;
use std::path::Path;

use anyhow::Context;
use serde_json::{json, Map, Value};

use emproc::harness::RateReport;

/// f64 -> JSON with the extended-real convention.
pub fn num(v: f64) -> Value {
    if v.is_finite() {
        json!(v)
    } else if v.is_nan() {
        Value::String("nan".into())
    } else if v > 0.0 {
        Value::String("inf".into())
    } else {
        Value::String("-inf".into())
    }
}

pub fn verdicts_value(verdicts: &BTreeMap<String, bool>) -> Value {
    let mut map = Map::new();
    for (k, &v) in verdicts {
        map.insert(k.clone(), Value::Bool(v));
    }
    Value::Object(map)
}

/// Rate report body shared by `rate` and `riskcheck`.
pub fn rate_report_value(report: &RateReport) -> Value {
    let per_n: Vec<Value> = report
        .per_n
        .iter()
        .map(|p| {
            json!({
                "n": p.n,
                "deviation": {
                    "median": num(p.raw.median),
                    "mean": num(p.raw.mean),
                    "q10": num(p.raw.q10),
                    "q90": num(p.raw.q90),
                },
                "scaled_deviation": {
                    "median": num(p.scaled.median),
                    "mean": num(p.scaled.mean),
                    "q10": num(p.scaled.q10),
                    "q90": num(p.scaled.q90),
                },
            })
        })
        .collect();
    json!({
        "per_n": per_n,
        "slope": num(report.fitted_slope),
        "slope_stderr": num(report.slope_stderr),
        "r_exponent": num(report.r_exponent),
        "verdicts": verdicts_value(&report.verdicts),
        "warnings": report.warnings,
    })
}

pub fn write_json(dir: &Path, name: &str, value: &Value) -> anyhow::Result<()> {
    let path = dir.join(name);
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    std::fs::write(&path, text).with_context(|| format!("cannot write {}", path.display()))
}

pub fn write_text(dir: &Path, name: &str, text: &str) -> anyhow::Result<()> {
    let path = dir.join(name);
    std::fs::write(&path, text).with_context(|| format!("cannot write {}", path.display()))
}

/// Run metadata (wall-clock data lives here, not in the report).
pub fn write_meta(dir: &Path, subcommand: &str, seconds: f64) -> anyhow::Result<()> {
    let started = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let meta = json!({
        "subcommand": subcommand,
        "unix_time": started,
        "elapsed_seconds": seconds,
        "threads": rayon::current_num_threads(),
    });
    write_json(dir, "run_meta.json", &meta)
}

/// Plain-text SVG polyline of log10(median deviation) against log10(n).
pub fn svg_loglog(ns: &[usize], medians: &[f64], title: &str) -> String {
    const W: f64 = 640.0;
    const H: f64 = 420.0;
    const M: f64 = 56.0;
    let xs: Vec<f64> = ns.iter().map(|&n| (n as f64).log10()).collect();
    let ys: Vec<f64> = medians.iter().map(|&m| m.max(1e-300).log10()).collect();
    let (xmin, xmax) = bounds(&xs);
    let (ymin, ymax) = bounds(&ys);
    let sx = |x: f64| M + (x - xmin) / (xmax - xmin).max(1e-12) * (W - 2.0 * M);
    let sy = |y: f64| H - M - (y - ymin) / (ymax - ymin).max(1e-12) * (H - 2.0 * M);
    let pts: Vec<String> =
        xs.iter().zip(&ys).map(|(&x, &y)| format!("{:.2},{:.2}", sx(x), sy(y))).collect();
    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" viewBox=\"0 0 {W} {H}\">\n"
    ));
    out.push_str(&format!(
        "  <rect width=\"{W}\" height=\"{H}\" fill=\"white\"/>\n  <text x=\"{:.1}\" y=\"24\" text-anchor=\"middle\" font-family=\"monospace\" font-size=\"14\">{}</text>\n",
        W / 2.0,
        title
    ));
    out.push_str(&format!(
        "  <line x1=\"{M}\" y1=\"{:.1}\" x2=\"{:.1}\" y2=\"{:.1}\" stroke=\"black\"/>\n",
        H - M,
        W - M,
        H - M
    ));
    out.push_str(&format!(
        "  <line x1=\"{M}\" y1=\"{M}\" x2=\"{M}\" y2=\"{:.1}\" stroke=\"black\"/>\n",
        H - M
    ));
    for (&n, &x) in ns.iter().zip(&xs) {
        out.push_str(&format!(
            "  <text x=\"{:.2}\" y=\"{:.1}\" text-anchor=\"middle\" font-family=\"monospace\" font-size=\"10\">{}</text>\n",
            sx(x),
            H - M + 16.0,
            n
        ));
    }
    for &y in &[ymin, ymax] {
        out.push_str(&format!(
            "  <text x=\"{:.1}\" y=\"{:.2}\" text-anchor=\"end\" font-family=\"monospace\" font-size=\"10\">{:.2}</text>\n",
            M - 6.0,
            sy(y) + 3.0,
            y
        ));
    }
    out.push_str(&format!(
        "  <polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"1.5\" points=\"{}\"/>\n",
        pts.join(" ")
    ));
    for p in &pts {
        let (px, py) = p.split_once(',').unwrap();
        out.push_str(&format!("  <circle cx=\"{px}\" cy=\"{py}\" r=\"2.5\" fill=\"steelblue\"/>\n"));
    }
    out.push_str("  <text x=\"");
    out.push_str(&format!(
        "{:.1}\" y=\"{:.1}\" text-anchor=\"middle\" font-family=\"monospace\" font-size=\"12\">log10 n</text>\n",
        W / 2.0,
        H - 12.0
    ));
    out.push_str("</svg>\n");
    out
}

fn bounds(v: &[f64]) -> (f64, f64) {
    let mn = v.iter().cloned().fold(f64::INFINITY, f64::min);
    let mx = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    (mn, mx)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn non_finite_serialization() {
        assert_eq!(num(f64::INFINITY), Value::String("inf".into()));
        assert_eq!(num(f64::NEG_INFINITY), Value::String("-inf".into()));
        assert_eq!(num(1.5), json!(1.5));
    }

    #[test]
    fn svg_is_wellformed_enough() {
        let s = svg_loglog(&[256, 512, 1024], &[0.05, 0.035, 0.024], "test");
        assert!(s.starts_with("<svg"));
        assert!(s.contains("polyline"));
        assert!(s.ends_with("</svg>\n"));
    }
}
