//! JSON rendering with a fixed field order and 17 significant digits for residuals.

use std::io::Write;
use std::path::Path;

use serde::Serialize;
use serde_json::value::RawValue;

use super::config::RunConfig;
use super::suite::Report;

#[derive(Debug, thiserror::Error)]
pub enum ReportError {
    #[error("cannot write report to {path}: {source}")]
    Io { path: String, source: std::io::Error },
}

#[derive(Serialize)]
struct Artifact {
    name: &'static str,
    version: &'static str,
}

#[derive(Serialize)]
struct CheckJson<'a> {
    name: &'a str,
    reference: &'a str,
    samples: usize,
    residual: Box<RawValue>,
    tolerance: Box<RawValue>,
    comparison: &'a str,
    pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    note: Option<&'a str>,
}

#[derive(Serialize)]
struct ReportJson<'a> {
    artifact: Artifact,
    config: &'a RunConfig,
    seed: u64,
    checks: Vec<CheckJson<'a>>,
    pass: bool,
}

/// `{:.16e}`, or `null` for values JSON cannot carry.
fn number(v: f64) -> Box<RawValue> {
    let s = if v.is_finite() { format!("{v:.16e}") } else { "null".to_string() };
    RawValue::from_string(s).expect("valid JSON number")
}

pub fn render_json(report: &Report) -> String {
    let doc = ReportJson {
        artifact: Artifact { name: "cgbundle", version: env!("CARGO_PKG_VERSION") },
        config: &report.config,
        seed: report.config.seed,
        checks: report
            .checks
            .iter()
            .map(|c| CheckJson {
                name: c.name,
                reference: c.reference,
                samples: c.samples,
                residual: number(c.residual),
                tolerance: number(c.tolerance),
                comparison: c.comparison,
                pass: c.pass,
                note: c.note,
            })
            .collect(),
        pass: report.pass,
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("report serializes");
    s.push('\n');
    s
}

/// Writes to `path`, or to standard output when `None`.
pub fn write_report(report: &Report, path: Option<&Path>) -> Result<(), ReportError> {
    let text = render_json(report);
    match path {
        Some(p) => std::fs::write(p, text).map_err(|source| ReportError::Io { path: p.display().to_string(), source }),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|source| ReportError::Io { path: "<stdout>".into(), source })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::suite::CheckResult;

    fn report(residual: f64) -> Report {
        let check = CheckResult {
            name: "base.curvature_symmetries",
            reference: "base-jets",
            comparison: "lt",
            samples: 3,
            residual,
            tolerance: 1e-10,
            pass: residual < 1e-10,
            note: None,
        };
        Report { config: RunConfig::default(), pass: check.pass, checks: vec![check] }
    }

    #[test]
    fn residuals_carry_seventeen_digits_and_nan_is_null() {
        let s = render_json(&report(1.0 / 3.0));
        assert!(s.contains("\"residual\": 3.3333333333333331e-1"), "{s}");
        let v: serde_json::Value = serde_json::from_str(&render_json(&report(f64::NAN))).unwrap();
        assert!(v["checks"][0]["residual"].is_null());
        assert_eq!(v["pass"], false);
    }

    #[test]
    fn field_order_is_fixed() {
        let s = render_json(&report(0.0));
        let at = |k: &str| s.find(k).unwrap();
        assert!(at("\"artifact\"") < at("\"config\"") && at("\"config\"") < at("\"seed\""));
        assert!(at("\"seed\"") < at("\"checks\"") && at("\"residual\"") < at("\"tolerance\""));
    }
}
