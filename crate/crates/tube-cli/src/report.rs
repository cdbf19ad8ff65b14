//! Report layout and plot-data export.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::Value;
use tube::batch::CaseRecord;
use tube::flatstrip::TapeRow;
use tube::properties::{Soundness, SuiteResult};
use tube::rankone::DisplacementRecord;

use crate::config::PlotKind;

#[derive(Debug, Serialize)]
pub struct TapeReport {
    pub p: u32,
    pub width: f64,
    pub certified: bool,
    /// Sequence points with `|z| ≤ window`.
    pub window: i64,
    pub rows: Vec<TapeRow>,
}

/// Sampled geodesic of a scissors in Poincaré-disk coordinates.
#[derive(Debug, Serialize)]
pub struct Polyline {
    pub scissors: usize,
    pub line: &'static str,
    /// `(s, x, y)` with `s` the geodesic parameter.
    pub points: Vec<[f64; 3]>,
}

#[derive(Debug, Serialize)]
pub struct CurvePoint {
    pub n: u64,
    pub error: f64,
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub version: &'static str,
    pub scenario: String,
    pub space: String,
    pub config: BTreeMap<String, String>,
    pub passed: bool,
    pub suites: Vec<SuiteResult>,
    /// Unit-distance queries spent by the scenario.
    pub oracle_calls: u64,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub cases: Vec<CaseRecord>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub displacement: Vec<DisplacementRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub soundness: Option<Soundness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tape: Option<TapeReport>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub scissors: Vec<Polyline>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub error_curve: Vec<CurvePoint>,
    /// Scenario-level failure that cut the run short.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
}

impl Report {
    pub fn new(scenario: &str, space: &str, config: BTreeMap<String, String>) -> Self {
        Report {
            version: env!("CARGO_PKG_VERSION"),
            scenario: scenario.into(),
            space: space.into(),
            config,
            passed: false,
            suites: Vec::new(),
            oracle_calls: 0,
            cases: Vec::new(),
            displacement: Vec::new(),
            soundness: None,
            tape: None,
            scissors: Vec::new(),
            error_curve: Vec::new(),
            failure: None,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

#[derive(Debug, thiserror::Error)]
pub enum PlotError {
    #[error("report has no {0} data")]
    Absent(&'static str),
    #[error("malformed report: {0}")]
    Malformed(String),
}

fn num(v: &Value, key: &str) -> Result<String, PlotError> {
    v.get(key)
        .filter(|x| x.is_number())
        .map(|x| x.to_string())
        .ok_or_else(|| PlotError::Malformed(format!("missing number `{key}`")))
}

fn section<'a>(report: &'a Value, key: &str, kind: PlotKind) -> Result<&'a Vec<Value>, PlotError> {
    match report.get(key) {
        None | Some(Value::Null) => Err(PlotError::Absent(kind.name())),
        Some(Value::Array(a)) if a.is_empty() => Err(PlotError::Absent(kind.name())),
        Some(Value::Array(a)) => Ok(a),
        Some(_) => Err(PlotError::Malformed(format!("`{key}` is not a list"))),
    }
}

/// CSV for one plot kind from a parsed report.
///
/// * `tape`: `i,j,z,u,t`, one row per sequence point in strip coordinates.
/// * `scissors`: `scissors,line,s,x,y`, polylines in the Poincaré disk.
/// * `error_curve`: `n,error` with `error = δ_formula − δ_oracle`.
pub fn plot_csv(report: &Value, kind: PlotKind) -> Result<String, PlotError> {
    if !report.is_object() {
        return Err(PlotError::Malformed("not a JSON object".into()));
    }
    let mut out = String::new();
    match kind {
        PlotKind::Tape => {
            let tape = report.get("tape").filter(|t| !t.is_null()).ok_or(PlotError::Absent("tape"))?;
            let rows = section(tape, "rows", kind)?;
            out.push_str("i,j,z,u,t\n");
            for r in rows {
                let f: Result<Vec<String>, _> = ["i", "j", "z", "u", "t"].iter().map(|k| num(r, k)).collect();
                out.push_str(&f?.join(","));
                out.push('\n');
            }
        }
        PlotKind::Scissors => {
            out.push_str("scissors,line,s,x,y\n");
            for l in section(report, "scissors", kind)? {
                let id = num(l, "scissors")?;
                let line = l.get("line").and_then(Value::as_str).ok_or_else(|| PlotError::Malformed("line".into()))?;
                let pts = l.get("points").and_then(Value::as_array).ok_or_else(|| PlotError::Malformed("points".into()))?;
                for p in pts {
                    let c = p.as_array().filter(|c| c.len() == 3).ok_or_else(|| PlotError::Malformed("point".into()))?;
                    out.push_str(&format!("{id},{line},{},{},{}\n", c[0], c[1], c[2]));
                }
            }
        }
        PlotKind::ErrorCurve => {
            out.push_str("n,error\n");
            for p in section(report, "error_curve", kind)? {
                out.push_str(&format!("{},{}\n", num(p, "n")?, num(p, "error")?));
            }
        }
    }
    Ok(out)
}
