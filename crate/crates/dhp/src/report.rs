//! Machine-readable check reports.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Serialize, Serializer};
use serde_json::Value;

/// Largest residual of a check, or `Exact` for integer and sign algebra.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Residual {
    Exact,
    Value(f64),
}

impl Serialize for Residual {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Residual::Exact => s.serialize_str("exact"),
            Residual::Value(v) if v.is_finite() => s.serialize_f64(*v),
            Residual::Value(_) => s.serialize_str("inf"),
        }
    }
}

impl fmt::Display for Residual {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Residual::Exact => f.write_str("exact"),
            Residual::Value(v) => write!(f, "{v:.3e}"),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub check_id: String,
    pub params: BTreeMap<String, Value>,
    pub universe: String,
    pub max_residual: Residual,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
}

impl CheckReport {
    /// Exact check: passes iff there is no counterexample.
    pub fn exact(id: &str, universe: String, counterexample: Option<String>) -> Self {
        CheckReport {
            check_id: id.to_string(),
            params: BTreeMap::new(),
            universe,
            max_residual: Residual::Exact,
            pass: counterexample.is_none(),
            counterexample,
        }
    }

    /// Numeric check against `tol`; the counterexample is kept only on failure.
    pub fn numeric(id: &str, universe: String, worst: Worst, tol: f64) -> Self {
        let pass = worst.value <= tol;
        let mut params = BTreeMap::new();
        params.insert("tolerance".to_string(), Value::from(tol));
        CheckReport {
            check_id: id.to_string(),
            params,
            universe,
            max_residual: Residual::Value(worst.value),
            pass,
            counterexample: if pass { None } else { Some(worst.at.unwrap_or_else(|| "no samples".into())) },
        }
    }

    pub fn param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.params.insert(key.to_string(), value.into());
        self
    }
}

/// Running maximum of a residual together with the input that produced it.
/// `NaN` and evaluation errors count as infinite.
#[derive(Clone, Debug, Default)]
pub struct Worst {
    pub value: f64,
    pub at: Option<String>,
}

impl Worst {
    pub fn new() -> Self {
        Worst { value: 0.0, at: None }
    }

    pub fn add(&mut self, residual: f64, at: impl FnOnce() -> String) {
        let r = if residual.is_nan() { f64::INFINITY } else { residual };
        if r > self.value || self.at.is_none() {
            self.value = self.value.max(r);
            self.at = Some(at());
        }
    }

    pub fn add_result<E: fmt::Display>(&mut self, residual: Result<f64, E>, at: impl FnOnce() -> String) {
        match residual {
            Ok(r) => self.add(r, at),
            Err(e) => {
                let where_ = at();
                self.add(f64::INFINITY, || format!("{where_}: {e}"));
            }
        }
    }

    pub fn merge(&mut self, other: Worst) {
        if let Some(at) = other.at {
            self.add(other.value, || at);
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub version: String,
    pub checks: Vec<CheckReport>,
    pub pass: bool,
}

impl Report {
    pub fn new(mut checks: Vec<CheckReport>) -> Self {
        checks.sort_by(|a, b| a.check_id.cmp(&b.check_id));
        let pass = checks.iter().all(|c| c.pass);
        Report { version: env!("CARGO_PKG_VERSION").to_string(), checks, pass }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report is serializable")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worst_tracks_maximum_and_nan() {
        let mut w = Worst::new();
        w.add(1e-12, || "a".into());
        w.add(1e-14, || "b".into());
        assert_eq!(w.at.as_deref(), Some("a"));
        w.add(f64::NAN, || "c".into());
        assert_eq!(w.value, f64::INFINITY);
        assert_eq!(w.at.as_deref(), Some("c"));
    }

    #[test]
    fn first_sample_is_recorded_even_when_zero() {
        let mut w = Worst::new();
        w.add(0.0, || "z".into());
        assert_eq!(w.at.as_deref(), Some("z"));
    }

    #[test]
    fn numeric_report_shape() {
        let mut w = Worst::new();
        w.add(2e-9, || "z=0+1i".into());
        let fail = CheckReport::numeric("x", "grid".into(), w.clone(), 1e-9);
        assert!(!fail.pass);
        assert_eq!(fail.counterexample.as_deref(), Some("z=0+1i"));
        let ok = CheckReport::numeric("x", "grid".into(), w, 1e-6);
        assert!(ok.pass && ok.counterexample.is_none());
        let json = serde_json::to_value(&ok).unwrap();
        assert_eq!(json["max_residual"], 2e-9);
        assert!(json.get("counterexample").is_none());
    }

    #[test]
    fn report_sorted_and_exact_serialized() {
        let r = Report::new(vec![
            CheckReport::exact("b", "u".into(), None),
            CheckReport::exact("a", "u".into(), Some("x".into())),
        ]);
        assert_eq!(r.checks[0].check_id, "a");
        assert!(!r.pass);
        let json: Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(json["checks"][1]["max_residual"], "exact");
        assert_eq!(json["pass"], false);
    }
}
