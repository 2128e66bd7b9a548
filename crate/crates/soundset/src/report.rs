//! JSON run reports. There is deliberately no timestamp, so identical runs
//! give identical bytes.

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use soundset_core::{AlmostDisjointVerdict, AnalysisReport, FitConfig, HurstEstimate, Method};
use thiserror::Error;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ReportError {
    #[error("report field '{0}' is not a finite number")]
    NonFinite(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputDescriptor {
    /// File path as given, or a description of a synthetic source.
    pub source: String,
    pub samples: usize,
    /// Absent for plain-text series, which carry no rate.
    pub rate_hz: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateJson {
    pub hurst: f64,
    pub dimension: f64,
    pub raw_slope: f64,
    pub r_squared: f64,
    pub points_used: usize,
    pub clamped: bool,
}

impl From<&HurstEstimate> for EstimateJson {
    fn from(e: &HurstEstimate) -> Self {
        EstimateJson {
            hurst: e.hurst(),
            dimension: e.dimension(),
            raw_slope: e.raw_slope(),
            r_squared: e.r_squared(),
            points_used: e.points_used(),
            clamped: e.clamped(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisJson {
    pub variogram: EstimateJson,
    pub spectral: EstimateJson,
    pub wavelet: EstimateJson,
    pub mean_hurst: f64,
    pub mean_dimension: f64,
    pub persistence: String,
}

impl From<&AnalysisReport> for AnalysisJson {
    fn from(r: &AnalysisReport) -> Self {
        AnalysisJson {
            variogram: r.estimate(Method::Variogram).into(),
            spectral: r.estimate(Method::Spectral).into(),
            wavelet: r.estimate(Method::Wavelet).into(),
            mean_hurst: r.mean_hurst(),
            mean_dimension: r.mean_dimension(),
            persistence: r.persistence().name().to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecurrenceStats {
    pub m: usize,
    pub tau: usize,
    pub epsilon: f64,
    pub achieved_rate: f64,
    pub decimate: usize,
    pub points: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerdictJson {
    pub dim_a: f64,
    pub dim_b: f64,
    pub dim_intersection: f64,
    pub tolerance: f64,
    pub margin: f64,
    pub is_almost_disjoint: bool,
}

impl VerdictJson {
    pub fn new(v: &AlmostDisjointVerdict, tolerance: f64) -> Self {
        VerdictJson {
            dim_a: v.dim_a,
            dim_b: v.dim_b,
            dim_intersection: v.dim_intersection,
            tolerance,
            margin: v.margin,
            is_almost_disjoint: v.is_almost_disjoint,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub tool_version: String,
    pub operation: String,
    pub inputs: Vec<InputDescriptor>,
    /// Everything needed to rerun: fit windows, embedding, operator flags.
    pub parameters: Map<String, Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub analysis: Option<AnalysisJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub recurrence_stats: Option<RecurrenceStats>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verdict: Option<VerdictJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

pub fn fit_config_json(cfg: &FitConfig) -> Value {
    serde_json::json!({
        "min_lag": cfg.min_lag,
        "max_lag_fraction": cfg.max_lag_fraction,
        "lags_per_octave": cfg.lags_per_octave,
        "spectral_low_cut": cfg.spectral_low_cut,
        "spectral_high_fraction": cfg.spectral_high_fraction,
        "spectral_taper": cfg.spectral_taper.name(),
    })
}

fn check(name: &str, x: f64) -> Result<(), ReportError> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(ReportError::NonFinite(name.to_string()))
    }
}

fn check_estimate(prefix: &str, e: &EstimateJson) -> Result<(), ReportError> {
    check(&format!("{prefix}.hurst"), e.hurst)?;
    check(&format!("{prefix}.dimension"), e.dimension)?;
    check(&format!("{prefix}.raw_slope"), e.raw_slope)?;
    check(&format!("{prefix}.r_squared"), e.r_squared)
}

/// serde_json turns non-finite floats into `null`, so a null anywhere in
/// the parameters means a bad number slipped in.
fn check_value(name: &str, v: &Value) -> Result<(), ReportError> {
    match v {
        Value::Null => Err(ReportError::NonFinite(name.to_string())),
        Value::Array(items) => items.iter().try_for_each(|x| check_value(name, x)),
        Value::Object(map) => map
            .iter()
            .try_for_each(|(k, x)| check_value(&format!("{name}.{k}"), x)),
        _ => Ok(()),
    }
}

impl RunReport {
    pub fn new(operation: impl Into<String>) -> Self {
        RunReport {
            tool_version: TOOL_VERSION.to_string(),
            operation: operation.into(),
            inputs: Vec::new(),
            parameters: Map::new(),
            analysis: None,
            recurrence_stats: None,
            verdict: None,
            seed: None,
        }
    }

    pub fn param(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.parameters.insert(key.to_string(), value.into());
        self
    }

    pub fn validate(&self) -> Result<(), ReportError> {
        for (k, v) in &self.parameters {
            check_value(&format!("parameters.{k}"), v)?;
        }
        if let Some(a) = &self.analysis {
            check_estimate("analysis.variogram", &a.variogram)?;
            check_estimate("analysis.spectral", &a.spectral)?;
            check_estimate("analysis.wavelet", &a.wavelet)?;
            check("analysis.mean_hurst", a.mean_hurst)?;
            check("analysis.mean_dimension", a.mean_dimension)?;
        }
        if let Some(r) = &self.recurrence_stats {
            check("recurrence_stats.epsilon", r.epsilon)?;
            check("recurrence_stats.achieved_rate", r.achieved_rate)?;
        }
        if let Some(v) = &self.verdict {
            for (name, x) in [
                ("dim_a", v.dim_a),
                ("dim_b", v.dim_b),
                ("dim_intersection", v.dim_intersection),
                ("tolerance", v.tolerance),
                ("margin", v.margin),
            ] {
                check(&format!("verdict.{name}"), x)?;
            }
        }
        Ok(())
    }

    /// Pretty JSON with a trailing newline, after checking every number.
    pub fn to_json(&self) -> Result<String, ReportError> {
        self.validate()?;
        let mut s = serde_json::to_string_pretty(self).expect("report types always serialize");
        s.push('\n');
        Ok(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use soundset_core::analyze_all;

    fn sample_report() -> RunReport {
        let x: Vec<f64> = (0..512).map(|t| ((t * 7919) % 257) as f64).collect();
        let mut r = RunReport::new("analyze");
        r.param("fit_config", fit_config_json(&FitConfig::default()));
        r.analysis = Some((&analyze_all(&x, &FitConfig::default()).unwrap()).into());
        r
    }

    #[test]
    fn json_shape() {
        let v: Value = serde_json::from_str(&sample_report().to_json().unwrap()).unwrap();
        for m in ["variogram", "spectral", "wavelet"] {
            let e = &v["analysis"][m];
            for field in [
                "hurst",
                "dimension",
                "raw_slope",
                "r_squared",
                "points_used",
                "clamped",
            ] {
                assert!(!e[field].is_null(), "{m}.{field}");
            }
            assert_eq!(
                e["dimension"].as_f64().unwrap(),
                2.0 - e["hurst"].as_f64().unwrap()
            );
        }
        assert!(v.get("seed").is_none());
        assert!(v.get("timestamp").is_none());
        assert_eq!(v["tool_version"], TOOL_VERSION);
    }

    #[test]
    fn round_trips() {
        let r = sample_report();
        let back: RunReport = serde_json::from_str(&r.to_json().unwrap()).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn rejects_non_finite() {
        let mut r = sample_report();
        r.param("offset", f64::NAN);
        assert_eq!(
            r.to_json(),
            Err(ReportError::NonFinite("parameters.offset".into()))
        );
        let mut r = sample_report();
        r.recurrence_stats = Some(RecurrenceStats {
            m: 2,
            tau: 1,
            epsilon: f64::INFINITY,
            achieved_rate: 0.1,
            decimate: 1,
            points: 9,
        });
        assert!(r.to_json().is_err());
    }
}
