//! Versioned machine-readable reports and their output formats.

use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const SCHEMA_VERSION: u32 = 1;

/// Job configuration: parses losslessly from CLI flags or a JSON job file.
/// Unknown fields are rejected.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobSpec {
    pub subcommand: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub model: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_bodies: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nu: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nu2: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degree: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub points: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub format: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eigenfunctions: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tau2_homogeneous: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub set: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mark: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_coeff_degree: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_order_degree: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub zero_radial: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub check: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wdeg_max: Option<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Info,
}

/// Top-level report envelope; field order fixes the byte layout.
#[derive(Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub job: JobSpec,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u64>,
    pub result: Value,
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        match self.verdict {
            Verdict::Pass | Verdict::Info => 0,
            Verdict::Fail => 1,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Flat key,value rows; arrays of {value, multiplicity} rows become
    /// dedicated lines.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str("key,value\n");
        out.push_str(&format!("schema_version,{}\n", self.schema_version));
        out.push_str(&format!("subcommand,{}\n", self.job.subcommand));
        out.push_str(&format!(
            "verdict,{}\n",
            serde_json::to_value(self.verdict).unwrap().as_str().unwrap()
        ));
        flatten_csv("result", &self.result, &mut out);
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "{} -> {}\n",
            self.job.subcommand,
            serde_json::to_value(self.verdict).unwrap().as_str().unwrap()
        ));
        out.push_str(&serde_json::to_string_pretty(&self.result).unwrap());
        out.push('\n');
        out
    }

    pub fn render(&self, format: &str) -> String {
        match format {
            "csv" => self.to_csv(),
            "text" => self.to_text(),
            _ => self.to_json(),
        }
    }
}

fn flatten_csv(prefix: &str, v: &Value, out: &mut String) {
    match v {
        Value::Object(map) => {
            for (k, val) in map {
                flatten_csv(&format!("{prefix}.{k}"), val, out);
            }
        }
        Value::Array(items) => {
            for (i, val) in items.iter().enumerate() {
                flatten_csv(&format!("{prefix}[{i}]"), val, out);
            }
        }
        other => {
            let s = match other {
                Value::String(s) => s.replace(',', ";"),
                v => v.to_string(),
            };
            out.push_str(&format!("{prefix},{s}\n"));
        }
    }
}
