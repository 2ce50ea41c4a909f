//! Structured claim-check reports with stable JSON and CSV emission.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Info,
}

/// One named check: an identity or inequality with its expected and actual
/// values rendered as exact decimal strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub claim_id: String,
    pub parameters: BTreeMap<String, String>,
    pub expected: String,
    pub actual: String,
    pub status: Status,
}

impl Check {
    pub fn new(
        claim_id: impl Into<String>,
        parameters: impl IntoIterator<Item = (String, String)>,
        expected: impl ToString,
        actual: impl ToString,
        status: Status,
    ) -> Self {
        Check {
            claim_id: claim_id.into(),
            parameters: parameters.into_iter().collect(),
            expected: expected.to_string(),
            actual: actual.to_string(),
            status,
        }
    }

    /// Pass/fail from a boolean assertion.
    pub fn assertion(
        claim_id: impl Into<String>,
        parameters: impl IntoIterator<Item = (String, String)>,
        expected: impl ToString,
        actual: impl ToString,
        ok: bool,
    ) -> Self {
        Check::new(
            claim_id,
            parameters,
            expected,
            actual,
            if ok { Status::Pass } else { Status::Fail },
        )
    }
}

/// Parameter map literal helper.
pub fn params<const N: usize>(kv: [(&str, String); N]) -> Vec<(String, String)> {
    kv.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub version: String,
    pub config: BTreeMap<String, String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<String>,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(config: impl IntoIterator<Item = (String, String)>, deterministic: bool) -> Self {
        let timestamp = if deterministic {
            None
        } else {
            Some(
                std::time::SystemTime::now()
                    .duration_since(std::time::UNIX_EPOCH)
                    .map(|d| d.as_secs().to_string())
                    .unwrap_or_else(|_| "0".into()),
            )
        };
        Report {
            version: env!("CARGO_PKG_VERSION").to_string(),
            config: config.into_iter().collect(),
            timestamp,
            checks: Vec::new(),
        }
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn extend(&mut self, checks: impl IntoIterator<Item = Check>) {
        self.checks.extend(checks);
    }

    pub fn any_fail(&self) -> bool {
        self.checks.iter().any(|c| c.status == Status::Fail)
    }

    pub fn counts(&self) -> (usize, usize, usize) {
        let mut pass = 0;
        let mut fail = 0;
        let mut info = 0;
        for c in &self.checks {
            match c.status {
                Status::Pass => pass += 1,
                Status::Fail => fail += 1,
                Status::Info => info += 1,
            }
        }
        (pass, fail, info)
    }

    /// Canonical JSON: struct field order is fixed, maps are sorted.
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(Error::from)
    }

    /// CSV with one row per check; parameters join as `k=v` pairs.
    pub fn to_csv(&self) -> Result<String> {
        let mut out = String::from("claim_id,parameters,expected,actual,status\n");
        for c in &self.checks {
            let params = c
                .parameters
                .iter()
                .map(|(k, v)| format!("{k}={v}"))
                .collect::<Vec<_>>()
                .join(";");
            for field in [&c.claim_id, &params, &c.expected, &c.actual] {
                push_csv_field(&mut out, field);
                out.push(',');
            }
            out.push_str(match c.status {
                Status::Pass => "pass",
                Status::Fail => "fail",
                Status::Info => "info",
            });
            out.push('\n');
        }
        Ok(out)
    }
}

fn push_csv_field(out: &mut String, field: &str) {
    if field.contains([',', '"', '\n']) {
        out.push('"');
        out.push_str(&field.replace('"', "\"\""));
        out.push('"');
    } else {
        out.push_str(field);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_report_shape() {
        let r = Report::new([("suite".to_string(), "none".to_string())], true);
        let json = r.to_json().unwrap();
        assert!(json.contains("\"version\""));
        assert!(json.contains("\"checks\": []"));
        assert!(!json.contains("timestamp"));
    }

    #[test]
    fn csv_single_row() {
        let mut r = Report::new([], true);
        r.push(Check::assertion(
            "layer-size",
            params([("n", "3".into()), ("k", "2".into())]),
            7,
            7,
            true,
        ));
        let csv = r.to_csv().unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 2);
        assert_eq!(lines[0], "claim_id,parameters,expected,actual,status");
        assert_eq!(lines[1], "layer-size,k=2;n=3,7,7,pass");
    }

    #[test]
    fn json_roundtrip_seeded_reports() {
        use rand::prelude::*;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let mut r = Report::new([("seed".to_string(), rng.gen::<u64>().to_string())], true);
            for i in 0..rng.gen_range(0..10) {
                let st = match rng.gen_range(0..3) {
                    0 => Status::Pass,
                    1 => Status::Fail,
                    _ => Status::Info,
                };
                r.push(Check::new(
                    format!("check-{i}"),
                    params([("x", rng.gen::<u32>().to_string())]),
                    rng.gen::<u64>(),
                    rng.gen::<u64>(),
                    st,
                ));
            }
            let json = r.to_json().unwrap();
            assert_eq!(Report::from_json(&json).unwrap(), r);
        }
    }
}
