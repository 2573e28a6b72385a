//! Machine-readable verification reports shared by every suite.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use serde_json::{json, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub status: Status,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    pub suite: String,
    pub algebra: String,
    pub cutoffs: BTreeMap<String, i64>,
    pub results: Vec<CheckResult>,
}

impl Report {
    pub fn new(suite: &str, algebra: &str) -> Self {
        Report { suite: suite.into(), algebra: algebra.into(), ..Default::default() }
    }

    pub fn cutoff(mut self, name: &str, value: i64) -> Self {
        self.cutoffs.insert(name.into(), value);
        self
    }

    pub fn record(&mut self, name: impl Into<String>, ok: bool, detail: impl Into<String>) {
        let status = if ok { Status::Pass } else { Status::Fail };
        self.results.push(CheckResult { name: name.into(), status, detail: detail.into() });
    }

    /// Records `Ok` as a pass with `pass_detail`, `Err` as a failure.
    pub fn check(&mut self, name: impl Into<String>, outcome: Result<String, String>) {
        match outcome {
            Ok(d) => self.record(name, true, d),
            Err(d) => self.record(name, false, d),
        }
    }

    pub fn merge(&mut self, other: Report) {
        self.results.extend(other.results);
    }

    pub fn passed(&self) -> bool {
        self.results.iter().all(|r| r.status == Status::Pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.results.iter().filter(|r| r.status == Status::Fail)
    }

    pub fn find(&self, name: &str) -> Option<&CheckResult> {
        self.results.iter().find(|r| r.name == name)
    }

    /// JSON with sorted keys (serde_json maps are ordered).
    pub fn to_json(&self) -> Value {
        json!({
            "suite": self.suite,
            "algebra": self.algebra,
            "cutoffs": self.cutoffs,
            "results": self.results,
        })
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "suite {} on {}", self.suite, self.algebra)?;
        let width = self.results.iter().map(|r| r.name.len()).max().unwrap_or(0);
        for r in &self.results {
            let s = match r.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
            };
            writeln!(f, "{s}  {:width$}  {}", r.name, r.detail)?;
        }
        let failed = self.failures().count();
        write!(f, "{} checks, {} failed", self.results.len(), failed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_keys_are_sorted() {
        let mut r = Report::new("lie", "sl2").cutoff("max_weight", 2);
        r.record("antisymmetry", true, "");
        let text = serde_json::to_string(&r.to_json()).unwrap();
        let a = text.find("\"algebra\"").unwrap();
        let c = text.find("\"cutoffs\"").unwrap();
        let s = text.find("\"suite\"").unwrap();
        assert!(a < c && c < s);
        assert!(text.contains("\"status\":\"pass\""));
        assert!(r.passed());
    }
}
