use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Inconclusive => "inconclusive",
        }
    }

    /// Fail dominates inconclusive, which dominates pass.
    pub fn worst(self, other: Verdict) -> Verdict {
        use Verdict::*;
        match (self, other) {
            (Fail, _) | (_, Fail) => Fail,
            (Inconclusive, _) | (_, Inconclusive) => Inconclusive,
            _ => Pass,
        }
    }
}

/// Points that exhibit a violation, with what they violate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub points: Vec<Vec<f64>>,
    pub note: String,
}

impl Witness {
    pub fn new(points: Vec<Vec<f64>>, note: impl Into<String>) -> Self {
        Self { points, note: note.into() }
    }
}

/// Result of one check. `margin` is the worst observed value of `statistic`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub check: String,
    pub verdict: Verdict,
    pub samples: usize,
    pub tolerance: f64,
    pub statistic: String,
    pub margin: f64,
    #[serde(default)]
    pub witnesses: Vec<Witness>,
    /// Auxiliary measurements, keyed by name.
    #[serde(default)]
    pub details: BTreeMap<String, f64>,
    #[serde(default)]
    pub notes: Vec<String>,
    /// Not serialized, so reports of identical runs are byte-identical.
    #[serde(skip)]
    pub wall_time: Duration,
    #[serde(default)]
    pub children: Vec<VerificationReport>,
}

impl VerificationReport {
    pub fn new(check: impl Into<String>, statistic: impl Into<String>, tolerance: f64) -> Self {
        Self {
            check: check.into(),
            verdict: Verdict::Pass,
            samples: 0,
            tolerance,
            statistic: statistic.into(),
            margin: 0.0,
            witnesses: Vec::new(),
            details: BTreeMap::new(),
            notes: Vec::new(),
            wall_time: Duration::ZERO,
            children: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn fail(&mut self, witness: Witness) {
        self.verdict = Verdict::Fail;
        self.witnesses.push(witness);
    }

    pub fn inconclusive(&mut self, witness: Witness) {
        self.verdict = self.verdict.worst(Verdict::Inconclusive);
        self.witnesses.push(witness);
    }

    pub fn detail(&mut self, key: &str, value: f64) {
        self.details.insert(key.to_string(), value);
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    /// Bundle of sub-checks; verdict is the worst child verdict.
    pub fn bundle(check: impl Into<String>, children: Vec<VerificationReport>) -> Self {
        let mut r = Self::new(check, "failed_children", 0.0);
        r.samples = children.iter().map(|c| c.samples).sum();
        r.margin = children.iter().filter(|c| !c.passed()).count() as f64;
        r.verdict = children.iter().fold(Verdict::Pass, |v, c| v.worst(c.verdict));
        r.wall_time = children.iter().map(|c| c.wall_time).sum();
        r.children = children;
        r
    }

    pub fn find(&self, check: &str) -> Option<&VerificationReport> {
        if self.check == check {
            return Some(self);
        }
        self.children.iter().find_map(|c| c.find(check))
    }

    /// One `key=value` record per line, children after their parent.
    pub fn to_key_value(&self) -> String {
        let mut out = String::new();
        self.write_records(&mut out, "");
        out
    }

    fn write_records(&self, out: &mut String, prefix: &str) {
        let name = if prefix.is_empty() { self.check.clone() } else { format!("{prefix}/{}", self.check) };
        let _ = write!(
            out,
            "check={name} verdict={} samples={} tolerance={:e} {}={:e} witnesses={}",
            self.verdict.as_str(),
            self.samples,
            self.tolerance,
            self.statistic,
            self.margin,
            self.witnesses.len()
        );
        for (k, v) in &self.details {
            let _ = write!(out, " {k}={v:e}");
        }
        out.push('\n');
        for c in &self.children {
            c.write_records(out, &name);
        }
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Serialization(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Serialization(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundle_takes_worst() {
        let a = VerificationReport::new("a", "x", 1.0);
        let mut b = VerificationReport::new("b", "x", 1.0);
        b.fail(Witness::new(vec![vec![0.0, 1.0]], "planted"));
        let all = VerificationReport::bundle("all", vec![a, b]);
        assert_eq!(all.verdict, Verdict::Fail);
        assert_eq!(all.find("b").unwrap().witnesses.len(), 1);
        let kv = all.to_key_value();
        assert!(kv.lines().nth(2).unwrap().starts_with("check=all/b verdict=fail"));
        assert_eq!(VerificationReport::from_json(&all.to_json().unwrap()).unwrap(), all);
    }
}
