//! Check reports as JSON lines: one record per check, then a summary line.

use std::fmt::Display;

use serde::{Serialize, Serializer};
use serde_json::{json, Value};

/// Stated once per report so no verdict is read as a claim about infinite modules.
pub const FINITE_REDUCTION: &str = "finite shadow: finite modules are pure-injective, so pure = split; \
for finitely presented modules lim-closure membership = Add membership; Prod is tested on finite powers";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Record {
    pub check: String,
    pub inputs: Vec<String>,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Value::is_null")]
    pub detail: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<usize>,
}

impl Record {
    pub fn new(check: impl Into<String>, inputs: Vec<String>, verdict: Verdict) -> Self {
        Record {
            check: check.into(),
            inputs,
            verdict,
            detail: Value::Null,
            bound: None,
        }
    }

    pub fn with_detail(mut self, detail: Value) -> Self {
        self.detail = detail;
        self
    }

    pub fn with_bound(mut self, bound: usize) -> Self {
        self.bound = Some(bound);
        self
    }
}

#[derive(Clone, Debug, Default)]
pub struct Report {
    records: Vec<Record>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub inconclusive: usize,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, r: Record) {
        self.records.push(r);
    }

    pub fn extend(&mut self, other: Report) {
        self.records.extend(other.records);
    }

    pub fn records(&self) -> &[Record] {
        &self.records
    }

    pub fn summary(&self) -> Summary {
        let mut s = Summary::default();
        for r in &self.records {
            match r.verdict {
                Verdict::Pass => s.pass += 1,
                Verdict::Fail => s.fail += 1,
                Verdict::Inconclusive => s.inconclusive += 1,
            }
        }
        s
    }

    /// 0 all pass, 1 any failure, 3 inconclusive without failures.
    pub fn exit_code(&self) -> i32 {
        let s = self.summary();
        if s.fail > 0 {
            1
        } else if s.inconclusive > 0 {
            3
        } else {
            0
        }
    }

    /// Records in insertion order, preceded by `header` when given and followed by the summary.
    pub fn to_jsonl(&self, header: Option<&Value>) -> String {
        let mut out = String::new();
        if let Some(h) = header {
            out.push_str(&h.to_string());
            out.push('\n');
        }
        for r in &self.records {
            out.push_str(&serde_json::to_string(r).expect("records serialize"));
            out.push('\n');
        }
        let summary = json!({ "summary": self.summary(), "reduction": FINITE_REDUCTION });
        out.push_str(&summary.to_string());
        out.push('\n');
        out
    }
}

pub(crate) fn display_opt<T: Display, S: Serializer>(v: &Option<T>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(x) => s.serialize_some(&x.to_string()),
        None => s.serialize_none(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_and_lines() {
        let mut r = Report::new();
        r.push(Record::new("a", vec!["M".into()], Verdict::Pass));
        assert_eq!(r.exit_code(), 0);
        r.push(Record::new("b", vec![], Verdict::Inconclusive).with_bound(2));
        assert_eq!(r.exit_code(), 3);
        r.push(Record::new("c", vec![], Verdict::Fail));
        assert_eq!(r.exit_code(), 1);
        let text = r.to_jsonl(None);
        assert_eq!(text.lines().count(), 4);
        assert!(text.lines().next().unwrap().contains("\"verdict\":\"pass\""));
        assert!(text.contains("\"bound\":2"));
    }
}
