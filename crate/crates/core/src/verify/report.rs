use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;

use crate::moser::LemmaReport;

use super::{SweepSpec, Theorem};

pub const REPORT_SCHEMA: u32 = 1;

/// Which per-instance records a report keeps. Summary counts always cover
/// every instance.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RecordLevel {
    All,
    #[default]
    Tight,
    Violations,
}

impl std::str::FromStr for RecordLevel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "all" => Ok(Self::All),
            "tight" => Ok(Self::Tight),
            "violations" => Ok(Self::Violations),
            _ => Err(format!("unknown record level `{s}` (all|tight|violations)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Record {
    pub key: String,
    pub theorem: Theorem,
    /// Sub-check within the theorem, e.g. `main-reduction`.
    pub check: String,
    pub lhs: Option<i64>,
    pub rhs: Option<i64>,
    pub holds: bool,
    pub tight: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Counts {
    pub instances: u64,
    pub violations: u64,
    pub tight: u64,
}

impl Counts {
    fn add(&mut self, other: &Counts) {
        self.instances += other.instances;
        self.violations += other.violations;
        self.tight += other.tight;
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    #[serde(flatten)]
    pub total: Counts,
    pub by_check: BTreeMap<String, Counts>,
    /// Wall-clock time, only present when timing was requested.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub runtime_ms: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub schema: u32,
    pub spec: SweepSpec,
    pub summary: Summary,
    pub records: Vec<Record>,
}

impl VerificationReport {
    pub fn violations(&self) -> u64 {
        self.summary.total.violations
    }

    pub fn is_clean(&self) -> bool {
        self.violations() == 0
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("key,theorem,check,lhs,rhs,holds,tight\n");
        let opt = |x: Option<i64>| x.map(|v| v.to_string()).unwrap_or_default();
        for r in &self.records {
            let _ = writeln!(
                out,
                "\"{}\",{},{},{},{},{},{}",
                r.key.replace('"', "\"\""),
                r.theorem,
                r.check,
                opt(r.lhs),
                opt(r.rhs),
                r.holds,
                r.tight
            );
        }
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let t = &self.summary.total;
        let _ = writeln!(
            out,
            "instances {}  violations {}  tight {}",
            t.instances, t.violations, t.tight
        );
        for (check, c) in &self.summary.by_check {
            let _ = writeln!(
                out,
                "  {check:<22} instances {:>10}  violations {:>4}  tight {:>10}",
                c.instances, c.violations, c.tight
            );
        }
        let bad: Vec<&Record> = self.records.iter().filter(|r| !r.holds).collect();
        if !bad.is_empty() {
            let _ = writeln!(out, "violations:");
            for r in bad {
                let _ = writeln!(
                    out,
                    "  {} [{}] lhs={:?} rhs={:?} {}",
                    r.key,
                    r.check,
                    r.lhs,
                    r.rhs,
                    r.witness.as_ref().map(Value::to_string).unwrap_or_default()
                );
            }
        }
        out
    }
}

/// Accumulates counts for every instance and keeps the records the level asks for.
#[derive(Debug)]
pub(crate) struct Collector {
    level: RecordLevel,
    theorem: Theorem,
    counts: Vec<(&'static str, Counts)>,
    pub(crate) records: Vec<Record>,
}

impl Collector {
    pub(crate) fn new(level: RecordLevel, theorem: Theorem) -> Self {
        Self {
            level,
            theorem,
            counts: Vec::new(),
            records: Vec::new(),
        }
    }

    fn keeps(&self, holds: bool, tight: bool) -> bool {
        match self.level {
            RecordLevel::All => true,
            RecordLevel::Tight => tight || !holds,
            RecordLevel::Violations => !holds,
        }
    }

    fn count(&mut self, check: &'static str, holds: bool, tight: bool) {
        let c = Counts {
            instances: 1,
            violations: u64::from(!holds),
            tight: u64::from(tight),
        };
        match self.counts.iter_mut().find(|(k, _)| *k == check) {
            Some((_, entry)) => entry.add(&c),
            None => self.counts.push((check, c)),
        }
    }

    /// An inequality instance `lhs ≥ rhs`.
    pub(crate) fn inequality(
        &mut self,
        check: &'static str,
        lhs: i64,
        rhs: i64,
        key: impl FnOnce() -> String,
        witness: impl FnOnce() -> Option<Value>,
    ) -> bool {
        let holds = lhs >= rhs;
        let tight = lhs == rhs;
        self.count(check, holds, tight);
        if self.keeps(holds, tight) {
            self.records.push(Record {
                key: key(),
                theorem: self.theorem,
                check: check.to_string(),
                lhs: Some(lhs),
                rhs: Some(rhs),
                holds,
                tight,
                witness: witness(),
            });
        }
        holds
    }

    /// A yes/no property instance.
    pub(crate) fn property(
        &mut self,
        check: &'static str,
        holds: bool,
        key: impl FnOnce() -> String,
        witness: impl FnOnce() -> Option<Value>,
    ) -> bool {
        self.count(check, holds, false);
        if self.keeps(holds, false) {
            self.records.push(Record {
                key: key(),
                theorem: self.theorem,
                check: check.to_string(),
                lhs: None,
                rhs: None,
                holds,
                tight: false,
                witness: witness(),
            });
        }
        holds
    }

    /// Folds a lemma report in: every check counted, every violation recorded.
    pub(crate) fn lemmas(&mut self, check: &'static str, key: &str, report: LemmaReport) {
        let passed = report.checks - report.violations.len();
        for _ in 0..passed {
            self.count(check, true, false);
        }
        if self.level == RecordLevel::All && passed > 0 {
            self.records.push(Record {
                key: key.to_string(),
                theorem: self.theorem,
                check: check.to_string(),
                lhs: None,
                rhs: None,
                holds: true,
                tight: false,
                witness: Some(serde_json::json!({ "checks": report.checks })),
            });
        }
        for v in report.violations {
            let at: Vec<String> = v.vertices.iter().map(usize::to_string).collect();
            let key = format!("{key};lemma={};at={}", v.lemma, at.join(","));
            self.property(check, false, || key, || serde_json::to_value(&v).ok());
        }
    }

    pub(crate) fn into_parts(self) -> (Summary, Vec<Record>) {
        let mut summary = Summary::default();
        for (check, c) in self.counts {
            summary.total.add(&c);
            summary
                .by_check
                .entry(check.to_string())
                .or_default()
                .add(&c);
        }
        (summary, self.records)
    }
}

pub(crate) fn merge_summary(into: &mut Summary, other: Summary) {
    into.total.add(&other.total);
    for (k, c) in other.by_check {
        into.by_check.entry(k).or_default().add(&c);
    }
}
