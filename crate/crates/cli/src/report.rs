//! JSON reports with tri-state verdicts.

use std::time::Duration;

use ncg_core::homology::Window;
use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Inconclusive,
    Fail,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    /// `ok` unless `inconclusive`, which wins over a failure.
    pub fn decide(ok: bool, inconclusive: bool) -> Self {
        if inconclusive && !ok {
            Verdict::Inconclusive
        } else {
            Verdict::from_bool(ok)
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Pass => 0,
            Verdict::Fail => 1,
            Verdict::Inconclusive => 2,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub verdict: Verdict,
    pub evidence: Value,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub inputs: Value,
    pub field: String,
    pub window: Window,
    pub seed: u64,
    pub checks: Vec<Check>,
    /// Worst verdict over the checks.
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    /// Kept out of the JSON so reports are reproducible byte for byte.
    #[serde(skip)]
    pub elapsed: Duration,
}

impl Report {
    pub fn new(command: &str, inputs: Value, field: String, window: Window, seed: u64) -> Self {
        Report {
            command: command.to_string(),
            inputs,
            field,
            window,
            seed,
            checks: Vec::new(),
            verdict: Verdict::Pass,
            error: None,
            elapsed: Duration::ZERO,
        }
    }

    pub fn push(&mut self, name: &str, verdict: Verdict, evidence: Value) {
        self.verdict = self.verdict.max(verdict);
        self.checks.push(Check {
            name: name.to_string(),
            verdict,
            evidence,
        });
    }

    pub fn exit_code(&self) -> i32 {
        if self.error.is_some() {
            3
        } else {
            self.verdict.exit_code()
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}
