use serde::Serialize;
use serde_json::{Map, Value};

use crate::report::Check;

pub const SCHEMA: &str = "1";

/// Output of one command. Serialized with sorted keys and no timestamps, so
/// identical runs produce identical bytes.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub command: &'static str,
    pub input: String,
    pub details: Map<String, Value>,
    pub checks: Vec<Check>,
    pub skipped: Vec<String>,
    pub verdict: String,
    /// Human-readable table printed before the checks in text mode.
    #[serde(skip)]
    pub table: Option<String>,
}

impl Report {
    pub fn new(command: &'static str, input: impl Into<String>) -> Self {
        Self {
            schema: SCHEMA,
            command,
            input: input.into(),
            details: Map::new(),
            checks: Vec::new(),
            skipped: Vec::new(),
            verdict: String::new(),
            table: None,
        }
    }

    pub fn detail(&mut self, key: &str, value: impl Serialize) {
        let value = serde_json::to_value(value).expect("report values serialize");
        self.details.insert(key.to_string(), value);
    }

    pub fn passed(&self) -> bool {
        crate::report::all_pass(&self.checks)
    }

    /// Sets the verdict from the checks.
    pub fn conclude(&mut self) {
        self.verdict = if self.passed() { "pass" } else { "fail" }.to_string();
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.command, self.input);
        for (k, v) in &self.details {
            out.push_str(&format!("  {k}: {v}\n"));
        }
        if let Some(t) = &self.table {
            out.push_str(t);
        }
        for c in &self.checks {
            out.push_str(&format!("{c}\n"));
        }
        for s in &self.skipped {
            out.push_str(&format!("SKIP {s}\n"));
        }
        out.push_str(&format!("verdict: {}\n", self.verdict));
        out
    }
}

/// 1-based copies of index lists, for display.
pub fn one_based(sets: &[Vec<usize>]) -> Vec<Vec<usize>> {
    sets.iter().map(|s| s.iter().map(|v| v + 1).collect()).collect()
}
