//! Command output: plain text by default, or the JSON envelope
//! `{command, inputs, results, checks}` with `--json`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckLine {
    pub name: String,
    pub pass: bool,
    pub detail: String,
    /// The statement a check verifies, when it has one.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reference: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SkippedCheck {
    pub name: String,
    pub reason: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reference: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    pub inputs: BTreeMap<String, Value>,
    pub results: BTreeMap<String, Value>,
    pub checks: Vec<CheckLine>,
    #[serde(skip)]
    pub skipped: Vec<SkippedCheck>,
    /// Body of the text rendering, printed before the check lines.
    #[serde(skip)]
    pub lines: Vec<String>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report {
            command: command.to_string(),
            ..Default::default()
        }
    }

    pub fn input(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.inputs.insert(key.to_string(), value.into());
        self
    }

    pub fn result(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.results.insert(key.to_string(), value.into());
        self
    }

    pub fn line(&mut self, text: impl Into<String>) -> &mut Self {
        self.lines.push(text.into());
        self
    }

    pub fn check(&mut self, name: &str, pass: bool, detail: impl Into<String>) -> &mut Self {
        self.checks.push(CheckLine {
            name: name.to_string(),
            pass,
            detail: detail.into(),
            reference: None,
        });
        self
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    /// 0 when every check passes, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.all_pass() {
            0
        } else {
            1
        }
    }

    pub fn render(&self, json: bool) -> String {
        if json {
            let mut v = serde_json::to_value(self).expect("reports serialize");
            if !self.skipped.is_empty() {
                v["results"]["skipped"] = serde_json::to_value(&self.skipped).expect("serializes");
            }
            let mut s = serde_json::to_string_pretty(&v).expect("reports serialize");
            s.push('\n');
            return s;
        }
        let mut out = String::new();
        for l in &self.lines {
            out.push_str(l);
            out.push('\n');
        }
        for c in &self.checks {
            let status = if c.pass { "PASS" } else { "FAIL" };
            write_check(&mut out, status, &c.name, c.reference.as_deref(), &c.detail);
        }
        for s in &self.skipped {
            write_check(&mut out, "SKIP", &s.name, s.reference.as_deref(), &s.reason);
        }
        if !self.checks.is_empty() {
            let passed = self.checks.iter().filter(|c| c.pass).count();
            let _ = writeln!(
                out,
                "{passed}/{} checks passed, {} skipped",
                self.checks.len(),
                self.skipped.len()
            );
        }
        out
    }
}

fn write_check(out: &mut String, status: &str, name: &str, reference: Option<&str>, detail: &str) {
    let _ = match reference {
        Some(r) => writeln!(out, "{status} {name} [{r}]: {detail}"),
        None => writeln!(out, "{status} {name}: {detail}"),
    };
}
