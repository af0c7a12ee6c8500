//! Pass/fail reports shared by every verification routine.

use std::fmt::Write as _;

use serde::Serialize;

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// residue, witness or value; empty when there is nothing to add
    pub detail: String,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Report {
    pub title: String,
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(title: impl Into<String>) -> Self {
        Report {
            title: title.into(),
            ..Default::default()
        }
    }

    pub fn check(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            name: name.into(),
            passed,
            detail: detail.into(),
        });
    }

    /// Records an equality check, showing the residue on failure.
    pub fn check_zero(&mut self, name: impl Into<String>, residue: Option<String>) {
        match residue {
            None => self.check(name, true, ""),
            Some(r) => self.check(name, false, format!("residue {r}")),
        }
    }

    pub fn note(&mut self, n: impl Into<String>) {
        self.notes.push(n.into());
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn extend(&mut self, other: Report) {
        let prefix = other.title.clone();
        for mut c in other.checks {
            c.name = format!("{prefix}: {}", c.name);
            self.checks.push(c);
        }
        self.notes.extend(other.notes);
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let status = if self.passed() { "PASS" } else { "FAIL" };
        let _ = writeln!(s, "{} [{}]", self.title, status);
        for c in &self.checks {
            let mark = if c.passed { "ok  " } else { "FAIL" };
            if c.detail.is_empty() {
                let _ = writeln!(s, "  {mark} {}", c.name);
            } else {
                let _ = writeln!(s, "  {mark} {}: {}", c.name, c.detail);
            }
        }
        for n in &self.notes {
            let _ = writeln!(s, "  note: {n}");
        }
        s
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut v = serde_json::to_value(self).expect("report serializes");
        v["passed"] = serde_json::Value::Bool(self.passed());
        v
    }
}
