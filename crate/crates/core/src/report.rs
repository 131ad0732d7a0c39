//! Verification reports: entries with expected and computed values, optional
//! tables, and JSON / Markdown emitters.

use std::fmt::Write as _;

use serde::Serialize;

use crate::cohomology::Status;

/// Version of the JSON report layout.
pub const SCHEMA: u32 = 1;

/// One checked statement.
#[derive(Clone, Debug, Serialize)]
pub struct Entry {
    pub section: String,
    pub check: String,
    pub expected: String,
    pub computed: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// A rendered table (e.g. the product table or the `E₂` grid).
#[derive(Clone, Debug, Serialize)]
pub struct Table {
    pub title: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
}

/// The outcome of one task.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema: u32,
    pub task: String,
    pub parameters: serde_json::Value,
    pub entries: Vec<Entry>,
    pub tables: Vec<Table>,
    pub notes: Vec<String>,
    pub summary: Summary,
    pub status: Status,
}

impl Report {
    pub fn new(task: &str, parameters: serde_json::Value) -> Self {
        Report {
            schema: SCHEMA,
            task: task.into(),
            parameters,
            entries: Vec::new(),
            tables: Vec::new(),
            notes: Vec::new(),
            summary: Summary { total: 0, passed: 0, failed: 0 },
            status: Status::Pass,
        }
    }

    /// Records a check; `expected` and `computed` are compared by the caller.
    pub fn check(
        &mut self,
        section: &str,
        check: impl Into<String>,
        expected: impl ToString,
        computed: impl ToString,
        ok: bool,
    ) -> &mut Entry {
        self.entries.push(Entry {
            section: section.into(),
            check: check.into(),
            expected: expected.to_string(),
            computed: computed.to_string(),
            status: Status::of(ok),
            note: None,
        });
        self.entries.last_mut().expect("just pushed")
    }

    /// Records a check whose status is decided by string equality.
    pub fn compare(&mut self, section: &str, check: impl Into<String>, expected: impl ToString, computed: impl ToString) {
        let (e, c) = (expected.to_string(), computed.to_string());
        let ok = e == c;
        self.check(section, check, e, c, ok);
    }

    pub fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    /// Fills the summary and overall status.
    pub fn finish(mut self) -> Self {
        let passed = self.entries.iter().filter(|e| e.status.ok()).count();
        self.summary = Summary { total: self.entries.len(), passed, failed: self.entries.len() - passed };
        self.status = Status::of(self.summary.failed == 0);
        self
    }

    pub fn failures(&self) -> impl Iterator<Item = &Entry> {
        self.entries.iter().filter(|e| !e.status.ok())
    }

    /// Process exit status: 0 when every check passes, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.status.ok() {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn to_markdown(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# {}\n", self.task);
        let _ = writeln!(
            s,
            "**{}** — {} checks, {} passed, {} failed\n",
            self.status, self.summary.total, self.summary.passed, self.summary.failed
        );
        if let Some(obj) = self.parameters.as_object() {
            let params: Vec<String> = obj.iter().map(|(k, v)| format!("`{k}` = {v}")).collect();
            let _ = writeln!(s, "Parameters: {}\n", params.join(", "));
        }
        for t in &self.tables {
            let _ = writeln!(s, "## {}\n", t.title);
            s.push_str(&markdown_table(&t.header, &t.rows));
            s.push('\n');
        }
        let failures: Vec<&Entry> = self.failures().collect();
        if !failures.is_empty() {
            let _ = writeln!(s, "## Failures\n");
            let rows: Vec<Vec<String>> = failures.iter().map(|e| entry_row(e)).collect();
            s.push_str(&markdown_table(&entry_header(), &rows));
            s.push('\n');
        }
        let mut sections: Vec<&str> = Vec::new();
        for e in &self.entries {
            if !sections.contains(&e.section.as_str()) {
                sections.push(&e.section);
            }
        }
        for sec in sections {
            let _ = writeln!(s, "## {sec}\n");
            let rows: Vec<Vec<String>> = self.entries.iter().filter(|e| e.section == sec).map(entry_row).collect();
            s.push_str(&markdown_table(&entry_header(), &rows));
            s.push('\n');
        }
        if !self.notes.is_empty() {
            let _ = writeln!(s, "## Notes\n");
            for n in &self.notes {
                let _ = writeln!(s, "- {n}");
            }
        }
        s
    }
}

fn entry_header() -> Vec<String> {
    ["check", "expected", "computed", "status"].iter().map(|s| s.to_string()).collect()
}

fn entry_row(e: &Entry) -> Vec<String> {
    let mut status = e.status.to_string();
    if let Some(n) = &e.note {
        status = format!("{status} ({n})");
    }
    vec![e.check.clone(), e.expected.clone(), e.computed.clone(), status]
}

fn escape(s: &str) -> String {
    s.replace('|', "\\|").replace('\n', "<br>")
}

pub fn markdown_table(header: &[String], rows: &[Vec<String>]) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "| {} |", header.iter().map(|h| escape(h)).collect::<Vec<_>>().join(" | "));
    let _ = writeln!(s, "|{}|", vec!["---"; header.len()].join("|"));
    for r in rows {
        let _ = writeln!(s, "| {} |", r.iter().map(|c| escape(c)).collect::<Vec<_>>().join(" | "));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn summary_and_exit_code() {
        let mut r = Report::new("demo", serde_json::json!({"n": 1}));
        r.compare("s", "a", "1", "1");
        let r = r.finish();
        assert_eq!(r.exit_code(), 0);
        let mut r2 = Report::new("demo", serde_json::json!({}));
        r2.compare("s", "a", "1", "2");
        let r2 = r2.finish();
        assert_eq!(r2.exit_code(), 1);
        assert!(r2.to_markdown().contains("## Failures"));
        assert!(r2.to_json().contains("\"schema\": 1"));
    }
}
