//! Report assembly.  Every command builds one [`Report`]; the JSON and text
//! renderings are two views of that single structure, so they cannot drift.
//! Nothing time-dependent is ever stored: repeated runs on identical inputs
//! serialize byte-identically.

use serde::Serialize;

use crate::abelian::AbMap;
use crate::verify::{Status, TheoremReport};

pub const SCHEMA: &str = "quadgroup-report/1";

#[derive(Debug, Clone, Serialize)]
pub struct Finding {
    pub key: String,
    pub value: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct TableSection {
    pub title: String,
    pub rows: Vec<Vec<String>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub command: String,
    pub status: String,
    pub findings: Vec<Finding>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub tables: Vec<TableSection>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub theorems: Vec<TheoremReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub summary: Option<String>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report {
            schema: SCHEMA,
            command: command.into(),
            status: "ok".into(),
            findings: Vec::new(),
            tables: Vec::new(),
            theorems: Vec::new(),
            summary: None,
        }
    }

    pub fn push(&mut self, key: &str, value: impl Into<String>) {
        self.findings.push(Finding { key: key.into(), value: value.into() });
    }

    pub fn push_table(&mut self, title: &str, rows: Vec<Vec<String>>) {
        self.tables.push(TableSection { title: title.into(), rows });
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn render_text(&self) -> String {
        let mut out = format!("quadgroup {}: {}\n", self.command, self.status);
        let width = self.findings.iter().map(|f| f.key.len()).max().unwrap_or(0);
        for f in &self.findings {
            out.push_str(&format!("  {:width$}  {}\n", f.key, f.value));
        }
        for t in &self.tables {
            out.push('\n');
            out.push_str(&format!("  {}:\n", t.title));
            let cols = t.rows.iter().map(|r| r.len()).max().unwrap_or(0);
            let mut widths = vec![0usize; cols];
            for row in &t.rows {
                for (j, cell) in row.iter().enumerate() {
                    widths[j] = widths[j].max(cell.len());
                }
            }
            for row in &t.rows {
                out.push_str("   ");
                for (j, cell) in row.iter().enumerate() {
                    out.push_str(&format!(" {:>w$}", cell, w = widths[j]));
                }
                out.push('\n');
            }
        }
        for r in &self.theorems {
            out.push('\n');
            out.push_str(&format!(
                "theorem {} on {} (subgroup {:?}):\n",
                r.theorem, r.group, r.subgroup
            ));
            for c in &r.claims {
                let line = match c.status {
                    Status::Pass => format!("  {}: PASS\n", c.name),
                    Status::Fail => format!(
                        "  {}: FAIL ({})\n",
                        c.name,
                        c.witness.as_deref().unwrap_or("no witness")
                    ),
                    Status::Skipped => format!(
                        "  {}: SKIPPED ({})\n",
                        c.name,
                        c.reason.as_deref().unwrap_or("no reason")
                    ),
                };
                out.push_str(&line);
            }
        }
        if let Some(s) = &self.summary {
            out.push('\n');
            out.push_str(s);
            out.push('\n');
        }
        out
    }
}

/// Matrix view of a linear map: rows are codomain coordinates, columns are
/// domain generators.  A rank-0 side renders as an empty table.
pub fn matrix_rows(m: &AbMap) -> Vec<Vec<String>> {
    let rows = m.codomain.rank();
    let cols = m.cols.len();
    (0..rows)
        .map(|i| (0..cols).map(|j| m.cols[j][i].to_string()).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian::FgAb;

    #[test]
    fn text_and_json_carry_the_same_findings() {
        let mut r = Report::new("analyze");
        r.push("order", "8");
        r.push("nilpotency class", "2");
        r.push_table("matrix", vec![vec!["1".into(), "0".into()]]);
        r.summary = Some("done".into());
        let text = r.render_text();
        for f in &r.findings {
            assert!(text.contains(&f.key) && text.contains(&f.value));
        }
        let json = r.to_json();
        for f in &r.findings {
            assert!(json.contains(&f.key) && json.contains(&f.value));
        }
        assert!(json.contains(SCHEMA));
        assert_eq!(json, r.to_json());
    }

    #[test]
    fn matrix_rendering_uses_codomain_rows() {
        let dom = FgAb::from_cyclic_orders(&[2, 2]).unwrap();
        let cod = FgAb::from_cyclic_orders(&[4]).unwrap();
        let m = AbMap::new(dom, cod, vec![vec![2], vec![0]]).unwrap();
        assert_eq!(matrix_rows(&m), vec![vec!["2".to_string(), "0".to_string()]]);
    }
}
