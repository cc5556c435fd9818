//! Line-oriented `key: value` reports.

use std::fmt::{self, Display};

pub const DISCLAIMER: &str =
    "verdicts hold on the finite windows and caps listed under horizon.*; nothing here is claimed beyond them";

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Report {
    lines: Vec<(String, String)>,
}

impl Report {
    pub fn new() -> Self {
        Report::default()
    }

    pub fn push(&mut self, key: impl Into<String>, value: impl Display) {
        self.lines.push((key.into(), value.to_string()));
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.lines.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn lines(&self) -> &[(String, String)] {
        &self.lines
    }
}

impl Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in &self.lines {
            writeln!(f, "{k}: {v}")?;
        }
        Ok(())
    }
}

/// `none (cap N)` for a failed search.
pub fn found(v: Option<usize>, cap: usize) -> String {
    v.map_or_else(|| format!("none (cap {cap})"), |n| n.to_string())
}
