//! The analysis report: an ordered key = value document (12 significant
//! digits) with a trailing warning block. Byte-identical for identical
//! inputs and seed.

use crate::format::sig12;

#[derive(Debug, Default, Clone)]
pub struct AnalysisReport {
    entries: Vec<(String, String)>,
    warnings: Vec<String>,
}

impl AnalysisReport {
    pub fn add_num(&mut self, key: &str, value: f64) {
        self.entries.push((key.to_string(), sig12(value)));
    }

    pub fn add_int(&mut self, key: &str, value: usize) {
        self.entries.push((key.to_string(), value.to_string()));
    }

    pub fn add_str(&mut self, key: &str, value: &str) {
        self.entries.push((key.to_string(), value.to_string()));
    }

    pub fn warn(&mut self, msg: impl Into<String>) {
        self.warnings.push(msg.into());
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn get_num(&self, key: &str) -> Option<f64> {
        self.get(key).and_then(|v| v.parse().ok())
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn has_warning_containing(&self, needle: &str) -> bool {
        self.warnings.iter().any(|w| w.contains(needle))
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.entries {
            out.push_str(k);
            out.push_str(" = ");
            out.push_str(v);
            out.push('\n');
        }
        for w in &self.warnings {
            out.push_str("warning = ");
            out.push_str(w);
            out.push('\n');
        }
        out
    }
}
