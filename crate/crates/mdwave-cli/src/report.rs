//! Versioned JSON summaries and CSV artifacts.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::Value;

pub const SCHEMA: &str = "mdwave-summary/1";

/// Checks, reported values and artifact files of one experiment.
#[derive(Debug, Default)]
pub struct Summary {
    pub checks: BTreeMap<String, bool>,
    pub values: BTreeMap<String, Value>,
    pub artifacts: BTreeMap<String, String>,
}

impl Summary {
    pub fn check(&mut self, name: &str, pass: bool) {
        self.checks.insert(name.to_string(), pass);
    }

    pub fn value(&mut self, name: &str, v: impl Serialize) {
        self.values.insert(name.to_string(), serde_json::to_value(v).unwrap_or(Value::Null));
    }

    pub fn artifact(&mut self, file: &str, content: String) {
        self.artifacts.insert(file.to_string(), content);
    }

    pub fn pass(&self) -> bool {
        self.checks.values().all(|&p| p)
    }

    /// Deterministic JSON (sorted keys, no timestamps).
    pub fn to_json(&self, scenario: &str, experiment: &str, seed: u64) -> String {
        let mut root = BTreeMap::new();
        root.insert("schema", Value::from(SCHEMA));
        root.insert("scenario", Value::from(scenario));
        root.insert("experiment", Value::from(experiment));
        root.insert("seed", Value::from(seed));
        root.insert("pass", Value::from(self.pass()));
        root.insert("checks", serde_json::to_value(&self.checks).expect("bool map"));
        root.insert("values", Value::Object(self.values.clone().into_iter().collect()));
        root.insert("artifacts", Value::from(self.artifacts.keys().cloned().collect::<Vec<_>>()));
        let mut s = serde_json::to_string_pretty(&root).expect("serializable");
        s.push('\n');
        s
    }
}

/// CSV from a header and numeric rows.
pub fn csv(header: &[&str], rows: impl IntoIterator<Item = Vec<f64>>) -> String {
    let mut s = header.join(",");
    s.push('\n');
    for r in rows {
        let cells: Vec<String> = r.iter().map(|x| format!("{x:e}")).collect();
        s.push_str(&cells.join(","));
        s.push('\n');
    }
    s
}
