//! The consolidated report envelope.
//!
//! ```json
//! {"schema": "thinlab-report/1", "version": "0.1.0", "generators": …,
//!  "results": {…}, "artifacts": {"packing.svg": "out/packing.svg"}}
//! ```
//!
//! `generators` is `null` for an empty report. Keys inside `results` are
//! section names (`closure`, `verdict`, `images`, …).

use anyhow::{bail, Result};
use serde_json::{Map, Value};

pub const SCHEMA: &str = "thinlab-report/1";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, Default)]
pub struct Report {
    pub generators: Option<Value>,
    pub results: Map<String, Value>,
    pub artifacts: Map<String, Value>,
}

impl Report {
    pub fn new() -> Self {
        Report::default()
    }

    pub fn insert(&mut self, section: &str, v: Value) {
        self.results.insert(section.to_owned(), v);
    }

    pub fn artifact(&mut self, name: &str, path: &str) {
        self.artifacts.insert(name.to_owned(), Value::from(path));
    }

    pub fn to_value(&self) -> Value {
        let mut m = Map::new();
        m.insert("schema".into(), Value::from(SCHEMA));
        m.insert("version".into(), Value::from(VERSION));
        m.insert("generators".into(), self.generators.clone().unwrap_or(Value::Null));
        m.insert("results".into(), Value::Object(self.results.clone()));
        m.insert("artifacts".into(), Value::Object(self.artifacts.clone()));
        Value::Object(m)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_value()).expect("values serialize");
        s.push('\n');
        s
    }
}

/// The report for a set of results; an empty set is still a valid report.
pub fn emit_report(results: Map<String, Value>) -> Value {
    Report {
        results,
        ..Report::default()
    }
    .to_value()
}

/// Structural check of a report document.
pub fn validate(v: &Value) -> Result<()> {
    let Some(o) = v.as_object() else {
        bail!("report is not an object");
    };
    let keys: Vec<&str> = o.keys().map(String::as_str).collect();
    if keys != ["schema", "version", "generators", "results", "artifacts"] {
        bail!("unexpected top-level keys {keys:?}");
    }
    if o["schema"] != SCHEMA {
        bail!("schema is {}, expected {SCHEMA}", o["schema"]);
    }
    if !o["version"].is_string() {
        bail!("version must be a string");
    }
    if !(o["generators"].is_null() || o["generators"].get("generators").is_some_and(Value::is_array)) {
        bail!("generators must be null or a generator set");
    }
    if !o["results"].is_object() {
        bail!("results must be an object");
    }
    match o["artifacts"].as_object() {
        Some(a) if a.values().all(Value::is_string) => {}
        _ => bail!("artifacts must map names to paths"),
    }
    check_integers(v)
}

/// Every JSON number that is an integer must be exactly representable in
/// an IEEE double; larger ones belong in strings.
fn check_integers(v: &Value) -> Result<()> {
    match v {
        Value::Number(n) => {
            let big = n.as_i64().map(|i| i.unsigned_abs()).or(n.as_u64());
            if big.is_some_and(|x| x > 1 << 53) {
                bail!("integer {n} exceeds 2^53 and should be a string");
            }
            Ok(())
        }
        Value::Array(a) => a.iter().try_for_each(check_integers),
        Value::Object(o) => o.values().try_for_each(check_integers),
        _ => Ok(()),
    }
}
