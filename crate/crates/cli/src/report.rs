use std::collections::BTreeMap;
use std::path::Path;
use std::time::Instant;

use clap::ValueEnum;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::CliError;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Table,
}

/// Output of one command: the JSON report, a table summary and an exit code.
pub struct Report {
    pub command: &'static str,
    pub input: Value,
    pub results: Value,
    pub summary: Vec<(String, String)>,
    pub timings: BTreeMap<&'static str, f64>,
    pub exit: u8,
}

impl Report {
    pub fn new(command: &'static str, path: &Path, document: Value) -> Self {
        Report {
            command,
            input: json!({ "path": path.display().to_string(), "document": document }),
            results: json!({}),
            summary: Vec::new(),
            timings: BTreeMap::new(),
            exit: 0,
        }
    }

    pub fn set(&mut self, key: &str, value: impl Serialize) {
        self.results[key] = serde_json::to_value(value).expect("report values serialize");
    }

    pub fn line(&mut self, key: &str, value: impl ToString) {
        self.summary.push((key.to_string(), value.to_string()));
    }

    /// Runs `f`, recording its wall time under `name`.
    pub fn timed<T>(&mut self, name: &'static str, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        self.timings.insert(name, start.elapsed().as_secs_f64() * 1e3);
        out
    }

    pub fn to_json(&self) -> Value {
        json!({
            "tool": "toric-nccr",
            "version": env!("CARGO_PKG_VERSION"),
            "command": self.command,
            "input": self.input,
            "results": self.results,
            "timings_ms": self.timings,
        })
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.to_json()).expect("json");
                s.push('\n');
                s
            }
            Format::Table => {
                let width = self.summary.iter().map(|(k, _)| k.chars().count()).max().unwrap_or(0);
                let mut s = String::new();
                for (k, v) in &self.summary {
                    s.push_str(&format!("{k:<width$}  {v}\n"));
                }
                s
            }
        }
    }

    pub fn emit(&self, format: Format, out: Option<&Path>) -> Result<(), CliError> {
        let text = self.render(format);
        match out {
            Some(p) => std::fs::write(p, text).map_err(|e| CliError::Output(format!("{}: {e}", p.display()))),
            None => {
                use std::io::Write;
                std::io::stdout()
                    .write_all(text.as_bytes())
                    .map_err(|e| CliError::Output(e.to_string()))
            }
        }
    }
}
