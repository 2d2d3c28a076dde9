use std::fs;
use std::io::{self, Write};
use std::path::Path;

use clap::ValueEnum;
use entrocast::entropy::ExtendedNonNegative;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Fixed-width scientific notation so reruns produce byte-identical tables.
pub fn real(v: f64) -> String {
    format!("{v:.12e}")
}

pub fn entropy_text(e: &ExtendedNonNegative) -> String {
    match e.finite() {
        Some(v) => real(v),
        None => "inf".to_string(),
    }
}

pub fn entropy_json(e: &ExtendedNonNegative) -> serde_json::Value {
    match e.finite() {
        Some(v) => serde_json::json!(v),
        None => serde_json::json!("inf"),
    }
}

pub fn status(pass: bool) -> &'static str {
    if pass {
        "pass"
    } else {
        "fail"
    }
}

/// One row of a pass/fail table: `worst` is compared against `threshold`
/// in the direction the check demands, with the verdict already resolved.
pub struct CheckRow {
    pub name: &'static str,
    pub instances: usize,
    pub worst: f64,
    pub threshold: f64,
    pub pass: bool,
}

impl CheckRow {
    pub fn csv_line(&self) -> String {
        format!(
            "{},{},{},{},{}",
            self.name,
            self.instances,
            real(self.worst),
            real(self.threshold),
            status(self.pass)
        )
    }

    pub fn json(&self) -> serde_json::Value {
        serde_json::json!({
            "name": self.name,
            "instances": self.instances,
            "worst": self.worst,
            "threshold": self.threshold,
            "pass": self.pass,
        })
    }
}

pub fn check_table_csv(rows: &[CheckRow]) -> String {
    let mut text = String::from("check,instances,worst,threshold,status\n");
    for row in rows {
        text.push_str(&row.csv_line());
        text.push('\n');
    }
    text
}

pub fn emit(out: Option<&Path>, text: &str) -> io::Result<()> {
    match out {
        Some(path) => fs::write(path, text),
        None => io::stdout().write_all(text.as_bytes()),
    }
}

/// Writes the report, mapping I/O trouble to the configuration exit code.
pub fn finish(out: Option<&Path>, text: &str, pass: bool) -> i32 {
    if let Err(err) = emit(out, text) {
        eprintln!("error: cannot write report: {err}");
        return 2;
    }
    if pass {
        0
    } else {
        1
    }
}
