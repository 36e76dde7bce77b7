//! Result containers, error objects and file output.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde_json::{json, Value};

/// CSV side table.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> Result<String, CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header).map_err(io_err)?;
        for r in &self.rows {
            w.write_record(r).map_err(io_err)?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| CliError::Io(e.to_string()))
    }
}

fn io_err(e: impl std::fmt::Display) -> CliError {
    CliError::Io(e.to_string())
}

/// What a command produced.
#[derive(Debug, Clone)]
pub struct Output {
    pub json: Value,
    pub csv: Option<Table>,
    /// 0, or 2 when a verification embedded in the result failed.
    pub status: i32,
}

impl Output {
    pub fn ok(json: Value) -> Self {
        Self { json, csv: None, status: 0 }
    }

    pub fn with_csv(mut self, table: Table) -> Self {
        self.csv = Some(table);
        self
    }

    pub fn render(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.json).expect("JSON values always serialize");
        s.push('\n');
        s
    }

    pub fn write(&self, out: Option<&Path>, csv_path: Option<&Path>) -> Result<(), CliError> {
        let text = self.render();
        match out {
            Some(p) => fs::write(p, &text).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?,
            None => {
                let mut stdout = std::io::stdout().lock();
                stdout.write_all(text.as_bytes()).map_err(io_err)?;
            }
        }
        if let Some(p) = csv_path {
            let table = self.csv.as_ref().ok_or_else(|| CliError::Usage("this command has no CSV output".into()))?;
            fs::write(p, table.to_csv()?).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?;
        }
        Ok(())
    }
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(String),
    Core(ffsum_core::Error),
}

impl From<ffsum_core::Error> for CliError {
    fn from(e: ffsum_core::Error) -> Self {
        CliError::Core(e)
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage: {m}"),
            CliError::Io(m) => write!(f, "io: {m}"),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Io(_) => "io",
            CliError::Core(e) => e.kind(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) if e.is_verification_failure() => 2,
            _ => 1,
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "error": {
                "kind": self.kind(),
                "message": self.to_string(),
                "verification_failure": self.exit_code() == 2,
            }
        })
    }
}

/// Writes the JSON error object to stdout and a one-line message to stderr.
pub fn print_error(e: &CliError) {
    eprintln!("ffsum: {e}");
    let text = serde_json::to_string_pretty(&e.to_json()).expect("JSON values always serialize");
    println!("{text}");
}
