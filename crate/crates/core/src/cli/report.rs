//! Report envelope shared by every command, plus the three output formats.

use std::io::Write;

use serde::Serialize;
use serde_json::Value;

use super::config::{Format, RunConfig};

pub const SCHEMA: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl Status {
    pub fn of(pass: bool) -> Status {
        if pass {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skipped => "skipped",
        }
    }
}

/// One assertion.
#[derive(Clone, Debug, Serialize)]
pub struct Row {
    pub suite: String,
    pub check: String,
    pub anchor: &'static str,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Row {
    pub fn new(suite: &str, check: impl Into<String>, anchor: &'static str, pass: bool) -> Row {
        Row {
            suite: suite.into(),
            check: check.into(),
            anchor,
            status: Status::of(pass),
            value: None,
            bound: None,
            detail: None,
        }
    }

    pub fn skipped(suite: &str, check: impl Into<String>, anchor: &'static str, reason: impl Into<String>) -> Row {
        Row { status: Status::Skipped, detail: Some(reason.into()), ..Row::new(suite, check, anchor, true) }
    }

    pub fn value(mut self, v: impl Into<String>) -> Row {
        self.value = Some(v.into());
        self
    }

    pub fn bound(mut self, b: impl Into<String>) -> Row {
        self.bound = Some(b.into());
        self
    }

    pub fn detail(mut self, d: impl Into<String>) -> Row {
        self.detail = Some(d.into());
        self
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
}

impl Summary {
    pub fn of(rows: &[Row]) -> Summary {
        let mut s = Summary::default();
        for r in rows {
            match r.status {
                Status::Pass => s.passed += 1,
                Status::Fail => s.failed += 1,
                Status::Skipped => s.skipped += 1,
            }
        }
        s
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema: u32,
    pub command: String,
    pub seed: u64,
    pub config: RunConfig,
    pub rows: Vec<Row>,
    pub summary: Summary,
    pub pass: bool,
}

impl Report {
    pub fn new(command: impl Into<String>, config: &RunConfig, rows: Vec<Row>) -> Report {
        let summary = Summary::of(&rows);
        Report {
            schema: SCHEMA,
            command: command.into(),
            seed: config.seed,
            config: config.clone(),
            rows,
            summary,
            pass: summary.failed == 0,
        }
    }

    pub fn write(&self, format: Format, out: &mut dyn Write) -> std::io::Result<()> {
        match format {
            Format::Json => write_json(self, out),
            Format::Csv => {
                let mut w = csv::Writer::from_writer(out);
                w.write_record(["suite", "check", "status", "value", "bound", "detail", "anchor"])?;
                for r in &self.rows {
                    w.write_record([
                        r.suite.as_str(),
                        r.check.as_str(),
                        r.status.as_str(),
                        r.value.as_deref().unwrap_or(""),
                        r.bound.as_deref().unwrap_or(""),
                        r.detail.as_deref().unwrap_or(""),
                        r.anchor,
                    ])?;
                }
                w.flush()
            }
            Format::Text => {
                for r in &self.rows {
                    write!(out, "{:<7} {}/{}", r.status.as_str(), r.suite, r.check)?;
                    if let Some(v) = &r.value {
                        write!(out, "  value={v}")?;
                    }
                    if let Some(b) = &r.bound {
                        write!(out, "  bound={b}")?;
                    }
                    if let Some(d) = &r.detail {
                        write!(out, "  ({d})")?;
                    }
                    writeln!(out)?;
                }
                let s = self.summary;
                writeln!(out, "{}: {} passed, {} failed, {} skipped (seed {})", self.command, s.passed, s.failed, s.skipped, self.seed)
            }
        }
    }
}

/// Pretty JSON with a trailing newline.
pub fn write_json<T: Serialize + ?Sized>(value: &T, out: &mut dyn Write) -> std::io::Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)
}

/// Report for the data commands: rows are arbitrary records, each carrying
/// an `anchor` and a `status`.
#[derive(Clone, Debug, Serialize)]
pub struct Table {
    pub schema: u32,
    pub command: String,
    pub seed: u64,
    pub config: RunConfig,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub cross_checks: Vec<Value>,
    pub rows: Vec<Value>,
    pub summary: Summary,
    pub pass: bool,
}

/// Serializes `record` and adds `anchor` and `status` fields.
pub fn data_row<T: Serialize>(anchor: &'static str, status: Status, record: &T) -> Value {
    let mut v = serde_json::to_value(record).expect("records serialize");
    if !v.is_object() {
        v = serde_json::json!({ "value": v });
    }
    let obj = v.as_object_mut().expect("object");
    obj.insert("anchor".into(), Value::from(anchor));
    obj.insert("status".into(), Value::from(status.as_str()));
    v
}

fn status_of(v: &Value) -> Status {
    match v.get("status").and_then(Value::as_str) {
        Some("fail") => Status::Fail,
        Some("skipped") => Status::Skipped,
        _ => Status::Pass,
    }
}

impl Table {
    pub fn new(command: impl Into<String>, config: &RunConfig, rows: Vec<Value>, cross_checks: Vec<Value>) -> Table {
        let mut summary = Summary::default();
        for s in rows.iter().chain(&cross_checks).map(status_of) {
            match s {
                Status::Pass => summary.passed += 1,
                Status::Fail => summary.failed += 1,
                Status::Skipped => summary.skipped += 1,
            }
        }
        Table {
            schema: SCHEMA,
            command: command.into(),
            seed: config.seed,
            config: config.clone(),
            cross_checks,
            rows,
            summary,
            pass: summary.failed == 0,
        }
    }

    pub fn write(&self, format: Format, out: &mut dyn Write) -> std::io::Result<()> {
        match format {
            Format::Json => write_json(self, out),
            Format::Csv => write_csv(&self.rows, out),
            Format::Text => {
                for r in self.rows.iter().chain(&self.cross_checks) {
                    let fields: Vec<String> = r
                        .as_object()
                        .into_iter()
                        .flatten()
                        .filter(|(k, _)| k.as_str() != "anchor")
                        .map(|(k, v)| format!("{k}={}", cell(v)))
                        .collect();
                    writeln!(out, "{}", fields.join(" "))?;
                }
                let s = self.summary;
                writeln!(out, "{}: {} passed, {} failed, {} skipped (seed {})", self.command, s.passed, s.failed, s.skipped, self.seed)
            }
        }
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

/// CSV over the union of the record keys; nested values become compact JSON.
pub fn write_csv(rows: &[Value], out: &mut dyn Write) -> std::io::Result<()> {
    let mut columns: Vec<&str> = Vec::new();
    for r in rows {
        for k in r.as_object().into_iter().flat_map(|o| o.keys()) {
            if !columns.contains(&k.as_str()) {
                columns.push(k);
            }
        }
    }
    let mut w = csv::Writer::from_writer(out);
    w.write_record(&columns)?;
    for r in rows {
        w.write_record(columns.iter().map(|c| r.get(*c).map(cell).unwrap_or_default()))?;
    }
    w.flush()
}
