use std::fmt::Write as _;

use serde_json::{json, Map, Value};

use crate::config::Format;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

fn fmt_num(v: f64) -> String {
    if v == 0.0 || (v.abs() >= 1e-4 && v.abs() < 1e15) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

impl Cell {
    fn text(&self) -> String {
        match self {
            Cell::Num(v) => fmt_num(*v),
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(v) if v.is_finite() => json!(v),
            Cell::Num(_) => Value::Null,
            Cell::Int(v) => json!(v),
            Cell::Text(s) => json!(s),
        }
    }
}

/// A column name with the tolerance or oracle the values answer to.
#[derive(Debug, Clone, PartialEq)]
pub struct Column {
    pub name: &'static str,
    pub tag: String,
}

pub fn col(name: &'static str, tag: impl Into<String>) -> Column {
    Column {
        name,
        tag: tag.into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    Ok,
    ToleranceFailure,
    NonConvergence,
    ConfigError,
}

impl Status {
    pub fn exit_code(self) -> u8 {
        match self {
            Status::Ok => 0,
            Status::ToleranceFailure => 2,
            Status::NonConvergence => 3,
            Status::ConfigError => 4,
        }
    }

    fn label(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::ToleranceFailure => "tolerance-failure",
            Status::NonConvergence => "non-convergence",
            Status::ConfigError => "config-error",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Report {
    pub command: &'static str,
    pub columns: Vec<Column>,
    pub rows: Vec<Vec<Cell>>,
    pub failures: Vec<String>,
    pub notes: Vec<String>,
    pub status: Status,
}

impl Report {
    pub fn new(command: &'static str, columns: Vec<Column>) -> Self {
        Report {
            command,
            columns,
            rows: Vec::new(),
            failures: Vec::new(),
            notes: Vec::new(),
            status: Status::Ok,
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn fail(&mut self, status: Status, msg: impl Into<String>) {
        self.status = self.status.max(status);
        self.failures.push(msg.into());
    }

    pub fn note(&mut self, msg: impl Into<String>) {
        self.notes.push(msg.into());
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.csv(),
            Format::Json => {
                serde_json::to_string_pretty(&self.json()).expect("report serializes") + "\n"
            }
            Format::Table => self.table(),
        }
    }

    fn csv(&self) -> String {
        let mut out = String::new();
        let header: Vec<&str> = self.columns.iter().map(|c| c.name).collect();
        out.push_str(&header.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|c| csv_escape(&c.text())).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn json(&self) -> Value {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let mut obj = Map::new();
                for (c, cell) in self.columns.iter().zip(row) {
                    obj.insert(
                        c.name.to_string(),
                        json!({ "value": cell.json(), "tag": c.tag }),
                    );
                }
                Value::Object(obj)
            })
            .collect();
        json!({
            "schema_version": SCHEMA_VERSION,
            "command": self.command,
            "columns": self.columns.iter().map(|c| json!({ "name": c.name, "tag": c.tag })).collect::<Vec<_>>(),
            "rows": rows,
            "status": self.status.label(),
            "exit_code": self.status.exit_code(),
            "failures": self.failures,
            "notes": self.notes,
        })
    }

    fn table(&self) -> String {
        let cells: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|r| r.iter().map(Cell::text).collect())
            .collect();
        let widths: Vec<usize> = self
            .columns
            .iter()
            .enumerate()
            .map(|(i, c)| {
                cells
                    .iter()
                    .map(|r| r[i].len())
                    .chain([c.name.len()])
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        let mut out = String::new();
        let line = |out: &mut String, items: Vec<&str>| {
            let parts: Vec<String> = items
                .iter()
                .zip(&widths)
                .map(|(s, w)| format!("{s:>w$}"))
                .collect();
            let _ = writeln!(out, "{}", parts.join("  ").trim_end());
        };
        line(&mut out, self.columns.iter().map(|c| c.name).collect());
        for r in &cells {
            line(&mut out, r.iter().map(String::as_str).collect());
        }
        for n in &self.notes {
            let _ = writeln!(out, "note: {n}");
        }
        for f in &self.failures {
            let _ = writeln!(out, "FAIL: {f}");
        }
        let _ = writeln!(out, "status: {}", self.status.label());
        out
    }
}

fn csv_escape(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Report {
        let mut r = Report::new("demo", vec![col("a", "input"), col("rel_err", "tol<=0.1")]);
        r.push(vec![0.5.into(), 1.5e-9.into()]);
        r.push(vec![1.0.into(), f64::NAN.into()]);
        r
    }

    #[test]
    fn csv_layout() {
        let s = sample().render(Format::Csv);
        assert_eq!(s, "a,rel_err\n0.5,1.5e-9\n1,NaN\n");
    }

    #[test]
    fn json_tags_every_number() {
        let v = sample().json();
        assert_eq!(v["schema_version"], 1);
        assert_eq!(v["rows"][0]["rel_err"]["tag"], "tol<=0.1");
        assert_eq!(v["rows"][0]["a"]["value"], 0.5);
        assert!(v["rows"][1]["rel_err"]["value"].is_null());
    }

    #[test]
    fn status_escalates() {
        let mut r = sample();
        r.fail(Status::NonConvergence, "x");
        r.fail(Status::ToleranceFailure, "y");
        assert_eq!(r.status.exit_code(), 3);
        assert!(r.render(Format::Table).contains("FAIL: y"));
    }

    #[test]
    fn escaping() {
        assert_eq!(csv_escape("a,b"), "\"a,b\"");
        assert_eq!(fmt_num(46800000000000.0), "46800000000000");
        assert_eq!(fmt_num(1e20), "1e20");
    }
}
