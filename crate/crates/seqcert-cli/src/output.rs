//! Deterministic CSV and JSON rendering. All ordering is fixed by
//! construction; reruns and different worker counts produce identical bytes.

use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::{Cli, Format};

/// A rectangular, already-stringified payload (the CSV body).
#[derive(Debug, Clone, Default, Serialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table {
            columns: columns.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ResultRow {
    pub check: String,
    pub item: String,
    pub outcome: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct WitnessRow {
    pub check: String,
    pub item: String,
    pub params: String,
    pub detail: String,
}

/// Everything one command run produces.
#[derive(Debug, Default)]
pub struct RunOutput {
    pub command: String,
    pub mode: String,
    pub config: Map<String, Value>,
    /// Data payload (tables, figures, asymptotic rows).
    pub table: Option<Table>,
    /// Certification outcomes (verify-style commands).
    pub results: Vec<ResultRow>,
    pub witnesses: Vec<WitnessRow>,
    pub exit: i32,
}

impl RunOutput {
    pub fn new(command: &str, mode: String) -> Self {
        RunOutput {
            command: command.to_string(),
            mode,
            ..Default::default()
        }
    }

    pub fn absorb_report(&mut self, report: &seqcert::report::VerificationReport) {
        for item in &report.items {
            let outcome = match item.outcome {
                seqcert::report::Outcome::Pass => "pass",
                seqcert::report::Outcome::Fail => "fail",
                seqcert::report::Outcome::Indeterminate => "indeterminate",
            };
            self.results.push(ResultRow {
                check: report.check.clone(),
                item: item.name.clone(),
                outcome: outcome.to_string(),
            });
            for w in &item.witnesses {
                self.witnesses.push(WitnessRow {
                    check: report.check.clone(),
                    item: item.name.clone(),
                    params: w
                        .params
                        .iter()
                        .map(|(k, v)| format!("{k}={v}"))
                        .collect::<Vec<_>>()
                        .join(" "),
                    detail: w.detail.clone(),
                });
            }
        }
        if report.indeterminate() {
            self.exit = self.exit.max(crate::INDETERMINATE);
        } else if !report.passed() {
            self.exit = self.exit.max(1);
        }
    }

    fn to_csv(&self) -> String {
        let mut out = String::new();
        if let Some(table) = &self.table {
            out.push_str(&csv_line(&table.columns));
            for row in &table.rows {
                out.push_str(&csv_line(row));
            }
        }
        if !self.results.is_empty() {
            out.push_str(&csv_line(&[
                "record".into(),
                "check".into(),
                "item".into(),
                "outcome".into(),
                "params".into(),
                "detail".into(),
            ]));
            for r in &self.results {
                out.push_str(&csv_line(&[
                    "result".into(),
                    r.check.clone(),
                    r.item.clone(),
                    r.outcome.clone(),
                    String::new(),
                    String::new(),
                ]));
            }
            for w in &self.witnesses {
                out.push_str(&csv_line(&[
                    "witness".into(),
                    w.check.clone(),
                    w.item.clone(),
                    String::new(),
                    w.params.clone(),
                    w.detail.clone(),
                ]));
            }
        }
        out
    }

    fn to_json(&self) -> String {
        let table = self.table.as_ref().map(|t| {
            let rows: Vec<Value> = t
                .rows
                .iter()
                .map(|r| {
                    let mut obj = Map::new();
                    for (c, v) in t.columns.iter().zip(r) {
                        obj.insert(c.clone(), Value::String(v.clone()));
                    }
                    Value::Object(obj)
                })
                .collect();
            Value::Array(rows)
        });
        let mut results: Vec<Value> = self
            .results
            .iter()
            .map(|r| json!({"check": r.check, "item": r.item, "outcome": r.outcome}))
            .collect();
        if let Some(rows) = table {
            results = match rows {
                Value::Array(mut a) => {
                    a.extend(results);
                    a
                }
                _ => unreachable!(),
            };
        }
        let witnesses: Vec<Value> = self
            .witnesses
            .iter()
            .map(|w| {
                json!({"check": w.check, "item": w.item, "params": w.params, "detail": w.detail})
            })
            .collect();
        let doc = json!({
            "command": self.command,
            "config": Value::Object(self.config.clone()),
            "results": results,
            "witnesses": witnesses,
            "mode": self.mode,
            "version": "1",
        });
        let mut s = serde_json::to_string_pretty(&doc).expect("serializable report");
        s.push('\n');
        s
    }

    /// Renders and writes the output; returns the process exit code.
    pub fn emit(&self, cli: &Cli) -> i32 {
        let body = match cli.format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        };
        match &cli.output {
            Some(path) => {
                if let Err(e) = std::fs::write(path, body) {
                    eprintln!("cannot write {}: {e}", path.display());
                    return 1;
                }
            }
            None => {
                use std::io::Write;
                std::io::stdout().write_all(body.as_bytes()).ok();
            }
        }
        if self.exit == crate::INDETERMINATE {
            eprintln!(
                "some signs were not certified at {} — rerun with a higher --precision or --mode exact",
                self.mode
            );
        }
        self.exit
    }
}

fn csv_line(fields: &[String]) -> String {
    let mut line = fields
        .iter()
        .map(|f| {
            if f.contains(',') || f.contains('"') || f.contains('\n') {
                format!("\"{}\"", f.replace('"', "\"\""))
            } else {
                f.clone()
            }
        })
        .collect::<Vec<_>>()
        .join(",");
    line.push('\n');
    line
}

/// Shortest representation that round-trips to the same f64.
pub fn fmt_f64(v: f64) -> String {
    format!("{v}")
}

/// Fixed-decimal rendering used for reference-style columns.
pub fn fmt_fixed(v: f64, places: usize) -> String {
    format!("{v:.places$}")
}
