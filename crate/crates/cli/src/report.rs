//! Tabular output with an optional comparison against expected values.

use std::io::Write;

use anyhow::Result;
use clap::ValueEnum;
use serde_json::{json, Value};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Table,
    Csv,
    Json,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Check {
    Unchecked,
    Match,
    Mismatch(String),
    Skipped(String),
}

#[derive(Clone, Debug)]
pub struct Cell {
    pub text: String,
    pub check: Check,
}

impl Cell {
    pub fn plain(text: impl Into<String>) -> Self {
        Self {
            text: text.into(),
            check: Check::Unchecked,
        }
    }

    pub fn checked(text: impl Into<String>, ok: bool, expected: &str) -> Self {
        Self {
            text: text.into(),
            check: if ok { Check::Match } else { Check::Mismatch(expected.to_owned()) },
        }
    }

    pub fn skipped(reason: impl Into<String>) -> Self {
        Self {
            text: "skipped (resource cap)".into(),
            check: Check::Skipped(reason.into()),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Report {
    pub title: String,
    pub headers: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Report {
    pub fn new(title: impl Into<String>, headers: &[&str]) -> Self {
        Self {
            title: title.into(),
            headers: headers.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }

    fn cells(&self) -> impl Iterator<Item = (usize, usize, &Cell)> {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(r, row)| row.iter().enumerate().map(move |(c, cell)| (r, c, cell)))
    }

    pub fn compared(&self) -> usize {
        self.cells()
            .filter(|(_, _, c)| matches!(c.check, Check::Match | Check::Mismatch(_)))
            .count()
    }

    pub fn mismatches(&self) -> Vec<String> {
        self.cells()
            .filter_map(|(r, c, cell)| match &cell.check {
                Check::Mismatch(expected) => Some(format!(
                    "row {} column {}: got {}, expected {expected}",
                    r + 1,
                    self.headers[c],
                    cell.text
                )),
                _ => None,
            })
            .collect()
    }

    pub fn skipped(&self) -> Vec<String> {
        self.cells()
            .filter_map(|(r, c, cell)| match &cell.check {
                Check::Skipped(why) => Some(format!("row {} column {}: {why}", r + 1, self.headers[c])),
                _ => None,
            })
            .collect()
    }

    pub fn write<W: Write>(&self, format: Format, mut out: W) -> Result<()> {
        match format {
            Format::Table => self.write_table(&mut out),
            Format::Csv => {
                let mut w = csv::Writer::from_writer(out);
                w.write_record(&self.headers)?;
                for row in &self.rows {
                    w.write_record(row.iter().map(|c| c.text.as_str()))?;
                }
                w.flush()?;
                Ok(())
            }
            Format::Json => {
                serde_json::to_writer_pretty(&mut out, &self.to_json())?;
                writeln!(out)?;
                Ok(())
            }
        }
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let obj: serde_json::Map<String, Value> = self
                    .headers
                    .iter()
                    .zip(row)
                    .map(|(h, c)| (h.clone(), Value::String(c.text.clone())))
                    .collect();
                Value::Object(obj)
            })
            .collect();
        json!({
            "title": self.title,
            "columns": self.headers,
            "rows": rows,
            "compared": self.compared(),
            "mismatches": self.mismatches(),
            "skipped": self.skipped(),
        })
    }

    fn write_table<W: Write>(&self, out: &mut W) -> Result<()> {
        let mut widths: Vec<usize> = self.headers.iter().map(|h| h.chars().count()).collect();
        for row in &self.rows {
            for (w, c) in widths.iter_mut().zip(row) {
                *w = (*w).max(c.text.chars().count());
            }
        }
        writeln!(out, "{}", self.title)?;
        let line = |cells: Vec<&str>| {
            cells
                .iter()
                .zip(&widths)
                .map(|(t, w)| format!("{t:>w$}"))
                .collect::<Vec<_>>()
                .join("  ")
        };
        writeln!(out, "{}", line(self.headers.iter().map(String::as_str).collect()))?;
        for row in &self.rows {
            writeln!(out, "{}", line(row.iter().map(|c| c.text.as_str()).collect()))?;
        }
        let compared = self.compared();
        if compared > 0 {
            let mismatches = self.mismatches();
            writeln!(out, "diff: {compared} values compared, {} mismatched", mismatches.len())?;
            for m in mismatches {
                writeln!(out, "  {m}")?;
            }
        }
        for s in self.skipped() {
            writeln!(out, "  skipped {s}")?;
        }
        Ok(())
    }
}
