//! Per-instance rows and the summary, written as CSV or JSON.

use anyhow::{Context, Result};
use serde::Serialize;
use std::io::Write;
use std::path::Path;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Row {
    pub index: usize,
    pub rounds: usize,
    pub round_bound: Option<usize>,
    pub valid: Option<bool>,
    /// Solution size, or new colors for completions.
    pub value: Option<u64>,
    pub value_bound: Option<u64>,
    pub optimum: Option<u64>,
    pub ratio: Option<f64>,
    pub ratio_bound: Option<f64>,
    pub messages: u64,
    pub error: Option<String>,
}

impl Row {
    pub fn new(index: usize) -> Self {
        Row {
            index,
            rounds: 0,
            round_bound: None,
            valid: None,
            value: None,
            value_bound: None,
            optimum: None,
            ratio: None,
            ratio_bound: None,
            messages: 0,
            error: None,
        }
    }

    /// Fills `optimum` and `ratio`; a zero optimum with a zero value is ratio 1.
    pub fn with_optimum(mut self, opt: u64) -> Self {
        self.optimum = Some(opt);
        if let Some(v) = self.value {
            self.ratio = Some(recurrent_core::sim::Ratio::of(v, opt).as_f64());
        }
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub algorithm: String,
    pub instances: usize,
    pub invalid: usize,
    pub all_valid: bool,
    pub max_ratio: Option<f64>,
    pub mean_ratio: Option<f64>,
    pub ratio_bound: Option<f64>,
    pub max_rounds: usize,
    pub total_messages: u64,
    pub s_sup_bits: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub summary: Summary,
    pub rows: Vec<Row>,
}

impl Report {
    pub fn new(algorithm: &str, rows: Vec<Row>, s_sup_bits: usize, ratio_bound: Option<f64>) -> Self {
        let ratios: Vec<f64> = rows.iter().filter_map(|r| r.ratio).collect();
        let invalid = rows.iter().filter(|r| r.valid == Some(false) || r.error.is_some()).count();
        let summary = Summary {
            algorithm: algorithm.to_string(),
            instances: rows.len(),
            invalid,
            all_valid: invalid == 0,
            max_ratio: ratios.iter().copied().reduce(f64::max),
            mean_ratio: (!ratios.is_empty()).then(|| ratios.iter().sum::<f64>() / ratios.len() as f64),
            ratio_bound,
            max_rounds: rows.iter().map(|r| r.rounds).max().unwrap_or(0),
            total_messages: rows.iter().map(|r| r.messages).sum(),
            s_sup_bits,
        };
        Report { summary, rows }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail") + "\n"
    }

    /// One `instance` record per row followed by a single `summary` record.
    /// In the summary record `index` holds the instance count, `rounds` the
    /// largest round count and `ratio` the largest ratio.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for r in &self.rows {
            w.serialize(CsvRecord::from_row(r))?;
        }
        w.serialize(CsvRecord::from_summary(&self.summary))?;
        Ok(String::from_utf8(w.into_inner()?)?)
    }

    /// Writes to `path` (JSON for `.json`, CSV otherwise) or CSV to stdout.
    pub fn write(&self, path: Option<&Path>) -> Result<()> {
        match path {
            Some(p) => {
                let text = if p.extension().is_some_and(|e| e == "json") { self.to_json() } else { self.to_csv()? };
                std::fs::write(p, text).with_context(|| format!("writing report {}", p.display()))
            }
            None => {
                std::io::stdout().write_all(self.to_csv()?.as_bytes())?;
                Ok(())
            }
        }
    }
}

#[derive(Serialize)]
struct CsvRecord<'a> {
    record: &'static str,
    index: usize,
    rounds: usize,
    round_bound: Option<usize>,
    valid: Option<bool>,
    value: Option<u64>,
    value_bound: Option<u64>,
    optimum: Option<u64>,
    ratio: Option<f64>,
    ratio_bound: Option<f64>,
    mean_ratio: Option<f64>,
    messages: u64,
    s_sup_bits: Option<usize>,
    error: Option<&'a str>,
}

impl<'a> CsvRecord<'a> {
    fn from_row(r: &'a Row) -> Self {
        CsvRecord {
            record: "instance",
            index: r.index,
            rounds: r.rounds,
            round_bound: r.round_bound,
            valid: r.valid,
            value: r.value,
            value_bound: r.value_bound,
            optimum: r.optimum,
            ratio: r.ratio,
            ratio_bound: r.ratio_bound,
            mean_ratio: None,
            messages: r.messages,
            s_sup_bits: None,
            error: r.error.as_deref(),
        }
    }

    fn from_summary(s: &'a Summary) -> Self {
        CsvRecord {
            record: "summary",
            index: s.instances,
            rounds: s.max_rounds,
            round_bound: None,
            valid: Some(s.all_valid),
            value: None,
            value_bound: None,
            optimum: None,
            ratio: s.max_ratio,
            ratio_bound: s.ratio_bound,
            mean_ratio: s.mean_ratio,
            messages: s.total_messages,
            s_sup_bits: Some(s.s_sup_bits),
            error: None,
        }
    }
}
