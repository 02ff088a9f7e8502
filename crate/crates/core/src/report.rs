//! Byte-stable CSV and JSON renderings of results.
//!
//! CSV: header row, `.` decimal separator, six significant digits, LF line
//! endings. JSON: one top-level object whose keys follow struct field order.

use serde::Serialize;

use crate::bias::MaxBias;
use crate::montecarlo::{CellRecord, EfficiencyRow, MaxMseRow, SimulationResult};

/// Six significant digits, plain notation where practical.
pub fn sig6(x: f64) -> String {
    if x == 0.0 {
        return "0".to_owned();
    }
    if x.is_nan() {
        return "nan".to_owned();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".to_owned() } else { "-inf".to_owned() };
    }
    let exp = x.abs().log10().floor() as i32;
    if (-5..15).contains(&exp) {
        let decimals = (5 - exp).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        format!("{x:.5e}")
    }
}

/// Fixed six decimal places.
pub fn fixed6(x: f64) -> String {
    format!("{x:.6}")
}

#[derive(Debug, Clone, Default)]
pub struct CsvTable {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl CsvTable {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Self {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.header.join(","));
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

pub fn to_json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("result types serialize");
    s.push('\n');
    s
}

pub fn records_csv(records: &[CellRecord]) -> String {
    let mut t = CsvTable::new([
        "estimator", "n", "lambda", "epsilon", "x0", "replications", "failures", "mse", "mean_bias", "variance",
    ]);
    for r in records {
        t.push(vec![
            r.estimator.to_string(),
            r.n.to_string(),
            sig6(r.lambda),
            sig6(r.epsilon),
            r.x0.map_or_else(String::new, |x| x.to_string()),
            r.replications.to_string(),
            r.failures.to_string(),
            sig6(r.mse),
            sig6(r.mean_bias),
            sig6(r.variance),
        ]);
    }
    t.render()
}

pub fn efficiency_csv(rows: &[EfficiencyRow]) -> String {
    let mut t = CsvTable::new(["estimator", "n", "lambda", "mse_mle", "mse", "efficiency"]);
    for r in rows {
        t.push(vec![
            r.estimator.to_string(),
            r.n.to_string(),
            sig6(r.lambda),
            sig6(r.mse_mle),
            sig6(r.mse),
            sig6(r.efficiency),
        ]);
    }
    t.render()
}

pub fn max_mse_csv(rows: &[MaxMseRow]) -> String {
    let mut t = CsvTable::new(["estimator", "n", "epsilon", "lambda", "max_mse", "argmax_x0"]);
    for r in rows {
        t.push(vec![
            r.estimator.to_string(),
            r.n.to_string(),
            sig6(r.epsilon),
            sig6(r.lambda),
            sig6(r.max_mse),
            r.argmax_x0.to_string(),
        ]);
    }
    t.render()
}

/// The three CSV sections of a simulation: records, efficiency, max MSE.
pub fn simulation_csv(result: &SimulationResult) -> [String; 3] {
    [
        records_csv(&result.records),
        efficiency_csv(&result.efficiency),
        max_mse_csv(&result.max_mse),
    ]
}

/// Simulation result as one JSON object (records, then both summaries).
pub fn simulation_json(result: &SimulationResult) -> String {
    to_json(result)
}

pub fn bias_table_csv(rows: &[MaxBias]) -> String {
    let mut t = CsvTable::new([
        "epsilon",
        "lambda",
        "max_bias",
        "argmax_x0",
        "grid_max_bias",
        "grid_argmax_x0",
        "bias_at_infinity",
    ]);
    for r in rows {
        t.push(vec![
            sig6(r.epsilon),
            sig6(r.theta),
            fixed6(r.bias),
            r.argmax.to_string(),
            fixed6(r.grid_bias),
            r.grid_argmax.to_string(),
            fixed6(r.bias_at_infinity),
        ]);
    }
    t.render()
}
