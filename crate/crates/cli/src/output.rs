use std::fs;
use std::io::Write;
use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::ValueEnum;
use serde::Serialize;
use umedian::report::{to_json, CsvTable};

use crate::OutputArgs;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

pub type Table = CsvTable;

/// Renders `table` or `value` according to `out.format`.
pub fn emit<T: Serialize + ?Sized>(out: &OutputArgs, table: &Table, value: &T) -> Result<()> {
    let body = match out.format {
        Format::Csv => table.render(),
        Format::Json => to_json(value),
    };
    write(&out.output, &body)
}

pub fn write(path: &Option<PathBuf>, body: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, body).with_context(|| format!("cannot write {}", p.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(body.as_bytes()).context("cannot write to standard output")
        }
    }
}
