//! Data files: one nonnegative integer per line, or `k,count` pairs when any
//! line contains a comma. Blank lines and lines starting with `#` are skipped.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use umedian::EmpiricalDistribution;

pub fn read(path: &Path) -> Result<EmpiricalDistribution> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    parse(&text).with_context(|| format!("in {}", path.display()))
}

pub fn parse(text: &str) -> Result<EmpiricalDistribution> {
    let lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .collect();
    if lines.is_empty() {
        bail!("no data");
    }
    let pairs = lines.iter().any(|(_, l)| l.contains(','));
    let mut counts = Vec::with_capacity(lines.len());
    for &(line, text) in &lines {
        if pairs {
            let Some((k, c)) = text.split_once(',') else {
                bail!("line {line}: expected `k,count`, got {text:?}");
            };
            counts.push((value(line, k.trim())?, count(line, c.trim())?));
        } else {
            counts.push((value(line, text)?, 1));
        }
    }
    Ok(EmpiricalDistribution::from_counts(counts)?)
}

fn value(line: usize, s: &str) -> Result<u64> {
    match s.parse::<i64>() {
        Ok(v) if v < 0 => bail!("line {line}: negative value {v}"),
        Ok(v) => Ok(v as u64),
        Err(_) => bail!("line {line}: expected a nonnegative integer, got {s:?}"),
    }
}

fn count(line: usize, s: &str) -> Result<u64> {
    s.parse::<u64>()
        .map_err(|_| anyhow::anyhow!("line {line}: expected a nonnegative integer count, got {s:?}"))
}
