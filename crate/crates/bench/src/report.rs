//! CSV readers, cross-task score assembly, and plain-text tables.
//!
//! The score experiment joins the outputs of four earlier sweeps into one
//! normalized table: within each architecture every task column is scaled
//! to sum to 100 across rules, and the bottom rows give each
//! architecture's share of the raw totals.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};

use hebbench_core::{
    correlation_resistance, score_summary, CapacityRow, DataRow, ScoreRow, ScoreSummary,
    ScoreTable, CAPACITY_HEADER, DATA_HEADER,
};

use crate::config::InputsSection;

/// Task columns of the score table, in output order.
pub const SCORE_TASKS: [&str; 5] = [
    "pattern_capacity",
    "prototype_capacity",
    "weight_info",
    "resistance_pattern",
    "resistance_prototype",
];

pub fn read_capacity_csv(path: &Path) -> Result<Vec<CapacityRow>> {
    let text =
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h == CAPACITY_HEADER => {}
        other => bail!(
            "{}: schema mismatch: expected capacity header {:?}, found {:?}",
            path.display(),
            CAPACITY_HEADER,
            other.unwrap_or("")
        ),
    }
    lines
        .enumerate()
        .filter(|(_, l)| !l.is_empty())
        .map(|(i, l)| {
            CapacityRow::parse_csv_line(l)
                .with_context(|| format!("{} line {}", path.display(), i + 2))
        })
        .collect()
}

pub fn read_data_csv(path: &Path) -> Result<Vec<DataRow>> {
    let text =
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h == DATA_HEADER => {}
        other => bail!(
            "{}: schema mismatch: expected data header {:?}, found {:?}",
            path.display(),
            DATA_HEADER,
            other.unwrap_or("")
        ),
    }
    lines
        .enumerate()
        .filter(|(_, l)| !l.is_empty())
        .map(|(i, l)| {
            DataRow::parse_csv_line(l)
                .with_context(|| format!("{} line {}", path.display(), i + 2))
        })
        .collect()
}

fn mean_p90(rows: &[CapacityRow], arch: &str, rule: &str) -> Option<f64> {
    let vals: Vec<f64> = rows
        .iter()
        .filter(|r| r.arch == arch && r.rule == rule)
        .map(|r| r.p90_mean)
        .collect();
    if vals.is_empty() {
        None
    } else {
        Some(vals.iter().sum::<f64>() / vals.len() as f64)
    }
}

fn max_c(rows: &[DataRow], arch: &str, rule: &str) -> Option<f64> {
    rows.iter()
        .filter(|r| r.arch == arch && r.rule == rule)
        .map(|r| r.c)
        .fold(None, |best, c| Some(best.map_or(c, |b: f64| b.max(c))))
}

/// Resistance index from correlation-sweep data rows: run-averaged
/// capacity per fP level, normalized by the fP = 0 baseline, slope-fitted
/// through (0, 1). A rule with no baseline capacity scores 0.
fn resistance_from(rows: &[DataRow], arch: &str, rule: &str, task: &str) -> Result<f64> {
    let cell: Vec<&DataRow> = rows
        .iter()
        .filter(|r| r.arch == arch && r.rule == rule && r.task == task)
        .collect();
    if cell.is_empty() {
        bail!("correlation input has no {task}-task rows for {arch}/{rule}");
    }
    let mut fps: Vec<f64> = cell.iter().map(|r| r.fp).collect();
    fps.sort_by(|a, b| a.partial_cmp(b).expect("finite fP"));
    fps.dedup();
    if fps.len() < 2 {
        bail!("correlation input needs at least two fP levels for {arch}/{rule}/{task}");
    }
    if fps[0] != 0.0 {
        bail!("correlation input for {arch}/{rule}/{task} is missing the fP = 0 baseline");
    }
    let means: Vec<f64> = fps
        .iter()
        .map(|&fp| {
            let ps: Vec<f64> =
                cell.iter().filter(|r| r.fp == fp).map(|r| r.p as f64).collect();
            ps.iter().sum::<f64>() / ps.len() as f64
        })
        .collect();
    if means[0] == 0.0 {
        return Ok(0.0);
    }
    let points: Vec<(f64, f64)> =
        fps.iter().zip(&means).map(|(&fp, &m)| (fp, m / means[0])).collect();
    let index = correlation_resistance(&points)
        .with_context(|| format!("resistance fit for {arch}/{rule}/{task}"))?;
    if !index.is_finite() || index < 0.0 {
        bail!(
            "resistance index for {arch}/{rule}/{task} is {index}; \
             capacity does not decline with fP, so the index cannot be scored"
        );
    }
    Ok(index)
}

/// Joins the four input CSVs into the normalized score summary. Row order
/// follows first appearance in the pattern-capacity input; every
/// architecture/rule pair found there must be present in all inputs.
pub fn build_score(inputs: &InputsSection) -> Result<ScoreSummary> {
    let pattern = read_capacity_csv(&inputs.pattern_capacity)?;
    let prototype = read_capacity_csv(&inputs.prototype_capacity)?;
    let weightinfo = read_data_csv(&inputs.weightinfo)?;
    let correlation = read_data_csv(&inputs.correlation)?;

    let mut keys: Vec<(String, String)> = Vec::new();
    for r in &pattern {
        let key = (r.arch.clone(), r.rule.clone());
        if !keys.contains(&key) {
            keys.push(key);
        }
    }
    if keys.is_empty() {
        bail!("{}: no capacity rows", inputs.pattern_capacity.display());
    }

    let mut rows = Vec::new();
    for (arch, rule) in &keys {
        let pat = mean_p90(&pattern, arch, rule).expect("keys come from this file");
        let proto = mean_p90(&prototype, arch, rule).with_context(|| {
            format!("{}: no row for {arch}/{rule}", inputs.prototype_capacity.display())
        })?;
        let wi = max_c(&weightinfo, arch, rule).with_context(|| {
            format!("{}: no rows for {arch}/{rule}", inputs.weightinfo.display())
        })?;
        let res_pat = resistance_from(&correlation, arch, rule, "pattern")?;
        let res_proto = resistance_from(&correlation, arch, rule, "prototype")?;
        rows.push(ScoreRow {
            arch: arch.clone(),
            rule: rule.clone(),
            raw: vec![pat, proto, wi, res_pat, res_proto],
        });
    }

    let table = ScoreTable {
        tasks: SCORE_TASKS.iter().map(|s| s.to_string()).collect(),
        rows,
    };
    score_summary(&table).context("assembling score summary")
}

/// Left-aligned text table with a two-space gutter.
pub fn render_table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let fmt_row = |cells: &[String], widths: &[usize]| {
        let line = cells
            .iter()
            .zip(widths)
            .map(|(c, &w)| format!("{c:<w$}"))
            .collect::<Vec<_>>()
            .join("  ");
        line.trim_end().to_string()
    };
    let head: Vec<String> = header.iter().map(|s| s.to_string()).collect();
    let mut out = fmt_row(&head, &widths);
    out.push('\n');
    out.push_str(&"-".repeat(widths.iter().sum::<usize>() + 2 * (widths.len() - 1)));
    out.push('\n');
    for row in rows {
        out.push_str(&fmt_row(row, &widths));
        out.push('\n');
    }
    out
}

pub fn render_score(s: &ScoreSummary) -> String {
    let mut header = vec!["arch".to_string(), "rule".to_string()];
    header.extend(s.tasks.iter().cloned());
    header.push("score".to_string());
    let href: Vec<&str> = header.iter().map(String::as_str).collect();

    let mut rows = Vec::new();
    for r in &s.rows {
        let mut cols = vec![r.arch.clone(), r.rule.clone()];
        cols.extend(r.normalized.iter().map(|v| format!("{v:.1}")));
        cols.push(format!("{:.1}", r.score));
        rows.push(cols);
    }
    for a in &s.shares {
        let mut cols = vec![a.arch.clone(), "(share)".to_string()];
        cols.extend(a.shares.iter().map(|v| format!("{v:.1}")));
        cols.push(format!("{:.1}", a.mean));
        rows.push(cols);
    }
    render_table(&href, &rows)
}

pub fn score_csv(s: &ScoreSummary) -> String {
    let mut out = format!("arch,rule,{},score\n", s.tasks.join(","));
    for r in &s.rows {
        out.push_str(&r.arch);
        out.push(',');
        out.push_str(&r.rule);
        for v in &r.normalized {
            out.push_str(&format!(",{v}"));
        }
        out.push_str(&format!(",{}\n", r.score));
    }
    out
}

pub fn shares_csv(s: &ScoreSummary) -> String {
    let mut out = format!("arch,{},mean\n", s.tasks.join(","));
    for a in &s.shares {
        out.push_str(&a.arch);
        for v in &a.shares {
            out.push_str(&format!(",{v}"));
        }
        out.push_str(&format!(",{}\n", a.mean));
    }
    out
}
