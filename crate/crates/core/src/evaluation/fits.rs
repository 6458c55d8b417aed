//! Derived summary fits: correlation resistance, capacity scaling, and the
//! cross-task score table.

use crate::error::{Error, Result};

/// Points used by the anchored resistance fit.
pub const RESISTANCE_POINTS: usize = 4;

/// Slope sentinel below which capacity is treated as unaffected by
/// correlation and the resistance index saturates.
const FLAT_SLOPE: f64 = 1e-9;

/// Slope `k` of the anchored linear model `ratio = 1 + k * f_corr`, fitted
/// by least squares through the first four `(f_corr, ratio)` points, where
/// `ratio` is capacity at correlation `f_corr` relative to the uncorrelated
/// capacity. The anchor point `(0, 1)` contributes nothing to the sums, so
/// it may be included or omitted without changing the fit.
pub fn resistance_slope(points: &[(f64, f64)]) -> Result<f64> {
    if points.len() < RESISTANCE_POINTS {
        return Err(Error::Degenerate(format!(
            "resistance fit needs {RESISTANCE_POINTS} points, got {}",
            points.len()
        )));
    }
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for &(f_corr, ratio) in &points[..RESISTANCE_POINTS] {
        if !(0.0..=1.0).contains(&f_corr) {
            return Err(Error::Degenerate(format!("correlation level {f_corr} outside [0, 1]")));
        }
        if !ratio.is_finite() {
            return Err(Error::Degenerate(format!("non-finite capacity ratio {ratio}")));
        }
        sxx += f_corr * f_corr;
        sxy += f_corr * (ratio - 1.0);
    }
    if sxx == 0.0 {
        return Err(Error::Degenerate(
            "all correlation levels are zero; slope is undefined".to_string(),
        ));
    }
    Ok(sxy / sxx)
}

/// Correlation resistance index `-1/k`: the extrapolated correlation level
/// at which capacity would vanish. A slope within `1e-9` of zero means
/// capacity was flat across the tested correlations, reported as infinite
/// resistance.
pub fn correlation_resistance(points: &[(f64, f64)]) -> Result<f64> {
    let k = resistance_slope(points)?;
    if k.abs() < FLAT_SLOPE {
        return Ok(f64::INFINITY);
    }
    Ok(-1.0 / k)
}

/// Theoretical pattern count supported by a network of `n` units at fixed
/// information capacity one: `2 n^(3/2) / ln n`.
pub fn tf_pattern_scaling(n: f64) -> f64 {
    2.0 * n.powf(1.5) / n.ln()
}

/// Capacity coefficient fitted through `(n, p90)` measurements under the
/// scaling model `p90 = C * 2 n^(3/2) / ln n`. Closed-form least squares
/// over the given sizes.
pub fn fit_ctf(points: &[(f64, f64)]) -> Result<f64> {
    if points.len() < 2 {
        return Err(Error::Degenerate(format!(
            "capacity scaling fit needs at least 2 sizes, got {}",
            points.len()
        )));
    }
    let mut num = 0.0;
    let mut den = 0.0;
    for &(n, p90) in points {
        if n < 2.0 {
            return Err(Error::Degenerate(format!("network size {n} too small for the scaling law")));
        }
        if !p90.is_finite() || p90 < 0.0 {
            return Err(Error::Degenerate(format!("bad capacity value {p90}")));
        }
        let g = tf_pattern_scaling(n);
        num += p90 * g;
        den += g * g;
    }
    Ok(num / den)
}

/// One benchmark result line: an architecture/rule pair with its raw
/// per-task values.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreRow {
    pub arch: String,
    pub rule: String,
    pub raw: Vec<f64>,
}

/// Raw cross-task results for a set of architecture/rule pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreTable {
    pub tasks: Vec<String>,
    pub rows: Vec<ScoreRow>,
}

/// A scored row: per-task percentages of the column total, plus their mean.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoredRow {
    pub arch: String,
    pub rule: String,
    pub normalized: Vec<f64>,
    pub score: f64,
}

/// Percentage of each task's raw total captured by one architecture's rules.
#[derive(Debug, Clone, PartialEq)]
pub struct ArchShare {
    pub arch: String,
    pub shares: Vec<f64>,
    pub mean: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScoreSummary {
    pub tasks: Vec<String>,
    pub rows: Vec<ScoredRow>,
    pub shares: Vec<ArchShare>,
}

/// Normalizes every task column to percentages summing to 100 within each
/// architecture, averages each row across tasks, and reports per-architecture
/// shares of the raw column totals. Requires non-negative raw values and a
/// positive column total for every architecture.
pub fn score_summary(table: &ScoreTable) -> Result<ScoreSummary> {
    if table.tasks.is_empty() || table.rows.is_empty() {
        return Err(Error::Degenerate("score table must have at least one task and one row".to_string()));
    }
    for row in &table.rows {
        if row.raw.len() != table.tasks.len() {
            return Err(Error::Degenerate(format!(
                "row {}/{} has {} values for {} tasks",
                row.arch,
                row.rule,
                row.raw.len(),
                table.tasks.len()
            )));
        }
        if let Some(v) = row.raw.iter().find(|v| !v.is_finite() || **v < 0.0) {
            return Err(Error::Degenerate(format!(
                "row {}/{} has invalid value {v}",
                row.arch, row.rule
            )));
        }
    }
    let n_tasks = table.tasks.len();
    let mut archs: Vec<String> = Vec::new();
    for row in &table.rows {
        if !archs.contains(&row.arch) {
            archs.push(row.arch.clone());
        }
    }

    // Column sums per architecture: each architecture block normalizes to 100
    // on its own, so every block needs a positive total in every column.
    let mut col_sums = vec![vec![0.0; n_tasks]; archs.len()];
    for row in &table.rows {
        let a = archs.iter().position(|x| *x == row.arch).expect("collected above");
        for (s, v) in col_sums[a].iter_mut().zip(&row.raw) {
            *s += v;
        }
    }
    for (arch, sums) in archs.iter().zip(&col_sums) {
        if let Some(t) = sums.iter().position(|&s| s <= 0.0) {
            return Err(Error::Degenerate(format!(
                "task column {} sums to zero for {arch}; nothing to normalize",
                table.tasks[t]
            )));
        }
    }

    let mut rows = Vec::with_capacity(table.rows.len());
    for row in &table.rows {
        let a = archs.iter().position(|x| *x == row.arch).expect("collected above");
        let normalized: Vec<f64> = row
            .raw
            .iter()
            .zip(&col_sums[a])
            .map(|(v, s)| 100.0 * v / s)
            .collect();
        let score = normalized.iter().sum::<f64>() / normalized.len() as f64;
        rows.push(ScoredRow {
            arch: row.arch.clone(),
            rule: row.rule.clone(),
            normalized,
            score,
        });
    }

    // Shares compare raw totals across architectures, task by task.
    let mut totals = vec![0.0; n_tasks];
    for sums in &col_sums {
        for (t, s) in totals.iter_mut().zip(sums) {
            *t += s;
        }
    }
    let shares = archs
        .iter()
        .zip(&col_sums)
        .map(|(arch, sums)| {
            let shares: Vec<f64> =
                sums.iter().zip(&totals).map(|(s, t)| 100.0 * s / t).collect();
            let mean = shares.iter().sum::<f64>() / n_tasks as f64;
            ArchShare { arch: arch.clone(), shares, mean }
        })
        .collect();

    Ok(ScoreSummary {
        tasks: table.tasks.clone(),
        rows,
        shares,
    })
}
