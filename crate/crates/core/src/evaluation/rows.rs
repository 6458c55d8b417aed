//! CSV row types with frozen column orders.
//!
//! Downstream tooling keys on these headers, so the column sets and their
//! order are part of the crate's compatibility contract. Floats are written
//! with `Display`, whose shortest-round-trip output is deterministic and
//! parses back to the identical value.

use crate::error::{Error, Result};
use crate::evaluation::{ExperimentCell, Task, TrialStats};
use crate::patterns::Architecture;

pub const DATA_HEADER: &str = "arch,rule,n,h,m,k,noise,fp,task,ninst,p,f_corr,p_err,c,seed,run";

/// One measurement trial: the evaluated cell coordinates plus the measured
/// accuracy, error rate, and information capacity at load `p`.
#[derive(Debug, Clone, PartialEq)]
pub struct DataRow {
    pub arch: String,
    pub rule: String,
    pub n: usize,
    /// Hypercolumn count; zero for non-modular networks.
    pub h: usize,
    /// Module size; zero for non-modular networks.
    pub m: usize,
    /// Active units per pattern.
    pub k: usize,
    pub noise: f64,
    pub fp: f64,
    pub task: String,
    /// Training instances per prototype; zero for the single-pattern task.
    pub ninst: usize,
    pub p: u32,
    /// Percent of test cues recalled correctly.
    pub f_corr: f64,
    /// Block error rate for modular networks, unit error rate otherwise.
    pub p_err: f64,
    /// Weight information capacity in bits per synapse.
    pub c: f64,
    pub seed: u64,
    pub run: usize,
}

impl DataRow {
    pub fn from_trial(
        cell: &ExperimentCell,
        load: u32,
        stats: &TrialStats,
        capacity: f64,
        seed: u64,
        run: usize,
    ) -> Self {
        let (h, m) = match cell.arch {
            Architecture::Modular {
                hypercolumns,
                module_size,
            } => (hypercolumns, module_size),
            Architecture::NonModular { .. } => (0, 0),
        };
        let p_err = if cell.arch.is_modular() {
            stats.block_error_rate()
        } else {
            stats.bit_error_rate()
        };
        let ninst = match cell.task {
            Task::SinglePattern => 0,
            Task::Prototype { instances, .. } => instances,
        };
        DataRow {
            arch: cell.arch.kind_name().to_string(),
            rule: cell.rule.to_string(),
            n: cell.arch.units(),
            h,
            m,
            k: cell.arch.active_count(),
            noise: cell.noise,
            fp: cell.correlation,
            task: cell.task.name().to_string(),
            ninst,
            p: load,
            f_corr: stats.fraction_correct(),
            p_err,
            c: capacity,
            seed,
            run,
        }
    }

    pub fn to_csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.arch,
            self.rule,
            self.n,
            self.h,
            self.m,
            self.k,
            self.noise,
            self.fp,
            self.task,
            self.ninst,
            self.p,
            self.f_corr,
            self.p_err,
            self.c,
            self.seed,
            self.run
        )
    }

    pub fn parse_csv_line(line: &str) -> Result<Self> {
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 16 {
            return Err(Error::parse(0, format!("expected 16 data columns, got {}", f.len())));
        }
        Ok(DataRow {
            arch: f[0].to_string(),
            rule: f[1].to_string(),
            n: parse(f[2], "n")?,
            h: parse(f[3], "h")?,
            m: parse(f[4], "m")?,
            k: parse(f[5], "k")?,
            noise: parse(f[6], "noise")?,
            fp: parse(f[7], "fp")?,
            task: f[8].to_string(),
            ninst: parse(f[9], "ninst")?,
            p: parse(f[10], "p")?,
            f_corr: parse(f[11], "f_corr")?,
            p_err: parse(f[12], "p_err")?,
            c: parse(f[13], "c")?,
            seed: parse(f[14], "seed")?,
            run: parse(f[15], "run")?,
        })
    }
}

pub const CAPACITY_HEADER: &str = "arch,rule,n,noise,p90_mean,p90_std,runs";

/// Capacity summary across the runs of one sweep cell.
#[derive(Debug, Clone, PartialEq)]
pub struct CapacityRow {
    pub arch: String,
    pub rule: String,
    pub n: usize,
    pub noise: f64,
    pub p90_mean: f64,
    pub p90_std: f64,
    pub runs: usize,
}

impl CapacityRow {
    pub fn to_csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            self.arch, self.rule, self.n, self.noise, self.p90_mean, self.p90_std, self.runs
        )
    }

    pub fn parse_csv_line(line: &str) -> Result<Self> {
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 7 {
            return Err(Error::parse(0, format!("expected 7 capacity columns, got {}", f.len())));
        }
        Ok(CapacityRow {
            arch: f[0].to_string(),
            rule: f[1].to_string(),
            n: parse(f[2], "n")?,
            noise: parse(f[3], "noise")?,
            p90_mean: parse(f[4], "p90_mean")?,
            p90_std: parse(f[5], "p90_std")?,
            runs: parse(f[6], "runs")?,
        })
    }
}

fn parse<T: std::str::FromStr>(tok: &str, what: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    tok.parse()
        .map_err(|e| Error::parse(0, format!("bad {what} value {tok}: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn headers_are_frozen() {
        assert_eq!(
            DATA_HEADER,
            "arch,rule,n,h,m,k,noise,fp,task,ninst,p,f_corr,p_err,c,seed,run"
        );
        assert_eq!(CAPACITY_HEADER, "arch,rule,n,noise,p90_mean,p90_std,runs");
    }

    fn sample_row() -> DataRow {
        DataRow {
            arch: "modular".into(),
            rule: "bcp".into(),
            n: 256,
            h: 16,
            m: 16,
            k: 16,
            noise: 0.125,
            fp: 0.0,
            task: "pattern".into(),
            ninst: 0,
            p: 312,
            f_corr: 91.0,
            p_err: 0.005254174069468931,
            c: 0.5234,
            seed: 0xDEADBEEF,
            run: 2,
        }
    }

    #[test]
    fn data_row_round_trips() {
        let row = sample_row();
        let line = row.to_csv_line();
        assert_eq!(line.split(',').count(), 16);
        let back = DataRow::parse_csv_line(&line).unwrap();
        assert_eq!(row, back);
    }

    #[test]
    fn capacity_row_round_trips() {
        let row = CapacityRow {
            arch: "nonmodular".into(),
            rule: "prcov".into(),
            n: 400,
            noise: 0.1,
            p90_mean: 123.25,
            p90_std: 4.031128874149275,
            runs: 4,
        };
        let back = CapacityRow::parse_csv_line(&row.to_csv_line()).unwrap();
        assert_eq!(row, back);
    }

    #[test]
    fn parsing_rejects_malformed_lines() {
        assert!(DataRow::parse_csv_line("modular,bcp,256").is_err());
        let mut line = sample_row().to_csv_line();
        line.push_str(",9");
        assert!(DataRow::parse_csv_line(&line).is_err());
        let bad = sample_row().to_csv_line().replace("312", "many");
        assert!(DataRow::parse_csv_line(&bad).is_err());
        assert!(CapacityRow::parse_csv_line("a,b,c").is_err());
    }
}
