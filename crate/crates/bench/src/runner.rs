//! Sweep execution.
//!
//! Grid cells expand in config order, fan out over the thread pool as
//! independent (cell, run) work items, and land back in grid order before
//! anything is written, so the CSV bytes depend only on the config and the
//! base seed. Every item derives its own seeds from the cell coordinates;
//! nothing reads global RNG state.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use hebbench_core::{
    correlation_resistance, fit_ctf, p90_bisection, run_trial, weight_info_capacity,
    Architecture, BisectionParams, CapacityEstimate, CapacityRow, DataRow, Error as CoreError,
    ExperimentCell, Task, CAPACITY_HEADER, DATA_HEADER,
};

use crate::config::{Experiment, SweepConfig, TaskSel};
use crate::report;
use crate::seed::derive_seed;

pub struct RunOptions {
    /// Overrides the config's output directory when set.
    pub out: Option<PathBuf>,
    /// Overrides the config's base seed when set.
    pub seed: Option<u64>,
    /// Worker threads; 0 uses the default pool.
    pub threads: usize,
    pub verbose: bool,
}

/// Runs the configured experiment and writes its artifacts. Returns the
/// output directory on success; any cell failure is an `Err` after the
/// partial results have been written.
pub fn run(cfg: &SweepConfig, opts: &RunOptions) -> Result<PathBuf> {
    let out = opts.out.clone().unwrap_or_else(|| cfg.output.clone());
    fs::create_dir_all(&out)
        .with_context(|| format!("creating output directory {}", out.display()))?;
    let base_seed = opts.seed.unwrap_or(cfg.run.seed);
    let started = Instant::now();

    let outcome = if cfg.experiment == Experiment::Score {
        score_outcome(cfg, opts.verbose)?
    } else if opts.threads > 0 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(opts.threads)
            .build()
            .context("building thread pool")?;
        pool.install(|| sweep_outcome(cfg, base_seed, opts.verbose))?
    } else {
        sweep_outcome(cfg, base_seed, opts.verbose)?
    };

    let mut written = Vec::new();
    if let Some(rows) = &outcome.data {
        let path = out.join("data.csv");
        fs::write(&path, csv_text(DATA_HEADER, rows.iter().map(|r| r.to_csv_line())))
            .with_context(|| format!("writing {}", path.display()))?;
        written.push(format!("data.csv ({} rows)", rows.len()));
    }
    if let Some(rows) = &outcome.capacity {
        let path = out.join("capacity.csv");
        fs::write(&path, csv_text(CAPACITY_HEADER, rows.iter().map(|r| r.to_csv_line())))
            .with_context(|| format!("writing {}", path.display()))?;
        written.push(format!("capacity.csv ({} rows)", rows.len()));
    }
    for (name, text) in &outcome.extra_files {
        let path = out.join(name);
        fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
        written.push(name.clone());
    }

    let manifest = Manifest {
        version: env!("CARGO_PKG_VERSION"),
        experiment: cfg.experiment.name(),
        base_seed,
        threads: opts.threads,
        total_wall_s: started.elapsed().as_secs_f64(),
        config: cfg,
        resistance: outcome.resistance,
        ctf: outcome.ctf,
        cells: outcome.cells,
    };
    let manifest_text = toml::to_string(&manifest).context("serializing manifest")?;
    fs::write(out.join("manifest.toml"), manifest_text)
        .with_context(|| format!("writing {}", out.join("manifest.toml").display()))?;
    written.push("manifest.toml".to_string());

    if let Some(table) = &outcome.stdout_table {
        println!("{table}");
    }
    println!("{}: wrote {} in {}", cfg.experiment.name(), written.join(", "), out.display());

    if !outcome.failures.is_empty() {
        for f in &outcome.failures {
            eprintln!("cell failed: {f}");
        }
        bail!("{} of the sweep's work items failed", outcome.failures.len());
    }
    Ok(out)
}

struct Outcome {
    data: Option<Vec<DataRow>>,
    capacity: Option<Vec<CapacityRow>>,
    extra_files: Vec<(String, String)>,
    resistance: Vec<ResistanceOut>,
    ctf: Vec<CtfOut>,
    cells: Vec<CellTiming>,
    failures: Vec<String>,
    stdout_table: Option<String>,
}

impl Outcome {
    fn empty() -> Self {
        Outcome {
            data: None,
            capacity: None,
            extra_files: Vec::new(),
            resistance: Vec::new(),
            ctf: Vec::new(),
            cells: Vec::new(),
            failures: Vec::new(),
            stdout_table: None,
        }
    }
}

#[derive(Serialize)]
struct CellTiming {
    id: String,
    wall_s: f64,
}

#[derive(Serialize)]
struct ResistanceOut {
    arch: String,
    rule: String,
    task: String,
    noise: f64,
    index: f64,
}

#[derive(Serialize)]
struct CtfOut {
    arch: String,
    rule: String,
    noise: f64,
    c_tf: f64,
    points: usize,
}

#[derive(Serialize)]
struct Manifest<'a> {
    version: &'a str,
    experiment: &'a str,
    base_seed: u64,
    threads: usize,
    total_wall_s: f64,
    config: &'a SweepConfig,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    resistance: Vec<ResistanceOut>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    ctf: Vec<CtfOut>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    cells: Vec<CellTiming>,
}

fn csv_text(header: &str, lines: impl Iterator<Item = String>) -> String {
    let mut text = String::from(header);
    text.push('\n');
    for line in lines {
        text.push_str(&line);
        text.push('\n');
    }
    text
}

fn sweep_outcome(cfg: &SweepConfig, base_seed: u64, verbose: bool) -> Result<Outcome> {
    match cfg.experiment {
        Experiment::Capacity => capacity_experiment(cfg, base_seed, verbose, TaskSel::Pattern),
        Experiment::Prototype => capacity_experiment(cfg, base_seed, verbose, TaskSel::Prototype),
        Experiment::Fit => fit_experiment(cfg, base_seed, verbose),
        Experiment::WeightInfo => weightinfo_experiment(cfg, base_seed, verbose),
        Experiment::Correlation => correlation_experiment(cfg, base_seed, verbose),
        Experiment::Score => unreachable!("score handled before dispatch"),
    }
}

fn params_from(cfg: &SweepConfig) -> BisectionParams {
    BisectionParams {
        initial_load: cfg.run.initial_load,
        shrink: cfg.run.shrink,
        max_evals: cfg.run.max_evals,
    }
}

fn build_cell(cfg: &SweepConfig, arch: Architecture, rule: hebbench_core::Rule, noise: f64, task: TaskSel) -> ExperimentCell {
    let mut cell = ExperimentCell::new(arch, rule, noise)
        .with_n_test(cfg.run.test_cues)
        .with_p_corr(cfg.run.p_corr)
        .with_scoring(cfg.scoring())
        .with_max_steps(cfg.run.max_steps);
    if task == TaskSel::Prototype {
        cell = cell.with_task(Task::Prototype {
            instances: cfg.sweep.instances,
            instance_noise: cfg.sweep.instance_noise.unwrap_or(noise),
        });
    }
    cell
}

fn arch_id(arch: Architecture) -> String {
    match arch {
        Architecture::Modular { hypercolumns, module_size } => {
            format!("modular{hypercolumns}x{module_size}")
        }
        Architecture::NonModular { units, active } => format!("nonmod{units}k{active}"),
    }
}

fn cell_id(cell: &ExperimentCell) -> String {
    let mut id = format!("{}/{}/{}", arch_id(cell.arch), cell.rule, cell.task.name());
    let _ = write!(id, "/noise{}", cell.noise);
    if cell.correlation > 0.0 {
        let _ = write!(id, "/fp{}", cell.correlation);
    }
    id
}

/// FNV-1a over a label; turns rule/task names into seed words.
fn word(s: &str) -> u64 {
    let mut h = 0xcbf2_9ce4_8422_2325u64;
    for b in s.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01B3);
    }
    h
}

/// Coordinate words identifying a cell, independent of grid position, so
/// adding or reordering grid axes never reshuffles unrelated seeds.
fn cell_words(cell: &ExperimentCell) -> Vec<u64> {
    let (kind, a, b) = match cell.arch {
        Architecture::Modular { hypercolumns, module_size } => {
            (0u64, hypercolumns as u64, module_size as u64)
        }
        Architecture::NonModular { units, active } => (1, units as u64, active as u64),
    };
    let (task, ninst, inoise) = match cell.task {
        Task::SinglePattern => (0u64, 0, 0),
        Task::Prototype { instances, instance_noise } => {
            (1, instances as u64, instance_noise.to_bits())
        }
    };
    vec![
        kind,
        a,
        b,
        word(&cell.rule.to_string()),
        cell.noise.to_bits(),
        cell.correlation.to_bits(),
        task,
        ninst,
        inoise,
    ]
}

const PHASE_SEARCH: u64 = 0;
const PHASE_MEASURE: u64 = 1;

fn phase_seed(base: u64, words: &[u64], run: usize, phase: u64) -> u64 {
    let mut w = words.to_vec();
    w.push(run as u64);
    w.push(phase);
    derive_seed(base, &w)
}

/// Capacity search for one run. A search that bottoms out at load 1 with
/// the accuracy still below threshold means the rule stores nothing
/// measurable in this cell; that is a result (capacity 0), not a failure.
fn search_p90(
    cell: &ExperimentCell,
    params: &BisectionParams,
    seed: u64,
) -> std::result::Result<u32, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match p90_bisection::<f64, _>(cell, params, &mut rng) {
        Ok(p) => Ok(p),
        Err(CoreError::NoConvergence { last_p: 1, .. }) => Ok(0),
        Err(e) => Err(format!("{}: {e}", cell_id(cell))),
    }
}

/// One measurement trial at the estimated capacity; a zero capacity gets a
/// sentinel row (accuracy 0, error rate 1, information 0) so every
/// (cell, run) still occupies exactly one data line.
fn measure_row(
    cell: &ExperimentCell,
    p90: u32,
    seed: u64,
    run: usize,
) -> std::result::Result<DataRow, String> {
    if p90 == 0 {
        return Ok(zero_row(cell, seed, run));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let stats = run_trial::<f64, _>(cell, p90, &mut rng)
        .map_err(|e| format!("{} measurement: {e}", cell_id(cell)))?;
    let c = weight_info_capacity(cell.arch, cell.rule, p90, &stats)
        .map_err(|e| format!("{} capacity: {e}", cell_id(cell)))?;
    Ok(DataRow::from_trial(cell, p90, &stats, c, seed, run))
}

fn zero_row(cell: &ExperimentCell, seed: u64, run: usize) -> DataRow {
    let (h, m) = match cell.arch {
        Architecture::Modular { hypercolumns, module_size } => (hypercolumns, module_size),
        Architecture::NonModular { .. } => (0, 0),
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
        p: 0,
        f_corr: 0.0,
        p_err: 1.0,
        c: 0.0,
        seed,
        run,
    }
}

/// Output of one (cell, run) work item.
struct ItemOut {
    rows: Vec<DataRow>,
    p90s: Vec<u32>,
    timing: CellTiming,
}

type ItemResult = std::result::Result<ItemOut, String>;

fn single_timing(id: &str, run: usize, start: Instant) -> CellTiming {
    CellTiming {
        id: format!("{id}/run{run}"),
        wall_s: start.elapsed().as_secs_f64(),
    }
}

/// Gathers per-run item results back into grid-ordered rows, per-cell run
/// lists, timings, and failure diagnostics.
fn gather(
    results: Vec<ItemResult>,
    runs_per_cell: usize,
) -> (Vec<DataRow>, Vec<Vec<Vec<u32>>>, Vec<CellTiming>, Vec<String>) {
    let mut rows = Vec::new();
    let mut per_cell: Vec<Vec<Vec<u32>>> = Vec::new();
    let mut timings = Vec::new();
    let mut failures = Vec::new();
    for chunk in results.chunks(runs_per_cell) {
        let mut cell_runs = Vec::new();
        for item in chunk {
            match item {
                Ok(out) => {
                    rows.extend(out.rows.iter().cloned());
                    cell_runs.push(out.p90s.clone());
                    timings.push(CellTiming {
                        id: out.timing.id.clone(),
                        wall_s: out.timing.wall_s,
                    });
                }
                Err(e) => failures.push(e.clone()),
            }
        }
        per_cell.push(cell_runs);
    }
    (rows, per_cell, timings, failures)
}

fn capacity_summary(
    cells: &[ExperimentCell],
    per_cell: &[Vec<Vec<u32>>],
) -> Vec<CapacityRow> {
    let mut out = Vec::new();
    for (cell, runs) in cells.iter().zip(per_cell) {
        let p90s: Vec<u32> = runs.iter().map(|r| r[0]).collect();
        if p90s.is_empty() {
            continue;
        }
        let est = CapacityEstimate::from_runs(p90s).expect("nonempty");
        out.push(CapacityRow {
            arch: cell.arch.kind_name().to_string(),
            rule: cell.rule.to_string(),
            n: cell.arch.units(),
            noise: cell.noise,
            p90_mean: est.mean,
            p90_std: est.std,
            runs: est.runs.len(),
        });
    }
    out
}

fn capacity_experiment(
    cfg: &SweepConfig,
    base_seed: u64,
    verbose: bool,
    task: TaskSel,
) -> Result<Outcome> {
    let params = params_from(cfg);
    let mut cells = Vec::new();
    for arch in cfg.architectures() {
        for rule in cfg.rules() {
            for &noise in &cfg.sweep.noise {
                cells.push(build_cell(cfg, arch, rule, noise, task));
            }
        }
    }
    let runs = cfg.run.runs;
    let items: Vec<(usize, usize)> = (0..cells.len())
        .flat_map(|c| (0..runs).map(move |r| (c, r)))
        .collect();

    let results: Vec<ItemResult> = items
        .par_iter()
        .map(|&(ci, run)| {
            let cell = &cells[ci];
            let start = Instant::now();
            let words = cell_words(cell);
            let p90 = search_p90(cell, &params, phase_seed(base_seed, &words, run, PHASE_SEARCH))?;
            let row = measure_row(cell, p90, phase_seed(base_seed, &words, run, PHASE_MEASURE), run)?;
            if verbose {
                eprintln!("{} run {run}: p90 = {p90}", cell_id(cell));
            }
            Ok(ItemOut {
                rows: vec![row],
                p90s: vec![p90],
                timing: single_timing(&cell_id(cell), run, start),
            })
        })
        .collect();

    let (rows, per_cell, timings, failures) = gather(results, runs);
    let mut outcome = Outcome::empty();
    outcome.data = Some(rows);
    outcome.capacity = Some(capacity_summary(&cells, &per_cell));
    outcome.cells = timings;
    outcome.failures = failures;
    Ok(outcome)
}

fn fit_experiment(cfg: &SweepConfig, base_seed: u64, verbose: bool) -> Result<Outcome> {
    let mut outcome = capacity_experiment(cfg, base_seed, verbose, TaskSel::Pattern)?;
    let summary = outcome.capacity.clone().expect("capacity experiment fills this");

    // Group capacity means by (architecture kind, rule, noise) across the
    // size grid and fit the scaling coefficient to the per-size means.
    let mut table_rows = Vec::new();
    for kind in ["modular", "nonmodular"] {
        for rule in cfg.rules() {
            for &noise in &cfg.sweep.noise {
                let points: Vec<(f64, f64)> = summary
                    .iter()
                    .filter(|r| r.arch == kind && r.rule == rule.to_string() && r.noise == noise)
                    .map(|r| (r.n as f64, r.p90_mean))
                    .collect();
                if points.len() < 2 {
                    continue;
                }
                let c_tf = fit_ctf(&points)
                    .with_context(|| format!("fitting {kind}/{rule}/noise{noise}"))?;
                table_rows.push(vec![
                    kind.to_string(),
                    rule.to_string(),
                    format!("{noise}"),
                    format!("{c_tf:.4}"),
                    format!("{}", points.len()),
                ]);
                outcome.ctf.push(CtfOut {
                    arch: kind.to_string(),
                    rule: rule.to_string(),
                    noise,
                    c_tf,
                    points: points.len(),
                });
            }
        }
    }
    outcome.stdout_table = Some(report::render_table(
        &["arch", "rule", "noise", "c_tf", "sizes"],
        &table_rows,
    ));
    Ok(outcome)
}

fn weightinfo_experiment(cfg: &SweepConfig, base_seed: u64, verbose: bool) -> Result<Outcome> {
    let mut cells = Vec::new();
    for arch in cfg.architectures() {
        for rule in cfg.rules() {
            for task in cfg.tasks() {
                for &noise in &cfg.sweep.noise {
                    for &load in &cfg.sweep.loads {
                        cells.push((build_cell(cfg, arch, rule, noise, task), load));
                    }
                }
            }
        }
    }
    let runs = cfg.run.runs;
    let items: Vec<(usize, usize)> = (0..cells.len())
        .flat_map(|c| (0..runs).map(move |r| (c, r)))
        .collect();

    let results: Vec<ItemResult> = items
        .par_iter()
        .map(|&(ci, run)| {
            let (cell, load) = &cells[ci];
            let start = Instant::now();
            let mut words = cell_words(cell);
            words.push(*load as u64);
            let row = measure_row(cell, *load, phase_seed(base_seed, &words, run, PHASE_MEASURE), run)?;
            if verbose {
                eprintln!("{} p={load} run {run}: c = {:.4}", cell_id(cell), row.c);
            }
            let id = format!("{}/p{load}", cell_id(cell));
            Ok(ItemOut {
                rows: vec![row],
                p90s: vec![*load],
                timing: single_timing(&id, run, start),
            })
        })
        .collect();

    let (rows, _, timings, failures) = gather(results, runs);

    // Mean information per synapse over runs, one line per scanned load.
    let mut table_rows = Vec::new();
    for (cell, load) in &cells {
        let matching: Vec<&DataRow> = rows
            .iter()
            .filter(|r| {
                r.arch == cell.arch.kind_name()
                    && r.rule == cell.rule.to_string()
                    && r.task == cell.task.name()
                    && r.noise == cell.noise
                    && r.p == *load
            })
            .collect();
        if matching.is_empty() {
            continue;
        }
        let mean_c = matching.iter().map(|r| r.c).sum::<f64>() / matching.len() as f64;
        let mean_f = matching.iter().map(|r| r.f_corr).sum::<f64>() / matching.len() as f64;
        table_rows.push(vec![
            cell.arch.kind_name().to_string(),
            cell.rule.to_string(),
            cell.task.name().to_string(),
            format!("{}", cell.noise),
            format!("{load}"),
            format!("{mean_f:.1}"),
            format!("{mean_c:.4}"),
        ]);
    }

    let mut outcome = Outcome::empty();
    outcome.data = Some(rows);
    outcome.cells = timings;
    outcome.failures = failures;
    outcome.stdout_table = Some(report::render_table(
        &["arch", "rule", "task", "noise", "p", "f_corr", "c"],
        &table_rows,
    ));
    Ok(outcome)
}

fn correlation_experiment(cfg: &SweepConfig, base_seed: u64, verbose: bool) -> Result<Outcome> {
    let params = params_from(cfg);
    let fps = cfg.sweep.correlation.clone();
    let mut cells = Vec::new();
    for arch in cfg.architectures() {
        for rule in cfg.rules() {
            for task in cfg.tasks() {
                for &noise in &cfg.sweep.noise {
                    cells.push(build_cell(cfg, arch, rule, noise, task));
                }
            }
        }
    }
    let runs = cfg.run.runs;
    let items: Vec<(usize, usize)> = (0..cells.len())
        .flat_map(|c| (0..runs).map(move |r| (c, r)))
        .collect();

    let results: Vec<ItemResult> = items
        .par_iter()
        .map(|&(ci, run)| {
            let base_cell = &cells[ci];
            let start = Instant::now();
            let mut rows = Vec::new();
            let mut p90s = Vec::new();
            // The fP levels of one run walk in sequence: each search starts
            // from the previous level's capacity, which keeps the walk out
            // of the absorbing low-load floor when capacity shrinks fast.
            let mut prev: Option<u32> = None;
            for &fp in &fps {
                let cell = base_cell.clone().with_correlation(fp);
                let mut p = params.clone();
                if let Some(prev_p90) = prev {
                    if prev_p90 > 0 {
                        p.initial_load = prev_p90;
                    }
                }
                let words = cell_words(&cell);
                let p90 = search_p90(&cell, &p, phase_seed(base_seed, &words, run, PHASE_SEARCH))?;
                let row =
                    measure_row(&cell, p90, phase_seed(base_seed, &words, run, PHASE_MEASURE), run)?;
                if verbose {
                    eprintln!("{} run {run}: p90 = {p90}", cell_id(&cell));
                }
                rows.push(row);
                p90s.push(p90);
                prev = Some(p90);
            }
            Ok(ItemOut {
                rows,
                p90s,
                timing: single_timing(&cell_id(base_cell), run, start),
            })
        })
        .collect();

    let (rows, per_cell, timings, failures) = gather(results, runs);

    // Resistance index per cell from the run-averaged capacity at each fP.
    let mut resistance = Vec::new();
    let mut table_rows = Vec::new();
    for (cell, cell_runs) in cells.iter().zip(&per_cell) {
        if cell_runs.is_empty() {
            continue;
        }
        let means: Vec<f64> = (0..fps.len())
            .map(|fi| {
                cell_runs.iter().map(|r| r[fi] as f64).sum::<f64>() / cell_runs.len() as f64
            })
            .collect();
        let index = if means[0] == 0.0 {
            // No measurable capacity even without correlation.
            Some(0.0)
        } else if fps.len() >= hebbench_core::RESISTANCE_POINTS {
            let points: Vec<(f64, f64)> =
                fps.iter().zip(&means).map(|(&fp, &m)| (fp, m / means[0])).collect();
            Some(
                correlation_resistance(&points)
                    .with_context(|| format!("resistance fit for {}", cell_id(cell)))?,
            )
        } else {
            // The anchored fit needs four fP levels; shorter grids still
            // produce capacity data, just no index.
            None
        };
        if let Some(index) = index {
            resistance.push(ResistanceOut {
                arch: cell.arch.kind_name().to_string(),
                rule: cell.rule.to_string(),
                task: cell.task.name().to_string(),
                noise: cell.noise,
                index,
            });
        }
        let mut cols = vec![
            cell.arch.kind_name().to_string(),
            cell.rule.to_string(),
            cell.task.name().to_string(),
            format!("{}", cell.noise),
        ];
        cols.extend(means.iter().map(|m| format!("{m:.1}")));
        cols.push(index.map_or_else(|| "n/a".to_string(), |i| format!("{i:.3}")));
        table_rows.push(cols);
    }

    let mut header = vec![
        "arch".to_string(),
        "rule".to_string(),
        "task".to_string(),
        "noise".to_string(),
    ];
    header.extend(fps.iter().map(|fp| format!("p90@fp{fp}")));
    header.push("resistance".to_string());
    let header_refs: Vec<&str> = header.iter().map(|s| s.as_str()).collect();

    let mut outcome = Outcome::empty();
    outcome.data = Some(rows);
    outcome.cells = timings;
    outcome.failures = failures;
    outcome.resistance = resistance;
    outcome.stdout_table = Some(report::render_table(&header_refs, &table_rows));
    Ok(outcome)
}

fn score_outcome(cfg: &SweepConfig, _verbose: bool) -> Result<Outcome> {
    let inputs = cfg.inputs.as_ref().expect("validated");
    let summary = report::build_score(inputs)?;
    let mut outcome = Outcome::empty();
    outcome.extra_files.push(("score.csv".to_string(), report::score_csv(&summary)));
    outcome.extra_files.push(("shares.csv".to_string(), report::shares_csv(&summary)));
    outcome.stdout_table = Some(report::render_score(&summary));
    Ok(outcome)
}
