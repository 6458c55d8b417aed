//! Declarative sweep configuration.
//!
//! A sweep is one TOML file: which experiment to run, the network/rule/
//! noise grids, and the run-control knobs. Parsing is strict (unknown keys
//! are rejected) and validation reports the offending field path, so a
//! typo fails fast instead of silently running the wrong sweep.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

use hebbench_core::{Architecture, RecallScoring, Rule};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Experiment {
    /// Single-pattern storage capacity (P90 per cell).
    Capacity,
    /// Prototype-extraction capacity (P90 per cell, prototype task).
    Prototype,
    /// Capacity under correlated data across an fP grid, per task.
    Correlation,
    /// Information per synapse scanned over explicit loads, no bisection.
    WeightInfo,
    /// Capacity over a size grid plus the scaling-coefficient fit.
    Fit,
    /// Join previous outputs into the normalized cross-task score table.
    Score,
}

impl Experiment {
    pub fn name(&self) -> &'static str {
        match self {
            Experiment::Capacity => "capacity",
            Experiment::Prototype => "prototype",
            Experiment::Correlation => "correlation",
            Experiment::WeightInfo => "weightinfo",
            Experiment::Fit => "fit",
            Experiment::Score => "score",
        }
    }
}

/// Task selector used by the correlation and weight-info sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TaskSel {
    Pattern,
    Prototype,
}

impl TaskSel {
    pub fn name(&self) -> &'static str {
        match self {
            TaskSel::Pattern => "pattern",
            TaskSel::Prototype => "prototype",
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NetworkSection {
    /// Modular networks as `[N, H, M]` triples; N must equal H*M.
    pub modular: Vec<[usize; 3]>,
    /// Non-modular networks as `[N, K]` pairs.
    pub nonmodular: Vec<[usize; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepSection {
    /// Learning rules to sweep; defaults to all seven benchmark rules.
    pub rules: Vec<String>,
    /// Cue distortion levels (fraction of active units resampled).
    pub noise: Vec<f64>,
    /// fP grid for the correlation experiment; must start at 0.0.
    pub correlation: Vec<f64>,
    /// Explicit load grid for the weight-info experiment.
    pub loads: Vec<u32>,
    /// Tasks for the correlation and weight-info experiments.
    pub tasks: Vec<String>,
    /// Training instances per prototype.
    pub instances: usize,
    /// Distortion of the training instances; defaults to the cell's noise.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub instance_noise: Option<f64>,
}

impl Default for SweepSection {
    fn default() -> Self {
        SweepSection {
            rules: hebbench_core::BENCH_RULES.iter().map(|r| r.to_string()).collect(),
            noise: vec![0.1],
            correlation: Vec::new(),
            loads: Vec::new(),
            tasks: vec!["pattern".to_string()],
            instances: 20,
            instance_noise: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunSection {
    /// Independent repetitions per grid cell.
    pub runs: usize,
    /// Test cues per accuracy measurement.
    pub test_cues: usize,
    /// Accuracy threshold the capacity search crosses (fraction).
    pub p_corr: f64,
    /// Step shrink factor of the capacity search.
    pub shrink: f64,
    /// Base seed; the CLI --seed flag overrides it.
    pub seed: u64,
    /// Starting load of the capacity search; 0 means the unit count.
    pub initial_load: u32,
    /// Simulation budget per capacity search.
    pub max_evals: usize,
    /// Recall iteration cap.
    pub max_steps: usize,
    /// Recall scoring: "strict" or "two_cycle".
    pub scoring: String,
}

impl Default for RunSection {
    fn default() -> Self {
        RunSection {
            runs: 5,
            test_cues: 100,
            p_corr: 0.9,
            shrink: 0.5,
            seed: 1,
            initial_load: 0,
            max_evals: 10_000,
            max_steps: 15,
            scoring: "strict".to_string(),
        }
    }
}

/// CSV files consumed by the score experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputsSection {
    /// capacity.csv from a capacity sweep.
    pub pattern_capacity: PathBuf,
    /// capacity.csv from a prototype sweep.
    pub prototype_capacity: PathBuf,
    /// data.csv from a weight-info sweep.
    pub weightinfo: PathBuf,
    /// data.csv from a correlation sweep covering both tasks.
    pub correlation: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub experiment: Experiment,
    /// Output directory; the CLI --out flag overrides it.
    #[serde(default = "default_output")]
    pub output: PathBuf,
    #[serde(default)]
    pub network: NetworkSection,
    #[serde(default)]
    pub sweep: SweepSection,
    #[serde(default)]
    pub run: RunSection,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub inputs: Option<InputsSection>,
}

fn default_output() -> PathBuf {
    PathBuf::from("out")
}

fn parse_rule(token: &str) -> Option<Rule> {
    Some(match token {
        "will" => Rule::Will,
        "hebb" => Rule::Hebb,
        "hopf" => Rule::Hopf,
        "cov" => Rule::Cov,
        "prcov" => Rule::PrCov,
        "bcp" => Rule::Bcp,
        "boms" => Rule::Boms,
        _ => return None,
    })
}

fn parse_task(token: &str) -> Option<TaskSel> {
    Some(match token {
        "pattern" => TaskSel::Pattern,
        "prototype" => TaskSel::Prototype,
        _ => return None,
    })
}

impl SweepConfig {
    pub fn load(path: &Path) -> Result<SweepConfig> {
        let text = fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        let cfg: SweepConfig = toml::from_str(&text)
            .with_context(|| format!("parsing config {}", path.display()))?;
        cfg.validate()
            .with_context(|| format!("validating config {}", path.display()))?;
        Ok(cfg)
    }

    /// Checks every field against its domain. Error messages name the
    /// offending field with its path in the TOML file.
    pub fn validate(&self) -> Result<()> {
        let ex = self.experiment;

        if ex == Experiment::Score {
            if self.inputs.is_none() {
                bail!(
                    "inputs: the score experiment needs input CSV paths \
                     (pattern_capacity, prototype_capacity, weightinfo, correlation)"
                );
            }
            return Ok(());
        }
        if self.inputs.is_some() {
            bail!("inputs: only used by the score experiment");
        }

        for (i, &[n, h, m]) in self.network.modular.iter().enumerate() {
            if n != h * m {
                bail!("network.modular[{i}]: n = {n} but h*m = {h}*{m} = {}", h * m);
            }
            Architecture::modular(h, m).map_err(|e| anyhow::anyhow!("network.modular[{i}]: {e}"))?;
        }
        for (i, &[n, k]) in self.network.nonmodular.iter().enumerate() {
            Architecture::non_modular(n, k)
                .map_err(|e| anyhow::anyhow!("network.nonmodular[{i}]: {e}"))?;
        }
        if self.network.modular.is_empty() && self.network.nonmodular.is_empty() {
            bail!("network: need at least one modular or nonmodular entry");
        }

        if self.sweep.rules.is_empty() {
            bail!("sweep.rules: need at least one learning rule");
        }
        for (i, tok) in self.sweep.rules.iter().enumerate() {
            if parse_rule(tok).is_none() {
                bail!(
                    "sweep.rules[{i}]: unknown rule {tok:?} \
                     (expected will, hebb, hopf, cov, prcov, bcp, or boms)"
                );
            }
        }

        if self.sweep.noise.is_empty() {
            bail!("sweep.noise: need at least one distortion level");
        }
        for (i, &v) in self.sweep.noise.iter().enumerate() {
            if !(0.0..=1.0).contains(&v) {
                bail!("sweep.noise[{i}]: must be in [0, 1], got {v}");
            }
        }

        match ex {
            Experiment::Correlation => {
                let fp = &self.sweep.correlation;
                if fp.is_empty() {
                    bail!("sweep.correlation: need an fP grid");
                }
                if fp[0] != 0.0 {
                    bail!(
                        "sweep.correlation: must start at 0.0 \
                         (the uncorrelated baseline anchors the resistance ratios)"
                    );
                }
                for (i, &v) in fp.iter().enumerate() {
                    if !(0.0..=1.0).contains(&v) {
                        bail!("sweep.correlation[{i}]: must be in [0, 1], got {v}");
                    }
                    if i > 0 && v <= fp[i - 1] {
                        bail!("sweep.correlation[{i}]: grid must be strictly ascending");
                    }
                }
            }
            _ if !self.sweep.correlation.is_empty() => {
                bail!("sweep.correlation: only used by the correlation experiment");
            }
            _ => {}
        }

        match ex {
            Experiment::WeightInfo => {
                if self.sweep.loads.is_empty() {
                    bail!("sweep.loads: need at least one load");
                }
                if let Some(i) = self.sweep.loads.iter().position(|&p| p == 0) {
                    bail!("sweep.loads[{i}]: loads start at 1");
                }
            }
            _ if !self.sweep.loads.is_empty() => {
                bail!("sweep.loads: only used by the weightinfo experiment");
            }
            _ => {}
        }

        for (i, tok) in self.sweep.tasks.iter().enumerate() {
            if parse_task(tok).is_none() {
                bail!("sweep.tasks[{i}]: expected \"pattern\" or \"prototype\", got {tok:?}");
            }
        }
        if self.sweep.tasks.is_empty() {
            bail!("sweep.tasks: need at least one task");
        }
        let has_proto = self.sweep.tasks.iter().any(|t| t == "prototype");
        match ex {
            Experiment::Capacity | Experiment::Fit if has_proto => {
                bail!(
                    "sweep.tasks: the {} experiment always runs the pattern task; \
                     use the prototype experiment instead",
                    ex.name()
                );
            }
            _ => {}
        }

        if self.sweep.instances == 0 {
            bail!("sweep.instances: need at least one training instance per prototype");
        }
        if let Some(v) = self.sweep.instance_noise {
            if !(0.0..=1.0).contains(&v) {
                bail!("sweep.instance_noise: must be in [0, 1], got {v}");
            }
        }

        if ex == Experiment::Fit {
            let nm = &self.network.modular;
            let nn = &self.network.nonmodular;
            if !nm.is_empty() && nm.len() < 2 {
                bail!("network.modular: the scaling fit needs at least two sizes");
            }
            if !nn.is_empty() && nn.len() < 2 {
                bail!("network.nonmodular: the scaling fit needs at least two sizes");
            }
            for (i, e) in nm.iter().enumerate() {
                if nm[..i].iter().any(|p| p[0] == e[0]) {
                    bail!("network.modular[{i}]: duplicate size n = {}", e[0]);
                }
            }
            for (i, e) in nn.iter().enumerate() {
                if nn[..i].iter().any(|p| p[0] == e[0]) {
                    bail!("network.nonmodular[{i}]: duplicate size n = {}", e[0]);
                }
            }
        }

        let r = &self.run;
        if r.runs == 0 {
            bail!("run.runs: need at least one run");
        }
        if r.test_cues == 0 {
            bail!("run.test_cues: need at least one test cue");
        }
        if !(r.p_corr > 0.0 && r.p_corr < 1.0) {
            bail!("run.p_corr: must be in (0, 1), got {}", r.p_corr);
        }
        if !(r.shrink > 0.0 && r.shrink < 1.0) {
            bail!("run.shrink: must be in (0, 1), got {}", r.shrink);
        }
        if r.max_evals == 0 {
            bail!("run.max_evals: need a positive simulation budget");
        }
        if r.max_steps == 0 {
            bail!("run.max_steps: need at least one recall step");
        }
        if r.scoring != "strict" && r.scoring != "two_cycle" {
            bail!("run.scoring: expected \"strict\" or \"two_cycle\", got {:?}", r.scoring);
        }

        Ok(())
    }

    /// Networks in grid order: modular entries first, then non-modular,
    /// each in the order listed. Call after `validate`.
    pub fn architectures(&self) -> Vec<Architecture> {
        let mut out = Vec::new();
        for &[_, h, m] in &self.network.modular {
            out.push(Architecture::modular(h, m).expect("validated"));
        }
        for &[n, k] in &self.network.nonmodular {
            out.push(Architecture::non_modular(n, k).expect("validated"));
        }
        out
    }

    /// Rules in config order. Call after `validate`.
    pub fn rules(&self) -> Vec<Rule> {
        self.sweep.rules.iter().map(|t| parse_rule(t).expect("validated")).collect()
    }

    /// Tasks in config order. Call after `validate`.
    pub fn tasks(&self) -> Vec<TaskSel> {
        self.sweep.tasks.iter().map(|t| parse_task(t).expect("validated")).collect()
    }

    pub fn scoring(&self) -> RecallScoring {
        if self.run.scoring == "two_cycle" {
            RecallScoring::AllowTwoCycle
        } else {
            RecallScoring::StrictFixedPoint
        }
    }
}
