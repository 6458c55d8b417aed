//! Benchmark measurements: recall trials, capacity search, information
//! capacity, and derived summary fits.
//!
//! An [`ExperimentCell`] pins down everything about a measurement except
//! the load: architecture, rule, cue noise, task, and scoring policy.
//! [`run_trial`] draws a fresh training set at a given load, trains and
//! compiles a network, and scores recall over freshly distorted cues.
//! Everything downstream (threshold search, capacity rows, fits) consumes
//! those trial statistics.

mod capacity;
pub mod info;
mod fits;
mod rows;

pub use capacity::{bisect_threshold, estimate_p90, p90_bisection, BisectionParams, CapacityEstimate};
pub use fits::{
    correlation_resistance, fit_ctf, resistance_slope, score_summary, tf_pattern_scaling, ArchShare,
    ScoreRow, ScoreSummary, ScoreTable, ScoredRow, RESISTANCE_POINTS,
};
pub use info::{binary_entropy, bit_transinfo, block_error, block_transinfo, completion_capacity};
pub use rows::{CapacityRow, DataRow, CAPACITY_HEADER, DATA_HEADER};

use rand::Rng;

use crate::dynamics::{recall, RecallResult, Termination, DEFAULT_MAX_STEPS};
use crate::error::{Error, Result};
use crate::patterns::{
    distort, gen_correlated_set, gen_random_set, Architecture, Pattern, PrototypeSet,
};
use crate::plasticity::{compile, trainable_weight_count, CounterState, Rule};
use crate::scalar::Scalar;

/// What the network is asked to store and recall.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Task {
    /// Train on `P` patterns, cue with distorted copies of them.
    SinglePattern,
    /// Train on noisy instances of `P` prototypes (never the prototypes
    /// themselves), cue with fresh distortions, score against the
    /// prototypes.
    Prototype { instances: usize, instance_noise: f64 },
}

impl Task {
    pub fn name(&self) -> &'static str {
        match self {
            Task::SinglePattern => "pattern",
            Task::Prototype { .. } => "prototype",
        }
    }
}

/// When a recalled state counts as correct.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RecallScoring {
    /// The run must end in a fixed point that exactly matches the target.
    StrictFixedPoint,
    /// A two-cycle whose reported state matches the target also counts;
    /// kept as a sensitivity check on the strict convention.
    AllowTwoCycle,
}

/// Full specification of one measurement condition.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentCell {
    pub arch: Architecture,
    pub rule: Rule,
    /// Fraction of a cue's active slots resampled before recall.
    pub noise: f64,
    /// Correlation level of the stored set; 0 draws independent patterns.
    pub correlation: f64,
    pub task: Task,
    /// Cues scored per trial.
    pub n_test: usize,
    /// Target recall probability; sets both the search threshold and the
    /// clipping floor of the compiled network.
    pub p_corr: f64,
    pub scoring: RecallScoring,
    pub max_steps: usize,
}

impl ExperimentCell {
    pub fn new(arch: Architecture, rule: Rule, noise: f64) -> Self {
        ExperimentCell {
            arch,
            rule,
            noise,
            correlation: 0.0,
            task: Task::SinglePattern,
            n_test: 100,
            p_corr: 0.9,
            scoring: RecallScoring::StrictFixedPoint,
            max_steps: DEFAULT_MAX_STEPS,
        }
    }

    pub fn with_task(mut self, task: Task) -> Self {
        self.task = task;
        self
    }

    pub fn with_correlation(mut self, f_corr: f64) -> Self {
        self.correlation = f_corr;
        self
    }

    pub fn with_n_test(mut self, n_test: usize) -> Self {
        self.n_test = n_test;
        self
    }

    pub fn with_p_corr(mut self, p_corr: f64) -> Self {
        self.p_corr = p_corr;
        self
    }

    pub fn with_scoring(mut self, scoring: RecallScoring) -> Self {
        self.scoring = scoring;
        self
    }

    pub fn with_max_steps(mut self, max_steps: usize) -> Self {
        self.max_steps = max_steps;
        self
    }

    fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.noise) {
            return Err(Error::invalid("noise", format!("must be in [0, 1], got {}", self.noise)));
        }
        if !(0.0..=1.0).contains(&self.correlation) {
            return Err(Error::invalid(
                "correlation",
                format!("must be in [0, 1], got {}", self.correlation),
            ));
        }
        if self.n_test == 0 {
            return Err(Error::invalid("n_test", "need at least one test cue".to_string()));
        }
        if !(self.p_corr > 0.0 && self.p_corr < 1.0) {
            return Err(Error::invalid("p_corr", format!("must be in (0, 1), got {}", self.p_corr)));
        }
        if let Task::Prototype {
            instances,
            instance_noise,
        } = self.task
        {
            if instances == 0 {
                return Err(Error::invalid("instances", "need at least one instance".to_string()));
            }
            if !(0.0..=1.0).contains(&instance_noise) {
                return Err(Error::invalid(
                    "instance_noise",
                    format!("must be in [0, 1], got {instance_noise}"),
                ));
            }
        }
        Ok(())
    }
}

/// Aggregate outcome of one trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrialStats {
    pub n_test: usize,
    pub n_correct: usize,
    /// Hypercolumns evaluated and the number with a wrong winner; zero for
    /// non-modular networks.
    pub blocks_total: u64,
    pub block_errors: u64,
    /// Per-unit confusion counts `[n00, n01, n10, n11]`, indexed
    /// `(stored, recalled)`.
    pub bit_joint: [u64; 4],
}

impl TrialStats {
    /// Percent of cues recalled correctly.
    pub fn fraction_correct(&self) -> f64 {
        100.0 * self.n_correct as f64 / self.n_test as f64
    }

    pub fn block_error_rate(&self) -> f64 {
        if self.blocks_total == 0 {
            0.0
        } else {
            self.block_errors as f64 / self.blocks_total as f64
        }
    }

    /// Fraction of unit states that differ between target and recall.
    pub fn bit_error_rate(&self) -> f64 {
        let total: u64 = self.bit_joint.iter().sum();
        if total == 0 {
            0.0
        } else {
            (self.bit_joint[1] + self.bit_joint[2]) as f64 / total as f64
        }
    }

    /// Empirical per-unit transinformation in bits.
    pub fn bit_transinfo(&self) -> f64 {
        info::bit_transinfo(self.bit_joint)
    }
}

/// Scoring rule shared by trials and their tests.
pub fn is_correct(scoring: RecallScoring, target: &Pattern, result: &RecallResult) -> bool {
    let exact = result.final_state == *target;
    match scoring {
        RecallScoring::StrictFixedPoint => exact && result.termination == Termination::FixedPoint,
        RecallScoring::AllowTwoCycle => {
            exact && result.termination != Termination::IterationCap
        }
    }
}

/// Trains a freshly drawn set at load `load`, compiles the cell's rule,
/// and scores `n_test` distorted cues against their targets.
pub fn run_trial<F: Scalar, R: Rng + ?Sized>(
    cell: &ExperimentCell,
    load: u32,
    rng: &mut R,
) -> Result<TrialStats> {
    cell.validate()?;
    if load == 0 {
        return Err(Error::invalid("load", "need at least one stored pattern".to_string()));
    }
    let arch = cell.arch;

    let draw_targets = |rng: &mut R| -> Result<Vec<Pattern>> {
        if cell.correlation > 0.0 {
            Ok(gen_correlated_set(arch, cell.correlation, load as usize, rng)?.1)
        } else {
            Ok(gen_random_set(arch, load as usize, rng))
        }
    };

    let (training, prototype_targets) = match cell.task {
        Task::SinglePattern => (draw_targets(rng)?, None),
        Task::Prototype {
            instances,
            instance_noise,
        } => {
            let protos = PrototypeSet::new(draw_targets(rng)?, instances, instance_noise)?;
            let training = protos.training_set(rng);
            (training, Some(protos.into_prototypes()))
        }
    };
    let targets: &[Pattern] = prototype_targets.as_deref().unwrap_or(&training);

    let mut counters = CounterState::new(arch);
    counters.train_all(&training)?;
    let ws = compile::<F>(&counters, cell.rule, cell.p_corr)?;

    let mut stats = TrialStats {
        n_test: cell.n_test,
        n_correct: 0,
        blocks_total: 0,
        block_errors: 0,
        bit_joint: [0; 4],
    };
    let n = arch.units() as u64;
    let k = arch.active_count() as u64;
    for _ in 0..cell.n_test {
        let target = &targets[rng.gen_range(0..targets.len())];
        let cue = distort(target, cell.noise, rng)?;
        let result = recall(&ws, &cue, cell.max_steps, rng)?;
        if is_correct(cell.scoring, target, &result) {
            stats.n_correct += 1;
        }
        let overlap = target.overlap(&result.final_state) as u64;
        if arch.is_modular() {
            stats.blocks_total += k;
            stats.block_errors += k - overlap;
        }
        stats.bit_joint[3] += overlap;
        stats.bit_joint[2] += k - overlap;
        stats.bit_joint[1] += k - overlap;
        stats.bit_joint[0] += n - 2 * k + overlap;
    }
    Ok(stats)
}

/// Information retained per synapse at load `load`, from the error
/// statistics of a measurement trial. Modular networks are scored per
/// hypercolumn through the M-ary channel model, non-modular networks per
/// unit through the empirical binary joint; either way the total is
/// divided by the number of independently trainable synapses.
pub fn weight_info_capacity(
    arch: Architecture,
    rule: Rule,
    load: u32,
    stats: &TrialStats,
) -> Result<f64> {
    if stats.n_test == 0 {
        return Err(Error::invalid("stats", "no test cues were scored".to_string()));
    }
    let stored_info = match arch {
        Architecture::Modular {
            hypercolumns,
            module_size,
        } => {
            let t = info::block_transinfo(stats.block_error_rate(), module_size)?;
            load as f64 * hypercolumns as f64 * t
        }
        Architecture::NonModular { units, .. } => load as f64 * units as f64 * stats.bit_transinfo(),
    };
    Ok(stored_info / trainable_weight_count(arch, rule) as f64)
}
