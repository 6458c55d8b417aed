//! Recurrent binary attractor networks trained with local Hebbian rules,
//! plus the measurement machinery to benchmark them.
//!
//! Two architectures are supported: modular networks of `H` hypercolumns
//! with `M` units each and one winner per column, and non-modular networks
//! of `N` units with `K` active under global top-K selection. Training
//! accumulates integer activation counters; a learning rule ([`Rule`])
//! compiles them into weights and biases; synchronous winner-take-all
//! recall then completes distorted cues. On top of that sit pattern
//! capacity search, information capacity per synapse, prototype
//! extraction, and robustness to correlated pattern sets.
//!
//! Weight and field arithmetic is generic over the floating-point type via
//! [`Scalar`]; `f64` is the reference precision, `f32` halves memory
//! traffic. Everything that draws randomness takes an explicit `rand::Rng`,
//! so fixed seeds reproduce results bit for bit.
//!
//! ```
//! use hebbench_core::{
//!     compile, distort, gen_random_set, recall, Architecture, CounterState, Rule,
//!     Termination, DEFAULT_MAX_STEPS,
//! };
//! use rand::SeedableRng;
//!
//! let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
//! let arch = Architecture::modular(8, 8)?;
//! let patterns = gen_random_set(arch, 10, &mut rng);
//!
//! let mut counters = CounterState::new(arch);
//! counters.train_all(&patterns)?;
//! let network = compile::<f64>(&counters, Rule::Bcp, 0.9)?;
//!
//! let cue = distort(&patterns[0], 0.25, &mut rng)?;
//! let result = recall(&network, &cue, DEFAULT_MAX_STEPS, &mut rng)?;
//! assert_eq!(result.termination, Termination::FixedPoint);
//! assert_eq!(result.final_state, patterns[0]);
//! # Ok::<(), hebbench_core::Error>(())
//! ```

pub mod dynamics;
pub mod error;
pub mod evaluation;
pub mod patterns;
pub mod plasticity;
pub mod scalar;

pub use dynamics::{
    activate, field, recall, recall_traced, RecallResult, Termination, DEFAULT_MAX_STEPS,
};
pub use error::{Error, Result};
pub use patterns::{
    distort, gen_correlated_set, gen_random, gen_random_set, read_patterns, write_patterns,
    Architecture, Pattern, PrototypeSet,
};
pub use plasticity::{
    compile, epsilon, trainable_weight_count, ChannelNoise, CounterState, PEstimates, Rule,
    WeightSet, BENCH_RULES,
};
pub use scalar::Scalar;

pub use evaluation::{
    binary_entropy, bisect_threshold, bit_transinfo, block_error, block_transinfo,
    completion_capacity, correlation_resistance, estimate_p90, fit_ctf, p90_bisection,
    resistance_slope, run_trial, score_summary, tf_pattern_scaling, weight_info_capacity,
    ArchShare, BisectionParams, CapacityEstimate, CapacityRow, DataRow, ExperimentCell,
    RecallScoring, ScoreRow, ScoreSummary, ScoreTable, ScoredRow, Task, TrialStats,
    CAPACITY_HEADER, DATA_HEADER, RESISTANCE_POINTS,
};

/// Reference-precision network.
pub type WeightSet64 = WeightSet<f64>;
/// Memory-lean network for large sweeps.
pub type WeightSet32 = WeightSet<f32>;
pub type PEstimates64 = PEstimates<f64>;
pub type PEstimates32 = PEstimates<f32>;
