//! Pattern capacity estimation by stochastic threshold search.
//!
//! The load `P` at which recall accuracy crosses the target (90% by
//! default) is found by a step-halving walk: simulate at the current load,
//! step up or down by `d`, halve `d` on direction reversals, and once
//! `d = 1` accumulate the last 20 step directions. The walk has converged
//! when those directions average out, which means the load is oscillating
//! around the crossing.

use std::collections::VecDeque;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::evaluation::{run_trial, ExperimentCell};
use crate::scalar::Scalar;

/// Direction window length and the permitted imbalance at convergence:
/// at most 2 of the last 20 unit steps may point the same net way.
const WINDOW: usize = 20;
const MAX_IMBALANCE: i64 = 2;
/// Consecutive down-steps pinned at load 1 before giving up. A network
/// below the accuracy target even at a single stored pattern can never
/// converge, and without this guard the walk would burn the whole
/// evaluation budget at the floor.
const FLOOR_RUN_LIMIT: usize = 50;

/// Tuning knobs for the threshold search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BisectionParams {
    /// Starting load; 0 means "use the unit count of the architecture".
    pub initial_load: u32,
    /// Step shrink factor applied on direction reversals.
    pub shrink: f64,
    /// Simulation budget before the search errors out.
    pub max_evals: usize,
}

impl Default for BisectionParams {
    fn default() -> Self {
        BisectionParams {
            initial_load: 0,
            shrink: 0.5,
            max_evals: 10_000,
        }
    }
}

/// Finds the load where `simulate` crosses `threshold` (percent correct).
///
/// `simulate` receives a load and returns the measured accuracy for one
/// fresh trial at that load; it is intentionally a closure so tests can
/// drive the search with synthetic response curves.
pub fn bisect_threshold<S>(
    mut simulate: S,
    threshold: f64,
    initial_load: u32,
    shrink: f64,
    max_evals: usize,
) -> Result<u32>
where
    S: FnMut(u32) -> Result<f64>,
{
    if initial_load == 0 {
        return Err(Error::invalid("initial_load", "must be at least 1".to_string()));
    }
    if !(shrink > 0.0 && shrink < 1.0) {
        return Err(Error::invalid("shrink", format!("must be in (0, 1), got {shrink}")));
    }
    if max_evals == 0 {
        return Err(Error::invalid("max_evals", "must be at least 1".to_string()));
    }

    let mut load = initial_load as i64;
    let mut step = ((0.1 * initial_load as f64).round() as i64).max(1);
    let mut dir: i64 = 0;
    let mut dirs: VecDeque<i64> = VecDeque::with_capacity(WINDOW + 1);
    let mut evals = 0usize;
    let mut floor_run = 0usize;

    loop {
        if dirs.len() == WINDOW && dirs.iter().sum::<i64>().abs() <= MAX_IMBALANCE {
            return Ok(load as u32);
        }
        if evals >= max_evals {
            return Err(Error::NoConvergence {
                evals,
                last_p: load as u32,
            });
        }
        let accuracy = simulate(load as u32)?;
        evals += 1;
        let prev_dir = dir;
        dir = if accuracy >= threshold { 1 } else { -1 };
        load = (load + dir * step).max(1);
        if step > 1 && dir * prev_dir < 0 {
            step = ((shrink * step as f64 + 0.5).floor() as i64).max(1);
        } else if step == 1 {
            dirs.push_back(dir);
            if dirs.len() > WINDOW {
                dirs.pop_front();
            }
        }
        if load == 1 && dir < 0 {
            floor_run += 1;
            if floor_run >= FLOOR_RUN_LIMIT {
                return Err(Error::NoConvergence { evals, last_p: 1 });
            }
        } else {
            floor_run = 0;
        }
    }
}

/// Runs the threshold search against real trials of `cell`, targeting the
/// cell's recall probability. Every simulation draws fresh patterns and
/// cues from `rng`.
pub fn p90_bisection<F: Scalar, R: rand::Rng + ?Sized>(
    cell: &ExperimentCell,
    params: &BisectionParams,
    rng: &mut R,
) -> Result<u32> {
    let initial = if params.initial_load == 0 {
        cell.arch.units() as u32
    } else {
        params.initial_load
    };
    bisect_threshold(
        |load| run_trial::<F, R>(cell, load, rng).map(|s| s.fraction_correct()),
        cell.p_corr * 100.0,
        initial,
        params.shrink,
        params.max_evals,
    )
}

/// Independent capacity measurements and their summary statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct CapacityEstimate {
    pub runs: Vec<u32>,
    pub mean: f64,
    /// Sample standard deviation; zero for a single run.
    pub std: f64,
}

impl CapacityEstimate {
    pub fn from_runs(runs: Vec<u32>) -> Result<Self> {
        if runs.is_empty() {
            return Err(Error::invalid("runs", "need at least one run".to_string()));
        }
        let n = runs.len() as f64;
        let mean = runs.iter().map(|&p| p as f64).sum::<f64>() / n;
        let std = if runs.len() < 2 {
            0.0
        } else {
            let ss: f64 = runs.iter().map(|&p| (p as f64 - mean).powi(2)).sum();
            (ss / (n - 1.0)).sqrt()
        };
        Ok(CapacityEstimate { runs, mean, std })
    }
}

/// Estimates capacity as the mean over one threshold search per seed.
/// Searches run in parallel; results are gathered in seed order, so the
/// estimate is identical however many threads execute it.
pub fn estimate_p90<F: Scalar>(
    cell: &ExperimentCell,
    params: &BisectionParams,
    seeds: &[u64],
) -> Result<CapacityEstimate> {
    let runs: Vec<u32> = seeds
        .par_iter()
        .map(|&seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            p90_bisection::<F, _>(cell, params, &mut rng)
        })
        .collect::<Result<_>>()?;
    CapacityEstimate::from_runs(runs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::patterns::Architecture;
    use crate::plasticity::Rule;
    use approx::assert_relative_eq;
    use rand::Rng;

    /// Logistic accuracy curve crossing 90% at 300 - 10 ln 9 = 278.028.
    fn sigmoid(p: u32) -> f64 {
        100.0 / (1.0 + ((p as f64 - 300.0) / 10.0).exp())
    }

    const SIGMOID_CROSSING: f64 = 278.0277542266378;

    #[test]
    fn finds_sigmoid_crossing_within_one_percent() {
        for p0 in [100, 400, 1000] {
            let found = bisect_threshold(|p| Ok(sigmoid(p)), 90.0, p0, 0.5, 10_000).unwrap();
            let err = (found as f64 - SIGMOID_CROSSING).abs();
            assert!(
                err <= 0.01 * SIGMOID_CROSSING,
                "from P0={p0}: found {found}, want ~{SIGMOID_CROSSING}"
            );
        }
    }

    #[test]
    fn is_deterministic_for_a_pure_curve() {
        let a = bisect_threshold(|p| Ok(sigmoid(p)), 90.0, 400, 0.5, 10_000).unwrap();
        let b = bisect_threshold(|p| Ok(sigmoid(p)), 90.0, 400, 0.5, 10_000).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn finds_step_and_linear_crossings() {
        let found = bisect_threshold(|p| Ok(if p <= 250 { 100.0 } else { 0.0 }), 90.0, 400, 0.5, 10_000).unwrap();
        assert!((found as i64 - 250).abs() <= 3, "step crossing found {found}");

        let linear = |p: u32| Ok((100.0 - 0.2 * (p as f64 - 200.0)).clamp(0.0, 100.0));
        let found = bisect_threshold(linear, 90.0, 100, 0.5, 10_000).unwrap();
        assert!((found as i64 - 250).abs() <= 3, "linear crossing found {found}");
    }

    #[test]
    fn tolerates_simulation_noise() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let noisy = |p: u32| Ok(sigmoid(p) + rng.gen_range(-3.0..3.0));
        let found = bisect_threshold(noisy, 90.0, 400, 0.5, 10_000).unwrap();
        let err = (found as f64 - SIGMOID_CROSSING).abs();
        assert!(err <= 0.015 * SIGMOID_CROSSING, "noisy crossing found {found}");
    }

    #[test]
    fn hopeless_network_errors_at_the_floor() {
        let mut evals = 0;
        let res = bisect_threshold(
            |_| {
                evals += 1;
                Ok(0.0)
            },
            90.0,
            50,
            0.5,
            10_000,
        );
        assert!(matches!(res, Err(Error::NoConvergence { last_p: 1, .. })));
        assert!(evals < 200, "floor guard should trip quickly, took {evals} evals");
    }

    #[test]
    fn runaway_growth_exhausts_the_budget() {
        let res = bisect_threshold(|_| Ok(100.0), 90.0, 100, 0.5, 60);
        assert!(matches!(res, Err(Error::NoConvergence { evals: 60, .. })));
    }

    #[test]
    fn validates_parameters() {
        assert!(bisect_threshold(|_| Ok(0.0), 90.0, 0, 0.5, 10).is_err());
        assert!(bisect_threshold(|_| Ok(0.0), 90.0, 10, 1.0, 10).is_err());
        assert!(bisect_threshold(|_| Ok(0.0), 90.0, 10, 0.5, 0).is_err());
    }

    #[test]
    fn capacity_estimate_statistics() {
        let est = CapacityEstimate::from_runs(vec![300, 310, 320]).unwrap();
        assert_relative_eq!(est.mean, 310.0, max_relative = 1e-15);
        assert_relative_eq!(est.std, 10.0, max_relative = 1e-12);
        let single = CapacityEstimate::from_runs(vec![42]).unwrap();
        assert_eq!(single.std, 0.0);
        assert!(CapacityEstimate::from_runs(vec![]).is_err());
    }

    #[test]
    fn real_cell_estimates_are_deterministic_and_plausible() {
        let cell = ExperimentCell::new(
            Architecture::modular(6, 6).unwrap(),
            Rule::Hebb,
            1.0 / 6.0,
        );
        let params = BisectionParams {
            initial_load: 36,
            ..BisectionParams::default()
        };
        let a = estimate_p90::<f64>(&cell, &params, &[11, 12, 13]).unwrap();
        let b = estimate_p90::<f64>(&cell, &params, &[11, 12, 13]).unwrap();
        assert_eq!(a, b);
        assert!(a.runs.iter().all(|&p| (1..=80).contains(&p)), "runs {:?}", a.runs);
    }
}
