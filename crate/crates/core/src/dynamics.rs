//! Synchronous recall dynamics with winner-take-all activation.
//!
//! A recall step computes every unit's field `h_j = b_j + sum_i x_i w_ij`
//! from the current state, then activates the strongest units: the winner
//! of each hypercolumn in modular networks, the top `K` units overall in
//! non-modular ones. Iteration stops at a fixed point, on a period-two
//! cycle, or at the step cap. Field ties are broken uniformly at random,
//! which matters for rules with discrete weights.

use rand::seq::index::sample;
use rand::Rng;

use crate::error::{Error, Result};
use crate::patterns::{Architecture, Pattern};
use crate::plasticity::WeightSet;
use crate::scalar::Scalar;

/// Step cap used by the benchmark harness.
pub const DEFAULT_MAX_STEPS: usize = 15;

/// How a recall run ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    /// The state reproduced itself.
    FixedPoint,
    /// The state reproduced the state two steps back.
    TwoCycle,
    /// The step cap elapsed without a fixed point or two-cycle.
    IterationCap,
}

/// Result of iterated recall from a cue.
#[derive(Debug, Clone)]
pub struct RecallResult {
    pub final_state: Pattern,
    pub termination: Termination,
    /// Synchronous update steps performed.
    pub steps: usize,
    /// Visited states from cue to final state; populated by
    /// [`recall_traced`] only.
    pub trajectory: Option<Vec<Pattern>>,
}

/// Computes all unit fields for a network state.
pub fn field<F: Scalar>(ws: &WeightSet<F>, state: &Pattern) -> Result<Vec<F>> {
    check_arch(ws, state)?;
    let mut h = ws.bias().to_vec();
    add_active_rows(ws, state.active(), &mut h);
    Ok(h)
}

/// Applies the architecture's activation to a field vector: per-column
/// winner-take-all or global top-K. Ties are resolved uniformly.
pub fn activate<F: Scalar, R: Rng + ?Sized>(
    arch: Architecture,
    field_values: &[F],
    rng: &mut R,
) -> Result<Pattern> {
    if field_values.len() != arch.units() {
        return Err(Error::invalid(
            "field",
            format!("expected {} values, got {}", arch.units(), field_values.len()),
        ));
    }
    let mut out = Vec::with_capacity(arch.active_count());
    match arch {
        Architecture::Modular {
            hypercolumns,
            module_size,
        } => winners_modular(field_values, hypercolumns, module_size, &mut out, rng),
        Architecture::NonModular { active, .. } => {
            let mut scratch = Vec::new();
            winners_kwta(field_values, active, &mut out, &mut scratch, rng);
        }
    }
    Ok(Pattern::from_sorted(arch, out))
}

/// Iterates recall from `cue` for at most `max_steps` synchronous updates.
pub fn recall<F: Scalar, R: Rng + ?Sized>(
    ws: &WeightSet<F>,
    cue: &Pattern,
    max_steps: usize,
    rng: &mut R,
) -> Result<RecallResult> {
    run_recall(ws, cue, max_steps, false, rng)
}

/// Like [`recall`], but records every visited state.
pub fn recall_traced<F: Scalar, R: Rng + ?Sized>(
    ws: &WeightSet<F>,
    cue: &Pattern,
    max_steps: usize,
    rng: &mut R,
) -> Result<RecallResult> {
    run_recall(ws, cue, max_steps, true, rng)
}

fn check_arch<F: Scalar>(ws: &WeightSet<F>, state: &Pattern) -> Result<()> {
    if ws.arch() != state.arch() {
        return Err(Error::ArchMismatch {
            expected: ws.arch().to_string(),
            found: state.arch().to_string(),
        });
    }
    Ok(())
}

fn add_active_rows<F: Scalar>(ws: &WeightSet<F>, active: &[u32], h: &mut [F]) {
    for &i in active {
        for (hj, wj) in h.iter_mut().zip(ws.row(i as usize)) {
            *hj += *wj;
        }
    }
}

/// Per-hypercolumn argmax. A tied column consumes exactly one extra random
/// draw to pick uniformly among its maxima.
fn winners_modular<F: Scalar, R: Rng + ?Sized>(
    h: &[F],
    hypercolumns: usize,
    module_size: usize,
    out: &mut Vec<u32>,
    rng: &mut R,
) {
    out.clear();
    for b in 0..hypercolumns {
        let seg = &h[b * module_size..(b + 1) * module_size];
        let mut best = seg[0];
        let mut best_idx = 0usize;
        let mut ties = 1usize;
        for (idx, &v) in seg.iter().enumerate().skip(1) {
            if v > best {
                best = v;
                best_idx = idx;
                ties = 1;
            } else if v == best {
                ties += 1;
            }
        }
        if ties > 1 {
            let mut pick = rng.gen_range(0..ties);
            for (idx, &v) in seg.iter().enumerate() {
                if v == best {
                    if pick == 0 {
                        best_idx = idx;
                        break;
                    }
                    pick -= 1;
                }
            }
        }
        out.push((b * module_size + best_idx) as u32);
    }
}

/// Global top-K selection. Units strictly above the K-th field value always
/// win; the remaining slots are filled uniformly from the units tied at the
/// boundary value.
fn winners_kwta<F: Scalar, R: Rng + ?Sized>(
    h: &[F],
    k: usize,
    out: &mut Vec<u32>,
    scratch: &mut Vec<(F, u32)>,
    rng: &mut R,
) {
    out.clear();
    scratch.clear();
    scratch.extend(h.iter().enumerate().map(|(i, &v)| (v, i as u32)));
    scratch.select_nth_unstable_by(k - 1, |a, b| b.0.partial_cmp(&a.0).expect("finite fields"));
    let boundary = scratch[k - 1].0;
    let mut tied = Vec::new();
    for (i, &v) in h.iter().enumerate() {
        if v > boundary {
            out.push(i as u32);
        } else if v == boundary {
            tied.push(i as u32);
        }
    }
    let need = k - out.len();
    if need == tied.len() {
        out.extend_from_slice(&tied);
    } else {
        for idx in sample(rng, tied.len(), need) {
            out.push(tied[idx]);
        }
    }
    out.sort_unstable();
}

fn run_recall<F: Scalar, R: Rng + ?Sized>(
    ws: &WeightSet<F>,
    cue: &Pattern,
    max_steps: usize,
    record: bool,
    rng: &mut R,
) -> Result<RecallResult> {
    check_arch(ws, cue)?;
    let arch = ws.arch();
    let n = arch.units();
    let k = arch.active_count();

    let mut h = vec![F::zero(); n];
    let mut state: Vec<u32> = cue.active().to_vec();
    let mut prev: Vec<u32> = Vec::with_capacity(k);
    let mut have_prev = false;
    let mut next: Vec<u32> = Vec::with_capacity(k);
    let mut scratch: Vec<(F, u32)> = Vec::new();
    let mut trajectory = record.then(|| vec![cue.clone()]);

    for step in 1..=max_steps {
        h.copy_from_slice(ws.bias());
        for &i in &state {
            for (hj, wj) in h.iter_mut().zip(ws.row(i as usize)) {
                *hj += *wj;
            }
        }
        match arch {
            Architecture::Modular {
                hypercolumns,
                module_size,
            } => winners_modular(&h, hypercolumns, module_size, &mut next, rng),
            Architecture::NonModular { .. } => winners_kwta(&h, k, &mut next, &mut scratch, rng),
        }
        if let Some(t) = trajectory.as_mut() {
            t.push(Pattern::from_sorted(arch, next.clone()));
        }
        if next == state {
            return Ok(RecallResult {
                final_state: Pattern::from_sorted(arch, next),
                termination: Termination::FixedPoint,
                steps: step,
                trajectory,
            });
        }
        if have_prev && next == prev {
            return Ok(RecallResult {
                final_state: Pattern::from_sorted(arch, next),
                termination: Termination::TwoCycle,
                steps: step,
                trajectory,
            });
        }
        std::mem::swap(&mut prev, &mut state);
        std::mem::swap(&mut state, &mut next);
        have_prev = true;
    }

    Ok(RecallResult {
        final_state: Pattern::from_sorted(arch, state),
        termination: Termination::IterationCap,
        steps: max_steps,
        trajectory,
    })
}
