//! Sparse binary patterns over modular and non-modular unit layouts.
//!
//! A pattern is stored as the sorted list of its active unit indices.
//! Modular patterns have exactly one active unit (the winner) in each
//! hypercolumn; non-modular patterns have exactly `K` active units out of
//! `N`. Distortion and correlated generation both preserve these counts, so
//! every pattern produced here is a valid network state.

use std::fmt;
use std::io::{BufRead, Write};

use rand::seq::index::sample;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};

/// Unit layout shared by a network and the patterns it stores.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Architecture {
    /// `hypercolumns` blocks of `module_size` units each; a valid pattern
    /// activates exactly one unit per block.
    Modular {
        hypercolumns: usize,
        module_size: usize,
    },
    /// Flat layout of `units` units with exactly `active` of them set.
    NonModular { units: usize, active: usize },
}

impl Architecture {
    pub fn modular(hypercolumns: usize, module_size: usize) -> Result<Self> {
        if hypercolumns == 0 || module_size == 0 {
            return Err(Error::invalid(
                "architecture",
                format!("modular layout needs H >= 1 and M >= 1, got {hypercolumns}x{module_size}"),
            ));
        }
        Ok(Architecture::Modular {
            hypercolumns,
            module_size,
        })
    }

    pub fn non_modular(units: usize, active: usize) -> Result<Self> {
        if units == 0 || active == 0 || active > units {
            return Err(Error::invalid(
                "architecture",
                format!("non-modular layout needs 1 <= K <= N, got K={active}, N={units}"),
            ));
        }
        Ok(Architecture::NonModular { units, active })
    }

    /// Total unit count N.
    pub fn units(&self) -> usize {
        match *self {
            Architecture::Modular {
                hypercolumns,
                module_size,
            } => hypercolumns * module_size,
            Architecture::NonModular { units, .. } => units,
        }
    }

    /// Active units per pattern: H for modular, K for non-modular.
    pub fn active_count(&self) -> usize {
        match *self {
            Architecture::Modular { hypercolumns, .. } => hypercolumns,
            Architecture::NonModular { active, .. } => active,
        }
    }

    /// Design activity level `a`: the probability that a given unit is
    /// active in a uniformly drawn pattern.
    pub fn density(&self) -> f64 {
        self.active_count() as f64 / self.units() as f64
    }

    /// Incoming connections per unit after masking: N-M for modular
    /// (no connections within a hypercolumn), N-1 for non-modular
    /// (no autapse).
    pub fn fan_in(&self) -> usize {
        match *self {
            Architecture::Modular { module_size, .. } => self.units() - module_size,
            Architecture::NonModular { units, .. } => units - 1,
        }
    }

    pub fn is_modular(&self) -> bool {
        matches!(self, Architecture::Modular { .. })
    }

    /// Hypercolumn index of a unit; unit index divided by M. Non-modular
    /// layouts are treated as one block per unit.
    pub fn block_of(&self, unit: usize) -> usize {
        match *self {
            Architecture::Modular { module_size, .. } => unit / module_size,
            Architecture::NonModular { .. } => unit,
        }
    }

    /// Whether a synapse i -> j exists: autapses are masked in both
    /// layouts, and modular layouts mask all pairs within a hypercolumn.
    pub fn connected(&self, i: usize, j: usize) -> bool {
        match *self {
            Architecture::Modular { module_size, .. } => i / module_size != j / module_size,
            Architecture::NonModular { .. } => i != j,
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Architecture::Modular { .. } => "modular",
            Architecture::NonModular { .. } => "nonmodular",
        }
    }
}

impl fmt::Display for Architecture {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Architecture::Modular {
                hypercolumns,
                module_size,
            } => write!(f, "modular {hypercolumns}x{module_size}"),
            Architecture::NonModular { units, active } => {
                write!(f, "nonmodular {units} units, {active} active")
            }
        }
    }
}

/// A sparse binary pattern: the sorted global indices of its active units.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pattern {
    arch: Architecture,
    units: Vec<u32>,
}

impl Pattern {
    /// Builds a pattern from active unit indices, validating the activity
    /// structure required by `arch`. Indices may arrive unsorted.
    pub fn new(arch: Architecture, mut units: Vec<u32>) -> Result<Self> {
        units.sort_unstable();
        let n = arch.units() as u32;
        if units.iter().any(|&u| u >= n) {
            return Err(Error::invalid("pattern", "unit index out of range"));
        }
        if units.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::invalid("pattern", "duplicate unit index"));
        }
        if units.len() != arch.active_count() {
            return Err(Error::invalid(
                "pattern",
                format!(
                    "expected {} active units, got {}",
                    arch.active_count(),
                    units.len()
                ),
            ));
        }
        if let Architecture::Modular { module_size, .. } = arch {
            let m = module_size as u32;
            if units.iter().enumerate().any(|(b, &u)| u / m != b as u32) {
                return Err(Error::invalid("pattern", "not exactly one winner per hypercolumn"));
            }
        }
        Ok(Pattern { arch, units })
    }

    pub(crate) fn from_sorted(arch: Architecture, units: Vec<u32>) -> Self {
        debug_assert!(units.windows(2).all(|w| w[0] < w[1]));
        debug_assert_eq!(units.len(), arch.active_count());
        Pattern { arch, units }
    }

    pub fn arch(&self) -> Architecture {
        self.arch
    }

    /// Sorted active unit indices.
    pub fn active(&self) -> &[u32] {
        &self.units
    }

    pub fn is_active(&self, unit: u32) -> bool {
        self.units.binary_search(&unit).is_ok()
    }

    /// Local winner index of each hypercolumn; modular patterns only.
    pub fn winners(&self) -> Vec<u32> {
        match self.arch {
            Architecture::Modular { module_size, .. } => {
                self.units.iter().map(|&u| u % module_size as u32).collect()
            }
            Architecture::NonModular { .. } => panic!("winners() on a non-modular pattern"),
        }
    }

    /// Number of positions where both patterns agree: shared winners for
    /// modular patterns, shared active units for non-modular ones.
    pub fn overlap(&self, other: &Pattern) -> usize {
        debug_assert_eq!(self.arch, other.arch);
        if self.arch.is_modular() {
            self.units
                .iter()
                .zip(&other.units)
                .filter(|(a, b)| a == b)
                .count()
        } else {
            let mut shared = 0;
            let mut rest = other.units.as_slice();
            for &u in &self.units {
                match rest.binary_search(&u) {
                    Ok(pos) => {
                        shared += 1;
                        rest = &rest[pos + 1..];
                    }
                    Err(pos) => rest = &rest[pos..],
                }
            }
            shared
        }
    }

    /// Dense 0/1 view, mostly for tests and debugging.
    pub fn to_dense(&self) -> Vec<bool> {
        let mut dense = vec![false; self.arch.units()];
        for &u in &self.units {
            dense[u as usize] = true;
        }
        dense
    }
}

/// Draws a uniformly random valid pattern.
pub fn gen_random<R: Rng + ?Sized>(arch: Architecture, rng: &mut R) -> Pattern {
    match arch {
        Architecture::Modular {
            hypercolumns,
            module_size,
        } => {
            let m = module_size as u32;
            let units = (0..hypercolumns as u32)
                .map(|b| b * m + rng.gen_range(0..m))
                .collect();
            Pattern::from_sorted(arch, units)
        }
        Architecture::NonModular { units, active } => {
            let mut chosen: Vec<u32> = sample(rng, units, active).into_iter().map(|u| u as u32).collect();
            chosen.sort_unstable();
            Pattern::from_sorted(arch, chosen)
        }
    }
}

pub fn gen_random_set<R: Rng + ?Sized>(arch: Architecture, count: usize, rng: &mut R) -> Vec<Pattern> {
    (0..count).map(|_| gen_random(arch, rng)).collect()
}

/// Draws `count` patterns correlated with a shared random base pattern.
///
/// Each active slot copies the base with probability `f_corr` and is
/// redrawn uniformly otherwise (a redraw may reproduce the base choice).
/// `f_corr = 0` gives independent patterns, `f_corr = 1` gives `count`
/// copies of the base. Returns the base along with the set.
pub fn gen_correlated_set<R: Rng + ?Sized>(
    arch: Architecture,
    f_corr: f64,
    count: usize,
    rng: &mut R,
) -> Result<(Pattern, Vec<Pattern>)> {
    if !(0.0..=1.0).contains(&f_corr) {
        return Err(Error::invalid("f_corr", format!("must be in [0, 1], got {f_corr}")));
    }
    let base = gen_random(arch, rng);
    let set = (0..count)
        .map(|_| correlated_with(&base, f_corr, rng))
        .collect();
    Ok((base, set))
}

fn correlated_with<R: Rng + ?Sized>(base: &Pattern, f_corr: f64, rng: &mut R) -> Pattern {
    match base.arch {
        Architecture::Modular {
            hypercolumns,
            module_size,
        } => {
            let m = module_size as u32;
            let units = (0..hypercolumns)
                .map(|b| {
                    if rng.gen_bool(f_corr) {
                        base.units[b]
                    } else {
                        b as u32 * m + rng.gen_range(0..m)
                    }
                })
                .collect();
            Pattern::from_sorted(base.arch, units)
        }
        Architecture::NonModular { units: n, .. } => {
            let mut chosen: Vec<u32> = base
                .units
                .iter()
                .copied()
                .filter(|_| rng.gen_bool(f_corr))
                .collect();
            let missing = base.units.len() - chosen.len();
            draw_fresh(&mut chosen, missing, n, rng);
            chosen.sort_unstable();
            Pattern::from_sorted(base.arch, chosen)
        }
    }
}

/// Appends `count` distinct units drawn uniformly from those not already in
/// `chosen`. Rejection sampling; `chosen` stays small relative to `n` in
/// every supported configuration.
fn draw_fresh<R: Rng + ?Sized>(chosen: &mut Vec<u32>, count: usize, n: usize, rng: &mut R) {
    for _ in 0..count {
        loop {
            let u = rng.gen_range(0..n as u32);
            if !chosen.contains(&u) {
                chosen.push(u);
                break;
            }
        }
    }
}

/// Number of positions to resample for a noise level: the integer part of
/// `noise * slots` plus a Bernoulli draw on the fractional remainder, so the
/// expected count is exactly `noise * slots`.
fn distortion_count<R: Rng + ?Sized>(noise: f64, slots: usize, rng: &mut R) -> usize {
    let target = noise * slots as f64;
    let whole = target.floor();
    let frac = target - whole;
    whole as usize + usize::from(frac > 0.0 && rng.gen_bool(frac))
}

/// Produces a noisy copy of `pattern`.
///
/// `noise` is the fraction of active slots to resample: winners of the
/// selected hypercolumns are redrawn uniformly over their column (so a
/// selected column keeps its winner with probability 1/M), and in the
/// non-modular case the selected active units are dropped and replaced by
/// uniform draws from the currently inactive units. Fractional counts are
/// rounded stochastically, keeping the expected distortion exact.
pub fn distort<R: Rng + ?Sized>(pattern: &Pattern, noise: f64, rng: &mut R) -> Result<Pattern> {
    if !(0.0..=1.0).contains(&noise) {
        return Err(Error::invalid("noise", format!("must be in [0, 1], got {noise}")));
    }
    let slots = pattern.arch.active_count();
    let r = distortion_count(noise, slots, rng);
    if r == 0 {
        return Ok(pattern.clone());
    }
    let mut units = pattern.units.clone();
    match pattern.arch {
        Architecture::Modular { module_size, .. } => {
            let m = module_size as u32;
            for b in sample(rng, slots, r) {
                units[b] = b as u32 * m + rng.gen_range(0..m);
            }
            Ok(Pattern::from_sorted(pattern.arch, units))
        }
        Architecture::NonModular { units: n, .. } => {
            let drop = sample(rng, slots, r);
            let mut kept: Vec<u32> = Vec::with_capacity(slots);
            let mut dropped = vec![false; slots];
            for i in drop {
                dropped[i] = true;
            }
            for (i, &u) in units.iter().enumerate() {
                if !dropped[i] {
                    kept.push(u);
                }
            }
            draw_fresh(&mut kept, r, n, rng);
            kept.sort_unstable();
            Ok(Pattern::from_sorted(pattern.arch, kept))
        }
    }
}

/// A set of prototype patterns and the recipe for sampling noisy instances
/// of them.
#[derive(Debug, Clone)]
pub struct PrototypeSet {
    prototypes: Vec<Pattern>,
    instances: usize,
    instance_noise: f64,
}

impl PrototypeSet {
    pub fn new(prototypes: Vec<Pattern>, instances: usize, instance_noise: f64) -> Result<Self> {
        if prototypes.is_empty() {
            return Err(Error::invalid("prototypes", "need at least one prototype"));
        }
        let arch = prototypes[0].arch;
        if prototypes.iter().any(|p| p.arch != arch) {
            return Err(Error::ArchMismatch {
                expected: arch.to_string(),
                found: "mixed architectures in prototype set".into(),
            });
        }
        if instances == 0 {
            return Err(Error::invalid("instances", "need at least one instance per prototype"));
        }
        if !(0.0..=1.0).contains(&instance_noise) {
            return Err(Error::invalid(
                "instance_noise",
                format!("must be in [0, 1], got {instance_noise}"),
            ));
        }
        Ok(PrototypeSet {
            prototypes,
            instances,
            instance_noise,
        })
    }

    pub fn random<R: Rng + ?Sized>(
        arch: Architecture,
        count: usize,
        instances: usize,
        instance_noise: f64,
        rng: &mut R,
    ) -> Result<Self> {
        PrototypeSet::new(gen_random_set(arch, count, rng), instances, instance_noise)
    }

    pub fn prototypes(&self) -> &[Pattern] {
        &self.prototypes
    }

    pub fn into_prototypes(self) -> Vec<Pattern> {
        self.prototypes
    }

    pub fn instances_per_prototype(&self) -> usize {
        self.instances
    }

    pub fn instance_noise(&self) -> f64 {
        self.instance_noise
    }

    /// Samples the full training set: `instances` independent distortions of
    /// each prototype, shuffled so prototype identity is not recoverable
    /// from presentation order. Prototypes themselves are not included.
    pub fn training_set<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<Pattern> {
        let mut set = Vec::with_capacity(self.prototypes.len() * self.instances);
        for proto in &self.prototypes {
            for _ in 0..self.instances {
                set.push(distort(proto, self.instance_noise, rng).expect("validated noise"));
            }
        }
        set.shuffle(rng);
        set
    }
}

/// Writes patterns as text: a header line `kind dim1 dim2`, then one line
/// per pattern. Modular lines hold the local winner of each hypercolumn,
/// non-modular lines the sorted active unit indices.
pub fn write_patterns<W: Write>(out: &mut W, arch: Architecture, patterns: &[Pattern]) -> Result<()> {
    match arch {
        Architecture::Modular {
            hypercolumns,
            module_size,
        } => writeln!(out, "modular {hypercolumns} {module_size}")?,
        Architecture::NonModular { units, active } => writeln!(out, "nonmodular {units} {active}")?,
    }
    let mut line = String::new();
    for p in patterns {
        if p.arch != arch {
            return Err(Error::ArchMismatch {
                expected: arch.to_string(),
                found: p.arch.to_string(),
            });
        }
        line.clear();
        let values: Vec<u32> = if arch.is_modular() {
            p.winners()
        } else {
            p.units.clone()
        };
        for (i, v) in values.iter().enumerate() {
            if i > 0 {
                line.push(' ');
            }
            line.push_str(&v.to_string());
        }
        writeln!(out, "{line}")?;
    }
    Ok(())
}

/// Reads patterns written by [`write_patterns`].
pub fn read_patterns<R: BufRead>(input: &mut R) -> Result<(Architecture, Vec<Pattern>)> {
    let mut lines = Vec::new();
    for (idx, line) in input.lines().enumerate() {
        let line = line?;
        if !line.trim().is_empty() {
            lines.push((idx + 1, line));
        }
    }
    let (header_no, header) = lines
        .first()
        .ok_or_else(|| Error::parse(1, "missing header"))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    let arch = match fields.as_slice() {
        ["modular", h, m] => Architecture::modular(
            parse_usize(h, *header_no)?,
            parse_usize(m, *header_no)?,
        )?,
        ["nonmodular", n, k] => Architecture::non_modular(
            parse_usize(n, *header_no)?,
            parse_usize(k, *header_no)?,
        )?,
        _ => return Err(Error::parse(*header_no, format!("bad header: {header}"))),
    };
    let mut patterns = Vec::with_capacity(lines.len() - 1);
    for (line_no, line) in &lines[1..] {
        let mut values = Vec::with_capacity(arch.active_count());
        for tok in line.split_whitespace() {
            values.push(
                tok.parse::<u32>()
                    .map_err(|e| Error::parse(*line_no, format!("bad index {tok}: {e}")))?,
            );
        }
        let units = if let Architecture::Modular { module_size, .. } = arch {
            if values.len() != arch.active_count() {
                return Err(Error::parse(*line_no, "wrong winner count"));
            }
            values
                .iter()
                .enumerate()
                .map(|(b, &w)| b as u32 * module_size as u32 + w)
                .collect()
        } else {
            values
        };
        patterns.push(Pattern::new(arch, units).map_err(|e| Error::parse(*line_no, e.to_string()))?);
    }
    Ok((arch, patterns))
}

fn parse_usize(tok: &str, line: usize) -> Result<usize> {
    tok.parse::<usize>()
        .map_err(|e| Error::parse(line, format!("bad integer {tok}: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    fn modular(h: usize, m: usize) -> Architecture {
        Architecture::modular(h, m).unwrap()
    }

    fn non_modular(n: usize, k: usize) -> Architecture {
        Architecture::non_modular(n, k).unwrap()
    }

    #[test]
    fn architecture_accessors() {
        let a = modular(16, 16);
        assert_eq!(a.units(), 256);
        assert_eq!(a.active_count(), 16);
        assert_eq!(a.fan_in(), 240);
        assert_eq!(a.density(), 1.0 / 16.0);
        assert!(a.connected(0, 16));
        assert!(!a.connected(0, 15));
        assert!(!a.connected(3, 3));

        let b = non_modular(100, 10);
        assert_eq!(b.units(), 100);
        assert_eq!(b.active_count(), 10);
        assert_eq!(b.fan_in(), 99);
        assert_eq!(b.density(), 0.1);
        assert!(b.connected(0, 99));
        assert!(!b.connected(42, 42));
    }

    #[test]
    fn trivial_architectures() {
        let a = modular(1, 1);
        let p = gen_random(a, &mut rng(0));
        assert_eq!(p.active(), &[0]);

        let b = non_modular(1, 1);
        let p = gen_random(b, &mut rng(0));
        assert_eq!(p.active(), &[0]);
    }

    #[test]
    fn invalid_architectures_rejected() {
        assert!(Architecture::modular(0, 4).is_err());
        assert!(Architecture::modular(4, 0).is_err());
        assert!(Architecture::non_modular(10, 0).is_err());
        assert!(Architecture::non_modular(10, 11).is_err());
    }

    #[test]
    fn pattern_validation() {
        let a = modular(3, 4);
        assert!(Pattern::new(a, vec![0, 5, 9]).is_ok());
        assert!(Pattern::new(a, vec![0, 1, 9]).is_err()); // two winners in block 0
        assert!(Pattern::new(a, vec![0, 5]).is_err());
        assert!(Pattern::new(a, vec![0, 5, 12]).is_err());

        let b = non_modular(10, 3);
        assert!(Pattern::new(b, vec![7, 0, 3]).is_ok());
        assert!(Pattern::new(b, vec![0, 3, 3]).is_err());
        assert!(Pattern::new(b, vec![0, 3, 10]).is_err());
    }

    #[test]
    fn random_patterns_are_valid() {
        let mut r = rng(1);
        for _ in 0..200 {
            let p = gen_random(modular(8, 4), &mut r);
            assert!(Pattern::new(p.arch(), p.active().to_vec()).is_ok());
            let q = gen_random(non_modular(50, 7), &mut r);
            assert!(Pattern::new(q.arch(), q.active().to_vec()).is_ok());
        }
    }

    #[test]
    fn random_winners_are_uniform() {
        let a = modular(4, 8);
        let mut counts = [0u32; 8];
        let mut r = rng(2);
        let draws = 20_000;
        for _ in 0..draws {
            let p = gen_random(a, &mut r);
            for w in p.winners() {
                counts[w as usize] += 1;
            }
        }
        let expected = (draws * 4 / 8) as f64;
        for c in counts {
            assert!((c as f64 - expected).abs() < 0.05 * expected, "count {c} vs {expected}");
        }
    }

    #[test]
    fn distort_zero_noise_is_identity() {
        let mut r = rng(3);
        let p = gen_random(modular(16, 16), &mut r);
        assert_eq!(distort(&p, 0.0, &mut r).unwrap(), p);
        let q = gen_random(non_modular(100, 10), &mut r);
        assert_eq!(distort(&q, 0.0, &mut r).unwrap(), q);
    }

    #[test]
    fn distort_rejects_bad_noise() {
        let mut r = rng(4);
        let p = gen_random(modular(4, 4), &mut r);
        assert!(distort(&p, -0.1, &mut r).is_err());
        assert!(distort(&p, 1.5, &mut r).is_err());
    }

    #[test]
    fn distort_modular_expected_change_rate() {
        // Resampling r of H winners uniformly over M changes each selected
        // column with probability (M-1)/M, so the expected number of
        // disagreeing columns is noise * H * (M-1)/M = 1.5 here.
        let a = modular(16, 16);
        let mut r = rng(5);
        let p = gen_random(a, &mut r);
        let trials = 20_000;
        let mut changed = 0usize;
        for _ in 0..trials {
            let d = distort(&p, 0.1, &mut r).unwrap();
            changed += 16 - p.overlap(&d);
        }
        let mean = changed as f64 / trials as f64;
        assert!((mean - 1.5).abs() < 0.05, "mean changed columns {mean}");
    }

    #[test]
    fn distort_nonmodular_preserves_count_and_rate() {
        let a = non_modular(256, 16);
        let mut r = rng(6);
        let p = gen_random(a, &mut r);
        let trials = 20_000;
        let mut removed = 0usize;
        for _ in 0..trials {
            let d = distort(&p, 0.25, &mut r).unwrap();
            assert_eq!(d.active().len(), 16);
            removed += 16 - p.overlap(&d);
        }
        // 4 of 16 active units are dropped; a replacement can reuse a
        // dropped unit with probability 4/240 per draw, so the expected
        // number of lost units is slightly under 4.
        let mean = removed as f64 / trials as f64;
        assert!((mean - 3.93).abs() < 0.05, "mean removed units {mean}");
    }

    #[test]
    fn distortion_count_rounds_stochastically() {
        let mut r = rng(7);
        let trials = 40_000;
        let mut total = 0usize;
        for _ in 0..trials {
            let c = distortion_count(0.125, 20, &mut r);
            assert!(c == 2 || c == 3);
            total += c;
        }
        let mean = total as f64 / trials as f64;
        assert!((mean - 2.5).abs() < 0.02, "mean count {mean}");
    }

    #[test]
    fn correlated_extremes() {
        let a = modular(10, 10);
        let mut r = rng(8);
        let (base, set) = gen_correlated_set(a, 1.0, 20, &mut r).unwrap();
        assert!(set.iter().all(|p| *p == base));

        let (_, set) = gen_correlated_set(a, 0.0, 2_000, &mut r).unwrap();
        let matches: usize = set
            .windows(2)
            .map(|w| w[0].overlap(&w[1]))
            .sum();
        let rate = matches as f64 / (1_999.0 * 10.0);
        assert!((rate - 0.1).abs() < 0.01, "pair match rate {rate}");
    }

    #[test]
    fn correlated_pairwise_match_rate() {
        // Two patterns agree on a slot when both copied the base or at
        // least one redraw landed on it: f^2 + (1 - f^2)/M.
        let a = modular(20, 20);
        let f = 0.6;
        let expected = f * f + (1.0 - f * f) / 20.0;
        let mut r = rng(9);
        let (_, set) = gen_correlated_set(a, f, 2_000, &mut r).unwrap();
        let matches: usize = set.windows(2).map(|w| w[0].overlap(&w[1])).sum();
        let rate = matches as f64 / (1_999.0 * 20.0);
        assert!((rate - expected).abs() < 0.01, "pair match rate {rate} vs {expected}");
    }

    #[test]
    fn correlated_nonmodular_base_match() {
        let a = non_modular(400, 20);
        let f = 0.5;
        let mut r = rng(10);
        let (base, set) = gen_correlated_set(a, f, 2_000, &mut r).unwrap();
        let matches: usize = set.iter().map(|p| base.overlap(p)).sum();
        let rate = matches as f64 / (2_000.0 * 20.0);
        // Kept slots always match; redrawn slots match when the fresh draw
        // hits a base unit, just under K/N each.
        let expected = f + (1.0 - f) * (20.0 - f * 20.0) / 380.0;
        assert!((rate - expected).abs() < 0.015, "base match rate {rate} vs {expected}");
    }

    #[test]
    fn prototype_training_set_counts_and_noise() {
        let a = modular(16, 16);
        let mut r = rng(11);
        let ps = PrototypeSet::random(a, 5, 40, 0.2, &mut r).unwrap();
        let set = ps.training_set(&mut r);
        assert_eq!(set.len(), 200);
        // Each instance should sit near its own prototype: expected
        // disagreement 0.2 * 16 * 15/16 = 3 columns.
        let mut total_dist = 0usize;
        for inst in &set {
            let best = ps
                .prototypes()
                .iter()
                .map(|p| 16 - p.overlap(inst))
                .min()
                .unwrap();
            total_dist += best;
        }
        let mean = total_dist as f64 / 200.0;
        assert!((mean - 3.0).abs() < 0.4, "mean distance {mean}");
    }

    #[test]
    fn prototype_training_set_is_shuffled() {
        let a = modular(16, 16);
        let mut r = rng(12);
        let ps = PrototypeSet::random(a, 5, 40, 0.1, &mut r).unwrap();
        let set = ps.training_set(&mut r);
        let owner = |inst: &Pattern| {
            ps.prototypes()
                .iter()
                .enumerate()
                .max_by_key(|(_, p)| p.overlap(inst))
                .unwrap()
                .0
        };
        let first_owner = owner(&set[0]);
        assert!(
            set[..40].iter().any(|p| owner(p) != first_owner),
            "first block of instances all share a prototype; set not shuffled"
        );
    }

    #[test]
    fn serialization_round_trip() {
        let mut r = rng(13);
        for arch in [modular(6, 5), non_modular(40, 6)] {
            let patterns = gen_random_set(arch, 25, &mut r);
            let mut buf = Vec::new();
            write_patterns(&mut buf, arch, &patterns).unwrap();
            let (arch2, read) = read_patterns(&mut buf.as_slice()).unwrap();
            assert_eq!(arch, arch2);
            assert_eq!(patterns, read);
        }
    }

    #[test]
    fn serialization_rejects_corrupt_input() {
        let text = "modular 3 4\n0 1\n";
        assert!(read_patterns(&mut text.as_bytes()).is_err());
        let text = "modular 3 4\n0 1 4\n";
        assert!(read_patterns(&mut text.as_bytes()).is_err());
        let text = "sparse 3 4\n";
        assert!(read_patterns(&mut text.as_bytes()).is_err());
    }

    #[test]
    fn overlap_counts_agreeing_positions() {
        let a = modular(3, 4);
        let p = Pattern::new(a, vec![0, 5, 9]).unwrap();
        let q = Pattern::new(a, vec![0, 6, 9]).unwrap();
        assert_eq!(p.overlap(&q), 2);

        let b = non_modular(10, 4);
        let p = Pattern::new(b, vec![0, 2, 5, 7]).unwrap();
        let q = Pattern::new(b, vec![2, 3, 7, 9]).unwrap();
        assert_eq!(p.overlap(&q), 2);
    }
}
