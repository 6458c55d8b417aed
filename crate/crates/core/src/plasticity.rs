//! Synaptic state and the local learning rules that compile it into weights.
//!
//! Training is one-shot and purely accumulative: every pattern presentation
//! increments integer activation counters (total count `C`, per-unit counts
//! `C_i`, pairwise counts `C_ij`), and a learning rule turns the resulting
//! probability estimates `p_i = C_i/C`, `p_ij = C_ij/C` into a weight matrix
//! and per-unit biases. Because the counters are integers, training order
//! never affects the compiled network, bit for bit.
//!
//! All logarithms are natural. Probability-scale arguments of every `ln` are
//! clipped from below by [`epsilon`], which keeps weights finite when a
//! count is zero.

use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::patterns::{Architecture, Pattern};
use crate::scalar::Scalar;

/// Activation counters accumulated over a training set.
///
/// The pair matrix is kept fully symmetric with the diagonal mirroring the
/// unit counts, so `C_ij[i][i] == C_i[i]` at all times.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CounterState {
    arch: Architecture,
    count: u32,
    unit: Vec<u32>,
    pair: Vec<u32>,
}

impl CounterState {
    pub fn new(arch: Architecture) -> Self {
        let n = arch.units();
        CounterState {
            arch,
            count: 0,
            unit: vec![0; n],
            pair: vec![0; n * n],
        }
    }

    pub fn arch(&self) -> Architecture {
        self.arch
    }

    /// Number of patterns trained so far. Duplicate presentations count
    /// each time.
    pub fn count(&self) -> u32 {
        self.count
    }

    pub fn unit_count(&self, i: usize) -> u32 {
        self.unit[i]
    }

    pub fn pair_count(&self, i: usize, j: usize) -> u32 {
        self.pair[i * self.arch.units() + j]
    }

    /// Accumulates one pattern into the counters.
    pub fn train_one(&mut self, pattern: &Pattern) -> Result<()> {
        if pattern.arch() != self.arch {
            return Err(Error::ArchMismatch {
                expected: self.arch.to_string(),
                found: pattern.arch().to_string(),
            });
        }
        let n = self.arch.units();
        self.count += 1;
        let active = pattern.active();
        for (idx, &u) in active.iter().enumerate() {
            let u = u as usize;
            self.unit[u] += 1;
            self.pair[u * n + u] += 1;
            for &v in &active[idx + 1..] {
                let v = v as usize;
                self.pair[u * n + v] += 1;
                self.pair[v * n + u] += 1;
            }
        }
        Ok(())
    }

    pub fn train_all(&mut self, patterns: &[Pattern]) -> Result<()> {
        for p in patterns {
            self.train_one(p)?;
        }
        Ok(())
    }
}

/// Probability estimates derived from a [`CounterState`].
#[derive(Debug, Clone, PartialEq)]
pub struct PEstimates<F> {
    n: usize,
    count: u32,
    unit: Vec<F>,
    pair: Vec<F>,
}

impl<F: Scalar> PEstimates<F> {
    pub fn from_counters(counters: &CounterState) -> Result<Self> {
        if counters.count == 0 {
            return Err(Error::EmptyCounters);
        }
        let c = F::from_u32(counters.count).expect("count fits scalar");
        Ok(PEstimates {
            n: counters.arch.units(),
            count: counters.count,
            unit: counters.unit.iter().map(|&x| ratio::<F>(x, c)).collect(),
            pair: counters.pair.iter().map(|&x| ratio::<F>(x, c)).collect(),
        })
    }

    pub fn count(&self) -> u32 {
        self.count
    }

    pub fn unit_p(&self, i: usize) -> F {
        self.unit[i]
    }

    pub fn pair_p(&self, i: usize, j: usize) -> F {
        self.pair[i * self.n + j]
    }
}

#[inline]
fn ratio<F: Scalar>(num: u32, denom: F) -> F {
    F::from_u32(num).expect("count fits scalar") / denom
}

/// Assumed cue corruption rates for the Bayesian rule with an explicit
/// noise channel. `q01_given_s` is the probability that an inactive stored
/// unit appears active in the cue when the postsynaptic unit is in state
/// `s`; `q10_given_s` is the reverse flip.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelNoise {
    pub q01_given_0: f64,
    pub q01_given_1: f64,
    pub q10_given_0: f64,
    pub q10_given_1: f64,
}

impl ChannelNoise {
    /// Noise-free channel; the general rule collapses to the sparse
    /// Bayesian rule exactly.
    pub const NONE: ChannelNoise = ChannelNoise {
        q01_given_0: 0.0,
        q01_given_1: 0.0,
        q10_given_0: 0.0,
        q10_given_1: 0.0,
    };

    pub fn new(q01_given_0: f64, q01_given_1: f64, q10_given_0: f64, q10_given_1: f64) -> Result<Self> {
        for (name, q) in [
            ("q01_given_0", q01_given_0),
            ("q01_given_1", q01_given_1),
            ("q10_given_0", q10_given_0),
            ("q10_given_1", q10_given_1),
        ] {
            if !(0.0..=1.0).contains(&q) {
                return Err(Error::InvalidParam {
                    name: "channel noise",
                    message: format!("{name} must be in [0, 1], got {q}"),
                });
            }
        }
        Ok(ChannelNoise {
            q01_given_0,
            q01_given_1,
            q10_given_0,
            q10_given_1,
        })
    }

    pub fn is_none(&self) -> bool {
        self.q01_given_0 == 0.0
            && self.q01_given_1 == 0.0
            && self.q10_given_0 == 0.0
            && self.q10_given_1 == 0.0
    }
}

/// The local learning rules.
///
/// `Will` through `Cov` use raw probability estimates with no clipping;
/// `PrCov` clips only its presynaptic denominator; `Bcp`, `Boms`, and
/// `BomGeneral` clip every logarithm argument. `BomGeneral` extends the
/// sparse Bayesian rule with an explicit cue noise channel and reproduces
/// it exactly when the channel is noise-free.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Rule {
    /// Binary clipped Hebb: `w = 1` wherever a co-activation was ever seen.
    Will,
    /// Plain co-activation probability: `w = p_ij`.
    Hebb,
    /// Hopfield-style pre/post centering at the design density `a`:
    /// `w = p_ij - a (p_i + p_j) + a^2`.
    Hopf,
    /// Covariance: `w = p_ij - p_i p_j`.
    Cov,
    /// Presynaptically normalized covariance:
    /// `w_ij = (p_ij - p_i p_j) / max(p_i, eps)` with `i` presynaptic.
    PrCov,
    /// Bayesian confidence propagation:
    /// `w = ln(max(p_ij, eps) / max(p_i p_j, eps))`, bias `ln(max(p_j, eps))`.
    Bcp,
    /// Bayesian maximum-likelihood rule for sparse patterns; log odds-ratio
    /// of the full 2x2 co-activation table, with a matching bias.
    Boms,
    /// `Boms` generalized to a noisy cue channel.
    BomGeneral(ChannelNoise),
}

/// The seven named rules in the order used by benchmark reports.
pub const BENCH_RULES: [Rule; 7] = [
    Rule::Will,
    Rule::Hebb,
    Rule::Hopf,
    Rule::Cov,
    Rule::PrCov,
    Rule::Bcp,
    Rule::Boms,
];

impl Rule {
    /// Whether the compiled weight matrix is symmetric. `PrCov` normalizes
    /// by the presynaptic unit only, and the noisy-channel rule
    /// conditions its brackets on the postsynaptic side, so both are
    /// directional.
    pub fn is_symmetric(&self) -> bool {
        !matches!(self, Rule::PrCov | Rule::BomGeneral(_))
    }

    pub fn has_bias(&self) -> bool {
        matches!(self, Rule::Bcp | Rule::Boms | Rule::BomGeneral(_))
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rule::Will => write!(f, "will"),
            Rule::Hebb => write!(f, "hebb"),
            Rule::Hopf => write!(f, "hopf"),
            Rule::Cov => write!(f, "cov"),
            Rule::PrCov => write!(f, "prcov"),
            Rule::Bcp => write!(f, "bcp"),
            Rule::Boms => write!(f, "boms"),
            // Slash-separated so the name stays a single CSV field.
            Rule::BomGeneral(q) => write!(
                f,
                "bom:{}/{}/{}/{}",
                q.q01_given_0, q.q01_given_1, q.q10_given_0, q.q10_given_1
            ),
        }
    }
}

impl FromStr for Rule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        match lower.as_str() {
            "will" => Ok(Rule::Will),
            "hebb" => Ok(Rule::Hebb),
            "hopf" => Ok(Rule::Hopf),
            "cov" => Ok(Rule::Cov),
            "prcov" => Ok(Rule::PrCov),
            "bcp" => Ok(Rule::Bcp),
            "boms" => Ok(Rule::Boms),
            _ => {
                if let Some(args) = lower.strip_prefix("bom:") {
                    let qs: Vec<&str> = args.split('/').collect();
                    if qs.len() != 4 {
                        return Err(Error::invalid(
                            "rule",
                            format!("bom takes four slash-separated noise rates, got {s}"),
                        ));
                    }
                    let mut vals = [0.0; 4];
                    for (slot, tok) in vals.iter_mut().zip(&qs) {
                        *slot = tok.parse::<f64>().map_err(|e| {
                            Error::invalid("rule", format!("bad noise rate {tok}: {e}"))
                        })?;
                    }
                    Ok(Rule::BomGeneral(ChannelNoise::new(
                        vals[0], vals[1], vals[2], vals[3],
                    )?))
                } else {
                    Err(Error::invalid("rule", format!("unknown rule {s}")))
                }
            }
        }
    }
}

/// Probability floor used inside logarithms and the `PrCov` denominator:
/// `eps = -a ln(p_corr) / n` for design density `a`, fan-in `n`, and recall
/// target `p_corr`. Chosen so that `n` worst-case clipped terms cannot move
/// a field by more than the log-margin corresponding to the recall target.
pub fn epsilon(density: f64, fan_in: usize, p_corr: f64) -> Result<f64> {
    if !(density > 0.0 && density <= 1.0) {
        return Err(Error::invalid("density", format!("must be in (0, 1], got {density}")));
    }
    if fan_in == 0 {
        return Err(Error::invalid("fan_in", "must be at least 1".to_string()));
    }
    if !(p_corr > 0.0 && p_corr < 1.0) {
        return Err(Error::invalid("p_corr", format!("must be in (0, 1), got {p_corr}")));
    }
    Ok(-density * p_corr.ln() / fan_in as f64)
}

/// Number of independently trainable synapses: symmetric rules share each
/// unordered pair, directional rules train both directions.
pub fn trainable_weight_count(arch: Architecture, rule: Rule) -> usize {
    let full = arch.units() * arch.fan_in();
    if rule.is_symmetric() {
        full / 2
    } else {
        full
    }
}

/// A compiled network: dense weight matrix plus per-unit biases.
///
/// Weights are stored row-major with the row index presynaptic, so
/// `weights[i * n + j]` is the synapse from unit `i` to unit `j`. Masked
/// entries (autapses, and intra-hypercolumn pairs in modular networks) are
/// exactly zero.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightSet<F> {
    rule: Rule,
    arch: Architecture,
    epsilon: F,
    p_corr: f64,
    bias: Vec<F>,
    weights: Vec<F>,
}

impl<F: Scalar> WeightSet<F> {
    /// Assembles a weight set from raw storage, validating dimensions,
    /// finiteness, and the connectivity mask.
    pub fn from_parts(
        rule: Rule,
        arch: Architecture,
        epsilon: F,
        p_corr: f64,
        bias: Vec<F>,
        weights: Vec<F>,
    ) -> Result<Self> {
        let n = arch.units();
        if bias.len() != n || weights.len() != n * n {
            return Err(Error::invalid(
                "weights",
                format!("expected {n} biases and {} weights, got {} and {}", n * n, bias.len(), weights.len()),
            ));
        }
        if bias.iter().chain(&weights).any(|v| !v.is_finite()) {
            return Err(Error::invalid("weights", "non-finite value".to_string()));
        }
        for i in 0..n {
            for j in 0..n {
                if !arch.connected(i, j) && weights[i * n + j] != F::zero() {
                    return Err(Error::invalid(
                        "weights",
                        format!("masked synapse {i} -> {j} must be zero"),
                    ));
                }
            }
        }
        Ok(WeightSet {
            rule,
            arch,
            epsilon,
            p_corr,
            bias,
            weights,
        })
    }

    pub fn rule(&self) -> Rule {
        self.rule
    }

    pub fn arch(&self) -> Architecture {
        self.arch
    }

    pub fn epsilon(&self) -> F {
        self.epsilon
    }

    pub fn p_corr(&self) -> f64 {
        self.p_corr
    }

    pub fn bias(&self) -> &[F] {
        &self.bias
    }

    pub fn weights(&self) -> &[F] {
        &self.weights
    }

    pub fn weight(&self, i: usize, j: usize) -> F {
        self.weights[i * self.arch.units() + j]
    }

    /// Outgoing weights of presynaptic unit `i`.
    pub fn row(&self, i: usize) -> &[F] {
        let n = self.arch.units();
        &self.weights[i * n..(i + 1) * n]
    }

    pub fn trainable_weights(&self) -> usize {
        trainable_weight_count(self.arch, self.rule)
    }

    /// Multiplies all weights and biases by a positive factor. Recall is
    /// invariant under this because winner selection only compares fields.
    pub fn scale(&mut self, factor: F) -> Result<()> {
        if !(factor.is_finite() && factor > F::zero()) {
            return Err(Error::invalid("factor", format!("must be positive and finite, got {factor}")));
        }
        for w in &mut self.weights {
            *w *= factor;
        }
        for b in &mut self.bias {
            *b *= factor;
        }
        Ok(())
    }

    /// Writes the network as text: a versioned header followed by the bias
    /// vector and the row-major weight matrix. `Display`-formatted floats
    /// round-trip exactly.
    pub fn write_text<W: Write>(&self, out: &mut W) -> Result<()> {
        writeln!(out, "hebbench-weights 1")?;
        writeln!(out, "rule {}", self.rule)?;
        match self.arch {
            Architecture::Modular {
                hypercolumns,
                module_size,
            } => writeln!(out, "arch modular {hypercolumns} {module_size}")?,
            Architecture::NonModular { units, active } => {
                writeln!(out, "arch nonmodular {units} {active}")?
            }
        }
        writeln!(out, "epsilon {}", self.epsilon)?;
        writeln!(out, "p_corr {}", self.p_corr)?;
        writeln!(out, "bias")?;
        write_values(out, &self.bias)?;
        writeln!(out, "weights")?;
        let n = self.arch.units();
        for i in 0..n {
            write_values(out, &self.weights[i * n..(i + 1) * n])?;
        }
        Ok(())
    }

    /// Reads a network written by [`write_text`].
    pub fn read_text<R: BufRead>(input: &mut R) -> Result<Self> {
        let mut lines = input.lines().enumerate();
        let mut next_line = |expect: &str| -> Result<(usize, String)> {
            match lines.next() {
                Some((idx, line)) => Ok((idx + 1, line?)),
                None => Err(Error::parse(0, format!("unexpected end of input, expected {expect}"))),
            }
        };

        let (no, magic) = next_line("header")?;
        if magic.trim() != "hebbench-weights 1" {
            return Err(Error::parse(no, format!("bad header: {magic}")));
        }
        let (no, rule_line) = next_line("rule")?;
        let rule: Rule = rule_line
            .strip_prefix("rule ")
            .ok_or_else(|| Error::parse(no, "expected rule line"))?
            .parse()?;
        let (no, arch_line) = next_line("arch")?;
        let fields: Vec<&str> = arch_line.split_whitespace().collect();
        let arch = match fields.as_slice() {
            ["arch", "modular", h, m] => Architecture::modular(
                parse_num(h, no)?,
                parse_num(m, no)?,
            )?,
            ["arch", "nonmodular", n, k] => Architecture::non_modular(
                parse_num(n, no)?,
                parse_num(k, no)?,
            )?,
            _ => return Err(Error::parse(no, format!("bad arch line: {arch_line}"))),
        };
        let (no, eps_line) = next_line("epsilon")?;
        let epsilon: F = parse_scalar(
            eps_line
                .strip_prefix("epsilon ")
                .ok_or_else(|| Error::parse(no, "expected epsilon line"))?,
            no,
        )?;
        let (no, pc_line) = next_line("p_corr")?;
        let p_corr: f64 = pc_line
            .strip_prefix("p_corr ")
            .ok_or_else(|| Error::parse(no, "expected p_corr line"))?
            .trim()
            .parse()
            .map_err(|e| Error::parse(no, format!("bad p_corr: {e}")))?;

        let (no, tag) = next_line("bias")?;
        if tag.trim() != "bias" {
            return Err(Error::parse(no, "expected bias section"));
        }
        let n = arch.units();
        let (no, bias_line) = next_line("bias values")?;
        let bias = parse_values::<F>(&bias_line, n, no)?;
        let (no, tag) = next_line("weights")?;
        if tag.trim() != "weights" {
            return Err(Error::parse(no, "expected weights section"));
        }
        let mut weights = Vec::with_capacity(n * n);
        for _ in 0..n {
            let (no, row) = next_line("weight row")?;
            weights.extend(parse_values::<F>(&row, n, no)?);
        }
        WeightSet::from_parts(rule, arch, epsilon, p_corr, bias, weights)
    }
}

fn write_values<W: Write, F: Scalar>(out: &mut W, values: &[F]) -> Result<()> {
    let mut line = String::new();
    for (i, v) in values.iter().enumerate() {
        if i > 0 {
            line.push(' ');
        }
        line.push_str(&v.to_string());
    }
    writeln!(out, "{line}")?;
    Ok(())
}

fn parse_num(tok: &str, line: usize) -> Result<usize> {
    tok.parse()
        .map_err(|e| Error::parse(line, format!("bad integer {tok}: {e}")))
}

fn parse_scalar<F: Scalar>(tok: &str, line: usize) -> Result<F> {
    tok.trim()
        .parse()
        .map_err(|e| Error::parse(line, format!("bad float {tok}: {e:?}")))
}

fn parse_values<F: Scalar>(line_text: &str, expect: usize, line: usize) -> Result<Vec<F>> {
    let values: Vec<F> = line_text
        .split_whitespace()
        .map(|tok| parse_scalar(tok, line))
        .collect::<Result<_>>()?;
    if values.len() != expect {
        return Err(Error::parse(line, format!("expected {expect} values, got {}", values.len())));
    }
    Ok(values)
}

/// Exact per-pair probability estimates, all ratios of integer counts.
struct PairProbs<F> {
    pi: F,
    pj: F,
    /// p(i=1, j=1)
    p11: F,
    /// p(i=1, j=0)
    p10: F,
    /// p(i=0, j=1)
    p01: F,
    /// p(i=0, j=0)
    p00: F,
}

#[inline]
fn pair_probs<F: Scalar>(cs: &CounterState, i: usize, j: usize, count_f: F) -> PairProbs<F> {
    let n = cs.arch.units();
    let ci = cs.unit[i];
    let cj = cs.unit[j];
    let cij = cs.pair[i * n + j];
    // All four cell counts are non-negative integers, so each probability
    // has an exactly representable numerator.
    let c10 = ci - cij;
    let c01 = cj - cij;
    let c00 = (cs.count - ci) - c01;
    PairProbs {
        pi: ratio(ci, count_f),
        pj: ratio(cj, count_f),
        p11: ratio(cij, count_f),
        p10: ratio(c10, count_f),
        p01: ratio(c01, count_f),
        p00: ratio(c00, count_f),
    }
}

/// Visits the upper triangle of connected pairs (`i < j`).
fn for_upper_connected(arch: Architecture, mut visit: impl FnMut(usize, usize)) {
    let n = arch.units();
    match arch {
        Architecture::Modular { module_size, .. } => {
            for i in 0..n {
                // Pairs with j in i's own hypercolumn are masked; the next
                // connected j is the first unit of the following block.
                let start = (i / module_size + 1) * module_size;
                for j in start..n {
                    visit(i, j);
                }
            }
        }
        Architecture::NonModular { .. } => {
            for i in 0..n {
                for j in i + 1..n {
                    visit(i, j);
                }
            }
        }
    }
}

/// Visits every connected ordered pair.
fn for_all_connected(arch: Architecture, mut visit: impl FnMut(usize, usize)) {
    let n = arch.units();
    for i in 0..n {
        for j in 0..n {
            if arch.connected(i, j) {
                visit(i, j);
            }
        }
    }
}

/// Compiles the counters into a network under `rule`, with recall target
/// `p_corr` setting the clipping floor.
pub fn compile<F: Scalar>(counters: &CounterState, rule: Rule, p_corr: f64) -> Result<WeightSet<F>> {
    if counters.count == 0 {
        return Err(Error::EmptyCounters);
    }
    let arch = counters.arch;
    let n = arch.units();
    if arch.fan_in() == 0 {
        return Err(Error::invalid("architecture", format!("{arch} has no trainable synapses")));
    }
    let eps = F::from_f64_lossy(epsilon(arch.density(), arch.fan_in(), p_corr)?);
    let count_f = F::from_u32(counters.count).expect("count fits scalar");
    let mut bias = vec![F::zero(); n];
    let mut weights = vec![F::zero(); n * n];

    let set_sym = |weights: &mut Vec<F>, i: usize, j: usize, w: F| {
        weights[i * n + j] = w;
        weights[j * n + i] = w;
    };

    match rule {
        Rule::Will => {
            for_upper_connected(arch, |i, j| {
                if counters.pair[i * n + j] > 0 {
                    set_sym(&mut weights, i, j, F::one());
                }
            });
        }
        Rule::Hebb => {
            for_upper_connected(arch, |i, j| {
                let p = pair_probs::<F>(counters, i, j, count_f);
                set_sym(&mut weights, i, j, p.p11);
            });
        }
        Rule::Hopf => {
            let a = F::from_f64_lossy(arch.density());
            for_upper_connected(arch, |i, j| {
                let p = pair_probs::<F>(counters, i, j, count_f);
                set_sym(&mut weights, i, j, p.p11 - a * (p.pi + p.pj) + a * a);
            });
        }
        Rule::Cov => {
            for_upper_connected(arch, |i, j| {
                let p = pair_probs::<F>(counters, i, j, count_f);
                set_sym(&mut weights, i, j, p.p11 - p.pi * p.pj);
            });
        }
        Rule::PrCov => {
            for_all_connected(arch, |i, j| {
                let p = pair_probs::<F>(counters, i, j, count_f);
                weights[i * n + j] = (p.p11 - p.pi * p.pj) / p.pi.max(eps);
            });
        }
        Rule::Bcp => {
            for_upper_connected(arch, |i, j| {
                let p = pair_probs::<F>(counters, i, j, count_f);
                let w = (p.p11.max(eps) / (p.pi * p.pj).max(eps)).ln();
                set_sym(&mut weights, i, j, w);
            });
            for j in 0..n {
                bias[j] = ratio::<F>(counters.unit[j], count_f).max(eps).ln();
            }
        }
        Rule::Boms => {
            for_upper_connected(arch, |i, j| {
                let p = pair_probs::<F>(counters, i, j, count_f);
                let w = ((p.p11 * p.p00).max(eps) / (p.p10 * p.p01).max(eps)).ln();
                set_sym(&mut weights, i, j, w);
            });
            bayes_bias(counters, ChannelNoise::NONE, eps, count_f, &mut bias);
        }
        Rule::BomGeneral(q) => {
            let keep1 = F::from_f64_lossy(1.0 - q.q10_given_1);
            let gain1 = F::from_f64_lossy(q.q01_given_1);
            let drop1 = F::from_f64_lossy(q.q10_given_1);
            let stay1 = F::from_f64_lossy(1.0 - q.q01_given_1);
            let keep0 = F::from_f64_lossy(1.0 - q.q10_given_0);
            let gain0 = F::from_f64_lossy(q.q01_given_0);
            let drop0 = F::from_f64_lossy(q.q10_given_0);
            let stay0 = F::from_f64_lossy(1.0 - q.q01_given_0);
            for_all_connected(arch, |i, j| {
                let p = pair_probs::<F>(counters, i, j, count_f);
                // Cue-state likelihood brackets for presynaptic unit i,
                // conditioned on stored state of postsynaptic unit j.
                let on_given_1 = p.p11 * keep1 + p.p01 * gain1;
                let off_given_1 = p.p11 * drop1 + p.p01 * stay1;
                let on_given_0 = p.p10 * keep0 + p.p00 * gain0;
                let off_given_0 = p.p10 * drop0 + p.p00 * stay0;
                weights[i * n + j] =
                    ((on_given_1 * off_given_0).max(eps) / (on_given_0 * off_given_1).max(eps)).ln();
            });
            bayes_bias(counters, q, eps, count_f, &mut bias);
        }
    }

    Ok(WeightSet {
        rule,
        arch,
        epsilon: eps,
        p_corr,
        bias,
        weights,
    })
}

/// Bias of the Bayesian maximum-likelihood rules: the prior log odds of the
/// postsynaptic unit folded together with the inactive-cue evidence of
/// every connected presynaptic unit.
fn bayes_bias<F: Scalar>(
    cs: &CounterState,
    q: ChannelNoise,
    eps: F,
    count_f: F,
    bias: &mut [F],
) {
    let arch = cs.arch;
    let n = arch.units();
    let fan = F::from_f64_lossy(arch.fan_in() as f64);
    let drop1 = F::from_f64_lossy(q.q10_given_1);
    let stay1 = F::from_f64_lossy(1.0 - q.q01_given_1);
    let drop0 = F::from_f64_lossy(q.q10_given_0);
    let stay0 = F::from_f64_lossy(1.0 - q.q01_given_0);
    for j in 0..n {
        let pj = ratio::<F>(cs.unit[j], count_f);
        let inactive_j = ratio::<F>(cs.count - cs.unit[j], count_f);
        let mut b = (fan - F::one()) * (inactive_j.max(eps) / pj.max(eps)).ln();
        for i in 0..n {
            if !arch.connected(i, j) {
                continue;
            }
            let p = pair_probs::<F>(cs, i, j, count_f);
            let off_given_1 = p.p11 * drop1 + p.p01 * stay1;
            let off_given_0 = p.p10 * drop0 + p.p00 * stay0;
            b += (off_given_1.max(eps) / off_given_0.max(eps)).ln();
        }
        bias[j] = b;
    }
}
