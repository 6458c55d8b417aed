//! Information-theoretic measures for recalled patterns.
//!
//! All entropies and transinformation values are in bits. A hypercolumn is
//! treated as an M-ary symbol channel whose error probability is the
//! measured winner mismatch rate; non-modular networks are scored as N
//! parallel binary channels with an empirically estimated joint.

use crate::error::{Error, Result};

/// Binary entropy in bits; zero outside the open unit interval, matching
/// the entropy of a degenerate distribution.
pub fn binary_entropy(p: f64) -> f64 {
    if p <= 0.0 || p >= 1.0 {
        return 0.0;
    }
    -p * p.log2() - (1.0 - p) * (1.0 - p).log2()
}

/// Per-block error probability equivalent to an overall pattern recall
/// probability `p_corr` across `blocks` independent blocks:
/// `1 - p_corr^(1/blocks)`.
pub fn block_error(p_corr: f64, blocks: usize) -> Result<f64> {
    if !(0.0..=1.0).contains(&p_corr) {
        return Err(Error::invalid("p_corr", format!("must be in [0, 1], got {p_corr}")));
    }
    if blocks == 0 {
        return Err(Error::invalid("blocks", "must be at least 1".to_string()));
    }
    Ok(1.0 - p_corr.powf(1.0 / blocks as f64))
}

/// Transinformation of one hypercolumn read out through a symmetric M-ary
/// channel with winner error probability `p_err`:
/// `log2 M - H2(p_err) - p_err log2(M - 1)`.
pub fn block_transinfo(p_err: f64, module_size: usize) -> Result<f64> {
    if module_size < 2 {
        return Err(Error::invalid(
            "module_size",
            format!("need at least 2 minicolumns, got {module_size}"),
        ));
    }
    if !(0.0..=1.0).contains(&p_err) {
        return Err(Error::invalid("p_err", format!("must be in [0, 1], got {p_err}")));
    }
    let m = module_size as f64;
    Ok(m.log2() - binary_entropy(p_err) - p_err * (m - 1.0).log2())
}

/// Mutual information in bits of a 2x2 joint given as counts
/// `[n00, n01, n10, n11]`, indexed `(stored, recalled)`. Zero-count cells
/// contribute nothing; an empty table has zero information.
pub fn bit_transinfo(joint: [u64; 4]) -> f64 {
    let total: u64 = joint.iter().sum();
    if total == 0 {
        return 0.0;
    }
    let t = total as f64;
    let stored1 = (joint[2] + joint[3]) as f64 / t;
    let stored = [1.0 - stored1, stored1];
    let out1 = (joint[1] + joint[3]) as f64 / t;
    let out = [1.0 - out1, out1];
    let mut mi = 0.0;
    for (idx, &n) in joint.iter().enumerate() {
        if n == 0 {
            continue;
        }
        let p = n as f64 / t;
        mi += p * (p / (stored[idx >> 1] * out[idx & 1])).log2();
    }
    mi
}

/// Information gained per synapse by pattern completion: cues arrive with
/// block error `p_in`, recall leaves `p_out`, and the gain is accumulated
/// over `patterns` stored patterns of `blocks` hypercolumns each.
pub fn completion_capacity(
    patterns: usize,
    blocks: usize,
    module_size: usize,
    p_in: f64,
    p_out: f64,
    synapses: usize,
) -> Result<f64> {
    if module_size < 2 {
        return Err(Error::invalid(
            "module_size",
            format!("need at least 2 minicolumns, got {module_size}"),
        ));
    }
    for (name, p) in [("p_in", p_in), ("p_out", p_out)] {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidParam {
                name: "completion",
                message: format!("{name} must be in [0, 1], got {p}"),
            });
        }
    }
    if synapses == 0 {
        return Err(Error::invalid("synapses", "must be at least 1".to_string()));
    }
    let m = module_size as f64;
    let gain = binary_entropy(p_in) - binary_entropy(p_out) + (p_in - p_out) * (m - 1.0).log2();
    Ok(patterns as f64 * blocks as f64 * gain / synapses as f64)
}
