//! Symmetric equiprobable LLR quantizers.
//!
//! A `q`-bit quantizer partitions the real line into `K = 2^q` bins
//! `[i_{k-1}, i_k)` with `i_0 = -inf`, `i_K = +inf`, and replaces an LLR by
//! the level of its bin. Boundaries come from quantiles of the unconditional
//! LLR distribution so every output is equally likely; levels are the LLRs of
//! the equivalent discrete channel, `ln(p_1k / p_0k)`.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::infotheory::DiscreteChannel;

const SYMMETRY_TOL: f64 = 1e-9;

/// Interior bin boundaries `i_1 < ... < i_{K-1}`, symmetric about zero.
#[derive(Debug, Clone, PartialEq)]
pub struct BinEdges {
    boundaries: Vec<f64>,
}

impl BinEdges {
    pub fn new(boundaries: Vec<f64>) -> Result<Self> {
        let k = boundaries.len() + 1;
        if !k.is_power_of_two() || k < 2 {
            return Err(Error::InvalidQuantizer(format!("{k} bins is not a power of two >= 2")));
        }
        if boundaries.iter().any(|b| !b.is_finite()) {
            return Err(Error::InvalidQuantizer("boundaries must be finite".into()));
        }
        if boundaries.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidQuantizer("boundaries must be strictly ascending".into()));
        }
        let scale = boundaries.iter().fold(1.0f64, |m, b| m.max(b.abs()));
        for (a, b) in boundaries.iter().zip(boundaries.iter().rev()) {
            if (a + b).abs() > SYMMETRY_TOL * scale {
                return Err(Error::InvalidQuantizer("boundaries must be symmetric about zero".into()));
            }
        }
        Ok(BinEdges { boundaries })
    }

    /// Symmetric 2-bit family `(-i3, 0, i3)`.
    pub fn two_bit(i3: f64) -> Result<Self> {
        BinEdges::new(vec![-i3, 0.0, i3])
    }

    pub fn sign() -> Self {
        BinEdges { boundaries: vec![0.0] }
    }

    pub fn boundaries(&self) -> &[f64] {
        &self.boundaries
    }

    pub fn bins(&self) -> usize {
        self.boundaries.len() + 1
    }

    /// Zero-based bin of `llr`; a value on a boundary belongs to the upper bin.
    pub fn bin_index(&self, llr: f64) -> usize {
        self.boundaries.partition_point(|&b| b <= llr)
    }

    /// `(lower, upper)` limits of bin `k` with infinite outer limits.
    pub fn bin_limits(&self, k: usize) -> (f64, f64) {
        let lo = if k == 0 { f64::NEG_INFINITY } else { self.boundaries[k - 1] };
        let hi = if k + 1 == self.bins() { f64::INFINITY } else { self.boundaries[k] };
        (lo, hi)
    }
}

/// Bin edges plus one reproduction level per bin.
#[derive(Debug, Clone, PartialEq)]
pub struct LlrQuantizer {
    edges: BinEdges,
    levels: Vec<f64>,
}

impl LlrQuantizer {
    pub fn new(edges: BinEdges, levels: Vec<f64>) -> Result<Self> {
        if levels.len() != edges.bins() {
            return Err(Error::DimensionMismatch { expected: edges.bins(), got: levels.len() });
        }
        for (k, &l) in levels.iter().enumerate() {
            let (lo, hi) = edges.bin_limits(k);
            if !l.is_finite() || l < lo || l > hi {
                return Err(Error::InvalidQuantizer(format!("level {l} outside bin {k} [{lo}, {hi}]")));
            }
        }
        if levels.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidQuantizer("levels must be strictly ascending".into()));
        }
        Ok(LlrQuantizer { edges, levels })
    }

    /// Sign quantizer with levels `-lambda, +lambda`.
    pub fn one_bit(lambda: f64) -> Result<Self> {
        LlrQuantizer::new(BinEdges::sign(), vec![-lambda, lambda])
    }

    pub fn edges(&self) -> &BinEdges {
        &self.edges
    }

    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    pub fn bins(&self) -> usize {
        self.levels.len()
    }

    pub fn word_length(&self) -> u32 {
        self.bins().trailing_zeros()
    }

    /// Bin index and level of `llr`.
    pub fn quantize(&self, llr: f64) -> (usize, f64) {
        let k = self.edges.bin_index(llr);
        (k, self.levels[k])
    }

    /// One-line record `K, i_1..i_{K-1}, lambda_1..lambda_K` with 17 significant digits.
    pub fn to_record(&self) -> String {
        let mut s = self.bins().to_string();
        for v in self.edges.boundaries().iter().chain(&self.levels) {
            write!(s, ", {v:.16e}").expect("writing to a String");
        }
        s
    }

    pub fn from_record(record: &str) -> Result<Self> {
        let fields: Vec<&str> = record.trim().split(',').map(str::trim).collect();
        let k: usize = fields
            .first()
            .and_then(|f| f.parse().ok())
            .ok_or_else(|| Error::Parse("quantizer record must start with K".into()))?;
        if k < 2 || fields.len() != 2 * k {
            return Err(Error::Parse(format!("expected {} fields for K = {k}, found {}", 2 * k, fields.len())));
        }
        let values = fields[1..]
            .iter()
            .map(|f| f.parse::<f64>().map_err(|e| Error::Parse(format!("`{f}`: {e}"))))
            .collect::<Result<Vec<f64>>>()?;
        let (b, l) = values.split_at(k - 1);
        LlrQuantizer::new(BinEdges::new(b.to_vec())?, l.to_vec())
    }
}

/// Equiprobable boundaries from the empirical unconditional LLR distribution.
///
/// `i_k` is the order statistic of rank `ceil(k N / K)`, then symmetrised as
/// `(i_k - i_{K-k}) / 2` with the middle boundary pinned to zero.
pub fn design_boundaries_empirical(samples: &[f64], bins: usize) -> Result<BinEdges> {
    if !bins.is_power_of_two() || bins < 2 {
        return Err(Error::InvalidQuantizer(format!("{bins} bins is not a power of two >= 2")));
    }
    let n = samples.len();
    if n < 100 * bins {
        return Err(Error::InsufficientSamples { needed: 100 * bins, got: n });
    }
    let mut sorted = samples.to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    let raw: Vec<f64> = (1..bins).map(|k| sorted[(k * n).div_ceil(bins) - 1]).collect();
    let mut sym: Vec<f64> = (0..bins - 1).map(|j| 0.5 * (raw[j] - raw[bins - 2 - j])).collect();
    sym[bins / 2 - 1] = 0.0;
    if sym.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::DuplicateBoundaries);
    }
    BinEdges::new(sym)
}

/// Levels `ln(p_1k / p_0k)` of the equivalent discrete channel.
pub fn levels_from_transitions(dc: &DiscreteChannel) -> Result<Vec<f64>> {
    (0..dc.outputs())
        .map(|k| {
            let (p0, p1) = (dc.p(0, k), dc.p(1, k));
            if p0 == 0.0 && p1 == 0.0 {
                Err(Error::ZeroMassBin(k))
            } else if p0 == 0.0 || p1 == 0.0 {
                Err(Error::NonFiniteLevel(k))
            } else {
                Ok((p1 / p0).ln())
            }
        })
        .collect()
}

/// Moves each level onto the nearest point of its bin. Needed when a bin saw
/// too few samples of one bit for its level to be resolved.
pub fn project_levels(edges: &BinEdges, levels: &[f64]) -> Vec<f64> {
    levels
        .iter()
        .enumerate()
        .map(|(k, &l)| {
            let (lo, hi) = edges.bin_limits(k);
            if l < lo {
                lo
            } else if l >= hi {
                hi.next_down()
            } else {
                l
            }
        })
        .collect()
}
