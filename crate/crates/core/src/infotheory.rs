//! Equivalent discrete channels, mutual information and outage statistics.

use crate::demod::LabeledLlrSample;
use crate::error::{Error, Result};
use crate::quant::BinEdges;

const ROW_TOL: f64 = 1e-9;
/// Two-sided 95% normal quantile.
const Z95: f64 = 1.959_963_984_540_054;

/// Binary-input channel with `K` outputs, `p[b][k] = Pr{d = k | c = b}`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteChannel {
    p: [Vec<f64>; 2],
}

impl DiscreteChannel {
    pub fn new(p0: Vec<f64>, p1: Vec<f64>) -> Result<Self> {
        if p0.len() != p1.len() {
            return Err(Error::DimensionMismatch { expected: p0.len(), got: p1.len() });
        }
        if p0.is_empty() {
            return Err(Error::Empty);
        }
        for row in [&p0, &p1] {
            if row.iter().any(|&v| !(v >= 0.0) || !v.is_finite()) {
                return Err(Error::InvalidConfig("transition probabilities must be finite and >= 0".into()));
            }
            let s: f64 = row.iter().sum();
            if (s - 1.0).abs() > ROW_TOL {
                return Err(Error::InvalidConfig(format!("transition row sums to {s}")));
            }
        }
        Ok(DiscreteChannel { p: [p0, p1] })
    }

    /// Normalises both rows before validation.
    pub fn from_unnormalized(mut p0: Vec<f64>, mut p1: Vec<f64>) -> Result<Self> {
        for row in [&mut p0, &mut p1] {
            let s: f64 = row.iter().sum();
            if !(s > 0.0) {
                return Err(Error::Empty);
            }
            row.iter_mut().for_each(|v| *v /= s);
        }
        DiscreteChannel::new(p0, p1)
    }

    pub fn outputs(&self) -> usize {
        self.p[0].len()
    }

    pub fn p(&self, bit: usize, k: usize) -> f64 {
        self.p[bit][k]
    }

    pub fn row(&self, bit: usize) -> &[f64] {
        &self.p[bit]
    }

    /// `Pr{d = k}` for equiprobable code bits.
    pub fn output_probability(&self, k: usize) -> f64 {
        0.5 * (self.p[0][k] + self.p[1][k])
    }

    pub fn mutual_information(&self) -> f64 {
        mutual_information(self)
    }

    /// Channel with outputs `a` and `b` combined into one (kept at the lower index).
    pub fn merge(&self, a: usize, b: usize) -> Result<Self> {
        let k = self.outputs();
        if a >= k || b >= k || a == b {
            return Err(Error::InvalidConfig(format!("cannot merge outputs {a} and {b} of {k}")));
        }
        let (keep, drop) = (a.min(b), a.max(b));
        let fold = |row: &[f64]| {
            let mut r = row.to_vec();
            r[keep] += r[drop];
            r.remove(drop);
            r
        };
        Ok(DiscreteChannel { p: [fold(&self.p[0]), fold(&self.p[1])] })
    }

    /// Output `k` of the result is output `perm[k]` of `self`.
    pub fn permute(&self, perm: &[usize]) -> Result<Self> {
        let k = self.outputs();
        let mut seen = vec![false; k];
        if perm.len() != k || perm.iter().any(|&j| j >= k || std::mem::replace(&mut seen[j], true)) {
            return Err(Error::InvalidConfig("not a permutation of the outputs".into()));
        }
        let pick = |row: &[f64]| perm.iter().map(|&j| row[j]).collect();
        Ok(DiscreteChannel { p: [pick(&self.p[0]), pick(&self.p[1])] })
    }
}

/// `I(c; d)` in bits for equiprobable binary input, with `0 log 0 = 0`.
pub fn mutual_information(dc: &DiscreteChannel) -> f64 {
    let mut acc = 0.0;
    for k in 0..dc.outputs() {
        let (p0, p1) = (dc.p[0][k], dc.p[1][k]);
        let s = p0 + p1;
        for p in [p0, p1] {
            if p > 0.0 {
                acc += p * (2.0 * p / s).log2();
            }
        }
    }
    (0.5 * acc).clamp(0.0, 1.0)
}

/// Integer histogram of (bit, bin) pairs; merging is associative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitionCounts {
    counts: [Vec<u64>; 2],
}

impl TransitionCounts {
    pub fn new(bins: usize) -> Self {
        TransitionCounts { counts: [vec![0; bins], vec![0; bins]] }
    }

    pub fn bins(&self) -> usize {
        self.counts[0].len()
    }

    #[inline]
    pub fn add(&mut self, bit: u8, bin: usize) {
        self.counts[usize::from(bit & 1)][bin] += 1;
    }

    pub fn merge(&mut self, other: &TransitionCounts) {
        for b in 0..2 {
            for (a, o) in self.counts[b].iter_mut().zip(&other.counts[b]) {
                *a += o;
            }
        }
    }

    pub fn count(&self, bit: usize, k: usize) -> u64 {
        self.counts[bit][k]
    }

    pub fn row_total(&self, bit: usize) -> u64 {
        self.counts[bit].iter().sum()
    }

    pub fn total(&self) -> u64 {
        self.row_total(0) + self.row_total(1)
    }

    /// Relative frequencies with additive smoothing `1/(2N_b)` per cell.
    pub fn to_channel(&self) -> Result<DiscreteChannel> {
        let mut rows: [Vec<f64>; 2] = [Vec::new(), Vec::new()];
        for (b, row) in rows.iter_mut().enumerate() {
            let n = self.row_total(b);
            if n == 0 {
                return Err(Error::MissingBit(b as u8));
            }
            let n = n as f64;
            let eps = 0.5 / n;
            *row = self.counts[b].iter().map(|&c| c as f64 / n + eps).collect();
        }
        let [p0, p1] = rows;
        DiscreteChannel::from_unnormalized(p0, p1)
    }

    /// Plug-in mutual information without smoothing.
    pub fn raw_information(&self) -> Result<f64> {
        let mut rows: [Vec<f64>; 2] = [Vec::new(), Vec::new()];
        for (b, row) in rows.iter_mut().enumerate() {
            let n = self.row_total(b);
            if n == 0 {
                return Err(Error::MissingBit(b as u8));
            }
            *row = self.counts[b].iter().map(|&c| c as f64 / n as f64).collect();
        }
        let [p0, p1] = rows;
        Ok(DiscreteChannel::from_unnormalized(p0, p1)?.mutual_information())
    }
}

/// Histogram labeled samples into the bins of `edges`.
pub fn count_transitions(samples: &[LabeledLlrSample], edges: &BinEdges) -> TransitionCounts {
    let mut counts = TransitionCounts::new(edges.bins());
    for s in samples {
        counts.add(s.bit, edges.bin_index(s.llr));
    }
    counts
}

pub fn estimate_transitions(samples: &[LabeledLlrSample], edges: &BinEdges) -> Result<DiscreteChannel> {
    count_transitions(samples, edges).to_channel()
}

/// Mean and standard error of a set of independent batch estimates.
pub fn batch_mean_stderr(values: &[f64]) -> (f64, f64) {
    let n = values.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    if n == 1 {
        return (mean, f64::NAN);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    (mean, (var / n as f64).sqrt())
}

/// Mutual information of one channel realization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateSample {
    pub rate: f64,
    pub channel_id: u64,
}

/// Outage fraction with a 95% Wilson score interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutageEstimate {
    pub p_out: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    pub trials: u64,
}

impl OutageEstimate {
    pub fn from_counts(hits: u64, trials: u64) -> Result<Self> {
        if trials == 0 {
            return Err(Error::Empty);
        }
        let n = trials as f64;
        let p = hits as f64 / n;
        let z2 = Z95 * Z95;
        let denom = 1.0 + z2 / n;
        let centre = (p + z2 / (2.0 * n)) / denom;
        let half = Z95 * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
        Ok(OutageEstimate {
            p_out: p,
            ci_lo: if hits == 0 { 0.0 } else { (centre - half).max(0.0) },
            ci_hi: if hits == trials { 1.0 } else { (centre + half).min(1.0) },
            trials,
        })
    }
}

/// Fraction of realizations with `rate <= target`.
pub fn outage_probability(rates: &[RateSample], target: f64) -> Result<OutageEstimate> {
    let hits = rates.iter().filter(|r| r.rate <= target).count() as u64;
    OutageEstimate::from_counts(hits, rates.len() as u64)
}

/// Smallest SNR in `[lo_db, hi_db]` at which `rate_at` reaches `target`,
/// bracketed to `tol_db` by bisection. `rate_at` must be non-decreasing.
pub fn required_snr<F>(mut rate_at: F, target: f64, lo_db: f64, hi_db: f64, tol_db: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    if !(lo_db < hi_db) || !(tol_db > 0.0) {
        return Err(Error::InvalidConfig(format!("bad search range [{lo_db}, {hi_db}] / {tol_db}")));
    }
    if rate_at(lo_db)? >= target {
        return Ok(lo_db);
    }
    if rate_at(hi_db)? < target {
        return Err(Error::Unreachable { target, lo_db, hi_db });
    }
    let (mut lo, mut hi) = (lo_db, hi_db);
    while hi - lo > tol_db {
        let mid = 0.5 * (lo + hi);
        if rate_at(mid)? >= target {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// One row of a 2-bit boundary sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub i3: f64,
    pub required_snr_db: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub rows: Vec<SweepRow>,
    /// Index of the smallest required SNR.
    pub minimum: usize,
}

impl SweepTable {
    pub fn min_snr_db(&self) -> f64 {
        self.rows[self.minimum].required_snr_db
    }
}

/// Required SNR for every `i3` of the symmetric family `(-i3, 0, i3)`.
///
/// `required_for(edges)` runs the full search for one quantizer.
pub fn sweep_boundary_2bit<F>(i3_grid: &[f64], mut required_for: F) -> Result<SweepTable>
where
    F: FnMut(&BinEdges) -> Result<f64>,
{
    if i3_grid.is_empty() {
        return Err(Error::Empty);
    }
    let mut rows = Vec::with_capacity(i3_grid.len());
    for &i3 in i3_grid {
        let edges = BinEdges::two_bit(i3)?;
        rows.push(SweepRow { i3, required_snr_db: required_for(&edges)? });
    }
    let minimum = rows
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.required_snr_db.total_cmp(&b.1.required_snr_db))
        .map(|(i, _)| i)
        .expect("non-empty grid");
    Ok(SweepTable { rows, minimum })
}
