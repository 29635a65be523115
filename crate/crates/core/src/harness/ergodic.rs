//! Ergodic-capacity estimation for fast-fading links.

use rayon::prelude::*;

use crate::analytic::Resolution;
use crate::channel::LinkConfig;
use crate::error::Result;
use crate::infotheory::{batch_mean_stderr, required_snr, TransitionCounts};
use crate::link::{ergodic_samples, llr_values, LinkSampler};
use crate::quant::{design_boundaries_empirical, BinEdges};
use crate::rng::{Domain, MasterSeed};

const CHUNK: u64 = 2048;

/// Monte-Carlo budget of one ergodic capacity estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErgodicBudget {
    /// Channel uses for boundary design.
    pub calibration_uses: u64,
    /// Independent channel uses for the transition estimate.
    pub evaluation_uses: u64,
    /// Bins of the fine quantizer standing in for unquantized LLRs.
    pub reference_bins: usize,
    /// Batches for the standard error.
    pub batches: usize,
}

impl Default for ErgodicBudget {
    fn default() -> Self {
        ErgodicBudget { calibration_uses: 100_000, evaluation_uses: 200_000, reference_bins: 4096, batches: 20 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErgodicPoint {
    pub snr_db: f64,
    pub resolution: Resolution,
    pub rate_bpcu: f64,
    pub stderr: f64,
}

pub(crate) fn bins_for(resolution: Resolution, reference_bins: usize) -> usize {
    resolution.bins().unwrap_or(reference_bins)
}

/// Equiprobable boundaries for each resolution from one calibration run.
pub fn calibrate(
    link: &LinkConfig,
    resolutions: &[Resolution],
    budget: &ErgodicBudget,
    seed: MasterSeed,
) -> Result<Vec<BinEdges>> {
    let llrs = llr_values(&ergodic_samples(link, seed, Domain::Calibration, budget.calibration_uses)?);
    resolutions.iter().map(|&r| design_boundaries_empirical(&llrs, bins_for(r, budget.reference_bins))).collect()
}

/// Transition counts per edge set and batch over independent channel uses.
pub fn evaluation_counts(
    link: &LinkConfig,
    edges: &[BinEdges],
    uses: u64,
    batches: usize,
    seed: MasterSeed,
    domain: Domain,
) -> Result<Vec<Vec<TransitionCounts>>> {
    let n_chunks = uses.div_ceil(CHUNK).max(1);
    let batches = batches.clamp(1, n_chunks as usize);
    let per_chunk = (0..n_chunks)
        .into_par_iter()
        .map(|c| -> Result<Vec<TransitionCounts>> {
            let mut s = LinkSampler::new(link)?;
            let mut counts: Vec<TransitionCounts> = edges.iter().map(|e| TransitionCounts::new(e.bins())).collect();
            let mut buf = Vec::with_capacity(s.bits_per_use());
            for i in c * CHUNK..((c + 1) * CHUNK).min(uses) {
                buf.clear();
                let mut rng = seed.stream(domain, i);
                s.labeled_use(None, &mut rng, &mut buf)?;
                for (e, cnt) in edges.iter().zip(counts.iter_mut()) {
                    for x in &buf {
                        cnt.add(x.bit, e.bin_index(x.llr));
                    }
                }
            }
            Ok(counts)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut out: Vec<Vec<TransitionCounts>> =
        edges.iter().map(|e| vec![TransitionCounts::new(e.bins()); batches]).collect();
    for (c, counts) in per_chunk.iter().enumerate() {
        let b = c * batches / n_chunks as usize;
        for (slot, cnt) in out.iter_mut().zip(counts) {
            slot[b].merge(cnt);
        }
    }
    Ok(out)
}

/// Rate `R0 I(c; d)` and its batch standard error from per-batch counts.
pub fn rate_from_batches(batches: &[TransitionCounts], r0: usize) -> Result<(f64, f64)> {
    let mut pooled = TransitionCounts::new(batches[0].bins());
    let mut per_batch = Vec::with_capacity(batches.len());
    for b in batches {
        pooled.merge(b);
        per_batch.push(r0 as f64 * b.raw_information()?);
    }
    let rate = r0 as f64 * pooled.raw_information()?;
    let (_, se) = batch_mean_stderr(&per_batch);
    Ok((rate, se))
}

/// Ergodic rates of all resolutions at one SNR, sharing the Monte-Carlo runs.
pub fn ergodic_rates(
    template: &LinkConfig,
    snr_db: f64,
    resolutions: &[Resolution],
    budget: &ErgodicBudget,
    seed: MasterSeed,
) -> Result<Vec<ErgodicPoint>> {
    let link = template.at_snr_db(snr_db);
    let edges = calibrate(&link, resolutions, budget, seed)?;
    let counts = evaluation_counts(&link, &edges, budget.evaluation_uses, budget.batches, seed, Domain::Evaluation)?;
    resolutions
        .iter()
        .zip(&counts)
        .map(|(&resolution, c)| {
            let (rate_bpcu, stderr) = rate_from_batches(c, link.bits_per_use())?;
            Ok(ErgodicPoint { snr_db, resolution, rate_bpcu, stderr })
        })
        .collect()
}

/// SNR search settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SnrSearch {
    pub lo_db: f64,
    pub hi_db: f64,
    pub tol_db: f64,
}

impl Default for SnrSearch {
    fn default() -> Self {
        SnrSearch { lo_db: -10.0, hi_db: 40.0, tol_db: 0.05 }
    }
}

/// Smallest SNR whose ergodic rate reaches `target` bpcu, with the same seed
/// at every probed SNR.
pub fn required_snr_ergodic(
    template: &LinkConfig,
    target: f64,
    resolution: Resolution,
    budget: &ErgodicBudget,
    search: &SnrSearch,
    seed: MasterSeed,
) -> Result<f64> {
    required_snr(
        |snr| Ok(ergodic_rates(template, snr, &[resolution], budget, seed)?[0].rate_bpcu),
        target,
        search.lo_db,
        search.hi_db,
        search.tol_db,
    )
}

/// Required SNR of a fixed quantizer (no calibration).
pub fn required_snr_fixed_edges(
    template: &LinkConfig,
    target: f64,
    edges: &BinEdges,
    budget: &ErgodicBudget,
    search: &SnrSearch,
    seed: MasterSeed,
) -> Result<f64> {
    required_snr(
        |snr| {
            let link = template.at_snr_db(snr);
            let c = evaluation_counts(&link, std::slice::from_ref(edges), budget.evaluation_uses, budget.batches, seed, Domain::Sweep)?;
            Ok(rate_from_batches(&c[0], link.bits_per_use())?.0)
        },
        target,
        search.lo_db,
        search.hi_db,
        search.tol_db,
    )
}
