//! Outage probability under quasi-static fading.

use rayon::prelude::*;

use crate::analytic::{outage_probability_siso, Resolution};
use crate::channel::{draw_channel, sigma2_from_snr_db, ChannelMatrix, LinkConfig};
use crate::error::{Error, Result};
use crate::harness::ergodic::{bins_for, SnrSearch};
use crate::infotheory::{count_transitions, required_snr, OutageEstimate};
use crate::link::{fixed_channel_samples, llr_values};
use crate::quant::design_boundaries_empirical;
use crate::rng::{Domain, MasterSeed};

/// Monte-Carlo budget of a MIMO outage run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutageBudget {
    pub channels: u64,
    /// Noise and bit trials per channel realization.
    pub noise_per_channel: u64,
    /// Bins standing in for unquantized LLRs per realization.
    pub reference_bins: usize,
}

impl Default for OutageBudget {
    fn default() -> Self {
        OutageBudget { channels: 10_000, noise_per_channel: 20_000, reference_bins: 64 }
    }
}

/// Rate `R0 I(c; d)` of one realization with boundaries designed from its own samples.
pub fn realization_rate(
    link: &LinkConfig,
    h: &ChannelMatrix,
    resolution: Resolution,
    budget: &OutageBudget,
    seed: MasterSeed,
) -> Result<f64> {
    let samples = fixed_channel_samples(link, h, seed, Domain::Outage, budget.noise_per_channel)?;
    let edges = match design_boundaries_empirical(&llr_values(&samples), bins_for(resolution, budget.reference_bins)) {
        Ok(e) => e,
        // all LLRs identical: nothing was learned about the bits
        Err(Error::DuplicateBoundaries) => return Ok(0.0),
        Err(e) => return Err(e),
    };
    Ok(link.bits_per_use() as f64 * count_transitions(&samples, &edges).raw_information()?)
}

/// SNR at which each quasi-static realization reaches `target` bpcu, per
/// resolution; `INFINITY` when it does not within the search range.
///
/// Realization `j` uses channel stream `j` and a child seed `j` for its noise,
/// shared by every probed SNR.
pub fn per_channel_required_snr(
    template: &LinkConfig,
    resolutions: &[Resolution],
    target: f64,
    budget: &OutageBudget,
    search: &SnrSearch,
    seed: MasterSeed,
) -> Result<Vec<Vec<f64>>> {
    let per_channel = (0..budget.channels)
        .into_par_iter()
        .map(|j| -> Result<Vec<f64>> {
            let h = draw_channel(template, &mut seed.stream(Domain::Channel, j));
            let noise = seed.child(j);
            let mut out = Vec::with_capacity(resolutions.len());
            let mut prev: Option<f64> = None;
            for &r in resolutions {
                let rate = |snr: f64| realization_rate(&template.at_snr_db(snr), &h, r, budget, noise);
                out.push(chained_search(rate, target, prev, search)?);
                prev = out.last().copied().filter(|s| s.is_finite());
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((0..resolutions.len()).map(|i| per_channel.iter().map(|v| v[i]).collect()).collect())
}

/// Bisection, first inside a window around the previous resolution's answer.
fn chained_search<F: FnMut(f64) -> Result<f64>>(mut rate: F, target: f64, prev: Option<f64>, search: &SnrSearch) -> Result<f64> {
    if let Some(p) = prev {
        let (lo, hi) = ((p - 3.0).max(search.lo_db), (p + 12.0).min(search.hi_db));
        match required_snr(&mut rate, target, lo, hi, search.tol_db) {
            Ok(s) if s > lo => return Ok(s),
            Ok(_) | Err(Error::Unreachable { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    match required_snr(rate, target, search.lo_db, search.hi_db, search.tol_db) {
        Err(Error::Unreachable { .. }) => Ok(f64::INFINITY),
        r => r,
    }
}

/// `p_out(snr)`: fraction of realizations whose required SNR exceeds `snr`.
pub fn outage_from_required(required: &[f64], snr_db: f64) -> Result<OutageEstimate> {
    let hits = required.iter().filter(|&&s| s > snr_db).count() as u64;
    OutageEstimate::from_counts(hits, required.len() as u64)
}

/// Smallest SNR whose outage probability is at most `p`, from the empirical
/// distribution of per-realization required SNRs.
pub fn snr_at_outage(required: &[f64], p: f64) -> f64 {
    let mut s = required.to_vec();
    s.sort_unstable_by(f64::total_cmp);
    let n = s.len();
    // need #{s > x} <= p n
    let allowed = (p * n as f64).floor() as usize;
    if allowed >= n {
        return f64::NEG_INFINITY;
    }
    s[n - 1 - allowed]
}

/// SISO BPSK outage over a grid of SNRs with Q-function transitions.
pub fn siso_outage_curve(
    snr_grid_db: &[f64],
    resolution: Resolution,
    target: f64,
    channels: u64,
    seed: MasterSeed,
) -> Result<Vec<OutageEstimate>> {
    snr_grid_db
        .iter()
        .map(|&snr| outage_probability_siso(sigma2_from_snr_db(snr, 1), resolution, target, channels, seed))
        .collect()
}

/// SNR at which the SISO outage probability falls to `p`, by bisection with a
/// fixed set of gain draws.
pub fn siso_snr_at_outage(resolution: Resolution, target: f64, p: f64, channels: u64, search: &SnrSearch, seed: MasterSeed) -> Result<f64> {
    required_snr(
        |snr| Ok(-outage_probability_siso(sigma2_from_snr_db(snr, 1), resolution, target, channels, seed)?.p_out),
        -p,
        search.lo_db,
        search.hi_db,
        search.tol_db,
    )
}
