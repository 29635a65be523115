//! Coded bit-error-rate simulation with quantized soft information.

use rand::Rng;
use rayon::prelude::*;

use crate::channel::{draw_channel, LinkConfig};
use crate::error::{Error, Result};
use crate::estimator::{fit_or_consistent, levels_from_model, FitKind, ParametricLlrModel, ProbeBins};
use crate::infotheory::count_transitions;
use crate::ldpc::{BpDecoder, ParityCheckCode, LLR_CLIP};
use crate::link::{ergodic_samples, llr_values, LinkSampler};
use crate::modem::{Interleaver, ScramblerSequence};
use crate::quant::{design_boundaries_empirical, levels_from_transitions, project_levels, BinEdges, LlrQuantizer};
use crate::rng::{Domain, MasterSeed};

/// Stopping rule and decoder settings of one BER point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BerBudget {
    pub min_bit_errors: u64,
    /// Codewords with at least one information-bit error; 0 disables.
    pub min_frame_errors: u64,
    pub max_codewords: u64,
    /// Codewords simulated between checks of the stopping rule.
    pub batch: u64,
    pub max_iter: usize,
}

impl Default for BerBudget {
    fn default() -> Self {
        BerBudget { min_bit_errors: 200, min_frame_errors: 0, max_codewords: 2000, batch: 16, max_iter: 50 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BerPoint {
    pub snr_db: f64,
    pub ber: f64,
    pub codewords: u64,
    pub bit_errors: u64,
    pub frame_errors: u64,
    /// Sum over codewords of the squared bit-error count.
    pub bit_errors_sq: u64,
}

impl BerPoint {
    /// Standard error of `ber` with the codeword as the independent unit.
    /// BP errors arrive in bursts, so a per-bit binomial model understates it.
    pub fn stderr(&self, k: usize) -> f64 {
        if self.codewords < 2 {
            return f64::INFINITY;
        }
        let n = self.codewords as f64;
        let mean = self.bit_errors as f64 / n;
        let var = (self.bit_errors_sq as f64 / n - mean * mean).max(0.0) * n / (n - 1.0);
        (var / n).sqrt() / k as f64
    }
}

/// Decoder input for one channel LLR.
#[derive(Debug, Clone, PartialEq)]
pub enum SoftInput {
    /// Unquantized max-log LLRs, clipped.
    Raw,
    Quantized(LlrQuantizer),
    /// Quantizer levels negated: the canary for a flipped sign convention.
    Inverted(LlrQuantizer),
}

impl SoftInput {
    fn map(&self, llr: f64) -> f64 {
        match self {
            SoftInput::Raw => llr.clamp(-LLR_CLIP, LLR_CLIP),
            SoftInput::Quantized(q) => q.quantize(llr).1,
            SoftInput::Inverted(q) => -q.quantize(llr).1,
        }
    }
}

/// Information-bit errors of codeword `j`.
fn simulate_codeword(
    link: &LinkConfig,
    code: &ParityCheckCode,
    input: &SoftInput,
    decoder: &mut BpDecoder,
    sampler: &mut LinkSampler,
    max_iter: usize,
    seed: MasterSeed,
    j: u64,
) -> Result<u64> {
    let n = code.n();
    let r0 = link.bits_per_use();
    if n % r0 != 0 {
        return Err(Error::InvalidConfig(format!("block length {n} is not a multiple of {r0} bits per channel use")));
    }
    let mut rng = seed.stream(Domain::InfoBits, j);
    let info: Vec<u8> = (0..code.k()).map(|_| rng.random_range(0..2)).collect();
    let coded = code.encode(&info)?;
    let pi = Interleaver::random(n, &mut seed.stream(Domain::Interleaver, j));
    let scr = ScramblerSequence::random(n, &mut seed.stream(Domain::Scrambler, j));
    let tx = crate::modem::scramble(&pi.interleave(&coded)?, &scr)?;
    let mut chan = seed.stream(Domain::Channel, j);
    let mut llr = vec![0.0; n];
    for (bits, out) in tx.chunks(r0).zip(llr.chunks_mut(r0)) {
        let h = draw_channel(link, &mut chan);
        sampler.transmit(bits, &h, &mut chan, out)?;
    }
    // quantize in the scrambled domain, then undo scrambling and interleaving
    let soft: Vec<f64> = llr.iter().map(|&l| input.map(l)).collect();
    let soft = pi.deinterleave(&crate::modem::descramble_llrs(&soft, &scr)?)?;
    let result = decoder.decode(&soft, max_iter);
    let decided = code.extract_info(&result.codeword);
    Ok(decided.iter().zip(&info).filter(|(a, b)| a != b).count() as u64)
}

/// BER at one SNR, stopping after the batch in which both `min_bit_errors`
/// and `min_frame_errors` are reached or `max_codewords` have been decoded.
pub fn ber_point(
    template: &LinkConfig,
    snr_db: f64,
    code: &ParityCheckCode,
    input: &SoftInput,
    budget: &BerBudget,
    seed: MasterSeed,
) -> Result<BerPoint> {
    let link = template.at_snr_db(snr_db);
    let (mut done, mut errors, mut frames, mut sq) = (0u64, 0u64, 0u64, 0u64);
    while done < budget.max_codewords && (errors < budget.min_bit_errors || frames < budget.min_frame_errors) {
        let hi = (done + budget.batch.max(1)).min(budget.max_codewords);
        let batch: Vec<u64> = (done..hi)
            .into_par_iter()
            .map_init(
                || (BpDecoder::new(code), LinkSampler::new(&link)),
                |(dec, sampler), j| {
                    let sampler = sampler.as_mut().map_err(|e| e.clone())?;
                    simulate_codeword(&link, code, input, dec, sampler, budget.max_iter, seed, j)
                },
            )
            .collect::<Result<Vec<u64>>>()?;
        for e in batch {
            errors += e;
            frames += (e > 0) as u64;
            sq += e * e;
        }
        done = hi;
    }
    Ok(BerPoint {
        snr_db,
        ber: errors as f64 / (done * code.k() as u64) as f64,
        codewords: done,
        bit_errors: errors,
        frame_errors: frames,
        bit_errors_sq: sq,
    })
}

/// Offline design: boundaries and levels from labeled calibration LLRs, with
/// levels projected onto their bins.
pub fn design_offline(link: &LinkConfig, bits: u32, labeled_llrs: u64, seed: MasterSeed) -> Result<LlrQuantizer> {
    let uses = labeled_llrs.div_ceil(link.bits_per_use() as u64);
    let samples = ergodic_samples(link, seed, Domain::Calibration, uses)?;
    let edges = design_boundaries_empirical(&llr_values(&samples), 1 << bits)?;
    let levels = levels_from_transitions(&count_transitions(&samples, &edges).to_channel()?)?;
    LlrQuantizer::new(edges.clone(), project_levels(&edges, &levels))
}

/// Result of the blind design.
#[derive(Debug, Clone, PartialEq)]
pub struct OnlineDesign {
    pub quantizer: LlrQuantizer,
    pub model: ParametricLlrModel,
    pub probes: ProbeBins,
    pub kind: FitKind,
}

/// Blind design from unlabeled LLRs: empirical boundaries, levels from the
/// fitted two-sided exponential model.
pub fn design_online_from(llrs: &[f64], bits: u32) -> Result<OnlineDesign> {
    let edges: BinEdges = design_boundaries_empirical(llrs, 1 << bits)?;
    let probes = ProbeBins::from_median(llrs)?;
    let (p1, p2) = probes.empirical(llrs);
    let (model, kind) = fit_or_consistent(p1, p2, &probes)?;
    let levels = project_levels(&edges, &levels_from_model(&model, &edges));
    let quantizer = LlrQuantizer::new(edges, levels)?;
    Ok(OnlineDesign { quantizer, model, probes, kind })
}

/// Blind design from `unlabeled_llrs` fresh LLRs of the link.
pub fn design_online(link: &LinkConfig, bits: u32, unlabeled_llrs: u64, seed: MasterSeed) -> Result<OnlineDesign> {
    let uses = unlabeled_llrs.div_ceil(link.bits_per_use() as u64);
    let llrs = llr_values(&ergodic_samples(link, seed, Domain::Online, uses)?);
    design_online_from(&llrs, bits)
}

/// SNR where the BER curve first crosses `level`, interpolating `log10 BER`
/// linearly between grid points; `None` if it never does.
pub fn waterfall_snr(points: &[BerPoint], level: f64) -> Option<f64> {
    let lv = level.log10();
    let logb = |p: &BerPoint| if p.bit_errors == 0 { f64::NEG_INFINITY } else { p.ber.log10() };
    if let Some(first) = points.first() {
        if logb(first) <= lv {
            return Some(first.snr_db);
        }
    }
    for w in points.windows(2) {
        let (a, b) = (logb(&w[0]), logb(&w[1]));
        if a > lv && b <= lv {
            if !b.is_finite() {
                return Some(w[1].snr_db);
            }
            let t = (a - lv) / (a - b);
            return Some(w[0].snr_db + t * (w[1].snr_db - w[0].snr_db));
        }
    }
    None
}
