//! Monte-Carlo generation of labeled LLRs through
//! scramble -> map -> channel -> max-log -> descramble.
//!
//! Trial `i` draws everything it needs from its own stream, so results do not
//! depend on how trials are spread over worker threads.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::channel::{draw_channel, ChannelMatrix, LinkConfig};
use crate::demod::{LabeledLlrSample, MaxLogDemodulator};
use crate::error::{Error, Result};
use crate::modem::{map_bits, Constellation};
use crate::rng::{Domain, MasterSeed, Stream};

const CHUNK: u64 = 2048;

/// Transmits one channel use of random code bits and writes the descrambled
/// LLRs and true code bits. `h = None` draws a fresh channel.
pub struct LinkSampler {
    cfg: LinkConfig,
    demod: MaxLogDemodulator,
    coded: Vec<u8>,
    sent: Vec<u8>,
    llr: Vec<f64>,
}

impl LinkSampler {
    pub fn new(cfg: &LinkConfig) -> Result<Self> {
        cfg.validate()?;
        let c = Constellation::new(cfg.constellation);
        let r0 = cfg.bits_per_use();
        Ok(LinkSampler {
            cfg: cfg.clone(),
            demod: MaxLogDemodulator::new(c, cfg.mt),
            coded: vec![0; r0],
            sent: vec![0; r0],
            llr: vec![0.0; r0],
        })
    }

    pub fn config(&self) -> &LinkConfig {
        &self.cfg
    }

    pub fn bits_per_use(&self) -> usize {
        self.coded.len()
    }

    /// Sends `bits` (already scrambled) once; LLRs land in `out`.
    pub fn transmit(&mut self, bits: &[u8], h: &ChannelMatrix, rng: &mut Stream, out: &mut [f64]) -> Result<()> {
        let x = map_bits(bits, self.demod.constellation(), self.cfg.mt)?;
        let y = receive(&self.cfg, h, &x, rng)?;
        self.demod.demodulate_into(&y, h, self.cfg.sigma2, out)
    }

    /// One channel use with random code bits and a random scrambler.
    pub fn labeled_use(&mut self, h: Option<&ChannelMatrix>, rng: &mut Stream, out: &mut Vec<LabeledLlrSample>) -> Result<()> {
        let owned;
        let h = match h {
            Some(h) => h,
            None => {
                owned = draw_channel(&self.cfg, rng);
                &owned
            }
        };
        let r0 = self.coded.len();
        for l in 0..r0 {
            let c: u8 = rng.random_range(0..2);
            let p: u8 = rng.random_range(0..2);
            self.coded[l] = c;
            self.sent[l] = c ^ p;
        }
        let bits = std::mem::take(&mut self.sent);
        let mut llr = std::mem::take(&mut self.llr);
        let res = self.transmit(&bits, h, rng, &mut llr);
        for l in 0..r0 {
            // descrambling flips the LLR wherever the scrambler flipped the bit
            let flip = bits[l] ^ self.coded[l];
            let v = if flip == 1 { -llr[l] } else { llr[l] };
            out.push(LabeledLlrSample { llr: v, bit: self.coded[l], layer_bit_index: l as u16 });
        }
        self.sent = bits;
        self.llr = llr;
        res
    }
}

/// `y` for the transmitted vector, using the real-valued model for SISO BPSK.
pub fn receive(cfg: &LinkConfig, h: &ChannelMatrix, x: &[Complex64], rng: &mut Stream) -> Result<Vec<Complex64>> {
    if cfg.is_real_siso() {
        let w: f64 = rng.sample(StandardNormal);
        let y = h.get(0, 0).re * x[0].re + (0.5 * cfg.sigma2).sqrt() * w;
        Ok(vec![Complex64::new(y, 0.0)])
    } else {
        crate::channel::apply_channel(h, x, cfg.sigma2, rng)
    }
}

/// Labeled LLRs of `uses` independent fast-fading channel uses, in trial order.
pub fn ergodic_samples(cfg: &LinkConfig, seed: MasterSeed, domain: Domain, uses: u64) -> Result<Vec<LabeledLlrSample>> {
    let chunks: Vec<u64> = (0..uses.div_ceil(CHUNK)).collect();
    let parts = chunks
        .par_iter()
        .map(|&c| -> Result<Vec<LabeledLlrSample>> {
            let mut s = LinkSampler::new(cfg)?;
            let lo = c * CHUNK;
            let hi = (lo + CHUNK).min(uses);
            let mut out = Vec::with_capacity(((hi - lo) as usize) * s.bits_per_use());
            for i in lo..hi {
                let mut rng = seed.stream(domain, i);
                s.labeled_use(None, &mut rng, &mut out)?;
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(parts.concat())
}

/// Labeled LLRs of `uses` channel uses through the fixed channel `h`.
///
/// Noise and bits for use `i` come from stream `i` of `domain` under `seed`,
/// so the same seed gives common random numbers across noise levels.
pub fn fixed_channel_samples(
    cfg: &LinkConfig,
    h: &ChannelMatrix,
    seed: MasterSeed,
    domain: Domain,
    uses: u64,
) -> Result<Vec<LabeledLlrSample>> {
    if h.rows() != cfg.mr || h.cols() != cfg.mt {
        return Err(Error::DimensionMismatch { expected: cfg.mr * cfg.mt, got: h.rows() * h.cols() });
    }
    let mut s = LinkSampler::new(cfg)?;
    let mut out = Vec::with_capacity(uses as usize * s.bits_per_use());
    for i in 0..uses {
        let mut rng = seed.stream(domain, i);
        s.labeled_use(Some(h), &mut rng, &mut out)?;
    }
    Ok(out)
}

pub fn llr_values(samples: &[LabeledLlrSample]) -> Vec<f64> {
    samples.iter().map(|s| s.llr).collect()
}
