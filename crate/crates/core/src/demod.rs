//! Max-log LLRs by exhaustive search over all `M^Mt` transmit vectors.

use num_complex::Complex64;

use crate::channel::ChannelMatrix;
use crate::error::{Error, Result};
use crate::modem::Constellation;

/// One LLR together with the code bit it describes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LabeledLlrSample {
    pub llr: f64,
    pub bit: u8,
    /// Position of the bit within the `R0` bits of a channel use (0-based).
    pub layer_bit_index: u16,
}

/// Reusable max-log demodulator for a fixed constellation and layer count.
///
/// The `M^Mt` squared distances are computed once per received vector and
/// shared by the `2 R0` minimisations. Positive LLRs favour bit 1.
#[derive(Debug, Clone)]
pub struct MaxLogDemodulator {
    constellation: Constellation,
    mt: usize,
    bits_per_use: usize,
    // scratch space, sized on construction
    columns: Vec<Complex64>,
    distances: Vec<f64>,
    residual: Vec<Complex64>,
}

impl MaxLogDemodulator {
    pub fn new(constellation: Constellation, mt: usize) -> Self {
        let bits_per_use = constellation.bits_per_symbol() * mt;
        let candidates = constellation.size().pow(mt as u32);
        MaxLogDemodulator {
            constellation,
            mt,
            bits_per_use,
            columns: Vec::new(),
            distances: vec![0.0; candidates],
            residual: Vec::new(),
        }
    }

    pub fn bits_per_use(&self) -> usize {
        self.bits_per_use
    }

    pub fn constellation(&self) -> &Constellation {
        &self.constellation
    }

    /// Writes the `R0` LLRs of `y` into `out`.
    pub fn demodulate_into(&mut self, y: &[Complex64], h: &ChannelMatrix, sigma2: f64, out: &mut [f64]) -> Result<()> {
        let mr = h.rows();
        if h.cols() != self.mt {
            return Err(Error::DimensionMismatch { expected: self.mt, got: h.cols() });
        }
        if y.len() != mr {
            return Err(Error::DimensionMismatch { expected: mr, got: y.len() });
        }
        if out.len() != self.bits_per_use {
            return Err(Error::DimensionMismatch { expected: self.bits_per_use, got: out.len() });
        }
        if !(sigma2 > 0.0) {
            return Err(Error::InvalidConfig("noise variance must be positive".into()));
        }
        let m_size = self.constellation.size();
        // columns[(k * M + p) * mr + r] = H[r][k] * point(p)
        self.columns.clear();
        for k in 0..self.mt {
            for p in 0..m_size {
                let s = self.constellation.point(p);
                for r in 0..mr {
                    self.columns.push(h.get(r, k) * s);
                }
            }
        }
        self.fill_distances(y, mr);

        let r0 = self.bits_per_use;
        let mut mins = [[f64::INFINITY; 64]; 2];
        for (cand, &d) in self.distances.iter().enumerate() {
            for (l, shift) in (0..r0).rev().enumerate() {
                let m = &mut mins[(cand >> shift) & 1][l];
                *m = m.min(d);
            }
        }
        for l in 0..r0 {
            out[l] = (mins[0][l] - mins[1][l]) / sigma2;
        }
        Ok(())
    }

    pub fn demodulate(&mut self, y: &[Complex64], h: &ChannelMatrix, sigma2: f64) -> Result<Vec<f64>> {
        let mut out = vec![0.0; self.bits_per_use];
        self.demodulate_into(y, h, sigma2, &mut out)?;
        Ok(out)
    }

    /// Candidate index concatenates the layer labels, layer 0 most significant.
    fn fill_distances(&mut self, y: &[Complex64], mr: usize) {
        let m_size = self.constellation.size();
        let mut residual = std::mem::take(&mut self.residual);
        residual.clear();
        residual.resize(mr * (self.mt + 1), Complex64::new(0.0, 0.0));
        residual[..mr].copy_from_slice(y);
        let mut digits = [0usize; 64];
        let total = self.distances.len();
        // depth-first walk with partial residuals per layer
        let mut level = 0;
        let mut cand = 0;
        loop {
            if level == self.mt {
                let r = &residual[self.mt * mr..(self.mt + 1) * mr];
                self.distances[cand] = r.iter().map(|v| v.norm_sqr()).sum();
                cand += 1;
                if cand == total {
                    break;
                }
                // advance odometer
                level -= 1;
                while digits[level] + 1 == m_size {
                    digits[level] = 0;
                    level -= 1;
                }
                digits[level] += 1;
            }
            let col = &self.columns[(level * m_size + digits[level]) * mr..][..mr];
            let (head, tail) = residual.split_at_mut((level + 1) * mr);
            let prev = &head[level * mr..];
            for r in 0..mr {
                tail[r] = prev[r] - col[r];
            }
            level += 1;
        }
        self.residual = residual;
    }
}

/// Max-log LLRs for all `R0` code bits of one received vector.
pub fn maxlog_llr(y: &[Complex64], h: &ChannelMatrix, sigma2: f64, c: &Constellation, mt: usize) -> Result<Vec<f64>> {
    MaxLogDemodulator::new(c.clone(), mt).demodulate(y, h, sigma2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{apply_channel, draw_channel, Fading, LinkConfig};
    use crate::modem::{map_bits, ConstellationKind};
    use crate::rng::{Domain, MasterSeed};
    use rand::Rng;

    /// Naive reference: enumerate every transmit vector, form `H x` directly.
    fn brute_force(y: &[Complex64], h: &ChannelMatrix, sigma2: f64, c: &Constellation, mt: usize) -> Vec<f64> {
        let m = c.bits_per_symbol();
        let r0 = m * mt;
        let mut min = vec![[f64::INFINITY; 2]; r0];
        for word in 0..(1usize << r0) {
            let bits: Vec<u8> = (0..r0).map(|l| ((word >> (r0 - 1 - l)) & 1) as u8).collect();
            let x = map_bits(&bits, c, mt).unwrap();
            let mut d = 0.0;
            for r in 0..h.rows() {
                let mut hx = Complex64::new(0.0, 0.0);
                for k in 0..mt {
                    hx += h.get(r, k) * x[k];
                }
                d += (y[r] - hx).norm_sqr();
            }
            for l in 0..r0 {
                let b = bits[l] as usize;
                min[l][b] = min[l][b].min(d);
            }
        }
        min.iter().map(|m| (m[0] - m[1]) / sigma2).collect()
    }

    #[test]
    fn matches_brute_force_2x2_qam16() {
        let c = Constellation::new(ConstellationKind::Qam16Gray);
        let cfg = LinkConfig::new(2, 2, 0.3, ConstellationKind::Qam16Gray, Fading::Ergodic).unwrap();
        let mut demod = MaxLogDemodulator::new(c.clone(), 2);
        for t in 0..50 {
            let mut rng = MasterSeed(11).stream(Domain::Test, t);
            let h = draw_channel(&cfg, &mut rng);
            let bits: Vec<u8> = (0..8).map(|_| rng.random::<bool>() as u8).collect();
            let x = map_bits(&bits, &c, 2).unwrap();
            let y = apply_channel(&h, &x, cfg.sigma2, &mut rng).unwrap();
            let fast = demod.demodulate(&y, &h, cfg.sigma2).unwrap();
            let slow = brute_force(&y, &h, cfg.sigma2, &c, 2);
            for (a, b) in fast.iter().zip(&slow) {
                assert!((a - b).abs() <= 1e-10 * b.abs().max(1.0), "{a} vs {b}");
            }
        }
    }

    #[test]
    fn noiseless_signs_follow_labels() {
        for (kind, mt) in [(ConstellationKind::Bpsk, 2), (ConstellationKind::QpskGray, 2), (ConstellationKind::Qam16Gray, 2)] {
            let c = Constellation::new(kind);
            let cfg = LinkConfig::new(mt, 2, 1.0, kind, Fading::Ergodic).unwrap();
            let mut rng = MasterSeed(12).stream(Domain::Test, 0);
            for _ in 0..20 {
                let h = draw_channel(&cfg, &mut rng);
                let bits: Vec<u8> = (0..c.bits_per_symbol() * mt).map(|_| rng.random::<bool>() as u8).collect();
                let y = h.apply(&map_bits(&bits, &c, mt).unwrap()).unwrap();
                let llr = maxlog_llr(&y, &h, 1.0, &c, mt).unwrap();
                for (b, l) in bits.iter().zip(&llr) {
                    assert_eq!(*b == 1, *l > 0.0);
                }
            }
        }
    }

    #[test]
    fn bpsk_antipodal_and_noise_scaling() {
        let c = Constellation::new(ConstellationKind::Bpsk);
        let cfg = LinkConfig::new(2, 2, 1.0, ConstellationKind::Bpsk, Fading::Ergodic).unwrap();
        let mut rng = MasterSeed(13).stream(Domain::Test, 0);
        let h = draw_channel(&cfg, &mut rng);
        let y = apply_channel(&h, &map_bits(&[1, 0], &c, 2).unwrap(), 0.5, &mut rng).unwrap();
        let neg: Vec<Complex64> = y.iter().map(|v| -v).collect();
        let a = maxlog_llr(&y, &h, 0.5, &c, 2).unwrap();
        let b = maxlog_llr(&neg, &h, 0.5, &c, 2).unwrap();
        let s = maxlog_llr(&y, &h, 1.5, &c, 2).unwrap();
        for i in 0..2 {
            assert!((a[i] + b[i]).abs() < 1e-12);
            assert!((s[i] - a[i] / 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn dimension_errors() {
        let c = Constellation::new(ConstellationKind::QpskGray);
        let h = ChannelMatrix::identity(2);
        assert!(maxlog_llr(&[Complex64::new(0.0, 0.0)], &h, 1.0, &c, 2).is_err());
        assert!(maxlog_llr(&[Complex64::new(0.0, 0.0); 2], &h, 1.0, &c, 1).is_err());
    }
}
