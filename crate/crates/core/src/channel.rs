//! Flat Rayleigh-fading MIMO channel, `y = H x + w`.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::modem::ConstellationKind;

/// Fading regime of a link.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Fading {
    /// New channel matrix for every channel use.
    Ergodic,
    /// One channel matrix per block / codeword.
    QuasiStatic,
}

/// Antennas, modulation, noise level and fading regime of a link.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinkConfig {
    pub mt: usize,
    pub mr: usize,
    /// Noise variance per receive antenna (complex), linear.
    pub sigma2: f64,
    pub constellation: ConstellationKind,
    pub fading: Fading,
}

impl LinkConfig {
    pub fn new(mt: usize, mr: usize, sigma2: f64, constellation: ConstellationKind, fading: Fading) -> Result<Self> {
        let cfg = LinkConfig { mt, mr, sigma2, constellation, fading };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.mt == 0 || self.mr == 0 {
            return Err(Error::InvalidConfig("antenna counts must be at least 1".into()));
        }
        if !(self.sigma2 > 0.0 && self.sigma2.is_finite()) {
            return Err(Error::InvalidConfig(format!("noise variance must be positive, got {}", self.sigma2)));
        }
        Ok(())
    }

    /// Copy of this configuration at the given SNR (see [`sigma2_from_snr_db`]).
    pub fn at_snr_db(&self, snr_db: f64) -> LinkConfig {
        LinkConfig { sigma2: sigma2_from_snr_db(snr_db, self.mt), ..self.clone() }
    }

    pub fn snr_db(&self) -> f64 {
        snr_db_from_sigma2(self.sigma2, self.mt)
    }

    /// BPSK over a single antenna pair runs on the real-valued model
    /// `y = h x + w`, `h ~ N(0,1)`, `w ~ N(0, sigma2/2)`.
    pub fn is_real_siso(&self) -> bool {
        self.constellation == ConstellationKind::Bpsk && self.mt == 1 && self.mr == 1
    }

    /// Code bits carried per channel use, `m * Mt`.
    pub fn bits_per_use(&self) -> usize {
        self.constellation.bits_per_symbol() * self.mt
    }
}

/// SNR is `Mt * Es / sigma2` with unit symbol energy.
pub fn sigma2_from_snr_db(snr_db: f64, mt: usize) -> f64 {
    mt as f64 / 10f64.powf(snr_db / 10.0)
}

pub fn snr_db_from_sigma2(sigma2: f64, mt: usize) -> f64 {
    10.0 * (mt as f64 / sigma2).log10()
}

/// An `Mr x Mt` channel realisation, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelMatrix {
    mr: usize,
    mt: usize,
    entries: Vec<Complex64>,
}

impl ChannelMatrix {
    pub fn from_entries(mr: usize, mt: usize, entries: Vec<Complex64>) -> Result<Self> {
        if entries.len() != mr * mt {
            return Err(Error::DimensionMismatch { expected: mr * mt, got: entries.len() });
        }
        if entries.iter().any(|h| !h.re.is_finite() || !h.im.is_finite()) {
            return Err(Error::InvalidConfig("channel entries must be finite".into()));
        }
        Ok(ChannelMatrix { mr, mt, entries })
    }

    pub fn identity(n: usize) -> Self {
        let mut entries = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            entries[i * n + i] = Complex64::new(1.0, 0.0);
        }
        ChannelMatrix { mr: n, mt: n, entries }
    }

    pub fn rows(&self) -> usize {
        self.mr
    }

    pub fn cols(&self) -> usize {
        self.mt
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.mt + col]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    /// `H x`
    pub fn apply(&self, x: &[Complex64]) -> Result<Vec<Complex64>> {
        if x.len() != self.mt {
            return Err(Error::DimensionMismatch { expected: self.mt, got: x.len() });
        }
        Ok((0..self.mr)
            .map(|r| self.entries[r * self.mt..(r + 1) * self.mt].iter().zip(x).map(|(h, x)| h * x).sum())
            .collect())
    }
}

fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R, variance: f64) -> Complex64 {
    let s = (0.5 * variance).sqrt();
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(s * re, s * im)
}

/// Draws `H` with i.i.d. `CN(0,1)` entries, or a real `N(0,1)` gain on the
/// real-valued SISO BPSK path.
pub fn draw_channel<R: Rng + ?Sized>(cfg: &LinkConfig, rng: &mut R) -> ChannelMatrix {
    let entries = if cfg.is_real_siso() {
        vec![Complex64::new(rng.sample(StandardNormal), 0.0)]
    } else {
        (0..cfg.mr * cfg.mt).map(|_| complex_gaussian(rng, 1.0)).collect()
    };
    ChannelMatrix { mr: cfg.mr, mt: cfg.mt, entries }
}

/// `y = H x + w` with `w ~ CN(0, sigma2 I)`.
pub fn apply_channel<R: Rng + ?Sized>(
    h: &ChannelMatrix,
    x: &[Complex64],
    sigma2: f64,
    rng: &mut R,
) -> Result<Vec<Complex64>> {
    if !(sigma2 > 0.0) {
        return Err(Error::InvalidConfig("noise variance must be positive".into()));
    }
    let mut y = h.apply(x)?;
    for v in &mut y {
        *v += complex_gaussian(rng, sigma2);
    }
    Ok(y)
}

/// Real-valued SISO model `y = h x + w`, `w ~ N(0, sigma2/2)`.
pub fn apply_channel_real<R: Rng + ?Sized>(h: f64, x: f64, sigma2: f64, rng: &mut R) -> f64 {
    let w: f64 = rng.sample(StandardNormal);
    h * x + (0.5 * sigma2).sqrt() * w
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{Domain, MasterSeed};

    fn cfg(mt: usize, mr: usize) -> LinkConfig {
        LinkConfig::new(mt, mr, 0.5, ConstellationKind::Qam16Gray, Fading::Ergodic).unwrap()
    }

    #[test]
    fn unit_average_gain() {
        let c = cfg(1, 1);
        let mut rng = MasterSeed(1).stream(Domain::Test, 0);
        let n = 1_000_000;
        let mean: f64 = (0..n).map(|_| draw_channel(&c, &mut rng).get(0, 0).norm_sqr()).sum::<f64>() / n as f64;
        assert!((mean - 1.0).abs() < 0.01, "{mean}");
    }

    #[test]
    fn entries_are_uncorrelated() {
        let c = cfg(2, 2);
        let mut rng = MasterSeed(2).stream(Domain::Test, 0);
        let n = 1_000_000;
        let mut corr = Complex64::new(0.0, 0.0);
        for _ in 0..n {
            let h = draw_channel(&c, &mut rng);
            corr += h.get(0, 0) * h.get(1, 1).conj();
        }
        assert!(corr.norm() / (n as f64) < 0.01);
    }

    #[test]
    fn same_seed_same_matrix() {
        let c = cfg(2, 2);
        let a = draw_channel(&c, &mut MasterSeed(3).stream(Domain::Channel, 9));
        let b = draw_channel(&c, &mut MasterSeed(3).stream(Domain::Channel, 9));
        assert_eq!(a, b);
    }

    #[test]
    fn noiseless_limit() {
        let c = cfg(2, 2);
        let mut rng = MasterSeed(4).stream(Domain::Test, 0);
        let h = draw_channel(&c, &mut rng);
        let x = [Complex64::new(0.3, -0.1), Complex64::new(-0.9, 0.9)];
        let y = apply_channel(&h, &x, 1e-12, &mut rng).unwrap();
        let hx = h.apply(&x).unwrap();
        for (a, b) in y.iter().zip(&hx) {
            assert!((a - b).norm() < 1e-4);
        }
    }

    #[test]
    fn noise_variance_matches() {
        let h = ChannelMatrix::identity(2);
        let x = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)];
        let mut rng = MasterSeed(5).stream(Domain::Test, 0);
        let sigma2 = 0.3;
        let n = 1_000_000;
        let mut acc = [0.0; 2];
        for _ in 0..n {
            let y = apply_channel(&h, &x, sigma2, &mut rng).unwrap();
            for i in 0..2 {
                acc[i] += (y[i] - x[i]).norm_sqr();
            }
        }
        for a in acc {
            assert!((a / n as f64 / sigma2 - 1.0).abs() < 0.01);
        }
    }

    #[test]
    fn real_part_of_complex_model_is_the_real_model() {
        // projecting CN(0, s2) onto the real axis leaves variance s2/2
        let h = ChannelMatrix::identity(1);
        let sigma2 = 0.8;
        let n = 400_000;
        let mut rng = MasterSeed(6).stream(Domain::Test, 0);
        let mut complex_re = 0.0;
        let mut real = 0.0;
        for _ in 0..n {
            let y = apply_channel(&h, &[Complex64::new(1.0, 0.0)], sigma2, &mut rng).unwrap();
            complex_re += (y[0].re - 1.0).powi(2);
            real += (apply_channel_real(1.0, 1.0, sigma2, &mut rng) - 1.0).powi(2);
        }
        let (a, b) = (complex_re / n as f64, real / n as f64);
        assert!((a / (sigma2 / 2.0) - 1.0).abs() < 0.01);
        assert!((b / (sigma2 / 2.0) - 1.0).abs() < 0.01);
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let h = ChannelMatrix::identity(2);
        let mut rng = MasterSeed(7).stream(Domain::Test, 0);
        assert!(matches!(
            apply_channel(&h, &[Complex64::new(1.0, 0.0)], 1.0, &mut rng),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn snr_convention() {
        assert!((sigma2_from_snr_db(0.0, 1) - 1.0).abs() < 1e-15);
        assert!((sigma2_from_snr_db(10.0, 2) - 0.2).abs() < 1e-15);
        assert!((snr_db_from_sigma2(0.2, 2) - 10.0).abs() < 1e-12);
        assert!(LinkConfig::new(0, 1, 1.0, ConstellationKind::Bpsk, Fading::Ergodic).is_err());
        assert!(LinkConfig::new(1, 1, 0.0, ConstellationKind::Bpsk, Fading::Ergodic).is_err());
    }
}
