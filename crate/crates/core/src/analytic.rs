//! SISO BPSK over real Rayleigh fading, `y = h x + w` with `h ~ N(0, 1)` and
//! `w ~ N(0, sigma2 / 2)`.
//!
//! All LLRs here are in max-log units, `L = 4 h y / sigma2`, which for BPSK is
//! the exact LLR. Given `h` and `c = 1`, `L ~ N(gamma, 2 gamma)` with
//! `gamma = 4 h^2 / sigma2`.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::infotheory::{DiscreteChannel, OutageEstimate};
use crate::numeric::{brent, integrate, integrate_to_infinity};
use crate::quant::BinEdges;
use crate::rng::{Domain, MasterSeed};
use crate::special::{bessel_k0e, q_function};

/// Ratio between the max-log LLR and [`siso_bpsk_llr`].
pub const MAXLOG_SCALE: f64 = 4.0;

const QUAD_TOL: f64 = 1e-13;

/// `h y / sigma2`.
pub fn siso_bpsk_llr(h: f64, y: f64, sigma2: f64) -> f64 {
    h * y / sigma2
}

/// Eigenvalues `(1 +- sqrt(1 + v)) / 2` of the quadratic form `[[1, s/2], [s/2, 0]]`
/// with `s^2 = v`, the noise-to-gain variance ratio.
pub fn quadratic_form_eigenvalues(v: f64) -> (f64, f64) {
    let r = (1.0 + v).sqrt();
    (0.5 * (1.0 + r), 0.5 * (1.0 - r))
}

/// Unconditional and conditional LLR densities over ergodic fading.
///
/// With `nu = 4 / sigma2` and `c = sqrt(1 + sigma2 / 2) / 2`,
/// `f(xi | c=1) = exp(xi / 2) K0(c |xi|) / (pi sqrt(2 nu))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SisoLlrDensity {
    sigma2: f64,
    c: f64,
    norm: f64,
}

impl SisoLlrDensity {
    pub fn new(sigma2: f64) -> Result<Self> {
        if !(sigma2 > 0.0) || !sigma2.is_finite() {
            return Err(Error::InvalidConfig(format!("sigma2 = {sigma2} must be positive")));
        }
        let (s1, s2) = quadratic_form_eigenvalues(0.5 * sigma2);
        let c = 0.5 * (s1 - s2);
        let nu = MAXLOG_SCALE / sigma2;
        Ok(SisoLlrDensity { sigma2, c, norm: 1.0 / (std::f64::consts::PI * (2.0 * nu).sqrt()) })
    }

    pub fn sigma2(&self) -> f64 {
        self.sigma2
    }

    /// Decay rate of the heavier (positive) tail of `f(xi | c=1)`.
    fn slow_rate(&self) -> f64 {
        // c - 1/2 without cancellation
        0.125 * self.sigma2 / (self.c + 0.5)
    }

    /// `f(xi | c=1)` at `xi = s t`, `t > 0`, `s = +-1`.
    fn half(&self, t: f64, s: f64) -> f64 {
        let rate = if s > 0.0 { self.slow_rate() } else { self.c + 0.5 };
        self.norm * (-rate * t).exp() * bessel_k0e(self.c * t)
    }

    /// `f(xi | c = bit)`.
    pub fn conditional(&self, xi: f64, bit: u8) -> Result<f64> {
        if xi == 0.0 {
            return Err(Error::SingularPoint);
        }
        let x = if bit == 1 { xi } else { -xi };
        Ok(self.half(x.abs(), x.signum()))
    }

    /// Unconditional density, the equal mixture of both conditions.
    pub fn density(&self, xi: f64) -> Result<f64> {
        if xi == 0.0 {
            return Err(Error::SingularPoint);
        }
        let t = xi.abs();
        Ok(0.5 * (self.half(t, 1.0) + self.half(t, -1.0)))
    }

    /// `int_a^b f(s t | c=1) dt` for `0 <= a < b <= inf`.
    fn half_mass(&self, s: f64, a: f64, b: f64) -> Result<f64> {
        debug_assert!(0.0 <= a && a < b);
        let f = |t: f64| self.half(t, s);
        let mut total = 0.0;
        let mut lo = a;
        if lo < 1.0 {
            // t = u^2 removes the logarithmic singularity at the origin
            let top = b.min(1.0);
            total += integrate(|u: f64| 2.0 * u * f(u * u), lo.sqrt(), top.sqrt(), QUAD_TOL, 1e-13)?;
            lo = top;
        }
        if lo < b {
            if b.is_finite() {
                total += integrate(f, lo, b, QUAD_TOL, 1e-13)?;
            } else {
                let rate = if s > 0.0 { self.slow_rate() } else { self.c + 0.5 };
                // K0e decreases, so the integrand decays at least as fast as exp(-rate t)
                total += integrate_to_infinity(f, lo, 1.0 / rate, QUAD_TOL, |x| f(x) / rate)?;
            }
        }
        Ok(total)
    }

    /// `Pr{L in [lo, hi) | c = 1}`.
    pub fn conditional_mass(&self, lo: f64, hi: f64) -> Result<f64> {
        if !(lo < hi) {
            return Err(Error::Domain(format!("empty interval [{lo}, {hi})")));
        }
        let piece = |s: f64, a: f64, b: f64| if a < b { self.half_mass(s, a, b) } else { Ok(0.0) };
        let neg = piece(-1.0, (-hi).max(0.0), -lo.min(0.0))?;
        let pos = piece(1.0, lo.max(0.0), hi.max(0.0))?;
        Ok(neg + pos)
    }

    /// Unconditional CDF; exactly 1/2 at the origin.
    pub fn cdf(&self, x: f64) -> Result<f64> {
        if x == 0.0 {
            return Ok(0.5);
        }
        let t = x.abs();
        let inner = 0.5 * (self.half_mass(1.0, 0.0, t)? + self.half_mass(-1.0, 0.0, t)?);
        Ok(if x > 0.0 { 0.5 + inner } else { 0.5 - inner })
    }

    pub fn inverse_cdf(&self, u: f64) -> Result<f64> {
        if !(u > 0.0 && u < 1.0) {
            return Err(Error::Domain(format!("probability {u} outside (0, 1)")));
        }
        if u == 0.5 {
            return Ok(0.0);
        }
        let target = u.max(1.0 - u);
        let mut hi = 1.0 / self.sigma2;
        while self.cdf(hi)? < target {
            hi *= 2.0;
            if !hi.is_finite() {
                return Err(Error::Domain(format!("quantile {u} not bracketed")));
            }
        }
        let mut err = None;
        let x = brent(
            |x| match self.cdf(x) {
                Ok(v) => v - target,
                Err(e) => {
                    err = Some(e);
                    0.0
                }
            },
            0.0,
            hi,
            1e-11,
        )?;
        if let Some(e) = err {
            return Err(e);
        }
        Ok(if u > 0.5 { x } else { -x })
    }

    /// Equiprobable boundaries for `bins` outputs.
    pub fn equiprobable_edges(&self, bins: usize) -> Result<BinEdges> {
        if !bins.is_power_of_two() || bins < 2 {
            return Err(Error::InvalidQuantizer(format!("{bins} bins is not a power of two >= 2")));
        }
        let half = bins / 2;
        let mut upper = Vec::with_capacity(half - 1);
        for k in 1..half {
            upper.push(self.inverse_cdf((half + k) as f64 / bins as f64)?);
        }
        let mut b: Vec<f64> = upper.iter().rev().map(|x| -x).collect();
        b.push(0.0);
        b.extend(upper);
        BinEdges::new(b)
    }

    /// Transition matrix of the quantizer `edges` averaged over fading.
    pub fn transitions(&self, edges: &BinEdges) -> Result<DiscreteChannel> {
        let k = edges.bins();
        let p1 = (0..k)
            .map(|j| {
                let (lo, hi) = edges.bin_limits(j);
                self.conditional_mass(lo, hi)
            })
            .collect::<Result<Vec<f64>>>()?;
        let p0 = p1.iter().rev().copied().collect();
        DiscreteChannel::from_unnormalized(p0, p1)
    }

    /// `1 - E[log2(1 + exp(-L)) | c = 1]`, the unquantized BPSK capacity.
    pub fn unquantized_capacity(&self) -> Result<f64> {
        let lg = |x: f64| (-x).exp().ln_1p() / std::f64::consts::LN_2;
        let pos = self.weighted(1.0, |t| lg(t))?;
        let neg = self.weighted(-1.0, |t| t / std::f64::consts::LN_2 + lg(t))?;
        Ok((1.0 - pos - neg).clamp(0.0, 1.0))
    }

    fn weighted<G: Fn(f64) -> f64>(&self, s: f64, g: G) -> Result<f64> {
        let f = |t: f64| self.half(t, s) * g(t);
        let near = integrate(|u: f64| 2.0 * u * f(u * u), 0.0, 1.0, QUAD_TOL, 1e-13)?;
        let rate = if s > 0.0 { self.slow_rate() } else { self.c + 0.5 };
        let far = integrate_to_infinity(f, 1.0, 1.0 / rate, QUAD_TOL, |x| 2.0 * f(x) / rate)?;
        Ok(near + far)
    }
}

/// Quantizer resolution: word length in bits or no quantization.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Resolution {
    Bits(u32),
    Unquantized,
}

impl Resolution {
    pub fn bins(self) -> Option<usize> {
        match self {
            Resolution::Bits(q) => Some(1usize << q),
            Resolution::Unquantized => None,
        }
    }
}

/// Ergodic capacity in bpcu from the LLR density, quantized with equiprobable
/// bins or unquantized.
pub fn ergodic_capacity_semianalytic(sigma2: f64, resolution: Resolution) -> Result<f64> {
    let d = SisoLlrDensity::new(sigma2)?;
    match resolution.bins() {
        None => d.unquantized_capacity(),
        Some(k) => Ok(d.transitions(&d.equiprobable_edges(k)?)?.mutual_information()),
    }
}

/// Conditional LLR mean for a fixed gain, `4 h^2 / sigma2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InstantaneousSnr {
    gamma: f64,
}

impl InstantaneousSnr {
    pub fn new(gamma: f64) -> Result<Self> {
        if !(gamma >= 0.0) || !gamma.is_finite() {
            return Err(Error::InvalidConfig(format!("gamma = {gamma} must be finite and >= 0")));
        }
        Ok(InstantaneousSnr { gamma })
    }

    pub fn from_gain(h: f64, sigma2: f64) -> Result<Self> {
        InstantaneousSnr::new(MAXLOG_SCALE * h * h / sigma2)
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }
}

/// `Q(a) - Q(b)` for `a <= b` without cancellation in either tail.
fn gauss_mass(a: f64, b: f64) -> f64 {
    if a >= 0.0 {
        q_function(a) - q_function(b)
    } else if b <= 0.0 {
        q_function(-b) - q_function(-a)
    } else {
        1.0 - q_function(-a) - q_function(b)
    }
}

/// Transitions of the quantizer `edges` for a fixed gain. The flag is set for
/// `gamma = 0`, where all mass sits in the bin containing zero.
pub fn conditional_transitions(gamma: InstantaneousSnr, edges: &BinEdges) -> Result<(DiscreteChannel, bool)> {
    let k = edges.bins();
    let g = gamma.gamma;
    if g == 0.0 {
        let mut row = vec![0.0; k];
        row[edges.bin_index(0.0)] = 1.0;
        return Ok((DiscreteChannel::new(row.clone(), row)?, true));
    }
    let sd = (2.0 * g).sqrt();
    let row = |mean: f64| -> Vec<f64> {
        (0..k)
            .map(|j| {
                let (lo, hi) = edges.bin_limits(j);
                gauss_mass((lo - mean) / sd, (hi - mean) / sd)
            })
            .collect()
    };
    Ok((DiscreteChannel::from_unnormalized(row(-g), row(g))?, false))
}

/// Nodes and weights of Gauss-Hermite quadrature for weight `exp(-x^2)`.
fn gauss_hermite(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = n.div_ceil(2);
    let pim4 = std::f64::consts::PI.powf(-0.25);
    let mut z = 0.0f64;
    for i in 0..m {
        z = match i {
            0 => (2.0 * n as f64 + 1.0).sqrt() - 1.85575 * (2.0 * n as f64 + 1.0).powf(-1.0 / 6.0),
            1 => z - 1.14 * (n as f64).powf(0.426) / z,
            2 => 1.86 * z - 0.86 * x[0],
            3 => 1.91 * z - 0.91 * x[1],
            _ => 2.0 * z - x[i - 2],
        };
        let mut pp = 0.0;
        for _ in 0..100 {
            let mut p1 = pim4;
            let mut p2 = 0.0;
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                p1 = z * (2.0 / (j + 1) as f64).sqrt() * p2 - (j as f64 / (j + 1) as f64).sqrt() * p3;
            }
            pp = (2.0 * n as f64).sqrt() * p2;
            let dz = p1 / pp;
            z -= dz;
            if dz.abs() < 1e-15 {
                break;
            }
        }
        x[i] = z;
        x[n - 1 - i] = -z;
        w[i] = 2.0 / (pp * pp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

/// Unquantized BPSK capacity for a fixed gain, `1 - E[log2(1 + exp(-L))]`
/// with `L ~ N(gamma, 2 gamma)`.
pub struct BiawgnCapacity {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl Default for BiawgnCapacity {
    fn default() -> Self {
        let (nodes, weights) = gauss_hermite(96);
        BiawgnCapacity { nodes, weights }
    }
}

impl BiawgnCapacity {
    pub fn eval(&self, gamma: f64) -> f64 {
        if gamma <= 0.0 {
            return 0.0;
        }
        // L = gamma + 2 sqrt(gamma) x against weight exp(-x^2)
        let s = 2.0 * gamma.sqrt();
        let e: f64 = self
            .nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| {
                let l = gamma + s * x;
                let v = if l > 0.0 { (-l).exp().ln_1p() } else { -l + l.exp().ln_1p() };
                w * v
            })
            .sum::<f64>()
            / (std::f64::consts::PI.sqrt() * std::f64::consts::LN_2);
        (1.0 - e).clamp(0.0, 1.0)
    }
}

/// Rate of one fading realization for the given quantizer, or unquantized
/// when `edges` is `None`.
pub fn instantaneous_rate(gamma: InstantaneousSnr, edges: Option<&BinEdges>, biawgn: &BiawgnCapacity) -> Result<f64> {
    match edges {
        Some(e) => Ok(conditional_transitions(gamma, e)?.0.mutual_information()),
        None => Ok(biawgn.eval(gamma.gamma)),
    }
}

/// Outage probability over `n_channels` gain draws. Quantized cases use the
/// equiprobable boundaries of the ergodic LLR law at the same `sigma2`.
pub fn outage_probability_siso(
    sigma2: f64,
    resolution: Resolution,
    target_rate: f64,
    n_channels: u64,
    seed: MasterSeed,
) -> Result<OutageEstimate> {
    if !(0.0..=1.0).contains(&target_rate) {
        return Err(Error::Domain(format!("target rate {target_rate} outside [0, 1]")));
    }
    let edges = match resolution.bins() {
        Some(k) => Some(SisoLlrDensity::new(sigma2)?.equiprobable_edges(k)?),
        None => None,
    };
    let biawgn = BiawgnCapacity::default();
    let mut hits = 0u64;
    for i in 0..n_channels {
        let h: f64 = seed.stream(Domain::Outage, i).sample(StandardNormal);
        let rate = instantaneous_rate(InstantaneousSnr::from_gain(h, sigma2)?, edges.as_ref(), &biawgn)?;
        if rate <= target_rate {
            hits += 1;
        }
    }
    OutageEstimate::from_counts(hits, n_channels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{apply_channel_real, sigma2_from_snr_db};
    use crate::rng::MasterSeed;

    #[test]
    fn llr_formula() {
        assert_eq!(siso_bpsk_llr(1.0, 1.0, 1.0), 1.0);
        assert_eq!(siso_bpsk_llr(0.0, 3.3, 0.2), 0.0);
    }

    #[test]
    fn eigenvalue_identities() {
        for v in [0.01, 0.5, 2.0, 17.0] {
            let (a, b) = quadratic_form_eigenvalues(v);
            assert!((a * b + v / 4.0).abs() < 1e-14);
            assert!((a + b - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn conditional_law_of_fixed_gain() {
        let (h, sigma2) = (0.8, 0.5);
        let g = InstantaneousSnr::from_gain(h, sigma2).unwrap().gamma();
        let mut rng = MasterSeed(3).stream(Domain::Test, 0);
        let n = 1_000_000;
        let v: Vec<f64> = (0..n)
            .map(|_| MAXLOG_SCALE * siso_bpsk_llr(h, apply_channel_real(h, 1.0, sigma2, &mut rng), sigma2))
            .collect();
        let mean = v.iter().sum::<f64>() / n as f64;
        let var = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n as f64;
        assert!((mean / g - 1.0).abs() < 0.01, "{mean} vs {g}");
        assert!((var / (2.0 * g) - 1.0).abs() < 0.01, "{var} vs {}", 2.0 * g);
    }

    #[test]
    fn density_normalises() {
        for sigma2 in [0.01, 0.3, 1.0, 4.0, 40.0] {
            let d = SisoLlrDensity::new(sigma2).unwrap();
            let m = d.conditional_mass(f64::NEG_INFINITY, f64::INFINITY).unwrap();
            assert!((m - 1.0).abs() < 1e-8, "sigma2 {sigma2}: {m}");
        }
    }

    #[test]
    fn density_is_singular_at_zero() {
        let d = SisoLlrDensity::new(1.0).unwrap();
        assert_eq!(d.density(0.0), Err(Error::SingularPoint));
    }

    #[test]
    fn tilted_density_is_even() {
        let d = SisoLlrDensity::new(0.7).unwrap();
        for xi in [0.01, 0.4, 3.0, 25.0] {
            let a = d.conditional(xi, 1).unwrap() * (-xi / 2.0).exp();
            let b = d.conditional(-xi, 1).unwrap() * (xi / 2.0).exp();
            assert!((a / b - 1.0).abs() < 1e-12);
            assert!((d.density(xi).unwrap() - d.density(-xi).unwrap()).abs() < 1e-15);
        }
    }

    #[test]
    fn histogram_matches_monte_carlo() {
        let sigma2 = sigma2_from_snr_db(3.0, 1);
        let d = SisoLlrDensity::new(sigma2).unwrap();
        let n = 1_000_000;
        let seed = MasterSeed(8);
        let edges: Vec<f64> = (-40..=40).map(|i| i as f64 * 0.5).collect();
        let mut hist = vec![0u64; edges.len() - 1];
        for i in 0..n {
            let mut rng = seed.stream(Domain::Test, i);
            let h: f64 = rng.sample(StandardNormal);
            let y = apply_channel_real(h, 1.0, sigma2, &mut rng);
            let l = MAXLOG_SCALE * siso_bpsk_llr(h, y, sigma2);
            let j = ((l + 20.0) / 0.5).floor();
            if (0.0..hist.len() as f64).contains(&j) {
                hist[j as usize] += 1;
            }
        }
        let l1: f64 = hist
            .iter()
            .enumerate()
            .map(|(j, &c)| (c as f64 / n as f64 - d.conditional_mass(edges[j], edges[j + 1]).unwrap()).abs())
            .sum();
        assert!(l1 < 0.01, "L1 {l1}");
    }

    #[test]
    fn cdf_round_trip_and_derivative() {
        let d = SisoLlrDensity::new(0.5).unwrap();
        assert_eq!(d.cdf(0.0).unwrap(), 0.5);
        assert_eq!(d.inverse_cdf(0.5).unwrap(), 0.0);
        for x in -5..=5 {
            let x = x as f64;
            let back = d.inverse_cdf(d.cdf(x).unwrap()).unwrap();
            assert!((back - x).abs() < 1e-6, "{x} -> {back}");
        }
        for x in [-4.0, -0.5, 0.3, 2.0, 9.0] {
            let h = 1e-4;
            let num = (d.cdf(x + h).unwrap() - d.cdf(x - h).unwrap()) / (2.0 * h);
            assert!((num - d.density(x).unwrap()).abs() < 1e-6);
        }
        assert!(d.inverse_cdf(1.0).is_err());
    }

    #[test]
    fn equiprobable_edges_are_equiprobable() {
        let d = SisoLlrDensity::new(0.2).unwrap();
        let e = d.equiprobable_edges(8).unwrap();
        let dc = d.transitions(&e).unwrap();
        for k in 0..8 {
            assert!((dc.output_probability(k) - 0.125).abs() < 1e-9);
        }
    }

    #[test]
    fn q_transition_examples() {
        let g = InstantaneousSnr::new(1.0).unwrap();
        let (dc, degenerate) = conditional_transitions(g, &BinEdges::sign()).unwrap();
        assert!(!degenerate);
        assert!((dc.p(1, 1) - 0.760_249_938_906_523_3).abs() < 1e-12);
        let e = BinEdges::new(vec![-3.0, -1.0, -0.2, 0.0, 0.2, 1.0, 3.0]).unwrap();
        let (dc, _) = conditional_transitions(InstantaneousSnr::new(2.7).unwrap(), &e).unwrap();
        for k in 0..8 {
            assert!((dc.p(0, k) - dc.p(1, 7 - k)).abs() < 1e-15);
        }
        let s: f64 = dc.row(1).iter().sum();
        assert!((s - 1.0).abs() < 1e-12);
        let (dc, _) = conditional_transitions(InstantaneousSnr::new(1e4).unwrap(), &e).unwrap();
        assert!(dc.p(1, 7) > 1.0 - 1e-12);
        let (dc, degenerate) = conditional_transitions(InstantaneousSnr::new(0.0).unwrap(), &e).unwrap();
        assert!(degenerate);
        assert_eq!(dc.p(1, 4), 1.0);
        assert_eq!(dc.mutual_information(), 0.0);
    }

    #[test]
    fn capacity_limits() {
        for r in [Resolution::Bits(1), Resolution::Bits(3), Resolution::Unquantized] {
            assert!(ergodic_capacity_semianalytic(sigma2_from_snr_db(-40.0, 1), r).unwrap() < 1e-3);
        }
        assert!(ergodic_capacity_semianalytic(sigma2_from_snr_db(90.0, 1), Resolution::Unquantized).unwrap() > 1.0 - 1e-3);
        assert!(ergodic_capacity_semianalytic(sigma2_from_snr_db(90.0, 1), Resolution::Bits(1)).unwrap() > 1.0 - 1e-3);
    }

    #[test]
    fn capacity_grows_with_resolution() {
        for snr in [-5.0, 0.0, 5.0, 10.0] {
            let s2 = sigma2_from_snr_db(snr, 1);
            let c: Vec<f64> = [Resolution::Bits(1), Resolution::Bits(2), Resolution::Bits(3), Resolution::Bits(4), Resolution::Unquantized]
                .iter()
                .map(|&r| ergodic_capacity_semianalytic(s2, r).unwrap())
                .collect();
            assert!(c.windows(2).all(|w| w[0] <= w[1] + 1e-12), "{snr} dB {c:?}");
        }
    }

    #[test]
    fn fine_grid_approaches_unquantized() {
        let s2 = sigma2_from_snr_db(4.0, 1);
        let exact = ergodic_capacity_semianalytic(s2, Resolution::Unquantized).unwrap();
        let fine = ergodic_capacity_semianalytic(s2, Resolution::Bits(8)).unwrap();
        assert!(fine < exact && exact - fine < 1e-4, "{fine} {exact}");
    }

    #[test]
    fn biawgn_reference_values() {
        let b = BiawgnCapacity::default();
        let direct = |g: f64| {
            let sd = (2.0 * g).sqrt();
            let f = |l: f64| {
                let z = (l - g) / sd;
                (-0.5 * z * z).exp() / (sd * (2.0 * std::f64::consts::PI).sqrt()) * (-l).exp().ln_1p()
            };
            1.0 - integrate(f, g - 40.0 * sd, g + 40.0 * sd, 1e-14, 1e-13).unwrap() / std::f64::consts::LN_2
        };
        for g in [0.05, 0.5, 2.0, 8.0, 30.0] {
            assert!((b.eval(g) - direct(g)).abs() < 1e-7, "{g}: {} {}", b.eval(g), direct(g));
        }
        assert_eq!(b.eval(0.0), 0.0);
    }

    #[test]
    fn outage_edges() {
        let s2 = sigma2_from_snr_db(10.0, 1);
        let z = outage_probability_siso(s2, Resolution::Bits(2), 0.0, 1000, MasterSeed(1)).unwrap();
        assert_eq!(z.p_out, 0.0);
        let one = outage_probability_siso(s2, Resolution::Unquantized, 1.0, 1000, MasterSeed(1)).unwrap();
        assert_eq!(one.p_out, 1.0);
        assert!(outage_probability_siso(s2, Resolution::Unquantized, 1.5, 10, MasterSeed(1)).is_err());
    }
}
