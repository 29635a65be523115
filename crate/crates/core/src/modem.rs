//! Gray-labelled constellations, layer mapping, scrambler and interleaver.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstellationKind {
    Bpsk,
    QpskGray,
    Qam16Gray,
}

impl ConstellationKind {
    pub fn bits_per_symbol(self) -> usize {
        match self {
            ConstellationKind::Bpsk => 1,
            ConstellationKind::QpskGray => 2,
            ConstellationKind::Qam16Gray => 4,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ConstellationKind::Bpsk => "bpsk",
            ConstellationKind::QpskGray => "qpsk_gray",
            ConstellationKind::Qam16Gray => "qam16_gray",
        }
    }
}

impl fmt::Display for ConstellationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ConstellationKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bpsk" => Ok(ConstellationKind::Bpsk),
            "qpsk_gray" => Ok(ConstellationKind::QpskGray),
            "qam16_gray" => Ok(ConstellationKind::Qam16Gray),
            other => Err(Error::UnknownConstellation(other.to_string())),
        }
    }
}

/// A unit-energy constellation indexed by label.
///
/// `point(label)` is the symbol carrying the `m`-bit label; bit 0 of a
/// symbol is the label's most significant bit.
#[derive(Debug, Clone, PartialEq)]
pub struct Constellation {
    kind: ConstellationKind,
    points: Vec<Complex64>,
}

/// Two-bit Gray map onto the PAM-4 amplitudes; a leading 1 means a positive amplitude.
fn gray_pam4(b0: u32, b1: u32) -> f64 {
    match (b0, b1) {
        (0, 0) => -3.0,
        (0, 1) => -1.0,
        (1, 1) => 1.0,
        _ => 3.0,
    }
}

impl Constellation {
    pub fn new(kind: ConstellationKind) -> Self {
        let points = match kind {
            ConstellationKind::Bpsk => vec![Complex64::new(-1.0, 0.0), Complex64::new(1.0, 0.0)],
            ConstellationKind::QpskGray => (0..4u32)
                .map(|l| {
                    let i = if l & 0b10 != 0 { 1.0 } else { -1.0 };
                    let q = if l & 0b01 != 0 { 1.0 } else { -1.0 };
                    Complex64::new(i * FRAC_1_SQRT_2, q * FRAC_1_SQRT_2)
                })
                .collect(),
            ConstellationKind::Qam16Gray => {
                let scale = 1.0 / 10f64.sqrt();
                (0..16u32)
                    .map(|l| {
                        let i = gray_pam4((l >> 3) & 1, (l >> 2) & 1);
                        let q = gray_pam4((l >> 1) & 1, l & 1);
                        Complex64::new(i * scale, q * scale)
                    })
                    .collect()
            }
        };
        Constellation { kind, points }
    }

    pub fn kind(&self) -> ConstellationKind {
        self.kind
    }

    pub fn bits_per_symbol(&self) -> usize {
        self.kind.bits_per_symbol()
    }

    pub fn size(&self) -> usize {
        self.points.len()
    }

    pub fn point(&self, label: usize) -> Complex64 {
        self.points[label]
    }

    /// Points in label order.
    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    /// Label bits of a symbol index, most significant first.
    pub fn label_bits(&self, label: usize) -> Vec<u8> {
        let m = self.bits_per_symbol();
        (0..m).map(|j| ((label >> (m - 1 - j)) & 1) as u8).collect()
    }

    /// Exact nearest label, used to invert a noiseless mapping.
    pub fn label_of(&self, x: Complex64) -> Option<usize> {
        self.points.iter().position(|p| (p - x).norm() < 1e-9)
    }
}

/// Builds a constellation by name (`bpsk`, `qpsk_gray`, `qam16_gray`).
pub fn build_constellation(name: &str) -> Result<Constellation> {
    Ok(Constellation::new(name.parse()?))
}

/// Maps `m * mt` code bits onto `mt` layers; layer `k` takes bits `k*m .. (k+1)*m`.
pub fn map_bits(bits: &[u8], c: &Constellation, mt: usize) -> Result<Vec<Complex64>> {
    let m = c.bits_per_symbol();
    if bits.len() != m * mt {
        return Err(Error::DimensionMismatch { expected: m * mt, got: bits.len() });
    }
    Ok(bits
        .chunks(m)
        .map(|chunk| {
            let label = chunk.iter().fold(0usize, |acc, &b| (acc << 1) | usize::from(b & 1));
            c.point(label)
        })
        .collect())
}

/// Pseudo-random scrambling sequence `p_l`; sign form `1 - 2 p_l`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScramblerSequence {
    bits: Vec<u8>,
}

impl ScramblerSequence {
    pub fn random<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Self {
        ScramblerSequence { bits: (0..len).map(|_| rng.random::<bool>() as u8).collect() }
    }

    pub fn from_bits(bits: Vec<u8>) -> Self {
        ScramblerSequence { bits: bits.into_iter().map(|b| b & 1).collect() }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bit(&self, l: usize) -> u8 {
        self.bits[l]
    }

    pub fn sign(&self, l: usize) -> f64 {
        1.0 - 2.0 * f64::from(self.bits[l])
    }
}

pub fn scramble(bits: &[u8], seq: &ScramblerSequence) -> Result<Vec<u8>> {
    if bits.len() != seq.len() {
        return Err(Error::DimensionMismatch { expected: seq.len(), got: bits.len() });
    }
    Ok(bits.iter().zip(&seq.bits).map(|(b, p)| b ^ p).collect())
}

pub fn descramble_llrs(llrs: &[f64], seq: &ScramblerSequence) -> Result<Vec<f64>> {
    if llrs.len() != seq.len() {
        return Err(Error::DimensionMismatch { expected: seq.len(), got: llrs.len() });
    }
    Ok(llrs.iter().enumerate().map(|(l, v)| v * seq.sign(l)).collect())
}

/// Bit interleaver: `out[i] = in[perm[i]]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interleaver {
    perm: Vec<usize>,
    inverse: Vec<usize>,
}

impl Interleaver {
    pub fn identity(len: usize) -> Self {
        Interleaver { perm: (0..len).collect(), inverse: (0..len).collect() }
    }

    pub fn random<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Self {
        let mut perm: Vec<usize> = (0..len).collect();
        perm.shuffle(rng);
        Self::from_permutation(perm).expect("shuffle yields a permutation")
    }

    pub fn from_permutation(perm: Vec<usize>) -> Result<Self> {
        let mut inverse = vec![usize::MAX; perm.len()];
        for (i, &p) in perm.iter().enumerate() {
            if p >= perm.len() || inverse[p] != usize::MAX {
                return Err(Error::InvalidConfig("not a permutation".into()));
            }
            inverse[p] = i;
        }
        Ok(Interleaver { perm, inverse })
    }

    pub fn len(&self) -> usize {
        self.perm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perm.is_empty()
    }

    pub fn permutation(&self) -> &[usize] {
        &self.perm
    }

    pub fn interleave<T: Copy>(&self, v: &[T]) -> Result<Vec<T>> {
        if v.len() != self.len() {
            return Err(Error::DimensionMismatch { expected: self.len(), got: v.len() });
        }
        Ok(self.perm.iter().map(|&p| v[p]).collect())
    }

    pub fn deinterleave<T: Copy>(&self, v: &[T]) -> Result<Vec<T>> {
        if v.len() != self.len() {
            return Err(Error::DimensionMismatch { expected: self.len(), got: v.len() });
        }
        Ok(self.inverse.iter().map(|&i| v[i]).collect())
    }
}
