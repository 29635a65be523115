//! Counter-based random streams.
//!
//! Every random quantity in a simulation is drawn from a stream addressed by
//! `(master_seed, domain, index)`. The stream is a ChaCha8 keystream whose key
//! holds the master seed and domain and whose stream id is the index, so any
//! trial can be regenerated in isolation and the work can be split across any
//! number of workers without changing a single drawn value.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The generator type handed to all simulation code.
pub type Stream = ChaCha8Rng;

/// Named stream domains. Distinct purposes never share key material.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[repr(u64)]
pub enum Domain {
    Channel = 1,
    Calibration = 2,
    Evaluation = 3,
    Outage = 4,
    InfoBits = 5,
    Interleaver = 6,
    Scrambler = 7,
    CodeConstruction = 8,
    Online = 9,
    Sweep = 10,
    Test = 99,
}

/// Seed of a whole experiment; hands out per-trial streams.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MasterSeed(pub u64);

impl MasterSeed {
    pub fn stream(self, domain: Domain, index: u64) -> Stream {
        stream(self.0, domain as u64, index)
    }

    /// Derives a child seed, e.g. one per SNR point of a sweep.
    pub fn child(self, tag: u64) -> MasterSeed {
        // splitmix64 finaliser keeps children well separated
        let mut z = self.0 ^ tag.wrapping_mul(0x9E37_79B9_7F4A_7C15);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        MasterSeed(z ^ (z >> 31))
    }
}

pub fn stream(master_seed: u64, domain: u64, index: u64) -> Stream {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&master_seed.to_le_bytes());
    key[8..16].copy_from_slice(&domain.to_le_bytes());
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(index);
    rng
}
