//! Experiment configuration read from TOML.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::analytic::Resolution;
use crate::channel::{Fading, LinkConfig};
use crate::error::{Error, Result};
use crate::harness::ber::BerBudget;
use crate::harness::ergodic::{ErgodicBudget, SnrSearch};
use crate::harness::outage::OutageBudget;
use crate::modem::ConstellationKind;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Experiment {
    ErgodicCapacity,
    Outage,
    BoundarySweep,
    Ber,
    LevelSweep,
    DesignQuantizer,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::ErgodicCapacity => "ergodic_capacity",
            Experiment::Outage => "outage",
            Experiment::BoundarySweep => "boundary_sweep",
            Experiment::Ber => "ber",
            Experiment::LevelSweep => "level_sweep",
            Experiment::DesignQuantizer => "design_quantizer",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QuantizerMode {
    #[default]
    Offline,
    Online,
}

/// Link without a noise level; the SNR comes from the grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinkTemplate {
    pub mt: usize,
    pub mr: usize,
    pub constellation: ConstellationKind,
    #[serde(default = "default_fading")]
    pub fading: Fading,
}

fn default_fading() -> Fading {
    Fading::Ergodic
}

impl LinkTemplate {
    pub fn to_link(&self) -> Result<LinkConfig> {
        LinkConfig::new(self.mt, self.mr, 1.0, self.constellation, self.fading)
    }
}

/// Monte-Carlo counts. Every field has a default.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Trials {
    pub calibration_uses: u64,
    pub evaluation_uses: u64,
    pub reference_bins: usize,
    pub batches: usize,
    pub channels: u64,
    pub noise_per_channel: u64,
    pub outage_reference_bins: usize,
    pub min_bit_errors: u64,
    pub min_frame_errors: u64,
    pub max_codewords: u64,
    pub codeword_batch: u64,
    /// Labeled LLRs for the offline quantizer design.
    pub offline_llrs: u64,
    /// Unlabeled LLRs for the online design.
    pub online_llrs: u64,
}

impl Default for Trials {
    fn default() -> Self {
        let e = ErgodicBudget::default();
        let o = OutageBudget::default();
        let b = BerBudget::default();
        Trials {
            calibration_uses: e.calibration_uses,
            evaluation_uses: e.evaluation_uses,
            reference_bins: e.reference_bins,
            batches: e.batches,
            channels: o.channels,
            noise_per_channel: o.noise_per_channel,
            outage_reference_bins: o.reference_bins,
            min_bit_errors: b.min_bit_errors,
            min_frame_errors: b.min_frame_errors,
            max_codewords: b.max_codewords,
            codeword_batch: b.batch,
            offline_llrs: 1_000_000,
            online_llrs: 100_000,
        }
    }
}

impl Trials {
    pub fn ergodic(&self) -> ErgodicBudget {
        ErgodicBudget {
            calibration_uses: self.calibration_uses,
            evaluation_uses: self.evaluation_uses,
            reference_bins: self.reference_bins,
            batches: self.batches,
        }
    }

    pub fn outage(&self) -> OutageBudget {
        OutageBudget {
            channels: self.channels,
            noise_per_channel: self.noise_per_channel,
            reference_bins: self.outage_reference_bins,
        }
    }

    pub fn ber(&self, max_iter: usize) -> BerBudget {
        BerBudget {
            min_bit_errors: self.min_bit_errors,
            min_frame_errors: self.min_frame_errors,
            max_codewords: self.max_codewords,
            batch: self.codeword_batch,
            max_iter,
        }
    }
}

/// LDPC code: built from degrees and a construction seed, or read from an alist file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CodeConfig {
    pub n: usize,
    pub dv: usize,
    pub dc: usize,
    pub construction_seed: u64,
    pub alist: Option<PathBuf>,
    pub max_iter: usize,
}

impl Default for CodeConfig {
    fn default() -> Self {
        CodeConfig { n: 8000, dv: 3, dc: 6, construction_seed: 1, alist: None, max_iter: 50 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SearchConfig {
    pub lo_db: f64,
    pub hi_db: f64,
    pub tol_db: f64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        let s = SnrSearch::default();
        SearchConfig { lo_db: s.lo_db, hi_db: s.hi_db, tol_db: s.tol_db }
    }
}

/// Grid of the 2-bit boundary sweep: `i3 = proposed * j / steps_per_unit`
/// for `j = 1..=steps_per_unit * max_multiple`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    pub steps_per_unit: usize,
    pub max_multiple: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig { steps_per_unit: 8, max_multiple: 3 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Optional; when present it must agree with the subcommand.
    #[serde(default)]
    pub experiment: Option<Experiment>,
    pub link: LinkTemplate,
    #[serde(default)]
    pub snr_grid_db: Vec<f64>,
    /// Quantizer word lengths in bits.
    #[serde(default)]
    pub q_bits: Vec<u32>,
    /// Adds rows for unquantized LLRs.
    #[serde(default = "yes")]
    pub include_unquantized: bool,
    #[serde(default)]
    pub target_rates: Vec<f64>,
    #[serde(default)]
    pub trials: Trials,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default)]
    pub quantizer_mode: QuantizerMode,
    #[serde(default)]
    pub output_path: Option<PathBuf>,
    #[serde(default)]
    pub code: CodeConfig,
    #[serde(default)]
    pub search: SearchConfig,
    #[serde(default)]
    pub sweep: SweepConfig,
    /// 1-bit levels `lambda_2 = -lambda_1` of the level sweep.
    #[serde(default)]
    pub levels: Vec<f64>,
}

fn yes() -> bool {
    true
}

fn default_seed() -> u64 {
    1
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn link(&self) -> Result<LinkConfig> {
        self.link.to_link()
    }

    pub fn search(&self) -> SnrSearch {
        SnrSearch { lo_db: self.search.lo_db, hi_db: self.search.hi_db, tol_db: self.search.tol_db }
    }

    /// Quantized resolutions followed by the unquantized one when requested.
    pub fn resolutions(&self) -> Vec<Resolution> {
        let mut r: Vec<Resolution> = self.q_bits.iter().map(|&b| Resolution::Bits(b)).collect();
        if self.include_unquantized {
            r.push(Resolution::Unquantized);
        }
        r
    }

    /// Checks the fields `experiment` depends on.
    pub fn validate_for(&self, experiment: Experiment) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidConfig(m));
        if let Some(e) = self.experiment {
            if e != experiment {
                return bad(format!("config is for `{}`, not `{}`", e.name(), experiment.name()));
            }
        }
        self.link()?;
        if self.q_bits.iter().any(|&b| b == 0 || b > 12) {
            return bad("q_bits entries must lie in 1..=12".into());
        }
        let t = &self.trials;
        if [t.calibration_uses, t.evaluation_uses, t.channels, t.noise_per_channel, t.max_codewords, t.codeword_batch, t.offline_llrs, t.online_llrs]
            .contains(&0)
            || t.batches == 0
        {
            return bad("trial counts must be at least 1".into());
        }
        if self.snr_grid_db.iter().any(|s| !s.is_finite()) || self.target_rates.iter().any(|r| !(*r > 0.0)) {
            return bad("SNRs must be finite and target rates positive".into());
        }
        let need_snr = !matches!(experiment, Experiment::BoundarySweep);
        if need_snr && self.snr_grid_db.is_empty() {
            return bad("snr_grid_db must not be empty".into());
        }
        if matches!(experiment, Experiment::Outage | Experiment::BoundarySweep) && self.target_rates.is_empty() {
            return bad("target_rates must not be empty".into());
        }
        if self.resolutions().is_empty() && experiment != Experiment::LevelSweep && experiment != Experiment::BoundarySweep {
            return bad("q_bits is empty and include_unquantized is false".into());
        }
        if matches!(experiment, Experiment::DesignQuantizer) && self.q_bits.is_empty() {
            return bad("q_bits must not be empty".into());
        }
        if experiment == Experiment::LevelSweep && (self.levels.is_empty() || self.levels.iter().any(|l| !(*l > 0.0 && l.is_finite()))) {
            return bad("levels must be a non-empty list of positive values".into());
        }
        if experiment == Experiment::BoundarySweep && (self.sweep.steps_per_unit == 0 || self.sweep.max_multiple == 0) {
            return bad("sweep grid must be non-empty".into());
        }
        Ok(())
    }
}
