//! Experiment runners: config in, CSV rows out.

use std::io::Write;

use serde::Serialize;

use crate::analytic::Resolution;
use crate::channel::LinkConfig;
use crate::error::{Error, Result};
use crate::harness::ber::{ber_point, design_offline, design_online, SoftInput};
use crate::harness::config::{Experiment, ExperimentConfig, QuantizerMode};
use crate::harness::ergodic::ergodic_rates;
use crate::harness::outage::{outage_from_required, per_channel_required_snr, siso_outage_curve};
use crate::harness::sweep::boundary_sweep;
use crate::ldpc::{build_code, read_alist, ParityCheckCode};
use crate::quant::LlrQuantizer;
use crate::rng::MasterSeed;

fn q_label(r: Resolution) -> String {
    match r {
        Resolution::Bits(b) => b.to_string(),
        Resolution::Unquantized => "none".into(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErgodicRow {
    pub snr_db: f64,
    pub q_bits: String,
    pub rate_bpcu: f64,
    pub stderr: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OutageRow {
    pub snr_db: f64,
    pub q_bits: String,
    pub target_rate: f64,
    pub p_out: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepCsvRow {
    pub target_rate: f64,
    pub i3: f64,
    pub required_snr_db: f64,
    /// `true` on the equiprobable design's row.
    pub proposed: bool,
    /// `true` on the grid point with the smallest required SNR.
    pub minimum: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BerRow {
    pub snr_db: f64,
    pub q_bits: String,
    pub mode: String,
    pub ber: f64,
    pub stderr: f64,
    pub codewords: u64,
    pub bit_errors: u64,
    pub frame_errors: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LevelRow {
    pub snr_db: f64,
    pub level: f64,
    pub ber: f64,
    pub stderr: f64,
    pub codewords: u64,
    pub bit_errors: u64,
    pub frame_errors: u64,
    /// Level computed from labeled transition counts at this SNR.
    pub designed_level: f64,
}

/// Serializes rows with a header line.
pub fn write_csv<T: Serialize, W: Write>(rows: &[T], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r).map_err(|e| Error::Io(e.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

pub fn run_ergodic_capacity(cfg: &ExperimentConfig) -> Result<Vec<ErgodicRow>> {
    cfg.validate_for(Experiment::ErgodicCapacity)?;
    let link = cfg.link()?;
    let res = cfg.resolutions();
    let mut rows = Vec::new();
    for &snr in &cfg.snr_grid_db {
        for p in ergodic_rates(&link, snr, &res, &cfg.trials.ergodic(), MasterSeed(cfg.seed))? {
            rows.push(ErgodicRow { snr_db: snr, q_bits: q_label(p.resolution), rate_bpcu: p.rate_bpcu, stderr: p.stderr });
        }
    }
    Ok(rows)
}

/// Real SISO BPSK uses Gaussian transitions per gain; other links run the
/// Monte-Carlo per-realization design.
pub fn run_outage(cfg: &ExperimentConfig) -> Result<Vec<OutageRow>> {
    cfg.validate_for(Experiment::Outage)?;
    let link = cfg.link()?;
    let seed = MasterSeed(cfg.seed);
    let res = cfg.resolutions();
    let mut rows = Vec::new();
    for &target in &cfg.target_rates {
        for &r in &res {
            let curve = if link.is_real_siso() {
                siso_outage_curve(&cfg.snr_grid_db, r, target, cfg.trials.channels, seed)?
            } else {
                let required = per_channel_required_snr(&link, &[r], target, &cfg.trials.outage(), &cfg.search(), seed)?.remove(0);
                cfg.snr_grid_db.iter().map(|&s| outage_from_required(&required, s)).collect::<Result<Vec<_>>>()?
            };
            for (&snr, e) in cfg.snr_grid_db.iter().zip(curve) {
                rows.push(OutageRow { snr_db: snr, q_bits: q_label(r), target_rate: target, p_out: e.p_out, ci_lo: e.ci_lo, ci_hi: e.ci_hi });
            }
        }
    }
    Ok(rows)
}

pub fn run_boundary_sweep(cfg: &ExperimentConfig) -> Result<Vec<SweepCsvRow>> {
    cfg.validate_for(Experiment::BoundarySweep)?;
    let link = cfg.link()?;
    let mut rows = Vec::new();
    for &target in &cfg.target_rates {
        let s = boundary_sweep(
            &link,
            target,
            &cfg.trials.ergodic(),
            &cfg.search(),
            cfg.sweep.steps_per_unit,
            cfg.sweep.max_multiple,
            MasterSeed(cfg.seed),
        )?;
        rows.push(SweepCsvRow { target_rate: target, i3: s.proposed_i3, required_snr_db: s.proposed_snr_db, proposed: true, minimum: false });
        for (i, r) in s.table.rows.iter().enumerate() {
            rows.push(SweepCsvRow {
                target_rate: target,
                i3: r.i3,
                required_snr_db: r.required_snr_db,
                proposed: false,
                minimum: i == s.table.minimum,
            });
        }
    }
    Ok(rows)
}

/// The configured code: read from the alist file if given, else constructed.
pub fn load_code(cfg: &ExperimentConfig) -> Result<ParityCheckCode> {
    match &cfg.code.alist {
        Some(p) => read_alist(&std::fs::read_to_string(p).map_err(|e| Error::Io(format!("{}: {e}", p.display())))?),
        None => build_code(cfg.code.n, cfg.code.dv, cfg.code.dc, MasterSeed(cfg.code.construction_seed)),
    }
}

/// Quantizer of `bits` bits for `link` in the configured design mode.
pub fn design_quantizer(cfg: &ExperimentConfig, link: &LinkConfig, bits: u32) -> Result<LlrQuantizer> {
    let seed = MasterSeed(cfg.seed);
    match cfg.quantizer_mode {
        QuantizerMode::Offline => design_offline(link, bits, cfg.trials.offline_llrs, seed),
        QuantizerMode::Online => Ok(design_online(link, bits, cfg.trials.online_llrs, seed)?.quantizer),
    }
}

pub fn run_ber(cfg: &ExperimentConfig) -> Result<Vec<BerRow>> {
    cfg.validate_for(Experiment::Ber)?;
    let link = cfg.link()?;
    let code = load_code(cfg)?;
    let budget = cfg.trials.ber(cfg.code.max_iter);
    let mode = match cfg.quantizer_mode {
        QuantizerMode::Offline => "offline",
        QuantizerMode::Online => "online",
    };
    let mut rows = Vec::new();
    for r in cfg.resolutions() {
        for &snr in &cfg.snr_grid_db {
            let input = match r {
                Resolution::Bits(b) => SoftInput::Quantized(design_quantizer(cfg, &link.at_snr_db(snr), b)?),
                Resolution::Unquantized => SoftInput::Raw,
            };
            let p = ber_point(&link, snr, &code, &input, &budget, MasterSeed(cfg.seed))?;
            rows.push(BerRow {
                snr_db: snr,
                q_bits: q_label(r),
                mode: if r == Resolution::Unquantized { "raw".into() } else { mode.into() },
                ber: p.ber,
                stderr: p.stderr(code.k()),
                frame_errors: p.frame_errors,
                codewords: p.codewords,
                bit_errors: p.bit_errors,
            });
        }
    }
    Ok(rows)
}

/// 1-bit decoder input `+-lambda` for every configured level.
pub fn run_level_sweep(cfg: &ExperimentConfig) -> Result<Vec<LevelRow>> {
    cfg.validate_for(Experiment::LevelSweep)?;
    let link = cfg.link()?;
    let code = load_code(cfg)?;
    let budget = cfg.trials.ber(cfg.code.max_iter);
    let seed = MasterSeed(cfg.seed);
    let mut rows = Vec::new();
    for &snr in &cfg.snr_grid_db {
        let designed = design_offline(&link.at_snr_db(snr), 1, cfg.trials.offline_llrs, seed)?.levels()[1];
        for &level in &cfg.levels {
            let input = SoftInput::Quantized(LlrQuantizer::one_bit(level)?);
            let p = ber_point(&link, snr, &code, &input, &budget, seed)?;
            rows.push(LevelRow {
                snr_db: snr,
                level,
                ber: p.ber,
                stderr: p.stderr(code.k()),
                frame_errors: p.frame_errors,
                codewords: p.codewords,
                bit_errors: p.bit_errors,
                designed_level: designed,
            });
        }
    }
    Ok(rows)
}

/// One quantizer record per line, SNR-major then word length.
pub fn run_design_quantizer(cfg: &ExperimentConfig) -> Result<Vec<String>> {
    cfg.validate_for(Experiment::DesignQuantizer)?;
    let link = cfg.link()?;
    let mut out = Vec::new();
    for &snr in &cfg.snr_grid_db {
        for &b in &cfg.q_bits {
            out.push(design_quantizer(cfg, &link.at_snr_db(snr), b)?.to_record());
        }
    }
    Ok(out)
}
