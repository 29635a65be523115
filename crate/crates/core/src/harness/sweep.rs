//! Required SNR of symmetric 2-bit quantizers `(-i3, 0, i3)` against the
//! equiprobable design.

use crate::analytic::Resolution;
use crate::channel::LinkConfig;
use crate::error::Result;
use crate::harness::ergodic::{calibrate, evaluation_counts, rate_from_batches, required_snr_fixed_edges, ErgodicBudget, SnrSearch};
use crate::infotheory::{required_snr, sweep_boundary_2bit, SweepTable};
use crate::rng::{Domain, MasterSeed};

#[derive(Debug, Clone, PartialEq)]
pub struct BoundarySweep {
    pub target_rate: f64,
    /// Outer boundary of the equiprobable design at its required SNR.
    pub proposed_i3: f64,
    pub proposed_snr_db: f64,
    pub table: SweepTable,
}

impl BoundarySweep {
    /// Proposed required SNR minus the swept minimum.
    pub fn gap_db(&self) -> f64 {
        self.proposed_snr_db - self.table.min_snr_db()
    }
}

/// Required SNR of the equiprobable 2-bit design, recalibrated at every probed
/// SNR and scored on the same evaluation streams as the fixed quantizers.
pub fn proposed_2bit_required(
    template: &LinkConfig,
    target: f64,
    budget: &ErgodicBudget,
    search: &SnrSearch,
    seed: MasterSeed,
) -> Result<(f64, f64)> {
    let edges_at = |snr: f64| calibrate(&template.at_snr_db(snr), &[Resolution::Bits(2)], budget, seed).map(|mut e| e.remove(0));
    let snr = required_snr(
        |snr| {
            let link = template.at_snr_db(snr);
            let edges = edges_at(snr)?;
            let c = evaluation_counts(&link, std::slice::from_ref(&edges), budget.evaluation_uses, budget.batches, seed, Domain::Sweep)?;
            Ok(rate_from_batches(&c[0], link.bits_per_use())?.0)
        },
        target,
        search.lo_db,
        search.hi_db,
        search.tol_db,
    )?;
    let i3 = edges_at(snr)?.boundaries()[2];
    Ok((snr, i3))
}

/// Sweeps `i3 = proposed * j / steps_per_unit`, `j = 1..=steps_per_unit * max_multiple`.
pub fn boundary_sweep(
    template: &LinkConfig,
    target: f64,
    budget: &ErgodicBudget,
    search: &SnrSearch,
    steps_per_unit: usize,
    max_multiple: usize,
    seed: MasterSeed,
) -> Result<BoundarySweep> {
    let (proposed_snr_db, proposed_i3) = proposed_2bit_required(template, target, budget, search, seed)?;
    let grid: Vec<f64> = (1..=steps_per_unit * max_multiple).map(|j| proposed_i3 * j as f64 / steps_per_unit as f64).collect();
    let table = sweep_boundary_2bit(&grid, |edges| required_snr_fixed_edges(template, target, edges, budget, search, seed))?;
    Ok(BoundarySweep { target_rate: target, proposed_i3, proposed_snr_db, table })
}
