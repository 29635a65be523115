//! Blind estimation of reproduction levels from unlabeled LLRs.
//!
//! Given `c = 1` the LLR is modelled as a two-sided exponential,
//! `C exp(alpha xi)` for `xi < 0` and `C exp(-beta xi)` for `xi >= 0` with
//! `C = alpha beta / (alpha + beta)`; `c = 0` is the mirror image. The two
//! rates are matched to the empirical mass of two probe bins.

use crate::error::{Error, Result};
use crate::numeric::brent;
use crate::quant::BinEdges;

const FIT_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParametricLlrModel {
    alpha: f64,
    beta: f64,
}

impl ParametricLlrModel {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha > 0.0 && beta > 0.0 && alpha.is_finite() && beta.is_finite()) {
            return Err(Error::InvalidConfig(format!("rates ({alpha}, {beta}) must be positive")));
        }
        Ok(ParametricLlrModel { alpha, beta })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    fn c(&self) -> f64 {
        self.alpha * self.beta / (self.alpha + self.beta)
    }

    pub fn density(&self, xi: f64, bit: u8) -> f64 {
        let x = if bit == 1 { xi } else { -xi };
        if x < 0.0 {
            self.c() * (self.alpha * x).exp()
        } else {
            self.c() * (-self.beta * x).exp()
        }
    }

    pub fn unconditional_density(&self, xi: f64) -> f64 {
        0.5 * (self.density(xi, 0) + self.density(xi, 1))
    }

    /// `Pr{L in [lo, hi) | c = 1}`.
    pub fn conditional_mass(&self, lo: f64, hi: f64) -> f64 {
        if !(lo < hi) {
            return 0.0;
        }
        let (a, b, c) = (self.alpha, self.beta, self.c());
        let mut m = 0.0;
        if lo < 0.0 {
            let top = hi.min(0.0);
            m += c / a * ((a * top).exp() - (a * lo).exp());
        }
        if hi > 0.0 {
            let bot = lo.max(0.0);
            m += c / b * ((-b * bot).exp() - (-b * hi).exp());
        }
        m
    }

    /// `ln(Pr{L in [lo, hi) | c = 1} / Pr{L in [lo, hi) | c = 0})`, stable for far bins.
    pub fn log_ratio(&self, lo: f64, hi: f64) -> f64 {
        if lo >= 0.0 {
            self.positive_log_ratio(lo, hi)
        } else if hi <= 0.0 {
            -self.positive_log_ratio(-hi, -lo)
        } else {
            (self.conditional_mass(lo, hi) / self.conditional_mass(-hi, -lo)).ln()
        }
    }

    fn positive_log_ratio(&self, a: f64, b: f64) -> f64 {
        let (al, be) = (self.alpha, self.beta);
        let w = b - a;
        let shape = if w.is_finite() { (-(-be * w).exp_m1()).ln() - (-(-al * w).exp_m1()).ln() } else { 0.0 };
        (al / be).ln() + (al - be) * a + shape
    }
}

/// Exact unconditional mass over `[lo, hi)`.
pub fn bin_probability(m: &ParametricLlrModel, lo: f64, hi: f64) -> f64 {
    0.5 * (m.conditional_mass(lo, hi) + m.conditional_mass(-hi, -lo))
}

/// Two disjoint probe intervals on the non-negative axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbeBins {
    pub bin1: (f64, f64),
    pub bin2: (f64, f64),
}

impl ProbeBins {
    pub fn new(bin1: (f64, f64), bin2: (f64, f64)) -> Result<Self> {
        let ok = |b: (f64, f64)| b.0 >= 0.0 && b.0 < b.1 && b.1.is_finite();
        if !ok(bin1) || !ok(bin2) || (bin1.0 < bin2.1 && bin2.0 < bin1.1) {
            return Err(Error::InvalidConfig(format!("probe bins {bin1:?} {bin2:?} must be disjoint finite intervals on [0, inf)")));
        }
        Ok(ProbeBins { bin1, bin2 })
    }

    /// `[0, m)` and `[m, 3m)` with `m` the median of `|L|`.
    pub fn from_median(llrs: &[f64]) -> Result<Self> {
        if llrs.is_empty() {
            return Err(Error::Empty);
        }
        let mut mags: Vec<f64> = llrs.iter().map(|l| l.abs()).collect();
        let mid = mags.len() / 2;
        let (_, m, _) = mags.select_nth_unstable_by(mid, f64::total_cmp);
        let m = *m;
        if !(m > 0.0) {
            return Err(Error::InfeasibleFit);
        }
        ProbeBins::new((0.0, m), (m, 3.0 * m))
    }

    /// Empirical masses of both probe bins.
    pub fn empirical(&self, llrs: &[f64]) -> (f64, f64) {
        let n = llrs.len() as f64;
        let inside = |b: (f64, f64)| llrs.iter().filter(|&&l| b.0 <= l && l < b.1).count() as f64 / n;
        (inside(self.bin1), inside(self.bin2))
    }

    fn residual(&self, m: &ParametricLlrModel, p1: f64, p2: f64) -> (f64, f64) {
        (bin_probability(m, self.bin1.0, self.bin1.1) - p1, bin_probability(m, self.bin2.0, self.bin2.1) - p2)
    }
}

fn ordered(a: f64, b: f64) -> Result<ParametricLlrModel> {
    ParametricLlrModel::new(a.max(b), a.min(b))
}

/// Damped Newton in `(ln alpha, ln beta)`.
fn newton(p1: f64, p2: f64, bins: &ProbeBins, start: (f64, f64)) -> Option<ParametricLlrModel> {
    let (mut u, mut v) = (start.0.ln(), start.1.ln());
    let eval = |u: f64, v: f64| -> Option<(f64, f64)> {
        let m = ParametricLlrModel::new(u.exp(), v.exp()).ok()?;
        Some(bins.residual(&m, p1, p2))
    };
    let mut r = eval(u, v)?;
    for _ in 0..100 {
        let norm = r.0.abs().max(r.1.abs());
        if norm < 1e-16 {
            break;
        }
        let h = 1e-7;
        let ru = eval(u + h, v)?;
        let rv = eval(u, v + h)?;
        let j = [[(ru.0 - r.0) / h, (rv.0 - r.0) / h], [(ru.1 - r.1) / h, (rv.1 - r.1) / h]];
        let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        if det.abs() < 1e-14 {
            break;
        }
        let du = -(j[1][1] * r.0 - j[0][1] * r.1) / det;
        let dv = -(-j[1][0] * r.0 + j[0][0] * r.1) / det;
        let mut step = 1.0;
        loop {
            if let Some(rn) = eval(u + step * du, v + step * dv) {
                if rn.0.abs().max(rn.1.abs()) < norm {
                    u += step * du;
                    v += step * dv;
                    r = rn;
                    break;
                }
            }
            step *= 0.5;
            if step < 1e-6 {
                break;
            }
        }
        if step < 1e-6 {
            break;
        }
    }
    let m = ParametricLlrModel::new(u.exp(), v.exp()).ok()?;
    (r.0.abs() < FIT_TOL && r.1.abs() < FIT_TOL).then_some(m)
}

/// Scale `alpha` with `beta = ratio alpha` matching the mass of an initial
/// segment `[0, b)`, which is monotone in the scale.
fn scale_for_ratio(p1: f64, b: f64, ratio: f64) -> Option<f64> {
    let f = |la: f64| {
        let a = la.exp();
        bin_probability(&ParametricLlrModel { alpha: a, beta: ratio * a }, 0.0, b) - p1
    };
    let lo = -(b.ln()) - 40.0;
    let hi = -(b.ln()) + 40.0;
    brent(f, lo, hi, 1e-14).ok().map(f64::exp)
}

/// All solutions with `alpha >= beta`, ordered from the most symmetric one.
///
/// The pair is parameterized by `beta / alpha = 1 - sqrt(t)`; for each `t`
/// the scale is fixed by the first bin, which must start at zero, and roots
/// of the second-bin residual are bracketed on a grid in `t`.
pub fn fit_candidates(p1: f64, p2: f64, bins: &ProbeBins) -> Result<Vec<ParametricLlrModel>> {
    if !(p1 > 0.0 && p1 < 0.5 && p2 > 0.0 && p2 < 0.5) {
        return Err(Error::InfeasibleFit);
    }
    if bins.bin1.0 != 0.0 {
        return newton(p1, p2, bins, (1.0, 1.0)).map(|m| vec![m]).ok_or(Error::InfeasibleFit);
    }
    let model_at = |t: f64| -> Option<ParametricLlrModel> {
        let ratio = 1.0 - t.sqrt();
        let a = scale_for_ratio(p1, bins.bin1.1, ratio)?;
        ParametricLlrModel::new(a, ratio * a).ok()
    };
    let g = |t: f64| model_at(t).map(|m| bins.residual(&m, p1, p2).1).unwrap_or(f64::NAN);
    let grid: Vec<f64> = (0..=400).map(|i| (i as f64 / 400.0) * (1.0 - 1e-3)).collect();
    let vals: Vec<f64> = grid.iter().map(|&t| g(t)).collect();
    let mut roots = Vec::new();
    if vals[0].abs() < 0.1 * FIT_TOL {
        roots.push(0.0);
    }
    for i in 0..grid.len() - 1 {
        let (a, b) = (vals[i], vals[i + 1]);
        if a.is_finite() && b.is_finite() && a != 0.0 && a.signum() != b.signum() {
            if let Ok(t) = brent(g, grid[i], grid[i + 1], 1e-15) {
                roots.push(t);
            }
        }
    }
    let mut out = Vec::new();
    for t in roots {
        let Some(m) = model_at(t) else { continue };
        let m = newton(p1, p2, bins, (m.alpha, m.beta)).unwrap_or(m);
        let r = bins.residual(&m, p1, p2);
        if r.0.abs() < FIT_TOL && r.1.abs() < FIT_TOL {
            out.push(ordered(m.alpha, m.beta)?);
        }
    }
    Ok(out)
}

/// Rates matching both probe masses to within `1e-8`, with `alpha >= beta`.
///
/// When two rate pairs reproduce the probe masses the one closest to
/// `alpha = beta` is returned; [`fit_candidates`] lists all of them.
pub fn fit(p1: f64, p2: f64, bins: &ProbeBins) -> Result<ParametricLlrModel> {
    fit_candidates(p1, p2, bins)?.into_iter().next().ok_or(Error::InfeasibleFit)
}

/// One-parameter fit with `alpha = beta + 1`, the rates of a consistent LLR,
/// matching only the mass of `bins.bin1`.
pub fn fit_consistent(p1: f64, bins: &ProbeBins) -> Result<ParametricLlrModel> {
    let (lo, hi) = bins.bin1;
    let mass = |lb: f64| {
        let b = lb.exp();
        bin_probability(&ParametricLlrModel { alpha: b + 1.0, beta: b }, lo, hi) - p1
    };
    let (a, b) = (-30.0, 30.0);
    if !(p1 > 0.0) || mass(a).signum() == mass(b).signum() {
        return Err(Error::InfeasibleFit);
    }
    let beta = brent(mass, a, b, 1e-13)?.exp();
    ParametricLlrModel::new(beta + 1.0, beta)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FitKind {
    TwoProbe,
    Consistent,
}

/// [`fit`], or [`fit_consistent`] when the two probe masses admit no rate pair.
pub fn fit_or_consistent(p1: f64, p2: f64, bins: &ProbeBins) -> Result<(ParametricLlrModel, FitKind)> {
    match fit(p1, p2, bins) {
        Ok(m) => Ok((m, FitKind::TwoProbe)),
        Err(Error::InfeasibleFit) => Ok((fit_consistent(p1, bins)?, FitKind::Consistent)),
        Err(e) => Err(e),
    }
}

/// Levels `ln(p_1k / p_0k)` from the model's conditional bin masses.
pub fn levels_from_model(m: &ParametricLlrModel, edges: &BinEdges) -> Vec<f64> {
    (0..edges.bins())
        .map(|k| {
            let (lo, hi) = edges.bin_limits(k);
            m.log_ratio(lo, hi)
        })
        .collect()
}
