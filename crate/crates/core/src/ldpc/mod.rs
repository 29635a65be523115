//! Regular LDPC codes: random construction, systematic encoding and
//! sum-product decoding.

mod alist;
mod bp;
mod gf2;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::rng::{Domain, MasterSeed};

pub use alist::{read_alist, write_alist};
pub use bp::{decode_bp, BpDecoder, DecodeResult, LLR_CLIP};
pub use gf2::Encoder;

const MAX_ATTEMPTS: u64 = 20;

/// Sparse parity-check matrix with its systematic encoder.
#[derive(Debug, Clone, PartialEq)]
pub struct ParityCheckCode {
    n: usize,
    checks: Vec<Vec<u32>>,
    vars: Vec<Vec<u32>>,
    encoder: Encoder,
}

impl ParityCheckCode {
    /// Code from check adjacency lists over `n` variables.
    pub fn from_checks(n: usize, checks: Vec<Vec<u32>>) -> Result<Self> {
        let mut vars = vec![Vec::new(); n];
        for (c, row) in checks.iter().enumerate() {
            for &v in row {
                let v = v as usize;
                if v >= n {
                    return Err(Error::Construction(format!("check {c} references variable {v} >= {n}")));
                }
                if vars[v].last() == Some(&(c as u32)) {
                    return Err(Error::Construction(format!("double edge between check {c} and variable {v}")));
                }
                vars[v].push(c as u32);
            }
        }
        let encoder = Encoder::new(n, &checks)?;
        Ok(ParityCheckCode { n, checks, vars, encoder })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.encoder.k()
    }

    pub fn m(&self) -> usize {
        self.checks.len()
    }

    pub fn rate(&self) -> f64 {
        self.k() as f64 / self.n as f64
    }

    pub fn checks(&self) -> &[Vec<u32>] {
        &self.checks
    }

    pub fn vars(&self) -> &[Vec<u32>] {
        &self.vars
    }

    /// Column degree when every column has the same weight.
    pub fn dv(&self) -> Option<usize> {
        uniform(self.vars.iter().map(Vec::len))
    }

    /// Row degree when every row has the same weight.
    pub fn dc(&self) -> Option<usize> {
        uniform(self.checks.iter().map(Vec::len))
    }

    pub fn info_positions(&self) -> &[usize] {
        self.encoder.info_positions()
    }

    pub fn encode(&self, info: &[u8]) -> Result<Vec<u8>> {
        self.encoder.encode(info)
    }

    /// Information bits at their systematic positions.
    pub fn extract_info(&self, codeword: &[u8]) -> Vec<u8> {
        self.info_positions().iter().map(|&j| codeword[j]).collect()
    }

    pub fn is_codeword(&self, bits: &[u8]) -> bool {
        bits.len() == self.n && self.checks.iter().all(|row| row.iter().fold(0u8, |a, &v| a ^ bits[v as usize]) & 1 == 0)
    }

    /// Number of length-4 cycles, counted once per pair of variables sharing two checks.
    pub fn four_cycles(&self) -> usize {
        let mut count = 0;
        let mut mark = vec![u32::MAX; self.n];
        for v in 0..self.n {
            for &c in &self.vars[v] {
                for &u in &self.checks[c as usize] {
                    let u = u as usize;
                    if u <= v {
                        continue;
                    }
                    if mark[u] == v as u32 {
                        count += 1;
                    } else {
                        mark[u] = v as u32;
                    }
                }
            }
        }
        count
    }
}

fn uniform(mut it: impl Iterator<Item = usize>) -> Option<usize> {
    let first = it.next()?;
    it.all(|d| d == first).then_some(first)
}

/// Random `(dv, dc)`-regular code on `n` variables.
///
/// Edges come from a random socket permutation; double edges and 4-cycles are
/// then removed by swapping check endpoints with random edges.
pub fn build_code(n: usize, dv: usize, dc: usize, seed: MasterSeed) -> Result<ParityCheckCode> {
    if n == 0 || dv < 2 || dc <= dv || (n * dv) % dc != 0 {
        return Err(Error::InvalidConfig(format!("no ({dv}, {dc})-regular code of length {n}")));
    }
    for attempt in 0..MAX_ATTEMPTS {
        let mut rng = seed.stream(Domain::CodeConstruction, attempt);
        if let Some(checks) = try_construct(n, dv, dc, &mut rng) {
            return ParityCheckCode::from_checks(n, checks);
        }
    }
    Err(Error::Construction(format!("no valid ({dv}, {dc}) graph of length {n} after {MAX_ATTEMPTS} attempts")))
}

fn try_construct<R: Rng>(n: usize, dv: usize, dc: usize, rng: &mut R) -> Option<Vec<Vec<u32>>> {
    let m = n * dv / dc;
    // edge e joins variable e / dv and check slot[e] / dc
    let mut slot: Vec<usize> = (0..n * dv).collect();
    slot.shuffle(rng);
    let mut check_of: Vec<usize> = slot.iter().map(|s| s / dc).collect();

    let var_checks = |check_of: &[usize], v: usize| -> Vec<usize> { check_of[v * dv..(v + 1) * dv].to_vec() };
    let edges = n * dv;
    // 4-cycles are removed only while it seems achievable; double edges always
    let cycle_passes = 200;
    for pass in 0..cycle_passes + 200 {
        let fix_cycles = pass < cycle_passes;
        let mut rows = vec![Vec::with_capacity(dc); m];
        for (e, &c) in check_of.iter().enumerate() {
            rows[c].push(e / dv);
        }
        let mut bad = Vec::new();
        let mut mark = vec![usize::MAX; n];
        for v in 0..n {
            let cs = var_checks(&check_of, v);
            let mut hit = None;
            'scan: for (i, &c) in cs.iter().enumerate() {
                if cs[..i].contains(&c) {
                    hit = Some(i);
                    break;
                }
                if !fix_cycles {
                    continue;
                }
                for &u in &rows[c] {
                    if u != v && mark[u] == v {
                        hit = Some(i);
                        break 'scan;
                    }
                }
                for &u in &rows[c] {
                    mark[u] = v;
                }
            }
            if let Some(i) = hit {
                bad.push(v * dv + i);
            }
        }
        if bad.is_empty() {
            let rows = rows.into_iter().map(|r| r.into_iter().map(|v| v as u32).collect()).collect();
            return Some(rows);
        }
        for e in bad {
            let f = rng.random_range(0..edges);
            check_of.swap(e, f);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_code_degrees() {
        let code = build_code(16, 3, 6, MasterSeed(1)).unwrap();
        assert_eq!(code.m(), 8);
        assert_eq!(code.dv(), Some(3));
        assert_eq!(code.dc(), Some(6));
        assert!(code.k() >= 8);
    }

    #[test]
    fn construction_is_deterministic() {
        let a = build_code(200, 3, 6, MasterSeed(9)).unwrap();
        let b = build_code(200, 3, 6, MasterSeed(9)).unwrap();
        let c = build_code(200, 3, 6, MasterSeed(10)).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.checks(), c.checks());
    }

    #[test]
    fn desk_scale_code_has_girth_six() {
        let code = build_code(8000, 3, 6, MasterSeed(2)).unwrap();
        assert_eq!(code.four_cycles(), 0);
        assert_eq!(code.k(), 4000);
        assert!(code.vars().iter().all(|v| v.len() == 3));
    }

    #[test]
    fn bad_parameters() {
        assert!(build_code(15, 3, 6, MasterSeed(0)).is_err());
        assert!(build_code(16, 3, 3, MasterSeed(0)).is_err());
    }

    #[test]
    fn codewords_satisfy_checks() {
        let code = build_code(600, 3, 6, MasterSeed(4)).unwrap();
        let mut rng = MasterSeed(5).stream(Domain::Test, 0);
        let zero = code.encode(&vec![0; code.k()]).unwrap();
        assert!(zero.iter().all(|&b| b == 0));
        let a: Vec<u8> = (0..code.k()).map(|_| rng.random_range(0..2)).collect();
        let b: Vec<u8> = (0..code.k()).map(|_| rng.random_range(0..2)).collect();
        let ca = code.encode(&a).unwrap();
        let cb = code.encode(&b).unwrap();
        assert!(code.is_codeword(&ca) && code.is_codeword(&cb));
        let sum: Vec<u8> = ca.iter().zip(&cb).map(|(x, y)| x ^ y).collect();
        assert!(code.is_codeword(&sum));
        assert_eq!(code.extract_info(&ca), a);
        assert!(code.encode(&a[1..]).is_err());
    }
}
