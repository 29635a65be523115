//! Flooding sum-product decoding in the LLR domain, `L > 0` meaning bit 1.

use super::ParityCheckCode;

/// Channel LLRs are clipped to this magnitude before decoding.
pub const LLR_CLIP: f64 = 50.0;
const TANH_CLAMP: f64 = 1.0 - 1e-15;

#[derive(Debug, Clone, PartialEq)]
pub struct DecodeResult {
    /// Hard decisions on all code bits.
    pub codeword: Vec<u8>,
    pub iterations: usize,
    pub converged: bool,
}

/// Message buffers for one code, reusable across codewords.
#[derive(Debug, Clone)]
pub struct BpDecoder {
    row_start: Vec<usize>,
    edge_var: Vec<u32>,
    var_edges: Vec<Vec<u32>>,
    v2c: Vec<f64>,
    c2v: Vec<f64>,
    scratch: Vec<f64>,
}

impl BpDecoder {
    pub fn new(code: &ParityCheckCode) -> Self {
        let mut row_start = Vec::with_capacity(code.m() + 1);
        let mut edge_var = Vec::new();
        let mut var_edges = vec![Vec::new(); code.n()];
        row_start.push(0);
        for row in code.checks() {
            for &v in row {
                var_edges[v as usize].push(edge_var.len() as u32);
                edge_var.push(v);
            }
            row_start.push(edge_var.len());
        }
        let e = edge_var.len();
        let max_dc = code.checks().iter().map(Vec::len).max().unwrap_or(0);
        BpDecoder { row_start, edge_var, var_edges, v2c: vec![0.0; e], c2v: vec![0.0; e], scratch: vec![0.0; max_dc] }
    }

    pub fn decode(&mut self, llrs: &[f64], max_iter: usize) -> DecodeResult {
        let n = self.var_edges.len();
        assert_eq!(llrs.len(), n, "one LLR per code bit");
        let ch: Vec<f64> = llrs.iter().map(|l| l.clamp(-LLR_CLIP, LLR_CLIP)).collect();
        for (e, &v) in self.edge_var.iter().enumerate() {
            self.v2c[e] = ch[v as usize];
        }
        let mut hard: Vec<u8> = ch.iter().map(|&l| u8::from(l > 0.0)).collect();
        if self.syndrome_ok(&hard) {
            return DecodeResult { codeword: hard, iterations: 0, converged: true };
        }
        for it in 1..=max_iter {
            self.check_update();
            for v in 0..n {
                let edges = &self.var_edges[v];
                let total = ch[v] + edges.iter().map(|&e| self.c2v[e as usize]).sum::<f64>();
                for &e in edges {
                    self.v2c[e as usize] = total - self.c2v[e as usize];
                }
                hard[v] = u8::from(total > 0.0);
            }
            if self.syndrome_ok(&hard) {
                return DecodeResult { codeword: hard, iterations: it, converged: true };
            }
        }
        DecodeResult { codeword: hard, iterations: max_iter, converged: false }
    }

    /// Exact tanh rule with forward-backward products over each check.
    fn check_update(&mut self) {
        for c in 0..self.row_start.len() - 1 {
            let (lo, hi) = (self.row_start[c], self.row_start[c + 1]);
            let d = hi - lo;
            let t = &mut self.scratch[..d];
            for (ti, &m) in t.iter_mut().zip(&self.v2c[lo..hi]) {
                *ti = (0.5 * m).tanh();
            }
            // backward products in c2v, forward running product in `acc`
            let mut acc = 1.0;
            for i in (0..d).rev() {
                self.c2v[lo + i] = acc;
                acc *= t[i];
            }
            acc = 1.0;
            for i in 0..d {
                let p = (acc * self.c2v[lo + i]).clamp(-TANH_CLAMP, TANH_CLAMP);
                self.c2v[lo + i] = 2.0 * p.atanh();
                acc *= t[i];
            }
        }
    }

    fn syndrome_ok(&self, hard: &[u8]) -> bool {
        (0..self.row_start.len() - 1).all(|c| {
            self.edge_var[self.row_start[c]..self.row_start[c + 1]].iter().fold(0u8, |a, &v| a ^ hard[v as usize]) == 0
        })
    }
}

/// One-shot decode with freshly allocated buffers.
pub fn decode_bp(code: &ParityCheckCode, llrs: &[f64], max_iter: usize) -> DecodeResult {
    BpDecoder::new(code).decode(llrs, max_iter)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ldpc::build_code;
    use crate::rng::{Domain, MasterSeed};
    use rand::Rng;
    use rand_distr::StandardNormal;

    fn codeword(code: &ParityCheckCode, seed: u64) -> Vec<u8> {
        let mut rng = MasterSeed(seed).stream(Domain::Test, 0);
        let info: Vec<u8> = (0..code.k()).map(|_| rng.random_range(0..2)).collect();
        code.encode(&info).unwrap()
    }

    #[test]
    fn clean_input_converges_at_once() {
        let code = build_code(400, 3, 6, MasterSeed(1)).unwrap();
        let cw = codeword(&code, 2);
        let llrs: Vec<f64> = cw.iter().map(|&b| if b == 1 { 1e9 } else { -1e9 }).collect();
        let r = decode_bp(&code, &llrs, 50);
        assert!(r.converged && r.iterations <= 2);
        assert_eq!(r.codeword, cw);
    }

    #[test]
    fn corrects_noise_on_awgn() {
        let code = build_code(2000, 3, 6, MasterSeed(3)).unwrap();
        let cw = codeword(&code, 4);
        // BPSK at Eb/N0 = 3 dB, well above the (3,6) threshold
        let sigma = (1.0 / (2.0 * 0.5 * 10f64.powf(0.3))).sqrt();
        let mut rng = MasterSeed(5).stream(Domain::Test, 1);
        let llrs: Vec<f64> = cw
            .iter()
            .map(|&b| {
                let x = if b == 1 { 1.0 } else { -1.0 };
                let y = x + sigma * rng.sample::<f64, _>(StandardNormal);
                2.0 * y / (sigma * sigma)
            })
            .collect();
        let raw_errors = llrs.iter().zip(&cw).filter(|(l, &b)| u8::from(**l > 0.0) != b).count();
        assert!(raw_errors > 20);
        let r = decode_bp(&code, &llrs, 50);
        assert!(r.converged);
        assert_eq!(r.codeword, cw);
    }

    #[test]
    fn decoder_is_deterministic_and_reusable() {
        let code = build_code(400, 3, 6, MasterSeed(1)).unwrap();
        let mut rng = MasterSeed(7).stream(Domain::Test, 0);
        let llrs: Vec<f64> = (0..400).map(|_| rng.sample::<f64, _>(StandardNormal) * 3.0).collect();
        let mut dec = BpDecoder::new(&code);
        let a = dec.decode(&llrs, 20);
        let b = dec.decode(&llrs, 20);
        assert_eq!(a, b);
        assert_eq!(a, decode_bp(&code, &llrs, 20));
        assert!(a.iterations <= 20);
    }
}
