//! Systematic encoding through Gaussian elimination over GF(2).

use crate::error::{Error, Result};

type Word = u64;
const BITS: usize = Word::BITS as usize;

fn words(n: usize) -> usize {
    n.div_ceil(BITS)
}

#[inline]
fn get(row: &[Word], j: usize) -> bool {
    row[j / BITS] >> (j % BITS) & 1 == 1
}

#[inline]
fn set(row: &mut [Word], j: usize) {
    row[j / BITS] |= 1 << (j % BITS);
}

/// Parity bits as dense GF(2) combinations of the information bits.
///
/// Pivot columns of the reduced check matrix carry parity; every other column
/// carries one information bit unchanged.
#[derive(Debug, Clone, PartialEq)]
pub struct Encoder {
    n: usize,
    info: Vec<usize>,
    parity: Vec<usize>,
    /// Row `r` selects the information bits summed into `parity[r]`.
    rows: Vec<Vec<Word>>,
}

impl Encoder {
    pub fn new(n: usize, checks: &[Vec<u32>]) -> Result<Self> {
        let w = words(n);
        let mut h: Vec<Vec<Word>> = checks
            .iter()
            .map(|row| {
                let mut r = vec![0; w];
                for &v in row {
                    r[v as usize / BITS] ^= 1 << (v as usize % BITS);
                }
                r
            })
            .collect();
        let mut pivots = Vec::new();
        let mut rank = 0;
        for col in 0..n {
            let Some(p) = (rank..h.len()).find(|&r| get(&h[r], col)) else { continue };
            h.swap(rank, p);
            let (head, tail) = h.split_at_mut(rank);
            let (pivot, tail) = tail.split_first_mut().expect("pivot row");
            let lo = col / BITS;
            for r in head.iter_mut().chain(tail.iter_mut()) {
                if get(r, col) {
                    for (a, b) in r[lo..].iter_mut().zip(&pivot[lo..]) {
                        *a ^= b;
                    }
                }
            }
            pivots.push(col);
            rank += 1;
            if rank == h.len() {
                break;
            }
        }
        let mut is_pivot = vec![false; n];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let info: Vec<usize> = (0..n).filter(|&j| !is_pivot[j]).collect();
        if info.is_empty() {
            return Err(Error::Construction("check matrix has full column rank".into()));
        }
        let kw = words(info.len());
        let rows = h[..rank]
            .iter()
            .map(|r| {
                let mut out = vec![0; kw];
                for (i, &j) in info.iter().enumerate() {
                    if get(r, j) {
                        set(&mut out, i);
                    }
                }
                out
            })
            .collect();
        Ok(Encoder { n, info, parity: pivots, rows })
    }

    pub fn k(&self) -> usize {
        self.info.len()
    }

    pub fn info_positions(&self) -> &[usize] {
        &self.info
    }

    pub fn encode(&self, info: &[u8]) -> Result<Vec<u8>> {
        if info.len() != self.k() {
            return Err(Error::DimensionMismatch { expected: self.k(), got: info.len() });
        }
        let mut packed = vec![0; words(info.len())];
        let mut cw = vec![0u8; self.n];
        for (i, (&b, &j)) in info.iter().zip(&self.info).enumerate() {
            if b & 1 == 1 {
                set(&mut packed, i);
                cw[j] = 1;
            }
        }
        for (row, &j) in self.rows.iter().zip(&self.parity) {
            let ones: u32 = row.iter().zip(&packed).map(|(a, b)| (a & b).count_ones()).sum();
            cw[j] = (ones & 1) as u8;
        }
        Ok(cw)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hamming_7_4() {
        let checks = vec![vec![0, 1, 2, 4], vec![1, 2, 3, 5], vec![0, 2, 3, 6]];
        let e = Encoder::new(7, &checks).unwrap();
        assert_eq!(e.k(), 4);
        for m in 0u8..16 {
            let info: Vec<u8> = (0..4).map(|i| m >> i & 1).collect();
            let cw = e.encode(&info).unwrap();
            for row in &checks {
                assert_eq!(row.iter().fold(0, |a, &v| a ^ cw[v as usize]), 0);
            }
            let back: Vec<u8> = e.info_positions().iter().map(|&j| cw[j]).collect();
            assert_eq!(back, info);
        }
    }

    #[test]
    fn dependent_rows_raise_dimension() {
        // third row is the sum of the first two
        let checks = vec![vec![0, 1], vec![1, 2], vec![0, 2]];
        let e = Encoder::new(4, &checks).unwrap();
        assert_eq!(e.k(), 2);
    }
}
