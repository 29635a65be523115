//! Plain-text alist format for sparse parity-check matrices.
//!
//! ```text
//! n m
//! max_col_degree max_row_degree
//! column degrees
//! row degrees
//! one line per column: 1-based row indices, padded with 0
//! one line per row: 1-based column indices, padded with 0
//! ```

use std::fmt::Write as _;

use super::ParityCheckCode;
use crate::error::{Error, Result};

pub fn write_alist(code: &ParityCheckCode) -> String {
    let (n, m) = (code.n(), code.m());
    let max_col = code.vars().iter().map(Vec::len).max().unwrap_or(0);
    let max_row = code.checks().iter().map(Vec::len).max().unwrap_or(0);
    let mut s = format!("{n} {m}\n{max_col} {max_row}\n");
    let line = |s: &mut String, items: &mut dyn Iterator<Item = String>| {
        let v: Vec<String> = items.collect();
        writeln!(s, "{}", v.join(" ")).expect("writing to a String");
    };
    line(&mut s, &mut code.vars().iter().map(|v| v.len().to_string()));
    line(&mut s, &mut code.checks().iter().map(|c| c.len().to_string()));
    for adj in code.vars() {
        let mut sorted = adj.clone();
        sorted.sort_unstable();
        let mut items: Vec<String> = sorted.iter().map(|c| (c + 1).to_string()).collect();
        items.resize(max_col, "0".into());
        line(&mut s, &mut items.into_iter());
    }
    for adj in code.checks() {
        let mut items: Vec<String> = adj.iter().map(|v| (v + 1).to_string()).collect();
        items.resize(max_row, "0".into());
        line(&mut s, &mut items.into_iter());
    }
    s
}

pub fn read_alist(text: &str) -> Result<ParityCheckCode> {
    let mut tokens = text.split_whitespace().map(|t| t.parse::<usize>().map_err(|e| Error::Parse(format!("`{t}`: {e}"))));
    let mut next = || tokens.next().unwrap_or_else(|| Err(Error::Parse("alist ended early".into())));
    let (n, m) = (next()?, next()?);
    let (max_col, max_row) = (next()?, next()?);
    let col_deg = (0..n).map(|_| next()).collect::<Result<Vec<_>>>()?;
    let row_deg = (0..m).map(|_| next()).collect::<Result<Vec<_>>>()?;
    let mut cols = Vec::with_capacity(n);
    for &d in &col_deg {
        let entries = (0..max_col).map(|_| next()).collect::<Result<Vec<_>>>()?;
        cols.push(nonzero(&entries, d, m)?);
    }
    let mut checks = Vec::with_capacity(m);
    for &d in &row_deg {
        let entries = (0..max_row).map(|_| next()).collect::<Result<Vec<_>>>()?;
        checks.push(nonzero(&entries, d, n)?.into_iter().map(|v| v as u32).collect::<Vec<u32>>());
    }
    // both adjacency views must describe the same matrix
    let mut from_rows: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (c, row) in checks.iter().enumerate() {
        for &v in row {
            from_rows[v as usize].push(c);
        }
    }
    for (v, mut col) in cols.into_iter().enumerate() {
        col.sort_unstable();
        if col != from_rows[v] {
            return Err(Error::Parse(format!("column {} disagrees with the row lists", v + 1)));
        }
    }
    ParityCheckCode::from_checks(n, checks)
}

fn nonzero(entries: &[usize], degree: usize, bound: usize) -> Result<Vec<usize>> {
    let idx: Vec<usize> = entries.iter().copied().filter(|&x| x != 0).collect();
    if idx.len() != degree || idx.iter().any(|&x| x > bound) {
        return Err(Error::Parse(format!("adjacency list {entries:?} does not match degree {degree}")));
    }
    Ok(idx.into_iter().map(|x| x - 1).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ldpc::build_code;
    use crate::rng::MasterSeed;

    #[test]
    fn round_trip() {
        let code = build_code(120, 3, 6, MasterSeed(11)).unwrap();
        let text = write_alist(&code);
        assert!(text.starts_with("120 60\n3 6\n"));
        assert_eq!(read_alist(&text).unwrap(), code);
    }

    #[test]
    fn rejects_inconsistent_files() {
        assert!(read_alist("4 2\n1 2\n1 1 1").is_err());
        let bad = "3 1\n1 3\n1 1 1\n3\n1\n1\n0\n1 2 3\n";
        assert!(read_alist(bad).is_err());
    }
}
