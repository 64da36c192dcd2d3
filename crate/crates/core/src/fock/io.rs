//! Plain-text dump format for density matrices.
//!
//! ```text
//! # catsim complex matrix v1
//! <rows> <cols>
//! <row> <col> <re> <im>      one line per nonzero entry, row-major order
//! ```
//! Floats use Rust's shortest round-trip formatting, so a dump reads back bit-exactly.

use std::io::{BufRead, Write};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

const HEADER: &str = "# catsim complex matrix v1";

pub fn write_matrix<W: Write>(mut w: W, m: &DMatrix<Complex64>) -> Result<()> {
    writeln!(w, "{HEADER}")?;
    writeln!(w, "{} {}", m.nrows(), m.ncols())?;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            let z = m[(i, j)];
            if z.re != 0.0 || z.im != 0.0 {
                writeln!(w, "{i} {j} {:?} {:?}", z.re, z.im)?;
            }
        }
    }
    Ok(())
}

pub fn read_matrix<R: BufRead>(r: R) -> Result<DMatrix<Complex64>> {
    let bad = |msg: String| Error::Io(format!("malformed matrix dump: {msg}"));
    let mut lines = r.lines();
    let header = lines.next().ok_or_else(|| bad("empty input".into()))??;
    if header.trim() != HEADER {
        return Err(bad(format!("unexpected header '{header}'")));
    }
    let shape = lines.next().ok_or_else(|| bad("missing shape".into()))??;
    let dims: Vec<usize> = shape
        .split_whitespace()
        .map(|s| s.parse().map_err(|_| bad(format!("bad shape '{shape}'"))))
        .collect::<Result<_>>()?;
    let [rows, cols] = dims[..] else {
        return Err(bad(format!("bad shape '{shape}'")));
    };
    let mut m = DMatrix::zeros(rows, cols);
    for line in lines {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split_whitespace().collect();
        if f.len() != 4 {
            return Err(bad(format!("bad entry '{line}'")));
        }
        let idx = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| bad(format!("bad index in '{line}'")))
        };
        let val = |s: &str| {
            s.parse::<f64>()
                .map_err(|_| bad(format!("bad value in '{line}'")))
        };
        let (i, j) = (idx(f[0])?, idx(f[1])?);
        if i >= rows || j >= cols {
            return Err(bad(format!("index out of range in '{line}'")));
        }
        m[(i, j)] = Complex64::new(val(f[2])?, val(f[3])?);
    }
    Ok(m)
}
