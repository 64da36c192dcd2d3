//! Single-mode pure states and truncation rules.

use num_complex::Complex64;

use crate::config::CatSign;
use crate::error::{Error, Result};

/// Coherent state amplitudes `⟨n|α⟩` for `n < dim`.
pub fn coherent(alpha: Complex64, dim: usize) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(dim);
    let mut c = Complex64::new((-0.5 * alpha.norm_sqr()).exp(), 0.0);
    for n in 0..dim {
        out.push(c);
        c = c * alpha / ((n + 1) as f64).sqrt();
    }
    out
}

/// `(|ξ⟩ ± |−ξ⟩)/√N±`, renormalised after truncation.
pub fn cat(xi0: f64, sign: CatSign, dim: usize) -> Result<Vec<Complex64>> {
    if sign == CatSign::Minus && xi0 == 0.0 {
        return Err(Error::InvalidArgument("odd cat of zero amplitude".into()));
    }
    let coh = coherent(Complex64::new(xi0, 0.0), dim);
    let keep = match sign {
        CatSign::Plus => 0,
        CatSign::Minus => 1,
    };
    let mut v: Vec<Complex64> = coh
        .iter()
        .enumerate()
        .map(|(n, c)| {
            if n % 2 == keep {
                c * 2.0
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
        .collect();
    normalize(&mut v, sign.norm(xi0), "cat state")?;
    Ok(v)
}

/// Squeezed vacuum with Q variance `e^{−2r}/4`.
pub fn squeezed_vacuum(r: f64, dim: usize) -> Result<Vec<Complex64>> {
    let t = -r.tanh();
    let mut v = vec![Complex64::new(0.0, 0.0); dim];
    let mut c = 1.0 / r.cosh().sqrt();
    let mut n = 0;
    while 2 * n < dim {
        v[2 * n] = Complex64::new(c, 0.0);
        c *= t * ((2 * n + 1) as f64 / (2 * n + 2) as f64).sqrt();
        n += 1;
    }
    normalize(&mut v, 1.0, "squeezed vacuum")?;
    Ok(v)
}

/// Rescale to unit norm. `full_norm_sqr` is the squared norm before truncation; fails when
/// more than `1e-10` of it was cut away.
fn normalize(v: &mut [Complex64], full_norm_sqr: f64, what: &str) -> Result<()> {
    let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum();
    let lost = 1.0 - norm / full_norm_sqr;
    if !(norm > 0.0) || lost > TRUNCATION_LIMIT {
        return Err(Error::Truncation(format!(
            "{what}: {} levels discard {lost:.3e} of the norm",
            v.len()
        )));
    }
    let s = 1.0 / norm.sqrt();
    for z in v.iter_mut() {
        *z *= s;
    }
    Ok(())
}

/// Largest discarded population accepted by state preparation.
pub const TRUNCATION_LIMIT: f64 = 1e-10;

/// Photon-number populations of the coherent state `|ξ⟩`, first `len` levels.
pub fn poisson_pops(xi0: f64, len: usize) -> Vec<f64> {
    let lam = xi0 * xi0;
    let mut out = Vec::with_capacity(len);
    let mut ln_p = -lam;
    for n in 0..len {
        out.push(if lam == 0.0 {
            (n == 0) as u8 as f64
        } else {
            ln_p.exp()
        });
        ln_p += lam.ln() - ((n + 1) as f64).ln();
    }
    out
}

/// Photon-number populations of squeezed vacuum, first `len` levels.
pub fn squeezed_pops(r: f64, len: usize) -> Vec<f64> {
    let t2 = r.tanh().powi(2);
    let mut out = vec![0.0; len];
    let mut p = 1.0 / r.cosh();
    let mut k = 0;
    while 2 * k < len {
        out[2 * k] = p;
        p *= t2 * (2 * k + 1) as f64 / (2 * k + 2) as f64;
        k += 1;
    }
    out
}

/// Population left outside the first `dim` levels.
pub fn tail_beyond(pops: &[f64], dim: usize) -> f64 {
    pops.iter().skip(dim).rev().sum()
}

/// Smallest `dim` whose discarded tail is below `tol`.
fn cut_for(pops: &[f64], tol: f64) -> usize {
    let mut tail = 0.0;
    for n in (0..pops.len()).rev() {
        tail += pops[n];
        if tail >= tol {
            return n + 1;
        }
    }
    0
}

/// Levels kept for the cat mode: the larger of a ±6σ rule and the exact tail rule.
pub fn cat_cutoff(xi0: f64, tol: f64) -> usize {
    let rule = (xi0 * xi0 + 6.0 * xi0 + 10.0).ceil() as usize;
    rule.max(cut_for(&poisson_pops(xi0, 4 * rule + 200), tol))
}

/// Levels kept for the squeezed mode: the larger of `10 + 8 sinh²r` and the exact tail rule.
pub fn squeeze_cutoff(r: f64, tol: f64) -> usize {
    let rule = (10.0 + 8.0 * r.sinh().powi(2)).ceil() as usize;
    let search = 200 + (150.0 * (2.0 * r.abs()).exp()) as usize;
    rule.max(cut_for(&squeezed_pops(r, search), tol))
}
