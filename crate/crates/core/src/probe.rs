//! Finite-shot simulation of the atomic-probe readout.
//!
//! A probe atom ends in `|c⟩` or `|b⟩`; the parity of the field fixes the odds, with
//! `W_meas(0) = 2(p_c − p_b) = π W(0)`. Every draw is seeded, and replications use separate
//! ChaCha streams of the same seed.

use std::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::SingleModeState;

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959_963_984_540_054;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProbeEstimate {
    pub shots: u64,
    pub counts_c: u64,
    pub counts_b: u64,
    pub estimate: f64,
    /// Half-width of the 95% normal-approximation interval.
    pub ci95: f64,
    pub seed: u64,
    pub stream: u64,
}

impl ProbeEstimate {
    pub fn covers(&self, truth: f64) -> bool {
        (self.estimate - truth).abs() <= self.ci95
    }
}

fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

fn binomial(n: u64, p: f64, rng: &mut ChaCha8Rng) -> Result<u64> {
    let d = Binomial::new(n, p.clamp(0.0, 1.0))
        .map_err(|e| Error::InvalidArgument(format!("binomial({n}, {p}): {e}")))?;
    Ok(d.sample(rng))
}

fn check_shots(shots: u64) -> Result<()> {
    if shots == 0 {
        return Err(Error::InvalidArgument("shots must be >= 1".into()));
    }
    Ok(())
}

/// Probability of `|c⟩` for a normalised Wigner origin value.
pub fn p_c(true_w: f64) -> Result<f64> {
    let bound = 2.0 / PI;
    if !true_w.is_finite() || true_w.abs() > bound * (1.0 + 1e-12) {
        return Err(Error::InvalidArgument(format!(
            "Wigner origin value {true_w} outside [-2/pi, 2/pi]"
        )));
    }
    Ok((0.5 * (1.0 + 0.5 * PI * true_w)).clamp(0.0, 1.0))
}

/// Estimate `W_meas(0) = π W(0)` from `shots` probe atoms.
pub fn probe_wigner_origin(true_w: f64, shots: u64, seed: u64) -> Result<ProbeEstimate> {
    probe_wigner_origin_stream(true_w, shots, seed, 0)
}

pub fn probe_wigner_origin_stream(
    true_w: f64,
    shots: u64,
    seed: u64,
    stream: u64,
) -> Result<ProbeEstimate> {
    check_shots(shots)?;
    let p = p_c(true_w)?;
    let c = binomial(shots, p, &mut rng(seed, stream))?;
    let b = shots - c;
    let n = shots as f64;
    let ph = c as f64 / n;
    Ok(ProbeEstimate {
        shots,
        counts_c: c,
        counts_b: b,
        estimate: 2.0 * (c as f64 - b as f64) / n,
        // estimate = 4 p̂ − 2
        ci95: Z95 * 4.0 * (ph * (1.0 - ph) / n).sqrt(),
        seed,
        stream,
    })
}

/// Same readout with detectors that register each atom with probability `efficiency`.
/// The estimate uses detected atoms only, `2(c − b)/(c + b)`.
pub fn probe_wigner_origin_lossy(
    true_w: f64,
    shots: u64,
    efficiency: f64,
    seed: u64,
    stream: u64,
) -> Result<ProbeEstimate> {
    check_shots(shots)?;
    if !(efficiency > 0.0 && efficiency <= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "efficiency {efficiency} outside (0, 1]"
        )));
    }
    let p = p_c(true_w)?;
    let mut r = rng(seed, stream);
    let c_all = binomial(shots, p, &mut r)?;
    let c = binomial(c_all, efficiency, &mut r)?;
    let b = binomial(shots - c_all, efficiency, &mut r)?;
    let n = (c + b) as f64;
    if c + b == 0 {
        return Err(Error::Degenerate("no atom was detected".into()));
    }
    let ph = c as f64 / n;
    Ok(ProbeEstimate {
        shots: c + b,
        counts_c: c,
        counts_b: b,
        estimate: 2.0 * (c as f64 - b as f64) / n,
        ci95: Z95 * 4.0 * (ph * (1.0 - ph) / n).sqrt(),
        seed,
        stream,
    })
}

/// Two-outcome readout whose mean encodes `Tr ρ₁ρ₂`: outcome `c` with probability
/// `(1 + overlap)/2`, estimate `(c − b)/shots`.
pub fn probe_overlap_value(
    true_overlap: f64,
    shots: u64,
    seed: u64,
    stream: u64,
) -> Result<ProbeEstimate> {
    check_shots(shots)?;
    if !(-1e-12..=1.0 + 1e-12).contains(&true_overlap) {
        return Err(Error::InvalidArgument(format!(
            "overlap {true_overlap} outside [0, 1]"
        )));
    }
    let c = binomial(shots, 0.5 * (1.0 + true_overlap), &mut rng(seed, stream))?;
    let b = shots - c;
    let n = shots as f64;
    let ph = c as f64 / n;
    Ok(ProbeEstimate {
        shots,
        counts_c: c,
        counts_b: b,
        estimate: (c as f64 - b as f64) / n,
        ci95: Z95 * 2.0 * (ph * (1.0 - ph) / n).sqrt(),
        seed,
        stream,
    })
}

/// Probe the overlap of two single-mode states computed by the oracle.
pub fn probe_overlap(
    a: &SingleModeState,
    b: &SingleModeState,
    shots: u64,
    seed: u64,
) -> Result<(f64, ProbeEstimate)> {
    let truth = a.overlap(b)?;
    Ok((
        truth,
        probe_overlap_value(truth.clamp(0.0, 1.0), shots, seed, 0)?,
    ))
}

/// `reps` independent replications on streams `0..reps`.
pub fn replicate_wigner_origin(
    true_w: f64,
    shots: u64,
    seed: u64,
    reps: u64,
) -> Result<Vec<ProbeEstimate>> {
    (0..reps)
        .map(|s| probe_wigner_origin_stream(true_w, shots, seed, s))
        .collect()
}

/// Summary of a batch of replications against the true measurement-convention value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Coverage {
    pub replications: usize,
    pub coverage: f64,
    pub mean: f64,
    pub bias: f64,
    /// Standard error of `mean`.
    pub std_error: f64,
}

pub fn coverage(estimates: &[ProbeEstimate], truth: f64) -> Coverage {
    let n = estimates.len() as f64;
    let mean = estimates.iter().map(|e| e.estimate).sum::<f64>() / n;
    let var = estimates
        .iter()
        .map(|e| (e.estimate - mean).powi(2))
        .sum::<f64>()
        / (n - 1.0).max(1.0);
    Coverage {
        replications: estimates.len(),
        coverage: estimates.iter().filter(|e| e.covers(truth)).count() as f64 / n,
        mean,
        bias: mean - truth,
        std_error: (var / n).sqrt(),
    }
}
