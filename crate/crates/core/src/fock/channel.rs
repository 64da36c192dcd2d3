//! Zero-temperature damping as an exact Stinespring dilation.
//!
//! With vacuum reservoirs the coupled, damped modes form a passive linear channel fixed by
//! the amplitude propagator `T = exp(A t)`. Each output mode `i` sees
//! `a_i(t) = T_i1 a_S + T_i2 a_E + vacuum noise`, which equals a passive unitary with first row
//! `T_i / |T_i|` followed by pure loss of transmissivity `|T_i|²`.

use nalgebra::{DMatrix, Matrix2};
use num_complex::Complex64;

use super::basis::TwoModeBasis;
use super::passive::{apply_passive, complete_row};
use super::single_mode::SingleModeState;
use crate::config::ExperimentConfig;

/// Amplitude propagator of `d⟨a⟩/dt = A⟨a⟩`, `A = [[−γ_S, −iκ], [−iκ, −γ_E]]`.
pub fn amplitude_propagator(config: &ExperimentConfig, t: f64) -> Matrix2<Complex64> {
    let a = Matrix2::new(
        Complex64::new(-config.gamma_s, 0.0),
        Complex64::new(0.0, -config.kappa),
        Complex64::new(0.0, -config.kappa),
        Complex64::new(-config.gamma_e, 0.0),
    );
    (a * Complex64::new(t, 0.0)).exp()
}

/// Reduced density operators `(ρ_S, ρ_E)` of a pure two-mode state.
pub fn partial_traces(
    basis: &TwoModeBasis,
    psi: &[Complex64],
) -> (SingleModeState, SingleModeState) {
    let d = basis.n_max + 1;
    let mut m = DMatrix::<Complex64>::zeros(d, d);
    for (i, &z) in psi.iter().enumerate() {
        let (ms, me) = basis.levels(i);
        m[(ms, me)] = z;
    }
    let (a, b) = split(&m);
    // Ψ = A + iB:  ΨΨ† = AAᵀ + BBᵀ + i(BAᵀ − ABᵀ),  ΨᵀΨ* = AᵀA + BᵀB + i(BᵀA − AᵀB)
    let (at, bt) = (a.transpose(), b.transpose());
    let rho_s = join(&(&a * &at + &b * &bt), &(&b * &at - &a * &bt));
    let rho_e = join(&(&at * &a + &bt * &b), &(&bt * &a - &at * &b));
    (
        SingleModeState { rho: rho_s },
        SingleModeState { rho: rho_e },
    )
}

// Real products go through the blocked f64 kernel, which is much faster than complex ones.
fn split(m: &DMatrix<Complex64>) -> (DMatrix<f64>, DMatrix<f64>) {
    (m.map(|z| z.re), m.map(|z| z.im))
}

fn join(re: &DMatrix<f64>, im: &DMatrix<f64>) -> DMatrix<Complex64> {
    re.zip_map(im, Complex64::new)
}

/// Reduced density operators `(ρ_S, ρ_E)` of a dense two-mode density matrix.
pub fn partial_traces_dense(
    basis: &TwoModeBasis,
    rho: &DMatrix<Complex64>,
) -> (SingleModeState, SingleModeState) {
    let d = basis.n_max + 1;
    let mut rs = DMatrix::<Complex64>::zeros(d, d);
    let mut re = DMatrix::<Complex64>::zeros(d, d);
    for i in 0..basis.dim() {
        let (ms, me) = basis.levels(i);
        for ms2 in 0..d {
            if let Some(j) = basis.index(ms2, me) {
                rs[(ms, ms2)] += rho[(i, j)];
            }
        }
        for me2 in 0..d {
            if let Some(j) = basis.index(ms, me2) {
                re[(me, me2)] += rho[(i, j)];
            }
        }
    }
    (SingleModeState { rho: rs }, SingleModeState { rho: re })
}

const KRAUS_FLOOR: f64 = 1e-17;

/// Pure-loss channel keeping amplitude `sigma`:
/// Kraus operators `K_l|n⟩ = √C(n,l) σ^{n−l} (1−σ²)^{l/2} |n−l⟩`.
pub fn pure_loss(state: &SingleModeState, sigma: f64) -> SingleModeState {
    let d = state.dim();
    if sigma >= 1.0 {
        return state.clone();
    }
    let ln_fact: Vec<f64> = std::iter::once(0.0)
        .chain((1..d).scan(0.0, |acc, k| {
            *acc += (k as f64).ln();
            Some(*acc)
        }))
        .collect();
    let loss = 1.0 - sigma * sigma;
    // amp[l][k] = ⟨k−l|K_l|k⟩
    let amp = |l: usize, k: usize| -> f64 {
        let kept = k - l;
        if sigma == 0.0 {
            return if kept == 0 { 1.0 } else { 0.0 };
        }
        let ln = 0.5 * (ln_fact[k] - ln_fact[l] - ln_fact[kept])
            + kept as f64 * sigma.ln()
            + 0.5 * l as f64 * loss.ln();
        ln.exp()
    };
    let mut out = DMatrix::<Complex64>::zeros(d, d);
    for l in 0..d {
        let col: Vec<f64> = (l..d).map(|k| amp(l, k)).collect();
        // amplitudes below KRAUS_FLOOR contribute less than it per element
        let Some(lo) = col.iter().position(|&x| x >= KRAUS_FLOOR) else {
            continue;
        };
        let hi = col.iter().rposition(|&x| x >= KRAUS_FLOOR).unwrap_or(lo) + 1;
        for n in lo..hi {
            let an = col[n];
            let src = state.rho.column(n + l);
            let mut dst = out.column_mut(n);
            for m in lo..hi {
                dst[m] += src[m + l] * (col[m] * an);
            }
        }
    }
    SingleModeState { rho: out }
}

/// Reduced states after zero-temperature damped evolution of the pure product input `psi0`.
pub fn damped_reduced_states(
    config: &ExperimentConfig,
    basis: &TwoModeBasis,
    psi0: &[Complex64],
    t: f64,
) -> (SingleModeState, SingleModeState) {
    let tm = amplitude_propagator(config, t);
    let mut out = Vec::with_capacity(2);
    for row in 0..2 {
        let (x, tau) = complete_row([tm[(row, 0)], tm[(row, 1)]]);
        let mut psi = psi0.to_vec();
        apply_passive(&x, basis, &mut [&mut psi]);
        let (first, _) = partial_traces(basis, &psi);
        out.push(pure_loss(&first, tau));
    }
    let e = out.pop().expect("two modes");
    let s = out.pop().expect("two modes");
    (s, e)
}
