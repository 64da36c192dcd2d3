//! Passive (photon-number conserving) two-mode unitaries.

use nalgebra::Matrix2;
use num_complex::Complex64;

use super::basis::TwoModeBasis;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Apply the unitary `U` with `U† a U = X a` (so `⟨a⟩ → X⟨a⟩`) to each state in `states`.
///
/// `U` is block diagonal in total photon number. Shell `N` is built column by column from
/// shell `N − 1` using `N |k, N−k⟩ = (√k a_S† + √(N−k) a_E†)|…⟩` and
/// `U a_j† U† = Σ_i X_ij a_i†`, then applied and discarded. Column `k` only depends on
/// columns `k − 1` and `k` of the previous shell, so columns beyond the largest occupied
/// `m_S` are never built.
pub fn apply_passive(
    x: &Matrix2<Complex64>,
    basis: &TwoModeBasis,
    states: &mut [&mut [Complex64]],
) {
    let dim = basis.dim();
    for s in states.iter() {
        assert_eq!(s.len(), dim, "state length does not match basis");
    }
    let k_hi = states
        .iter()
        .flat_map(|s| {
            s.iter()
                .enumerate()
                .filter(|(_, z)| **z != ZERO)
                .map(|(i, _)| basis.levels(i).0)
        })
        .max()
        .unwrap_or(0);
    // prev[k * n + p] = ⟨p, N−1−p|U|k, N−1−k⟩ for shell N−1 (column-major, n rows)
    let mut prev = vec![Complex64::new(1.0, 0.0)];
    let mut cur: Vec<Complex64> = Vec::new();
    let mut seg = Vec::new();
    let mut a1 = Vec::new();
    let mut a2 = Vec::new();
    let sqrt: Vec<f64> = (0..=basis.n_max + 1).map(|k| (k as f64).sqrt()).collect();
    // shell 0 is the identity
    for n in 1..=basis.n_max {
        let len = n + 1;
        let cols = len.min(k_hi + 1);
        cur.clear();
        cur.resize(len * cols, ZERO);
        let inv_n = 1.0 / n as f64;
        for k in 0..cols {
            a1.clear();
            a1.resize(len, ZERO);
            a2.clear();
            a2.resize(len, ZERO);
            if k > 0 {
                raise(
                    &prev[(k - 1) * n..k * n],
                    x[(0, 0)],
                    x[(1, 0)],
                    &sqrt,
                    n,
                    &mut a1,
                );
            }
            if k < n && k < prev.len() / n {
                raise(
                    &prev[k * n..(k + 1) * n],
                    x[(0, 1)],
                    x[(1, 1)],
                    &sqrt,
                    n,
                    &mut a2,
                );
            }
            let (wk, wl) = (sqrt[k] * inv_n, sqrt[n - k] * inv_n);
            let col = &mut cur[k * len..(k + 1) * len];
            for p in 0..len {
                col[p] = a1[p] * wk + a2[p] * wl;
            }
        }
        let off = TwoModeBasis::shell_offset(n);
        for s in states.iter_mut() {
            let v = &mut s[off..off + len];
            if v.iter().all(|z| *z == ZERO) {
                continue;
            }
            seg.clear();
            seg.resize(len, ZERO);
            for (k, &vk) in v.iter().enumerate().take(cols) {
                if vk == ZERO {
                    continue;
                }
                let col = &cur[k * len..(k + 1) * len];
                for p in 0..len {
                    seg[p] += col[p] * vk;
                }
            }
            v.copy_from_slice(&seg);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
}

// (α a_S† + β a_E†) on a shell-(n−1) vector, producing shell n.
fn raise(
    v: &[Complex64],
    alpha: Complex64,
    beta: Complex64,
    sqrt: &[f64],
    n: usize,
    out: &mut [Complex64],
) {
    for p in 0..=n {
        let mut acc = ZERO;
        if p > 0 {
            acc += alpha * v[p - 1] * sqrt[p];
        }
        if p < n {
            acc += beta * v[p] * sqrt[n - p];
        }
        out[p] = acc;
    }
}

/// Beam splitter `exp(−iκt(a_S†a_E + a_E†a_S))`.
pub fn beam_splitter(kappa_t: f64) -> Matrix2<Complex64> {
    let (s, c) = kappa_t.sin_cos();
    let m = Complex64::new(0.0, -s);
    Matrix2::new(Complex64::new(c, 0.0), m, m, Complex64::new(c, 0.0))
}

/// A unitary whose first row is `row / |row|`.
pub fn complete_row(row: [Complex64; 2]) -> (Matrix2<Complex64>, f64) {
    let tau = (row[0].norm_sqr() + row[1].norm_sqr()).sqrt();
    if tau == 0.0 {
        return (Matrix2::identity(), 0.0);
    }
    let (a, b) = (row[0] / tau, row[1] / tau);
    (Matrix2::new(a, b, -b.conj(), a.conj()), tau)
}
