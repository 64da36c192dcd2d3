//! Reduced single-mode density operators and everything measured on them.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// `i^k` for any integer `k`.
fn i_pow(k: i64) -> Complex64 {
    match k.rem_euclid(4) {
        0 => Complex64::new(1.0, 0.0),
        1 => I,
        2 => Complex64::new(-1.0, 0.0),
        _ => -I,
    }
}

/// Harmonic-oscillator eigenfunctions `⟨q|n⟩` for `n < dim`, in the convention `Q = (a + a†)/2`.
///
/// Uses the three-term recurrence with a running logarithmic scale so that high orders far
/// from the origin neither overflow nor lose the early terms to underflow.
pub fn hermite_functions(q: f64, dim: usize) -> Vec<f64> {
    let mut out = vec![0.0; dim];
    if dim == 0 {
        return out;
    }
    let x = std::f64::consts::SQRT_2 * q;
    let pref = 2f64.powf(0.25);
    let mut log_scale = -0.5 * x * x - 0.25 * PI.ln();
    let mut prev = 0.0;
    let mut cur = 1.0;
    out[0] = pref * cur * log_scale.exp();
    for n in 0..dim - 1 {
        let next =
            (2.0 / (n + 1) as f64).sqrt() * x * cur - (n as f64 / (n + 1) as f64).sqrt() * prev;
        prev = cur;
        cur = next;
        if cur.abs() > 1e200 {
            prev *= 1e-200;
            cur *= 1e-200;
            log_scale += 200.0 * std::f64::consts::LN_10;
        }
        out[n + 1] = pref * cur * log_scale.exp();
    }
    out
}

/// Density operator of one mode in a truncated Fock basis.
#[derive(Debug, Clone, PartialEq)]
pub struct SingleModeState {
    pub rho: DMatrix<Complex64>,
}

impl SingleModeState {
    pub fn new(rho: DMatrix<Complex64>) -> Result<Self> {
        if rho.nrows() != rho.ncols() {
            return Err(Error::DimensionMismatch {
                left: rho.nrows(),
                right: rho.ncols(),
            });
        }
        Ok(Self { rho })
    }

    pub fn from_pure(psi: &[Complex64]) -> Self {
        let d = psi.len();
        Self {
            rho: DMatrix::from_fn(d, d, |m, n| psi[m] * psi[n].conj()),
        }
    }

    /// `Σ wᵢ |ψᵢ⟩⟨ψᵢ|`, renormalised to unit trace.
    pub fn mixture(components: &[(f64, Vec<Complex64>)]) -> Result<Self> {
        let d = components
            .first()
            .map(|c| c.1.len())
            .ok_or_else(|| Error::InvalidArgument("empty mixture".into()))?;
        let mut rho = DMatrix::zeros(d, d);
        for (w, psi) in components {
            if psi.len() != d {
                return Err(Error::DimensionMismatch {
                    left: d,
                    right: psi.len(),
                });
            }
            rho += Self::from_pure(psi).rho * Complex64::new(*w, 0.0);
        }
        let tr = rho.trace().re;
        Ok(Self {
            rho: rho / Complex64::new(tr, 0.0),
        })
    }

    pub fn dim(&self) -> usize {
        self.rho.nrows()
    }

    pub fn trace(&self) -> f64 {
        self.rho.trace().re
    }

    /// `Tr ρ²`.
    pub fn purity(&self) -> f64 {
        self.rho.iter().map(|z| z.norm_sqr()).sum()
    }

    /// `Tr ρ₁ρ₂`.
    pub fn overlap(&self, other: &SingleModeState) -> Result<f64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        // Tr(AB) = Σ A_mn B_nm = Σ A_mn conj(B_mn) for hermitian B
        Ok(self
            .rho
            .iter()
            .zip(other.rho.iter())
            .map(|(a, b)| (a * b.conj()).re)
            .sum())
    }

    /// `⟨ψ|ρ|ψ⟩`; `psi` may be shorter than the state.
    pub fn expectation_pure(&self, psi: &[Complex64]) -> f64 {
        let d = self.dim().min(psi.len());
        let mut acc = Complex64::new(0.0, 0.0);
        for n in 0..d {
            let mut row = Complex64::new(0.0, 0.0);
            for m in 0..d {
                row += self.rho[(m, n)] * psi[m].conj();
            }
            acc += row * psi[n];
        }
        acc.re
    }

    /// Wigner function at the origin from the parity expectation, `(2/π) Σ (−1)ⁿ ρₙₙ`.
    pub fn parity_wigner_origin(&self) -> f64 {
        let s: f64 = (0..self.dim())
            .map(|n| if n % 2 == 0 { 1.0 } else { -1.0 } * self.rho[(n, n)].re)
            .sum();
        2.0 / PI * s
    }

    /// Conjugate by `exp(iπ a†a / 2)`, mapping an amplitude `β` to `iβ`.
    pub fn quarter_rotated(&self) -> Self {
        self.phase_conjugated(1)
    }

    // ρ_mn → i^{k(m−n)} ρ_mn
    fn phase_conjugated(&self, k: i64) -> Self {
        let d = self.dim();
        Self {
            rho: DMatrix::from_fn(d, d, |m, n| {
                self.rho[(m, n)] * i_pow(k * (m as i64 - n as i64))
            }),
        }
    }

    /// `⟨a⟩`.
    pub fn mean_a(&self) -> Complex64 {
        (1..self.dim())
            .map(|m| self.rho[(m, m - 1)] * (m as f64).sqrt())
            .sum()
    }

    fn mean_a2(&self) -> Complex64 {
        (2..self.dim())
            .map(|m| self.rho[(m, m - 2)] * ((m * (m - 1)) as f64).sqrt())
            .sum()
    }

    fn mean_n(&self) -> f64 {
        (0..self.dim())
            .map(|n| n as f64 * self.rho[(n, n)].re)
            .sum()
    }

    pub fn mean_q(&self) -> f64 {
        self.mean_a().re
    }

    pub fn mean_p(&self) -> f64 {
        self.mean_a().im
    }

    pub fn var_q(&self) -> f64 {
        let q2 = (2.0 * self.mean_a2().re + 2.0 * self.mean_n() + 1.0) / 4.0;
        q2 - self.mean_q().powi(2)
    }

    pub fn var_p(&self) -> f64 {
        let p2 = (-2.0 * self.mean_a2().re + 2.0 * self.mean_n() + 1.0) / 4.0;
        p2 - self.mean_p().powi(2)
    }

    /// Population of the top `k` Fock levels.
    pub fn top_population(&self, k: usize) -> f64 {
        let d = self.dim();
        (d.saturating_sub(k)..d).map(|n| self.rho[(n, n)].re).sum()
    }

    /// Density of the Q quadrature, `Σ ψ_m(q) ρ_mn ψ_n(q)`.
    pub fn marginal_q(&self, q: f64) -> f64 {
        let h = hermite_functions(q, self.dim());
        quadratic_form(&self.rho, &h, &h).re
    }

    /// Density of the P quadrature, using `⟨p|n⟩ = (−i)ⁿ ψ_n(p)`.
    pub fn marginal_p(&self, p: f64) -> f64 {
        self.phase_conjugated(-1).marginal_q(p)
    }

    /// Wigner function at `(q, p)` for every `p` in `ps`.
    pub fn wigner_line(&self, q: f64, ps: &[f64]) -> Vec<f64> {
        ps.iter().map(|&p| self.wigner(q, p)).collect()
    }

    /// Displaced parity, `W(α) = (2/π) Tr[ρ D(2α) Π]` with `α = q + ip`.
    ///
    /// With `x = |2α|²`, `⟨j+k|D(2α)|j⟩ = e^{ikφ} f_j^k` where
    /// `f_j^k = √(j!/(j+k)!) x^{k/2} e^{−x/2} L_j^{(k)}(x)`, so
    /// `W = (2/π)[Σ (−1)^j ρ_jj f_j^0 + 2 Re Σ_k e^{ikφ} Σ_j (−1)^j ρ_{j,j+k} f_j^k]`.
    /// Each diagonal runs the Laguerre recurrence in `j` on a logarithmic scale.
    pub fn wigner(&self, q: f64, p: f64) -> f64 {
        let d = self.dim();
        let x = 4.0 * (q * q + p * p);
        if x == 0.0 {
            return self.parity_wigner_origin();
        }
        let phi = p.atan2(q);
        let half_log_x = 0.5 * x.ln();
        let mut log_fact = 0.0; // ln k!
        let mut acc = 0.0;
        for k in 0..d {
            if k > 0 {
                log_fact += (k as f64).ln();
            }
            let kf = k as f64;
            let mut scale = kf * half_log_x - 0.5 * x - 0.5 * log_fact;
            let mut factor = scale.exp();
            let (mut prev, mut cur) = (0.0, 1.0);
            let mut s = Complex64::new(0.0, 0.0);
            for j in 0..d - k {
                let t = self.rho[(j, j + k)] * (cur * factor);
                s += if j % 2 == 0 { t } else { -t };
                let jf = j as f64;
                let next = ((2.0 * jf + 1.0 + kf - x) * cur - (jf * (jf + kf)).sqrt() * prev)
                    / ((jf + 1.0) * (jf + 1.0 + kf)).sqrt();
                prev = cur;
                cur = next;
                if cur.abs() > 1e150 {
                    prev *= 1e-150;
                    cur *= 1e-150;
                    scale += 150.0 * std::f64::consts::LN_10;
                    factor = scale.exp();
                }
            }
            if k == 0 {
                acc += s.re;
            } else {
                acc += 2.0 * (Complex64::from_polar(1.0, kf * phi) * s).re;
            }
        }
        2.0 / PI * acc
    }

    /// Same as [`wigner_line`](Self::wigner_line), via
    /// `W(q, p) = (2/π) ∫ ⟨q+y|ρ|q−y⟩ e^{−4ipy} dy` and the trapezoidal rule.
    pub fn wigner_line_trapezoid(&self, q: f64, ps: &[f64]) -> Vec<f64> {
        let d = self.dim();
        let p_max = ps.iter().fold(0.0f64, |m, p| m.max(p.abs()));
        // wavenumber bound of the integrand in y
        let k_max = 2.0 * std::f64::consts::SQRT_2 * ((2 * d + 1) as f64).sqrt() + 4.0 * p_max;
        let h = PI / k_max;
        // eigenfunctions vanish beyond the classical turning point plus a margin
        let support = (((2 * d + 1) as f64).sqrt() + 9.0) / std::f64::consts::SQRT_2;
        let reach = support + q.abs();
        let n = (reach / h).ceil() as usize;
        let mut f = Vec::with_capacity(2 * n + 1);
        for j in 0..=2 * n {
            let y = (j as f64 - n as f64) * h;
            let hp = hermite_functions(q + y, d);
            let hm = hermite_functions(q - y, d);
            f.push((y, quadratic_form(&self.rho, &hp, &hm)));
        }
        ps.iter()
            .map(|&p| {
                let s: Complex64 = f
                    .iter()
                    .map(|&(y, v)| v * Complex64::from_polar(1.0, -4.0 * p * y))
                    .sum();
                2.0 / PI * h * s.re
            })
            .collect()
    }

    pub fn max_hermitian_defect(&self) -> f64 {
        let d = self.dim();
        let mut worst = 0.0f64;
        for m in 0..d {
            for n in 0..=m {
                worst = worst.max((self.rho[(m, n)] - self.rho[(n, m)].conj()).norm());
            }
        }
        worst
    }

    pub fn min_eigenvalue(&self) -> f64 {
        let herm = (&self.rho + self.rho.adjoint()) * Complex64::new(0.5, 0.0);
        herm.symmetric_eigenvalues()
            .iter()
            .cloned()
            .fold(f64::INFINITY, f64::min)
    }
}

// xᵀ ρ y for real x, y
fn quadratic_form(rho: &DMatrix<Complex64>, x: &[f64], y: &[f64]) -> Complex64 {
    let d = rho.nrows();
    let mut acc = Complex64::new(0.0, 0.0);
    for n in 0..d {
        if y[n] == 0.0 {
            continue;
        }
        let col = rho.column(n);
        let mut s = Complex64::new(0.0, 0.0);
        for m in 0..d {
            s += col[m] * x[m];
        }
        acc += s * y[n];
    }
    acc
}
