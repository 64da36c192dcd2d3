//! Fixed-step RK4 integration of the two-mode master equation on a dense density matrix.
//!
//! Integration runs in the interaction picture of the coupling Hamiltonian, where the jump
//! operators rotate as `a_S(t) = c a_S − i s a_E`, `a_E(t) = c a_E − i s a_S`
//! (`c = cos κt`, `s = sin κt`). The coupling is put back exactly at the end.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::basis::TwoModeBasis;
use super::passive::{apply_passive, beam_splitter};
use crate::config::ExperimentConfig;
use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Largest truncation accepted by the dense integrator.
pub const MAX_DENSE_N_MAX: usize = 60;

/// `α a_S + β a_E + γ a_S† + δ a_E†`.
#[derive(Debug, Clone, Copy)]
struct Ladder {
    coef: [Complex64; 4],
}

impl Ladder {
    fn adjoint(&self) -> Self {
        let c = self.coef;
        Ladder {
            coef: [c[2].conj(), c[3].conj(), c[0].conj(), c[1].conj()],
        }
    }
}

/// Index tables of the four ladder operators.
struct Tables {
    // for each source index: (target, matrix element) or None
    ops: [Vec<Option<(usize, f64)>>; 4],
}

impl Tables {
    fn new(basis: &TwoModeBasis) -> Self {
        let dim = basis.dim();
        let mut ops: [Vec<Option<(usize, f64)>>; 4] = Default::default();
        for i in 0..dim {
            let (ms, me) = basis.levels(i);
            let lower = |m: usize, f: &dyn Fn(usize) -> Option<usize>| {
                (m > 0)
                    .then(|| f(m - 1).map(|j| (j, (m as f64).sqrt())))
                    .flatten()
            };
            ops[0].push(lower(ms, &|k| basis.index(k, me)));
            ops[1].push(lower(me, &|k| basis.index(ms, k)));
            ops[2].push(
                basis
                    .index(ms + 1, me)
                    .map(|j| (j, ((ms + 1) as f64).sqrt())),
            );
            ops[3].push(
                basis
                    .index(ms, me + 1)
                    .map(|j| (j, ((me + 1) as f64).sqrt())),
            );
        }
        Self { ops }
    }

    /// `out = L x`.
    fn apply(&self, l: &Ladder, x: &DMatrix<Complex64>, out: &mut DMatrix<Complex64>) {
        out.fill(ZERO);
        let dim = x.nrows();
        for c in 0..x.ncols() {
            let src = x.column(c);
            let mut dst = out.column_mut(c);
            for (k, table) in self.ops.iter().enumerate() {
                let coef = l.coef[k];
                if coef == ZERO {
                    continue;
                }
                for i in 0..dim {
                    if let Some((j, w)) = table[i] {
                        dst[j] += coef * w * src[i];
                    }
                }
            }
        }
    }
}

/// Integrator settings and workspace.
pub struct MasterEquation {
    pub basis: TwoModeBasis,
    pub config: ExperimentConfig,
    tables: Tables,
}

impl MasterEquation {
    pub fn new(config: ExperimentConfig, basis: TwoModeBasis) -> Result<Self> {
        config.validate()?;
        if basis.n_max > MAX_DENSE_N_MAX {
            return Err(Error::InvalidArgument(format!(
                "dense integrator supports n_max <= {MAX_DENSE_N_MAX}, got {}",
                basis.n_max
            )));
        }
        Ok(Self {
            tables: Tables::new(&basis),
            basis,
            config,
        })
    }

    /// Default step: small against both the coupling period and the fastest jump rate.
    pub fn default_step(&self) -> f64 {
        let c = &self.config;
        let n = (self.basis.n_max + 1) as f64;
        let rate = 2.0 * (c.gamma_s * (2.0 * c.n_s + 1.0) + c.gamma_e * (2.0 * c.n_e + 1.0)) * n;
        (0.05 / c.kappa).min(0.5 / rate.max(1e-12))
    }

    fn jumps(&self, t: f64) -> Vec<(f64, Ladder)> {
        let c = &self.config;
        let (s, co) = (c.kappa * t).sin_cos();
        let cc = Complex64::new(co, 0.0);
        let ms = Complex64::new(0.0, -s);
        let a_s = Ladder {
            coef: [cc, ms, ZERO, ZERO],
        };
        let a_e = Ladder {
            coef: [ms, cc, ZERO, ZERO],
        };
        let mut out = Vec::new();
        for (gamma, n, l) in [(c.gamma_s, c.n_s, a_s), (c.gamma_e, c.n_e, a_e)] {
            if gamma > 0.0 {
                out.push((2.0 * gamma * (n + 1.0), l));
                if n > 0.0 {
                    out.push((2.0 * gamma * n, l.adjoint()));
                }
            }
        }
        out
    }

    fn rhs(&self, t: f64, rho: &DMatrix<Complex64>, ws: &mut Workspace) -> DMatrix<Complex64> {
        let dim = rho.nrows();
        let mut out = DMatrix::<Complex64>::zeros(dim, dim);
        for (rate, l) in self.jumps(t) {
            let ld = l.adjoint();
            self.tables.apply(&l, rho, &mut ws.a);
            // L†Lρ
            self.tables.apply(&ld, &ws.a, &mut ws.b);
            // LρL† = L (Lρ)†
            ws.c.copy_from(&ws.a.adjoint());
            self.tables.apply(&l, &ws.c, &mut ws.a);
            let r = Complex64::new(rate, 0.0);
            let half = Complex64::new(0.5 * rate, 0.0);
            out += &ws.a * r;
            out -= &ws.b * half;
            out -= ws.b.adjoint() * half;
        }
        out
    }

    /// Evolve `rho` (in the Schrödinger picture) from 0 to `t` with step at most `dt`.
    pub fn evolve(
        &self,
        rho: &DMatrix<Complex64>,
        t: f64,
        dt: Option<f64>,
    ) -> Result<DMatrix<Complex64>> {
        if !(t >= 0.0) {
            return Err(Error::NegativeTime(t));
        }
        let dim = self.basis.dim();
        let h_max = dt.unwrap_or_else(|| self.default_step());
        let steps = ((t / h_max).ceil() as usize).max(1);
        let h = t / steps as f64;
        let mut ws = Workspace::new(dim);
        let mut y = rho.clone();
        let tr0 = y.trace().re;
        let ch = Complex64::new(h, 0.0);
        for k in 0..steps {
            let t0 = k as f64 * h;
            let k1 = self.rhs(t0, &y, &mut ws);
            let k2 = self.rhs(t0 + 0.5 * h, &(&y + &k1 * (ch * 0.5)), &mut ws);
            let k3 = self.rhs(t0 + 0.5 * h, &(&y + &k2 * (ch * 0.5)), &mut ws);
            let k4 = self.rhs(t0 + h, &(&y + &k3 * ch), &mut ws);
            let two = Complex64::new(2.0, 0.0);
            y += (k1 + k2 * two + k3 * two + k4) * (ch / 6.0);
        }
        let drift = (y.trace().re - tr0).abs();
        if drift > 1e-9 {
            return Err(Error::TraceDrift {
                drift,
                dt: h,
                steps,
            });
        }
        // back to the Schrödinger picture: ρ = U ρ_I U†
        let x = beam_splitter(self.config.kappa * t);
        conjugate_passive(&x, &self.basis, &mut y);
        Ok(y)
    }
}

/// `ρ → U ρ U†` for the passive unitary with `U† a U = X a`.
pub fn conjugate_passive(
    x: &nalgebra::Matrix2<Complex64>,
    basis: &TwoModeBasis,
    rho: &mut DMatrix<Complex64>,
) {
    let dim = basis.dim();
    {
        let mut cols: Vec<&mut [Complex64]> = rho.as_mut_slice().chunks_mut(dim).collect();
        apply_passive(x, basis, &mut cols);
    }
    let mut t = rho.adjoint();
    {
        let mut cols: Vec<&mut [Complex64]> = t.as_mut_slice().chunks_mut(dim).collect();
        apply_passive(x, basis, &mut cols);
    }
    *rho = t.adjoint();
}

struct Workspace {
    a: DMatrix<Complex64>,
    b: DMatrix<Complex64>,
    c: DMatrix<Complex64>,
}

impl Workspace {
    fn new(dim: usize) -> Self {
        Self {
            a: DMatrix::zeros(dim, dim),
            b: DMatrix::zeros(dim, dim),
            c: DMatrix::zeros(dim, dim),
        }
    }
}
