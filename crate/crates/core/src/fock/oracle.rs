//! Oracle driver: prepare the initial product state, evolve it, and measure every metric on
//! the reduced density operators the way an experiment would.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::basis::TwoModeBasis;
use super::channel::{damped_reduced_states, partial_traces, partial_traces_dense};
use super::lindblad::{MasterEquation, MAX_DENSE_N_MAX};
use super::passive::{apply_passive, beam_splitter};
use super::single_mode::SingleModeState;
use super::states::{cat, cat_cutoff, coherent, squeeze_cutoff, squeezed_vacuum, TRUNCATION_LIMIT};
use crate::config::{CatSign, ExperimentConfig, Mode};
use crate::dynamics::{rescaled_time, CatFrame};
use crate::error::{Error, Result};
use crate::metrics::{self, MetricsRecord};

/// How the two-mode state is evolved.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// Pick the cheapest exact method for the configuration.
    Auto,
    /// Beam-splitter unitary on the pure state (undamped only).
    Unitary,
    /// Passive unitary plus pure loss per output mode (zero temperature only).
    Dilation,
    /// RK4 on the dense density matrix (any configuration, small truncations).
    Master,
}

/// Default population each prepared state may lose to truncation.
///
/// Point values of marginals and Wigner functions are linear in the amplitudes, so a
/// population tail `τ` leaves errors of order `√τ`; this keeps them near `1e-11`.
pub const DEFAULT_TAIL_TOL: f64 = 1e-22;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleConfig {
    pub experiment: ExperimentConfig,
    /// Total-photon-number truncation; derived from the state tails when `None`.
    pub n_max: Option<usize>,
    /// Population each prepared single-mode state may lose to truncation.
    pub tail_tol: f64,
    /// Explicit `(cat, squeezed)` preparation levels, overriding `tail_tol`.
    pub levels: Option<(usize, usize)>,
    /// Integrator step for [`Method::Master`].
    pub dt: Option<f64>,
    pub method: Method,
}

impl OracleConfig {
    pub fn new(experiment: ExperimentConfig) -> Self {
        Self {
            experiment,
            n_max: None,
            tail_tol: DEFAULT_TAIL_TOL,
            levels: None,
            dt: None,
            method: Method::Auto,
        }
    }

    pub fn with_n_max(mut self, n_max: usize) -> Self {
        self.n_max = Some(n_max);
        self
    }

    pub fn with_levels(mut self, cat: usize, squeezed: usize) -> Self {
        self.levels = Some((cat, squeezed));
        self
    }

    pub fn with_tail_tol(mut self, tol: f64) -> Self {
        self.tail_tol = tol;
        self
    }

    /// Twice the preparation levels and twice the photon-number truncation.
    pub fn doubled(&self) -> Self {
        let (c, s) = self.cutoffs();
        let n = self.resolved_n_max();
        Self {
            levels: Some((2 * c, 2 * s)),
            n_max: Some(2 * n),
            ..*self
        }
    }

    pub fn with_method(mut self, method: Method) -> Self {
        self.method = method;
        self
    }

    pub fn with_dt(mut self, dt: f64) -> Self {
        self.dt = Some(dt);
        self
    }

    /// Levels prepared for the cat and the squeezed mode.
    pub fn cutoffs(&self) -> (usize, usize) {
        let e = &self.experiment;
        self.levels.unwrap_or_else(|| {
            (
                cat_cutoff(e.xi0, self.tail_tol),
                squeeze_cutoff(e.r, self.tail_tol),
            )
        })
    }

    pub fn resolved_n_max(&self) -> usize {
        self.n_max.unwrap_or_else(|| {
            let (c, s) = self.cutoffs();
            let e = &self.experiment;
            // thermal reservoirs feed photons in; leave room for them
            let thermal = if e.is_zero_temperature() {
                0
            } else {
                (8.0 + 12.0 * e.n_s.max(e.n_e)).ceil() as usize
            };
            c + s + thermal
        })
    }

    pub fn resolved_method(&self) -> Method {
        match self.method {
            Method::Auto if self.experiment.is_undamped() => Method::Unitary,
            Method::Auto if self.experiment.is_zero_temperature() => Method::Dilation,
            Method::Auto => Method::Master,
            m => m,
        }
    }
}

/// Two-mode state in the truncated basis.
#[derive(Debug, Clone, PartialEq)]
pub enum TwoModeDensityMatrix {
    Pure {
        basis: TwoModeBasis,
        psi: Vec<Complex64>,
    },
    Dense {
        basis: TwoModeBasis,
        rho: DMatrix<Complex64>,
    },
}

impl TwoModeDensityMatrix {
    pub fn basis(&self) -> TwoModeBasis {
        match self {
            Self::Pure { basis, .. } | Self::Dense { basis, .. } => *basis,
        }
    }

    fn diag(&self, i: usize) -> f64 {
        match self {
            Self::Pure { psi, .. } => psi[i].norm_sqr(),
            Self::Dense { rho, .. } => rho[(i, i)].re,
        }
    }

    pub fn trace(&self) -> f64 {
        (0..self.basis().dim()).map(|i| self.diag(i)).sum()
    }

    /// Population of the top two total-photon-number shells.
    pub fn boundary_population(&self) -> f64 {
        self.basis().top_shell_population(|i| self.diag(i), 2)
    }

    pub fn purity(&self) -> f64 {
        match self {
            Self::Pure { psi, .. } => psi.iter().map(|z| z.norm_sqr()).sum::<f64>().powi(2),
            Self::Dense { rho, .. } => rho.iter().map(|z| z.norm_sqr()).sum(),
        }
    }

    /// `⟨ψ|ρ|ψ⟩`.
    pub fn fidelity_pure(&self, psi0: &[Complex64]) -> f64 {
        match self {
            Self::Pure { psi, .. } => psi0
                .iter()
                .zip(psi)
                .map(|(a, b)| a.conj() * b)
                .sum::<Complex64>()
                .norm_sqr(),
            Self::Dense { rho, .. } => {
                let v = nalgebra::DVector::from_column_slice(psi0);
                (v.adjoint() * rho * &v)[(0, 0)].re
            }
        }
    }

    pub fn max_hermitian_defect(&self) -> f64 {
        match self {
            Self::Pure { .. } => 0.0,
            Self::Dense { rho, .. } => (rho - rho.adjoint()).camax(),
        }
    }

    pub fn min_eigenvalue(&self) -> f64 {
        match self {
            Self::Pure { .. } => 0.0,
            Self::Dense { rho, .. } => {
                let h = (rho + rho.adjoint()) * Complex64::new(0.5, 0.0);
                h.symmetric_eigenvalues()
                    .iter()
                    .cloned()
                    .fold(f64::INFINITY, f64::min)
            }
        }
    }

    pub fn reduced(&self) -> (SingleModeState, SingleModeState) {
        match self {
            Self::Pure { basis, psi } => partial_traces(basis, psi),
            Self::Dense { basis, rho } => partial_traces_dense(basis, rho),
        }
    }
}

/// Result of evolving one initial product state.
#[derive(Debug, Clone)]
pub struct EvolvedState {
    pub s: SingleModeState,
    pub e: SingleModeState,
    /// Joint state when the method keeps it.
    pub joint: Option<TwoModeDensityMatrix>,
    pub initial: Vec<Complex64>,
    pub basis: TwoModeBasis,
    pub method: Method,
    /// Population near the truncation edge after evolution.
    pub boundary_population: f64,
}

impl EvolvedState {
    pub fn mode(&self, mode: Mode) -> &SingleModeState {
        match mode {
            Mode::System => &self.s,
            Mode::Environment => &self.e,
        }
    }

    /// Reduced state of `mode` in its cat frame.
    pub fn cat_frame(&self, mode: Mode) -> SingleModeState {
        match mode {
            Mode::System => self.s.clone(),
            Mode::Environment => self.e.quarter_rotated(),
        }
    }
}

/// Evolve the product `psi_s ⊗ psi_e` to time `t`.
pub fn evolve_product(
    cfg: &OracleConfig,
    psi_s: &[Complex64],
    psi_e: &[Complex64],
    t: f64,
) -> Result<EvolvedState> {
    let exp = &cfg.experiment;
    exp.validate()?;
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::NegativeTime(t));
    }
    let basis = TwoModeBasis::new(cfg.resolved_n_max());
    let mut psi0 = basis.product(psi_s, psi_e);
    let norm: f64 = psi0.iter().map(|z| z.norm_sqr()).sum();
    let lost = 1.0 - norm;
    if lost > TRUNCATION_LIMIT {
        return Err(Error::Truncation(format!(
            "n_max = {} discards {lost:.3e} of the initial state",
            basis.n_max
        )));
    }
    let s = 1.0 / norm.sqrt();
    psi0.iter_mut().for_each(|z| *z *= s);

    let method = cfg.resolved_method();
    let (s, e, joint) = match method {
        Method::Unitary => {
            if !exp.is_undamped() {
                return Err(Error::InvalidArgument(
                    "unitary evolution requires zero damping".into(),
                ));
            }
            let mut psi = psi0.clone();
            apply_passive(&beam_splitter(exp.kappa * t), &basis, &mut [&mut psi]);
            let joint = TwoModeDensityMatrix::Pure { basis, psi };
            let (s, e) = joint.reduced();
            (s, e, Some(joint))
        }
        Method::Dilation => {
            if !exp.is_zero_temperature() {
                return Err(Error::InvalidArgument(
                    "dilation requires zero-temperature reservoirs".into(),
                ));
            }
            let (s, e) = damped_reduced_states(exp, &basis, &psi0, t);
            (s, e, None)
        }
        Method::Master | Method::Auto => {
            if basis.n_max > MAX_DENSE_N_MAX {
                return Err(Error::Truncation(format!(
                    "master equation needs n_max <= {MAX_DENSE_N_MAX} but the state tails require {}",
                    basis.n_max
                )));
            }
            let me = MasterEquation::new(*exp, basis)?;
            let d = basis.dim();
            let rho0 = DMatrix::from_fn(d, d, |m, n| psi0[m] * psi0[n].conj());
            let rho = me.evolve(&rho0, t, cfg.dt)?;
            let joint = TwoModeDensityMatrix::Dense { basis, rho };
            let (s, e) = joint.reduced();
            (s, e, Some(joint))
        }
    };
    let boundary = match &joint {
        Some(j) => j.boundary_population(),
        None => s.top_population(2).max(e.top_population(2)),
    };
    if boundary > TRUNCATION_LIMIT {
        return Err(Error::Truncation(format!(
            "population {boundary:.3e} reached the truncation edge n_max = {}",
            basis.n_max
        )));
    }
    Ok(EvolvedState {
        s,
        e,
        joint,
        initial: psi0,
        basis,
        method,
        boundary_population: boundary,
    })
}

/// Measured quantities of one mode.
#[derive(Debug, Clone)]
pub struct OracleModeReport {
    pub record: MetricsRecord,
    /// Reduced state of the configured cat sign, in the cat frame.
    pub state: SingleModeState,
    /// Wigner origin values `(W+, W−, W0)`.
    pub origin_values: (f64, f64, f64),
}

#[derive(Debug, Clone)]
pub struct OracleRun {
    pub s: OracleModeReport,
    pub e: OracleModeReport,
    pub n_max: usize,
    pub method: Method,
    pub boundary_population: f64,
    /// Joint state for the configured sign when the method keeps it.
    pub joint: Option<TwoModeDensityMatrix>,
}

impl OracleRun {
    pub fn mode(&self, mode: Mode) -> &OracleModeReport {
        match mode {
            Mode::System => &self.s,
            Mode::Environment => &self.e,
        }
    }
}

/// Evolve the even cat, the odd cat and vacuum (each with the squeezed environment) to
/// rescaled time `g` and derive every metric from the reduced states.
pub fn oracle_records(cfg: &OracleConfig, g: f64) -> Result<OracleRun> {
    let exp = cfg.experiment;
    let t = rescaled_time(&exp, g)?;
    let (cat_dim, sq_dim) = cfg.cutoffs();
    let env = squeezed_vacuum(exp.r, sq_dim)?;
    let plus_in = cat(exp.xi0, CatSign::Plus, cat_dim)?;
    let plus = evolve_product(cfg, &plus_in, &env, t)?;
    let minus = if exp.xi0 > 0.0 {
        Some(evolve_product(
            cfg,
            &cat(exp.xi0, CatSign::Minus, cat_dim)?,
            &env,
            t,
        )?)
    } else {
        None
    };
    let vac = evolve_product(cfg, &coherent(Complex64::new(0.0, 0.0), 1), &env, t)?;
    let chosen = match exp.sign {
        CatSign::Plus => &plus,
        CatSign::Minus => minus.as_ref().expect("odd cat needs xi0 > 0"),
    };
    let reference = cat(exp.xi0, exp.sign, cat_dim)?;
    let report = |mode: Mode| -> Result<OracleModeReport> {
        let sp = plus.cat_frame(mode);
        let sm = minus.as_ref().map(|m| m.cat_frame(mode));
        let s0 = vac.cat_frame(mode);
        let w_plus = sp.parity_wigner_origin();
        let w_minus = sm.as_ref().map_or(0.0, |s| s.parity_wigner_origin());
        let w0 = s0.parity_wigner_origin();
        let marg =
            |f: &dyn Fn(&SingleModeState) -> f64| (f(&sp), sm.as_ref().map_or(0.0, f));
        let (pp, pm) = marg(&|s| s.marginal_p(0.0));
        let (qp, qm) = marg(&|s| s.marginal_q(0.0));
        let state = chosen.cat_frame(mode);
        let overlap = metrics::overlap_from_wigner(w_plus, w_minus, w0, exp.xi0)?;
        let purity = state.purity();
        let record = MetricsRecord {
            mode,
            sign: exp.sign,
            g,
            visibility: metrics::visibility(pp.max(0.0), pm.max(0.0), exp.xi0)?,
            overlap,
            distinguishability: metrics::visibility(qp.max(0.0), qm.max(0.0), exp.xi0)?,
            distinguishability_alt: metrics::distinguishability_alt(overlap),
            negativity: metrics::negativity(w_plus, w_minus, exp.xi0)?,
            purity,
            renyi: metrics::renyi(purity),
            fidelity: state.expectation_pure(&reference),
        };
        Ok(OracleModeReport {
            record,
            state,
            origin_values: (w_plus, w_minus, w0),
        })
    };
    let boundary = [Some(&plus), minus.as_ref(), Some(&vac)]
        .into_iter()
        .flatten()
        .map(|s| s.boundary_population)
        .fold(0.0, f64::max);
    Ok(OracleRun {
        s: report(Mode::System)?,
        e: report(Mode::Environment)?,
        n_max: plus.basis.n_max,
        method: plus.method,
        boundary_population: boundary,
        joint: chosen.joint.clone(),
    })
}

/// Gaussian parameters of both modes in their cat frames, measured as first and second moments.
///
/// Displacements come from coherent inputs `|ξ(0)⟩` (for `xi`) and `|iξ(0)⟩` (for `mu`),
/// variances from the vacuum input.
pub fn oracle_moments(cfg: &OracleConfig, g: f64) -> Result<(CatFrame, CatFrame)> {
    let exp = cfg.experiment;
    let t = rescaled_time(&exp, g)?;
    let (cat_dim, sq_dim) = cfg.cutoffs();
    let env = squeezed_vacuum(exp.r, sq_dim)?;
    let real = evolve_product(
        cfg,
        &coherent(Complex64::new(exp.xi0, 0.0), cat_dim),
        &env,
        t,
    )?;
    let imag = evolve_product(
        cfg,
        &coherent(Complex64::new(0.0, exp.xi0), cat_dim),
        &env,
        t,
    )?;
    let vac = evolve_product(cfg, &coherent(Complex64::new(0.0, 0.0), 1), &env, t)?;
    let frame = |mode| {
        let v = vac.cat_frame(mode);
        CatFrame {
            xi: real.cat_frame(mode).mean_q(),
            mu: imag.cat_frame(mode).mean_p(),
            var_q: v.var_q(),
            var_p: v.var_p(),
        }
    };
    Ok((frame(Mode::System), frame(Mode::Environment)))
}

/// `½(|ξ⟩⟨ξ| + |−ξ⟩⟨−ξ|)`: the cat with its interference term removed.
pub fn dephased_cat(xi0: f64, dim: usize) -> Result<SingleModeState> {
    SingleModeState::mixture(&[
        (0.5, coherent(Complex64::new(xi0, 0.0), dim)),
        (0.5, coherent(Complex64::new(-xi0, 0.0), dim)),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::closed_form_records;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn initial_state_metrics() {
        let cfg = OracleConfig::new(ExperimentConfig::new(1.5, 0.5));
        let run = oracle_records(&cfg, 0.0).unwrap();
        let r = run.s.record;
        assert!((r.visibility - 1.0).abs() < 1e-12);
        assert!((r.purity - 1.0).abs() < 1e-12);
        assert!((r.fidelity - 1.0).abs() < 1e-12);
        assert!((r.overlap - (-4.5f64).exp()).abs() < 1e-12);
    }

    #[test]
    fn swap_at_quarter_period() {
        let exp = ExperimentConfig::new(1.0, 0.8);
        let cfg = OracleConfig::new(exp);
        let (c, s) = cfg.cutoffs();
        let cat_in = cat(1.0, CatSign::Plus, c).unwrap();
        let sq = squeezed_vacuum(0.8, s).unwrap();
        let out = evolve_product(&cfg, &cat_in, &sq, FRAC_PI_2).unwrap();
        // S receives the squeezed state rotated by a quarter period, E the rotated cat
        let s_rot = out.s.quarter_rotated();
        let want = SingleModeState::from_pure(&sq);
        let f = s_rot.expectation_pure(&sq);
        assert!(f > 1.0 - 1e-10, "{f}");
        assert!(out.e.quarter_rotated().expectation_pure(&cat_in) > 1.0 - 1e-10);
        assert!((want.purity() - out.s.purity()).abs() < 1e-10);
    }

    #[test]
    fn closed_form_agreement_small() {
        let exp = ExperimentConfig::new(1.2, 0.4);
        let cfg = OracleConfig::new(exp);
        for g in [0.3, 1.0] {
            let run = oracle_records(&cfg, g).unwrap();
            let (s, e) = closed_form_records(&exp, g).unwrap();
            assert!(
                run.s.record.max_abs_diff(&s) < 1e-9,
                "{:?}\n{:?}",
                run.s.record,
                s
            );
            assert!(
                run.e.record.max_abs_diff(&e) < 1e-9,
                "{:?}\n{:?}",
                run.e.record,
                e
            );
        }
    }

    #[test]
    fn tiny_truncation_is_reported() {
        let cfg = OracleConfig::new(ExperimentConfig::new(2.0, 1.0)).with_n_max(6);
        assert!(matches!(
            oracle_records(&cfg, 0.5),
            Err(Error::Truncation(_))
        ));
    }
}
