//! Closed-form evolution of the Gaussian-cat parameters of both cavity modes.
//!
//! The system mode `S` starts in a cat state, the environment mode `E` in squeezed vacuum.
//! The modes exchange excitations at rate κ and each is damped into its own thermal reservoir.
//! Heisenberg-picture amplitudes evolve linearly,
//!
//! ```text
//! a_S(t) = u_S a_S − i v a_E + noise
//! a_E(t) = u_E a_E − i v a_S + noise
//! ```
//!
//! so every reduced state stays a superposition of two displaced Gaussians.

use serde::{Deserialize, Serialize};

use crate::config::{ExperimentConfig, Mode};
use crate::error::{Error, Result};

/// Rates shared by every closed form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivedRates {
    pub lambda: f64,
    pub gamma_plus: f64,
    pub gamma_minus: f64,
    pub eta_s: f64,
    pub eta_e: f64,
}

impl DerivedRates {
    pub fn new(config: &ExperimentConfig) -> Result<Self> {
        config.validate()?;
        let gamma_minus = config.gamma_e - config.gamma_s;
        let lambda2 = 4.0 * config.kappa * config.kappa - gamma_minus * gamma_minus;
        if lambda2 <= 0.0 {
            return Err(Error::Overdamped {
                two_kappa: 2.0 * config.kappa,
                gamma_minus: gamma_minus.abs(),
            });
        }
        Ok(Self {
            lambda: lambda2.sqrt(),
            gamma_plus: config.gamma_s + config.gamma_e,
            gamma_minus,
            eta_s: config.gamma_s * (config.n_s + 0.5),
            eta_e: config.gamma_e * (config.n_e + 0.5),
        })
    }
}

/// Linear propagator coefficients and accumulated reservoir noise at one time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Propagator {
    /// Amplitude kept by mode S.
    pub u_s: f64,
    /// Amplitude kept by mode E.
    pub u_e: f64,
    /// Amplitude transferred between the modes (enters with a factor −i).
    pub v: f64,
    /// Reservoir noise added to each quadrature variance of S.
    pub noise_s: f64,
    /// Reservoir noise added to each quadrature variance of E.
    pub noise_e: f64,
}

impl Propagator {
    pub fn new(config: &ExperimentConfig, t: f64) -> Result<Self> {
        let rates = DerivedRates::new(config)?;
        Self::with_rates(config, &rates, t)
    }

    pub fn with_rates(config: &ExperimentConfig, rates: &DerivedRates, t: f64) -> Result<Self> {
        if !(t >= 0.0 && t.is_finite()) {
            return Err(Error::NegativeTime(t));
        }
        let DerivedRates {
            lambda,
            gamma_plus: gp,
            gamma_minus: gm,
            eta_s,
            eta_e,
        } = *rates;
        let kappa = config.kappa;
        let (sin, cos) = (0.5 * lambda * t).sin_cos();
        let env = (-0.5 * gp * t).exp();
        let u_s = env * (lambda * cos + gm * sin) / lambda;
        let u_e = env * (lambda * cos - gm * sin) / lambda;
        let v = env * 2.0 * kappa * sin / lambda;

        let (noise_s, noise_e) = if gp > 0.0 {
            // Time integrals of e^{-γ+ s}, e^{-γ+ s}cos(λs), e^{-γ+ s}sin(λs) over [0, t].
            let decay = (-gp * t).exp();
            let i0 = -(-gp * t).exp_m1() / gp;
            let (sl, cl) = (lambda * t).sin_cos();
            let den = gp * gp + lambda * lambda;
            let ic = (gp - decay * (gp * cl - lambda * sl)) / den;
            let is = (lambda - decay * (gp * sl + lambda * cl)) / den;
            let a = 0.5 * (lambda * lambda + gm * gm);
            let b = 0.5 * (lambda * lambda - gm * gm);
            let cross = 2.0 * kappa * kappa * (i0 - ic);
            let l2 = lambda * lambda;
            let fs = (eta_s * (a * i0 + b * ic + lambda * gm * is) + eta_e * cross) / l2;
            let fe = (eta_s * cross + eta_e * (a * i0 + b * ic - lambda * gm * is)) / l2;
            (fs, fe)
        } else {
            (0.0, 0.0)
        };
        Ok(Self {
            u_s,
            u_e,
            v,
            noise_s,
            noise_e,
        })
    }
}

/// Per-mode Gaussian-cat parameters in the laboratory frame.
///
/// `xi` is the half-separation of the two peaks and `mu` sets the interference fringe.
/// For mode S the peaks lie along Q. For mode E they lie along P; `xi` is then the peak
/// distance from the origin along P and `mu = -xi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeParams {
    pub mode: Mode,
    pub xi: f64,
    pub mu: f64,
    pub var_q: f64,
    pub var_p: f64,
}

/// Parameters in the frame where the cat peaks lie on the Q axis.
///
/// Identical to the laboratory frame for S. For E it is the laboratory frame rotated by a
/// quarter period, which exchanges the two variances. Displacements keep their sign, so both
/// are negative past half a swap; every closed form depends on them only through squares.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CatFrame {
    pub xi: f64,
    pub mu: f64,
    pub var_q: f64,
    pub var_p: f64,
}

impl ModeParams {
    pub fn cat_frame(&self) -> CatFrame {
        match self.mode {
            Mode::System => CatFrame {
                xi: self.xi,
                mu: self.mu,
                var_q: self.var_q,
                var_p: self.var_p,
            },
            Mode::Environment => CatFrame {
                xi: self.xi,
                mu: -self.mu,
                var_q: self.var_p,
                var_p: self.var_q,
            },
        }
    }
}

/// Both modes at one instant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModePair {
    pub t: f64,
    pub s: ModeParams,
    pub e: ModeParams,
}

impl ModePair {
    pub fn get(&self, mode: Mode) -> &ModeParams {
        match mode {
            Mode::System => &self.s,
            Mode::Environment => &self.e,
        }
    }
}

/// Evolve both modes to time `t`.
pub fn evolve(config: &ExperimentConfig, t: f64) -> Result<ModePair> {
    let p = Propagator::new(config, t)?;
    let xi0 = config.xi0;
    let (vq_e0, vp_e0) = squeezed_variances(config.r);
    let (u2, ue2, v2) = (p.u_s * p.u_s, p.u_e * p.u_e, p.v * p.v);
    let s = ModeParams {
        mode: Mode::System,
        xi: p.u_s * xi0,
        mu: p.u_s * xi0,
        var_q: 0.25 * u2 + v2 * vp_e0 + p.noise_s,
        var_p: 0.25 * u2 + v2 * vq_e0 + p.noise_s,
    };
    let e = ModeParams {
        mode: Mode::Environment,
        xi: p.v * xi0,
        mu: -p.v * xi0,
        var_q: ue2 * vq_e0 + 0.25 * v2 + p.noise_e,
        var_p: ue2 * vp_e0 + 0.25 * v2 + p.noise_e,
    };
    Ok(ModePair { t, s, e })
}

/// Evolve to the rescaled time `G = κt`.
pub fn evolve_g(config: &ExperimentConfig, g: f64) -> Result<ModePair> {
    evolve(config, rescaled_time(config, g)?)
}

/// Physical time for rescaled time `G`.
pub fn rescaled_time(config: &ExperimentConfig, g: f64) -> Result<f64> {
    if !(g >= 0.0 && g.is_finite()) {
        return Err(Error::NegativeTime(g));
    }
    if !(config.kappa > 0.0) {
        return Err(Error::InvalidConfig(format!(
            "kappa must be > 0, got {}",
            config.kappa
        )));
    }
    Ok(g / config.kappa)
}

/// Quadrature variances `(var_q, var_p)` of squeezed vacuum.
pub fn squeezed_variances(r: f64) -> (f64, f64) {
    (0.25 * (-2.0 * r).exp(), 0.25 * (2.0 * r).exp())
}
