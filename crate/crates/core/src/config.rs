//! Experiment configuration shared by the closed-form model, the oracle and the CLI.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which of the two conditionally prepared cat states the system mode starts in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CatSign {
    Plus,
    Minus,
}

impl CatSign {
    pub fn factor(self) -> f64 {
        match self {
            CatSign::Plus => 1.0,
            CatSign::Minus => -1.0,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            CatSign::Plus => CatSign::Minus,
            CatSign::Minus => CatSign::Plus,
        }
    }

    /// Normalisation `N± = 2(1 ± exp(-2ξ²))` of `|ξ⟩ ± |−ξ⟩`.
    pub fn norm(self, xi0: f64) -> f64 {
        match self {
            CatSign::Plus => 2.0 * (1.0 + (-2.0 * xi0 * xi0).exp()),
            // expm1 keeps small amplitudes accurate
            CatSign::Minus => -2.0 * (-2.0 * xi0 * xi0).exp_m1(),
        }
    }
}

impl fmt::Display for CatSign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CatSign::Plus => "plus",
            CatSign::Minus => "minus",
        })
    }
}

impl FromStr for CatSign {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "plus" | "+" | "even" => Ok(CatSign::Plus),
            "minus" | "-" | "odd" => Ok(CatSign::Minus),
            other => Err(Error::InvalidArgument(format!(
                "unknown cat sign '{other}'"
            ))),
        }
    }
}

/// The two cavity modes: the system `S` holding the cat and the environment `E`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Mode {
    #[serde(rename = "S")]
    System,
    #[serde(rename = "E")]
    Environment,
}

impl Mode {
    pub const BOTH: [Mode; 2] = [Mode::System, Mode::Environment];

    pub fn tag(self) -> &'static str {
        match self {
            Mode::System => "S",
            Mode::Environment => "E",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "S" | "s" | "system" => Ok(Mode::System),
            "E" | "e" | "environment" => Ok(Mode::Environment),
            other => Err(Error::InvalidArgument(format!("unknown mode '{other}'"))),
        }
    }
}

/// Physical knobs of one experiment.
///
/// Rates are amplitude damping rates: an uncoupled mode's coherent amplitude decays as
/// `exp(-γ t)` and its quadrature variances relax at `2γ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    /// Coherent amplitude ξ(0) of the cat components.
    pub xi0: f64,
    /// Squeezing of the environment vacuum; `r > 0` squeezes Q.
    pub r: f64,
    /// Beam-splitter coupling rate κ.
    pub kappa: f64,
    pub gamma_s: f64,
    pub gamma_e: f64,
    /// Mean thermal occupation of the system reservoir.
    pub n_s: f64,
    /// Mean thermal occupation of the environment reservoir.
    pub n_e: f64,
    pub sign: CatSign,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            xi0: 2.0,
            r: 2.0,
            kappa: 1.0,
            gamma_s: 0.0,
            gamma_e: 0.0,
            n_s: 0.0,
            n_e: 0.0,
            sign: CatSign::Plus,
        }
    }
}

impl ExperimentConfig {
    pub fn new(xi0: f64, r: f64) -> Self {
        Self {
            xi0,
            r,
            ..Self::default()
        }
    }

    pub fn with_damping(mut self, gamma_s: f64, gamma_e: f64) -> Self {
        self.gamma_s = gamma_s;
        self.gamma_e = gamma_e;
        self
    }

    pub fn with_thermal(mut self, n_s: f64, n_e: f64) -> Self {
        self.n_s = n_s;
        self.n_e = n_e;
        self
    }

    pub fn with_sign(mut self, sign: CatSign) -> Self {
        self.sign = sign;
        self
    }

    pub fn with_kappa(mut self, kappa: f64) -> Self {
        self.kappa = kappa;
        self
    }

    pub fn is_undamped(&self) -> bool {
        self.gamma_s == 0.0 && self.gamma_e == 0.0
    }

    pub fn is_zero_temperature(&self) -> bool {
        self.n_s == 0.0 && self.n_e == 0.0
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("xi0", self.xi0),
            ("r", self.r),
            ("kappa", self.kappa),
            ("gamma_s", self.gamma_s),
            ("gamma_e", self.gamma_e),
            ("n_s", self.n_s),
            ("n_e", self.n_e),
        ];
        for (name, value) in fields {
            if !value.is_finite() {
                return Err(Error::InvalidConfig(format!(
                    "{name} must be finite, got {value}"
                )));
            }
        }
        if self.xi0 < 0.0 {
            return Err(Error::InvalidConfig(format!(
                "xi0 must be >= 0, got {}",
                self.xi0
            )));
        }
        if self.kappa <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "kappa must be > 0, got {}",
                self.kappa
            )));
        }
        for (name, value) in [
            ("gamma_s", self.gamma_s),
            ("gamma_e", self.gamma_e),
            ("n_s", self.n_s),
            ("n_e", self.n_e),
        ] {
            if value < 0.0 {
                return Err(Error::InvalidConfig(format!(
                    "{name} must be >= 0, got {value}"
                )));
            }
        }
        if self.sign == CatSign::Minus && self.xi0 == 0.0 {
            return Err(Error::InvalidConfig(
                "the odd cat state does not exist for xi0 = 0".into(),
            ));
        }
        let gamma_minus = (self.gamma_e - self.gamma_s).abs();
        if 2.0 * self.kappa <= gamma_minus {
            return Err(Error::Overdamped {
                two_kappa: 2.0 * self.kappa,
                gamma_minus,
            });
        }
        Ok(())
    }
}
