//! Scalar decoherence measures of one mode and the inequalities that connect the two modes.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::config::{CatSign, ExperimentConfig, Mode};
use crate::dynamics::{evolve, rescaled_time, CatFrame, ModePair};
use crate::error::{Error, Result};
use crate::phase_space::{self, CatWignerParams, Gaussian, PhasePoint};

/// All measures of one mode at one rescaled time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricsRecord {
    pub mode: Mode,
    pub sign: CatSign,
    #[serde(rename = "G")]
    pub g: f64,
    #[serde(rename = "R")]
    pub visibility: f64,
    #[serde(rename = "O")]
    pub overlap: f64,
    #[serde(rename = "D")]
    pub distinguishability: f64,
    #[serde(rename = "Dalt")]
    pub distinguishability_alt: f64,
    #[serde(rename = "N")]
    pub negativity: f64,
    #[serde(rename = "P")]
    pub purity: f64,
    #[serde(rename = "S")]
    pub renyi: f64,
    #[serde(rename = "F")]
    pub fidelity: f64,
}

impl MetricsRecord {
    pub fn rd(&self) -> f64 {
        self.visibility * self.distinguishability
    }

    /// Largest absolute difference over the scalar measures.
    pub fn max_abs_diff(&self, other: &MetricsRecord) -> f64 {
        self.values()
            .iter()
            .zip(other.values())
            .map(|(a, b)| (a.1 - b.1).abs())
            .fold(0.0, f64::max)
    }

    pub fn values(&self) -> [(&'static str, f64); 8] {
        [
            ("R", self.visibility),
            ("O", self.overlap),
            ("D", self.distinguishability),
            ("Dalt", self.distinguishability_alt),
            ("N", self.negativity),
            ("P", self.purity),
            ("S", self.renyi),
            ("F", self.fidelity),
        ]
    }
}

fn eps(xi0: f64) -> f64 {
    (-2.0 * xi0 * xi0).exp()
}

/// Visibility of the P-marginal fringe from the densities at `P = 0` of the even and odd cats.
pub fn visibility(p_plus0: f64, p_minus0: f64, xi0: f64) -> Result<f64> {
    if p_plus0 < 0.0 || p_minus0 < 0.0 {
        return Err(Error::InvalidArgument(
            "densities must be nonnegative".into(),
        ));
    }
    let a = CatSign::Plus.norm(xi0) * p_plus0;
    let b = CatSign::Minus.norm(xi0) * p_minus0;
    if a + b == 0.0 {
        return Err(Error::Degenerate("both densities vanish at P = 0".into()));
    }
    Ok((a - b) / (a + b))
}

fn check_reference(w0: f64) -> Result<()> {
    if !(w0 > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "vacuum reference Wigner value must be > 0, got {w0}"
        )));
    }
    Ok(())
}

/// Visibility from the Wigner origin values of the even cat, odd cat and vacuum reference.
pub fn visibility_from_wigner(w_plus: f64, w_minus: f64, w0: f64, xi0: f64) -> Result<f64> {
    check_reference(w0)?;
    Ok((CatSign::Plus.norm(xi0) * w_plus - CatSign::Minus.norm(xi0) * w_minus) / (4.0 * w0))
}

/// Peak overlap from the Wigner origin values.
pub fn overlap_from_wigner(w_plus: f64, w_minus: f64, w0: f64, xi0: f64) -> Result<f64> {
    check_reference(w0)?;
    Ok((CatSign::Plus.norm(xi0) * w_plus + CatSign::Minus.norm(xi0) * w_minus) / (4.0 * w0))
}

/// Large-amplitude form of [`visibility_from_wigner`] with `N± ≈ 2`. Only accurate for `ξ(0) > 2`.
pub fn visibility_from_wigner_approx(w_plus: f64, w_minus: f64, w0: f64) -> Result<f64> {
    check_reference(w0)?;
    Ok((w_plus - w_minus) / (2.0 * w0))
}

/// Large-amplitude form of [`overlap_from_wigner`] with `N± ≈ 2`. Only accurate for `ξ(0) > 2`.
pub fn overlap_from_wigner_approx(w_plus: f64, w_minus: f64, w0: f64) -> Result<f64> {
    check_reference(w0)?;
    Ok((w_plus + w_minus) / (2.0 * w0))
}

/// Normalised overlap `O = sqrt(∫pL pR / ∫pL0 pR0)` of the two marginal peaks.
pub fn overlap_integral(pl: &Gaussian, pr: &Gaussian, reference: &Gaussian) -> f64 {
    (pl.product_integral(pr) / reference.product_integral(reference)).sqrt()
}

pub fn distinguishability(params: &CatWignerParams) -> f64 {
    params.d_factor
}

/// `sqrt(1 − O²)`.
pub fn distinguishability_alt(overlap: f64) -> f64 {
    (1.0 - overlap * overlap).max(0.0).sqrt()
}

/// Negativity parameter from the even- and odd-cat Wigner origin values.
pub fn negativity(w_plus: f64, w_minus: f64, xi0: f64) -> Result<f64> {
    let a = CatSign::Plus.norm(xi0) * w_plus;
    let b = CatSign::Minus.norm(xi0) * w_minus;
    if a + b == 0.0 {
        return Err(Error::Degenerate("negativity denominator vanishes".into()));
    }
    Ok((a - b) / (a + b))
}

/// `Tr ρ²` of the mode.
pub fn purity(params: &CatWignerParams) -> f64 {
    let CatFrame {
        xi: a,
        mu,
        var_q,
        var_p,
    } = params.frame;
    let x2 = 2.0 * params.xi0 * params.xi0;
    let s = params.sign.factor();
    let (r, o) = (params.r_factor, params.o_factor);
    let e = eps(params.xi0);
    // ε sqrt(R/D) folded into one exponent
    let cross = (-x2 + 0.5 * (mu * mu / (2.0 * var_p) - a * a / (2.0 * var_q))).exp();
    let n = params.norm;
    (1.0 + r * r + o * o + e * e + 4.0 * s * cross) / (2.0 * n * n * (var_q * var_p).sqrt())
}

/// Second-order Rényi entropy `−ln P`, floored at zero against rounding of `P` above 1.
pub fn renyi(purity: f64) -> f64 {
    let s = -purity.ln();
    if s > 0.0 {
        s
    } else {
        0.0
    }
}

/// Fidelity `⟨Ψ±|ρ|Ψ±⟩` with the initial cat of the same sign, taken in the cat frame.
pub fn fidelity(params: &CatWignerParams) -> f64 {
    let CatFrame {
        xi: a,
        mu,
        var_q,
        var_p,
    } = params.frame;
    let x = params.xi0;
    let s = params.sign.factor();
    let sq = var_q + 0.25;
    let sp = var_p + 0.25;
    let x2 = x * x;
    let t = |e: f64| e.exp();
    let peaks = 2.0 * (t(-(x - a).powi(2) / (2.0 * sq)) + t(-(x + a).powi(2) / (2.0 * sq)));
    // s₀ s = 1 since the reference has the same sign
    let fringes = 2.0
        * (t((x - mu).powi(2) / (2.0 * sp) - 4.0 * x2)
            + t((x + mu).powi(2) / (2.0 * sp) - 4.0 * x2));
    let mixed = 4.0 * s * t(-2.0 * x2 - x2 / (2.0 * sq) + mu * mu / (2.0 * sp))
        + 4.0 * s * t(-2.0 * x2 - a * a / (2.0 * sq) + x2 / (2.0 * sp));
    let n = params.norm;
    (peaks + fringes + mixed) / (2.0 * n * n * (sq * sp).sqrt())
}

/// Wigner value at the origin of the vacuum pushed through the same channel.
pub fn vacuum_origin_value(params: &CatWignerParams) -> f64 {
    1.0 / (2.0 * PI * (params.frame.var_q * params.frame.var_p).sqrt())
}

/// Closed-form record for the parameters of one mode.
pub fn record_from_params(params: &CatWignerParams, g: f64) -> MetricsRecord {
    let r = params.r_factor;
    let o = params.o_factor;
    let p = purity(params);
    MetricsRecord {
        mode: params.mode_params.mode,
        sign: params.sign,
        g,
        visibility: r,
        overlap: o,
        distinguishability: distinguishability(params),
        distinguishability_alt: distinguishability_alt(o),
        negativity: r / o,
        purity: p,
        renyi: renyi(p),
        fidelity: fidelity(params),
    }
}

/// Closed-form records for S and E at rescaled time `G`.
pub fn closed_form_records(
    config: &ExperimentConfig,
    g: f64,
) -> Result<(MetricsRecord, MetricsRecord)> {
    let pair = evolve(config, rescaled_time(config, g)?)?;
    Ok(records_from_pair(config, &pair, g))
}

pub fn records_from_pair(
    config: &ExperimentConfig,
    pair: &ModePair,
    g: f64,
) -> (MetricsRecord, MetricsRecord) {
    let rec = |mode| {
        record_from_params(
            &CatWignerParams::new(*pair.get(mode), config.xi0, config.sign),
            g,
        )
    };
    (rec(Mode::System), rec(Mode::Environment))
}

/// Closed-form record for a single mode.
pub fn closed_form_record(config: &ExperimentConfig, g: f64, mode: Mode) -> Result<MetricsRecord> {
    let (s, e) = closed_form_records(config, g)?;
    Ok(match mode {
        Mode::System => s,
        Mode::Environment => e,
    })
}

/// One inequality or identity with its slack (negative when violated).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub holds: bool,
    pub slack: f64,
}

impl Check {
    fn le(name: &str, lhs: f64, rhs: f64, tol: f64) -> Self {
        let slack = rhs - lhs;
        Self {
            name: name.into(),
            holds: slack >= -tol,
            slack,
        }
    }

    fn eq(name: &str, lhs: f64, rhs: f64, tol: f64) -> Self {
        let diff = (lhs - rhs).abs();
        Self {
            name: name.into(),
            holds: diff <= tol,
            slack: tol - diff,
        }
    }
}

/// Evaluate the relations between the two modes' measures.
///
/// Equalities that only hold for unitary evolution are checked when `undamped` is set.
pub fn inequality_checks(
    s: &MetricsRecord,
    e: &MetricsRecord,
    xi0: f64,
    undamped: bool,
    tol: f64,
) -> Vec<Check> {
    let e1 = eps(xi0);
    let e2 = e1 * e1;
    let prod = s.rd() * e.rd();
    let mut out = vec![
        Check::le("RD_S*RD_E <= exp(-4xi^2)", prod, e2, tol),
        Check::le("exp(-4xi^2) <= RD_E", e2, e.rd(), tol),
        Check::le("RD_E <= exp(-2xi^2)", e.rd(), e1, tol),
        Check::le("exp(-2xi^2) <= RD_S", e1, s.rd(), tol),
        Check::le("RD_S <= 1", s.rd(), 1.0, tol),
        Check::le(
            "R_S*R_E <= O_S*O_E",
            s.visibility * e.visibility,
            s.overlap * e.overlap,
            tol,
        ),
        Check::le("N_S*N_E <= 1", s.negativity * e.negativity, 1.0, tol),
    ];
    if undamped {
        out.push(Check::eq("RD_S*RD_E = exp(-4xi^2)", prod, e2, tol));
        out.push(Check::eq(
            "R_S*R_E = O_S*O_E",
            s.visibility * e.visibility,
            s.overlap * e.overlap,
            tol,
        ));
        out.push(Check::eq(
            "N_S*N_E = 1",
            s.negativity * e.negativity,
            1.0,
            tol,
        ));
        for (tag, r) in [("S", s), ("E", e)] {
            out.push(Check::eq(
                &format!("RD_{tag} = exp(-2xi^2) N_{tag}"),
                r.rd(),
                e1 * r.negativity,
                tol,
            ));
            let ratio = r.visibility / r.negativity;
            out.push(Check::eq(
                &format!("R_{tag}^2/N_{tag}^2 + Dalt_{tag}^2 = 1"),
                ratio * ratio + r.distinguishability_alt.powi(2),
                1.0,
                tol,
            ));
        }
    }
    out
}

/// Numerical-quadrature twins of the closed forms.
pub mod numeric {
    use super::*;
    use crate::quadrature::{integrate, integrate_2d};

    const TOL: f64 = 1e-12;

    fn q_window(params: &CatWignerParams) -> (f64, f64) {
        let w = params.frame.xi.max(params.xi0) + 8.0 * params.frame.var_q.sqrt().max(0.5);
        (-w, w)
    }

    fn p_window(params: &CatWignerParams) -> (f64, f64) {
        let w = 8.0 * params.frame.var_p.sqrt().max(0.5);
        (-w, w)
    }

    /// Visibility from the P marginals of both cats at the origin.
    pub fn visibility(params: &CatWignerParams) -> Result<f64> {
        let plus = phase_space::marginal_p(&params.with_sign(CatSign::Plus), 0.0);
        let minus = phase_space::marginal_p(&params.with_sign(CatSign::Minus), 0.0);
        super::visibility(plus, minus, params.xi0)
    }

    /// Origin Wigner values `(W+, W−, W0)`.
    pub fn origin_values(params: &CatWignerParams) -> (f64, f64, f64) {
        let w = |p: &CatWignerParams| phase_space::wigner(p, PhasePoint::ORIGIN);
        (
            w(&params.with_sign(CatSign::Plus)),
            w(&params.with_sign(CatSign::Minus)),
            w(&params.vacuum_reference()),
        )
    }

    /// Overlap by quadrature of the product of the two marginal peaks.
    pub fn overlap(params: &CatWignerParams) -> f64 {
        let (pl, pr) = phase_space::peak_distributions(params);
        let reference = Gaussian::new(0.0, params.frame.var_q);
        let (a, b) = q_window(params);
        let num = integrate(|q| pl.pdf(q) * pr.pdf(q), a, b, 1e-16, TOL, 400).value;
        let den = integrate(|q| reference.pdf(q).powi(2), a, b, 1e-16, TOL, 400).value;
        (num / den).sqrt()
    }

    /// `π∬W²`.
    pub fn purity(params: &CatWignerParams) -> f64 {
        let f = |q, p| phase_space::wigner(params, PhasePoint::new(q, p)).powi(2);
        PI * integrate_2d(f, q_window(params), p_window(params), 1e-13, TOL).value
    }

    /// `π∬W(t=0) W(t)` against the initial cat of the same sign.
    pub fn fidelity(params: &CatWignerParams) -> f64 {
        let reference = initial_cat(params);
        let f = |q, p| {
            let pt = PhasePoint::new(q, p);
            phase_space::wigner(&reference, pt) * phase_space::wigner(params, pt)
        };
        PI * integrate_2d(f, q_window(params), p_window(params), 1e-13, TOL).value
    }

    fn initial_cat(params: &CatWignerParams) -> CatWignerParams {
        let mut mp = params.mode_params;
        mp.mode = Mode::System;
        mp.xi = params.xi0;
        mp.mu = params.xi0;
        mp.var_q = 0.25;
        mp.var_p = 0.25;
        CatWignerParams::new(mp, params.xi0, params.sign)
    }

    /// Record assembled entirely from quadrature and measurement-style estimators.
    pub fn record(params: &CatWignerParams, g: f64) -> Result<MetricsRecord> {
        let (wp, wm, w0) = origin_values(params);
        let r = visibility(params)?;
        let o = overlap(params);
        let p = purity(params);
        Ok(MetricsRecord {
            mode: params.mode_params.mode,
            sign: params.sign,
            g,
            visibility: r,
            overlap: o,
            distinguishability: eps(params.xi0) / overlap_from_wigner(wp, wm, w0, params.xi0)?,
            distinguishability_alt: distinguishability_alt(o),
            negativity: negativity(wp, wm, params.xi0)?,
            purity: p,
            renyi: renyi(p),
            fidelity: fidelity(params),
        })
    }
}
