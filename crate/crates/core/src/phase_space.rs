//! Analytic Wigner function, coordinate density matrix and quadrature marginals of one mode.
//!
//! All coordinates are taken in the mode's cat frame, where the two peaks sit on the Q axis
//! at `±xi`. For mode S this is the laboratory frame; for mode E use [`PhasePoint::from_lab`].
//! Normalisation: `∬ W dQ dP = 1`, vacuum variances 1/4, so the vacuum has `W(0,0) = 2/π`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::config::{CatSign, Mode};
use crate::dynamics::{CatFrame, ModeParams};

/// Below this fringe displacement the interference term is treated as flat.
pub const FLAT_FRINGE_MU: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhasePoint {
    pub q: f64,
    pub p: f64,
}

impl PhasePoint {
    pub const ORIGIN: PhasePoint = PhasePoint { q: 0.0, p: 0.0 };

    pub fn new(q: f64, p: f64) -> Self {
        Self { q, p }
    }

    /// Map a laboratory-frame point of `mode` into its cat frame.
    pub fn from_lab(mode: Mode, q: f64, p: f64) -> Self {
        match mode {
            Mode::System => Self { q, p },
            Mode::Environment => Self { q: -p, p: q },
        }
    }
}

/// One-dimensional normal distribution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Gaussian {
    pub center: f64,
    pub var: f64,
}

impl Gaussian {
    pub fn new(center: f64, var: f64) -> Self {
        Self { center, var }
    }

    pub fn pdf(&self, x: f64) -> f64 {
        let d = x - self.center;
        (-d * d / (2.0 * self.var)).exp() / (2.0 * PI * self.var).sqrt()
    }

    /// `∫ p₁ p₂ dx` for two normal densities.
    pub fn product_integral(&self, other: &Gaussian) -> f64 {
        Gaussian::new(self.center, self.var + other.var).pdf(other.center)
    }
}

/// Everything needed to evaluate the closed forms of one mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CatWignerParams {
    pub mode_params: ModeParams,
    pub sign: CatSign,
    pub xi0: f64,
    pub frame: CatFrame,
    /// `N±`
    pub norm: f64,
    /// Interference weight `R`.
    pub r_factor: f64,
    /// Peak overlap weight `O`.
    pub o_factor: f64,
    /// Distinguishability weight `D`.
    pub d_factor: f64,
}

impl CatWignerParams {
    pub fn new(mode_params: ModeParams, xi0: f64, sign: CatSign) -> Self {
        let frame = mode_params.cat_frame();
        let CatFrame {
            xi: a,
            mu,
            var_q,
            var_p,
        } = frame;
        let x2 = 2.0 * xi0 * xi0;
        Self {
            mode_params,
            sign,
            xi0,
            frame,
            norm: sign.norm(xi0),
            r_factor: (-x2 + mu * mu / (2.0 * var_p)).exp(),
            o_factor: (-a * a / (2.0 * var_q)).exp(),
            d_factor: (-x2 + a * a / (2.0 * var_q)).exp(),
        }
    }

    pub fn with_sign(&self, sign: CatSign) -> Self {
        Self::new(self.mode_params, self.xi0, sign)
    }

    /// The same Gaussian channel applied to vacuum instead of the cat.
    pub fn vacuum_reference(&self) -> Self {
        let mut mp = self.mode_params;
        mp.xi = 0.0;
        mp.mu = 0.0;
        Self::new(mp, 0.0, CatSign::Plus)
    }

    pub fn gamma_q(&self, q: f64) -> f64 {
        Gaussian::new(0.0, self.frame.var_q).pdf(q)
    }

    pub fn gamma_p(&self, p: f64) -> f64 {
        Gaussian::new(0.0, self.frame.var_p).pdf(p)
    }

    fn interference_sign(&self) -> f64 {
        self.sign.factor()
    }
}

/// Wigner function at `pt`.
pub fn wigner(params: &CatWignerParams, pt: PhasePoint) -> f64 {
    let f = &params.frame;
    let (pl, pr) = peak_distributions(params);
    // O cosh(aQ/Vq) ΓQ written without overflow
    let peaks = 0.5 * (pl.pdf(pt.q) + pr.pdf(pt.q));
    let fringe = params.interference_sign()
        * params.r_factor
        * params.gamma_q(pt.q)
        * (f.mu * pt.p / f.var_p).cos();
    2.0 / params.norm * params.gamma_p(pt.p) * (peaks + fringe)
}

/// Coordinate-representation density matrix `⟨Q|ρ|Q'⟩`.
pub fn rho_coordinate(params: &CatWignerParams, q: f64, qp: f64) -> f64 {
    let f = &params.frame;
    let s = 0.5 * (q + qp);
    let d = q - qp;
    let (pl, pr) = peak_distributions(params);
    let coh = |x: f64| (-2.0 * f.var_p * x * x).exp();
    let shift = f.mu / (2.0 * f.var_p);
    let diag = (pl.pdf(s) + pr.pdf(s)) * coh(d);
    let off = params.interference_sign()
        * params.r_factor
        * params.gamma_q(s)
        * (coh(d - shift) + coh(d + shift));
    (diag + off) / params.norm
}

/// Marginal density of the P quadrature.
pub fn marginal_p(params: &CatWignerParams, p: f64) -> f64 {
    let f = &params.frame;
    2.0 / params.norm
        * params.gamma_p(p)
        * (1.0 + params.interference_sign() * params.r_factor * (f.mu * p / f.var_p).cos())
}

/// Marginal density of the Q quadrature.
pub fn marginal_q(params: &CatWignerParams, q: f64) -> f64 {
    let (pl, pr) = peak_distributions(params);
    let eps = (-2.0 * params.xi0 * params.xi0).exp();
    (pl.pdf(q) + pr.pdf(q) + 2.0 * params.interference_sign() * eps * params.gamma_q(q))
        / params.norm
}

/// The left and right Gaussian peaks of the Q marginal.
pub fn peak_distributions(params: &CatWignerParams) -> (Gaussian, Gaussian) {
    let f = &params.frame;
    let a = f.xi.abs();
    (Gaussian::new(-a, f.var_q), Gaussian::new(a, f.var_q))
}

/// Point `(0, π Vp / μ)` where the odd fringe of the even cat is deepest.
/// `None` when the interference term is flat.
pub fn max_negativity_point(params: &CatWignerParams) -> Option<PhasePoint> {
    let f = &params.frame;
    let mu = f.mu.abs();
    (mu > FLAT_FRINGE_MU).then(|| PhasePoint::new(0.0, PI * f.var_p / mu))
}

/// Minimum of the Wigner function along `Q = 0`, found by a grid scan and golden-section polish.
/// Returns `(P, W)`.
pub fn min_wigner_on_q_axis(params: &CatWignerParams) -> (f64, f64) {
    let f = &params.frame;
    let w = |p: f64| wigner(params, PhasePoint::new(0.0, p));
    let half_width = 8.0 * f.var_p.sqrt();
    let n = 4001;
    let step = 2.0 * half_width / (n - 1) as f64;
    let (mut best_p, mut best_w) = (0.0, w(0.0));
    for i in 0..n {
        let p = -half_width + i as f64 * step;
        let v = w(p);
        if v < best_w {
            best_p = p;
            best_w = v;
        }
    }
    let (mut lo, mut hi) = (best_p - step, best_p + step);
    let g = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..80 {
        let x1 = hi - g * (hi - lo);
        let x2 = lo + g * (hi - lo);
        if w(x1) < w(x2) {
            hi = x2;
        } else {
            lo = x1;
        }
    }
    let p = 0.5 * (lo + hi);
    let v = w(p);
    if v < best_w {
        (p, v)
    } else {
        (best_p, best_w)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::ExperimentConfig;
    use crate::dynamics::evolve;
    use crate::quadrature::{integrate, integrate_2d};
    use proptest::prelude::*;
    use std::f64::consts::FRAC_PI_2;

    fn params(xi0: f64, r: f64, g: f64, mode: Mode, sign: CatSign) -> CatWignerParams {
        let cfg = ExperimentConfig::new(xi0, r).with_sign(sign);
        let m = evolve(&cfg, g).unwrap();
        CatWignerParams::new(*m.get(mode), xi0, sign)
    }

    #[test]
    fn origin_values() {
        let v = params(0.0, 0.0, 0.0, Mode::System, CatSign::Plus);
        assert!((wigner(&v, PhasePoint::ORIGIN) - 2.0 / PI).abs() < 1e-15);
        let c = params(2.0, 1.0, 0.0, Mode::System, CatSign::Plus);
        assert!((wigner(&c, PhasePoint::ORIGIN) - 2.0 / PI).abs() < 1e-14);
        let c = params(2.0, 1.0, 0.0, Mode::System, CatSign::Minus);
        assert!((wigner(&c, PhasePoint::ORIGIN) + 2.0 / PI).abs() < 1e-14);
    }

    #[test]
    fn initial_factors() {
        let c = params(2.0, 2.0, 0.0, Mode::System, CatSign::Plus);
        assert!((c.r_factor - 1.0).abs() < 1e-15);
        assert!((c.o_factor - (-8f64).exp()).abs() < 1e-18);
        assert!((c.d_factor - 1.0).abs() < 1e-15);
        let m = marginal_p(&c, 0.0);
        assert!((m - 2.0 / c.norm * c.gamma_p(0.0) * 2.0).abs() < 1e-15);
        let odd = c.with_sign(CatSign::Minus);
        assert!(marginal_p(&odd, 0.0).abs() < 1e-15);
    }

    #[test]
    fn swapped_out_cat_leaves_vacuum_marginal() {
        let c = params(2.0, 0.0, FRAC_PI_2, Mode::System, CatSign::Plus);
        let vac = Gaussian::new(0.0, 0.25);
        for q in [-1.0, -0.3, 0.0, 0.5, 1.2] {
            assert!((marginal_q(&c, q) - vac.pdf(q)).abs() < 1e-14);
        }
        let (l, r) = peak_distributions(&c);
        assert!(l.center.abs() < 1e-15 && r.center.abs() < 1e-15);
    }

    #[test]
    fn negativity_point_degenerates_without_fringe() {
        let c = params(2.0, 0.0, FRAC_PI_2, Mode::System, CatSign::Plus);
        assert!(max_negativity_point(&c).is_none());
        let c = params(2.0, 0.0, 0.0, Mode::System, CatSign::Plus);
        let pt = max_negativity_point(&c).unwrap();
        assert!((pt.p - PI / 8.0).abs() < 1e-15);
        assert!(wigner(&c, pt) < 0.0);
    }

    #[test]
    fn environment_frame_rotation() {
        let c = params(1.5, 0.7, 0.9, Mode::Environment, CatSign::Plus);
        assert!((c.frame.var_q - c.mode_params.var_p).abs() < 1e-15);
        let pt = PhasePoint::from_lab(Mode::Environment, 0.3, -1.1);
        assert_eq!((pt.q, pt.p), (1.1, 0.3));
    }

    #[test]
    fn wigner_integrals_match_marginals() {
        for &(mode, sign, g, r) in &[
            (Mode::System, CatSign::Plus, 0.6, 1.0),
            (Mode::System, CatSign::Minus, 0.3, -1.0),
            (Mode::Environment, CatSign::Plus, 1.1, 2.0),
        ] {
            let c = params(1.7, r, g, mode, sign);
            let (sq, sp) = (c.frame.var_q.sqrt(), c.frame.var_p.sqrt());
            let qb = c.frame.xi.abs() + 8.0 * sq;
            let pb = 8.0 * sp;
            let total = integrate_2d(
                |q, p| wigner(&c, PhasePoint::new(q, p)),
                (-qb, qb),
                (-pb, pb),
                1e-12,
                1e-12,
            );
            assert!((total.value - 1.0).abs() < 1e-9, "{}", total.value);
            for x in [-1.3, -0.2, 0.0, 0.8] {
                let mq = integrate(
                    |p| wigner(&c, PhasePoint::new(x, p)),
                    -pb,
                    pb,
                    1e-13,
                    1e-13,
                    400,
                );
                assert!((mq.value - marginal_q(&c, x)).abs() < 1e-9);
                let mp = integrate(
                    |q| wigner(&c, PhasePoint::new(q, x)),
                    -qb,
                    qb,
                    1e-13,
                    1e-13,
                    400,
                );
                assert!((mp.value - marginal_p(&c, x)).abs() < 1e-9);
                assert!((rho_coordinate(&c, x, x) - marginal_q(&c, x)).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn wigner_is_fourier_transform_of_rho() {
        let c = params(1.5, 1.0, 0.7, Mode::System, CatSign::Minus);
        let lim = c.frame.xi.abs() + 10.0 * c.frame.var_q.sqrt().max(0.5);
        for &(q, p) in &[(0.0, 0.0), (0.4, -0.3), (-1.2, 0.9)] {
            let val = integrate(
                |y| rho_coordinate(&c, q + y, q - y) * (4.0 * p * y).cos(),
                -lim,
                lim,
                1e-14,
                1e-13,
                500,
            );
            let w = 2.0 / PI * val.value;
            assert!((w - wigner(&c, PhasePoint::new(q, p))).abs() < 1e-10);
        }
    }

    #[test]
    fn min_on_axis_finds_fringe() {
        let c = params(2.0, 0.0, 0.0, Mode::System, CatSign::Plus);
        let (p, w) = min_wigner_on_q_axis(&c);
        // the envelope pulls the minimum slightly inside the first fringe node
        assert!((p.abs() - 0.36985).abs() < 1e-4);
        assert!(w <= wigner(&c, max_negativity_point(&c).unwrap()));
        assert!(w < -0.47);
    }

    proptest! {
        #[test]
        fn factors_in_range(xi0 in 0.0f64..3.0, r in -2.0f64..2.0, g in 0.0f64..3.2,
                            gs in 0.0f64..0.3, env in any::<bool>()) {
            let cfg = ExperimentConfig::new(xi0, r).with_damping(gs, 0.0);
            let m = evolve(&cfg, g).unwrap();
            let mode = if env { Mode::Environment } else { Mode::System };
            let c = CatWignerParams::new(*m.get(mode), xi0, CatSign::Plus);
            let eps = (-2.0 * xi0 * xi0).exp();
            prop_assert!(c.r_factor > 0.0 && c.r_factor <= 1.0 + 1e-12);
            prop_assert!(c.o_factor > 0.0 && c.o_factor <= 1.0);
            prop_assert!(c.d_factor > 0.0 && c.d_factor <= 1.0 + 1e-12);
            prop_assert!(c.o_factor >= eps * (1.0 - 1e-12));
        }

        #[test]
        fn rho_is_symmetric(q in -3.0f64..3.0, qp in -3.0f64..3.0, g in 0.0f64..3.0) {
            let c = params(1.2, 0.5, g, Mode::System, CatSign::Minus);
            prop_assert!((rho_coordinate(&c, q, qp) - rho_coordinate(&c, qp, q)).abs() < 1e-15);
        }

        #[test]
        fn marginals_nonnegative(x in -4.0f64..4.0, g in 0.0f64..3.2, r in -2.0f64..2.0) {
            for sign in [CatSign::Plus, CatSign::Minus] {
                let c = params(1.5, r, g, Mode::System, sign);
                prop_assert!(marginal_p(&c, x) >= -1e-15);
                prop_assert!(marginal_q(&c, x) >= -1e-15);
            }
        }
    }
}
