//! Values obtained from the Fock-space oracle and frozen here.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use catsim::fock::states::cat;
use catsim::fock::{dephased_cat, oracle_moments, oracle_records, OracleConfig, SingleModeState};
use catsim::metrics::{closed_form_records, numeric};
use catsim::phase_space::{marginal_p, marginal_q, wigner};
use catsim::probe::probe_wigner_origin;
use catsim::{evolve_g, CatSign, CatWignerParams, ExperimentConfig, Mode, PhasePoint};

fn close(a: f64, b: f64, tol: f64) {
    assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
}

#[test]
fn damped_moments_at_eighth_period() {
    // xi, mu, var_q, var_p in the cat frame; xi0 = 2, r = 1, gamma_S = 0.05, G = pi/4
    let frozen_s = [
        1.352386508702662,
        1.352386508702663,
        1.017980617766793,
        0.1460651255743023,
    ];
    let frozen_e = [
        1.386809379664221,
        1.386809379664223,
        1.057140477732230,
        0.1407654148343738,
    ];
    let exp = ExperimentConfig::new(2.0, 1.0).with_damping(0.05, 0.0);
    let pair = evolve_g(&exp, FRAC_PI_4).unwrap();
    for (mode, frozen) in [(Mode::System, frozen_s), (Mode::Environment, frozen_e)] {
        let f = pair.get(mode).cat_frame();
        for (got, want) in [f.xi, f.mu, f.var_q, f.var_p].into_iter().zip(frozen) {
            close(got, want, 1e-12);
        }
    }
    // and the live oracle run agrees
    let (s, e) = oracle_moments(&OracleConfig::new(exp), FRAC_PI_4).unwrap();
    for (o, c) in [(s, pair.s.cat_frame()), (e, pair.e.cat_frame())] {
        close(o.xi, c.xi, 1e-10);
        close(o.mu, c.mu, 1e-10);
        close(o.var_q, c.var_q, 1e-10);
        close(o.var_p, c.var_p, 1e-10);
    }
}

#[test]
fn full_swap_without_squeezing() {
    let exp = ExperimentConfig::new(2.0, 0.0);
    let pair = evolve_g(&exp, FRAC_PI_2).unwrap();
    close(pair.s.xi, 0.0, 1e-15);
    close(pair.e.xi.abs(), 2.0, 1e-15);
    close(pair.s.var_q, 0.25, 1e-15);
    close(pair.s.var_p, 0.25, 1e-15);
    let run = oracle_records(&OracleConfig::new(exp), FRAC_PI_2).unwrap();
    // the system holds vacuum; only the N± weighting is left in R
    close(run.s.record.visibility, 3.354626279024994e-4, 1e-12);
    close(run.s.record.visibility, (-8.0f64).exp(), 1e-12);
    close(run.s.record.purity, 1.0, 1e-12);
    let p = CatWignerParams::new(pair.s, 2.0, CatSign::Plus);
    for q in [-1.0, 0.0, 0.4, 1.7] {
        close(
            marginal_q(&p, q),
            (2.0 / PI).sqrt() * (-2.0 * q * q).exp(),
            1e-14,
        );
    }
}

#[test]
fn origin_values_at_preparation() {
    let exp = ExperimentConfig::new(2.0, 1.0);
    let pair = evolve_g(&exp, 0.0).unwrap();
    let even = CatWignerParams::new(pair.s, 2.0, CatSign::Plus);
    let odd = even.with_sign(CatSign::Minus);
    close(wigner(&even, PhasePoint::ORIGIN), 2.0 / PI, 1e-15);
    close(wigner(&odd, PhasePoint::ORIGIN), -2.0 / PI, 1e-15);
    let run = oracle_records(&OracleConfig::new(exp), 0.0).unwrap();
    let (wp, wm, w0) = run.s.origin_values;
    close(wp, 2.0 / PI, 1e-12);
    close(wm, -2.0 / PI, 1e-12);
    close(w0, 2.0 / PI, 1e-12);
    close(run.s.record.visibility, 1.0, 1e-12);
    close(run.s.record.rd(), 1.0, 1e-12);
    close(run.s.record.negativity, 8.0f64.exp(), 1e-8 * 8.0f64.exp());
}

#[test]
fn squeezed_eighth_period_record() {
    let exp = ExperimentConfig::new(2.0, 2.0);
    let run = oracle_records(&OracleConfig::new(exp), FRAC_PI_4).unwrap();
    let (s, e) = closed_form_records(&exp, FRAC_PI_4).unwrap();
    let frozen = [
        ("R", 0.865983278328575),
        ("O", 0.8659832783269354),
        ("D", 0.00038737771998135974),
        ("Dalt", 0.5000729563355065),
        ("N", 1.0),
        ("P", 0.3404367596736525),
        ("S", 1.0775258984728022),
        ("F", 0.3216144639519248),
    ];
    for rec in [&run.s.record, &run.e.record, &s, &e] {
        for ((name, got), (fname, want)) in rec.values().into_iter().zip(frozen) {
            assert_eq!(name, fname);
            close(got, want, 1e-9);
        }
    }
    close(s.purity, e.purity, 1e-10);
    // overlap integral against brute-force quadrature
    let params = CatWignerParams::new(
        *evolve_g(&exp, FRAC_PI_4).unwrap().get(Mode::System),
        2.0,
        CatSign::Plus,
    );
    close(numeric::overlap(&params), s.overlap, 1e-10);
    // P-marginal fringe against the oracle state
    let st = &run.s.state;
    for i in 0..41 {
        let p = -3.0 + 0.15 * i as f64;
        close(st.marginal_p(p), marginal_p(&params, p), 1e-8);
    }
}

#[test]
fn cat_against_dephased_mixture() {
    let c = SingleModeState::from_pure(&cat(2.0, CatSign::Plus, 80).unwrap());
    let d = dephased_cat(2.0, 80).unwrap();
    close(c.overlap(&d).unwrap(), 5.00167731313951314e-1, 1e-15);
    close(c.overlap(&d).unwrap(), 0.5 * (1.0 + (-8.0f64).exp()), 1e-15);
    close(d.purity(), 5.00000056267587589e-1, 1e-15);
    close(d.purity(), 0.5 * (1.0 + (-16.0f64).exp()), 1e-15);
}

#[test]
fn probe_examples() {
    let vac = probe_wigner_origin(2.0 / PI, 100_000, 1).unwrap();
    assert!((vac.estimate - 2.0).abs() <= 3.0 * vac.ci95.max(f64::EPSILON));
    let (s, _) = closed_form_records(&ExperimentConfig::new(2.0, 2.0), 0.0).unwrap();
    assert_eq!(s.visibility, 1.0);
    let p = CatWignerParams::new(
        *evolve_g(&ExperimentConfig::new(2.0, 2.0), 0.0)
            .unwrap()
            .get(Mode::System),
        2.0,
        CatSign::Plus,
    );
    let cat0 = probe_wigner_origin(wigner(&p, PhasePoint::ORIGIN), 10_000, 5).unwrap();
    close(cat0.estimate, 2.0, 1e-12);
}
