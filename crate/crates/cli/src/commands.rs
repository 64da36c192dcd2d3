use std::f64::consts::PI;
use std::io::Write;

use catsim::fock::io::write_matrix;
use catsim::fock::{oracle_records, OracleConfig, SingleModeState};
use catsim::metrics::closed_form_records;
use catsim::phase_space::{marginal_p, marginal_q, wigner};
use catsim::probe::{
    coverage, probe_wigner_origin_lossy, probe_wigner_origin_stream, replicate_wigner_origin,
};
use catsim::{evolve_g, CatWignerParams, ExperimentConfig, MetricsRecord, Mode, PhasePoint};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::args::{
    check_grid, pick, pick_opt, Format, OracleArgs, PointArgs, ProbeArgs, ProbeTarget, SweepArgs,
};
use crate::output::{metric, num, sink, write_json, ALL_METRICS, DEFAULT_METRICS};
use crate::CliError;

fn records(
    cfg: &ExperimentConfig,
    g: f64,
    oracle: bool,
) -> Result<(MetricsRecord, MetricsRecord), CliError> {
    if oracle {
        let run = oracle_records(&OracleConfig::new(*cfg), g)?;
        Ok((run.s.record, run.e.record))
    } else {
        Ok(closed_form_records(cfg, g)?)
    }
}

fn csv_header(metrics: &[String]) -> String {
    let mut cols = vec!["G".to_string(), "r".to_string()];
    for tag in ["S", "E"] {
        cols.extend(metrics.iter().map(|m| format!("{m}_{tag}")));
    }
    cols.join(",")
}

fn csv_row(g: f64, r: f64, s: &MetricsRecord, e: &MetricsRecord, metrics: &[String]) -> String {
    let mut cols = vec![num(g), num(r)];
    for rec in [s, e] {
        cols.extend(metrics.iter().map(|m| num(metric(rec, m))));
    }
    cols.join(",")
}

pub fn point(a: PointArgs) -> Result<(), CliError> {
    let file = a.config.file()?;
    let cfg = a.config.single(&file)?;
    let g: f64 = pick(a.g, &file, "g", 0.0)?;
    let format: Format = pick(a.format, &file, "format", Format::Json)?;
    let out = pick_opt(a.out, &file, "out")?;
    let (s, e) = records(&cfg, g, a.oracle)?;
    match format {
        Format::Json => write_json(
            out.as_deref(),
            &json!({
                "config": cfg,
                "G": g,
                "source": if a.oracle { "oracle" } else { "closed-form" },
                "S": s,
                "E": e,
            }),
        ),
        Format::Csv => {
            let metrics: Vec<String> = DEFAULT_METRICS.iter().map(|s| s.to_string()).collect();
            let mut w = sink(out.as_deref())?;
            writeln!(w, "{}", csv_header(&metrics))?;
            writeln!(w, "{}", csv_row(g, cfg.r, &s, &e, &metrics))?;
            w.flush()?;
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct SweepRow {
    #[serde(rename = "G")]
    g: f64,
    r: f64,
    #[serde(rename = "S")]
    s: MetricsRecord,
    #[serde(rename = "E")]
    e: MetricsRecord,
}

pub fn sweep(a: SweepArgs) -> Result<(), CliError> {
    let file = a.config.file()?;
    let base = a.config.base(&file)?;
    let rs = a.config.r_values(&file)?;
    check_grid("r", &rs)?;
    let gs = a.grid.values(&file, PI, 64)?;
    let metrics = a
        .metrics
        .clone()
        .or_else(|| file.strings("metrics"))
        .unwrap_or_else(|| DEFAULT_METRICS.iter().map(|s| s.to_string()).collect());
    if let Some(bad) = metrics.iter().find(|m| !ALL_METRICS.contains(&m.as_str())) {
        return Err(CliError::Usage(format!(
            "unknown metric '{bad}' (expected one of {})",
            ALL_METRICS.join(", ")
        )));
    }
    let format: Format = pick(a.format, &file, "format", Format::Csv)?;
    let out = pick_opt(a.out, &file, "out")?;
    let configs: Vec<ExperimentConfig> = rs
        .iter()
        .map(|&r| {
            let cfg = ExperimentConfig { r, ..base };
            cfg.validate().map(|_| cfg)
        })
        .collect::<Result<_, _>>()?;
    let points: Vec<(ExperimentConfig, f64)> = configs
        .iter()
        .flat_map(|c| gs.iter().map(move |&g| (*c, g)))
        .collect();
    // collect keeps grid order whatever the completion order
    let rows: Vec<SweepRow> = points
        .par_iter()
        .map(|(cfg, g)| {
            closed_form_records(cfg, *g).map(|(s, e)| SweepRow {
                g: *g,
                r: cfg.r,
                s,
                e,
            })
        })
        .collect::<Result<_, _>>()?;
    match format {
        Format::Csv => {
            let mut w = sink(out.as_deref())?;
            writeln!(w, "{}", csv_header(&metrics))?;
            for row in &rows {
                writeln!(w, "{}", csv_row(row.g, row.r, &row.s, &row.e, &metrics))?;
            }
            w.flush()?;
            Ok(())
        }
        Format::Json => write_json(out.as_deref(), &rows),
    }
}

pub fn probe_sim(a: ProbeArgs) -> Result<(), CliError> {
    let file = a.config.file()?;
    let cfg = a.config.single(&file)?;
    let g: f64 = pick(a.g, &file, "g", 0.0)?;
    let mode: Mode = pick(a.mode, &file, "mode", Mode::System)?;
    let target: ProbeTarget = pick(a.state, &file, "state", ProbeTarget::Cat)?;
    let q: f64 = pick(a.q, &file, "q", 0.0)?;
    let p: f64 = pick(a.p, &file, "p", 0.0)?;
    let shots: u64 = pick(a.shots, &file, "shots", 10_000)?;
    let seed: u64 = pick(a.seed, &file, "seed", 1)?;
    let reps: Option<u64> = pick_opt(a.replications, &file, "replications")?;
    let efficiency: Option<f64> = pick_opt(a.efficiency, &file, "efficiency")?;
    let out = pick_opt(a.out, &file, "out")?;
    if shots == 0 {
        return Err(CliError::Domain("shots must be >= 1".into()));
    }
    let pair = evolve_g(&cfg, g)?;
    let mut params = CatWignerParams::new(*pair.get(mode), cfg.xi0, cfg.sign);
    if target == ProbeTarget::Vacuum {
        params = params.vacuum_reference();
    }
    let true_w = wigner(&params, PhasePoint::new(q, p));
    let head = json!({
        "config": cfg,
        "G": g,
        "mode": mode,
        "state": format!("{target:?}").to_lowercase(),
        "point": [q, p],
        "true_w": true_w,
        "true_w_meas": PI * true_w,
    });
    let body = match (reps, efficiency) {
        (Some(_), Some(_)) => {
            return Err(CliError::Usage(
                "--replications and --efficiency cannot be combined".into(),
            ));
        }
        (Some(0), None) => return Err(CliError::Usage("--replications must be >= 1".into())),
        (Some(n), None) => {
            let est = replicate_wigner_origin(true_w, shots, seed, n)?;
            json!({ "replications": coverage(&est, PI * true_w), "seed": seed, "shots": shots })
        }
        (None, eff) => {
            let est = match eff {
                Some(e) => probe_wigner_origin_lossy(true_w, shots, e, seed, 0)?,
                None => probe_wigner_origin_stream(true_w, shots, seed, 0)?,
            };
            json!({ "estimate": est, "recovered_w": est.estimate / PI })
        }
    };
    let mut doc = head;
    doc.as_object_mut()
        .expect("object")
        .extend(body.as_object().expect("object").clone());
    write_json(out.as_deref(), &doc)
}

/// Oracle feasibility limits.
const MAX_XI0: f64 = 3.0;
const MAX_ABS_R: f64 = 2.5;

#[derive(Debug, Clone, Serialize)]
struct Deviation {
    quantity: String,
    max_dev: f64,
    #[serde(rename = "G")]
    g: f64,
    mode: Mode,
}

fn dev(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1.0)
}

fn note(table: &mut Vec<Deviation>, quantity: &str, d: f64, g: f64, mode: Mode) {
    match table.iter_mut().find(|t| t.quantity == quantity) {
        Some(t) => {
            if d > t.max_dev || d.is_nan() {
                t.max_dev = d;
                t.g = g;
                t.mode = mode;
            }
        }
        None => table.push(Deviation {
            quantity: quantity.into(),
            max_dev: d,
            g,
            mode,
        }),
    }
}

fn pointwise(params: &CatWignerParams, st: &SingleModeState) -> [(&'static str, f64); 3] {
    let grid: Vec<f64> = (0..5).map(|i| params.xi0 * (i as f64 - 2.0)).collect();
    let mut w = 0.0f64;
    for &q in &grid {
        for (&p, got) in grid.iter().zip(st.wigner_line(q, &grid)) {
            w = w.max(dev(got, wigner(params, PhasePoint::new(q, p))));
        }
    }
    let f = &params.frame;
    let wq = params.xi0.max(f.xi.abs()) + 8.0 * f.var_q.sqrt();
    let wp = 8.0 * f.var_p.sqrt().max(0.5);
    let line = |h: f64| (0..201).map(move |i| -h + 2.0 * h * i as f64 / 200.0);
    let mq = line(wq)
        .map(|x| dev(st.marginal_q(x), marginal_q(params, x)))
        .fold(0.0, f64::max);
    let mp = line(wp)
        .map(|x| dev(st.marginal_p(x), marginal_p(params, x)))
        .fold(0.0, f64::max);
    [("W(5x5)", w), ("marginal_Q", mq), ("marginal_P", mp)]
}

pub fn oracle_check(a: OracleArgs) -> Result<(), CliError> {
    let file = a.config.file()?;
    let cfg = a.config.single(&file)?;
    if cfg.xi0 > MAX_XI0 || cfg.r.abs() > MAX_ABS_R {
        return Err(CliError::Domain(format!(
            "outside oracle feasibility (xi0 <= {MAX_XI0}, |r| <= {MAX_ABS_R})"
        )));
    }
    let gs = a.grid.values(&file, PI, 4)?;
    let tol: f64 = pick(a.tol, &file, "tol", 1e-6)?;
    let n_max: Option<usize> = pick_opt(a.n_max, &file, "n-max")?;
    let format: Format = pick(a.format, &file, "format", Format::Csv)?;
    let out = pick_opt(a.out, &file, "out")?;
    let mut oc = OracleConfig::new(cfg);
    if let Some(n) = n_max {
        oc = oc.with_n_max(n);
    }
    if let Some(dir) = &a.dump_dir {
        std::fs::create_dir_all(dir)?;
    }
    let mut table: Vec<Deviation> = Vec::new();
    let mut used_n_max = 0;
    let mut boundary = 0.0f64;
    for (k, &g) in gs.iter().enumerate() {
        let run = oracle_records(&oc, g).map_err(|e| match e {
            catsim::Error::Truncation(_) => CliError::Domain(format!("{e} (raise --n-max)")),
            other => other.into(),
        })?;
        used_n_max = run.n_max;
        boundary = boundary.max(run.boundary_population);
        let (s, e) = closed_form_records(&cfg, g)?;
        let pair = evolve_g(&cfg, g)?;
        for (mode, want) in [(Mode::System, s), (Mode::Environment, e)] {
            let report = run.mode(mode);
            for ((name, got), (_, w)) in report.record.values().into_iter().zip(want.values()) {
                note(&mut table, name, dev(got, w), g, mode);
            }
            note(
                &mut table,
                "RD",
                dev(report.record.rd(), want.rd()),
                g,
                mode,
            );
            let params = CatWignerParams::new(*pair.get(mode), cfg.xi0, cfg.sign);
            for (name, d) in pointwise(&params, &report.state) {
                note(&mut table, name, d, g, mode);
            }
            if let Some(dir) = &a.dump_dir {
                let path = dir.join(format!("rho_{}_{k}.txt", mode.tag()));
                let f = std::io::BufWriter::new(std::fs::File::create(&path)?);
                write_matrix(f, &report.state.rho)?;
            }
        }
    }
    let pass = table.iter().all(|t| t.max_dev <= tol);
    match format {
        Format::Json => write_json(
            out.as_deref(),
            &json!({
                "config": cfg,
                "G": gs,
                "tol": tol,
                "n_max": used_n_max,
                "boundary_population": boundary,
                "deviations": table,
                "pass": pass,
            }),
        )?,
        Format::Csv => {
            let mut w = sink(out.as_deref())?;
            writeln!(w, "# deviation = |oracle - closed| / max(1, |closed|); n_max {used_n_max}; boundary population {boundary:.3e}")?;
            writeln!(w, "quantity,max_dev,G,mode,status")?;
            for t in &table {
                let status = if t.max_dev <= tol { "ok" } else { "FAIL" };
                writeln!(
                    w,
                    "{},{},{},{},{status}",
                    t.quantity,
                    num(t.max_dev),
                    num(t.g),
                    t.mode
                )?;
            }
            w.flush()?;
        }
    }
    if pass {
        Ok(())
    } else {
        let worst = table
            .iter()
            .max_by(|a, b| a.max_dev.total_cmp(&b.max_dev))
            .expect("nonempty table");
        Err(CliError::Verification(format!(
            "oracle and closed form differ by {:.3e} in {} (tol {tol:e})",
            worst.max_dev, worst.quantity
        )))
    }
}
