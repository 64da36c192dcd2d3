use std::f64::consts::PI;
use std::process::{Command, Output};

use serde_json::Value;

fn catsim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_catsim"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn json(o: &Output) -> Value {
    assert_eq!(code(o), 0, "stderr: {}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).expect("valid json")
}

fn f(v: &Value) -> f64 {
    v.as_f64().expect("number")
}

#[test]
fn point_at_preparation() {
    let v = json(&catsim(&["point", "--g", "0"]));
    assert_eq!(f(&v["config"]["xi0"]), 2.0);
    assert_eq!(f(&v["config"]["r"]), 2.0);
    for key in ["R", "P", "F"] {
        assert!((f(&v["S"][key]) - 1.0).abs() < 1e-12, "{key}");
    }
    assert_eq!(f(&v["S"]["S"]), 0.0);
}

#[test]
fn point_recurs_after_one_period() {
    let a = json(&catsim(&["point", "--g", "0"]));
    let b = json(&catsim(&["point", "--g", &PI.to_string()]));
    for mode in ["S", "E"] {
        for key in ["R", "O", "D", "Dalt", "P", "S", "F"] {
            assert!(
                (f(&a[mode][key]) - f(&b[mode][key])).abs() < 1e-9,
                "{mode} {key}"
            );
        }
        let (na, nb) = (f(&a[mode]["N"]), f(&b[mode]["N"]));
        assert!((na - nb).abs() < 1e-9 * na.max(1.0));
    }
}

#[test]
fn point_with_oracle() {
    let closed = json(&catsim(&[
        "point", "--xi0", "1", "--r", "0.5", "--g", "0.6",
    ]));
    let oracle = json(&catsim(&[
        "point", "--xi0", "1", "--r", "0.5", "--g", "0.6", "--oracle",
    ]));
    assert_eq!(oracle["source"], "oracle");
    for key in ["R", "O", "D", "P", "F"] {
        assert!((f(&closed["S"][key]) - f(&oracle["S"][key])).abs() < 1e-9);
    }
}

#[test]
fn overdamped_is_a_domain_error() {
    let o = catsim(&["point", "--gamma-s", "3"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("overdamped regime unsupported"));
}

#[test]
fn usage_errors_exit_1() {
    assert_eq!(code(&catsim(&["point", "--nope"])), 1);
    assert_eq!(code(&catsim(&["frobnicate"])), 1);
    assert_eq!(code(&catsim(&["sweep", "--g", "1,0.5"])), 1);
    assert_eq!(code(&catsim(&["sweep", "--metrics", "R,Q"])), 1);
    assert_eq!(code(&catsim(&["point", "--r", "1,2"])), 1);
    assert_eq!(code(&catsim(&["--help"])), 0);
}

#[test]
fn invalid_config_exit_2() {
    assert_eq!(code(&catsim(&["point", "--xi0", "-1"])), 2);
    assert_eq!(
        code(&catsim(&["point", "--xi0", "0", "--sign", "minus"])),
        2
    );
}

fn sweep_csv(args: &[&str]) -> String {
    let o = catsim(&[&["sweep"], args].concat());
    assert_eq!(
        code(&o),
        0,
        "stderr: {}",
        String::from_utf8_lossy(&o.stderr)
    );
    String::from_utf8(o.stdout).unwrap()
}

fn column(csv: &str, name: &str) -> Vec<f64> {
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let idx = header.iter().position(|h| *h == name).unwrap();
    lines
        .map(|l| l.split(',').nth(idx).unwrap().parse().unwrap())
        .collect()
}

#[test]
fn sweep_schema_and_stability() {
    let csv = sweep_csv(&["--r", "-2,0,1,2", "--steps", "8"]);
    let header = csv.lines().next().unwrap();
    assert_eq!(
        header,
        "G,r,R_S,D_S,O_S,N_S,RD_S,P_S,S_S,F_S,R_E,D_E,O_E,N_E,RD_E,P_E,S_E,F_E"
    );
    assert_eq!(csv.lines().count(), 1 + 4 * 9);
    // grid order: r outer, G inner
    let rs = column(&csv, "r");
    let gs = column(&csv, "G");
    assert_eq!(rs[0], -2.0);
    assert_eq!(rs[9], 0.0);
    assert!((gs[1] - PI / 8.0).abs() < 1e-11);
    assert!(gs[..9].windows(2).all(|w| w[1] > w[0]));
    // twelve significant digits
    let first = csv.lines().nth(2).unwrap().split(',').nth(2).unwrap();
    assert_eq!(
        first
            .split('e')
            .next()
            .unwrap()
            .replace(['-', '.'], "")
            .len(),
        12
    );
    assert_eq!(csv, sweep_csv(&["--r", "-2,0,1,2", "--steps", "8"]));
}

#[test]
fn sweep_reproduces_squeezing_slowdown() {
    let grid: Vec<String> = (1..40)
        .map(|i| format!("{}", i as f64 * PI / 80.0))
        .collect();
    let g = grid.join(",");
    let hi = column(&sweep_csv(&["--r", "2", "--g", &g]), "R_S");
    let lo = column(&sweep_csv(&["--r", "0", "--g", &g]), "R_S");
    assert!(hi.iter().zip(&lo).all(|(a, b)| a > b));
}

#[test]
fn sweep_with_damping_loses_visibility() {
    let csv = sweep_csv(&["--gamma-s", "0.05", "--g", &format!("0,{}", PI)]);
    let r = column(&csv, "R_S");
    assert!((r[0] - 1.0).abs() < 1e-12);
    assert!(r[1] < 0.9);
}

#[test]
fn sweep_to_file_and_unwritable_path() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fig.csv");
    let o = catsim(&["sweep", "--steps", "4", "--out", path.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert_eq!(std::fs::read_to_string(&path).unwrap().lines().count(), 6);
    let bad = dir.path().join("missing").join("fig.csv");
    assert_eq!(code(&catsim(&["sweep", "--out", bad.to_str().unwrap()])), 2);
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.conf");
    std::fs::write(
        &path,
        "# canonical damped case\nxi0 = 1.5\nr = 1\ngamma_s = 0.05\ng = 0.5\n",
    )
    .unwrap();
    let p = path.to_str().unwrap();
    let v = json(&catsim(&["point", "--config", p]));
    assert_eq!(f(&v["config"]["xi0"]), 1.5);
    assert_eq!(f(&v["config"]["gamma_s"]), 0.05);
    assert_eq!(f(&v["G"]), 0.5);
    let v = json(&catsim(&["point", "--config", p, "--xi0", "2.5"]));
    assert_eq!(f(&v["config"]["xi0"]), 2.5);
    assert_eq!(f(&v["config"]["r"]), 1.0);
    std::fs::write(&path, "color = blue\n").unwrap();
    assert_eq!(code(&catsim(&["point", "--config", p])), 1);
}

#[test]
fn probe_is_reproducible() {
    let args = ["probe-sim", "--g", "0.7", "--shots", "5000", "--seed", "9"];
    let a = catsim(&args);
    let b = catsim(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let c = catsim(&["probe-sim", "--g", "0.7", "--shots", "5000", "--seed", "10"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn probe_examples() {
    let v = json(&catsim(&[
        "probe-sim",
        "--state",
        "vacuum",
        "--shots",
        "100000",
        "--seed",
        "1",
    ]));
    let e = &v["estimate"];
    assert!((f(&e["estimate"]) - 2.0).abs() <= 3.0 * f(&e["ci95"]).max(1e-15));
    let v = json(&catsim(&["probe-sim", "--g", "0", "--shots", "10000"]));
    assert!((f(&v["estimate"]["estimate"]) - 2.0).abs() < 1e-12);
    let v = json(&catsim(&[
        "probe-sim",
        "--g",
        "0.8",
        "--state",
        "vacuum",
        "--shots",
        "100000",
        "--replications",
        "200",
    ]));
    let cov = f(&v["replications"]["coverage"]);
    assert!((0.88..=1.0).contains(&cov), "{cov}");
    let v = json(&catsim(&[
        "probe-sim",
        "--g",
        "0.8",
        "--efficiency",
        "0.5",
        "--shots",
        "20000",
    ]));
    assert!(f(&v["estimate"]["shots"]) < 20000.0);
    assert_eq!(code(&catsim(&["probe-sim", "--shots", "0"])), 2);
}

#[test]
fn oracle_check_passes_for_moderate_cat() {
    let o = catsim(&[
        "oracle-check",
        "--xi0",
        "1.5",
        "--r",
        "1",
        "--steps",
        "4",
        "--tol",
        "1e-6",
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.lines().filter(|l| l.ends_with(",ok")).count() >= 12);
}

#[test]
fn oracle_check_canonical_damped() {
    let o = catsim(&[
        "oracle-check",
        "--xi0",
        "2",
        "--r",
        "2",
        "--gamma-s",
        "0.05",
        "--steps",
        "2",
        "--tol",
        "1e-5",
        "--format",
        "json",
    ]);
    let v = json(&o);
    assert_eq!(v["pass"], true);
    assert_eq!(v["G"].as_array().unwrap().len(), 3);
}

#[test]
fn oracle_check_failures_are_distinct() {
    let o = catsim(&[
        "oracle-check",
        "--xi0",
        "2",
        "--r",
        "1",
        "--n-max",
        "8",
        "--steps",
        "1",
    ]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("truncation"));
    let o = catsim(&[
        "oracle-check",
        "--xi0",
        "1",
        "--r",
        "0.5",
        "--steps",
        "1",
        "--tol",
        "1e-30",
    ]);
    assert_eq!(code(&o), 3);
    assert_eq!(code(&catsim(&["oracle-check", "--xi0", "3.5"])), 2);
}

#[test]
fn oracle_check_dumps_matrices() {
    let dir = tempfile::tempdir().unwrap();
    let o = catsim(&[
        "oracle-check",
        "--xi0",
        "1",
        "--r",
        "0.3",
        "--g",
        "0.4",
        "--dump-dir",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    let file = std::fs::File::open(dir.path().join("rho_S_0.txt")).unwrap();
    let rho = catsim::fock::io::read_matrix(std::io::BufReader::new(file)).unwrap();
    let tr: f64 = (0..rho.nrows()).map(|i| rho[(i, i)].re).sum();
    assert!((tr - 1.0).abs() < 1e-10);
}
