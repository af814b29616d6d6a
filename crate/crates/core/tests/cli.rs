use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::tempdir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_pdm-bgcs"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn figure(which: &str, dir: &Path, extra: &[&str]) -> Output {
    let mut args = vec!["figures", which, "--out", dir.to_str().unwrap()];
    args.extend_from_slice(extra);
    run(&args)
}

#[test]
fn model_table() {
    let o = run(&["model", "--lambda", "0.25", "--points", "5", "--x-max", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("x,mass,V\n"));
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 5);
    let v: f64 = rows[2][2].parse().unwrap();
    assert_eq!(v, 0.0);
}

#[test]
fn config_errors_exit_two() {
    for args in [
        vec!["state", "--alpha", "-1"],
        vec!["state", "--rel-tol", "0.5"],
        vec!["state", "--trunc", "1"],
        vec!["model", "--points", "1"],
        vec!["frobnicate"],
        vec!["state", "--config", "/nonexistent/pdm.cfg"],
    ] {
        let o = run(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!stderr(&o).is_empty());
    }
}

#[test]
fn numeric_failures_exit_one_and_name_the_problem() {
    let o = run(&["state", "--lambda-prime", "0.5", "--z-re", "1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("singular"));
    let o = run(&["moments", "--lambda-prime", "0.9", "--z-re", "0"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("vacuum"));
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "# state dump\nlambda-prime = 1.5\nz-re = 2\ntrunc = 40\n").unwrap();
    let from_file = run(&["state", "--config", cfg.to_str().unwrap()]);
    let explicit = run(&["state", "--lambda-prime", "1.5", "--z-re", "2", "--trunc", "40"]);
    assert_eq!(from_file.status.code(), Some(0));
    assert_eq!(stdout(&from_file), stdout(&explicit));
    assert_eq!(csv_rows(&stdout(&from_file)).len(), 40);

    let overridden = run(&["state", "--config", cfg.to_str().unwrap(), "--z-re", "1"]);
    let direct = run(&["state", "--lambda-prime", "1.5", "--z-re", "1", "--trunc", "40"]);
    assert_eq!(stdout(&overridden), stdout(&direct));

    fs::write(&cfg, "lambda-prime = 1.5\nbogus = 3\n").unwrap();
    let bad = run(&["state", "--config", cfg.to_str().unwrap()]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(stderr(&bad).contains("bogus"));
}

#[test]
fn figure_files_have_the_documented_columns() {
    let dir = tempdir().unwrap();
    for (fig, header) in [
        ("fig1", "lambda,x,V"),
        ("fig2", "lambda_prime,n,P_n,P_n_poisson"),
        ("fig3", "lambda_prime,z_abs,mean,variance"),
        ("fig4", "lambda_prime,z_abs,Q,g2"),
    ] {
        let o = figure(fig, dir.path(), &[]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        let text = fs::read_to_string(dir.path().join(format!("{fig}.csv"))).unwrap();
        assert_eq!(text.lines().next().unwrap(), header);
    }

    let fig2 = fs::read_to_string(dir.path().join("fig2.csv")).unwrap();
    for lp in ["3.9000000000000001e-1", "9.0000000000000002e-1", "1.5000000000000000e0", "2.6000000000000001e0"] {
        let total: f64 = csv_rows(&fig2)
            .iter()
            .filter(|r| r[0] == lp)
            .map(|r| r[2].parse::<f64>().unwrap())
            .sum();
        assert!((total - 1.0).abs() <= 1e-10, "{lp}: {total}");
    }

    let fig4 = fs::read_to_string(dir.path().join("fig4.csv")).unwrap();
    for r in csv_rows(&fig4) {
        let q: f64 = r[2].parse().unwrap();
        let g: f64 = r[3].parse().unwrap();
        assert!(q < 0.0 && g < 1.0, "{r:?}");
    }

    let fig1 = fs::read_to_string(dir.path().join("fig1.csv")).unwrap();
    let v: Vec<f64> = csv_rows(&fig1)
        .iter()
        .filter(|r| r[0] == "2.5000000000000000e-1" && r[1].parse::<f64>().unwrap() >= 0.0)
        .map(|r| r[2].parse().unwrap())
        .collect();
    assert!(v.windows(2).all(|w| w[1] > w[0]));
    let top = *v.last().unwrap();
    assert!(top > 1.7 && top < 2.0);
}

#[test]
fn json_output() {
    let dir = tempdir().unwrap();
    let o = figure("fig3", dir.path(), &["--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let text = fs::read_to_string(dir.path().join("fig3.json")).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 400);
    assert!(v[0]["mean"].as_f64().unwrap() > 0.0);
}

#[test]
fn failing_figure_writes_error_log() {
    let dir = tempdir().unwrap();
    let o = figure("fig2", dir.path(), &["--z-re", "1e5"]);
    assert_eq!(o.status.code(), Some(1));
    let log = fs::read_to_string(dir.path().join("fig2.error.log")).unwrap();
    assert!(log.starts_with("fig2:"));
    assert!(!dir.path().join("fig2.csv").exists());
}

#[test]
fn verify_subsets() {
    let o = run(&["verify", "algebra", "--lambda-prime", "0"]);
    assert_eq!(o.status.code(), Some(0));
    let rows = csv_rows(&stdout(&o));
    for r in rows.iter().filter(|r| r[0].contains("closure") || r[0].contains("ladder")) {
        let v: f64 = r[1].parse().unwrap();
        assert!(v <= 1e-12, "{r:?}");
    }

    let o = run(&["verify", "coherent", "--lambda-prime", "1.5", "--z-re", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let row = text
        .lines()
        .find(|l| l.starts_with("coherent/eigen_residual"))
        .expect("eigen_residual row");
    let v: f64 = row.split(',').nth(1).unwrap().parse().unwrap();
    assert!(v <= 1e-10);

    let o = run(&["verify", "classical"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(!stdout(&o).contains("FAIL"));
}

#[test]
fn orbit_summary() {
    let o = run(&["orbit", "--lambda", "-0.25", "--amplitude", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let w: f64 = text
        .lines()
        .find(|l| l.starts_with("measured_omega"))
        .unwrap()
        .split(',')
        .nth(1)
        .unwrap()
        .parse()
        .unwrap();
    assert!((w - 1.154700).abs() < 1e-4);
}
