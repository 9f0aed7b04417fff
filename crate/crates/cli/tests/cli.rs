use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn ecokmap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ecokmap"))
        .args(args)
        .output()
        .unwrap()
}

fn write_config(dir: &Path, text: &str) -> String {
    let path = dir.join("run.toml");
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn run_in(dir: &Path, sub: &str, config: &str, extra: &[&str]) -> Output {
    let out = dir.join("out");
    let mut args = vec![sub, "--config", config, "--out", out.to_str().unwrap()];
    args.extend_from_slice(extra);
    ecokmap(&args)
}

fn csv_rows(path: &Path) -> Vec<Vec<String>> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(String::from).collect())
        .collect()
}

#[test]
fn help_lists_subcommands() {
    let out = ecokmap(&["--help"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for sub in [
        "simulate",
        "fixed-points",
        "bifurcate",
        "lyapunov",
        "chaos-grid",
        "phase",
    ] {
        assert!(text.contains(sub), "{sub} missing from help");
        let sub_help = ecokmap(&[sub, "--help"]);
        assert!(sub_help.status.success());
        assert!(String::from_utf8(sub_help.stdout)
            .unwrap()
            .contains("--seed-tolerance"));
    }
}

#[test]
fn usage_errors_exit_1() {
    assert_eq!(ecokmap(&[]).status.code(), Some(1));
    assert_eq!(ecokmap(&["orbit"]).status.code(), Some(1));
    assert_eq!(ecokmap(&["simulate"]).status.code(), Some(1));
    assert_eq!(
        ecokmap(&["simulate", "--config", "x.toml", "--steps", "many"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn config_errors_exit_2_and_name_the_key() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("[model]\nr2 = 5.0\n", "model.r2"),
        ("", "model.r2"),
        ("[model]\nr2 = 3.5\nr7 = 1\n", "line 3"),
        (
            "[model]\nr2 = 3.5\n[budget]\nperiod_tol = -1.0\n",
            "budget.period_tol",
        ),
    ];
    for (text, needle) in cases {
        let config = write_config(dir.path(), text);
        let out = run_in(dir.path(), "simulate", &config, &[]);
        assert_eq!(out.status.code(), Some(2), "{text:?}");
        let err = String::from_utf8(out.stderr).unwrap();
        assert!(err.contains(needle), "{err}");
    }
}

#[test]
fn runtime_errors_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("absent.toml");
    let out = ecokmap(&["simulate", "--config", missing.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));

    // the orbit leaves the bounded region before any Lyapunov step
    let config = write_config(
        dir.path(),
        "[model]\nr2 = 4.0\n[initial]\nx0 = 5.0\ny0 = 5.0\n",
    );
    let out = run_in(dir.path(), "lyapunov", &config, &[]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8(out.stderr).unwrap().contains("escaped"));
}

#[test]
fn fixed_points_lists_attracting_origin() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        "[model]\nr1 = 0.5\nr2 = 0.5\nc2 = 0.0\nc3 = 0.0\n",
    );
    let out = run_in(dir.path(), "fixed-points", &config, &[]);
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(
        stdout
            .lines()
            .any(|l| l.starts_with("Origin") && l.contains("Attracting")),
        "{stdout}"
    );
    let report: toml::Table = fs::read_to_string(dir.path().join("out/fixed_points.toml"))
        .unwrap()
        .parse()
        .unwrap();
    let first = &report["fixed_points"][0];
    assert_eq!(first["family"].as_str(), Some("Origin"));
    assert_eq!(first["classification"].as_str(), Some("Attracting"));
}

#[test]
fn bifurcate_writes_full_grid_and_plot() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "[model]\nr2 = 3.0\n[budget]\nlyap = 2000\n");
    let out = run_in(dir.path(), "bifurcate", &config, &["--plot"]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let csv = dir.path().join("out/bifurcation.csv");
    let header = fs::read_to_string(&csv)
        .unwrap()
        .lines()
        .next()
        .unwrap()
        .to_string();
    assert_eq!(header, "param,n,x,y,period,lambda1");
    let rows = csv_rows(&csv);
    let mut values: Vec<&str> = rows.iter().map(|r| r[0].as_str()).collect();
    values.dedup();
    assert_eq!(values.len(), 241);
    assert_eq!(values[0].parse::<f64>().unwrap(), 2.8);
    assert_eq!(values[240].parse::<f64>().unwrap(), 4.0);

    let svg = fs::read_to_string(dir.path().join("out/bifurcation.svg")).unwrap();
    let doc = roxmltree::Document::parse(&svg).unwrap();
    let points = doc
        .descendants()
        .filter(|n| n.attribute("class") == Some("pt"))
        .count();
    assert_eq!(points, rows.len());
}

#[test]
fn phase_in_settled_regime_is_one_cluster() {
    let dir = tempfile::tempdir().unwrap();
    // interior multipliers 0.5 and 0.027
    let config = write_config(dir.path(), "[model]\nr1 = 2.5\nr2 = 2.5\n");
    let out = run_in(dir.path(), "phase", &config, &["--plot"]);
    assert!(out.status.success());
    assert!(String::from_utf8(out.stdout)
        .unwrap()
        .contains("settled, period 1"));
    let rows = csv_rows(&dir.path().join("out/phase.csv"));
    assert_eq!(rows.len(), 100);
    assert_eq!(rows[0][0], "501");
    assert_eq!(rows[99][0], "600");
    for col in [1, 2] {
        let v: Vec<f64> = rows.iter().map(|r| r[col].parse().unwrap()).collect();
        let mean = v.iter().sum::<f64>() / v.len() as f64;
        let var = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / v.len() as f64;
        assert!(var < 1e-10, "variance {var}");
    }
    let svg = fs::read_to_string(dir.path().join("out/phase.svg")).unwrap();
    let doc = roxmltree::Document::parse(&svg).unwrap();
    let mut centers: Vec<(String, String)> = doc
        .descendants()
        .filter(|n| n.attribute("class") == Some("pt"))
        .map(|n| {
            (
                n.attribute("cx").unwrap().into(),
                n.attribute("cy").unwrap().into(),
            )
        })
        .collect();
    assert_eq!(centers.len(), 100);
    centers.dedup();
    assert_eq!(centers.len(), 1, "expected a single visible cluster");
}

#[test]
fn flags_override_config() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "[model]\nr2 = 3.5\n");
    let out = run_in(
        dir.path(),
        "simulate",
        &config,
        &["--steps", "7", "--transient", "10"],
    );
    assert!(out.status.success());
    let rows = csv_rows(&dir.path().join("out/orbit.csv"));
    let n: Vec<&str> = rows.iter().map(|r| r[0].as_str()).collect();
    assert_eq!(n, ["11", "12", "13", "14", "15", "16", "17"]);

    let out = run_in(
        dir.path(),
        "chaos-grid",
        &config,
        &["--grid", "3", "--steps", "500"],
    );
    assert!(out.status.success());
    assert_eq!(
        csv_rows(&dir.path().join("out/chaos_grid.csv")).len(),
        3 * 3 * 3
    );
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        "[model]\nr2 = 3.95\nc2 = 0.6\n[budget]\nlyap = 1000\n[lyapunov]\niterations = 5000\n[sweep]\npoints = 31\n[grid]\nc2_points = 4\nc3_points = 4\n",
    );
    for sub in [
        "simulate",
        "fixed-points",
        "bifurcate",
        "lyapunov",
        "chaos-grid",
        "phase",
    ] {
        let mut runs = Vec::new();
        for k in 0..2 {
            let out_dir = dir.path().join(format!("{sub}-{k}"));
            let out = ecokmap(&[
                sub,
                "--config",
                &config,
                "--out",
                out_dir.to_str().unwrap(),
                "--plot",
            ]);
            assert!(out.status.success(), "{sub}");
            let mut files: Vec<_> = fs::read_dir(&out_dir)
                .unwrap()
                .map(|e| {
                    let e = e.unwrap();
                    (e.file_name(), fs::read(e.path()).unwrap())
                })
                .collect();
            files.sort();
            runs.push(files);
        }
        assert!(!runs[0].is_empty());
        assert_eq!(runs[0], runs[1], "{sub}");
    }
}

#[test]
fn shipped_configs_are_valid() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let mut n = 0;
    for entry in fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "toml") {
            let config = ecokmap::parse_config(&fs::read_to_string(&path).unwrap())
                .unwrap_or_else(|e| panic!("{}: {e}", path.display()));
            config
                .validate()
                .unwrap_or_else(|e| panic!("{}: {e}", path.display()));
            n += 1;
        }
    }
    assert!(n >= 9);
}
