use std::path::Path;
use std::process::{Command, Output};

use weno_tvd::scenarios::SCENARIO_NAMES;
use weno_tvd_cli::output::read_snapshot;

fn weno(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_weno-tvd"))
        .args(args)
        .env_remove("WENO_TVD_OUT")
        .output()
        .expect("binary runs")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn summary(dir: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(dir.join("summary.json")).unwrap()).unwrap()
}

#[test]
fn lists_every_scenario() {
    let o = weno(&["list-scenarios"]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    for name in SCENARIO_NAMES {
        assert!(text.contains(name), "{name} missing");
    }
}

#[test]
fn config_errors_exit_1() {
    let o = weno(&["run", "no-such-case"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("unknown scenario"));

    let o = weno(&["run", "swirl", "--n", "200", "--omega", "0.75", "--cfl", "0.17"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("|(-1+omega)/(2 omega)|"), "{}", stderr(&o));

    let o = weno(&["run", "const-advection", "--viscosity", "75"]);
    assert_eq!(o.status.code(), Some(1));

    let o = weno(&["run", "const-advection", "--n", "2"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn solver_failure_exits_2_with_context() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = weno(&[
        "run", "bubble-stable", "--dx", "2500", "--omega", "0.1", "--cfl", "0.99", "--end-time", "200", "--out", out,
    ]);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
    let err = stderr(&o);
    assert!(err.contains("after step") && err.contains("at t ="), "{err}");
    assert!(dir.path().join("energy.csv").exists());
}

#[test]
fn advection_run_writes_snapshots_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = weno(&["run", "const-advection", "--n", "20", "--end-time", "0.5", "--snapshots", "0.25", "--out", out]);
    assert!(o.status.success(), "{}", stderr(&o));
    for name in ["snapshot_000_t0.csv", "snapshot_001_t0.25.csv", "snapshot_002_t0.5.csv"] {
        assert!(dir.path().join(name).exists(), "{name}");
    }
    let snap = read_snapshot(&dir.path().join("snapshot_002_t0.5.csv")).unwrap();
    assert_eq!((snap.nx, snap.nz, snap.t), (20, 20, 0.5));
    assert_eq!(snap.rows.len(), 400);
    let s = summary(dir.path());
    assert_eq!(s["scenario"], "const-advection");
    assert!(s["errors"]["linf"].as_f64().unwrap() > 0.0);
    assert_eq!(s["outputs"].as_array().unwrap().len(), 3);
}

#[test]
fn identical_configs_give_identical_files() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for d in [&a, &b] {
        let o = weno(&["run", "swirl", "--n", "16", "--end-time", "0.3", "--out", d.path().to_str().unwrap()]);
        assert!(o.status.success());
    }
    for name in ["snapshot_001_t0.3.csv", "summary.json"] {
        let x = std::fs::read(a.path().join(name)).unwrap();
        let y = std::fs::read(b.path().join(name)).unwrap();
        assert!(x == y, "{name} differs");
    }
}

#[test]
fn output_dir_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_weno-tvd"))
        .args(["run", "const-advection", "--n", "8", "--end-time", "0.1"])
        .env("WENO_TVD_OUT", dir.path())
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(dir.path().join("summary.json").exists());
}

#[test]
fn doswell_writes_cross_section() {
    let dir = tempfile::tempdir().unwrap();
    let o = weno(&["run", "doswell-sharp", "--n", "20", "--end-time", "0.2", "--out", dir.path().to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = std::fs::read_to_string(dir.path().join("cross_section_x0.csv")).unwrap();
    assert_eq!(text.lines().next(), Some("z,q"));
    assert_eq!(text.lines().count(), 21);
}

#[test]
fn atmosphere_run_writes_energy_and_derived_columns() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = weno(&[
        "run", "density-current", "--dx", "1000", "--end-time", "30", "--energy-stride", "2", "--out", out,
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let energy = std::fs::read_to_string(dir.path().join("energy.csv")).unwrap();
    let mut lines = energy.lines();
    assert_eq!(lines.next(), Some("t,E_int,E_kin,E_pot,E_total"));
    let first: Vec<f64> = lines.next().unwrap().split(',').map(|v| v.parse().unwrap()).collect();
    assert_eq!(first[0], 0.0);
    assert!((first[4] - 1.0).abs() < 1e-15);
    assert!((first[1] + first[2] + first[3] - first[4]).abs() < 1e-12);

    let snap = read_snapshot(&dir.path().join("snapshot_000_t0.csv")).unwrap();
    assert_eq!(snap.columns, ["rho", "rho_u", "rho_w", "rho_theta", "theta_prime", "u", "w", "P"]);
    let s = summary(dir.path());
    let last = s["outputs"].as_array().unwrap().last().unwrap().clone();
    assert!(last["front_location"].is_number());
    for key in ["theta_prime", "u", "w"] {
        assert!(last["extrema"][key]["min"].is_number());
    }
    assert!(s["max_energy_drift"].as_f64().unwrap() < 1e-3);
}

#[test]
fn vtk_format() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = weno(&["run", "const-advection", "--n", "8", "--end-time", "0.1", "--format", "vtk", "--out", out]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(dir.path().join("snapshot_001_t0.1.vtk")).unwrap();
    assert!(text.starts_with("# vtk DataFile"));
}

#[test]
fn converge_table_and_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = weno(&["converge", "const-advection", "--ns", "20,40", "--end-time", "0.5", "--out", out]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = std::fs::read_to_string(dir.path().join("convergence.csv")).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 3);
    let first: Vec<&str> = lines[1].split(',').collect();
    assert_eq!((first[0], first[2], first[4]), ("20", "", ""));
    let second: Vec<&str> = lines[2].split(',').collect();
    assert!(second[2].parse::<f64>().unwrap() > 1.0);
    assert!(second[4].parse::<f64>().unwrap() > 1.0);

    let o = weno(&["converge", "bubble-neutral", "--out", out]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    let out = dir.path().join("out");
    std::fs::write(
        &cfg,
        format!("scenario = \"const-advection\"\nn = 8\nend_time = 0.2\noutput_dir = {:?}\n", out.to_str().unwrap()),
    )
    .unwrap();
    let o = weno(&["run", "--config", cfg.to_str().unwrap(), "--n", "12"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(summary(&out)["nx"], 12);

    std::fs::write(&cfg, "scenario = \"swirl\"\nbogus = 1\n").unwrap();
    let o = weno(&["run", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}
