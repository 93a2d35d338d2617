use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use rbswipt::curve::CurveFile;
use rbswipt_core::{LinkModel, Parameter, Quantity};

fn rbswipt(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rbswipt"))
        .current_dir(dir)
        .env_remove("RBSWIPT_OUT_DIR")
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn report_values(text: &str) -> BTreeMap<String, String> {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .filter_map(|l| l.split_once(" = "))
        .map(|(k, v)| (k.to_string(), v.split(' ').next().unwrap().to_string()))
        .collect()
}

fn tree(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    let mut files = BTreeMap::new();
    for entry in walk(dir) {
        let rel = entry.strip_prefix(dir).unwrap().display().to_string();
        files.insert(rel, fs::read(&entry).unwrap());
    }
    files
}

fn walk(dir: &Path) -> Vec<std::path::PathBuf> {
    let mut out = Vec::new();
    for entry in fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        if path.is_dir() {
            out.extend(walk(&path));
        } else {
            out.push(path);
        }
    }
    out
}

#[test]
fn evaluate_reports_the_library_operating_point_exactly() {
    let dir = tempfile::tempdir().unwrap();
    let out = rbswipt(dir.path(), &["evaluate", "--preset", "paper-2022", "--p-in", "150W"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8(out.stdout).unwrap();
    let file = fs::read_to_string(dir.path().join("rbswipt-out/operating-point.txt")).unwrap();
    assert_eq!(stdout, file);

    let values = report_values(&file);
    let expected = LinkModel::paper_2022().with(Parameter::PIn, 150.0).unwrap().evaluate().unwrap();
    assert_eq!(values["status"], "ok");
    for q in Quantity::ALL {
        let got: f64 = values[q.name()].parse().unwrap();
        assert_eq!(got, expected.get(*q), "{}", q.name());
    }
}

#[test]
fn overrides_and_config_files_change_the_model() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("link.conf"), "preset = paper-2022\n[gain]\nl = 0.1 um\n[pump]\np_in = 100 W\n").unwrap();
    let from_file = rbswipt(dir.path(), &["evaluate", "--config", "link.conf", "--name", "a"]);
    assert_eq!(code(&from_file), 0);
    let from_flags = rbswipt(dir.path(), &["evaluate", "--set", "l=0.1 um", "--p-in", "100 W", "--name", "b"]);
    assert_eq!(code(&from_flags), 0);
    let a = report_values(&fs::read_to_string(dir.path().join("rbswipt-out/a.txt")).unwrap());
    let b = report_values(&fs::read_to_string(dir.path().join("rbswipt-out/b.txt")).unwrap());
    assert_eq!(a, b);
    let expected = LinkModel::paper_2022()
        .with(Parameter::L, 0.1e-6)
        .and_then(|m| m.with(Parameter::PIn, 100.0))
        .unwrap()
        .evaluate()
        .unwrap();
    assert_eq!(a["p_beam"].parse::<f64>().unwrap(), expected.get(Quantity::PBeam));
}

#[test]
fn reproduce_figure_9_writes_curve_and_plot_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = rbswipt(dir.path(), &["reproduce-figure", "9", "--points", "11"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let csv = fs::read_to_string(dir.path().join("rbswipt-out/fig9.csv")).unwrap();
    let curve = CurveFile::parse(&csv).unwrap();
    let names: Vec<&str> = curve.columns.iter().map(|c| c.name.as_str()).collect();
    assert_eq!(names, ["mu", "c_tilde", "p_e_out", "eta_e", "p_e_out_raw", "status"]);
    assert_eq!(curve.rows.len(), 11);
    assert_eq!(curve.scenario, "fig9");
    let plot: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("rbswipt-out/fig9.plot.json")).unwrap()).unwrap();
    assert_eq!(plot["data"], "fig9.csv");
}

#[test]
fn output_directory_comes_from_flag_or_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_rbswipt"))
        .current_dir(dir.path())
        .env("RBSWIPT_OUT_DIR", "from-env")
        .args(["evaluate"])
        .output()
        .unwrap();
    assert_eq!(code(&out), 0);
    assert!(dir.path().join("from-env/operating-point.txt").exists());
    assert!(!dir.path().join("rbswipt-out").exists());

    let out = rbswipt(dir.path(), &["--out", "from-flag", "evaluate"]);
    assert_eq!(code(&out), 0);
    assert!(dir.path().join("from-flag/operating-point.txt").exists());
}

#[test]
fn validate_accepts_presets_and_writes_nothing() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("ok.conf"), "[pump]\np_in = 90 W\n").unwrap();
    let before = tree(dir.path());
    let out = rbswipt(dir.path(), &["validate"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
    let out = rbswipt(dir.path(), &["validate", "ok.conf"]);
    assert_eq!(code(&out), 0);
    assert_eq!(tree(dir.path()), before);
}

#[test]
fn exit_codes_distinguish_failure_kinds() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("bad.conf"), "[geometry]\nr2 = 1.2\n").unwrap();
    fs::write(dir.path().join("nounit.conf"), "[geometry]\nd3 = 10\n").unwrap();

    let out = rbswipt(dir.path(), &["validate", "bad.conf"]);
    assert_eq!(code(&out), 3);
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("line 2") && stdout.contains("geometry.r2"), "{stdout}");
    assert_eq!(code(&rbswipt(dir.path(), &["validate", "nounit.conf"])), 3);
    assert_eq!(code(&rbswipt(dir.path(), &["evaluate", "--set", "colour=blue"])), 3);
    assert_eq!(code(&rbswipt(dir.path(), &["evaluate", "--preset", "nope"])), 3);

    assert_eq!(code(&rbswipt(dir.path(), &["evaluate", "--set", "fr2=1 m"])), 4);

    let out = rbswipt(
        dir.path(),
        &["optimize", "--set", "fr2=1 m", "--axis", "r2=0.8:0.99:5", "--objective", "p_beam"],
    );
    assert_eq!(code(&out), 5);

    assert_eq!(code(&rbswipt(dir.path(), &["frobnicate"])), 2);
    assert_eq!(code(&rbswipt(dir.path(), &["sweep", "--axis", "d3=2:10"])), 2);
    assert_eq!(code(&rbswipt(dir.path(), &["--help"])), 0);
    assert_eq!(code(&rbswipt(dir.path(), &["evaluate", "--config", "missing.conf"])), 1);
}

#[test]
fn all_unstable_sweep_succeeds_with_a_warning() {
    let dir = tempfile::tempdir().unwrap();
    let out = rbswipt(dir.path(), &["sweep", "--set", "fr2=1 m", "--axis", "d3=2 m:10 m:5"]);
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8_lossy(&out.stderr).contains("unstable"));
    let curve = CurveFile::parse(&fs::read_to_string(dir.path().join("rbswipt-out/sweep.csv")).unwrap()).unwrap();
    assert_eq!(curve.rows.len(), 5);
    let status = curve.column("status").unwrap();
    assert!(status.iter().all(|c| c.text() == Some("unstable")));
}

#[test]
fn sweep_reduction_and_optimum_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = rbswipt(
        dir.path(),
        &[
            "sweep", "--axis", "m=1:14:14", "--axis", "d3=2m:10m:17", "--reduce-max", "omega_g", "--over", "d3",
            "--name", "spot",
        ],
    );
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let curve = CurveFile::parse(&fs::read_to_string(dir.path().join("rbswipt-out/spot.csv")).unwrap()).unwrap();
    let names: Vec<&str> = curve.columns.iter().map(|c| c.name.as_str()).collect();
    assert_eq!(names, ["m", "omega_g_max", "d3_at_max", "status"]);
    assert_eq!(curve.rows.len(), 14);

    let out = rbswipt(
        dir.path(),
        &["optimize", "--set", "l=0.1um", "--p-in", "100W", "--axis", "r2=0.8:0.999:41", "--objective", "p_beam"],
    );
    assert_eq!(code(&out), 2, "optimize takes no --p-in");
    let out = rbswipt(
        dir.path(),
        &[
            "optimize", "--set", "l=0.1um", "--set", "p_in=100W", "--axis", "r2=0.8:0.999:41", "--objective",
            "p_beam",
        ],
    );
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let values = report_values(&fs::read_to_string(dir.path().join("rbswipt-out/optimum.txt")).unwrap());
    let r2: f64 = values["geometry.r2"].parse().unwrap();
    assert!((0.88..=0.97).contains(&r2), "{r2}");
}

#[test]
fn figure_output_is_byte_identical_across_runs_and_worker_counts() {
    let dir = tempfile::tempdir().unwrap();
    for (out, workers) in [("a", "1"), ("b", "4"), ("c", "0")] {
        let run = rbswipt(dir.path(), &["--out", out, "reproduce-figure", "all", "--points", "13", "--workers", workers]);
        assert_eq!(code(&run), 0, "{}", String::from_utf8_lossy(&run.stderr));
    }
    let a = tree(&dir.path().join("a"));
    assert_eq!(a.len(), 14);
    assert_eq!(a, tree(&dir.path().join("b")));
    assert_eq!(a, tree(&dir.path().join("c")));
}

#[test]
fn presets_lists_and_prints() {
    let dir = tempfile::tempdir().unwrap();
    let out = rbswipt(dir.path(), &["presets"]);
    assert_eq!(code(&out), 0);
    let listing = String::from_utf8(out.stdout).unwrap();
    for name in ["paper-2022", "fig5a", "fig10"] {
        assert!(listing.contains(name));
    }
    let out = rbswipt(dir.path(), &["presets", "paper-2022"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), rbswipt::presets::PAPER_2022);
    assert_eq!(code(&rbswipt(dir.path(), &["presets", "nope"])), 3);
}
