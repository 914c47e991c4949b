use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_slowdec"));
    c.env_remove("SLOWDEC_OUT");
    c
}

fn scratch(name: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("slowdec-cli-{name}-{}", std::process::id()));
    let _ = fs::remove_dir_all(&d);
    fs::create_dir_all(&d).unwrap();
    d
}

fn write_config(dir: &Path, text: &str) -> PathBuf {
    let p = dir.join("config.json");
    fs::write(&p, text).unwrap();
    p
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

const DIST: &str = r#"{"schema_version": 1, "experiment": "dist", "seed": 5, "params": {
    "model": {"id": "corner_growth_step"}, "kappa": 1, "t": 40, "samples": 50, "reference": {"kind": "gue"}}}"#;

#[test]
fn classify_reports_case_direction_and_shape() {
    let dir = scratch("classify");
    let cfg = write_config(
        &dir,
        r#"{"schema_version": 1, "experiment": "classify",
            "params": {"pi": 0.6666666666666666, "eta": 0.6666666666666666, "kappa": 1}}"#,
    );
    let o = bin()
        .args(["classify", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&dir)
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(
        stdout(&o).contains("Case1, u=(1, 1), ℓ_HL=4"),
        "{}",
        stdout(&o)
    );
}

#[test]
fn missing_key_exits_2_and_names_it() {
    let dir = scratch("missing");
    let cfg = write_config(
        &dir,
        r#"{"schema_version": 1, "experiment": "dist", "seed": 1,
            "params": {"kappa": 1, "t": 40, "samples": 5, "reference": {"kind": "gue"}}}"#,
    );
    let o = bin()
        .args(["dist", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&dir)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(
        stderr(&o).contains("params") && stderr(&o).contains("model"),
        "{}",
        stderr(&o)
    );
}

#[test]
fn unknown_suite_exits_2() {
    let o = bin()
        .args(["verify", "--suite", "nightly"])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn invalid_parameters_exit_3() {
    let dir = scratch("domain");
    let cfg = write_config(
        &dir,
        r#"{"schema_version": 1, "experiment": "pasep", "seed": 1, "params": {"p": 0.75,
            "ic": {"kind": "step"}, "v": 0, "u": 0, "nu": 0.5, "t_grid": [10], "m_grid": [1],
            "samples": 2, "margin": 0.5}}"#,
    );
    let o = bin()
        .args(["pasep", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&dir)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
}

#[test]
fn env_var_sets_output_and_files_are_stamped() {
    let dir = scratch("env");
    let cfg = write_config(&dir, DIST);
    let out = dir.join("from-env");
    let o = bin()
        .args(["dist", "--config"])
        .arg(&cfg)
        .env("SLOWDEC_OUT", &out)
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", stderr(&o));
    let runs: Vec<_> = fs::read_dir(&out).unwrap().collect();
    assert_eq!(runs.len(), 1);
    let run = runs.into_iter().next().unwrap().unwrap().path();
    for f in ["dist.csv", "dist_samples.csv", "dist.json"] {
        let text = fs::read_to_string(run.join(f)).unwrap();
        assert!(text.contains("config_hash"), "{f}");
        assert!(
            text.contains("seed=5") || text.contains("\"seed\": 5"),
            "{f}"
        );
    }
}

#[test]
fn seed_flag_changes_the_run_and_repeats_exactly() {
    let dir = scratch("seed");
    let cfg = write_config(&dir, DIST);
    let run = |seed: &str, out: &str| {
        let o = bin()
            .args(["dist", "--config"])
            .arg(&cfg)
            .args(["--seed", seed, "--workers", "2", "--out"])
            .arg(dir.join(out))
            .output()
            .unwrap();
        assert!(o.status.success(), "{}", stderr(&o));
        let run = fs::read_dir(dir.join(out))
            .unwrap()
            .next()
            .unwrap()
            .unwrap()
            .path();
        fs::read(run.join("dist_samples.csv")).unwrap()
    };
    let a = run("9", "a");
    let b = run("9", "b");
    let c = run("10", "c");
    assert_eq!(a, b);
    assert_ne!(a, c);
}
