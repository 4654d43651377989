use std::fs;
use std::path::Path;

use equips_cli::{run, EXIT_OK, EXIT_RUN_FAILURE, EXIT_USAGE};

fn equips(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let code = run(
        std::iter::once("equips").chain(args.iter().copied()),
        &mut out,
    );
    (code, String::from_utf8(out).unwrap())
}

fn write_config(dir: &Path, text: &str) -> String {
    let path = dir.join("case.cfg");
    fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

const SMALL: &str = "CHANNEL_CELLS= 32\nUSING_UQ= YES\nUQ_COMPONENT= 1\nUQ_PERMUTE= NO\nUQ_URLX= 0.1\nUQ_DELTA_B= 1.0\n";

#[test]
fn usage_errors() {
    assert_eq!(equips(&[]).0, EXIT_USAGE);
    assert_eq!(equips(&["uncertainty"]).0, EXIT_USAGE);
    assert_eq!(
        equips(&["uncertainty", "-f", "x.cfg", "-u", "1.5"]).0,
        EXIT_USAGE
    );
    assert_eq!(
        equips(&["uncertainty", "-f", "x.cfg", "-b", "2"]).0,
        EXIT_USAGE
    );
    assert_eq!(
        equips(&["uncertainty", "-f", "x.cfg", "-n", "0"]).0,
        EXIT_USAGE
    );
    assert_eq!(equips(&["--help"]).0, EXIT_OK);
}

#[test]
fn unreadable_and_malformed_configs() {
    let dir = tempfile::tempdir().unwrap();
    let root = dir.path().join("out");
    let root = root.to_str().unwrap();
    let missing = dir.path().join("none.cfg");
    assert_eq!(
        equips(&[
            "uncertainty",
            "-f",
            missing.to_str().unwrap(),
            "--output-root",
            root
        ])
        .0,
        EXIT_USAGE
    );
    let bad = write_config(dir.path(), "UQ_COMPONENT= 5\n");
    assert_eq!(
        equips(&["uncertainty", "-f", &bad, "--output-root", root]).0,
        EXIT_USAGE
    );
    let bad = write_config(dir.path(), "CHANNEL_CELLS= many\n");
    assert_eq!(
        equips(&["uncertainty", "-f", &bad, "--output-root", root]).0,
        EXIT_USAGE
    );
    assert!(!Path::new(root).exists());
}

#[test]
fn single_requires_a_perturbation() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "CHANNEL_CELLS= 32\nUSING_UQ= NO\n");
    let root = dir.path().join("out");
    assert_eq!(
        equips(&[
            "single",
            "-f",
            &cfg,
            "--output-root",
            root.to_str().unwrap()
        ])
        .0,
        EXIT_USAGE
    );
}

#[test]
fn single_flags_override_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "CHANNEL_CELLS= 32\nUSING_UQ= YES\nUQ_COMPONENT= 2\nUQ_PERMUTE= YES\nUQ_URLX= 0.1\nUQ_DELTA_B= 1.0\n",
    );
    let root = dir.path().join("out");
    let (code, out) = equips(&[
        "single",
        "-f",
        &cfg,
        "-u",
        "0.4",
        "-b",
        "0.5",
        "--output-root",
        root.to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_OK, "{out}");
    let written = fs::read_to_string(root.join("p1c2").join("run.cfg")).unwrap();
    assert!(written.contains("UQ_URLX= 0.4\n"));
    assert!(written.contains("UQ_DELTA_B= 0.5\n"));
    assert!(written.contains("UQ_COMPONENT= 2\n"));
    assert!(root.join("p1c2").join("solution.dat").is_file());
}

#[test]
fn uncertainty_then_aggregate() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SMALL);
    let root = dir.path().join("out");
    let root_s = root.to_str().unwrap();
    let (code, out) = equips(&[
        "uncertainty",
        "-f",
        &cfg,
        "-n",
        "3",
        "-b",
        "0.8",
        "--output-root",
        root_s,
    ]);
    assert_eq!(code, EXIT_OK, "{out}");
    for name in ["baseline", "1c", "2c", "3c", "p1c1", "p1c2"] {
        assert!(root.join(name).join("solution.dat").is_file(), "{name}");
        if name != "baseline" {
            let text = fs::read_to_string(root.join(name).join("run.cfg")).unwrap();
            assert!(text.contains("UQ_DELTA_B= 0.8\n"), "{name}");
            assert!(text.starts_with("CHANNEL_CELLS= 32\n"));
        }
    }
    let report = root.clone();
    for f in [
        "report.json",
        "intervals.csv",
        "envelope_velocity.csv",
        "intervals.dat",
    ] {
        assert!(report.join(f).is_file(), "{f}");
    }
    let first = fs::read(report.join("report.json")).unwrap();
    let csv = fs::read(report.join("envelope_velocity.csv")).unwrap();

    let (code, _) = equips(&["aggregate", "--output-root", root_s]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(fs::read(report.join("report.json")).unwrap(), first);
    assert_eq!(fs::read(report.join("envelope_velocity.csv")).unwrap(), csv);

    let doc: serde_json::Value = serde_json::from_slice(&first).unwrap();
    assert_eq!(doc["runs"].as_array().unwrap().len(), 6);
}

#[test]
fn no_baseline_reuses_existing_export() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SMALL);
    let root = dir.path().join("out");
    let root_s = root.to_str().unwrap();
    assert_eq!(
        equips(&["uncertainty", "-f", &cfg, "--output-root", root_s]).0,
        EXIT_OK
    );
    fs::remove_file(root.join("report.json")).unwrap();
    fs::remove_file(root.join("intervals.csv")).unwrap();
    let (code, _) = equips(&[
        "uncertainty",
        "-f",
        &cfg,
        "--no-baseline",
        "--format",
        "json",
        "--output-root",
        root_s,
    ]);
    assert_eq!(code, EXIT_OK);
    assert!(root.join("report.json").is_file());
    assert!(!root.join("intervals.csv").exists());
}

#[test]
fn aggregate_needs_runs() {
    let dir = tempfile::tempdir().unwrap();
    let (code, _) = equips(&["aggregate", "--output-root", dir.path().to_str().unwrap()]);
    assert_eq!(code, EXIT_USAGE);
    let (code, _) = equips(&[
        "aggregate",
        "--output-root",
        dir.path().join("absent").to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_USAGE);
}

#[test]
fn failing_external_solver() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SMALL);
    let root = dir.path().join("out");
    let (code, out) = equips(&[
        "uncertainty",
        "-f",
        &cfg,
        "--solver-cmd",
        "sh -c 'exit 3' {config}",
        "--output-root",
        root.to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_RUN_FAILURE);
    assert_eq!(out.matches("FAILED").count(), 6);
    assert!(!root.join("report.json").exists());
}

#[test]
fn template_without_config_placeholder() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SMALL);
    let (code, _) = equips(&[
        "uncertainty",
        "-f",
        &cfg,
        "--solver-cmd",
        "true",
        "--output-root",
        dir.path().join("out").to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_USAGE);
}

#[test]
fn demo_quick() {
    let dir = tempfile::tempdir().unwrap();
    let root = dir.path().join("demo");
    let (code, out) = equips(&[
        "demo",
        "--quick",
        "-n",
        "2",
        "--output-root",
        root.to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_OK, "{out}");
    assert!(out.contains("skin_friction interval"));
    assert!(root.join("report.json").is_file());
    assert!(root.join("envelope_velocity.dat").is_file());
}
