use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use nls_lab::snapshot::read_snapshot;

fn nls_lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nls-lab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_config(dir: &Path, text: &str) -> String {
    let path = dir.join("case.cfg");
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_owned()
}

fn column(csv_text: &str, name: &str) -> Vec<f64> {
    let mut rdr = csv::Reader::from_reader(csv_text.as_bytes());
    let idx = rdr.headers().unwrap().iter().position(|h| h == name).unwrap();
    rdr.records().map(|r| r.unwrap()[idx].parse().unwrap()).collect()
}

const SMALL: &str = "R=16\nn=256\nT=0.2\ndt=1e-2\nsave_every=5\nic.amplitude=1.5\n";

#[test]
fn zero_time_run_writes_one_row() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "R=16\nn=128\nT=0\n");
    let out = dir.path().join("out");
    let o = nls_lab(&["run", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let csv_text = fs::read_to_string(out.join("timeseries.csv")).unwrap();
    assert_eq!(csv_text.lines().count(), 2);
    assert_eq!(column(&csv_text, "t"), vec![0.0]);
}

#[test]
fn runs_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SMALL);
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for out in [&a, &b] {
        let o = nls_lab(&["run", "--config", &cfg, "--out", out.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
    }
    for name in ["timeseries.csv", "report.json", "final.snap"] {
        assert_eq!(fs::read(a.join(name)).unwrap(), fs::read(b.join(name)).unwrap(), "{name}");
    }
    let csv_text = fs::read_to_string(a.join("timeseries.csv")).unwrap();
    let t = column(&csv_text, "t");
    assert_eq!(t.len(), 5);
    assert!((t[4] - 0.2).abs() < 1e-12);
    let cum = column(&csv_text, "interaction_L4_cum");
    assert!(cum.windows(2).all(|w| w[1] >= w[0]));
    let mass = column(&csv_text, "mass_u");
    assert!((mass[4] - mass[0]).abs() <= 1e-12 * mass[0]);

    let report: serde_json::Value = serde_json::from_str(&fs::read_to_string(a.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["status"], "complete");
    let snap = read_snapshot(&a.join("final.snap")).unwrap();
    assert!((snap.t() - 0.2).abs() < 1e-12);
}

#[test]
fn periodic_run_reports_morawetz() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "backend=periodic3d\nL=6\nn=8\nT=0.02\ndt=1e-2\nsave_every=1\nic.type=boosted_gaussian\nic.kick=0.5,0,0\n",
    );
    let out = dir.path().join("out");
    let o = nls_lab(&["run", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let csv_text = fs::read_to_string(out.join("timeseries.csv")).unwrap();
    assert_eq!(column(&csv_text, "morawetz_M").len(), 3);
}

#[test]
fn snapshot_commands() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "R=8\nn=64\nT=0.05\ndt=1e-2\n");
    let out = dir.path().join("out");
    nls_lab(&["run", "--config", &cfg, "--out", out.to_str().unwrap()]);
    let snap = out.join("final.snap");
    let info = nls_lab(&["snapshot", "info", snap.to_str().unwrap()]);
    assert_eq!(info.status.code(), Some(0));
    let text = String::from_utf8(info.stdout).unwrap();
    assert!(text.contains("payload: ok") && text.contains("samples per component: 63"));
    let dump = nls_lab(&["snapshot", "dump", snap.to_str().unwrap()]);
    assert_eq!(String::from_utf8(dump.stdout).unwrap().lines().count(), 64);

    let mut bytes = fs::read(&snap).unwrap();
    let last = bytes.len() - 1;
    bytes[last] ^= 1;
    fs::write(&snap, bytes).unwrap();
    let bad = nls_lab(&["snapshot", "info", snap.to_str().unwrap()]);
    assert_ne!(bad.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("checksum"));
}

#[test]
fn sweeps_write_json() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "R=16\nn=256\nT=0.05\ndt=1e-2\nic.width=0.5\n");
    let out = dir.path().join("out");
    let o = nls_lab(&["sweep", "--config", &cfg, "--axis", "N", "--values", "1,2,4", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(out.join("sweep_N.json")).unwrap()).unwrap();
    assert_eq!(v["axis"], "N");
    assert_eq!(v["rows"].as_array().unwrap().len(), 3);
}

#[test]
fn usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SMALL);
    let dup = nls_lab(&["sweep", "--config", &cfg, "--axis", "N", "--values", "4,8,4"]);
    assert_eq!(dup.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&dup.stderr).contains("duplicate"));
    assert_eq!(nls_lab(&["verify", "--suite", "bogus"]).status.code(), Some(2));
    assert_eq!(nls_lab(&["frobnicate"]).status.code(), Some(2));

    let bad = write_config(dir.path(), "R=16\nn=256\nmystery=1\n");
    let o = nls_lab(&["run", "--config", &bad]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));
}

#[test]
fn spectral_suite_passes() {
    let o = nls_lab(&["verify", "--suite", "spectral"]);
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(o.status.code(), Some(0), "{text}");
    assert!(text.contains("3 of 3 criteria passed"));
}
