use std::process::{Command, Output};

use serde_json::Value;

const SCARF: &[&str] = &["--family", "scarf", "--m", "1", "--zeta", "3", "--eta-r", "0", "--eta-i", "0.5"];

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dirac-spectra")).args(args).output().unwrap()
}

fn with(command: &str, base: &[&str], extra: &[&str]) -> Vec<String> {
    std::iter::once(command).chain(base.iter().copied()).chain(extra.iter().copied()).map(String::from).collect()
}

fn run_owned(args: Vec<String>) -> Output {
    let refs: Vec<&str> = args.iter().map(String::as_str).collect();
    run(&refs)
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn spectrum_lists_scarf_levels() {
    let out = run_owned(with("spectrum", SCARF, &["--stable-output"]));
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    let energies: Vec<f64> = doc["levels"].as_array().unwrap().iter().map(|l| l["energy"].as_f64().unwrap()).collect();
    assert_eq!(energies.len(), 3);
    assert!((energies[1] - 6f64.sqrt()).abs() < 1e-14);
    assert!(doc.get("meta").is_none());
}

#[test]
fn metadata_is_attached_unless_stable() {
    let doc = json(&run_owned(with("spectrum", SCARF, &[])));
    assert!(doc["meta"]["version"].is_string());
}

#[test]
fn wavefunction_csv_covers_the_default_grid() {
    let out = run_owned(with("wavefunction", SCARF, &["--n", "0"]));
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x_re,x_im,phi_re,phi_im"));
    assert_eq!(lines.count(), 2401);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["spectrum", "--family", "morse", "--m", "1"]).status.code(), Some(2));
    assert_eq!(run(&["spectrum", "--family", "scarf", "--zeta", "3"]).status.code(), Some(2));
    let sweep = with("sweep", SCARF, &["--param", "zeta", "--from", "1", "--to", "2", "--steps", "0"]);
    assert_eq!(run_owned(sweep).status.code(), Some(2));
    let empty = ["spectrum", "--family", "pt", "--m", "1", "--zeta", "0.5", "--eta", "3", "--epsilon", "0.3"];
    assert_eq!(run(&empty).status.code(), Some(3));
    let rm =
        ["wavefunction", "--family", "rmii", "--m", "1", "--zeta", "2", "--eta-r", "1", "--eta-i", "0.5", "--n", "0"];
    assert_eq!(run(&rm).status.code(), Some(4));
    let strict = with("verify", SCARF, &["--tol-rel", "1e-12", "--stable-output"]);
    let out = run_owned(strict);
    assert_eq!(out.status.code(), Some(5));
    assert_eq!(json(&out)["levels"].as_array().unwrap().len(), 3);
}

#[test]
fn verify_passes_at_default_tolerance() {
    let out = run_owned(with("verify", SCARF, &["--stable-output", "--h", "0.02"]));
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let doc = json(&out);
    assert_eq!(doc["solver"], "tridiagonal");
    assert!(doc["levels"].as_array().unwrap().iter().all(|l| l["matched"] == true));
}

// One more bound level appears each time ζ passes an integer.
#[test]
fn zeta_sweep_adds_levels_at_integers() {
    let out = run_owned(with("sweep", SCARF, &["--param", "zeta", "--from", "0.6", "--to", "6", "--steps", "27"]));
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("zeta,level_count,min_energy,max_energy,all_real"));
    let rows: Vec<(f64, usize)> = lines
        .map(|l| {
            let cells: Vec<&str> = l.split(',').collect();
            (cells[0].parse().unwrap(), cells[1].parse().unwrap())
        })
        .collect();
    assert_eq!(rows.len(), 28);
    for (zeta, count) in rows {
        assert_eq!(count, zeta.ceil() as usize, "zeta = {zeta}");
    }
}

#[test]
fn epsilon_sweep_keeps_reality_fixed() {
    let pt = ["--family", "pt", "--m", "3", "--zeta", "3", "--eta", "1", "--epsilon", "0.3"];
    let out = run_owned(with(
        "sweep",
        &pt,
        &["--param", "epsilon", "--from", "0.1", "--to", "1.4", "--steps", "13", "--format", "json", "--stable-output"],
    ));
    assert_eq!(out.status.code(), Some(0));
    let rows = json(&out)["rows"].as_array().unwrap().clone();
    assert_eq!(rows.len(), 14);
    assert!(rows.iter().all(|r| r["all_real"] == rows[0]["all_real"] && r["level_count"] == rows[0]["level_count"]));
}

#[test]
fn output_feeds_back_as_config() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("first.json");
    let out = run_owned(with("spectrum", SCARF, &["--stable-output", "--output", first.to_str().unwrap()]));
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let again = run(&["spectrum", "--config", first.to_str().unwrap(), "--stable-output"]);
    assert_eq!(again.stdout, std::fs::read(&first).unwrap());
    let shifted = run(&["spectrum", "--config", first.to_str().unwrap(), "--zeta", "2", "--stable-output"]);
    assert_eq!(json(&shifted)["levels"].as_array().unwrap().len(), 2);
}

#[test]
fn csv_is_rejected_where_unsupported() {
    assert_eq!(run_owned(with("spectrum", SCARF, &["--format", "csv"])).status.code(), Some(2));
}
