//! End-to-end tests of the `omqm` binary: exit codes, output files, config
//! precedence, and determinism, all through the public command surface.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::tempdir;

fn omqm() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_omqm"));
    // Isolate tests from any ambient configuration.
    cmd.env_remove("OMQM_CONFIG");
    cmd
}

fn stdout_of(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("stdout is UTF-8")
}

fn assert_status(output: &Output, code: i32) {
    assert_eq!(
        output.status.code(),
        Some(code),
        "stdout:\n{}\nstderr:\n{}",
        stdout_of(output),
        String::from_utf8_lossy(&output.stderr)
    );
}

#[test]
fn collapse_both_paths_agree_and_write_outputs() {
    let dir = tempdir().unwrap();
    let out = omqm()
        .args(["collapse", "--l1", "7", "--n", "2", "--path", "both"])
        .arg("--out-dir")
        .arg(dir.path())
        .output()
        .unwrap();
    assert_status(&out, 0);
    let parsed: Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    let records = parsed.as_array().expect("both paths emit an array");
    assert_eq!(records.len(), 2);
    for record in records {
        assert_eq!(record["k_star"], 1, "l1 = 7, n = 2 collapses to k* = 1");
    }
    assert_eq!(records[0]["path"], "key-cylinder");
    assert_eq!(records[1]["path"], "zeta-stretch");
    assert_eq!(records[0]["phase_re"], records[1]["phase_re"]);
    assert_eq!(records[1]["rotation_trace"].as_array().unwrap().len(), 0);

    let file: Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("collapse.json")).unwrap())
            .unwrap();
    assert_eq!(&file, &parsed, "file and stdout carry the same document");

    let manifest: Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("run-manifest.json")).unwrap())
            .unwrap();
    assert_eq!(manifest["command"], "collapse");
    assert_eq!(manifest["resolved"]["collapse.l1"], 7);
    assert_eq!(manifest["resolved"]["collapse.path"], "both");
    assert!(manifest["outputs"]
        .as_array()
        .unwrap()
        .iter()
        .any(|v| v == "collapse.json"));
}

#[test]
fn collapse_single_path_emits_one_object() {
    let dir = tempdir().unwrap();
    let out = omqm()
        .args(["collapse", "--l1", "30", "--n", "8", "--path", "key"])
        .arg("--out-dir")
        .arg(dir.path())
        .output()
        .unwrap();
    assert_status(&out, 0);
    let parsed: Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert!(parsed.is_object());
    assert_eq!(parsed["path"], "key-cylinder");
    // n = 8 reduces mod 16: 30 mod 16 = 14, so k* = 7.
    assert_eq!(parsed["k_star"], 7);
}

#[test]
fn usage_errors_exit_two_and_help_exits_zero() {
    let unknown = omqm().args(["collapse", "--bogus"]).output().unwrap();
    assert_status(&unknown, 2);
    let missing = omqm().args(["collapse", "--n", "2"]).output().unwrap();
    assert_status(&missing, 2);
    let help = omqm().arg("--help").output().unwrap();
    assert_status(&help, 0);
    let version = omqm().arg("--version").output().unwrap();
    assert_status(&version, 0);
}

#[test]
fn verify_json_mode_matches_written_ledger() {
    let dir = tempdir().unwrap();
    let out = omqm()
        .args(["verify", "--json"])
        .arg("--out-dir")
        .arg(dir.path())
        .output()
        .unwrap();
    assert_status(&out, 0);
    let stdout = stdout_of(&out);
    let file = fs::read_to_string(dir.path().join("ledger.json")).unwrap();
    assert_eq!(stdout, file, "stdout and ledger.json are byte-identical");
    let records: Vec<Value> = serde_json::from_str(&stdout).unwrap();
    assert_eq!(records.len(), 10);
    let eq67 = records
        .iter()
        .find(|r| r["id"] == "eq67")
        .expect("eq67 present");
    assert_eq!(eq67["status"], "DISCREPANT");
    assert!((eq67["computed"].as_f64().unwrap() - 1_106.772_793_774_532).abs() < 1e-9);
    let matching = records
        .iter()
        .find(|r| r["id"] == "eq8-matching")
        .expect("eq8-matching present");
    assert_eq!(matching["status"], "CONFIRMED");
}

#[test]
fn verify_table_mode_is_default() {
    let dir = tempdir().unwrap();
    let out = omqm()
        .arg("verify")
        .arg("--out-dir")
        .arg(dir.path())
        .output()
        .unwrap();
    assert_status(&out, 0);
    let stdout = stdout_of(&out);
    assert!(stdout.contains("eq67"));
    assert!(stdout.contains("DISCREPANT"));
    assert!(stdout.contains("n2-fifty-fifty"));
    let summary = String::from_utf8_lossy(&out.stderr).to_string();
    assert!(summary.contains("10 claims"), "stderr summary: {summary}");
}

#[test]
fn born_outputs_are_deterministic_and_svg_is_gated() {
    let run = |dir: &Path, svg: bool| {
        let mut cmd = omqm();
        cmd.args([
            "born", "--l1", "1000", "--n", "8", "--sigma", "3", "--samples", "5000", "--seed",
            "42",
        ])
        .arg("--out-dir")
        .arg(dir);
        if svg {
            cmd.arg("--svg");
        }
        let out = cmd.output().unwrap();
        assert_status(&out, 0);
    };
    let first = tempdir().unwrap();
    let second = tempdir().unwrap();
    run(first.path(), false);
    run(second.path(), true);
    let csv_a = fs::read_to_string(first.path().join("born.csv")).unwrap();
    let csv_b = fs::read_to_string(second.path().join("born.csv")).unwrap();
    assert_eq!(csv_a, csv_b, "same seed, same bytes");
    let mut lines = csv_a.lines();
    assert_eq!(lines.next(), Some("k,count,empirical_p,model_p"));
    let total: u64 = lines
        .map(|line| line.split(',').nth(1).unwrap().parse::<u64>().unwrap())
        .sum();
    assert_eq!(total, 5000);
    assert!(!first.path().join("born.svg").exists(), "svg needs --svg");
    let svg = fs::read_to_string(second.path().join("born.svg")).unwrap();
    assert!(svg.starts_with("<svg"), "svg document emitted");
}

#[test]
fn epr_single_setup_matches_worked_example() {
    let dir = tempdir().unwrap();
    let out = omqm()
        .args(["epr", "--l1a", "100", "--l1b", "100", "--b", "10", "--n", "2"])
        .arg("--out-dir")
        .arg(dir.path())
        .output()
        .unwrap();
    assert_status(&out, 0);
    let record: Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(record["k_a"], 1);
    assert_eq!(record["k_b"], 1);
    assert_eq!(record["orient_a"], 1);
    assert_eq!(record["orient_b"], -1);
    assert_eq!(record["spin_a"], 0.5);
    assert_eq!(record["spin_b"], -0.5);
    assert_eq!(record["symmetric"], true);
    assert!(dir.path().join("epr.json").exists());
}

#[test]
fn epr_batch_mode_reads_json_lines() {
    let dir = tempdir().unwrap();
    let batch = dir.path().join("setups.jsonl");
    fs::write(
        &batch,
        concat!(
            "{\"l1_a\": 100, \"l1_b\": 100, \"b\": 10, \"n\": 2}\n",
            "\n",
            "{\"l1_a\": 27, \"l1_b\": 31, \"n\": 5, \"parity\": -1}\n",
            "{\"l1_a\": 8, \"l1_b\": 8, \"b\": 8, \"n\": 2, \"parity\": 1}\n",
        ),
    )
    .unwrap();
    let out = omqm()
        .arg("epr")
        .arg("--batch")
        .arg(&batch)
        .arg("--out-dir")
        .arg(dir.path())
        .output()
        .unwrap();
    assert_status(&out, 0);
    let emitted = fs::read_to_string(dir.path().join("epr-batch.jsonl")).unwrap();
    let records: Vec<Value> = emitted
        .lines()
        .map(|line| serde_json::from_str(line).unwrap())
        .collect();
    assert_eq!(records.len(), 3);
    assert_eq!(records[0]["k_a"], 1);
    assert_eq!(records[1]["orient_a"], -1, "parity -1 flips particle A");
    assert_eq!(records[1]["spin_a"], Value::Null, "n = 5 has no spin");
    assert_eq!(records[2]["k_a"], 0, "l1 = b collapses the reduced scale 0");

    let bad = dir.path().join("bad.jsonl");
    fs::write(&bad, "{\"l1_a\": 5, \"l1_b\": 5, \"n\": 2, \"b\": 9}\n").unwrap();
    let err = omqm()
        .arg("epr")
        .arg("--batch")
        .arg(&bad)
        .arg("--out-dir")
        .arg(dir.path())
        .output()
        .unwrap();
    assert_status(&err, 1);
}

#[test]
fn weierstrass_grid_rows_and_residuals() {
    let dir = tempdir().unwrap();
    let out = omqm()
        .args(["weierstrass", "--grid", "5", "--lattice", "hexagonal"])
        .arg("--out-dir")
        .arg(dir.path())
        .output()
        .unwrap();
    assert_status(&out, 0);
    let csv = fs::read_to_string(dir.path().join("weierstrass.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "re_z,im_z,re_wp,im_wp,ode_residual");
    assert_eq!(lines.len(), 26, "header plus 5x5 grid");
    let max_residual = lines[1..]
        .iter()
        .map(|line| line.split(',').nth(4).unwrap().parse::<f64>().unwrap())
        .fold(0.0f64, f64::max);
    assert!(max_residual < 1e-8, "max residual {max_residual:e}");
}

#[test]
fn zeros_exports_versioned_table() {
    let dir = tempdir().unwrap();
    let out = omqm()
        .args(["zeros", "--t-max", "30"])
        .arg("--out-dir")
        .arg(dir.path())
        .output()
        .unwrap();
    assert_status(&out, 0);
    let table = fs::read_to_string(dir.path().join("zeros.txt")).unwrap();
    let lines: Vec<&str> = table.lines().collect();
    assert!(lines[0].starts_with("# omqm-zeros v1"));
    assert_eq!(lines.len(), 4, "header plus the three zeros below 30");
    let first: f64 = lines[1].parse().unwrap();
    assert!((first - 14.134_725).abs() < 1e-4);
    assert!(stdout_of(&out).contains("3 zeros"));
}

#[test]
fn numtheory_csv_and_cache_round_trip() {
    let dir = tempdir().unwrap();
    let out = omqm()
        .args(["numtheory", "--table-bound", "5000", "--rows", "10", "--cache", "table.bin"])
        .arg("--out-dir")
        .arg(dir.path())
        .output()
        .unwrap();
    assert_status(&out, 0);
    let csv = fs::read_to_string(dir.path().join("numtheory.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "k,mobius,mertens,von_mangoldt,psi");
    assert_eq!(lines.len(), 11);
    // Columns: k, mu(k), M(k), Lambda(k), psi(k). Spot the Mertens values.
    let mertens_of = |line: &str| line.split(',').nth(2).unwrap().parse::<i64>().unwrap();
    assert_eq!(mertens_of(lines[1]), 1);
    assert_eq!(mertens_of(lines[2]), 0);
    assert_eq!(mertens_of(lines[5]), -2);
    let table =
        omqm_core::numtheory::ArithmeticTable::load_cache(&dir.path().join("table.bin")).unwrap();
    assert_eq!(table.bound(), 5000);
    assert_eq!(table.mobius(30).unwrap(), -1);
}

#[test]
fn chaos_cascade_csv_and_optional_attractor() {
    let dir = tempdir().unwrap();
    let out = omqm()
        .args(["chaos", "--feigenbaum-levels", "8"])
        .arg("--out-dir")
        .arg(dir.path())
        .output()
        .unwrap();
    assert_status(&out, 0);
    let csv = fs::read_to_string(dir.path().join("feigenbaum.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "m,a,ratio");
    assert_eq!(lines.len(), 11, "header plus parameters a_0..a_9");
    assert!(stdout_of(&out).contains("delta=4.669"));
    assert!(!dir.path().join("rossler.csv").exists());

    let with_flow = omqm()
        .args(["chaos", "--feigenbaum-levels", "6", "--rossler", "0.2,0.2,5.7,0.01,40"])
        .arg("--out-dir")
        .arg(dir.path())
        .arg("--svg")
        .output()
        .unwrap();
    assert_status(&with_flow, 0);
    let rows = fs::read_to_string(dir.path().join("rossler.csv")).unwrap();
    assert_eq!(rows.lines().next(), Some("t,x,y,z"));
    assert!(rows.lines().count() > 1000);
    assert!(fs::read_to_string(dir.path().join("rossler.svg"))
        .unwrap()
        .starts_with("<svg"));
}

#[test]
fn config_file_feeds_defaults_and_flags_override() {
    let dir = tempdir().unwrap();
    let config = dir.path().join("lab.json");
    fs::write(&config, "{\"born.samples\": 2000, \"global.svg\": true}\n").unwrap();

    let from_config = omqm()
        .env("OMQM_CONFIG", &config)
        .args(["born", "--l1", "1000", "--n", "4", "--sigma", "2"])
        .arg("--out-dir")
        .arg(dir.path())
        .output()
        .unwrap();
    assert_status(&from_config, 0);
    assert!(stdout_of(&from_config).contains("samples=2000"));
    assert!(dir.path().join("born.svg").exists(), "global.svg=true in config");

    let flag_wins = omqm()
        .env("OMQM_CONFIG", &config)
        .args(["born", "--l1", "1000", "--n", "4", "--sigma", "2", "--samples", "3000"])
        .arg("--out-dir")
        .arg(dir.path())
        .output()
        .unwrap();
    assert_status(&flag_wins, 0);
    assert!(stdout_of(&flag_wins).contains("samples=3000"));

    let manifest: Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("run-manifest.json")).unwrap())
            .unwrap();
    assert_eq!(manifest["resolved"]["born.samples"], 3000);
}

#[test]
fn unknown_config_key_is_a_config_error() {
    let dir = tempdir().unwrap();
    let config = dir.path().join("bad.json");
    fs::write(&config, "{\"born.sample\": 5}\n").unwrap();
    let out = omqm()
        .arg("--config")
        .arg(&config)
        .args(["born", "--l1", "10", "--n", "2", "--sigma", "1"])
        .arg("--out-dir")
        .arg(dir.path())
        .output()
        .unwrap();
    assert_status(&out, 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown config key"));
}

#[test]
fn default_out_dir_is_out() {
    let dir = tempdir().unwrap();
    let out = omqm()
        .current_dir(dir.path())
        .args(["collapse", "--l1", "4", "--n", "2", "--path", "key"])
        .output()
        .unwrap();
    assert_status(&out, 0);
    assert!(dir.path().join("out").join("collapse.json").exists());
    assert!(dir.path().join("out").join("run-manifest.json").exists());
}

#[test]
fn constants_overrides_flow_into_commands() {
    let dir = tempdir().unwrap();
    // alpha_tilde = 0 is rejected as a config error.
    let bad = omqm()
        .args(["collapse", "--l1", "7", "--n", "2", "--alpha-tilde", "0"])
        .arg("--out-dir")
        .arg(dir.path())
        .output()
        .unwrap();
    assert_status(&bad, 2);
    // alpha_tilde = 1 turns the phase into exp(i k*): re = cos(1) at k* = 1.
    let out = omqm()
        .args(["collapse", "--l1", "7", "--n", "2", "--path", "key", "--alpha-tilde", "1"])
        .arg("--out-dir")
        .arg(dir.path())
        .output()
        .unwrap();
    assert_status(&out, 0);
    let record: Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert!((record["phase_re"].as_f64().unwrap() - 1.0f64.cos()).abs() < 1e-12);
    let manifest: Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("run-manifest.json")).unwrap())
            .unwrap();
    assert_eq!(manifest["resolved"]["global.alpha_tilde"], 1.0);
}
