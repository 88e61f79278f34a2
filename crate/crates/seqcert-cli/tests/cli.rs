//! CLI behaviour: exit codes, output formats, flag validation.

use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_seqcert"))
}

#[test]
fn usage_errors_exit_64() {
    let cases: [&[&str]; 6] = [
        &["verify", "theorem1", "--l", "banana"],
        &["verify", "theorem1", "--l", "2..9"],
        &["verify", "theorem1", "--l", "9..2"],
        &["figure", "--id", "5.1"],
        &["asymptotics", "--suite", "nonsense"],
        &["--precision", "40", "verify", "threshold", "--l", "6..10"],
    ];
    for args in cases {
        let status = bin().args(args).status().unwrap();
        assert_eq!(status.code(), Some(64), "{args:?}");
    }
    // unknown flag through clap
    let status = bin().args(["--no-such-flag"]).status().unwrap();
    assert_eq!(status.code(), Some(64));
}

#[test]
fn slow_gates() {
    let status = bin()
        .args(["verify", "threshold", "--l", "6..2600"])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(64));
    let status = bin()
        .args(["asymptotics", "--suite", "remarkD1", "--a", "10,3000"])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(64));
}

#[test]
fn csv_table_shape() {
    let output = bin().args(["table41", "--max-a", "2"]).output().unwrap();
    assert!(output.status.success());
    let text = String::from_utf8(output.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "a,j,l,gap,rounding_tie");
    assert_eq!(lines.len(), 4); // header + 3 entries
    assert!(lines[1].starts_with("1,1,15,"));
}

#[test]
fn json_report_schema() {
    let output = bin()
        .args(["--format", "json", "verify", "threshold", "--l", "6..12"])
        .output()
        .unwrap();
    assert!(output.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&output.stdout).unwrap();
    assert_eq!(doc["version"], "1");
    assert_eq!(doc["command"], "verify threshold");
    assert!(doc["mode"].as_str().unwrap().contains("exact"));
    assert!(doc["results"].as_array().unwrap().len() >= 3);
    assert!(doc["witnesses"].as_array().unwrap().is_empty());
    assert_eq!(doc["config"]["l"], "6..12");
    assert_eq!(doc["config"]["precision_bits"], 53);
}

#[test]
fn output_file_written() {
    let dir = std::env::temp_dir().join("seqcert-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("fig.csv");
    let status = bin()
        .args(["--output", path.to_str().unwrap(), "figure", "--id", "4.6"])
        .status()
        .unwrap();
    assert!(status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("a,gap,approximation"));
    assert_eq!(text.lines().count(), 11);
    std::fs::remove_file(&path).ok();
}

#[test]
fn precision_env_variable() {
    let output = bin()
        .env("SEQCERT_PRECISION_BITS", "64")
        .args(["--format", "json", "verify", "threshold", "--l", "6..10"])
        .output()
        .unwrap();
    assert!(output.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&output.stdout).unwrap();
    assert_eq!(doc["config"]["precision_bits"], 64);

    let status = bin()
        .env("SEQCERT_PRECISION_BITS", "13")
        .args(["verify", "threshold", "--l", "6..10"])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(64));
}

#[test]
fn explicit_modes_run() {
    for mode in ["exact", "log"] {
        let output = bin()
            .args(["--mode", mode, "verify", "pairwise", "--l", "9..14"])
            .output()
            .unwrap();
        assert!(output.status.success(), "mode {mode}");
    }
    let output = bin()
        .args(["--mode", "log", "--precision", "113", "verify", "threshold", "--l", "6..20"])
        .output()
        .unwrap();
    assert!(output.status.success());
}

#[test]
fn remark_suite_defaults_and_exit() {
    let output = bin()
        .args(["asymptotics", "--suite", "remarkD1"])
        .output()
        .unwrap();
    assert!(output.status.success());
    let text = String::from_utf8(output.stdout).unwrap();
    // default fast points 10, 100, 1000, all matching their references
    assert_eq!(text.lines().count(), 4);
    assert!(text.lines().skip(1).all(|l| l.ends_with(",true")));
}

#[test]
fn gap_table_matches_golden_file() {
    // byte-exact pin of the CSV surface (values themselves are checked
    // against the reference table in the acceptance suite)
    let output = bin().args(["table41", "--max-a", "10"]).output().unwrap();
    assert!(output.status.success());
    let golden = include_bytes!("data/table41_max10.csv");
    assert_eq!(output.stdout, golden);
}
