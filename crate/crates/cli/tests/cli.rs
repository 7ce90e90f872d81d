//! Golden files and exit codes of the `lencat` binary.
//!
//! `LENCAT_BLESS=1 cargo test -p lencat-cli` rewrites the golden files in
//! `fixtures/` from the manifest.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn lencat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lencat")).args(args).current_dir(fixtures()).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

fn stderr_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stderr).expect("json on stderr")
}

fn copy_tree(from: &Path, to: &Path) {
    fs::create_dir_all(to).unwrap();
    for entry in fs::read_dir(from).unwrap() {
        let entry = entry.unwrap();
        let dest = to.join(entry.file_name());
        if entry.file_type().unwrap().is_dir() {
            copy_tree(&entry.path(), &dest);
        } else {
            fs::copy(entry.path(), dest).unwrap();
        }
    }
}

fn manifest_outputs() -> Vec<String> {
    let m: Value = serde_json::from_str(&fs::read_to_string(fixtures().join("manifest.json")).unwrap()).unwrap();
    m["entries"].as_array().unwrap().iter().map(|e| e["output"].as_str().unwrap().to_string()).collect()
}

#[test]
fn golden_files_regenerate_byte_identically() {
    if std::env::var_os("LENCAT_BLESS").is_some() {
        let out = lencat(&["manifest", "--manifest", "manifest.json"]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        return;
    }
    let tmp = tempfile::tempdir().unwrap();
    copy_tree(&fixtures(), tmp.path());
    for out in manifest_outputs() {
        fs::remove_file(tmp.path().join(&out)).unwrap();
    }
    let manifest = tmp.path().join("manifest.json");
    let out = lencat(&["manifest", "--manifest", manifest.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    for rel in manifest_outputs() {
        let want = fs::read(fixtures().join(&rel)).unwrap();
        let got = fs::read(tmp.path().join(&rel)).unwrap();
        assert!(want == got, "{rel} differs from its regeneration");
    }
}

#[test]
fn manifest_check_detects_drift() {
    let tmp = tempfile::tempdir().unwrap();
    copy_tree(&fixtures(), tmp.path());
    let manifest = tmp.path().join("manifest.json");
    let ok = lencat(&["manifest", "--manifest", manifest.to_str().unwrap(), "--check"]);
    assert!(ok.status.success());
    fs::write(tmp.path().join("golden/weyl_mul_D_t.json"), "{}\n").unwrap();
    let bad = lencat(&["manifest", "--manifest", manifest.to_str().unwrap(), "--check"]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(stderr_json(&bad)["message"].as_str().unwrap().contains("weyl_mul_D_t"));
}

#[test]
fn enumerate_three_gives_five_classes() {
    let v = stdout_json(&lencat(&["quiver", "enumerate", "--n", "3"]));
    assert_eq!(v["count"], 5);
}

#[test]
fn kgamma_123_has_dimension_six() {
    let v = stdout_json(&lencat(&["algebra", "kgamma", "--order-vector", "1,2,3"]));
    assert_eq!(v["dim"], 6);
    let labels: Vec<&str> = v["basis"].as_array().unwrap().iter().map(|b| b["label"].as_str().unwrap()).collect();
    assert!(labels.contains(&"x23x12"));
}

#[test]
fn weyl_commutator() {
    let v = stdout_json(&lencat(&["weyl", "mul", "--a", "D", "--b", "t"]));
    assert_eq!(v["product"], "t*D + 1");
}

#[test]
fn output_flag_writes_file() {
    let tmp = tempfile::tempdir().unwrap();
    let path = tmp.path().join("out.json");
    let out = lencat(&["quiver", "enumerate", "--n", "2", "-o", path.to_str().unwrap()]);
    assert!(out.status.success() && out.stdout.is_empty());
    let v: Value = serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap();
    assert_eq!(v["count"], 2);
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        vec!["quiver", "enumerate"],
        vec!["--field", "F4", "weyl", "mul", "--a", "t", "--b", "t"],
        vec!["weyl", "window", "--P", "D", "--range", "3..1"],
        vec!["ext", "build-chain", "--family", "families/a2.json", "--order", "3"],
        vec!["classify", "--family", "families/a2.json", "--max-length", "2", "--ext", "manual"],
    ] {
        let out = lencat(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn domain_errors_exit_one_with_descriptor() {
    let cases: [(&[&str], &str); 4] = [
        (&["ext", "build-chain", "--family", "families/two_loops.json", "--order", "1,1,1"], "obstructed"),
        (&["classify", "--family", "families/truncated_3_f3.json", "--max-length", "4"], "characteristic"),
        (&["weyl", "mul", "--a", "t*(D", "--b", "t"], "parse"),
        (&["def", "scheme", "--hull", "quivers/q5.json", "--order-vector", "1,1"], "parse"),
    ];
    for (args, kind) in cases {
        let out = lencat(args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        let e = stderr_json(&out);
        assert_eq!(e["error"], kind, "{args:?}: {e}");
        assert!(e["message"].is_string());
    }
}

#[test]
fn fixture_show_round_trips_through_commands() {
    let v = stdout_json(&lencat(&["fixture", "show", "--name", "a2"]));
    let on_disk: Value = serde_json::from_str(&fs::read_to_string(fixtures().join("families/a2.json")).unwrap()).unwrap();
    assert_eq!(v, on_disk);
    let q = stdout_json(&lencat(&["mod", "gabriel", "--family", "families/a2.json"]));
    assert_eq!(q["star_holds"], true);
}
