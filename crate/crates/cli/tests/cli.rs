use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn cmd(cache: &Path) -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_spin16"));
    for v in ["SPIN16_CONSTANTS", "SPIN16_CACHE", "SPIN16_SEED", "SPIN16_THREADS", "SPIN16_FORMAT"] {
        c.env_remove(v);
    }
    c.arg("--cache").arg(cache);
    c
}

fn run(cache: &Path, args: &[&str]) -> Output {
    cmd(cache).args(args).output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

#[test]
fn verify_small_ranges() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["verify", "--range", "3:10000"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["criterion_mismatches"], serde_json::json!([]));
    assert!(v["split_count"].as_u64().unwrap() > 100);
    assert_eq!(v["seed"], 0);
    assert_eq!(v["constants_hash"].as_str().unwrap().len(), 64);

    // Only p = 3 mod 4 here: nothing splits, so the check is vacuous.
    let out = run(dir.path(), &["verify", "--range", "19:19"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["split_count"], 0);
    assert_eq!(run(dir.path(), &["verify", "--range", "1000001"]).status.code(), Some(4));
    assert_eq!(run(dir.path(), &["verify", "--range", "9:3"]).status.code(), Some(4));
}

#[test]
fn corrupted_constants_file() {
    let dir = tempfile::tempdir().unwrap();
    let good = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/../core/data/m_constants.json")).unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, good.replacen("\"disc\"", "\"disk\"", 1)).unwrap();
    let out = run(dir.path(), &["--constants", bad.to_str().unwrap(), "verify", "--range", "100"]);
    assert_ne!(out.status.code(), Some(0));
    std::fs::write(&bad, &good[..good.len() / 2]).unwrap();
    assert_eq!(run(dir.path(), &["--constants", bad.to_str().unwrap(), "spin", "41"]).status.code(), Some(4));
    let missing = dir.path().join("missing.json");
    assert_eq!(run(dir.path(), &["--constants", missing.to_str().unwrap(), "spin", "41"]).status.code(), Some(4));

    // An intact copy loads and gives the shipped hash.
    let copy = dir.path().join("copy.json");
    std::fs::write(&copy, &good).unwrap();
    let a = json(&run(dir.path(), &["--constants", copy.to_str().unwrap(), "spin", "41"]));
    let b = json(&run(dir.path(), &["spin", "41"]));
    assert_eq!(a["constants_hash"], b["constants_hash"]);
}

#[test]
fn spin_41() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["spin", "41"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["generator"].as_array().unwrap().len(), 8);
    assert_eq!(v["factors"].as_array().unwrap().len(), 5);
    assert_eq!(v["total"], -1);
    assert_eq!(v["class_number"], 8);

    let sha = json(&run(dir.path(), &["spin", "41", "--variant", "sha"]));
    assert_eq!(sha["factors"].as_array().unwrap().len(), 6);

    let csv = run(dir.path(), &["--format", "csv", "spin", "41"]);
    let text = String::from_utf8(csv.stdout).unwrap();
    assert!(text.starts_with("# spin16 "));
    assert!(text.contains("\ntotal,-1\n"));

    // Non-split prime: no factors, total 0.
    let v = json(&run(dir.path(), &["spin", "17"]));
    assert_eq!(v["splits_completely"], false);
    assert_eq!(v["total"], 0);
    assert_eq!(run(dir.path(), &["spin", "15"]).status.code(), Some(4));
    assert_eq!(run(dir.path(), &["spin", "41", "--variant", "odd"]).status.code(), Some(4));
}

#[test]
fn density_served_from_cache() {
    let dir = tempfile::tempdir().unwrap();
    let first = run(dir.path(), &["density", "--max-x", "20000"]);
    assert_eq!(first.status.code(), Some(0));
    assert!(!String::from_utf8_lossy(&first.stderr).contains("served from cache"));
    let second = run(dir.path(), &["density", "--max-x", "20000"]);
    assert!(String::from_utf8_lossy(&second.stderr).contains("served from cache"));
    assert_eq!(first.stdout, second.stdout);

    let names: Vec<String> = std::fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().file_name().into_string().unwrap()).collect();
    assert!(names.iter().any(|n| n.starts_with("density_x20000_seed0_") && n.ends_with(".json")));
    assert!(names.iter().any(|n| n.starts_with("density_x20000_seed0_") && n.ends_with(".csv")));
    assert!(names.iter().any(|n| n.starts_with("records_3-20000_")));

    // A damaged record cache is rebuilt rather than trusted.
    let rec = names.iter().find(|n| n.starts_with("records_")).unwrap();
    std::fs::write(dir.path().join(rec), "p,h,h2,rk4,rk8,rk16,splits,e_true,e_pred\n5,2,2,0,0,0,0,0,0\n").unwrap();
    let out = run(dir.path(), &["verify", "--range", "20000"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(json(&out)["prime_count"].as_u64().unwrap() > 2000);
}

#[test]
fn type2_seed_determinism() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let args = ["--seed", "7", "sums", "type2", "--mb", "256", "--nb", "256"];
    let x = run(a.path(), &args);
    let y = run(b.path(), &args);
    assert_eq!(x.status.code(), Some(0));
    assert_eq!(x.stdout, y.stdout);
    assert_eq!(json(&x)["seed"], 7);
    let z = run(a.path(), &["--seed", "8", "sums", "type2", "--mb", "256", "--nb", "256"]);
    assert_ne!(json(&z)["series"], json(&x)["series"]);
    assert_eq!(run(a.path(), &["sums", "type2", "--mb", "4096", "--nb", "4096"]).status.code(), Some(3));
    assert_eq!(run(a.path(), &["sums", "type2", "--mb", "1", "--nb", "256"]).status.code(), Some(4));
}

#[test]
fn env_overrides_and_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["sums", "type2", "--mb", "64", "--nb", "64", "--repeats", "3"];
    let env = cmd(dir.path()).env("SPIN16_SEED", "5").args(args).output().unwrap();
    assert_eq!(json(&env)["seed"], 5);
    let flag = cmd(dir.path()).env("SPIN16_SEED", "5").arg("--seed").arg("6").args(args).output().unwrap();
    assert_eq!(json(&flag)["seed"], 6);
    let csv = cmd(dir.path()).env("SPIN16_FORMAT", "csv").args(args).output().unwrap();
    assert!(String::from_utf8(csv.stdout).unwrap().starts_with("# spin16 "));

    let other = tempfile::tempdir().unwrap();
    let mut c = Command::new(env!("CARGO_BIN_EXE_spin16"));
    c.env_remove("SPIN16_SEED").env_remove("SPIN16_FORMAT").env("SPIN16_CACHE", other.path());
    assert_eq!(c.args(["spin", "5"]).output().unwrap().status.code(), Some(0));
    assert!(std::fs::read_dir(other.path()).unwrap().count() > 0);
    assert_eq!(cmd(dir.path()).env("SPIN16_THREADS", "zero").args(["spin", "5"]).output().unwrap().status.code(), Some(4));
}

#[test]
fn sums_commands() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["sums", "prime", "--max-x", "5000"][..],
        &["sums", "sha", "--max-x", "5000"],
        &["sums", "mangoldt", "--max-x", "3000"],
        &["sums", "type1", "--max-x", "3000", "--divisor", "41/3"],
        &["sums", "type1", "--max-x", "3000", "--divisor", "two"],
        &["sums", "type2-sweep", "--k-lo", "5", "--k-hi", "7", "--repeats", "4"],
        &["charsum", "--q-lo", "1000", "--q-hi", "2000"],
    ] {
        let out = run(dir.path(), args);
        assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        let v = json(&out);
        assert!(v["checks"].as_array().unwrap().iter().all(|c| c["passed"] == true), "{args:?}");
    }
    assert_eq!(run(dir.path(), &["sums", "mangoldt", "--max-x", "2000000"]).status.code(), Some(3));
    assert_eq!(run(dir.path(), &["sums", "type1", "--divisor", "41/8"]).status.code(), Some(4));
    assert_eq!(run(dir.path(), &["sums", "type1", "--divisor", "9"]).status.code(), Some(4));
    assert_eq!(run(dir.path(), &["sums", "prime", "--max-x", "50"]).status.code(), Some(4));
    assert_eq!(run(dir.path(), &["charsum", "--q-hi", "20000000"]).status.code(), Some(3));
    assert_eq!(run(dir.path(), &["sums", "type2-sweep", "--k-lo", "9", "--k-hi", "8"]).status.code(), Some(4));
}

#[test]
fn help_and_unknown_flags() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(dir.path(), &["--help"]).status.code(), Some(0));
    assert_eq!(run(dir.path(), &["--version"]).status.code(), Some(0));
    assert_eq!(run(dir.path(), &["verify", "--bogus"]).status.code(), Some(4));
    assert_eq!(run(dir.path(), &[]).status.code(), Some(4));
}
