use std::collections::HashSet;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_braidnomial")).args(args).output().expect("binary runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("report on stdout")
}

#[test]
fn quintic_verifies() {
    let out = run(&["--equation", "5,3,2,7"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r = report(&out);
    assert_eq!(r["schema"], "braidnomial-report/1");
    assert_eq!(r["status"], "ok");
    assert_eq!(r["loops"].as_array().unwrap().len(), 7);
    for l in r["loops"].as_array().unwrap() {
        let v = l["comparison"]["verdict"].as_str().unwrap();
        assert!(v == "match" || v == "match_up_to_conjugation", "{}: {v}", l["loop"]);
    }
    assert_eq!(r["galois"]["empirical"]["order"], "120");
}

#[test]
fn invalid_input_exits_with_two() {
    for args in [
        vec!["--equation", "3,1,1,1"],
        vec!["--equation", "5,3,2,7", "--loop", "omega:9"],
        vec!["--equation", "5,3,2,7", "--loop", "composite:zero;omega:9"],
        vec!["--equation", "12,5,1,4"],
        vec!["--equation", "5,3,2,7", "--loop", "sideways"],
        vec!["--equation", "5,3,2"],
        vec!["--equation", "5,3,2,7", "--delta", "-1"],
        vec!["--equation", "5,3,2,7", "--terms", "0"],
    ] {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
    }
    let r = report(&run(&["--equation", "12,5,1,4"]));
    assert_eq!(r["status"], "invalid_input");
    assert_eq!(r["error"]["name"], "GcdConditionViolated");
}

#[test]
fn tracker_only_accepts_gcd_violations() {
    let out = run(&["--equation", "12,5,1,4", "--loop", "zero", "--tracker-only"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r = report(&out);
    assert!(r["loops"][0]["prediction"].is_null());
    assert!(r["loops"][0]["empirical"]["word"].is_array());
    let codes: Vec<&str> = r["warnings"].as_array().unwrap().iter().map(|w| w["code"].as_str().unwrap()).collect();
    assert!(codes.contains(&"GcdConditionViolated"));
}

#[test]
fn reports_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for p in [&a, &b] {
        let out = run(&["--equation", "6,2,1,2", "--report", p.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0));
        assert!(out.stdout.is_empty());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn warnings_appear_once() {
    let r = report(&run(&["--equation", "5,3,2,7"]));
    let warnings = r["warnings"].as_array().unwrap();
    let distinct: HashSet<String> = warnings.iter().map(|w| w.to_string()).collect();
    assert_eq!(distinct.len(), warnings.len());
}

#[test]
fn sigma_prediction_twists() {
    let r = report(&run(&["--equation", "5,3,2,7", "--loop", "sigma", "--mode", "predict"]));
    let twists = r["loops"][0]["prediction"]["twists"].as_array().unwrap();
    let alphas: Vec<&str> = twists.iter().map(|t| t["alpha"].as_str().unwrap()).collect();
    assert_eq!(alphas, ["-4/15", "2/5"]);
    assert!(r["loops"][0]["empirical"].is_null());
    let word: Vec<i64> = r["loops"][0]["prediction"]["artin"].as_array().unwrap().iter().map(|x| x.as_i64().unwrap()).collect();
    assert!(word.iter().all(|&l| l != 0));
    assert_eq!(word.iter().map(|l| l.signum()).sum::<i64>(), r["loops"][0]["prediction"]["exponent_sum"].as_i64().unwrap());
}

#[test]
fn diagram_crossings_match_the_word() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("zs.svg");
    let out = run(&["--equation", "5,3,2,7", "--loop", "composite:zero;sigma", "--mode", "diagram", "--svg", svg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    let text = std::fs::read_to_string(&svg).unwrap();
    let pos = text.matches("class=\"crossing positive\"").count() as u64;
    let neg = text.matches("class=\"crossing negative\"").count() as u64;
    assert_eq!(pos, r["diagram"]["positive_crossings"].as_u64().unwrap());
    assert_eq!(neg, r["diagram"]["negative_crossings"].as_u64().unwrap());
    assert_eq!((pos + neg) as usize, r["diagram"]["word"].as_array().unwrap().len());
    assert_eq!((pos, neg), (28, 0));
}

#[test]
fn galois_mode_reports_orders() {
    let r = report(&run(&["--equation", "6,2,1,2", "--mode", "galois"]));
    assert_eq!(r["status"], "ok");
    assert_eq!(r["galois"]["empirical"]["order"], "24");
    assert_eq!(r["galois"]["orders_agree"], true);
}

#[test]
fn cache_hits_on_the_second_run() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().to_str().unwrap();
    let first = report(&run(&["--equation", "5,3,2,7", "--loop", "zero", "--cache", cache]));
    let second = report(&run(&["--equation", "5,3,2,7", "--loop", "zero", "--cache", cache]));
    assert_eq!(first["loops"][0]["empirical"]["cache"]["outcome"], "miss");
    assert_eq!(second["loops"][0]["empirical"]["cache"]["outcome"], "hit");
    assert_eq!(first["loops"][0]["empirical"]["word"], second["loops"][0]["empirical"]["word"]);
    let entry = std::fs::read_dir(dir.path()).unwrap().next().unwrap().unwrap().path();
    let header: Value = serde_json::from_str(std::fs::read_to_string(entry).unwrap().lines().next().unwrap()).unwrap();
    assert_eq!(header["format"], "braidnomial-trace/1");
    assert_eq!(header["key"].as_str().unwrap().len(), 64);
}

#[test]
fn corrupt_cache_entries_are_replaced() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().to_str().unwrap();
    run(&["--equation", "5,3,2,7", "--loop", "zero", "--cache", cache]);
    let entry = std::fs::read_dir(dir.path()).unwrap().next().unwrap().unwrap().path();
    std::fs::write(&entry, "not a trace\n").unwrap();
    let out = run(&["--equation", "5,3,2,7", "--loop", "zero", "--cache", cache]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["loops"][0]["empirical"]["cache"]["outcome"], "replaced");
    assert!(r["warnings"].as_array().unwrap().iter().any(|w| w["code"] == "CacheEntryReplaced"));
}
