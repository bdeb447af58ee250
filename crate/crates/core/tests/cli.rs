use serde_json::Value;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_seifert-volumes"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn schema(name: &str) -> jsonschema::JSONSchema {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("schema").join(format!("{name}.schema.json"));
    let value: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    jsonschema::JSONSchema::compile(&value).unwrap()
}

fn records(out: &Output) -> Vec<Value> {
    String::from_utf8(out.stdout.clone())
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect()
}

fn assert_valid(name: &str, recs: &[Value]) {
    let s = schema(name);
    assert!(!recs.is_empty(), "{name}: no records");
    for r in recs {
        if let Err(errors) = s.validate(r) {
            let msgs: Vec<String> = errors.map(|e| e.to_string()).collect();
            panic!("{name}: {r} invalid: {msgs:?}");
        }
    }
}

fn tmp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("seifert-volumes-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn every_command_matches_its_schema() {
    let cases: [(&str, &[&str]); 6] = [
        ("components", &["components", "--group", "C2", "--seifert", "g=1; (2,1),(3,1)"]),
        ("prefactor", &["prefactor", "--group", "G2", "--seifert", "g=0; (2,1),(3,1),(4,1)"]),
        ("volume", &["volume", "--group", "A2", "--seifert", "g=1; (2,1)", "--truncation", "3000"]),
        ("abelian", &["abelian", "--seifert", "g=2; (3,1),(4,-1)"]),
        ("check-torsion", &["check-torsion", "--instances", "5"]),
        ("mv-verify", &["mv-verify", "--seifert", "g=1; (5,2),(3,1)"]),
    ];
    for (name, args) in cases {
        let out = run(args);
        assert_eq!(out.status.code(), Some(0), "{name}: {}", String::from_utf8_lossy(&out.stdout));
        assert_valid(name, &records(&out));
    }
    let err = run(&["volume", "--seifert", "g=0; (2,1),(3,1),(5,1)"]);
    assert_eq!(err.status.code(), Some(3));
    assert_valid("error", &records(&err));
    let err = run(&["components", "--group", "Q7", "--seifert", "g=0; (2,1)"]);
    assert_eq!(err.status.code(), Some(2));
    assert_valid("error", &records(&err));
    assert_eq!(records(&err)[0]["field"], "group");
}

#[test]
fn records_are_sorted_and_repeatable() {
    let args = ["prefactor", "--group", "A2", "--seifert", "g=0; (2,1),(3,1),(5,2)"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout);
    let recs = records(&a);
    let rat = |v: &Value| -> num::rational::Rational64 { v.as_str().unwrap().parse().unwrap() };
    let keys: Vec<(Vec<_>, Vec<Vec<_>>)> = recs
        .iter()
        .map(|r| {
            let v = r["v"].as_array().unwrap().iter().map(rat).collect();
            let u = r["u"].as_array().unwrap().iter().map(|c| c.as_array().unwrap().iter().map(rat).collect()).collect();
            (v, u)
        })
        .collect();
    assert!(keys.windows(2).all(|w| w[0] < w[1]), "labels not strictly increasing");
    let single = bin().args(args).env("SEIFERT_VOLUMES_THREADS", "1").output().unwrap();
    assert_eq!(single.stdout, a.stdout);
}

#[test]
fn config_file_and_out_path() {
    let config = tmp("job.toml");
    let out = tmp("volumes.csv");
    std::fs::write(
        &config,
        format!("group = \"A1\"\nseifert = \"g=0; (2,1),(3,1),(5,1),(7,1)\"\ntruncation = 10\nformat = \"csv\"\nout = {:?}\n", out),
    )
    .unwrap();
    let res = run(&["volume", "--config", config.to_str().unwrap(), "--truncation", "40000"]);
    assert_eq!(res.status.code(), Some(0), "{}", String::from_utf8_lossy(&res.stdout));
    assert!(res.stdout.is_empty());
    let text = std::fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "v,u,dim,occupancy,value,truncation,tail_estimate,tail_kind,terms,normalization"
    );
    assert_eq!(lines.count(), 6);
    assert!(text.contains(",40000,"));

    std::fs::write(&config, "colour = \"red\"\n").unwrap();
    let res = run(&["components", "--config", config.to_str().unwrap(), "--seifert", "g=0; (2,1)"]);
    assert_eq!(res.status.code(), Some(2));
    assert_eq!(records(&res)[0]["field"], "config");
}

#[test]
fn bad_threads_variable_is_an_input_error() {
    let res = bin()
        .args(["abelian", "--seifert", "g=0; (2,1)"])
        .env("SEIFERT_VOLUMES_THREADS", "0")
        .output()
        .unwrap();
    assert_eq!(res.status.code(), Some(2));
    assert_eq!(records(&res)[0]["field"], "SEIFERT_VOLUMES_THREADS");
}

#[test]
fn missing_seifert_and_scale_errors() {
    let res = run(&["prefactor"]);
    assert_eq!(res.status.code(), Some(2));
    assert_eq!(records(&res)[0]["field"], "seifert");
    let res = run(&["volume", "--seifert", "g=2; (1,0)", "--scale", "0"]);
    assert_eq!(records(&res)[0]["field"], "scale");
    let doubled = records(&run(&["volume", "--seifert", "g=2; (2,1)", "--scale", "2", "--truncation", "20000"]));
    let base = records(&run(&["volume", "--seifert", "g=2; (2,1)", "--truncation", "20000"]));
    let ratio = doubled[0]["value"].as_f64().unwrap() / base[0]["value"].as_f64().unwrap();
    let dim = base[0]["dim"].as_i64().unwrap() as f64;
    assert!((ratio - 2f64.powf(dim / 2.0)).abs() < 1e-9 * ratio);
}
