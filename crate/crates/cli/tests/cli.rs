use std::process::{Command, Output};

use heckekit::transfer::TransferKernel;
use heckekit::weights::WeightFunction;
use serde_json::Value;

fn preset(name: &str) -> String {
    format!("{}/presets/{name}.json", env!("CARGO_MANIFEST_DIR"))
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_heckekit")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_str(&stdout(o)).unwrap()
}

#[test]
fn gl2_paper_suite() {
    let gl2 = preset("gl2");
    let o = run(&["check", "--suite", "gl2-paper", "--group", &gl2]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["pass"], Value::Bool(true));
    let entry = |id: &str| v["entries"].as_array().unwrap().iter().find(|e| e["id"] == id).unwrap().clone();
    assert_eq!(entry("gl2-paper/kernel")["lhs"], "[2]");
    assert_eq!(entry("gl2-paper/sign")["lhs"], "-1");
    assert_eq!(entry("gl2-paper/rhs")["lhs"], "-2");
    assert!(v["entries"].as_array().unwrap().iter().all(|e| e["status"] == "pass" && e.get("elapsed_ms").is_none()));
}

#[test]
fn dims_and_weights() {
    let o = run(&["dim", "--group", &preset("a1"), "--mu", "[0]"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["dim"], 1);
    let o = run(&["weights", "--group", &preset("a2sc"), "--mu", "[1,1]", "--format", "tsv"]);
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 7);
    let mass: i64 = lines.iter().map(|l| l.split('\t').nth(1).unwrap().parse::<i64>().unwrap()).sum();
    assert_eq!(mass, 8);
    let o = run(&["weights", "--group", "a2sc", "--mu", "[1,1]"]);
    assert_eq!(json(&o)["dim"], 8);
}

#[test]
fn output_is_byte_stable() {
    for args in [
        vec!["weights", "--group", "g2", "--mu", "[2,3]"],
        vec!["kernel", "--group", "gl3", "--mu", "[2,1,0]"],
        vec!["describe", "--group", "sp4"],
        vec!["check", "--seed", "5"],
        vec!["check", "--suite", "transfer", "--group", "a2ad-twisted", "--format", "tsv"],
    ] {
        let a = run(&args);
        let b = run(&args);
        assert_eq!(a.status.code(), Some(0), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn json_round_trips() {
    let o = run(&["weights", "--group", "sp4", "--mu", "[2,1]"]);
    let text = stdout(&o);
    let v = json(&o);
    assert_eq!(serde_json::to_string_pretty(&v).unwrap() + "\n", text);
    let f = WeightFunction::from_json(&v["weights"]).unwrap();
    assert_eq!(f.to_json(), v["weights"]);
    let o = run(&["kernel", "--group", "gl3", "--mu", "[1,0,0]"]);
    let text = stdout(&o);
    let v = json(&o);
    assert_eq!(serde_json::to_string_pretty(&v).unwrap() + "\n", text);
    for k in v["kernels"].as_array().unwrap() {
        let parsed = TransferKernel::from_json(k).unwrap();
        let mut again = parsed.to_json();
        again["elliptic"] = k["elliptic"].clone();
        assert_eq!(&again, k);
    }
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["bogus"]).status.code(), Some(1));
    assert_eq!(run(&["dim", "--group", "gl2"]).status.code(), Some(1));
    assert_eq!(run(&["dim", "--group", "gl2", "--mu", "[0,1]"]).status.code(), Some(1));
    assert_eq!(run(&["dim", "--group", "gl2", "--mu", "not json"]).status.code(), Some(1));
    assert_eq!(run(&["dim", "--group", "nowhere.json", "--mu", "[1,0]"]).status.code(), Some(1));
    assert_eq!(run(&["check", "--suite", "nope"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    let o = run(&["weights", "--group", "f4", "--mu", "[220,420,300,160]"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("cost guard"));
}

#[test]
fn seeds_vary_and_pass() {
    for seed in ["1", "2", "777"] {
        let o = run(&["check", "--seed", seed, "--format", "tsv"]);
        assert_eq!(o.status.code(), Some(0), "seed {seed}: {}", stdout(&o));
    }
    let o = run(&["check-spectral", "--group", "gl2", "--group", "g2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(json(&o)["entries"].as_array().unwrap().iter().all(|e| e["id"].as_str().unwrap().starts_with("spectral/")));
}

#[test]
fn module_commands() {
    let gl2 = preset("gl2");
    let o = run(&["transfer", "--group", &gl2, "--mu", "[1,0]", "--torus", "s1", "--input", r#"[{"torus":"s1","label":"g","value":"1"}]"#]);
    let v = json(&o);
    assert_eq!(v["side"], "J");
    assert_eq!(v["function"][0]["value"], "2");
    let back = serde_json::to_string(&v["function"]).unwrap();
    let o = run(&["transfer", "--group", &gl2, "--mu", "[1,0]", "--torus", "s1", "--input", &back]);
    assert_eq!(json(&o)["function"][0]["value"], "4");
    let o = run(&["hom", "--group", "gl2", "--mu", "[1,0]", "--centralizer", r#"{"order":2,"generators":[["1/2","1/2"]]}"#, "--delta", "[1]"]);
    let v = json(&o);
    assert_eq!((v["hom"].clone(), v["averaging"].clone()), (Value::from(2), Value::from("2")));
    let o = run(&["euler", "--group", r#"{"family":"A","rank":4}"#, "--levi", "[1,3,4]"]);
    assert_eq!(json(&o)["euler"], 10);
    let o = run(&["sign", "--group", "gl3", "--mu", "[1,0,0]", "--format", "tsv"]);
    assert_eq!(stdout(&o), "lhs\t1\nrhs\t1\n");
    let o = run(&["dimension", "--group", "gl3", "--mu", "[1,0,0]"]);
    assert_eq!(json(&o)["dimension"], 2);
    let o = run(&["classify", "--group", "g2", "--mu", "[1,2]"]);
    assert_eq!(o.status.code(), Some(0));
    let o = run(&["pi1", "--group", "sl2", "--format", "tsv"]);
    assert_eq!(stdout(&o), "pi1\t0\npi1_coinvariants\t0\n");
    let o = run(&["kappa", "--group", "a2ad-twisted", "--mu", "[1,0]"]);
    assert_eq!(o.status.code(), Some(0));
    let o = run(&["tensor", "--group", "gl2", "--mu", "[1,0]", "--nu", "[1,0]", "--format", "tsv"]);
    assert_eq!(stdout(&o), "[1,1]\t1\t1\n[2,0]\t1\t3\n");
    let o = run(&["char", "--group", "gl2", "--mu", "[1,0]", "--point", r#"["1/3", 0]"#, "--oracle"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["agree"], true);
    let o = run(&["lefschetz", "--group", "gl2", "--mu", "[1,0]", "--format", "tsv"]);
    assert!(stdout(&o).ends_with("total\t2\nexpected\t2\n"));
    let o = run(&["convolve-fp", "--group", "gl2", "--mu", "[1,0]", "--nu", "[1,0]"]);
    assert_eq!(json(&o)["global_sum"], 4);
    let o = run(&["rhs", "--group", "gl2", "--mu", "[1,0]", "--centralizer", r#"{"order":2,"generators":[["1/2","1/2"]]}"#, "--packet", r#"{"pi":[0]}"#, "--rho", "[1]"]);
    assert_eq!(json(&o)["rhs"]["pi"], -2);
}
