use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn fpa(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_fpa")).args(args).output().expect("binary runs");
    Run {
        code: out.status.code().expect("exit code"),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn grid(k: i64) -> String {
    let items: Vec<String> = (0..=k).map(|j| format!("\"{}\"", fpa_core::rational::format_rational(&fpa_core::rational::rat(j, k)))).collect();
    format!("[{}]", items.join(","))
}

/// Three equally likely value pairs (0,1), (1/2,1/2), (1,0).
fn anti_diagonal(dir: &Path) -> PathBuf {
    let text = format!(
        r#"{{"kind":"dfpa","bids":{},"value_spaces":[["0","1/2","1"],["0","1/2","1"]],
        "support":[{{"values":["0","1"],"mass":"1/3"}},{{"values":["1/2","1/2"],"mass":"1/3"}},{{"values":["1","0"],"mass":"1/3"}}]}}"#,
        grid(10)
    );
    write(dir, "anti.json", &text)
}

fn uniform_iid(dir: &Path, n: usize, k: i64) -> PathBuf {
    let text = format!(r#"{{"kind":"cfpa-iid","bids":{},"n":{n},"breakpoints":["0","1"],"densities":["1"]}}"#, grid(k));
    write(dir, &format!("uniform{n}.json"), &text)
}

#[test]
fn search_and_verify_on_anti_diagonal() {
    let dir = tempfile::tempdir().unwrap();
    let inst = anti_diagonal(dir.path());
    let found = dir.path().join("found.json");
    let log = dir.path().join("log.jsonl");
    let r = fpa(&["solve-pure", "--instance", p(&inst), "--out", p(&found), "--log", p(&log)]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let lines = fs::read_to_string(&log).unwrap();
    let last: Value = serde_json::from_str(lines.lines().last().unwrap()).unwrap();
    assert_eq!(last["passed"], true);
    assert_eq!(last["index"].as_u64().unwrap() + 1, lines.lines().count() as u64);

    let r = fpa(&["verify", "--instance", p(&inst), "--profile", p(&found), "--eps", "0"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let rec: Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(rec["passed"], true);

    let r = fpa(&["solve-pure", "--instance", p(&inst), "--monotone", "--eps", "1/100"]);
    assert_eq!(r.code, 3);
    let rec: Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(rec["found"], false);
}

#[test]
fn utility_and_best_response() {
    let dir = tempfile::tempdir().unwrap();
    let inst = anti_diagonal(dir.path());
    let zero = write(dir.path(), "zero.json", r#"{"kind":"pure","strategies":[["0","0","0"],["0","0","0"]]}"#);
    let r = fpa(&["utility", "--instance", p(&inst), "--profile", p(&zero), "--value", "1/2", "--bid", "0"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let rec: Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(rec["win_prob"], "1/2");
    assert_eq!(rec["utility"], "1/4");
    let r = fpa(&["best-response", "--instance", p(&inst), "--profile", p(&zero), "--value", "1/2"]);
    let rec: Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(rec["argmax"], serde_json::json!(["1/10"]));
    assert_eq!(rec["max_utility"], "2/5");

    let r = fpa(&["verify", "--instance", p(&inst), "--profile", p(&zero)]);
    assert_eq!(r.code, 1);
    let rec: Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(rec["passed"], false);
    assert!(!rec["violations"].as_array().unwrap().is_empty());
}

#[test]
fn marginal_and_validate() {
    let dir = tempfile::tempdir().unwrap();
    let inst = anti_diagonal(dir.path());
    let r = fpa(&["marginal", "--instance", p(&inst), "--bidder", "1"]);
    let rec: Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(rec["masses"], serde_json::json!(["1/3", "1/3", "1/3"]));
    let r = fpa(&["validate", "--instance", p(&inst)]);
    assert_eq!(r.code, 0);
    let rec: Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(rec["bidders"], 2);
    assert_eq!(rec["bids"], 11);
}

#[test]
fn reduction_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let cnf = write(dir.path(), "tiny.cnf", "c tiny\np cnf 2 1\n1 -2 0\n");
    let r = fpa(&["from-sat", p(&cnf)]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let inst = dir.path().join("tiny.instance.json");
    let map = dir.path().join("tiny.map.json");
    let params = dir.path().join("tiny.params.json");
    assert!(inst.exists() && map.exists() && params.exists());
    let eps_threshold = json(&params)["eps_threshold"].as_str().unwrap().to_string();
    let half = fpa_core::rational::parse_rational(&eps_threshold).unwrap() / fpa_core::rational::int(2);
    let half = fpa_core::rational::format_rational(&half);

    let profile = dir.path().join("enc.json");
    let r = fpa(&["encode", "--map", p(&map), "--assignment", "1,0", "--out", p(&profile)]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let r = fpa(&["verify", "--instance", p(&inst), "--profile", p(&profile), "--eps", &half]);
    assert_eq!(r.code, 0, "{}", r.stdout);
    let r = fpa(&["extract", "--map", p(&map), "--profile", p(&profile)]);
    assert_eq!(r.code, 0);
    let rec: Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(rec["assignment"], serde_json::json!([true, false]));
    assert_eq!(rec["satisfies"], true);

    let mut broken = json(&profile);
    broken["strategies"][1] = serde_json::json!(["0", "1/7", "1/7"]);
    let broken_path = write(dir.path(), "broken.json", &broken.to_string());
    let r = fpa(&["extract", "--map", p(&map), "--profile", p(&broken_path)]);
    assert_eq!(r.code, 3);

    // Rebuilding from the saved params reproduces the instance byte for byte.
    let again = dir.path().join("again.json");
    let r = fpa(&["from-sat", p(&cnf), "--deltas", p(&params), "--instance", p(&again), "--map", p(&dir.path().join("m2.json")), "--params", p(&dir.path().join("p2.json"))]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(fs::read(&again).unwrap(), fs::read(&inst).unwrap());
}

#[test]
fn densify_and_plot() {
    let dir = tempfile::tempdir().unwrap();
    let inst = uniform_iid(dir.path(), 2, 10);
    let strategy = dir.path().join("s.json");
    let cert = dir.path().join("c.json");
    let csv = dir.path().join("beta.csv");
    let r = fpa(&["densify", "--instance", p(&inst), "--strategy", p(&strategy), "--certificate", p(&cert), "--csv", p(&csv), "--samples", "20"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let c = json(&cert);
    assert_eq!(c["holds"], true);
    assert_eq!(c["gamma"], "2");
    let r = fpa(&["verify", "--instance", p(&inst), "--profile", p(&strategy), "--eps", c["claimed"].as_str().unwrap()]);
    assert_eq!(r.code, 0, "{}", r.stdout);

    let text = fs::read_to_string(&csv).unwrap();
    let mut rows = text.lines();
    assert_eq!(rows.next(), Some("v,beta,beta_tilde"));
    for row in rows {
        let cols: Vec<&str> = row.split(',').collect();
        let v = fpa_core::rational::parse_rational(cols[0]).unwrap();
        let tilde = fpa_core::rational::parse_rational(cols[2]).unwrap();
        let beta: f64 = cols[1].parse().unwrap();
        let exact = fpa_core::rational::format_rational(&(v / fpa_core::rational::int(2)));
        let exact = exact.split_once('/').map_or_else(|| exact.parse::<f64>().unwrap(), |(a, b)| a.parse::<f64>().unwrap() / b.parse::<f64>().unwrap());
        assert!((beta - exact).abs() < 1e-9);
        let t: f64 = fpa_core::rational::format_rational(&tilde).split_once('/').map_or(0.0, |(a, b)| a.parse::<f64>().unwrap() / b.parse::<f64>().unwrap());
        assert!(t <= exact + 1e-12 && t >= exact - 0.1 - 1e-9);
    }

    // The staircase CSV hands back the exact thresholds.
    let r = fpa(&["emit-plot", "--instance", p(&inst), "--profile", p(&strategy)]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let mut lines = r.stdout.lines();
    assert_eq!(lines.next(), Some("v,bid"));
    let rows: Vec<(fpa_core::Rational, fpa_core::Rational)> = lines
        .map(|l| {
            let (a, b) = l.split_once(',').unwrap();
            (fpa_core::rational::parse_rational(a).unwrap(), fpa_core::rational::parse_rational(b).unwrap())
        })
        .collect();
    assert!(rows.windows(2).all(|w| w[0].0 < w[1].0 && w[0].1 <= w[1].1));
    let thresholds: Vec<String> = json(&strategy)["strategies"][0].as_array().unwrap().iter().map(|t| t.as_str().unwrap().to_string()).collect();
    for k in 1..thresholds.len() - 1 {
        let bid = fpa_core::rational::rat(k as i64, 10);
        let t = rows.iter().filter(|(_, b)| *b < bid).map(|(v, _)| v.clone()).max().unwrap();
        assert_eq!(fpa_core::rational::format_rational(&t), thresholds[k]);
    }
}

#[test]
fn lift_affiliation_and_project() {
    let dir = tempfile::tempdir().unwrap();
    let apv = write(
        dir.path(),
        "apv.json",
        r#"{"kind":"dfpa","bids":["0","1/4","1/2","3/4","1"],"value_spaces":[["1/4","3/4"],["1/4","3/4"]],
        "support":[{"values":["1/4","1/4"],"mass":"3/8"},{"values":["1/4","3/4"],"mass":"1/8"},
                   {"values":["3/4","1/4"],"mass":"1/8"},{"values":["3/4","3/4"],"mass":"3/8"}]}"#,
    );
    let lifted = dir.path().join("lifted.json");
    let meta = dir.path().join("meta.json");
    let r = fpa(&["lift", "--instance", p(&apv), "--meta", p(&meta), "--out", p(&lifted)]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(fpa(&["check-affiliation", "--instance", p(&lifted)]).code, 0);
    assert_eq!(json(&meta)["instance"], json(&lifted));

    // Bid 0 on the low cube, 1/4 on the high one.
    let step = r#"["0","3/4","1","1","1","1"]"#;
    let jump = write(dir.path(), "jump.json", &format!(r#"{{"kind":"jump","strategies":[{step},{step}]}}"#));
    let projected = dir.path().join("proj.json");
    let r = fpa(&["project", "--lift", p(&meta), "--profile", p(&jump), "--out", p(&projected)]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let rows = &json(&projected)["strategies"][0];
    assert_eq!(rows[0], serde_json::json!(["1", "0", "0", "0", "0"]));
    assert_eq!(rows[1], serde_json::json!(["0", "1", "0", "0", "0"]));
    let r = fpa(&["verify", "--instance", p(&apv), "--profile", p(&projected)]);
    assert_eq!(r.code, 0, "{}", r.stdout);

    let anti = anti_diagonal(dir.path());
    let r = fpa(&["check-affiliation", "--instance", p(&anti)]);
    assert_eq!(r.code, 1);
    let rec: Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(rec["affiliated"], false);
}

#[test]
fn jump_search_and_shrink() {
    let dir = tempfile::tempdir().unwrap();
    let inst = uniform_iid(dir.path(), 2, 2);
    let out = dir.path().join("j.json");
    let r = fpa(&["jump-search", "--instance", p(&inst), "--eps", "1/8", "--symmetric", "--out", p(&out)]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(fpa(&["verify", "--instance", p(&inst), "--profile", p(&out), "--eps", "1/8"]).code, 0);

    let big = uniform_iid(dir.path(), 3, 10);
    let small = dir.path().join("small.json");
    let report = dir.path().join("report.json");
    let r = fpa(&["shrink", "--instance", p(&big), "--target", "5", "--out", p(&small), "--report", p(&report)]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(json(&report)["guarantee"], "1/4");
    assert_eq!(json(&small)["bids"], serde_json::json!(["0", "1/5", "1/2", "7/10", "1"]));
    assert_eq!(fpa(&["validate", "--instance", p(&small)]).code, 0);
}

#[test]
fn error_codes_and_records() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("nope.json");
    let r = fpa(&["validate", "--instance", p(&missing)]);
    assert_eq!(r.code, 4);
    let rec: Value = serde_json::from_str(r.stderr.trim()).unwrap();
    assert_eq!(rec["error"], "io");
    assert_eq!(rec["code"], 4);

    let junk = write(dir.path(), "junk.json", "{not json");
    assert_eq!(fpa(&["validate", "--instance", p(&junk)]).code, 5);
    let dec = write(dir.path(), "dec.json", r#"{"kind":"cfpa-iid","bids":["0","0.5"],"n":2,"breakpoints":["0","1"],"densities":["1"]}"#);
    assert_eq!(fpa(&["validate", "--instance", p(&dec)]).code, 5);

    let bad = write(dir.path(), "bad.json", r#"{"kind":"dfpa","bids":["0"],"value_spaces":[["1"]],"support":[{"values":["1"],"mass":"1/2"}]}"#);
    let r = fpa(&["validate", "--instance", p(&bad)]);
    assert_eq!(r.code, 6);
    let rec: Value = serde_json::from_str(r.stderr.trim()).unwrap();
    assert_eq!(rec["error"], "invalid");
    assert!(!rec["violations"].as_array().unwrap().is_empty());

    let inst = anti_diagonal(dir.path());
    assert_eq!(fpa(&["verify", "--instance", p(&inst), "--profile", p(&inst), "--eps", "0.01"]).code, 2);
    assert_eq!(fpa(&["solve-pure", "--instance", p(&inst), "--budget", "10"]).code, 7);
    assert_eq!(fpa(&["densify", "--instance", p(&inst)]).code, 8);
}

#[test]
fn outputs_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let inst = uniform_iid(dir.path(), 3, 7);
    let a = fpa(&["densify", "--instance", p(&inst)]);
    let b = fpa(&["densify", "--instance", p(&inst)]);
    assert_eq!(a.code, 0, "{}", a.stderr);
    assert_eq!(a.stdout, b.stdout);
    let anti = anti_diagonal(dir.path());
    let a = fpa(&["solve-pure", "--instance", p(&anti)]);
    let b = fpa(&["solve-pure", "--instance", p(&anti)]);
    assert_eq!(a.stdout, b.stdout);
}
