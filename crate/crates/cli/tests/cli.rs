use std::path::PathBuf;
use std::process::{Command, Output};

fn measure(name: &str) -> String {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../measures");
    root.join(format!("{name}.json")).to_string_lossy().into_owned()
}

fn fracmax(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fracmax")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("json output")
}

#[test]
fn eval_reports_exact_value() {
    let o = fracmax(&["eval", "--measure", &measure("cantor"), "--x", "19/27"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["value"], "5/8");
    assert_eq!(v["exact"], true);
}

#[test]
fn verify_covering_suite_passes() {
    let o = fracmax(&["verify", "--suite", "covering", "--measure", &measure("cantor"), "--depth", "8", "--seed", "7"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(json(&o)["passed"], true);
}

#[test]
fn image_bound_reports_decreasing_bounds() {
    let o = fracmax(&["image-bound", "--measure", &measure("cantor"), "--levels", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    let levels = v["levels"].as_array().unwrap();
    assert_eq!(levels.len(), 3);
    let bounds: Vec<f64> = levels.iter().map(|l| parse(l["surviving_mass"]["hi"].as_str().unwrap())).collect();
    assert!(bounds.windows(2).all(|w| w[1] < w[0]), "{bounds:?}");
    assert_eq!(v["holds"], true);
}

fn parse(s: &str) -> f64 {
    match s.split_once('/') {
        Some((n, d)) => n.parse::<f64>().unwrap() / d.parse::<f64>().unwrap(),
        None => s.parse().unwrap(),
    }
}

#[test]
fn contact_scan_rows() {
    let o = fracmax(&["contact-scan", "--measure", &measure("cantor"), "--grid", "0,1,27", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let rows: Vec<csv::StringRecord> = reader.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), 27);
    let row = rows.iter().find(|r| &r[0] == "2/3").expect("row at 2/3");
    assert_eq!(&row[1], "1/2");
    assert!(parse(&row[3]) >= 5.0 / 8.0 - 1e-6);
    assert_eq!(&row[5], "detached");
    // right endpoints of the first gaps
    for x in ["2/9", "8/9"] {
        let r = rows.iter().find(|r| &r[0] == x).unwrap();
        assert_eq!(&r[5], "detached", "x = {x}");
    }
    let single = fracmax(&["contact-scan", "--measure", "cantor", "--grid", "1/3,1,1", "--format", "csv"]);
    assert_eq!(stdout(&single).lines().count(), 2);
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("gaps.csv");
    let o = fracmax(&["gaps", "--measure", "cantor", "--depth", "3", "--format", "csv", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), 1 + 7);
    assert!(text.contains("1/3,2/3"));
}

#[test]
fn restricted_maximal_accepts_infinite_ends() {
    let o = fracmax(&["maximal", "--measure", "cantor", "--x", "2/3", "--a", "-inf", "--b", "inf", "--tol", "1/10000"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&o);
    assert_eq!(v["mode"]["restriction"], "(-inf, inf)");
    assert_eq!(v["contact"]["verdict"], "detached");
}

#[test]
fn sums_of_measures() {
    let o = fracmax(&["eval", "--measure", "cantor", "--measure", &measure("quarter-cantor"), "--x", "1/2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["value"], "1");
}

#[test]
fn cantor_pattern_outputs() {
    let o = fracmax(&["cantor-pattern", "--x", "9/16", "--levels", "8"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["positions"], serde_json::json!([1, 4]));
    let cover = fracmax(&["cantor-pattern", "--levels", "6"]);
    assert_eq!(cover.status.code(), Some(0));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(fracmax(&["eval", "--x", "1/2"]).status.code(), Some(2));
    assert_eq!(fracmax(&["eval", "--measure", "cantor", "--x", "one half"]).status.code(), Some(2));
    assert_eq!(fracmax(&["eval", "--measure", "/no/such/file.json", "--x", "1/2"]).status.code(), Some(2));
    assert_eq!(fracmax(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(fracmax(&["verify", "--suite", "nonsense"]).status.code(), Some(2));
    assert_eq!(fracmax(&["contact-scan", "--measure", "cantor", "--grid", "0,1"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"maps": [{"rho": "1/2", "t": "0"}, {"rho": "1/2", "t": "1/4"}], "weights": ["1/2", "1/2"]}"#).unwrap();
    assert_eq!(fracmax(&["eval", "--measure", bad.to_str().unwrap(), "--x", "0"]).status.code(), Some(2));
}

#[test]
fn budget_exhaustion_exits_1() {
    let o = Command::new(env!("CARGO_BIN_EXE_fracmax"))
        .args(["gaps", "--measure", "cantor", "--depth", "10"])
        .env("FM_NODE_BUDGET", "4")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("budget"));
}
