use std::io::{BufRead, BufReader, Read, Write};
use std::net::{TcpListener, TcpStream};
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

const BIN: &str = env!("CARGO_BIN_EXE_ahp");

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../core/fixtures")
        .join(name)
}

fn api() -> PathBuf {
    fixture("steel-pipe-api.model.json")
}

fn ahp(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn squash(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

/// The API fixture with the quality-over-cost judgment reversed to 1/9.
fn flipped_fixture(dir: &Path) -> PathBuf {
    let text = std::fs::read_to_string(api()).unwrap();
    let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
    let js = v["goal_matrix"]["judgments"].as_array_mut().unwrap();
    assert_eq!((js[0]["row"].as_str(), js[0]["col"].as_str()), (Some("quality"), Some("cost")));
    js[0]["value"] = "1/9".into();
    let path = dir.join("flipped.json");
    std::fs::write(&path, serde_json::to_string_pretty(&v).unwrap()).unwrap();
    path
}

#[test]
fn check_reports_every_node() {
    let o = ahp(&["check", p(&api())]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(out.matches("consistent").count(), 5);
    assert!(squash(&out).contains("4 4.2424 0.0808 0.90 0.0898 consistent"));
}

#[test]
fn check_strict_fails_on_reversed_judgment() {
    let dir = tempfile::tempdir().unwrap();
    let path = flipped_fixture(dir.path());
    let o = ahp(&["check", p(&path)]);
    assert_eq!(o.status.code(), Some(0));
    let line = stdout(&o).lines().nth(1).unwrap().to_string();
    assert!(squash(&line).ends_with("4 7.5530 1.1843 0.90 1.3159 inconsistent"), "{line}");

    let o = ahp(&["check", "--strict", p(&path)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(!o.stdout.is_empty());
    assert!(String::from_utf8_lossy(&o.stderr).contains("goal"));

    assert_eq!(ahp(&["check", "--strict", p(&api())]).status.code(), Some(0));
}

#[test]
fn check_threshold_flag_moves_the_line() {
    let o = ahp(&["check", "--strict", "--threshold", "0.08", p(&api())]);
    assert_eq!(o.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&o.stderr).to_string();
    assert!(stderr.contains("goal") && stderr.contains("delivery"), "{stderr}");
}

#[test]
fn bad_inputs_exit_2() {
    assert_eq!(ahp(&["check", "/definitely/not/here.json"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"schema_version": "1", "goal": "g", "criteria": [{"id": "a", "name": "A"}, {"id": "a", "name": "B"}]}"#).unwrap();
    let o = ahp(&["weights", p(&bad)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(o.stdout.is_empty());
    assert!(String::from_utf8_lossy(&o.stderr).contains("duplicate"));
    std::fs::write(&bad, "{").unwrap();
    assert_eq!(ahp(&["rank", p(&bad)]).status.code(), Some(2));
}

#[test]
fn weights_top_row() {
    let o = ahp(&["weights", p(&api())]);
    assert_eq!(o.status.code(), Some(0));
    let first = stdout(&o).lines().nth(1).unwrap().to_string();
    assert!(squash(&first).contains("API/IS spec 0.130 13.0%"), "{first}");
}

#[test]
fn weights_csv_reparses_exactly() {
    let csv_out = stdout(&ahp(&["weights", "--format", "csv", p(&api())]));
    let json_out: serde_json::Value = serde_json::from_str(&stdout(&ahp(&["weights", "--format", "json", p(&api())]))).unwrap();
    let nodes = json_out["weights"]["nodes"].as_array().unwrap();
    let mut rows = 0;
    for (line, node) in csv_out.lines().skip(1).zip(nodes) {
        let cells: Vec<&str> = line.rsplitn(3, ',').collect();
        let global: f64 = cells[0].parse().unwrap();
        let local: f64 = cells[1].parse().unwrap();
        assert!((global - node["global_weight"].as_f64().unwrap()).abs() <= 1e-12);
        assert!((local - node["local_weight"].as_f64().unwrap()).abs() <= 1e-12);
        rows += 1;
    }
    assert_eq!(rows, 29);
}

#[test]
fn depth_one_global_equals_local() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("flat.json");
    std::fs::write(
        &path,
        r#"{"schema_version": "1", "goal": "g",
            "goal_matrix": {"judgments": [{"row": "a", "col": "b", "value": 3}]},
            "criteria": [{"id": "a", "name": "A"}, {"id": "b", "name": "B"}]}"#,
    )
    .unwrap();
    let v: serde_json::Value = serde_json::from_str(&stdout(&ahp(&["weights", "--format", "json", p(&path)]))).unwrap();
    for n in v["weights"]["nodes"].as_array().unwrap().iter().skip(1) {
        assert_eq!(n["local_weight"], n["global_weight"]);
    }
}

#[test]
fn rank_orders_both_fixtures() {
    let out = stdout(&ahp(&["rank", p(&api())]));
    let order: Vec<&str> = out.lines().skip(1).map(|l| l.split_whitespace().nth(1).unwrap()).collect();
    assert_eq!(order, ["A", "E", "B", "C", "D"]);
    assert!(squash(&out).contains("1 A Vendor A 8.872"));

    let out = stdout(&ahp(&["rank", p(&fixture("steel-pipe-is.model.json"))]));
    let order: Vec<&str> = out.lines().skip(1).map(|l| l.split_whitespace().nth(1).unwrap()).collect();
    assert_eq!(order, ["A", "P", "Q", "B", "C"]);
}

#[test]
fn rank_whatif() {
    let before = std::fs::read(api()).unwrap();
    let plain = ahp(&["rank", "--format", "json", p(&api())]);
    let o = ahp(&["rank", "--format", "json", "--whatif", "E:TS=10", p(&api())]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["ranking"]["entries"][0]["alternative_id"], "E");
    assert_ne!(o.stdout, plain.stdout);
    assert_eq!(std::fs::read(api()).unwrap(), before);

    assert_eq!(ahp(&["rank", "--whatif", "E:NOPE=3", p(&api())]).status.code(), Some(2));
    assert_eq!(ahp(&["rank", "--whatif", "E:TS=11", p(&api())]).status.code(), Some(2));
    assert_eq!(ahp(&["rank", "--whatif", "garbage", p(&api())]).status.code(), Some(2));
}

#[test]
fn output_is_deterministic_unless_timestamped() {
    for args in [vec!["check"], vec!["weights"], vec!["rank"], vec!["report"]] {
        let mut full: Vec<&str> = args.clone();
        let path = api();
        full.push(p(&path));
        let a = ahp(&full);
        let b = ahp(&full);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert!(!stdout(&a).contains("generated at"));
    }
    let o = ahp(&["--timestamps", "rank", p(&api())]);
    assert!(stdout(&o).starts_with("# generated at unix time "));
}

#[test]
fn report_files() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.md");
    let b = dir.path().join("b.md");
    assert_eq!(ahp(&["report", p(&api()), "-o", p(&a)]).status.code(), Some(0));
    assert_eq!(ahp(&["report", p(&api()), "-o", p(&b)]).status.code(), Some(0));
    let md = std::fs::read(&a).unwrap();
    assert_eq!(md, std::fs::read(&b).unwrap());
    let md = String::from_utf8(md).unwrap();
    assert!(md.contains("## Consistency summary"));
    assert!(md.matches("\n## ").count() >= 25);

    let csv_dir = dir.path().join("tables");
    let o = ahp(&["report", p(&api()), "--format", "csv", "-o", p(&csv_dir)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(csv_dir.join("ranking.csv").exists());
    assert!(csv_dir.join("matrix_quality.csv").exists());

    let blocker = dir.path().join("file");
    std::fs::write(&blocker, "x").unwrap();
    let o = ahp(&["report", p(&api()), "-o", p(&blocker.join("nested.md"))]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(ahp(&["report", p(&api()), "--format", "pdf"]).status.code(), Some(2));
}

fn http_get(addr: &str, path: &str) -> String {
    let mut s = TcpStream::connect(addr).unwrap();
    write!(s, "GET {path} HTTP/1.1\r\nHost: {addr}\r\nConnection: close\r\n\r\n").unwrap();
    let mut out = String::new();
    s.read_to_string(&mut out).unwrap();
    out
}

#[test]
fn serve_answers_health_and_rejects_busy_port() {
    let dir = tempfile::tempdir().unwrap();
    let mut child = Command::new(BIN)
        .args(["serve", "--port", "0"])
        .env("AHP_STATE_DIR", dir.path())
        .stderr(Stdio::piped())
        .stdout(Stdio::null())
        .spawn()
        .unwrap();
    let mut line = String::new();
    BufReader::new(child.stderr.take().unwrap()).read_line(&mut line).unwrap();
    let addr = line
        .split("http://")
        .nth(1)
        .and_then(|s| s.split_whitespace().next())
        .unwrap_or_else(|| panic!("no address in {line:?}"))
        .to_string();
    let resp = http_get(&addr, "/api/health");
    child.kill().unwrap();
    child.wait().unwrap();
    assert!(resp.starts_with("HTTP/1.1 200"), "{resp}");
    assert!(resp.contains("\"status\":\"ok\""));

    let busy = TcpListener::bind("127.0.0.1:0").unwrap();
    let port = busy.local_addr().unwrap().port().to_string();
    let o = Command::new(BIN)
        .args(["serve", "--port", &port, "--state-dir", p(dir.path())])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("cannot listen"));
}
