use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use ppbwt::pcore::symbols_of;
use ppbwt::{AlphabetConfig, Pbwt};
use tempfile::TempDir;

fn ppbwt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ppbwt")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

struct Fixture {
    dir: TempDir,
}

impl Fixture {
    fn new() -> Self {
        Fixture { dir: TempDir::new().unwrap() }
    }

    fn file(&self, name: &str, body: &str) -> PathBuf {
        let p = self.dir.path().join(name);
        fs::write(&p, body).unwrap();
        p
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn running_example(fx: &Fixture) -> (PathBuf, PathBuf, PathBuf) {
    let text = fx.file("t.txt", "xyazyxazxza");
    let alpha = fx.file("t.alpha", "sentinel $\nstatic a\nparam x y z\n");
    let snap = fx.path("t.snap");
    let o = ppbwt(&["build", "-i", s(&text), "-a", s(&alpha), "-o", s(&snap), "-s", "4", "--dump"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    (text, alpha, snap)
}

#[test]
fn build_prints_running_example() {
    let fx = Fixture::new();
    let text = fx.file("t.txt", "xyazyxazxza");
    let alpha = fx.file("t.alpha", "sentinel $\nstatic a\nparam x y z\n");
    let snap = fx.path("t.snap");
    let o = ppbwt(&["build", "-i", s(&text), "-a", s(&alpha), "-o", s(&snap), "-s", "4", "--dump"]);
    let out = stdout(&o);
    assert!(out.starts_with("n=12 sigma_s=1 sigma_p=3 "), "{out}");
    assert!(out.contains("F: $,a,a,a,1,2,2,2,3,3,2,3\n"));
    assert!(out.contains("L: a,1,2,2,2,3,3,2,3,$,a,a\n"));
    assert!(out.contains("LCP: 0,0,0,2,0,1,2,1,2,3,2,2\n"));
    assert!(out.contains("SA: 12,11,7,3,10,6,2,9,5,1,8,4\n"));
}

#[test]
fn running_example_snapshot_queries() {
    let fx = Fixture::new();
    let (_, _, snap) = running_example(&fx);
    let o = ppbwt(&["count", "-x", s(&snap), "-p", "za", "-p", "yy", "-p", "azy"]);
    assert_eq!(stdout(&o), "3\n0\n2\n");
    let o = ppbwt(&["locate", "-x", s(&snap), "-p", "za"]);
    assert_eq!(stdout(&o), "2 6 10\n");
    let o = ppbwt(&["locate", "-x", s(&snap), "-p", "za", "--format", "json"]);
    let rec: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(rec["count"], 3);
    assert_eq!(rec["positions"], serde_json::json!([2, 6, 10]));
    let o = ppbwt(&["count", "-x", s(&snap), "-p", "aaa", "--format", "json"]);
    assert_eq!(stdout(&o).trim(), r#"{"count":0,"pattern":"aaa"}"#);
}

#[test]
fn round_trip_matches_in_memory_index() {
    let fx = Fixture::new();
    let body = "if (x > y) { x = y + 1; } else { y = x * z; } while (a < b) a = a + b;";
    let text = fx.file("code.txt", body);
    let snap = fx.path("code.snap");
    assert!(ppbwt(&["build", "-i", s(&text), "-o", s(&snap), "-s", "5"]).status.success());
    let symbols = symbols_of(body);
    let idx = Pbwt::build(&symbols, AlphabetConfig::infer(&symbols).unwrap(), 5).unwrap();
    let patterns = ["x = y", "a = a + b", "q = q", "(x", "zz", "; }", "b;"];
    let patterns_file = fx.file("pats.txt", &patterns.join("\n"));
    let o = ppbwt(&["locate", "-x", s(&snap), "--patterns-file", s(&patterns_file)]);
    assert!(o.status.success());
    for (line, p) in stdout(&o).lines().zip(patterns) {
        let mut want = idx.locate(&symbols_of(p), None).unwrap();
        want.sort_unstable();
        let got: Vec<usize> = line.split_whitespace().map(|x| x.parse().unwrap()).collect();
        assert_eq!(got, want, "pattern {p:?}");
    }
    assert_eq!(stdout(&o).lines().count(), patterns.len());
    assert!(!stdout(&ppbwt(&["count", "-x", s(&snap), "-p", "x = y"])).starts_with('0'));
}

#[test]
fn empty_input_gives_sentinel_only_snapshot() {
    let fx = Fixture::new();
    let text = fx.file("empty.txt", "");
    let snap = fx.path("empty.snap");
    let o = ppbwt(&["build", "-i", s(&text), "-o", s(&snap), "--format", "json"]);
    assert!(o.status.success());
    let rec: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!((rec["n"].as_u64(), rec["k"].as_u64()), (Some(1), Some(1)));
    assert_eq!(stdout(&ppbwt(&["count", "-x", s(&snap), "-p", "x"])), "0\n");
    assert_eq!(stdout(&ppbwt(&["locate", "-x", s(&snap), "-p", "x"])), "\n");
}

#[test]
fn verify_reports_clean_builds() {
    let fx = Fixture::new();
    let (text, alpha, _) = running_example(&fx);
    let o = ppbwt(&["verify", "-i", s(&text), "-a", s(&alpha)]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "OK n=12 checked=11 iter_count=7");
    let single = fx.file("one.txt", "q");
    assert!(ppbwt(&["verify", "-i", s(&single)]).status.success());
    let o = ppbwt(&["verify", "-i", s(&text), "-a", s(&alpha), "--every", "5"]);
    assert!(stdout(&o).contains("checked=3"), "{}", stdout(&o));
}

#[test]
fn trim_drops_trailing_newline() {
    let fx = Fixture::new();
    let text = fx.file("nl.txt", "xyx\n");
    let snap = fx.path("nl.snap");
    let plain = stdout(&ppbwt(&["build", "-i", s(&text), "-o", s(&snap)]));
    assert!(plain.starts_with("n=5 sigma_s=1 "), "{plain}");
    let trimmed = stdout(&ppbwt(&["build", "-i", s(&text), "-o", s(&snap), "--trim"]));
    assert!(trimmed.starts_with("n=4 sigma_s=0 sigma_p=2 "), "{trimmed}");
}

#[test]
fn errors_exit_nonzero() {
    let fx = Fixture::new();
    let bad = fx.file("bad.snap", "not a snapshot");
    let o = ppbwt(&["count", "-x", s(&bad), "-p", "x"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("invalid snapshot"));

    let (text, _, snap) = running_example(&fx);
    let o = ppbwt(&["count", "-x", s(&snap), "-p", "x$"]);
    assert_eq!(o.status.code(), Some(2));

    let narrow = fx.file("narrow.alpha", "sentinel $\nparam x y z\n");
    let o = ppbwt(&["build", "-i", s(&text), "-a", s(&narrow), "-o", s(&fx.path("n.snap"))]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("not part of the alphabet"));

    let o = ppbwt(&["build", "-i", s(&text), "-o", s(&fx.path("c.snap")), "--capacity", "3"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn bench_emits_csv() {
    let o = ppbwt(&["bench", "--sizes", "50,100", "--sigma-p", "3", "--queries", "5"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "n,sigma_s,sigma_p,build_ms,count_us,locate_us,heap_bytes,iter_per_n");
    assert_eq!(lines.len(), 3);
    for row in &lines[1..] {
        let cols: Vec<&str> = row.split(',').collect();
        assert_eq!(cols.len(), 8);
        let ratio: f64 = cols[7].parse().unwrap();
        assert!(ratio <= 3.0 + 3.0 / cols[0].parse::<f64>().unwrap());
    }
}
