use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn negsssp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_negsssp")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn corpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

const G1: &str = "# a -> b -> c\n3 2\n1 2 -2\n2 3 1\n";

#[test]
fn solves_g1() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "g1.graph", G1);
    let o = negsssp(&["solve", g.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "1 0\n2 -2\n3 -1\n");
}

#[test]
fn all_algorithms_agree_on_g1() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "g1.graph", G1);
    for algo in ["elimination", "fineman", "bfd", "bellman-ford"] {
        let o = negsssp(&["solve", g.to_str().unwrap(), "2", "--algo", algo, "--oracle"]);
        assert_eq!(o.status.code(), Some(0), "{algo}");
        assert_eq!(stdout(&o), "1 inf\n2 0\n3 1\n", "{algo}");
    }
}

#[test]
fn alias_is_hidden_from_help() {
    let o = negsssp(&["solve", "--help"]);
    let help = stdout(&o);
    assert!(help.contains("elimination"));
    assert!(!help.contains("fineman"));
}

#[test]
fn cycle_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("cycle.graph");
    let o = negsssp(&["generate", "--n", "40", "--m", "120", "--k", "10", "--tag", "cycle-planted", "--seed", "3", "-o"]
        .into_iter()
        .chain([g.to_str().unwrap()])
        .collect::<Vec<_>>());
    assert_eq!(o.status.code(), Some(0));
    for algo in ["elimination", "bfd", "bellman-ford"] {
        let o = negsssp(&["solve", g.to_str().unwrap(), "--algo", algo]);
        assert_eq!(o.status.code(), Some(2), "{algo}");
        assert_eq!(stdout(&o), "NEGATIVE_CYCLE\n");
    }
}

#[test]
fn nonnegative_input_matches_bellman_ford_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("k0.graph");
    let o = negsssp(&["generate", "--n", "300", "--m", "1200", "--k", "0", "--seed", "5", "-o", g.to_str().unwrap()]);
    assert!(o.status.success());
    let a = negsssp(&["solve", g.to_str().unwrap()]);
    let b = negsssp(&["solve", g.to_str().unwrap(), "--algo", "bellman-ford"]);
    assert!(a.status.success() && b.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn generate_is_reproducible() {
    let args = ["generate", "--n", "3", "--m", "2", "--k", "1", "--seed", "7"];
    let a = negsssp(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, negsssp(&args).stdout);
    let text = stdout(&a);
    assert!(text.starts_with("3 2\n"));
    assert_eq!(text.lines().count(), 3);
    assert_eq!(text.lines().skip(1).filter(|l| l.ends_with(|c: char| c.is_ascii_digit()) && l.contains(" -")).count(), 1);
}

#[test]
fn infeasible_spec_fails() {
    let o = negsssp(&["generate", "--n", "3", "--m", "9", "--k", "0"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(!o.stderr.is_empty());
}

#[test]
fn malformed_file_fails() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "bad.graph", "2 1\n1 3 4\n");
    let o = negsssp(&["solve", g.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
    assert!(o.stdout.is_empty());
    let o = negsssp(&["solve", dir.path().join("missing.graph").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn float_weights() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "f.graph", "3 3\n1 2 -0.5\n2 3 0.25\n1 3 1\n");
    let o = negsssp(&["solve", g.to_str().unwrap(), "--oracle"]);
    assert_eq!(o.status.code(), Some(0));
    let lines: Vec<String> = stdout(&o).lines().map(String::from).collect();
    assert_eq!(lines.len(), 3);
    let d: Vec<f64> = lines.iter().map(|l| l.split(' ').nth(1).unwrap().parse().unwrap()).collect();
    assert_eq!(d, vec![0.0, -0.5, -0.25]);
}

#[test]
fn validate_reports_sizes() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "g1.graph", G1);
    let o = negsssp(&["validate", g.to_str().unwrap()]);
    assert_eq!(stdout(&o), "n=3 m=2 negative=1 weights=integer\n");
}

#[test]
fn stats_record() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("u.graph");
    let s = dir.path().join("run.json");
    negsssp(&["generate", "--n", "400", "--m", "1600", "--k", "120", "--seed", "2", "-o", g.to_str().unwrap()]);
    let o = negsssp(&["solve", g.to_str().unwrap(), "--seed", "9", "--stats", s.to_str().unwrap()]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&s).unwrap()).unwrap();
    for key in ["instance", "n", "m", "k", "algo", "seed", "wall_ms", "batches", "verdict"] {
        assert!(v.get(key).is_some(), "{key}");
    }
    assert_eq!(v["n"], 400);
    assert_eq!(v["k"], 120);
    assert_eq!(v["algo"], "elimination");
    assert_eq!(v["verdict"], "distances");
    let batches = v["batches"].as_array().unwrap();
    assert!(!batches.is_empty());
    for b in batches {
        assert!(b["eliminated"].as_u64().unwrap() >= 1);
        assert!(["sandwich", "independent-set", "betweenness"].contains(&b["branch"].as_str().unwrap()));
    }
}

#[test]
fn bench_report() {
    let dir = tempfile::tempdir().unwrap();
    for (i, n) in [100, 200, 400].into_iter().enumerate() {
        let sub = dir.path().join("uniform");
        std::fs::create_dir_all(&sub).unwrap();
        let (m, k) = ((4 * n).to_string(), (n / 4).to_string());
        let p = sub.join(format!("{i}.graph"));
        negsssp(&["generate", "--n", &n.to_string(), "--m", &m, "--k", &k, "--seed", "1", "-o", p.to_str().unwrap()]);
    }
    let report = dir.path().join("report.json");
    let o = negsssp(&["bench", dir.path().to_str().unwrap(), "-o", report.to_str().unwrap(), "--threads", "1"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    let entries = v["instances"].as_array().unwrap();
    assert_eq!(entries.len(), 3);
    let sizes: Vec<u64> = entries.iter().map(|e| e["n"].as_u64().unwrap()).collect();
    assert_eq!(sizes, vec![100, 200, 400]);
    for e in entries {
        assert_eq!(e["agree"], true);
        assert!(e["elimination_ms"].as_f64().unwrap() >= 0.0);
        assert!(e["bellman_ford_ms"].as_f64().unwrap() >= 0.0);
        assert!(e["ratio"].is_number());
    }
}

#[test]
fn bench_on_empty_corpus_fails() {
    let dir = tempfile::tempdir().unwrap();
    let o = negsssp(&["bench", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn shipped_corpus_passes_oracle_check() {
    let mut files: Vec<PathBuf> = Vec::new();
    for tag in std::fs::read_dir(corpus_dir()).unwrap() {
        let tag = tag.unwrap().path();
        if tag.is_dir() {
            files.extend(std::fs::read_dir(&tag).unwrap().map(|f| f.unwrap().path()));
        }
    }
    assert!(!files.is_empty());
    for f in files {
        let o = negsssp(&["solve", f.to_str().unwrap(), "--oracle"]);
        let cycle = f.to_str().unwrap().contains("cycle-planted");
        assert_eq!(o.status.code(), Some(if cycle { 2 } else { 0 }), "{}", f.display());
    }
}
