//! End-to-end runs of the `smallcut` binary.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

use smallcut::graph::parse_graph;
use smallcut::oracle::oracle_bridges_articulations;
use smallcut::report::CutReport;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_smallcut"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn run_stdin(args: &[&str], input: &str) -> Output {
    let mut child = bin()
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    assert!(o.status.success(), "failed: {}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// A fresh scratch directory per test.
fn scratch(name: &str) -> PathBuf {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join(format!("cli-{name}"));
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn gen(dir: &Path, file: &str, args: &[&str]) -> String {
    let path = dir.join(file);
    let mut full = vec!["gen"];
    full.extend_from_slice(args);
    full.extend(["--out", path.to_str().unwrap()]);
    stdout(&run(&full));
    path.to_str().unwrap().to_string()
}

#[test]
fn path_of_five_has_four_cut_edges() {
    let graph = stdout(&run(&["gen", "path", "5"]));
    for mode in ["seq", "dist"] {
        let out = stdout(&run_stdin(&[mode, "cut-edges", "--graph", "-", "--las-vegas"], &graph));
        let report = CutReport::from_json(&out).unwrap();
        assert_eq!(report.cut_edges, Some(vec![0, 1, 2, 3]), "{mode}");
        assert_eq!(report.verified, Some(true));
    }
}

#[test]
fn generated_shapes_have_the_expected_counts() {
    let dir = scratch("gen");
    let c4 = gen(&dir, "c4.txt", &["cycle", "4"]);
    let shape = |path: &str| {
        let g = parse_graph(&fs::read_to_string(path).unwrap()).unwrap();
        (g.n(), g.m(), oracle_bridges_articulations(&g).0.len())
    };
    let with_cycle = gen(&dir, "gc.txt", &["attach-cycle", "4", "0", "--base", &c4]);
    assert_eq!(shape(&with_cycle), (7, 8, 0));
    let with_path = gen(&dir, "gp.txt", &["attach-path", "4", "0", "--base", &c4]);
    assert_eq!(shape(&with_path), (7, 7, 3));
    let fig2 = gen(&dir, "fig2.txt", &["fig2"]);
    assert_eq!(shape(&fig2), (6, 9, 0));
}

#[test]
fn las_vegas_runs_match_the_oracle() {
    let dir = scratch("diff");
    let graph = gen(&dir, "fig6.txt", &["fig6"]);
    let oracle = dir.join("oracle.json");
    stdout(&run(&["oracle", "--graph", &graph, "--out", oracle.to_str().unwrap()]));
    for mode in ["seq", "dist"] {
        let report = dir.join(format!("{mode}.json"));
        stdout(&run(&[mode, "all", "--graph", &graph, "--seed", "3", "--las-vegas", "--out", report.to_str().unwrap()]));
        let diff = run(&["diff", report.to_str().unwrap(), oracle.to_str().unwrap()]);
        assert_eq!(diff.status.code(), Some(0), "{mode}: {}", String::from_utf8_lossy(&diff.stdout));
    }
}

#[test]
fn reruns_are_byte_identical() {
    let dir = scratch("rerun");
    let graph = gen(&dir, "g.txt", &["random", "20", "34", "5"]);
    let mut outputs = Vec::new();
    for i in 0..2 {
        let trace = dir.join(format!("trace{i}.txt"));
        let phi = dir.join(format!("phi{i}.txt"));
        let dist = stdout(&run(&[
            "dist", "all", "--graph", &graph, "--seed", "11", "--las-vegas",
            "--trace", trace.to_str().unwrap(), "--dump-phi", phi.to_str().unwrap(),
        ]));
        let seq = stdout(&run(&["seq", "all", "--graph", &graph, "--seed", "11"]));
        outputs.push((dist, seq, fs::read(&trace).unwrap(), fs::read(&phi).unwrap()));
    }
    assert!(!outputs[0].2.is_empty());
    assert_eq!(outputs[0], outputs[1]);
}

#[test]
fn bench_rounds_grow_with_the_cycle() {
    let csv = stdout(&run(&["bench", "cut-edges", "--family", "cycle", "--sizes", "16,64,256"]));
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("algo,n,m,diameter,rounds,messages,max_bits,seed"));
    let rounds: Vec<u64> = lines.map(|l| l.split(',').nth(4).unwrap().parse().unwrap()).collect();
    assert_eq!(rounds.len(), 3);
    assert!(rounds.windows(2).all(|w| w[0] < w[1]), "{rounds:?}");
}

#[test]
fn metrics_csv_appends_after_one_header() {
    let dir = scratch("metrics");
    let graph = gen(&dir, "g.txt", &["grid", "3", "3"]);
    let csv = dir.join("m.csv");
    for seed in ["1", "2"] {
        stdout(&run(&["dist", "cut-vertices", "--graph", &graph, "--seed", seed, "--metrics-csv", csv.to_str().unwrap()]));
    }
    let text = fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().count(), 3);
    assert_eq!(text.matches("algo,n,m").count(), 1);
}

#[test]
fn exit_codes() {
    let dir = scratch("exit");
    let c6 = gen(&dir, "c6.txt", &["cycle", "6"]);
    let k4 = gen(&dir, "k4.txt", &["complete", "4"]);
    let p4 = gen(&dir, "p4.txt", &["path", "4"]);

    assert_eq!(run(&["seq", "no-such-algo", "--graph", &c6]).status.code(), Some(64));
    assert_eq!(run(&["seq", "all"]).status.code(), Some(64));
    assert_eq!(run(&["--help"]).status.code(), Some(0));

    // One-bit circulations on a cycle: seed 0 samples zero everywhere, so
    // the single allowed attempt is rejected.
    let reject = run(&["dist", "cut-edges", "--graph", &c6, "--bits", "1", "--verify", "--seed", "0"]);
    assert_eq!(reject.status.code(), Some(2));

    let bad_phi = dir.join("bad.txt");
    fs::write(&bad_phi, "0 1 1\n0 2 1\n0 3 1\n1 2 1\n1 3 1\n2 3 1\n").unwrap();
    let cert = run(&["cactus", "--graph", &k4, "--phi", bad_phi.to_str().unwrap()]);
    assert_eq!(cert.status.code(), Some(2));
    assert_eq!(run(&["cactus", "--graph", &p4]).status.code(), Some(3));
    assert_eq!(run(&["dist", "all", "--graph", &c6, "--budget-bits", "2"]).status.code(), Some(3));

    let a = dir.join("a.json");
    let b = dir.join("b.json");
    stdout(&run(&["oracle", "--graph", &c6, "--out", a.to_str().unwrap()]));
    stdout(&run(&["dist", "cut-edges", "--graph", &c6, "--bits", "1", "--seed", "0", "--out", b.to_str().unwrap()]));
    let diff = run(&["diff", a.to_str().unwrap(), b.to_str().unwrap()]);
    assert_eq!(diff.status.code(), Some(1));
}
