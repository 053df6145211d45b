//! End-to-end tests of the `cubeplan` binary: every subcommand, the file
//! formats it reads and writes, byte-level reproducibility, and exit codes
//! (0 success, 1 internal error, 2 usage error).

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cubeplan"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn assert_success(out: &Output) -> String {
    assert!(
        out.status.success(),
        "stdout: {}\nstderr: {}",
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn gen_exhaustive_lightsout_line_count_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("lights.jsonl");
    let stdout = assert_success(&run(&[
        "gen",
        "lightsout3",
        "--exhaustive",
        "--out",
        out.to_str().unwrap(),
    ]));
    assert!(stdout.contains("F=9"));
    assert!(stdout.contains("count=4608"));
    // 512 states x 9 presses, plus the header line
    let text = fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().count(), 4609);
}

#[test]
fn gen_is_byte_reproducible_per_seed() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.jsonl");
    let b = dir.path().join("b.jsonl");
    let c = dir.path().join("c.jsonl");
    for (path, seed) in [(&a, "1"), (&b, "1"), (&c, "9")] {
        assert_success(&run(&[
            "gen",
            "slide3",
            "--count",
            "5000",
            "--seed",
            seed,
            "--out",
            path.to_str().unwrap(),
        ]));
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    assert_ne!(fs::read(&a).unwrap(), fs::read(&c).unwrap());
    assert_eq!(fs::read_to_string(&a).unwrap().lines().count(), 5001);
}

#[test]
fn learn_writes_deterministic_domain_and_diagnostics() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("data.jsonl");
    assert_success(&run(&[
        "gen",
        "slide2",
        "--exhaustive",
        "--out",
        data.to_str().unwrap(),
    ]));
    let out1 = dir.path().join("m1");
    let out2 = dir.path().join("m2");
    for out in [&out1, &out2] {
        let stdout = assert_success(&run(&[
            "learn",
            "--data",
            data.to_str().unwrap(),
            "--out-dir",
            out.to_str().unwrap(),
        ]));
        assert!(stdout.contains("actions=24"));
    }
    assert_eq!(
        fs::read(out1.join("domain.pddl")).unwrap(),
        fs::read(out2.join("domain.pddl")).unwrap()
    );
    let diag: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out1.join("diagnostics.json")).unwrap()).unwrap();
    assert_eq!(diag["actions"], 24);
    assert_eq!(diag["samples_per_action"].as_array().unwrap().len(), 24);
}

fn prepare_model(dir: &Path, env: &str) -> (std::path::PathBuf, std::path::PathBuf) {
    let data = dir.join("data.jsonl");
    assert_success(&run(&["gen", env, "--exhaustive", "--out", data.to_str().unwrap()]));
    let model = dir.join("model");
    assert_success(&run(&[
        "learn",
        "--data",
        data.to_str().unwrap(),
        "--out-dir",
        model.to_str().unwrap(),
    ]));
    (data, model.join("domain.pddl"))
}

#[test]
fn plan_solves_instances_and_reports_aggregates() {
    let dir = tempfile::tempdir().unwrap();
    let (_, domain) = prepare_model(dir.path(), "lightsout3");
    let instances = dir.path().join("inst.jsonl");
    assert_success(&run(&[
        "gen",
        "lightsout3",
        "--instances-depth",
        "2",
        "--instances-count",
        "4",
        "--seed",
        "3",
        "--out",
        instances.to_str().unwrap(),
    ]));
    let plans = dir.path().join("plans");
    let stdout = assert_success(&run(&[
        "plan",
        "--domain",
        domain.to_str().unwrap(),
        "--instances",
        instances.to_str().unwrap(),
        "--heuristic",
        "lmcut",
        "--out-dir",
        plans.to_str().unwrap(),
    ]));
    assert!(stdout.contains("f=4 v=4 o=4"), "{stdout}");
    let csv = fs::read_to_string(plans.join("stats.csv")).unwrap();
    assert!(csv.starts_with("instance,found,valid,optimal,cost,"));
    assert_eq!(csv.lines().count(), 5);
    // plan file format: one (a<k>) per line plus the cost comment
    let plan_text = fs::read_to_string(plans.join("plan_000.plan")).unwrap();
    assert!(plan_text.trim_end().ends_with("; cost = 2 (unit cost)"));
    assert!(plan_text.lines().take(2).all(|l| l.starts_with("(a")));
    assert!(plans.join("problem_000.pddl").exists());
}

#[test]
fn plan_depth_zero_instance_costs_zero() {
    let dir = tempfile::tempdir().unwrap();
    let (_, domain) = prepare_model(dir.path(), "hanoi3");
    let instances = dir.path().join("inst.jsonl");
    assert_success(&run(&[
        "gen",
        "hanoi3",
        "--instances-depth",
        "0",
        "--instances-count",
        "1",
        "--out",
        instances.to_str().unwrap(),
    ]));
    let plans = dir.path().join("plans");
    let stdout = assert_success(&run(&[
        "plan",
        "--domain",
        domain.to_str().unwrap(),
        "--instances",
        instances.to_str().unwrap(),
        "--out-dir",
        plans.to_str().unwrap(),
    ]));
    assert!(stdout.contains("f=1"));
    let csv = fs::read_to_string(plans.join("stats.csv")).unwrap();
    assert!(csv.lines().nth(1).unwrap().contains(",0,"));
}

#[test]
fn validate_accepts_real_traces_and_flags_corrupted_ones() {
    let dir = tempfile::tempdir().unwrap();
    let (data, domain) = prepare_model(dir.path(), "lightsout3");
    let instances = dir.path().join("inst.jsonl");
    assert_success(&run(&[
        "gen",
        "lightsout3",
        "--instances-depth",
        "3",
        "--instances-count",
        "2",
        "--seed",
        "5",
        "--out",
        instances.to_str().unwrap(),
    ]));
    let plans = dir.path().join("plans");
    assert_success(&run(&[
        "plan",
        "--domain",
        domain.to_str().unwrap(),
        "--instances",
        instances.to_str().unwrap(),
        "--out-dir",
        plans.to_str().unwrap(),
    ]));
    let trace = plans.join("plan_000.trace");
    let report = dir.path().join("report.json");
    let stdout = assert_success(&run(&[
        "validate",
        "lightsout3",
        "--traces",
        trace.to_str().unwrap(),
        "--data",
        data.to_str().unwrap(),
        "--out",
        report.to_str().unwrap(),
    ]));
    assert!(stdout.contains("valid=1/1"));
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(report["valid"], 1);
    assert!(report["states_seen_histogram"].as_array().is_some());

    // corrupt a middle state: flip one light mid-trace
    let text = fs::read_to_string(&trace).unwrap();
    let mut lines: Vec<String> = text.lines().map(str::to_string).collect();
    let mid = lines.len() / 2;
    let flipped = if lines[mid].as_bytes()[0] == b'0' { "1" } else { "0" };
    lines[mid].replace_range(0..1, flipped);
    let bad = dir.path().join("bad.trace");
    fs::write(&bad, lines.join("\n")).unwrap();
    let stdout = assert_success(&run(&[
        "validate",
        "lightsout3",
        "--traces",
        bad.to_str().unwrap(),
    ]));
    assert!(stdout.contains("valid=0/1"));
    assert!(stdout.contains("invalid at step"));
}

#[test]
fn analyze_small_graphs_and_cap_errors() {
    let dir = tempfile::tempdir().unwrap();
    let c4 = dir.path().join("c4.json");
    fs::write(&c4, "{\"n\":4,\"edges\":[[0,1],[1,2],[2,3],[3,0]],\"directed\":false}").unwrap();
    let stdout = assert_success(&run(&["analyze", "--graph", c4.to_str().unwrap(), "--bits", "2"]));
    let report: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(report["c"], 2);
    assert_eq!(report["minD"], 2);
    assert_eq!(report["bound_holds"], true);

    let k3 = dir.path().join("k3.json");
    fs::write(&k3, "{\"n\":3,\"edges\":[[0,1],[1,2],[0,2]],\"directed\":false}").unwrap();
    let stdout = assert_success(&run(&["analyze", "--graph", k3.to_str().unwrap(), "--bits", "2"]));
    let report: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(report["c"], 3);
    assert_eq!(report["minD"], 3);

    // a graph over the assignment-search node cap
    let big = dir.path().join("big.json");
    let edges: Vec<String> = (0..11).map(|i| format!("[{},{}]", i, (i + 1) % 12)).collect();
    fs::write(&big, format!("{{\"n\":12,\"edges\":[{}],\"directed\":false}}", edges.join(","))).unwrap();
    let out = run(&["analyze", "--graph", big.to_str().unwrap(), "--bits", "4"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn analyze_reads_dot_files() {
    let dir = tempfile::tempdir().unwrap();
    let dot = dir.path().join("path.dot");
    fs::write(&dot, "graph p3 {\n  0 -- 1;\n  1 -- 2;\n}\n").unwrap();
    let stdout = assert_success(&run(&["analyze", "--graph", dot.to_str().unwrap(), "--bits", "2"]));
    let report: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(report["c"], 2);
    assert_eq!(report["minD"], 2);
}

#[test]
fn exp_exhaustive_lightsout_is_fully_solved() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("exp");
    let stdout = assert_success(&run(&[
        "exp",
        "--env",
        "lightsout3",
        "--exhaustive",
        "--depth",
        "3",
        "--instances",
        "5",
        "--heuristics",
        "blind,lmcut",
        "--seed",
        "7",
        "--jobs",
        "2",
        "--out-dir",
        out.to_str().unwrap(),
    ]));
    assert!(stdout.contains("blind: f=5 v=5 o=5"), "{stdout}");
    assert!(stdout.contains("lmcut: f=5 v=5 o=5"), "{stdout}");
    let summary = fs::read_to_string(out.join("summary.csv")).unwrap();
    assert_eq!(summary.lines().count(), 3);
    assert!(out.join("domain.pddl").exists());
    assert!(out.join("lmcut").join("plan_000.trace").exists());
}

#[test]
fn exp_spec_file_with_flag_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("spec.json");
    fs::write(
        &spec,
        "{\"env\":\"hanoi3\",\"depth\":4,\"instances\":3,\"heuristics\":[\"hmax\"],\"seed\":2}",
    )
    .unwrap();
    let out = dir.path().join("exp");
    let stdout = assert_success(&run(&[
        "exp",
        "--spec",
        spec.to_str().unwrap(),
        "--depth",
        "2",
        "--out-dir",
        out.to_str().unwrap(),
    ]));
    assert!(stdout.contains("hmax: f=3"), "{stdout}");
}

#[test]
fn usage_errors_exit_with_code_two() {
    // unknown heuristic in exp
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "exp",
        "--env",
        "lightsout2",
        "--exhaustive",
        "--depth",
        "1",
        "--instances",
        "1",
        "--heuristics",
        "astar-ish",
        "--out-dir",
        dir.path().join("x").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    // unknown environment
    let out = run(&["gen", "sudoku9", "--count", "1", "--out", "/tmp/nope.jsonl"]);
    assert_eq!(out.status.code(), Some(2));
    // gen without a mode
    let out = run(&["gen", "slide2", "--out", "/tmp/nope.jsonl"]);
    assert_eq!(out.status.code(), Some(2));
    // clap-level parse failure
    let out = run(&["definitely-not-a-subcommand"]);
    assert_eq!(out.status.code(), Some(2));
}
