//! End-to-end tests of the `plp` binary: file formats, exit codes,
//! scheduler selection, and output artifacts.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use pplp::io::parse_polyhedron;
use pplp::poly::{fourier_motzkin, poly_equal};

const CUBE: &str = "\
# unit cube with a corner cut off
poly 3 7
1 0 0 1
-1 0 0 0
0 1 0 1
0 -1 0 0
0 0 1 1
0 0 -1 0
1 1 1 3/2
";

const POLYGON_PLP: &str = "\
plp 4 2 2
3 -1 1 0
-1 3 0 1
6 6
0 0 0 0
1 0 0 0
0 1 0 0
";

fn plp(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_plp"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn project_matches_oracle_and_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("cube.poly");
    fs::write(&input, CUBE).unwrap();
    let out = plp(
        &[
            "project",
            "--in",
            "cube.poly",
            "--eliminate",
            "3",
            "--out",
            "proj.poly",
            "--stats",
            "stats.json",
        ],
        dir.path(),
    );
    assert_eq!(code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let produced = parse_polyhedron(&fs::read_to_string(dir.path().join("proj.poly")).unwrap()).unwrap();
    let oracle = fourier_motzkin(&parse_polyhedron(CUBE).unwrap(), &[2]).unwrap();
    assert!(poly_equal(&produced, &oracle).unwrap());
    // emitted text parses back to the same set
    let reparsed = parse_polyhedron(&fs::read_to_string(dir.path().join("proj.poly")).unwrap()).unwrap();
    assert!(poly_equal(&produced, &reparsed).unwrap());
    let stats: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("stats.json")).unwrap()).unwrap();
    assert_eq!(stats["tasks_completed"], stats["regions"]);
}

#[test]
fn schedulers_produce_equal_projections() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("cube.poly"), CUBE).unwrap();
    for (sched, threads, out_name) in [
        ("seq", "1", "a.poly"),
        ("static", "4", "b.poly"),
        ("dynamic", "4", "c.poly"),
    ] {
        let out = plp(
            &[
                "project",
                "--in",
                "cube.poly",
                "--eliminate",
                "3",
                "--scheduler",
                sched,
                "--threads",
                threads,
                "--out",
                out_name,
            ],
            dir.path(),
        );
        assert_eq!(code(&out), 0);
    }
    let a = parse_polyhedron(&fs::read_to_string(dir.path().join("a.poly")).unwrap()).unwrap();
    let b = parse_polyhedron(&fs::read_to_string(dir.path().join("b.poly")).unwrap()).unwrap();
    let c = parse_polyhedron(&fs::read_to_string(dir.path().join("c.poly")).unwrap()).unwrap();
    assert!(poly_equal(&a, &b).unwrap());
    assert!(poly_equal(&a, &c).unwrap());
}

#[test]
fn flat_input_exits_with_geometry_code() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("flat.poly"), "poly 1 2\n1 0\n-1 0\n").unwrap();
    let out = plp(
        &["project", "--in", "flat.poly", "--eliminate", "1"],
        dir.path(),
    );
    assert_eq!(code(&out), 2);
    assert!(!out.stderr.is_empty());
}

#[test]
fn parse_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("bad.poly"), "poly 1 1\n1/0 2\n").unwrap();
    let out = plp(
        &["project", "--in", "bad.poly", "--eliminate", "1"],
        dir.path(),
    );
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
    // missing file is an input error too
    let out = plp(
        &["project", "--in", "nope.poly", "--eliminate", "1"],
        dir.path(),
    );
    assert_eq!(code(&out), 1);
    // bad usage stays in the input-error class
    let out = plp(&["project", "--in"], dir.path());
    assert_eq!(code(&out), 1);
}

#[test]
fn solve_dumps_regions_tree_and_stats() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("poly.plp"), POLYGON_PLP).unwrap();
    let out = plp(
        &[
            "solve",
            "--in",
            "poly.plp",
            "--regions",
            "regions.json",
            "--dot",
            "tree.dot",
            "--stats",
            "stats.json",
            "--sort-output",
        ],
        dir.path(),
    );
    assert_eq!(code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let regions: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("regions.json")).unwrap())
            .unwrap();
    let regions = regions.as_array().unwrap();
    assert_eq!(regions.len(), 4);
    // one of the regions is the optimality cone of the far vertex
    let cone = regions
        .iter()
        .find(|r| r["basis"] == serde_json::json!([0, 1]))
        .expect("vertex basis region");
    assert_eq!(cone["optimum"], serde_json::json!(["3", "3", "0", "0"]));
    let dot = fs::read_to_string(dir.path().join("tree.dot")).unwrap();
    assert_eq!(dot.matches("label=\"R").count(), 4);
    assert_eq!(dot.matches(" -> ").count(), 3);
    let stats: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("stats.json")).unwrap()).unwrap();
    assert_eq!(stats["regions"], 4);
    assert_eq!(stats["tasks_completed"], 4);
}

#[test]
fn solve_seed_point_override() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("poly.plp"), POLYGON_PLP).unwrap();
    let out = plp(
        &[
            "solve",
            "--in",
            "poly.plp",
            "--seed-point",
            "-1,-1/2",
            "--regions",
            "r.json",
        ],
        dir.path(),
    );
    assert_eq!(code(&out), 0);
    let regions: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("r.json")).unwrap()).unwrap();
    assert_eq!(regions.as_array().unwrap().len(), 4);
    // the first discovered region is now the one containing (-1, -1/2)
    assert_eq!(regions[0]["basis"], serde_json::json!([2, 3]));
}

#[test]
fn unbounded_plp_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    // x1 = x2 ray, maximize mu * x1
    fs::write(dir.path().join("ray.plp"), "plp 2 1 1\n1 -1\n0\n0 0\n1 0\n").unwrap();
    let out = plp(&["solve", "--in", "ray.plp"], dir.path());
    assert_eq!(code(&out), 3);
}

#[test]
fn infeasible_plp_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("none.plp"), "plp 1 1 1\n1\n-1\n0\n1\n").unwrap();
    let out = plp(&["solve", "--in", "none.plp"], dir.path());
    assert_eq!(code(&out), 2);
}

#[test]
fn bench_emits_csv_with_summaries() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("poly.plp"), POLYGON_PLP).unwrap();
    let out = plp(
        &[
            "bench", "--in", "poly.plp", "--sweep", "1,2", "--repeats", "2", "--csv", "out.csv",
        ],
        dir.path(),
    );
    assert_eq!(code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let csv = fs::read_to_string(dir.path().join("out.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "scheduler,threads,run,wall_ms,regions");
    // cells: seq x1, static x{1,2}, dynamic x{1,2}; 2 runs + mean + stddev each
    let data_rows = lines.iter().filter(|l| l.ends_with(",4")).count();
    assert_eq!(data_rows, 10, "csv:\n{csv}");
    assert_eq!(lines.iter().filter(|l| l.contains(",mean,")).count(), 5);
    assert_eq!(lines.iter().filter(|l| l.contains(",stddev,")).count(), 5);
    // seq rows record one thread
    assert!(lines.iter().any(|l| l.starts_with("seq,1,0,")));
}

#[test]
fn bench_single_repeat_has_zero_stddev() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("poly.plp"), POLYGON_PLP).unwrap();
    let out = plp(
        &[
            "bench", "--in", "poly.plp", "--sweep", "1", "--repeats", "1", "--csv", "out.csv",
        ],
        dir.path(),
    );
    assert_eq!(code(&out), 0);
    let csv = fs::read_to_string(dir.path().join("out.csv")).unwrap();
    for line in csv.lines().filter(|l| l.contains(",stddev,")) {
        let field = line.split(',').nth(3).unwrap();
        assert_eq!(field, "0.000");
    }
}

#[test]
fn gen_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = plp(
        &["gen", "--nvars", "4", "--nrows", "9", "--seed", "5"],
        dir.path(),
    );
    let b = plp(
        &["gen", "--nvars", "4", "--nrows", "9", "--seed", "5"],
        dir.path(),
    );
    let c = plp(
        &["gen", "--nvars", "4", "--nrows", "9", "--seed", "6"],
        dir.path(),
    );
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
    let poly = parse_polyhedron(&String::from_utf8(a.stdout).unwrap()).unwrap();
    assert_eq!(poly.nvars(), 4);
    assert_eq!(poly.rows().len(), 9);
}

#[test]
fn bench_on_generated_poly_instance() {
    let dir = tempfile::tempdir().unwrap();
    let gen = plp(
        &[
            "gen", "--nvars", "4", "--nrows", "8", "--seed", "2", "--out", "inst.poly",
        ],
        dir.path(),
    );
    assert_eq!(code(&gen), 0);
    // .poly instances need --eliminate
    let missing = plp(
        &["bench", "--in", "inst.poly", "--sweep", "1", "--repeats", "1", "--csv", "x.csv"],
        dir.path(),
    );
    assert_eq!(code(&missing), 1);
    let out = plp(
        &[
            "bench",
            "--in",
            "inst.poly",
            "--eliminate",
            "1,2",
            "--sweep",
            "2",
            "--repeats",
            "1",
            "--csv",
            "bench.csv",
        ],
        dir.path(),
    );
    assert_eq!(code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let csv = fs::read_to_string(dir.path().join("bench.csv")).unwrap();
    assert!(csv.lines().count() > 3);
}
