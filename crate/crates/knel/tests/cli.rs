//! End-to-end checks of the command line front end: exit codes, record
//! output, and file round trips.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn knel(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_knel"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn enum_stats_chi_flow() {
    let dir = tempfile::tempdir().unwrap();
    let out = knel(&["enum", "--n", "1", "--e", "01", "--levels", "2", "--out", "k1.knel"], dir.path());
    assert!(out.status.success());

    let text = fs::read_to_string(dir.path().join("k1.knel")).unwrap();
    assert!(text.starts_with(r#"{"n":1,"e":"01","level":0,"count":1}"#));

    let out = knel(&["stats", "--catalog", "k1.knel"], dir.path());
    assert!(out.status.success());
    let lines: Vec<&str> = stdout(&out).lines().map(str::trim).collect::<Vec<_>>();
    assert_eq!(lines.len(), 3);
    assert!(lines[0].contains(r#""level":0,"count":1"#));
    assert!(lines[2].contains(r#""level":2,"count":8"#));

    // the level-2 table contains the triangle entry
    let out = knel(&["chi", "--catalog", "k1.knel", "--level", "2"], dir.path());
    assert!(out.status.success());
    assert!(stdout(&out).lines().any(|l| l.contains(r#""chi":3"#)));

    let out = knel(&["girth", "--catalog", "k1.knel", "--level", "2"], dir.path());
    assert!(out.status.success());
    assert!(stdout(&out).lines().any(|l| l.contains(r#""girth":3"#)));
}

#[test]
fn embed_and_member_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let edge = r#"{"n":1,"m":2,"U":[0,1],"X":[[0,1]],"h":{"0":[0],"1":[1]}}"#;
    let triangle = r#"{"n":1,"m":3,"U":[0,1,2],"X":[[0,1],[0,2],[1,2]],"h":{"0":[0],"1":[1],"2":[2]}}"#;
    let points = r#"{"n":1,"m":2,"U":[0,1],"X":[],"h":{"0":[0],"1":[1]}}"#;
    fs::write(dir.path().join("edge.json"), edge).unwrap();
    fs::write(dir.path().join("triangle.json"), triangle).unwrap();
    fs::write(dir.path().join("points.json"), points).unwrap();

    let out = knel(&["embed", "--a", "edge.json", "--b", "triangle.json"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with(r#"{"map":"#));

    let out = knel(&["embed", "--a", "edge.json", "--b", "triangle.json", "--graph"], dir.path());
    assert_eq!(out.status.code(), Some(0));

    let out = knel(&["embed", "--a", "edge.json", "--b", "points.json"], dir.path());
    assert_eq!(out.status.code(), Some(1));

    knel(&["enum", "--n", "1", "--e", "01", "--levels", "1", "--out", "k1.knel"], dir.path());
    let out = knel(&["member", "--a", "edge.json", "--catalog", "k1.knel"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains(r#""verdict":"yes""#));

    let out = knel(&["member", "--a", "triangle.json", "--catalog", "k1.knel"], dir.path());
    assert_eq!(out.status.code(), Some(2), "triangle needs level 2");
    assert!(stdout(&out).contains(r#""verdict":"unknown""#));
}

#[test]
fn condition_check_and_sample() {
    let dir = tempfile::tempdir().unwrap();
    knel(&["enum", "--n", "2", "--e", "0101", "--levels", "2", "--out", "k2.knel"], dir.path());

    let good = "{\"n\":2,\"e\":\"0101\"}\n{\"n\":2,\"m\":2,\"U\":[1],\"X\":[],\"h\":{\"1\":[0,1]}}\n";
    fs::write(dir.path().join("good.cond"), good).unwrap();
    let out = knel(
        &["condition", "check", "--input", "good.cond", "--catalog", "k2.knel"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains(r#""verdict":"valid""#));

    // side-by-side marker tuples can never interlace by 0101
    let bad = "{\"n\":2,\"e\":\"0101\"}\n{\"n\":2,\"m\":4,\"U\":[1,3],\"X\":[[1,3]],\"h\":{\"1\":[0,1],\"3\":[2,3]}}\n";
    fs::write(dir.path().join("bad.cond"), bad).unwrap();
    let out = knel(
        &["condition", "check", "--input", "bad.cond", "--catalog", "k2.knel"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains(r#""verdict":"invalid""#));

    let out = knel(
        &[
            "condition", "sample", "--n", "2", "--e", "0101", "--steps", "12", "--seed", "9",
            "--catalog", "k2.knel", "--out", "sampled.cond",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let first = stdout(&out);
    let again = knel(
        &[
            "condition", "sample", "--n", "2", "--e", "0101", "--steps", "12", "--seed", "9",
            "--catalog", "k2.knel",
        ],
        dir.path(),
    );
    assert_eq!(first, stdout(&again), "sampling is deterministic in the seed");

    let sampled = fs::read_to_string(dir.path().join("sampled.cond")).unwrap();
    let out = knel(
        &["condition", "check", "--input", "sampled.cond", "--catalog", "k2.knel", "--max-subset", "2"],
        dir.path(),
    );
    assert_ne!(out.status.code(), Some(1), "sampled conditions are never invalid: {sampled}");
}

#[test]
fn tuple_graph_commands() {
    let dir = tempfile::tempdir().unwrap();
    let out = knel(&["interlace-graph", "--m", "4", "--n", "2", "--e", "0101", "--chi"], dir.path());
    assert!(out.status.success());
    let line = stdout(&out);
    assert!(line.contains(r#""edges":1"#) && line.contains(r#""chi":2"#), "{line}");

    let out = knel(&["shift-graph", "--m", "5", "--n", "2", "--chi"], dir.path());
    assert!(out.status.success());
    assert!(stdout(&out).contains(r#""chi":3"#));

    let out = knel(&["shift-graph", "--m", "3", "--n", "2", "--dot"], dir.path());
    assert!(out.status.success());
    assert!(stdout(&out).starts_with("graph tuples {"));
}

#[test]
fn export_dot_writes_one_file_per_member() {
    let dir = tempfile::tempdir().unwrap();
    knel(&["enum", "--n", "1", "--e", "01", "--levels", "1", "--out", "k1.knel"], dir.path());
    let out = knel(
        &["export-dot", "--catalog", "k1.knel", "--level", "1", "--out-dir", "dots"],
        dir.path(),
    );
    assert!(out.status.success());
    let mut names: Vec<String> = fs::read_dir(dir.path().join("dots"))
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    assert_eq!(names, vec!["level1_member0.dot", "level1_member1.dot"]);
}

#[test]
fn usage_errors_exit_64() {
    let dir = tempfile::tempdir().unwrap();
    let out = knel(&["no-such-command"], dir.path());
    assert_eq!(out.status.code(), Some(64));

    let out = knel(&["enum", "--n", "1", "--e", "0101", "--levels", "1", "--out", "x.knel"], dir.path());
    assert_eq!(out.status.code(), Some(64), "arity inconsistent with the pattern");

    let out = knel(&["--help"], dir.path());
    assert_eq!(out.status.code(), Some(0));
}
