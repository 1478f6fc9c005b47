use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn golden(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_crn-realize"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run_stdin(args: &[&str], input: &str) -> Output {
    use std::io::Write;
    use std::process::Stdio;
    let mut child = Command::new(env!("CARGO_BIN_EXE_crn-realize"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(input.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn tmp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("crn-realize-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn type_one_matches_golden() {
    let dot = tmp("type_one.dot");
    let input = golden("type_one.json");
    let out = run(&[
        "check",
        "--format",
        "matrices",
        input.to_str().unwrap(),
        "--dot",
        dot.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let expected: Value =
        serde_json::from_str(&std::fs::read_to_string(golden("type_one.outcome.json")).unwrap())
            .unwrap();
    assert_eq!(json(&out), expected);
    assert_eq!(json(&out)["flag"], 2);
    assert_eq!(
        std::fs::read_to_string(dot).unwrap(),
        std::fs::read_to_string(golden("type_one.dot")).unwrap()
    );
}

#[test]
fn one_ray_matches_golden() {
    let input = golden("one_ray.json");
    let out = run(&["check", "--format", "matrices", input.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(10));
    let expected: Value =
        serde_json::from_str(&std::fs::read_to_string(golden("one_ray.outcome.json")).unwrap())
            .unwrap();
    assert_eq!(json(&out), expected);
    assert_eq!(json(&out)["rejection"]["r"], 1);
}

#[test]
fn json_flag_writes_same_document() {
    let path = tmp("out.json");
    let input = golden("type_one.json");
    let out = run(&[
        "check",
        input.to_str().unwrap(),
        "--json",
        path.to_str().unwrap(),
    ]);
    let written: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    assert_eq!(written, json(&out));
}

#[test]
fn ode_input_with_extra_vertex_has_five_columns() {
    let input = golden("type_one_mirrored.ode");
    let out = run(&["check", input.to_str().unwrap(), "--extra-vertices", "3,1"]);
    let v = json(&out);
    assert_eq!(v["m"], 5);
    // x1-coefficients (-1, 1) point away from the other vertex of the pair
    assert_eq!(v["flag"], 0);
    assert_eq!(out.status.code(), Some(10));
}

#[test]
fn parse_errors_exit_two_with_position() {
    let out = run_stdin(
        &["check", "--format", "ode", "-"],
        "x1' = x1\nx2' = x1^1.5\n",
    );
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 2, column 10"), "{err}");
    assert!(err.contains("non-integer exponent"), "{err}");

    let out = run(&["check", "/nonexistent/file.json"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run_stdin(
        &["check", "--format", "matrices", "-"],
        r#"{"n": 1, "m": 2, "Y": [[1, 1]], "W": [[1, -1]]}"#,
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn generator_is_deterministic_and_round_trips() {
    let a = tmp("sys_a.json");
    let b = tmp("sys_b.json");
    for p in [&a, &b] {
        let out = run(&[
            "gen",
            "--type",
            "type2",
            "--classes",
            "2",
            "--seed",
            "7",
            "-o",
            p.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0));
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());

    let out = run(&["check", a.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["flag"], 3);

    let out = run(&["analyze", a.to_str().unwrap()]);
    let v = json(&out);
    assert_eq!(v["deficiency"], 1);
    assert_eq!(v["deficiency_one_type"], "TypeII");
    assert_eq!(v["weakly_reversible"], true);
}

#[test]
fn generator_formats() {
    for (kind, flag) in [("single", 1), ("type1", 2), ("type2", 3)] {
        for format in ["ode", "matrices", "network"] {
            let gen = run(&[
                "gen",
                "--type",
                kind,
                "--sizes",
                if kind == "single" { "4" } else { "2,3" },
                "--seed",
                "5",
                "--format",
                format,
            ]);
            assert_eq!(gen.status.code(), Some(0), "{kind} {format}");
            let text = String::from_utf8(gen.stdout).unwrap();
            let out = run_stdin(&["check", "--format", format, "-"], &text);
            assert_eq!(json(&out)["flag"], flag, "{kind} {format}");
        }
    }
    let out = run(&["gen", "--type", "single", "--classes", "2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn equivalence_exit_codes() {
    let g = tmp("g.json");
    let g2 = tmp("g2.json");
    let h = tmp("h.json");
    std::fs::write(&g, r#"{"n": 2, "vertices": [[0,0],[0,2],[2,0]], "edges": [{"from":0,"to":1,"rate":2},{"from":0,"to":2,"rate":2}]}"#).unwrap();
    std::fs::write(&g2, r#"{"n": 2, "vertices": [[0,0],[0,2],[2,0],[1,1]], "edges": [{"from":0,"to":1,"rate":1},{"from":0,"to":2,"rate":"1"},{"from":0,"to":3,"rate":2}]}"#).unwrap();
    std::fs::write(&h, r#"{"n": 2, "vertices": [[0,0],[0,2],[2,0]], "edges": [{"from":0,"to":1,"rate":"3/2"},{"from":0,"to":2,"rate":2}]}"#).unwrap();
    let out = run(&["equiv", g.to_str().unwrap(), g2.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["equivalent"], true);
    let out = run(&["equiv", g.to_str().unwrap(), h.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(10));
    assert_eq!(json(&out)["equivalent"], false);
}
