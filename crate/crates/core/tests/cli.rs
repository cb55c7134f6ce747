use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("data");
    Command::new(env!("CARGO_BIN_EXE_girthmaps"))
        .current_dir(data)
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn girth_of_the_triangle() {
    let o = run(&["girth", "triangle.json"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "3");
}

#[test]
fn annular_girths() {
    let o = run(&["annular-girths", "annular_2_3.json"]);
    assert_eq!(stdout(&o), "separating 2\nnon-separating 3\n");
}

#[test]
fn triangle_mobile_has_three_buds() {
    let o = run(&["mobile", "--d", "3", "triangle.json"]);
    assert!(o.status.success());
    let f: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(f["vertices"].as_array().unwrap().len(), 1);
    let darts = f["darts"].as_array().unwrap();
    assert_eq!(darts.len(), 3);
    assert!(darts.iter().all(|d| d["mate"].is_null()));
}

#[test]
fn series_table_matches_oracle() {
    let o = run(&["series", "--d", "2", "--degrees", "2,3,4", "--max-n", "2"]);
    let text = stdout(&o);
    // [x4] = 2 and [x4^2] = 9, checked against brute force in the library tests
    assert!(text.contains("0,0,1,2\n") && text.contains("0,0,2,9\n"), "{text}");
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["mobile", "--d", "2", "triangle.json"]).status.code(), Some(3));
    assert_eq!(run(&["girth", "missing.json"]).status.code(), Some(2));
    assert_eq!(run(&["enumerate", "--max-edges", "20"]).status.code(), Some(4));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn deterministic_output() {
    let a = run(&["verify", "loopless", "--max-n", "4"]);
    let b = run(&["verify", "loopless", "--max-n", "4"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}
