//! The command-line driver: report formats, exit codes, fixtures and the
//! environment override.

use std::process::{Command, Output};

use superjordan::cohomology::ClassName;
use superjordan::structure::cup_table;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_superjordan"));
    c.env_remove("SUPERJORDAN_MAX_HDEG").env_remove("SUPERJORDAN_MAX_WEIGHT");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn fixture(name: &str) -> String {
    format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn json_report_is_versioned_and_passes() {
    let out = run(&["virasoro"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["task"], "virasoro");
    assert_eq!(v["status"], "PASS");
    assert_eq!(v["summary"]["failed"], 0);
}

#[test]
fn output_is_deterministic() {
    let a = run(&["yoneda", "--max-degree", "6"]);
    let b = run(&["yoneda", "--max-degree", "6"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn cup_table_markdown_has_family_grid() {
    let out = run(&["cup-table", "--max-index", "3", "--max-pq", "2", "--format", "md"]);
    assert_eq!(out.status.code(), Some(0));
    let md = String::from_utf8(out.stdout).unwrap();
    let grid: Vec<&str> = md
        .lines()
        .skip_while(|l| !l.starts_with("## Products of generators"))
        .skip(2)
        .take_while(|l| l.starts_with('|'))
        .collect();
    // Header, rule and six family rows, each with six cells.
    assert_eq!(grid.len(), 8);
    for row in &grid[2..] {
        assert_eq!(row.matches("[PASS").count(), 6, "{row}");
    }
}

#[test]
fn trivial_coefficients() {
    let out = run(&["cohomology", "--coeff", "k"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["entries"][0]["computed"], "1,2,2,2,2,2,2");
}

#[test]
fn corrupted_fixture_fails_once() {
    let out = run(&["virasoro", "--max-m", "6", "--fixture", &fixture("virasoro_corrupted.json")]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    let failed: Vec<&serde_json::Value> =
        v["entries"].as_array().unwrap().iter().filter(|e| e["status"] == "FAIL").collect();
    assert_eq!(failed.len(), 1);
    assert_eq!(failed[0]["check"], "[s_1, s_2]");
}

#[test]
fn valid_fixture_passes() {
    let out = run(&["virasoro", "--fixture", &fixture("virasoro_valid.json")]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["no-such-task"]).status.code(), Some(2));
    assert_eq!(run(&["cohomology", "--max-hdeg", "0"]).status.code(), Some(2));
    assert_eq!(run(&["virasoro", "--fixture", "/nonexistent.json"]).status.code(), Some(2));
}

#[test]
fn resource_guard_exits_3() {
    let out = run(&["cohomology", "--max-hdeg", "1", "--max-weight", "1", "--bar-limit", "10"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn environment_overrides_default_window() {
    let out = bin().env("SUPERJORDAN_MAX_HDEG", "3").args(["cohomology", "--coeff", "k"]).output().unwrap();
    let v = json(&out);
    assert_eq!(v["parameters"]["max_hdeg"], 3);
    assert_eq!(v["entries"][0]["computed"], "1,2,2,2");
}

#[test]
fn tabulated_product_cells_differ_exactly_off_diagonal() {
    for e in cup_table(3, 2) {
        let (a, b): (ClassName, ClassName) = (e.left.parse().unwrap(), e.right.parse().unwrap());
        let expected = match (a, b) {
            (ClassName::S(m), ClassName::U(n, _) | ClassName::V(n, _)) => m != n,
            _ => false,
        };
        assert_eq!(e.tabulated_differs, expected, "{} ⌣ {}", e.left, e.right);
    }
}
