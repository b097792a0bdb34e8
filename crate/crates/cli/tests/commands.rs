//! The `ppdual` binary end to end.

use std::process::{Command, Output};

fn ppdual(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ppdual"))
        .args(args)
        .env_remove("PPDUAL_BOUND")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn solve_prints_the_solution_set() {
    let o = ppdual(&["solve", "--module", "M4", "--formula", "E y: v = 2*y"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().next(), Some("{0, 2}"));
}

#[test]
fn annihilator_check_passes() {
    let o = ppdual(&["check-annihilator", "--module", "M4", "--formula", "E y: v = 2*y"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().next(), Some("PASS"));
}

#[test]
fn reports_are_reproducible_without_timestamp() {
    let args = ["--format", "jsonl", "--no-timestamp", "lattice", "--module", "M6"];
    let (a, b) = (ppdual(&args), ppdual(&args));
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert!(text.lines().next().unwrap().contains("\"bound\":2"));
    assert!(!text.contains("timestamp"));
    let with = stdout(&ppdual(&["--format", "jsonl", "lattice", "--module", "M6"]));
    assert!(with.lines().next().unwrap().contains("timestamp"));
}

#[test]
fn bound_comes_from_flag_or_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_ppdual"))
        .args(["--format", "jsonl", "--no-timestamp", "lattice", "--module", "M8"])
        .env("PPDUAL_BOUND", "1")
        .output()
        .unwrap();
    assert!(stdout(&o).starts_with("{\"bound\":1,"));
    let o = ppdual(&["--bound", "3", "--format", "jsonl", "--no-timestamp", "lattice", "--module", "M8"]);
    assert!(stdout(&o).starts_with("{\"bound\":3,"));
}

#[test]
fn dot_output() {
    let o = ppdual(&["lattice", "--module", "M6", "--dot"]);
    let text = stdout(&o);
    assert!(text.starts_with("digraph"));
    assert_eq!(text.matches(" -> ").count(), 4);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(ppdual(&["solve", "--module", "M4", "--formula", "v = "]).status.code(), Some(2));
    assert_eq!(ppdual(&["solve", "--module", "nope", "--formula", "v = 0"]).status.code(), Some(2));
    assert_eq!(ppdual(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(ppdual(&["--bound", "0", "lattice", "--module", "M4"]).status.code(), Some(2));
    let o = ppdual(&["solve", "--module", "M4", "--formula", "E y :\n v = 2*"]);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2, column 8"));
}

#[test]
fn undecided_prod_membership_exits_3() {
    let o = ppdual(&["thm51", "--from", "M2", "--k-max", "0"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn catalog_files_load() {
    let dir = std::env::temp_dir().join(format!("ppdual-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("extra.toml");
    std::fs::write(
        &path,
        "[[object]]\nkind = \"module\"\nname = \"N\"\nring = \"Z/9\"\nside = \"left\"\nquotient_of_regular = [3]\n",
    )
    .unwrap();
    let p = path.to_str().unwrap();
    let o = ppdual(&["--catalog", p, "solve", "--module", "N", "--formula", "3*v = 0"]);
    assert_eq!(stdout(&o).lines().next(), Some("{0, 1, 2}"));
    let o = ppdual(&["load", p]);
    assert_eq!(o.status.code(), Some(0));
    std::fs::write(&path, "[[object]]\nkind = \"ring\"\nname = \"bad\"\ncarrier_size = 2\nadd_table = [[0, 1], [1, 5]]\nmul_table = [[0, 0], [0, 1]]\n").unwrap();
    let o = ppdual(&["load", p]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("add_table[1][1]"));
}

#[test]
fn structural_commands_pass() {
    for args in [
        vec!["validate"],
        vec!["dual", "--ring", "Z/4", "--side", "left", "--formula", "E y: v = 2*y"],
        vec!["ddual", "--module", "M6", "--formula", "E y1 y2: v = 2*y1 + 3*y2"],
        vec!["ziegler", "--module", "M4", "--element", "1"],
        vec!["max-ideal", "--module", "M2+M4", "--element", "1"],
        vec!["char-dual", "--module", "M2+M4"],
        vec!["decompose", "--module", "M2+M4"],
        vec!["purity", "--module", "M4", "--generators", "2"],
        vec!["defcat-member", "--module", "M2", "--generators", "M4"],
        vec!["defcat-dual", "--generators", "M4"],
        vec!["prod-compare", "--module", "UT"],
        vec!["lim-member", "--module", "M2+M4", "--from", "M2,M4"],
        vec!["thm51", "--from", "M6/2"],
        vec!["dualpair-verify", "--ring", "Z/6", "--s", "summands:M6/3", "--p", "summands:M6/3"],
    ] {
        let o = ppdual(&args);
        assert_eq!(o.status.code(), Some(0), "{args:?}: {}", stdout(&o));
    }
}

#[test]
fn separation_example() {
    let o = ppdual(&["defcat-member", "--module", "M2", "--generators", "M4"]);
    let text = stdout(&o);
    assert!(text.starts_with("M2 in <M4>: false"));
    assert!(text.contains("separating pair"));
}

#[test]
fn shipped_suite_passes() {
    let o = ppdual(&["--no-timestamp", "suite"]);
    let text = stdout(&o);
    assert_eq!(o.status.code(), Some(0), "{text}");
    assert_eq!(text.matches(": PASS").count(), 9, "{text}");
}
