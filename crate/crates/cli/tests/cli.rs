use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_epinash"))
}

fn game(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../games").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn path(p: &std::path::Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn build_reports_sizes() {
    let o = run(&["--format", "json", "build", path(&game("example_buchi.json"))]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["eve_states"].as_u64().unwrap() > 3);
    assert!(v["suspect_histogram"]["{}"].as_u64().is_some());
}

#[test]
fn build_writes_dot_and_respects_cap() {
    let dir = tempfile::tempdir().unwrap();
    let dot = dir.path().join("e.dot");
    let o = run(&["build", path(&game("example_buchi.json")), "--dot", path(&dot)]);
    assert_eq!(code(&o), 0);
    assert!(std::fs::read_to_string(&dot).unwrap().starts_with("digraph"));
    let o = run(&["build", path(&game("example_buchi.json")), "--cap-states", "10"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("cap"));
}

#[test]
fn trivial_game_has_one_state_each() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("g.json");
    let g = r#"{"players":["A"],"vertices":["v"],"initial":"v","actions":["a"],
        "allowed":{"*":{"A":["a"]}},
        "transitions":[{"from":"v","move":{"A":"a"},"to":"v"}],
        "signals":[{"move":{"A":"a"},"to":"v","label":"s"}],
        "payoffs":{"A":{"kind":"buchi","accepting":["s"]}}}"#;
    std::fs::write(&f, g).unwrap();
    let o = run(&["--format", "json", "build", path(&f)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!((v["eve_states"].as_u64(), v["adam_states"].as_u64()), (Some(1), Some(1)));
}

#[test]
fn solve_check_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    for (g, p) in [("example_buchi.json", "1,1,0"), ("example_mp.json", "1,1,0")] {
        let w = dir.path().join(format!("{g}.witness"));
        let o = run(&["solve", path(&game(g)), "--lower", p, "--upper", p, "--witness", path(&w)]);
        assert_eq!(code(&o), 0, "{g}");
        let o = run(&["check", path(&game(g)), path(&w)]);
        assert_eq!(code(&o), 0, "{g}: {}", String::from_utf8_lossy(&o.stdout));
    }
    let w = dir.path().join("example_buchi.json.witness");
    let o = run(&["check", path(&game("example_buchi.json")), path(&w), "--absorbing-depth", "4"]);
    assert_eq!(code(&o), 0);
}

#[test]
fn corrupted_witness_fails_check() {
    let dir = tempfile::tempdir().unwrap();
    let w = dir.path().join("w.json");
    let g = game("example_buchi.json");
    assert_eq!(code(&run(&["solve", path(&g), "--lower", "1,1,0", "--upper", "1,1,0", "--witness", path(&w)])), 0);
    let mut v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&w).unwrap()).unwrap();
    v["payoff"] = serde_json::json!(["1", "1", "1"]);
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, v.to_string()).unwrap();
    assert_eq!(code(&run(&["check", path(&g), path(&bad)])), 1);
    let mut v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&w).unwrap()).unwrap();
    let mv = &mut v["strategy"][0]["suggestion"][0]["move"][0];
    *mv = serde_json::json!(if mv == "a" { "b" } else { "a" });
    std::fs::write(&bad, v.to_string()).unwrap();
    assert_eq!(code(&run(&["check", path(&g), path(&bad)])), 1);
}

#[test]
fn unreachable_thresholds_and_errors() {
    let g = game("example_buchi.json");
    assert_eq!(code(&run(&["solve", path(&g), "--lower", "3,3,3"])), 1);
    assert_eq!(code(&run(&["solve", path(&g), "--lower", "1,1"])), 2);
    assert_eq!(code(&run(&["solve", path(&g), "--lower", "1,1,1", "--upper", "0,0,0"])), 2);
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("bad.json");
    std::fs::write(&f, "{").unwrap();
    assert_eq!(code(&run(&["solve", path(&f)])), 2);
    assert_eq!(code(&run(&["solve", "/nonexistent/game.json"])), 2);
}

#[test]
fn infinite_bounds_parse() {
    let o = run(&["solve", path(&game("example_mp.json")), "--lower", "-inf,-inf,-inf", "--upper", "inf,inf,inf"]);
    assert_eq!(code(&o), 0);
}

#[test]
fn json_output_is_deterministic() {
    let g = game("example_mp.json");
    let args = ["--format", "json", "solve", path(&g), "--lower", "1,1,0", "--upper", "1,1,0"];
    let (a, b) = (run(&args), run(&args));
    assert_eq!(a.stdout, b.stdout);
    let args = ["--format", "json", "random-game", "--seed", "5", "--payoff", "parity"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

#[test]
fn random_game_feeds_the_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("r.json");
    let o = run(&["random-game", "--seed", "3"]);
    std::fs::write(&f, &o.stdout).unwrap();
    let o = run(&["solve", path(&f)]);
    assert!(matches!(code(&o), 0 | 1));
}

#[test]
fn lemma3_on_file_and_seed() {
    assert_eq!(code(&run(&["lemma3", path(&game("example_buchi.json")), "--depth", "2"])), 0);
    assert_eq!(code(&run(&["lemma3", "--seed", "11", "--depth", "3"])), 0);
}
