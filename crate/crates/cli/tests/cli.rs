use std::process::{Command, Output};

fn corpus(rel: &str) -> String {
    format!("{}/../core/corpus/{rel}", env!("CARGO_MANIFEST_DIR"))
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fixlogic")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn parse_prints_canonically() {
    let o = run(&["parse", "--logic", "mu", "mu X. (x=1 | <tog> X)"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "mu X. (x = 1 | <tog> X)\nOK\n");
}

#[test]
fn parse_errors_exit_with_two() {
    let o = run(&["parse", "--logic", "gl", "<a u> p"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!o.stderr.is_empty());
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn eval_lists_states() {
    let o = run(&["eval", "--structure", &corpus("structures/toggle.json"), "--logic", "mu", "--formula", "mu X. (x=1 | <tog> X)"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "{x: 0}\n{x: 1}\n2 of 2 states\n");
}

#[test]
fn sharp_of_a_loop() {
    let o = run(&["translate", "--dir", "sharp", "--in", "<a*> p"]);
    assert_eq!(stdout(&o), "mu X0. (p | <a> X0)\n");
}

#[test]
fn roundtrip_compares_denotations() {
    let o = run(&["translate", "--dir", "roundtrip", "--in", "<(tog^d)*> x = 1", "--structure", &corpus("structures/toggle.json")]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("same denotation"));
}

#[test]
fn prove_reports_the_failing_line() {
    assert_eq!(run(&["prove", &corpus("proofs/rule_fpmu.proof")]).status.code(), Some(0));
    let o = run(&["prove", &corpus("proofs/broken_forward_ref.proof")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("line 2:"));
    let o = run(&["prove", &corpus("proofs/rule_hyp.proof"), "--theory", &corpus("proofs/rule_hyp.theory")]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn derive_emits_a_checking_script() {
    let o = run(&["derive", "seq-dual", "--g1", "a", "--g2", "b*", "--phi", "q"]);
    assert_eq!(o.status.code(), Some(0));
    let dir = std::env::temp_dir().join(format!("fixlogic-derive-{}", std::process::id()));
    std::fs::write(&dir, o.stdout).unwrap();
    assert_eq!(run(&["prove", dir.to_str().unwrap()]).status.code(), Some(0));
    std::fs::remove_file(dir).ok();
    assert_eq!(run(&["derive", "mono-mu"]).status.code(), Some(2));
}

#[test]
fn reduce_and_differential_rewrites() {
    let o = run(&["reduce", "--strategy", "random-to-ode", "--in", "<x := *> p(x)"]);
    assert_eq!(stdout(&o), "<{x' = 1}> p(x) | <{x' = -1}> p(x)\n");
    let o = run(&["tba", "--in", "<{x' = 1 & x <= 5}> x = 5"]);
    assert!(stdout(&o).starts_with("<t := 0> <{x' = 1, t' = 1}>"));
    let o = run(&["nabla", "--ode", "{x' = x}", "--post", "x >= 1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("<{x' = x}> x >= 1"));
}

#[test]
fn reach_refutes_and_certifies() {
    let field = corpus("fields/growth.csv");
    let o = run(&["reach", "--field", &field, "--radius", "4", "--triple", "1;1.5;0.1"]);
    assert_eq!(stdout(&o), "refuted\n");
    let o = run(&["reach", "--field", &field, "--radius", "4", "--triples", &corpus("fields/growth_triples.csv"), "--start", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("certified at depth 6"));
}

#[test]
fn config_selects_the_norm() {
    let cfg = std::env::temp_dir().join(format!("fixlogic-cfg-{}.json", std::process::id()));
    std::fs::write(&cfg, r#"{"norm": "max", "grid": 41}"#).unwrap();
    let field = corpus("fields/rotation.csv");
    let o = run(&["--config", cfg.to_str().unwrap(), "reach", "--field", &field, "--radius", "2", "--start", "1,0", "--time", "1"]);
    assert_eq!(o.status.code(), Some(0));
    std::fs::write(&cfg, r#"{"norm": "taxicab"}"#).unwrap();
    let o = run(&["--config", cfg.to_str().unwrap(), "reach", "--field", &field, "--radius", "2", "--start", "1,0"]);
    assert_eq!(o.status.code(), Some(2));
    std::fs::remove_file(cfg).ok();
}

#[test]
fn selftest_subset() {
    let o = run(&["selftest", "--seed", "3", "--count", "40", "--only", "1", "--only", "9"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().filter(|l| l.starts_with("PASS")).count(), 2);
}
