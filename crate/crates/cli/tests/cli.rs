use std::path::PathBuf;
use std::process::{Command, Output};

fn instance(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../instances").join(name)
}

fn raf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_raf")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn path(p: &PathBuf) -> &str {
    p.to_str().unwrap()
}

#[test]
fn stable_consistency_of_fig2_is_yes() {
    let o = raf(&["solve", "--sem", "stab", "--task", "cons", path(&instance("fig2.raf"))]);
    assert_eq!(o.status.code(), Some(10));
    assert_eq!(stdout(&o), "YES\n");
}

#[test]
fn admissible_enumeration_of_fig4() {
    let f = instance("fig4.raf");
    let o = raf(&["solve", "--sem", "adm", "--task", "enum", path(&f)]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "{d}\n{a,b}\n");
    let o = raf(&["solve", "--sem", "adm", "--task", "enum", "--format", "json", path(&f)]);
    let lines: Vec<serde_json::Value> = stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[1]["extension"], serde_json::json!(["a", "b"]));
}

#[test]
fn credulous_rejection_in_fig4() {
    let f = instance("fig4.raf");
    assert_eq!(raf(&["solve", "--sem", "adm", "--task", "cred", "--arg", "c", path(&f)]).status.code(), Some(20));
    assert_eq!(raf(&["solve", "--sem", "adm", "--task", "cred", "--arg", "d", path(&f)]).status.code(), Some(10));
}

#[test]
fn empty_enumeration_prints_nothing() {
    let o = raf(&["solve", "--sem", "stab", "--task", "enum", path(&instance("fig3.af"))]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).is_empty());
}

#[test]
fn exit_codes_for_failures() {
    assert_eq!(raf(&["solve"]).status.code(), Some(1));
    assert_eq!(raf(&["solve", "--sem", "stab", "--task", "cred", path(&instance("fig4.raf"))]).status.code(), Some(1));
    assert_eq!(raf(&["solve", "--sem", "stab", "missing.raf"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.raf");
    std::fs::write(&bad, "arg(a). att(a,b).").unwrap();
    let o = raf(&["solve", "--sem", "stab", path(&bad)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains('b'));
    let o = raf(&["--max-args", "2", "solve", "--sem", "stab", path(&instance("fig2.raf"))]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn encode_writes_files_and_width_line() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = dir.path().join("fig2");
    let o = raf(&[
        "--max-qbf-vars",
        "200",
        "encode",
        "--fragment",
        "prop",
        "--td",
        path(&instance("fig2.td")),
        "--out",
        path(&prefix),
        "--eval",
        path(&instance("fig2.raf")),
    ]);
    assert_eq!(o.status.code(), Some(10), "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    assert!(out.lines().any(|l| l.starts_with("c width source=3 induced=")));
    let qd = std::fs::read_to_string(dir.path().join("fig2.qdimacs")).unwrap();
    assert!(qd.contains("p cnf"));
    let prov: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("fig2.provenance.json")).unwrap()).unwrap();
    assert_eq!(prov["1"]["family"], "argument");
    let e = raf(&["qbf-eval", "--max-qbf-vars", "400", path(&dir.path().join("fig2.qdimacs"))]);
    assert_eq!(e.status.code(), Some(10));
    let o = raf(&["encode", "--format", "qcir", "--out", path(&prefix), path(&instance("fig3.af"))]);
    assert_eq!(o.status.code(), Some(0));
    assert!(std::fs::read_to_string(dir.path().join("fig2.qcir")).unwrap().starts_with("#QCIR-G14"));
}

#[test]
fn decompose_and_check() {
    let f = instance("fig2.raf");
    let o = raf(&["decompose", path(&f)]);
    assert_eq!(o.status.code(), Some(0));
    let w: usize = stdout(&o).lines().next().unwrap().trim_start_matches("c width ").parse().unwrap();
    assert!(w <= 3);
    let o = raf(&["decompose", "--check", path(&instance("fig2.td")), path(&f)]);
    assert_eq!(stdout(&o), "c valid width 3\n");
}

#[test]
fn translate_and_generate_are_deterministic() {
    let f = instance("fig1.af");
    let a = raf(&["translate", "--from", "af", path(&f)]);
    assert_eq!(a.status.code(), Some(0));
    assert!(stdout(&a).contains("rc(W): false."));
    let g1 = raf(&["generate", "--kind", "qsat2-prop", "--seed", "7"]);
    let g2 = raf(&["generate", "--kind", "qsat2-prop", "--seed", "7"]);
    assert_eq!(g1.status.code(), Some(0), "{}", String::from_utf8_lossy(&g1.stderr));
    assert_eq!(g1.stdout, g2.stdout);
    let c = raf(&["generate", "--kind", "dw-cred", "--class", "simple", "--seed", "1"]);
    assert_eq!(c.status.code(), Some(0), "{}", String::from_utf8_lossy(&c.stderr));
    assert!(stdout(&c).contains("% query: "));
}

#[test]
fn generated_sat_instance_round_trips_through_solve() {
    let dir = tempfile::tempdir().unwrap();
    let cnf = dir.path().join("phi.qdimacs");
    std::fs::write(&cnf, "p cnf 2 2\ne 1 2 0\n1 0\n-1 2 0\n").unwrap();
    let out = dir.path().join("g.raf");
    assert_eq!(raf(&["generate", "--kind", "sat-simple", "--out", path(&out), path(&cnf)]).status.code(), Some(0));
    assert_eq!(raf(&["solve", "--sem", "conf", "--task", "cons", path(&out)]).status.code(), Some(10));
    assert_eq!(raf(&["qbf-eval", path(&cnf)]).status.code(), Some(10));
}
