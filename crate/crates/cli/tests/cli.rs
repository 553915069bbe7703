use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures").join(name)
}

fn fsmreq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fsmreq")).args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn short_flags_give_the_four_case_suite() {
    let dir = tempfile::tempdir().unwrap();
    let out = fsmreq(&["generate", "-s", "-h", "-a", "0", p(&fixture("M.csv")), p(&fixture("R.req")), "-o", p(dir.path())]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "cases=4 max_len=3\n");
    assert_eq!(fs::read_to_string(dir.path().join("suite.txt")).unwrap(), "a.a.b\na.b.b\nb.a.b\nb.b.a\n");
    assert_eq!(
        fs::read_to_string(dir.path().join("expected.txt")).unwrap(),
        "a.a.b/1.0.2\na.b.b/1.2.0\nb.a.b/2.0.0\nb.b.a/2.0.1\n"
    );
}

#[test]
fn prebuilt_abstraction_matches_requirement_file() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let out = fsmreq(&["abstract", p(&fixture("M.csv")), p(&fixture("R.req")), "-o", p(d)]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "m1_states=3 m2_states=2 m1prime_transitions=15\n");
    assert_eq!(
        fs::read_to_string(d.join("M1.csv")).unwrap(),
        "state,a,b\nq0,q2/{0|1},q1/*\nq1,q1/*,q0/{0|2}\nq2,q2/{0|1},q1/*\n"
    );
    assert_eq!(fs::read_to_string(d.join("M2.csv")).unwrap().lines().count(), 3);
    let a = d.join("from_req");
    let b = d.join("from_abs");
    assert_eq!(code(&fsmreq(&["generate", "--method", "req-exh", "-a", "1", p(&fixture("M.csv")), p(&fixture("R.req")), "-o", p(&a)])), 0);
    assert_eq!(code(&fsmreq(&["generate", "-s", "-a", "1", p(&fixture("M.csv")), p(&d.join("M1.csv")), "-o", p(&b)])), 0);
    assert_eq!(fs::read(a.join("suite.txt")).unwrap(), fs::read(b.join("suite.txt")).unwrap());
}

#[test]
fn single_class_abstraction_for_r1() {
    let dir = tempfile::tempdir().unwrap();
    let out = fsmreq(&["abstract", p(&fixture("FSBRTSX.csv")), p(&fixture("R1.req")), "-o", p(dir.path())]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("m2_states=1 "));
}

#[test]
fn check_reports_the_equivalence_failure() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(code(&fsmreq(&["generate", "-h", "-a", "0", p(&fixture("M.csv")), "-o", p(d)])), 0);
    let suite = d.join("suite.txt");
    let out = fsmreq(&["check", p(&fixture("M.csv")), p(&fixture("S.csv")), p(&suite)]);
    assert_eq!(code(&out), 1);
    assert_eq!(
        stdout(&out),
        "FAIL a.a.a step 3: observed 1.0.1 expected 1.0.0\ncases=5 passed=4 failed=1\n"
    );
    let out = fsmreq(&["check", p(&fixture("M.csv")), p(&fixture("M.csv")), p(&suite)]);
    assert_eq!(code(&out), 0);
}

#[test]
fn complete_suite_catches_s_prime() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let out = fsmreq(&["generate", "--method", "req-cmp", "-a", "0", p(&fixture("M.csv")), p(&fixture("R.req")), "-o", p(d)]);
    assert_eq!(code(&out), 0);
    let sets = fs::read_to_string(d.join("expected_sets.txt")).unwrap();
    let suite = fs::read_to_string(d.join("suite.txt")).unwrap();
    assert_eq!(sets.lines().count(), suite.lines().count());
    let suite = d.join("suite.txt");
    let run = |sut: &str| {
        fsmreq(&["check", "--criterion", "membership", p(&fixture("M.csv")), p(&fixture(sut)), p(&suite), p(&fixture("R.req"))])
    };
    assert_eq!(code(&run("S.csv")), 0);
    assert_eq!(code(&run("S_prime.csv")), 1);
}

#[test]
fn experiments() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("report.txt");
    let out = fsmreq(&["experiment", p(&fixture("M.csv")), p(&fixture("R.req")), "--count", "0", "-o", p(&report)]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "universe=0 pass_sat=0 pass_viol=0 fail_sat=0 fail_viol=0 seed=1\n");
    let out = fsmreq(&["experiment", "--strategy", "complete", p(&fixture("M.csv")), p(&fixture("R.req")), "-o", p(&report)]);
    assert_eq!(code(&out), 0);
    assert_eq!(
        stdout(&out),
        "universe=531441 pass_sat=96908 pass_viol=0 fail_sat=0 fail_viol=434533 seed=0\n"
    );
    let text = fs::read_to_string(&report).unwrap();
    assert!(text.contains("guarantee:             holds"));
    assert!(text.ends_with("seed=0\n"));
}

#[test]
fn exit_codes_for_bad_invocations() {
    assert_eq!(code(&fsmreq(&["generate", "-a", "0", p(&fixture("M.csv"))])), 2);
    assert_eq!(code(&fsmreq(&["generate", "-s", "-a", "0", p(&fixture("M.csv"))])), 2);
    assert_eq!(code(&fsmreq(&["generate", "-h", p(&fixture("M.csv"))])), 2);
    assert_eq!(code(&fsmreq(&["frobnicate"])), 2);
    assert_eq!(code(&fsmreq(&["generate", "-h", "-a", "0", p(&fixture("R.req"))])), 3);
    assert_eq!(code(&fsmreq(&["generate", "-h", "-a", "0", "/nonexistent/model.csv"])), 3);
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.req");
    fs::write(&bad, "q0,a,{2}\n").unwrap();
    let out = fsmreq(&["generate", "-s", "-a", "0", p(&fixture("M.csv")), p(&bad), "-o", p(dir.path())]);
    assert_eq!(code(&out), 3);
    assert!(String::from_utf8_lossy(&out.stderr).contains("not allowed"));
}

#[test]
fn generate_then_check_self_conformance() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    for (method, req) in [("equiv", None), ("req-exh", Some("R1.req")), ("req-exh", Some("R2.req"))] {
        let model = fixture("FSBRTSX.csv");
        let mut args = vec!["generate", "--method", method, "-a", "0", p(&model)];
        let r = req.map(fixture);
        if let Some(r) = &r {
            args.push(p(r));
        }
        args.extend(["-o", p(d)]);
        assert_eq!(code(&fsmreq(&args)), 0, "{method}");
        let out = fsmreq(&["check", p(&fixture("FSBRTSX.csv")), p(&fixture("FSBRTSX.csv")), p(&d.join("suite.txt"))]);
        assert_eq!(code(&out), 0, "{method}");
    }
}
