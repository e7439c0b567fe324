use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use vcosmos::Error;
use vcosmos_cli::{bundled, run, Options, Scenario};

fn vcosmos(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vcosmos"))
        .args(args)
        .arg("--out-dir")
        .arg(dir)
        .output()
        .expect("binary runs")
}

fn parse_error(text: &str) -> (usize, usize, String) {
    let s = Scenario::parse(text, "t").and_then(|s| run(&s, &Options::default()));
    match s {
        Err(Error::Parse { line, column, message }) => (line, column, message),
        other => panic!("expected a parse error, got {:?}", other.map(|r| r.passed())),
    }
}

#[test]
fn bundled_scenarios_have_the_expected_verdicts() {
    for (name, text) in bundled::SCENARIOS {
        let report = run(&Scenario::parse(text, name).unwrap(), &Options::default()).unwrap();
        assert_eq!(report.passed(), *name != "corrupted-composition", "{name}");
        assert!(report.reverify(), "{name}");
    }
}

#[test]
fn exit_status_follows_the_verdicts() {
    let dir = tempfile::tempdir().unwrap();
    let ok = vcosmos(&["run", "unit-cosmos"], dir.path());
    assert_eq!(ok.status.code(), Some(0));
    assert!(dir.path().join("report.json").exists());
    assert!(dir.path().join("report.txt").exists());

    let bad = vcosmos(&["run", "corrupted-composition"], dir.path());
    assert_eq!(bad.status.code(), Some(1));
    let json = fs::read_to_string(dir.path().join("report.json")).unwrap();
    assert!(json.contains("\"verdict\": \"fail\""));
    assert!(json.contains("associativity (A, A, A, A) at basis triple (e1 in C(A, A), e1 in C(A, A), e1 in C(A, A))"));
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    for d in [&a, &b] {
        let out = vcosmos(&["run", "gp-dual-numbers", "--seed", "7"], d.path());
        assert_eq!(out.status.code(), Some(0));
    }
    for f in ["report.json", "report.txt"] {
        assert_eq!(fs::read(a.path().join(f)).unwrap(), fs::read(b.path().join(f)).unwrap(), "{f}");
    }
    let json = fs::read_to_string(a.path().join("report.json")).unwrap();
    assert!(json.contains("\"seed\": 7"));
}

#[test]
fn json_path_and_file_scenarios() {
    let dir = tempfile::tempdir().unwrap();
    let scn = dir.path().join("mine.scn");
    fs::write(&scn, "modulus 3\ncategory I unit\ncheck yoneda I random=3\n").unwrap();
    let json = dir.path().join("elsewhere.json");
    let out = vcosmos(&["run", scn.to_str().unwrap(), "--json", json.to_str().unwrap(), "--verbose"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    assert!(fs::read_to_string(&json).unwrap().contains("\"title\": \"mine\""));
    assert!(String::from_utf8(out.stdout).unwrap().contains("yoneda:I"));
}

#[test]
fn parse_errors_exit_2_with_position() {
    let dir = tempfile::tempdir().unwrap();
    let scn = dir.path().join("bad.scn");
    fs::write(&scn, "modulus 2\ncategory I unit\ncheck yoneda J\n").unwrap();
    let out = vcosmos(&["run", scn.to_str().unwrap()], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("3:14"));
    assert!(!dir.path().join("report.json").exists());

    let missing = vcosmos(&["run", "no-such-scenario"], dir.path());
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn resolution_errors_point_at_the_token() {
    assert_eq!(parse_error("modulus 4\n").0, 1);
    assert_eq!(parse_error("modulus 4\n").1, 9);
    let (l, c, m) = parse_error("modulus 2\ncategory R algebra 2\n  unit 1 0\n  mult\n    1 0 0\nend\n");
    assert_eq!((l, c), (4, 3));
    assert!(m.contains("2x4"), "{m}");
    let (l, c, _) = parse_error("modulus 2\ncategory Q quiver\n  objects a b\n  arrow f a z\nend\n");
    assert_eq!((l, c), (4, 13));
    let (l, c, _) = parse_error("modulus 2\ncategory I unit\npresheaf P on I\n  value J 1\nend\n");
    assert_eq!((l, c), (4, 9));
    assert_eq!(parse_error("modulus 2\ncategory I unit\ncheck yoneda I random=q\n").1, 23);
    let (l, c, _) = parse_error("modulus 2\ncategory I unit\ncheck frobnicate I\n");
    assert_eq!((l, c), (3, 7));
    let (l, _, m) = parse_error("modulus 2\ncosmos chain 0 1\ncategory K complexes\n  complex X 0 1 1 1\nend\n");
    assert_eq!(l, 4);
    assert!(m.contains("cap"), "{m}");
}

#[test]
fn presheaf_functoriality_is_validated() {
    // `x` must act nilpotently on any module over the dual numbers.
    let text = "modulus 2\ncategory R algebra 2\n  unit 1 0\n  mult\n    1 0 0 0\n    0 1 1 0\nend\npresheaf P on R\n  value R 1\n  action R R\n    1 1\nend\n";
    let (l, c, _) = parse_error(text);
    assert_eq!((l, c), (8, 10));
}

#[test]
fn ordinary_categories_need_every_composite() {
    let text = "modulus 2\ncategory L ordinary\n  objects a\n  arrow e a a\nend\n";
    let (l, c, m) = parse_error(text);
    assert_eq!((l, c), (2, 10));
    assert!(m.contains("missing composite"), "{m}");
    let ok = "modulus 2\ncategory L ordinary\n  objects a\n  arrow e a a\n  compose e e e\nend\ncheck axioms L\ncheck yoneda L random=3\n";
    let report = run(&Scenario::parse(ok, "t").unwrap(), &Options::default()).unwrap();
    assert!(report.passed());
}

#[test]
fn seed_override_changes_only_the_probes() {
    let s = Scenario::parse(bundled::get("gp-quiver").unwrap(), "gp-quiver").unwrap();
    let a = run(&s, &Options::default()).unwrap();
    let b = run(&s, &Options { seed: Some(11), max_dim: None }).unwrap();
    assert!(a.passed() && b.passed());
    assert_ne!(a.to_json(), b.to_json());
    let ids = |r: &vcosmos::HarnessReport| r.checks.iter().map(|c| c.id.clone()).collect::<Vec<_>>();
    assert_eq!(ids(&a), ids(&b));
}
