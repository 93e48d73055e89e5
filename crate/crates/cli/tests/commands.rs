use std::process::Command as Proc;

use aspec_cli::{parse, run, Command, Format, Options};

const A2: &str = "field: Q\nalgebra quiver\nvertices: 1 2\narrow a: 1 -> 2\nend\n";
const DUAL: &str = "field: Q\nalgebra poly\nvars: x\nrelation: x*x\nend\n";
const SPLIT: &str = "# k × k\nfield: Q\nalgebra poly\nvars: x\nrelation: x*x - x\nend\n";

fn value(text: &str, command: Command, opts: Options, key: &str) -> String {
    let r = run(command, text, opts).unwrap();
    r.find(key).and_then(|n| n.value.clone()).unwrap_or_else(|| panic!("no {key}"))
}

#[test]
fn parses_minimal_and_quiver_documents() {
    let k = parse("field: Q\nalgebra poly\nvars: x\nrelation: x\nend\n").unwrap();
    assert_eq!(k.build_algebra().unwrap().dim(), 1);
    let a2 = parse(A2).unwrap();
    assert_eq!(a2.build_algebra().unwrap().dim(), 3);
    let f5 = parse("field: F5\nalgebra quiver\nvertices: 1 2\narrow a: 1 -> 2\nend\n").unwrap();
    assert_eq!(f5.build_algebra().unwrap().dim(), 3);
}

#[test]
fn malformed_action_names_module() {
    let text = format!("{DUAL}module M dim 2\naction x: [1 0 0; 0 1 0]\nend\n");
    let err = run(Command::Ext, &text, Options { modules: vec!["M".into()], ..Options::default() }).unwrap_err();
    assert!(err.to_string().contains("module M"), "{err}");
    assert_eq!(err.exit_code(), 2);
}

#[test]
fn unknown_field_is_input_error() {
    let err = parse("field: Z\n").unwrap_err();
    assert_eq!(err.exit_code(), 2);
}

#[test]
fn simples_of_a2() {
    assert_eq!(value(A2, Command::Simples, Options::default(), "simples"), "2");
}

#[test]
fn ext_of_a2_is_directed() {
    let r = run(Command::Ext, A2, Options::default()).unwrap();
    let ext1 = |key: &str| r.find(key).unwrap().find("Ext1").unwrap().value.clone().unwrap();
    assert_eq!(ext1("(S1,S2)"), "1");
    assert_eq!(ext1("(S2,S1)"), "0");
}

#[test]
fn hull_of_dual_numbers() {
    let opts = Options { order: Some(3), ..Options::default() };
    let p = value(DUAL, Command::Hull, opts, "presentation");
    assert!(p.contains("t(1,1)") && p.contains("t^2"), "{p}");
}

#[test]
fn verify_split_algebra_passes() {
    let r = run(Command::Verify, SPLIT, Options::default()).unwrap();
    assert!(!r.failed);
    let text = r.render(Format::Text);
    assert!(!text.contains("FAIL"), "{text}");
    assert!(text.contains("Spec comparison: PASS"));
}

#[test]
fn dset_of_idempotent() {
    let opts = Options { elems: vec!["x".into(), "1 - x".into()], ..Options::default() };
    let r = run(Command::Dset, SPLIT, opts).unwrap();
    assert_eq!(r.find("D(x)").unwrap().value.as_deref(), Some("{S2}"));
    assert_eq!(r.find("D(1 - x)").unwrap().value.as_deref(), Some("{S1}"));
}

#[test]
fn aspec_reports_presheaf_findings_on_a2() {
    let r = run(Command::Aspec, A2, Options::default()).unwrap();
    assert_eq!(r.find("sheaf axioms").unwrap().value.as_deref().map(|v| v.starts_with("PASS")), Some(true));
    assert!(r.find("presheaf findings").unwrap().children.iter().any(|n| n.value.as_deref().unwrap_or("").contains("locality")));
}

#[test]
fn reports_are_deterministic() {
    for c in [Command::Hull, Command::Aspec, Command::Verify] {
        let a = run(c, A2, Options::default()).unwrap();
        let b = run(c, A2, Options::default()).unwrap();
        assert_eq!(a.render(Format::Text), b.render(Format::Text));
        assert_eq!(a.render(Format::Tree), b.render(Format::Tree));
    }
}

#[test]
fn binary_exit_codes() {
    let dir = std::env::temp_dir().join(format!("aspec-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let good = dir.join("split.txt");
    std::fs::write(&good, SPLIT).unwrap();
    let bad = dir.join("bad.txt");
    std::fs::write(&bad, "field: Q\nalgebra nonsense\nend\n").unwrap();
    let bin = env!("CARGO_BIN_EXE_aspec");
    let ok = Proc::new(bin).args(["verify", "--input"]).arg(&good).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    let again = Proc::new(bin).args(["verify", "--input"]).arg(&good).output().unwrap();
    assert_eq!(ok.stdout, again.stdout);
    let err = Proc::new(bin).args(["simples", "--input"]).arg(&bad).output().unwrap();
    assert_eq!(err.status.code(), Some(2));
    std::fs::remove_dir_all(&dir).unwrap();
}
