use std::path::PathBuf;
use std::process::Command as Process;

use deltainf::cli::{emit_report, run, run_text, Command, RunConfig, RunError};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}

fn deltainf(args: &[&str]) -> (i32, String, String) {
    let out = Process::new(env!("CARGO_BIN_EXE_deltainf"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().expect("exit code"),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn path(name: &str) -> String {
    fixture(name).to_string_lossy().into_owned()
}

#[test]
fn order_reports_two_on_the_triangular_fixture() {
    let (code, out, _) = deltainf(&["order", "--input", &path("tri2.alg")]);
    assert_eq!(code, 0);
    assert!(
        out.contains("CHECK associative_order cap=6 PASS order=2\n"),
        "{out}"
    );
    assert!(out.contains("LEDGER associative_order=2"));
    assert!(out.contains("seed=0"));
}

#[test]
fn ainf_passes_on_the_triangular_fixture() {
    let (code, out, _) = deltainf(&["ainf", "--input", &path("tri2.alg"), "--max-arity", "6"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("CHECK stasheff max_arity=6 PASS"));
}

#[test]
fn hochschild_without_pairing_is_an_input_error() {
    let (code, out, err) = deltainf(&["hochschild", "--input", &path("tri2.alg")]);
    assert_eq!(code, 2);
    assert!(out.is_empty());
    assert!(err.contains("pairing"));
}

#[test]
fn broken_fixture_fails_with_a_witness() {
    let (code, out, _) = deltainf(&["all", "--input", &path("broken.alg")]);
    assert_eq!(code, 1);
    let line = out
        .lines()
        .find(|l| l.contains(" FAIL "))
        .expect("a failing check");
    assert!(line.starts_with("CHECK validate_algebra"));
    assert!(line.contains("(e12,e22,e22)"), "{line}");
    assert!(line.contains("2*e12"), "{line}");
}

#[test]
fn every_bundled_file_passes_all_and_is_deterministic() {
    for name in ["tri2.alg", "dual.alg", "kk.alg", "deriv.alg"] {
        let (code, first, _) = deltainf(&["all", "--input", &path(name), "--seed", "3"]);
        assert_eq!(code, 0, "{name}: {first}");
        let (_, second, _) = deltainf(&["all", "--input", &path(name), "--seed", "3"]);
        assert_eq!(first, second, "{name}");
        assert!(first.lines().any(|l| l.starts_with("CHECK ")));
    }
}

#[test]
fn report_file_matches_standard_output() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("dual.report");
    let (code, out, _) = deltainf(&[
        "hochschild",
        "--input",
        &path("dual.alg"),
        "--report",
        report.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert_eq!(std::fs::read_to_string(&report).unwrap(), out);
    for key in [
        "epsilon=-1",
        "bv_reading=cochain",
        "grading=cochain",
        "sigma=+1",
    ] {
        assert!(out.contains(&format!("LEDGER {key}\n")), "{key}: {out}");
    }
}

#[test]
fn bad_input_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.alg");
    std::fs::write(&bad, "algebra bad\nbasis e:zero\nend\n").unwrap();
    let (code, _, err) = deltainf(&["validate", "--input", bad.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("line 2"), "{err}");
    let (code, _, _) = deltainf(&["validate", "--input", "/no/such/file.alg"]);
    assert_eq!(code, 2);
    let (code, _, _) = deltainf(&["bogus", "--input", &path("tri2.alg")]);
    assert_eq!(code, 2);
    let (code, _, _) = deltainf(&["order", "--input", &path("dual.alg")]);
    assert_eq!(code, 2);
}

#[test]
fn zero_bounds_are_rejected() {
    let mut config = RunConfig::new(Command::Order, fixture("tri2.alg"));
    config.max_arity = 0;
    assert!(matches!(run(&config), Err(RunError::Input(_))));
}

#[test]
fn every_command_registers_a_check() {
    let text = std::fs::read_to_string(fixture("tri2.alg")).unwrap();
    for command in [
        Command::Validate,
        Command::Ainf,
        Command::Order,
        Command::Compat,
        Command::Cohomology,
        Command::Bar,
        Command::All,
    ] {
        let mut config = RunConfig::new(command, fixture("tri2.alg"));
        config.max_arity = 4;
        let report = run_text(&config, &text).unwrap();
        assert!(!report.checks.is_empty(), "{}", command.name());
        assert!(report.passed(), "{}", emit_report(&report));
        assert_eq!(Command::parse(command.name()), Some(command));
    }
}

#[test]
fn compat_above_order_two_fails_with_a_witness() {
    // e idempotent up to 2, Δe = u, u·anything = 0: m_3(e,e,e) = Δ(eee) = 4u
    let text = "\
algebra idem
basis u:1 e:0
product e*e = 2*e
delta e -> u
end
";
    let report = run_text(&RunConfig::new(Command::Compat, "idem.alg"), text).unwrap();
    let out = emit_report(&report);
    assert_eq!(report.exit_code(), 1, "{out}");
    assert!(out.contains("CHECK compatibility order<=2 FAIL"), "{out}");
    assert!(out.contains("m_3(e,e,e) = 4*u"), "{out}");
    let order = run_text(&RunConfig::new(Command::Order, "idem.alg"), text).unwrap();
    assert!(emit_report(&order).contains("PASS order>6"));
}
