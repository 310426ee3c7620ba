use finisig_core::scenario::Report;
use finisig_core::Interval;
use std::path::PathBuf;
use std::process::{Command, Output};

fn report_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../reports").join(format!("{name}.json"))
}

fn finisig(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_finisig")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn tampered(edit: impl FnOnce(&mut Report)) -> (tempfile::TempDir, PathBuf) {
    let mut report = Report::from_json(&std::fs::read_to_string(report_path("canard")).unwrap()).unwrap();
    edit(&mut report);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("canard.json");
    std::fs::write(&path, report.to_json()).unwrap();
    (dir, path)
}

#[test]
fn replay_of_a_passing_report_succeeds() {
    let out = finisig(&["replay", report_path("canard").to_str().unwrap()]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("verdicts identical"));
}

#[test]
fn replay_of_a_failing_report_reproduces_the_failure() {
    let out = finisig(&["replay", report_path("ftw_cubic").to_str().unwrap()]);
    let text = stdout(&out);
    assert!(!out.status.success());
    assert!(text.contains("FAIL connection_covering"));
    assert!(text.contains("verdicts identical"));
}

#[test]
fn edited_time_enclosure_is_caught() {
    let (_dir, path) = tampered(|r| {
        let t = r.times.iter_mut().find(|t| t.name == "arrival_total").unwrap();
        t.time.value = Interval::new(0.3, 0.31);
    });
    let out = finisig(&["replay", path.to_str().unwrap()]);
    let text = stdout(&out);
    assert!(!out.status.success());
    assert!(text.contains("mismatch arrival_total"), "{text}");
    assert!(text.contains("verdicts differ"));
}

#[test]
fn edited_cone_constant_is_caught() {
    let (_dir, path) = tampered(|r| r.cones[0].m *= 2.0);
    let out = finisig(&["replay", path.to_str().unwrap()]);
    assert!(!out.status.success());
    assert!(stdout(&out).contains("mismatch"));
}

#[test]
fn compose_prints_a_lattice_wave_and_distance() {
    let out = finisig(&[
        "compose",
        report_path("compacton_cubic").to_str().unwrap(),
        "--symbols",
        "+-+",
        "--spacing",
        "8",
        "--compare",
        "++-",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert!(text.contains("distance"));
}

#[test]
fn overlapping_offsets_are_refused() {
    let out = finisig(&[
        "compose",
        report_path("compacton_cubic").to_str().unwrap(),
        "--symbols",
        "++",
        "--offsets",
        "0,1",
    ]);
    assert!(!out.status.success());
}

#[test]
fn unknown_scenario_is_an_error() {
    let out = finisig(&["run", "no_such_scenario"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown scenario"));
}
