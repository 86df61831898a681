use std::fs;

use skylogic::cli::run;
use skylogic::report::DSE_HEADER;

fn invoke(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("skylogic").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn write_config(dir: &tempfile::TempDir, text: &str) -> String {
    let path = dir.path().join("run.cfg");
    fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn dse_table_and_best_point() {
    let (code, out, err) = invoke(&["dse"]);
    assert_eq!(code, 0, "{err}");
    let lines: Vec<_> = out.lines().collect();
    assert_eq!(lines[0], DSE_HEADER);
    assert_eq!(lines.len(), 76);
    assert!(lines[1..].iter().all(|l| l.split(',').count() == 10));

    let (code, summary, _) = invoke(&["dse", "--format", "report"]);
    assert_eq!(code, 0);
    assert!(summary.contains("best_edp_combined:\n    ms: 1e5 A/m\n    ku: 8e5 J/m^3\n    alpha: 0.2\n"));
}

#[test]
fn repeater_free_trajectory_is_annihilated() {
    let (code, out, err) = invoke(&["trajectory", "--jx", "9e10", "--no-repeaters"]);
    assert_eq!(code, 1);
    assert!(out.starts_with("t_global,x,y,segment_kind\n"));
    assert!(err.contains("outcome: Annihilated"));
}

#[test]
fn planned_trajectory_reaches() {
    let (code, out, err) = invoke(&["trajectory", "--format", "report"]);
    assert_eq!(code, 0, "{err}");
    assert!(out.contains("outcome: Reached"));
    assert!(out.contains("R2: ["));
}

#[test]
fn perf_identities_in_report() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(&dir, "[material]\nalpha = 0.2\n");
    let (code, out, err) = invoke(&["perf", "--config", &cfg]);
    assert_eq!(code, 0, "{err}");
    for key in ["t_total:", "e_total:", "edp_total:", "e_prop:", "(20.000 ps)", "(25.000 ps)"] {
        assert!(out.contains(key), "missing {key}");
    }
}

#[test]
fn config_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(&dir, "[material]\nalpha = 1.5\n");
    let (code, out, err) = invoke(&["perf", "--config", &cfg]);
    assert_eq!(code, 2);
    assert!(out.is_empty());
    assert!(err.contains("line 2") && err.contains("alpha"), "{err}");

    let (code, _, _) = invoke(&["perf", "--config", "/nonexistent/skylogic.cfg"]);
    assert_eq!(code, 2);
    let (code, _, _) = invoke(&["frobnicate"]);
    assert_eq!(code, 2);
}

#[test]
fn infeasible_plan_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(&dir, "[material]\nalpha = 0.05\n");
    let (code, out, err) = invoke(&["plan", "--config", &cfg]);
    assert_eq!(code, 1);
    assert!(out.contains("feasible: false"));
    assert!(err.contains("TooManyRepeaters"));
    let (code, out, _) = invoke(&["perf", "--config", &cfg]);
    assert_eq!(code, 1);
    assert!(out.is_empty());
}

#[test]
fn cascade_and_gate_outputs() {
    let (code, out, _) = invoke(&["cascade", "--input", "1"]);
    assert_eq!(code, 0);
    assert!(out.contains("stage_0:\n    skyrmion_present: true"));
    assert!(out.contains("stage_1:\n    skyrmion_present: false"));
    assert!(out.trim_end().ends_with("next_stage_nucleated: true"));

    let (code, out, _) = invoke(&["gate", "--kind", "nor2"]);
    assert_eq!(code, 0);
    let outputs: Vec<&str> = out
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(3).unwrap())
        .collect();
    assert_eq!(outputs, ["1", "0", "0", "0"]);
}

#[test]
fn out_directory_receives_files() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("results");
    let target_str = target.to_string_lossy().into_owned();
    let (code, out, _) = invoke(&["dse", "--out", &target_str]);
    assert_eq!(code, 0);
    assert!(out.is_empty());
    let table = fs::read_to_string(target.join("dse.csv")).unwrap();
    assert!(table.starts_with(DSE_HEADER));
    assert!(target.join("dse_summary.txt").exists());

    let (code, _, _) = invoke(&["trajectory", "--out", &target_str]);
    assert_eq!(code, 0);
    let csv = fs::read_to_string(target.join("trajectory.csv")).unwrap();
    assert!(csv.starts_with("t_global,x,y,segment_kind\n"));
}

#[test]
fn output_is_reproducible() {
    for args in [&["trajectory"][..], &["plan"], &["perf"], &["dse", "--threads", "3"]] {
        let first = invoke(args);
        let second = invoke(args);
        assert_eq!(first, second, "{args:?}");
    }
}
