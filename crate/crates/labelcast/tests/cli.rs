use std::path::PathBuf;

use labelcast::cli::{run_cli, CommandResult, EXIT_CHECK_FAILED, EXIT_INPUT, EXIT_OK, EXIT_USAGE};
use labelcast::formats::{parse_edge_list, parse_labels, parse_separation};
use labelcast_core::graph::compute_levels;
use labelcast_core::labelling::Scheme;
use labelcast_core::separability::check_separation;

fn sample(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("samples")
        .join(name)
        .display()
        .to_string()
}

fn run(args: &[&str]) -> CommandResult {
    run_cli(std::iter::once("labelcast").chain(args.iter().copied()))
}

#[test]
fn check_separable_prints_a_separation_for_a_tree() {
    let tree = sample("tree.txt");
    let r = run(&["check-separable", "--graph", &tree]);
    assert_eq!(r.status, EXIT_OK, "{}", r.report);
    let body = r.report.strip_prefix("separable\n").unwrap();
    let sep = parse_separation(body).unwrap();
    let g = parse_edge_list(&std::fs::read_to_string(&tree).unwrap()).unwrap();
    assert!(check_separation(&compute_levels(&g), &sep)
        .unwrap()
        .is_accept());
}

#[test]
fn check_separable_rejects_a_bad_separation() {
    let dir = tempfile::tempdir().unwrap();
    let sep = dir.path().join("sep.txt");
    std::fs::write(&sep, "level 1 part1: 1 2 part2:\n").unwrap();
    let r = run(&[
        "check-separable",
        "--graph",
        &sample("diamond.txt"),
        "--separation",
        sep.to_str().unwrap(),
    ]);
    assert_eq!(r.status, EXIT_CHECK_FAILED, "{}", r.report);
    assert!(r.report.contains("node 3 at level 2"));

    std::fs::write(&sep, "level 1 part1: 1 part2: 2\n").unwrap();
    let r = run(&[
        "check-separable",
        "--graph",
        &sample("diamond.txt"),
        "--separation",
        sep.to_str().unwrap(),
    ]);
    assert_eq!(r.status, EXIT_OK, "{}", r.report);

    std::fs::write(&sep, "level 1 part1: 1 part2:\n").unwrap();
    let r = run(&[
        "check-separable",
        "--graph",
        &sample("diamond.txt"),
        "--separation",
        sep.to_str().unwrap(),
    ]);
    assert_eq!(r.status, EXIT_INPUT);
    assert!(r.report.contains("neither part"), "{}", r.report);
}

#[test]
fn simulate_p4_reports_termination_round_six() {
    let r = run(&[
        "simulate",
        "--graph",
        &sample("p4.txt"),
        "--scheme",
        "LS1",
        "--protocol",
        "LS",
        "--verify",
    ]);
    assert_eq!(r.status, EXIT_OK, "{}", r.report);
    assert!(r.report.contains("termination_round 6\n"), "{}", r.report);
    assert!(r.report.contains("node 3 first_receipt 4\n"));
    assert!(!r.report.contains("FAIL"));
}

#[test]
fn simulate_refuses_mismatched_scheme() {
    let r = run(&[
        "simulate",
        "--graph",
        &sample("p4.txt"),
        "--scheme",
        "OACK3",
        "--protocol",
        "LS",
    ]);
    assert_eq!(r.status, EXIT_USAGE);
    assert!(
        r.report.contains("runs on LS1 labels, not OACK3"),
        "{}",
        r.report
    );

    let dir = tempfile::tempdir().unwrap();
    let labels = dir.path().join("l.txt");
    std::fs::write(&labels, "scheme LS1\n0 0\n1 0\n2 0\n3 0\n").unwrap();
    let r = run(&[
        "simulate",
        "--graph",
        &sample("p4.txt"),
        "--labels",
        labels.to_str().unwrap(),
        "--protocol",
        "LSACK",
    ]);
    assert_eq!(r.status, EXIT_USAGE);
}

#[test]
fn simulate_exact_timing_flags_two_parent_nodes() {
    let args = [
        "simulate",
        "--graph",
        &sample("diamond.txt"),
        "--scheme",
        "LS1",
        "--protocol",
        "LS",
        "--verify",
    ];
    let exact = run(&args);
    assert_eq!(exact.status, EXIT_CHECK_FAILED, "{}", exact.report);
    assert!(exact.report.contains("FAIL level-timing"));
    let relaxed = run(&[&args[..], &["--timing", "deadline"]].concat());
    assert_eq!(relaxed.status, EXIT_OK, "{}", relaxed.report);
}

#[test]
fn simulate_writes_a_jsonl_trace() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.jsonl");
    let r = run(&[
        "simulate",
        "--graph",
        &sample("tree.txt"),
        "--scheme",
        "oack3",
        "--protocol",
        "oack",
        "--trace",
        path.to_str().unwrap(),
    ]);
    assert_eq!(r.status, EXIT_OK, "{}", r.report);
    assert_eq!(r.output_path.as_deref(), Some(path.as_path()));
    let text = std::fs::read_to_string(&path).unwrap();
    let last: serde_json::Value = serde_json::from_str(text.lines().last().unwrap()).unwrap();
    assert_eq!(last["summary"]["protocol"], "OACK");
    assert_eq!(last["summary"]["completed"], true);
}

#[test]
fn reduce_reports_agreement() {
    let r = run(&["reduce", "--formula", &sample("unsat.cnf"), "--verify"]);
    assert_eq!(r.status, EXIT_OK, "{}", r.report);
    assert!(r.report.contains("both negative, agree"));
    let r = run(&["reduce", "--formula", &sample("sat.cnf"), "--verify"]);
    assert_eq!(r.status, EXIT_OK, "{}", r.report);
    assert!(r.report.contains("both positive, agree"));
    assert!(r.report.contains("assignment -> separation: ok"));
}

#[test]
fn label_writes_files_of_the_right_width() {
    let dir = tempfile::tempdir().unwrap();
    for (scheme, width) in [("OACK3", 3), ("LS1", 1), ("LSACK2", 2)] {
        let out = dir.path().join(format!("{scheme}.txt"));
        let r = run(&[
            "label",
            "--graph",
            &sample("tree.txt"),
            "--scheme",
            scheme,
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(r.status, EXIT_OK, "{}", r.report);
        let labels = parse_labels(&std::fs::read_to_string(&out).unwrap()).unwrap();
        assert_eq!(labels.scheme(), scheme.parse::<Scheme>().unwrap());
        assert_eq!(labels.scheme().width(), width);
        assert_eq!(labels.len(), 7);
    }
}

#[test]
fn find_separation_then_label_from_it() {
    let dir = tempfile::tempdir().unwrap();
    let sep = dir.path().join("sep.txt");
    let r = run(&[
        "find-separation",
        "--graph",
        &sample("diamond.txt"),
        "--out",
        sep.to_str().unwrap(),
    ]);
    assert_eq!(r.status, EXIT_OK, "{}", r.report);
    let r = run(&[
        "label",
        "--graph",
        &sample("diamond.txt"),
        "--scheme",
        "LS1",
        "--separation",
        sep.to_str().unwrap(),
    ]);
    assert_eq!(r.status, EXIT_OK, "{}", r.report);
    assert!(r.report.starts_with("scheme LS1\n"));
}

#[test]
fn derive_wban_keeps_links_below_threshold() {
    let r = run(&[
        "derive-wban",
        "--posture",
        "walking",
        "--threshold",
        "50",
        "--source",
        "navel",
    ]);
    assert_eq!(r.status, EXIT_OK, "{}", r.report);
    assert!(r.report.contains("link navel - chest (30.6 dB)"));
    assert!(!r.report.contains("link navel - ankle"));

    let r = run(&[
        "derive-wban",
        "--posture",
        "walking",
        "--threshold",
        "20",
        "--source",
        "navel",
    ]);
    assert_eq!(r.status, EXIT_INPUT);
    assert!(r.report.contains("disconnected"), "{}", r.report);
}

#[test]
fn usage_errors_exit_two_with_a_hint() {
    for args in [
        &["simulate", "--graph", "x"][..],
        &["label", "--graph", "x", "--scheme", "LS7"],
        &["frobnicate"],
        &[],
    ] {
        let r = run(args);
        assert_eq!(r.status, EXIT_USAGE, "{args:?}: {}", r.report);
        assert!(
            r.report.contains("Usage") || r.report.contains("--help"),
            "{args:?}: {}",
            r.report
        );
    }
    assert_eq!(run(&["--help"]).status, EXIT_OK);
}

#[test]
fn missing_input_files_surface_the_path() {
    let r = run(&["check-separable", "--graph", "/nonexistent/g.txt"]);
    assert_eq!(r.status, EXIT_INPUT);
    assert!(r.report.contains("/nonexistent/g.txt"));
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let args = [
        "simulate",
        "--graph",
        &sample("tree.txt"),
        "--scheme",
        "LSACK2",
        "--protocol",
        "LSACK",
        "--verify",
    ];
    assert_eq!(run(&args), run(&args));
    let args = ["label", "--graph", &sample("tree.txt"), "--scheme", "OACK3"];
    assert_eq!(run(&args), run(&args));
}
