#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use treesplit::document::{emit_iet, emit_system};
use treesplit_cli::run_command;

const GOLDEN: &str = "system v1\niet\n  lengths = [1, 1/2 + 1/2*sqrt(5)]; permutation = [2, 1]\nend\n";

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("treesplit").chain(args.iter().copied());
    let code = run_command(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

fn golden_system(dir: &Path) -> String {
    let s = treesplit::iet::iet_to_system(&common::golden()).unwrap();
    write(dir, "golden.sys", &emit_system(&s))
}

/// Rough DOT grammar: a digraph header, node and edge statements, closing brace.
fn assert_dot(text: &str) {
    let mut lines = text.lines();
    let head = lines.next().unwrap();
    assert!(head.starts_with("digraph ") && head.ends_with('{'), "{head}");
    assert_eq!(text.lines().last(), Some("}"));
    for l in text.lines().skip(1) {
        if l == "}" {
            continue;
        }
        let l = l.trim();
        assert!(l.ends_with("];"), "statement {l:?}");
        let id = l.split([' ', '[']).next().unwrap();
        assert!(id == "graph" || id.chars().all(|c| c.is_ascii_alphanumeric() || c == '_'), "{l:?}");
        assert_eq!(l.matches('"').count() % 2, 0, "{l:?}");
    }
}

#[test]
fn validate_passes_on_a_valid_document() {
    let dir = tempfile::tempdir().unwrap();
    let path = golden_system(dir.path());
    let (code, out, _) = run(&["validate", &path]);
    assert_eq!(code, 0);
    assert!(out.contains("verdict=PASS"), "{out}");
}

#[test]
fn validate_fails_on_a_non_isometry() {
    let dir = tempfile::tempdir().unwrap();
    let doc = "system v1\nfield rational\ntree T0\n  vertex l\n  vertex r\n  edge e l r 3\nend\nletter a\n  map T0:l -> T0:e@1\n  map T0:e@1 -> T0:r\nend\n";
    let path = write(dir.path(), "bad.sys", doc);
    let (code, out, _) = run(&["validate", &path]);
    assert_eq!(code, 1, "{out}");
    assert!(out.contains("verdict=FAIL") && out.contains("witness="), "{out}");
}

#[test]
fn malformed_scalar_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let doc = "system v1\nfield rational\ntree T0\n  vertex l\n  vertex r\n  edge e l r 1/0\nend\n";
    let path = write(dir.path(), "bad.sys", doc);
    let (code, _, err) = run(&["gamma", &path]);
    assert_eq!(code, 2);
    assert!(err.contains("line 6"), "{err}");
}

#[test]
fn iet_compare_reports_match_on_golden() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "golden.iet", GOLDEN);
    let (code, out, _) = run(&["iet", "compare", "--k", "10", &path]);
    assert_eq!(code, 0);
    assert!(out.contains("verdict=MATCH") && out.contains("k=10"), "{out}");
    assert_eq!(out.matches("lengths=true intervals=true folds=true").count(), 10);
}

#[test]
fn iet_compare_leftmost_policy_diverges() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "golden.iet", GOLDEN);
    let (code, out, _) = run(&["iet", "compare", "--k", "3", "--policy", "leftmost", &path]);
    assert_eq!(code, 1);
    assert!(out.contains("verdict=MISMATCH") && out.contains("first_divergence=1"), "{out}");
}

#[test]
fn iet_rauzy_flags_a_rational_connection() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "rational.iet", &emit_iet(&common::rational_two()));
    let (code, out, _) = run(&["iet", "rauzy", "--max-steps", "5", &path]);
    assert_eq!(code, 1, "{out}");
    assert!(out.contains("keane_violation="), "{out}");
}

#[test]
fn iet_import_emits_the_system_document() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "golden.iet", GOLDEN);
    let (code, out, _) = run(&["iet", "import", &path]);
    assert_eq!(code, 0);
    let s = treesplit::iet::iet_to_system(&common::golden()).unwrap();
    assert_eq!(out, emit_system(&s));
}

#[test]
fn whitehead_disconnected_vertex_exits_one_with_witness() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "refl.sys", &emit_system(&common::reflections()));
    let (code, out, _) = run(&["whitehead", "--depth", "10", &path]);
    assert_eq!(code, 1);
    assert!(out.contains("verdict=FAIL") && out.contains("witness={a,a^-1} {b,b^-1}"), "{out}");
    assert!(out.contains("legality_L=10"));
}

#[test]
fn whitehead_golden_passes_and_exports_dot() {
    let dir = tempfile::tempdir().unwrap();
    let path = golden_system(dir.path());
    let out_dir = dir.path().join("out");
    let (code, out, _) = run(&["whitehead", "--legality-L", "10", "--out", out_dir.to_str().unwrap(), &path]);
    assert_eq!(code, 0, "{out}");
    let dot = fs::read_to_string(out_dir.join("whitehead_T0.dot")).unwrap();
    assert_dot(&dot);
    assert!(dot.contains("legal=true"));
    assert_eq!(fs::read_to_string(out_dir.join("whitehead.report")).unwrap(), out);
}

#[test]
fn turns_lists_every_turn_with_its_depth() {
    let dir = tempfile::tempdir().unwrap();
    let path = golden_system(dir.path());
    let (code, out, _) = run(&["turns", "--legality-L", "4", &path]);
    assert_eq!(code, 0);
    assert!(out.contains("legality_L=4") && out.contains("turns=6") && out.contains("legal=3"), "{out}");
}

#[test]
fn gamma_export_is_a_dot_digraph() {
    let dir = tempfile::tempdir().unwrap();
    let path = golden_system(dir.path());
    let out_dir = dir.path().join("g");
    let (code, out, _) = run(&["gamma", "--out", out_dir.to_str().unwrap(), &path]);
    assert_eq!(code, 0);
    assert!(out.contains("betti=2") && out.contains("rose=true"), "{out}");
    assert_dot(&fs::read_to_string(out_dir.join("gamma.dot")).unwrap());
}

#[test]
fn minimality_reports_depths_and_verdicts() {
    let dir = tempfile::tempdir().unwrap();
    let path = golden_system(dir.path());
    let (code, out, _) = run(&["minimality", "--depth-n", "3", "--recurrence-R", "20", &path]);
    assert_eq!(code, 0);
    assert!(out.contains("verdict=PASS") && out.contains("depth_n=3") && out.contains("recurrence_R=20"));
    let path = write(dir.path(), "refl.sys", &emit_system(&common::reflections()));
    let (code, out, _) = run(&["minimality", "--depth-n", "1", "--recurrence-R", "4", &path]);
    assert_eq!(code, 1, "{out}");
    assert!(out.contains("witness="), "{out}");
    let (code, _, _) = run(&["minimality", "--depth-n", "5", "--recurrence-R", "4", &path]);
    assert_eq!(code, 2);
}

#[test]
fn rational_exchange_is_flagged_eventually_periodic() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "rational.iet", &emit_iet(&common::rational_two()));
    let (_, out, _) = run(&["minimality", "--depth-n", "3", "--recurrence-R", "10", &path]);
    assert!(out.contains("eventually_periodic=true"), "{out}");
}

#[test]
fn index_strict_fails_on_a_stabilizer_and_allow_reports_the_bound() {
    let dir = tempfile::tempdir().unwrap();
    let path = golden_system(dir.path());
    let (code, _, err) = run(&["index", "--radius-r", "6", &path]);
    assert_eq!(code, 2);
    assert!(err.contains("cycle"), "{err}");
    let out_dir = dir.path().join("idx");
    let (code, out, _) =
        run(&["index", "--radius-r", "6", "--allow-stabilizer", "--out", out_dir.to_str().unwrap(), &path]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("geometric_sum=2") && out.contains("bound=2"), "{out}");
    assert_dot(&fs::read_to_string(out_dir.join("orbit_1.dot")).unwrap());
    assert_dot(&fs::read_to_string(out_dir.join("directions_1.dot")).unwrap());
    let (code, out, _) = run(&["index", "--radius-r", "6", "--point", "T0:e0@1/2", &path]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("point.1.geometric=0"), "{out}");
}

#[test]
fn diagonal_closes_a_leaf_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = golden_system(dir.path());
    let leaves = write(dir.path(), "leaves.txt", "basepoint T0:e0@1/2\npair a b | b^-1 a^-1\npair b^-1 a^-1 | a a\n");
    let (code, out, _) = run(&["diagonal", &path, &leaves]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("pairs_in=2") && out.contains("pairs_out=6") && out.contains("flip_invariant=true"), "{out}");
    assert!(out.contains("pair.added=a b | a a"), "{out}");
    let bad = write(dir.path(), "bad.txt", "pair a | b\n");
    assert_eq!(run(&["diagonal", &path, &bad]).0, 2);
}

#[test]
fn rips_split_and_induct_run_on_documents() {
    let dir = tempfile::tempdir().unwrap();
    let levitt = write(dir.path(), "levitt.sys", &emit_system(&common::levitt_example()));
    let (code, out, _) = run(&["rips", "--max-steps", "3", &levitt]);
    assert_eq!(code, 0);
    assert!(out.contains("steps=3") && out.contains("halted=false"), "{out}");
    let (code, out, _) = run(&["induct", "--max-steps", "25", "--max-split-steps", "0", &levitt]);
    assert_eq!(code, 0);
    assert!(out.contains("classification=LevittEvidence"), "{out}");

    let golden = golden_system(dir.path());
    let (code, out, _) = run(&["split", "--find", &golden]);
    assert_eq!(code, 0);
    assert!(out.contains("splitting_points=4"), "{out}");
    let out_dir = dir.path().join("s");
    let (code, out, _) =
        run(&["split", "--max-steps", "2", "--policy", "rightmost", "--out", out_dir.to_str().unwrap(), &golden]);
    assert_eq!(code, 0);
    assert!(out.contains("step.2.betti=2"), "{out}");
    let again = fs::read_to_string(out_dir.join("split_2.sys")).unwrap();
    assert!(treesplit::document::parse_system(&again).is_ok());
}

#[test]
fn field_flag_must_match_the_document() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "golden.iet", GOLDEN);
    assert_eq!(run(&["validate", "--field", "quad:5", &path]).0, 0);
    assert_eq!(run(&["validate", "--field", "rational", &path]).0, 2);
    assert_eq!(run(&["validate", "--field", "quad:4", &path]).0, 2);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["frobnicate"]).0, 2);
    assert_eq!(run(&["validate"]).0, 2);
    assert_eq!(run(&["validate", "/nonexistent/file"]).0, 2);
    assert_eq!(run(&["turns", "--legality-L", "0", "/nonexistent/file"]).0, 2);
    assert_eq!(run(&["--help"]).0, 0);
}

#[test]
fn reports_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let path = golden_system(dir.path());
    for args in [vec!["induct", "--max-split-steps", "4"], vec!["index", "--allow-stabilizer"], vec!["whitehead"]] {
        let mut a = args.clone();
        a.push(&path);
        let first = run(&a);
        assert_eq!(first, run(&a));
    }
}

#[test]
fn binary_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let refl: PathBuf = dir.path().join("refl.sys");
    fs::write(&refl, emit_system(&common::reflections())).unwrap();
    let bin = env!("CARGO_BIN_EXE_treesplit");
    let status = |args: &[&str]| Command::new(bin).args(args).arg(&refl).output().unwrap().status.code();
    assert_eq!(status(&["validate"]), Some(0));
    assert_eq!(status(&["whitehead", "--depth", "10"]), Some(1));
    assert_eq!(status(&["index", "--radius-r", "1"]), Some(2));
}
