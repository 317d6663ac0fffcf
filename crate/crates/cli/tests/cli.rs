use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn tracediag(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tracediag"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p
}

#[test]
fn trace_of_a_bound_matrix() {
    let dir = TempDir::new().unwrap();
    write(&dir, "t.tdg", "builtin:trace(A) @ dim 2\n");
    write(&dir, "a.tmat", "matrix A 2 2\n1 2\n3 4\n");
    let o = tracediag(&["eval", "t.tdg", "--bind", "a.tmat"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o), "5\n");
}

#[test]
fn determinant_diagram_of_the_identity() {
    // Two colorings survive, each with signature -1.
    let dir = TempDir::new().unwrap();
    write(&dir, "d.tdg", "builtin:det(A) @ dim 2\n");
    write(&dir, "i.tmat", "matrix A 2 2\n1 0\n0 1\n");
    let o = tracediag(&["eval", "d.tdg", "--bind", "i.tmat"], dir.path());
    assert_eq!(stdout(&o), "-2\n");
}

#[test]
fn unbound_label_is_an_input_error() {
    let dir = TempDir::new().unwrap();
    write(&dir, "d.tdg", "dim 2\nloop l mark A B\n");
    write(&dir, "a.tmat", "matrix A 2 2\n1 2\n3 4\n");
    let o = tracediag(&["eval", "d.tdg", "--bind", "a.tmat"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("unbound label B"), "{}", stderr(&o));
}

#[test]
fn parse_errors_and_missing_files_exit_two() {
    let dir = TempDir::new().unwrap();
    write(&dir, "bad.tdg", "dim 2\nvertex v sideways\n");
    let o = tracediag(&["eval", "bad.tdg"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 2, column 10"), "{}", stderr(&o));
    let o = tracediag(&["eval", "missing.tdg"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    let o = tracediag(&["verify", "no-such-identity"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    let o = tracediag(&["verify", "binor", "--dim", "2"], dir.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn dimension_mismatch_is_reported_at_evaluation() {
    let dir = TempDir::new().unwrap();
    write(&dir, "d.tdg", "builtin:trace(A) @ dim 3\n");
    write(&dir, "a.tmat", "matrix A 2 2\n1 2\n3 4\n");
    let o = tracediag(&["eval", "d.tdg", "--bind", "a.tmat"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("dimension mismatch"), "{}", stderr(&o));
}

#[test]
fn framed_diagrams_print_their_function_matrix() {
    let dir = TempDir::new().unwrap();
    write(
        &dir,
        "s.tdg",
        "diagram strand\ndim 2\nvertex p leaf; vertex q leaf\nedge s p q mark A^T\ninputs p\noutputs q\n\ndiagram other = builtin:trace() @ dim 2\n",
    );
    write(&dir, "a.tmat", "matrix A 2 2\n1 2\n3 4\n");
    let o = tracediag(&["eval", "s.tdg", "--bind", "a.tmat"], dir.path());
    assert_eq!(o.status.code(), Some(2), "two entries need --diagram");
    let o = tracediag(
        &["eval", "s.tdg", "--bind", "a.tmat", "--diagram", "strand"],
        dir.path(),
    );
    assert_eq!(stdout(&o), "function n=2 inputs=1 outputs=1 rows=2 cols=2\n1 3\n2 4\n");
    let o = tracediag(&["eval", "s.tdg", "--diagram", "other"], dir.path());
    assert_eq!(stdout(&o), "2\n");
}

#[test]
fn relations_with_imports() {
    let dir = TempDir::new().unwrap();
    write(&dir, "defs.tdg", "dim 2\ndiagram sq\nloop l mark A A\n");
    write(
        &dir,
        "r.trel",
        "import defs.tdg\ndim 2\nrelation\n1 * sq\n-1/2 * builtin:trace(A)\n",
    );
    write(&dir, "a.tmat", "dim 2\nmatrix A 2 2\n1 2\n3 4\n");
    let o = tracediag(&["eval", "r.trel", "--bind", "a.tmat"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    // tr(A^2) - tr(A)/2 = 29 - 5/2
    assert_eq!(stdout(&o), "53/2\n");
}

#[test]
fn charpoly_matches_the_oracle() {
    let dir = TempDir::new().unwrap();
    write(&dir, "m.tmat", "matrix M 3 3\n2 -1 0\n4 3 1\n0 5 -2\n");
    let o = tracediag(&["charpoly", "--bind", "m.tmat", "--matrix", "M"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 3);
    assert_eq!(lines[0].strip_prefix("diagram "), lines[1].strip_prefix("oracle "));
    assert_eq!(lines[2], "match");
}

#[test]
fn verify_output_is_independent_of_jobs() {
    let dir = TempDir::new().unwrap();
    let run = |jobs: &str| {
        let o = tracediag(
            &["verify", "det-diagram", "--trials", "6", "--seed", "3", "--jobs", jobs],
            dir.path(),
        );
        assert_eq!(o.status.code(), Some(0));
        stdout(&o)
    };
    let one = run("1");
    assert_eq!(one, run("4"));
    assert_eq!(one.lines().count(), 3);
    assert!(one.starts_with("det-diagram dim=2 trials=6 status=proven-exact-on-samples\n"));
}

#[test]
fn records_are_json_lines() {
    let dir = TempDir::new().unwrap();
    let o = tracediag(
        &["verify", "trace", "--dim", "3", "--trials", "2", "--format", "records"],
        dir.path(),
    );
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["status"], "proven-exact-on-samples");
    assert!(v.get("elapsed_ms").is_none());
    let o = tracediag(
        &["verify", "trace", "--dim", "3", "--trials", "2", "--format", "records", "--timing"],
        dir.path(),
    );
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert!(v.get("elapsed_ms").is_some());
}

#[test]
fn polarize_and_pfaffian_report_constants() {
    let dir = TempDir::new().unwrap();
    let o = tracediag(&["polarize", "--dim", "2"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("note constant=2 "), "{}", stdout(&o));
    let o = tracediag(&["pfaffian", "--dim", "2", "--trials", "4", "--seed", "5"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("note constant="), "{text}");
    assert_eq!(text.matches("ratio=").count(), 4);
    let o = tracediag(&["pfaffian", "--dim", "3"], dir.path());
    assert_eq!(o.status.code(), Some(2));
}
