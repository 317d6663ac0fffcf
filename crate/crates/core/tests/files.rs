use std::fs;

use tempfile::TempDir;

use tracediag::dsl::{
    load_diagram_set, load_matrix_file, load_relation, parse_diagram, parse_diagram_set,
    serialize_diagram, serialize_diagram_set,
};
use tracediag::eval::{as_function_matrix, evaluate_closed};
use tracediag::lab::oracle;
use tracediag::library::{self, BUILTIN_NAMES};
use tracediag::scalar::{int, ratio};
use tracediag::{Dimension, Error, Matrix, MatrixBinding};

#[test]
fn relation_files_resolve_imports_next_to_them() {
    let dir = TempDir::new().unwrap();
    fs::create_dir(dir.path().join("lib")).unwrap();
    fs::write(
        dir.path().join("lib/loops.tdg"),
        "dim 2\ndiagram ab\nloop l mark A B\ndiagram a\nloop l mark A\n",
    )
    .unwrap();
    fs::write(
        dir.path().join("r.trel"),
        "import lib/loops.tdg\nrelation\n2 * ab\n-1 * a\n",
    )
    .unwrap();
    fs::write(
        dir.path().join("m.tmat"),
        "matrix A 2 2\n1 2\n3 4\nmatrix B 2 2\n0 1\n1 0\n",
    )
    .unwrap();
    let sum = load_relation(dir.path().join("r.trel")).unwrap();
    let b = load_matrix_file(dir.path().join("m.tmat")).unwrap();
    let a = b.matrix("A").unwrap();
    let expected = (a * b.matrix("B").unwrap()).trace() * int(2) - a.trace();
    assert_eq!(sum.closed_value(&b).unwrap(), expected);
    assert_eq!(expected, int(5));
}

#[test]
fn missing_files_are_io_errors() {
    let dir = TempDir::new().unwrap();
    let err = load_diagram_set(dir.path().join("absent.tdg")).unwrap_err();
    assert!(matches!(err, Error::Io { .. }), "{err}");
    fs::write(dir.path().join("r.trel"), "import nope.tdg\nrelation\n").unwrap();
    let err = load_relation(dir.path().join("r.trel")).unwrap_err();
    assert!(matches!(&err, Error::Io { path, .. } if path.ends_with("nope.tdg")), "{err}");
}

#[test]
fn every_builtin_resolves_to_valid_diagrams() {
    let s = |v: &[&str]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
    let cases: Vec<(&str, Vec<String>, usize)> = vec![
        ("identity", s(&["2"]), 2),
        ("perm", s(&["2", "3", "1"]), 3),
        ("antisym", s(&["3"]), 3),
        ("trace", s(&["A", "B"]), 2),
        ("det", s(&["A"]), 3),
        ("detsum", s(&["1", "A", "B"]), 3),
        ("charcoeff", s(&["1", "A"]), 3),
        ("twonode", s(&["2"]), 3),
        ("ch", s(&["A", "A"]), 2),
        ("cross", s(&["u", "v"]), 3),
        ("dot", s(&["u", "v"]), 3),
        ("fourvec", s(&["u", "v", "w", "x"]), 3),
        ("fourvec_rhs", s(&["u", "v", "w", "x"]), 3),
        ("binor", vec![], 3),
        ("binor_lhs", vec![], 3),
        ("pfaffian", s(&["A"]), 4),
        ("fricke", s(&["A", "B", "C"]), 2),
    ];
    assert_eq!(cases.len(), BUILTIN_NAMES.len());
    for (name, args, n) in cases {
        assert!(BUILTIN_NAMES.contains(&name));
        let sum = library::builtin(name, &args, Dimension::new(n).unwrap())
            .unwrap_or_else(|e| panic!("{name}: {e}"));
        assert!(!sum.is_empty(), "{name}");
        for (_, d) in sum.terms() {
            assert!(d.validate().is_empty(), "{name}: {:?}", d.validate());
            let text = serialize_diagram(d);
            assert_eq!(&parse_diagram(&text).unwrap(), d, "{name}");
        }
    }
    assert!(library::builtin("nope", &[], Dimension::new(2).unwrap()).is_err());
}

#[test]
fn dsl_cross_product_node_matches_the_oracle() {
    let set = parse_diagram_set(
        "
        diagram cross
        dim 3
        vertex v internal cil(eu@v, ev@v, eo@v)
        vertex pu leaf vec u
        vertex pv leaf vec v
        vertex out leaf
        edge eu eu@pu eu@v
        edge ev pv v
        edge eo v out
        outputs out

        diagram det3 = builtin:det(A) @ dim 3
        ",
    )
    .unwrap();
    let u = [int(2), int(-1), ratio(1, 3)];
    let v = [int(0), int(5), int(-4)];
    let b = MatrixBinding::new(Dimension::new(3).unwrap())
        .with_vector("u", u.to_vec())
        .unwrap()
        .with_vector("v", v.to_vec())
        .unwrap()
        .with("A", Matrix::from_ints(&[[1, 2, 0], [0, 1, 3], [4, 0, 1]]))
        .unwrap();
    let cross = set.get("cross").unwrap();
    let f = as_function_matrix(&cross.terms()[0].1, &b).unwrap();
    let column: Vec<_> = (0..3).map(|i| f.matrix()[(i, 0)].clone()).collect();
    assert_eq!(column, oracle::cross(&u, &v));

    // (-1)^1 3! det(A), det(A) = 25
    let det = set.get("det3").unwrap();
    assert_eq!(evaluate_closed(&det.terms()[0].1, &b).unwrap(), int(-150));
    assert_eq!(parse_diagram_set(&serialize_diagram_set(&set)).unwrap(), set);
}
