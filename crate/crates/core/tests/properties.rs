//! Invariants checked on randomly generated diagrams and bindings.

use proptest::prelude::*;

use tracediag::algebra::{compose, reframe_positional, reversed_word, tensor, LeafPartition};
use tracediag::diagram::{word, Endpoints};
use tracediag::dsl::{parse_diagram, serialize_diagram};
use tracediag::eval::{as_function_matrix, evaluate_closed, evaluate_fast_closed, weight};
use tracediag::lab::random::{framed_diagram, int_matrix, rational_matrix, trial_rng, vertex_free_closed};
use tracediag::library::{antisymmetrizer, determinant_diagram, two_vertex_diagram};
use tracediag::{
    scalar, Dimension, Edge, Label, LeafColoring, Mark, Matrix, MatrixBinding, Scalar,
    TraceDiagram, Vertex, VertexKind,
};

const LABELS: [&str; 2] = ["A", "B"];

fn dim(n: usize) -> Dimension {
    Dimension::new(n).unwrap()
}

fn random_binding(seed: u64, n: usize) -> MatrixBinding {
    let mut rng = trial_rng(seed, 1_000);
    let mut b = MatrixBinding::new(dim(n));
    for l in LABELS {
        b.bind(l, rational_matrix(&mut rng, n)).unwrap();
    }
    b
}

/// Word product computed directly, with transposes applied per mark.
fn word_product(b: &MatrixBinding, marks: &[Mark]) -> Matrix {
    let n = b.dimension().get();
    marks.iter().fold(Matrix::identity(n), |acc, m| {
        let x = b.matrix(&m.label).unwrap();
        let x = if m.transposed { x.transpose() } else { x.clone() };
        &acc * &x
    })
}

fn all_labelings(len: usize, n: usize) -> Vec<Vec<Label>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|p| {
                (1..=n as Label).map(move |l| {
                    let mut q = p.clone();
                    q.push(l);
                    q
                })
            })
            .collect();
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn compose_is_matrix_product(seed in any::<u64>(), n in 2usize..=3) {
        let mut rng = trial_rng(seed, 0);
        let bottom = framed_diagram(&mut rng, dim(n), &LABELS, None);
        prop_assume!(bottom.outputs().len() <= 3 && bottom.inputs().len() <= 3);
        let top = framed_diagram(&mut rng, dim(n), &LABELS, Some(bottom.outputs().len()));
        prop_assume!(top.outputs().len() <= 3);
        let b = random_binding(seed, n);
        let glued = as_function_matrix(&compose(&top, &bottom).unwrap(), &b).unwrap();
        let expected = as_function_matrix(&top, &b).unwrap().matrix()
            * as_function_matrix(&bottom, &b).unwrap().matrix();
        prop_assert_eq!(glued.matrix(), &expected);
    }

    #[test]
    fn tensor_is_kronecker_product(seed in any::<u64>(), n in 2usize..=3) {
        let mut rng = trial_rng(seed, 0);
        let left = framed_diagram(&mut rng, dim(n), &LABELS, Some(1));
        let right = framed_diagram(&mut rng, dim(n), &LABELS, Some(1));
        prop_assume!(left.outputs().len() + right.outputs().len() <= 4);
        let b = random_binding(seed, n);
        let joined = as_function_matrix(&tensor(&left, &right).unwrap(), &b).unwrap();
        let l = as_function_matrix(&left, &b).unwrap();
        let r = as_function_matrix(&right, &b).unwrap();
        prop_assert_eq!(joined.matrix(), &l.matrix().kron(r.matrix()));
    }

    #[test]
    fn reframing_keeps_every_weight(seed in any::<u64>(), pick in any::<prop::sample::Index>()) {
        let n = 2;
        let mut rng = trial_rng(seed, 0);
        let d = framed_diagram(&mut rng, dim(n), &LABELS, None);
        let leaves: Vec<String> = d.framing().unwrap().leaves().cloned().collect();
        prop_assume!(!leaves.is_empty() && leaves.len() <= 4);
        let partitions = LeafPartition::all(leaves.len());
        let p = &partitions[pick.index(partitions.len())];
        let re = reframe_positional(&d, p).unwrap();
        let b = random_binding(seed, n);
        let f = as_function_matrix(&re, &b).unwrap();
        for labels in all_labelings(leaves.len(), n) {
            let mut c = LeafColoring::new();
            for (leaf, &l) in leaves.iter().zip(&labels) {
                c = c.with(leaf.clone(), l);
            }
            let ins: Vec<Label> = p.inputs.iter().map(|&i| labels[i]).collect();
            let outs: Vec<Label> = p.outputs.iter().map(|&i| labels[i]).collect();
            prop_assert_eq!(f.entry(&outs, &ins), &weight(&d, &c, &b).unwrap());
        }
    }

    #[test]
    fn vertex_free_diagrams_are_products_of_traces(seed in any::<u64>(), n in 1usize..=4) {
        let mut rng = trial_rng(seed, 0);
        let d = vertex_free_closed(&mut rng, dim(n), &LABELS, 3, 3);
        let b = random_binding(seed, n);
        let oracle: Scalar = d
            .edges()
            .map(|e| word_product(&b, &e.marking).trace())
            .product();
        prop_assert_eq!(evaluate_fast_closed(&d, &b).unwrap(), oracle.clone());
        prop_assert_eq!(evaluate_closed(&d, &b).unwrap(), oracle);
    }

    #[test]
    fn split_markings_collapse_to_their_product(seed in any::<u64>(), n in 2usize..=3) {
        let mut rng = trial_rng(seed, 0);
        let a = int_matrix(&mut rng, n);
        let bm = int_matrix(&mut rng, n);
        let binding = MatrixBinding::new(dim(n))
            .with("A", a.clone()).unwrap()
            .with("B", bm.clone()).unwrap()
            .with("C", &a * &bm.transpose()).unwrap();
        let mut split = vec![vec![Mark::new("A"), Mark::new("B").transpose()]];
        let mut merged = vec![vec![Mark::new("C")]];
        for _ in 1..n {
            split.push(word(&["A"]));
            merged.push(word(&["A"]));
        }
        let lhs = evaluate_closed(&two_vertex_diagram(dim(n), split).unwrap(), &binding).unwrap();
        let rhs = evaluate_closed(&two_vertex_diagram(dim(n), merged).unwrap(), &binding).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn reversing_an_edge_transposes_its_word(seed in any::<u64>(), n in 2usize..=3) {
        let mut rng = trial_rng(seed, 0);
        let d = framed_diagram(&mut rng, dim(n), &LABELS, None);
        prop_assume!(d.framing().unwrap().leaves().count() <= 4);
        let (dimension, vertices, mut edges, framing) = d.clone().into_parts();
        let target = edges.iter().position(|e| !e.is_loop());
        prop_assume!(target.is_some());
        let e = &mut edges[target.unwrap()];
        if let Endpoints::Attached { tail, head } = &e.endpoints {
            e.endpoints = Endpoints::Attached { tail: head.clone(), head: tail.clone() };
        }
        e.marking = reversed_word(&e.marking);
        let id = e.id.clone();
        let vertices: Vec<Vertex> = vertices
            .into_iter()
            .map(|mut v| {
                if let VertexKind::Internal { ciliation } = &mut v.kind {
                    for end in ciliation.iter_mut().filter(|end| end.edge == id) {
                        end.end = end.end.opposite();
                    }
                }
                v
            })
            .collect();
        let flipped = TraceDiagram::new(dimension, vertices, edges, framing);
        prop_assert!(flipped.validate().is_empty());
        let b = random_binding(seed, n);
        prop_assert_eq!(as_function_matrix(&flipped, &b).unwrap(), as_function_matrix(&d, &b).unwrap());
    }

    #[test]
    fn rotating_a_ciliation_costs_the_cycle_sign(seed in any::<u64>(), n in 2usize..=4) {
        let mut rng = trial_rng(seed, 0);
        let a = int_matrix(&mut rng, n);
        let b = MatrixBinding::new(dim(n)).with("A", a).unwrap();
        let d = determinant_diagram(dim(n), "A");
        let (dimension, vertices, edges, framing) = d.clone().into_parts();
        let vertices: Vec<Vertex> = vertices
            .into_iter()
            .map(|mut v| {
                if let VertexKind::Internal { ciliation } = &mut v.kind {
                    if v.id == "bottom" {
                        ciliation.rotate_left(1);
                    }
                }
                v
            })
            .collect();
        let rotated = TraceDiagram::new(dimension, vertices, edges, framing);
        let expected = evaluate_closed(&d, &b).unwrap() * scalar::sign_power(n - 1);
        prop_assert_eq!(evaluate_closed(&rotated, &b).unwrap(), expected);
    }

    #[test]
    fn serialization_round_trips(seed in any::<u64>(), n in 1usize..=4) {
        let mut rng = trial_rng(seed, 0);
        let d = framed_diagram(&mut rng, dim(n), &LABELS, None);
        let text = serialize_diagram(&d);
        let back = parse_diagram(&text).unwrap();
        prop_assert_eq!(&back, &d);
        prop_assert_eq!(serialize_diagram(&back), text);
    }
}

#[test]
fn antisymmetrizer_squares_to_factorial_multiple() {
    for n in 2..=3 {
        for k in 1..=3 {
            let a = antisymmetrizer(dim(n), k);
            let b = MatrixBinding::new(dim(n));
            let square = a.compose(&a).unwrap().function_matrix(&b).unwrap();
            let single = a.function_matrix(&b).unwrap();
            assert_eq!(
                square.matrix(),
                &single.matrix().scale(&scalar::factorial(k)),
                "n={n} k={k}"
            );
        }
    }
}

#[test]
fn hand_built_loops_evaluate_to_traces() {
    let e = Edge {
        id: "l".into(),
        endpoints: Endpoints::Loop,
        marking: word(&["A"]),
    };
    let d = TraceDiagram::new(dim(2), Vec::<Vertex>::new(), vec![e], None);
    let b = MatrixBinding::new(dim(2))
        .with("A", Matrix::from_ints(&[[1, 2], [3, 4]]))
        .unwrap();
    assert_eq!(evaluate_closed(&d, &b).unwrap(), scalar::int(5));
}
