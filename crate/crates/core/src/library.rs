//! Named diagrams: strands, permutations, antisymmetrizers, traces,
//! determinant and characteristic-coefficient diagrams, Cayley–Hamilton sums,
//! vector products, the Pfaffian vertex and the Fricke relation.
//!
//! Two-vertex builders put every shared edge from the bottom vertex (tail) to
//! the top vertex (head). The bottom vertex lists shared edges right to left
//! and the top vertex left to right, so the two orders mirror each other.

use num_traits::One;

use crate::algebra::{join_leaves, FormalSum};
use crate::diagram::{word, DiagramBuilder, Dimension, EdgeEnd, Mark, TraceDiagram};
use crate::error::{Error, Result};
use crate::perm;
use crate::scalar::{self, Scalar};

fn input(j: usize) -> String {
    format!("i{j}")
}

fn output(j: usize) -> String {
    format!("o{j}")
}

/// `k` parallel unmarked strands, input `j` joined to output `j`.
pub fn identity_strands(dim: Dimension, k: usize) -> TraceDiagram {
    permutation_diagram(dim, &perm::identity(k)).expect("identity is a permutation")
}

/// Strands sending input `i` to output `sigma[i]` (0-based one-line notation).
pub fn permutation_diagram(dim: Dimension, sigma: &[usize]) -> Result<TraceDiagram> {
    if !perm::is_permutation(sigma) {
        return Err(Error::Unsupported(format!("{sigma:?} is not a permutation")));
    }
    let k = sigma.len();
    let mut b = DiagramBuilder::new(dim);
    for j in 1..=k {
        b = b.leaf(input(j)).leaf(output(j));
    }
    for (i, &s) in sigma.iter().enumerate() {
        b = b.edge(format!("s{}", i + 1), input(i + 1), output(s + 1), Vec::new());
    }
    b.framing((1..=k).map(input).collect(), (1..=k).map(output).collect())
        .build()
}

/// A single strand carrying `marks`.
pub fn marked_strand(dim: Dimension, marks: Vec<Mark>) -> TraceDiagram {
    DiagramBuilder::new(dim)
        .leaf(input(1))
        .leaf(output(1))
        .edge("s1", input(1), output(1), marks)
        .framing(vec![input(1)], vec![output(1)])
        .build()
        .expect("strand is well formed")
}

/// `Σ_σ sgn(σ) σ` over all permutations of `k` strands.
pub fn antisymmetrizer(dim: Dimension, k: usize) -> FormalSum {
    let mut sum = FormalSum::zero(dim);
    for sigma in perm::all(k) {
        let sign = scalar::int(perm::sign(&sigma) as i64);
        let d = permutation_diagram(dim, &sigma).expect("generated permutation");
        sum.push(sign, d).expect("same arity");
    }
    sum
}

/// Free loop carrying `marks`; its value is `tr(M1 .. Mk)`.
pub fn trace_loop(dim: Dimension, marks: Vec<Mark>) -> TraceDiagram {
    DiagramBuilder::new(dim)
        .free_loop("l1", marks)
        .framing(Vec::new(), Vec::new())
        .build()
        .expect("loop is well formed")
}

/// Two internal vertices joined by `n` edges carrying the given words, left to right.
pub fn two_vertex_diagram(dim: Dimension, words: Vec<Vec<Mark>>) -> Result<TraceDiagram> {
    let n = dim.get();
    if words.len() != n {
        return Err(Error::ArityMismatch {
            expected: n,
            found: words.len(),
        });
    }
    let ids: Vec<String> = (1..=n).map(|j| format!("e{j:02}")).collect();
    let mut b = DiagramBuilder::new(dim)
        .internal("bottom", ids.iter().rev().map(EdgeEnd::tail).collect())
        .internal("top", ids.iter().map(EdgeEnd::head).collect());
    for (id, w) in ids.iter().zip(words) {
        b = b.edge(id.clone(), "bottom", "top", w);
    }
    b.framing(Vec::new(), Vec::new()).build()
}

/// Closed value `(-1)^⌊n/2⌋ n! det(A)`.
pub fn determinant_diagram(dim: Dimension, a: &str) -> TraceDiagram {
    two_vertex_diagram(dim, vec![word(&[a]); dim.get()]).expect("n words")
}

/// `n - i` edges marked `A` followed by `i` edges marked `B`.
pub fn det_sum_term(dim: Dimension, i: usize, a: &str, b: &str) -> Result<TraceDiagram> {
    let n = dim.get();
    if i > n {
        return Err(Error::Unsupported(format!("term index {i} exceeds n = {n}")));
    }
    let mut words = vec![word(&[a]); n - i];
    words.extend(vec![word(&[b]); i]);
    two_vertex_diagram(dim, words)
}

/// `n - i` edges marked `A` followed by `i` unmarked edges.
pub fn char_coeff_diagram(dim: Dimension, i: usize, a: &str) -> Result<TraceDiagram> {
    let n = dim.get();
    if i > n {
        return Err(Error::Unsupported(format!("coefficient index {i} exceeds n = {n}")));
    }
    let mut words = vec![word(&[a]); n - i];
    words.extend(vec![Vec::new(); i]);
    two_vertex_diagram(dim, words)
}

/// The scalar relating [`two_node_antisym`] to the antisymmetrizer:
/// `antisymmetrizer(k) = factor · two_node_antisym(k)`.
pub fn two_node_factor(n: usize, k: usize) -> Scalar {
    scalar::sign_power(n / 2) / scalar::factorial(n - k)
}

/// Two vertices sharing `n - k` edges, with `k` inputs entering the bottom
/// vertex and `k` outputs leaving the top one.
pub fn two_node_antisym(dim: Dimension, k: usize) -> Result<TraceDiagram> {
    two_node_antisym_marked(dim, k, &[])
}

/// As [`two_node_antisym`], with every shared edge carrying `shared_word`.
pub fn two_node_antisym_marked(dim: Dimension, k: usize, shared_word: &[Mark]) -> Result<TraceDiagram> {
    let n = dim.get();
    if k > n {
        return Err(Error::Unsupported(format!("k = {k} exceeds n = {n}")));
    }
    let ins: Vec<String> = (1..=k).map(|j| format!("a{j:02}")).collect();
    let outs: Vec<String> = (1..=k).map(|j| format!("b{j:02}")).collect();
    let shared: Vec<String> = (1..=n - k).map(|j| format!("s{j:02}")).collect();

    let bottom: Vec<EdgeEnd> = ins
        .iter()
        .map(EdgeEnd::head)
        .chain(shared.iter().rev().map(EdgeEnd::tail))
        .collect();
    let top: Vec<EdgeEnd> = shared
        .iter()
        .map(EdgeEnd::head)
        .chain(outs.iter().rev().map(EdgeEnd::tail))
        .collect();
    let mut b = DiagramBuilder::new(dim).internal("bottom", bottom).internal("top", top);
    for j in 1..=k {
        b = b
            .leaf(input(j))
            .leaf(output(j))
            .edge(ins[j - 1].clone(), input(j), "bottom", Vec::new())
            .edge(outs[j - 1].clone(), "top", output(j), Vec::new());
    }
    for s in &shared {
        b = b.edge(s.clone(), "bottom", "top", shared_word.to_vec());
    }
    b.framing((1..=k).map(input).collect(), (1..=k).map(output).collect())
        .build()
}

/// Closes output `j` of `diagram` back onto input `j` through `marks`.
pub fn close_strand(diagram: &TraceDiagram, j: usize, marks: &[Mark]) -> Result<TraceDiagram> {
    let out = diagram
        .outputs()
        .get(j)
        .ok_or(Error::ArityMismatch {
            expected: j + 1,
            found: diagram.outputs().len(),
        })?
        .clone();
    let inp = diagram.inputs()[j].clone();
    join_leaves(diagram, &out, &inp, marks)
}

/// Antisymmetrizer on `m + 1` strands with strand 1 open and strand `j + 1`
/// closed through a loop marked `labels[j]`.
pub fn ch_diagram(dim: Dimension, labels: &[String]) -> Result<FormalSum> {
    let k = labels.len() + 1;
    let anti = antisymmetrizer(dim, k);
    let mut out = FormalSum::zero(dim);
    for (c, d) in anti.terms() {
        let mut closed = d.clone();
        // Close from the right so earlier positions stay valid.
        for j in (1..k).rev() {
            closed = close_strand(&closed, j, &[Mark::new(labels[j - 1].clone())])?;
        }
        closed.ensure_valid()?;
        out.push(c.clone(), closed)?;
    }
    Ok(out)
}

/// Antisymmetrizer on `k` strands with every strand closed through `A`.
pub fn closed_antisym(dim: Dimension, k: usize, a: &str) -> Result<FormalSum> {
    let anti = antisymmetrizer(dim, k);
    let mut out = FormalSum::zero(dim);
    for (c, d) in anti.terms() {
        let mut closed = d.clone();
        for j in (0..k).rev() {
            closed = close_strand(&closed, j, &[Mark::new(a)])?;
        }
        closed.ensure_valid()?;
        out.push(c.clone(), closed)?;
    }
    Ok(out)
}

fn require_three(dim: Dimension, what: &str) -> Result<()> {
    if dim.get() != 3 {
        return Err(Error::Unsupported(format!("{what} is defined only for n = 3")));
    }
    Ok(())
}

/// One trivalent vertex fed by vectors `u`, `v`, with a single output: `u × v`.
pub fn cross_product(dim: Dimension, u: &str, v: &str) -> Result<TraceDiagram> {
    require_three(dim, "cross product")?;
    DiagramBuilder::new(dim)
        .vector_leaf("u", u)
        .vector_leaf("v", v)
        .leaf(output(1))
        .internal(
            "x",
            vec![EdgeEnd::head("eu"), EdgeEnd::head("ev"), EdgeEnd::tail("eo")],
        )
        .edge("eu", "u", "x", Vec::new())
        .edge("ev", "v", "x", Vec::new())
        .edge("eo", "x", output(1), Vec::new())
        .framing(Vec::new(), vec![output(1)])
        .build()
}

/// An unmarked edge between two vector-capped leaves: `u · v`.
pub fn dot_product(dim: Dimension, u: &str, v: &str) -> Result<TraceDiagram> {
    require_three(dim, "dot product")?;
    DiagramBuilder::new(dim)
        .vector_leaf("u", u)
        .vector_leaf("v", v)
        .edge("e", "v", "u", Vec::new())
        .framing(Vec::new(), Vec::new())
        .build()
}

/// Two cross-product vertices joined through their outputs: `(u × v) · (w × x)`.
pub fn four_vector_diagram(dim: Dimension, vectors: [&str; 4]) -> Result<TraceDiagram> {
    require_three(dim, "the four-vector diagram")?;
    let [u, v, w, x] = vectors;
    DiagramBuilder::new(dim)
        .vector_leaf("u", u)
        .vector_leaf("v", v)
        .vector_leaf("w", w)
        .vector_leaf("x", x)
        .internal(
            "p",
            vec![EdgeEnd::head("eu"), EdgeEnd::head("ev"), EdgeEnd::tail("m")],
        )
        .internal(
            "q",
            vec![EdgeEnd::head("ew"), EdgeEnd::head("ex"), EdgeEnd::head("m")],
        )
        .edge("eu", "u", "p", Vec::new())
        .edge("ev", "v", "p", Vec::new())
        .edge("ew", "w", "q", Vec::new())
        .edge("ex", "x", "q", Vec::new())
        .edge("m", "p", "q", Vec::new())
        .framing(Vec::new(), Vec::new())
        .build()
}

/// `(u·w)(v·x) − (u·x)(v·w)` as a sum of products of dot diagrams.
pub fn four_vector_rhs(dim: Dimension, vectors: [&str; 4]) -> Result<FormalSum> {
    let [u, v, w, x] = vectors;
    let pair = |a: &str, b: &str, c: &str, d: &str| -> Result<TraceDiagram> {
        crate::algebra::tensor(&dot_product(dim, a, b)?, &dot_product(dim, c, d)?)
    };
    FormalSum::from_terms(
        dim,
        [
            (Scalar::one(), pair(u, w, v, x)?),
            (-Scalar::one(), pair(u, x, v, w)?),
        ],
    )
}

/// Two trivalent vertices sharing one edge, two inputs below and two outputs above.
pub fn binor_lhs(dim: Dimension) -> Result<TraceDiagram> {
    require_three(dim, "the binor diagram")?;
    DiagramBuilder::new(dim)
        .leaf(input(1))
        .leaf(input(2))
        .leaf(output(1))
        .leaf(output(2))
        .internal(
            "bottom",
            vec![EdgeEnd::head("a"), EdgeEnd::head("b"), EdgeEnd::tail("m")],
        )
        .internal(
            "top",
            vec![EdgeEnd::head("m"), EdgeEnd::tail("d"), EdgeEnd::tail("c")],
        )
        .edge("a", input(1), "bottom", Vec::new())
        .edge("b", input(2), "bottom", Vec::new())
        .edge("m", "bottom", "top", Vec::new())
        .edge("c", "top", output(1), Vec::new())
        .edge("d", "top", output(2), Vec::new())
        .framing(vec![input(1), input(2)], vec![output(1), output(2)])
        .build()
}

/// `binor_lhs − crossing + identity`, a relation for `n = 3`.
pub fn binor_relation(dim: Dimension) -> Result<FormalSum> {
    FormalSum::from_terms(
        dim,
        [
            (Scalar::one(), binor_lhs(dim)?),
            (-Scalar::one(), permutation_diagram(dim, &[1, 0])?),
            (Scalar::one(), identity_strands(dim, 2)),
        ],
    )
}

/// One vertex of degree `n = 2m` whose edges close into `m` nested arcs marked `A`.
pub fn pfaffian_diagram(dim: Dimension, a: &str) -> Result<TraceDiagram> {
    let n = dim.get();
    if n % 2 != 0 {
        return Err(Error::Unsupported(format!("Pfaffian diagram needs even n, got {n}")));
    }
    let arcs: Vec<String> = (1..=n / 2).map(|j| format!("arc{j:02}")).collect();
    let ciliation: Vec<EdgeEnd> = arcs
        .iter()
        .map(EdgeEnd::tail)
        .chain(arcs.iter().rev().map(EdgeEnd::head))
        .collect();
    let mut b = DiagramBuilder::new(dim).internal("v", ciliation);
    for id in &arcs {
        b = b.edge(id.clone(), "v", "v", word(&[a]));
    }
    b.framing(Vec::new(), Vec::new()).build()
}

/// The `n = 2` generalized Cayley–Hamilton sum for `B`, `C` with its open
/// strand closed through `A`; its value is the Fricke combination of traces.
pub fn fricke_diagrams(dim: Dimension, a: &str, b: &str, c: &str) -> Result<FormalSum> {
    if dim.get() != 2 {
        return Err(Error::Unsupported("the Fricke relation is defined only for n = 2".into()));
    }
    let ch = ch_diagram(dim, &[b.to_string(), c.to_string()])?;
    ch.map_terms(|d| close_strand(d, 0, &[Mark::new(a)]))
}

/// Names accepted by [`builtin`].
pub const BUILTIN_NAMES: &[&str] = &[
    "identity",
    "perm",
    "antisym",
    "trace",
    "det",
    "detsum",
    "charcoeff",
    "twonode",
    "ch",
    "cross",
    "dot",
    "fourvec",
    "fourvec_rhs",
    "binor",
    "binor_lhs",
    "pfaffian",
    "fricke",
];

fn arg_count(name: &str, args: &[String], count: usize) -> Result<()> {
    if args.len() != count {
        return Err(Error::Unsupported(format!(
            "builtin {name} takes {count} argument(s), got {}",
            args.len()
        )));
    }
    Ok(())
}

fn arg_usize(name: &str, arg: &str) -> Result<usize> {
    arg.trim()
        .parse()
        .map_err(|_| Error::Unsupported(format!("builtin {name}: expected an integer, got {arg:?}")))
}

/// Resolves a builtin by name, e.g. `det(A)` or `antisym(3)`, as a formal sum.
///
/// Single diagrams come back as one-term sums.
pub fn builtin(name: &str, args: &[String], dim: Dimension) -> Result<FormalSum> {
    let one = |d: TraceDiagram| FormalSum::single(d);
    match name {
        "identity" => {
            arg_count(name, args, 1)?;
            one(identity_strands(dim, arg_usize(name, &args[0])?))
        }
        "perm" => {
            let sigma = args
                .iter()
                .map(|a| arg_usize(name, a).and_then(|x| {
                    x.checked_sub(1)
                        .ok_or_else(|| Error::Unsupported("perm images are 1-based".into()))
                }))
                .collect::<Result<Vec<_>>>()?;
            one(permutation_diagram(dim, &sigma)?)
        }
        "antisym" => {
            arg_count(name, args, 1)?;
            Ok(antisymmetrizer(dim, arg_usize(name, &args[0])?))
        }
        "trace" => one(trace_loop(dim, word(args))),
        "det" => {
            arg_count(name, args, 1)?;
            one(determinant_diagram(dim, &args[0]))
        }
        "detsum" => {
            arg_count(name, args, 3)?;
            one(det_sum_term(dim, arg_usize(name, &args[0])?, &args[1], &args[2])?)
        }
        "charcoeff" => {
            arg_count(name, args, 2)?;
            one(char_coeff_diagram(dim, arg_usize(name, &args[0])?, &args[1])?)
        }
        "twonode" => {
            arg_count(name, args, 1)?;
            one(two_node_antisym(dim, arg_usize(name, &args[0])?)?)
        }
        "ch" => ch_diagram(dim, args),
        "cross" => {
            arg_count(name, args, 2)?;
            one(cross_product(dim, &args[0], &args[1])?)
        }
        "dot" => {
            arg_count(name, args, 2)?;
            one(dot_product(dim, &args[0], &args[1])?)
        }
        "fourvec" | "fourvec_rhs" => {
            arg_count(name, args, 4)?;
            let v = [&*args[0], &*args[1], &*args[2], &*args[3]];
            if name == "fourvec" {
                one(four_vector_diagram(dim, v)?)
            } else {
                four_vector_rhs(dim, v)
            }
        }
        "binor" => {
            arg_count(name, args, 0)?;
            binor_relation(dim)
        }
        "binor_lhs" => {
            arg_count(name, args, 0)?;
            one(binor_lhs(dim)?)
        }
        "pfaffian" => {
            arg_count(name, args, 1)?;
            one(pfaffian_diagram(dim, &args[0])?)
        }
        "fricke" => {
            arg_count(name, args, 3)?;
            fricke_diagrams(dim, &args[0], &args[1], &args[2])
        }
        other => Err(Error::Unsupported(format!(
            "unknown builtin {other}; known: {}",
            BUILTIN_NAMES.join(", ")
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{is_relation, RelationMode};
    use crate::binding::MatrixBinding;
    use crate::eval::{as_function_matrix, evaluate_closed};
    use crate::linalg::Matrix;
    use crate::scalar::int;

    fn dim(n: usize) -> Dimension {
        Dimension::new(n).unwrap()
    }

    fn bind(n: usize, label: &str, m: Matrix) -> MatrixBinding {
        MatrixBinding::new(dim(n)).with(label, m).unwrap()
    }

    #[test]
    fn swap_exchanges_factors() {
        let swap = permutation_diagram(dim(2), &[1, 0]).unwrap();
        let fm = as_function_matrix(&swap, &MatrixBinding::new(dim(2))).unwrap();
        assert_eq!(fm.apply_basis(&[1, 2]), vec![(vec![2, 1], int(1))]);
    }

    #[test]
    fn antisymmetrizer_on_two_strands() {
        let fm = antisymmetrizer(dim(3), 2)
            .function_matrix(&MatrixBinding::new(dim(3)))
            .unwrap();
        assert_eq!(
            fm.apply_basis(&[1, 2]),
            vec![(vec![1, 2], int(1)), (vec![2, 1], int(-1))]
        );
    }

    #[test]
    fn determinant_values() {
        let b = bind(2, "A", Matrix::identity(2));
        assert_eq!(evaluate_closed(&determinant_diagram(dim(2), "A"), &b).unwrap(), int(-2));
        let b = bind(3, "A", Matrix::from_ints(&[[1, 0, 0], [0, 2, 0], [0, 0, 3]]));
        assert_eq!(evaluate_closed(&determinant_diagram(dim(3), "A"), &b).unwrap(), int(-36));
        let b = bind(2, "A", Matrix::from_ints(&[[1, 2], [3, 4]]));
        assert_eq!(evaluate_closed(&determinant_diagram(dim(2), "A"), &b).unwrap(), int(4));
        let b = bind(2, "A", Matrix::from_ints(&[[1, 1], [1, 1]]));
        assert_eq!(evaluate_closed(&determinant_diagram(dim(2), "A"), &b).unwrap(), int(0));
    }

    #[test]
    fn same_order_ciliation_flips_the_sign_for_n2() {
        let ids = ["e1", "e2"];
        let d = DiagramBuilder::new(dim(2))
            .internal("bottom", ids.iter().map(|e| EdgeEnd::tail(*e)).collect())
            .internal("top", ids.iter().map(|e| EdgeEnd::head(*e)).collect())
            .edge("e1", "bottom", "top", word(&["A"]))
            .edge("e2", "bottom", "top", word(&["A"]))
            .build()
            .unwrap();
        let b = bind(2, "A", Matrix::identity(2));
        assert_eq!(evaluate_closed(&d, &b).unwrap(), int(2));
    }

    #[test]
    fn binor_is_a_relation() {
        let check = is_relation(
            &binor_relation(dim(3)).unwrap(),
            &MatrixBinding::new(dim(3)),
            RelationMode::ExactOnBinding,
        )
        .unwrap();
        assert!(check.holds);
    }

    #[test]
    fn cross_product_basis() {
        let b = MatrixBinding::new(dim(3))
            .with_vector("u", vec![int(1), int(0), int(0)])
            .unwrap()
            .with_vector("v", vec![int(0), int(1), int(0)])
            .unwrap();
        let fm = as_function_matrix(&cross_product(dim(3), "u", "v").unwrap(), &b).unwrap();
        assert_eq!(fm.apply_basis(&[]), vec![(vec![3], int(1))]);
        assert!(cross_product(dim(2), "u", "v").is_err());
    }

    #[test]
    fn ch_for_one_by_one() {
        let b = bind(1, "A", Matrix::from_ints(&[[7]]));
        let ch = ch_diagram(dim(1), &["A".into()]).unwrap();
        assert!(ch.function_matrix(&b).unwrap().is_zero());
        assert_eq!(ch.len(), 2);
    }

    #[test]
    fn pfaffian_two_by_two_ratio() {
        let b = bind(2, "A", Matrix::from_ints(&[[0, 3], [-3, 0]]));
        let v = evaluate_closed(&pfaffian_diagram(dim(2), "A").unwrap(), &b).unwrap();
        assert_eq!(v, int(-6));
    }

    #[test]
    fn builtin_lookup() {
        let s = builtin("det", &["A".into()], dim(3)).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s.terms()[0].1, determinant_diagram(dim(3), "A"));
        assert!(builtin("nope", &[], dim(2)).is_err());
        assert!(builtin("antisym", &["x".into()], dim(2)).is_err());
        assert_eq!(builtin("perm", &["2".into(), "1".into()], dim(2)).unwrap().len(), 1);
    }
}
