//! Signed coloring sums: signatures, coefficients, weights, closed values and
//! the multilinear function of a framed diagram.
//!
//! Matrix entries are read as `(row = head label, column = tail label)`, so a
//! strand marked `A` running from an input labelled `j` to an output labelled
//! `i` picks out `A[i][j]` and the strand acts as `A` itself.

mod search;

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::binding::MatrixBinding;
use crate::diagram::{
    check_admissible, vertex_permutation, Coloring, EdgeId, Endpoints, Label, LeafColoring,
    TraceDiagram, VertexKind,
};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::perm;
use crate::scalar::Scalar;

use search::{PairFilter, Plan, Search, Var};

/// Matrix of `f_D` in the standard tensor basis.
///
/// Rows are indexed by output labels and columns by input labels, both as
/// mixed-radix base-`n` numbers with the leftmost leaf most significant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctionMatrix {
    n: usize,
    inputs: usize,
    outputs: usize,
    matrix: Matrix,
}

impl FunctionMatrix {
    pub fn new(n: usize, inputs: usize, outputs: usize, matrix: Matrix) -> Self {
        assert_eq!(matrix.rows(), n.pow(outputs as u32));
        assert_eq!(matrix.cols(), n.pow(inputs as u32));
        FunctionMatrix {
            n,
            inputs,
            outputs,
            matrix,
        }
    }

    pub fn zeros(n: usize, inputs: usize, outputs: usize) -> Self {
        Self::new(
            n,
            inputs,
            outputs,
            Matrix::zeros(n.pow(outputs as u32), n.pow(inputs as u32)),
        )
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn inputs(&self) -> usize {
        self.inputs
    }

    pub fn outputs(&self) -> usize {
        self.outputs
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> Matrix {
        self.matrix
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }

    pub fn entry(&self, outputs: &[Label], inputs: &[Label]) -> &Scalar {
        &self.matrix[(basis_index(outputs, self.n), basis_index(inputs, self.n))]
    }

    /// Image of the basis tensor `e_inputs`, as its nonzero components.
    pub fn apply_basis(&self, inputs: &[Label]) -> Vec<(Vec<Label>, Scalar)> {
        let col = basis_index(inputs, self.n);
        (0..self.matrix.rows())
            .filter(|&row| !self.matrix[(row, col)].is_zero())
            .map(|row| {
                (
                    basis_labels(row, self.outputs, self.n),
                    self.matrix[(row, col)].clone(),
                )
            })
            .collect()
    }

    /// The single entry of a 0-in/0-out function.
    pub fn scalar(&self) -> Option<&Scalar> {
        (self.inputs == 0 && self.outputs == 0).then(|| &self.matrix[(0, 0)])
    }
}

/// Mixed-radix index of 1-based labels, leftmost most significant.
pub fn basis_index(labels: &[Label], n: usize) -> usize {
    labels
        .iter()
        .fold(0, |acc, &l| acc * n + (l as usize - 1))
}

/// Inverse of [`basis_index`].
pub fn basis_labels(mut index: usize, len: usize, n: usize) -> Vec<Label> {
    let mut labels = vec![0; len];
    for slot in labels.iter_mut().rev() {
        *slot = (index % n) as Label + 1;
        index /= n;
    }
    labels
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EvalOptions {
    /// Skip branches whose coefficient is already forced to zero. Results are identical.
    pub prune_zeros: bool,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions { prune_zeros: true }
    }
}

/// Plan plus the concrete matrices it reads.
struct BoundPlan {
    plan: Plan,
    /// Word product for marked edges, by edge index.
    edge_matrices: Vec<Option<Matrix>>,
    loops: Vec<bool>,
    vector_leaves: Vec<(Var, Vec<Scalar>)>,
}

impl BoundPlan {
    fn new(diagram: &TraceDiagram, binding: &MatrixBinding) -> Result<BoundPlan> {
        let plan = Plan::compile(diagram)?;
        binding.check_covers(diagram)?;
        let mut edge_matrices = Vec::with_capacity(plan.edge_ids.len());
        let mut loops = Vec::with_capacity(plan.edge_ids.len());
        for edge in diagram.edges() {
            edge_matrices.push(if edge.is_marked() {
                Some(binding.word_matrix(&edge.marking)?)
            } else {
                None
            });
            loops.push(edge.is_loop());
        }
        let mut vector_leaves = Vec::new();
        for v in diagram.vertices() {
            if let VertexKind::Leaf { vector: Some(label) } = &v.kind {
                vector_leaves.push((plan.leaf_vars[&v.id], binding.vector(label)?.to_vec()));
            }
        }
        Ok(BoundPlan {
            plan,
            edge_matrices,
            loops,
            vector_leaves,
        })
    }

    fn zero_filters(&self) -> Vec<PairFilter> {
        let n = self.plan.n;
        let mut filters = Vec::new();
        for (idx, m) in self.edge_matrices.iter().enumerate() {
            let Some(m) = m else { continue };
            let vars = &self.plan.edge_vars[idx];
            let mut forbidden = vec![false; n * n];
            for h in 0..n {
                for t in 0..n {
                    if self.loops[idx] {
                        if h == t {
                            forbidden[h * n + h] = m[(h, h)].is_zero();
                        }
                    } else {
                        forbidden[t * n + h] = m[(h, t)].is_zero();
                    }
                }
            }
            filters.push(PairFilter {
                later: vars.tail,
                earlier: vars.head,
                forbidden,
            });
        }
        for (var, v) in &self.vector_leaves {
            let mut forbidden = vec![false; n * n];
            for (l, x) in v.iter().enumerate() {
                forbidden[l * n + l] = x.is_zero();
            }
            filters.push(PairFilter {
                later: *var,
                earlier: *var,
                forbidden,
            });
        }
        filters
    }

    fn coefficient(&self, values: &[u8]) -> Scalar {
        let mut acc = Scalar::one();
        for (idx, m) in self.edge_matrices.iter().enumerate() {
            if let Some(m) = m {
                let vars = &self.plan.edge_vars[idx];
                let h = values[vars.head] as usize;
                let t = values[vars.tail] as usize;
                let entry = &m[(h, t)];
                if entry.is_zero() {
                    return Scalar::zero();
                }
                acc *= entry;
            }
        }
        for (var, v) in &self.vector_leaves {
            let entry = &v[values[*var] as usize];
            if entry.is_zero() {
                return Scalar::zero();
            }
            acc *= entry;
        }
        acc
    }

    fn signed_term(&self, values: &[u8]) -> Scalar {
        let c = self.coefficient(values);
        if self.plan.signature(values) < 0 {
            -c
        } else {
            c
        }
    }

    fn search(&self, fixed: Vec<Option<u8>>, options: EvalOptions) -> Search {
        let filters = if options.prune_zeros {
            self.zero_filters()
        } else {
            Vec::new()
        };
        Search::new(&self.plan, fixed, filters)
    }
}

/// Variable values forced by a leaf coloring; `None` when two leaves on the
/// same unmarked strand ask for different labels.
fn leaf_fixing(
    plan: &Plan,
    diagram: &TraceDiagram,
    leaves: &LeafColoring,
) -> Result<Option<Vec<Option<u8>>>> {
    let mut fixed = vec![None; plan.var_count];
    let mut consistent = true;
    for (leaf, &label) in &leaves.labels {
        if !diagram.vertex(leaf).is_some_and(|v| v.is_open_leaf()) {
            return Err(Error::InvalidPartition(format!("{leaf} is not an open leaf")));
        }
        if label == 0 || label as usize > plan.n {
            return Err(Error::LabelOutOfRange { label, n: plan.n });
        }
        let slot = &mut fixed[plan.leaf_vars[leaf]];
        let value = (label - 1) as u8;
        if slot.is_some_and(|v| v != value) {
            consistent = false;
        }
        *slot = Some(value);
    }
    Ok(consistent.then_some(fixed))
}

fn to_coloring(plan: &Plan, values: &[u8]) -> Coloring {
    let labels = plan
        .edge_ids
        .iter()
        .zip(&plan.edge_vars)
        .map(|(id, vars)| {
            (
                id.clone(),
                crate::diagram::EdgeLabels {
                    head: values[vars.head] as Label + 1,
                    tail: values[vars.tail] as Label + 1,
                },
            )
        })
        .collect();
    Coloring { labels }
}

fn coloring_values(plan: &Plan, coloring: &Coloring) -> Result<Vec<u8>> {
    let mut values = vec![0u8; plan.var_count];
    for (id, vars) in plan.edge_ids.iter().zip(&plan.edge_vars) {
        let labels = coloring
            .get(id)
            .ok_or_else(|| Error::IncompleteColoring { edge: id.clone() })?;
        for l in [labels.head, labels.tail] {
            if l == 0 || l as usize > plan.n {
                return Err(Error::LabelOutOfRange { label: l, n: plan.n });
            }
        }
        if vars.head == vars.tail && labels.head != labels.tail {
            return Err(Error::UnmarkedLabelMismatch { edge: id.clone() });
        }
        values[vars.head] = (labels.head - 1) as u8;
        values[vars.tail] = (labels.tail - 1) as u8;
    }
    Ok(values)
}

/// Admissible colorings extending a leaf pre-coloring, in canonical order.
pub struct Colorings {
    plan: Plan,
    search: Search,
}

impl Iterator for Colorings {
    type Item = Coloring;

    fn next(&mut self) -> Option<Coloring> {
        self.search
            .advance(&self.plan)
            .then(|| to_coloring(&self.plan, self.search.values()))
    }
}

pub fn enumerate_colorings(diagram: &TraceDiagram, precoloring: &LeafColoring) -> Result<Colorings> {
    let plan = Plan::compile(diagram)?;
    let search = match leaf_fixing(&plan, diagram, precoloring)? {
        Some(fixed) => Search::new(&plan, fixed, Vec::new()),
        None => Search::exhausted(&plan),
    };
    Ok(Colorings { plan, search })
}

/// Product of the signs of the vertex permutations; `+1` without internal vertices.
pub fn signature(diagram: &TraceDiagram, coloring: &Coloring) -> Result<i32> {
    diagram.ensure_valid()?;
    check_admissible(diagram, coloring)?;
    let mut sign = 1;
    for v in diagram.internal_vertices() {
        let images = vertex_permutation(diagram, coloring, &v.id)?;
        let p: Vec<usize> = images.iter().map(|&l| l as usize - 1).collect();
        sign *= perm::sign(&p);
    }
    Ok(sign)
}

/// Product over edges of `(A_e)[head][tail]`, times vector entries at capped leaves.
pub fn coefficient(diagram: &TraceDiagram, coloring: &Coloring, binding: &MatrixBinding) -> Result<Scalar> {
    let bound = BoundPlan::new(diagram, binding)?;
    let values = coloring_values(&bound.plan, coloring)?;
    Ok(bound.coefficient(&values))
}

pub fn weight(diagram: &TraceDiagram, leaves: &LeafColoring, binding: &MatrixBinding) -> Result<Scalar> {
    Evaluator::default().weight(diagram, leaves, binding)
}

pub fn evaluate_closed(diagram: &TraceDiagram, binding: &MatrixBinding) -> Result<Scalar> {
    Evaluator::default().evaluate_closed(diagram, binding)
}

pub fn as_function_matrix(diagram: &TraceDiagram, binding: &MatrixBinding) -> Result<FunctionMatrix> {
    Evaluator::default().as_function_matrix(diagram, binding)
}

/// Closed value of a vertex-free diagram as a product of traces (free loops)
/// and bilinear forms (edges between two vector-capped leaves).
pub fn evaluate_fast_closed(diagram: &TraceDiagram, binding: &MatrixBinding) -> Result<Scalar> {
    diagram.ensure_valid()?;
    if diagram.has_internal_vertices() {
        return Err(Error::FastPathInapplicable);
    }
    if !diagram.is_closed() {
        return Err(Error::NotClosed);
    }
    binding.check_covers(diagram)?;
    let mut value = Scalar::one();
    for edge in diagram.edges() {
        let m = binding.word_matrix(&edge.marking)?;
        let factor = match &edge.endpoints {
            Endpoints::Loop => m.trace(),
            Endpoints::Attached { tail, head } => {
                let capped = |leaf: &str| match diagram.vertex(leaf).map(|v| &v.kind) {
                    Some(VertexKind::Leaf { vector: Some(l) }) => binding.vector(l),
                    _ => Err(Error::NotClosed),
                };
                let (u, v) = (capped(head)?, capped(tail)?);
                let mut acc = Scalar::zero();
                for i in 0..u.len() {
                    for j in 0..v.len() {
                        acc += &u[i] * &m[(i, j)] * &v[j];
                    }
                }
                acc
            }
        };
        value *= factor;
    }
    Ok(value)
}

/// Sum of signed coefficients over colorings that agree with `coloring` off
/// `shared` and place the same multiset of `(head, tail)` pairs on `shared`.
///
/// Returns the sum together with the number of colorings in the orbit.
pub fn shared_edge_orbit_weight(
    diagram: &TraceDiagram,
    coloring: &Coloring,
    shared: &[EdgeId],
    binding: &MatrixBinding,
) -> Result<(Scalar, usize)> {
    check_admissible(diagram, coloring)?;
    let bound = BoundPlan::new(diagram, binding)?;
    let plan = &bound.plan;
    let values = coloring_values(plan, coloring)?;
    let shared_idx: Vec<usize> = shared
        .iter()
        .map(|id| {
            plan.edge_ids
                .iter()
                .position(|e| e == id)
                .ok_or_else(|| Error::IncompleteColoring { edge: id.clone() })
        })
        .collect::<Result<_>>()?;
    let mut free = vec![false; plan.var_count];
    for &i in &shared_idx {
        free[plan.edge_vars[i].head] = true;
        free[plan.edge_vars[i].tail] = true;
    }
    let fixed: Vec<Option<u8>> = (0..plan.var_count)
        .map(|v| (!free[v]).then_some(values[v]))
        .collect();
    let pairs = |vals: &[u8]| {
        let mut p: Vec<(u8, u8)> = shared_idx
            .iter()
            .map(|&i| (vals[plan.edge_vars[i].head], vals[plan.edge_vars[i].tail]))
            .collect();
        p.sort_unstable();
        p
    };
    let target = pairs(&values);
    let mut search = Search::new(plan, fixed, Vec::new());
    let mut total = Scalar::zero();
    let mut count = 0;
    while search.advance(plan) {
        if pairs(search.values()) == target {
            total += bound.signed_term(search.values());
            count += 1;
        }
    }
    Ok((total, count))
}

/// Evaluation entry point with tunable options.
#[derive(Clone, Copy, Debug, Default)]
pub struct Evaluator {
    pub options: EvalOptions,
}

impl Evaluator {
    pub fn new(options: EvalOptions) -> Self {
        Evaluator { options }
    }

    pub fn weight(&self, diagram: &TraceDiagram, leaves: &LeafColoring, binding: &MatrixBinding) -> Result<Scalar> {
        let bound = BoundPlan::new(diagram, binding)?;
        for leaf in diagram.open_leaves() {
            if !leaves.labels.contains_key(&leaf.id) {
                return Err(Error::InvalidPartition(format!(
                    "leaf coloring does not label {}",
                    leaf.id
                )));
            }
        }
        let Some(fixed) = leaf_fixing(&bound.plan, diagram, leaves)? else {
            return Ok(Scalar::zero());
        };
        let mut search = bound.search(fixed, self.options);
        let mut total = Scalar::zero();
        while search.advance(&bound.plan) {
            total += bound.signed_term(search.values());
        }
        Ok(total)
    }

    pub fn evaluate_closed(&self, diagram: &TraceDiagram, binding: &MatrixBinding) -> Result<Scalar> {
        if !diagram.is_closed() {
            return Err(Error::NotClosed);
        }
        self.weight(diagram, &LeafColoring::default(), binding)
    }

    /// Whole function matrix from a single enumeration with free leaves.
    pub fn as_function_matrix(&self, diagram: &TraceDiagram, binding: &MatrixBinding) -> Result<FunctionMatrix> {
        let (inputs, outputs) = match diagram.framing() {
            Some(f) => (f.inputs.clone(), f.outputs.clone()),
            None if diagram.is_closed() => (Vec::new(), Vec::new()),
            None => return Err(Error::NotFramed),
        };
        let bound = BoundPlan::new(diagram, binding)?;
        let plan = &bound.plan;
        let n = plan.n;
        let in_vars: Vec<Var> = inputs.iter().map(|l| plan.leaf_vars[l]).collect();
        let out_vars: Vec<Var> = outputs.iter().map(|l| plan.leaf_vars[l]).collect();

        let mut acc: BTreeMap<(usize, usize), Scalar> = BTreeMap::new();
        let mut search = bound.search(vec![None; plan.var_count], self.options);
        while search.advance(plan) {
            let values = search.values();
            let term = bound.signed_term(values);
            if term.is_zero() {
                continue;
            }
            let index = |vars: &[Var]| vars.iter().fold(0, |a, &v| a * n + values[v] as usize);
            *acc.entry((index(&out_vars), index(&in_vars))).or_insert_with(Scalar::zero) += term;
        }

        let mut fm = FunctionMatrix::zeros(n, inputs.len(), outputs.len());
        for ((r, c), x) in acc {
            fm.matrix[(r, c)] = x;
        }
        Ok(fm)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{word, DiagramBuilder, Dimension, EdgeEnd};
    use crate::scalar::int;

    fn dim(n: usize) -> Dimension {
        Dimension::new(n).unwrap()
    }

    /// The `n = 3` pair of trivalent vertices joined by one edge, two leaves
    /// below and two above, ciliated as in the worked coloring example.
    fn trivalent_pair() -> TraceDiagram {
        DiagramBuilder::new(dim(3))
            .leaf("bl")
            .leaf("br")
            .leaf("tl")
            .leaf("tr")
            .edge("a", "bl", "vb", vec![])
            .edge("b", "br", "vb", vec![])
            .edge("m", "vb", "va", vec![])
            .edge("c", "va", "tl", vec![])
            .edge("d", "va", "tr", vec![])
            .internal("vb", vec![EdgeEnd::head("a"), EdgeEnd::head("b"), EdgeEnd::tail("m")])
            .internal("va", vec![EdgeEnd::head("m"), EdgeEnd::tail("d"), EdgeEnd::tail("c")])
            .framing(vec!["bl".into(), "br".into()], vec!["tl".into(), "tr".into()])
            .build()
            .unwrap()
    }

    fn strand(n: usize, marks: &[&str]) -> TraceDiagram {
        DiagramBuilder::new(dim(n))
            .leaf("i")
            .leaf("o")
            .edge("e", "i", "o", word(marks))
            .framing(vec!["i".into()], vec!["o".into()])
            .build()
            .unwrap()
    }

    fn free_loop(n: usize, marks: &[&str]) -> TraceDiagram {
        DiagramBuilder::new(dim(n))
            .free_loop("e", word(marks))
            .build()
            .unwrap()
    }

    #[test]
    fn worked_example_has_two_colorings() {
        let d = trivalent_pair();
        let pre = LeafColoring::new().with("bl", 1).with("br", 2);
        let colorings: Vec<_> = enumerate_colorings(&d, &pre).unwrap().collect();
        assert_eq!(colorings.len(), 2);

        let first = colorings.iter().find(|c| c.get("c").unwrap().head == 1).unwrap();
        let second = colorings.iter().find(|c| c.get("c").unwrap().head == 2).unwrap();
        assert_eq!(vertex_permutation(&d, first, "vb").unwrap(), vec![1, 2, 3]);
        assert_eq!(vertex_permutation(&d, first, "va").unwrap(), vec![3, 2, 1]);
        assert_eq!(signature(&d, first).unwrap(), -1);
        assert_eq!(signature(&d, second).unwrap(), 1);
    }

    #[test]
    fn worked_example_action() {
        let d = trivalent_pair();
        let b = MatrixBinding::new(dim(3));
        let fm = as_function_matrix(&d, &b).unwrap();
        let mut image = fm.apply_basis(&[1, 2]);
        image.sort();
        assert_eq!(image, vec![(vec![1, 2], int(-1)), (vec![2, 1], int(1))]);

        let w = |top: [Label; 2]| {
            weight(
                &d,
                &LeafColoring::new()
                    .with("bl", 1)
                    .with("br", 2)
                    .with("tl", top[0])
                    .with("tr", top[1]),
                &b,
            )
            .unwrap()
        };
        assert_eq!(w([2, 1]), int(1));
        assert_eq!(w([1, 2]), int(-1));
    }

    #[test]
    fn free_loop_colorings_and_trace() {
        let d = free_loop(3, &["A"]);
        assert_eq!(enumerate_colorings(&d, &LeafColoring::new()).unwrap().count(), 3);
        let b = MatrixBinding::new(dim(2))
            .with("A", Matrix::from_ints(&[[1, 2], [3, 4]]))
            .unwrap();
        assert_eq!(evaluate_closed(&free_loop(2, &["A"]), &b).unwrap(), int(5));
        assert_eq!(evaluate_closed(&free_loop(3, &[]), &MatrixBinding::new(dim(3))).unwrap(), int(3));
    }

    #[test]
    fn single_strand_coloring_and_weights() {
        let d = strand(3, &[]);
        let pre = LeafColoring::new().with("i", 2);
        let all: Vec<_> = enumerate_colorings(&d, &pre).unwrap().collect();
        assert_eq!(all.len(), 1);
        assert_eq!(all[0].get("e").unwrap().head, 2);
        let b = MatrixBinding::new(dim(3));
        for i in 1..=3 {
            for j in 1..=3 {
                let w = weight(&d, &LeafColoring::new().with("i", i).with("o", j), &b).unwrap();
                assert_eq!(w, int((i == j) as i64));
            }
        }
        assert_eq!(as_function_matrix(&d, &b).unwrap().into_matrix(), Matrix::identity(3));
    }

    #[test]
    fn strand_coefficient_reads_head_row_tail_column() {
        let d = strand(2, &["A"]);
        let a = Matrix::from_ints(&[[1, 2], [3, 4]]);
        let b = MatrixBinding::new(dim(2)).with("A", a.clone()).unwrap();
        let mut c = Coloring::default();
        c.set("e", 1, 2);
        assert_eq!(coefficient(&d, &c, &b).unwrap(), int(2));
        assert_eq!(as_function_matrix(&d, &b).unwrap().into_matrix(), a);
    }

    #[test]
    fn stacked_word_coefficient() {
        let ones = Matrix::from_ints(&[[1, 1], [1, 1]]);
        let b = MatrixBinding::new(dim(2))
            .with("A", ones.clone())
            .unwrap()
            .with("B", ones.clone())
            .unwrap()
            .with("C", ones)
            .unwrap();
        let d = strand(2, &["A", "B", "C"]);
        let mut c = Coloring::default();
        c.set("e", 2, 1);
        assert_eq!(coefficient(&d, &c, &b).unwrap(), int(4));
    }

    #[test]
    fn unmarked_edge_coefficient_is_one() {
        let d = trivalent_pair();
        let pre = LeafColoring::new().with("bl", 3).with("br", 1);
        let b = MatrixBinding::new(dim(3));
        for c in enumerate_colorings(&d, &pre).unwrap() {
            assert_eq!(coefficient(&d, &c, &b).unwrap(), int(1));
        }
    }

    #[test]
    fn vertex_free_signature_is_positive() {
        let d = strand(3, &["A"]);
        for c in enumerate_colorings(&d, &LeafColoring::new()).unwrap() {
            assert_eq!(signature(&d, &c).unwrap(), 1);
        }
    }

    #[test]
    fn closed_evaluation_rejects_leaves() {
        let d = strand(2, &[]);
        assert_eq!(
            evaluate_closed(&d, &MatrixBinding::new(dim(2))),
            Err(Error::NotClosed)
        );
        assert_eq!(
            as_function_matrix(&d.clone().with_framing(None), &MatrixBinding::new(dim(2))),
            Err(Error::NotFramed)
        );
    }

    #[test]
    fn unbound_and_mismatched_bindings() {
        let d = free_loop(2, &["Q"]);
        assert_eq!(
            evaluate_closed(&d, &MatrixBinding::new(dim(2))),
            Err(Error::UnboundLabel("Q".into()))
        );
        assert!(matches!(
            evaluate_closed(&free_loop(3, &[]), &MatrixBinding::new(dim(2))),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn fast_path_products_of_traces() {
        let a = Matrix::from_ints(&[[1, 2], [3, 4]]);
        let bm = Matrix::from_ints(&[[0, 1], [5, -2]]);
        let b = MatrixBinding::new(dim(2))
            .with("A", a.clone())
            .unwrap()
            .with("B", bm.clone())
            .unwrap();
        let ab = free_loop(2, &["A", "B"]);
        assert_eq!(evaluate_fast_closed(&ab, &b).unwrap(), (&a * &bm).trace());
        assert_eq!(evaluate_closed(&ab, &b).unwrap(), (&a * &bm).trace());

        let two = DiagramBuilder::new(dim(2))
            .free_loop("x", word(&["A"]))
            .free_loop("y", word(&["B"]))
            .build()
            .unwrap();
        assert_eq!(evaluate_fast_closed(&two, &b).unwrap(), a.trace() * bm.trace());
        assert_eq!(
            evaluate_fast_closed(&TraceDiagram::empty(dim(2)), &b).unwrap(),
            int(1)
        );
        assert_eq!(
            evaluate_fast_closed(&trivalent_pair(), &MatrixBinding::new(dim(3))),
            Err(Error::FastPathInapplicable)
        );
    }

    #[test]
    fn pruning_does_not_change_results() {
        let a = Matrix::from_ints(&[[0, 2, 0], [1, 0, 0], [0, 0, 3]]);
        let b = MatrixBinding::new(dim(3)).with("A", a).unwrap();
        let d = strand(3, &["A", "A"]);
        let plain = Evaluator::new(EvalOptions { prune_zeros: false });
        assert_eq!(
            plain.as_function_matrix(&d, &b).unwrap(),
            Evaluator::default().as_function_matrix(&d, &b).unwrap()
        );
    }

    #[test]
    fn basis_index_round_trip() {
        for idx in 0..27 {
            assert_eq!(basis_index(&basis_labels(idx, 3, 3), 3), idx);
        }
        assert_eq!(basis_index(&[2, 1], 3), 3);
    }
}
