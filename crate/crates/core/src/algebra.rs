//! Monoidal structure on framed diagrams and formal sums of diagrams.
//!
//! Gluing never introduces 2-valent vertices: two leaf edges are fused into a
//! single edge whose marking word is the concatenation of theirs.

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::binding::MatrixBinding;
use crate::diagram::{
    Dimension, Edge, EdgeEnd, End, Endpoints, Framing, Label, LeafColoring, Mark, TraceDiagram,
    Vertex, VertexId, VertexKind,
};
use crate::error::{Error, Result};
use crate::eval::{self, basis_labels, FunctionMatrix};
use crate::scalar::{self, Scalar};

/// Word of an edge read in the opposite direction: reversed, each mark transposed.
pub fn reversed_word(word: &[Mark]) -> Vec<Mark> {
    word.iter().rev().map(Mark::transpose).collect()
}

fn framing_or_empty(diagram: &TraceDiagram) -> Result<Framing> {
    match diagram.framing() {
        Some(f) => Ok(f.clone()),
        None if diagram.is_closed() => Ok(Framing::default()),
        None => Err(Error::NotFramed),
    }
}

fn check_dimensions(a: &TraceDiagram, b: &TraceDiagram) -> Result<()> {
    if a.dimension() != b.dimension() {
        return Err(Error::DimensionMismatch {
            expected: a.n(),
            found: b.n(),
        });
    }
    Ok(())
}

fn merge(parts: [TraceDiagram; 2], framing: Option<Framing>) -> TraceDiagram {
    let dimension = parts[0].dimension();
    let mut vertices = Vec::new();
    let mut edges = Vec::new();
    for d in parts {
        let (_, v, e, _) = d.into_parts();
        vertices.extend(v);
        edges.extend(e);
    }
    TraceDiagram::new(dimension, vertices, edges, framing)
}

/// Fuses the edge ending at leaf `into` with the edge starting at leaf
/// `out_of`, inserting `word` between them, and removes both leaves.
///
/// Flow runs into `into`, through `word`, and out of `out_of`. When both
/// leaves sit on the same edge the result is a free loop. Framing entries for
/// the two leaves are dropped; the result is not validated.
pub fn join_leaves(
    diagram: &TraceDiagram,
    into: &str,
    out_of: &str,
    word: &[Mark],
) -> Result<TraceDiagram> {
    for leaf in [into, out_of] {
        if !diagram.vertex(leaf).is_some_and(Vertex::is_open_leaf) {
            return Err(Error::InvalidPartition(format!("{leaf} is not an open leaf")));
        }
    }
    if into == out_of {
        return Err(Error::InvalidPartition(format!("cannot join {into} to itself")));
    }
    let a = diagram
        .leaf_end(into)
        .ok_or_else(|| Error::UnknownVertex(into.to_string()))?;
    let b = diagram
        .leaf_end(out_of)
        .ok_or_else(|| Error::UnknownVertex(out_of.to_string()))?;
    let ea = diagram.edge(&a.edge).expect("leaf edge exists");
    let eb = diagram.edge(&b.edge).expect("leaf edge exists");
    let toward_into = match a.end {
        End::Head => ea.marking.clone(),
        End::Tail => reversed_word(&ea.marking),
    };
    let from_out_of = match b.end {
        End::Tail => eb.marking.clone(),
        End::Head => reversed_word(&eb.marking),
    };

    let (dimension, vertices, edges, framing) = diagram.clone().into_parts();
    let framing = framing.map(|f| Framing {
        inputs: f.inputs.into_iter().filter(|v| v != into && v != out_of).collect(),
        outputs: f.outputs.into_iter().filter(|v| v != into && v != out_of).collect(),
    });
    let vertices = vertices
        .into_iter()
        .filter(|v| v.id != into && v.id != out_of);

    if ea.id == eb.id {
        let mut marking = word.to_vec();
        marking.extend(toward_into);
        let edges = edges.into_iter().map(|e| {
            if e.id == ea.id {
                Edge {
                    id: e.id,
                    endpoints: Endpoints::Loop,
                    marking: marking.clone(),
                }
            } else {
                e
            }
        });
        return Ok(TraceDiagram::new(dimension, vertices.collect::<Vec<_>>(), edges, framing));
    }

    let far_a = ea.vertex_at(a.end.opposite()).expect("attached").clone();
    let far_b = eb.vertex_at(b.end.opposite()).expect("attached").clone();
    let mut marking = from_out_of;
    marking.extend_from_slice(word);
    marking.extend(toward_into);
    let fused = Edge {
        id: ea.id.clone(),
        endpoints: Endpoints::Attached {
            tail: far_a,
            head: far_b,
        },
        marking,
    };
    let old_a = EdgeEnd {
        edge: ea.id.clone(),
        end: a.end.opposite(),
    };
    let old_b = EdgeEnd {
        edge: eb.id.clone(),
        end: b.end.opposite(),
    };
    let vertices = vertices.map(|v| match v.kind {
        VertexKind::Internal { ciliation } => Vertex {
            id: v.id,
            kind: VertexKind::Internal {
                ciliation: ciliation
                    .into_iter()
                    .map(|end| {
                        if end == old_a {
                            EdgeEnd::tail(fused.id.clone())
                        } else if end == old_b {
                            EdgeEnd::head(fused.id.clone())
                        } else {
                            end
                        }
                    })
                    .collect(),
            },
        },
        kind => Vertex { id: v.id, kind },
    });
    let vertices: Vec<Vertex> = vertices.collect();
    let edges = edges
        .into_iter()
        .filter(|e| e.id != ea.id && e.id != eb.id)
        .chain(std::iter::once(fused));
    Ok(TraceDiagram::new(dimension, vertices, edges, framing))
}

/// Glues the `i`-th output of `bottom` to the `i`-th input of `top`.
///
/// Vertex and edge ids are prefixed with `b.` and `t.` to keep them apart.
pub fn compose(top: &TraceDiagram, bottom: &TraceDiagram) -> Result<TraceDiagram> {
    check_dimensions(top, bottom)?;
    let top_framing = framing_or_empty(top)?;
    let bottom_framing = framing_or_empty(bottom)?;
    if bottom_framing.outputs.len() != top_framing.inputs.len() {
        return Err(Error::ArityMismatch {
            expected: top_framing.inputs.len(),
            found: bottom_framing.outputs.len(),
        });
    }
    let b = bottom.prefixed("b.");
    let t = top.prefixed("t.");
    let framing = Framing {
        inputs: b.inputs().to_vec(),
        outputs: t.outputs().to_vec(),
    };
    let pairs: Vec<(VertexId, VertexId)> = b
        .outputs()
        .iter()
        .cloned()
        .zip(t.inputs().iter().cloned())
        .collect();
    let mut glued = merge([b, t], None);
    for (out, inp) in pairs {
        glued = join_leaves(&glued, &out, &inp, &[])?;
    }
    let glued = glued.with_framing(Some(framing));
    glued.ensure_valid()?;
    Ok(glued)
}

/// Places `right` beside `left`; ids are prefixed with `l.` and `r.`.
pub fn tensor(left: &TraceDiagram, right: &TraceDiagram) -> Result<TraceDiagram> {
    check_dimensions(left, right)?;
    framing_or_empty(left)?;
    framing_or_empty(right)?;
    let l = left.prefixed("l.");
    let r = right.prefixed("r.");
    let framing = Framing {
        inputs: l.inputs().iter().chain(r.inputs()).cloned().collect(),
        outputs: l.outputs().iter().chain(r.outputs()).cloned().collect(),
    };
    let joined = merge([l, r], Some(framing));
    joined.ensure_valid()?;
    Ok(joined)
}

/// Same diagram with a new framing, which must partition the open leaves.
pub fn reframe(diagram: &TraceDiagram, framing: Framing) -> Result<TraceDiagram> {
    let mut leaves: Vec<&VertexId> = framing.leaves().collect();
    leaves.sort();
    let mut open: Vec<&VertexId> = diagram.open_leaves().map(|v| &v.id).collect();
    open.sort();
    if leaves != open {
        return Err(Error::InvalidPartition(format!(
            "expected a partition of {{{}}}",
            open.iter().map(|s| s.as_str()).collect::<Vec<_>>().join(", ")
        )));
    }
    Ok(diagram.clone().with_framing(Some(framing)))
}

/// New framing given by positions into the current leaf order (inputs then outputs).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeafPartition {
    pub inputs: Vec<usize>,
    pub outputs: Vec<usize>,
}

impl LeafPartition {
    /// Every ordered split of `leaves` positions into inputs and outputs.
    pub fn all(leaves: usize) -> Vec<LeafPartition> {
        use itertools::Itertools;
        let mut out = Vec::new();
        for order in (0..leaves).permutations(leaves) {
            for cut in 0..=leaves {
                out.push(LeafPartition {
                    inputs: order[..cut].to_vec(),
                    outputs: order[cut..].to_vec(),
                });
            }
        }
        out
    }

    fn check(&self, leaves: usize) -> Result<()> {
        let mut seen = vec![false; leaves];
        for &p in self.inputs.iter().chain(&self.outputs) {
            if p >= leaves || std::mem::replace(&mut seen[p], true) {
                return Err(Error::InvalidPartition(format!(
                    "positions must cover 0..{leaves} exactly once"
                )));
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::InvalidPartition(format!(
                "positions must cover 0..{leaves} exactly once"
            )));
        }
        Ok(())
    }
}

/// Reframes by leaf positions, so that corresponding leaves of different
/// diagrams in a relation move together.
pub fn reframe_positional(diagram: &TraceDiagram, partition: &LeafPartition) -> Result<TraceDiagram> {
    let framing = framing_or_empty(diagram)?;
    let leaves: Vec<VertexId> = framing.leaves().cloned().collect();
    partition.check(leaves.len())?;
    let pick = |ps: &[usize]| ps.iter().map(|&p| leaves[p].clone()).collect();
    reframe(
        diagram,
        Framing {
            inputs: pick(&partition.inputs),
            outputs: pick(&partition.outputs),
        },
    )
}

/// A rational linear combination of diagrams sharing dimension and arity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormalSum {
    dimension: Dimension,
    arity: Option<(usize, usize)>,
    terms: Vec<(Scalar, TraceDiagram)>,
}

impl FormalSum {
    pub fn zero(dimension: Dimension) -> Self {
        FormalSum {
            dimension,
            arity: None,
            terms: Vec::new(),
        }
    }

    pub fn single(diagram: TraceDiagram) -> Result<Self> {
        let mut s = FormalSum::zero(diagram.dimension());
        s.push(Scalar::one(), diagram)?;
        Ok(s)
    }

    pub fn from_terms(
        dimension: Dimension,
        terms: impl IntoIterator<Item = (Scalar, TraceDiagram)>,
    ) -> Result<Self> {
        let mut s = FormalSum::zero(dimension);
        for (c, d) in terms {
            s.push(c, d)?;
        }
        Ok(s)
    }

    pub fn push(&mut self, coefficient: Scalar, diagram: TraceDiagram) -> Result<()> {
        if diagram.dimension() != self.dimension {
            return Err(Error::IncompatibleTerms(format!(
                "dimension {} in a sum of dimension {}",
                diagram.n(),
                self.dimension
            )));
        }
        let f = framing_or_empty(&diagram)
            .map_err(|_| Error::IncompatibleTerms("unframed open diagram".into()))?;
        let arity = (f.inputs.len(), f.outputs.len());
        match self.arity {
            Some(a) if a != arity => {
                return Err(Error::IncompatibleTerms(format!(
                    "arity {}->{} in a sum of arity {}->{}",
                    arity.0, arity.1, a.0, a.1
                )))
            }
            _ => self.arity = Some(arity),
        }
        self.terms.push((coefficient, diagram));
        Ok(())
    }

    pub fn dimension(&self) -> Dimension {
        self.dimension
    }

    /// `(inputs, outputs)`; `None` for the empty sum.
    pub fn arity(&self) -> Option<(usize, usize)> {
        self.arity
    }

    pub fn terms(&self) -> &[(Scalar, TraceDiagram)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &FormalSum) -> Result<FormalSum> {
        let mut out = self.clone();
        for (c, d) in &other.terms {
            out.push(c.clone(), d.clone())?;
        }
        Ok(out)
    }

    pub fn scale(&self, factor: &Scalar) -> FormalSum {
        FormalSum {
            dimension: self.dimension,
            arity: self.arity,
            terms: self
                .terms
                .iter()
                .map(|(c, d)| (c * factor, d.clone()))
                .collect(),
        }
    }

    pub fn sub(&self, other: &FormalSum) -> Result<FormalSum> {
        self.add(&other.scale(&-Scalar::one()))
    }

    /// Applies a diagram-level operation to every term.
    pub fn map_terms(&self, f: impl Fn(&TraceDiagram) -> Result<TraceDiagram>) -> Result<FormalSum> {
        let mut out = FormalSum::zero(self.dimension);
        for (c, d) in &self.terms {
            out.push(c.clone(), f(d)?)?;
        }
        Ok(out)
    }

    /// Bilinear extension of [`compose`].
    pub fn compose(&self, bottom: &FormalSum) -> Result<FormalSum> {
        let mut out = FormalSum::zero(self.dimension);
        for (c, t) in &self.terms {
            for (e, b) in &bottom.terms {
                out.push(c * e, compose(t, b)?)?;
            }
        }
        Ok(out)
    }

    /// Bilinear extension of [`tensor`].
    pub fn tensor(&self, right: &FormalSum) -> Result<FormalSum> {
        let mut out = FormalSum::zero(self.dimension);
        for (c, l) in &self.terms {
            for (e, r) in &right.terms {
                out.push(c * e, tensor(l, r)?)?;
            }
        }
        Ok(out)
    }

    pub fn reframe_positional(&self, partition: &LeafPartition) -> Result<FormalSum> {
        self.map_terms(|d| reframe_positional(d, partition))
    }

    /// Each term's function matrix, evaluated in parallel, in term order.
    pub fn term_matrices(&self, binding: &MatrixBinding) -> Result<Vec<FunctionMatrix>> {
        self.terms
            .par_iter()
            .map(|(_, d)| eval::as_function_matrix(d, binding))
            .collect()
    }

    /// `Σ c_D f_D`, reduced in term order so the result is deterministic.
    pub fn function_matrix(&self, binding: &MatrixBinding) -> Result<FunctionMatrix> {
        let n = self.dimension.get();
        let (inputs, outputs) = self.arity.unwrap_or((0, 0));
        let mut acc = FunctionMatrix::zeros(n, inputs, outputs).into_matrix();
        for ((c, _), m) in self.terms.iter().zip(self.term_matrices(binding)?) {
            if !c.is_zero() {
                acc = &acc + &m.matrix().scale(c);
            }
        }
        Ok(FunctionMatrix::new(n, inputs, outputs, acc))
    }

    /// Closed value; every term must be closed.
    pub fn closed_value(&self, binding: &MatrixBinding) -> Result<Scalar> {
        if self.terms.iter().any(|(_, d)| !d.is_closed()) {
            return Err(Error::NotClosed);
        }
        Ok(self.function_matrix(binding)?.matrix()[(0, 0)].clone())
    }
}

/// How [`is_relation`] evaluates the sum.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum RelationMode {
    /// One function matrix per term.
    #[default]
    ExactOnBinding,
    /// Every total leaf coloring separately through the weight, an independent path.
    AllBases,
}

/// A nonzero entry of `Σ c_D f_D`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Residual {
    pub outputs: Vec<Label>,
    pub inputs: Vec<Label>,
    pub value: Scalar,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationCheck {
    pub holds: bool,
    /// Entry with the largest numerator magnitude, when the sum is nonzero.
    pub residual: Option<Residual>,
    pub nonzero_entries: usize,
}

fn residual_of(fm: &FunctionMatrix) -> RelationCheck {
    let n = fm.n();
    let m = fm.matrix();
    let mut best: Option<Residual> = None;
    let mut count = 0;
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            let x = &m[(r, c)];
            if x.is_zero() {
                continue;
            }
            count += 1;
            let better = best
                .as_ref()
                .map_or(true, |b| scalar::numerator_magnitude(x) > scalar::numerator_magnitude(&b.value));
            if better {
                best = Some(Residual {
                    outputs: basis_labels(r, fm.outputs(), n),
                    inputs: basis_labels(c, fm.inputs(), n),
                    value: x.clone(),
                });
            }
        }
    }
    RelationCheck {
        holds: count == 0,
        residual: best,
        nonzero_entries: count,
    }
}

/// Whether `Σ c_D f_D = 0` for the bound matrices.
pub fn is_relation(sum: &FormalSum, binding: &MatrixBinding, mode: RelationMode) -> Result<RelationCheck> {
    let fm = match mode {
        RelationMode::ExactOnBinding => sum.function_matrix(binding)?,
        RelationMode::AllBases => per_basis_matrix(sum, binding)?,
    };
    Ok(residual_of(&fm))
}

fn per_basis_matrix(sum: &FormalSum, binding: &MatrixBinding) -> Result<FunctionMatrix> {
    let n = sum.dimension().get();
    let (inputs, outputs) = sum.arity().unwrap_or((0, 0));
    let rows = n.pow(outputs as u32);
    let cols = n.pow(inputs as u32);
    let cells: Vec<(usize, usize)> = (0..rows)
        .flat_map(|r| (0..cols).map(move |c| (r, c)))
        .collect();
    let values: Vec<Scalar> = cells
        .par_iter()
        .map(|&(r, c)| {
            let outs = basis_labels(r, outputs, n);
            let ins = basis_labels(c, inputs, n);
            let mut acc = Scalar::zero();
            for (coef, d) in sum.terms() {
                let f = framing_or_empty(d)?;
                let leaves = LeafColoring::from_framing(&f, &ins, &outs);
                acc += coef * eval::weight(d, &leaves, binding)?;
            }
            Ok(acc)
        })
        .collect::<Result<_>>()?;
    let mut m = crate::linalg::Matrix::zeros(rows, cols);
    for ((r, c), v) in cells.into_iter().zip(values) {
        m[(r, c)] = v;
    }
    Ok(FunctionMatrix::new(n, inputs, outputs, m))
}

/// Ratio `a / b` when `a = λ b` entrywise for a single rational `λ`.
///
/// `None` when `b` is zero or the entries are not proportional.
pub fn proportionality(a: &crate::linalg::Matrix, b: &crate::linalg::Matrix) -> Option<Scalar> {
    let mut ratio: Option<Scalar> = None;
    for (x, y) in a.entries().iter().zip(b.entries()) {
        if y.is_zero() {
            if !x.is_zero() {
                return None;
            }
            continue;
        }
        let r = x / y;
        match &ratio {
            Some(q) if *q != r => return None,
            Some(_) => {}
            None => ratio = Some(r),
        }
    }
    ratio
}

/// Largest numerator magnitude among the entries; used for report residuals.
pub fn max_residual(m: &crate::linalg::Matrix) -> Option<Scalar> {
    m.entries()
        .iter()
        .filter(|x| !x.is_zero())
        .max_by_key(|x| x.numer().abs())
        .cloned()
}
