//! Trace diagrams: directed ciliated multigraphs whose edges carry matrix words.
//!
//! Vertices are either leaves (degree 1) or internal (degree `n`). Edges refer
//! to their endpoints by vertex id, and an internal vertex lists its incident
//! edge ends in ciliation order: the first entry is the half-edge numbered 1.
//! A free loop is an edge with no endpoints at all.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type VertexId = String;
pub type EdgeId = String;
/// Edge-end label, `1..=n`.
pub type Label = u32;

/// Dimension `n` of the underlying vector space; also the degree of internal vertices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Dimension(usize);

impl Dimension {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Unsupported("dimension must be at least 1".into()));
        }
        Ok(Dimension(n))
    }

    pub fn get(self) -> usize {
        self.0
    }
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum End {
    Head,
    Tail,
}

impl End {
    pub fn opposite(self) -> End {
        match self {
            End::Head => End::Tail,
            End::Tail => End::Head,
        }
    }
}

/// One end of an edge.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EdgeEnd {
    pub edge: EdgeId,
    pub end: End,
}

impl EdgeEnd {
    pub fn head(edge: impl Into<EdgeId>) -> Self {
        EdgeEnd {
            edge: edge.into(),
            end: End::Head,
        }
    }

    pub fn tail(edge: impl Into<EdgeId>) -> Self {
        EdgeEnd {
            edge: edge.into(),
            end: End::Tail,
        }
    }
}

impl fmt::Display for EdgeEnd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.end {
            End::Head => write!(f, "{}.h", self.edge),
            End::Tail => write!(f, "{}.t", self.edge),
        }
    }
}

/// A matrix label in an edge marking, optionally transposed.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Mark {
    pub label: String,
    pub transposed: bool,
}

impl Mark {
    pub fn new(label: impl Into<String>) -> Self {
        Mark {
            label: label.into(),
            transposed: false,
        }
    }

    pub fn transpose(&self) -> Self {
        Mark {
            label: self.label.clone(),
            transposed: !self.transposed,
        }
    }
}

impl fmt::Display for Mark {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.transposed {
            write!(f, "{}^T", self.label)
        } else {
            f.write_str(&self.label)
        }
    }
}

/// Builds a marking word from plain labels.
pub fn word<S: AsRef<str>>(labels: &[S]) -> Vec<Mark> {
    labels.iter().map(|l| Mark::new(l.as_ref())).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum VertexKind {
    /// Degree-1 vertex. A leaf carrying a vector label is capped by that vector
    /// and is not part of the framing.
    Leaf { vector: Option<String> },
    /// Degree-`n` vertex with its incident ends listed in ciliation order.
    Internal { ciliation: Vec<EdgeEnd> },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Vertex {
    pub id: VertexId,
    pub kind: VertexKind,
}

impl Vertex {
    pub fn is_leaf(&self) -> bool {
        matches!(self.kind, VertexKind::Leaf { .. })
    }

    pub fn is_open_leaf(&self) -> bool {
        matches!(self.kind, VertexKind::Leaf { vector: None })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Endpoints {
    Attached { tail: VertexId, head: VertexId },
    Loop,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub id: EdgeId,
    pub endpoints: Endpoints,
    /// Marking word listed head-to-tail; the edge acts as the product `M1 M2 .. Mk`.
    pub marking: Vec<Mark>,
}

impl Edge {
    pub fn is_marked(&self) -> bool {
        !self.marking.is_empty()
    }

    pub fn is_loop(&self) -> bool {
        matches!(self.endpoints, Endpoints::Loop)
    }

    pub fn vertex_at(&self, end: End) -> Option<&VertexId> {
        match (&self.endpoints, end) {
            (Endpoints::Attached { head, .. }, End::Head) => Some(head),
            (Endpoints::Attached { tail, .. }, End::Tail) => Some(tail),
            (Endpoints::Loop, _) => None,
        }
    }
}

/// Ordered inputs and outputs, given as open leaf vertex ids.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Framing {
    pub inputs: Vec<VertexId>,
    pub outputs: Vec<VertexId>,
}

impl Framing {
    pub fn new(inputs: Vec<VertexId>, outputs: Vec<VertexId>) -> Self {
        Framing { inputs, outputs }
    }

    pub fn leaves(&self) -> impl Iterator<Item = &VertexId> {
        self.inputs.iter().chain(&self.outputs)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TraceDiagram {
    dimension: Dimension,
    vertices: BTreeMap<VertexId, Vertex>,
    edges: BTreeMap<EdgeId, Edge>,
    framing: Option<Framing>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Violation {
    DuplicateVertex(VertexId),
    DuplicateEdge(EdgeId),
    UnknownEndpoint { edge: EdgeId, vertex: VertexId },
    LeafDegree { vertex: VertexId, found: usize },
    InternalDegree { vertex: VertexId, found: usize, expected: usize },
    CiliationMismatch { vertex: VertexId, detail: String },
    FramingNotPartition(String),
    EmptyLabel { edge: EdgeId },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DuplicateVertex(v) => write!(f, "duplicate vertex {v}"),
            Violation::DuplicateEdge(e) => write!(f, "duplicate edge {e}"),
            Violation::UnknownEndpoint { edge, vertex } => {
                write!(f, "dangling half-edge: edge {edge} references unknown vertex {vertex}")
            }
            Violation::LeafDegree { vertex, found } => {
                write!(f, "leaf {vertex} has degree {found}, expected 1")
            }
            Violation::InternalDegree {
                vertex,
                found,
                expected,
            } => write!(
                f,
                "internal degree \u{2260} n: vertex {vertex} has degree {found}, n = {expected}"
            ),
            Violation::CiliationMismatch { vertex, detail } => {
                write!(f, "unbound slot at vertex {vertex}: {detail}")
            }
            Violation::FramingNotPartition(detail) => {
                write!(f, "framing not a partition: {detail}")
            }
            Violation::EmptyLabel { edge } => write!(f, "edge {edge} has an empty marking label"),
        }
    }
}

impl TraceDiagram {
    /// Assembles a diagram without checking it; see [`TraceDiagram::validate`].
    /// Later duplicates replace earlier ones here, so builders should prefer
    /// [`DiagramBuilder`], which reports duplicates.
    pub fn new(
        dimension: Dimension,
        vertices: impl IntoIterator<Item = Vertex>,
        edges: impl IntoIterator<Item = Edge>,
        framing: Option<Framing>,
    ) -> Self {
        TraceDiagram {
            dimension,
            vertices: vertices.into_iter().map(|v| (v.id.clone(), v)).collect(),
            edges: edges.into_iter().map(|e| (e.id.clone(), e)).collect(),
            framing,
        }
    }

    pub fn empty(dimension: Dimension) -> Self {
        TraceDiagram::new(dimension, [], [], Some(Framing::default()))
    }

    pub fn dimension(&self) -> Dimension {
        self.dimension
    }

    pub fn n(&self) -> usize {
        self.dimension.get()
    }

    pub fn vertices(&self) -> impl Iterator<Item = &Vertex> {
        self.vertices.values()
    }

    /// Edges in canonical (id) order.
    pub fn edges(&self) -> impl Iterator<Item = &Edge> {
        self.edges.values()
    }

    pub fn vertex(&self, id: &str) -> Option<&Vertex> {
        self.vertices.get(id)
    }

    pub fn edge(&self, id: &str) -> Option<&Edge> {
        self.edges.get(id)
    }

    pub fn framing(&self) -> Option<&Framing> {
        self.framing.as_ref()
    }

    pub fn with_framing(mut self, framing: Option<Framing>) -> Self {
        self.framing = framing;
        self
    }

    pub fn inputs(&self) -> &[VertexId] {
        self.framing.as_ref().map_or(&[], |f| &f.inputs)
    }

    pub fn outputs(&self) -> &[VertexId] {
        self.framing.as_ref().map_or(&[], |f| &f.outputs)
    }

    pub fn internal_vertices(&self) -> impl Iterator<Item = &Vertex> {
        self.vertices.values().filter(|v| !v.is_leaf())
    }

    pub fn open_leaves(&self) -> impl Iterator<Item = &Vertex> {
        self.vertices.values().filter(|v| v.is_open_leaf())
    }

    /// No open leaves (vector-capped leaves are allowed).
    pub fn is_closed(&self) -> bool {
        self.open_leaves().next().is_none()
    }

    pub fn has_internal_vertices(&self) -> bool {
        self.internal_vertices().next().is_some()
    }

    pub fn into_parts(self) -> (Dimension, Vec<Vertex>, Vec<Edge>, Option<Framing>) {
        (
            self.dimension,
            self.vertices.into_values().collect(),
            self.edges.into_values().collect(),
            self.framing,
        )
    }

    /// Edge ends attached to `vertex`, in edge-id order, tail before head.
    pub fn incident_ends(&self, vertex: &str) -> Vec<EdgeEnd> {
        let mut out = Vec::new();
        for edge in self.edges.values() {
            for end in [End::Tail, End::Head] {
                if edge.vertex_at(end).map(String::as_str) == Some(vertex) {
                    out.push(EdgeEnd {
                        edge: edge.id.clone(),
                        end,
                    });
                }
            }
        }
        out
    }

    /// The unique edge end attached to a leaf.
    pub fn leaf_end(&self, leaf: &str) -> Option<EdgeEnd> {
        let ends = self.incident_ends(leaf);
        (ends.len() == 1).then(|| ends.into_iter().next().unwrap())
    }

    /// Matrix labels used by markings.
    pub fn matrix_labels(&self) -> BTreeSet<String> {
        self.edges
            .values()
            .flat_map(|e| e.marking.iter().map(|m| m.label.clone()))
            .collect()
    }

    pub fn vector_labels(&self) -> BTreeSet<String> {
        self.vertices
            .values()
            .filter_map(|v| match &v.kind {
                VertexKind::Leaf { vector: Some(l) } => Some(l.clone()),
                _ => None,
            })
            .collect()
    }

    /// Structural diagnostics; empty when the diagram is well formed.
    pub fn validate(&self) -> Vec<Violation> {
        let n = self.n();
        let mut violations = Vec::new();

        for edge in self.edges.values() {
            if edge.marking.iter().any(|m| m.label.is_empty()) {
                violations.push(Violation::EmptyLabel {
                    edge: edge.id.clone(),
                });
            }
            for end in [End::Tail, End::Head] {
                if let Some(v) = edge.vertex_at(end) {
                    if !self.vertices.contains_key(v) {
                        violations.push(Violation::UnknownEndpoint {
                            edge: edge.id.clone(),
                            vertex: v.clone(),
                        });
                    }
                }
            }
        }

        for vertex in self.vertices.values() {
            let incident = self.incident_ends(&vertex.id);
            match &vertex.kind {
                VertexKind::Leaf { .. } => {
                    if incident.len() != 1 {
                        violations.push(Violation::LeafDegree {
                            vertex: vertex.id.clone(),
                            found: incident.len(),
                        });
                    }
                }
                VertexKind::Internal { ciliation } => {
                    if incident.len() != n {
                        violations.push(Violation::InternalDegree {
                            vertex: vertex.id.clone(),
                            found: incident.len(),
                            expected: n,
                        });
                    }
                    let listed: BTreeSet<&EdgeEnd> = ciliation.iter().collect();
                    let actual: BTreeSet<&EdgeEnd> = incident.iter().collect();
                    if listed.len() != ciliation.len() {
                        violations.push(Violation::CiliationMismatch {
                            vertex: vertex.id.clone(),
                            detail: "ciliation repeats an edge end".into(),
                        });
                    }
                    for missing in actual.difference(&listed) {
                        violations.push(Violation::CiliationMismatch {
                            vertex: vertex.id.clone(),
                            detail: format!("incident end {missing} missing from ciliation"),
                        });
                    }
                    for extra in listed.difference(&actual) {
                        violations.push(Violation::CiliationMismatch {
                            vertex: vertex.id.clone(),
                            detail: format!("ciliation lists {extra}, which is not incident"),
                        });
                    }
                }
            }
        }

        if let Some(framing) = &self.framing {
            let open: BTreeSet<&VertexId> = self.open_leaves().map(|v| &v.id).collect();
            let mut seen = BTreeSet::new();
            for leaf in framing.leaves() {
                if !seen.insert(leaf) {
                    violations.push(Violation::FramingNotPartition(format!(
                        "leaf {leaf} appears more than once"
                    )));
                } else if !open.contains(leaf) {
                    violations.push(Violation::FramingNotPartition(format!(
                        "{leaf} is not an open leaf"
                    )));
                }
            }
            for leaf in open.difference(&seen) {
                violations.push(Violation::FramingNotPartition(format!(
                    "leaf {leaf} is neither an input nor an output"
                )));
            }
        }

        violations
    }

    pub fn ensure_valid(&self) -> Result<()> {
        let violations = self.validate();
        if violations.is_empty() {
            Ok(())
        } else {
            Err(Error::Invalid(violations))
        }
    }

    /// Copy with every vertex and edge id prefixed; used when merging diagrams.
    pub fn prefixed(&self, prefix: &str) -> TraceDiagram {
        let rename = |id: &str| format!("{prefix}{id}");
        let vertices = self.vertices.values().map(|v| Vertex {
            id: rename(&v.id),
            kind: match &v.kind {
                VertexKind::Leaf { vector } => VertexKind::Leaf {
                    vector: vector.clone(),
                },
                VertexKind::Internal { ciliation } => VertexKind::Internal {
                    ciliation: ciliation
                        .iter()
                        .map(|e| EdgeEnd {
                            edge: rename(&e.edge),
                            end: e.end,
                        })
                        .collect(),
                },
            },
        });
        let edges = self.edges.values().map(|e| Edge {
            id: rename(&e.id),
            endpoints: match &e.endpoints {
                Endpoints::Attached { tail, head } => Endpoints::Attached {
                    tail: rename(tail),
                    head: rename(head),
                },
                Endpoints::Loop => Endpoints::Loop,
            },
            marking: e.marking.clone(),
        });
        let framing = self.framing.as_ref().map(|f| Framing {
            inputs: f.inputs.iter().map(|v| rename(v)).collect(),
            outputs: f.outputs.iter().map(|v| rename(v)).collect(),
        });
        TraceDiagram::new(self.dimension, vertices, edges, framing)
    }
}

/// Incremental construction of a [`TraceDiagram`].
#[derive(Clone, Debug)]
pub struct DiagramBuilder {
    dimension: Dimension,
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
    framing: Option<Framing>,
}

impl DiagramBuilder {
    pub fn new(dimension: Dimension) -> Self {
        DiagramBuilder {
            dimension,
            vertices: Vec::new(),
            edges: Vec::new(),
            framing: None,
        }
    }

    pub fn leaf(mut self, id: impl Into<VertexId>) -> Self {
        self.vertices.push(Vertex {
            id: id.into(),
            kind: VertexKind::Leaf { vector: None },
        });
        self
    }

    pub fn vector_leaf(mut self, id: impl Into<VertexId>, vector: impl Into<String>) -> Self {
        self.vertices.push(Vertex {
            id: id.into(),
            kind: VertexKind::Leaf {
                vector: Some(vector.into()),
            },
        });
        self
    }

    pub fn internal(mut self, id: impl Into<VertexId>, ciliation: Vec<EdgeEnd>) -> Self {
        self.vertices.push(Vertex {
            id: id.into(),
            kind: VertexKind::Internal { ciliation },
        });
        self
    }

    pub fn edge(
        mut self,
        id: impl Into<EdgeId>,
        tail: impl Into<VertexId>,
        head: impl Into<VertexId>,
        marking: Vec<Mark>,
    ) -> Self {
        self.edges.push(Edge {
            id: id.into(),
            endpoints: Endpoints::Attached {
                tail: tail.into(),
                head: head.into(),
            },
            marking,
        });
        self
    }

    pub fn free_loop(mut self, id: impl Into<EdgeId>, marking: Vec<Mark>) -> Self {
        self.edges.push(Edge {
            id: id.into(),
            endpoints: Endpoints::Loop,
            marking,
        });
        self
    }

    pub fn framing(mut self, inputs: Vec<VertexId>, outputs: Vec<VertexId>) -> Self {
        self.framing = Some(Framing { inputs, outputs });
        self
    }

    /// Assembles the diagram, rejecting duplicate ids and structural violations.
    pub fn build(self) -> Result<TraceDiagram> {
        let mut violations = Vec::new();
        let mut vids = BTreeSet::new();
        for v in &self.vertices {
            if !vids.insert(v.id.clone()) {
                violations.push(Violation::DuplicateVertex(v.id.clone()));
            }
        }
        let mut eids = BTreeSet::new();
        for e in &self.edges {
            if !eids.insert(e.id.clone()) {
                violations.push(Violation::DuplicateEdge(e.id.clone()));
            }
        }
        let diagram = TraceDiagram::new(self.dimension, self.vertices, self.edges, self.framing);
        violations.extend(diagram.validate());
        if violations.is_empty() {
            Ok(diagram)
        } else {
            Err(Error::Invalid(violations))
        }
    }
}

/// Labels on the two ends of an edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EdgeLabels {
    pub head: Label,
    pub tail: Label,
}

impl EdgeLabels {
    pub fn at(&self, end: End) -> Label {
        match end {
            End::Head => self.head,
            End::Tail => self.tail,
        }
    }
}

/// Head and tail labels for every edge.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Coloring {
    pub labels: BTreeMap<EdgeId, EdgeLabels>,
}

impl Coloring {
    pub fn get(&self, edge: &str) -> Option<EdgeLabels> {
        self.labels.get(edge).copied()
    }

    pub fn label_at(&self, end: &EdgeEnd) -> Option<Label> {
        self.get(&end.edge).map(|l| l.at(end.end))
    }

    pub fn set(&mut self, edge: impl Into<EdgeId>, head: Label, tail: Label) {
        self.labels.insert(edge.into(), EdgeLabels { head, tail });
    }
}

/// Labels on (a subset of) the open leaves, keyed by leaf vertex id.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LeafColoring {
    pub labels: BTreeMap<VertexId, Label>,
}

impl LeafColoring {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, leaf: impl Into<VertexId>, label: Label) -> Self {
        self.labels.insert(leaf.into(), label);
        self
    }

    /// Pairs framed inputs with `inputs` and outputs with `outputs`, in order.
    pub fn from_framing(framing: &Framing, inputs: &[Label], outputs: &[Label]) -> Self {
        let labels = framing
            .inputs
            .iter()
            .cloned()
            .zip(inputs.iter().copied())
            .chain(framing.outputs.iter().cloned().zip(outputs.iter().copied()))
            .collect();
        LeafColoring { labels }
    }
}

fn check_label(label: Label, n: usize) -> Result<()> {
    if label == 0 || label as usize > n {
        Err(Error::LabelOutOfRange { label, n })
    } else {
        Ok(())
    }
}

/// Permutation induced at an internal vertex: slot `i` maps to the label on the
/// `i`-th half-edge in ciliation order. The result lists the images of `1..=n`.
pub fn vertex_permutation(
    diagram: &TraceDiagram,
    coloring: &Coloring,
    vertex: &str,
) -> Result<Vec<Label>> {
    let v = diagram
        .vertex(vertex)
        .ok_or_else(|| Error::UnknownVertex(vertex.to_string()))?;
    let VertexKind::Internal { ciliation } = &v.kind else {
        return Err(Error::NotInternal {
            vertex: vertex.to_string(),
        });
    };
    let n = diagram.n();
    let mut images = Vec::with_capacity(ciliation.len());
    let mut seen = vec![false; n + 1];
    for end in ciliation {
        let label = coloring
            .label_at(end)
            .ok_or_else(|| Error::IncompleteColoring {
                edge: end.edge.clone(),
            })?;
        check_label(label, n)?;
        if seen[label as usize] {
            return Err(Error::InadmissibleColoring {
                vertex: vertex.to_string(),
            });
        }
        seen[label as usize] = true;
        images.push(label);
    }
    if images.len() != n {
        return Err(Error::InadmissibleColoring {
            vertex: vertex.to_string(),
        });
    }
    Ok(images)
}

/// Checks both admissibility conditions of a full coloring.
pub fn check_admissible(diagram: &TraceDiagram, coloring: &Coloring) -> Result<()> {
    let n = diagram.n();
    for edge in diagram.edges() {
        let labels = coloring.get(&edge.id).ok_or_else(|| Error::IncompleteColoring {
            edge: edge.id.clone(),
        })?;
        check_label(labels.head, n)?;
        check_label(labels.tail, n)?;
        if (!edge.is_marked() || edge.is_loop()) && labels.head != labels.tail {
            return Err(Error::UnmarkedLabelMismatch {
                edge: edge.id.clone(),
            });
        }
    }
    for v in diagram.internal_vertices() {
        vertex_permutation(diagram, coloring, &v.id)?;
    }
    Ok(())
}
