//! `.tdg` diagram sets: parsing and canonical serialization.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use crate::algebra::FormalSum;
use crate::diagram::{
    Dimension, Edge, EdgeEnd, End, Endpoints, Framing, Mark, TraceDiagram, Vertex, VertexKind,
};
use crate::error::{Error, Result};
use crate::library;

use super::lexer::{self, Statement, Token};

/// Name given to statements that appear before any `diagram` header.
pub const DEFAULT_NAME: &str = "main";

/// A reference to a library builder, e.g. `builtin:det(A) @ dim 3`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BuiltinRef {
    pub name: String,
    pub args: Vec<String>,
    pub dimension: Dimension,
}

impl BuiltinRef {
    pub fn resolve(&self) -> Result<FormalSum> {
        library::builtin(&self.name, &self.args, self.dimension)
    }

    fn to_text(&self) -> String {
        format!(
            "builtin:{}({}) @ dim {}",
            self.name,
            self.args.join(", "),
            self.dimension
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Entry {
    Diagram(TraceDiagram),
    Builtin(BuiltinRef),
}

impl Entry {
    pub fn to_sum(&self) -> Result<FormalSum> {
        match self {
            Entry::Diagram(d) => FormalSum::single(d.clone()),
            Entry::Builtin(b) => b.resolve(),
        }
    }
}

/// Named diagrams from one or more `.tdg` sources, kept in name order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DiagramSet {
    entries: BTreeMap<String, Entry>,
}

impl DiagramSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, name: impl Into<String>, entry: Entry) -> Option<Entry> {
        self.entries.insert(name.into(), entry)
    }

    pub fn entry(&self, name: &str) -> Option<&Entry> {
        self.entries.get(name)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// The named entry as a formal sum; builtins are expanded here.
    pub fn get(&self, name: &str) -> Result<FormalSum> {
        self.entries
            .get(name)
            .ok_or_else(|| Error::Unsupported(format!("no diagram named {name}")))?
            .to_sum()
    }

    /// The entry to use when no name is given: `main` if present, else the
    /// only entry.
    pub fn default_name(&self) -> Option<&str> {
        if self.entries.contains_key(DEFAULT_NAME) {
            return Some(DEFAULT_NAME);
        }
        match self.entries.len() {
            1 => self.names().next(),
            _ => None,
        }
    }

    /// Adds every entry of `other`; a name defined twice is an error.
    pub fn merge(&mut self, other: DiagramSet) -> Result<()> {
        for (name, entry) in other.entries {
            if self.entries.contains_key(&name) {
                return Err(Error::Unsupported(format!("diagram {name} defined twice")));
            }
            self.entries.insert(name, entry);
        }
        Ok(())
    }
}

pub fn parse_diagram_set(text: &str) -> Result<DiagramSet> {
    let statements = lexer::statements(text)?;
    let mut parser = SetParser::default();
    for st in &statements {
        parser.statement(st)?;
    }
    parser.finish()
}

/// Parses text holding exactly one diagram. A builtin is accepted when it
/// expands to a single term with coefficient one.
pub fn parse_diagram(text: &str) -> Result<TraceDiagram> {
    let set = parse_diagram_set(text)?;
    let name = match set.len() {
        1 => set.names().next().expect("one entry").to_string(),
        0 => return Err(parse_error(1, 1, "no diagram found")),
        k => return Err(parse_error(1, 1, format!("expected one diagram, found {k}"))),
    };
    let sum = match set.entry(&name).expect("listed") {
        Entry::Diagram(d) => return Ok(d.clone()),
        Entry::Builtin(b) => b.resolve()?,
    };
    match sum.terms() {
        [(c, d)] if *c == crate::scalar::int(1) => Ok(d.clone()),
        _ => Err(Error::Unsupported(format!(
            "{name} is a formal sum with {} terms, not a single diagram",
            sum.len()
        ))),
    }
}

fn parse_error(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

#[derive(Debug)]
enum RawEnd {
    /// `e`, `e@v`: the end of `e` that sits at this vertex.
    Attached(String),
    Explicit(EdgeEnd),
}

#[derive(Debug)]
struct PendingVertex {
    id: String,
    cil: Vec<(RawEnd, Token)>,
    line: usize,
}

/// One `diagram` block being read.
#[derive(Debug)]
struct Block {
    name: String,
    line: usize,
    dimension: Option<Dimension>,
    vertices: Vec<Vertex>,
    pending: Vec<PendingVertex>,
    edges: Vec<Edge>,
    inputs: Option<Vec<(String, Token)>>,
    outputs: Option<Vec<(String, Token)>>,
    builtin: Option<BuiltinRef>,
    ids: BTreeSet<String>,
    edge_ids: BTreeSet<String>,
    statements: usize,
    framing_line: usize,
}

impl Block {
    fn new(name: String, line: usize) -> Self {
        Block {
            name,
            line,
            dimension: None,
            vertices: Vec::new(),
            pending: Vec::new(),
            edges: Vec::new(),
            inputs: None,
            outputs: None,
            builtin: None,
            ids: BTreeSet::new(),
            edge_ids: BTreeSet::new(),
            statements: 0,
            framing_line: 0,
        }
    }
}

#[derive(Debug, Default)]
pub(crate) struct SetParser {
    file_dimension: Option<Dimension>,
    block: Option<Block>,
    set: DiagramSet,
}

impl SetParser {
    pub(crate) fn dimension(&self) -> Option<Dimension> {
        self.block
            .as_ref()
            .and_then(|b| b.dimension)
            .or(self.file_dimension)
    }

    pub(crate) fn statement(&mut self, st: &Statement) -> Result<()> {
        match st.keyword() {
            "diagram" => self.open(st),
            "dim" => {
                let dim = parse_dim(st, 1)?;
                if st.tokens.len() != 2 {
                    return Err(st.error_at(&st.tokens[2], "unexpected token after dim"));
                }
                match self.block.as_mut() {
                    Some(b) => {
                        if b.dimension.is_some() {
                            return Err(st.error("dim given twice in one diagram"));
                        }
                        b.dimension = Some(dim);
                    }
                    None => self.file_dimension = Some(dim),
                }
                Ok(())
            }
            "vertex" | "edge" | "loop" | "inputs" | "outputs" => {
                let block = self.block_mut(st);
                block.statements += 1;
                if block.builtin.is_some() {
                    return Err(st.error(format!("{} is defined by a builtin", block.name)));
                }
                match st.keyword() {
                    "vertex" => vertex(block, st),
                    "edge" => edge(block, st),
                    "loop" => free_loop(block, st, 1),
                    kw => framing(block, st, kw == "inputs"),
                }
            }
            k if k.starts_with("builtin:") => {
                let dim = self.dimension();
                let builtin = parse_builtin(st, 0, dim)?;
                let block = self.block_mut(st);
                if block.statements > 0 || block.builtin.is_some() {
                    return Err(st.error(format!("{} already has a body", block.name)));
                }
                block.statements += 1;
                block.builtin = Some(builtin);
                Ok(())
            }
            other => Err(st.error(format!("unknown statement {other:?}"))),
        }
    }

    fn block_mut(&mut self, st: &Statement) -> &mut Block {
        self.block
            .get_or_insert_with(|| Block::new(DEFAULT_NAME.to_string(), st.line))
    }

    fn open(&mut self, st: &Statement) -> Result<()> {
        let name = st
            .tokens
            .get(1)
            .ok_or_else(|| st.error("diagram needs a name"))?;
        check_id(st, name)?;
        self.close()?;
        if self.set.entry(&name.text).is_some() {
            return Err(st.error_at(name, format!("diagram {} defined twice", name.text)));
        }
        let mut block = Block::new(name.text.clone(), st.line);
        match st.tokens.get(2).map(|t| t.text.as_str()) {
            None => {}
            Some("=") => {
                let dim = self.file_dimension;
                block.builtin = Some(parse_builtin(st, 3, dim)?);
                block.statements += 1;
            }
            Some(_) => return Err(st.error_at(&st.tokens[2], "expected '=' or end of line")),
        }
        self.block = Some(block);
        Ok(())
    }

    fn close(&mut self) -> Result<()> {
        let Some(block) = self.block.take() else {
            return Ok(());
        };
        if self.set.entry(&block.name).is_some() {
            return Err(parse_error(
                block.line,
                1,
                format!("diagram {} defined twice", block.name),
            ));
        }
        let name = block.name.clone();
        let entry = finish_block(block, self.file_dimension)?;
        self.set.insert(name, entry);
        Ok(())
    }

    pub(crate) fn finish(mut self) -> Result<DiagramSet> {
        self.close()?;
        Ok(self.set)
    }

    /// Closes any open block and hands back what has been read so far.
    pub(crate) fn take_set(&mut self) -> Result<DiagramSet> {
        self.close()?;
        Ok(std::mem::take(&mut self.set))
    }
}

fn finish_block(block: Block, file_dimension: Option<Dimension>) -> Result<Entry> {
    if let Some(b) = block.builtin {
        return Ok(Entry::Builtin(b));
    }
    let dimension = block.dimension.or(file_dimension).ok_or_else(|| {
        parse_error(
            block.line,
            1,
            format!("diagram {} has no dim statement", block.name),
        )
    })?;
    let mut vertices = block.vertices;
    for p in block.pending {
        let mut ciliation = Vec::with_capacity(p.cil.len());
        for (raw, token) in p.cil {
            let at = |message: String| parse_error(p.line, token.column, message);
            let end = match raw {
                RawEnd::Explicit(end) => {
                    if !block.edge_ids.contains(&end.edge) {
                        return Err(at(format!("unknown edge {} in cil", end.edge)));
                    }
                    end
                }
                RawEnd::Attached(edge) => {
                    let e = block
                        .edges
                        .iter()
                        .find(|e| e.id == edge)
                        .ok_or_else(|| at(format!("unknown edge {edge} in cil")))?;
                    match &e.endpoints {
                        Endpoints::Attached { tail, head } if tail == head && *head == p.id => {
                            return Err(at(format!(
                                "edge {edge} is a self-loop at {}; write {edge}.h or {edge}.t",
                                p.id
                            )))
                        }
                        Endpoints::Attached { head, .. } if *head == p.id => EdgeEnd::head(edge),
                        Endpoints::Attached { tail, .. } if *tail == p.id => EdgeEnd::tail(edge),
                        _ => {
                            return Err(at(format!(
                                "edge {edge} does not meet vertex {}",
                                p.id
                            )))
                        }
                    }
                }
            };
            ciliation.push(end);
        }
        vertices.push(Vertex {
            id: p.id,
            kind: VertexKind::Internal { ciliation },
        });
    }
    let framing = match (block.inputs, block.outputs) {
        (None, None) => None,
        (inputs, outputs) => {
            let resolve = |list: Option<Vec<(String, Token)>>| -> Result<Vec<String>> {
                list.unwrap_or_default()
                    .into_iter()
                    .map(|(name, token)| resolve_leaf(&vertices, &block.edges, name, &token, block.framing_line))
                    .collect()
            };
            Some(Framing::new(resolve(inputs)?, resolve(outputs)?))
        }
    };
    Ok(Entry::Diagram(TraceDiagram::new(
        dimension,
        vertices,
        block.edges,
        framing,
    )))
}

/// A framing entry names a leaf directly, or an edge with exactly one leaf end.
fn resolve_leaf(
    vertices: &[Vertex],
    edges: &[Edge],
    name: String,
    token: &Token,
    line: usize,
) -> Result<String> {
    if vertices.iter().any(|v| v.id == name) {
        return Ok(name);
    }
    if let Some(e) = edges.iter().find(|e| e.id == name) {
        let leaves: Vec<&String> = [End::Tail, End::Head]
            .into_iter()
            .filter_map(|end| e.vertex_at(end))
            .filter(|v| vertices.iter().any(|x| &x.id == *v && x.is_leaf()))
            .collect();
        if let [leaf] = leaves[..] {
            return Ok(leaf.clone());
        }
        return Err(parse_error(
            line,
            token.column,
            format!("edge {name} does not end at exactly one leaf"),
        ));
    }
    Err(parse_error(line, token.column, format!("unknown leaf {name}")))
}

fn check_id(st: &Statement, token: &Token) -> Result<()> {
    let ok = !token.text.is_empty()
        && token
            .text
            .chars()
            .all(|c| c.is_alphanumeric() || matches!(c, '_' | '-' | '.'))
        && !token.text.ends_with(".h")
        && !token.text.ends_with(".t");
    if ok {
        Ok(())
    } else {
        Err(st.error_at(token, format!("invalid identifier {:?}", token.text)))
    }
}

fn declare(block: &mut Block, st: &Statement, token: &Token) -> Result<()> {
    check_id(st, token)?;
    if !block.ids.insert(token.text.clone()) {
        return Err(st.error_at(token, format!("duplicate id {}", token.text)));
    }
    Ok(())
}

fn parse_dim(st: &Statement, at: usize) -> Result<Dimension> {
    let token = st
        .tokens
        .get(at)
        .ok_or_else(|| st.error("dim needs a value"))?;
    let n: usize = token
        .text
        .parse()
        .map_err(|_| st.error_at(token, format!("invalid dimension {:?}", token.text)))?;
    Dimension::new(n).map_err(|e| st.error_at(token, e.to_string()))
}

/// Reads `builtin:NAME(args) [@ dim N]` starting at token `at`.
pub(crate) fn parse_builtin(
    st: &Statement,
    at: usize,
    default: Option<Dimension>,
) -> Result<BuiltinRef> {
    let token = st
        .tokens
        .get(at)
        .ok_or_else(|| st.error("expected builtin:NAME(...)"))?;
    let body = token
        .text
        .strip_prefix("builtin:")
        .ok_or_else(|| st.error_at(token, "expected builtin:NAME(...)"))?;
    let (name, args) = match lexer::call(body) {
        Some((name, args)) => (name.to_string(), args),
        None if !body.contains('(') => (body.to_string(), Vec::new()),
        None => return Err(st.error_at(token, "malformed builtin arguments")),
    };
    if name.is_empty() {
        return Err(st.error_at(token, "builtin needs a name"));
    }
    let rest = &st.tokens[at + 1..];
    let dimension = match rest {
        [] => default.ok_or_else(|| st.error_at(token, "builtin needs @ dim N or a dim statement"))?,
        [a, d, _] if a.text == "@" && d.text == "dim" => parse_dim(st, at + 3)?,
        [t, ..] => return Err(st.error_at(t, "expected '@ dim N'")),
    };
    Ok(BuiltinRef {
        name,
        args,
        dimension,
    })
}

fn parse_marks(st: &Statement, tokens: &[Token]) -> Result<Vec<Mark>> {
    match tokens {
        [] => Ok(Vec::new()),
        [m, labels @ ..] if m.text == "mark" => labels
            .iter()
            .map(|t| {
                let (label, transposed) = match t.text.strip_suffix("^T") {
                    Some(l) => (l, true),
                    None => (t.text.as_str(), false),
                };
                if label.is_empty() || !label.chars().all(|c| c.is_alphanumeric() || c == '_') {
                    return Err(st.error_at(t, format!("invalid matrix label {:?}", t.text)));
                }
                Ok(Mark {
                    label: label.to_string(),
                    transposed,
                })
            })
            .collect(),
        [t, ..] => Err(st.error_at(t, "expected 'mark'")),
    }
}

fn vertex(block: &mut Block, st: &Statement) -> Result<()> {
    let [_, id, kind, rest @ ..] = &st.tokens[..] else {
        return Err(st.error("expected vertex ID leaf|internal ..."));
    };
    declare(block, st, id)?;
    if kind.text == "leaf" {
        let vector = match rest {
            [] => None,
            [v, label] if v.text == "vec" => Some(label.text.clone()),
            [t, ..] => return Err(st.error_at(t, "expected 'vec LABEL' or end of line")),
        };
        block.vertices.push(Vertex {
            id: id.text.clone(),
            kind: VertexKind::Leaf { vector },
        });
        return Ok(());
    }
    if kind.text != "internal" {
        return Err(st.error_at(kind, "expected 'leaf' or 'internal'"));
    }
    let [cil] = rest else {
        return Err(st.error_at(kind, "internal vertex needs one cil(...) list"));
    };
    let (head, args) = lexer::call(&cil.text)
        .filter(|(h, _)| *h == "cil")
        .ok_or_else(|| st.error_at(cil, "expected cil(...)"))?;
    debug_assert_eq!(head, "cil");
    let mut ends = Vec::with_capacity(args.len());
    for arg in args {
        let raw = if let Some(e) = arg.strip_suffix(".h") {
            RawEnd::Explicit(EdgeEnd::head(e))
        } else if let Some(e) = arg.strip_suffix(".t") {
            RawEnd::Explicit(EdgeEnd::tail(e))
        } else if let Some((e, v)) = arg.split_once('@') {
            if v != id.text {
                return Err(st.error_at(cil, format!("{arg} names vertex {v}, not {}", id.text)));
            }
            RawEnd::Attached(e.to_string())
        } else {
            RawEnd::Attached(arg.clone())
        };
        if arg.is_empty() {
            return Err(st.error_at(cil, "empty entry in cil"));
        }
        ends.push((raw, cil.clone()));
    }
    block.pending.push(PendingVertex {
        id: id.text.clone(),
        cil: ends,
        line: st.line,
    });
    Ok(())
}

/// An endpoint is a vertex id, optionally written `edge@vertex`.
fn endpoint(st: &Statement, edge: &Token, token: &Token) -> Result<String> {
    match token.text.split_once('@') {
        Some((e, v)) if e == edge.text && !v.is_empty() => Ok(v.to_string()),
        Some(_) => Err(st.error_at(token, format!("endpoint must be {}@VERTEX", edge.text))),
        None => Ok(token.text.clone()),
    }
}

fn declare_edge(block: &mut Block, st: &Statement, id: &Token) -> Result<()> {
    check_id(st, id)?;
    if !block.edge_ids.insert(id.text.clone()) {
        return Err(st.error_at(id, format!("duplicate edge {}", id.text)));
    }
    Ok(())
}

fn edge(block: &mut Block, st: &Statement) -> Result<()> {
    let [_, id, rest @ ..] = &st.tokens[..] else {
        return Err(st.error("expected edge ID TAIL HEAD"));
    };
    if rest.first().is_some_and(|t| t.text == "loop") {
        return free_loop(block, st, 1);
    }
    let [tail, head, marks @ ..] = rest else {
        return Err(st.error_at(id, "edge needs a tail and a head"));
    };
    declare_edge(block, st, id)?;
    let tail = endpoint(st, id, tail)?;
    let head = endpoint(st, id, head)?;
    let marking = parse_marks(st, marks)?;
    block.edges.push(Edge {
        id: id.text.clone(),
        endpoints: Endpoints::Attached { tail, head },
        marking,
    });
    Ok(())
}

/// `loop ID [mark ..]` or `edge ID loop [mark ..]`.
fn free_loop(block: &mut Block, st: &Statement, id_at: usize) -> Result<()> {
    let id = st
        .tokens
        .get(id_at)
        .ok_or_else(|| st.error("loop needs an id"))?;
    declare_edge(block, st, id)?;
    let mut rest = &st.tokens[id_at + 1..];
    if st.keyword() == "edge" {
        rest = &rest[1..];
    }
    let marking = parse_marks(st, rest)?;
    block.edges.push(Edge {
        id: id.text.clone(),
        endpoints: Endpoints::Loop,
        marking,
    });
    Ok(())
}

fn framing(block: &mut Block, st: &Statement, inputs: bool) -> Result<()> {
    let slot = if inputs {
        &mut block.inputs
    } else {
        &mut block.outputs
    };
    if slot.is_some() {
        return Err(st.error(format!("{} given twice", st.keyword())));
    }
    *slot = Some(
        st.tokens[1..]
            .iter()
            .map(|t| (t.text.clone(), t.clone()))
            .collect(),
    );
    block.framing_line = st.line;
    Ok(())
}

/// Canonical text of one diagram: vertices, then edges and loops by id, then
/// the framing. Ciliation ends are always written with `.h`/`.t`.
pub fn serialize_diagram(diagram: &TraceDiagram) -> String {
    let mut out = String::new();
    write_body(&mut out, diagram);
    out
}

fn write_body(out: &mut String, d: &TraceDiagram) {
    let _ = writeln!(out, "dim {}", d.n());
    for v in d.vertices() {
        match &v.kind {
            VertexKind::Leaf { vector: None } => {
                let _ = writeln!(out, "vertex {} leaf", v.id);
            }
            VertexKind::Leaf { vector: Some(l) } => {
                let _ = writeln!(out, "vertex {} leaf vec {l}", v.id);
            }
            VertexKind::Internal { ciliation } => {
                let ends: Vec<String> = ciliation.iter().map(ToString::to_string).collect();
                let _ = writeln!(out, "vertex {} internal cil({})", v.id, ends.join(", "));
            }
        }
    }
    for e in d.edges() {
        match &e.endpoints {
            Endpoints::Attached { tail, head } => {
                let _ = write!(out, "edge {} {tail} {head}", e.id);
            }
            Endpoints::Loop => {
                let _ = write!(out, "loop {}", e.id);
            }
        }
        if e.is_marked() {
            out.push_str(" mark");
            for m in &e.marking {
                let _ = write!(out, " {m}");
            }
        }
        out.push('\n');
    }
    if let Some(f) = d.framing() {
        for (kw, list) in [("inputs", &f.inputs), ("outputs", &f.outputs)] {
            out.push_str(kw);
            for leaf in list {
                let _ = write!(out, " {leaf}");
            }
            out.push('\n');
        }
    }
}

/// Canonical text of a set; entries appear in name order, separated by a
/// blank line.
pub fn serialize_diagram_set(set: &DiagramSet) -> String {
    let mut out = String::new();
    for (i, (name, entry)) in set.entries.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        match entry {
            Entry::Diagram(d) => {
                let _ = writeln!(out, "diagram {name}");
                write_body(&mut out, d);
            }
            Entry::Builtin(b) => {
                let _ = writeln!(out, "diagram {name} = {}", b.to_text());
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::binding::MatrixBinding;
    use crate::eval::{as_function_matrix, evaluate_closed};
    use crate::linalg::Matrix;
    use crate::scalar::int;

    fn dim(n: usize) -> Dimension {
        Dimension::new(n).unwrap()
    }

    #[test]
    fn free_loop_one_liner() {
        let d = parse_diagram("dim 2; edge e1 loop mark A;").unwrap();
        let e = d.edge("e1").unwrap();
        assert!(e.is_loop());
        assert_eq!(e.marking, vec![Mark::new("A")]);
        let b = MatrixBinding::new(dim(2))
            .with("A", Matrix::from_ints(&[[1, 2], [3, 4]]))
            .unwrap();
        assert_eq!(evaluate_closed(&d, &b).unwrap(), int(5));
    }

    #[test]
    fn trivalent_node_matches_library_cross_product() {
        let text = "
            dim 3
            vertex v internal cil(eu, ev, eo)
            vertex u leaf vec u
            vertex w leaf vec v
            vertex o leaf
            edge eu u v
            edge ev w v
            edge eo v o
            outputs o
        ";
        let d = parse_diagram(text).unwrap();
        assert_eq!(parse_diagram(&serialize_diagram(&d)).unwrap(), d);
        let lib = library::cross_product(dim(3), "u", "v").unwrap();
        let b = MatrixBinding::new(dim(3))
            .with_vector("u", vec![int(1), int(2), int(3)])
            .unwrap()
            .with_vector("v", vec![int(-1), int(0), int(4)])
            .unwrap();
        assert_eq!(
            as_function_matrix(&d, &b).unwrap(),
            as_function_matrix(&lib, &b).unwrap()
        );
    }

    #[test]
    fn builtin_reference_delegates() {
        let d = parse_diagram("builtin:det(A) @ dim 3").unwrap();
        assert_eq!(d, library::determinant_diagram(dim(3), "A"));
        let d = parse_diagram("dim 2\nbuiltin:trace(A, B)").unwrap();
        assert_eq!(d, library::trace_loop(dim(2), crate::diagram::word(&["A", "B"])));
    }

    #[test]
    fn serialization_is_canonical() {
        let a = parse_diagram(
            "dim 2; vertex z leaf; vertex a leaf; edge s a z mark B A^T; loop k mark A\ninputs a\noutputs z",
        )
        .unwrap();
        let text = serialize_diagram(&a);
        assert_eq!(
            text,
            "dim 2\nvertex a leaf\nvertex z leaf\nloop k mark A\nedge s a z mark B A^T\ninputs a\noutputs z\n"
        );
        assert_eq!(serialize_diagram(&parse_diagram(&text).unwrap()), text);
    }

    #[test]
    fn sets_round_trip_with_builtins() {
        let text = "dim 3\ndiagram t\nedge l loop mark A\ndiagram d = builtin:det(A)\ndiagram x\ndim 2\nbuiltin:antisym(2)\n";
        let set = parse_diagram_set(text).unwrap();
        assert_eq!(set.names().collect::<Vec<_>>(), ["d", "t", "x"]);
        assert_eq!(set.get("x").unwrap().len(), 2);
        let out = serialize_diagram_set(&set);
        assert_eq!(parse_diagram_set(&out).unwrap(), set);
        assert!(out.contains("diagram d = builtin:det(A) @ dim 3\n"));
        assert_eq!(set.default_name(), None);
    }

    #[test]
    fn framing_accepts_leaf_edges_and_empty_lists() {
        let d = parse_diagram("dim 2; vertex p leaf; vertex q leaf; edge c p q; inputs; outputs q").unwrap();
        assert_eq!(d.framing().unwrap(), &Framing::new(vec![], vec!["q".into()]));
        let d = parse_diagram("dim 1; vertex p leaf; vertex v internal cil(c); edge c p v; inputs c").unwrap();
        assert_eq!(d.inputs(), ["p".to_string()]);
        let err = parse_diagram("dim 2; vertex p leaf; vertex q leaf; edge c p q; inputs c").unwrap_err();
        assert!(matches!(err, Error::Parse { column: 57, .. }), "{err}");
        let closed = parse_diagram("dim 2; loop l; inputs; outputs").unwrap();
        assert_eq!(closed.framing(), Some(&Framing::default()));
    }

    #[test]
    fn self_loops_need_explicit_ends() {
        let err = parse_diagram("dim 2; vertex v internal cil(a, a); edge a v v").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }), "{err}");
        let d = parse_diagram("dim 2; vertex v internal cil(a.t, a.h); edge a v v").unwrap();
        assert!(d.validate().is_empty());
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let cases = [
            ("dim 2\nvertex v sideways", 2, 10),
            ("dim 2\nedge e1 loop mark A\nedge e1 loop", 3, 6),
            ("dim x", 1, 5),
            ("dim 2\nvertex v internal cil(q)", 2, 19),
            ("dim 2\nfrob", 2, 1),
            ("dim 2\nedge e a b mark A*", 2, 17),
        ];
        for (text, line, column) in cases {
            match parse_diagram(text) {
                Err(Error::Parse { line: l, column: c, .. }) => {
                    assert_eq!((l, c), (line, column), "{text:?}")
                }
                other => panic!("{text:?}: {other:?}"),
            }
        }
    }

    #[test]
    fn structural_problems_are_left_to_validation() {
        let d = parse_diagram("dim 3; vertex v internal cil(a.h); vertex x leaf; edge a x v").unwrap();
        assert!(!d.validate().is_empty());
    }
}
