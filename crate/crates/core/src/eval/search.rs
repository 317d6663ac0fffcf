//! Backtracking enumeration of admissible colorings.
//!
//! Every edge contributes a head variable and a tail variable; the two are
//! the same variable when the edge is unmarked or a free loop. Variables are
//! assigned in canonical edge order (head first), and a value is rejected as
//! soon as it repeats a label at an internal vertex or hits a forbidden pair.

use std::collections::BTreeMap;

use crate::diagram::{End, EdgeEnd, Endpoints, TraceDiagram, VertexId, VertexKind};
use crate::error::Result;

pub(crate) type Var = usize;

#[derive(Debug, Clone)]
pub(crate) struct EdgeVars {
    pub head: Var,
    pub tail: Var,
}

#[derive(Debug, Clone)]
pub(crate) struct Plan {
    pub n: usize,
    pub edge_ids: Vec<String>,
    pub edge_vars: Vec<EdgeVars>,
    /// Internal vertices: id and the variable sitting in each ciliation slot.
    pub vertices: Vec<(VertexId, Vec<Var>)>,
    /// For each variable, the internal vertices (by index) it occupies a slot at.
    pub var_slots: Vec<Vec<usize>>,
    pub leaf_vars: BTreeMap<VertexId, Var>,
    pub var_count: usize,
}

impl Plan {
    /// Assumes `diagram` has been validated.
    pub fn compile(diagram: &TraceDiagram) -> Result<Plan> {
        diagram.ensure_valid()?;
        let n = diagram.n();
        let mut edge_ids = Vec::new();
        let mut edge_vars = Vec::new();
        let mut end_var: BTreeMap<EdgeEnd, Var> = BTreeMap::new();
        let mut var_count = 0;
        for edge in diagram.edges() {
            let head = var_count;
            var_count += 1;
            let tail = if edge.is_marked() && !edge.is_loop() {
                var_count += 1;
                head + 1
            } else {
                head
            };
            end_var.insert(EdgeEnd::head(edge.id.clone()), head);
            end_var.insert(EdgeEnd::tail(edge.id.clone()), tail);
            edge_ids.push(edge.id.clone());
            edge_vars.push(EdgeVars { head, tail });
        }

        let mut vertices = Vec::new();
        let mut var_slots = vec![Vec::new(); var_count];
        for vertex in diagram.internal_vertices() {
            let VertexKind::Internal { ciliation } = &vertex.kind else {
                unreachable!()
            };
            let idx = vertices.len();
            let slots: Vec<Var> = ciliation.iter().map(|end| end_var[end]).collect();
            for &v in &slots {
                var_slots[v].push(idx);
            }
            vertices.push((vertex.id.clone(), slots));
        }

        let mut leaf_vars = BTreeMap::new();
        for edge in diagram.edges() {
            if let Endpoints::Attached { .. } = edge.endpoints {
                for end in [End::Head, End::Tail] {
                    let v = edge.vertex_at(end).unwrap();
                    if diagram.vertex(v).is_some_and(|x| x.is_leaf()) {
                        leaf_vars.insert(
                            v.clone(),
                            end_var[&EdgeEnd {
                                edge: edge.id.clone(),
                                end,
                            }],
                        );
                    }
                }
            }
        }

        Ok(Plan {
            n,
            edge_ids,
            edge_vars,
            vertices,
            var_slots,
            leaf_vars,
            var_count,
        })
    }

    /// Sign of the coloring given by `values` (0-based labels per variable).
    pub fn signature(&self, values: &[u8]) -> i32 {
        let mut sign = 1;
        for (_, slots) in &self.vertices {
            let mut inversions = 0usize;
            for i in 0..slots.len() {
                for j in i + 1..slots.len() {
                    if values[slots[i]] > values[slots[j]] {
                        inversions += 1;
                    }
                }
            }
            if inversions % 2 == 1 {
                sign = -sign;
            }
        }
        sign
    }
}

/// A forbidden combination of two variable values, checked when `later` is assigned.
/// `earlier` may equal `later` for single-variable restrictions.
#[derive(Debug, Clone)]
pub(crate) struct PairFilter {
    pub later: Var,
    pub earlier: Var,
    /// Indexed `[later_value * n + earlier_value]`.
    pub forbidden: Vec<bool>,
}

/// Lending iterator over complete assignments.
pub(crate) struct Search {
    n: usize,
    fixed: Vec<Option<u8>>,
    filters: Vec<Vec<PairFilter>>,
    values: Vec<u8>,
    next_value: Vec<u8>,
    masks: Vec<u64>,
    depth: usize,
    started: bool,
    exhausted: bool,
}

impl Search {
    pub fn new(plan: &Plan, fixed: Vec<Option<u8>>, filters: Vec<PairFilter>) -> Search {
        assert!(plan.n <= 64, "dimension above 64 is not supported");
        assert_eq!(fixed.len(), plan.var_count);
        let mut by_var = vec![Vec::new(); plan.var_count];
        for f in filters {
            debug_assert!(f.earlier <= f.later);
            by_var[f.later].push(f);
        }
        Search {
            n: plan.n,
            fixed,
            filters: by_var,
            values: vec![0; plan.var_count],
            next_value: vec![0; plan.var_count],
            masks: vec![0; plan.vertices.len()],
            depth: 0,
            started: false,
            exhausted: false,
        }
    }

    /// A search that yields nothing.
    pub fn exhausted(plan: &Plan) -> Search {
        let mut s = Search::new(plan, vec![None; plan.var_count], Vec::new());
        s.exhausted = true;
        s
    }

    pub fn values(&self) -> &[u8] {
        &self.values
    }

    fn try_assign(&mut self, plan: &Plan, var: Var, value: u8) -> bool {
        for f in &self.filters[var] {
            let earlier = if f.earlier == var {
                value
            } else {
                self.values[f.earlier]
            };
            if f.forbidden[value as usize * self.n + earlier as usize] {
                return false;
            }
        }
        let bit = 1u64 << value;
        let slots = &plan.var_slots[var];
        for (i, &vx) in slots.iter().enumerate() {
            if self.masks[vx] & bit != 0 {
                for &undo in &slots[..i] {
                    self.masks[undo] &= !bit;
                }
                return false;
            }
            self.masks[vx] |= bit;
        }
        self.values[var] = value;
        true
    }

    fn unassign(&mut self, plan: &Plan, var: Var) {
        let bit = 1u64 << self.values[var];
        for &vx in &plan.var_slots[var] {
            self.masks[vx] &= !bit;
        }
    }

    fn reset_level(&mut self, var: Var) {
        self.next_value[var] = self.fixed[var].unwrap_or(0);
    }

    /// Moves to the next complete admissible assignment.
    pub fn advance(&mut self, plan: &Plan) -> bool {
        if self.exhausted {
            return false;
        }
        let len = plan.var_count;
        if !self.started {
            self.started = true;
            if len == 0 {
                return true;
            }
            self.depth = 0;
            self.reset_level(0);
        } else {
            if len == 0 {
                self.exhausted = true;
                return false;
            }
            self.depth = len - 1;
            self.unassign(plan, self.depth);
        }

        loop {
            let var = self.depth;
            let limit = match self.fixed[var] {
                Some(f) => f + 1,
                None => self.n as u8,
            };
            let mut placed = false;
            while self.next_value[var] < limit {
                let value = self.next_value[var];
                self.next_value[var] += 1;
                if self.try_assign(plan, var, value) {
                    placed = true;
                    break;
                }
            }
            if placed {
                if var + 1 == len {
                    return true;
                }
                self.depth += 1;
                self.reset_level(self.depth);
            } else {
                if var == 0 {
                    self.exhausted = true;
                    return false;
                }
                self.depth -= 1;
                self.unassign(plan, self.depth);
            }
        }
    }
}
