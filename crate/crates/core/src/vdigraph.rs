//! Oriented V-graphs: vertices labelled by real values, edges oriented
//! towards the larger label.
//!
//! Isomorphism here preserves adjacency (with multiplicity), edge direction
//! and the complete order pattern of the labels, ties included.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::{Axis, Point};

/// Label differences at or below this are treated as ties.
pub const TIE_TOLERANCE: f64 = 1e-8;

/// The boundary feature that produced a vertex.
#[derive(Debug, Clone, PartialEq)]
pub enum Provenance {
    Pole { circle: String, point: Point },
    Corner { circles: [String; 2], point: Point },
    RegularPole { circle: String, point: Point },
}

impl Provenance {
    pub fn point(&self) -> Point {
        match self {
            Provenance::Pole { point, .. }
            | Provenance::Corner { point, .. }
            | Provenance::RegularPole { point, .. } => *point,
        }
    }

    pub fn circles(&self) -> Vec<&str> {
        match self {
            Provenance::Pole { circle, .. } | Provenance::RegularPole { circle, .. } => vec![circle],
            Provenance::Corner { circles, .. } => circles.iter().map(String::as_str).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Vertex {
    pub id: String,
    pub value: f64,
    pub provenance: Vec<Provenance>,
    /// Degree as written in a graph file; `None` for computed graphs.
    pub declared_degree: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge {
    pub src: usize,
    pub dst: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VDigraph {
    pub axis: Axis,
    pub vertices: Vec<Vertex>,
    pub edges: Vec<Edge>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GraphCheck {
    NoLoops,
    Orientation,
    Connected,
    Degrees,
    EdgeEndpoints,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvariantReport {
    pub ok: bool,
    pub failures: Vec<(GraphCheck, String)>,
}

impl InvariantReport {
    pub fn failed(&self, check: GraphCheck) -> bool {
        self.failures.iter().any(|(c, _)| *c == check)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IsoResult {
    pub isomorphic: bool,
    /// `witness[i]` is the vertex of the second graph matched to vertex `i`.
    pub witness: Option<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GraphError {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("bad anchor: {0}")]
    BadAnchor(String),
    #[error("label order violation: {0}")]
    LabelOrderViolation(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LeafDirection {
    Below,
    Above,
}

/// Local edits of a V-digraph.
#[derive(Debug, Clone, PartialEq)]
pub enum Rewrite {
    /// Insert vertices with the given increasing labels into the interior of
    /// an edge. Edge `edge` becomes the first segment; the rest are appended.
    SubdivideEdge { edge: usize, values: Vec<f64> },
    AttachLeaf {
        at: usize,
        direction: LeafDirection,
        value: f64,
    },
    /// Relabel a degree-one vertex and hang two new leaves on its free side.
    SplitLeaf {
        vertex: usize,
        new_value: f64,
        leaf_values: [f64; 2],
    },
    /// Subdivide two edges incident to `vertex` and relabel it.
    SplitAtVertex {
        vertex: usize,
        edges: [usize; 2],
        values: [f64; 2],
        new_value: f64,
    },
    /// Move the `from` endpoint of each listed edge onto `to`.
    ReattachEdges {
        edges: Vec<usize>,
        from: usize,
        to: usize,
    },
    RelabelVertex { vertex: usize, value: f64 },
}

impl VDigraph {
    pub fn new(axis: Axis) -> Self {
        VDigraph {
            axis,
            vertices: Vec::new(),
            edges: Vec::new(),
        }
    }

    pub fn add_vertex(&mut self, value: f64) -> usize {
        let ix = self.vertices.len();
        self.vertices.push(Vertex {
            id: format!("v{ix}"),
            value,
            provenance: Vec::new(),
            declared_degree: None,
        });
        ix
    }

    pub fn add_edge(&mut self, src: usize, dst: usize) -> usize {
        self.edges.push(Edge { src, dst });
        self.edges.len() - 1
    }

    pub fn value(&self, v: usize) -> f64 {
        self.vertices[v].value
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges
            .iter()
            .map(|e| usize::from(e.src == v) + usize::from(e.dst == v))
            .sum()
    }

    pub fn in_edges(&self, v: usize) -> Vec<usize> {
        (0..self.edges.len()).filter(|&e| self.edges[e].dst == v).collect()
    }

    pub fn out_edges(&self, v: usize) -> Vec<usize> {
        (0..self.edges.len()).filter(|&e| self.edges[e].src == v).collect()
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v.id == id)
    }

    /// Number of edges whose open value range contains `t`.
    pub fn edges_crossing(&self, t: f64) -> usize {
        self.edges
            .iter()
            .filter(|e| self.value(e.src) < t && t < self.value(e.dst))
            .count()
    }

    /// Mirror image under negation of all labels (edges flip direction).
    pub fn negated(&self) -> VDigraph {
        let mut g = self.clone();
        for v in &mut g.vertices {
            v.value = -v.value;
        }
        for e in &mut g.edges {
            std::mem::swap(&mut e.src, &mut e.dst);
        }
        g
    }

    pub fn check_invariants(&self) -> InvariantReport {
        let n = self.vertices.len();
        let mut failures = Vec::new();
        for (i, e) in self.edges.iter().enumerate() {
            if e.src >= n || e.dst >= n {
                failures.push((GraphCheck::EdgeEndpoints, format!("edge {i} references a missing vertex")));
                continue;
            }
            if e.src == e.dst {
                failures.push((GraphCheck::NoLoops, format!("edge {i} is a loop at {}", self.vertices[e.src].id)));
            } else if self.value(e.dst) <= self.value(e.src) {
                failures.push((
                    GraphCheck::Orientation,
                    format!(
                        "edge {i} {}->{} does not increase ({} -> {})",
                        self.vertices[e.src].id,
                        self.vertices[e.dst].id,
                        self.value(e.src),
                        self.value(e.dst)
                    ),
                ));
            }
        }
        if failures.iter().any(|(c, _)| *c == GraphCheck::EdgeEndpoints) {
            return InvariantReport { ok: false, failures };
        }
        if n > 0 && !self.is_connected() {
            failures.push((GraphCheck::Connected, "graph is disconnected".into()));
        }
        for (i, v) in self.vertices.iter().enumerate() {
            if let Some(d) = v.declared_degree {
                let actual = self.degree(i);
                if d != actual {
                    failures.push((GraphCheck::Degrees, format!("{} declares degree {d}, has {actual}", v.id)));
                }
            }
        }
        InvariantReport {
            ok: failures.is_empty(),
            failures,
        }
    }

    fn is_connected(&self) -> bool {
        let n = self.vertices.len();
        let mut adj = vec![Vec::new(); n];
        for e in &self.edges {
            adj[e.src].push(e.dst);
            adj[e.dst].push(e.src);
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(u) = stack.pop() {
            for &w in &adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Applies a rewrite in place, returning the indices of new vertices.
    pub fn rewrite(&mut self, r: &Rewrite) -> Result<Vec<usize>, GraphError> {
        let mut work = self.clone();
        let created = work.rewrite_unchecked(r)?;
        let report = work.check_invariants();
        if let Some((check, detail)) = report.failures.first() {
            return Err(match check {
                GraphCheck::Orientation | GraphCheck::NoLoops => GraphError::LabelOrderViolation(detail.clone()),
                _ => GraphError::BadAnchor(detail.clone()),
            });
        }
        *self = work;
        Ok(created)
    }

    fn vertex_checked(&self, v: usize) -> Result<(), GraphError> {
        if v < self.vertices.len() {
            Ok(())
        } else {
            Err(GraphError::BadAnchor(format!("no vertex {v}")))
        }
    }

    fn edge_checked(&self, e: usize) -> Result<Edge, GraphError> {
        self.edges
            .get(e)
            .copied()
            .ok_or_else(|| GraphError::BadAnchor(format!("no edge {e}")))
    }

    fn rewrite_unchecked(&mut self, r: &Rewrite) -> Result<Vec<usize>, GraphError> {
        match r {
            Rewrite::SubdivideEdge { edge, values } => {
                let Edge { src, dst } = self.edge_checked(*edge)?;
                let mut prev = self.value(src);
                for &v in values {
                    if !(v > prev && v < self.value(dst)) {
                        return Err(GraphError::LabelOrderViolation(format!(
                            "subdivision label {v} not strictly inside ({}, {}) in order",
                            self.value(src),
                            self.value(dst)
                        )));
                    }
                    prev = v;
                }
                let created: Vec<usize> = values.iter().map(|&v| self.add_vertex(v)).collect();
                let mut chain = vec![src];
                chain.extend(&created);
                chain.push(dst);
                self.edges[*edge] = Edge {
                    src: chain[0],
                    dst: chain[1],
                };
                for w in chain.windows(2).skip(1) {
                    self.add_edge(w[0], w[1]);
                }
                Ok(created)
            }
            Rewrite::AttachLeaf { at, direction, value } => {
                self.vertex_checked(*at)?;
                let base = self.value(*at);
                let ok = match direction {
                    LeafDirection::Below => *value < base,
                    LeafDirection::Above => *value > base,
                };
                if !ok {
                    return Err(GraphError::LabelOrderViolation(format!(
                        "leaf label {value} is not {direction:?} {base}"
                    )));
                }
                let leaf = self.add_vertex(*value);
                match direction {
                    LeafDirection::Below => self.add_edge(leaf, *at),
                    LeafDirection::Above => self.add_edge(*at, leaf),
                };
                Ok(vec![leaf])
            }
            Rewrite::SplitLeaf {
                vertex,
                new_value,
                leaf_values,
            } => {
                self.vertex_checked(*vertex)?;
                if self.degree(*vertex) != 1 {
                    return Err(GraphError::BadAnchor(format!(
                        "{} has degree {}, expected a leaf",
                        self.vertices[*vertex].id,
                        self.degree(*vertex)
                    )));
                }
                // The free side is opposite to the existing edge.
                let direction = if self.in_edges(*vertex).is_empty() {
                    LeafDirection::Below
                } else {
                    LeafDirection::Above
                };
                self.vertices[*vertex].value = *new_value;
                let mut created = Vec::new();
                for &lv in leaf_values {
                    created.extend(self.rewrite_unchecked(&Rewrite::AttachLeaf {
                        at: *vertex,
                        direction,
                        value: lv,
                    })?);
                }
                Ok(created)
            }
            Rewrite::SplitAtVertex {
                vertex,
                edges,
                values,
                new_value,
            } => {
                self.vertex_checked(*vertex)?;
                if edges[0] == edges[1] {
                    return Err(GraphError::BadAnchor("the two edges must differ".into()));
                }
                for &e in edges {
                    let Edge { src, dst } = self.edge_checked(e)?;
                    if src != *vertex && dst != *vertex {
                        return Err(GraphError::BadAnchor(format!("edge {e} is not incident to vertex {vertex}")));
                    }
                }
                self.vertices[*vertex].value = *new_value;
                let mut created = Vec::new();
                for (&e, &v) in edges.iter().zip(values) {
                    created.extend(self.rewrite_unchecked(&Rewrite::SubdivideEdge {
                        edge: e,
                        values: vec![v],
                    })?);
                }
                Ok(created)
            }
            Rewrite::ReattachEdges { edges, from, to } => {
                self.vertex_checked(*from)?;
                self.vertex_checked(*to)?;
                for &e in edges {
                    let mut edge = self.edge_checked(e)?;
                    if edge.src == *from {
                        edge.src = *to;
                    } else if edge.dst == *from {
                        edge.dst = *to;
                    } else {
                        return Err(GraphError::BadAnchor(format!("edge {e} is not incident to vertex {from}")));
                    }
                    self.edges[e] = edge;
                }
                Ok(Vec::new())
            }
            Rewrite::RelabelVertex { vertex, value } => {
                self.vertex_checked(*vertex)?;
                self.vertices[*vertex].value = *value;
                Ok(Vec::new())
            }
        }
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph reeb {\n  rankdir=LR;\n");
        for v in &self.vertices {
            let _ = writeln!(out, "  {} [label=\"{}\\n{}\"];", v.id, v.id, v.value);
        }
        for e in &self.edges {
            let _ = writeln!(out, "  {} -> {};", self.vertices[e.src].id, self.vertices[e.dst].id);
        }
        out.push_str("}\n");
        out
    }
}

/// Applies a rewrite to a copy of `g`.
pub fn apply_rewrite(g: &VDigraph, r: &Rewrite) -> Result<VDigraph, GraphError> {
    let mut out = g.clone();
    out.rewrite(r)?;
    Ok(out)
}

pub fn check_invariants(g: &VDigraph) -> InvariantReport {
    g.check_invariants()
}

pub fn isomorphic(g1: &VDigraph, g2: &VDigraph) -> Result<IsoResult, GraphError> {
    isomorphic_with_tolerance(g1, g2, TIE_TOLERANCE)
}

/// Groups vertex indices into runs of tied labels, in increasing order.
fn tie_groups(g: &VDigraph, tol: f64) -> Vec<Vec<usize>> {
    let mut order: Vec<usize> = (0..g.vertices.len()).collect();
    order.sort_by(|&a, &b| g.value(a).total_cmp(&g.value(b)));
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for v in order {
        match groups.last_mut() {
            Some(last) if g.value(v) - g.value(*last.last().unwrap()) <= tol => last.push(v),
            _ => groups.push(vec![v]),
        }
    }
    groups
}

pub fn isomorphic_with_tolerance(g1: &VDigraph, g2: &VDigraph, tol: f64) -> Result<IsoResult, GraphError> {
    for (name, g) in [("first", g1), ("second", g2)] {
        let report = g.check_invariants();
        if !report.ok {
            return Err(GraphError::InvalidGraph(format!("{name} graph: {:?}", report.failures)));
        }
    }
    let no = IsoResult {
        isomorphic: false,
        witness: None,
    };
    if g1.vertices.len() != g2.vertices.len() || g1.edges.len() != g2.edges.len() {
        return Ok(no);
    }
    let groups1 = tie_groups(g1, tol);
    let groups2 = tie_groups(g2, tol);
    if groups1.len() != groups2.len() || groups1.iter().zip(&groups2).any(|(a, b)| a.len() != b.len()) {
        return Ok(no);
    }
    let m1 = multiplicities(g1);
    let m2 = multiplicities(g2);
    let order: Vec<usize> = groups1.iter().flatten().copied().collect();
    let mut group_of1 = vec![0; g1.vertices.len()];
    for (gi, grp) in groups1.iter().enumerate() {
        for &v in grp {
            group_of1[v] = gi;
        }
    }
    let mut search = IsoSearch {
        g1,
        g2,
        m1: &m1,
        m2: &m2,
        groups2: &groups2,
        group_of1: &group_of1,
        order: &order,
        map: vec![usize::MAX; g1.vertices.len()],
        used: vec![false; g2.vertices.len()],
    };
    if search.extend(0) {
        Ok(IsoResult {
            isomorphic: true,
            witness: Some(search.map),
        })
    } else {
        Ok(no)
    }
}

fn multiplicities(g: &VDigraph) -> BTreeMap<(usize, usize), usize> {
    let mut m = BTreeMap::new();
    for e in &g.edges {
        *m.entry((e.src, e.dst)).or_insert(0) += 1;
    }
    m
}

struct IsoSearch<'a> {
    g1: &'a VDigraph,
    g2: &'a VDigraph,
    m1: &'a BTreeMap<(usize, usize), usize>,
    m2: &'a BTreeMap<(usize, usize), usize>,
    groups2: &'a [Vec<usize>],
    group_of1: &'a [usize],
    order: &'a [usize],
    map: Vec<usize>,
    used: Vec<bool>,
}

impl IsoSearch<'_> {
    fn extend(&mut self, depth: usize) -> bool {
        if depth == self.order.len() {
            return true;
        }
        let u = self.order[depth];
        let candidates = self.groups2[self.group_of1[u]].clone();
        for w in candidates {
            if self.used[w] || !self.compatible(u, w) {
                continue;
            }
            self.map[u] = w;
            self.used[w] = true;
            if self.extend(depth + 1) {
                return true;
            }
            self.map[u] = usize::MAX;
            self.used[w] = false;
        }
        false
    }

    fn compatible(&self, u: usize, w: usize) -> bool {
        if self.g1.in_edges(u).len() != self.g2.in_edges(w).len()
            || self.g1.out_edges(u).len() != self.g2.out_edges(w).len()
        {
            return false;
        }
        let count = |m: &BTreeMap<(usize, usize), usize>, a, b| m.get(&(a, b)).copied().unwrap_or(0);
        // u itself is not yet in `map`, so this only pairs u with mapped vertices.
        for (x, &y) in self.map.iter().enumerate() {
            if y == usize::MAX {
                continue;
            }
            if count(self.m1, u, x) != count(self.m2, w, y) || count(self.m1, x, u) != count(self.m2, y, w) {
                return false;
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn path(values: &[f64]) -> VDigraph {
        let mut g = VDigraph::new(Axis::X);
        for &v in values {
            g.add_vertex(v);
        }
        for i in 1..values.len() {
            g.add_edge(i - 1, i);
        }
        g
    }

    fn annulus_like() -> VDigraph {
        let mut g = path(&[-1.0, -0.5]);
        let c = g.add_vertex(0.5);
        let d = g.add_vertex(1.0);
        g.add_edge(1, c);
        g.add_edge(1, c);
        g.add_edge(c, d);
        g
    }

    #[test]
    fn invariant_checks() {
        assert!(path(&[-1.0, 1.0]).check_invariants().ok);

        let mut looped = path(&[-1.0, 1.0]);
        looped.add_edge(0, 0);
        assert!(looped.check_invariants().failed(GraphCheck::NoLoops));

        let mut backwards = VDigraph::new(Axis::X);
        backwards.add_vertex(1.0);
        backwards.add_vertex(0.0);
        backwards.add_edge(0, 1);
        assert!(backwards.check_invariants().failed(GraphCheck::Orientation));

        let mut lying = path(&[0.0, 1.0]);
        lying.vertices[0].declared_degree = Some(2);
        assert!(lying.check_invariants().failed(GraphCheck::Degrees));

        let mut split = path(&[0.0, 1.0]);
        split.add_vertex(3.0);
        assert!(split.check_invariants().failed(GraphCheck::Connected));
    }

    #[test]
    fn iso_examples() {
        assert!(isomorphic(&path(&[-1.0, 1.0]), &path(&[0.0, 5.0])).unwrap().isomorphic);
        assert!(!isomorphic(&path(&[-1.0, 1.0]), &annulus_like()).unwrap().isomorphic);

        let tied = {
            let mut g = path(&[0.0]);
            g.rewrite(&Rewrite::AttachLeaf { at: 0, direction: LeafDirection::Above, value: 1.0 }).unwrap();
            g.rewrite(&Rewrite::AttachLeaf { at: 0, direction: LeafDirection::Above, value: 1.0 }).unwrap();
            g
        };
        let distinct = {
            let mut g = path(&[0.0]);
            g.rewrite(&Rewrite::AttachLeaf { at: 0, direction: LeafDirection::Above, value: 1.0 }).unwrap();
            g.rewrite(&Rewrite::AttachLeaf { at: 0, direction: LeafDirection::Above, value: 2.0 }).unwrap();
            g
        };
        assert!(!isomorphic(&tied, &distinct).unwrap().isomorphic);
        assert!(isomorphic(&tied, &tied.clone()).unwrap().isomorphic);
    }

    #[test]
    fn iso_respects_parallel_edges() {
        let a = annulus_like();
        // same degrees, but the parallel pair replaced by a chain through a fresh vertex
        let mut b = path(&[-1.0, -0.5, 0.0, 0.5, 1.0]);
        b.add_edge(1, 3);
        assert!(!isomorphic(&a, &b).unwrap().isomorphic);
        let w = isomorphic(&a, &a.clone()).unwrap().witness.unwrap();
        assert_eq!(w, vec![0, 1, 2, 3]);
    }

    #[test]
    fn iso_rejects_invalid() {
        let mut bad = path(&[0.0, 1.0]);
        bad.add_edge(1, 0);
        assert!(matches!(isomorphic(&bad, &bad), Err(GraphError::InvalidGraph(_))));
    }

    #[test]
    fn split_leaf_example() {
        let g = path(&[-1.0, 1.0]);
        let out = apply_rewrite(
            &g,
            &Rewrite::SplitLeaf { vertex: 1, new_value: 0.6464466, leaf_values: [0.9375, 0.9375] },
        )
        .unwrap();
        assert_eq!(out.vertices.len(), 4);
        assert_eq!(out.degree(1), 3);
        assert!(out.check_invariants().ok);

        assert!(matches!(
            apply_rewrite(&path(&[-1.0, 0.0, 1.0]), &Rewrite::SplitLeaf { vertex: 1, new_value: 0.0, leaf_values: [0.5, 0.5] }),
            Err(GraphError::BadAnchor(_))
        ));
    }

    #[test]
    fn subdivide_example() {
        let out = apply_rewrite(&path(&[-1.0, 1.0]), &Rewrite::SubdivideEdge { edge: 0, values: vec![0.52, 0.68] }).unwrap();
        assert!(isomorphic(&out, &path(&[0.0, 1.0, 2.0, 3.0])).unwrap().isomorphic);
        assert!(matches!(
            apply_rewrite(&path(&[-1.0, 1.0]), &Rewrite::SubdivideEdge { edge: 0, values: vec![0.68, 0.52] }),
            Err(GraphError::LabelOrderViolation(_))
        ));
    }

    #[test]
    fn relabel_cannot_break_orientation() {
        let g = path(&[-1.0, 1.0]);
        assert!(matches!(
            apply_rewrite(&g, &Rewrite::RelabelVertex { vertex: 1, value: -2.0 }),
            Err(GraphError::LabelOrderViolation(_))
        ));
        let mut h = g.clone();
        assert!(h.rewrite(&Rewrite::RelabelVertex { vertex: 1, value: -2.0 }).is_err());
        assert_eq!(h, g);
    }

    #[test]
    fn reattach_and_split_at_vertex() {
        let mut g = annulus_like();
        let ins = g.in_edges(2);
        let created = g
            .rewrite(&Rewrite::SplitAtVertex { vertex: 2, edges: [ins[0], ins[1]], values: [0.4, 0.4], new_value: 0.6 })
            .unwrap();
        assert_eq!(created.len(), 2);
        assert_eq!(g.value(2), 0.6);
        let e = g.in_edges(created[1])[0];
        g.rewrite(&Rewrite::ReattachEdges { edges: vec![e], from: created[1], to: created[0] }).unwrap();
        assert_eq!(g.degree(created[0]), 3);
        assert_eq!(g.degree(created[1]), 1);
    }

    #[test]
    fn negation_flips_edges() {
        let g = path(&[-1.0, 2.0]);
        let n = g.negated();
        assert!(n.check_invariants().ok);
        assert_eq!(n.edges[0], Edge { src: 1, dst: 0 });
    }

    #[test]
    fn dot_output() {
        let dot = path(&[-1.0, 1.0]).to_dot();
        assert!(dot.contains("v0 -> v1;"));
        assert!(dot.contains("label=\"v0\\n-1\""));
    }
}
