//! The evolving tree: vertices keyed by id plus an undirected edge set.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{
    connection_cost, euclid_dist, segments_cross, Point, Segment, VertexId, VertexKind,
    WeightedVertex,
};

/// Undirected edge stored with its smaller id first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Edge(pub VertexId, pub VertexId);

impl Edge {
    pub fn new(u: VertexId, v: VertexId) -> Self {
        if u <= v {
            Edge(u, v)
        } else {
            Edge(v, u)
        }
    }

    pub fn other(self, v: VertexId) -> VertexId {
        if self.0 == v {
            self.1
        } else {
            self.0
        }
    }

    pub fn touches(self, v: VertexId) -> bool {
        self.0 == v || self.1 == v
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct TreeMetrics {
    pub weighted_length: f64,
    pub euclidean_length: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(into = "TreeRepr", try_from = "TreeRepr")]
pub struct PlaneTree {
    vertices: BTreeMap<VertexId, WeightedVertex>,
    edges: BTreeSet<Edge>,
    /// Ids are never reused, even after a vertex is removed.
    next_id: u32,
}

#[derive(Serialize, Deserialize)]
struct TreeRepr {
    vertices: Vec<WeightedVertex>,
    edges: Vec<Edge>,
}

impl From<PlaneTree> for TreeRepr {
    fn from(t: PlaneTree) -> Self {
        TreeRepr {
            vertices: t.vertices.into_values().collect(),
            edges: t.edges.into_iter().collect(),
        }
    }
}

impl TryFrom<TreeRepr> for PlaneTree {
    type Error = Error;

    fn try_from(r: TreeRepr) -> Result<Self> {
        let mut t = PlaneTree::from_vertices(r.vertices)?;
        for e in r.edges {
            t.add_edge(e.0, e.1);
        }
        Ok(t)
    }
}

impl PlaneTree {
    /// A tree with the given vertices and no edges. Ids must be unique.
    pub fn from_vertices(vertices: impl IntoIterator<Item = WeightedVertex>) -> Result<Self> {
        let mut tree = PlaneTree::default();
        for v in vertices {
            if tree.vertices.insert(v.id, v).is_some() {
                return Err(Error::InvalidInput(format!("duplicate vertex id {}", v.id)));
            }
            tree.next_id = tree.next_id.max(v.id.0 + 1);
        }
        Ok(tree)
    }

    pub fn vertex(&self, id: VertexId) -> &WeightedVertex {
        &self.vertices[&id]
    }

    pub fn get(&self, id: VertexId) -> Option<&WeightedVertex> {
        self.vertices.get(&id)
    }

    pub fn pos(&self, id: VertexId) -> Point {
        self.vertices[&id].pos
    }

    pub fn vertices(&self) -> impl Iterator<Item = &WeightedVertex> {
        self.vertices.values()
    }

    pub fn vertex_ids(&self) -> Vec<VertexId> {
        self.vertices.keys().copied().collect()
    }

    pub fn steiner_ids(&self) -> Vec<VertexId> {
        self.vertices
            .values()
            .filter(|v| v.is_steiner())
            .map(|v| v.id)
            .collect()
    }

    pub fn terminals(&self) -> impl Iterator<Item = &WeightedVertex> {
        self.vertices.values().filter(|v| !v.is_steiner())
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn steiner_count(&self) -> usize {
        self.vertices.values().filter(|v| v.is_steiner()).count()
    }

    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.edges.iter().copied()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.edges.contains(&Edge::new(u, v))
    }

    pub fn next_id(&self) -> VertexId {
        VertexId(self.next_id)
    }

    pub fn add_vertex(&mut self, v: WeightedVertex) {
        self.next_id = self.next_id.max(v.id.0 + 1);
        self.vertices.insert(v.id, v);
    }

    /// Appends a Steiner vertex with a fresh id.
    pub fn add_steiner(&mut self, pos: Point, weight: f64) -> VertexId {
        let id = self.next_id();
        self.next_id += 1;
        self.vertices.insert(
            id,
            WeightedVertex {
                id,
                pos,
                weight,
                kind: VertexKind::Steiner,
            },
        );
        id
    }

    /// Removes a vertex together with its incident edges.
    pub fn remove_vertex(&mut self, id: VertexId) {
        self.vertices.remove(&id);
        self.edges.retain(|e| !e.touches(id));
    }

    pub fn set_pos(&mut self, id: VertexId, pos: Point) {
        if let Some(v) = self.vertices.get_mut(&id) {
            v.pos = pos;
        }
    }

    pub fn set_weight(&mut self, id: VertexId, weight: f64) {
        if let Some(v) = self.vertices.get_mut(&id) {
            v.weight = weight;
        }
    }

    pub fn add_edge(&mut self, u: VertexId, v: VertexId) -> bool {
        u != v && self.edges.insert(Edge::new(u, v))
    }

    pub fn remove_edge(&mut self, u: VertexId, v: VertexId) -> bool {
        self.edges.remove(&Edge::new(u, v))
    }

    pub fn segment(&self, e: Edge) -> Segment {
        Segment::new(self.pos(e.0), self.pos(e.1))
    }

    pub fn edge_length(&self, e: Edge) -> f64 {
        euclid_dist(self.pos(e.0), self.pos(e.1))
    }

    pub fn edge_cost(&self, e: Edge) -> f64 {
        connection_cost(self.vertex(e.0), self.vertex(e.1))
    }

    /// Sorted neighbour lists for every vertex, isolated vertices included.
    pub fn adjacency(&self) -> BTreeMap<VertexId, Vec<VertexId>> {
        let mut adj: BTreeMap<VertexId, Vec<VertexId>> =
            self.vertices.keys().map(|&id| (id, Vec::new())).collect();
        for e in &self.edges {
            adj.entry(e.0).or_default().push(e.1);
            adj.entry(e.1).or_default().push(e.0);
        }
        for list in adj.values_mut() {
            list.sort_unstable();
        }
        adj
    }

    pub fn neighbors(&self, id: VertexId) -> Vec<VertexId> {
        let mut out: Vec<VertexId> = self
            .edges
            .iter()
            .filter(|e| e.touches(id))
            .map(|e| e.other(id))
            .collect();
        out.sort_unstable();
        out
    }

    pub fn degree(&self, id: VertexId) -> usize {
        self.edges.iter().filter(|e| e.touches(id)).count()
    }

    pub fn metrics(&self) -> TreeMetrics {
        tree_metrics(self)
    }

    /// Connected, acyclic, and every edge endpoint exists.
    pub fn is_spanning_tree(&self) -> bool {
        self.validate().is_ok()
    }

    pub fn validate(&self) -> Result<()> {
        for e in &self.edges {
            if e.0 == e.1 {
                return Err(Error::InvalidInput(format!("self-loop at {}", e.0)));
            }
            if !self.vertices.contains_key(&e.0) || !self.vertices.contains_key(&e.1) {
                return Err(Error::InvalidInput(format!("edge {:?} has a missing endpoint", e)));
            }
        }
        let n = self.vertices.len();
        if n == 0 {
            return Ok(());
        }
        if self.edges.len() != n - 1 {
            return Err(Error::InvalidInput(format!(
                "{} edges for {} vertices",
                self.edges.len(),
                n
            )));
        }
        let adj = self.adjacency();
        let start = *self.vertices.keys().next().unwrap();
        let mut seen = BTreeSet::from([start]);
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            for &w in &adj[&v] {
                if seen.insert(w) {
                    stack.push(w);
                }
            }
        }
        if seen.len() != n {
            return Err(Error::InvalidInput("tree is disconnected".into()));
        }
        Ok(())
    }

    /// All edge pairs that touch anywhere other than a shared endpoint.
    pub fn crossing_pairs(&self) -> Vec<(Edge, Edge)> {
        let edges: Vec<Edge> = self.edges.iter().copied().collect();
        let mut out = Vec::new();
        for (i, &e) in edges.iter().enumerate() {
            let se = self.segment(e);
            for &f in &edges[i + 1..] {
                if segments_cross(&se, &self.segment(f), true) {
                    out.push((e, f));
                }
            }
        }
        out
    }

    /// Whether a prospective segment between `u` and `v` would touch an
    /// existing edge other than at `u` or `v`. Edges in `ignore` are skipped.
    pub fn segment_blocked(&self, u: VertexId, v: VertexId, ignore: &[Edge]) -> bool {
        self.segment_blocked_at(self.pos(u), self.pos(v), u, v, ignore)
    }

    pub fn segment_blocked_at(
        &self,
        pu: Point,
        pv: Point,
        u: VertexId,
        v: VertexId,
        ignore: &[Edge],
    ) -> bool {
        let s = Segment::new(pu, pv);
        self.edges.iter().any(|e| {
            if ignore.contains(e) {
                return false;
            }
            let shares = e.touches(u) || e.touches(v);
            let other = Segment::new(
                if e.0 == u { pu } else if e.0 == v { pv } else { self.pos(e.0) },
                if e.1 == u { pu } else if e.1 == v { pv } else { self.pos(e.1) },
            );
            segments_cross(&s, &other, shares)
        })
    }

    pub fn bbox_diagonal(&self) -> f64 {
        let mut it = self.vertices.values().map(|v| v.pos);
        let Some(first) = it.next() else { return 0.0 };
        let (mut lo, mut hi) = (first, first);
        for p in it {
            lo = Point::new(lo.x.min(p.x), lo.y.min(p.y));
            hi = Point::new(hi.x.max(p.x), hi.y.max(p.y));
        }
        euclid_dist(lo, hi)
    }
}

/// Weighted and Euclidean total length.
pub fn tree_metrics(tree: &PlaneTree) -> TreeMetrics {
    tree.edges()
        .fold(TreeMetrics::default(), |acc, e| TreeMetrics {
            weighted_length: acc.weighted_length + tree.edge_cost(e),
            euclidean_length: acc.euclidean_length + tree.edge_length(e),
        })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> PlaneTree {
        let mut t = PlaneTree::from_vertices([
            WeightedVertex::terminal(0, 0.0, 0.0, 1.0),
            WeightedVertex::terminal(1, 1.0, 0.0, 1.0),
            WeightedVertex::terminal(2, 1.0, 1.0, 1.0),
            WeightedVertex::terminal(3, 0.0, 1.0, 1.0),
        ])
        .unwrap();
        t.add_edge(VertexId(0), VertexId(1));
        t.add_edge(VertexId(1), VertexId(2));
        t.add_edge(VertexId(2), VertexId(3));
        t
    }

    #[test]
    fn empty_edges_metrics_zero() {
        let t = PlaneTree::from_vertices([WeightedVertex::terminal(0, 1.0, 2.0, 3.0)]).unwrap();
        assert_eq!(t.metrics(), TreeMetrics::default());
        assert!(t.is_spanning_tree());
    }

    #[test]
    fn validate_detects_cycles_and_gaps() {
        let mut t = square();
        assert!(t.is_spanning_tree());
        t.add_edge(VertexId(3), VertexId(0));
        assert!(!t.is_spanning_tree());
        t.remove_edge(VertexId(1), VertexId(2));
        t.remove_edge(VertexId(3), VertexId(0));
        assert!(!t.is_spanning_tree());
    }

    #[test]
    fn crossing_scan_finds_diagonals() {
        let mut t = square();
        assert!(t.crossing_pairs().is_empty());
        t.remove_edge(VertexId(1), VertexId(2));
        t.add_edge(VertexId(0), VertexId(2));
        t.remove_edge(VertexId(2), VertexId(3));
        t.add_edge(VertexId(1), VertexId(3));
        assert_eq!(t.crossing_pairs().len(), 1);
    }

    #[test]
    fn steiner_ids_are_fresh() {
        let mut t = square();
        let s = t.add_steiner(Point::new(0.5, 0.5), 1.0);
        assert_eq!(s, VertexId(4));
        t.remove_vertex(VertexId(2));
        assert_eq!(t.next_id(), VertexId(5));
    }
}
