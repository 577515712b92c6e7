use std::collections::{HashMap, HashSet};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeId(pub usize);

/// One of the two ends of an edge. `Low` sits at coordinate 0, which is the
/// endpoint that comes first in the vertex ordering.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum End {
    Low,
    High,
}

impl End {
    pub const BOTH: [End; 2] = [End::Low, End::High];

    pub fn index(self) -> usize {
        match self {
            End::Low => 0,
            End::High => 1,
        }
    }

    pub fn other(self) -> End {
        match self {
            End::Low => End::High,
            End::High => End::Low,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub name: String,
    /// Endpoint at coordinate 0 (earlier in the vertex ordering).
    pub low: VertexId,
    /// Endpoint at coordinate 1.
    pub high: VertexId,
}

impl Edge {
    pub fn endpoint(&self, end: End) -> VertexId {
        match end {
            End::Low => self.low,
            End::High => self.high,
        }
    }

    /// The end of this edge that touches `v`, if any.
    pub fn end_at(&self, v: VertexId) -> Option<End> {
        if self.low == v {
            Some(End::Low)
        } else if self.high == v {
            Some(End::High)
        } else {
            None
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("duplicate vertex `{0}`")]
    DuplicateVertex(String),
    #[error("duplicate edge id `{0}`")]
    DuplicateEdge(String),
    #[error("edge `{edge}` references unknown vertex `{vertex}`")]
    UnknownVertex { edge: String, vertex: String },
    #[error("edge `{0}` is a loop")]
    SelfLoop(String),
    #[error("edges `{0}` and `{1}` are parallel")]
    ParallelEdge(String, String),
    #[error("graph has no edges")]
    NoEdges,
    #[error("graph is not connected")]
    Disconnected,
}

/// Simple connected undirected graph. The order of `vertices` is the fixed
/// global ordering that orients every edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    vertices: Vec<String>,
    edges: Vec<Edge>,
    incident: Vec<Vec<EdgeId>>,
}

impl Graph {
    /// Builds a graph from vertex names (in order) and `(edge, u, v)` triples.
    pub fn new<S: AsRef<str>>(vertices: &[S], edges: &[(S, S, S)]) -> Result<Graph, GraphError> {
        let mut index = HashMap::new();
        let mut names = Vec::with_capacity(vertices.len());
        for (i, v) in vertices.iter().enumerate() {
            let v = v.as_ref().to_string();
            if index.insert(v.clone(), i).is_some() {
                return Err(GraphError::DuplicateVertex(v));
            }
            names.push(v);
        }
        let mut seen_ids = HashSet::new();
        let mut seen_pairs: HashMap<(usize, usize), String> = HashMap::new();
        let mut out = Vec::with_capacity(edges.len());
        for (id, u, v) in edges {
            let id = id.as_ref().to_string();
            if !seen_ids.insert(id.clone()) {
                return Err(GraphError::DuplicateEdge(id));
            }
            let lookup = |name: &str| {
                index.get(name).copied().ok_or_else(|| GraphError::UnknownVertex {
                    edge: id.clone(),
                    vertex: name.to_string(),
                })
            };
            let a = lookup(u.as_ref())?;
            let b = lookup(v.as_ref())?;
            if a == b {
                return Err(GraphError::SelfLoop(id));
            }
            let key = (a.min(b), a.max(b));
            if let Some(prev) = seen_pairs.get(&key) {
                return Err(GraphError::ParallelEdge(prev.clone(), id));
            }
            seen_pairs.insert(key, id.clone());
            out.push(Edge {
                name: id,
                low: VertexId(key.0),
                high: VertexId(key.1),
            });
        }
        if out.is_empty() {
            return Err(GraphError::NoEdges);
        }
        let mut incident = vec![Vec::new(); names.len()];
        for (i, e) in out.iter().enumerate() {
            incident[e.low.0].push(EdgeId(i));
            incident[e.high.0].push(EdgeId(i));
        }
        let g = Graph {
            vertices: names,
            edges: out,
            incident,
        };
        if !g.is_connected() {
            return Err(GraphError::Disconnected);
        }
        Ok(g)
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vertices[v.0]
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.vertices
    }

    pub fn edge(&self, e: EdgeId) -> &Edge {
        &self.edges[e.0]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> {
        (0..self.edges.len()).map(EdgeId)
    }

    pub fn vertex_ids(&self) -> impl Iterator<Item = VertexId> {
        (0..self.vertices.len()).map(VertexId)
    }

    pub fn edge_by_name(&self, name: &str) -> Option<EdgeId> {
        self.edges.iter().position(|e| e.name == name).map(EdgeId)
    }

    pub fn incident(&self, v: VertexId) -> &[EdgeId] {
        &self.incident[v.0]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.incident[v.0].len()
    }

    pub fn max_degree(&self) -> usize {
        self.incident.iter().map(Vec::len).max().unwrap_or(0)
    }

    fn is_connected(&self) -> bool {
        let all: Vec<EdgeId> = self.edge_ids().collect();
        self.vertex_components(&all).len() == 1
    }

    pub fn is_tree(&self) -> bool {
        self.edges.len() + 1 == self.vertices.len()
    }

    /// A connected graph where every vertex has degree two.
    pub fn is_cycle(&self) -> bool {
        self.vertices.len() >= 3 && self.incident.iter().all(|inc| inc.len() == 2)
    }

    /// Connected components of `(V, kept)`, each as a sorted vertex list.
    /// Components are ordered by their smallest vertex.
    pub fn vertex_components(&self, kept: &[EdgeId]) -> Vec<Vec<VertexId>> {
        let mut dsu = Dsu::new(self.vertices.len());
        for e in kept {
            let edge = &self.edges[e.0];
            dsu.union(edge.low.0, edge.high.0);
        }
        let mut groups: Vec<Vec<VertexId>> = Vec::new();
        let mut slot: HashMap<usize, usize> = HashMap::new();
        for v in 0..self.vertices.len() {
            let root = dsu.find(v);
            let idx = *slot.entry(root).or_insert_with(|| {
                groups.push(Vec::new());
                groups.len() - 1
            });
            groups[idx].push(VertexId(v));
        }
        groups
    }

    /// Whether `vertices` all lie in one component of the subgraph formed by
    /// `edges`. An empty vertex set counts as connected.
    pub fn connects(&self, edges: &[EdgeId], vertices: &[VertexId]) -> bool {
        let mut dsu = Dsu::new(self.vertices.len());
        for e in edges {
            let edge = &self.edges[e.0];
            dsu.union(edge.low.0, edge.high.0);
        }
        match vertices.split_first() {
            None => true,
            Some((first, rest)) => {
                let root = dsu.find(first.0);
                rest.iter().all(|v| dsu.find(v.0) == root)
            }
        }
    }
}

/// Small union-find used for connectivity checks.
#[derive(Debug, Clone)]
pub struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    pub fn new(n: usize) -> Dsu {
        Dsu {
            parent: (0..n).collect(),
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb);
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path3() -> Graph {
        Graph::new(&["v1", "v2", "v3"], &[("e1", "v1", "v2"), ("e2", "v2", "v3")]).unwrap()
    }

    #[test]
    fn orientation_follows_vertex_order() {
        let g = Graph::new(&["a", "b"], &[("e", "b", "a")]).unwrap();
        let e = g.edge(EdgeId(0));
        assert_eq!(g.vertex_name(e.low), "a");
        assert_eq!(g.vertex_name(e.high), "b");
    }

    #[test]
    fn rejects_invalid_graphs() {
        assert_eq!(
            Graph::new(&["a", "b", "c", "d"], &[("e", "a", "b"), ("f", "c", "d")]),
            Err(GraphError::Disconnected)
        );
        assert!(matches!(
            Graph::new(&["a", "b"], &[("e", "a", "b"), ("f", "b", "a")]),
            Err(GraphError::ParallelEdge(..))
        ));
        assert!(matches!(
            Graph::new(&["a", "b"], &[("e", "a", "a")]),
            Err(GraphError::SelfLoop(_))
        ));
        assert!(matches!(
            Graph::new(&["a", "b"], &[("e", "a", "b"), ("e", "a", "b")]),
            Err(GraphError::DuplicateEdge(_))
        ));
        assert!(matches!(
            Graph::new(&["a", "b"], &[("e", "a", "x")]),
            Err(GraphError::UnknownVertex { .. })
        ));
    }

    #[test]
    fn shape_predicates() {
        let p = path3();
        assert!(p.is_tree());
        assert!(!p.is_cycle());
        let tri = Graph::new(
            &["a", "b", "c"],
            &[("e1", "a", "b"), ("e2", "b", "c"), ("e3", "a", "c")],
        )
        .unwrap();
        assert!(tri.is_cycle());
        assert!(!tri.is_tree());
        assert_eq!(tri.max_degree(), 2);
    }

    #[test]
    fn components_after_removal() {
        let p = path3();
        let comps = p.vertex_components(&[EdgeId(0)]);
        assert_eq!(comps, vec![vec![VertexId(0), VertexId(1)], vec![VertexId(2)]]);
        assert!(p.connects(&[EdgeId(0)], &[VertexId(0), VertexId(1)]));
        assert!(!p.connects(&[EdgeId(0)], &[VertexId(0), VertexId(2)]));
    }
}
