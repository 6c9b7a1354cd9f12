use crate::error::{Error, Result};
use std::collections::BTreeSet;

/// Finite simple graph over opaque string vertex identifiers.
///
/// Identifiers are sorted at construction and mapped to dense indices;
/// every index-based accessor refers to that sorted order. Self-loops,
/// duplicate edges and dangling endpoints are construction errors, and
/// isolated vertices are rejected unless explicitly permitted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGraph {
    names: Vec<String>,
    adj: Vec<Vec<usize>>,
    edges: usize,
}

impl FiniteGraph {
    pub fn from_parts<V, E>(vertices: V, edges: E, allow_isolated: bool) -> Result<Self>
    where
        V: IntoIterator<Item = String>,
        E: IntoIterator<Item = (String, String)>,
    {
        let mut names: Vec<String> = vertices.into_iter().collect();
        names.sort();
        for w in names.windows(2) {
            if w[0] == w[1] {
                return Err(Error::DuplicateVertex(w[0].clone()));
            }
        }
        let index = |name: &str| names.binary_search_by(|n| n.as_str().cmp(name)).ok();

        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); names.len()];
        let mut seen: BTreeSet<(usize, usize)> = BTreeSet::new();
        let mut count = 0usize;
        for (a, b) in edges {
            let u = index(&a).ok_or_else(|| Error::DanglingEndpoint(a.clone()))?;
            let v = index(&b).ok_or_else(|| Error::DanglingEndpoint(b.clone()))?;
            if u == v {
                return Err(Error::SelfLoop(a));
            }
            let key = (u.min(v), u.max(v));
            if !seen.insert(key) {
                return Err(Error::DuplicateEdge(a, b));
            }
            adj[u].push(v);
            adj[v].push(u);
            count += 1;
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        if !allow_isolated {
            if let Some(i) = adj.iter().position(|l| l.is_empty()) {
                return Err(Error::IsolatedVertex(names[i].clone()));
            }
        }
        Ok(FiniteGraph { names, adj, edges: count })
    }

    /// Builds a graph from named edges, inferring the vertex set.
    pub fn from_edges<'a, E>(edges: E) -> Result<Self>
    where
        E: IntoIterator<Item = (&'a str, &'a str)> + Clone,
    {
        let mut vertices = BTreeSet::new();
        for (a, b) in edges.clone() {
            vertices.insert(a.to_string());
            vertices.insert(b.to_string());
        }
        FiniteGraph::from_parts(
            vertices,
            edges.into_iter().map(|(a, b)| (a.to_string(), b.to_string())),
            false,
        )
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.names.binary_search_by(|n| n.as_str().cmp(name)).ok()
    }

    pub fn name(&self, idx: usize) -> &str {
        &self.names[idx]
    }

    pub fn contains(&self, name: &str) -> bool {
        self.index(name).is_some()
    }

    pub fn neighbours(&self, idx: usize) -> &[usize] {
        &self.adj[idx]
    }

    pub fn neighbour_names<'a>(&'a self, name: &str) -> Option<impl Iterator<Item = &'a str>> {
        let idx = self.index(name)?;
        Some(self.adj[idx].iter().map(move |&j| self.names[j].as_str()))
    }

    pub fn degree(&self, idx: usize) -> usize {
        self.adj[idx].len()
    }

    pub fn has_edge_idx(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    pub fn has_edge(&self, a: &str, b: &str) -> bool {
        match (self.index(a), self.index(b)) {
            (Some(u), Some(v)) => self.has_edge_idx(u, v),
            _ => false,
        }
    }

    /// Edges as index pairs with u < v, ascending.
    pub fn edge_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }

    /// Path on `n` vertices named v0..v{n-1}.
    pub fn path(n: usize) -> Result<Self> {
        let vertices = (0..n).map(|i| format!("v{i}"));
        let edges = (1..n).map(|i| (format!("v{}", i - 1), format!("v{i}")));
        FiniteGraph::from_parts(vertices, edges, n < 2)
    }

    /// Cycle on `n >= 3` vertices.
    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidInstance(format!("cycle needs >= 3 vertices, got {n}")));
        }
        let vertices = (0..n).map(|i| format!("v{i}"));
        let edges = (0..n).map(|i| (format!("v{i}"), format!("v{}", (i + 1) % n)));
        FiniteGraph::from_parts(vertices, edges, false)
    }

    /// Complete graph on `n >= 2` vertices.
    pub fn complete(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidInstance(format!("complete graph needs >= 2 vertices, got {n}")));
        }
        let vertices = (0..n).map(|i| format!("v{i}"));
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                edges.push((format!("v{i}"), format!("v{j}")));
            }
        }
        FiniteGraph::from_parts(vertices, edges, false)
    }
}
