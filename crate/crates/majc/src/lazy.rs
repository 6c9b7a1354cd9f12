use crate::card::Card;
use crate::error::{Error, Result};
use crate::graph::FiniteGraph;
use std::collections::BTreeSet;

/// Oracle-backed countable graph.
///
/// Implementations must be pure: `vertex_name`, `neighbour` and `degree`
/// are functions of the generator parameters alone, so replaying a stream
/// always yields the same elements in the same order. The enumeration is
/// injective and neighbour streams terminate exactly for finite-degree
/// vertices. Methods other than `vertex_index` may assume the vertex is a
/// member; callers validate with `vertex_index` first.
pub trait LazyGraph: Send + Sync {
    /// Injective enumeration of the vertex set.
    fn vertex_name(&self, index: usize) -> String;

    /// Inverse of the enumeration; `None` for non-members.
    fn vertex_index(&self, name: &str) -> Option<usize>;

    fn degree(&self, name: &str) -> Card;

    /// `i`-th element of the deterministic neighbour stream of `name`,
    /// `None` once a finite stream is exhausted.
    fn neighbour(&self, name: &str, i: usize) -> Option<String>;

    /// Structural adjacency fast path; `None` means "not known without
    /// scanning streams".
    fn adjacent(&self, u: &str, v: &str) -> Option<bool> {
        let _ = (u, v);
        None
    }
}

/// Iterator over a vertex's neighbour stream.
pub struct NeighbourIter<'a> {
    graph: &'a dyn LazyGraph,
    vertex: String,
    i: usize,
}

impl<'a> Iterator for NeighbourIter<'a> {
    type Item = String;

    fn next(&mut self) -> Option<String> {
        let out = self.graph.neighbour(&self.vertex, self.i);
        if out.is_some() {
            self.i += 1;
        }
        out
    }
}

pub fn neighbours<'a>(graph: &'a dyn LazyGraph, vertex: &str) -> NeighbourIter<'a> {
    NeighbourIter { graph, vertex: vertex.to_string(), i: 0 }
}

/// A finite graph or a lazy oracle, presented uniformly to the predicates
/// that accept both.
#[derive(Clone, Copy)]
pub enum GraphView<'a> {
    Finite(&'a FiniteGraph),
    Lazy(&'a dyn LazyGraph),
}

impl<'a> GraphView<'a> {
    pub fn contains(&self, name: &str) -> bool {
        match self {
            GraphView::Finite(g) => g.contains(name),
            GraphView::Lazy(g) => g.vertex_index(name).is_some(),
        }
    }

    pub fn degree(&self, name: &str) -> Result<Card> {
        match self {
            GraphView::Finite(g) => {
                let idx = g.index(name).ok_or_else(|| Error::UnknownVertex(name.into()))?;
                Ok(Card::Finite(g.degree(idx)))
            }
            GraphView::Lazy(g) => {
                if g.vertex_index(name).is_none() {
                    return Err(Error::UnknownVertex(name.into()));
                }
                Ok(g.degree(name))
            }
        }
    }

    /// Full neighbour stream. For infinite-degree vertices of a lazy graph
    /// the iterator never ends; take a prefix.
    pub fn neighbour_stream(&self, name: &str) -> Result<Box<dyn Iterator<Item = String> + 'a>> {
        match self {
            GraphView::Finite(g) => {
                let idx = g.index(name).ok_or_else(|| Error::UnknownVertex(name.into()))?;
                let g = *g;
                Ok(Box::new(g.neighbours(idx).iter().map(move |&j| g.name(j).to_string())))
            }
            GraphView::Lazy(g) => {
                if g.vertex_index(name).is_none() {
                    return Err(Error::UnknownVertex(name.into()));
                }
                Ok(Box::new(neighbours(*g, name)))
            }
        }
    }

    /// Exact adjacency when decidable: structurally, or by fully scanning a
    /// finite-degree endpoint. Otherwise scans both streams up to `horizon`
    /// and returns `None` when still unresolved.
    pub fn adjacent(&self, u: &str, v: &str, horizon: Option<usize>) -> Result<Option<bool>> {
        match self {
            GraphView::Finite(g) => {
                if !g.contains(u) {
                    return Err(Error::UnknownVertex(u.into()));
                }
                if !g.contains(v) {
                    return Err(Error::UnknownVertex(v.into()));
                }
                Ok(Some(g.has_edge(u, v)))
            }
            GraphView::Lazy(g) => {
                if g.vertex_index(u).is_none() {
                    return Err(Error::UnknownVertex(u.into()));
                }
                if g.vertex_index(v).is_none() {
                    return Err(Error::UnknownVertex(v.into()));
                }
                if u == v {
                    return Ok(Some(false));
                }
                if let Some(ans) = g.adjacent(u, v) {
                    return Ok(Some(ans));
                }
                if g.degree(u).is_finite() {
                    return Ok(Some(neighbours(*g, u).any(|w| w == v)));
                }
                if g.degree(v).is_finite() {
                    return Ok(Some(neighbours(*g, v).any(|w| w == u)));
                }
                if let Some(h) = horizon {
                    let hit = neighbours(*g, u).take(h).any(|w| w == v)
                        || neighbours(*g, v).take(h).any(|w| w == u);
                    if hit {
                        return Ok(Some(true));
                    }
                }
                Ok(None)
            }
        }
    }
}

/// Finite materialisation of a window into a lazy graph.
#[derive(Debug, Clone)]
pub struct InducedSubgraph {
    pub graph: FiniteGraph,
    /// Members whose adjacency needed horizon-truncated stream scans.
    pub truncated: Vec<String>,
    /// Pairs left undecided even after the horizon scan (no edge emitted).
    pub undecided: Vec<(String, String)>,
}

/// Materialises the subgraph induced by a finite vertex set.
///
/// Adjacency inside the window is resolved exactly whenever the generator
/// answers structurally or one endpoint has finite degree. Pairs of
/// infinite-degree vertices fall back to a stream scan bounded by
/// `horizon`; without a horizon such a pair is an error.
pub fn induced_finite_subgraph(
    graph: &dyn LazyGraph,
    set: &BTreeSet<String>,
    horizon: Option<usize>,
) -> Result<InducedSubgraph> {
    let view = GraphView::Lazy(graph);
    for v in set {
        if graph.vertex_index(v).is_none() {
            return Err(Error::UnknownVertex(v.clone()));
        }
    }
    let members: Vec<&String> = set.iter().collect();
    let mut edges = Vec::new();
    let mut truncated = BTreeSet::new();
    let mut undecided = Vec::new();
    for (i, u) in members.iter().enumerate() {
        for v in members.iter().skip(i + 1) {
            let exact = match view.adjacent(u, v, None)? {
                Some(ans) => Some(ans),
                None => {
                    if horizon.is_none() {
                        return Err(Error::AdjacencyUndecidable((*u).clone(), (*v).clone()));
                    }
                    truncated.insert((*u).clone());
                    truncated.insert((*v).clone());
                    view.adjacent(u, v, horizon)?
                }
            };
            match exact {
                Some(true) => edges.push(((*u).clone(), (*v).clone())),
                Some(false) => {}
                None => undecided.push(((*u).clone(), (*v).clone())),
            }
        }
    }
    let graph = FiniteGraph::from_parts(set.iter().cloned(), edges, true)?;
    Ok(InducedSubgraph {
        graph,
        truncated: truncated.into_iter().collect(),
        undecided,
    })
}
