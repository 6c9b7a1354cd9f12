use crate::card::Card;
use crate::error::{Error, Result};
use crate::graph::FiniteGraph;
use crate::lazy::GraphView;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

pub type Colour = u32;

/// Per-vertex finite colour lists. Lists are kept sorted and deduplicated;
/// empty lists are rejected.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ListSystem {
    lists: BTreeMap<String, Vec<Colour>>,
}

impl ListSystem {
    pub fn new(lists: BTreeMap<String, Vec<Colour>>) -> Result<Self> {
        let mut out = BTreeMap::new();
        for (v, mut list) in lists {
            list.sort_unstable();
            list.dedup();
            if list.is_empty() {
                return Err(Error::EmptyList(v));
            }
            out.insert(v, list);
        }
        Ok(ListSystem { lists: out })
    }

    /// The same list on every named vertex.
    pub fn uniform<'a, I: IntoIterator<Item = &'a str>>(vertices: I, list: &[Colour]) -> Result<Self> {
        let mut map = BTreeMap::new();
        for v in vertices {
            map.insert(v.to_string(), list.to_vec());
        }
        ListSystem::new(map)
    }

    pub fn get(&self, vertex: &str) -> Option<&[Colour]> {
        self.lists.get(vertex).map(|l| l.as_slice())
    }

    pub fn insert(&mut self, vertex: &str, mut list: Vec<Colour>) -> Result<()> {
        list.sort_unstable();
        list.dedup();
        if list.is_empty() {
            return Err(Error::EmptyList(vertex.into()));
        }
        self.lists.insert(vertex.into(), list);
        Ok(())
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &[Colour])> {
        self.lists.iter().map(|(v, l)| (v.as_str(), l.as_slice()))
    }

    pub fn len(&self) -> usize {
        self.lists.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lists.is_empty()
    }

    /// Union of all lists.
    pub fn universe(&self) -> BTreeSet<Colour> {
        self.lists.values().flatten().copied().collect()
    }

    /// Checks that every listed vertex has exactly `k` colours.
    pub fn validate_sizes(&self, k: usize) -> Result<()> {
        for (v, list) in &self.lists {
            if list.len() != k {
                return Err(Error::BadListSize(v.clone(), k));
            }
        }
        Ok(())
    }

    /// Checks that every vertex of `graph` has a list.
    pub fn covers(&self, graph: &FiniteGraph) -> Result<()> {
        for name in graph.names() {
            if !self.lists.contains_key(name) {
                return Err(Error::EmptyList(name.clone()));
            }
        }
        Ok(())
    }
}

/// Partial colour assignment keyed by vertex name.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PartialColouring {
    map: BTreeMap<String, Colour>,
}

impl PartialColouring {
    pub fn new() -> Self {
        PartialColouring::default()
    }

    pub fn from_map(map: BTreeMap<String, Colour>) -> Self {
        PartialColouring { map }
    }

    pub fn from_pairs<'a, I: IntoIterator<Item = (&'a str, Colour)>>(pairs: I) -> Self {
        PartialColouring {
            map: pairs.into_iter().map(|(v, c)| (v.to_string(), c)).collect(),
        }
    }

    pub fn get(&self, vertex: &str) -> Option<Colour> {
        self.map.get(vertex).copied()
    }

    pub fn set(&mut self, vertex: &str, colour: Colour) {
        self.map.insert(vertex.into(), colour);
    }

    pub fn contains(&self, vertex: &str) -> bool {
        self.map.contains_key(vertex)
    }

    pub fn domain(&self) -> impl Iterator<Item = &str> {
        self.map.keys().map(|s| s.as_str())
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, Colour)> {
        self.map.iter().map(|(v, c)| (v.as_str(), *c))
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn as_map(&self) -> &BTreeMap<String, Colour> {
        &self.map
    }

    /// True when every assignment of `base` is present unchanged here.
    pub fn extends(&self, base: &PartialColouring) -> bool {
        base.iter().all(|(v, c)| self.get(v) == Some(c))
    }

    /// True when every coloured vertex holds a colour from its list.
    pub fn respects(&self, lists: &ListSystem) -> bool {
        self.iter()
            .all(|(v, c)| lists.get(v).is_some_and(|l| l.binary_search(&c).is_ok()))
    }

    pub fn restricted_to<'a, I: IntoIterator<Item = &'a str>>(&self, vertices: I) -> Self {
        let mut map = BTreeMap::new();
        for v in vertices {
            if let Some(c) = self.get(v) {
                map.insert(v.to_string(), c);
            }
        }
        PartialColouring { map }
    }
}

/// Happiness verdict for one vertex.
///
/// Exact verdicts compare the same-coloured and differently-coloured
/// neighbour counts over the coloured neighbours; `Pending` reports the
/// counters seen within a finite scan of an infinite neighbour stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum Happiness {
    Happy { same: usize, diff: usize },
    Unhappy { same: usize, diff: usize },
    Pending { same: usize, diff: usize },
}

impl Happiness {
    pub fn is_happy(&self) -> bool {
        matches!(self, Happiness::Happy { .. })
    }

    pub fn counters(&self) -> (usize, usize) {
        match *self {
            Happiness::Happy { same, diff }
            | Happiness::Unhappy { same, diff }
            | Happiness::Pending { same, diff } => (same, diff),
        }
    }

    /// Resolves a pending verdict under a caller-supplied certificate that
    /// the vertex has infinitely many differently-coloured neighbours; any
    /// same-colour count is then dominated.
    pub fn assuming_infinite_diff(self) -> Happiness {
        match self {
            Happiness::Pending { same, diff } => Happiness::Happy { same, diff },
            other => other,
        }
    }
}

/// Happiness of `vertex` under `colouring`, counted over coloured
/// neighbours only.
///
/// Finite-degree vertices get an exact verdict from a full neighbourhood
/// scan. Infinite-degree vertices are never decided by counting: the first
/// `horizon` stream elements yield a `Pending` verdict with both counters,
/// and omitting the horizon is an error.
pub fn happiness_status(
    view: GraphView<'_>,
    colouring: &PartialColouring,
    vertex: &str,
    horizon: Option<usize>,
) -> Result<Happiness> {
    let own = colouring
        .get(vertex)
        .ok_or_else(|| Error::NotInDomain(vertex.into()))?;
    match view.degree(vertex)? {
        Card::Finite(_) => {
            let (mut same, mut diff) = (0usize, 0usize);
            for w in view.neighbour_stream(vertex)? {
                match colouring.get(&w) {
                    Some(c) if c == own => same += 1,
                    Some(_) => diff += 1,
                    None => {}
                }
            }
            if same <= diff {
                Ok(Happiness::Happy { same, diff })
            } else {
                Ok(Happiness::Unhappy { same, diff })
            }
        }
        Card::Aleph0 => {
            let h = horizon.ok_or_else(|| Error::HorizonRequired(vertex.into()))?;
            let (mut same, mut diff) = (0usize, 0usize);
            for w in view.neighbour_stream(vertex)?.take(h) {
                match colouring.get(&w) {
                    Some(c) if c == own => same += 1,
                    Some(_) => diff += 1,
                    None => {}
                }
            }
            Ok(Happiness::Pending { same, diff })
        }
    }
}

fn require_total(graph: &FiniteGraph, colouring: &PartialColouring) -> Result<()> {
    for name in graph.names() {
        if !colouring.contains(name) {
            return Err(Error::NotTotal(name.clone()));
        }
    }
    Ok(())
}

/// Number of edges whose endpoints receive different colours. Requires a
/// total colouring.
pub fn cross_edge_count(graph: &FiniteGraph, colouring: &PartialColouring) -> Result<usize> {
    require_total(graph, colouring)?;
    let dense: Vec<Colour> = graph
        .names()
        .iter()
        .map(|n| colouring.get(n).expect("checked total"))
        .collect();
    Ok(graph.edge_pairs().filter(|&(u, v)| dense[u] != dense[v]).count())
}

/// Number of edges whose endpoints share a colour. Requires a total
/// colouring.
pub fn monochromatic_edge_count(graph: &FiniteGraph, colouring: &PartialColouring) -> Result<usize> {
    require_total(graph, colouring)?;
    let dense: Vec<Colour> = graph
        .names()
        .iter()
        .map(|n| colouring.get(n).expect("checked total"))
        .collect();
    Ok(graph.edge_pairs().filter(|&(u, v)| dense[u] == dense[v]).count())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{instantiate_generator, GeneratorSpec};

    #[test]
    fn middle_of_a_two_coloured_path_is_happy() {
        let g = FiniteGraph::path(3).unwrap();
        let col = PartialColouring::from_pairs([("v0", 1), ("v1", 2), ("v2", 1)]);
        let status = happiness_status(GraphView::Finite(&g), &col, "v1", None).unwrap();
        assert_eq!(status, Happiness::Happy { same: 0, diff: 2 });
    }

    #[test]
    fn monochromatic_triangle_is_unhappy_everywhere() {
        let g = FiniteGraph::cycle(3).unwrap();
        let col = PartialColouring::from_pairs([("v0", 1), ("v1", 1), ("v2", 1)]);
        for v in ["v0", "v1", "v2"] {
            let status = happiness_status(GraphView::Finite(&g), &col, v, None).unwrap();
            assert_eq!(status, Happiness::Unhappy { same: 2, diff: 0 });
        }
    }

    #[test]
    fn uncoloured_neighbours_are_excluded() {
        let g = FiniteGraph::path(3).unwrap();
        let col = PartialColouring::from_pairs([("v0", 1), ("v1", 1)]);
        let status = happiness_status(GraphView::Finite(&g), &col, "v1", None).unwrap();
        assert_eq!(status, Happiness::Unhappy { same: 1, diff: 0 });
    }

    #[test]
    fn star_centre_needs_a_horizon_and_reports_counters() {
        let g = instantiate_generator(&GeneratorSpec::star()).unwrap();
        let mut col = PartialColouring::new();
        col.set("c", 1);
        for i in 0..10 {
            col.set(&format!("l{i}"), 2);
        }
        let err =
            happiness_status(GraphView::Lazy(&*g), &col, "c", None).unwrap_err();
        assert!(matches!(err, Error::HorizonRequired(_)));
        let status = happiness_status(GraphView::Lazy(&*g), &col, "c", Some(10)).unwrap();
        assert_eq!(status, Happiness::Pending { same: 0, diff: 10 });
        assert_eq!(
            status.assuming_infinite_diff(),
            Happiness::Happy { same: 0, diff: 10 }
        );
    }

    #[test]
    fn unqueried_vertex_must_be_coloured() {
        let g = FiniteGraph::path(2).unwrap();
        let col = PartialColouring::from_pairs([("v0", 1)]);
        let err = happiness_status(GraphView::Finite(&g), &col, "v1", None).unwrap_err();
        assert!(matches!(err, Error::NotInDomain(_)));
    }

    #[test]
    fn cross_edges_on_known_colourings() {
        let k4 = FiniteGraph::complete(4).unwrap();
        let col = PartialColouring::from_pairs([("v0", 1), ("v1", 1), ("v2", 2), ("v3", 2)]);
        assert_eq!(cross_edge_count(&k4, &col).unwrap(), 4);
        assert_eq!(monochromatic_edge_count(&k4, &col).unwrap(), 2);

        let c5 = FiniteGraph::cycle(5).unwrap();
        let col = PartialColouring::from_pairs([
            ("v0", 1),
            ("v1", 2),
            ("v2", 1),
            ("v3", 2),
            ("v4", 1),
        ]);
        assert_eq!(cross_edge_count(&c5, &col).unwrap(), 4);
        assert_eq!(monochromatic_edge_count(&c5, &col).unwrap(), 1);
    }

    #[test]
    fn cross_count_rejects_partial_colourings() {
        let g = FiniteGraph::path(2).unwrap();
        let col = PartialColouring::from_pairs([("v0", 1)]);
        assert!(matches!(
            cross_edge_count(&g, &col).unwrap_err(),
            Error::NotTotal(_)
        ));
    }

    #[test]
    fn list_system_normalises_and_validates() {
        let mut map = BTreeMap::new();
        map.insert("a".to_string(), vec![3, 1, 3, 2]);
        let lists = ListSystem::new(map).unwrap();
        assert_eq!(lists.get("a").unwrap(), &[1, 2, 3]);
        assert!(lists.validate_sizes(3).is_ok());
        assert!(lists.validate_sizes(2).is_err());

        let mut bad = BTreeMap::new();
        bad.insert("a".to_string(), vec![]);
        assert!(matches!(ListSystem::new(bad).unwrap_err(), Error::EmptyList(_)));
    }

    #[test]
    fn respects_and_extends() {
        let lists = ListSystem::uniform(["a", "b"], &[1, 2]).unwrap();
        let base = PartialColouring::from_pairs([("a", 1)]);
        let mut full = base.clone();
        full.set("b", 2);
        assert!(full.extends(&base));
        assert!(!base.extends(&full));
        assert!(full.respects(&lists));
        full.set("b", 9);
        assert!(!full.respects(&lists));
    }
}
