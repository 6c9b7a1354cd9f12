//! JSON interchange for every artifact the tools read or write, plus DOT
//! export for finite graphs.
//!
//! JSON is the canonical format; DOT is a one-way export for visual
//! inspection.  Parsers re-validate everything through the library
//! constructors, so a hand-edited file cannot smuggle in an unsorted list,
//! a self-loop, or a dangling edge.

use crate::colouring::{Colour, ListSystem, PartialColouring};
use crate::error::Result;
use crate::graph::FiniteGraph;
use crate::solver::{PinnedVertex, SolveInstance};
use crate::streams::{LazySetFamily, SetStream, StreamSpec};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

/// Wire form of a finite graph.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphFile {
    pub vertices: Vec<String>,
    #[serde(default)]
    pub edges: Vec<(String, String)>,
}

/// Parses `{"vertices": [...], "edges": [["a","b"], ...]}`, rejecting
/// self-loops, duplicate edges, duplicate vertices, and edges whose
/// endpoints are not listed — each with its own error.
pub fn parse_graph_json(text: &str) -> Result<FiniteGraph> {
    let file: GraphFile = serde_json::from_str(text)?;
    FiniteGraph::from_parts(file.vertices, file.edges, true)
}

fn named_edges(graph: &FiniteGraph) -> Vec<(String, String)> {
    graph
        .edge_pairs()
        .map(|(u, v)| (graph.name(u).to_string(), graph.name(v).to_string()))
        .collect()
}

/// Canonical JSON for a finite graph: sorted vertices, sorted edge pairs.
pub fn graph_to_json(graph: &FiniteGraph) -> Result<String> {
    let file = GraphFile {
        vertices: graph.names().to_vec(),
        edges: named_edges(graph),
    };
    Ok(serde_json::to_string_pretty(&file)?)
}

/// Parses a JSON array of vertex names into a set.
pub fn parse_set_json(text: &str) -> Result<BTreeSet<String>> {
    let names: Vec<String> = serde_json::from_str(text)?;
    Ok(names.into_iter().collect())
}

pub fn set_to_json(set: &BTreeSet<String>) -> Result<String> {
    Ok(serde_json::to_string_pretty(set)?)
}

/// Parses `{"vertex": colour, ...}`.
pub fn parse_colouring_json(text: &str) -> Result<PartialColouring> {
    Ok(serde_json::from_str(text)?)
}

/// Parses `{"vertex": [colours], ...}` and re-validates every list, so the
/// result is sorted and free of empty lists no matter how the file looked.
pub fn parse_lists_json(text: &str) -> Result<ListSystem> {
    let raw: BTreeMap<String, Vec<Colour>> = serde_json::from_str(text)?;
    ListSystem::new(raw)
}

/// Wire form of one finite solve: graph, frozen part, lists, optional pin.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InstanceFile {
    pub graph: GraphFile,
    #[serde(default)]
    pub frozen: PartialColouring,
    pub lists: BTreeMap<String, Vec<Colour>>,
    #[serde(default)]
    pub pinned: Option<PinnedVertex>,
}

/// Parses and fully validates a solve instance file.
pub fn parse_instance_json(text: &str) -> Result<SolveInstance> {
    let file: InstanceFile = serde_json::from_str(text)?;
    let graph = FiniteGraph::from_parts(file.graph.vertices, file.graph.edges, true)?;
    SolveInstance::new(graph, file.frozen, ListSystem::new(file.lists)?, file.pinned)
}

/// Parses a JSON array of stream descriptions into a live family.
pub fn parse_family_json(text: &str) -> Result<LazySetFamily<String>> {
    let specs: Vec<StreamSpec> = serde_json::from_str(text)?;
    let members = specs
        .iter()
        .map(StreamSpec::instantiate)
        .collect::<Result<Vec<SetStream<String>>>>()?;
    Ok(LazySetFamily { members })
}

/// Fill colours for DOT nodes, cycled by colour number.
const DOT_FILLS: [&str; 8] = [
    "lightblue",
    "lightgreen",
    "lightsalmon",
    "gold",
    "plum",
    "lightcyan",
    "khaki",
    "lightpink",
];

fn dot_quote(name: &str) -> String {
    let escaped = name.replace('\\', "\\\\").replace('"', "\\\"");
    format!("\"{escaped}\"")
}

/// Renders a finite graph as DOT, one node and edge per line in canonical
/// order.  Coloured vertices get a `color=` fill attribute.
pub fn export_dot(graph: &FiniteGraph, colouring: Option<&PartialColouring>) -> String {
    let mut out = String::from("graph majc {\n");
    for name in graph.names() {
        let node = dot_quote(name);
        match colouring.and_then(|c| c.get(name)) {
            Some(c) => {
                let fill = DOT_FILLS[(c as usize) % DOT_FILLS.len()];
                out.push_str(&format!(
                    "  {node} [label={node}, color=\"{fill}\", style=\"filled\"];\n"
                ));
            }
            None => out.push_str(&format!("  {node};\n")),
        }
    }
    for (u, v) in named_edges(graph) {
        out.push_str(&format!("  {} -- {};\n", dot_quote(&u), dot_quote(&v)));
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    #[test]
    fn a_two_vertex_file_parses_to_a_single_edge() {
        let g = parse_graph_json(r#"{"vertices":["a","b"],"edges":[["a","b"]]}"#).unwrap();
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.edge_count(), 1);
        assert!(g.has_edge("a", "b"));
    }

    #[test]
    fn each_malformation_gets_its_own_error() {
        let loops = r#"{"vertices":["a"],"edges":[["a","a"]]}"#;
        assert!(matches!(parse_graph_json(loops), Err(Error::SelfLoop(_))));

        let dup = r#"{"vertices":["a","b"],"edges":[["a","b"],["b","a"]]}"#;
        assert!(matches!(parse_graph_json(dup), Err(Error::DuplicateEdge(_, _))));

        let dangling = r#"{"vertices":["a","b"],"edges":[["a","c"]]}"#;
        assert!(matches!(
            parse_graph_json(dangling),
            Err(Error::DanglingEndpoint(_))
        ));

        let twice = r#"{"vertices":["a","a"],"edges":[]}"#;
        assert!(matches!(
            parse_graph_json(twice),
            Err(Error::DuplicateVertex(_))
        ));

        assert!(matches!(parse_graph_json("{"), Err(Error::Json(_))));
    }

    #[test]
    fn parse_serialize_parse_is_parse() {
        let texts = [
            r#"{"vertices":["a","b"],"edges":[["a","b"]]}"#,
            r#"{"vertices":["x","y","z"],"edges":[["x","y"],["y","z"],["x","z"]]}"#,
            r#"{"vertices":["lonely"],"edges":[]}"#,
            r#"{"vertices":["b","a","d","c"],"edges":[["d","a"],["b","c"]]}"#,
        ];
        for text in texts {
            let once = parse_graph_json(text).unwrap();
            let json = graph_to_json(&once).unwrap();
            let twice = parse_graph_json(&json).unwrap();
            assert_eq!(once.names(), twice.names());
            assert_eq!(named_edges(&once), named_edges(&twice));
            assert_eq!(json, graph_to_json(&twice).unwrap());
        }
    }

    #[test]
    fn uncoloured_dot_lists_nodes_then_edges() {
        let g = parse_graph_json(r#"{"vertices":["a","b"],"edges":[["a","b"]]}"#).unwrap();
        let dot = export_dot(&g, None);
        assert_eq!(dot, "graph majc {\n  \"a\";\n  \"b\";\n  \"a\" -- \"b\";\n}\n");
    }

    #[test]
    fn coloured_dot_carries_one_fill_attribute_per_coloured_node() {
        let g = FiniteGraph::complete(3).unwrap();
        let colouring = PartialColouring::from_pairs([("v0", 1), ("v1", 2), ("v2", 1)]);
        let dot = export_dot(&g, Some(&colouring));
        assert_eq!(dot.matches("color=").count(), 3);
        assert_eq!(dot.matches("--").count(), 3);
        assert_eq!(export_dot(&g, Some(&colouring)), dot);
    }

    #[test]
    fn lists_files_are_revalidated_on_the_way_in() {
        let lists = parse_lists_json(r#"{"a":[3,1,2],"b":[2,2,1]}"#).unwrap();
        assert_eq!(lists.get("a").unwrap(), &[1, 2, 3]);
        assert_eq!(lists.get("b").unwrap(), &[1, 2]);
        assert!(matches!(
            parse_lists_json(r#"{"a":[]}"#),
            Err(Error::EmptyList(_))
        ));
    }

    #[test]
    fn instance_files_parse_into_validated_instances() {
        let text = r#"{
            "graph": {"vertices":["u","v","w"],"edges":[["u","v"],["v","w"]]},
            "frozen": {"w": 1},
            "lists": {"u":[1,2,3],"v":[2,3],"w":[1,2]},
            "pinned": {"vertex":"u","banned":2}
        }"#;
        let instance = parse_instance_json(text).unwrap();
        assert_eq!(instance.frozen().get("w"), Some(1));
        assert_eq!(instance.lists().get("u").unwrap(), &[1, 3]);
        assert_eq!(instance.free_names().count(), 2);
    }

    #[test]
    fn family_files_instantiate_their_streams() {
        let fam = parse_family_json(
            r#"[{"kind":"naturals"},{"kind":"arithmetic","start":1,"step":2}]"#,
        )
        .unwrap();
        assert_eq!(fam.members.len(), 2);
        assert_eq!(fam.members[0].prefix(3), ["0", "1", "2"]);
        assert_eq!(fam.members[1].prefix(3), ["1", "3", "5"]);
    }

    #[test]
    fn sets_round_trip() {
        let set = parse_set_json(r#"["b","a","a"]"#).unwrap();
        assert_eq!(set.len(), 2);
        let json = set_to_json(&set).unwrap();
        assert_eq!(parse_set_json(&json).unwrap(), set);
    }
}
