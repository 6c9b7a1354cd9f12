// Round-trip a graph through its JSON form and render a coloured DOT
// view of the result.

use majc::{export_dot, graph_to_json, parse_graph_json, GraphView, PartialColouring};

fn main() -> majc::Result<()> {
    let text = r#"{
        "vertices": ["a", "b", "c", "d"],
        "edges": [["a", "b"], ["b", "c"], ["c", "d"], ["d", "a"], ["a", "c"]]
    }"#;
    let graph = parse_graph_json(text)?;
    println!(
        "parsed {} vertices, {} edges",
        graph.vertex_count(),
        graph.edge_count()
    );

    // Serialization is canonical: parse(serialize(parse(t))) == parse(t).
    let canonical = graph_to_json(&graph)?;
    let again = parse_graph_json(&canonical)?;
    assert_eq!(graph_to_json(&again)?, canonical);
    println!("canonical JSON:\n{canonical}");

    let colouring = PartialColouring::from_pairs([("a", 1), ("b", 2), ("c", 2)]);
    let happy = majc::colouring::happiness_status(
        GraphView::Finite(&graph),
        &colouring,
        "a",
        None,
    )?;
    println!("vertex a under the partial colouring: {happy:?}");

    // Coloured vertices are filled in the DOT output; d stays plain.
    let dot = export_dot(&graph, Some(&colouring));
    println!("{dot}");
    Ok(())
}
