// Colour the uncoloured fringe of a coloured core one vertex at a time,
// with at least two safe colours at every step and witnesses forced away
// from their owner's colour.

use majc::{
    build_witness_family, extend_over_boundary, ExtensionPlan, FiniteGraph, GraphView, ListSystem,
    PartialColouring,
};
use std::collections::BTreeSet;

fn main() -> majc::Result<()> {
    // Core a0-a1-a2-a3 already coloured. The fringe y0,y1,z0,z1,w is an
    // independent set whose neighbourhoods sit inside the core, so the
    // extension can walk it in any order.
    let g = FiniteGraph::from_edges([
        ("a0", "a1"),
        ("a1", "a2"),
        ("a2", "a3"),
        ("y0", "a1"),
        ("y1", "a1"),
        ("z0", "a2"),
        ("z1", "a2"),
        ("w", "a0"),
        ("w", "a3"),
    ])?;
    let view = GraphView::Finite(&g);
    let base = PartialColouring::from_pairs([("a0", 1), ("a1", 1), ("a2", 2), ("a3", 2)]);
    let order: Vec<String> =
        ["y0", "y1", "z0", "z1", "w"].iter().map(|s| s.to_string()).collect();

    // a1 and a2 each want as many opposite-coloured fringe neighbours as
    // they have coloured core neighbours; their pools are disjoint, so the
    // builder hands each its whole pool.
    let boundary: BTreeSet<String> = order.iter().cloned().collect();
    let members = vec!["a1".to_string(), "a2".to_string()];
    let family = build_witness_family(&view, &members, &boundary, None)?;
    for (owner, set) in &family.sets {
        println!("witnesses of {owner}: {set:?}");
    }
    println!(
        "min witnesses per member: {}, perfect split: {}",
        family.min_achieved, family.perfect
    );

    let plan = ExtensionPlan {
        base,
        order: order.clone(),
        witness_sets: family.sets.clone(),
        lists: ListSystem::uniform(order.iter().map(|s| s.as_str()), &[1, 2, 3])?,
    };
    let out = extend_over_boundary(&view, &plan, None)?;
    for step in &out.steps {
        println!(
            "step {}: {} saw {} coloured neighbours, safe colours {:?}, avoided {:?}, chose {}",
            step.index, step.vertex, step.coloured_neighbours, step.safe, step.avoided, step.chosen
        );
        // With 3-colour lists at most one colour can be majority-blocked.
        assert!(step.safe.len() >= 2);
    }
    println!("extended colouring: {:?}", out.colouring.as_map());
    println!("fringe vertices happy: {}", out.boundary_happy);
    for row in &out.member_audit {
        println!(
            "member {}: {} witnesses / {} fringe neighbours, {} core neighbours, \
             all opposite: {}, guaranteed: {}, happy: {:?}",
            row.vertex,
            row.witnesses,
            row.boundary_nbrs,
            row.inside_nbrs,
            row.witnesses_opposite == row.witnesses,
            row.guaranteed,
            row.happy
        );
    }
    Ok(())
}
