// Grow a seed set to its saturation fixpoint along an infinite path,
// then show how an infinite-degree member forces a budget cut.

use majc::saturation::{is_saturated, saturate};
use majc::{instantiate_generator, Card, GeneratorSpec, GraphView};
use std::collections::BTreeSet;

fn set(names: &[&str]) -> BTreeSet<String> {
    names.iter().map(|s| s.to_string()).collect()
}

fn main() -> majc::Result<()> {
    let path = instantiate_generator(&GeneratorSpec::Path)?;
    let view = GraphView::Lazy(path.as_ref());

    // Ingestion adds each member's neighbours outside `a`. The walls at
    // v2/v3 and v7/v8 stop the growth after one round.
    let a = set(&["v2", "v3", "v7", "v8"]);
    let b = set(&["v5"]);
    let grown = saturate(&view, &a, &b, Card::Aleph0, 50)?;
    println!("members (materialization order): {:?}", grown.members);
    for m in &grown.members {
        println!("  {m}: entered at round {}", grown.generation[m]);
    }
    println!("rounds {}, fixpoint reached: {}", grown.rounds, grown.complete);

    // The independent checker re-derives the verdict from adjacency alone.
    let b_star = grown.member_set();
    let check = is_saturated(&view, &a, &b_star, Card::Finite(b_star.len()), None)?;
    println!("checker verdict: {:?} (witness {:?})", check.verdict, check.witness);
    assert!(check.is_saturated());

    // Against a dominated path the hub is everyone's neighbour: it joins
    // the set, its own neighbour stream never ends, and only the budget
    // stops the run.
    let dominated = instantiate_generator(&GeneratorSpec::DominatingVertexPlus {
        inner: Box::new(GeneratorSpec::Path),
    })?;
    let view = GraphView::Lazy(dominated.as_ref());
    let cut = saturate(&view, &set(&[]), &set(&["v0"]), Card::Aleph0, 12)?;
    println!(
        "dominated path, budget 12: {} members, fixpoint reached: {}",
        cut.members.len(),
        cut.complete
    );
    assert!(!cut.complete);
    Ok(())
}
