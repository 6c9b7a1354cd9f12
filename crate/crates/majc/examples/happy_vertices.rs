// Judge each vertex of a coloured cycle, then probe an infinite star
// whose centre can never be decided by counting.

use majc::colouring::happiness_status;
use majc::{instantiate_generator, FiniteGraph, GeneratorSpec, GraphView, PartialColouring};

fn main() -> majc::Result<()> {
    let cycle = FiniteGraph::cycle(5)?;
    let colouring =
        PartialColouring::from_pairs([("v0", 1), ("v1", 2), ("v2", 1), ("v3", 2), ("v4", 2)]);
    println!("five-cycle v0..v4, colours {:?}", colouring.as_map());
    let view = GraphView::Finite(&cycle);
    for v in ["v0", "v1", "v2", "v3", "v4"] {
        // Finite degree: the verdict is exact, no horizon needed.
        let status = happiness_status(view, &colouring, v, None)?;
        println!("  {v}: {status:?}");
    }

    // A vertex is judged only against its coloured neighbours, so erasing
    // a colour can flip a verdict.
    let partial = colouring.restricted_to(["v0", "v2", "v3", "v4"]);
    let status = happiness_status(view, &partial, "v0", None)?;
    println!("after blanking v1, v0 is judged over one neighbour: {status:?}");

    // The centre of an infinite star has aleph_0 many leaves. A scan of
    // the first 50 yields counters but the verdict stays pending: an
    // unscanned leaf could always tip the balance.
    let star = instantiate_generator(&GeneratorSpec::StarAleph0)?;
    let mut c = PartialColouring::new();
    c.set("c", 1);
    for i in 0..20 {
        c.set(&format!("l{i}"), if i % 3 == 0 { 1 } else { 2 });
    }
    let view = GraphView::Lazy(star.as_ref());
    let status = happiness_status(view, &c, "c", Some(50))?;
    println!("infinite star centre, first 50 leaves scanned: {status:?}");
    Ok(())
}
