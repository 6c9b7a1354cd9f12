// Shrink the 3-colour lists of an infinite path to 2-colour sublists,
// steering the first vertex away from one forbidden colour, and watch
// the coverage counters grow with the horizon.

use majc::streams::enumeration_stream;
use majc::sublists::{coverage_counter, UNIVERSE_LABEL};
use majc::{
    instantiate_generator, Card, GeneratorSpec, ListOracle, SetStream, SublistRequest,
    SublistTable, TrackedSet,
};

const PALETTE: [u32; 3] = [1, 2, 3];

fn run(horizon: usize) -> majc::Result<SublistTable> {
    let graph = instantiate_generator(&GeneratorSpec::Path)?;
    majc::sublists::select_sublists(SublistRequest {
        vertex_enum: enumeration_stream(graph),
        // The even vertices as an extra tracked set.
        tracked: vec![TrackedSet {
            label: "even".into(),
            stream: SetStream::from_fn(Card::Aleph0, |i| Some(format!("v{}", 2 * i))),
        }],
        lists: ListOracle::Uniform(&PALETTE),
        x: "v0".into(),
        c_x: 1,
        ell: 2,
        horizon,
    })
}

fn main() -> majc::Result<()> {
    let table = run(60)?;
    println!("first strikes of the engine at horizon 60:");
    for entry in table.log.iter().take(6) {
        println!(
            "  step {}: ({}, colour {}) chose {} (struck: {})",
            entry.step, entry.set_label, entry.colour, entry.chosen, entry.struck
        );
    }
    // The forced first triple pins v0's sublist to its list minus the
    // forbidden colour.
    println!("sublist of v0: {:?}", table.sublists["v0"]);
    assert_eq!(table.sublists["v0"], vec![2, 3]);

    // For every tracked pair the counter counts vertices in the set whose
    // sublist misses the colour — and it never decreases as the engine
    // runs longer.
    for horizon in [60, 120, 240] {
        let t = run(horizon)?;
        print!("horizon {horizon}:");
        for label in [UNIVERSE_LABEL, "even"] {
            for c in PALETTE {
                print!("  ({label},{c}) = {}", coverage_counter(&t, label, c)?);
            }
        }
        println!();
    }
    let (small, large) = (run(100)?, run(200)?);
    for label in [UNIVERSE_LABEL, "even"] {
        for c in PALETTE {
            assert!(coverage_counter(&small, label, c)? <= coverage_counter(&large, label, c)?);
        }
    }
    println!("coverage counters are monotone in the horizon");
    Ok(())
}
