//! Fixed points and cycles of an autonomous network, plus its state
//! transition graph in DOT form.
//!
//! Run with `cargo run --example attractors`.

use stpnet::corpus;
use stpnet::network::{assemble_bn, find_attractors, state_transition_graph, DotOptions};

fn main() -> stpnet::Result<()> {
    let bn = assemble_bn(&corpus::example_315_network())?;
    for cycle in find_attractors(&bn.overall)? {
        let states: Vec<String> = cycle.iter().map(ToString::to_string).collect();
        let kind = if cycle.len() == 1 { "fixed point" } else { "cycle" };
        println!("{kind}: {}", states.join(" -> "));
    }
    let dot = state_transition_graph(&bn.into_bcn(), &DotOptions::default())?;
    println!("{dot}");
    Ok(())
}
