//! Aggregating the nine-node opinion grid onto the smallest invariant
//! subspace containing one index function.
//!
//! Run with `cargo run --example grid_aggregation`.

use stpnet::corpus;
use stpnet::formula::index_function;
use stpnet::invariant::{aggregated_dynamics, closure_bn, ClosureOptions, FunctionSet};
use stpnet::network::assemble_bn;

fn main() -> stpnet::Result<()> {
    let m = assemble_bn(&corpus::grid_network(false))?.overall;
    let subset = corpus::grid_index_set();
    println!("index set: {:?}", subset.members());
    let g1 = index_function(&subset);

    let cl = closure_bn(&FunctionSet::from_generators(9, [g1])?, &m, ClosureOptions::default())?;
    println!("closure has {} functions", cl.len());
    for (j, g) in cl.functions.iter().enumerate() {
        let support: Vec<usize> = (0..g.cols()).filter(|&x| g.target(x) == 0).map(|x| x + 1).collect();
        let next = cl.functions.name(cl.successors[0][j]);
        println!("  {}: support {:?}, {} M = {}", cl.functions.name(j), support, cl.functions.name(j), next);
    }
    let agg = aggregated_dynamics(&cl)?;
    if let Some(h) = agg.h() {
        println!("H = {h}");
    }
    let reduced = &agg.reduced;
    println!("{} attained value vectors out of {}", reduced.class_count(), 1u64 << agg.s);
    for (c, z) in reduced.classes.iter().enumerate() {
        let size = reduced.state_class.iter().filter(|&&k| k == c).count();
        println!("  class {}: z = {:?}, {} states -> class {}", c + 1, z, size, reduced.transitions[0][c] + 1);
    }
    Ok(())
}
