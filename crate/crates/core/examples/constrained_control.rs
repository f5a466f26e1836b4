//! Control-invariant aggregation of the controlled grid with a forbidden
//! control in some classes.
//!
//! Run with `cargo run --example constrained_control`.

use stpnet::control::{aggregated_bcn, apply_constraints, closure_bcn, ControlConstraint, SimulationStatus};
use stpnet::corpus;
use stpnet::formula::index_function;
use stpnet::invariant::{ClosureOptions, FunctionSet};
use stpnet::network::assemble_bcn;

fn main() -> stpnet::Result<()> {
    let sys = assemble_bcn(&corpus::grid_network(true))?;
    let fs = FunctionSet::from_generators(9, [index_function(&corpus::grid_index_set())])?;
    let cl = closure_bcn(&fs, &sys, None, ClosureOptions::default())?;
    let agg = aggregated_bcn(&cl)?;
    println!("control-invariant closure: {} functions, {} classes", cl.len(), agg.reduced.class_count());

    let constraint = ControlConstraint::parse(corpus::GRID_CONSTRAINT)?;
    print!("constraint: {constraint}");
    let con = apply_constraints(&agg, &constraint)?;
    println!("H^U (reduced) = {}", con.reduced);
    println!("zero columns: {:?}", con.reduced.zero_columns().iter().map(|c| c + 1).collect::<Vec<_>>());

    // Controls are 0-based here: 0 is u = δ_2^1, 1 is u = δ_2^2.
    let trace = con.simulate(7, &[0, 0, 1, 0])?;
    let path: Vec<usize> = trace.classes.iter().map(|c| c + 1).collect();
    match trace.status {
        SimulationStatus::Completed => println!("classes {path:?}, completed"),
        SimulationStatus::Forbidden { step, class, control } => {
            println!("classes {path:?}, u={} forbidden in class {} at step {step}", control + 1, class + 1)
        }
    }
    Ok(())
}
