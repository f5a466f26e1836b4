//! Minimum realization of an input-output Boolean control network and an
//! exhaustive check that it reproduces every output sequence.
//!
//! Run with `cargo run --example minimum_realization`.

use stpnet::control::{min_realization, verify_io_equivalence, VerifyOptions};
use stpnet::corpus;
use stpnet::invariant::ClosureOptions;

fn main() -> stpnet::Result<()> {
    let (sys, outputs) = corpus::example_55_system();
    println!("network: n={}, m={}, outputs {:?}", sys.n, sys.m, outputs.names);

    let real = min_realization(&sys, &outputs, ClosureOptions::default())?;
    let names: Vec<&str> = real.closure.functions.names().iter().map(String::as_str).collect();
    println!("closure of the outputs: {names:?}");
    let (full, attained) = real.sizes();
    println!("state count {} -> {} (attained {})", sys.state_count(), full, attained);
    if let Some(h) = real.aggregated.h() {
        println!("L* = {h}");
    }
    if let Some(xi) = &real.xi {
        println!("Xi = {xi}");
    }

    let report = verify_io_equivalence(&sys, &outputs, &real, 6, VerifyOptions::default())?;
    println!(
        "equivalent: {} ({} words, exhaustive: {})",
        report.equivalent, report.words_checked, report.exhaustive
    );
    Ok(())
}
