//! Checking whether a set of Boolean functions spans an invariant subspace,
//! both by the rational formula and by a direct certificate.
//!
//! Run with `cargo run --example invariant_certificate`.

use stpnet::corpus;
use stpnet::formula::{parse_formula, structure_matrix};
use stpnet::invariant::{combined_structure, h_star, invariance_certificate, is_regular, Certification, FunctionSet};
use stpnet::network::assemble_bn;

fn main() -> stpnet::Result<()> {
    let m = assemble_bn(&corpus::example_315_network())?.overall;
    println!("M = {m}");

    let fs = corpus::example_315_functions();
    let q = combined_structure(&fs)?;
    println!("Q = {} (regular: {})", q.g, is_regular(&q));
    let h = h_star(&q, &m)?;
    println!("H* = {:?}", h.as_logical().map(|l| l.to_string()));
    match invariance_certificate(&q, &m)? {
        Certification::Invariant(cert) => println!("invariant, QM = HQ with H = {}", cert.h),
        Certification::NotInvariant { x, x_prime } => println!("not invariant: {x} and {x_prime}"),
    }

    // A single coordinate that is not invariant: x1 alone.
    let scope: Vec<String> = (1..=4).map(|i| format!("x{i}")).collect();
    let g = structure_matrix(&parse_formula("x1", &scope)?, &scope)?;
    let q1 = combined_structure(&FunctionSet::from_generators(4, [g])?)?;
    match invariance_certificate(&q1, &m)? {
        Certification::Invariant(cert) => println!("span{{x1}} is invariant with H = {}", cert.h),
        Certification::NotInvariant { x, x_prime } => {
            println!("span{{x1}} is not invariant: {x} and {x_prime} agree on x1 but not after one step")
        }
    }
    Ok(())
}
