//! Compiling a Boolean network written in the text format to its
//! algebraic state-space representation, then stepping it.
//!
//! Run with `cargo run --example compile_network`.

use stpnet::formula::{parse_network, structure_matrix};
use stpnet::network::{assemble_bcn, trajectory};
use stpnet::stp::{state_index_decode, state_index_encode, DeltaVector};

const NET: &str = "\
inputs: u
x1 <- x2 & u
x2 <- !x1 | x3
x3 <- x1 ^ x2
";

fn main() -> stpnet::Result<()> {
    let net = parse_network(NET)?;
    for (var, f) in net.state_vars.iter().zip(&net.update_rules) {
        println!("{var}: {} -> {}", f, structure_matrix(f, &net.scope())?);
    }
    let sys = assemble_bcn(&net)?;
    println!("L = {}", sys.l);
    for (u, block) in sys.blocks.iter().enumerate() {
        println!("block u=δ_2^{}: {block}", u + 1);
    }

    let x0 = state_index_encode(&[true, false, true]);
    let controls: Vec<DeltaVector> = [1, 2, 1, 1].iter().map(|&u| DeltaVector::new(2, u)).collect::<Result<_, _>>()?;
    for (t, x) in trajectory(&sys, x0, &controls)?.into_iter().enumerate() {
        let bits: String = state_index_decode(x).iter().map(|&b| if b { '1' } else { '0' }).collect();
        println!("t={t}: {x} ({bits})");
    }
    Ok(())
}
