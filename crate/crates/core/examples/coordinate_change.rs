//! A logical coordinate change that moves an invariant subspace onto the
//! leading coordinates, exposing a block-triangular structure.
//!
//! Run with `cargo run --example coordinate_change`.

use stpnet::corpus;
use stpnet::invariant::combined_structure;
use stpnet::network::{apply_coordinate_change, assemble_bn, CoordinateChange};
use stpnet::stp::LogicalMatrix;

fn main() -> stpnet::Result<()> {
    let sys = assemble_bn(&corpus::example_315_network())?.into_bcn();
    // New coordinates (z1, z2, z3, x4): the invariant functions plus one more.
    let mut fs = corpus::example_315_functions();
    let x4 = LogicalMatrix::new(2, (0..16).map(|x| x & 1).collect())?;
    fs.insert(x4, "x4", stpnet::invariant::Provenance::Generator)?;
    let t = combined_structure(&fs)?.g;
    println!("T = {t} (permutation: {})", t.is_permutation());

    let t = CoordinateChange::new(t)?;
    let moved = apply_coordinate_change(&sys, &t)?;
    println!("M in new coordinates = {}", moved.blocks[0]);
    // The leading coordinates evolve on their own: the z-part of the successor
    // (new index / 2) depends only on the z-part of the current state.
    let mut z_next = [None; 8];
    let triangular = (0..16).all(|w| {
        let z = moved.blocks[0].target(w) / 2;
        *z_next[w / 2].get_or_insert(z) == z
    });
    println!("z-dynamics closed: {triangular}, z(t+1) = {:?}", z_next.map(|z| z.map_or(0, |z| z + 1)));
    let back = apply_coordinate_change(&moved, &t.inverse())?;
    println!("inverse change restores M: {}", back.blocks == sys.blocks);
    Ok(())
}
