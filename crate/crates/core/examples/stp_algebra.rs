//! The semi-tensor product on dense and logical matrices.
//!
//! Run with `cargo run --example stp_algebra`.

use stpnet::stp::{swap_matrix, DeltaVector, DenseMatrix, LogicalMatrix};

fn main() -> stpnet::Result<()> {
    // A 1x2 row times a 4x1 column: the row becomes [1 2] ⊗ I_2, a 2x4 matrix.
    let x = DenseMatrix::from_i64(1, 2, &[1, 2])?;
    let y = DenseMatrix::from_i64(4, 1, &[1, 2, 3, 4])?;
    let p = x.stp(&y);
    println!("[1 2] ⋉ [1 2 3 4]ᵀ = {}x{} {:?}", p.rows(), p.cols(), p.entries().iter().map(ToString::to_string).collect::<Vec<_>>());

    // Logical matrices stay in δ form; the product of basis vectors is their Kronecker product.
    let a = DeltaVector::new(2, 1)?;
    let b = DeltaVector::new(4, 3)?;
    println!("{a} ⋉ {b} = {}", a.stp(&b));

    // The swap matrix exchanges two factors: W[2,4] a b = b a.
    let w = swap_matrix(2, 4);
    let wab = w.stp(&LogicalMatrix::column(a)).stp(&LogicalMatrix::column(b));
    let ba = b.stp(&a);
    println!("W[2,4] = {w}");
    println!("W[2,4] {a} {b} = δ_{}^{}, {b} {a} = {ba}", wab.rows(), wab.target(0) + 1);

    // Khatri-Rao: column-wise Kronecker products.
    let and = LogicalMatrix::from_delta(2, &[1, 2, 2, 2])?;
    let or = LogicalMatrix::from_delta(2, &[1, 1, 1, 2])?;
    println!("AND * OR = {}", and.khatri_rao(&or)?);

    // Exact rational inverse.
    let m = DenseMatrix::from_i64(2, 2, &[2, 1, 1, 1])?;
    let inv = m.inverse().expect("invertible");
    println!("inverse of [[2,1],[1,1]] = {:?}", inv.entries().iter().map(ToString::to_string).collect::<Vec<_>>());
    Ok(())
}
