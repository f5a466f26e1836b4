//! Semi-tensor product algebra for Boolean networks and Boolean control
//! networks: invariant subspaces, aggregation and minimum realization.

pub mod cli;
pub mod control;
pub mod corpus;
pub mod error;
pub mod formula;
pub mod invariant;
pub mod io;
pub mod network;
pub mod stp;

pub use error::{Error, Result};
