//! Control-invariant subspaces, constrained aggregation and minimum
//! realization of Boolean control networks.

mod constraint;
mod realization;

pub use constraint::{
    apply_constraints, ConstrainedAggregatedBcn, ControlConstraint, ForbidRule, SimulationStatus,
    SimulationTrace, StepOutcome,
};
pub use realization::{
    min_realization, observe_based_realization, verify_block_structure, verify_io_equivalence,
    BlockCheck, Counterexample, IoReport, Realization, VerifyOptions, DEFAULT_VERIFY_CAP,
};

use crate::error::{Error, Result};
use crate::invariant::{aggregated_dynamics, closure_over, AggregatedSystem, Closure, ClosureOptions, FunctionSet};
use crate::network::BcnAssr;

/// A closure under the control blocks of a BCN, one successor map per block.
pub type ControlClosure = Closure;

/// Smallest (partly) control-invariant function set containing the generators.
///
/// `blocks_filter` lists the allowed controls as 0-based block indices;
/// `None` means every block.
pub fn closure_bcn(
    generators: &FunctionSet,
    sys: &BcnAssr,
    blocks_filter: Option<&[usize]>,
    opts: ClosureOptions,
) -> Result<ControlClosure> {
    if generators.n() != sys.n {
        return Err(Error::dims(format!(
            "functions over {} variables for a network with {}",
            generators.n(),
            sys.n
        )));
    }
    let ids: Vec<usize> = match blocks_filter {
        None => (0..sys.control_count()).collect(),
        Some(list) => {
            let mut ids = list.to_vec();
            ids.sort_unstable();
            ids.dedup();
            if let Some(&bad) = ids.iter().find(|&&i| i >= sys.control_count()) {
                return Err(Error::dims(format!(
                    "control {} out of range 1..={}",
                    bad + 1,
                    sys.control_count()
                )));
            }
            if ids.is_empty() {
                return Err(Error::dims("empty control subset"));
            }
            ids
        }
    };
    let blocks: Vec<(usize, &_)> = ids.iter().map(|&i| (i, &sys.blocks[i])).collect();
    closure_over(generators, &blocks, opts)
}

/// `z(t+1) = [H_1, …, H_k] u(t) z(t)` on a control closure.
pub fn aggregated_bcn(cl: &ControlClosure) -> Result<AggregatedSystem> {
    aggregated_dynamics(cl)
}
