use rayon::prelude::*;

use super::{FunctionSet, Provenance};
use crate::error::{Error, Result};
use crate::stp::LogicalMatrix;

pub const DEFAULT_CLOSURE_CAP: usize = 4096;

#[derive(Clone, Copy, Debug)]
pub struct ClosureOptions {
    /// Maximum closure size.
    pub cap: usize,
    /// Expand each breadth-first level on the rayon pool.
    pub parallel: bool,
}

impl Default for ClosureOptions {
    fn default() -> Self {
        ClosureOptions {
            cap: DEFAULT_CLOSURE_CAP,
            parallel: false,
        }
    }
}

/// Smallest function set containing the generators and closed under
/// right-multiplication by every block in scope.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Closure {
    pub functions: FunctionSet,
    /// 0-based control indices of the blocks in scope (`[0]` for a BN).
    pub block_ids: Vec<usize>,
    /// `successors[b][j] = k` iff `G_j M_{block_ids[b]} = G_k`.
    pub successors: Vec<Vec<usize>>,
    pub generator_indices: Vec<usize>,
}

pub type ClosureResult = Closure;

impl Closure {
    pub fn len(&self) -> usize {
        self.functions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.functions.is_empty()
    }

    /// Successor map for a control index, if that block is in scope.
    pub fn successor_for(&self, control: usize) -> Option<&[usize]> {
        self.block_ids
            .iter()
            .position(|&b| b == control)
            .map(|i| self.successors[i].as_slice())
    }
}

/// Breadth-first closure of `generators` under the given `(control id, block)` pairs.
///
/// Members are expanded in index order and, for each member, blocks in the
/// given order; new functions are appended in discovery order. The parallel
/// mode computes a whole level's products concurrently but merges them in
/// that same order, so both modes produce identical results.
pub fn closure_over(
    generators: &FunctionSet,
    blocks: &[(usize, &LogicalMatrix)],
    opts: ClosureOptions,
) -> Result<Closure> {
    if generators.is_empty() {
        return Err(Error::dims("closure needs at least one generator"));
    }
    let states = 1usize << generators.n();
    for (id, b) in blocks {
        if b.rows() != states || b.cols() != states {
            return Err(Error::dims(format!(
                "block {} is {}x{}, expected {states}x{states}",
                id + 1,
                b.rows(),
                b.cols()
            )));
        }
    }
    if generators.len() > opts.cap {
        return Err(Error::CapExceeded {
            what: "closure size",
            limit: opts.cap,
            frontier: generators.len(),
        });
    }

    let mut functions = generators.clone();
    let generator_indices = (0..functions.len()).collect();
    let mut successors: Vec<Vec<usize>> = vec![Vec::new(); blocks.len()];
    let mut depth = vec![0usize; functions.len()];
    let mut next = 0;
    while next < functions.len() {
        let level_end = functions.len();
        let expand = |j: usize| -> Vec<LogicalMatrix> {
            blocks
                .iter()
                .map(|(_, b)| functions.get(j).compose(b).expect("dimensions checked"))
                .collect()
        };
        let products: Vec<Vec<LogicalMatrix>> = if opts.parallel {
            (next..level_end).into_par_iter().map(expand).collect()
        } else {
            (next..level_end).map(expand).collect()
        };
        for (j, row) in (next..level_end).zip(products) {
            for (b, f) in row.into_iter().enumerate() {
                let name = format!("z{}", functions.len() + 1);
                let step = depth[j] + 1;
                let (k, fresh) = functions.insert(f, name, Provenance::Derived { step })?;
                if fresh {
                    depth.push(step);
                    if functions.len() > opts.cap {
                        return Err(Error::CapExceeded {
                            what: "closure size",
                            limit: opts.cap,
                            frontier: functions.len() - j - 1,
                        });
                    }
                }
                successors[b].push(k);
            }
        }
        next = level_end;
    }
    Ok(Closure {
        functions,
        block_ids: blocks.iter().map(|(id, _)| *id).collect(),
        successors,
        generator_indices,
    })
}

/// Smallest `M`-invariant function set containing the generators.
pub fn closure_bn(generators: &FunctionSet, m: &LogicalMatrix, opts: ClosureOptions) -> Result<Closure> {
    closure_over(generators, &[(0, m)], opts)
}
