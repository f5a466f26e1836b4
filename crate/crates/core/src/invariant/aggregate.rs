use std::collections::HashMap;

use super::{combined_structure, Closure, SubspaceMatrix};
use crate::error::Result;
use crate::stp::{factor_selector, LogicalMatrix};

/// Largest closure for which the product form `H ∈ L_{2^s x 2^s}` is built.
pub const MAX_PRODUCT_FACTORS: usize = 20;

/// Dynamics restricted to the value vectors `z(x)` that actually occur.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedSystem {
    /// Attained value vectors `(z_1(x), …, z_s(x))`, in increasing δ-index order.
    pub classes: Vec<Vec<bool>>,
    /// Class of every original state (0-based).
    pub state_class: Vec<usize>,
    /// `transitions[b][c]`: successor class of class `c` under block `b`.
    pub transitions: Vec<Vec<usize>>,
}

impl ReducedSystem {
    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    /// Product-form δ-index (0-based) of a class. Only meaningful while the
    /// product form exists, i.e. for at most [`MAX_PRODUCT_FACTORS`] functions.
    pub fn class_z_pos(&self, c: usize) -> usize {
        self.classes[c]
            .iter()
            .fold(0usize, |acc, &b| (acc << 1) | usize::from(!b))
    }

    /// Reduced transitions as `q x q` logical matrices, one per block.
    pub fn blocks(&self) -> Vec<LogicalMatrix> {
        let q = self.class_count();
        self.transitions
            .iter()
            .map(|t| LogicalMatrix::new(q, t.clone()).expect("class indices are in range"))
            .collect()
    }
}

/// The aggregated (control) network `z(t+1) = H u(t) z(t)` on a closure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AggregatedSystem {
    pub s: usize,
    pub block_ids: Vec<usize>,
    pub successors: Vec<Vec<usize>>,
    /// Product form `H_b = S_{σ_b(1)} * … * S_{σ_b(s)}`; `None` when `s` exceeds
    /// [`MAX_PRODUCT_FACTORS`].
    pub h_blocks: Option<Vec<LogicalMatrix>>,
    /// `G = G_1 * … * G_s`, present together with the product form.
    pub structure: Option<SubspaceMatrix>,
    pub reduced: ReducedSystem,
}

impl AggregatedSystem {
    /// `[H_1, …, H_k]` over the blocks in scope.
    pub fn h(&self) -> Option<LogicalMatrix> {
        self.h_blocks
            .as_ref()
            .map(|b| LogicalMatrix::hconcat(b).expect("blocks share their row count"))
    }
}

/// Product-form dynamics of one successor map: factor `j` of the next state
/// is factor `σ(j)` of the current one.
pub fn product_form(successor: &[usize]) -> LogicalMatrix {
    let s = successor.len();
    let selectors: Vec<LogicalMatrix> = successor.iter().map(|&k| factor_selector(k, s)).collect();
    LogicalMatrix::khatri_rao_all(&selectors).expect("selectors share their width")
}

fn reduced_form(cl: &Closure) -> ReducedSystem {
    let s = cl.len();
    let states = 1usize << cl.functions.n();
    let vectors: Vec<Vec<bool>> = (0..states)
        .map(|x| cl.functions.iter().map(|g| g.target(x) == 0).collect())
        .collect();
    let mut classes = vectors.clone();
    // δ-index order: true (δ_2^1) sorts before false
    classes.sort_by(|a, b| a.iter().map(|v| !v).cmp(b.iter().map(|v| !v)));
    classes.dedup();
    let lookup: HashMap<&Vec<bool>, usize> = classes.iter().enumerate().map(|(i, c)| (c, i)).collect();
    let state_class = vectors.iter().map(|v| lookup[v]).collect();
    let transitions = cl
        .successors
        .iter()
        .map(|sigma| {
            classes
                .iter()
                .map(|c| {
                    let next: Vec<bool> = (0..s).map(|j| c[sigma[j]]).collect();
                    *lookup
                        .get(&next)
                        .expect("successor of an attained value vector is attained")
                })
                .collect()
        })
        .collect();
    ReducedSystem {
        classes,
        state_class,
        transitions,
    }
}

/// Aggregated dynamics of a closure, in product form (when small enough) and
/// reduced to attained classes.
pub fn aggregated_dynamics(cl: &Closure) -> Result<AggregatedSystem> {
    let (h_blocks, structure) = if cl.len() <= MAX_PRODUCT_FACTORS {
        let h = cl.successors.iter().map(|sigma| product_form(sigma)).collect();
        (Some(h), Some(combined_structure(&cl.functions)?))
    } else {
        (None, None)
    };
    Ok(AggregatedSystem {
        s: cl.len(),
        block_ids: cl.block_ids.clone(),
        successors: cl.successors.clone(),
        h_blocks,
        structure,
        reduced: reduced_form(cl),
    })
}
