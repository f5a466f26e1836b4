use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{aggregated_bcn, closure_bcn, ControlClosure};
use crate::error::{Error, Result};
use crate::invariant::{AggregatedSystem, ClosureOptions, FunctionSet, Provenance};
use crate::network::{BcnAssr, BnAssr, CoordinateChange, OutputMap};
use crate::stp::{factor_selector, LogicalMatrix};

/// Minimum realization `z(t+1) = H u(t) z(t)`, `y(t) = Ξ z(t)` of an
/// input-output network.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Realization {
    pub closure: ControlClosure,
    pub aggregated: AggregatedSystem,
    /// Position of each output function inside the closure.
    pub output_positions: Vec<usize>,
    /// `Ξ = S_{k_1} * … * S_{k_p}` over the product form.
    pub xi: Option<LogicalMatrix>,
    /// Output value (0-based δ index over `2^p`) of each reduced class.
    pub reduced_output: Vec<usize>,
}

impl Realization {
    /// Full product-form state count and attained class count.
    pub fn sizes(&self) -> (u128, usize) {
        (1u128 << self.aggregated.s, self.aggregated.reduced.class_count())
    }
}

/// Closure of the outputs under every control block, its aggregated dynamics
/// and the output selector.
pub fn min_realization(sys: &BcnAssr, outputs: &OutputMap, opts: ClosureOptions) -> Result<Realization> {
    if outputs.p() == 0 {
        return Err(Error::dims("minimum realization needs at least one output"));
    }
    let mut gens = FunctionSet::new(sys.n);
    for (name, f) in outputs.names.iter().zip(&outputs.per_output) {
        gens.insert(f.clone(), name.clone(), Provenance::Generator)?;
    }
    let closure = closure_bcn(&gens, sys, None, opts)?;
    let aggregated = aggregated_bcn(&closure)?;
    let output_positions: Vec<usize> = outputs
        .per_output
        .iter()
        .map(|f| closure.functions.position(f).expect("outputs seed the closure"))
        .collect();
    let s = closure.len();
    let xi = aggregated.h_blocks.as_ref().map(|_| {
        let selectors: Vec<LogicalMatrix> = output_positions.iter().map(|&k| factor_selector(k, s)).collect();
        LogicalMatrix::khatri_rao_all(&selectors).expect("selectors share their width")
    });
    let reduced_output = aggregated
        .reduced
        .classes
        .iter()
        .map(|c| {
            output_positions
                .iter()
                .fold(0usize, |acc, &k| (acc << 1) | usize::from(!c[k]))
        })
        .collect();
    Ok(Realization {
        closure,
        aggregated,
        output_positions,
        xi,
        reduced_output,
    })
}

/// The minimum realization of an autonomous network observed through outputs.
pub fn observe_based_realization(bn: &BnAssr, outputs: &OutputMap, opts: ClosureOptions) -> Result<Realization> {
    min_realization(&bn.clone().into_bcn(), outputs, opts)
}

pub const DEFAULT_VERIFY_CAP: u128 = 1 << 24;

#[derive(Clone, Copy, Debug)]
pub struct VerifyOptions {
    /// Largest `2^n · 2^{m·horizon}` checked exhaustively.
    pub cap: u128,
    /// Beyond the cap, sample this many (state, word) pairs with the seed.
    pub sampling: Option<(u64, usize)>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            cap: DEFAULT_VERIFY_CAP,
            sampling: None,
        }
    }
}

/// First diverging output, all indices 1-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub x0: usize,
    pub controls: Vec<usize>,
    pub step: usize,
    pub expected_y: usize,
    pub realized_y: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IoReport {
    pub equivalent: bool,
    pub exhaustive: bool,
    pub words_checked: u128,
    pub counterexample: Option<Counterexample>,
}

/// Stepping view of a realization: product form when present, else reduced.
struct RealizedDynamics<'a> {
    real: &'a Realization,
    block_of_control: Vec<Option<usize>>,
}

impl<'a> RealizedDynamics<'a> {
    fn new(real: &'a Realization, controls: usize) -> Result<Self> {
        let mut block_of_control = vec![None; controls];
        for (b, &id) in real.aggregated.block_ids.iter().enumerate() {
            if id < controls {
                block_of_control[id] = Some(b);
            }
        }
        if block_of_control.iter().any(Option::is_none) {
            return Err(Error::dims("realization does not cover every control"));
        }
        Ok(RealizedDynamics { real, block_of_control })
    }

    fn uses_product(&self) -> bool {
        self.real.aggregated.h_blocks.is_some() && self.real.xi.is_some()
    }

    fn start(&self, x0: usize) -> usize {
        let agg = &self.real.aggregated;
        match (&agg.structure, self.uses_product()) {
            (Some(g), true) => g.g.target(x0),
            _ => agg.reduced.state_class[x0],
        }
    }

    fn next(&self, z: usize, u: usize) -> usize {
        let b = self.block_of_control[u].expect("checked in new");
        let agg = &self.real.aggregated;
        if self.uses_product() {
            agg.h_blocks.as_ref().unwrap()[b].target(z)
        } else {
            agg.reduced.transitions[b][z]
        }
    }

    fn output(&self, z: usize) -> usize {
        if self.uses_product() {
            self.real.xi.as_ref().unwrap().target(z)
        } else {
            self.real.reduced_output[z]
        }
    }
}

struct Search<'a> {
    sys: &'a BcnAssr,
    outputs: &'a OutputMap,
    dyn_: RealizedDynamics<'a>,
    horizon: usize,
    word: Vec<usize>,
    words: u128,
}

impl Search<'_> {
    fn compare(&self, x0: usize, x: usize, z: usize) -> Option<Counterexample> {
        let expected = self.outputs.combined.target(x);
        let got = self.dyn_.output(z);
        (expected != got).then(|| Counterexample {
            x0: x0 + 1,
            controls: self.word.iter().map(|u| u + 1).collect(),
            step: self.word.len(),
            expected_y: expected + 1,
            realized_y: got + 1,
        })
    }

    fn dfs(&mut self, x0: usize, x: usize, z: usize) -> Option<Counterexample> {
        if let Some(cx) = self.compare(x0, x, z) {
            return Some(cx);
        }
        if self.word.len() == self.horizon {
            self.words += 1;
            return None;
        }
        for u in 0..self.sys.control_count() {
            self.word.push(u);
            let found = self.dfs(x0, self.sys.blocks[u].target(x), self.dyn_.next(z, u));
            self.word.pop();
            if found.is_some() {
                return found;
            }
        }
        None
    }
}

/// Compares the output sequences of the network and the realization, started
/// at `x0` and `z0 = G x0`, for every control word up to `horizon`.
pub fn verify_io_equivalence(
    sys: &BcnAssr,
    outputs: &OutputMap,
    real: &Realization,
    horizon: usize,
    opts: VerifyOptions,
) -> Result<IoReport> {
    if horizon == 0 {
        return Err(Error::dims("horizon must be at least 1"));
    }
    if outputs.combined.cols() != sys.state_count() {
        return Err(Error::dims("output map does not match the network"));
    }
    let dyn_ = RealizedDynamics::new(real, sys.control_count())?;
    let total = (sys.m as u32)
        .checked_mul(horizon as u32)
        .and_then(|bits| 1u128.checked_shl(bits))
        .and_then(|w| w.checked_mul(sys.state_count() as u128));
    let mut search = Search {
        sys,
        outputs,
        dyn_,
        horizon,
        word: Vec::with_capacity(horizon),
        words: 0,
    };
    match total {
        Some(t) if t <= opts.cap => {
            for x0 in 0..sys.state_count() {
                let z0 = search.dyn_.start(x0);
                if let Some(cx) = search.dfs(x0, x0, z0) {
                    return Ok(IoReport {
                        equivalent: false,
                        exhaustive: true,
                        words_checked: search.words,
                        counterexample: Some(cx),
                    });
                }
            }
            Ok(IoReport {
                equivalent: true,
                exhaustive: true,
                words_checked: search.words,
                counterexample: None,
            })
        }
        _ => {
            let (seed, samples) = opts.sampling.ok_or(Error::CapExceeded {
                what: "exhaustive verification words",
                limit: opts.cap.min(usize::MAX as u128) as usize,
                frontier: total.map_or(usize::MAX, |t| t.min(usize::MAX as u128) as usize),
            })?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..samples {
                let x0 = rng.gen_range(0..sys.state_count());
                let (mut x, mut z) = (x0, search.dyn_.start(x0));
                search.word.clear();
                if let Some(cx) = search.compare(x0, x, z) {
                    return Ok(sampled_failure(search.words, cx));
                }
                for _ in 0..horizon {
                    let u = rng.gen_range(0..sys.control_count());
                    search.word.push(u);
                    x = sys.blocks[u].target(x);
                    z = search.dyn_.next(z, u);
                    if let Some(cx) = search.compare(x0, x, z) {
                        return Ok(sampled_failure(search.words, cx));
                    }
                }
                search.words += 1;
            }
            Ok(IoReport {
                equivalent: true,
                exhaustive: false,
                words_checked: search.words,
                counterexample: None,
            })
        }
    }
}

fn sampled_failure(words: u128, cx: Counterexample) -> IoReport {
    IoReport {
        equivalent: false,
        exhaustive: false,
        words_checked: words,
        counterexample: Some(cx),
    }
}

/// Outcome of a block-diagonal check; the witness is `(block, row, col)`, 1-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockCheck {
    pub block_diagonal: bool,
    pub witness: Option<(usize, usize, usize)>,
}

/// Whether every `T M_i T^T` is block diagonal with the given block sizes.
pub fn verify_block_structure(sys: &BcnAssr, t: &CoordinateChange, partition: &[usize]) -> Result<BlockCheck> {
    if partition.is_empty() || partition.contains(&0) {
        return Err(Error::format("partition blocks must be positive"));
    }
    if partition.iter().sum::<usize>() != sys.state_count() {
        return Err(Error::format(format!(
            "partition sums to {}, expected {}",
            partition.iter().sum::<usize>(),
            sys.state_count()
        )));
    }
    if t.matrix().rows() != sys.state_count() {
        return Err(Error::dims("coordinate change does not match the network"));
    }
    let mut part_of = Vec::with_capacity(sys.state_count());
    for (p, &size) in partition.iter().enumerate() {
        part_of.extend(std::iter::repeat_n(p, size));
    }
    let tt = t.transpose();
    for (i, block) in sys.blocks.iter().enumerate() {
        let conj = t.matrix().compose(&block.compose(&tt)?)?;
        for col in 0..conj.cols() {
            let row = conj.target(col);
            if part_of[row] != part_of[col] {
                return Ok(BlockCheck {
                    block_diagonal: false,
                    witness: Some((i + 1, row + 1, col + 1)),
                });
            }
        }
    }
    Ok(BlockCheck {
        block_diagonal: true,
        witness: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(p: usize, idx: &[usize]) -> LogicalMatrix {
        LogicalMatrix::from_delta(p, idx).unwrap()
    }

    fn toggle_system() -> (BcnAssr, OutputMap) {
        // one control: u=1 keeps x, u=2 flips x1
        let sys = BcnAssr::from_blocks(2, vec![LogicalMatrix::identity(4), d(4, &[3, 4, 1, 2])]).unwrap();
        let out = OutputMap::new(vec!["y".into()], vec![d(2, &[1, 1, 2, 2])]).unwrap();
        (sys, out)
    }

    #[test]
    fn realization_of_toggle() {
        let (sys, out) = toggle_system();
        let real = min_realization(&sys, &out, ClosureOptions::default()).unwrap();
        assert_eq!(real.closure.len(), 2);
        let rep = verify_io_equivalence(&sys, &out, &real, 4, VerifyOptions::default()).unwrap();
        assert!(rep.equivalent && rep.exhaustive);
        assert_eq!(rep.words_checked, 4 * 16);
    }

    #[test]
    fn corrupted_realization_is_caught() {
        let (sys, out) = toggle_system();
        let mut real = min_realization(&sys, &out, ClosureOptions::default()).unwrap();
        let h = &mut real.aggregated.h_blocks.as_mut().unwrap()[1];
        // z = (1, 0) is attained (x1 = 1); send it to itself instead of (0, 1)
        let mut t = h.targets().to_vec();
        t[1] = 1;
        *h = LogicalMatrix::new(4, t).unwrap();
        let rep = verify_io_equivalence(&sys, &out, &real, 2, VerifyOptions::default()).unwrap();
        assert!(!rep.equivalent);
        let cx = rep.counterexample.unwrap();
        assert!(cx.step <= 2);
    }

    #[test]
    fn sampling_beyond_cap() {
        let (sys, out) = toggle_system();
        let real = min_realization(&sys, &out, ClosureOptions::default()).unwrap();
        let strict = VerifyOptions { cap: 10, sampling: None };
        assert!(matches!(
            verify_io_equivalence(&sys, &out, &real, 4, strict),
            Err(Error::CapExceeded { .. })
        ));
        let sampled = VerifyOptions { cap: 10, sampling: Some((7, 50)) };
        let rep = verify_io_equivalence(&sys, &out, &real, 4, sampled).unwrap();
        assert!(rep.equivalent && !rep.exhaustive);
        assert_eq!(rep.words_checked, 50);
        assert!(verify_io_equivalence(&sys, &out, &real, 0, VerifyOptions::default()).is_err());
    }

    #[test]
    fn block_structure_checks() {
        let (sys, _) = toggle_system();
        let id = CoordinateChange::identity(4);
        assert!(verify_block_structure(&sys, &id, &[4]).unwrap().block_diagonal);
        let split = verify_block_structure(&sys, &id, &[2, 2]).unwrap();
        assert!(!split.block_diagonal);
        assert_eq!(split.witness, Some((2, 3, 1)));
        assert!(verify_block_structure(&sys, &id, &[3, 2]).is_err());
        assert!(verify_block_structure(&sys, &id, &[4, 0]).is_err());
    }
}
