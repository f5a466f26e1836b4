//! Algebraic state-space representations of Boolean (control) networks.

mod dot;

pub use dot::{state_transition_graph, DotOptions, TransitionTable, DEFAULT_EDGE_CAP};

use crate::error::{Error, Result};
use crate::formula::{structure_matrix, NetworkDef};
use crate::stp::{DeltaVector, LogicalMatrix};

/// Componentwise and overall ASSR of an autonomous network, `x(t+1) = M x(t)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BnAssr {
    pub n: usize,
    pub componentwise: Vec<LogicalMatrix>,
    pub overall: LogicalMatrix,
}

impl BnAssr {
    pub fn into_bcn(self) -> BcnAssr {
        BcnAssr {
            n: self.n,
            m: 0,
            componentwise: self.componentwise,
            blocks: vec![self.overall.clone()],
            l: self.overall,
        }
    }

    pub fn step(&self, x: DeltaVector) -> Result<DeltaVector> {
        self.overall.apply(x)
    }
}

/// ASSR of a control network, `x(t+1) = L u(t) x(t)` with `L = [M_1, …, M_{2^m}]`.
///
/// An autonomous network is the `m = 0` case with a single block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BcnAssr {
    pub n: usize,
    pub m: usize,
    pub componentwise: Vec<LogicalMatrix>,
    pub l: LogicalMatrix,
    pub blocks: Vec<LogicalMatrix>,
}

impl BcnAssr {
    /// Builds from the per-control blocks `M_r = L δ_{2^m}^r`.
    pub fn from_blocks(n: usize, blocks: Vec<LogicalMatrix>) -> Result<Self> {
        let states = 1usize << n;
        if !blocks.len().is_power_of_two() {
            return Err(Error::dims(format!(
                "{} blocks is not a power of two",
                blocks.len()
            )));
        }
        if blocks.iter().any(|b| b.rows() != states || b.cols() != states) {
            return Err(Error::dims(format!("every block must be {states}x{states}")));
        }
        let m = blocks.len().trailing_zeros() as usize;
        let l = LogicalMatrix::hconcat(&blocks)?;
        Ok(BcnAssr {
            n,
            m,
            componentwise: Vec::new(),
            l,
            blocks,
        })
    }

    /// Splits `L` (`2^n x 2^{m+n}`) into its control blocks.
    pub fn from_l(n: usize, m: usize, l: LogicalMatrix) -> Result<Self> {
        let states = 1usize << n;
        if l.rows() != states || l.cols() != states << m {
            return Err(Error::dims(format!(
                "L is {}x{}, expected {states}x{}",
                l.rows(),
                l.cols(),
                states << m
            )));
        }
        let blocks = (0..1usize << m)
            .map(|r| l.column_block(r * states, states))
            .collect::<Result<Vec<_>>>()?;
        Ok(BcnAssr {
            n,
            m,
            componentwise: Vec::new(),
            l,
            blocks,
        })
    }

    pub fn state_count(&self) -> usize {
        1 << self.n
    }

    pub fn control_count(&self) -> usize {
        1 << self.m
    }

    pub fn step(&self, x: DeltaVector, u: DeltaVector) -> Result<DeltaVector> {
        step(self, x, u)
    }
}

fn compile_rules(net: &NetworkDef) -> Result<Vec<LogicalMatrix>> {
    let scope = net.scope();
    net.update_rules
        .iter()
        .map(|f| structure_matrix(f, &scope))
        .collect()
}

/// Compiles an autonomous network: `M = M_1 * M_2 * … * M_n`.
pub fn assemble_bn(net: &NetworkDef) -> Result<BnAssr> {
    if net.m() != 0 {
        return Err(Error::format(format!(
            "network has {} control inputs; use assemble_bcn",
            net.m()
        )));
    }
    let componentwise = compile_rules(net)?;
    let overall = LogicalMatrix::khatri_rao_all(&componentwise)?;
    Ok(BnAssr {
        n: net.n(),
        componentwise,
        overall,
    })
}

/// Compiles a control network over `(u_1, …, u_m, x_1, …, x_n)`, controls
/// outermost. With no inputs this yields the single-block form of the
/// autonomous network.
pub fn assemble_bcn(net: &NetworkDef) -> Result<BcnAssr> {
    let componentwise = compile_rules(net)?;
    let l = LogicalMatrix::khatri_rao_all(&componentwise)?;
    let mut sys = BcnAssr::from_l(net.n(), net.m(), l)?;
    sys.componentwise = componentwise;
    Ok(sys)
}

/// `x(t+1) = L u(t) x(t)`, i.e. column `x` of block `u`.
pub fn step(sys: &BcnAssr, x: DeltaVector, u: DeltaVector) -> Result<DeltaVector> {
    if u.dim() != sys.control_count() {
        return Err(Error::dims(format!(
            "control of dimension {} for a system with {} controls",
            u.dim(),
            sys.control_count()
        )));
    }
    sys.blocks[u.pos()].apply(x)
}

/// States `x(0), x(1), …, x(len)` under the given control sequence.
pub fn trajectory(sys: &BcnAssr, x0: DeltaVector, controls: &[DeltaVector]) -> Result<Vec<DeltaVector>> {
    let mut out = vec![x0];
    let mut x = x0;
    for &u in controls {
        x = step(sys, x, u)?;
        out.push(x);
    }
    Ok(out)
}

/// Output map `y(t) = H x(t)` with `H = Ξ_1 * … * Ξ_p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OutputMap {
    pub names: Vec<String>,
    pub per_output: Vec<LogicalMatrix>,
    pub combined: LogicalMatrix,
}

impl OutputMap {
    pub fn new(names: Vec<String>, per_output: Vec<LogicalMatrix>) -> Result<Self> {
        if names.len() != per_output.len() {
            return Err(Error::dims("one name per output function"));
        }
        if per_output.iter().any(|g| g.rows() != 2) {
            return Err(Error::dims("output functions must be 2 x 2^n"));
        }
        let combined = LogicalMatrix::khatri_rao_all(&per_output)?;
        Ok(OutputMap {
            names,
            per_output,
            combined,
        })
    }

    /// Compiles the network's output rules; `None` when it declares none.
    pub fn compile(net: &NetworkDef) -> Result<Option<Self>> {
        if net.outputs.is_empty() {
            return Ok(None);
        }
        let per_output = net
            .outputs
            .iter()
            .map(|(_, f)| structure_matrix(f, &net.state_vars))
            .collect::<Result<Vec<_>>>()?;
        let names = net.outputs.iter().map(|(n, _)| n.clone()).collect();
        Self::new(names, per_output).map(Some)
    }

    pub fn p(&self) -> usize {
        self.per_output.len()
    }

    /// `H̃ = H T^T`.
    pub fn transform(&self, t: &CoordinateChange) -> Result<OutputMap> {
        let tt = t.transpose();
        let per_output = self
            .per_output
            .iter()
            .map(|g| g.compose(&tt))
            .collect::<Result<Vec<_>>>()?;
        Self::new(self.names.clone(), per_output)
    }
}

/// A permutation `T` with `z = T x`; `T^{-1} = T^T`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoordinateChange {
    t: LogicalMatrix,
    tt: LogicalMatrix,
}

impl CoordinateChange {
    pub fn new(t: LogicalMatrix) -> Result<Self> {
        let tt = t.permutation_transpose()?;
        Ok(CoordinateChange { t, tt })
    }

    pub fn identity(states: usize) -> Self {
        let t = LogicalMatrix::identity(states);
        CoordinateChange { tt: t.clone(), t }
    }

    pub fn matrix(&self) -> &LogicalMatrix {
        &self.t
    }

    pub fn transpose(&self) -> LogicalMatrix {
        self.tt.clone()
    }

    pub fn inverse(&self) -> CoordinateChange {
        CoordinateChange {
            t: self.tt.clone(),
            tt: self.t.clone(),
        }
    }
}

/// `L̃ = T L (I_{2^m} ⊗ T^T)`, i.e. every block becomes `T M_r T^T`.
pub fn apply_coordinate_change(sys: &BcnAssr, t: &CoordinateChange) -> Result<BcnAssr> {
    if t.t.rows() != sys.state_count() {
        return Err(Error::dims(format!(
            "coordinate change of size {} for {} states",
            t.t.rows(),
            sys.state_count()
        )));
    }
    let blocks = sys
        .blocks
        .iter()
        .map(|b| t.t.compose(&b.compose(&t.tt)?))
        .collect::<Result<Vec<_>>>()?;
    // The componentwise rules belong to the x-frame and are not carried over.
    BcnAssr::from_blocks(sys.n, blocks)
}

/// All cycles of the functional graph `x ↦ M x`.
///
/// Each cycle starts at its smallest state and cycles are ordered by that
/// state; fixed points are cycles of length one.
pub fn find_attractors(m: &LogicalMatrix) -> Result<Vec<Vec<DeltaVector>>> {
    let k = m.cols();
    if m.rows() != k {
        return Err(Error::dims("attractors need a square transition matrix"));
    }
    // 0 = unvisited, 1 = on current path, 2 = done
    let mut mark = vec![0u8; k];
    let mut cycles = Vec::new();
    for start in 0..k {
        if mark[start] != 0 {
            continue;
        }
        let mut path = Vec::new();
        let mut x = start;
        while mark[x] == 0 {
            mark[x] = 1;
            path.push(x);
            x = m.target(x);
        }
        if mark[x] == 1 {
            let at = path.iter().position(|&p| p == x).expect("x is on the path");
            let mut cycle = path[at..].to_vec();
            let min = (0..cycle.len()).min_by_key(|&i| cycle[i]).unwrap();
            cycle.rotate_left(min);
            cycles.push(cycle);
        }
        for p in path {
            mark[p] = 2;
        }
    }
    cycles.sort_by_key(|c| c[0]);
    Ok(cycles
        .into_iter()
        .map(|c| c.into_iter().map(|p| DeltaVector::new(k, p + 1).unwrap()).collect())
        .collect())
}
