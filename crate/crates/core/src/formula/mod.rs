//! Boolean formulas, their structure matrices, and index functions of state
//! subsets.

mod netfile;
mod parser;

pub use netfile::{parse_network, NetworkDef};
pub use parser::{parse_formula, parse_formula_at};

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::error::{Error, Result};
use crate::stp::{decode_pos, state_index_encode, LogicalMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BinOp {
    And,
    Or,
    Xor,
    Iff,
    Implies,
}

impl BinOp {
    pub fn apply(self, a: bool, b: bool) -> bool {
        match self {
            BinOp::And => a && b,
            BinOp::Or => a || b,
            BinOp::Xor => a != b,
            BinOp::Iff => a == b,
            BinOp::Implies => !a || b,
        }
    }

    fn symbol(self) -> &'static str {
        match self {
            BinOp::And => "&",
            BinOp::Or => "|",
            BinOp::Xor => "^",
            BinOp::Iff => "<->",
            BinOp::Implies => "->",
        }
    }

    fn precedence(self) -> u8 {
        match self {
            BinOp::Iff => 1,
            BinOp::Implies => 2,
            BinOp::Or => 3,
            BinOp::Xor => 4,
            BinOp::And => 5,
        }
    }
}

/// Abstract syntax of a logical update or output rule.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    Const(bool),
    Var(String),
    Not(Box<Formula>),
    Binary(BinOp, Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn var(name: impl Into<String>) -> Formula {
        Formula::Var(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn binary(op: BinOp, a: Formula, b: Formula) -> Formula {
        Formula::Binary(op, Box::new(a), Box::new(b))
    }

    /// Left-nested fold of `op` over the operands; `None` when empty.
    pub fn fold(op: BinOp, operands: impl IntoIterator<Item = Formula>) -> Option<Formula> {
        operands
            .into_iter()
            .reduce(|acc, f| Formula::binary(op, acc, f))
    }

    /// Variable names in order of first occurrence.
    pub fn variables(&self) -> Vec<String> {
        fn walk(f: &Formula, out: &mut Vec<String>) {
            match f {
                Formula::Const(_) => {}
                Formula::Var(v) => {
                    if !out.contains(v) {
                        out.push(v.clone());
                    }
                }
                Formula::Not(a) => walk(a, out),
                Formula::Binary(_, a, b) => {
                    walk(a, out);
                    walk(b, out);
                }
            }
        }
        let mut out = Vec::new();
        walk(self, &mut out);
        out
    }

    /// Classical evaluation; every variable must be bound.
    pub fn evaluate(&self, assignment: &HashMap<String, bool>) -> Result<bool> {
        Ok(match self {
            Formula::Const(b) => *b,
            Formula::Var(v) => *assignment
                .get(v)
                .ok_or_else(|| Error::UnboundVariable(v.clone()))?,
            Formula::Not(a) => !a.evaluate(assignment)?,
            Formula::Binary(op, a, b) => op.apply(a.evaluate(assignment)?, b.evaluate(assignment)?),
        })
    }

    /// Resolves variable names to positions in `vars` for fast repeated evaluation.
    pub fn bind(&self, vars: &[String]) -> Result<BoundFormula> {
        Ok(match self {
            Formula::Const(b) => BoundFormula::Const(*b),
            Formula::Var(v) => BoundFormula::Var(
                vars.iter()
                    .position(|n| n == v)
                    .ok_or_else(|| Error::UnboundVariable(v.clone()))?,
            ),
            Formula::Not(a) => BoundFormula::Not(Box::new(a.bind(vars)?)),
            Formula::Binary(op, a, b) => {
                BoundFormula::Binary(*op, Box::new(a.bind(vars)?), Box::new(b.bind(vars)?))
            }
        })
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Binary(op, _, _) => op.precedence(),
            Formula::Not(_) => 6,
            Formula::Const(_) | Formula::Var(_) => 7,
        }
    }
}

fn write_operand(f: &mut fmt::Formatter<'_>, e: &Formula, parens: bool) -> fmt::Result {
    if parens {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

/// Prints in the DSL syntax with the minimal parentheses needed to parse
/// back to the same tree.
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Const(b) => write!(f, "{}", u8::from(*b)),
            Formula::Var(v) => write!(f, "{v}"),
            Formula::Not(a) => {
                write!(f, "!")?;
                write_operand(f, a, a.precedence() < 6)
            }
            Formula::Binary(op, a, b) => {
                let p = op.precedence();
                let right_assoc = *op == BinOp::Implies;
                let lp = if right_assoc { a.precedence() <= p } else { a.precedence() < p };
                let rp = if right_assoc { b.precedence() < p } else { b.precedence() <= p };
                write_operand(f, a, lp)?;
                write!(f, " {} ", op.symbol())?;
                write_operand(f, b, rp)
            }
        }
    }
}

/// A formula whose variables are positions into an assignment slice.
#[derive(Clone, Debug)]
pub enum BoundFormula {
    Const(bool),
    Var(usize),
    Not(Box<BoundFormula>),
    Binary(BinOp, Box<BoundFormula>, Box<BoundFormula>),
}

impl BoundFormula {
    pub fn eval(&self, bits: &[bool]) -> bool {
        match self {
            BoundFormula::Const(b) => *b,
            BoundFormula::Var(i) => bits[*i],
            BoundFormula::Not(a) => !a.eval(bits),
            BoundFormula::Binary(op, a, b) => op.apply(a.eval(bits), b.eval(bits)),
        }
    }
}

/// Largest variable count accepted by [`structure_matrix`].
pub const MAX_TRUTH_TABLE_VARS: usize = 24;

/// The unique `2 x 2^k` logical matrix `M_f` with `f(v_1,…,v_k) = M_f ⋉ v_1 ⋉ … ⋉ v_k`,
/// built by enumerating the truth table in δ-index order.
pub fn structure_matrix(f: &Formula, ordered_vars: &[String]) -> Result<LogicalMatrix> {
    let k = ordered_vars.len();
    if k > MAX_TRUTH_TABLE_VARS {
        return Err(Error::CapExceeded {
            what: "truth-table variable count",
            limit: MAX_TRUTH_TABLE_VARS,
            frontier: k,
        });
    }
    let bound = f.bind(ordered_vars)?;
    let targets = (0..1usize << k)
        .map(|pos| usize::from(!bound.eval(&decode_pos(pos, k))))
        .collect();
    LogicalMatrix::new(2, targets)
}

/// A subset of the `2^n` states, by 1-based δ index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubsetSpec {
    n: usize,
    members: BTreeSet<usize>,
}

impl SubsetSpec {
    pub fn from_indices(n: usize, indices: impl IntoIterator<Item = usize>) -> Result<Self> {
        let size = 1usize << n;
        let members: BTreeSet<usize> = indices.into_iter().collect();
        if let Some(&bad) = members.iter().find(|&&i| i == 0 || i > size) {
            return Err(Error::dims(format!("state index {bad} outside 1..={size}")));
        }
        Ok(SubsetSpec { n, members })
    }

    /// Members given as Boolean tuples of length `n`.
    pub fn from_tuples(n: usize, tuples: &[Vec<bool>]) -> Result<Self> {
        let mut idx = Vec::with_capacity(tuples.len());
        for t in tuples {
            if t.len() != n {
                return Err(Error::dims(format!("tuple of length {} for n = {n}", t.len())));
            }
            idx.push(state_index_encode(t).index());
        }
        Self::from_indices(n, idx)
    }

    /// The states where a scalar logical function is true.
    pub fn support_of(g: &LogicalMatrix) -> Result<Self> {
        if g.rows() != 2 || !g.cols().is_power_of_two() {
            return Err(Error::dims("support needs a 2 x 2^n logical matrix"));
        }
        let n = g.cols().trailing_zeros() as usize;
        Self::from_indices(
            n,
            g.targets()
                .iter()
                .enumerate()
                .filter(|(_, &t)| t == 0)
                .map(|(j, _)| j + 1),
        )
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn members(&self) -> &BTreeSet<usize> {
        &self.members
    }
}

/// Index function of a state subset: column `i` is `δ_2^1` iff `i ∈ S`.
pub fn index_function(s: &SubsetSpec) -> LogicalMatrix {
    let targets = (1..=1usize << s.n)
        .map(|i| usize::from(!s.members.contains(&i)))
        .collect();
    LogicalMatrix::new(2, targets).expect("targets are 0 or 1")
}
