//! Reconstructions of the worked examples as fixtures: networks in the `.bn`
//! format, expected matrices, the transcribed opinion-grid matrices and a
//! discrepancy report for the published numbers that do not reproduce.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::formula::{index_function, parse_formula, structure_matrix, BinOp, Formula, NetworkDef, SubsetSpec};
use crate::invariant::{aggregated_dynamics, closure_bn, h_star, ClosureOptions, FunctionSet, SubspaceMatrix};
use crate::io::{compare_columns, write_discrepancies, write_logical, Discrepancy};
use crate::network::{assemble_bcn, assemble_bn, BcnAssr, OutputMap};
use crate::stp::{decode_pos, LogicalMatrix};
use crate::control::{aggregated_bcn, apply_constraints, closure_bcn, ControlConstraint};

const APPENDIX_I: &str = include_str!("../fixtures/appendix_i.delta");
const APPENDIX_II: &str = include_str!("../fixtures/appendix_ii.delta");

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CorpusName {
    Example315,
    Grid9,
    Grid9Controlled,
    Example55,
}

impl CorpusName {
    pub const ALL: [CorpusName; 4] = [
        CorpusName::Example315,
        CorpusName::Grid9,
        CorpusName::Grid9Controlled,
        CorpusName::Example55,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CorpusName::Example315 => "example-3.1.5",
            CorpusName::Grid9 => "grid-9",
            CorpusName::Grid9Controlled => "grid-9-controlled",
            CorpusName::Example55 => "example-5.5",
        }
    }
}

impl fmt::Display for CorpusName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CorpusName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CorpusName::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| Error::UnknownCorpus(s.to_string()))
    }
}

/// Files making up one fixture, in write order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Fixture {
    pub files: Vec<(String, String)>,
}

impl Fixture {
    fn add(&mut self, name: &str, contents: String) {
        self.files.push((name.to_string(), contents));
    }

    pub fn file(&self, name: &str) -> Option<&str> {
        self.files.iter().find(|(n, _)| n == name).map(|(_, c)| c.as_str())
    }
}

fn vars(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{prefix}{i}")).collect()
}

fn matrix_text(name: &str, m: &LogicalMatrix) -> String {
    let mut s = String::new();
    write_logical(&mut s, Some(name), m);
    s
}

// ---------------------------------------------------------------- 4-node BN

const EXAMPLE_315_DSL: &str = "\
x1 <- (x1 & x2 & !x4) | (!x1 & x2)
x2 <- x2 | (x3 <-> x4)
x3 <- (x1 & !x4) | (!x1 & x2) | (!x1 & !x2 & x4)
x4 <- x1 | !x2 | x4
";

/// The fourth update rule as printed alongside the example. It contradicts
/// the printed matrices; the rule above is the one they encode.
pub const EXAMPLE_315_PRINTED_X4: &str = "x1 & !x2 & x4";

/// The published transition matrix.
pub fn example_315_published_m() -> LogicalMatrix {
    LogicalMatrix::from_delta(16, &[11, 1, 11, 1, 11, 13, 15, 9, 1, 2, 1, 2, 9, 15, 13, 11]).expect("valid matrix")
}

/// Compiles the network with the printed fourth rule and reports where it
/// departs from the published matrix.
pub fn example_315_claims() -> Result<Vec<Discrepancy>> {
    let mut net = example_315_network();
    net.update_rules[3] = parse_formula(EXAMPLE_315_PRINTED_X4, &vars("x", 4))?;
    let printed = assemble_bn(&net)?.overall;
    let mut out = compare_columns("M (printed x4 rule)", &printed, &example_315_published_m())?;
    if !out.is_empty() {
        out.push(claim(
            CorpusName::Example315.as_str(),
            &format!("x4(t+1) = {EXAMPLE_315_PRINTED_X4}"),
            "the published M, Q and H* require x4(t+1) = x1 | !x2 | x4".into(),
        ));
    }
    Ok(out)
}

pub fn example_315_network() -> NetworkDef {
    crate::formula::parse_network(EXAMPLE_315_DSL).expect("built-in network parses")
}

/// `z1 = x1 ^ x4`, `z2 = !x2`, `z3 = x3 <-> !x4`.
pub fn example_315_subspace() -> Vec<(String, Formula)> {
    let scope = vars("x", 4);
    [("z1", "x1 ^ x4"), ("z2", "!x2"), ("z3", "x3 <-> !x4")]
        .into_iter()
        .map(|(n, f)| (n.to_string(), parse_formula(f, &scope).expect("built-in formula parses")))
        .collect()
}

pub fn example_315_functions() -> FunctionSet {
    let scope = vars("x", 4);
    let mut fs = FunctionSet::new(4);
    for (name, f) in example_315_subspace() {
        let g = structure_matrix(&f, &scope).expect("four variables");
        fs.insert(g, name, crate::invariant::Provenance::Generator)
            .expect("distinct functions");
    }
    fs
}

// -------------------------------------------------------------- opinion grid

/// The transcribed uncontrolled grid matrix.
pub fn appendix_m() -> LogicalMatrix {
    crate::io::parse_logical(APPENDIX_I).expect("fixture parses")
}

/// The transcribed control block for `u = δ_2^1`.
pub fn appendix_n() -> LogicalMatrix {
    crate::io::parse_logical(APPENDIX_II).expect("fixture parses")
}

pub fn appendix_text(controlled: bool) -> &'static str {
    if controlled {
        APPENDIX_II
    } else {
        APPENDIX_I
    }
}

/// A neighbour of a grid node: a fixed opinion or a variable.
enum Input {
    Fixed(bool),
    Var(String),
}

/// "At least `k` of `vars` are true" as a disjunction of conjunctions.
fn at_least(k: isize, vars: &[String]) -> Formula {
    if k <= 0 {
        return Formula::Const(true);
    }
    let k = k as usize;
    if k > vars.len() {
        return Formula::Const(false);
    }
    let mut terms = Vec::new();
    let mut pick = Vec::with_capacity(k);
    fn rec(start: usize, k: usize, vars: &[String], pick: &mut Vec<usize>, terms: &mut Vec<Formula>) {
        if pick.len() == k {
            let lits = pick.iter().map(|&i| Formula::var(vars[i].clone()));
            terms.push(Formula::fold(BinOp::And, lits).expect("k > 0"));
            return;
        }
        for i in start..vars.len() {
            pick.push(i);
            rec(i + 1, k, vars, pick, terms);
            pick.pop();
        }
    }
    rec(0, k, vars, &mut pick, &mut terms);
    Formula::fold(BinOp::Or, terms).expect("at least one term")
}

/// The 3x3 majority-rule opinion network.
///
/// Nodes `x1..x9` are row-major; each adopts the majority of itself and its
/// four neighbours. The rows above and below the grid always agree (1), the
/// columns left and right always disagree (0). In the controlled variant the
/// left neighbour of `x4` is the input `u`.
pub fn grid_network(controlled: bool) -> NetworkDef {
    let x = |r: usize, c: usize| format!("x{}", 3 * r + c + 1);
    let mut rules = Vec::with_capacity(9);
    for r in 0..3 {
        for c in 0..3 {
            let up = if r == 0 { Input::Fixed(true) } else { Input::Var(x(r - 1, c)) };
            let down = if r == 2 { Input::Fixed(true) } else { Input::Var(x(r + 1, c)) };
            let left = match (c, r) {
                (0, 1) if controlled => Input::Var("u".into()),
                (0, _) => Input::Fixed(false),
                _ => Input::Var(x(r, c - 1)),
            };
            let right = if c == 2 { Input::Fixed(false) } else { Input::Var(x(r, c + 1)) };
            let mut ones = 0isize;
            let mut free = Vec::new();
            for inp in [Input::Var(x(r, c)), up, down, left, right] {
                match inp {
                    Input::Fixed(b) => ones += isize::from(b),
                    Input::Var(v) => free.push(v),
                }
            }
            rules.push(at_least(3 - ones, &free));
        }
    }
    let controls = if controlled { vec!["u".to_string()] } else { Vec::new() };
    NetworkDef::new(vars("x", 9), controls, rules, Vec::new()).expect("grid network is well formed")
}

/// Index function of `S = {δ^43, δ^143, δ^165}`.
pub fn grid_index_set() -> SubsetSpec {
    SubsetSpec::from_indices(9, [43, 143, 165]).expect("indices in range")
}

/// Forbid `u = δ_2^2` while the aggregated state is in classes 3..6.
pub const GRID_CONSTRAINT: &str = "forbid u=2 when class in {3,4,5,6}\n";

fn support_text(g: &LogicalMatrix) -> String {
    let s = SubsetSpec::support_of(g).expect("scalar function");
    let items: Vec<String> = s.members().iter().map(|i| i.to_string()).collect();
    format!("{{{}}}", items.join(","))
}

fn claim(source: &str, claim: &str, derived: String) -> Discrepancy {
    Discrepancy::Claim {
        source: source.to_string(),
        claim: claim.to_string(),
        derived,
    }
}

/// Published uncontrolled-grid statements checked against the derived closure.
pub fn grid_claims(m: &LogicalMatrix) -> Result<Vec<Discrepancy>> {
    let src = CorpusName::Grid9.as_str();
    let g1 = index_function(&grid_index_set());
    let mut out = Vec::new();
    let g2 = g1.compose(m)?;
    if support_text(&g2) != "{22,89,150,278}" {
        out.push(claim(src, "support of G2 = G1 M is {22,89,150,278}", support_text(&g2)));
    }
    let g2m = g2.compose(m)?;
    if g2m != g1 {
        out.push(claim(
            src,
            "G2 M = G1",
            format!("G2 M has support {} but G1 has {}", support_text(&g2m), support_text(&g1)),
        ));
    }
    let cl = closure_bn(&FunctionSet::from_generators(9, [g1])?, m, ClosureOptions::default())?;
    let agg = aggregated_dynamics(&cl)?;
    let h4 = LogicalMatrix::from_delta(4, &[1, 3, 2, 4])?;
    let size2 = cl.len() == 2 && agg.h_blocks.as_ref().is_some_and(|h| h[0] == h4);
    if !size2 {
        let sigma: Vec<String> = cl.successors[0]
            .iter()
            .enumerate()
            .map(|(j, k)| format!("{}->{}", j + 1, k + 1))
            .collect();
        out.push(claim(
            src,
            "closure has 2 functions and z(t+1) = δ4[1,3,2,4] z(t)",
            format!("closure has {} functions, successor map {}", cl.len(), sigma.join(" ")),
        ));
    }
    Ok(out)
}

/// Published controlled-grid statements checked against the derived closure
/// under `[N, M]` seeded by `G1`.
pub fn controlled_grid_claims(sys: &BcnAssr) -> Result<Vec<Discrepancy>> {
    let src = CorpusName::Grid9Controlled.as_str();
    let g1 = index_function(&grid_index_set());
    let cl = closure_bcn(&FunctionSet::from_generators(9, [g1.clone()])?, sys, None, ClosureOptions::default())?;
    let mut out = Vec::new();
    if cl.len() != 7 {
        out.push(claim(src, "the closure has 7 functions G1..G7", format!("closure has {} functions", cl.len())));
    }
    let published: [(&str, &[usize]); 5] = [
        ("G3", &[43, 47, 143, 164, 229, 420]),
        ("G4", &[59, 118, 278]),
        ("G5", &[164, 299, 420]),
        ("G6", &[278]),
        ("G7", &[]),
    ];
    for (name, support) in published {
        let g = index_function(&SubsetSpec::from_indices(9, support.iter().copied())?);
        if cl.functions.position(&g).is_none() {
            out.push(claim(
                src,
                &format!("{name} has support {}", support_text(&g)),
                "no function of the derived closure has this support".into(),
            ));
        }
    }
    let n_block = sys.blocks[0].clone();
    let g1n = g1.compose(&n_block)?;
    out.push(claim(
        src,
        "G1 N = G3 with support {43,47,143,164,229,420}",
        format!("G1 N has support {}", support_text(&g1n)),
    ));
    let agg = aggregated_bcn(&cl)?;
    let constraint = ControlConstraint::parse(GRID_CONSTRAINT)?;
    let constrained = apply_constraints(&agg, &constraint)?;
    let published_hu = "δ7[6,3,4,5,7,5,7,2,1,0,0,0,0,7]";
    let derived = constrained.reduced.to_string();
    if derived != published_hu {
        out.push(claim(src, &format!("H^U = {published_hu}"), format!("reduced constrained system {derived}")));
    }
    Ok(out)
}

// ------------------------------------------------------------ small BCN

/// The four control blocks for `n = 3` with the uncertain block `X = I_5`.
pub fn example_55_system() -> (BcnAssr, OutputMap) {
    let tail = [4, 5, 6, 7, 8];
    let block = |head: [usize; 3]| {
        let idx: Vec<usize> = head.iter().chain(&tail).copied().collect();
        LogicalMatrix::from_delta(8, &idx).expect("valid block")
    };
    let blocks = vec![block([2, 3, 1]), block([2, 1, 3]), block([1, 2, 3]), block([3, 2, 1])];
    let sys = BcnAssr::from_blocks(3, blocks).expect("four 8x8 blocks");
    let xi = LogicalMatrix::from_delta(2, &[1, 2, 1, 2, 2, 2, 2, 2]).expect("valid output");
    let out = OutputMap::new(vec!["y".into()], vec![xi]).expect("one output");
    (sys, out)
}

/// Expected `[H_1, H_2, H_3, H_4]` of the minimum realization.
pub fn example_55_l_star() -> LogicalMatrix {
    LogicalMatrix::from_delta(
        8,
        &[
            1, 3, 5, 7, 2, 4, 6, 8, 1, 2, 5, 6, 3, 4, 7, 8, 1, 2, 3, 4, 5, 6, 7, 8, 1, 3, 2, 4, 5, 7, 6, 8,
        ],
    )
    .expect("valid matrix")
}

/// Expected output map of the minimum realization.
pub fn example_55_xi_star() -> LogicalMatrix {
    LogicalMatrix::from_delta(2, &[1, 1, 1, 1, 2, 2, 2, 2]).expect("valid matrix")
}

fn minterm(bits: &[bool], names: &[String]) -> Formula {
    let lits = names.iter().zip(bits).map(|(v, &b)| {
        let x = Formula::var(v.clone());
        if b {
            x
        } else {
            Formula::not(x)
        }
    });
    Formula::fold(BinOp::And, lits).expect("at least one variable")
}

fn dnf(rows: impl Iterator<Item = Vec<bool>>, names: &[String]) -> Formula {
    Formula::fold(BinOp::Or, rows.map(|bits| minterm(&bits, names))).unwrap_or(Formula::Const(false))
}

/// A network whose update and output rules are the minterm expansions of
/// the given blocks and output functions.
pub fn network_from_blocks(sys: &BcnAssr, outputs: &OutputMap) -> Result<NetworkDef> {
    let n = sys.n;
    let states = vars("x", n);
    let controls = if sys.m == 1 { vec!["u".to_string()] } else { vars("u", sys.m) };
    let scope: Vec<String> = controls.iter().chain(&states).cloned().collect();
    let columns = sys.control_count() * sys.state_count();
    let rules = (0..n)
        .map(|i| {
            let rows = (0..columns).filter_map(|col| {
                let (u, x) = (col / sys.state_count(), col % sys.state_count());
                let next = decode_pos(sys.blocks[u].target(x), n);
                next[i].then(|| decode_pos(col, n + sys.m))
            });
            dnf(rows, &scope)
        })
        .collect();
    let outs = outputs
        .names
        .iter()
        .zip(&outputs.per_output)
        .map(|(name, g)| {
            let rows = (0..sys.state_count()).filter(|&x| g.target(x) == 0).map(|x| decode_pos(x, n));
            (name.clone(), dnf(rows, &states))
        })
        .collect();
    NetworkDef::new(states, controls, rules, outs)
}

pub fn example_55_network() -> NetworkDef {
    let (sys, out) = example_55_system();
    network_from_blocks(&sys, &out).expect("blocks are well formed")
}

// ------------------------------------------------------------ fixture files

/// Builds every file of a fixture.
pub fn build(name: CorpusName) -> Result<Fixture> {
    let mut fx = Fixture::default();
    match name {
        CorpusName::Example315 => {
            let net = example_315_network();
            fx.add("network.bn", net.to_dsl());
            let m = assemble_bn(&net)?.overall;
            fx.add("M.delta", matrix_text("M", &m));
            let mut subspace = String::new();
            for (n, f) in example_315_subspace() {
                writeln!(subspace, "{n} = {f}").unwrap();
            }
            fx.add("subspace.txt", subspace);
            let fs = example_315_functions();
            let mut funcs = String::new();
            crate::io::write_function_set(&mut funcs, &fs);
            fx.add("functions.delta", funcs);
            let q = SubspaceMatrix::new(crate::invariant::combined_structure(&fs)?.g)?;
            fx.add("Q.delta", matrix_text("Q", &q.g));
            let h = h_star(&q, &m)?
                .as_logical()
                .ok_or_else(|| Error::InvalidCertificate("H* is not logical".into()))?;
            fx.add("H_star.delta", matrix_text("H_star", &h));
            fx.add("discrepancies.jsonl", write_discrepancies(&example_315_claims()?));
        }
        CorpusName::Grid9 => {
            let net = grid_network(false);
            fx.add("network.bn", net.to_dsl());
            let m = assemble_bn(&net)?.overall;
            fx.add("M.delta", matrix_text("M", &m));
            fx.add("appendix_i.delta", APPENDIX_I.to_string());
            let mut report = compare_columns("M", &m, &appendix_m())?;
            report.extend(grid_claims(&appendix_m())?);
            fx.add("discrepancies.jsonl", write_discrepancies(&report));
            fx.add("S.delta", matrix_text("g1", &index_function(&grid_index_set())));
        }
        CorpusName::Grid9Controlled => {
            let net = grid_network(true);
            fx.add("network.bn", net.to_dsl());
            let sys = assemble_bcn(&net)?;
            fx.add("L.delta", matrix_text("L", &LogicalMatrix::hconcat(&sys.blocks)?));
            fx.add("appendix_i.delta", APPENDIX_I.to_string());
            fx.add("appendix_ii.delta", APPENDIX_II.to_string());
            let mut report = compare_columns("N", &sys.blocks[0], &appendix_n())?;
            report.extend(compare_columns("M", &sys.blocks[1], &appendix_m())?);
            let transcribed = BcnAssr::from_blocks(9, vec![appendix_n(), appendix_m()])?;
            report.extend(controlled_grid_claims(&transcribed)?);
            fx.add("discrepancies.jsonl", write_discrepancies(&report));
            fx.add("S.delta", matrix_text("g1", &index_function(&grid_index_set())));
            fx.add("constraints.txt", GRID_CONSTRAINT.to_string());
        }
        CorpusName::Example55 => {
            let (sys, out) = example_55_system();
            let net = network_from_blocks(&sys, &out)?;
            fx.add("network.bn", net.to_dsl());
            fx.add("L.delta", matrix_text("L", &LogicalMatrix::hconcat(&sys.blocks)?));
            fx.add("Xi.delta", matrix_text("Xi", &out.combined));
            fx.add("L_star.delta", matrix_text("L_star", &example_55_l_star()));
            fx.add("Xi_star.delta", matrix_text("Xi_star", &example_55_xi_star()));
        }
    }
    Ok(fx)
}
