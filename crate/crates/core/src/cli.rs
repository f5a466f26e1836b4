//! The `stpnet` command-line front end.
//!
//! Every run writes its artifacts and a `manifest.json` into the output
//! directory. Nothing time- or host-dependent is recorded, so the same
//! command line over the same inputs yields byte-identical files.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::control::{
    aggregated_bcn, apply_constraints, closure_bcn, min_realization, verify_io_equivalence, ControlConstraint,
    SimulationStatus, VerifyOptions, DEFAULT_VERIFY_CAP,
};
use crate::corpus::{self, CorpusName};
use crate::error::{Error, Result};
use crate::formula::{index_function, parse_network, structure_matrix, NetworkDef, SubsetSpec};
use crate::invariant::{
    combined_structure, invariance_certificate, is_regular, Certification, ClosureOptions, FunctionSet, Provenance,
    DEFAULT_CLOSURE_CAP,
};
use crate::io;
use crate::network::{assemble_bcn, state_transition_graph, BcnAssr, DotOptions, OutputMap, TransitionTable, DEFAULT_EDGE_CAP};
use crate::stp::{decode_pos, state_index_encode, LogicalMatrix, ZeroExtendedLogicalMatrix};

#[derive(Debug, Parser)]
#[command(name = "stpnet", version, about = "Semi-tensor product toolkit for Boolean (control) networks")]
pub struct Cli {
    /// Resource cap: closure size, verification words or graph edges,
    /// depending on the subcommand.
    #[arg(long, global = true)]
    pub cap: Option<u64>,
    /// Seed for randomized verification beyond the exhaustive cap.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Output directory for artifacts and the run manifest.
    #[arg(long, global = true, default_value = "stpnet-out")]
    pub out: PathBuf,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Emit {
    Componentwise,
    Overall,
    Both,
}

#[derive(Debug, Args)]
pub struct FuncArgs {
    /// Network file (`.bn`).
    pub network: PathBuf,
    /// Function set: δ stanzas, or `name = <formula>` lines over the state variables.
    pub functions: PathBuf,
    /// Controls in scope: `all` or a comma-separated list of 1-based indices.
    #[arg(long, default_value = "all")]
    pub controls: String,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compile a network to its componentwise and overall ASSR.
    Compile {
        network: PathBuf,
        #[arg(long, value_enum, default_value = "both")]
        emit: Emit,
    },
    /// Smallest (control-)invariant function set containing the given functions.
    Closure {
        #[command(flatten)]
        args: FuncArgs,
        /// Expand breadth-first levels in parallel (same output).
        #[arg(long)]
        parallel: bool,
    },
    /// Decide invariance of a function set and produce H* or a witness pair.
    InvariantCheck {
        network: PathBuf,
        functions: PathBuf,
    },
    /// Aggregated system on the closure, optionally under control constraints.
    Aggregate {
        #[command(flatten)]
        args: FuncArgs,
        /// Constraint file (`forbid u=<i> when class in {...}` lines).
        #[arg(long)]
        constraints: Option<PathBuf>,
    },
    /// Minimum realization of a network's output map.
    Minreal { network: PathBuf },
    /// Check a realization bundle against the network's input-output map.
    Verify {
        network: PathBuf,
        bundle: PathBuf,
        #[arg(long, default_value_t = 6)]
        horizon: usize,
        /// Sampled (state, word) pairs when the exhaustive check exceeds the cap.
        #[arg(long, default_value_t = 4096)]
        samples: usize,
    },
    /// Simulate a trajectory, or the constrained aggregated system.
    Simulate {
        network: PathBuf,
        /// Initial state: 1-based δ index or a bit string of length n.
        #[arg(long)]
        x0: String,
        /// Control word as comma-separated 1-based indices.
        #[arg(long, default_value = "")]
        controls: String,
        /// Steps for an autonomous network.
        #[arg(long, default_value_t = 0)]
        steps: usize,
        /// Simulate the aggregated system over this function set instead.
        #[arg(long)]
        functions: Option<PathBuf>,
        #[arg(long, requires = "functions")]
        constraints: Option<PathBuf>,
    },
    /// State-transition graph in DOT.
    Stg {
        network: PathBuf,
        /// Label states with their Boolean tuples too.
        #[arg(long)]
        bits: bool,
    },
    /// Index function of a state subset.
    Indexfn {
        #[arg(long)]
        n: usize,
        /// Comma-separated 1-based δ indices.
        #[arg(long)]
        states: String,
    },
    /// Write the fixture files of a worked example.
    Corpus { name: String },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Compile { .. } => "compile",
            Command::Closure { .. } => "closure",
            Command::InvariantCheck { .. } => "invariant-check",
            Command::Aggregate { .. } => "aggregate",
            Command::Minreal { .. } => "minreal",
            Command::Verify { .. } => "verify",
            Command::Simulate { .. } => "simulate",
            Command::Stg { .. } => "stg",
            Command::Indexfn { .. } => "indexfn",
            Command::Corpus { .. } => "corpus",
        }
    }
}

/// Record of one invocation, written next to its artifacts.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub subcommand: String,
    pub inputs: Vec<String>,
    pub options: BTreeMap<String, String>,
    pub seed: u64,
    pub output_dir: String,
    pub outputs: Vec<String>,
    pub status: String,
    pub exit_code: i32,
}

/// Result of a subcommand body: files to write, console text, exit status.
#[derive(Default)]
struct Outcome {
    files: Vec<(String, String)>,
    stdout: String,
    verification_failed: bool,
}

impl Outcome {
    fn file(&mut self, name: &str, contents: String) {
        self.files.push((name.to_string(), contents));
    }

    fn say(&mut self, line: impl AsRef<str>) {
        self.stdout.push_str(line.as_ref());
        self.stdout.push('\n');
    }
}

struct Ctx {
    cap: Option<u64>,
    seed: u64,
    inputs: Vec<String>,
    options: BTreeMap<String, String>,
}

impl Ctx {
    fn read(&mut self, p: &Path) -> Result<String> {
        self.inputs.push(p.display().to_string());
        std::fs::read_to_string(p).map_err(|e| Error::format(format!("{}: {e}", p.display())))
    }

    fn option(&mut self, k: &str, v: impl ToString) {
        self.options.insert(k.to_string(), v.to_string());
    }

    fn closure_opts(&self, parallel: bool) -> ClosureOptions {
        ClosureOptions {
            cap: self.cap.map_or(DEFAULT_CLOSURE_CAP, |c| c as usize),
            parallel,
        }
    }

    fn network(&mut self, p: &Path) -> Result<NetworkDef> {
        let text = self.read(p)?;
        parse_network(&text).map_err(|e| with_path(p, e))
    }

    fn functions(&mut self, p: &Path, net: &NetworkDef) -> Result<FunctionSet> {
        let text = self.read(p)?;
        parse_functions(&text, net).map_err(|e| with_path(p, e))
    }
}

/// Prefixes parse errors with the file they came from, keeping the variant
/// (and hence the exit code) for everything else.
fn with_path(p: &Path, e: Error) -> Error {
    match e {
        Error::Lex { .. } | Error::Syntax { .. } | Error::Unbalanced { .. } | Error::UnknownIdentifier { .. } | Error::Format(_) => {
            Error::format(format!("{}: {e}", p.display()))
        }
        other => other,
    }
}

/// δ stanzas, or `name = formula` lines over the network's state variables.
pub fn parse_functions(text: &str, net: &NetworkDef) -> Result<FunctionSet> {
    let first = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .find(|l| !l.is_empty())
        .ok_or_else(|| Error::format("function file is empty"))?;
    let fs = if first.starts_with("name:") || first.starts_with("delta ") {
        io::parse_function_set(text)?
    } else {
        let mut fs = FunctionSet::new(net.n());
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("");
            if line.trim().is_empty() {
                continue;
            }
            let (name, body) = line
                .split_once('=')
                .ok_or_else(|| Error::format(format!("line {}: expected `name = formula`", i + 1)))?;
            let col = name.len() + 2;
            let f = crate::formula::parse_formula_at(body, &net.state_vars, crate::error::Pos { line: i + 1, col })?;
            fs.insert(structure_matrix(&f, &net.state_vars)?, name.trim().to_string(), Provenance::Generator)?;
        }
        fs
    };
    if fs.n() != net.n() {
        return Err(Error::dims(format!(
            "functions over {} variables for a network with {}",
            fs.n(),
            net.n()
        )));
    }
    Ok(fs)
}

fn parse_index_list(text: &str, what: &str) -> Result<Vec<usize>> {
    text.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| match t.parse::<usize>() {
            Ok(v) if v >= 1 => Ok(v),
            _ => Err(Error::format(format!("bad {what} `{t}` (expected a 1-based index)"))),
        })
        .collect()
}

fn control_filter(list: &str, sys: &BcnAssr) -> Result<Option<Vec<usize>>> {
    if list.trim() == "all" {
        return Ok(None);
    }
    let ids = parse_index_list(list, "control")?;
    if let Some(&bad) = ids.iter().find(|&&u| u > sys.control_count()) {
        return Err(Error::format(format!(
            "control {bad} out of range 1..={}",
            sys.control_count()
        )));
    }
    Ok(Some(ids.into_iter().map(|u| u - 1).collect()))
}

fn sigma_lines(out: &mut Outcome, block_ids: &[usize], successors: &[Vec<usize>], names: &FunctionSet) {
    for (&id, sigma) in block_ids.iter().zip(successors) {
        let maps: Vec<String> = sigma
            .iter()
            .enumerate()
            .map(|(j, &k)| format!("{}->{}", names.name(j), names.name(k)))
            .collect();
        out.say(format!("  u={}: {}", id + 1, maps.join(" ")));
    }
}

fn split_zero_extended(m: &ZeroExtendedLogicalMatrix, blocks: usize) -> Vec<ZeroExtendedLogicalMatrix> {
    let width = m.cols() / blocks;
    (0..blocks)
        .map(|b| {
            ZeroExtendedLogicalMatrix::new(m.rows(), m.targets()[b * width..(b + 1) * width].to_vec())
                .expect("slice of a valid matrix")
        })
        .collect()
}

fn with_block_labels(mut table: TransitionTable, block_ids: &[usize], controls: usize) -> TransitionTable {
    if controls > 1 {
        table.control_labels = block_ids.iter().map(|&id| format!("u=δ_{controls}^{}", id + 1)).collect();
    }
    table
}

fn cmd_compile(ctx: &mut Ctx, network: &Path, emit: Emit) -> Result<Outcome> {
    ctx.option("emit", serde_json::to_value(emit).unwrap().as_str().unwrap());
    let net = ctx.network(network)?;
    let sys = assemble_bcn(&net)?;
    let mut out = Outcome::default();
    if matches!(emit, Emit::Componentwise | Emit::Both) {
        let mut text = String::new();
        for (name, m) in net.state_vars.iter().zip(&sys.componentwise) {
            io::write_logical(&mut text, Some(name), m);
        }
        out.file("componentwise.delta", text);
    }
    if matches!(emit, Emit::Overall | Emit::Both) {
        let mut text = String::new();
        let l = LogicalMatrix::hconcat(&sys.blocks)?;
        io::write_logical(&mut text, Some(if sys.m == 0 { "M" } else { "L" }), &l);
        out.file("overall.delta", text);
    }
    if let Some(o) = OutputMap::compile(&net)? {
        let mut text = String::new();
        for (name, g) in o.names.iter().zip(&o.per_output) {
            io::write_logical(&mut text, Some(name), g);
        }
        out.file("outputs.delta", text);
    }
    out.say(format!(
        "compiled {} state variable(s), {} control(s), {} output(s)",
        net.n(),
        net.m(),
        net.outputs.len()
    ));
    if sys.state_count() <= 64 {
        out.say(format!("{} = {}", if sys.m == 0 { "M" } else { "L" }, LogicalMatrix::hconcat(&sys.blocks)?));
    }
    Ok(out)
}

fn closure_setup(ctx: &mut Ctx, args: &FuncArgs) -> Result<(NetworkDef, BcnAssr, FunctionSet, Option<Vec<usize>>)> {
    ctx.option("controls", &args.controls);
    let net = ctx.network(&args.network)?;
    let sys = assemble_bcn(&net)?;
    let fs = ctx.functions(&args.functions, &net)?;
    let filter = control_filter(&args.controls, &sys)?;
    Ok((net, sys, fs, filter))
}

fn cmd_closure(ctx: &mut Ctx, args: &FuncArgs, parallel: bool) -> Result<Outcome> {
    let (_, sys, fs, filter) = closure_setup(ctx, args)?;
    let cl = closure_bcn(&fs, &sys, filter.as_deref(), ctx.closure_opts(parallel))?;
    let agg = aggregated_bcn(&cl)?;
    let mut out = Outcome::default();
    out.say(format!("closure size: {}", cl.len()));
    sigma_lines(&mut out, &cl.block_ids, &cl.successors, &cl.functions);
    match &agg.h_blocks {
        Some(hs) if cl.len() <= 6 => {
            for (&id, h) in cl.block_ids.iter().zip(hs) {
                out.say(format!("  H_u{} = {h}", id + 1));
            }
        }
        Some(_) => out.say("  H blocks written to closure.delta"),
        None => out.say(format!("  product form skipped ({} factors); reduced form only", cl.len())),
    }
    out.file("closure.delta", io::write_closure_bundle(&cl, Some(&agg)));
    Ok(out)
}

fn cmd_invariant_check(ctx: &mut Ctx, network: &Path, functions: &Path) -> Result<Outcome> {
    let net = ctx.network(network)?;
    let sys = assemble_bcn(&net)?;
    let fs = ctx.functions(functions, &net)?;
    let q = combined_structure(&fs)?;
    let mut out = Outcome::default();
    out.say(format!("functions: {}  regular: {}", fs.len(), if is_regular(&q) { "yes" } else { "no" }));
    let mut report = String::new();
    io::write_logical(&mut report, Some("Q"), &q.g);
    for (u, block) in sys.blocks.iter().enumerate() {
        let label = if sys.m == 0 { "M".to_string() } else { format!("u={}", u + 1) };
        match invariance_certificate(&q, block) {
            Ok(Certification::Invariant(cert)) => {
                out.say(format!("{label}: invariant, H* = {}", cert.h));
                io::write_logical(&mut report, Some(&format!("H_star_u{}", u + 1)), &cert.h);
            }
            Ok(Certification::NotInvariant { x, x_prime }) => {
                out.verification_failed = true;
                out.say(format!(
                    "{label}: not invariant; states {} and {} share a value but their successors do not",
                    x.index(),
                    x_prime.index()
                ));
                writeln!(report, "# witness for u={}: states {} {}", u + 1, x.index(), x_prime.index()).unwrap();
            }
            Err(Error::UnattainedValue { value }) => {
                // fall back to closedness of the set itself
                let closed = fs
                    .iter()
                    .all(|f| f.compose(block).map(|g| fs.position(&g).is_some()).unwrap_or(false));
                out.say(format!(
                    "{label}: value {value} is never attained, H* is undefined; set is {}closed under this block",
                    if closed { "" } else { "not " }
                ));
                if !closed {
                    out.verification_failed = true;
                }
            }
            Err(e) => return Err(e),
        }
    }
    out.file("invariance.delta", report);
    Ok(out)
}

fn cmd_aggregate(ctx: &mut Ctx, args: &FuncArgs, constraints: Option<&Path>) -> Result<Outcome> {
    let (_, sys, fs, filter) = closure_setup(ctx, args)?;
    let cl = closure_bcn(&fs, &sys, filter.as_deref(), ctx.closure_opts(false))?;
    let agg = aggregated_bcn(&cl)?;
    let mut out = Outcome::default();
    out.say(format!(
        "closure size: {}  attained classes: {}",
        cl.len(),
        agg.reduced.class_count()
    ));
    let mut text = String::new();
    io::write_function_set(&mut text, &cl.functions);
    io::write_aggregated(&mut text, &agg);
    out.file("aggregated.delta", text);
    let (table, name) = match constraints {
        Some(p) => {
            let ctext = ctx.read(p)?;
            let c = ControlConstraint::parse(&ctext).map_err(|e| with_path(p, e))?;
            let con = apply_constraints(&agg, &c)?;
            let mut t = String::new();
            writeln!(t, "# constraints:").unwrap();
            for line in c.to_string().lines() {
                writeln!(t, "#   {line}").unwrap();
            }
            io::write_zero_extended(&mut t, Some("H_U_reduced"), &con.reduced);
            if let Some(p) = &con.product {
                io::write_zero_extended(&mut t, Some("H_U"), p);
            }
            out.say(format!("H^U (reduced) = {}", con.reduced));
            let zeros: Vec<String> = con
                .reduced
                .zero_columns()
                .iter()
                .map(|&col| {
                    let q = con.class_count();
                    format!("(class {}, u={})", col % q + 1, con.block_ids[col / q] + 1)
                })
                .collect();
            out.say(format!("forbidden pairs: {}", zeros.join(" ")));
            out.file("constrained.delta", t);
            let blocks = split_zero_extended(&con.reduced, con.block_ids.len());
            (TransitionTable::from_zero_extended(&blocks), "aggregated_constrained")
        }
        None => (TransitionTable::from_blocks(&agg.reduced.blocks()), "aggregated"),
    };
    let table = with_block_labels(table, &agg.block_ids, sys.control_count());
    out.file("aggregated.dot", table.to_dot(name));
    Ok(out)
}

fn outputs_of(net: &NetworkDef) -> Result<OutputMap> {
    OutputMap::compile(net)?.ok_or_else(|| Error::format("network declares no outputs (`y = <formula>` lines)"))
}

fn cmd_minreal(ctx: &mut Ctx, network: &Path) -> Result<Outcome> {
    let net = ctx.network(network)?;
    let sys = assemble_bcn(&net)?;
    let outputs = outputs_of(&net)?;
    let real = min_realization(&sys, &outputs, ctx.closure_opts(false))?;
    let mut out = Outcome::default();
    out.say(format!(
        "realization: {} functions ({} product states, {} attained) for {} original states",
        real.closure.len(),
        real.sizes().0,
        real.sizes().1,
        sys.state_count()
    ));
    sigma_lines(&mut out, &real.closure.block_ids, &real.closure.successors, &real.closure.functions);
    if let (Some(hs), Some(xi)) = (&real.aggregated.h_blocks, &real.xi) {
        if real.closure.len() <= 6 {
            out.say(format!("  L* = {}", LogicalMatrix::hconcat(hs)?));
            out.say(format!("  Xi = {xi}"));
        }
    }
    out.file("realization.bundle", io::write_realization_bundle(&real));
    let table = with_block_labels(
        TransitionTable::from_blocks(&real.aggregated.reduced.blocks()),
        &real.aggregated.block_ids,
        sys.control_count(),
    );
    out.file("realization.dot", table.to_dot("realization"));
    Ok(out)
}

#[derive(Serialize)]
struct VerifyReport {
    equivalent: bool,
    exhaustive: bool,
    horizon: usize,
    words_checked: String,
    counterexample: Option<CounterexampleJson>,
}

#[derive(Serialize)]
struct CounterexampleJson {
    x0: usize,
    controls: Vec<usize>,
    step: usize,
    expected_y: usize,
    realized_y: usize,
}

fn cmd_verify(ctx: &mut Ctx, network: &Path, bundle: &Path, horizon: usize, samples: usize) -> Result<Outcome> {
    ctx.option("horizon", horizon);
    ctx.option("samples", samples);
    let net = ctx.network(network)?;
    let sys = assemble_bcn(&net)?;
    let outputs = outputs_of(&net)?;
    let btext = ctx.read(bundle)?;
    let real = io::parse_realization_bundle(&btext).map_err(|e| with_path(bundle, e))?;
    if real.closure.functions.n() != sys.n {
        return Err(Error::dims("bundle and network have different state counts"));
    }
    let opts = VerifyOptions {
        cap: ctx.cap.map_or(DEFAULT_VERIFY_CAP, u128::from),
        sampling: Some((ctx.seed, samples)),
    };
    let rep = verify_io_equivalence(&sys, &outputs, &real, horizon, opts)?;
    let mut out = Outcome::default();
    out.say(format!(
        "{} ({} check, {} words, horizon {horizon})",
        if rep.equivalent { "equivalent" } else { "NOT equivalent" },
        if rep.exhaustive { "exhaustive" } else { "sampled" },
        rep.words_checked
    ));
    let cx = rep.counterexample.map(|c| {
        out.say(format!(
            "counterexample: x0 = δ^{}, controls [{}], step {}: network y = δ^{}, realization y = δ^{}",
            c.x0,
            c.controls.iter().map(|u| u.to_string()).collect::<Vec<_>>().join(","),
            c.step,
            c.expected_y,
            c.realized_y
        ));
        CounterexampleJson {
            x0: c.x0,
            controls: c.controls,
            step: c.step,
            expected_y: c.expected_y,
            realized_y: c.realized_y,
        }
    });
    out.verification_failed = !rep.equivalent;
    let report = VerifyReport {
        equivalent: rep.equivalent,
        exhaustive: rep.exhaustive,
        horizon,
        words_checked: rep.words_checked.to_string(),
        counterexample: cx,
    };
    out.file("verify.json", serde_json::to_string_pretty(&report).expect("plain data") + "\n");
    Ok(out)
}

fn parse_state(text: &str, n: usize) -> Result<usize> {
    let t = text.trim();
    if t.len() == n && n > 1 && t.chars().all(|c| c == '0' || c == '1') {
        let bits: Vec<bool> = t.chars().map(|c| c == '1').collect();
        return Ok(state_index_encode(&bits).pos());
    }
    match t.parse::<usize>() {
        Ok(i) if (1..=1usize << n).contains(&i) => Ok(i - 1),
        _ => Err(Error::format(format!(
            "initial state `{t}` is neither an index in 1..={} nor a {n}-bit string",
            1usize << n
        ))),
    }
}

fn bits_text(pos: usize, n: usize) -> String {
    decode_pos(pos, n).iter().map(|&b| if b { '1' } else { '0' }).collect()
}

fn cmd_simulate(
    ctx: &mut Ctx,
    network: &Path,
    x0: &str,
    controls: &str,
    steps: usize,
    functions: Option<&Path>,
    constraints: Option<&Path>,
) -> Result<Outcome> {
    ctx.option("x0", x0);
    ctx.option("controls", controls);
    ctx.option("steps", steps);
    let net = ctx.network(network)?;
    let sys = assemble_bcn(&net)?;
    let x = parse_state(x0, sys.n)?;
    let mut word: Vec<usize> = parse_index_list(controls, "control")?.into_iter().map(|u| u - 1).collect();
    if let Some(&bad) = word.iter().find(|&&u| u >= sys.control_count()) {
        return Err(Error::format(format!("control {} out of range 1..={}", bad + 1, sys.control_count())));
    }
    if sys.m == 0 {
        if !word.is_empty() {
            return Err(Error::format("an autonomous network takes --steps, not --controls"));
        }
        word = vec![0; steps];
    }
    let mut out = Outcome::default();
    let mut text = String::new();
    match functions {
        None => {
            writeln!(text, "# t state bits control").unwrap();
            let mut cur = x;
            for (t, &u) in word.iter().enumerate() {
                writeln!(text, "{t} {} {} {}", cur + 1, bits_text(cur, sys.n), u + 1).unwrap();
                cur = sys.blocks[u].target(cur);
            }
            writeln!(text, "{} {} {} -", word.len(), cur + 1, bits_text(cur, sys.n)).unwrap();
            out.say(format!("final state δ^{} ({})", cur + 1, bits_text(cur, sys.n)));
        }
        Some(fp) => {
            let fs = ctx.functions(fp, &net)?;
            let cl = closure_bcn(&fs, &sys, None, ctx.closure_opts(false))?;
            let agg = aggregated_bcn(&cl)?;
            let c = match constraints {
                Some(p) => {
                    let t = ctx.read(p)?;
                    ControlConstraint::parse(&t).map_err(|e| with_path(p, e))?
                }
                None => ControlConstraint::default(),
            };
            let con = apply_constraints(&agg, &c)?;
            let start = agg.reduced.state_class[x];
            let trace = con.simulate(start, &word)?;
            writeln!(text, "# t class").unwrap();
            for (t, k) in trace.classes.iter().enumerate() {
                writeln!(text, "{t} {}", k + 1).unwrap();
            }
            match trace.status {
                SimulationStatus::Completed => {
                    writeln!(text, "# completed").unwrap();
                    out.say(format!("completed in class {}", trace.classes.last().unwrap() + 1));
                }
                SimulationStatus::Forbidden { step, class, control } => {
                    let msg = format!("forbidden: u={} in class {} at step {step}", control + 1, class + 1);
                    writeln!(text, "# {msg}").unwrap();
                    out.say(msg);
                }
            }
        }
    }
    out.file("trajectory.txt", text);
    Ok(out)
}

fn cmd_stg(ctx: &mut Ctx, network: &Path, bits: bool) -> Result<Outcome> {
    ctx.option("bits", bits);
    let net = ctx.network(network)?;
    let sys = assemble_bcn(&net)?;
    let opts = DotOptions {
        graph_name: "stg".into(),
        cap: ctx.cap.map_or(DEFAULT_EDGE_CAP, |c| c as usize),
        bit_labels: bits,
    };
    let dot = state_transition_graph(&sys, &opts)?;
    let mut out = Outcome::default();
    out.say(format!("{} states, {} edges", sys.state_count(), sys.state_count() * sys.control_count()));
    out.file("stg.dot", dot);
    Ok(out)
}

fn cmd_indexfn(ctx: &mut Ctx, n: usize, states: &str) -> Result<Outcome> {
    ctx.option("n", n);
    ctx.option("states", states);
    if n == 0 || n > crate::formula::MAX_TRUTH_TABLE_VARS {
        return Err(Error::format(format!(
            "n must be in 1..={}",
            crate::formula::MAX_TRUTH_TABLE_VARS
        )));
    }
    let s = SubsetSpec::from_indices(n, parse_index_list(states, "state")?)?;
    let g = index_function(&s);
    let mut text = String::new();
    io::write_logical(&mut text, Some("index"), &g);
    let mut out = Outcome::default();
    out.say(text.trim_end());
    out.file("indexfn.delta", text);
    Ok(out)
}

fn cmd_corpus(ctx: &mut Ctx, name: &str) -> Result<Outcome> {
    ctx.option("name", name);
    let c: CorpusName = name.parse()?;
    let fx = corpus::build(c)?;
    let mut out = Outcome::default();
    for (f, body) in fx.files {
        out.file(&f, body);
    }
    if let Some(rep) = out.files.iter().find(|(f, _)| f == "discrepancies.jsonl") {
        out.stdout.push_str(&format!("discrepancy entries: {}\n", rep.1.lines().count()));
    }
    out.say(format!("wrote fixture {c}"));
    Ok(out)
}

fn dispatch(ctx: &mut Ctx, cmd: &Command) -> Result<Outcome> {
    match cmd {
        Command::Compile { network, emit } => cmd_compile(ctx, network, *emit),
        Command::Closure { args, parallel } => {
            ctx.option("parallel", parallel);
            cmd_closure(ctx, args, *parallel)
        }
        Command::InvariantCheck { network, functions } => cmd_invariant_check(ctx, network, functions),
        Command::Aggregate { args, constraints } => cmd_aggregate(ctx, args, constraints.as_deref()),
        Command::Minreal { network } => cmd_minreal(ctx, network),
        Command::Verify {
            network,
            bundle,
            horizon,
            samples,
        } => cmd_verify(ctx, network, bundle, *horizon, *samples),
        Command::Simulate {
            network,
            x0,
            controls,
            steps,
            functions,
            constraints,
        } => cmd_simulate(ctx, network, x0, controls, *steps, functions.as_deref(), constraints.as_deref()),
        Command::Stg { network, bits } => cmd_stg(ctx, network, *bits),
        Command::Indexfn { n, states } => cmd_indexfn(ctx, *n, states),
        Command::Corpus { name } => cmd_corpus(ctx, name),
    }
}

fn write_artifacts(dir: &Path, files: &[(String, String)]) -> std::io::Result<()> {
    std::fs::create_dir_all(dir)?;
    for (name, body) in files {
        std::fs::write(dir.join(name), body)?;
    }
    Ok(())
}

/// Runs one invocation and returns the process exit code:
/// 0 success, 1 verification failure, 2 input error, 3 resource cap.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if code == 0 {
                write!(stdout, "{e}")
            } else {
                write!(stderr, "{e}")
            };
            return code;
        }
    };
    let mut ctx = Ctx {
        cap: cli.cap,
        seed: cli.seed,
        inputs: Vec::new(),
        options: BTreeMap::new(),
    };
    if let Some(c) = cli.cap {
        ctx.option("cap", c);
    }
    let result = dispatch(&mut ctx, &cli.command);
    let (mut files, code, status) = match result {
        Ok(o) => {
            let _ = stdout.write_all(o.stdout.as_bytes());
            let code = i32::from(o.verification_failed);
            let status = if o.verification_failed { "verification-failed" } else { "ok" };
            (o.files, code, status.to_string())
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            let code = e.exit_code();
            (Vec::new(), code, format!("error: {e}"))
        }
    };
    let manifest = RunManifest {
        subcommand: cli.command.name().to_string(),
        inputs: ctx.inputs,
        options: ctx.options,
        seed: cli.seed,
        output_dir: cli.out.display().to_string(),
        outputs: files.iter().map(|(n, _)| n.clone()).collect(),
        status,
        exit_code: code,
    };
    files.push((
        "manifest.json".into(),
        serde_json::to_string_pretty(&manifest).expect("plain data") + "\n",
    ));
    if let Err(e) = write_artifacts(&cli.out, &files) {
        let _ = writeln!(stderr, "error: cannot write to {}: {e}", cli.out.display());
        return 2;
    }
    code
}
