//! Plain-text serialization.
//!
//! A δ stanza is a header `delta <p> <q> [zeroext]` followed by the `q`
//! column indices (1-based, `0` only in `zeroext` stanzas); the indices may
//! wrap over several lines. Dense stanzas are `dense <r> <c>` followed by
//! `r·c` row-major rationals `a/b`. Any stanza may be preceded by a
//! `name: <label>` line. `#` starts a comment. Bundles group stanzas into
//! `section <name>` blocks and add a few keyword lines of their own.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::invariant::{
    combined_structure, AggregatedSystem, Closure, FunctionSet, Provenance, ReducedSystem, MAX_PRODUCT_FACTORS,
};
use crate::control::Realization;
use crate::stp::{DenseMatrix, LogicalMatrix, ZeroExtendedLogicalMatrix};

/// Any matrix a stanza can hold.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Matrix {
    Logical(LogicalMatrix),
    ZeroExtended(ZeroExtendedLogicalMatrix),
    Dense(DenseMatrix),
}

impl Matrix {
    pub fn into_logical(self) -> Result<LogicalMatrix> {
        match self {
            Matrix::Logical(m) => Ok(m),
            Matrix::ZeroExtended(z) => z
                .as_logical()
                .ok_or_else(|| Error::format("expected a logical matrix, found zero columns")),
            Matrix::Dense(d) => d
                .as_logical()
                .ok_or_else(|| Error::format("dense matrix is not logical")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stanza {
    pub name: Option<String>,
    pub matrix: Matrix,
}

pub fn write_logical(out: &mut String, name: Option<&str>, m: &LogicalMatrix) {
    if let Some(n) = name {
        writeln!(out, "name: {n}").unwrap();
    }
    writeln!(out, "delta {} {}", m.rows(), m.cols()).unwrap();
    push_indices(out, m.delta().into_iter());
}

pub fn write_zero_extended(out: &mut String, name: Option<&str>, m: &ZeroExtendedLogicalMatrix) {
    if let Some(n) = name {
        writeln!(out, "name: {n}").unwrap();
    }
    writeln!(out, "delta {} {} zeroext", m.rows(), m.cols()).unwrap();
    push_indices(out, m.delta().into_iter());
}

pub fn write_dense(out: &mut String, name: Option<&str>, m: &DenseMatrix) {
    if let Some(n) = name {
        writeln!(out, "name: {n}").unwrap();
    }
    writeln!(out, "dense {} {}", m.rows(), m.cols()).unwrap();
    for r in 0..m.rows() {
        let row: Vec<String> = (0..m.cols())
            .map(|c| {
                let v = m.get(r, c);
                format!("{}/{}", v.numer(), v.denom())
            })
            .collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
}

fn push_indices(out: &mut String, idx: impl Iterator<Item = usize>) {
    let parts: Vec<String> = idx.map(|i| i.to_string()).collect();
    out.push_str(&parts.join(" "));
    out.push('\n');
}

/// Line cursor over a text document that skips comments and blank lines.
pub struct Reader<'a> {
    lines: Vec<(usize, &'a str)>,
    at: usize,
}

impl<'a> Reader<'a> {
    pub fn new(text: &'a str) -> Self {
        let lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty())
            .collect();
        Reader { lines, at: 0 }
    }

    pub fn peek(&self) -> Option<&'a str> {
        self.lines.get(self.at).map(|&(_, l)| l)
    }

    pub fn line_no(&self) -> usize {
        self.lines.get(self.at).map_or_else(
            || self.lines.last().map_or(0, |&(n, _)| n),
            |&(n, _)| n,
        )
    }

    pub fn next_line(&mut self) -> Option<&'a str> {
        let l = self.peek()?;
        self.at += 1;
        Some(l)
    }

    pub fn at_end(&self) -> bool {
        self.at >= self.lines.len()
    }

    fn err(&self, msg: impl std::fmt::Display) -> Error {
        Error::format(format!("line {}: {msg}", self.line_no()))
    }

    /// Whether the next line opens a stanza (a `name:` header or a matrix header).
    pub fn at_stanza(&self) -> bool {
        self.peek().is_some_and(|l| {
            l.starts_with("name:") || l.starts_with("delta ") || l.starts_with("dense ")
        })
    }

    pub fn stanza(&mut self) -> Result<Stanza> {
        let mut name = None;
        if let Some(rest) = self.peek().and_then(|l| l.strip_prefix("name:")) {
            let n = rest.trim();
            if n.is_empty() {
                return Err(self.err("empty stanza name"));
            }
            name = Some(n.to_string());
            self.at += 1;
        }
        let header = self.next_line().ok_or_else(|| self.err("expected a matrix header"))?;
        let words: Vec<&str> = header.split_whitespace().collect();
        let dims = |i: usize| -> Result<usize> {
            words
                .get(i)
                .and_then(|w| w.parse().ok())
                .ok_or_else(|| Error::format(format!("line {}: bad matrix header `{header}`", self.line_no() - 1)))
        };
        let matrix = match words.first() {
            Some(&"delta") => {
                let (p, q) = (dims(1)?, dims(2)?);
                let zeroext = match words.get(3) {
                    None => false,
                    Some(&"zeroext") if words.len() == 4 => true,
                    _ => return Err(self.err(format!("bad matrix header `{header}`"))),
                };
                let idx: Vec<usize> = self
                    .tokens(q)?
                    .iter()
                    .map(|t| t.parse::<usize>().map_err(|_| self.err(format!("`{t}` is not an index"))))
                    .collect::<Result<_>>()?;
                if zeroext {
                    Matrix::ZeroExtended(ZeroExtendedLogicalMatrix::from_delta(p, &idx)?)
                } else {
                    if idx.contains(&0) {
                        return Err(self.err("index 0 requires a `zeroext` stanza"));
                    }
                    Matrix::Logical(LogicalMatrix::from_delta(p, &idx)?)
                }
            }
            Some(&"dense") if words.len() == 3 => {
                let (r, c) = (dims(1)?, dims(2)?);
                let vals = self
                    .tokens(r * c)?
                    .iter()
                    .map(|t| parse_rational(t).ok_or_else(|| self.err(format!("`{t}` is not a rational"))))
                    .collect::<Result<_>>()?;
                Matrix::Dense(DenseMatrix::new(r, c, vals)?)
            }
            _ => return Err(Error::format(format!("line {}: bad matrix header `{header}`", self.line_no() - 1))),
        };
        Ok(Stanza { name, matrix })
    }

    fn tokens(&mut self, count: usize) -> Result<Vec<&'a str>> {
        let mut toks = Vec::with_capacity(count);
        while toks.len() < count {
            let l = self
                .next_line()
                .ok_or_else(|| self.err(format!("expected {count} entries, found {}", toks.len())))?;
            toks.extend(l.split_whitespace());
        }
        if toks.len() > count {
            return Err(Error::format(format!(
                "line {}: expected {count} entries, found {}",
                self.lines[self.at - 1].0,
                toks.len()
            )));
        }
        Ok(toks)
    }
}

fn parse_rational(t: &str) -> Option<BigRational> {
    let (n, d) = t.split_once('/').unwrap_or((t, "1"));
    let n: BigInt = n.parse().ok()?;
    let d: BigInt = d.parse().ok()?;
    (d != BigInt::from(0)).then(|| BigRational::new(n, d))
}

/// Every stanza in a document (no other lines allowed).
pub fn parse_stanzas(text: &str) -> Result<Vec<Stanza>> {
    let mut r = Reader::new(text);
    let mut out = Vec::new();
    while !r.at_end() {
        if !r.at_stanza() {
            return Err(r.err(format!("unexpected `{}`", r.peek().unwrap_or(""))));
        }
        out.push(r.stanza()?);
    }
    Ok(out)
}

/// A single logical (or logical-valued dense) matrix document.
pub fn parse_logical(text: &str) -> Result<LogicalMatrix> {
    let mut st = parse_stanzas(text)?;
    if st.len() != 1 {
        return Err(Error::format(format!("expected one matrix, found {}", st.len())));
    }
    st.pop().unwrap().matrix.into_logical()
}

pub fn write_function_set(out: &mut String, fs: &FunctionSet) {
    for (i, f) in fs.iter().enumerate() {
        write_logical(out, Some(fs.name(i)), f);
    }
}

fn function_set_from(r: &mut Reader<'_>) -> Result<FunctionSet> {
    let mut fs: Option<FunctionSet> = None;
    while r.at_stanza() {
        let st = r.stanza()?;
        let f = st.matrix.into_logical()?;
        if f.rows() != 2 || !f.cols().is_power_of_two() {
            return Err(r.err("functions must be 2 x 2^n"));
        }
        let set = fs.get_or_insert_with(|| FunctionSet::new(f.cols().trailing_zeros() as usize));
        let name = st.name.unwrap_or_else(|| format!("z{}", set.len() + 1));
        set.insert(f, name, Provenance::Generator)?;
    }
    fs.ok_or_else(|| Error::format("function set is empty"))
}

/// Function-set file: a sequence of `2 x 2^n` δ stanzas.
pub fn parse_function_set(text: &str) -> Result<FunctionSet> {
    let mut r = Reader::new(text);
    let fs = function_set_from(&mut r)?;
    if !r.at_end() {
        return Err(r.err(format!("unexpected `{}`", r.peek().unwrap_or(""))));
    }
    Ok(fs)
}

fn write_successors(out: &mut String, block_ids: &[usize], successors: &[Vec<usize>]) {
    for (&id, sigma) in block_ids.iter().zip(successors) {
        for (j, &k) in sigma.iter().enumerate() {
            writeln!(out, "successor {}: {} -> {}", id + 1, j + 1, k + 1).unwrap();
        }
    }
}

/// Reads `successor <block>: j -> k` lines into `(block ids, maps)`, 0-based.
fn read_successors(r: &mut Reader<'_>, s: usize) -> Result<(Vec<usize>, Vec<Vec<usize>>)> {
    let mut ids: Vec<usize> = Vec::new();
    let mut maps: Vec<Vec<Option<usize>>> = Vec::new();
    while let Some(rest) = r.peek().and_then(|l| l.strip_prefix("successor ")) {
        let parsed = (|| {
            let (b, map) = rest.split_once(':')?;
            let (j, k) = map.split_once("->")?;
            let b: usize = b.trim().parse().ok()?;
            let j: usize = j.trim().parse().ok()?;
            let k: usize = k.trim().parse().ok()?;
            (b >= 1 && (1..=s).contains(&j) && (1..=s).contains(&k)).then_some((b - 1, j - 1, k - 1))
        })();
        let (b, j, k) = parsed.ok_or_else(|| r.err("bad successor line"))?;
        let slot = match ids.iter().position(|&x| x == b) {
            Some(p) => p,
            None => {
                ids.push(b);
                maps.push(vec![None; s]);
                ids.len() - 1
            }
        };
        if maps[slot][j].replace(k).is_some() {
            return Err(r.err("duplicate successor entry"));
        }
        r.next_line();
    }
    let maps = maps
        .into_iter()
        .map(|m| m.into_iter().collect::<Option<Vec<_>>>())
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| r.err("incomplete successor map"))?;
    Ok((ids, maps))
}

/// Closure bundle: the function set, then one successor line per
/// (block, member), then the product-form H blocks when available.
pub fn write_closure_bundle(cl: &Closure, agg: Option<&AggregatedSystem>) -> String {
    let mut out = String::new();
    writeln!(out, "# closure of {} generator(s): {} functions", cl.generator_indices.len(), cl.len()).unwrap();
    write_function_set(&mut out, &cl.functions);
    write_successors(&mut out, &cl.block_ids, &cl.successors);
    if let Some(agg) = agg {
        write_aggregated(&mut out, agg);
    }
    out
}

/// Aggregated H blocks (`H_u<k>`) in product form, or a note that the
/// product form was skipped, plus the reduced transition blocks.
pub fn write_aggregated(out: &mut String, agg: &AggregatedSystem) {
    match &agg.h_blocks {
        Some(blocks) => {
            for (&id, h) in agg.block_ids.iter().zip(blocks) {
                write_logical(out, Some(&format!("H_u{}", id + 1)), h);
            }
        }
        None => writeln!(out, "# product form skipped: {} factors exceed {MAX_PRODUCT_FACTORS}", agg.s).unwrap(),
    }
    writeln!(out, "section reduced").unwrap();
    for c in &agg.reduced.classes {
        let bits: String = c.iter().map(|&b| if b { '1' } else { '0' }).collect();
        writeln!(out, "class {bits}").unwrap();
    }
    let n_states = agg.reduced.state_class.len();
    write_logical(
        out,
        Some("state_class"),
        &LogicalMatrix::new(agg.reduced.class_count(), agg.reduced.state_class.clone()).expect("classes in range"),
    );
    debug_assert!(n_states.is_power_of_two());
    for (&id, b) in agg.block_ids.iter().zip(agg.reduced.blocks()) {
        write_logical(out, Some(&format!("R_u{}", id + 1)), &b);
    }
}

/// Parses a closure bundle back into its closure (H blocks are recomputed,
/// not trusted).
pub fn parse_closure_bundle(text: &str) -> Result<Closure> {
    let mut r = Reader::new(text);
    let functions = function_set_from(&mut r)?;
    let (block_ids, successors) = read_successors(&mut r, functions.len())?;
    let generator_indices = (0..functions.len()).collect();
    Ok(Closure {
        functions,
        block_ids,
        successors,
        generator_indices,
    })
}

/// Realization bundle: closure functions, σ maps, H blocks, Ξ and the
/// reduced system, in that order.
pub fn write_realization_bundle(real: &Realization) -> String {
    let mut out = String::new();
    let cl = &real.closure;
    writeln!(out, "# minimum realization: {} functions, {} attained classes", cl.len(), real.aggregated.reduced.class_count()).unwrap();
    writeln!(out, "section functions").unwrap();
    write_function_set(&mut out, &cl.functions);
    writeln!(out, "section successors").unwrap();
    write_successors(&mut out, &cl.block_ids, &cl.successors);
    writeln!(out, "section outputs").unwrap();
    for &k in &real.output_positions {
        writeln!(out, "output {}", k + 1).unwrap();
    }
    if let Some(xi) = &real.xi {
        write_logical(&mut out, Some("Xi"), xi);
    }
    writeln!(out, "section aggregated").unwrap();
    write_aggregated(&mut out, &real.aggregated);
    let p = real.output_positions.len();
    write_logical(
        &mut out,
        Some("reduced_output"),
        &LogicalMatrix::new(1 << p, real.reduced_output.clone()).expect("outputs in range"),
    );
    out
}

fn expect_line(r: &mut Reader<'_>, line: &str) -> Result<()> {
    match r.peek() {
        Some(l) if l == line => {
            r.next_line();
            Ok(())
        }
        other => Err(r.err(format!("expected `{line}`, found `{}`", other.unwrap_or("end of file")))),
    }
}

fn named_logical(r: &mut Reader<'_>, name: &str) -> Result<LogicalMatrix> {
    if !r.at_stanza() {
        return Err(r.err(format!("expected stanza `{name}`")));
    }
    let st = r.stanza()?;
    if st.name.as_deref() != Some(name) {
        return Err(r.err(format!("expected stanza `{name}`, found {:?}", st.name)));
    }
    st.matrix.into_logical()
}

/// Parses a realization bundle. The matrices are taken as written, so a
/// tampered bundle is verified as-is.
pub fn parse_realization_bundle(text: &str) -> Result<Realization> {
    let mut r = Reader::new(text);
    expect_line(&mut r, "section functions")?;
    let functions = function_set_from(&mut r)?;
    let s = functions.len();
    let n_states = 1usize << functions.n();
    expect_line(&mut r, "section successors")?;
    let (block_ids, successors) = read_successors(&mut r, s)?;
    expect_line(&mut r, "section outputs")?;
    let mut output_positions = Vec::new();
    while let Some(rest) = r.peek().and_then(|l| l.strip_prefix("output ")) {
        let k: usize = rest.trim().parse().map_err(|_| r.err("bad output line"))?;
        if k == 0 || k > s {
            return Err(r.err("output position out of range"));
        }
        output_positions.push(k - 1);
        r.next_line();
    }
    if output_positions.is_empty() {
        return Err(r.err("no outputs listed"));
    }
    let product = s <= MAX_PRODUCT_FACTORS;
    let xi = if product { Some(named_logical(&mut r, "Xi")?) } else { None };
    expect_line(&mut r, "section aggregated")?;
    let h_blocks = if product {
        let hs = block_ids
            .iter()
            .map(|&id| named_logical(&mut r, &format!("H_u{}", id + 1)))
            .collect::<Result<Vec<_>>>()?;
        if hs.iter().any(|h| h.rows() != 1 << s || h.cols() != 1 << s) {
            return Err(r.err("H blocks must be 2^s x 2^s"));
        }
        Some(hs)
    } else {
        None
    };
    expect_line(&mut r, "section reduced")?;
    let mut classes = Vec::new();
    while let Some(bits) = r.peek().and_then(|l| l.strip_prefix("class ")) {
        let c: Vec<bool> = bits
            .trim()
            .chars()
            .map(|ch| match ch {
                '1' => Ok(true),
                '0' => Ok(false),
                _ => Err(r.err("class bits must be 0/1")),
            })
            .collect::<Result<_>>()?;
        if c.len() != s {
            return Err(r.err("class width differs from the function count"));
        }
        classes.push(c);
        r.next_line();
    }
    let q = classes.len();
    let state_class = named_logical(&mut r, "state_class")?;
    if state_class.rows() != q || state_class.cols() != n_states {
        return Err(r.err("state_class has the wrong shape"));
    }
    let transitions = block_ids
        .iter()
        .map(|&id| {
            let m = named_logical(&mut r, &format!("R_u{}", id + 1))?;
            if m.rows() != q || m.cols() != q {
                return Err(r.err("reduced block has the wrong shape"));
            }
            Ok(m.targets().to_vec())
        })
        .collect::<Result<Vec<_>>>()?;
    let reduced_output = named_logical(&mut r, "reduced_output")?;
    if reduced_output.cols() != q || reduced_output.rows() != 1 << output_positions.len() {
        return Err(r.err("reduced_output has the wrong shape"));
    }
    if !r.at_end() {
        return Err(r.err(format!("unexpected `{}`", r.peek().unwrap_or(""))));
    }
    if let Some(xi) = &xi {
        if xi.cols() != 1 << s || xi.rows() != 1 << output_positions.len() {
            return Err(Error::format("Xi has the wrong shape"));
        }
    }
    let structure = if product { Some(combined_structure(&functions)?) } else { None };
    let closure = Closure {
        functions,
        block_ids: block_ids.clone(),
        successors: successors.clone(),
        generator_indices: (0..output_positions.len()).collect(),
    };
    Ok(Realization {
        closure,
        aggregated: AggregatedSystem {
            s,
            block_ids,
            successors,
            h_blocks,
            structure,
            reduced: ReducedSystem {
                classes,
                state_class: state_class.targets().to_vec(),
                transitions,
            },
        },
        output_positions,
        xi,
        reduced_output: reduced_output.targets().to_vec(),
    })
}

/// One line of a discrepancy report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Discrepancy {
    /// A column where a generated matrix differs from a transcribed one
    /// (1-based column and row indices).
    Column {
        matrix: String,
        column: usize,
        generated: usize,
        appendix: usize,
    },
    /// A published statement that the derived computation does not reproduce.
    Claim {
        source: String,
        claim: String,
        derived: String,
    },
}

/// Compares two logical matrices column by column.
pub fn compare_columns(label: &str, generated: &LogicalMatrix, transcribed: &LogicalMatrix) -> Result<Vec<Discrepancy>> {
    if generated.rows() != transcribed.rows() || generated.cols() != transcribed.cols() {
        return Err(Error::dims(format!(
            "{label}: generated {}x{} vs transcribed {}x{}",
            generated.rows(),
            generated.cols(),
            transcribed.rows(),
            transcribed.cols()
        )));
    }
    Ok((0..generated.cols())
        .filter(|&c| generated.target(c) != transcribed.target(c))
        .map(|c| Discrepancy::Column {
            matrix: label.to_string(),
            column: c + 1,
            generated: generated.target(c) + 1,
            appendix: transcribed.target(c) + 1,
        })
        .collect())
}

pub fn write_discrepancies(items: &[Discrepancy]) -> String {
    items
        .iter()
        .map(|d| serde_json::to_string(d).expect("plain data serializes") + "\n")
        .collect()
}

pub fn parse_discrepancies(text: &str) -> Result<Vec<Discrepancy>> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| serde_json::from_str(l).map_err(|e| Error::format(format!("discrepancy line: {e}"))))
        .collect()
}
