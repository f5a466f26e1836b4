use std::fmt::Write as _;

use super::{parse_formula_at, Formula};
use crate::error::{Error, Pos, Result};

/// A parsed Boolean (control) network with optional outputs.
///
/// State variables keep their declaration order, which is also the order of
/// the factors in `x = x_1 ⋉ … ⋉ x_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NetworkDef {
    pub state_vars: Vec<String>,
    pub control_vars: Vec<String>,
    pub update_rules: Vec<Formula>,
    pub outputs: Vec<(String, Formula)>,
}

impl NetworkDef {
    /// Checks that every rule exists and only references declared names.
    pub fn new(
        state_vars: Vec<String>,
        control_vars: Vec<String>,
        update_rules: Vec<Formula>,
        outputs: Vec<(String, Formula)>,
    ) -> Result<Self> {
        if state_vars.is_empty() {
            return Err(Error::format("network has no state variables"));
        }
        if update_rules.len() != state_vars.len() {
            return Err(Error::format(format!(
                "{} update rules for {} state variables",
                update_rules.len(),
                state_vars.len()
            )));
        }
        let mut seen = Vec::new();
        for name in control_vars.iter().chain(&state_vars) {
            if seen.contains(&name) {
                return Err(Error::format(format!("`{name}` declared twice")));
            }
            seen.push(name);
        }
        let net = NetworkDef {
            state_vars,
            control_vars,
            update_rules,
            outputs,
        };
        let scope = net.scope();
        for f in &net.update_rules {
            f.bind(&scope)?;
        }
        for (_, f) in &net.outputs {
            f.bind(&net.state_vars)?;
        }
        Ok(net)
    }

    pub fn n(&self) -> usize {
        self.state_vars.len()
    }

    pub fn m(&self) -> usize {
        self.control_vars.len()
    }

    /// Variable order for update-rule structure matrices: controls, then states.
    pub fn scope(&self) -> Vec<String> {
        self.control_vars
            .iter()
            .chain(&self.state_vars)
            .cloned()
            .collect()
    }

    /// Renders the network in the `.bn` text format.
    pub fn to_dsl(&self) -> String {
        let mut out = String::new();
        if !self.control_vars.is_empty() {
            let _ = writeln!(out, "inputs: {}", self.control_vars.join(" "));
        }
        for (name, f) in self.state_vars.iter().zip(&self.update_rules) {
            let _ = writeln!(out, "{name} <- {f}");
        }
        for (name, f) in &self.outputs {
            let _ = writeln!(out, "{name} = {f}");
        }
        out
    }
}

enum Line<'a> {
    Inputs(Vec<&'a str>),
    Update { name: &'a str, body: &'a str, col: usize },
    Output { name: &'a str, body: &'a str, col: usize },
}

fn split_ident(s: &str) -> (&str, &str) {
    let end = s
        .char_indices()
        .find(|&(_, c)| !(c.is_ascii_alphanumeric() || c == '_'))
        .map_or(s.len(), |(i, _)| i);
    s.split_at(end)
}

fn classify(raw: &str, line: usize) -> Result<Option<Line<'_>>> {
    let text = raw.split('#').next().unwrap_or("");
    let trimmed = text.trim_start();
    if trimmed.trim().is_empty() {
        return Ok(None);
    }
    let indent = text.len() - trimmed.len();
    if let Some(rest) = trimmed.strip_prefix("inputs:") {
        return Ok(Some(Line::Inputs(rest.split_whitespace().collect())));
    }
    let (name, rest) = split_ident(trimmed);
    let at = Pos {
        line,
        col: indent + 1,
    };
    if name.is_empty() || !name.starts_with(|c: char| c.is_ascii_alphabetic() || c == '_') {
        return Err(Error::Syntax {
            pos: at,
            msg: "expected `inputs:`, `<name> <- <formula>` or `<name> = <formula>`".into(),
        });
    }
    let after = rest.trim_start();
    let offset = indent + name.len() + (rest.len() - after.len());
    if after.starts_with("<-") && !after.starts_with("<->") {
        Ok(Some(Line::Update {
            name,
            body: &after[2..],
            col: offset + 3,
        }))
    } else if let Some(body) = after.strip_prefix('=') {
        Ok(Some(Line::Output {
            name,
            body,
            col: offset + 2,
        }))
    } else {
        Err(Error::Syntax {
            pos: Pos {
                line,
                col: offset + 1,
            },
            msg: format!("expected `<-` or `=` after `{name}`"),
        })
    }
}

/// Parses a `.bn` network file.
///
/// ```text
/// inputs: u1            # optional
/// x1 <- x1 & !u1        # one update per state variable
/// y1 = x1               # optional outputs
/// ```
pub fn parse_network(text: &str) -> Result<NetworkDef> {
    let mut controls: Vec<String> = Vec::new();
    let mut states: Vec<String> = Vec::new();
    let mut lines = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        match classify(raw, line)? {
            None => {}
            Some(Line::Inputs(names)) => {
                for n in names {
                    let (id, rest) = split_ident(n);
                    if !rest.is_empty() || !id.starts_with(|c: char| c.is_ascii_alphabetic() || c == '_') {
                        return Err(Error::Syntax {
                            pos: Pos { line, col: 1 },
                            msg: format!("`{n}` is not a valid input name"),
                        });
                    }
                    controls.push(n.to_string());
                }
            }
            Some(l @ Line::Update { name, .. }) => {
                if states.iter().any(|s| s == name) {
                    return Err(Error::Syntax {
                        pos: Pos { line, col: 1 },
                        msg: format!("second update rule for `{name}`"),
                    });
                }
                states.push(name.to_string());
                lines.push((line, l));
            }
            Some(l @ Line::Output { .. }) => lines.push((line, l)),
        }
    }
    let scope: Vec<String> = controls.iter().chain(&states).cloned().collect();
    let mut rules = Vec::new();
    let mut outputs = Vec::new();
    for (line, l) in lines {
        match l {
            Line::Update { body, col, .. } => {
                rules.push(parse_formula_at(body, &scope, Pos { line, col })?);
            }
            Line::Output { name, body, col } => {
                let f = parse_formula_at(body, &states, Pos { line, col })?;
                outputs.push((name.to_string(), f));
            }
            Line::Inputs(_) => unreachable!(),
        }
    }
    NetworkDef::new(states, controls, rules, outputs)
}
