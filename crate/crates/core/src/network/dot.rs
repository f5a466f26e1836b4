use std::io::{self, Write};

use super::BcnAssr;
use crate::error::{Error, Result};
use crate::stp::{decode_pos, LogicalMatrix, ZeroExtendedLogicalMatrix};

pub const DEFAULT_EDGE_CAP: usize = 1 << 16;

#[derive(Clone, Debug)]
pub struct DotOptions {
    pub graph_name: String,
    /// Maximum number of (state, control) pairs to render.
    pub cap: usize,
    /// Also label states with their Boolean tuple.
    pub bit_labels: bool,
}

impl Default for DotOptions {
    fn default() -> Self {
        DotOptions {
            graph_name: "stg".into(),
            cap: DEFAULT_EDGE_CAP,
            bit_labels: false,
        }
    }
}

/// Labeled transition structure: `targets[control][state]`, `None` for a
/// forbidden (zero) column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransitionTable {
    pub node_labels: Vec<String>,
    pub control_labels: Vec<String>,
    pub targets: Vec<Vec<Option<usize>>>,
}

fn control_labels(count: usize) -> Vec<String> {
    if count == 1 {
        vec![String::new()]
    } else {
        (1..=count).map(|r| format!("u=δ_{count}^{r}")).collect()
    }
}

impl TransitionTable {
    pub fn from_blocks(blocks: &[LogicalMatrix]) -> Self {
        let targets = blocks
            .iter()
            .map(|b| b.targets().iter().map(|&t| Some(t)).collect())
            .collect();
        Self::with_default_labels(blocks.first().map_or(0, |b| b.cols()), targets)
    }

    pub fn from_zero_extended(blocks: &[ZeroExtendedLogicalMatrix]) -> Self {
        let targets = blocks.iter().map(|b| b.targets().to_vec()).collect();
        Self::with_default_labels(blocks.first().map_or(0, |b| b.cols()), targets)
    }

    fn with_default_labels(nodes: usize, targets: Vec<Vec<Option<usize>>>) -> Self {
        let controls = targets.len();
        TransitionTable {
            node_labels: (1..=nodes).map(|i| i.to_string()).collect(),
            control_labels: control_labels(controls),
            targets,
        }
    }

    pub fn edge_count(&self) -> usize {
        self.targets.iter().flatten().filter(|t| t.is_some()).count()
    }

    pub fn write_dot<W: Write>(&self, name: &str, out: &mut W) -> io::Result<()> {
        writeln!(out, "digraph {name} {{")?;
        writeln!(out, "  node [shape=ellipse];")?;
        for (i, label) in self.node_labels.iter().enumerate() {
            writeln!(out, "  s{} [label=\"{}\"];", i + 1, label)?;
        }
        for (i, _) in self.node_labels.iter().enumerate() {
            for (r, row) in self.targets.iter().enumerate() {
                let Some(t) = row[i] else { continue };
                let label = &self.control_labels[r];
                if label.is_empty() {
                    writeln!(out, "  s{} -> s{};", i + 1, t + 1)?;
                } else {
                    writeln!(out, "  s{} -> s{} [label=\"{}\"];", i + 1, t + 1, label)?;
                }
            }
        }
        writeln!(out, "}}")
    }

    pub fn to_dot(&self, name: &str) -> String {
        let mut buf = Vec::new();
        self.write_dot(name, &mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("labels are UTF-8")
    }
}

/// DOT rendering of `x(t+1) = L u(t) x(t)`, one node per state and one edge
/// per (state, control) pair.
pub fn state_transition_graph(sys: &BcnAssr, opts: &DotOptions) -> Result<String> {
    let pairs = sys.state_count() * sys.control_count();
    if pairs > opts.cap {
        return Err(Error::CapExceeded {
            what: "state transition graph edges",
            limit: opts.cap,
            frontier: pairs,
        });
    }
    let mut table = TransitionTable::from_blocks(&sys.blocks);
    if opts.bit_labels {
        for (i, label) in table.node_labels.iter_mut().enumerate() {
            let bits: String = decode_pos(i, sys.n)
                .iter()
                .map(|&b| if b { '1' } else { '0' })
                .collect();
            *label = format!("{} ({bits})", i + 1);
        }
    }
    Ok(table.to_dot(&opts.graph_name))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_node_has_two_self_loops() {
        let sys = BcnAssr::from_blocks(1, vec![LogicalMatrix::identity(2)]).unwrap();
        let dot = state_transition_graph(&sys, &DotOptions::default()).unwrap();
        assert!(dot.contains("s1 -> s1;"));
        assert!(dot.contains("s2 -> s2;"));
        assert_eq!(dot.matches("->").count(), 2);
    }

    #[test]
    fn zero_columns_are_absent_edges() {
        let z = ZeroExtendedLogicalMatrix::from_delta(3, &[2, 0, 1]).unwrap();
        let w = ZeroExtendedLogicalMatrix::from_delta(3, &[0, 0, 3]).unwrap();
        let t = TransitionTable::from_zero_extended(&[z, w]);
        assert_eq!(t.edge_count(), 3);
        let dot = t.to_dot("g");
        assert_eq!(dot.matches("->").count(), 3);
        assert!(dot.contains("s3 -> s3 [label=\"u=δ_2^2\"]"));
    }

    #[test]
    fn cap_is_enforced() {
        let sys = BcnAssr::from_blocks(3, vec![LogicalMatrix::identity(8); 2]).unwrap();
        let opts = DotOptions {
            cap: 15,
            ..DotOptions::default()
        };
        assert!(matches!(
            state_transition_graph(&sys, &opts),
            Err(Error::CapExceeded { .. })
        ));
        let opts = DotOptions {
            bit_labels: true,
            ..DotOptions::default()
        };
        let dot = state_transition_graph(&sys, &opts).unwrap();
        assert!(dot.contains("label=\"1 (111)\""));
        assert_eq!(dot.matches("->").count(), 16);
    }
}
