use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::invariant::AggregatedSystem;
use crate::stp::ZeroExtendedLogicalMatrix;

/// `u = δ^control` is forbidden while the aggregated state is in `classes`.
/// Both indices are 0-based; classes index the reduced (attained) form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ForbidRule {
    pub control: usize,
    pub classes: BTreeSet<usize>,
}

/// State-dependent control constraints over the reduced aggregated system.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ControlConstraint {
    pub rules: Vec<ForbidRule>,
}

impl ControlConstraint {
    pub fn forbid(mut self, control: usize, classes: impl IntoIterator<Item = usize>) -> Self {
        self.rules.push(ForbidRule {
            control,
            classes: classes.into_iter().collect(),
        });
        self
    }

    /// Parses lines `forbid u=<index> when class in {k1,k2,…}` (1-based).
    pub fn parse(text: &str) -> Result<Self> {
        let mut out = ControlConstraint::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = |msg: &str| Error::format(format!("constraint line {}: {msg}", i + 1));
            let rest = line
                .strip_prefix("forbid")
                .ok_or_else(|| bad("expected `forbid`"))?
                .trim_start();
            let rest = rest
                .strip_prefix("u=")
                .ok_or_else(|| bad("expected `u=<index>`"))?;
            let (u, rest) = rest.split_once(char::is_whitespace).ok_or_else(|| bad("expected `when`"))?;
            let u: usize = u.parse().map_err(|_| bad("control index is not a number"))?;
            if u == 0 {
                return Err(bad("control indices start at 1"));
            }
            let set = rest
                .trim_start()
                .strip_prefix("when")
                .and_then(|r| r.trim_start().strip_prefix("class"))
                .and_then(|r| r.trim_start().strip_prefix("in"))
                .map(str::trim)
                .and_then(|r| r.strip_prefix('{'))
                .and_then(|r| r.strip_suffix('}'))
                .ok_or_else(|| bad("expected `when class in {…}`"))?;
            let mut classes = BTreeSet::new();
            for k in set.split(',').map(str::trim).filter(|k| !k.is_empty()) {
                let k: usize = k.parse().map_err(|_| bad("class index is not a number"))?;
                if k == 0 {
                    return Err(bad("class indices start at 1"));
                }
                classes.insert(k - 1);
            }
            out.rules.push(ForbidRule {
                control: u - 1,
                classes,
            });
        }
        Ok(out)
    }

    pub fn is_forbidden(&self, class: usize, control: usize) -> bool {
        self.rules
            .iter()
            .any(|r| r.control == control && r.classes.contains(&class))
    }
}

impl fmt::Display for ControlConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rules {
            let list: Vec<String> = r.classes.iter().map(|k| (k + 1).to_string()).collect();
            writeln!(f, "forbid u={} when class in {{{}}}", r.control + 1, list.join(","))?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StepOutcome {
    Next(usize),
    Forbidden,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SimulationStatus {
    Completed,
    Forbidden { step: usize, class: usize, control: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimulationTrace {
    pub classes: Vec<usize>,
    pub status: SimulationStatus,
}

/// Aggregated BCN with forbidden (class, control) pairs zeroed:
/// `z(t+1) = H^U u(t) z(t)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstrainedAggregatedBcn {
    /// Control indices of the blocks, in block order.
    pub block_ids: Vec<usize>,
    /// Reduced form, `q x (k q)` for `k` blocks over `q` attained classes.
    pub reduced: ZeroExtendedLogicalMatrix,
    /// Product form `2^s x (k 2^s)`, when the aggregated system has one.
    pub product: Option<ZeroExtendedLogicalMatrix>,
    pub constraint: ControlConstraint,
}

impl ConstrainedAggregatedBcn {
    pub fn class_count(&self) -> usize {
        self.reduced.rows()
    }

    pub fn step(&self, class: usize, control: usize) -> Result<StepOutcome> {
        let q = self.class_count();
        let b = self
            .block_ids
            .iter()
            .position(|&id| id == control)
            .ok_or_else(|| Error::dims(format!("control {} is not in scope", control + 1)))?;
        if class >= q {
            return Err(Error::dims(format!("class {} out of range", class + 1)));
        }
        Ok(match self.reduced.target(b * q + class) {
            Some(t) => StepOutcome::Next(t),
            None => StepOutcome::Forbidden,
        })
    }

    /// Runs the control word from `start`, halting at the first forbidden pair.
    pub fn simulate(&self, start: usize, controls: &[usize]) -> Result<SimulationTrace> {
        let mut classes = vec![start];
        let mut c = start;
        for (step, &u) in controls.iter().enumerate() {
            match self.step(c, u)? {
                StepOutcome::Next(t) => {
                    c = t;
                    classes.push(c);
                }
                StepOutcome::Forbidden => {
                    return Ok(SimulationTrace {
                        classes,
                        status: SimulationStatus::Forbidden {
                            step,
                            class: c,
                            control: u,
                        },
                    })
                }
            }
        }
        Ok(SimulationTrace {
            classes,
            status: SimulationStatus::Completed,
        })
    }
}

/// Zeroes exactly the columns of the forbidden (class, control) pairs.
///
/// Classes refer to the reduced form; in the product form only the columns
/// of attained value vectors in those classes are zeroed.
pub fn apply_constraints(agg: &AggregatedSystem, c: &ControlConstraint) -> Result<ConstrainedAggregatedBcn> {
    let q = agg.reduced.class_count();
    for r in &c.rules {
        if let Some(&k) = r.classes.iter().find(|&&k| k >= q) {
            return Err(Error::format(format!(
                "constraint references class {} but only {q} classes exist",
                k + 1
            )));
        }
        if !agg.block_ids.contains(&r.control) {
            return Err(Error::format(format!(
                "constraint references control u={} which is not in scope",
                r.control + 1
            )));
        }
    }
    let mut reduced = ZeroExtendedLogicalMatrix::new(
        q,
        agg.reduced
            .transitions
            .iter()
            .flat_map(|t| t.iter().map(|&x| Some(x)))
            .collect(),
    )?;
    let mut product = agg.h().map(ZeroExtendedLogicalMatrix::from);
    // the product form only exists for small closures, so its width fits
    let width = product.as_ref().map_or(0, |p| p.cols() / agg.block_ids.len());
    for (b, &id) in agg.block_ids.iter().enumerate() {
        for class in 0..q {
            if c.is_forbidden(class, id) {
                reduced.zero_column(b * q + class);
                if let Some(p) = product.as_mut() {
                    p.zero_column(b * width + agg.reduced.class_z_pos(class));
                }
            }
        }
    }
    Ok(ConstrainedAggregatedBcn {
        block_ids: agg.block_ids.clone(),
        reduced,
        product,
        constraint: c.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print() {
        let text = "# comment\nforbid u=2 when class in {3,4,5,6}\n\nforbid u=1 when class in {}\n";
        let c = ControlConstraint::parse(text).unwrap();
        assert_eq!(c.rules.len(), 2);
        assert_eq!(c.rules[0].control, 1);
        assert_eq!(c.rules[0].classes.iter().copied().collect::<Vec<_>>(), vec![2, 3, 4, 5]);
        assert!(c.is_forbidden(2, 1));
        assert!(!c.is_forbidden(2, 0));
        assert_eq!(ControlConstraint::parse(&c.to_string()).unwrap(), c);
    }

    #[test]
    fn parse_errors() {
        for bad in [
            "allow u=1 when class in {1}",
            "forbid u=x when class in {1}",
            "forbid u=0 when class in {1}",
            "forbid u=1 when class in 1,2",
            "forbid u=1 when class in {0}",
            "forbid u=1",
        ] {
            assert!(ControlConstraint::parse(bad).is_err(), "{bad}");
        }
    }
}
