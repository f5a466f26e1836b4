//! Subspaces spanned by logical functions: regularity, invariance
//! certificates, invariant closures and aggregated dynamics.

mod aggregate;
mod closure;

pub use aggregate::{aggregated_dynamics, AggregatedSystem, ReducedSystem, MAX_PRODUCT_FACTORS};
pub use closure::{closure_bn, closure_over, Closure, ClosureOptions, ClosureResult, DEFAULT_CLOSURE_CAP};

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::stp::{DeltaVector, DenseMatrix, LogicalMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Provenance {
    Generator,
    /// Discovered at the given breadth-first depth.
    Derived { step: usize },
}

/// Ordered, duplicate-free set of scalar logical functions `z_i = G_i x`,
/// each stored as its `2 x 2^n` structure matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctionSet {
    n: usize,
    funcs: Vec<LogicalMatrix>,
    names: Vec<String>,
    provenance: Vec<Provenance>,
    index: HashMap<Vec<usize>, usize>,
}

impl FunctionSet {
    pub fn new(n: usize) -> Self {
        FunctionSet {
            n,
            funcs: Vec::new(),
            names: Vec::new(),
            provenance: Vec::new(),
            index: HashMap::new(),
        }
    }

    /// Generators with default names `z1, z2, …`; repeats are dropped.
    pub fn from_generators(n: usize, funcs: impl IntoIterator<Item = LogicalMatrix>) -> Result<Self> {
        let mut fs = Self::new(n);
        for f in funcs {
            let name = format!("z{}", fs.len() + 1);
            fs.insert(f, name, Provenance::Generator)?;
        }
        Ok(fs)
    }

    /// Inserts unless an identical function is present; returns its position
    /// and whether it was new.
    pub fn insert(
        &mut self,
        f: LogicalMatrix,
        name: impl Into<String>,
        provenance: Provenance,
    ) -> Result<(usize, bool)> {
        if f.rows() != 2 || f.cols() != 1 << self.n {
            return Err(Error::dims(format!(
                "function is {}x{}, expected 2x{}",
                f.rows(),
                f.cols(),
                1usize << self.n
            )));
        }
        if let Some(&i) = self.index.get(f.targets()) {
            return Ok((i, false));
        }
        let i = self.funcs.len();
        self.index.insert(f.targets().to_vec(), i);
        self.funcs.push(f);
        self.names.push(name.into());
        self.provenance.push(provenance);
        Ok((i, true))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.funcs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.funcs.is_empty()
    }

    pub fn get(&self, i: usize) -> &LogicalMatrix {
        &self.funcs[i]
    }

    pub fn functions(&self) -> &[LogicalMatrix] {
        &self.funcs
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn provenance(&self, i: usize) -> Provenance {
        self.provenance[i]
    }

    pub fn position(&self, f: &LogicalMatrix) -> Option<usize> {
        self.index.get(f.targets()).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = &LogicalMatrix> {
        self.funcs.iter()
    }
}

/// `G = G_1 * … * G_r`, the `2^r x 2^n` structure matrix of `z = ⋉ z_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubspaceMatrix {
    pub r: usize,
    pub g: LogicalMatrix,
}

impl SubspaceMatrix {
    pub fn new(g: LogicalMatrix) -> Result<Self> {
        if !g.rows().is_power_of_two() {
            return Err(Error::dims("subspace matrix needs 2^r rows"));
        }
        Ok(SubspaceMatrix {
            r: g.rows().trailing_zeros() as usize,
            g,
        })
    }
}

/// Largest number of functions whose product `z = ⋉ z_i` is indexed directly.
pub const MAX_SUBSPACE_FUNCTIONS: usize = 40;

pub fn combined_structure(fs: &FunctionSet) -> Result<SubspaceMatrix> {
    if fs.is_empty() {
        return Err(Error::dims("empty function set"));
    }
    if fs.len() > MAX_SUBSPACE_FUNCTIONS {
        return Err(Error::CapExceeded {
            what: "functions in a combined structure matrix",
            limit: MAX_SUBSPACE_FUNCTIONS,
            frontier: fs.len(),
        });
    }
    Ok(SubspaceMatrix {
        r: fs.len(),
        g: LogicalMatrix::khatri_rao_all(fs.functions())?,
    })
}

/// Regular iff every value `δ_{2^r}^k` is attained by exactly `2^{n-r}` states.
pub fn is_regular(q: &SubspaceMatrix) -> bool {
    let states = q.g.cols();
    let values = q.g.rows();
    if values > states || !states.is_multiple_of(values) {
        return false;
    }
    let mut counts = vec![0usize; values];
    for &t in q.g.targets() {
        counts[t] += 1;
    }
    let fiber = states / values;
    counts.iter().all(|&c| c == fiber)
}

/// For each value `j` of `Q`, how many states `x` with `Qx = δ^j` land on each `QMx`.
fn fiber_images(q: &SubspaceMatrix, m: &LogicalMatrix) -> Result<Vec<BTreeMap<usize, usize>>> {
    let qm = q.g.compose(m)?;
    let mut images = vec![BTreeMap::new(); q.g.rows()];
    for (k, &j) in q.g.targets().iter().enumerate() {
        *images[j].entry(qm.target(k)).or_insert(0) += 1;
    }
    if let Some(j) = images.iter().position(|im| im.is_empty()) {
        return Err(Error::UnattainedValue { value: j + 1 });
    }
    Ok(images)
}

/// `H^*` by exact counting: entry `(i, j)` is the fraction of the fiber
/// `{x : Qx = δ^j}` mapped to `QMx = δ^i`.
pub fn h_star(q: &SubspaceMatrix, m: &LogicalMatrix) -> Result<DenseMatrix> {
    let images = fiber_images(q, m)?;
    let size = q.g.rows();
    let mut h = DenseMatrix::zeros(size, size);
    for (j, im) in images.iter().enumerate() {
        let total: usize = im.values().sum();
        for (&i, &c) in im {
            h.set(i, j, BigRational::new(BigInt::from(c), BigInt::from(total)));
        }
    }
    Ok(h)
}

/// Witness that `QM = HQ` holds column by column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvarianceCertificate {
    pub h: LogicalMatrix,
}

impl InvarianceCertificate {
    pub fn holds(&self, q: &SubspaceMatrix, m: &LogicalMatrix) -> bool {
        matches!(
            (q.g.compose(m), self.h.compose(&q.g)),
            (Ok(a), Ok(b)) if a == b
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certification {
    Invariant(InvarianceCertificate),
    /// Two states with `Qx = Qx'` but `QMx ≠ QMx'`.
    NotInvariant { x: DeltaVector, x_prime: DeltaVector },
}

/// Decides `M`-invariance of the subspace with structure matrix `Q`.
pub fn invariance_certificate(q: &SubspaceMatrix, m: &LogicalMatrix) -> Result<Certification> {
    let images = fiber_images(q, m)?;
    let size = q.g.rows();
    if images.iter().all(|im| im.len() == 1) {
        let targets = images
            .iter()
            .map(|im| *im.keys().next().expect("nonempty fiber"))
            .collect();
        let cert = InvarianceCertificate {
            h: LogicalMatrix::new(size, targets)?,
        };
        debug_assert!(cert.holds(q, m));
        return Ok(Certification::Invariant(cert));
    }
    let qm = q.g.compose(m)?;
    let states = q.g.cols();
    let mut first: HashMap<usize, usize> = HashMap::new();
    for k in 0..states {
        let j = q.g.target(k);
        match first.get(&j) {
            Some(&k0) if qm.target(k0) != qm.target(k) => {
                return Ok(Certification::NotInvariant {
                    x: DeltaVector::new(states, k0 + 1)?,
                    x_prime: DeltaVector::new(states, k + 1)?,
                });
            }
            Some(_) => {}
            None => {
                first.insert(j, k);
            }
        }
    }
    unreachable!("a fiber with two images always yields a witness")
}

/// An invariant subspace together with its dynamics, `G M = H G`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertifiedSubspace {
    pub g: SubspaceMatrix,
    pub h: LogicalMatrix,
}

impl CertifiedSubspace {
    pub fn holds(&self, m: &LogicalMatrix) -> bool {
        InvarianceCertificate { h: self.h.clone() }.holds(&self.g, m)
    }
}

/// The union of two `M`-invariant subspaces is invariant with
/// `G = G_1 * G_2` and `H = H_1 ⊗ H_2`.
pub fn union_invariant(
    a: &CertifiedSubspace,
    b: &CertifiedSubspace,
    m: &LogicalMatrix,
) -> Result<CertifiedSubspace> {
    for (name, c) in [("first", a), ("second", b)] {
        if !c.holds(m) {
            return Err(Error::InvalidCertificate(format!(
                "{name} subspace does not satisfy G M = H G"
            )));
        }
    }
    let out = CertifiedSubspace {
        g: SubspaceMatrix::new(a.g.g.khatri_rao(&b.g.g)?)?,
        h: a.h.kron(&b.h),
    };
    debug_assert!(out.holds(m));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(p: usize, idx: &[usize]) -> LogicalMatrix {
        LogicalMatrix::from_delta(p, idx).unwrap()
    }

    #[test]
    fn function_set_deduplicates() {
        let mut fs = FunctionSet::new(1);
        assert_eq!(fs.insert(d(2, &[1, 2]), "a", Provenance::Generator).unwrap(), (0, true));
        assert_eq!(fs.insert(d(2, &[1, 2]), "b", Provenance::Generator).unwrap(), (0, false));
        // negation is a different function
        assert_eq!(fs.insert(d(2, &[2, 1]), "c", Provenance::Generator).unwrap(), (1, true));
        assert!(fs.insert(d(2, &[1, 2, 1, 1]), "d", Provenance::Generator).is_err());
        assert_eq!(fs.names(), &["a".to_string(), "c".to_string()]);
    }

    #[test]
    fn regularity() {
        let id = SubspaceMatrix::new(LogicalMatrix::identity(16)).unwrap();
        assert!(is_regular(&id));
        let constant = SubspaceMatrix::new(d(2, &[2; 16])).unwrap();
        assert!(!is_regular(&constant));
    }

    #[test]
    fn identity_frame_gives_h_equal_m() {
        let m = d(4, &[2, 2, 4, 1]);
        let q = SubspaceMatrix::new(LogicalMatrix::identity(4)).unwrap();
        match invariance_certificate(&q, &m).unwrap() {
            Certification::Invariant(c) => assert_eq!(c.h, m),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unattained_value_is_distinct_error() {
        let m = LogicalMatrix::identity(4);
        let q = SubspaceMatrix::new(d(2, &[1, 1, 1, 1])).unwrap();
        assert!(matches!(
            invariance_certificate(&q, &m),
            Err(Error::UnattainedValue { value: 2 })
        ));
    }

    #[test]
    fn refusal_names_a_witness_pair() {
        // z = x1 under x1' = x2, x2' = x1
        let m = d(4, &[1, 3, 2, 4]);
        let q = SubspaceMatrix::new(d(2, &[1, 1, 2, 2])).unwrap();
        match invariance_certificate(&q, &m).unwrap() {
            Certification::NotInvariant { x, x_prime } => {
                assert_eq!(q.g.target(x.pos()), q.g.target(x_prime.pos()));
                let qm = q.g.compose(&m).unwrap();
                assert_ne!(qm.target(x.pos()), qm.target(x_prime.pos()));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn union_with_itself() {
        let m = d(4, &[1, 3, 2, 4]);
        let g = SubspaceMatrix::new(d(2, &[1, 2, 2, 1])).unwrap();
        let c = CertifiedSubspace {
            g,
            h: LogicalMatrix::identity(2),
        };
        assert!(c.holds(&m));
        let u = union_invariant(&c, &c, &m).unwrap();
        assert_eq!(u.h, LogicalMatrix::identity(4));
        let bogus = CertifiedSubspace {
            h: d(2, &[2, 1]),
            ..c.clone()
        };
        assert!(matches!(
            union_invariant(&c, &bogus, &m),
            Err(Error::InvalidCertificate(_))
        ));
    }
}
