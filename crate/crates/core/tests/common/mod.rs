//! Independent oracles and fixture generators shared by the integration
//! tests. Nothing here calls into the library's algebra: matrices are
//! multiplied entry by entry, states are decoded bit by bit, and Boolean
//! networks are simulated from their truth tables.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;

use stpnet::stp::{DenseMatrix, LogicalMatrix};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    BigRational::from_integer(BigInt::from(n))
}

/// Plain row-major rational matrix used as the reference implementation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mat {
    pub r: usize,
    pub c: usize,
    pub e: Vec<Q>,
}

impl Mat {
    pub fn zeros(r: usize, c: usize) -> Mat {
        Mat { r, c, e: vec![Q::zero(); r * c] }
    }

    pub fn eye(n: usize) -> Mat {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m.e[i * n + i] = Q::one();
        }
        m
    }

    pub fn at(&self, i: usize, j: usize) -> &Q {
        &self.e[i * self.c + j]
    }

    pub fn mul(&self, o: &Mat) -> Mat {
        assert_eq!(self.c, o.r, "oracle product dimension");
        let mut out = Mat::zeros(self.r, o.c);
        for i in 0..self.r {
            for k in 0..self.c {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.c {
                    out.e[i * o.c + j] += a * o.at(k, j);
                }
            }
        }
        out
    }

    pub fn kron(&self, o: &Mat) -> Mat {
        let (r, c) = (self.r * o.r, self.c * o.c);
        let mut out = Mat::zeros(r, c);
        for i in 0..self.r {
            for j in 0..self.c {
                for k in 0..o.r {
                    for l in 0..o.c {
                        out.e[(i * o.r + k) * c + j * o.c + l] = self.at(i, j) * o.at(k, l);
                    }
                }
            }
        }
        out
    }

    /// `(A ⊗ I_{t/n})(B ⊗ I_{t/p})` with `t = lcm(n, p)`, literally.
    pub fn stp(&self, o: &Mat) -> Mat {
        let t = lcm(self.c, o.r);
        self.kron(&Mat::eye(t / self.c)).mul(&o.kron(&Mat::eye(t / o.r)))
    }

    pub fn t(&self) -> Mat {
        let mut out = Mat::zeros(self.c, self.r);
        for i in 0..self.r {
            for j in 0..self.c {
                out.e[j * self.r + i] = self.at(i, j).clone();
            }
        }
        out
    }

    pub fn add(&self, o: &Mat) -> Mat {
        Mat {
            r: self.r,
            c: self.c,
            e: self.e.iter().zip(&o.e).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn scale(&self, k: &Q) -> Mat {
        Mat {
            r: self.r,
            c: self.c,
            e: self.e.iter().map(|a| a * k).collect(),
        }
    }

    pub fn col(&self, j: usize) -> Mat {
        Mat {
            r: self.r,
            c: 1,
            e: (0..self.r).map(|i| self.at(i, j).clone()).collect(),
        }
    }

    /// Columnwise Kronecker product, straight from the definition.
    pub fn khatri_rao(&self, o: &Mat) -> Mat {
        assert_eq!(self.c, o.c);
        let cols: Vec<Mat> = (0..self.c).map(|j| self.col(j).kron(&o.col(j))).collect();
        hstack(&cols)
    }

    pub fn to_lib(&self) -> DenseMatrix {
        DenseMatrix::new(self.r, self.c, self.e.clone()).unwrap()
    }

    pub fn from_lib(d: &DenseMatrix) -> Mat {
        Mat {
            r: d.rows(),
            c: d.cols(),
            e: d.entries().to_vec(),
        }
    }

    /// Dense 0/1 form of a column-index list (0-based targets, `None` = zero column).
    pub fn from_targets(rows: usize, targets: &[Option<usize>]) -> Mat {
        let mut m = Mat::zeros(rows, targets.len());
        for (j, t) in targets.iter().enumerate() {
            if let Some(i) = t {
                m.e[i * targets.len() + j] = Q::one();
            }
        }
        m
    }

    pub fn from_logical(l: &LogicalMatrix) -> Mat {
        let t: Vec<Option<usize>> = l.targets().iter().map(|&x| Some(x)).collect();
        Mat::from_targets(l.rows(), &t)
    }

    pub fn basis(dim: usize, pos: usize) -> Mat {
        Mat::from_targets(dim, &[Some(pos)])
    }
}

pub fn hstack(blocks: &[Mat]) -> Mat {
    let r = blocks[0].r;
    let c: usize = blocks.iter().map(|b| b.c).sum();
    let mut out = Mat::zeros(r, c);
    let mut off = 0;
    for b in blocks {
        for i in 0..r {
            for j in 0..b.c {
                out.e[i * c + off + j] = b.at(i, j).clone();
            }
        }
        off += b.c;
    }
    out
}

pub fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

/// Small random rational in `[-4, 4]` with denominator up to 3.
pub fn rand_q(rng: &mut impl Rng) -> Q {
    BigRational::new(BigInt::from(rng.gen_range(-4i64..=4)), BigInt::from(rng.gen_range(1i64..=3)))
}

pub fn rand_mat(rng: &mut impl Rng, r: usize, c: usize) -> Mat {
    Mat {
        r,
        c,
        e: (0..r * c).map(|_| rand_q(rng)).collect(),
    }
}

pub fn rand_logical(rng: &mut impl Rng, rows: usize, cols: usize) -> LogicalMatrix {
    LogicalMatrix::new(rows, (0..cols).map(|_| rng.gen_range(0..rows)).collect()).unwrap()
}

/// Unit lower-triangular times unit upper-triangular: always invertible.
pub fn rand_invertible(rng: &mut impl Rng, n: usize) -> Mat {
    let mut l = Mat::eye(n);
    let mut u = Mat::eye(n);
    for i in 0..n {
        for j in 0..n {
            if i > j {
                l.e[i * n + j] = rand_q(rng);
            } else if i < j {
                u.e[i * n + j] = rand_q(rng);
            }
        }
    }
    l.mul(&u)
}

// ------------------------------------------------------------ Boolean states

/// `x1` is the most significant bit and `1 ↔ δ_2^1`, so state
/// `(b_1, …, b_n)` sits at 0-based position `Σ (1 - b_i) 2^{n-i}`.
pub fn encode(bits: &[bool]) -> usize {
    bits.iter().fold(0, |acc, &b| (acc << 1) | usize::from(!b))
}

pub fn decode(pos: usize, n: usize) -> Vec<bool> {
    (0..n).map(|i| (pos >> (n - 1 - i)) & 1 == 0).collect()
}

/// A random Boolean network as raw truth tables: `tables[i][input]` is the
/// next value of `x_i` for the input position over `(u, x)`.
#[derive(Clone, Debug)]
pub struct TruthNet {
    pub n: usize,
    pub m: usize,
    pub tables: Vec<Vec<bool>>,
}

impl TruthNet {
    pub fn random(rng: &mut impl Rng, n: usize, m: usize) -> TruthNet {
        let inputs = 1 << (n + m);
        TruthNet {
            n,
            m,
            tables: (0..n).map(|_| (0..inputs).map(|_| rng.gen_bool(0.5)).collect()).collect(),
        }
    }

    /// Successor position of state position `x` under control position `u`.
    pub fn next(&self, u: usize, x: usize) -> usize {
        let input = (u << self.n) | x;
        let bits: Vec<bool> = self.tables.iter().map(|t| t[input]).collect();
        encode(&bits)
    }

    pub fn blocks(&self) -> Vec<LogicalMatrix> {
        (0..1usize << self.m)
            .map(|u| LogicalMatrix::new(1 << self.n, (0..1 << self.n).map(|x| self.next(u, x)).collect()).unwrap())
            .collect()
    }

    /// The network in `.bn` text, each rule a minterm expansion.
    pub fn to_dsl(&self) -> String {
        let controls: Vec<String> = (1..=self.m).map(|i| format!("u{i}")).collect();
        let states: Vec<String> = (1..=self.n).map(|i| format!("x{i}")).collect();
        let names: Vec<&String> = controls.iter().chain(&states).collect();
        let mut out = String::new();
        if self.m > 0 {
            out.push_str(&format!("inputs: {}\n", controls.join(" ")));
        }
        for (i, t) in self.tables.iter().enumerate() {
            let terms: Vec<String> = t
                .iter()
                .enumerate()
                .filter(|(_, &v)| v)
                .map(|(input, _)| {
                    let bits = decode(input, self.n + self.m);
                    let lits: Vec<String> = names
                        .iter()
                        .zip(bits)
                        .map(|(v, b)| if b { v.to_string() } else { format!("!{v}") })
                        .collect();
                    format!("({})", lits.join(" & "))
                })
                .collect();
            let body = if terms.is_empty() { "0".to_string() } else { terms.join(" | ") };
            out.push_str(&format!("{} <- {body}\n", states[i]));
        }
        out
    }
}

/// Random scalar function `2 x 2^n`.
pub fn rand_function(rng: &mut impl Rng, n: usize) -> LogicalMatrix {
    rand_logical(rng, 2, 1 << n)
}

// ------------------------------------------------------------ opinion grid

/// Majority-of-five simulation of the 3x3 opinion grid, written from the
/// picture: agreeing rows above and below, disagreeing columns left and
/// right, optionally `u` in place of the left neighbour of `x4`.
pub fn grid_next(x: &[bool], u: Option<bool>) -> Vec<bool> {
    let get = |r: isize, c: isize| -> bool {
        if !(0..=2).contains(&r) {
            return true;
        }
        if c < 0 {
            return if r == 1 { u.unwrap_or(false) } else { false };
        }
        if c > 2 {
            return false;
        }
        x[(3 * r + c) as usize]
    };
    let mut out = Vec::with_capacity(9);
    for r in 0..3isize {
        for c in 0..3isize {
            let votes = [get(r, c), get(r - 1, c), get(r + 1, c), get(r, c - 1), get(r, c + 1)];
            out.push(votes.iter().filter(|&&v| v).count() >= 3);
        }
    }
    out
}

/// The grid transition matrix as 0-based successor positions.
pub fn grid_oracle(u: Option<bool>) -> Vec<usize> {
    (0..512).map(|p| encode(&grid_next(&decode(p, 9), u))).collect()
}

/// Successor position under a function-set product `z = ⋉ g_i(x)`.
pub fn value_vector(funcs: &[LogicalMatrix], x: usize) -> usize {
    let bits: Vec<bool> = funcs.iter().map(|g| g.target(x) == 0).collect();
    encode(&bits)
}
