//! Extensions-Sum: `Σ_α Π_i f_i(α|X_i)` over all assignments `α` of `X`.

mod eval;
pub mod fixtures;
mod hyperclique;

use std::fmt::Debug;
use std::ops::{AddAssign, Mul, Neg};

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use eval::{eval_disjoint, eval_k2, eval_k2_counted, eval_k3, eval_naive, reduce_refinement};
pub use hyperclique::hyperclique_to_extsum;

/// Default cap on variables for naive evaluation.
pub const NAIVE_LIMIT: usize = 24;
/// Default cap on the number of variables behind one table.
pub const TABLE_BITS_LIMIT: usize = 24;

/// Exact ring used for table entries.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + Zero
    + One
    + Neg<Output = Self>
    + for<'a> AddAssign<&'a Self>
    + for<'a> Mul<&'a Self, Output = Self>
    + From<i64>
    + 'static
{
    /// `self · 2^e`.
    fn shl(self, e: usize) -> Self;
    fn to_bigint(&self) -> BigInt;
}

impl Scalar for BigInt {
    fn shl(self, e: usize) -> Self {
        self << e
    }

    fn to_bigint(&self) -> BigInt {
        self.clone()
    }
}

impl Scalar for i128 {
    fn shl(self, e: usize) -> Self {
        assert!(e < 127, "i128 shift overflow");
        self.checked_mul(1i128 << e).expect("i128 overflow")
    }

    fn to_bigint(&self) -> BigInt {
        BigInt::from(*self)
    }
}

/// Subsets are sorted variable lists; bit `j` of a table index is the value
/// of the `j`-th smallest variable of the subset.
#[derive(Clone, Debug, PartialEq)]
pub struct ExtSumInstance<T> {
    universe: usize,
    subsets: Vec<Vec<usize>>,
    tables: Vec<Vec<T>>,
}

impl<T: Scalar> ExtSumInstance<T> {
    pub fn new(universe: usize, subsets: Vec<Vec<usize>>, tables: Vec<Vec<T>>) -> Result<Self> {
        if universe > 64 {
            return Err(Error::too_large("variable universe", universe, 64));
        }
        if subsets.len() != tables.len() {
            return Err(Error::param(format!("{} subsets but {} tables", subsets.len(), tables.len())));
        }
        let mut out = Vec::with_capacity(subsets.len());
        for (i, (mut s, t)) in subsets.into_iter().zip(&tables).enumerate() {
            s.sort_unstable();
            if s.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::param(format!("subset {i} repeats a variable")));
            }
            if s.last().is_some_and(|&v| v >= universe) {
                return Err(Error::param(format!("subset {i} has a variable outside 0..{universe}")));
            }
            if s.len() > TABLE_BITS_LIMIT {
                return Err(Error::too_large(format!("table {i} variables"), s.len(), TABLE_BITS_LIMIT));
            }
            if t.len() != 1 << s.len() {
                return Err(Error::param(format!("table {i} has {} entries, expected {}", t.len(), 1u64 << s.len())));
            }
            out.push(s);
        }
        Ok(ExtSumInstance { universe, subsets: out, tables })
    }

    /// Builds each table by evaluating `f(i, local_assignment)`.
    pub fn from_fn(universe: usize, subsets: Vec<Vec<usize>>, mut f: impl FnMut(usize, u64) -> T) -> Result<Self> {
        let tables = subsets
            .iter()
            .enumerate()
            .map(|(i, s)| {
                if s.len() > TABLE_BITS_LIMIT {
                    return Err(Error::too_large(format!("table {i} variables"), s.len(), TABLE_BITS_LIMIT));
                }
                Ok((0..1u64 << s.len()).map(|a| f(i, a)).collect())
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(universe, subsets, tables)
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn k(&self) -> usize {
        self.subsets.len()
    }

    pub fn subsets(&self) -> &[Vec<usize>] {
        &self.subsets
    }

    pub fn tables(&self) -> &[Vec<T>] {
        &self.tables
    }

    /// The subset as a mask over `X`.
    pub fn mask(&self, i: usize) -> u64 {
        self.subsets[i].iter().fold(0, |m, &v| m | 1 << v)
    }

    /// Converts every entry to another scalar type.
    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> ExtSumInstance<U> {
        ExtSumInstance {
            universe: self.universe,
            subsets: self.subsets.clone(),
            tables: self.tables.iter().map(|t| t.iter().map(&f).collect()).collect(),
        }
    }
}

/// Parallel bit extract: the bits of `x` at the positions set in `mask`,
/// packed into the low bits.
#[inline]
pub(crate) fn pext(x: u64, mut mask: u64) -> u64 {
    let mut out = 0;
    let mut bit = 0;
    while mask != 0 {
        let low = mask.trailing_zeros();
        out |= (x >> low & 1) << bit;
        bit += 1;
        mask &= mask - 1;
    }
    out
}

/// Inverse of [`pext`]: spread the low bits of `x` over the positions of `mask`.
#[inline]
pub(crate) fn pdep(x: u64, mut mask: u64) -> u64 {
    let mut out = 0;
    let mut bit = 0;
    while mask != 0 {
        let low = mask.trailing_zeros();
        out |= (x >> bit & 1) << low;
        bit += 1;
        mask &= mask - 1;
    }
    out
}

#[derive(Serialize, Deserialize)]
struct InstanceJson {
    universe: usize,
    subsets: Vec<Vec<usize>>,
    tables: Vec<Vec<serde_json::Value>>,
}

fn parse_entry(v: &serde_json::Value) -> Result<BigInt> {
    match v {
        serde_json::Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .ok_or_else(|| Error::param(format!("table entry {n} is not an integer"))),
        serde_json::Value::String(s) => s.parse().map_err(|_| Error::param(format!("table entry '{s}' is not an integer"))),
        other => Err(Error::param(format!("table entry {other} is not an integer"))),
    }
}

impl ExtSumInstance<BigInt> {
    /// Reads `{"universe", "subsets", "tables"}`; entries are integers or
    /// decimal strings.
    pub fn from_json(text: &str) -> Result<Self> {
        let j: InstanceJson = serde_json::from_str(text).map_err(|e| Error::Parse { line: e.line(), msg: e.to_string() })?;
        let tables = j
            .tables
            .iter()
            .map(|t| t.iter().map(parse_entry).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::new(j.universe, j.subsets, tables)
    }

    pub fn to_json(&self) -> String {
        let tables = self
            .tables
            .iter()
            .map(|t| {
                t.iter()
                    .map(|x| match x.to_i64() {
                        Some(v) => serde_json::Value::from(v),
                        None => serde_json::Value::from(x.to_string()),
                    })
                    .collect()
            })
            .collect();
        serde_json::to_string(&InstanceJson { universe: self.universe, subsets: self.subsets.clone(), tables }).unwrap()
    }
}
