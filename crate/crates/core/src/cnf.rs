//! CNF formulas over 0-indexed variables.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A literal encoded as `2 * var + negated`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lit(u32);

impl Lit {
    #[inline]
    pub fn new(var: usize, negated: bool) -> Lit {
        Lit((var as u32) << 1 | negated as u32)
    }

    #[inline]
    pub fn pos(var: usize) -> Lit {
        Lit::new(var, false)
    }

    #[inline]
    pub fn neg(var: usize) -> Lit {
        Lit::new(var, true)
    }

    /// From a signed 1-indexed DIMACS integer.
    pub fn from_dimacs(x: i64) -> Lit {
        assert!(x != 0);
        Lit::new(x.unsigned_abs() as usize - 1, x < 0)
    }

    pub fn to_dimacs(self) -> i64 {
        let v = self.var() as i64 + 1;
        if self.is_negated() {
            -v
        } else {
            v
        }
    }

    #[inline]
    pub fn var(self) -> usize {
        (self.0 >> 1) as usize
    }

    #[inline]
    pub fn is_negated(self) -> bool {
        self.0 & 1 == 1
    }

    #[inline]
    pub fn negate(self) -> Lit {
        Lit(self.0 ^ 1)
    }

    /// The literal's vertex id in the literal hypergraph.
    #[inline]
    pub fn code(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn from_code(code: usize) -> Lit {
        Lit(code as u32)
    }

    /// Whether the literal is true under `assignment`.
    #[inline]
    pub fn eval(self, assignment: &[bool]) -> bool {
        assignment[self.var()] != self.is_negated()
    }
}

impl fmt::Debug for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_dimacs())
    }
}

pub type Clause = Vec<Lit>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "CnfJson", into = "CnfJson")]
pub struct CnfFormula {
    num_vars: usize,
    clauses: Vec<Clause>,
}

#[derive(Serialize, Deserialize)]
struct CnfJson {
    num_vars: usize,
    clauses: Vec<Vec<i64>>,
}

impl TryFrom<CnfJson> for CnfFormula {
    type Error = Error;

    fn try_from(j: CnfJson) -> Result<CnfFormula> {
        CnfFormula::from_dimacs_clauses(j.num_vars, &j.clauses)
    }
}

impl From<CnfFormula> for CnfJson {
    fn from(f: CnfFormula) -> CnfJson {
        CnfJson {
            num_vars: f.num_vars,
            clauses: f.clauses.iter().map(|c| c.iter().map(|l| l.to_dimacs()).collect()).collect(),
        }
    }
}

/// Rejects empty clauses, out-of-range variables and repeated variables.
pub(crate) fn check_clause(num_vars: usize, clause: &[Lit]) -> std::result::Result<(), String> {
    if clause.is_empty() {
        return Err("empty clause".into());
    }
    for (i, a) in clause.iter().enumerate() {
        if a.var() >= num_vars {
            return Err(format!("literal {a:?} out of range for {num_vars} variables"));
        }
        for b in &clause[..i] {
            if a.var() == b.var() {
                return Err(if *a == *b {
                    format!("literal {a:?} repeated in clause")
                } else {
                    format!("tautological clause contains {a:?} and {b:?}")
                });
            }
        }
    }
    Ok(())
}

impl CnfFormula {
    pub fn new(num_vars: usize, clauses: Vec<Clause>) -> Result<CnfFormula> {
        for c in &clauses {
            check_clause(num_vars, c).map_err(Error::InvalidParameter)?;
        }
        Ok(CnfFormula { num_vars, clauses })
    }

    pub fn from_dimacs_clauses(num_vars: usize, clauses: &[Vec<i64>]) -> Result<CnfFormula> {
        if clauses.iter().flatten().any(|&x| x == 0) {
            return Err(Error::param("literal 0 inside a clause"));
        }
        CnfFormula::new(
            num_vars,
            clauses.iter().map(|c| c.iter().map(|&x| Lit::from_dimacs(x)).collect()).collect(),
        )
    }

    #[inline]
    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    #[inline]
    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    /// Widest clause, zero when there are none.
    pub fn k(&self) -> usize {
        self.clauses.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn is_uniform(&self, k: usize) -> bool {
        self.clauses.iter().all(|c| c.len() == k)
    }

    pub fn evaluate(&self, assignment: &[bool]) -> bool {
        assert_eq!(assignment.len(), self.num_vars);
        self.clauses.iter().all(|c| c.iter().any(|l| l.eval(assignment)))
    }
}
