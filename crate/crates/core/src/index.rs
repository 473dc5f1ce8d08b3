//! Certified brackets and comparisons for the largest adjacency eigenvalue.
//!
//! Every bracket `(lo, hi]` is certified by eigenvalue counts: the tree has
//! an eigenvalue above `lo` and none above `hi`. Probes are dyadic rationals
//! so the exact diagonalization keeps small denominators.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::rational::{dyadic, format_rational, Rational};
use crate::spectra::count_eigenvalues;
use crate::trees::RootedTree;

/// Bracket width used when no tolerance is given: `2^-40`.
pub const DEFAULT_TOL_BITS: u32 = 40;
pub const DEFAULT_MAX_STEPS: usize = 256;
/// Fractional bits of the dyadic branch-count bounds.
pub const BOUND_BITS: u32 = 20;

pub fn default_tol() -> Rational {
    dyadic(DEFAULT_TOL_BITS)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IndexError {
    #[error("the index of a tree with {0} vertex is 0 and cannot be bracketed")]
    TrivialTree(usize),
    #[error("tolerance must be positive")]
    NonPositiveTolerance,
    #[error("branch count {0} is below 3")]
    BranchCountTooSmall(usize),
    #[error("indices still overlap after {0} refinement steps")]
    Unresolved(usize),
}

/// Certified interval `(lo, hi]` containing the index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexBracket {
    pub lo: Rational,
    pub hi: Rational,
}

impl IndexBracket {
    /// `(0, max degree]`, valid for every connected tree with an edge.
    pub fn initial(tree: &RootedTree) -> Result<Self, IndexError> {
        if tree.vertex_count() < 2 {
            return Err(IndexError::TrivialTree(tree.vertex_count()));
        }
        Ok(Self {
            lo: Rational::zero(),
            hi: Rational::from_integer(BigInt::from(tree.max_degree())),
        })
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / Rational::from_integer(2.into())
    }

    /// Halves the bracket with one eigenvalue count at the midpoint.
    pub fn bisect(&mut self, tree: &RootedTree) {
        let mid = self.midpoint();
        if count_eigenvalues(tree, &mid).above >= 1 {
            self.lo = mid;
        } else {
            self.hi = mid;
        }
    }

    /// Re-checks the certificate from scratch.
    pub fn is_certified(&self, tree: &RootedTree) -> bool {
        self.lo < self.hi
            && count_eigenvalues(tree, &self.lo).above >= 1
            && count_eigenvalues(tree, &self.hi).above == 0
    }
}

impl Serialize for IndexBracket {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("IndexBracket", 2)?;
        s.serialize_field("lo", &format_rational(&self.lo))?;
        s.serialize_field("hi", &format_rational(&self.hi))?;
        s.end()
    }
}

/// Bisects until the certified bracket is at most `tol` wide.
pub fn index_bracket(tree: &RootedTree, tol: &Rational) -> Result<IndexBracket, IndexError> {
    if !tol.is_positive() {
        return Err(IndexError::NonPositiveTolerance);
    }
    let mut bracket = IndexBracket::initial(tree)?;
    while &bracket.width() > tol {
        bracket.bisect(tree);
    }
    Ok(bracket)
}

/// Midpoint of a bracket of width `2 tol`, so within `tol` of the index.
pub fn index_approx(tree: &RootedTree, tol: &Rational) -> Result<Rational, IndexError> {
    let doubled = tol * Rational::from_integer(2.into());
    Ok(index_bracket(tree, &doubled)?.midpoint())
}

fn check_branch_count(r: usize) -> Result<(), IndexError> {
    if r < 3 {
        Err(IndexError::BranchCountTooSmall(r))
    } else {
        Ok(())
    }
}

fn over_scale(k: u128) -> Rational {
    Rational::new(BigInt::from(k), BigInt::from(1u128 << BOUND_BITS))
}

/// Smallest `k / 2^20` with `k / 2^20 >= r / sqrt(r - 1)`, a strict upper
/// bound for the index of any starlike with `r` branches.
pub fn upper_bound_lepovic(r: usize) -> Result<Rational, IndexError> {
    check_branch_count(r)?;
    let r = r as u128;
    // k^2 (r - 1) >= r^2 4^BOUND_BITS
    let target = (r * r) << (2 * BOUND_BITS);
    let meets = |k: u128| k * k * (r - 1) >= target;
    let mut k = ((target as f64) / ((r - 1) as f64)).sqrt().ceil() as u128;
    while !meets(k) {
        k += 1;
    }
    while k > 0 && meets(k - 1) {
        k -= 1;
    }
    Ok(over_scale(k))
}

/// Largest `k / 2^20 <= sqrt(r)`, the index of the star `K_{1,r}` rounded
/// down.
pub fn lower_bound_star(r: usize) -> Result<Rational, IndexError> {
    check_branch_count(r)?;
    let k = ((r as u128) << (2 * BOUND_BITS)).isqrt();
    Ok(over_scale(k))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Less,
    Greater,
}

impl Verdict {
    pub fn as_ordering(self) -> Ordering {
        match self {
            Verdict::Less => Ordering::Less,
            Verdict::Greater => Ordering::Greater,
        }
    }
}

/// Strict comparison of two indices with a separating probe.
///
/// For `Less`, the first tree has no eigenvalue above `witness` and the
/// second has at least one; `Greater` is the mirror image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComparisonResult {
    pub verdict: Verdict,
    pub witness: Rational,
}

impl ComparisonResult {
    /// Re-checks the witness with two eigenvalue counts.
    pub fn check(&self, first: &RootedTree, second: &RootedTree) -> bool {
        let (low, high) = match self.verdict {
            Verdict::Less => (first, second),
            Verdict::Greater => (second, first),
        };
        count_eigenvalues(low, &self.witness).above == 0
            && count_eigenvalues(high, &self.witness).above >= 1
    }
}

impl Serialize for ComparisonResult {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("ComparisonResult", 2)?;
        s.serialize_field("verdict", &self.verdict)?;
        s.serialize_field("witness", &format_rational(&self.witness))?;
        s.end()
    }
}

/// Refines both brackets in lockstep until one lies entirely below the
/// other.
pub fn compare_indices(
    first: &RootedTree,
    second: &RootedTree,
    max_steps: usize,
) -> Result<ComparisonResult, IndexError> {
    let mut a = IndexBracket::initial(first)?;
    let mut b = IndexBracket::initial(second)?;
    for step in 0..=max_steps {
        if a.hi <= b.lo {
            return Ok(ComparisonResult {
                verdict: Verdict::Less,
                witness: a.hi,
            });
        }
        if b.hi <= a.lo {
            return Ok(ComparisonResult {
                verdict: Verdict::Greater,
                witness: b.hi,
            });
        }
        if step < max_steps {
            a.bisect(first);
            b.bisect(second);
        }
    }
    Err(IndexError::Unresolved(max_steps))
}
