//! Exact eigenvalue location on trees.
//!
//! [`diagonalize`] runs the linear-time congruence diagonalization of
//! `A(T) + alpha I` directly on the tree, in exact rational arithmetic. By
//! Sylvester's law of inertia the signs of the resulting diagonal count the
//! eigenvalues of `T` on each side of `-alpha`; [`count_eigenvalues`] wraps
//! that with the sign convention flipped so callers pass the probe point
//! itself.
//!
//! On a starlike every branch is a path, and the diagonal values along a
//! branch follow a one-term recurrence. [`b_sequence`] and [`root_residual`]
//! expose that recurrence; the root value of the diagonalization at `mu` is
//! `-root_residual(p, mu)` whenever no branch vertex hits zero.

use num_traits::{Signed, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::partitions::Partition;
use crate::rational::{format_rational, Rational};
use crate::trees::RootedTree;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpectraError {
    /// The recurrence divides by zero when producing term `k` (1-based); the
    /// shift is an eigenvalue of a path on `k - 1` vertices.
    #[error("b-sequence denominator vanishes at term {0}")]
    ZeroDenominator(usize),
}

/// Counts of negative, zero and positive diagonal entries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct Inertia {
    pub neg: usize,
    pub zero: usize,
    pub pos: usize,
}

impl Inertia {
    pub fn total(&self) -> usize {
        self.neg + self.zero + self.pos
    }
}

/// Eigenvalue positions relative to a probe point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EigenCount {
    pub below: usize,
    pub equal: usize,
    pub above: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagonalProfile {
    pub alpha: Rational,
    pub values: Vec<Rational>,
    pub inertia: Inertia,
}

impl Serialize for DiagonalProfile {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("DiagonalProfile", 3)?;
        s.serialize_field("alpha", &format_rational(&self.alpha))?;
        let values: Vec<String> = self.values.iter().map(format_rational).collect();
        s.serialize_field("values", &values)?;
        let inertia = [self.inertia.neg, self.inertia.zero, self.inertia.pos];
        s.serialize_field("inertia", &inertia)?;
        s.end()
    }
}

/// Diagonalizes `A(T) + alpha I` by congruence, processing vertices bottom
/// up. When a vertex has a child with value zero, the smallest such child is
/// paired with it (values 2 and -1/2) and the vertex is cut from its parent.
pub fn diagonalize(tree: &RootedTree, alpha: &Rational) -> DiagonalProfile {
    let n = tree.vertex_count();
    let mut d = vec![alpha.clone(); n];
    let mut detached = vec![false; n];

    for v in tree.bottom_up_order() {
        let mut live = tree.children(v).iter().copied().filter(|&c| !detached[c]).peekable();
        if live.peek().is_none() {
            continue;
        }
        let live: Vec<usize> = live.collect();
        match live.iter().copied().find(|&c| d[c].is_zero()) {
            None => {
                let mut sum = Rational::zero();
                for &c in &live {
                    sum += d[c].recip();
                }
                d[v] -= sum;
            }
            Some(c) => {
                d[v] = Rational::new((-1).into(), 2.into());
                d[c] = Rational::from_integer(2.into());
                if tree.parent(v).is_some() {
                    detached[v] = true;
                }
            }
        }
    }

    let mut inertia = Inertia::default();
    for value in &d {
        if value.is_negative() {
            inertia.neg += 1;
        } else if value.is_zero() {
            inertia.zero += 1;
        } else {
            inertia.pos += 1;
        }
    }
    DiagonalProfile {
        alpha: alpha.clone(),
        values: d,
        inertia,
    }
}

/// Number of eigenvalues of `tree` below, at, and above `x`.
pub fn count_eigenvalues(tree: &RootedTree, x: &Rational) -> EigenCount {
    let Inertia { neg, zero, pos } = diagonalize(tree, &-x).inertia;
    EigenCount {
        below: neg,
        equal: zero,
        above: pos,
    }
}

/// Terms `b_1 .. b_L` of `b_1 = 1/lambda`, `b_{k+1} = 1/(lambda - b_k)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BkSequence {
    pub lambda: Rational,
    pub b: Vec<Rational>,
}

impl BkSequence {
    /// `b_k`, 1-based.
    pub fn term(&self, k: usize) -> &Rational {
        &self.b[k - 1]
    }
}

pub fn b_sequence(lambda: &Rational, length: usize) -> Result<BkSequence, SpectraError> {
    let mut b = Vec::with_capacity(length);
    let mut prev = Rational::zero();
    for k in 1..=length {
        let denom = lambda - &prev;
        if denom.is_zero() {
            return Err(SpectraError::ZeroDenominator(k));
        }
        prev = denom.recip();
        b.push(prev.clone());
    }
    Ok(BkSequence {
        lambda: lambda.clone(),
        b,
    })
}

/// `b_{y_1} + ... + b_{y_r} - lambda`; zero exactly at `lambda = -index`.
pub fn root_residual(p: &Partition, lambda: &Rational) -> Result<Rational, SpectraError> {
    let seq = b_sequence(lambda, p.last() as usize)?;
    let sum = p
        .parts()
        .iter()
        .fold(Rational::zero(), |acc, &y| acc + seq.term(y as usize));
    Ok(sum - lambda)
}

/// Whether `b` is all negative and strictly decreasing.
pub fn is_negative_decreasing(b: &[Rational]) -> bool {
    b.iter().all(Signed::is_negative) && b.windows(2).all(|w| w[1] < w[0])
}

/// `b + 1/b`.
pub fn b_plus_reciprocal(b: &Rational) -> Rational {
    b + b.recip()
}
