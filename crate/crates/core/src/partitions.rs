//! Partitions of `n - 1` into `r >= 3` nondecreasing parts.
//!
//! A partition `[y_1, ..., y_r]` encodes the starlike tree whose central
//! vertex carries `r` pendant paths with `y_i` vertices each, so the tree has
//! `n = 1 + sum(y_i)` vertices. Partitions of the same `n` are totally
//! ordered: fewer parts come first, and equal part counts compare
//! lexicographically.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PartitionError {
    #[error("a starlike needs at least 3 parts, got {0}")]
    TooFewParts(usize),
    #[error("part {0} is not positive")]
    NonPositivePart(usize),
    #[error("parts are not nondecreasing at position {0}")]
    NotNondecreasing(usize),
    #[error("part count {r} out of range 3..={max} for n = {n}")]
    PartCountOutOfRange { n: usize, r: usize, max: usize },
    #[error("vertex count {0} is too small, need n >= 4")]
    VertexCountTooSmall(usize),
    #[error("partitions belong to different vertex counts ({0} and {1})")]
    MismatchedVertexCount(usize, usize),
    #[error("alpha({i}, {j}) is not defined on {partition}")]
    InvalidAlpha { partition: String, i: usize, j: usize },
    #[error("{next} is not the successor of {partition}")]
    NotSuccessor { partition: String, next: String },
    #[error("cannot parse partition {0:?}: expected comma separated positive integers")]
    Parse(String),
}

/// A nondecreasing tuple of at least three positive integers.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    pub fn new(parts: Vec<u32>) -> Result<Self, PartitionError> {
        if parts.len() < 3 {
            return Err(PartitionError::TooFewParts(parts.len()));
        }
        if let Some(pos) = parts.iter().position(|&y| y == 0) {
            return Err(PartitionError::NonPositivePart(pos));
        }
        if let Some(pos) = parts.windows(2).position(|w| w[0] > w[1]) {
            return Err(PartitionError::NotNondecreasing(pos + 1));
        }
        Ok(Self { parts })
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// Number of parts, i.e. the degree of the central vertex.
    pub fn r(&self) -> usize {
        self.parts.len()
    }

    /// Number of vertices of the starlike, `1 + sum of parts`.
    pub fn n(&self) -> usize {
        1 + self.parts.iter().map(|&y| y as usize).sum::<usize>()
    }

    pub fn last(&self) -> u32 {
        self.parts[self.parts.len() - 1]
    }

    /// Longest common prefix with `other`.
    pub fn shared_prefix_len(&self, other: &Partition) -> usize {
        self.parts
            .iter()
            .zip(&other.parts)
            .take_while(|(a, b)| a == b)
            .count()
    }

    pub fn is_balanced(&self) -> bool {
        self.last() - self.parts[0] <= 1
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, y) in self.parts.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{y}")?;
        }
        Ok(())
    }
}

impl FromStr for Partition {
    type Err = PartitionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let text = s.trim();
        let bad = || PartitionError::Parse(s.to_owned());
        if text.is_empty() || !text.bytes().all(|b| b.is_ascii_digit() || b == b',') {
            return Err(bad());
        }
        let parts = text
            .split(',')
            .map(|t| t.parse::<u32>().map_err(|_| bad()))
            .collect::<Result<Vec<_>, _>>()?;
        Partition::new(parts)
    }
}

impl Serialize for Partition {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Partition {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

/// Order key shared by all partitions of the same `n`: part count first,
/// then the parts lexicographically.
fn order_key(p: &Partition, q: &Partition) -> Ordering {
    p.r().cmp(&q.r()).then_with(|| p.parts.cmp(&q.parts))
}

/// Compares two partitions of the same `n` in the total order on all
/// starlikes with `n` vertices.
pub fn lex_compare(p: &Partition, q: &Partition) -> Result<Ordering, PartitionError> {
    if p.n() != q.n() {
        return Err(PartitionError::MismatchedVertexCount(p.n(), q.n()));
    }
    Ok(order_key(p, q))
}

fn check_range(n: usize, r: usize) -> Result<(), PartitionError> {
    if n < 4 {
        return Err(PartitionError::VertexCountTooSmall(n));
    }
    if r < 3 || r > n - 1 {
        return Err(PartitionError::PartCountOutOfRange { n, r, max: n - 1 });
    }
    Ok(())
}

/// `[1, ..., 1, n - r]`, the first partition with `r` parts.
pub fn smallest(n: usize, r: usize) -> Result<Partition, PartitionError> {
    check_range(n, r)?;
    let mut parts = vec![1u32; r];
    parts[r - 1] = (n - r) as u32;
    Ok(Partition { parts })
}

/// The last partition with `r` parts: every part is `m` or `m + 1`,
/// with the larger values at the end.
pub fn balanced(n: usize, r: usize) -> Result<Partition, PartitionError> {
    check_range(n, r)?;
    let total = n - 1;
    let m = total / r;
    let raised = total - r * m;
    let parts = (0..r)
        .map(|k| if k < r - raised { m as u32 } else { m as u32 + 1 })
        .collect();
    Ok(Partition { parts })
}

/// Moves one vertex from branch `j` to branch `i` (zero-based, `i < j`).
///
/// Defined only when part `j` is at least 2 and the result is still
/// nondecreasing.
pub fn alpha(p: &Partition, i: usize, j: usize) -> Result<Partition, PartitionError> {
    let invalid = || PartitionError::InvalidAlpha {
        partition: p.to_string(),
        i,
        j,
    };
    if i >= j || j >= p.r() || p.parts[j] < 2 {
        return Err(invalid());
    }
    let mut parts = p.parts.clone();
    parts[i] += 1;
    parts[j] -= 1;
    if parts.windows(2).any(|w| w[0] > w[1]) {
        return Err(invalid());
    }
    Ok(Partition { parts })
}

/// The partition covering `p`, or `None` for `[1, ..., 1]` with `n - 1`
/// parts.
///
/// Scans from the right for the last position that can be raised by one
/// while refilling the tail with the raised value and leaving a last part
/// at least as large.
pub fn successor(p: &Partition) -> Option<Partition> {
    let r = p.r();
    let total: u32 = p.parts.iter().sum();
    let mut prefix_sums = Vec::with_capacity(r);
    let mut acc = 0u32;
    for &y in &p.parts {
        prefix_sums.push(acc);
        acc += y;
    }
    for i in (0..r - 1).rev() {
        let v = p.parts[i] + 1;
        let filled = (r - 1 - i) as u32 * v;
        let remaining = total - prefix_sums[i];
        if remaining >= filled + v {
            let mut parts = p.parts[..i].to_vec();
            parts.extend(std::iter::repeat(v).take(r - 1 - i));
            parts.push(remaining - filled);
            return Some(Partition { parts });
        }
    }
    debug_assert!(p.is_balanced());
    let n = p.n();
    if r + 1 <= n - 1 {
        smallest(n, r + 1).ok()
    } else {
        None
    }
}

/// How a covering step changes the class structure when the successor
/// stays within the same part count but leaves the maximal class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "case")]
pub enum ClassChange {
    /// The successor is `alpha(p, t, r - 1)` for the shared prefix length `t`.
    AlphaT1R,
    /// The successor restarts a class; `theta` is its last part and `xi` the
    /// last part of the predecessor, with `theta >= xi`.
    ClassReset { theta: u32, xi: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CoveringKind {
    /// Balanced partition with `r` parts to the smallest with `r + 1`.
    TypeI,
    /// `alpha(p, r - 2, r - 1)` inside a maximal class.
    TypeII,
    /// Last element of a maximal class to the first of the next.
    TypeIII(ClassChange),
}

impl CoveringKind {
    pub fn label(&self) -> &'static str {
        match self {
            CoveringKind::TypeI => "I",
            CoveringKind::TypeII => "II",
            CoveringKind::TypeIII(ClassChange::AlphaT1R) => "III/alpha",
            CoveringKind::TypeIII(ClassChange::ClassReset { .. }) => "III/reset",
        }
    }
}

impl fmt::Display for CoveringKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Classifies the covering `p -> q`. Fails unless `q` is the successor of `p`.
pub fn classify_covering(p: &Partition, q: &Partition) -> Result<CoveringKind, PartitionError> {
    if successor(p).as_ref() != Some(q) {
        return Err(PartitionError::NotSuccessor {
            partition: p.to_string(),
            next: q.to_string(),
        });
    }
    let r = p.r();
    if q.r() == r + 1 {
        return Ok(CoveringKind::TypeI);
    }
    if alpha(p, r - 2, r - 1).ok().as_ref() == Some(q) {
        return Ok(CoveringKind::TypeII);
    }
    let t = p.shared_prefix_len(q);
    if alpha(p, t, r - 1).ok().as_ref() == Some(q) {
        return Ok(CoveringKind::TypeIII(ClassChange::AlphaT1R));
    }
    Ok(CoveringKind::TypeIII(ClassChange::ClassReset {
        theta: q.last(),
        xi: p.last(),
    }))
}

fn push_partitions(remaining: u32, slots: usize, min: u32, current: &mut Vec<u32>, out: &mut Vec<Partition>) {
    if slots == 1 {
        if remaining >= min {
            current.push(remaining);
            out.push(Partition {
                parts: current.clone(),
            });
            current.pop();
        }
        return;
    }
    let mut y = min;
    while y * slots as u32 <= remaining {
        current.push(y);
        push_partitions(remaining - y, slots - 1, y, current, out);
        current.pop();
        y += 1;
    }
}

/// All partitions of `n - 1` into exactly `r` parts, in increasing order.
pub fn enumerate_omega(n: usize, r: usize) -> Result<Vec<Partition>, PartitionError> {
    check_range(n, r)?;
    let mut out = Vec::new();
    push_partitions((n - 1) as u32, r, 1, &mut Vec::with_capacity(r), &mut out);
    out.sort_by(order_key);
    Ok(out)
}

/// Every starlike on `n` vertices as a partition, in increasing order.
pub fn enumerate_omega_all(n: usize) -> Result<Vec<Partition>, PartitionError> {
    if n < 4 {
        return Err(PartitionError::VertexCountTooSmall(n));
    }
    let mut out = Vec::new();
    for r in 3..n {
        out.extend(enumerate_omega(n, r)?);
    }
    Ok(out)
}

/// First element of the maximal class containing `p`.
pub fn class_minimum(p: &Partition) -> Partition {
    let r = p.r();
    let floor = p.parts[r - 3];
    let tail = p.parts[r - 2] + p.parts[r - 1];
    let mut parts = p.parts[..r - 2].to_vec();
    parts.push(floor);
    parts.push(tail - floor);
    Partition { parts }
}

/// The maximal class (orbit under `alpha(., r - 2, r - 1)`) containing `p`,
/// in increasing order.
pub fn maximal_class(p: &Partition) -> Vec<Partition> {
    let r = p.r();
    let mut current = class_minimum(p);
    let mut class = vec![current.clone()];
    while let Ok(next) = alpha(&current, r - 2, r - 1) {
        class.push(next.clone());
        current = next;
    }
    class
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn construction() {
        assert_eq!(p(&[1, 2, 3, 3, 5]).n(), 15);
        assert_eq!(p(&[1, 1, 1]).n(), 4);
        assert_eq!(
            Partition::new(vec![2, 1, 3]),
            Err(PartitionError::NotNondecreasing(1))
        );
        assert_eq!(Partition::new(vec![1, 2]), Err(PartitionError::TooFewParts(2)));
        assert_eq!(
            Partition::new(vec![0, 1, 2]),
            Err(PartitionError::NonPositivePart(0))
        );
    }

    #[test]
    fn text_form() {
        let q: Partition = "1,3,3".parse().unwrap();
        assert_eq!(q, p(&[1, 3, 3]));
        assert_eq!(q.to_string(), "1,3,3");
        assert!("1, 3,3".parse::<Partition>().is_err());
        assert!("1,-3,3".parse::<Partition>().is_err());
        assert!("".parse::<Partition>().is_err());
        assert!("1,,3".parse::<Partition>().is_err());
        assert_eq!(
            serde_json::to_string(&q).unwrap(),
            "\"1,3,3\"".to_string()
        );
    }

    #[test]
    fn lex_order() {
        assert_eq!(lex_compare(&p(&[1, 5, 5]), &p(&[2, 2, 7])), Ok(Ordering::Less));
        assert_eq!(
            lex_compare(&p(&[2, 2, 3]), &p(&[1, 1, 1, 4])),
            Ok(Ordering::Less)
        );
        assert_eq!(lex_compare(&p(&[1, 3, 3]), &p(&[1, 3, 3])), Ok(Ordering::Equal));
        assert_eq!(
            lex_compare(&p(&[1, 1, 1]), &p(&[1, 1, 2])),
            Err(PartitionError::MismatchedVertexCount(4, 5))
        );
    }

    #[test]
    fn extremes() {
        assert_eq!(smallest(8, 3).unwrap(), p(&[1, 1, 5]));
        assert_eq!(smallest(8, 7).unwrap(), p(&[1; 7]));
        assert_eq!(smallest(12, 4).unwrap(), p(&[1, 1, 1, 8]));
        assert_eq!(balanced(14, 3).unwrap(), p(&[4, 4, 5]));
        assert_eq!(balanced(12, 3).unwrap(), p(&[3, 4, 4]));
        assert_eq!(balanced(10, 3).unwrap(), p(&[3, 3, 3]));
        assert!(smallest(8, 8).is_err());
        assert!(smallest(8, 2).is_err());
        assert!(balanced(3, 3).is_err());
    }

    #[test]
    fn alpha_operation() {
        assert_eq!(alpha(&p(&[2, 4, 5]), 0, 1).unwrap(), p(&[3, 3, 5]));
        assert_eq!(alpha(&p(&[2, 4, 5]), 0, 2).unwrap(), p(&[3, 4, 4]));
        assert!(alpha(&p(&[1, 1, 5]), 0, 1).is_err());
        // sorted order broken by the increment
        assert!(alpha(&p(&[1, 1, 5]), 0, 2).is_err());
        assert!(alpha(&p(&[1, 1, 5]), 2, 1).is_err());
    }

    #[test]
    fn successors() {
        assert_eq!(successor(&p(&[1, 1, 5])), Some(p(&[1, 2, 4])));
        assert_eq!(successor(&p(&[2, 2, 3])), Some(p(&[1, 1, 1, 4])));
        assert_eq!(successor(&p(&[1, 2, 5, 5])), Some(p(&[1, 3, 3, 6])));
        assert_eq!(successor(&p(&[1; 7])), None);
        assert_eq!(successor(&p(&[1, 1, 1])), None);
    }

    #[test]
    fn covering_kinds() {
        assert_eq!(
            classify_covering(&p(&[1, 4, 6]), &p(&[1, 5, 5])),
            Ok(CoveringKind::TypeII)
        );
        assert_eq!(
            classify_covering(&p(&[1, 3, 4, 5]), &p(&[1, 4, 4, 4])),
            Ok(CoveringKind::TypeIII(ClassChange::AlphaT1R))
        );
        assert_eq!(
            classify_covering(&p(&[1, 4, 4, 4]), &p(&[2, 2, 2, 7])),
            Ok(CoveringKind::TypeIII(ClassChange::ClassReset { theta: 7, xi: 4 }))
        );
        assert_eq!(
            classify_covering(&p(&[4, 4, 5]), &p(&[1, 1, 1, 10])),
            Ok(CoveringKind::TypeI)
        );
        assert!(matches!(
            classify_covering(&p(&[1, 1, 5]), &p(&[1, 3, 3])),
            Err(PartitionError::NotSuccessor { .. })
        ));
    }

    #[test]
    fn enumeration() {
        let omega = enumerate_omega(12, 3).unwrap();
        assert_eq!(omega.len(), 10);
        assert_eq!(omega[0], p(&[1, 1, 9]));
        assert_eq!(omega[9], p(&[3, 4, 4]));
        assert_eq!(
            enumerate_omega(8, 3).unwrap(),
            vec![p(&[1, 1, 5]), p(&[1, 2, 4]), p(&[1, 3, 3]), p(&[2, 2, 3])]
        );
        assert_eq!(enumerate_omega(4, 3).unwrap(), vec![p(&[1, 1, 1])]);
        assert_eq!(enumerate_omega_all(4).unwrap(), vec![p(&[1, 1, 1])]);
        assert_eq!(
            enumerate_omega_all(5).unwrap(),
            vec![p(&[1, 1, 2]), p(&[1, 1, 1, 1])]
        );
        assert!(enumerate_omega_all(3).is_err());
        assert!(enumerate_omega(8, 8).is_err());
    }

    #[test]
    fn classes() {
        assert_eq!(
            maximal_class(&p(&[2, 3, 6])),
            vec![p(&[2, 2, 7]), p(&[2, 3, 6]), p(&[2, 4, 5])]
        );
        let first = maximal_class(&p(&[1, 1, 9]));
        assert_eq!(first.len(), 5);
        assert_eq!(first[4], p(&[1, 5, 5]));
        assert_eq!(
            maximal_class(&p(&[3, 4, 4])),
            vec![p(&[3, 3, 5]), p(&[3, 4, 4])]
        );
        assert_eq!(maximal_class(&p(&[1, 1, 1])), vec![p(&[1, 1, 1])]);
    }
}
