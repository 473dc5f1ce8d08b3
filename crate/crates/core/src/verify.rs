//! Exhaustive checks of the starlike ordering at a fixed vertex count.
//!
//! Each suite walks the relevant partitions, records every violated
//! predicate as a [`Failure`], and returns a [`VerificationReport`]. Pair
//! checks run on the rayon pool; only the final aggregation is sequential.

use std::collections::BTreeSet;
use std::time::Instant;

use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::index::{compare_indices, index_approx, index_bracket, ComparisonResult, Verdict, DEFAULT_MAX_STEPS};
use crate::partitions::{
    classify_covering, class_minimum, enumerate_omega, enumerate_omega_all, maximal_class, successor,
    ClassChange, CoveringKind, Partition, PartitionError,
};
use crate::rational::{dyadic, format_rational, to_f64, Rational};
use crate::spectra::{b_plus_reciprocal, b_sequence, is_negative_decreasing, root_residual};
use crate::trees::RootedTree;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("power iteration did not settle within {0} iterations")]
    NoConvergence(usize),
}

const ORACLE_MAX_ITER: usize = 1_000_000;
/// Rayleigh-quotient tolerance used by the agreement suite.
pub const ORACLE_TOL: f64 = 1e-12;

/// Index by power iteration on the dense adjacency matrix, shifted by the
/// identity so the negative end of the (bipartite) spectrum cannot dominate.
/// Stops once the Rayleigh quotient moves by less than `tol`.
pub fn oracle_index(tree: &RootedTree, tol: f64) -> Result<f64, OracleError> {
    let n = tree.vertex_count();
    let mut adjacency = vec![vec![0.0f64; n]; n];
    for (u, v) in tree.edges() {
        adjacency[u][v] = 1.0;
        adjacency[v][u] = 1.0;
    }
    let mut x = vec![1.0 / (n as f64).sqrt(); n];
    let mut previous = f64::INFINITY;
    for _ in 0..ORACLE_MAX_ITER {
        let ax: Vec<f64> = adjacency
            .iter()
            .map(|row| row.iter().zip(&x).map(|(a, b)| a * b).sum())
            .collect();
        let rayleigh: f64 = ax.iter().zip(&x).map(|(a, b)| a * b).sum();
        if (rayleigh - previous).abs() < tol {
            return Ok(rayleigh);
        }
        previous = rayleigh;
        let shifted: Vec<f64> = ax.iter().zip(&x).map(|(a, b)| a + b).collect();
        let norm = shifted.iter().map(|v| v * v).sum::<f64>().sqrt();
        x = shifted.into_iter().map(|v| v / norm).collect();
    }
    Err(OracleError::NoConvergence(ORACLE_MAX_ITER))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Failure {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<Partition>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b: Option<Partition>,
    pub predicate: String,
    pub detail: String,
}

impl Failure {
    fn pair(a: &Partition, b: &Partition, predicate: &str, detail: impl Into<String>) -> Self {
        Self {
            a: Some(a.clone()),
            b: Some(b.clone()),
            predicate: predicate.to_owned(),
            detail: detail.into(),
        }
    }

    fn single(a: &Partition, predicate: &str, detail: impl Into<String>) -> Self {
        Self {
            a: Some(a.clone()),
            b: None,
            predicate: predicate.to_owned(),
            detail: detail.into(),
        }
    }

    fn global(predicate: &str, detail: impl Into<String>) -> Self {
        Self {
            a: None,
            b: None,
            predicate: predicate.to_owned(),
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct CoveringTallies {
    pub type_i: usize,
    pub type_ii: usize,
    pub type_iii_alpha: usize,
    pub type_iii_reset: usize,
}

impl CoveringTallies {
    fn record(&mut self, kind: CoveringKind) {
        match kind {
            CoveringKind::TypeI => self.type_i += 1,
            CoveringKind::TypeII => self.type_ii += 1,
            CoveringKind::TypeIII(ClassChange::AlphaT1R) => self.type_iii_alpha += 1,
            CoveringKind::TypeIII(ClassChange::ClassReset { .. }) => self.type_iii_reset += 1,
        }
    }

    pub fn type_iii(&self) -> usize {
        self.type_iii_alpha + self.type_iii_reset
    }
}

/// A certified strict inequality `index(lower) < index(upper)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairCertificate {
    pub lower: Partition,
    pub upper: Partition,
    pub witness: Rational,
}

impl PairCertificate {
    /// Re-checks the witness with two eigenvalue counts.
    pub fn check(&self) -> bool {
        ComparisonResult {
            verdict: Verdict::Less,
            witness: self.witness.clone(),
        }
        .check(&RootedTree::starlike(&self.lower), &RootedTree::starlike(&self.upper))
    }
}

impl Serialize for PairCertificate {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut s = serializer.serialize_struct("PairCertificate", 3)?;
        s.serialize_field("lower", &self.lower)?;
        s.serialize_field("upper", &self.upper)?;
        s.serialize_field("witness", &format_rational(&self.witness))?;
        s.end()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub suite: String,
    pub n: usize,
    pub pairs_checked: usize,
    pub failures: Vec<Failure>,
    pub tallies: CoveringTallies,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub certificates: Vec<PairCertificate>,
    pub wall_time: f64,
}

impl VerificationReport {
    fn new(suite: &str, n: usize) -> Self {
        Self {
            suite: suite.to_owned(),
            n,
            pairs_checked: 0,
            failures: Vec::new(),
            tallies: CoveringTallies::default(),
            certificates: Vec::new(),
            wall_time: 0.0,
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn finish(mut self, started: Instant) -> Self {
        self.wall_time = started.elapsed().as_secs_f64();
        self
    }
}

enum PairOutcome {
    Certified(PairCertificate),
    Failed(Failure),
}

fn certify_pair(p: &Partition, q: &Partition) -> PairOutcome {
    let (tp, tq) = (RootedTree::starlike(p), RootedTree::starlike(q));
    match compare_indices(&tp, &tq, DEFAULT_MAX_STEPS) {
        Ok(res) if res.verdict == Verdict::Less => {
            if res.check(&tp, &tq) {
                PairOutcome::Certified(PairCertificate {
                    lower: p.clone(),
                    upper: q.clone(),
                    witness: res.witness,
                })
            } else {
                PairOutcome::Failed(Failure::pair(p, q, "witness_recheck", format_rational(&res.witness)))
            }
        }
        Ok(res) => PairOutcome::Failed(Failure::pair(
            p,
            q,
            "order_reversed",
            format!("index({p}) > index({q}), witness {}", format_rational(&res.witness)),
        )),
        Err(e) => PairOutcome::Failed(Failure::pair(p, q, "unresolved", e.to_string())),
    }
}

fn check_consecutive(omega: &[Partition], suite: &str, n: usize) -> VerificationReport {
    let started = Instant::now();
    let mut report = VerificationReport::new(suite, n);
    let outcomes: Vec<(Result<CoveringKind, PartitionError>, PairOutcome)> = omega
        .par_windows(2)
        .map(|w| (classify_covering(&w[0], &w[1]), certify_pair(&w[0], &w[1])))
        .collect();
    for (w, (kind, outcome)) in omega.windows(2).zip(outcomes) {
        report.pairs_checked += 1;
        match kind {
            Ok(kind) => report.tallies.record(kind),
            Err(e) => report.failures.push(Failure::pair(&w[0], &w[1], "covering", e.to_string())),
        }
        match outcome {
            PairOutcome::Certified(cert) => report.certificates.push(cert),
            PairOutcome::Failed(f) => report.failures.push(f),
        }
    }
    report.finish(started)
}

/// Certifies `index(p) < index(q)` for every consecutive pair of starlikes
/// on `n` vertices.
pub fn verify_main_theorem(n: usize) -> Result<VerificationReport, PartitionError> {
    let omega = enumerate_omega_all(n)?;
    Ok(check_consecutive(&omega, "main", n))
}

/// Same as [`verify_main_theorem`] restricted to partitions with `r` parts.
pub fn verify_main_theorem_with_parts(n: usize, r: usize) -> Result<VerificationReport, PartitionError> {
    let omega = enumerate_omega(n, r)?;
    Ok(check_consecutive(&omega, "main", n))
}

/// Compares non-consecutive pairs directly: all pairs when there are at most
/// `samples`, otherwise `samples` random pairs drawn with `seed`.
pub fn verify_pairwise_order(n: usize, samples: usize, seed: u64) -> Result<VerificationReport, PartitionError> {
    let started = Instant::now();
    let omega = enumerate_omega_all(n)?;
    let total = omega.len() * omega.len().saturating_sub(1) / 2;
    let pairs: Vec<(usize, usize)> = if total <= samples {
        (0..omega.len())
            .flat_map(|i| (i + 1..omega.len()).map(move |j| (i, j)))
            .collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..samples)
            .map(|_| {
                let i = rng.gen_range(0..omega.len() - 1);
                let j = rng.gen_range(i + 1..omega.len());
                (i, j)
            })
            .collect()
    };
    let outcomes: Vec<PairOutcome> = pairs
        .par_iter()
        .map(|&(i, j)| certify_pair(&omega[i], &omega[j]))
        .collect();
    let mut report = VerificationReport::new("pairwise", n);
    for outcome in outcomes {
        report.pairs_checked += 1;
        if let PairOutcome::Failed(f) = outcome {
            report.failures.push(f);
        }
    }
    Ok(report.finish(started))
}

/// Checks the covering structure of all partitions of `n - 1`: the
/// constructive successor agrees with the sorted enumeration, every covering
/// is classified, class restarts keep their shape, and the type counts match
/// the class structure.
pub fn verify_covering_theorem(n: usize) -> Result<VerificationReport, PartitionError> {
    let started = Instant::now();
    let omega = enumerate_omega_all(n)?;
    let mut report = VerificationReport::new("coverings", n);

    for w in omega.windows(2) {
        let (p, q) = (&w[0], &w[1]);
        report.pairs_checked += 1;
        if successor(p).as_ref() != Some(q) {
            let got = successor(p).map_or_else(|| "none".to_owned(), |s| s.to_string());
            report.failures.push(Failure::pair(p, q, "successor_mismatch", format!("successor gave {got}")));
            continue;
        }
        let kind = match classify_covering(p, q) {
            Ok(kind) => kind,
            Err(e) => {
                report.failures.push(Failure::pair(p, q, "covering", e.to_string()));
                continue;
            }
        };
        report.tallies.record(kind);
        if p.r() != q.r() {
            continue;
        }

        let r = p.r();
        let t = p.shared_prefix_len(q);
        let (ys, zs) = (p.parts(), q.parts());
        if zs[t] != ys[t] + 1 {
            report.failures.push(Failure::pair(p, q, "raised_entry", format!("position {t}")));
        }
        if t + 1 < r && ys[r - 1] - ys[t + 1] > 1 {
            report.failures.push(Failure::pair(
                p,
                q,
                "tail_spread",
                format!("y_r - y_(t+2) = {}", ys[r - 1] - ys[t + 1]),
            ));
        }
        if let CoveringKind::TypeIII(ClassChange::ClassReset { theta, xi }) = kind {
            if theta < xi {
                report.failures.push(Failure::pair(p, q, "theta_ge_xi", format!("theta {theta} < xi {xi}")));
            }
            if zs[t..r - 1].iter().any(|&z| z != ys[t] + 1) {
                report.failures.push(Failure::pair(p, q, "reset_shape", "middle entries are not k + 1"));
            }
        }
    }

    match omega.last() {
        Some(last) if successor(last).is_none() && last.r() == n - 1 => {}
        Some(last) => report.failures.push(Failure::single(last, "chain_end", "last partition has a successor")),
        None => report.failures.push(Failure::global("chain_end", "empty enumeration")),
    }

    if report.tallies.type_i != n - 4 {
        report.failures.push(Failure::global(
            "type_i_count",
            format!("{} type I coverings, expected {}", report.tallies.type_i, n - 4),
        ));
    }

    // Every maximal class is a contiguous run and contributes size - 1
    // type II coverings.
    let minima: BTreeSet<Vec<u32>> = omega.iter().map(|p| class_minimum(p).parts().to_vec()).collect();
    let mut expected_type_ii = 0;
    for minimum in &minima {
        let first = Partition::new(minimum.clone())?;
        let class = maximal_class(&first);
        expected_type_ii += class.len() - 1;
        let start = omega.iter().position(|x| *x == first);
        let contiguous = start.is_some_and(|s| omega.get(s..s + class.len()) == Some(&class[..]));
        if !contiguous {
            report.failures.push(Failure::single(&first, "class_contiguous", "class is not a run of consecutive partitions"));
        }
    }
    if report.tallies.type_ii != expected_type_ii {
        report.failures.push(Failure::global(
            "type_ii_count",
            format!("{} type II coverings, expected {expected_type_ii}", report.tallies.type_ii),
        ));
    }

    Ok(report.finish(started))
}

fn b_lemma_failures(p: &Partition, depth: u32) -> Vec<Failure> {
    let tree = RootedTree::starlike(p);
    let bracket = match index_bracket(&tree, &dyadic(depth)) {
        Ok(b) => b,
        Err(e) => return vec![Failure::single(p, "bracket", e.to_string())],
    };
    let mu = -bracket.hi;
    let seq = match b_sequence(&mu, p.last() as usize) {
        Ok(seq) => seq,
        Err(e) => return vec![Failure::single(p, "b_sequence_exists", e.to_string())],
    };
    let mut failures = Vec::new();
    if !is_negative_decreasing(&seq.b) {
        failures.push(Failure::single(p, "negative_decreasing", format!("mu = {}", format_rational(&mu))));
    }
    for (theta, b) in seq.b.iter().enumerate() {
        if mu <= b_plus_reciprocal(b) {
            failures.push(Failure::single(
                p,
                "mu_above_b_plus_inverse",
                format!("theta = {}, mu = {}", theta + 1, format_rational(&mu)),
            ));
        }
    }
    failures
}

/// Checks that just below minus the index the path recurrence is negative,
/// strictly decreasing, and satisfies `mu > b + 1/b` termwise.
pub fn verify_b_lemma(p: &Partition, depth: u32) -> VerificationReport {
    let started = Instant::now();
    let mut report = VerificationReport::new("b-lemma", p.n());
    report.pairs_checked = 1;
    report.failures = b_lemma_failures(p, depth);
    report.finish(started)
}

fn residual_failures(p: &Partition, depth: u32) -> Vec<Failure> {
    let tree = RootedTree::starlike(p);
    let bracket = match index_bracket(&tree, &dyadic(depth)) {
        Ok(b) => b,
        Err(e) => return vec![Failure::single(p, "bracket", e.to_string())],
    };
    let at_hi = root_residual(p, &-bracket.hi.clone());
    let at_lo = root_residual(p, &-bracket.lo.clone());
    match (at_hi, at_lo) {
        (Ok(h), Ok(l)) if !h.is_negative() && l.is_negative() => Vec::new(),
        (Ok(h), Ok(l)) => vec![Failure::single(
            p,
            "sign_change",
            format!("R(-hi) = {}, R(-lo) = {}", format_rational(&h), format_rational(&l)),
        )],
        (Err(e), _) | (_, Err(e)) => vec![Failure::single(p, "sign_change", e.to_string())],
    }
}

/// Checks that the root residual changes sign across the certified bracket,
/// from `R(-hi) >= 0` to `R(-lo) < 0`.
pub fn verify_residual_root(p: &Partition, depth: u32) -> VerificationReport {
    let started = Instant::now();
    let mut report = VerificationReport::new("residual", p.n());
    report.pairs_checked = 1;
    report.failures = residual_failures(p, depth);
    report.finish(started)
}

fn per_partition(
    n: usize,
    suite: &str,
    check: impl Fn(&Partition) -> Vec<Failure> + Sync + Send,
) -> Result<VerificationReport, PartitionError> {
    let started = Instant::now();
    let omega = enumerate_omega_all(n)?;
    let failures: Vec<Vec<Failure>> = omega.par_iter().map(check).collect();
    let mut report = VerificationReport::new(suite, n);
    report.pairs_checked = omega.len();
    report.failures = failures.into_iter().flatten().collect();
    Ok(report.finish(started))
}

/// [`verify_b_lemma`] over every starlike on `n` vertices.
pub fn verify_b_lemma_all(n: usize, depth: u32) -> Result<VerificationReport, PartitionError> {
    per_partition(n, "b-lemma", |p| b_lemma_failures(p, depth))
}

/// [`verify_residual_root`] over every starlike on `n` vertices.
pub fn verify_residual_root_all(n: usize, depth: u32) -> Result<VerificationReport, PartitionError> {
    per_partition(n, "residual", |p| residual_failures(p, depth))
}

/// Certified index midpoints against the floating-point oracle, for every
/// starlike on `n` vertices.
pub fn verify_oracle_agreement(n: usize, tol: f64) -> Result<VerificationReport, PartitionError> {
    per_partition(n, "oracle", |p| {
        let tree = RootedTree::starlike(p);
        let exact = index_approx(&tree, &dyadic(crate::index::DEFAULT_TOL_BITS)).map(|x| to_f64(&x));
        let float = oracle_index(&tree, ORACLE_TOL);
        match (exact, float) {
            (Ok(e), Ok(f)) if (e - f).abs() <= tol => Vec::new(),
            (Ok(e), Ok(f)) => vec![Failure::single(p, "oracle_agreement", format!("certified {e}, oracle {f}"))],
            (Err(e), _) => vec![Failure::single(p, "oracle_agreement", e.to_string())],
            (_, Err(e)) => vec![Failure::single(p, "oracle_agreement", e.to_string())],
        }
    })
}
