//! Certified ordering of starlike trees by their adjacency index.
//!
//! A starlike on `n` vertices is a center with `r >= 3` pendant paths, encoded
//! by the nondecreasing partition of `n - 1` into the path lengths. The
//! crate enumerates those partitions in their total order, locates tree
//! eigenvalues exactly with a bottom-up congruence diagonalization, and
//! certifies that the indices of consecutive starlikes strictly increase.

pub mod cli;
pub mod index;
pub mod partitions;
pub mod rational;
pub mod spectra;
pub mod trees;
pub mod verify;

pub use index::{compare_indices, index_approx, index_bracket, ComparisonResult, IndexBracket, Verdict};
pub use partitions::{CoveringKind, Partition};
pub use rational::Rational;
pub use spectra::{count_eigenvalues, diagonalize, DiagonalProfile, EigenCount};
pub use trees::RootedTree;
pub use verify::VerificationReport;
