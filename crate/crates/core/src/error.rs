//! The crate-wide error type.

use crate::fiber::DisconnectionCertificate;
use crate::table::Shape;
use thiserror::Error;

/// Everything that can fail across the crate.
///
/// Most variants signal a contract violation in the input (mismatched
/// shapes, a degenerate mask, inconsistent marginals). A few are genuine
/// runtime outcomes a caller may want to branch on: [`Error::Disconnected`]
/// carries a proof that two tables cannot be joined, and
/// [`Error::WorkBoundExceeded`] / [`Error::NotConnectedAtDepth`] report
/// that a bounded search gave up without deciding.
#[derive(Debug, Error)]
#[non_exhaustive]
pub enum Error {
    /// Two objects that must share a shape do not.
    #[error("shape mismatch: expected {expected}, found {found}")]
    ShapeMismatch {
        /// The shape required by the operation.
        expected: Shape,
        /// The shape actually supplied.
        found: Shape,
    },

    /// A requested shape has zero rows or zero columns.
    #[error("a table needs at least one row and one column")]
    ZeroShape,

    /// A cell index lies outside the table.
    #[error("cell ({row}, {col}) is outside a {shape} table (0-based)")]
    IndexOutOfRange {
        /// 0-based row index.
        row: usize,
        /// 0-based column index.
        col: usize,
        /// The shape the index was checked against.
        shape: Shape,
    },

    /// The number of entries does not match the shape.
    #[error("expected {expected} entries for the shape, found {found}")]
    WrongEntryCount {
        /// `rows * cols` of the target shape.
        expected: usize,
        /// Length of the supplied entry list.
        found: usize,
    },

    /// Applying a move would drive a cell below zero.
    #[error("applying the move makes cell ({row}, {col}) negative")]
    NegativeCell {
        /// 0-based row index of the offending cell.
        row: usize,
        /// 0-based column index of the offending cell.
        col: usize,
    },

    /// The mask is empty or covers every cell, so the subtable constraint
    /// degenerates and the classification is undefined.
    #[error("subtable mask must be a non-empty proper subset of the cells")]
    MaskDegenerate,

    /// Moves need at least two rows and two columns to exist.
    #[error("shape {shape} is too small: moves need at least 2 rows and 2 columns")]
    ShapeTooSmall {
        /// The offending shape.
        shape: Shape,
    },

    /// A basic move was requested with equal rows or equal columns.
    #[error("a basic move needs two distinct rows and two distinct columns")]
    DegenerateMove,

    /// Marginals fail a consistency requirement.
    #[error("inconsistent marginals: {reason}")]
    InconsistentMarginals {
        /// Which requirement failed.
        reason: &'static str,
    },

    /// A bounded verification would enumerate more work than allowed.
    #[error("estimated work {estimated} exceeds the bound {bound}")]
    WorkBoundExceeded {
        /// Estimated number of marginal triples to enumerate.
        estimated: u64,
        /// The configured ceiling.
        bound: u64,
    },

    /// Norm reduction was asked for two identical tables.
    #[error("the two tables are identical; there is nothing to reduce")]
    SameTable,

    /// The two tables do not share row sums, column sums, and subtable sum.
    #[error("the two tables lie in different fibers")]
    DifferentFiber,

    /// No norm-reducing step sequence exists within the depth bound.
    #[error("no norm-reducing sequence of at most {depth} steps exists")]
    NoReductionFound {
        /// The exhausted depth bound.
        depth: usize,
    },

    /// The fiber is provably disconnected under the given moves.
    #[error("{0}")]
    Disconnected(Box<DisconnectionCertificate>),

    /// The depth-bounded search failed and the fiber is too large for the
    /// exhaustive fallback, so connectivity is undecided.
    #[error(
        "no reduction within depth {depth} and the fiber exceeds {limit} \
         elements; connectivity undecided"
    )]
    NotConnectedAtDepth {
        /// The exhausted depth bound.
        depth: usize,
        /// The fiber-size ceiling for the exhaustive fallback.
        limit: usize,
    },

    /// A random walk was requested with no moves to propose.
    #[error("the move set is empty; the chain cannot leave the observed table")]
    EmptyMoveSet,

    /// A statistic was requested for a table with grand total zero.
    #[error("the table total is zero; the statistic is undefined")]
    EmptyTable,

    /// A configuration value is unusable.
    #[error("invalid configuration: {0}")]
    InvalidConfig(&'static str),

    /// A problem file or CSV table failed to parse or validate.
    /// Indices in the message follow the 1-based file convention.
    #[error("malformed input: {0}")]
    Malformed(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
