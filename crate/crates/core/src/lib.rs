//! Markov bases for two-way tables with a fixed subtable sum.
//!
//! A two-way contingency table is usually constrained by its row and
//! column sums. This crate handles the refinement where the sum over an
//! arbitrary cell subset — the *subtable* — is fixed as well, and asks
//! when the degree-two basic moves that stay balanced on the subtable
//! connect every fiber of the constraint.
//!
//! The answer is a combinatorial dichotomy on the subtable's shape, and
//! the crate implements both directions:
//!
//! - [`pattern`] decides it, either by scanning 2×3 windows for the
//!   forbidden configuration or by classifying the subtable's row slices
//!   as a chain / two-block split — two independent routes that agree.
//! - [`basis`] generates the balanced basic moves themselves.
//! - [`fiber`] enumerates fibers, computes their connectivity under a
//!   move set, builds explicit disconnected fibers for failing subtables,
//!   and exhaustively verifies connectivity up to a total bound.
//! - [`connector`] searches for a norm-reducing move sequence between two
//!   tables of the same fiber, certifying disconnection when none exists.
//! - [`mcmc`] runs the Metropolis–Hastings walk over a fiber and the
//!   resulting conditional exact test, reproducibly.
//! - [`io`] reads problem files and writes the machine-readable results.
//!
//! Row and column indices are 0-based everywhere in the API; the file
//! formats in [`io`] are 1-based and converted at the boundary.

#![warn(missing_docs)]
#![forbid(unsafe_code)]

pub mod basis;
pub mod connector;
pub mod error;
pub mod fiber;
pub mod io;
pub mod mcmc;
pub mod pattern;
pub mod table;

pub use basis::{generate_basic_moves, BasicMove, MoveSet};
pub use error::{Error, Result};
pub use fiber::{components, enumerate_fiber, Fiber, FiberGraph};
pub use pattern::{basic_moves_suffice, classify, Classification, PatternWitness};
pub use table::{Marginals, MoveArray, Shape, SubtableMask, Table};
