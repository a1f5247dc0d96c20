//! Deciding whether the degree-two moves connect every fiber.
//!
//! Whether the square-free degree-two moves compatible with a mask S form a
//! Markov basis is a combinatorial property of S alone. This module decides
//! it two independent ways:
//!
//! * [`contains_forbidden_pattern`] scans every 2×3 and 3×2 window for the
//!   forbidden configuration — exactly two marked cells in distinct rows
//!   and distinct columns of the window with the other four unmarked, where
//!   "marked" is taken against S and against its complement. Finding one
//!   yields a [`PatternWitness`] from which a concretely disconnected fiber
//!   can be built (see [`crate::fiber::construct_witness`]).
//!
//! * [`classify`] analyzes the row slices J(i) = {j : (i, j) ∈ S}. The
//!   masks free of the forbidden pattern are exactly those whose slices
//!   form a chain under inclusion ([`Classification::Triangular`]) or take
//!   exactly two complementary non-empty values
//!   ([`Classification::BlockDiagonal`]).
//!
//! The two routes must agree on every mask; the test suite checks this
//! exhaustively on all 3×3 and 3×4 masks. [`basic_moves_suffice`] is the
//! headline predicate: `true` exactly when no forbidden pattern exists, in
//! which case the degree-two move set is the unique minimal Markov basis.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::table::SubtableMask;

/// Orientation of a pattern window: two rows by three columns, or three
/// rows by two columns.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum Orientation {
    /// Two rows, three columns.
    TwoByThree,
    /// Three rows, two columns.
    ThreeByTwo,
}

/// Which cell set the two marked cells of a witness belong to.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum Host {
    /// The marked cells lie in S.
    Subtable,
    /// The marked cells lie in the complement of S.
    Complement,
}

/// A window exhibiting the forbidden pattern: within the named rows and
/// columns, exactly two host cells sit in distinct rows and distinct
/// columns and the remaining four cells are outside the host.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PatternWitness {
    /// Window orientation.
    pub orientation: Orientation,
    /// Whether the pattern is marked against S or against S^c.
    pub host: Host,
    /// The window's row indices, ascending (two or three of them).
    pub rows: Vec<usize>,
    /// The window's column indices, ascending (three or two of them).
    pub cols: Vec<usize>,
}

impl PatternWitness {
    /// Re-checks the witness against a mask: the window must contain
    /// exactly two host cells, in distinct rows and distinct columns.
    pub fn validate(&self, mask: &SubtableMask) -> bool {
        let shape = mask.shape();
        let expected = match self.orientation {
            Orientation::TwoByThree => (2, 3),
            Orientation::ThreeByTwo => (3, 2),
        };
        if self.rows.len() != expected.0 || self.cols.len() != expected.1 {
            return false;
        }
        if self.rows.iter().any(|&r| r >= shape.rows())
            || self.cols.iter().any(|&c| c >= shape.cols())
        {
            return false;
        }
        let members = self.member_cells(mask);
        match members.as_slice() {
            [(r1, c1), (r2, c2)] => r1 != r2 && c1 != c2,
            _ => false,
        }
    }

    /// The host cells inside the window, in row-major window order. A valid
    /// witness has exactly two.
    pub(crate) fn member_cells(&self, mask: &SubtableMask) -> Vec<(usize, usize)> {
        let in_host = |r: usize, c: usize| match self.host {
            Host::Subtable => mask.contains(r, c),
            Host::Complement => !mask.contains(r, c),
        };
        let mut members = Vec::new();
        for &r in &self.rows {
            for &c in &self.cols {
                if in_host(r, c) {
                    members.push((r, c));
                }
            }
        }
        members
    }
}

/// The verdict of [`classify`].
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Classification {
    /// The row slices form a chain under inclusion. `row_order` lists the
    /// rows with weakly shrinking slices (ties broken by row index).
    Triangular {
        /// Rows ordered so each row's slice contains the next one's.
        row_order: Vec<usize>,
    },
    /// Exactly two distinct row slices, complementary and both non-empty:
    /// after permuting rows and columns the mask is a 2×2 block diagonal.
    /// Class 0 is the class of row 0.
    BlockDiagonal {
        /// The two groups of rows sharing a slice.
        row_classes: [Vec<usize>; 2],
        /// The columns of each class's slice.
        col_classes: [Vec<usize>; 2],
    },
    /// Neither shape: the witness window proves some fiber is disconnected
    /// under the degree-two moves.
    Neither {
        /// A forbidden-pattern window found by the scan.
        witness: PatternWitness,
    },
}

impl Classification {
    /// Short verdict name: "Triangular", "BlockDiagonal", or "Neither".
    pub fn verdict_name(&self) -> &'static str {
        match self {
            Classification::Triangular { .. } => "Triangular",
            Classification::BlockDiagonal { .. } => "BlockDiagonal",
            Classification::Neither { .. } => "Neither",
        }
    }
}

/// A row's slice of marked columns, borrowed from a mask as bitset words.
#[derive(Clone, Copy)]
struct RowSlice<'a> {
    words: &'a [u64],
}

impl<'a> RowSlice<'a> {
    fn cardinality(self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn is_subset_of(self, other: RowSlice<'_>) -> bool {
        self.words.iter().zip(other.words).all(|(a, b)| a & !b == 0)
    }

    fn same_as(self, other: RowSlice<'_>) -> bool {
        self.words == other.words
    }

    /// Whether the two slices partition the full column set.
    fn complementary_to(self, other: RowSlice<'_>, cols: usize) -> bool {
        let mut remaining = cols;
        for (a, b) in self.words.iter().zip(other.words) {
            let full = if remaining >= 64 {
                u64::MAX
            } else {
                (1u64 << remaining) - 1
            };
            remaining = remaining.saturating_sub(64);
            if a & b != 0 || a ^ b != full {
                return false;
            }
        }
        true
    }
}

fn slice_of(mask: &SubtableMask, row: usize) -> RowSlice<'_> {
    RowSlice {
        words: mask.row_words(row),
    }
}

/// Scans every 2×3 and 3×2 window of the mask and of its complement for
/// the forbidden pattern, returning the first witness in a fixed order
/// (2×3 windows before 3×2; rows, then columns, ascending; S before S^c).
///
/// The mask must be a non-empty proper subset of the cells.
///
/// ```
/// use subtable_sum::pattern::contains_forbidden_pattern;
/// use subtable_sum::table::{Shape, SubtableMask};
/// let shape = Shape::new(3, 3).unwrap();
/// let diagonal = SubtableMask::from_cells(shape, &[(0, 0), (1, 1)]).unwrap();
/// assert!(contains_forbidden_pattern(&diagonal).unwrap().is_some());
/// let column = SubtableMask::from_cells(shape, &[(0, 0), (1, 0)]).unwrap();
/// assert!(contains_forbidden_pattern(&column).unwrap().is_none());
/// ```
pub fn contains_forbidden_pattern(mask: &SubtableMask) -> Result<Option<PatternWitness>> {
    mask.require_nondegenerate()?;
    let (r, c) = (mask.shape().rows(), mask.shape().cols());

    let check = |rows: &[usize], cols: &[usize], host: Host| -> bool {
        let mut members: [(usize, usize); 2] = [(0, 0); 2];
        let mut count = 0;
        for &i in rows {
            for &j in cols {
                let marked = match host {
                    Host::Subtable => mask.contains(i, j),
                    Host::Complement => !mask.contains(i, j),
                };
                if marked {
                    if count == 2 {
                        return false;
                    }
                    members[count] = (i, j);
                    count += 1;
                }
            }
        }
        count == 2 && members[0].0 != members[1].0 && members[0].1 != members[1].1
    };

    for a in 0..r {
        for b in a + 1..r {
            for c0 in 0..c {
                for c1 in c0 + 1..c {
                    for c2 in c1 + 1..c {
                        let rows = [a, b];
                        let cols = [c0, c1, c2];
                        for host in [Host::Subtable, Host::Complement] {
                            if check(&rows, &cols, host) {
                                return Ok(Some(PatternWitness {
                                    orientation: Orientation::TwoByThree,
                                    host,
                                    rows: rows.to_vec(),
                                    cols: cols.to_vec(),
                                }));
                            }
                        }
                    }
                }
            }
        }
    }
    for a in 0..r {
        for b in a + 1..r {
            for d in b + 1..r {
                for c0 in 0..c {
                    for c1 in c0 + 1..c {
                        let rows = [a, b, d];
                        let cols = [c0, c1];
                        for host in [Host::Subtable, Host::Complement] {
                            if check(&rows, &cols, host) {
                                return Ok(Some(PatternWitness {
                                    orientation: Orientation::ThreeByTwo,
                                    host,
                                    rows: rows.to_vec(),
                                    cols: cols.to_vec(),
                                }));
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(None)
}

/// Classifies a mask by its row slices: [`Classification::Triangular`] is
/// checked first, then [`Classification::BlockDiagonal`]; everything else
/// is [`Classification::Neither`] and carries a scan witness.
///
/// The mask must be a non-empty proper subset of the cells.
pub fn classify(mask: &SubtableMask) -> Result<Classification> {
    mask.require_nondegenerate()?;
    let rows = mask.shape().rows();
    let cols = mask.shape().cols();

    // Chain check: sort rows by slice size (largest first) and verify each
    // consecutive pair nests. By transitivity that makes every pair nest.
    let mut order: Vec<usize> = (0..rows).collect();
    order.sort_by_key(|&i| (std::cmp::Reverse(slice_of(mask, i).cardinality()), i));
    let chained = order
        .windows(2)
        .all(|w| slice_of(mask, w[1]).is_subset_of(slice_of(mask, w[0])));
    if chained {
        return Ok(Classification::Triangular { row_order: order });
    }

    // Block-diagonal check: exactly two distinct slices, complementary and
    // both non-empty. Class 0 is row 0's class.
    let first = slice_of(mask, 0);
    let mut second: Option<usize> = None;
    let mut two_classes = true;
    for i in 1..rows {
        let s = slice_of(mask, i);
        if s.same_as(first) {
            continue;
        }
        match second {
            None => second = Some(i),
            Some(k) if s.same_as(slice_of(mask, k)) => {}
            Some(_) => {
                two_classes = false;
                break;
            }
        }
    }
    if two_classes {
        if let Some(k) = second {
            let other = slice_of(mask, k);
            if first.cardinality() > 0
                && other.cardinality() > 0
                && first.complementary_to(other, cols)
            {
                let mut row_classes: [Vec<usize>; 2] = [Vec::new(), Vec::new()];
                for i in 0..rows {
                    let class = usize::from(!slice_of(mask, i).same_as(first));
                    row_classes[class].push(i);
                }
                let mut col_classes: [Vec<usize>; 2] = [Vec::new(), Vec::new()];
                for j in 0..cols {
                    col_classes[usize::from(!mask.contains(0, j))].push(j);
                }
                return Ok(Classification::BlockDiagonal {
                    row_classes,
                    col_classes,
                });
            }
        }
    }

    let witness = contains_forbidden_pattern(mask)?
        .expect("slice classification says Neither but the window scan found no pattern");
    Ok(Classification::Neither { witness })
}

/// Whether the square-free degree-two moves compatible with the mask form
/// a Markov basis — i.e. connect every fiber of the constraint. `true`
/// exactly when [`classify`] does not return `Neither`; when `true`, that
/// move set is the unique minimal Markov basis.
///
/// The mask must be a non-empty proper subset of the cells.
pub fn basic_moves_suffice(mask: &SubtableMask) -> Result<bool> {
    Ok(!matches!(classify(mask)?, Classification::Neither { .. }))
}
