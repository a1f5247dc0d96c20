//! Tables, subtable masks, marginals, and integer move arrays.
//!
//! A *table* is an R×C array of nonnegative integer counts. A *subtable
//! mask* S marks an arbitrary subset of the cells. The constraint family
//! studied by this crate fixes three things at once: every row sum, every
//! column sum, and the sum of the entries over S. A *move* is a signed
//! integer array whose row sums, column sums, and S-sum are all zero, so
//! adding it to a table preserves the whole constraint — as long as no
//! entry goes negative.
//!
//! All indices in the library API are 0-based; the file formats handled by
//! [`crate::io`] use the 1-based convention and convert at the boundary.
//! Entries use 64-bit signed arithmetic throughout; overflow is a contract
//! violation and is caught by the checked arithmetic of debug/test builds.

use std::fmt;

use crate::error::{Error, Result};

/// Number of rows and columns of a table. Both are at least 1.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Shape {
    rows: usize,
    cols: usize,
}

impl Shape {
    /// Creates a shape, rejecting zero rows or zero columns.
    pub fn new(rows: usize, cols: usize) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::ZeroShape);
        }
        Ok(Shape { rows, cols })
    }

    /// Number of rows.
    pub fn rows(self) -> usize {
        self.rows
    }

    /// Number of columns.
    pub fn cols(self) -> usize {
        self.cols
    }

    /// Total number of cells.
    pub fn cell_count(self) -> usize {
        self.rows * self.cols
    }

    /// Whether the 0-based cell (row, col) lies inside the table.
    pub fn contains(self, row: usize, col: usize) -> bool {
        row < self.rows && col < self.cols
    }

    /// The shape with rows and columns swapped.
    pub fn transposed(self) -> Shape {
        Shape {
            rows: self.cols,
            cols: self.rows,
        }
    }

    /// Row-major offset of a cell. Callers must check bounds first.
    pub(crate) fn offset(self, row: usize, col: usize) -> usize {
        debug_assert!(self.contains(row, col));
        row * self.cols + col
    }

    pub(crate) fn check_cell(self, row: usize, col: usize) -> Result<()> {
        if self.contains(row, col) {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange {
                row,
                col,
                shape: self,
            })
        }
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}", self.rows, self.cols)
    }
}

/// An R×C array of nonnegative integer counts, stored row-major.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Table {
    shape: Shape,
    entries: Vec<i64>,
}

impl Table {
    /// Creates a table from row-major entries, rejecting negative counts
    /// and entry lists of the wrong length.
    pub fn new(shape: Shape, entries: Vec<i64>) -> Result<Self> {
        if entries.len() != shape.cell_count() {
            return Err(Error::WrongEntryCount {
                expected: shape.cell_count(),
                found: entries.len(),
            });
        }
        for (k, &v) in entries.iter().enumerate() {
            if v < 0 {
                return Err(Error::NegativeCell {
                    row: k / shape.cols,
                    col: k % shape.cols,
                });
            }
        }
        Ok(Table { shape, entries })
    }

    /// Creates a table from a list of equal-length rows.
    ///
    /// ```
    /// use subtable_sum::table::Table;
    /// let t = Table::from_rows(&[vec![7, 5, 1], vec![5, 10, 6], vec![2, 6, 8]]).unwrap();
    /// assert_eq!(t.total(), 50);
    /// ```
    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let shape = Shape::new(r, c)?;
        for (i, row) in rows.iter().enumerate() {
            if row.len() != c {
                return Err(Error::Malformed(format!(
                    "row {} has {} entries; expected {}",
                    i + 1,
                    row.len(),
                    c
                )));
            }
        }
        Table::new(shape, rows.concat())
    }

    /// The all-zero table of the given shape.
    pub fn zero(shape: Shape) -> Self {
        Table {
            shape,
            entries: vec![0; shape.cell_count()],
        }
    }

    /// The shape of the table.
    pub fn shape(&self) -> Shape {
        self.shape
    }

    /// Row-major view of the entries.
    pub fn entries(&self) -> &[i64] {
        &self.entries
    }

    /// The entry at 0-based (row, col). Panics if out of range.
    pub fn get(&self, row: usize, col: usize) -> i64 {
        self.entries[self.shape.offset(row, col)]
    }

    pub(crate) fn set(&mut self, row: usize, col: usize, value: i64) {
        let k = self.shape.offset(row, col);
        self.entries[k] = value;
    }

    /// One row of the table.
    pub fn row(&self, row: usize) -> &[i64] {
        let c = self.shape.cols;
        &self.entries[row * c..(row + 1) * c]
    }

    /// The rows as owned vectors, e.g. for serialization.
    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        (0..self.shape.rows).map(|i| self.row(i).to_vec()).collect()
    }

    /// Grand total of all entries.
    pub fn total(&self) -> i64 {
        self.entries.iter().sum()
    }

    /// All row sums.
    pub fn row_sums(&self) -> Vec<i64> {
        (0..self.shape.rows)
            .map(|i| self.row(i).iter().sum())
            .collect()
    }

    /// All column sums.
    pub fn col_sums(&self) -> Vec<i64> {
        let mut sums = vec![0; self.shape.cols];
        for i in 0..self.shape.rows {
            for (j, s) in sums.iter_mut().enumerate() {
                *s += self.get(i, j);
            }
        }
        sums
    }

    /// Sum of the entries over the masked cells.
    pub fn subtable_sum(&self, mask: &SubtableMask) -> Result<i64> {
        self.check_same_shape(mask.shape())?;
        let mut s = 0;
        for (row, col) in mask.cells() {
            s += self.get(row, col);
        }
        Ok(s)
    }

    /// Row sums, column sums, and subtable sum of this table.
    pub fn marginals(&self, mask: &SubtableMask) -> Result<Marginals> {
        Ok(Marginals {
            row_sums: self.row_sums(),
            col_sums: self.col_sums(),
            subtable_sum: self.subtable_sum(mask)?,
        })
    }

    /// Adds a move to the table, failing with [`Error::NegativeCell`] if any
    /// entry would become negative (the original table is untouched).
    ///
    /// ```
    /// use subtable_sum::table::{MoveArray, Table};
    /// let x = Table::from_rows(&[vec![1, 1, 0], vec![0, 0, 2]]).unwrap();
    /// let m = MoveArray::from_rows(&[vec![-1, -1, 2], vec![1, 1, -2]]).unwrap();
    /// let y = x.apply_move(&m).unwrap();
    /// assert_eq!(y.to_rows(), vec![vec![0, 0, 2], vec![1, 1, 0]]);
    /// ```
    pub fn apply_move(&self, mv: &MoveArray) -> Result<Table> {
        self.check_same_shape(mv.shape())?;
        let mut entries = self.entries.clone();
        for (k, e) in entries.iter_mut().enumerate() {
            *e += mv.entries[k];
            if *e < 0 {
                return Err(Error::NegativeCell {
                    row: k / self.shape.cols,
                    col: k % self.shape.cols,
                });
            }
        }
        Ok(Table {
            shape: self.shape,
            entries,
        })
    }

    /// The L1 distance `Σ |a_ij − b_ij|` between two tables of equal shape.
    pub fn l1_distance(&self, other: &Table) -> Result<i64> {
        self.check_same_shape(other.shape)?;
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).abs())
            .sum())
    }

    fn check_same_shape(&self, other: Shape) -> Result<()> {
        if self.shape == other {
            Ok(())
        } else {
            Err(Error::ShapeMismatch {
                expected: self.shape,
                found: other,
            })
        }
    }
}

impl fmt::Display for Table {
    /// Rows of comma-separated entries, one row per line.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.shape.rows {
            let line: Vec<String> = self.row(i).iter().map(i64::to_string).collect();
            writeln!(f, "{}", line.join(","))?;
        }
        Ok(())
    }
}

/// A subset S of the cells of an R×C table, stored as one bitset per row
/// so row-slice comparisons cost O(C/64) words.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct SubtableMask {
    shape: Shape,
    words_per_row: usize,
    bits: Vec<u64>,
}

impl SubtableMask {
    /// The empty mask (no cells marked).
    pub fn empty(shape: Shape) -> Self {
        let words_per_row = shape.cols.div_ceil(64);
        SubtableMask {
            shape,
            words_per_row,
            bits: vec![0; shape.rows * words_per_row],
        }
    }

    /// The full mask (every cell marked).
    pub fn full(shape: Shape) -> Self {
        SubtableMask::empty(shape).complement()
    }

    /// Builds a mask from 0-based (row, col) cells. Duplicates are
    /// harmless; out-of-range cells are rejected.
    ///
    /// ```
    /// use subtable_sum::table::{Shape, SubtableMask};
    /// let shape = Shape::new(3, 3).unwrap();
    /// let s = SubtableMask::from_cells(shape, &[(0, 0), (1, 0)]).unwrap();
    /// assert_eq!(s.cardinality(), 2);
    /// assert!(s.contains(1, 0) && !s.contains(2, 2));
    /// ```
    pub fn from_cells(shape: Shape, cells: &[(usize, usize)]) -> Result<Self> {
        let mut mask = SubtableMask::empty(shape);
        for &(row, col) in cells {
            shape.check_cell(row, col)?;
            mask.set(row, col);
        }
        Ok(mask)
    }

    fn set(&mut self, row: usize, col: usize) {
        self.bits[row * self.words_per_row + col / 64] |= 1 << (col % 64);
    }

    /// The shape the mask lives on.
    pub fn shape(&self) -> Shape {
        self.shape
    }

    /// Whether the 0-based cell (row, col) is marked. Panics if out of range.
    pub fn contains(&self, row: usize, col: usize) -> bool {
        assert!(self.shape.contains(row, col));
        self.bits[row * self.words_per_row + col / 64] >> (col % 64) & 1 == 1
    }

    /// 1 if the cell is marked, 0 otherwise.
    pub fn indicator(&self, row: usize, col: usize) -> i64 {
        i64::from(self.contains(row, col))
    }

    /// Number of marked cells.
    pub fn cardinality(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Whether no cell is marked.
    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    /// Whether every cell is marked.
    pub fn is_full(&self) -> bool {
        self.cardinality() == self.shape.cell_count()
    }

    /// Fails with [`Error::MaskDegenerate`] unless the mask is a non-empty
    /// proper subset of the cells.
    pub fn require_nondegenerate(&self) -> Result<()> {
        if self.is_empty() || self.is_full() {
            Err(Error::MaskDegenerate)
        } else {
            Ok(())
        }
    }

    /// The complementary mask S^c.
    pub fn complement(&self) -> SubtableMask {
        let mut out = self.clone();
        for w in &mut out.bits {
            *w = !*w;
        }
        out.clear_slack();
        out
    }

    /// The mask on the transposed shape with (i, j) marked iff (j, i) was.
    pub fn transposed(&self) -> SubtableMask {
        let mut out = SubtableMask::empty(self.shape.transposed());
        for (row, col) in self.cells() {
            out.set(col, row);
        }
        out
    }

    /// The mask with rows and columns relabeled: cell (i, j) of the result
    /// is marked iff cell (row_perm[i], col_perm[j]) of the original is.
    /// Both arguments must be permutations of the respective index ranges.
    pub fn permuted(&self, row_perm: &[usize], col_perm: &[usize]) -> Result<SubtableMask> {
        if row_perm.len() != self.shape.rows() || !is_permutation(row_perm) {
            return Err(Error::Malformed(
                "row relabeling is not a permutation".into(),
            ));
        }
        if col_perm.len() != self.shape.cols() || !is_permutation(col_perm) {
            return Err(Error::Malformed(
                "column relabeling is not a permutation".into(),
            ));
        }
        let mut out = SubtableMask::empty(self.shape);
        for (i, &pi) in row_perm.iter().enumerate() {
            for (j, &pj) in col_perm.iter().enumerate() {
                if self.contains(pi, pj) {
                    out.set(i, j);
                }
            }
        }
        Ok(out)
    }

    /// The marked cells in row-major order.
    pub fn cells(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.shape.rows)
            .flat_map(move |i| (0..self.shape.cols).map(move |j| (i, j)))
            .filter(|&(i, j)| self.contains(i, j))
    }

    /// The bitset words of one row.
    pub(crate) fn row_words(&self, row: usize) -> &[u64] {
        &self.bits[row * self.words_per_row..(row + 1) * self.words_per_row]
    }

    /// Zeroes the unused high bits of the last word of every row, which all
    /// other operations rely on being clear.
    fn clear_slack(&mut self) {
        let slack = self.words_per_row * 64 - self.shape.cols;
        if slack > 0 {
            let keep = u64::MAX >> slack;
            for row in 0..self.shape.rows {
                self.bits[(row + 1) * self.words_per_row - 1] &= keep;
            }
        }
    }
}

fn is_permutation(perm: &[usize]) -> bool {
    let mut seen = vec![false; perm.len()];
    for &p in perm {
        if p >= perm.len() || seen[p] {
            return false;
        }
        seen[p] = true;
    }
    true
}

/// The fixed data of a fiber: row sums, column sums, and the sum over the
/// masked cells. Two tables lie in the same fiber exactly when all three
/// families agree.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Marginals {
    /// Sum of every row, in row order.
    pub row_sums: Vec<i64>,
    /// Sum of every column, in column order.
    pub col_sums: Vec<i64>,
    /// Sum over the masked cells.
    pub subtable_sum: i64,
}

impl Marginals {
    /// Bundles the three marginal families.
    pub fn new(row_sums: Vec<i64>, col_sums: Vec<i64>, subtable_sum: i64) -> Self {
        Marginals {
            row_sums,
            col_sums,
            subtable_sum,
        }
    }

    /// The table shape these marginals describe.
    pub fn shape(&self) -> Result<Shape> {
        Shape::new(self.row_sums.len(), self.col_sums.len())
    }

    /// The grand total (sum of the row sums).
    pub fn total(&self) -> i64 {
        self.row_sums.iter().sum()
    }

    /// Checks the axioms every realizable marginal vector satisfies: all
    /// sums nonnegative, row total equal to column total, and the subtable
    /// sum between 0 and the grand total.
    pub fn validate(&self) -> Result<()> {
        self.shape()?;
        let fail = |reason| Err(Error::InconsistentMarginals { reason });
        if self.row_sums.iter().any(|&v| v < 0) {
            return fail("negative row sum");
        }
        if self.col_sums.iter().any(|&v| v < 0) {
            return fail("negative column sum");
        }
        let total = self.total();
        if total != self.col_sums.iter().sum::<i64>() {
            return fail("row total and column total differ");
        }
        if self.subtable_sum < 0 {
            return fail("negative subtable sum");
        }
        if self.subtable_sum > total {
            return fail("subtable sum exceeds the grand total");
        }
        Ok(())
    }
}

/// A signed integer array of table shape. When its row sums, column sums,
/// and masked sum all vanish it is a *move*: adding it preserves every
/// marginal the fiber fixes.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct MoveArray {
    shape: Shape,
    entries: Vec<i64>,
}

impl MoveArray {
    /// Creates a move array from row-major entries (any signs).
    pub fn new(shape: Shape, entries: Vec<i64>) -> Result<Self> {
        if entries.len() != shape.cell_count() {
            return Err(Error::WrongEntryCount {
                expected: shape.cell_count(),
                found: entries.len(),
            });
        }
        Ok(MoveArray { shape, entries })
    }

    /// Creates a move array from a list of equal-length rows.
    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let shape = Shape::new(r, c)?;
        for (i, row) in rows.iter().enumerate() {
            if row.len() != c {
                return Err(Error::Malformed(format!(
                    "row {} has {} entries; expected {}",
                    i + 1,
                    row.len(),
                    c
                )));
            }
        }
        MoveArray::new(shape, rows.concat())
    }

    /// The cell-wise difference `a − b` of two tables of equal shape.
    pub fn difference(a: &Table, b: &Table) -> Result<MoveArray> {
        a.check_same_shape(b.shape())?;
        let entries = a
            .entries
            .iter()
            .zip(&b.entries)
            .map(|(x, y)| x - y)
            .collect();
        Ok(MoveArray {
            shape: a.shape,
            entries,
        })
    }

    /// The shape of the array.
    pub fn shape(&self) -> Shape {
        self.shape
    }

    /// Row-major view of the entries.
    pub fn entries(&self) -> &[i64] {
        &self.entries
    }

    /// The entry at 0-based (row, col). Panics if out of range.
    pub fn get(&self, row: usize, col: usize) -> i64 {
        self.entries[self.shape.offset(row, col)]
    }

    /// The rows as owned vectors, e.g. for serialization.
    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        (0..self.shape.rows)
            .map(|i| self.entries[i * self.shape.cols..(i + 1) * self.shape.cols].to_vec())
            .collect()
    }

    /// Whether the array is a move for the masked constraint: zero row sums,
    /// zero column sums, and zero sum over the masked cells.
    pub fn is_move_for(&self, mask: &SubtableMask) -> Result<bool> {
        if self.shape != mask.shape() {
            return Err(Error::ShapeMismatch {
                expected: self.shape,
                found: mask.shape(),
            });
        }
        for i in 0..self.shape.rows {
            let s: i64 = self.entries[i * self.shape.cols..(i + 1) * self.shape.cols]
                .iter()
                .sum();
            if s != 0 {
                return Ok(false);
            }
        }
        for j in 0..self.shape.cols {
            let s: i64 = (0..self.shape.rows).map(|i| self.get(i, j)).sum();
            if s != 0 {
                return Ok(false);
            }
        }
        let masked: i64 = mask.cells().map(|(i, j)| self.get(i, j)).sum();
        Ok(masked == 0)
    }

    /// The L1 norm `Σ |m_ij|` (the *degree* of the move is half of this).
    pub fn l1_norm(&self) -> i64 {
        self.entries.iter().map(|v| v.abs()).sum()
    }

    /// The array with every entry negated.
    pub fn negated(&self) -> MoveArray {
        MoveArray {
            shape: self.shape,
            entries: self.entries.iter().map(|v| -v).collect(),
        }
    }
}

/// The 0/1 configuration matrix of the constraint: one row per table row
/// sum, then one per column sum, then one final row for the subtable
/// indicator, with columns ordered row-major over the cells. Multiplying it
/// by a flattened table yields the concatenation produced by
/// [`marginal_vector`].
pub fn configuration_matrix(shape: Shape, mask: &SubtableMask) -> Result<Vec<Vec<i64>>> {
    if shape != mask.shape() {
        return Err(Error::ShapeMismatch {
            expected: shape,
            found: mask.shape(),
        });
    }
    let (r, c) = (shape.rows(), shape.cols());
    let mut matrix = vec![vec![0; r * c]; r + c + 1];
    for i in 0..r {
        for j in 0..c {
            let cell = shape.offset(i, j);
            matrix[i][cell] = 1;
            matrix[r + j][cell] = 1;
            matrix[r + c][cell] = mask.indicator(i, j);
        }
    }
    Ok(matrix)
}

/// The marginals flattened in the row order of [`configuration_matrix`]:
/// row sums, then column sums, then the subtable sum.
pub fn marginal_vector(marginals: &Marginals) -> Vec<i64> {
    let mut v = marginals.row_sums.clone();
    v.extend_from_slice(&marginals.col_sums);
    v.push(marginals.subtable_sum);
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example_table() -> Table {
        Table::from_rows(&[vec![7, 5, 1], vec![5, 10, 6], vec![2, 6, 8]]).unwrap()
    }

    fn shape3x3() -> Shape {
        Shape::new(3, 3).unwrap()
    }

    #[test]
    fn marginals_of_example_table() {
        let t = example_table();
        let first_col_pair = SubtableMask::from_cells(shape3x3(), &[(0, 0), (1, 0)]).unwrap();
        let m = t.marginals(&first_col_pair).unwrap();
        assert_eq!(m.row_sums, vec![13, 21, 16]);
        assert_eq!(m.col_sums, vec![14, 21, 15]);
        assert_eq!(m.subtable_sum, 12);
        assert_eq!(m.total(), 50);

        let diagonal_pair = SubtableMask::from_cells(shape3x3(), &[(0, 0), (1, 1)]).unwrap();
        assert_eq!(t.subtable_sum(&diagonal_pair).unwrap(), 17);
    }

    #[test]
    fn marginals_of_zero_table() {
        let t = Table::zero(shape3x3());
        let mask = SubtableMask::from_cells(shape3x3(), &[(2, 2)]).unwrap();
        let m = t.marginals(&mask).unwrap();
        assert_eq!(m.row_sums, vec![0, 0, 0]);
        assert_eq!(m.col_sums, vec![0, 0, 0]);
        assert_eq!(m.subtable_sum, 0);
    }

    #[test]
    fn move_with_zero_sums_is_a_move() {
        // The degree-4 array that swaps the two halves of the small witness
        // fiber: row/column sums vanish, and its sum over S = {(0,0),(1,1)}
        // is 1 - 1 = 0.
        let m = MoveArray::from_rows(&[vec![1, 1, -2], vec![-1, -1, 2]]).unwrap();
        let shape = Shape::new(2, 3).unwrap();
        let mask = SubtableMask::from_cells(shape, &[(0, 0), (1, 1)]).unwrap();
        assert!(m.is_move_for(&mask).unwrap());
        assert_eq!(m.l1_norm(), 8);
    }

    #[test]
    fn zero_array_is_a_move_for_any_mask() {
        let shape = Shape::new(2, 2).unwrap();
        let zero = MoveArray::new(shape, vec![0; 4]).unwrap();
        for cells in [&[(0usize, 0usize)][..], &[(0, 0), (1, 1)], &[]] {
            let mask = SubtableMask::from_cells(shape, cells).unwrap();
            assert!(zero.is_move_for(&mask).unwrap());
        }
    }

    #[test]
    fn basic_pattern_with_unbalanced_subtable_sum_is_not_a_move() {
        // +1/-1 rectangle on rows {0,1} and columns {0,1}: its sum over
        // S = {(0,0),(1,1)} is 2, so the subtable constraint rejects it.
        let m = MoveArray::from_rows(&[vec![1, -1, 0], vec![-1, 1, 0], vec![0, 0, 0]]).unwrap();
        let mask = SubtableMask::from_cells(shape3x3(), &[(0, 0), (1, 1)]).unwrap();
        assert!(!m.is_move_for(&mask).unwrap());
        // The same array is a move once the mask is balanced on it.
        let balanced = SubtableMask::from_cells(shape3x3(), &[(0, 0), (1, 0)]).unwrap();
        assert!(m.is_move_for(&balanced).unwrap());
    }

    #[test]
    fn apply_move_swaps_witness_fiber_elements() {
        let x = Table::from_rows(&[vec![1, 1, 0], vec![0, 0, 2]]).unwrap();
        let m = MoveArray::from_rows(&[vec![-1, -1, 2], vec![1, 1, -2]]).unwrap();
        let y = x.apply_move(&m).unwrap();
        assert_eq!(y.to_rows(), vec![vec![0, 0, 2], vec![1, 1, 0]]);
        assert_eq!(x.l1_distance(&y).unwrap(), 8);
    }

    #[test]
    fn apply_move_rejects_negative_cells() {
        let x = Table::from_rows(&[vec![0, 1], vec![1, 0]]).unwrap();
        let swap = MoveArray::from_rows(&[vec![1, -1], vec![-1, 1]]).unwrap();
        let once = x.apply_move(&swap).unwrap();
        assert_eq!(once.to_rows(), vec![vec![1, 0], vec![0, 1]]);
        let twice = once.apply_move(&swap);
        assert!(matches!(twice, Err(Error::NegativeCell { row: 0, col: 1 })));
    }

    #[test]
    fn l1_distance_examples() {
        let a = Table::from_rows(&[vec![1, 1, 0], vec![0, 0, 2]]).unwrap();
        let b = Table::from_rows(&[vec![0, 0, 2], vec![1, 1, 0]]).unwrap();
        assert_eq!(a.l1_distance(&b).unwrap(), 8);
        assert_eq!(a.l1_distance(&a).unwrap(), 0);
    }

    #[test]
    fn shape_and_entry_validation() {
        assert!(matches!(Shape::new(0, 3), Err(Error::ZeroShape)));
        let shape = Shape::new(2, 2).unwrap();
        assert!(matches!(
            Table::new(shape, vec![1, 2, 3]),
            Err(Error::WrongEntryCount {
                expected: 4,
                found: 3
            })
        ));
        assert!(matches!(
            Table::new(shape, vec![1, -2, 3, 4]),
            Err(Error::NegativeCell { row: 0, col: 1 })
        ));
        assert!(matches!(
            SubtableMask::from_cells(shape, &[(2, 0)]),
            Err(Error::IndexOutOfRange { row: 2, col: 0, .. })
        ));
    }

    #[test]
    fn mask_complement_and_transpose() {
        let shape = Shape::new(2, 3).unwrap();
        let s = SubtableMask::from_cells(shape, &[(0, 0), (1, 2)]).unwrap();
        let c = s.complement();
        assert_eq!(c.cardinality(), 4);
        assert_eq!(c.complement(), s);
        for i in 0..2 {
            for j in 0..3 {
                assert_ne!(s.contains(i, j), c.contains(i, j));
            }
        }
        let t = s.transposed();
        assert_eq!(t.shape(), shape.transposed());
        assert!(t.contains(0, 0) && t.contains(2, 1));
        assert_eq!(t.transposed(), s);
    }

    #[test]
    fn mask_wider_than_one_word() {
        let shape = Shape::new(2, 70).unwrap();
        let s = SubtableMask::from_cells(shape, &[(0, 0), (0, 69), (1, 64)]).unwrap();
        assert_eq!(s.cardinality(), 3);
        assert!(s.contains(0, 69) && s.contains(1, 64));
        let c = s.complement();
        assert_eq!(c.cardinality(), 2 * 70 - 3);
        assert!(!c.contains(0, 69));
        assert_eq!(c.complement(), s);
    }

    #[test]
    fn marginals_validation() {
        let ok = Marginals::new(vec![2, 2], vec![1, 1, 2], 1);
        ok.validate().unwrap();
        let bad_total = Marginals::new(vec![2, 2], vec![1, 1, 1], 1);
        assert!(matches!(
            bad_total.validate(),
            Err(Error::InconsistentMarginals {
                reason: "row total and column total differ"
            })
        ));
        let bad_sub = Marginals::new(vec![2, 2], vec![1, 1, 2], 5);
        assert!(bad_sub.validate().is_err());
        let negative = Marginals::new(vec![-1, 5], vec![2, 2], 0);
        assert!(negative.validate().is_err());
    }

    #[test]
    fn configuration_matrix_times_table_gives_marginals() {
        let t = example_table();
        let mask = SubtableMask::from_cells(shape3x3(), &[(0, 0), (1, 0)]).unwrap();
        let a = configuration_matrix(shape3x3(), &mask).unwrap();
        assert_eq!(a.len(), 7);
        let product: Vec<i64> = a
            .iter()
            .map(|row| row.iter().zip(t.entries()).map(|(c, x)| c * x).sum())
            .collect();
        assert_eq!(product, marginal_vector(&t.marginals(&mask).unwrap()));
    }

    #[test]
    fn subtable_sum_splits_the_total() {
        let t = example_table();
        let mask = SubtableMask::from_cells(shape3x3(), &[(0, 1), (2, 0), (2, 2)]).unwrap();
        let s = t.subtable_sum(&mask).unwrap();
        let c = t.subtable_sum(&mask.complement()).unwrap();
        assert_eq!(s + c, t.total());
    }
}
