//! Generating the square-free degree-two moves compatible with a mask.
//!
//! A *basic move* picks two rows i < i′ and two columns j ≠ j′ and adds
//! +1 at (i, j) and (i′, j′), −1 at (i, j′) and (i′, j). Every basic move
//! preserves row and column sums; it also preserves the sum over a mask S
//! exactly when its *S-balance* `1_S(i,j) + 1_S(i′,j′) − 1_S(i,j′) − 1_S(i′,j)`
//! vanishes. [`generate_basic_moves`] keeps exactly the balanced moves, one
//! representative per ± pair, in lexicographic (i, i′, j, j′) order.

use crate::error::{Error, Result};
use crate::table::{MoveArray, Shape, SubtableMask, Table};

/// A square-free degree-two move, stored as its row pair and column pair:
/// +1 at (i, j) and (i′, j′), −1 at (i, j′) and (i′, j), with i < i′.
/// Swapping the two columns yields the negated move.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct BasicMove {
    rows: (usize, usize),
    cols: (usize, usize),
}

impl BasicMove {
    /// Creates a basic move. The row pair is normalized to i < i′ (swapping
    /// rows swaps the columns too, which leaves the move unchanged); equal
    /// rows or equal columns are rejected.
    pub fn new(rows: (usize, usize), cols: (usize, usize)) -> Result<Self> {
        if rows.0 == rows.1 || cols.0 == cols.1 {
            return Err(Error::DegenerateMove);
        }
        if rows.0 < rows.1 {
            Ok(BasicMove { rows, cols })
        } else {
            Ok(BasicMove {
                rows: (rows.1, rows.0),
                cols: (cols.1, cols.0),
            })
        }
    }

    /// The row pair (i, i′), with i < i′.
    pub fn rows(&self) -> (usize, usize) {
        self.rows
    }

    /// The column pair (j, j′). Order matters: it fixes the sign.
    pub fn cols(&self) -> (usize, usize) {
        self.cols
    }

    /// The four changed cells with their ±1 deltas, row-major.
    pub fn cells(&self) -> [((usize, usize), i64); 4] {
        let (i, i2) = self.rows;
        let (j, j2) = self.cols;
        [((i, j), 1), ((i, j2), -1), ((i2, j), -1), ((i2, j2), 1)]
    }

    /// How the move changes the sum over the masked cells. Zero means the
    /// move preserves the whole constraint.
    ///
    /// ```
    /// use subtable_sum::basis::BasicMove;
    /// use subtable_sum::table::{Shape, SubtableMask};
    /// let shape = Shape::new(3, 3).unwrap();
    /// let diag = SubtableMask::from_cells(shape, &[(0, 0), (1, 1)]).unwrap();
    /// let mv = BasicMove::new((0, 1), (0, 1)).unwrap();
    /// assert_eq!(mv.s_balance(&diag).unwrap(), 2);
    /// ```
    pub fn s_balance(&self, mask: &SubtableMask) -> Result<i64> {
        let shape = mask.shape();
        for ((r, c), _) in self.cells() {
            shape.check_cell(r, c)?;
        }
        Ok(self
            .cells()
            .iter()
            .map(|&((r, c), delta)| delta * mask.indicator(r, c))
            .sum())
    }

    /// The move materialized as a signed array of the given shape.
    pub fn as_move_array(&self, shape: Shape) -> Result<MoveArray> {
        let mut entries = vec![0; shape.cell_count()];
        for ((r, c), delta) in self.cells() {
            shape.check_cell(r, c)?;
            entries[shape.offset(r, c)] = delta;
        }
        MoveArray::new(shape, entries)
    }

    /// Whether adding `sign`·move keeps every entry nonnegative.
    pub fn feasible(&self, table: &Table, sign: i8) -> bool {
        self.cells()
            .iter()
            .all(|&((r, c), delta)| table.get(r, c) + i64::from(sign) * delta >= 0)
    }

    /// Adds `sign`·move in place. On [`Error::NegativeCell`] the table is
    /// left untouched.
    pub fn apply(&self, table: &mut Table, sign: i8) -> Result<()> {
        debug_assert!(sign == 1 || sign == -1);
        for ((r, c), delta) in self.cells() {
            let updated = table.get(r, c) + i64::from(sign) * delta;
            if updated < 0 {
                return Err(Error::NegativeCell { row: r, col: c });
            }
        }
        for ((r, c), delta) in self.cells() {
            let updated = table.get(r, c) + i64::from(sign) * delta;
            table.set(r, c, updated);
        }
        Ok(())
    }
}

/// The basic moves compatible with one mask, in lexicographic
/// (i, i′, j, j′) order with one representative per ± pair (j < j′).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MoveSet {
    shape: Shape,
    moves: Vec<BasicMove>,
}

impl MoveSet {
    /// The table shape the moves act on.
    pub fn shape(&self) -> Shape {
        self.shape
    }

    /// The moves in canonical order.
    pub fn moves(&self) -> &[BasicMove] {
        &self.moves
    }

    /// Number of moves (counting each ± pair once).
    pub fn len(&self) -> usize {
        self.moves.len()
    }

    /// Whether there are no moves at all.
    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }

    /// The moves materialized as signed arrays, in the same order.
    pub fn to_move_arrays(&self) -> Vec<MoveArray> {
        self.moves
            .iter()
            .map(|m| {
                m.as_move_array(self.shape)
                    .expect("moves fit their own shape")
            })
            .collect()
    }
}

impl<'a> IntoIterator for &'a MoveSet {
    type Item = &'a BasicMove;
    type IntoIter = std::slice::Iter<'a, BasicMove>;

    fn into_iter(self) -> Self::IntoIter {
        self.moves.iter()
    }
}

/// Filters all C(R,2)·C(C,2) candidate basic moves down to those whose
/// S-balance vanishes — the square-free degree-two moves that preserve the
/// masked constraint. Shapes with fewer than two rows or columns admit no
/// candidates and are rejected.
///
/// ```
/// use subtable_sum::basis::generate_basic_moves;
/// use subtable_sum::table::{Shape, SubtableMask};
/// let shape = Shape::new(3, 3).unwrap();
/// let diag = SubtableMask::from_cells(shape, &[(0, 0), (1, 1)]).unwrap();
/// let moves = generate_basic_moves(&diag).unwrap();
/// assert_eq!(moves.len(), 2); // only the moves avoiding both marked cells
/// ```
pub fn generate_basic_moves(mask: &SubtableMask) -> Result<MoveSet> {
    let shape = mask.shape();
    if shape.rows() < 2 || shape.cols() < 2 {
        return Err(Error::ShapeTooSmall { shape });
    }
    let mut moves = Vec::new();
    for i in 0..shape.rows() - 1 {
        for i2 in i + 1..shape.rows() {
            for j in 0..shape.cols() - 1 {
                for j2 in j + 1..shape.cols() {
                    let mv = BasicMove {
                        rows: (i, i2),
                        cols: (j, j2),
                    };
                    if mv.s_balance(mask)? == 0 {
                        moves.push(mv);
                    }
                }
            }
        }
    }
    Ok(MoveSet { shape, moves })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mask3x3(cells: &[(usize, usize)]) -> SubtableMask {
        SubtableMask::from_cells(Shape::new(3, 3).unwrap(), cells).unwrap()
    }

    /// Independent filter of the 9 candidates, written directly against the
    /// indicator arithmetic rather than through BasicMove.
    fn brute_force_survivors(mask: &SubtableMask) -> Vec<((usize, usize), (usize, usize))> {
        let mut out = Vec::new();
        for i in 0..2 {
            for i2 in i + 1..3 {
                for j in 0..2 {
                    for j2 in j + 1..3 {
                        let balance = mask.indicator(i, j) + mask.indicator(i2, j2)
                            - mask.indicator(i, j2)
                            - mask.indicator(i2, j);
                        if balance == 0 {
                            out.push(((i, i2), (j, j2)));
                        }
                    }
                }
            }
        }
        out
    }

    #[test]
    fn s_balance_examples() {
        let diag = mask3x3(&[(0, 0), (1, 1)]);
        let top_left = BasicMove::new((0, 1), (0, 1)).unwrap();
        assert_eq!(top_left.s_balance(&diag).unwrap(), 2);
        let avoids_both = BasicMove::new((0, 2), (1, 2)).unwrap();
        assert_eq!(avoids_both.s_balance(&diag).unwrap(), 0);

        let column_pair = mask3x3(&[(0, 0), (1, 0)]);
        // The marked cells sit in one column and both rows of the move, so
        // the +1 and -1 hits cancel.
        assert_eq!(top_left.s_balance(&column_pair).unwrap(), 0);
    }

    #[test]
    fn empty_mask_keeps_all_nine_candidates() {
        let empty = SubtableMask::empty(Shape::new(3, 3).unwrap());
        let moves = generate_basic_moves(&empty).unwrap();
        assert_eq!(moves.len(), 9);
        let brute = brute_force_survivors(&empty);
        assert_eq!(moves.len(), brute.len());
    }

    #[test]
    fn column_pair_mask_keeps_five_moves() {
        // Survivors: both column pairs through column 0 on rows (0,1), plus
        // all three moves that avoid column 0 entirely.
        let s = mask3x3(&[(0, 0), (1, 0)]);
        let moves = generate_basic_moves(&s).unwrap();
        let got: Vec<_> = moves.moves().iter().map(|m| (m.rows(), m.cols())).collect();
        assert_eq!(got, brute_force_survivors(&s));
        assert_eq!(
            got,
            vec![
                ((0, 1), (0, 1)),
                ((0, 1), (0, 2)),
                ((0, 1), (1, 2)),
                ((0, 2), (1, 2)),
                ((1, 2), (1, 2)),
            ]
        );
    }

    #[test]
    fn diagonal_pair_mask_keeps_two_moves() {
        let s = mask3x3(&[(0, 0), (1, 1)]);
        let moves = generate_basic_moves(&s).unwrap();
        let got: Vec<_> = moves.moves().iter().map(|m| (m.rows(), m.cols())).collect();
        assert_eq!(got, brute_force_survivors(&s));
        assert_eq!(got, vec![((0, 2), (1, 2)), ((1, 2), (0, 2))]);
    }

    #[test]
    fn survivors_plus_rejections_cover_all_candidates() {
        for cells in [
            &[(0, 0)][..],
            &[(0, 0), (1, 0)],
            &[(0, 0), (1, 1)],
            &[(0, 1), (1, 2), (2, 0)],
            &[(0, 0), (0, 1), (1, 1), (2, 2)],
        ] {
            let s = mask3x3(cells);
            let moves = generate_basic_moves(&s).unwrap();
            assert_eq!(moves.len(), brute_force_survivors(&s).len());
            // C(3,2)^2 candidates in total.
            assert!(moves.len() <= 9);
        }
    }

    #[test]
    fn every_generated_move_is_a_move() {
        for cells in [&[(0, 0), (1, 0)][..], &[(0, 0), (1, 1)], &[(1, 1)]] {
            let s = mask3x3(cells);
            let moves = generate_basic_moves(&s).unwrap();
            assert!(!moves.is_empty());
            for array in moves.to_move_arrays() {
                assert!(array.is_move_for(&s).unwrap());
                assert_eq!(array.l1_norm(), 4);
            }
        }
    }

    #[test]
    fn a_mask_can_reject_every_candidate() {
        // The three cells of a permutation pattern unbalance all nine
        // candidates, leaving no degree-two move at all.
        let s = mask3x3(&[(0, 1), (1, 2), (2, 0)]);
        assert!(generate_basic_moves(&s).unwrap().is_empty());
    }

    #[test]
    fn mask_and_complement_share_the_same_moves() {
        for cells in [&[(0, 0), (1, 0)][..], &[(0, 0), (1, 1)], &[(2, 2)]] {
            let s = mask3x3(cells);
            let a = generate_basic_moves(&s).unwrap();
            let b = generate_basic_moves(&s.complement()).unwrap();
            assert_eq!(a.moves(), b.moves());
        }
    }

    #[test]
    fn full_rows_mask_keeps_everything() {
        // A mask made of whole rows meets every move evenly.
        let s = mask3x3(&[(0, 0), (0, 1), (0, 2), (2, 0), (2, 1), (2, 2)]);
        assert_eq!(generate_basic_moves(&s).unwrap().len(), 9);
    }

    #[test]
    fn row_normalization_and_degeneracy() {
        let mv = BasicMove::new((2, 0), (1, 2)).unwrap();
        assert_eq!(mv.rows(), (0, 2));
        assert_eq!(mv.cols(), (2, 1));
        assert!(matches!(
            BasicMove::new((1, 1), (0, 2)),
            Err(Error::DegenerateMove)
        ));
        assert!(matches!(
            BasicMove::new((0, 1), (2, 2)),
            Err(Error::DegenerateMove)
        ));
    }

    #[test]
    fn apply_and_feasibility() {
        let mut t = Table::from_rows(&[vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, 0]]).unwrap();
        let mv = BasicMove::new((0, 1), (0, 1)).unwrap();
        assert!(mv.feasible(&t, 1));
        assert!(!mv.feasible(&t, -1));
        mv.apply(&mut t, 1).unwrap();
        assert_eq!(
            t.to_rows(),
            vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 0]]
        );
        // Infeasible application leaves the table untouched.
        let before = t.clone();
        assert!(mv.apply(&mut t, 1).is_err());
        assert_eq!(t, before);
    }

    #[test]
    fn too_small_shapes_are_rejected() {
        let thin = SubtableMask::empty(Shape::new(1, 4).unwrap());
        assert!(matches!(
            generate_basic_moves(&thin),
            Err(Error::ShapeTooSmall { .. })
        ));
    }
}
