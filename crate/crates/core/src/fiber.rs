//! Enumerating fibers and checking how moves connect them.
//!
//! The *fiber* of a marginal vector is the finite set of nonnegative
//! integer tables realizing it: fixed row sums, column sums, and subtable
//! sum. [`enumerate_fiber`] lists a fiber by backtracking over the cells in
//! row-major order; [`components`] computes the connectivity a move set
//! induces on the fiber; [`construct_witness`] builds, for any mask the
//! degree-two moves do not suffice for, a concrete small fiber those moves
//! leave disconnected; and [`verify_bounded`] exhausts every marginal
//! vector up to a grand-total bound, reporting all disconnected fibers.

use std::fmt;

use crate::basis::MoveSet;
use crate::error::{Error, Result};
use crate::pattern::{classify, Classification, Orientation};
use crate::table::{Marginals, MoveArray, Shape, SubtableMask, Table};

/// Ceiling on the number of marginal triples [`verify_bounded`] will
/// enumerate before refusing with [`Error::WorkBoundExceeded`].
pub const VERIFY_WORK_BOUND: u64 = 20_000_000;

/// A fully enumerated fiber: the marginals, the mask, and every table
/// realizing them, in lexicographic (row-major entry) order.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Fiber {
    marginals: Marginals,
    mask: SubtableMask,
    elements: Vec<Table>,
}

impl Fiber {
    /// The marginal vector every element realizes.
    pub fn marginals(&self) -> &Marginals {
        &self.marginals
    }

    /// The mask defining the subtable sum.
    pub fn mask(&self) -> &SubtableMask {
        &self.mask
    }

    /// The elements in lexicographic order.
    pub fn elements(&self) -> &[Table] {
        &self.elements
    }

    /// Number of elements.
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    /// Whether the fiber is empty (the marginals are unrealizable).
    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Where a table sits in the element list, if it belongs to the fiber.
    pub fn position(&self, table: &Table) -> Option<usize> {
        self.elements
            .binary_search_by(|e| e.entries().cmp(table.entries()))
            .ok()
    }
}

/// Backtracking enumeration of all tables with the given row and column
/// sums, optionally constrained to a subtable sum, in lexicographic order.
struct Enumerator<'a> {
    shape: Shape,
    mask: Option<&'a SubtableMask>,
    row_rem: Vec<i64>,
    col_rem: Vec<i64>,
    s_rem: i64,
    entries: Vec<i64>,
    out: Vec<Table>,
    cap: usize,
    truncated: bool,
}

impl<'a> Enumerator<'a> {
    fn run(
        shape: Shape,
        marginals: &Marginals,
        mask: Option<&'a SubtableMask>,
        cap: usize,
    ) -> (Vec<Table>, bool) {
        let mut e = Enumerator {
            shape,
            mask,
            row_rem: marginals.row_sums.clone(),
            col_rem: marginals.col_sums.clone(),
            s_rem: if mask.is_some() {
                marginals.subtable_sum
            } else {
                0
            },
            entries: vec![0; shape.cell_count()],
            out: Vec::new(),
            cap,
            truncated: false,
        };
        e.recurse(0);
        (e.out, e.truncated)
    }

    fn recurse(&mut self, k: usize) {
        if self.truncated {
            return;
        }
        if k == self.shape.cell_count() {
            if self.mask.is_none() || self.s_rem == 0 {
                if self.out.len() == self.cap {
                    self.truncated = true;
                    return;
                }
                self.out.push(
                    Table::new(self.shape, self.entries.clone())
                        .expect("enumerated entries are nonnegative"),
                );
            }
            return;
        }
        let cols = self.shape.cols();
        let (r, c) = (k / cols, k % cols);

        // The last cell of a row must absorb the row remainder; the last
        // row must absorb each column remainder.
        let mut lo = 0;
        let mut hi = self.row_rem[r].min(self.col_rem[c]);
        if c == cols - 1 {
            lo = lo.max(self.row_rem[r]);
            hi = hi.min(self.row_rem[r]);
        }
        if r == self.shape.rows() - 1 {
            lo = lo.max(self.col_rem[c]);
            hi = hi.min(self.col_rem[c]);
        }
        let in_mask = self.mask.is_some_and(|m| m.contains(r, c));
        if in_mask {
            hi = hi.min(self.s_rem);
        }

        let mut v = lo;
        while v <= hi {
            self.entries[k] = v;
            self.row_rem[r] -= v;
            self.col_rem[c] -= v;
            if in_mask {
                self.s_rem -= v;
            }
            if self.still_feasible(r, c) {
                self.recurse(k + 1);
            }
            if in_mask {
                self.s_rem += v;
            }
            self.row_rem[r] += v;
            self.col_rem[c] += v;
            self.entries[k] = 0;
            v += 1;
        }
    }

    /// Prunes branches where the current row can no longer be filled or the
    /// remaining subtable sum is outside what the open cells can achieve.
    /// Column capacities are shared across rows, so the subtable bounds are
    /// conservative (never cutting a feasible branch).
    fn still_feasible(&self, r: usize, c: usize) -> bool {
        let cols = self.shape.cols();
        let open_row_capacity: i64 = self.col_rem[c + 1..cols]
            .iter()
            .map(|&cr| cr.min(self.row_rem[r]))
            .sum();
        if open_row_capacity < self.row_rem[r] {
            return false;
        }
        let Some(mask) = self.mask else {
            return true;
        };
        let mut s_max = 0;
        let mut s_min = 0;
        for i in r..self.shape.rows() {
            let start = if i == r { c + 1 } else { 0 };
            let mut masked_capacity = 0;
            let mut unmasked_capacity = 0;
            for j in start..cols {
                if mask.contains(i, j) {
                    masked_capacity += self.col_rem[j];
                } else {
                    unmasked_capacity += self.col_rem[j];
                }
            }
            s_max += self.row_rem[i].min(masked_capacity);
            s_min += (self.row_rem[i] - unmasked_capacity).max(0);
        }
        s_min <= self.s_rem && self.s_rem <= s_max
    }
}

/// Enumerates the fiber of a marginal vector under a mask.
///
/// The marginals must validate and match the mask's shape. An empty fiber
/// (unrealizable marginals) is a normal result, not an error.
///
/// ```
/// use subtable_sum::fiber::enumerate_fiber;
/// use subtable_sum::table::{Marginals, Shape, SubtableMask};
/// let shape = Shape::new(2, 3).unwrap();
/// let mask = SubtableMask::from_cells(shape, &[(0, 0), (1, 1)]).unwrap();
/// let marginals = Marginals::new(vec![2, 2], vec![1, 1, 2], 1);
/// let fiber = enumerate_fiber(&marginals, &mask).unwrap();
/// assert_eq!(fiber.len(), 2);
/// ```
pub fn enumerate_fiber(marginals: &Marginals, mask: &SubtableMask) -> Result<Fiber> {
    marginals.validate()?;
    let shape = marginals.shape()?;
    if shape != mask.shape() {
        return Err(Error::ShapeMismatch {
            expected: shape,
            found: mask.shape(),
        });
    }
    let (elements, truncated) = Enumerator::run(shape, marginals, Some(mask), usize::MAX);
    debug_assert!(!truncated);
    Ok(Fiber {
        marginals: marginals.clone(),
        mask: mask.clone(),
        elements,
    })
}

/// Enumerates at most `cap` fiber elements, reporting whether the fiber
/// was cut short. Used by bounded fallbacks that must not run away.
pub(crate) fn enumerate_fiber_capped(
    marginals: &Marginals,
    mask: &SubtableMask,
    cap: usize,
) -> Result<(Fiber, bool)> {
    marginals.validate()?;
    let shape = marginals.shape()?;
    if shape != mask.shape() {
        return Err(Error::ShapeMismatch {
            expected: shape,
            found: mask.shape(),
        });
    }
    let (elements, truncated) = Enumerator::run(shape, marginals, Some(mask), cap);
    Ok((
        Fiber {
            marginals: marginals.clone(),
            mask: mask.clone(),
            elements,
        },
        truncated,
    ))
}

/// How a move set connects a fiber: the undirected graph whose edges join
/// elements differing by ± one move, reduced to its connected components.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FiberGraph {
    component_of: Vec<usize>,
    component_count: usize,
    edges: Vec<(usize, usize)>,
}

impl FiberGraph {
    /// Component label (0-based, in order of first appearance) per element.
    pub fn component_of(&self) -> &[usize] {
        &self.component_of
    }

    /// Number of connected components. An empty fiber has zero.
    pub fn component_count(&self) -> usize {
        self.component_count
    }

    /// The edges as element index pairs (u < v), sorted.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Whether the whole fiber is one component (true for sizes 0 and 1).
    pub fn is_connected(&self) -> bool {
        self.component_count <= 1
    }

    /// Element counts per component label.
    pub fn component_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.component_count];
        for &c in &self.component_of {
            sizes[c] += 1;
        }
        sizes
    }
}

/// Minimal disjoint-set forest for the component computation.
struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
    }
}

/// Computes the components of a fiber under arbitrary move arrays (they
/// need not be degree-two; arrays that leave the fiber contribute nothing).
pub fn components(fiber: &Fiber, moves: &[MoveArray]) -> FiberGraph {
    components_of_elements(fiber.elements(), moves)
}

/// The same computation over a plain sorted element slice.
fn components_of_elements(elements: &[Table], moves: &[MoveArray]) -> FiberGraph {
    let n = elements.len();
    let mut uf = UnionFind::new(n);
    let mut edges = Vec::new();
    for (u, element) in elements.iter().enumerate() {
        for mv in moves {
            for signed in [mv.clone(), mv.negated()] {
                let Ok(neighbor) = element.apply_move(&signed) else {
                    continue;
                };
                let Ok(v) = elements.binary_search_by(|e| e.entries().cmp(neighbor.entries()))
                else {
                    continue;
                };
                if v != u {
                    uf.union(u, v);
                    edges.push((u.min(v), u.max(v)));
                }
            }
        }
    }
    edges.sort_unstable();
    edges.dedup();

    // Normalize component labels to 0..k in order of first appearance.
    let mut label_of_root = vec![usize::MAX; n];
    let mut component_of = vec![0; n];
    let mut component_count = 0;
    for (u, label) in component_of.iter_mut().enumerate() {
        let root = uf.find(u);
        if label_of_root[root] == usize::MAX {
            label_of_root[root] = component_count;
            component_count += 1;
        }
        *label = label_of_root[root];
    }
    FiberGraph {
        component_of,
        component_count,
        edges,
    }
}

/// Proof that a fiber stays disconnected under a move set: the fiber data
/// plus one element unreachable from the start.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DisconnectionCertificate {
    /// The marginals of the disconnected fiber.
    pub marginals: Marginals,
    /// Total number of fiber elements.
    pub fiber_size: usize,
    /// Number of connected components.
    pub component_count: usize,
    /// Elements reachable from the start table.
    pub reachable_from_start: usize,
    /// One element no move sequence can reach from the start.
    pub unreachable_example: Table,
}

impl fmt::Display for DisconnectionCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "fiber of {} elements splits into {} components; {} reachable from the start",
            self.fiber_size, self.component_count, self.reachable_from_start
        )
    }
}

/// For a mask the degree-two moves do not suffice for, builds the marginal
/// vector of a concrete two-element fiber they leave disconnected; returns
/// `None` when they do suffice.
///
/// The construction embeds, on the witness window's rows and columns, row
/// sums 2 and 2, column sums 1 on the two marked columns and 2 on the
/// unmarked one (transposed for 3×2 windows), zero everywhere else, with
/// subtable sum 1 — or total−1 = 3 when the witness lives in the
/// complement. All mass is confined to the window, so the fiber has exactly
/// two elements, and their difference has L1 norm 8: no single degree-two
/// move (norm 4) joins them.
pub fn construct_witness(mask: &SubtableMask) -> Result<Option<(Marginals, Fiber)>> {
    let witness = match classify(mask)? {
        Classification::Neither { witness } => witness,
        _ => return Ok(None),
    };
    let shape = mask.shape();
    let mut row_sums = vec![0; shape.rows()];
    let mut col_sums = vec![0; shape.cols()];
    let members = witness.member_cells(mask);
    debug_assert_eq!(members.len(), 2);

    match witness.orientation {
        Orientation::TwoByThree => {
            for &r in &witness.rows {
                row_sums[r] = 2;
            }
            for &(_, c) in &members {
                col_sums[c] = 1;
            }
            for &c in &witness.cols {
                if !members.iter().any(|&(_, mc)| mc == c) {
                    col_sums[c] = 2;
                }
            }
        }
        Orientation::ThreeByTwo => {
            for &c in &witness.cols {
                col_sums[c] = 2;
            }
            for &(r, _) in &members {
                row_sums[r] = 1;
            }
            for &r in &witness.rows {
                if !members.iter().any(|&(mr, _)| mr == r) {
                    row_sums[r] = 2;
                }
            }
        }
    }
    let subtable_sum = match witness.host {
        crate::pattern::Host::Subtable => 1,
        crate::pattern::Host::Complement => 3,
    };
    let marginals = Marginals::new(row_sums, col_sums, subtable_sum);
    let fiber = enumerate_fiber(&marginals, mask)?;
    Ok(Some((marginals, fiber)))
}

/// One disconnected fiber found by [`verify_bounded`].
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DisconnectedFiber {
    /// The marginal vector of the fiber.
    pub marginals: Marginals,
    /// Its number of elements.
    pub fiber_size: usize,
    /// Its number of components under the checked moves.
    pub component_count: usize,
}

/// The outcome of [`verify_bounded`].
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct VerifyReport {
    /// Number of (row sums, column sums, subtable sum) triples examined.
    pub checked_marginals: u64,
    /// Every fiber of two or more elements the moves leave disconnected.
    pub disconnected: Vec<DisconnectedFiber>,
}

impl VerifyReport {
    /// Whether the moves connected every enumerated fiber.
    pub fn all_connected(&self) -> bool {
        self.disconnected.is_empty()
    }
}

/// Checks the move set against *every* fiber with grand total at most
/// `max_total`: iterates all row-sum and column-sum compositions and all
/// subtable sums, enumerates each fiber, and records the disconnected ones.
/// An empty report is finite-range evidence of the Markov basis property;
/// any entry refutes it outright.
///
/// Work is estimated up front and refused beyond [`VERIFY_WORK_BOUND`].
pub fn verify_bounded(
    mask: &SubtableMask,
    moves: &MoveSet,
    max_total: i64,
) -> Result<VerifyReport> {
    let shape = mask.shape();
    if moves.shape() != shape {
        return Err(Error::ShapeMismatch {
            expected: shape,
            found: moves.shape(),
        });
    }
    if max_total < 0 {
        return Err(Error::InvalidConfig("max_total must be nonnegative"));
    }
    let estimated = estimate_work(shape, max_total);
    if estimated > VERIFY_WORK_BOUND {
        return Err(Error::WorkBoundExceeded {
            estimated,
            bound: VERIFY_WORK_BOUND,
        });
    }

    let arrays = moves.to_move_arrays();
    let mut report = VerifyReport::default();
    for total in 0..=max_total {
        for row_sums in compositions(total, shape.rows()) {
            for col_sums in compositions(total, shape.cols()) {
                report.checked_marginals += (total + 1) as u64;
                // One unconstrained enumeration covers every subtable sum:
                // bucket the tables by their sum over the mask.
                let unconstrained = Marginals::new(row_sums.clone(), col_sums.clone(), 0);
                let (tables, _) = Enumerator::run(shape, &unconstrained, None, usize::MAX);
                let mut by_sum: std::collections::BTreeMap<i64, Vec<Table>> =
                    std::collections::BTreeMap::new();
                for t in tables {
                    let s = t.subtable_sum(mask).expect("shapes match");
                    by_sum.entry(s).or_default().push(t);
                }
                for (s, elements) in by_sum {
                    if elements.len() < 2 {
                        continue;
                    }
                    let graph = components_of_elements(&elements, &arrays);
                    if !graph.is_connected() {
                        report.disconnected.push(DisconnectedFiber {
                            marginals: Marginals::new(row_sums.clone(), col_sums.clone(), s),
                            fiber_size: elements.len(),
                            component_count: graph.component_count(),
                        });
                    }
                }
            }
        }
    }
    Ok(report)
}

/// Number of marginal triples `verify_bounded` would enumerate, saturating
/// on overflow.
fn estimate_work(shape: Shape, max_total: i64) -> u64 {
    let mut work: u64 = 0;
    for total in 0..=max_total {
        let rows = composition_count(total, shape.rows());
        let cols = composition_count(total, shape.cols());
        work = work.saturating_add(rows.saturating_mul(cols).saturating_mul(total as u64 + 1));
    }
    work
}

/// C(total + parts − 1, parts − 1), saturating.
fn composition_count(total: i64, parts: usize) -> u64 {
    let n = total as u64 + parts as u64 - 1;
    let k = (parts - 1) as u64;
    let mut result: u64 = 1;
    for i in 0..k {
        result = result.saturating_mul(n - i) / (i + 1);
    }
    result
}

/// All ways to write `total` as an ordered sum of `parts` nonnegative
/// integers, in lexicographic order.
fn compositions(total: i64, parts: usize) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut current = vec![0; parts];
    fn rec(out: &mut Vec<Vec<i64>>, current: &mut Vec<i64>, k: usize, remaining: i64) {
        if k == current.len() - 1 {
            current[k] = remaining;
            out.push(current.clone());
            return;
        }
        for v in 0..=remaining {
            current[k] = v;
            rec(out, current, k + 1, remaining - v);
        }
    }
    rec(&mut out, &mut current, 0, total);
    out
}
