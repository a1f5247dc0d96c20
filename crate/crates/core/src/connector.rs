//! Finding explicit move paths between two tables of the same fiber.
//!
//! The driving question is whether the balanced degree-two moves connect
//! every fiber, and the operational form of "connect" is norm reduction:
//! given X and Y with equal marginals, find a short sequence of feasible
//! moves — some applied to X, some to Y — after which the two sides are
//! strictly closer in L1 distance. Repeating until the sides meet yields a
//! full path. When the mask admits no reduction the fiber may genuinely be
//! disconnected; a bounded exhaustive fallback settles which.
//!
//! [`reduction_sequence`] performs one reduction round by iterative
//! deepening; [`connect`] drives rounds to completion and owns the
//! fallback; [`assemble_path`] flattens the two-sided steps into a single
//! X→Y walk.

use std::collections::HashMap;

use crate::basis::{BasicMove, MoveSet};
use crate::error::{Error, Result};
use crate::fiber::{components, enumerate_fiber_capped, DisconnectionCertificate};
use crate::table::SubtableMask;
use crate::table::Table;

/// Which endpoint a step moves.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Side {
    /// The step is applied to the X endpoint.
    X,
    /// The step is applied to the Y endpoint.
    Y,
}

/// One feasible move applied to one side during a reduction.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct PathStep {
    /// The endpoint the step moves.
    pub side: Side,
    /// The basic move applied.
    pub mv: BasicMove,
    /// +1 or −1.
    pub sign: i8,
}

/// Search bounds for [`reduction_sequence`] and [`connect`].
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct ConnectorConfig {
    /// Longest step sequence one reduction round may use.
    pub max_sequence_depth: usize,
    /// Largest fiber the exhaustive fallback is willing to enumerate.
    pub bfs_fallback_limit: usize,
}

impl Default for ConnectorConfig {
    fn default() -> Self {
        ConnectorConfig {
            max_sequence_depth: 6,
            bfs_fallback_limit: 10_000,
        }
    }
}

impl ConnectorConfig {
    fn validate(&self) -> Result<()> {
        if self.max_sequence_depth == 0 {
            return Err(Error::InvalidConfig("max_sequence_depth must be positive"));
        }
        if self.bfs_fallback_limit == 0 {
            return Err(Error::InvalidConfig("bfs_fallback_limit must be positive"));
        }
        Ok(())
    }
}

/// The depth-bounded search for one reduction round.
///
/// Candidate steps are ordered by (side, move index, sign with + first),
/// and any X-side step must precede every Y-side step: steps on opposite
/// sides commute, so each feasible interleaving has an equivalent
/// side-sorted form, which is also the lexicographically smallest. The
/// result is therefore the lex-least among the shortest reducing
/// sequences. Failed (X, Y, sides-locked) states are memoized with the
/// budget that failed, so deeper iterations skip re-proven dead ends.
struct Search<'a> {
    moves: &'a [BasicMove],
    start_norm: i64,
    steps: Vec<PathStep>,
    failed: HashMap<(Vec<i64>, Vec<i64>, bool), usize>,
}

impl Search<'_> {
    fn dfs(&mut self, x: &mut Table, y: &mut Table, remaining: usize, y_started: bool) -> bool {
        let norm = x.l1_distance(y).expect("sides share a shape");
        // Each step changes the distance by at most 4, and a strict
        // decrease means dropping by at least 2 (the distance of two
        // tables with equal marginals is even).
        if norm - self.start_norm + 2 > 4 * remaining as i64 {
            return false;
        }
        let key = (x.entries().to_vec(), y.entries().to_vec(), y_started);
        if self.failed.get(&key).is_some_and(|&r| r >= remaining) {
            return false;
        }
        for side in [Side::X, Side::Y] {
            if side == Side::X && y_started {
                continue;
            }
            for (index, mv) in self.moves.iter().enumerate() {
                for sign in [1i8, -1] {
                    let target = match side {
                        Side::X => &mut *x,
                        Side::Y => &mut *y,
                    };
                    if !mv.feasible(target, sign) {
                        continue;
                    }
                    mv.apply(target, sign).expect("feasibility checked");
                    self.steps.push(PathStep {
                        side,
                        mv: self.moves[index],
                        sign,
                    });
                    let done = x.l1_distance(y).expect("sides share a shape") < self.start_norm
                        || (remaining > 1 && self.dfs(x, y, remaining - 1, side == Side::Y));
                    if done {
                        return true;
                    }
                    self.steps.pop();
                    let target = match side {
                        Side::X => &mut *x,
                        Side::Y => &mut *y,
                    };
                    mv.apply(target, -sign).expect("undo of a feasible step");
                }
            }
        }
        let entry = self.failed.entry(key).or_insert(0);
        *entry = (*entry).max(remaining);
        false
    }
}

/// Finds a shortest feasible step sequence strictly reducing the L1
/// distance between `x` and `y`, both of which must lie in the fiber of
/// the same marginals under `mask`.
///
/// Steps tagged [`Side::X`] apply to `x`, steps tagged [`Side::Y`] to
/// `y`; every prefix keeps its side nonnegative. Ties among shortest
/// sequences break to the lexicographically smallest (side, move index,
/// sign with + first).
pub fn reduction_sequence(
    x: &Table,
    y: &Table,
    mask: &SubtableMask,
    moves: &MoveSet,
    config: &ConnectorConfig,
) -> Result<Vec<PathStep>> {
    config.validate()?;
    check_same_fiber(x, y, mask, moves)?;
    if x == y {
        return Err(Error::SameTable);
    }
    let mut search = Search {
        moves: moves.moves(),
        start_norm: x.l1_distance(y)?,
        steps: Vec::new(),
        failed: HashMap::new(),
    };
    let mut x = x.clone();
    let mut y = y.clone();
    for depth in 1..=config.max_sequence_depth {
        if search.dfs(&mut x, &mut y, depth, false) {
            return Ok(search.steps);
        }
    }
    Err(Error::NoReductionFound {
        depth: config.max_sequence_depth,
    })
}

/// Connects `x` to `y` by repeated norm reduction, returning the combined
/// steps of all rounds (see [`assemble_path`] for the flattened X→Y walk).
///
/// Identical inputs give an empty path. If a round finds no reduction and
/// the fiber fits under the fallback limit, the fiber is enumerated and
/// searched outright: either a one-sided path exists after all (deeper
/// than the round bound) or the fiber is provably split and
/// [`Error::Disconnected`] carries the certificate. A fiber too large to
/// enumerate leaves connectivity undecided:
/// [`Error::NotConnectedAtDepth`].
pub fn connect(
    x: &Table,
    y: &Table,
    mask: &SubtableMask,
    moves: &MoveSet,
    config: &ConnectorConfig,
) -> Result<Vec<PathStep>> {
    config.validate()?;
    check_same_fiber(x, y, mask, moves)?;
    let mut current_x = x.clone();
    let mut current_y = y.clone();
    let mut path = Vec::new();
    while current_x != current_y {
        match reduction_sequence(&current_x, &current_y, mask, moves, config) {
            Ok(steps) => {
                for step in &steps {
                    let target = match step.side {
                        Side::X => &mut current_x,
                        Side::Y => &mut current_y,
                    };
                    step.mv.apply(target, step.sign)?;
                }
                path.extend(steps);
            }
            Err(Error::NoReductionFound { depth }) => {
                return bfs_fallback(x, y, &current_x, &current_y, mask, moves, depth, config).map(
                    |suffix| {
                        path.extend(suffix);
                        path
                    },
                );
            }
            Err(other) => return Err(other),
        }
    }
    Ok(path)
}

/// Exhaustive completion once iterative deepening gives up: enumerate the
/// fiber (bounded), breadth-first search from the current X point, and
/// either finish the path or certify the split.
#[allow(clippy::too_many_arguments)]
fn bfs_fallback(
    x: &Table,
    y: &Table,
    current_x: &Table,
    current_y: &Table,
    mask: &SubtableMask,
    moves: &MoveSet,
    depth: usize,
    config: &ConnectorConfig,
) -> Result<Vec<PathStep>> {
    let marginals = x.marginals(mask)?;
    let (fiber, truncated) = enumerate_fiber_capped(&marginals, mask, config.bfs_fallback_limit)?;
    if truncated {
        return Err(Error::NotConnectedAtDepth {
            depth,
            limit: config.bfs_fallback_limit,
        });
    }
    let start = fiber
        .position(current_x)
        .expect("current X stays in the fiber");
    let goal = fiber
        .position(current_y)
        .expect("current Y stays in the fiber");

    // Breadth-first over the fiber graph, remembering the arriving step.
    let n = fiber.len();
    let mut prev: Vec<Option<(usize, BasicMove, i8)>> = vec![None; n];
    let mut seen = vec![false; n];
    let mut queue = std::collections::VecDeque::from([start]);
    seen[start] = true;
    while let Some(u) = queue.pop_front() {
        if u == goal {
            break;
        }
        for mv in moves.moves() {
            for sign in [1i8, -1] {
                let mut neighbor = fiber.elements()[u].clone();
                if mv.apply(&mut neighbor, sign).is_err() {
                    continue;
                }
                let Some(v) = fiber.position(&neighbor) else {
                    continue;
                };
                if !seen[v] {
                    seen[v] = true;
                    prev[v] = Some((u, *mv, sign));
                    queue.push_back(v);
                }
            }
        }
    }
    if !seen[goal] {
        let graph = components(&fiber, &moves.to_move_arrays());
        return Err(Error::Disconnected(Box::new(DisconnectionCertificate {
            marginals,
            fiber_size: fiber.len(),
            component_count: graph.component_count(),
            reachable_from_start: seen.iter().filter(|&&s| s).count(),
            unreachable_example: y.clone(),
        })));
    }
    let mut suffix = Vec::new();
    let mut v = goal;
    while v != start {
        let (u, mv, sign) = prev[v].expect("every reached node has a parent");
        suffix.push(PathStep {
            side: Side::X,
            mv,
            sign,
        });
        v = u;
    }
    suffix.reverse();
    Ok(suffix)
}

/// Flattens a two-sided step list into a single walk from X to Y: the
/// X-side steps in order, then the Y-side steps reversed with signs
/// flipped. Applied in order to X via [`BasicMove::apply`], the result is
/// a feasible path ending exactly at Y.
pub fn assemble_path(steps: &[PathStep]) -> Vec<(BasicMove, i8)> {
    let forward = steps
        .iter()
        .filter(|s| s.side == Side::X)
        .map(|s| (s.mv, s.sign));
    let backward = steps
        .iter()
        .rev()
        .filter(|s| s.side == Side::Y)
        .map(|s| (s.mv, -s.sign));
    forward.chain(backward).collect()
}

/// Replays an assembled path from `start`, checking feasibility at every
/// step, and returns the endpoint.
pub fn apply_path(start: &Table, path: &[(BasicMove, i8)]) -> Result<Table> {
    let mut current = start.clone();
    for &(mv, sign) in path {
        mv.apply(&mut current, sign)?;
    }
    Ok(current)
}

fn check_same_fiber(x: &Table, y: &Table, mask: &SubtableMask, moves: &MoveSet) -> Result<()> {
    if x.shape() != moves.shape() {
        return Err(Error::ShapeMismatch {
            expected: moves.shape(),
            found: x.shape(),
        });
    }
    if x.marginals(mask)? != y.marginals(mask)? {
        return Err(Error::DifferentFiber);
    }
    Ok(())
}
