//! Problem files, CSV tables, and the JSON shapes of results.
//!
//! Everything user-facing is **1-based**: a problem file names the
//! top-left cell `[1, 1]`, and every index in emitted JSON is shifted the
//! same way. The library itself is 0-based throughout; this module is the
//! only place the two conventions meet.
//!
//! A problem file is JSON:
//!
//! ```json
//! {
//!   "rows": 3,
//!   "cols": 3,
//!   "table": [[7, 5, 1], [5, 10, 6], [2, 6, 8]],
//!   "subtable": [[1, 1], [2, 1]]
//! }
//! ```
//!
//! `table` is optional; `subtable` lists the masked cells. Tables also
//! travel alone as CSV: one row per line, comma-separated nonnegative
//! integers.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::basis::{BasicMove, MoveSet};
use crate::connector::{PathStep, Side};
use crate::error::{Error, Result};
use crate::fiber::{DisconnectionCertificate, Fiber, FiberGraph, VerifyReport};
use crate::pattern::{Classification, Host, Orientation, PatternWitness};
use crate::table::{Marginals, Shape, SubtableMask, Table};

/// The raw problem file, indices 1-based as on disk.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ProblemFile {
    /// Number of table rows.
    pub rows: usize,
    /// Number of table columns.
    pub cols: usize,
    /// Optional observed table, row-major.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<Vec<Vec<i64>>>,
    /// Masked cells as 1-based `[row, col]` pairs.
    pub subtable: Vec<(usize, usize)>,
}

/// A validated problem: shape, optional table, and mask, all 0-based.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Problem {
    /// The table shape.
    pub shape: Shape,
    /// The observed table, when the file carried one.
    pub table: Option<Table>,
    /// The subtable mask.
    pub mask: SubtableMask,
}

/// Parses and validates a JSON problem file.
pub fn parse_problem(json: &str) -> Result<Problem> {
    let file: ProblemFile =
        serde_json::from_str(json).map_err(|e| Error::Malformed(format!("problem file: {e}")))?;
    problem_from_file(&file)
}

/// Validates an already-deserialized problem file.
pub fn problem_from_file(file: &ProblemFile) -> Result<Problem> {
    let shape = Shape::new(file.rows, file.cols)?;
    let table = file.table.as_deref().map(Table::from_rows).transpose()?;
    if let Some(t) = &table {
        if t.shape() != shape {
            return Err(Error::ShapeMismatch {
                expected: shape,
                found: t.shape(),
            });
        }
    }
    let mut seen = HashSet::new();
    let mut cells = Vec::with_capacity(file.subtable.len());
    for &(i, j) in &file.subtable {
        if i == 0 || j == 0 {
            return Err(Error::Malformed(format!(
                "subtable cell [{i}, {j}]: indices are 1-based"
            )));
        }
        if i > shape.rows() || j > shape.cols() {
            return Err(Error::Malformed(format!(
                "subtable cell [{i}, {j}] is outside the {shape} table"
            )));
        }
        if !seen.insert((i, j)) {
            return Err(Error::Malformed(format!(
                "duplicate subtable cell [{i}, {j}]"
            )));
        }
        cells.push((i - 1, j - 1));
    }
    let mask = SubtableMask::from_cells(shape, &cells)?;
    Ok(Problem { shape, table, mask })
}

/// Parses a CSV table: one row per line, comma-separated nonnegative
/// integers, blank lines ignored.
pub fn parse_table_csv(text: &str) -> Result<Table> {
    let mut rows = Vec::new();
    for (index, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let row = line
            .split(',')
            .map(|field| {
                field.trim().parse::<i64>().map_err(|_| {
                    Error::Malformed(format!(
                        "line {}: {:?} is not an integer",
                        index + 1,
                        field.trim()
                    ))
                })
            })
            .collect::<Result<Vec<i64>>>()?;
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::Malformed("the CSV table has no rows".into()));
    }
    Table::from_rows(&rows)
}

/// Renders a table as CSV, the inverse of [`parse_table_csv`].
pub fn table_to_csv(table: &Table) -> String {
    table.to_string()
}

fn one_based(indices: &[usize]) -> Vec<usize> {
    indices.iter().map(|&i| i + 1).collect()
}

/// Marginals as they appear in emitted JSON.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct MarginalsOut {
    /// Row sums, top to bottom.
    pub row_sums: Vec<i64>,
    /// Column sums, left to right.
    pub col_sums: Vec<i64>,
    /// The fixed sum over the masked cells.
    pub subtable_sum: i64,
}

impl From<&Marginals> for MarginalsOut {
    fn from(m: &Marginals) -> Self {
        MarginalsOut {
            row_sums: m.row_sums.clone(),
            col_sums: m.col_sums.clone(),
            subtable_sum: m.subtable_sum,
        }
    }
}

impl MarginalsOut {
    /// Back to the library type.
    pub fn to_marginals(&self) -> Marginals {
        Marginals::new(
            self.row_sums.clone(),
            self.col_sums.clone(),
            self.subtable_sum,
        )
    }
}

/// A pattern witness in emitted JSON: window indices 1-based, orientation
/// `"2x3"`/`"3x2"`, host `"subtable"`/`"complement"`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct WitnessOut {
    /// `"2x3"` or `"3x2"`.
    pub orientation: String,
    /// `"subtable"` or `"complement"`.
    pub host: String,
    /// Window rows, 1-based ascending.
    pub rows: Vec<usize>,
    /// Window columns, 1-based ascending.
    pub cols: Vec<usize>,
}

impl From<&PatternWitness> for WitnessOut {
    fn from(w: &PatternWitness) -> Self {
        WitnessOut {
            orientation: match w.orientation {
                Orientation::TwoByThree => "2x3".into(),
                Orientation::ThreeByTwo => "3x2".into(),
            },
            host: match w.host {
                Host::Subtable => "subtable".into(),
                Host::Complement => "complement".into(),
            },
            rows: one_based(&w.rows),
            cols: one_based(&w.cols),
        }
    }
}

/// The `classify` result: the verdict plus whichever structure proves it.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ClassifyOut {
    /// `"Triangular"`, `"BlockDiagonal"`, or `"Neither"`.
    pub verdict: String,
    /// For `"Triangular"`: rows in slice-shrinking order, 1-based.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub row_order: Option<Vec<usize>>,
    /// For `"BlockDiagonal"`: the two row groups, 1-based.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub row_classes: Option<[Vec<usize>; 2]>,
    /// For `"BlockDiagonal"`: the two column groups, 1-based.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub col_classes: Option<[Vec<usize>; 2]>,
    /// For `"Neither"`: the forbidden window.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessOut>,
}

impl From<&Classification> for ClassifyOut {
    fn from(c: &Classification) -> Self {
        let mut out = ClassifyOut {
            verdict: c.verdict_name().into(),
            row_order: None,
            row_classes: None,
            col_classes: None,
            witness: None,
        };
        match c {
            Classification::Triangular { row_order } => {
                out.row_order = Some(one_based(row_order));
            }
            Classification::BlockDiagonal {
                row_classes,
                col_classes,
            } => {
                out.row_classes = Some([one_based(&row_classes[0]), one_based(&row_classes[1])]);
                out.col_classes = Some([one_based(&col_classes[0]), one_based(&col_classes[1])]);
            }
            Classification::Neither { witness } => {
                out.witness = Some(witness.into());
            }
        }
        out
    }
}

/// One basic move in emitted JSON, 1-based.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct MoveOut {
    /// The two row indices, ascending.
    pub rows: [usize; 2],
    /// The two column indices (positive cells sit at `(rows[0], cols[0])`
    /// and `(rows[1], cols[1])`).
    pub cols: [usize; 2],
}

impl From<&BasicMove> for MoveOut {
    fn from(mv: &BasicMove) -> Self {
        let (i, i2) = mv.rows();
        let (j, j2) = mv.cols();
        MoveOut {
            rows: [i + 1, i2 + 1],
            cols: [j + 1, j2 + 1],
        }
    }
}

impl MoveOut {
    /// Back to the library type; fails on 0 indices or equal rows.
    pub fn to_move(&self) -> Result<BasicMove> {
        if self.rows.contains(&0) || self.cols.contains(&0) {
            return Err(Error::Malformed("move indices are 1-based".into()));
        }
        BasicMove::new(
            (self.rows[0] - 1, self.rows[1] - 1),
            (self.cols[0] - 1, self.cols[1] - 1),
        )
    }
}

/// The `basis` result: every balanced move, in generation order.
pub fn basis_out(moves: &MoveSet) -> Vec<MoveOut> {
    moves.moves().iter().map(MoveOut::from).collect()
}

/// The `fiber` result.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct FiberOut {
    /// The shared marginals.
    pub marginals: MarginalsOut,
    /// Number of elements.
    pub size: usize,
    /// Every element as rows of entries, lexicographic order.
    pub elements: Vec<Vec<Vec<i64>>>,
}

impl From<&Fiber> for FiberOut {
    fn from(fiber: &Fiber) -> Self {
        FiberOut {
            marginals: fiber.marginals().into(),
            size: fiber.len(),
            elements: fiber.elements().iter().map(Table::to_rows).collect(),
        }
    }
}

/// The `witness` result: a concrete fiber the balanced moves leave
/// disconnected, with its component structure.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct WitnessReportOut {
    /// Marginals of the witness fiber.
    pub marginals: MarginalsOut,
    /// Number of elements.
    pub fiber_size: usize,
    /// Number of connected components under the balanced moves.
    pub component_count: usize,
    /// The elements, lexicographic order.
    pub elements: Vec<Vec<Vec<i64>>>,
    /// Component label of each element, labels in order of first
    /// appearance.
    pub component_of: Vec<usize>,
}

impl WitnessReportOut {
    /// Bundles a witness fiber with its component structure.
    pub fn new(marginals: &Marginals, fiber: &Fiber, graph: &FiberGraph) -> Self {
        WitnessReportOut {
            marginals: marginals.into(),
            fiber_size: fiber.len(),
            component_count: graph.component_count(),
            elements: fiber.elements().iter().map(Table::to_rows).collect(),
            component_of: graph.component_of().to_vec(),
        }
    }
}

/// One disconnected fiber inside a `verify` report.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct DisconnectedOut {
    /// The fiber's marginals.
    pub marginals: MarginalsOut,
    /// Its number of elements.
    pub fiber_size: usize,
    /// Its number of components.
    pub component_count: usize,
}

/// The `verify` result.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct VerifyOut {
    /// Number of marginal triples enumerated.
    pub checked_marginals: u64,
    /// Whether every fiber was connected.
    pub all_connected: bool,
    /// The disconnected fibers, if any.
    pub disconnected: Vec<DisconnectedOut>,
}

impl From<&VerifyReport> for VerifyOut {
    fn from(report: &VerifyReport) -> Self {
        VerifyOut {
            checked_marginals: report.checked_marginals,
            all_connected: report.all_connected(),
            disconnected: report
                .disconnected
                .iter()
                .map(|d| DisconnectedOut {
                    marginals: (&d.marginals).into(),
                    fiber_size: d.fiber_size,
                    component_count: d.component_count,
                })
                .collect(),
        }
    }
}

/// One two-sided step in a `connect` result.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct StepOut {
    /// `"X"` or `"Y"`.
    pub side: String,
    /// The move's rows, 1-based.
    pub rows: [usize; 2],
    /// The move's columns, 1-based.
    pub cols: [usize; 2],
    /// +1 or −1.
    pub sign: i8,
}

impl From<&PathStep> for StepOut {
    fn from(step: &PathStep) -> Self {
        let mv = MoveOut::from(&step.mv);
        StepOut {
            side: match step.side {
                Side::X => "X".into(),
                Side::Y => "Y".into(),
            },
            rows: mv.rows,
            cols: mv.cols,
            sign: step.sign,
        }
    }
}

/// One move of the flattened X→Y path.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct PathMoveOut {
    /// The move's rows, 1-based.
    pub rows: [usize; 2],
    /// The move's columns, 1-based.
    pub cols: [usize; 2],
    /// +1 or −1.
    pub sign: i8,
}

/// A disconnection certificate in emitted JSON.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct CertificateOut {
    /// Marginals of the split fiber.
    pub marginals: MarginalsOut,
    /// Its total number of elements.
    pub fiber_size: usize,
    /// Its number of components.
    pub component_count: usize,
    /// How many elements the start can reach.
    pub reachable_from_start: usize,
    /// One unreachable element, as rows of entries.
    pub unreachable_example: Vec<Vec<i64>>,
}

impl From<&DisconnectionCertificate> for CertificateOut {
    fn from(cert: &DisconnectionCertificate) -> Self {
        CertificateOut {
            marginals: (&cert.marginals).into(),
            fiber_size: cert.fiber_size,
            component_count: cert.component_count,
            reachable_from_start: cert.reachable_from_start,
            unreachable_example: cert.unreachable_example.to_rows(),
        }
    }
}

/// The `connect` result: either a path or a certificate that none exists.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ConnectOut {
    /// Whether a path was found.
    pub connected: bool,
    /// The two-sided steps as discovered, connected case only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub steps: Option<Vec<StepOut>>,
    /// The flattened X→Y walk, connected case only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<Vec<PathMoveOut>>,
    /// The disconnection proof, disconnected case only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<CertificateOut>,
}

impl ConnectOut {
    /// A successful connection: the raw steps plus the flattened path.
    pub fn connected(steps: &[PathStep], path: &[(BasicMove, i8)]) -> Self {
        ConnectOut {
            connected: true,
            steps: Some(steps.iter().map(StepOut::from).collect()),
            path: Some(
                path.iter()
                    .map(|&(mv, sign)| {
                        let out = MoveOut::from(&mv);
                        PathMoveOut {
                            rows: out.rows,
                            cols: out.cols,
                            sign,
                        }
                    })
                    .collect(),
            ),
            certificate: None,
        }
    }

    /// A certified disconnection.
    pub fn disconnected(cert: &DisconnectionCertificate) -> Self {
        ConnectOut {
            connected: false,
            steps: None,
            path: None,
            certificate: Some(cert.into()),
        }
    }
}
