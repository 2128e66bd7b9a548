//! Trigger grid: rows of gestures against columns of time steps, optionally
//! evolved by an elementary cellular automaton.
//!
//! The automaton state is one column (one bit per row) and time advances one
//! column per update. Row neighbourhoods wrap around.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::algebra::{AlgebraError, Gesture, Placement, Timeline};

#[derive(Debug, Clone, PartialEq)]
pub enum GridError {
    RuleOutOfRange(u32),
    ZeroColumns,
    ZeroStep,
    NoRows,
    ShapeMismatch,
    UnknownGesture(String),
    Timeline(AlgebraError),
}

impl fmt::Display for GridError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GridError::RuleOutOfRange(r) => write!(f, "rule {r} outside 0..=255"),
            GridError::ZeroColumns => write!(f, "grid needs at least one column"),
            GridError::ZeroStep => write!(f, "column step must be at least one sample"),
            GridError::NoRows => write!(f, "grid needs at least one row"),
            GridError::ShapeMismatch => write!(f, "cell matrix does not match rows x columns"),
            GridError::UnknownGesture(id) => write!(f, "unknown gesture '{id}'"),
            GridError::Timeline(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for GridError {}

impl From<AlgebraError> for GridError {
    fn from(e: AlgebraError) -> Self {
        GridError::Timeline(e)
    }
}

/// Wolfram code of an elementary automaton.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CaRule(u8);

impl CaRule {
    pub fn new(rule_number: u32) -> Result<Self, GridError> {
        u8::try_from(rule_number)
            .map(CaRule)
            .map_err(|_| GridError::RuleOutOfRange(rule_number))
    }

    pub fn number(self) -> u8 {
        self.0
    }

    /// Next state for the neighbourhood `(left, centre, right)`.
    pub fn apply(self, left: bool, centre: bool, right: bool) -> bool {
        let idx = (left as u8) << 2 | (centre as u8) << 1 | right as u8;
        self.0 >> idx & 1 == 1
    }
}

pub fn ca_step(column: &[bool], rule: CaRule) -> Vec<bool> {
    let n = column.len();
    (0..n)
        .map(|r| {
            let left = column[(r + n - 1) % n];
            let right = column[(r + 1) % n];
            rule.apply(left, column[r], right)
        })
        .collect()
}

/// `n_cols` columns with `initial` first; returned as `cells[row][col]`.
pub fn ca_evolve(
    initial: &[bool],
    rule: CaRule,
    n_cols: usize,
) -> Result<Vec<Vec<bool>>, GridError> {
    if n_cols == 0 {
        return Err(GridError::ZeroColumns);
    }
    let mut cells: Vec<Vec<bool>> = initial
        .iter()
        .map(|&b| {
            let mut row = Vec::with_capacity(n_cols);
            row.push(b);
            row
        })
        .collect();
    let mut column = initial.to_vec();
    for _ in 1..n_cols {
        column = ca_step(&column, rule);
        for (row, &b) in cells.iter_mut().zip(&column) {
            row.push(b);
        }
    }
    Ok(cells)
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    row_gestures: Vec<String>,
    n_cols: usize,
    step: usize,
    cells: Vec<Vec<bool>>,
}

impl GridSpec {
    pub fn new(
        row_gestures: Vec<String>,
        n_cols: usize,
        step: usize,
        cells: Vec<Vec<bool>>,
    ) -> Result<Self, GridError> {
        if row_gestures.is_empty() {
            return Err(GridError::NoRows);
        }
        if n_cols == 0 {
            return Err(GridError::ZeroColumns);
        }
        if step == 0 {
            return Err(GridError::ZeroStep);
        }
        if cells.len() != row_gestures.len() || cells.iter().any(|r| r.len() != n_cols) {
            return Err(GridError::ShapeMismatch);
        }
        Ok(GridSpec {
            row_gestures,
            n_cols,
            step,
            cells,
        })
    }

    pub fn row_gestures(&self) -> &[String] {
        &self.row_gestures
    }

    pub fn rows(&self) -> usize {
        self.row_gestures.len()
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn step(&self) -> usize {
        self.step
    }

    pub fn cells(&self) -> &[Vec<bool>] {
        &self.cells
    }

    pub fn active_cells(&self) -> usize {
        self.cells.iter().flatten().filter(|&&b| b).count()
    }
}

/// One placement per true cell at `col * step`. Gestures longer than a
/// step are cut at the cell boundary.
pub fn grid_to_timeline(
    g: &GridSpec,
    gestures: &BTreeMap<String, Gesture>,
) -> Result<Timeline, GridError> {
    let resolved: Vec<&Gesture> = g
        .row_gestures
        .iter()
        .map(|id| {
            gestures
                .get(id)
                .ok_or_else(|| GridError::UnknownGesture(id.clone()))
        })
        .collect::<Result<_, _>>()?;
    let mut timeline = Timeline::new(resolved[0].rate_hz(), g.n_cols * g.step);
    for gesture in &resolved {
        timeline.add_gesture(gesture.truncated(g.step))?;
    }
    timeline.ensure_rows(g.rows());
    for (row, (cells, id)) in g.cells.iter().zip(&g.row_gestures).enumerate() {
        for (col, _) in cells.iter().enumerate().filter(|(_, &on)| on) {
            timeline.place(Placement {
                gesture_id: id.clone(),
                row,
                start: col * g.step,
            })?;
        }
    }
    Ok(timeline)
}
