//! The raw data matrix: `m` observations of `n` real-valued variables.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Which axis of the source table holds the variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    VariablesAsColumns,
    VariablesAsRows,
}

impl Orientation {
    pub fn flipped(self) -> Self {
        match self {
            Orientation::VariablesAsColumns => Orientation::VariablesAsRows,
            Orientation::VariablesAsRows => Orientation::VariablesAsColumns,
        }
    }
}

/// Observations are rows, variables are columns. Values are stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DataMatrix {
    values: Vec<f64>,
    rows: usize,
    cols: usize,
    row_labels: Vec<String>,
    col_labels: Vec<String>,
    orientation: Orientation,
}

impl DataMatrix {
    /// Builds a matrix from row-major values, rejecting non-finite entries and
    /// duplicate labels.
    pub fn new(values: Vec<f64>, row_labels: Vec<String>, col_labels: Vec<String>) -> Result<Self> {
        let rows = row_labels.len();
        let cols = col_labels.len();
        if rows == 0 || cols == 0 {
            return Err(Error::Shape(format!("empty matrix ({rows}×{cols})")));
        }
        if values.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{} values do not fill a {rows}×{cols} grid",
                values.len()
            )));
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Value { row: pos / cols + 1, col: pos % cols + 1 });
        }
        check_unique(&row_labels)?;
        check_unique(&col_labels)?;
        Ok(DataMatrix {
            values,
            rows,
            cols,
            row_labels,
            col_labels,
            orientation: Orientation::VariablesAsColumns,
        })
    }

    /// Builds a matrix with generated labels `o1..om` and `X1..Xn`.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Shape(String::from("ragged rows")));
        }
        let values = rows.iter().flatten().copied().collect();
        let row_labels = (1..=rows.len()).map(|i| format!("o{i}")).collect();
        let col_labels = (1..=cols).map(|j| format!("X{j}")).collect();
        DataMatrix::new(values, row_labels, col_labels)
    }

    pub fn with_orientation(mut self, orientation: Orientation) -> Self {
        self.orientation = orientation;
        self
    }

    /// Number of observations `m`.
    pub fn rows(&self) -> usize {
        self.rows
    }

    /// Number of variables `n`.
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.cols + col]
    }

    pub fn row(&self, row: usize) -> &[f64] {
        &self.values[row * self.cols..(row + 1) * self.cols]
    }

    pub fn column(&self, col: usize) -> impl Iterator<Item = f64> + '_ {
        self.values.iter().skip(col).step_by(self.cols).copied()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn row_labels(&self) -> &[String] {
        &self.row_labels
    }

    pub fn col_labels(&self) -> &[String] {
        &self.col_labels
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    /// Swaps observations and variables.
    pub fn transpose(&self) -> DataMatrix {
        let mut values = Vec::with_capacity(self.values.len());
        for j in 0..self.cols {
            values.extend(self.column(j));
        }
        DataMatrix {
            values,
            rows: self.cols,
            cols: self.rows,
            row_labels: self.col_labels.clone(),
            col_labels: self.row_labels.clone(),
            orientation: self.orientation.flipped(),
        }
    }

    /// Submatrix with the given observation and variable indices, in the order given.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Result<DataMatrix> {
        check_indices(rows, self.rows, "row")?;
        check_indices(cols, self.cols, "column")?;
        let mut values = Vec::with_capacity(rows.len() * cols.len());
        for &r in rows {
            let row = self.row(r);
            values.extend(cols.iter().map(|&c| row[c]));
        }
        let row_labels = rows.iter().map(|&r| self.row_labels[r].clone()).collect();
        let col_labels = cols.iter().map(|&c| self.col_labels[c].clone()).collect();
        Ok(DataMatrix::new(values, row_labels, col_labels)?.with_orientation(self.orientation))
    }
}

fn check_unique(labels: &[String]) -> Result<()> {
    let mut seen = BTreeSet::new();
    for l in labels {
        if !seen.insert(l.as_str()) {
            return Err(Error::Label(l.clone()));
        }
    }
    Ok(())
}

fn check_indices(indices: &[usize], bound: usize, axis: &str) -> Result<()> {
    if indices.is_empty() {
        return Err(Error::Index(format!("empty {axis} selection")));
    }
    let mut seen = BTreeSet::new();
    for &i in indices {
        if i >= bound {
            return Err(Error::Index(format!("{axis} index {i} out of range 0..{bound}")));
        }
        if !seen.insert(i) {
            return Err(Error::Index(format!("duplicate {axis} index {i}")));
        }
    }
    Ok(())
}
