//! Discretized gradient-perspective functionals on regular 1-D and 2-D grids:
//!
//! ```text
//! f(x) = h^d Σ_cells φ̃(xᵢ, ∇xᵢ)   if every xᵢ ≥ 0,   +inf otherwise
//! ```
//!
//! with forward differences (backward on the last cell of each axis). Fisher
//! information uses `φ = ‖·‖²` and total variation uses `φ = ‖·‖`.

use crate::catalog::{make_norm, make_norm_power};
use crate::error::{Error, Result};
use crate::extreal::{ext_sum, ExtReal};
use crate::function::ConvexFunction;
use crate::io::Table;
use crate::perspective::Perspective;

/// Grid layout: `M` cells on a line, or `rows × cols` cells stored row-major.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shape {
    Line(usize),
    Plane { rows: usize, cols: usize },
}

impl Shape {
    /// Number of axes `d`.
    pub fn ndim(&self) -> usize {
        match self {
            Shape::Line(_) => 1,
            Shape::Plane { .. } => 2,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Shape::Line(m) => *m,
            Shape::Plane { rows, cols } => rows * cols,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Samples `x(tᵢ)` on a regular grid with spacing `h`.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    values: Vec<f64>,
    shape: Shape,
    h: f64,
}

impl Grid {
    pub fn new(values: Vec<f64>, shape: Shape, h: f64) -> Result<Self> {
        if h <= 0.0 || !h.is_finite() {
            return Err(Error::BadGrid(format!(
                "spacing h = {h} must be positive and finite"
            )));
        }
        let too_small = match shape {
            Shape::Line(m) => m < 2,
            Shape::Plane { rows, cols } => rows < 2 || cols < 2,
        };
        if too_small {
            return Err(Error::BadGrid(format!(
                "{shape:?} needs at least 2 cells per axis"
            )));
        }
        if values.len() != shape.len() {
            return Err(Error::BadGrid(format!(
                "{} values do not fill a {shape:?} grid",
                values.len()
            )));
        }
        if let Some((i, v)) = values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::BadGrid(format!(
                "cell {i} holds non-finite value {v}"
            )));
        }
        Ok(Grid { values, shape, h })
    }

    pub fn line(values: Vec<f64>, h: f64) -> Result<Self> {
        let m = values.len();
        Grid::new(values, Shape::Line(m), h)
    }

    pub fn plane(rows: Vec<Vec<f64>>, h: f64) -> Result<Self> {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != n_cols) {
            return Err(Error::BadGrid("rows have different lengths".into()));
        }
        Grid::new(
            rows.into_iter().flatten().collect(),
            Shape::Plane {
                rows: n_rows,
                cols: n_cols,
            },
            h,
        )
    }

    /// A single-column table is a line; anything wider is a plane.
    pub fn from_table(table: Table, h: f64) -> Result<Self> {
        if table.n_cols() == 1 {
            Grid::line(table.rows.into_iter().map(|r| r[0]).collect(), h)
        } else if table.n_rows() == 1 {
            Grid::line(table.rows.into_iter().next().unwrap(), h)
        } else {
            Grid::plane(table.rows, h)
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn spacing(&self) -> f64 {
        self.h
    }

    /// Cell volume `h^d`.
    pub fn cell_volume(&self) -> f64 {
        match self.shape {
            Shape::Line(_) => self.h,
            Shape::Plane { .. } => self.h * self.h,
        }
    }

    /// The grid with every value replaced by `f(value)`.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Grid> {
        Grid::new(
            self.values.iter().map(|v| f(*v)).collect(),
            self.shape,
            self.h,
        )
    }
}

/// One-sided difference along an axis of length `m` at position `i`, where
/// `at(j)` reads the value at position `j` on that axis.
fn axis_difference(m: usize, i: usize, h: f64, at: impl Fn(usize) -> f64) -> f64 {
    if i + 1 < m {
        (at(i + 1) - at(i)) / h
    } else {
        (at(i) - at(i - 1)) / h
    }
}

/// Discrete gradient of every cell, in storage order.
pub fn gradient_forward(g: &Grid) -> Vec<Vec<f64>> {
    let v = &g.values;
    match g.shape {
        Shape::Line(m) => (0..m)
            .map(|i| vec![axis_difference(m, i, g.h, |j| v[j])])
            .collect(),
        Shape::Plane { rows, cols } => {
            let mut out = Vec::with_capacity(rows * cols);
            for i in 0..rows {
                for j in 0..cols {
                    out.push(vec![
                        axis_difference(rows, i, g.h, |k| v[k * cols + j]),
                        axis_difference(cols, j, g.h, |k| v[i * cols + k]),
                    ]);
                }
            }
            out
        }
    }
}

/// `h^d Σ φ̃(xᵢ, ∇xᵢ)`, or `+inf` if some cell is negative.
pub fn gradient_perspective_functional(phi: &ConvexFunction, g: &Grid) -> Result<ExtReal> {
    phi.check_dim(g.shape.ndim())?;
    if g.values.iter().any(|v| *v < 0.0) {
        return Ok(ExtReal::PosInf);
    }
    let p = Perspective::new(phi.clone());
    let grads = gradient_forward(g);
    let mut terms = Vec::with_capacity(grads.len());
    for (x, grad) in g.values.iter().zip(&grads) {
        let t = p.value(*x, grad)?;
        if t.is_pos_inf() {
            return Ok(ExtReal::PosInf);
        }
        terms.push(t);
    }
    Ok(match ext_sum(terms)? {
        ExtReal::Finite(s) => ExtReal::from_f64(g.cell_volume() * s),
        other => other,
    })
}

/// Discrete Fisher information `h^d Σ ‖∇xᵢ‖²/xᵢ`, with the convention that a
/// zero cell contributes 0 if its gradient vanishes and `+inf` otherwise.
pub fn fisher_information(g: &Grid) -> Result<ExtReal> {
    gradient_perspective_functional(&make_norm_power(g.shape.ndim(), 2.0, 1.0)?, g)
}

/// Discrete total variation `h^d Σ ‖∇xᵢ‖` of a nonnegative grid.
pub fn total_variation(g: &Grid) -> Result<ExtReal> {
    gradient_perspective_functional(&make_norm(g.shape.ndim())?, g)
}
