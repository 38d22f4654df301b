//! Time grids on (0, T]. The origin is never a node: kernels and solutions
//! may be singular there.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    horizon: f64,
    cells: usize,
    grading: Option<f64>,
    nodes: Vec<f64>,
}

impl Grid {
    /// Uniform grid `t_i = i T / N`, `i = 1..=N`.
    pub fn uniform(horizon: f64, cells: usize) -> Result<Self> {
        check_horizon(horizon, cells)?;
        let n = cells as f64;
        let mut nodes: Vec<f64> = (1..=cells).map(|i| i as f64 * horizon / n).collect();
        nodes[cells - 1] = horizon;
        Ok(Grid {
            horizon,
            cells,
            grading: Some(1.0),
            nodes,
        })
    }

    /// Graded grid `t_i = T (i/N)^γ`, clustering nodes near the origin.
    /// `γ = 1` returns exactly the uniform grid.
    pub fn graded(horizon: f64, cells: usize, grading: f64) -> Result<Self> {
        if !(grading >= 1.0) || !grading.is_finite() {
            return Err(Error::out_of_range("grading exponent", grading, "[1, inf)"));
        }
        if grading == 1.0 {
            return Self::uniform(horizon, cells);
        }
        check_horizon(horizon, cells)?;
        let n = cells as f64;
        let mut nodes: Vec<f64> = (1..=cells)
            .map(|i| horizon * (i as f64 / n).powf(grading))
            .collect();
        nodes[cells - 1] = horizon;
        Ok(Grid {
            horizon,
            cells,
            grading: Some(grading),
            nodes,
        })
    }

    /// Rebuilds a grid from explicit nodes, recognising uniform spacing.
    pub fn from_nodes(nodes: &[f64]) -> Result<Self> {
        if nodes.len() < 2 {
            return Err(Error::invalid("a grid needs at least two nodes"));
        }
        if !(nodes[0] > 0.0) {
            return Err(Error::invalid("grid nodes must be positive"));
        }
        if nodes.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::invalid("grid nodes must be strictly increasing"));
        }
        let horizon = nodes[nodes.len() - 1];
        let uniform = Self::uniform(horizon, nodes.len())?;
        let matches = uniform
            .nodes
            .iter()
            .zip(nodes)
            .all(|(a, b)| (a - b).abs() <= 1e-10 * horizon);
        if matches {
            return Ok(uniform);
        }
        Ok(Grid {
            horizon,
            cells: nodes.len(),
            grading: None,
            nodes: nodes.to_vec(),
        })
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn len(&self) -> usize {
        self.cells
    }

    pub fn is_empty(&self) -> bool {
        self.cells == 0
    }

    /// Grading exponent; `None` for grids built from arbitrary nodes.
    pub fn grading(&self) -> Option<f64> {
        self.grading
    }

    pub fn is_uniform(&self) -> bool {
        self.grading == Some(1.0)
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn node(&self, i: usize) -> f64 {
        self.nodes[i]
    }

    /// Cell width of a uniform grid.
    pub fn step(&self) -> f64 {
        self.horizon / self.cells as f64
    }

    /// Left end of cell `i` (0-based); the first cell starts at the origin.
    pub fn cell_start(&self, i: usize) -> f64 {
        if i == 0 {
            0.0
        } else {
            self.nodes[i - 1]
        }
    }

    pub fn require_uniform(&self, context: &str) -> Result<f64> {
        if self.is_uniform() {
            Ok(self.step())
        } else {
            Err(Error::Unsupported(format!("{context} requires a uniform grid")))
        }
    }

    pub fn same_as(&self, other: &Grid) -> bool {
        self.cells == other.cells && self.nodes == other.nodes
    }
}

fn check_horizon(horizon: f64, cells: usize) -> Result<()> {
    if !(horizon > 0.0) || !horizon.is_finite() {
        return Err(Error::out_of_range("time horizon", horizon, "(0, inf)"));
    }
    if cells < 2 {
        return Err(Error::out_of_range("cell count", cells as f64, "[2, inf)"));
    }
    Ok(())
}
