//! Matrix-valued functions sampled on a grid, and the `B δ(t) + F(t)` form.

use serde::{Deserialize, Serialize};

use crate::analysis::CertReport;
use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::kernels::KernelSpec;
use crate::linalg::{asymmetry, max_abs, Matrix, SymMatrix};

/// One square matrix per grid node, plus the finite limit at the origin when
/// it exists.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledMatrixFunction {
    grid: Grid,
    values: Vec<Matrix>,
    value_at_zero: Option<Matrix>,
    certificate: Option<CertReport>,
}

impl SampledMatrixFunction {
    pub fn new(grid: Grid, values: Vec<Matrix>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::invalid(format!(
                "{} values for a grid of {} nodes",
                values.len(),
                grid.len()
            )));
        }
        let m = values[0].nrows();
        if values.iter().any(|v| v.nrows() != m || v.ncols() != m) {
            return Err(Error::invalid("all values must be square matrices of one rank"));
        }
        Ok(SampledMatrixFunction {
            grid,
            values,
            value_at_zero: None,
            certificate: None,
        })
    }

    /// Samples `f` at every node.
    pub fn from_fn(grid: Grid, mut f: impl FnMut(f64) -> Result<Matrix>) -> Result<Self> {
        let values = grid.nodes().iter().map(|&t| f(t)).collect::<Result<Vec<_>>>()?;
        Self::new(grid, values)
    }

    /// The constant function `c` on `grid`.
    pub fn constant(grid: Grid, c: &Matrix) -> Self {
        let values = vec![c.clone(); grid.len()];
        SampledMatrixFunction {
            grid,
            values,
            value_at_zero: Some(c.clone()),
            certificate: None,
        }
    }

    pub fn with_value_at_zero(mut self, v: Matrix) -> Result<Self> {
        if v.nrows() != self.rank() || v.ncols() != self.rank() {
            return Err(Error::invalid("value at zero has the wrong rank"));
        }
        self.value_at_zero = Some(v);
        Ok(self)
    }

    pub(crate) fn with_certificate(mut self, report: CertReport) -> Self {
        self.certificate = Some(report);
        self
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[Matrix] {
        &self.values
    }

    pub fn value(&self, i: usize) -> &Matrix {
        &self.values[i]
    }

    pub fn value_at_zero(&self) -> Option<&Matrix> {
        self.value_at_zero.as_ref()
    }

    /// Certification attached by the solver that produced this function.
    pub fn certificate(&self) -> Option<&CertReport> {
        self.certificate.as_ref()
    }

    pub fn rank(&self) -> usize {
        self.values[0].nrows()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Piecewise-linear interpolation between nodes. On the first cell the
    /// value at zero is used as left anchor when known, otherwise the first
    /// node value is held constant.
    pub fn eval(&self, t: f64) -> Result<Matrix> {
        let horizon = self.grid.horizon();
        if !(t > 0.0) || t > horizon * (1.0 + 1e-14) {
            return Err(Error::out_of_range("t", t, format!("(0, {horizon}]")));
        }
        let nodes = self.grid.nodes();
        let i = nodes.partition_point(|&x| x < t).min(nodes.len() - 1);
        if nodes[i] == t {
            return Ok(self.values[i].clone());
        }
        let (t0, v0) = if i == 0 {
            match &self.value_at_zero {
                Some(v) => (0.0, v),
                None => return Ok(self.values[0].clone()),
            }
        } else {
            (nodes[i - 1], &self.values[i - 1])
        };
        let w = (t - t0) / (nodes[i] - t0);
        Ok(v0 * (1.0 - w) + &self.values[i] * w)
    }

    /// Largest asymmetry over all nodes.
    pub fn asymmetry(&self) -> f64 {
        self.values.iter().map(asymmetry).fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(max_abs).fold(0.0, f64::max)
    }

    /// Scalar trace `vᵀ F(t_i) v` at every node.
    pub fn quad_trace(&self, v: &[f64]) -> Vec<f64> {
        self.values.iter().map(|m| crate::linalg::quad_form(m, v)).collect()
    }
}

/// Regular part `F` of `B δ(t) + F(t)`.
// one per solution, so the size gap between variants costs nothing
#[allow(clippy::large_enum_variant)]
#[derive(Debug, Clone, PartialEq)]
pub enum Regular {
    Sampled(SampledMatrixFunction),
    Kernel(KernelSpec),
}

impl Regular {
    pub fn rank(&self) -> usize {
        match self {
            Regular::Sampled(s) => s.rank(),
            Regular::Kernel(k) => k.rank(),
        }
    }
}

/// `X(t) = B δ(t) + F(t)` with a positive semidefinite atom `B`.
#[derive(Debug, Clone, PartialEq)]
pub struct DeltaPlusFunction {
    atom: SymMatrix,
    regular: Regular,
}

impl DeltaPlusFunction {
    pub fn new(atom: SymMatrix, regular: Regular) -> Result<Self> {
        if atom.rank() != regular.rank() {
            return Err(Error::invalid(format!(
                "atom rank {} does not match regular part rank {}",
                atom.rank(),
                regular.rank()
            )));
        }
        let floor = -1e-12 * atom.max_abs().max(1.0);
        if !atom.is_finite() || atom.min_eigenvalue() < floor {
            return Err(Error::invalid("atom must be symmetric positive semidefinite"));
        }
        Ok(DeltaPlusFunction { atom, regular })
    }

    pub fn atom(&self) -> &SymMatrix {
        &self.atom
    }

    pub fn regular(&self) -> &Regular {
        &self.regular
    }

    pub fn rank(&self) -> usize {
        self.atom.rank()
    }

    pub fn sampled(&self) -> Option<&SampledMatrixFunction> {
        match &self.regular {
            Regular::Sampled(s) => Some(s),
            Regular::Kernel(_) => None,
        }
    }
}

/// Serialized sidecar form of an atom: `{"atom": [[...]]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AtomRecord {
    pub atom: SymMatrix,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ramp() -> SampledMatrixFunction {
        let grid = Grid::uniform(1.0, 4).unwrap();
        SampledMatrixFunction::from_fn(grid, |t| Ok(Matrix::from_element(1, 1, t))).unwrap()
    }

    #[test]
    fn eval_at_nodes_and_midpoints() {
        let f = ramp();
        assert_eq!(f.eval(0.5).unwrap()[(0, 0)], 0.5);
        assert!((f.eval(0.625).unwrap()[(0, 0)] - 0.625).abs() < 1e-15);
        // no value at zero: first cell is constant
        assert_eq!(f.eval(0.1).unwrap()[(0, 0)], 0.25);
        let f = f.with_value_at_zero(Matrix::zeros(1, 1)).unwrap();
        assert!((f.eval(0.1).unwrap()[(0, 0)] - 0.1).abs() < 1e-15);
    }

    #[test]
    fn eval_out_of_range() {
        let f = ramp();
        assert!(matches!(f.eval(1.5), Err(Error::OutOfRange { .. })));
        assert!(matches!(f.eval(0.0), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn length_mismatch_rejected() {
        let grid = Grid::uniform(1.0, 4).unwrap();
        assert!(SampledMatrixFunction::new(grid, vec![Matrix::zeros(1, 1); 3]).is_err());
    }

    #[test]
    fn atom_must_be_psd() {
        let reg = Regular::Kernel(KernelSpec::Constant { value: 1.0 });
        assert!(DeltaPlusFunction::new(SymMatrix::scalar(-1.0), reg.clone()).is_err());
        assert!(DeltaPlusFunction::new(SymMatrix::scalar(0.0), reg.clone()).is_ok());
        assert!(DeltaPlusFunction::new(SymMatrix::identity(2), reg).is_err());
    }
}
