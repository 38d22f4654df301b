//! Product integration: `(A∗X)(t_n) ≈ Σ_{j=1}^n μ_{n−j} X_j` with exact kernel
//! moments `μ_k = ∫_{kh}^{(k+1)h} A` and `X` constant on each cell, taking the
//! value at the cell's right node. Solving is forward substitution.

use crate::analysis::{bernstein_certify, CertOptions};
use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::kernels::KernelSpec;
use crate::linalg::{max_abs, mul_add_into, Cholesky, Matrix, SymMatrix};
use crate::probe::ProbeSet;
use crate::sampled::{DeltaPlusFunction, Regular, SampledMatrixFunction};

/// Kernel given in closed form or by samples.
#[derive(Debug, Clone, Copy)]
pub enum KernelInput<'a> {
    Spec(&'a KernelSpec),
    Sampled(&'a SampledMatrixFunction),
}

impl<'a> From<&'a KernelSpec> for KernelInput<'a> {
    fn from(k: &'a KernelSpec) -> Self {
        KernelInput::Spec(k)
    }
}

impl<'a> From<&'a SampledMatrixFunction> for KernelInput<'a> {
    fn from(f: &'a SampledMatrixFunction) -> Self {
        KernelInput::Sampled(f)
    }
}

impl KernelInput<'_> {
    pub fn rank(&self) -> usize {
        match self {
            KernelInput::Spec(k) => k.rank(),
            KernelInput::Sampled(f) => f.rank(),
        }
    }
}

/// Which side the kernel multiplies on: `A∗X` or `X∗A`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Cell moments `μ_0 … μ_{N−1}` of a kernel on a uniform grid.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentTable {
    grid: Grid,
    moments: Vec<Matrix>,
}

impl MomentTable {
    /// Table from precomputed per-lag weights on a uniform grid.
    pub(crate) fn from_parts(grid: Grid, moments: Vec<Matrix>) -> Self {
        MomentTable { grid, moments }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn moments(&self) -> &[Matrix] {
        &self.moments
    }

    pub fn moment(&self, k: usize) -> &Matrix {
        &self.moments[k]
    }

    pub fn rank(&self) -> usize {
        self.moments[0].nrows()
    }

    pub fn len(&self) -> usize {
        self.moments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moments.is_empty()
    }

    /// `Σ_k μ_k`, which approximates `∫_0^T A`.
    pub fn total(&self) -> Matrix {
        let m = self.rank();
        self.moments.iter().fold(Matrix::zeros(m, m), |acc, mu| acc + mu)
    }

    /// Cholesky factor of `μ_0`, refusing near-singular leading moments.
    pub fn leading_factor(&self) -> Result<Cholesky> {
        let mu0 = &self.moments[0];
        let sym = SymMatrix::symmetrize(mu0);
        let scale = max_abs(mu0);
        let min_eig = sym.min_eigenvalue();
        if scale == 0.0 || !(min_eig >= 1e-12 * scale) {
            return Err(Error::SingularLeadingMoment {
                reason: format!(
                    "smallest eigenvalue {min_eig:e} of the first cell moment is below \
                     1e-12 × {scale:e}; the kernel vanishes along some direction"
                ),
            });
        }
        sym.cholesky().map_err(|_| Error::SingularLeadingMoment {
            reason: "first cell moment is not positive definite".into(),
        })
    }
}

/// Cell moments of `a` on a uniform grid: exact for closed-form kernels,
/// midpoint value times `h` for sampled ones.
pub fn build_moments<'a>(a: impl Into<KernelInput<'a>>, grid: &Grid) -> Result<MomentTable> {
    let h = grid.require_uniform("product integration")?;
    let moments = match a.into() {
        KernelInput::Spec(k) => {
            k.validate()?;
            (0..grid.len())
                .map(|i| Ok(k.cell_moment(grid.cell_start(i), grid.node(i))?.into_matrix()))
                .collect::<Result<Vec<_>>>()?
        }
        KernelInput::Sampled(f) => {
            if f.value_at_zero().is_none() {
                return Err(Error::Unsupported(
                    "sampled kernels must be bounded at zero; supply a KernelSpec with exact \
                     moments for singular kernels"
                        .into(),
                ));
            }
            if f.grid().horizon() < grid.horizon() * (1.0 - 1e-12) {
                return Err(Error::invalid("sampled kernel does not cover the grid"));
            }
            (0..grid.len())
                .map(|i| Ok(f.eval(grid.cell_start(i) + 0.5 * h)? * h))
                .collect::<Result<Vec<_>>>()?
        }
    };
    Ok(MomentTable {
        grid: grid.clone(),
        moments,
    })
}

fn check_compatible(table: &MomentTable, f: &SampledMatrixFunction) -> Result<()> {
    if !table.grid.same_as(f.grid()) {
        return Err(Error::invalid("kernel moments and function live on different grids"));
    }
    if f.rank() != table.rank() {
        return Err(Error::invalid(format!(
            "rank mismatch: kernel {} vs function {}",
            table.rank(),
            f.rank()
        )));
    }
    Ok(())
}

/// `Σ_{j≤n} μ_{n−j} X_j` (or `X_j μ_{n−j}`) for each `n`; `X_j` may be
/// `m×c` blocks, so vector trajectories go through the same code.
pub(crate) fn convolve_values(table: &MomentTable, xs: &[Matrix], side: Side) -> Vec<Matrix> {
    let n = xs.len();
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let (r, c) = (xs[0].nrows(), xs[0].ncols());
        let mut acc = Matrix::zeros(r, c);
        for (j, x) in xs[..=i].iter().enumerate() {
            match side {
                Side::Left => mul_add_into(&mut acc, &table.moments[i - j], x),
                Side::Right => mul_add_into(&mut acc, x, &table.moments[i - j]),
            }
        }
        out.push(acc);
    }
    out
}

/// Forward substitution for `Σ_{j≤n} μ_{n−j} X_j = R_n`.
pub(crate) fn solve_values(table: &MomentTable, rhs: &[Matrix], side: Side) -> Result<Vec<Matrix>> {
    let chol = table.leading_factor()?;
    let mut xs: Vec<Matrix> = Vec::with_capacity(rhs.len());
    for (i, r) in rhs.iter().enumerate() {
        let mut acc = r.clone();
        let mut history = Matrix::zeros(r.nrows(), r.ncols());
        for (j, x) in xs.iter().enumerate() {
            match side {
                Side::Left => mul_add_into(&mut history, &table.moments[i - j], x),
                Side::Right => mul_add_into(&mut history, x, &table.moments[i - j]),
            }
        }
        acc -= history;
        let x = match side {
            Side::Left => chol.solve(&acc),
            Side::Right => chol.solve_right(&acc),
        };
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::NumericOverflow {
                location: format!("Volterra step {}", i + 1),
            });
        }
        xs.push(x);
    }
    Ok(xs)
}

/// Discrete `A∗X` at every node.
pub fn discrete_convolve(table: &MomentTable, x: &SampledMatrixFunction) -> Result<SampledMatrixFunction> {
    discrete_convolve_side(table, x, Side::Left)
}

/// Discrete `A∗X` or `X∗A` at every node.
pub fn discrete_convolve_side(
    table: &MomentTable,
    x: &SampledMatrixFunction,
    side: Side,
) -> Result<SampledMatrixFunction> {
    check_compatible(table, x)?;
    SampledMatrixFunction::new(table.grid.clone(), convolve_values(table, x.values(), side))
}

/// Solves the discrete system `A∗X = R` node by node.
pub fn volterra_solve(table: &MomentTable, rhs: &SampledMatrixFunction) -> Result<SampledMatrixFunction> {
    volterra_solve_side(table, rhs, Side::Left)
}

/// Solves `A∗X = R` (left) or `X∗A = R` (right).
pub fn volterra_solve_side(
    table: &MomentTable,
    rhs: &SampledMatrixFunction,
    side: Side,
) -> Result<SampledMatrixFunction> {
    check_compatible(table, rhs)?;
    SampledMatrixFunction::new(table.grid.clone(), solve_values(table, rhs.values(), side)?)
}

/// `R(t_n) − A(t_n)·B`, skipped when the atom vanishes (A may be singular).
fn subtract_atom_term(
    a: &KernelSpec,
    grid: &Grid,
    atom: &SymMatrix,
    mut target: impl FnMut(f64) -> Matrix,
) -> Result<SampledMatrixFunction> {
    SampledMatrixFunction::from_fn(grid.clone(), |t| {
        let mut r = target(t);
        if !atom.is_zero() {
            r -= a.eval(t)?.as_matrix() * atom.as_matrix();
        }
        Ok(r)
    })
}

/// Solves `A∗X = t·I` for a catalog LICM or Bernstein kernel. LICM inputs
/// get a Bernstein certificate on the standard probe set attached to the
/// regular part.
pub fn solve_duality(a: &KernelSpec, grid: &Grid) -> Result<DeltaPlusFunction> {
    a.validate()?;
    let licm = a.is_licm();
    if !licm && !a.is_bernstein() {
        return Err(Error::Unsupported(format!(
            "{} is neither a catalog LICM nor a Bernstein kernel",
            a.variant_name()
        )));
    }
    let m = a.rank();
    let atom = a.duality_atom()?;
    let rhs = subtract_atom_term(a, grid, &atom, |t| Matrix::identity(m, m) * t)?;
    let table = build_moments(a, grid)?;
    let mut regular = volterra_solve(&table, &rhs)?;
    if licm {
        let probes = ProbeSet::standard(m)?;
        let report = bernstein_certify(&regular, grid, &probes, &CertOptions::default())?;
        regular = regular.with_certificate(report);
    }
    DeltaPlusFunction::new(atom, Regular::Sampled(regular))
}

/// Solves the Sonine equation `A∗X = I` with `X = A₀ δ + F`.
pub fn solve_sonine(a: &KernelSpec, grid: &Grid) -> Result<DeltaPlusFunction> {
    a.validate()?;
    let atom = a.limit_inverse_at_zero().ok_or_else(|| {
        Error::Unsupported(format!(
            "{} has a singular value at zero, so A(t)^-1 has no limit",
            a.variant_name()
        ))
    })?;
    let m = a.rank();
    let rhs = subtract_atom_term(a, grid, &atom, |_| Matrix::identity(m, m))?;
    let table = build_moments(a, grid)?;
    let regular = volterra_solve(&table, &rhs)?;
    DeltaPlusFunction::new(atom, Regular::Sampled(regular))
}
