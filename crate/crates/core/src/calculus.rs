//! Generalized Caputo derivative `D_A w = A∗w′`, its integral `J_A v = F∗v`
//! with `F` the Sonine partner of `A`, and a relaxation integrator for
//! `D_A σ = K(σ, t)`.
//!
//! Both operators need `lim_{t→0} A(t)^{-1} = 0`; for kernels bounded at the
//! origin the partner carries a δ-atom and `J_A` does not invert `D_A`.

use serde::Serialize;

use crate::convolve::{build_moments, convolve_values, MomentTable, Side};
use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::kernels::KernelSpec;
use crate::linalg::{Matrix, Vector};
use crate::sampled::{DeltaPlusFunction, Regular};

/// Nodes skipped near the origin when comparing against singular references.
pub const BOUNDARY_LAYER: usize = 5;

/// Vector samples on a grid, with the value at `t = 0` when known.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorTrajectory {
    grid: Grid,
    values: Vec<Vector>,
    initial: Option<Vector>,
}

impl VectorTrajectory {
    pub fn new(grid: Grid, values: Vec<Vector>, initial: Option<Vector>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::invalid(format!(
                "{} values for a grid of {} nodes",
                values.len(),
                grid.len()
            )));
        }
        let m = values[0].len();
        if m == 0 || values.iter().any(|v| v.len() != m) {
            return Err(Error::invalid("trajectory values must share one nonzero dimension"));
        }
        if initial.as_ref().is_some_and(|v| v.len() != m) {
            return Err(Error::invalid("initial value has the wrong dimension"));
        }
        Ok(VectorTrajectory {
            grid,
            values,
            initial,
        })
    }

    /// Samples `f` at `t = 0` (as the initial value) and at every node.
    pub fn from_fn(grid: Grid, f: impl Fn(f64) -> Vec<f64>) -> Result<Self> {
        let initial = Some(Vector::from_vec(f(0.0)));
        let values = grid.nodes().iter().map(|&t| Vector::from_vec(f(t))).collect();
        Self::new(grid, values, initial)
    }

    /// The constant trajectory `c`, including at the origin.
    pub fn constant(grid: Grid, c: &[f64]) -> Result<Self> {
        Self::from_fn(grid, |_| c.to_vec())
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[Vector] {
        &self.values
    }

    pub fn initial(&self) -> Option<&Vector> {
        self.initial.as_ref()
    }

    pub fn dim(&self) -> usize {
        self.values[0].len()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    fn as_columns(values: &[Vector]) -> Vec<Matrix> {
        values
            .iter()
            .map(|v| Matrix::from_column_slice(v.len(), 1, v.as_slice()))
            .collect()
    }

    fn from_columns(grid: Grid, cols: Vec<Matrix>, initial: Option<Vector>) -> Result<Self> {
        let values = cols
            .into_iter()
            .map(|c| Vector::from_column_slice(c.as_slice()))
            .collect();
        Self::new(grid, values, initial)
    }
}

fn require_vanishing_a0(a: &KernelSpec) -> Result<()> {
    a.validate()?;
    match a.limit_inverse_at_zero() {
        Some(a0) if a0.is_zero() => Ok(()),
        _ => Err(Error::UnsupportedKernel(format!(
            "{} is bounded at the origin, so lim A(t)^-1 is not zero; the generalized \
             derivative and its integral do not apply to this (Caputo-Fabrizio-type) class",
            a.variant_name()
        ))),
    }
}

fn check_dims(a: &KernelSpec, w: &VectorTrajectory) -> Result<()> {
    if a.rank() != w.dim() {
        return Err(Error::invalid(format!(
            "kernel rank {} does not match trajectory dimension {}",
            a.rank(),
            w.dim()
        )));
    }
    Ok(())
}

/// `D_A w = A∗w′` with backward difference quotients of `w` on each cell.
pub fn d_a(a: &KernelSpec, w: &VectorTrajectory) -> Result<VectorTrajectory> {
    require_vanishing_a0(a)?;
    check_dims(a, w)?;
    let w0 = w
        .initial()
        .ok_or_else(|| Error::invalid("the derivative needs the value at t = 0"))?;
    let table = build_moments(a, w.grid())?;
    derivative_with(&table, w.values(), w0)
        .and_then(|cols| VectorTrajectory::from_columns(w.grid.clone(), cols, None))
}

fn derivative_with(table: &MomentTable, values: &[Vector], w0: &Vector) -> Result<Vec<Matrix>> {
    let h = table.grid().step();
    let mut prev = w0;
    let mut slopes = Vec::with_capacity(values.len());
    for v in values {
        slopes.push((v - prev) / h);
        prev = v;
    }
    Ok(convolve_values(table, &VectorTrajectory::as_columns(&slopes), Side::Left))
}

/// Moments of the partner's regular part on `grid`: exact for catalog
/// partners, `h·F_{k+1}` for sampled ones.
fn partner_moments(partner: &DeltaPlusFunction, grid: &Grid) -> Result<MomentTable> {
    if !partner.atom().is_zero() {
        return Err(Error::UnsupportedKernel(
            "the Sonine partner has a δ-atom; the integral operator needs a vanishing atom".into(),
        ));
    }
    match partner.regular() {
        Regular::Kernel(f) => build_moments(f, grid),
        Regular::Sampled(f) => {
            let h = grid.require_uniform("the integral operator")?;
            if !f.grid().same_as(grid) {
                return Err(Error::invalid("partner is sampled on a different grid"));
            }
            Ok(MomentTable::from_parts(
                grid.clone(),
                f.values().iter().map(|m| m * h).collect(),
            ))
        }
    }
}

/// `J_A v = F∗v` with the catalog Sonine partner `F` of `A`; the result
/// vanishes at the origin.
pub fn j_a(a: &KernelSpec, v: &VectorTrajectory) -> Result<VectorTrajectory> {
    require_vanishing_a0(a)?;
    check_dims(a, v)?;
    let partner = a.sonine_partner()?;
    j_a_with_partner(&partner, v)
}

/// `J_A v` for a given partner, e.g. one from the numerical Sonine solver.
pub fn j_a_with_partner(partner: &DeltaPlusFunction, v: &VectorTrajectory) -> Result<VectorTrajectory> {
    if partner.rank() != v.dim() {
        return Err(Error::invalid("partner rank does not match trajectory dimension"));
    }
    let table = partner_moments(partner, v.grid())?;
    let cols = convolve_values(&table, &VectorTrajectory::as_columns(v.values()), Side::Left);
    let zero = Vector::zeros(v.dim());
    VectorTrajectory::from_columns(v.grid.clone(), cols, Some(zero))
}

/// Per-node residual of an operator identity.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RoundTrip {
    pub nodes: Vec<f64>,
    /// `max_i |residual_i|` at each node.
    pub residuals: Vec<f64>,
    /// Leading nodes left out of `max_residual`.
    pub skipped: usize,
    pub max_residual: f64,
}

impl RoundTrip {
    fn new(nodes: &[f64], residuals: Vec<f64>, skipped: usize) -> Self {
        let max_residual = residuals.iter().skip(skipped).fold(0.0_f64, |a, &b| a.max(b));
        RoundTrip {
            nodes: nodes.to_vec(),
            residuals,
            skipped,
            max_residual,
        }
    }

    /// Largest residual over nodes accepted by `keep`, after the skipped ones.
    pub fn max_where(&self, keep: impl Fn(f64) -> bool) -> f64 {
        self.nodes
            .iter()
            .zip(&self.residuals)
            .skip(self.skipped)
            .filter(|(&t, _)| keep(t))
            .fold(0.0_f64, |a, (_, &r)| a.max(r))
    }
}

fn sup_diff(a: &[Vector], b: impl Fn(usize) -> Vector) -> Vec<f64> {
    a.iter()
        .enumerate()
        .map(|(i, x)| (x - b(i)).amax())
        .collect()
}

/// `J_A D_A w − (w − w(0))` at every node.
pub fn roundtrip_jd(a: &KernelSpec, w: &VectorTrajectory) -> Result<RoundTrip> {
    let d = d_a(a, w)?;
    let back = j_a(a, &d)?;
    let w0 = w.initial().expect("checked by d_a");
    let res = sup_diff(back.values(), |i| &w.values()[i] - w0);
    Ok(RoundTrip::new(w.grid().nodes(), res, 0))
}

/// `D_A J_A v − v` at every node; the first [`BOUNDARY_LAYER`] nodes are
/// left out of the maximum.
pub fn roundtrip_dj(a: &KernelSpec, v: &VectorTrajectory) -> Result<RoundTrip> {
    let u = j_a(a, v)?;
    let back = d_a(a, &u)?;
    let res = sup_diff(back.values(), |i| v.values()[i].clone());
    Ok(RoundTrip::new(v.grid().nodes(), res, BOUNDARY_LAYER.min(v.len())))
}

/// Integrates `D_A σ = K(σ, t)` with `σ(0) = σ0`. Each step solves
/// `Σ_{j≤n} μ_{n−j} d_j = K(σ_{n−1}, t_n)` for the increment rate `d_n`
/// and sets `σ_n = σ_{n−1} + h d_n`: implicit in the memory weight `μ_0`,
/// explicit in `K`. `K` should be Lipschitz in `σ`.
pub fn solve_relaxation<K>(a: &KernelSpec, mut k: K, sigma0: &[f64], grid: &Grid) -> Result<VectorTrajectory>
where
    K: FnMut(&Vector, f64) -> std::result::Result<Vector, String>,
{
    require_vanishing_a0(a)?;
    let m = a.rank();
    if sigma0.len() != m {
        return Err(Error::invalid(format!(
            "initial value has {} components, kernel rank is {m}",
            sigma0.len()
        )));
    }
    let h = grid.require_uniform("the relaxation integrator")?;
    let table = build_moments(a, grid)?;
    let chol = table.leading_factor()?;
    let mut sigma = Vector::from_column_slice(sigma0);
    let initial = sigma.clone();
    let mut rates: Vec<Vector> = Vec::with_capacity(grid.len());
    let mut values = Vec::with_capacity(grid.len());
    for (n, &t) in grid.nodes().iter().enumerate() {
        let step = n + 1;
        let mut rhs = k(&sigma, t).map_err(|message| Error::Callback { step, message })?;
        if rhs.len() != m {
            return Err(Error::Callback {
                step,
                message: format!("right side returned {} components, expected {m}", rhs.len()),
            });
        }
        for (j, d) in rates.iter().enumerate() {
            crate::linalg::mul_add_vec_into(&mut rhs, &(-table.moment(n - j)), d);
        }
        let d = chol.solve_vector(&rhs);
        sigma += &d * h;
        if sigma.iter().any(|x| !x.is_finite()) {
            return Err(Error::NumericOverflow {
                location: format!("relaxation step {step}"),
            });
        }
        rates.push(d);
        values.push(sigma.clone());
    }
    VectorTrajectory::new(grid.clone(), values, Some(initial))
}
