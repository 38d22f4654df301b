//! Certification of function classes on finite probe sets, and residuals of
//! solved convolution equations.
//!
//! Class checks are necessary conditions tested on a finite range and a
//! finite set of directions: a passing report means "certified on probes
//! over the tested range", never a proof of membership.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::convolve::{convolve_values, KernelInput, MomentTable, Side};
use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::kernels::KernelSpec;
use crate::linalg::{max_abs, Matrix};
use crate::probe::ProbeSet;
use crate::sampled::{DeltaPlusFunction, Regular, SampledMatrixFunction};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Property {
    #[serde(rename = "CM")]
    Cm,
    #[serde(rename = "LICM")]
    Licm,
    Bernstein,
    #[serde(rename = "SPD-transform")]
    SpdTransform,
    #[serde(rename = "Sonine-residual")]
    SonineResidual,
    #[serde(rename = "Duality-residual")]
    DualityResidual,
    Structure,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

/// Where a check failed: a time or transform variable, the probe index and
/// the difference order, whichever apply.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Location {
    pub coordinate: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub probe: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub order: Option<usize>,
    /// Which of several conditions failed, when a report bundles more than one.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub check: Option<String>,
}

/// Per-point margin entry, e.g. `vᵀÃ(p)v` for one probe.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Margin {
    pub coordinate: f64,
    pub probe: usize,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertReport {
    pub property: Property,
    pub verdict: Verdict,
    pub max_violation: f64,
    pub tolerance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub location: Option<Location>,
    pub parameters: Value,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub margins: Vec<Margin>,
}

impl CertReport {
    pub(crate) fn new(
        property: Property,
        max_violation: f64,
        tolerance: f64,
        location: Option<Location>,
        parameters: Value,
    ) -> Self {
        let pass = max_violation <= tolerance;
        CertReport {
            property,
            verdict: if pass { Verdict::Pass } else { Verdict::Fail },
            max_violation,
            tolerance,
            location: if pass { None } else { location },
            parameters,
            margins: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

/// Difference-order and tolerance settings for the class checks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CertOptions {
    pub n_max: usize,
    pub tol: f64,
    /// Number of stencil steps across `(0, T]` for closed-form kernels.
    pub stencil_cells: usize,
}

impl Default for CertOptions {
    fn default() -> Self {
        CertOptions {
            n_max: 6,
            tol: 1e-9,
            stencil_cells: 512,
        }
    }
}

/// Sample points and quadratic forms `vᵀ f(s_k) v` for every probe.
fn probe_samples(
    f: KernelInput<'_>,
    grid: &Grid,
    probes: &ProbeSet,
    opts: &CertOptions,
) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    if probes.rank() != f.rank() {
        return Err(Error::invalid(format!(
            "probe rank {} does not match function rank {}",
            probes.rank(),
            f.rank()
        )));
    }
    let (coords, values): (Vec<f64>, Vec<Matrix>) = match f {
        KernelInput::Spec(k) => {
            k.validate()?;
            let cells = opts.stencil_cells.max(1);
            let h = grid.horizon() / cells as f64;
            let coords: Vec<f64> = (1..=cells).map(|i| i as f64 * h).collect();
            let values = coords
                .iter()
                .map(|&t| Ok(k.eval(t)?.into_matrix()))
                .collect::<Result<Vec<_>>>()?;
            (coords, values)
        }
        KernelInput::Sampled(s) => {
            s.grid().require_uniform("finite-difference certification")?;
            (s.grid().nodes().to_vec(), s.values().to_vec())
        }
    };
    if coords.len() < opts.n_max + 1 {
        return Err(Error::invalid(format!(
            "{} sample points cannot carry differences of order {}",
            coords.len(),
            opts.n_max
        )));
    }
    let forms = probes
        .vectors()
        .iter()
        .map(|v| values.iter().map(|m| crate::linalg::quad_form(m, v)).collect())
        .collect();
    Ok((coords, forms))
}

/// Scans `sign(n)·Δⁿ g ≥ −tol·scale` for `n = 0..=n_max`, with `scale` the
/// largest `|g|` on the stencil. Returns the worst relative violation and
/// the first violation above `tol`, by increasing order, then probe, then
/// time.
fn difference_scan(
    coords: &[f64],
    forms: &[Vec<f64>],
    n_max: usize,
    tol: f64,
    sign: impl Fn(usize) -> f64,
) -> (f64, Option<Location>) {
    let mut worst = 0.0_f64;
    let mut first = None;
    for n in 0..=n_max {
        for (p, g) in forms.iter().enumerate() {
            let mut d = g.clone();
            for _ in 0..n {
                for k in 0..d.len() - 1 {
                    d[k] = d[k + 1] - d[k];
                }
                d.pop();
            }
            for (k, &dk) in d.iter().enumerate() {
                let scale = g[k..=k + n].iter().fold(1e-300_f64, |a, &b| a.max(b.abs()));
                let violation = (-sign(n) * dk / scale).max(0.0);
                worst = worst.max(violation);
                if violation > tol && first.is_none() {
                    first = Some(Location {
                        coordinate: coords[k],
                        probe: Some(p),
                        order: Some(n),
                        check: None,
                    });
                }
            }
        }
    }
    (worst, first)
}

/// `(−1)ⁿ` for complete monotonicity; `+` then `(−1)^{n−1}` for Bernstein.
fn class_sign(property: Property) -> impl Fn(usize) -> f64 {
    move |n: usize| {
        let flip = match property {
            Property::Bernstein => n >= 2 && n.is_multiple_of(2),
            _ => !n.is_multiple_of(2),
        };
        if flip {
            -1.0
        } else {
            1.0
        }
    }
}

fn class_report(
    property: Property,
    f: KernelInput<'_>,
    grid: &Grid,
    probes: &ProbeSet,
    opts: &CertOptions,
) -> Result<CertReport> {
    let (coords, forms) = probe_samples(f, grid, probes, opts)?;
    let (worst, location) =
        difference_scan(&coords, &forms, opts.n_max, opts.tol, class_sign(property));
    let params = json!({
        "n_max": opts.n_max,
        "tol": opts.tol,
        "probes": probes.len(),
        "tested_range": [coords[0], coords[coords.len() - 1]],
        "points": coords.len(),
    });
    Ok(CertReport::new(property, worst, opts.tol, location, params))
}

/// Complete monotonicity on probes: `(−1)ⁿ Δⁿ[vᵀ f v] ≥ 0` for
/// `n = 0..=n_max`. Closed-form kernels are sampled on a dedicated stencil
/// over `(0, T]` of `grid`; sampled functions use their own nodes.
pub fn cm_certify<'a>(
    f: impl Into<KernelInput<'a>>,
    grid: &Grid,
    probes: &ProbeSet,
    opts: &CertOptions,
) -> Result<CertReport> {
    class_report(Property::Cm, f.into(), grid, probes, opts)
}

/// Bernstein property on probes: `f ≥ 0`, `Δf ≥ 0` and `Δf` completely
/// monotone up to order `n_max − 1`.
pub fn bernstein_certify<'a>(
    f: impl Into<KernelInput<'a>>,
    grid: &Grid,
    probes: &ProbeSet,
    opts: &CertOptions,
) -> Result<CertReport> {
    class_report(Property::Bernstein, f.into(), grid, probes, opts)
}

/// A solved `X`, with or without a δ-atom.
#[derive(Debug, Clone, Copy)]
pub enum Solution<'a> {
    Sampled(&'a SampledMatrixFunction),
    Delta(&'a DeltaPlusFunction),
}

impl<'a> From<&'a SampledMatrixFunction> for Solution<'a> {
    fn from(f: &'a SampledMatrixFunction) -> Self {
        Solution::Sampled(f)
    }
}

impl<'a> From<&'a DeltaPlusFunction> for Solution<'a> {
    fn from(x: &'a DeltaPlusFunction) -> Self {
        Solution::Delta(x)
    }
}

impl Solution<'_> {
    pub fn rank(&self) -> usize {
        match self {
            Solution::Sampled(f) => f.rank(),
            Solution::Delta(x) => x.rank(),
        }
    }

    pub(crate) fn atom(&self) -> Option<&crate::linalg::SymMatrix> {
        match self {
            Solution::Sampled(_) => None,
            Solution::Delta(x) => Some(x.atom()),
        }
    }

    /// Piecewise-constant cell values of the regular part on `grid`: stored
    /// node values for sampled parts, exact cell averages for closed forms.
    pub(crate) fn cell_values(&self, grid: &Grid) -> Result<Vec<Matrix>> {
        let regular = match self {
            Solution::Sampled(f) => return sampled_on(f, grid),
            Solution::Delta(x) => x.regular(),
        };
        match regular {
            Regular::Sampled(f) => sampled_on(f, grid),
            Regular::Kernel(k) => (0..grid.len())
                .map(|i| {
                    let (a, b) = (grid.cell_start(i), grid.node(i));
                    Ok(k.cell_moment(a, b)?.into_matrix() / (b - a))
                })
                .collect(),
        }
    }
}

fn sampled_on(f: &SampledMatrixFunction, grid: &Grid) -> Result<Vec<Matrix>> {
    if !f.grid().same_as(grid) {
        return Err(Error::invalid("solution is sampled on a different grid"));
    }
    Ok(f.values().to_vec())
}

/// `max_n ‖∫_0^{t_n} (A∗X − R)‖_max` with `X` piecewise constant per cell.
///
/// The integral is exact given the second primitive of `A`, so it measures
/// the scheme error alone. The nodal collocation residual is zero to
/// round-off by construction of the solver and would not discriminate.
fn integrated_residual(
    a: &KernelSpec,
    x: Solution<'_>,
    grid: &Grid,
    integral_of_target: impl Fn(f64) -> f64,
) -> Result<(f64, f64)> {
    a.validate()?;
    grid.require_uniform("residual evaluation")?;
    let m = a.rank();
    if x.rank() != m {
        return Err(Error::invalid(format!("rank mismatch: kernel {m} vs solution {}", x.rank())));
    }
    let cells = x.cell_values(grid)?;
    // W_k = P2((k+1)h) − P2(kh) turns ∫_0^{t_n} A∗X into a discrete convolution
    let mut p2 = Vec::with_capacity(grid.len() + 1);
    p2.push(Matrix::zeros(m, m));
    for &t in grid.nodes() {
        p2.push(a.second_primitive(t)?.into_matrix());
    }
    let weights: Vec<Matrix> = (0..grid.len()).map(|k| &p2[k + 1] - &p2[k]).collect();
    let table = MomentTable::from_parts(grid.clone(), weights);
    let integrals = convolve_values(&table, &cells, Side::Left);
    let identity = Matrix::identity(m, m);
    let mut worst = 0.0_f64;
    let mut at = grid.node(0);
    for (i, (&t, mut r)) in grid.nodes().iter().zip(integrals).enumerate() {
        if let Some(b) = x.atom() {
            if !b.is_zero() {
                r += a.primitive(t)?.as_matrix() * b.as_matrix();
            }
        }
        r -= &identity * integral_of_target(t);
        let e = max_abs(&r);
        if !e.is_finite() {
            return Err(Error::NumericOverflow {
                location: format!("residual at node {}", i + 1),
            });
        }
        if e > worst {
            worst = e;
            at = t;
        }
    }
    Ok((worst, at))
}

fn residual_report(
    property: Property,
    a: &KernelSpec,
    x: Solution<'_>,
    grid: &Grid,
    tol: f64,
    integral_of_target: impl Fn(f64) -> f64,
) -> Result<CertReport> {
    let (worst, at) = integrated_residual(a, x, grid, integral_of_target)?;
    let params = json!({
        "kernel": a,
        "grid": { "T": grid.horizon(), "N": grid.len() },
        "residual": "max over nodes of |∫_0^t (A∗X − R)|",
    });
    let location = Location {
        coordinate: at,
        probe: None,
        order: None,
        check: None,
    };
    Ok(CertReport::new(property, worst, tol, Some(location), params))
}

/// Residual of the Sonine equation `A∗X = I`.
pub fn sonine_residual<'a>(
    a: &KernelSpec,
    x: impl Into<Solution<'a>>,
    grid: &Grid,
    tol: f64,
) -> Result<CertReport> {
    residual_report(Property::SonineResidual, a, x.into(), grid, tol, |t| t)
}

/// Residual of the duality equation `A∗X = t·I`.
pub fn duality_residual<'a>(
    a: &KernelSpec,
    x: impl Into<Solution<'a>>,
    grid: &Grid,
    tol: f64,
) -> Result<CertReport> {
    residual_report(Property::DualityResidual, a, x.into(), grid, tol, |t| 0.5 * t * t)
}
