//! Transform side: numeric Laplace transforms, the pointwise solve
//! `Ã(p) X̃(p) = R̃(p)`, and necessary conditions for the Stieltjes and
//! complete-Bernstein structure of transforms.

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::analysis::{CertReport, Location, Margin, Property, Solution, Verdict};
use crate::convolve::KernelInput;
use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::kernels::KernelSpec;
use crate::linalg::{max_abs, quad_form, Matrix, SymMatrix};
use crate::probe::ProbeSet;

/// Right-hand sides with closed-form transforms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rhs {
    /// `R = t·I`, `R̃ = p^{-2} I`.
    DualityT,
    /// `R = I`, `R̃ = p^{-1} I`.
    SonineI,
}

impl Rhs {
    fn transform(self, p: f64) -> f64 {
        match self {
            Rhs::DualityT => 1.0 / (p * p),
            Rhs::SonineI => 1.0 / p,
        }
    }
}

/// `∫_0^{T} e^{-pt} A(t) dt` together with a bound on the neglected tail.
#[derive(Debug, Clone, PartialEq)]
pub struct LaplaceEstimate {
    pub p: f64,
    pub value: Matrix,
    /// Entrywise bound on `∫_T^∞ e^{-pt} A`; `None` when no bound is known.
    pub tail_bound: Option<f64>,
}

/// Horizon at which `e^{-p T} ≤ 1e-10` for the smallest `p`.
pub fn default_tail(p_min: f64) -> f64 {
    10.0 * std::f64::consts::LN_10 / p_min
}

fn check_p(p: f64) -> Result<()> {
    if p > 0.0 && p.is_finite() {
        Ok(())
    } else {
        Err(Error::out_of_range("p", p, "(0, ∞)"))
    }
}

/// Tail bound for one scalar catalog kernel from monotonicity.
fn scalar_tail(k: &KernelSpec, p: f64, t: f64) -> Option<f64> {
    let decay = (-p * t).exp() / p;
    match k {
        KernelSpec::PowerLaw { .. }
        | KernelSpec::SoninePartnerOfPowerLaw { .. }
        | KernelSpec::TemperedPowerLaw { .. }
        | KernelSpec::TemperedPartner { .. }
        | KernelSpec::Exponential { .. }
        | KernelSpec::Constant { .. } => Some(k.scalar_value(t) * decay),
        KernelSpec::OneMinusExp { .. } => Some(decay),
        _ => None,
    }
}

fn tail_bound(k: &KernelSpec, p: f64, t: f64) -> Option<f64> {
    let scale = match k {
        KernelSpec::ScalarTimesMatrix { k0, .. } => k0.max_abs(),
        _ => 1.0,
    };
    k.scalar_parts()
        .iter()
        .map(|s| scalar_tail(s, p, t))
        .try_fold(0.0_f64, |acc, b| b.map(|b| acc.max(b * scale)))
}

/// Cell weights and `[a, b]` bounds for the numeric transform.
enum Cells {
    /// Exact cell moments; weighted by `e^{-p·midpoint}`.
    Moments(Vec<(f64, f64, Matrix)>),
    /// Piecewise-constant samples; weighted by the exact `∫_a^b e^{-pt}`.
    Samples(Vec<(f64, f64, Matrix)>),
}

fn cells_of(a: KernelInput<'_>, t_tail: f64, cells: usize) -> Result<(Cells, Option<&KernelSpec>)> {
    Ok(match a {
        KernelInput::Spec(k) => {
            k.validate()?;
            let grid = Grid::uniform(t_tail, cells)?;
            let moments = (0..grid.len())
                .map(|i| {
                    let (a, b) = (grid.cell_start(i), grid.node(i));
                    Ok((a, b, k.cell_moment(a, b)?.into_matrix()))
                })
                .collect::<Result<Vec<_>>>()?;
            (Cells::Moments(moments), Some(k))
        }
        KernelInput::Sampled(f) => {
            let g = f.grid();
            let samples = (0..g.len())
                .map(|i| (g.cell_start(i), g.node(i), f.value(i).clone()))
                .collect();
            (Cells::Samples(samples), None)
        }
    })
}

fn weighted_sum(cells: &Cells, p: f64) -> Matrix {
    let (list, exact) = match cells {
        Cells::Moments(l) => (l, false),
        Cells::Samples(l) => (l, true),
    };
    let m = list[0].2.nrows();
    let mut acc = Matrix::zeros(m, m);
    for (a, b, v) in list {
        let w = if exact {
            (-p * a).exp() * -(-p * (b - a)).exp_m1() / p
        } else {
            (-p * 0.5 * (a + b)).exp()
        };
        acc += v * w;
    }
    acc
}

/// Numeric Laplace transform at each `p`. Closed-form kernels are integrated
/// over `[0, t_tail]` with `cells` exact cell moments; sampled functions are
/// taken as piecewise constant over their own grid span.
pub fn numeric_laplace_many<'a>(
    a: impl Into<KernelInput<'a>>,
    p_list: &[f64],
    t_tail: f64,
    cells: usize,
) -> Result<Vec<LaplaceEstimate>> {
    for &p in p_list {
        check_p(p)?;
    }
    let (table, spec) = cells_of(a.into(), t_tail, cells)?;
    Ok(p_list
        .iter()
        .map(|&p| LaplaceEstimate {
            p,
            value: weighted_sum(&table, p),
            tail_bound: spec.and_then(|k| tail_bound(k, p, t_tail)),
        })
        .collect())
}

pub fn numeric_laplace<'a>(
    a: impl Into<KernelInput<'a>>,
    p: f64,
    t_tail: f64,
    cells: usize,
) -> Result<LaplaceEstimate> {
    Ok(numeric_laplace_many(a, &[p], t_tail, cells)?.remove(0))
}

/// Probe with the smallest `vᵀ M v`.
fn weakest_probe(m: &SymMatrix, probes: &ProbeSet) -> (usize, f64) {
    probes
        .vectors()
        .iter()
        .enumerate()
        .map(|(i, v)| (i, m.quad_form(v)))
        .fold((0, f64::INFINITY), |best, c| if c.1 < best.1 { c } else { best })
}

/// `X̃(p) = Ã(p)^{-1} R̃(p)` from the closed-form transform.
pub fn transform_solve(a: &KernelSpec, rhs: Rhs, p_list: &[f64]) -> Result<Vec<SymMatrix>> {
    a.validate()?;
    let probes = ProbeSet::standard(a.rank())?;
    p_list
        .iter()
        .map(|&p| {
            let at = a.laplace(p)?;
            let inv = at.spd_inverse().map_err(|_| {
                let (probe, margin) = weakest_probe(&at, &probes);
                Error::SingularTransform { p, probe, margin }
            })?;
            Ok(inv.scale(rhs.transform(p)))
        })
        .collect()
}

/// `vᵀ Ã(p) v > 0` for every `p` and probe.
pub fn check_pd(a: &KernelSpec, p_list: &[f64], probes: &ProbeSet) -> Result<CertReport> {
    a.validate()?;
    if probes.rank() != a.rank() {
        return Err(Error::invalid("probe rank does not match kernel rank"));
    }
    let mut margins = Vec::new();
    let mut worst: Option<Margin> = None;
    for &p in p_list {
        let at = a.laplace(p)?;
        for (i, v) in probes.vectors().iter().enumerate() {
            let m = Margin {
                coordinate: p,
                probe: i,
                value: at.quad_form(v),
            };
            if worst.is_none_or(|w| m.value < w.value) {
                worst = Some(m);
            }
            margins.push(m);
        }
    }
    let pass = worst.is_none_or(|w| w.value > 0.0);
    let location = worst.filter(|_| !pass).map(|w| Location {
        coordinate: w.coordinate,
        probe: Some(w.probe),
        order: None,
        check: None,
    });
    Ok(CertReport {
        property: Property::SpdTransform,
        verdict: if pass { Verdict::Pass } else { Verdict::Fail },
        max_violation: worst.map_or(0.0, |w| (-w.value).max(0.0)),
        tolerance: 0.0,
        location,
        parameters: json!({ "kernel": a, "p": p_list, "probes": probes.len() }),
        margins,
    })
}

/// Relative tolerance for the monotonicity checks on transforms.
const STRUCTURE_TOL: f64 = 1e-12;

/// Monotonicity surrogates for the transform classes along probes.
///
/// Non-Bernstein kernels are treated as LICM candidates: `p ↦ vᵀ pÃ v` must
/// be nondecreasing and `p ↦ vᵀ Ã v` nonincreasing, and the transform of the
/// duality solution `p X̃ = (pÃ)^{-1}` must be nonincreasing. Bernstein
/// kernels need `vᵀ pÃ v` nonincreasing and `vᵀ p²Ã v` nondecreasing.
pub fn check_structure(a: &KernelSpec, p_grid: &[f64], probes: &ProbeSet) -> Result<CertReport> {
    a.validate()?;
    if probes.rank() != a.rank() {
        return Err(Error::invalid("probe rank does not match kernel rank"));
    }
    if p_grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::invalid("p grid must be strictly increasing"));
    }
    for &p in p_grid {
        check_p(p)?;
    }
    let transforms = p_grid
        .iter()
        .map(|&p| a.laplace(p))
        .collect::<Result<Vec<_>>>()?;
    // (name, +1 for nondecreasing / −1 for nonincreasing, series)
    type Series = Box<dyn Fn(usize, &[f64]) -> f64>;
    let bernstein = a.is_bernstein();
    let mut checks: Vec<(&'static str, f64, Series)> = Vec::new();
    {
        let t1 = transforms.clone();
        let p1 = p_grid.to_vec();
        let t2 = transforms.clone();
        if bernstein {
            checks.push((
                "p A(p) nonincreasing",
                -1.0,
                Box::new(move |k, v| p1[k] * t1[k].quad_form(v)),
            ));
            let p2 = p_grid.to_vec();
            checks.push((
                "p^2 A(p) nondecreasing",
                1.0,
                Box::new(move |k, v| p2[k] * p2[k] * t2[k].quad_form(v)),
            ));
        } else {
            checks.push((
                "p A(p) nondecreasing",
                1.0,
                Box::new(move |k, v| p1[k] * t1[k].quad_form(v)),
            ));
            checks.push((
                "A(p) nonincreasing",
                -1.0,
                Box::new(move |k, v| t2[k].quad_form(v)),
            ));
            let inverses = p_grid
                .iter()
                .zip(&transforms)
                .map(|(&p, t)| t.scale(p).spd_inverse().map(|m| m.into_matrix()))
                .collect::<Vec<_>>();
            checks.push((
                "p X(p) of the duality solution nonincreasing",
                -1.0,
                Box::new(move |k, v| match &inverses[k] {
                    Ok(m) => quad_form(m, v),
                    Err(_) => f64::NAN,
                }),
            ));
        }
    }
    let mut worst = 0.0_f64;
    let mut location = None;
    let mut margins = Vec::new();
    for (name, dir, series) in &checks {
        for (i, v) in probes.vectors().iter().enumerate() {
            let values: Vec<f64> = (0..p_grid.len()).map(|k| series(k, v)).collect();
            let mut probe_worst = f64::INFINITY;
            let mut at = p_grid.first().copied().unwrap_or(0.0);
            for k in 0..values.len().saturating_sub(1) {
                let (g0, g1) = (values[k], values[k + 1]);
                let scale = g0.abs().max(g1.abs()).max(1e-300);
                let step = dir * (g1 - g0) / scale;
                let step = if step.is_nan() { f64::NEG_INFINITY } else { step };
                if step < probe_worst {
                    probe_worst = step;
                    at = p_grid[k];
                }
                let violation = -step;
                if violation > worst {
                    worst = violation;
                }
                if violation > STRUCTURE_TOL && location.is_none() {
                    location = Some(Location {
                        coordinate: p_grid[k],
                        probe: Some(i),
                        order: None,
                        check: Some(name.to_string()),
                    });
                }
            }
            if probe_worst.is_finite() {
                margins.push(Margin {
                    coordinate: at,
                    probe: i,
                    value: probe_worst,
                });
            }
        }
    }
    let names: Vec<&str> = checks.iter().map(|c| c.0).collect();
    let mut report = CertReport::new(
        Property::Structure,
        worst,
        STRUCTURE_TOL,
        location,
        json!({ "kernel": a, "p": p_grid, "probes": probes.len(), "checks": names }),
    );
    report.margins = margins;
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrossCheckEntry {
    pub p: f64,
    /// Atom plus the numeric transform of the regular part.
    pub numeric: Vec<Vec<f64>>,
    pub transform: SymMatrix,
    /// `max |numeric − transform| / max |transform|`.
    pub deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrossCheck {
    pub rhs: Rhs,
    pub entries: Vec<CrossCheckEntry>,
    pub max_deviation: f64,
}

/// Compares the transform of a time-domain solution (δ-atom transforms to
/// the constant atom) with the pointwise transform solve. Closed-form
/// regular parts use their closed-form transform.
pub fn cross_check<'a>(
    a: &KernelSpec,
    x: impl Into<Solution<'a>>,
    rhs: Rhs,
    p_list: &[f64],
) -> Result<CrossCheck> {
    let x = x.into();
    let exact = transform_solve(a, rhs, p_list)?;
    let regular: Vec<Matrix> = match x {
        Solution::Sampled(f) => numeric_laplace_many(f, p_list, 0.0, 0)?
            .into_iter()
            .map(|e| e.value)
            .collect(),
        Solution::Delta(d) => match d.regular() {
            crate::sampled::Regular::Sampled(f) => numeric_laplace_many(f, p_list, 0.0, 0)?
                .into_iter()
                .map(|e| e.value)
                .collect(),
            crate::sampled::Regular::Kernel(k) => p_list
                .iter()
                .map(|&p| Ok(k.laplace(p)?.into_matrix()))
                .collect::<Result<Vec<_>>>()?,
        },
    };
    let mut entries = Vec::with_capacity(p_list.len());
    let mut max_deviation = 0.0_f64;
    for ((&p, mut numeric), transform) in p_list.iter().zip(regular).zip(exact) {
        if let Some(b) = x.atom() {
            numeric += b.as_matrix();
        }
        let deviation = max_abs(&(&numeric - transform.as_matrix())) / transform.max_abs();
        max_deviation = max_deviation.max(deviation);
        let rows = (0..numeric.nrows())
            .map(|i| numeric.row(i).iter().copied().collect())
            .collect();
        entries.push(CrossCheckEntry {
            p,
            numeric: rows,
            transform,
            deviation,
        });
    }
    Ok(CrossCheck {
        rhs,
        entries,
        max_deviation,
    })
}
