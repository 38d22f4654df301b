//! Analytic kernel catalog.
//!
//! Scalar kernels carry closed-form values, cell moments and Laplace
//! transforms; matrix kernels are assembled from scalar ones either as
//! `k(t)·K0` or as a diagonal of independent scalar kernels.

mod json;
mod scalar;
mod series;

pub use series::{series_partner, SeriesPair};

use crate::error::{Error, Result};
use crate::linalg::SymMatrix;
use crate::sampled::{DeltaPlusFunction, Regular};

/// A closed-form kernel descriptor.
#[derive(Debug, Clone, PartialEq)]
pub enum KernelSpec {
    /// `t^{α−1}/Γ(α)`, `α ∈ (0,1)`.
    PowerLaw { alpha: f64 },
    /// `t^{−α}/Γ(1−α)`, `α ∈ (0,1)`.
    SoninePartnerOfPowerLaw { alpha: f64 },
    /// `t^{α−1} e^{−λt}/Γ(α)`.
    TemperedPowerLaw { alpha: f64, lambda: f64 },
    /// `λ^α [1 − Γ(−α, λt)/Γ(−α)]`, the partner of the tempered power law.
    TemperedPartner { alpha: f64, lambda: f64 },
    /// `e^{−λt}`.
    Exponential { lambda: f64 },
    /// `1 − e^{−λt}`, a Bernstein function.
    OneMinusExp { lambda: f64 },
    /// `t^{−λ/2} J_{−λ}(2√t)`, `λ ∈ (0,1)`; changes sign.
    BesselK { lambda: f64 },
    /// `t^{(λ−1)/2} I_{λ−1}(2√t)`, `λ > 0`; increasing.
    BesselI { lambda: f64 },
    /// The constant `c ≥ 0`.
    Constant { value: f64 },
    /// `Σ a_n t^{n+α−1}`, truncated.
    Series { alpha: f64, coefficients: Vec<f64> },
    /// `k(t)·K0` with `K0` symmetric positive definite.
    ScalarTimesMatrix { scalar: Box<KernelSpec>, k0: SymMatrix },
    /// `diag(k_1(t), …, k_m(t))`.
    DiagonalOfScalars { components: Vec<KernelSpec> },
}

fn unit_interval(what: &'static str, x: f64) -> Result<()> {
    if x > 0.0 && x < 1.0 {
        Ok(())
    } else {
        Err(Error::out_of_range(what, x, "(0, 1)"))
    }
}

fn positive(what: &'static str, x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::out_of_range(what, x, "(0, ∞)"))
    }
}

impl KernelSpec {
    pub fn power_law(alpha: f64) -> Result<Self> {
        KernelSpec::PowerLaw { alpha }.validated()
    }

    pub fn sonine_partner_of_power_law(alpha: f64) -> Result<Self> {
        KernelSpec::SoninePartnerOfPowerLaw { alpha }.validated()
    }

    pub fn tempered_power_law(alpha: f64, lambda: f64) -> Result<Self> {
        KernelSpec::TemperedPowerLaw { alpha, lambda }.validated()
    }

    pub fn tempered_partner(alpha: f64, lambda: f64) -> Result<Self> {
        KernelSpec::TemperedPartner { alpha, lambda }.validated()
    }

    pub fn exponential(lambda: f64) -> Result<Self> {
        KernelSpec::Exponential { lambda }.validated()
    }

    pub fn one_minus_exp(lambda: f64) -> Result<Self> {
        KernelSpec::OneMinusExp { lambda }.validated()
    }

    pub fn bessel_k(lambda: f64) -> Result<Self> {
        KernelSpec::BesselK { lambda }.validated()
    }

    pub fn bessel_i(lambda: f64) -> Result<Self> {
        KernelSpec::BesselI { lambda }.validated()
    }

    pub fn constant(value: f64) -> Result<Self> {
        KernelSpec::Constant { value }.validated()
    }

    pub fn series(alpha: f64, coefficients: Vec<f64>) -> Result<Self> {
        KernelSpec::Series {
            alpha,
            coefficients,
        }
        .validated()
    }

    pub fn scalar_times_matrix(scalar: KernelSpec, k0: SymMatrix) -> Result<Self> {
        KernelSpec::ScalarTimesMatrix {
            scalar: Box::new(scalar),
            k0,
        }
        .validated()
    }

    pub fn diagonal(components: Vec<KernelSpec>) -> Result<Self> {
        KernelSpec::DiagonalOfScalars { components }.validated()
    }

    /// `k·I_m` for a scalar kernel `k`.
    pub fn times_identity(scalar: KernelSpec, m: usize) -> Result<Self> {
        Self::scalar_times_matrix(scalar, SymMatrix::identity(m))
    }

    fn validated(self) -> Result<Self> {
        self.validate()?;
        Ok(self)
    }

    /// Checks parameter ranges recursively.
    pub fn validate(&self) -> Result<()> {
        match self {
            KernelSpec::PowerLaw { alpha } | KernelSpec::SoninePartnerOfPowerLaw { alpha } => {
                unit_interval("alpha", *alpha)
            }
            KernelSpec::TemperedPowerLaw { alpha, lambda }
            | KernelSpec::TemperedPartner { alpha, lambda } => {
                unit_interval("alpha", *alpha)?;
                positive("lambda", *lambda)
            }
            KernelSpec::Exponential { lambda } | KernelSpec::OneMinusExp { lambda } => {
                positive("lambda", *lambda)
            }
            // beyond λ = 1 the kernel is no longer integrable at 0
            KernelSpec::BesselK { lambda } => unit_interval("lambda", *lambda),
            KernelSpec::BesselI { lambda } => positive("lambda", *lambda),
            KernelSpec::Constant { value } => {
                if *value >= 0.0 && value.is_finite() {
                    Ok(())
                } else {
                    Err(Error::out_of_range("value", *value, "[0, ∞)"))
                }
            }
            KernelSpec::Series {
                alpha,
                coefficients,
            } => {
                unit_interval("alpha", *alpha)?;
                if coefficients.is_empty() {
                    return Err(Error::invalid("series needs at least one coefficient"));
                }
                if coefficients.iter().any(|c| !c.is_finite()) {
                    return Err(Error::invalid("series coefficients must be finite"));
                }
                Ok(())
            }
            KernelSpec::ScalarTimesMatrix { scalar, k0 } => {
                if !scalar.is_scalar() {
                    return Err(Error::invalid("the scalar factor must be a scalar kernel"));
                }
                scalar.validate()?;
                if !k0.is_spd() {
                    return Err(Error::invalid("K0 must be symmetric positive definite"));
                }
                Ok(())
            }
            KernelSpec::DiagonalOfScalars { components } => {
                if components.is_empty() {
                    return Err(Error::invalid("diagonal kernel needs at least one component"));
                }
                for c in components {
                    if !c.is_scalar() {
                        return Err(Error::invalid("diagonal components must be scalar kernels"));
                    }
                    c.validate()?;
                }
                Ok(())
            }
        }
    }

    pub fn is_scalar(&self) -> bool {
        !matches!(
            self,
            KernelSpec::ScalarTimesMatrix { .. } | KernelSpec::DiagonalOfScalars { .. }
        )
    }

    pub fn rank(&self) -> usize {
        match self {
            KernelSpec::ScalarTimesMatrix { k0, .. } => k0.rank(),
            KernelSpec::DiagonalOfScalars { components } => components.len(),
            _ => 1,
        }
    }

    /// Short variant name as used in the JSON format.
    pub fn variant_name(&self) -> &'static str {
        match self {
            KernelSpec::PowerLaw { .. } => "power_law",
            KernelSpec::SoninePartnerOfPowerLaw { .. } => "sonine_partner_of_power_law",
            KernelSpec::TemperedPowerLaw { .. } => "tempered_power_law",
            KernelSpec::TemperedPartner { .. } => "tempered_partner",
            KernelSpec::Exponential { .. } => "exponential",
            KernelSpec::OneMinusExp { .. } => "one_minus_exp",
            KernelSpec::BesselK { .. } => "bessel_k",
            KernelSpec::BesselI { .. } => "bessel_i",
            KernelSpec::Constant { .. } => "constant",
            KernelSpec::Series { .. } => "series",
            KernelSpec::ScalarTimesMatrix { .. } => "scalar_times_matrix",
            KernelSpec::DiagonalOfScalars { .. } => "diagonal_of_scalars",
        }
    }

    /// Builds the `m×m` value from a per-scalar quantity.
    fn assemble(&self, mut f: impl FnMut(&KernelSpec) -> Result<f64>) -> Result<SymMatrix> {
        match self {
            KernelSpec::ScalarTimesMatrix { scalar, k0 } => Ok(k0.scale(f(scalar)?)),
            KernelSpec::DiagonalOfScalars { components } => {
                let d = components.iter().map(&mut f).collect::<Result<Vec<_>>>()?;
                Ok(SymMatrix::diagonal(&d))
            }
            _ => Ok(SymMatrix::scalar(f(self)?)),
        }
    }

    /// Scalar kernels that make up this kernel.
    pub(crate) fn scalar_parts(&self) -> Vec<&KernelSpec> {
        match self {
            KernelSpec::ScalarTimesMatrix { scalar, .. } => vec![scalar.as_ref()],
            KernelSpec::DiagonalOfScalars { components } => components.iter().collect(),
            _ => vec![self],
        }
    }

    /// True when some entry blows up at `t → 0+`.
    pub fn is_singular_at_zero(&self) -> bool {
        self.scalar_parts().iter().any(|k| k.scalar_value_at_zero().is_none())
    }

    /// Completely monotone and locally integrable by construction.
    pub fn is_licm(&self) -> bool {
        self.scalar_parts().iter().all(|k| {
            matches!(
                k,
                KernelSpec::PowerLaw { .. }
                    | KernelSpec::SoninePartnerOfPowerLaw { .. }
                    | KernelSpec::TemperedPowerLaw { .. }
                    | KernelSpec::TemperedPartner { .. }
                    | KernelSpec::Exponential { .. }
                    | KernelSpec::Constant { .. }
            )
        })
    }

    /// A Bernstein function by construction.
    pub fn is_bernstein(&self) -> bool {
        self.scalar_parts().iter().all(|k| {
            matches!(
                k,
                KernelSpec::OneMinusExp { .. } | KernelSpec::Constant { .. }
            )
        })
    }

    /// Value at `t > 0`.
    pub fn eval(&self, t: f64) -> Result<SymMatrix> {
        if !(t > 0.0) || !t.is_finite() {
            return Err(Error::out_of_range("t", t, "(0, ∞)"));
        }
        self.assemble(|k| {
            let v = k.scalar_value(t);
            if v.is_finite() {
                Ok(v)
            } else {
                Err(Error::NumericOverflow {
                    location: format!("{} at t = {t}", k.variant_name()),
                })
            }
        })
    }

    /// Finite limit at `t → 0+`, or `None` when some entry is unbounded.
    pub fn value_at_zero(&self) -> Option<SymMatrix> {
        if self.is_singular_at_zero() {
            return None;
        }
        self.assemble(|k| Ok(k.scalar_value_at_zero().unwrap_or(0.0)))
            .ok()
    }

    /// `∫_a^b` of the kernel.
    pub fn cell_moment(&self, a: f64, b: f64) -> Result<SymMatrix> {
        if !(a >= 0.0) {
            return Err(Error::invalid(format!("cell start {a} must be nonnegative")));
        }
        if !(b > a) || !b.is_finite() {
            return Err(Error::invalid(format!("cell [{a}, {b}] is empty or unbounded")));
        }
        self.assemble(|k| k.scalar_cell_moment(a, b))
    }

    /// `∫_0^t` of the kernel.
    pub fn primitive(&self, t: f64) -> Result<SymMatrix> {
        self.assemble(|k| k.scalar_primitive(t))
    }

    /// `∫_0^t (t − s) A(s) ds`.
    pub fn second_primitive(&self, t: f64) -> Result<SymMatrix> {
        self.assemble(|k| k.scalar_second_primitive(t))
    }

    /// Closed-form Laplace transform at `p > 0`.
    pub fn laplace(&self, p: f64) -> Result<SymMatrix> {
        if !(p > 0.0) || !p.is_finite() {
            return Err(Error::out_of_range("p", p, "(0, ∞)"));
        }
        self.assemble(|k| k.scalar_laplace(p))
    }

    /// `A₀ = lim_{t→0} A(t)^{-1}`: zero when the kernel is singular along
    /// every direction, the inverse of `A(0)` when that is invertible, and
    /// `None` otherwise.
    pub fn limit_inverse_at_zero(&self) -> Option<SymMatrix> {
        fn scalar(k: &KernelSpec) -> Option<f64> {
            match k.scalar_value_at_zero() {
                None => Some(0.0),
                Some(v) if v != 0.0 => Some(1.0 / v),
                Some(_) => None,
            }
        }
        match self {
            KernelSpec::ScalarTimesMatrix { scalar: k, k0 } => {
                let s = scalar(k)?;
                if s == 0.0 {
                    Some(SymMatrix::zeros(k0.rank()))
                } else {
                    Some(k0.spd_inverse().ok()?.scale(s))
                }
            }
            KernelSpec::DiagonalOfScalars { components } => {
                let d = components.iter().map(scalar).collect::<Option<Vec<_>>>()?;
                Some(SymMatrix::diagonal(&d))
            }
            _ => Some(SymMatrix::scalar(scalar(self)?)),
        }
    }

    /// Atom `B = lim_{p→∞} [p² Ã(p)]^{-1}` of the solution of `A∗X = t·I`.
    /// Only the Bernstein catalog produces a nonzero atom.
    pub fn duality_atom(&self) -> Result<SymMatrix> {
        fn scalar(k: &KernelSpec) -> f64 {
            match k {
                KernelSpec::OneMinusExp { lambda } => 1.0 / lambda,
                _ => 0.0,
            }
        }
        match self {
            KernelSpec::ScalarTimesMatrix { scalar: k, k0 } => {
                let s = scalar(k);
                if s == 0.0 {
                    Ok(SymMatrix::zeros(k0.rank()))
                } else {
                    Ok(k0.spd_inverse()?.scale(s))
                }
            }
            KernelSpec::DiagonalOfScalars { components } => {
                let d: Vec<f64> = components.iter().map(scalar).collect();
                Ok(SymMatrix::diagonal(&d))
            }
            _ => Ok(SymMatrix::scalar(scalar(self))),
        }
    }

    fn scalar_sonine_partner(&self) -> Result<(f64, KernelSpec)> {
        Ok(match *self {
            KernelSpec::PowerLaw { alpha } => (0.0, KernelSpec::SoninePartnerOfPowerLaw { alpha }),
            KernelSpec::SoninePartnerOfPowerLaw { alpha } => (0.0, KernelSpec::PowerLaw { alpha }),
            KernelSpec::TemperedPowerLaw { alpha, lambda } => {
                (0.0, KernelSpec::TemperedPartner { alpha, lambda })
            }
            KernelSpec::TemperedPartner { alpha, lambda } => {
                (0.0, KernelSpec::TemperedPowerLaw { alpha, lambda })
            }
            KernelSpec::BesselK { lambda } => (0.0, KernelSpec::BesselI { lambda }),
            KernelSpec::BesselI { lambda } if lambda < 1.0 => {
                (0.0, KernelSpec::BesselK { lambda })
            }
            KernelSpec::Exponential { lambda } => (1.0, KernelSpec::Constant { value: lambda }),
            KernelSpec::Constant { value } if value > 0.0 => {
                (1.0 / value, KernelSpec::Constant { value: 0.0 })
            }
            KernelSpec::Series {
                alpha,
                ref coefficients,
            } => {
                let pair = series_partner(alpha, coefficients, coefficients.len() - 1)?;
                (0.0, pair.partner())
            }
            _ => {
                return Err(Error::Unsupported(format!(
                    "no catalog Sonine partner for {}; solve numerically instead",
                    self.variant_name()
                )))
            }
        })
    }

    /// Catalog Sonine partner `X = B δ + F` with `A∗X = I`.
    pub fn sonine_partner(&self) -> Result<DeltaPlusFunction> {
        self.validate()?;
        let (atom, regular) = match self {
            KernelSpec::ScalarTimesMatrix { scalar, k0 } => {
                let (b, f) = scalar.scalar_sonine_partner()?;
                let inv = k0.spd_inverse()?;
                (inv.scale(b), KernelSpec::ScalarTimesMatrix {
                    scalar: Box::new(f),
                    k0: inv,
                })
            }
            KernelSpec::DiagonalOfScalars { components } => {
                let parts = components
                    .iter()
                    .map(|c| c.scalar_sonine_partner())
                    .collect::<Result<Vec<_>>>()?;
                let atom: Vec<f64> = parts.iter().map(|(b, _)| *b).collect();
                let regular = parts.into_iter().map(|(_, f)| f).collect();
                (SymMatrix::diagonal(&atom), KernelSpec::DiagonalOfScalars {
                    components: regular,
                })
            }
            _ => {
                let (b, f) = self.scalar_sonine_partner()?;
                (SymMatrix::scalar(b), f)
            }
        };
        DeltaPlusFunction::new(atom, Regular::Kernel(regular))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::gamma;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn catalog() -> Vec<KernelSpec> {
        vec![
            KernelSpec::PowerLaw { alpha: 0.5 },
            KernelSpec::PowerLaw { alpha: 0.3 },
            KernelSpec::SoninePartnerOfPowerLaw { alpha: 0.4 },
            KernelSpec::TemperedPowerLaw { alpha: 0.5, lambda: 1.0 },
            KernelSpec::TemperedPartner { alpha: 0.5, lambda: 1.0 },
            KernelSpec::TemperedPartner { alpha: 0.3, lambda: 2.5 },
            KernelSpec::Exponential { lambda: 1.5 },
            KernelSpec::OneMinusExp { lambda: 1.0 },
            KernelSpec::BesselK { lambda: 0.5 },
            KernelSpec::BesselI { lambda: 0.5 },
            KernelSpec::BesselI { lambda: 1.5 },
            KernelSpec::Constant { value: 2.0 },
            KernelSpec::Series {
                alpha: 0.5,
                coefficients: vec![1.0, -0.5, 0.25],
            },
        ]
    }

    #[test]
    fn power_law_at_one() {
        let v = KernelSpec::PowerLaw { alpha: 0.5 }.eval(1.0).unwrap();
        assert_relative_eq!(v.get(0, 0), 0.5641895835477563, max_relative = 1e-14);
    }

    #[test]
    fn eval_rejects_nonpositive_t() {
        let k = KernelSpec::Exponential { lambda: 1.0 };
        assert!(matches!(k.eval(0.0), Err(Error::OutOfRange { .. })));
        assert!(matches!(k.eval(-1.0), Err(Error::OutOfRange { .. })));
        assert_eq!(k.value_at_zero().unwrap().get(0, 0), 1.0);
    }

    #[test]
    fn matrix_assembly() {
        let k0 = SymMatrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 2.0]]).unwrap();
        let k = KernelSpec::scalar_times_matrix(KernelSpec::PowerLaw { alpha: 0.5 }, k0).unwrap();
        let v = k.eval(1.0).unwrap();
        let c = 1.0 / PI.sqrt();
        assert_relative_eq!(v.get(0, 0), 2.0 * c, max_relative = 1e-14);
        assert_relative_eq!(v.get(0, 1), c, max_relative = 1e-14);
        let d = KernelSpec::diagonal(vec![
            KernelSpec::PowerLaw { alpha: 0.3 },
            KernelSpec::Exponential { lambda: 2.0 },
        ])
        .unwrap();
        let v = d.eval(0.5).unwrap();
        assert_eq!(v.get(0, 1), 0.0);
        assert_relative_eq!(v.get(1, 1), (-1.0f64).exp(), max_relative = 1e-15);
    }

    #[test]
    fn validation() {
        assert!(KernelSpec::power_law(1.0).is_err());
        assert!(KernelSpec::power_law(0.0).is_err());
        assert!(KernelSpec::exponential(-1.0).is_err());
        assert!(KernelSpec::bessel_k(1.5).is_err());
        assert!(KernelSpec::series(0.5, vec![]).is_err());
        let singular = SymMatrix::from_rows(&[vec![1.0, 1.0], vec![1.0, 1.0]]).unwrap();
        assert!(KernelSpec::scalar_times_matrix(KernelSpec::PowerLaw { alpha: 0.5 }, singular)
            .is_err());
        let nested = KernelSpec::diagonal(vec![KernelSpec::PowerLaw { alpha: 0.5 }]).unwrap();
        assert!(KernelSpec::diagonal(vec![nested]).is_err());
    }

    #[test]
    fn closed_form_moments() {
        let m = KernelSpec::PowerLaw { alpha: 0.5 }.cell_moment(0.0, 1.0).unwrap();
        assert_relative_eq!(m.get(0, 0), 2.0 / PI.sqrt(), max_relative = 1e-14);
        let m = KernelSpec::Exponential { lambda: 1.0 }.cell_moment(0.0, 50.0).unwrap();
        assert_relative_eq!(m.get(0, 0), 1.0, max_relative = 1e-14);
        assert!(KernelSpec::Exponential { lambda: 1.0 }.cell_moment(1.0, 1.0).is_err());
        assert!(KernelSpec::Exponential { lambda: 1.0 }.cell_moment(-1.0, 1.0).is_err());
    }

    #[test]
    fn moments_are_additive() {
        for k in catalog() {
            for &(a, b, c) in &[(0.0, 0.1, 0.7), (0.2, 0.25, 3.0), (1.0, 1.001, 1.002)] {
                let ab = k.cell_moment(a, b).unwrap().get(0, 0);
                let bc = k.cell_moment(b, c).unwrap().get(0, 0);
                let ac = k.cell_moment(a, c).unwrap().get(0, 0);
                assert!(
                    (ab + bc - ac).abs() <= 1e-11 * ac.abs().max(1e-300),
                    "{k:?} on ({a}, {b}, {c}): {} vs {ac}",
                    ab + bc
                );
            }
        }
    }

    #[test]
    fn moments_match_quadrature_of_values() {
        for k in catalog() {
            for &(a, b) in &[(0.0, 0.3), (0.3, 1.1), (2.0, 4.0)] {
                let m = k.cell_moment(a, b).unwrap().get(0, 0);
                let q = crate::quad::integrate(|t| k.scalar_value(t), a, b, 1e-13)
                    .unwrap()
                    .value;
                assert!((m - q).abs() <= 1e-9 * q.abs().max(1e-12), "{k:?} [{a},{b}]: {m} vs {q}");
            }
        }
    }

    #[test]
    fn second_primitive_integrates_first() {
        for k in catalog() {
            for &t in &[0.05, 0.8, 3.0] {
                let p2 = k.second_primitive(t).unwrap().get(0, 0);
                let q = crate::quad::integrate(
                    |u| k.scalar_primitive(u).unwrap(),
                    0.0,
                    t,
                    1e-13,
                )
                .unwrap()
                .value;
                assert!((p2 - q).abs() <= 1e-9 * q.abs().max(1e-12), "{k:?} at {t}: {p2} vs {q}");
            }
        }
    }

    #[test]
    fn laplace_examples() {
        assert_eq!(KernelSpec::PowerLaw { alpha: 0.5 }.laplace(1.0).unwrap().get(0, 0), 1.0);
        assert_eq!(KernelSpec::Exponential { lambda: 1.0 }.laplace(1.0).unwrap().get(0, 0), 0.5);
        let b = KernelSpec::BesselK { lambda: 0.5 }.laplace(2.0).unwrap().get(0, 0);
        assert_relative_eq!(b, 0.4288819424803534, max_relative = 1e-12);
        assert!(KernelSpec::PowerLaw { alpha: 0.5 }.laplace(0.0).is_err());
    }

    #[test]
    fn tempered_partner_matches_its_series() {
        // λ^α[1 − Γ(−α,x)/Γ(−α)] = Σ_m (−1)^m λ^m t^{m−α} / (m! (m−α) Γ(−α)) for λt small
        let (alpha, lambda) = (0.5, 1.0);
        let k = KernelSpec::TemperedPartner { alpha, lambda };
        for t in [0.01_f64, 0.1, 0.5] {
            let mut s = 0.0;
            let mut fact = 1.0;
            for m in 0..40 {
                if m > 0 {
                    fact *= m as f64;
                }
                let mf = m as f64;
                s += (-lambda).powi(m) * t.powf(mf - alpha) / (fact * (mf - alpha) * gamma(-alpha));
            }
            assert_relative_eq!(k.scalar_value(t), s, max_relative = 1e-12);
        }
    }

    #[test]
    fn bessel_k_half_closed_form_changes_sign() {
        // t^{-1/4} J_{-1/2}(2√t) = cos(2√t)/√(πt)
        let k = KernelSpec::BesselK { lambda: 0.5 };
        for &t in &[0.1, 0.5, 0.7, 2.0, 9.0] {
            let expect = (2.0 * f64::sqrt(t)).cos() / (PI * t).sqrt();
            assert!((k.scalar_value(t) - expect).abs() < 1e-12);
        }
        assert!(k.scalar_value(0.5) > 0.0 && k.scalar_value(0.7) < 0.0);
    }

    #[test]
    fn limit_inverse() {
        assert!(KernelSpec::PowerLaw { alpha: 0.5 }.limit_inverse_at_zero().unwrap().is_zero());
        assert_eq!(
            KernelSpec::Exponential { lambda: 1.0 }.limit_inverse_at_zero().unwrap().get(0, 0),
            1.0
        );
        assert!(KernelSpec::OneMinusExp { lambda: 1.0 }.limit_inverse_at_zero().is_none());
        let d = KernelSpec::DiagonalOfScalars {
            components: vec![
                KernelSpec::PowerLaw { alpha: 0.5 },
                KernelSpec::Exponential { lambda: 2.0 },
            ],
        };
        let a0 = d.limit_inverse_at_zero().unwrap();
        assert_eq!((a0.get(0, 0), a0.get(1, 1)), (0.0, 1.0));
    }

    #[test]
    fn catalog_partners() {
        let x = KernelSpec::PowerLaw { alpha: 0.5 }.sonine_partner().unwrap();
        assert!(x.atom().is_zero());
        assert_eq!(
            x.regular(),
            &Regular::Kernel(KernelSpec::SoninePartnerOfPowerLaw { alpha: 0.5 })
        );
        let x = KernelSpec::Exponential { lambda: 1.0 }.sonine_partner().unwrap();
        assert_eq!(x.atom().get(0, 0), 1.0);
        assert_eq!(x.regular(), &Regular::Kernel(KernelSpec::Constant { value: 1.0 }));

        let k0 = SymMatrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 2.0]]).unwrap();
        let k = KernelSpec::scalar_times_matrix(KernelSpec::PowerLaw { alpha: 0.5 }, k0).unwrap();
        let x = k.sonine_partner().unwrap();
        match x.regular() {
            Regular::Kernel(KernelSpec::ScalarTimesMatrix { scalar, k0 }) => {
                assert_eq!(**scalar, KernelSpec::SoninePartnerOfPowerLaw { alpha: 0.5 });
                assert_relative_eq!(k0.get(0, 0), 2.0 / 3.0, max_relative = 1e-14);
                assert_relative_eq!(k0.get(0, 1), -1.0 / 3.0, max_relative = 1e-14);
            }
            other => panic!("unexpected partner {other:?}"),
        }
        assert!(matches!(
            KernelSpec::OneMinusExp { lambda: 1.0 }.sonine_partner(),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn transform_products_of_catalog_pairs() {
        // Ã(p) X̃(p) p = 1 with X̃ = atom + F̃
        let kernels = [
            KernelSpec::PowerLaw { alpha: 0.3 },
            KernelSpec::TemperedPowerLaw { alpha: 0.6, lambda: 2.0 },
            KernelSpec::Exponential { lambda: 1.0 },
            KernelSpec::BesselK { lambda: 0.5 },
            KernelSpec::Constant { value: 3.0 },
        ];
        for k in kernels {
            let x = k.sonine_partner().unwrap();
            let f = match x.regular() {
                Regular::Kernel(f) => f.clone(),
                _ => unreachable!(),
            };
            for &p in &[0.3, 1.0, 7.0] {
                let prod = k.laplace(p).unwrap().get(0, 0)
                    * (x.atom().get(0, 0) + f.laplace(p).unwrap().get(0, 0))
                    * p;
                assert_relative_eq!(prod, 1.0, max_relative = 1e-13);
            }
        }
    }

    #[test]
    fn class_tags() {
        assert!(KernelSpec::PowerLaw { alpha: 0.5 }.is_licm());
        assert!(!KernelSpec::OneMinusExp { lambda: 1.0 }.is_licm());
        assert!(KernelSpec::OneMinusExp { lambda: 1.0 }.is_bernstein());
        assert!(!KernelSpec::BesselK { lambda: 0.5 }.is_licm());
        assert!(!KernelSpec::BesselI { lambda: 0.5 }.is_bernstein());
        assert!(KernelSpec::PowerLaw { alpha: 0.5 }.is_singular_at_zero());
        assert!(!KernelSpec::Exponential { lambda: 0.5 }.is_singular_at_zero());
    }
}
