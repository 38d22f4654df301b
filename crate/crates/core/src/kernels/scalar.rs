//! Closed forms for the scalar catalog kernels: values, first and second
//! primitives, exact cell moments and Laplace transforms.

use super::KernelSpec;
use crate::error::{Error, Result};
use crate::quad;
use crate::special::{
    bessel_i, bessel_j, gamma, gamma_p, gamma_q, ln_gamma, lower_gamma, upper_gamma,
    upper_gamma_negative,
};

const QUAD_TOL: f64 = 1e-12;
// the Bessel series cancel at large t, capping the integrand's own accuracy
const BESSEL_QUAD_TOL: f64 = 1e-9;

/// `b^s - a^s` for `0 <= a < b`, without cancellation for narrow cells.
fn pow_diff(a: f64, b: f64, s: f64) -> f64 {
    if a == 0.0 {
        return b.powf(s);
    }
    a.powf(s) * (s * ((b - a) / a).ln_1p()).exp_m1()
}

impl KernelSpec {
    /// Value of a scalar kernel at `t > 0`, without argument checks.
    pub(crate) fn scalar_value(&self, t: f64) -> f64 {
        match *self {
            KernelSpec::PowerLaw { alpha } => ((alpha - 1.0) * t.ln() - ln_gamma(alpha)).exp(),
            KernelSpec::SoninePartnerOfPowerLaw { alpha } => {
                (-alpha * t.ln() - ln_gamma(1.0 - alpha)).exp()
            }
            KernelSpec::TemperedPowerLaw { alpha, lambda } => {
                ((alpha - 1.0) * t.ln() - lambda * t - ln_gamma(alpha)).exp()
            }
            KernelSpec::TemperedPartner { alpha, lambda } => {
                let x = lambda * t;
                lambda.powf(alpha) * (1.0 - upper_gamma_negative(-alpha, x) / gamma(-alpha))
            }
            KernelSpec::Exponential { lambda } => (-lambda * t).exp(),
            KernelSpec::OneMinusExp { lambda } => -(-lambda * t).exp_m1(),
            KernelSpec::BesselK { lambda } => {
                (-0.5 * lambda * t.ln()).exp() * bessel_j(-lambda, 2.0 * t.sqrt())
            }
            KernelSpec::BesselI { lambda } => {
                (0.5 * (lambda - 1.0) * t.ln()).exp() * bessel_i(lambda - 1.0, 2.0 * t.sqrt())
            }
            KernelSpec::Constant { value } => value,
            KernelSpec::Series {
                alpha,
                ref coefficients,
            } => {
                let poly = coefficients.iter().rev().fold(0.0, |acc, &a| acc * t + a);
                t.powf(alpha - 1.0) * poly
            }
            KernelSpec::ScalarTimesMatrix { .. } | KernelSpec::DiagonalOfScalars { .. } => {
                unreachable!("scalar_value on a matrix kernel")
            }
        }
    }

    /// Finite limit at `t → 0+`, or `None` when the kernel blows up there.
    pub(crate) fn scalar_value_at_zero(&self) -> Option<f64> {
        match *self {
            KernelSpec::PowerLaw { .. }
            | KernelSpec::SoninePartnerOfPowerLaw { .. }
            | KernelSpec::TemperedPowerLaw { .. }
            | KernelSpec::TemperedPartner { .. }
            | KernelSpec::BesselK { .. } => None,
            KernelSpec::Exponential { .. } => Some(1.0),
            KernelSpec::OneMinusExp { .. } => Some(0.0),
            KernelSpec::BesselI { lambda } => {
                if lambda < 1.0 {
                    None
                } else if lambda == 1.0 {
                    Some(1.0)
                } else {
                    Some(0.0)
                }
            }
            KernelSpec::Constant { value } => Some(value),
            KernelSpec::Series {
                ref coefficients, ..
            } => {
                if coefficients[0] != 0.0 {
                    None
                } else {
                    Some(0.0)
                }
            }
            KernelSpec::ScalarTimesMatrix { .. } | KernelSpec::DiagonalOfScalars { .. } => {
                unreachable!("scalar_value_at_zero on a matrix kernel")
            }
        }
    }

    /// `∫_0^t k`.
    pub(crate) fn scalar_primitive(&self, t: f64) -> Result<f64> {
        if t <= 0.0 {
            return Ok(0.0);
        }
        Ok(match *self {
            KernelSpec::PowerLaw { alpha } => (alpha * t.ln() - ln_gamma(alpha + 1.0)).exp(),
            KernelSpec::SoninePartnerOfPowerLaw { alpha } => {
                ((1.0 - alpha) * t.ln() - ln_gamma(2.0 - alpha)).exp()
            }
            KernelSpec::TemperedPowerLaw { alpha, lambda } => {
                gamma_p(alpha, lambda * t) / lambda.powf(alpha)
            }
            KernelSpec::TemperedPartner { alpha, lambda } => {
                tempered_partner_primitive(alpha, lambda, t)
            }
            KernelSpec::Exponential { lambda } => -(-lambda * t).exp_m1() / lambda,
            KernelSpec::OneMinusExp { lambda } => t + (-lambda * t).exp_m1() / lambda,
            KernelSpec::Constant { value } => value * t,
            KernelSpec::Series {
                alpha,
                ref coefficients,
            } => coefficients
                .iter()
                .enumerate()
                .map(|(n, a)| {
                    let s = n as f64 + alpha;
                    a * t.powf(s) / s
                })
                .sum(),
            KernelSpec::BesselK { .. } | KernelSpec::BesselI { .. } => {
                quad::integrate(|v| self.scalar_value(v), 0.0, t, BESSEL_QUAD_TOL)?.value
            }
            KernelSpec::ScalarTimesMatrix { .. } | KernelSpec::DiagonalOfScalars { .. } => {
                unreachable!("scalar_primitive on a matrix kernel")
            }
        })
    }

    /// `∫_0^t ∫_0^u k(v) dv du = ∫_0^t (t - v) k(v) dv`.
    pub(crate) fn scalar_second_primitive(&self, t: f64) -> Result<f64> {
        if t <= 0.0 {
            return Ok(0.0);
        }
        Ok(match *self {
            KernelSpec::PowerLaw { alpha } => ((alpha + 1.0) * t.ln() - ln_gamma(alpha + 2.0)).exp(),
            KernelSpec::SoninePartnerOfPowerLaw { alpha } => {
                ((2.0 - alpha) * t.ln() - ln_gamma(3.0 - alpha)).exp()
            }
            KernelSpec::TemperedPowerLaw { alpha, lambda } => {
                let x = lambda * t;
                (t * gamma_p(alpha, x) - alpha / lambda * gamma_p(alpha + 1.0, x))
                    / lambda.powf(alpha)
            }
            KernelSpec::Exponential { lambda } => {
                (lambda * t + (-lambda * t).exp_m1()) / (lambda * lambda)
            }
            KernelSpec::OneMinusExp { lambda } => {
                0.5 * t * t - (lambda * t + (-lambda * t).exp_m1()) / (lambda * lambda)
            }
            KernelSpec::Constant { value } => 0.5 * value * t * t,
            KernelSpec::Series {
                alpha,
                ref coefficients,
            } => coefficients
                .iter()
                .enumerate()
                .map(|(n, a)| {
                    let s = n as f64 + alpha;
                    a * t.powf(s + 1.0) / (s * (s + 1.0))
                })
                .sum(),
            KernelSpec::TemperedPartner { .. } => {
                let mut failure = None;
                let q = quad::integrate(
                    |u| match self.scalar_primitive(u) {
                        Ok(v) => v,
                        Err(e) => {
                            failure = Some(e);
                            f64::NAN
                        }
                    },
                    0.0,
                    t,
                    QUAD_TOL,
                );
                if let Some(e) = failure {
                    return Err(e);
                }
                q?.value
            }
            KernelSpec::BesselK { .. } | KernelSpec::BesselI { .. } => {
                quad::integrate(|v| (t - v) * self.scalar_value(v), 0.0, t, BESSEL_QUAD_TOL)?.value
            }
            KernelSpec::ScalarTimesMatrix { .. } | KernelSpec::DiagonalOfScalars { .. } => {
                unreachable!("scalar_second_primitive on a matrix kernel")
            }
        })
    }

    /// `∫_a^b k`, exact where an antiderivative is known.
    pub(crate) fn scalar_cell_moment(&self, a: f64, b: f64) -> Result<f64> {
        Ok(match *self {
            KernelSpec::PowerLaw { alpha } => pow_diff(a, b, alpha) / gamma(alpha + 1.0),
            KernelSpec::SoninePartnerOfPowerLaw { alpha } => {
                pow_diff(a, b, 1.0 - alpha) / gamma(2.0 - alpha)
            }
            KernelSpec::TemperedPowerLaw { alpha, lambda } => {
                let (xa, xb) = (lambda * a, lambda * b);
                let d = if xa >= alpha + 1.0 {
                    gamma_q(alpha, xa) - gamma_q(alpha, xb)
                } else {
                    gamma_p(alpha, xb) - gamma_p(alpha, xa)
                };
                d / lambda.powf(alpha)
            }
            KernelSpec::Exponential { lambda } => {
                (-lambda * a).exp() * -(-lambda * (b - a)).exp_m1() / lambda
            }
            KernelSpec::OneMinusExp { lambda } => {
                (b - a) - (-lambda * a).exp() * -(-lambda * (b - a)).exp_m1() / lambda
            }
            KernelSpec::Constant { value } => value * (b - a),
            KernelSpec::Series {
                alpha,
                ref coefficients,
            } => coefficients
                .iter()
                .enumerate()
                .map(|(n, c)| {
                    let s = n as f64 + alpha;
                    c * pow_diff(a, b, s) / s
                })
                .sum(),
            KernelSpec::TemperedPartner { alpha, lambda } => {
                tempered_partner_primitive(alpha, lambda, b)
                    - tempered_partner_primitive(alpha, lambda, a)
            }
            KernelSpec::BesselK { .. } | KernelSpec::BesselI { .. } => {
                quad::integrate(|v| self.scalar_value(v), a, b, BESSEL_QUAD_TOL)?.value
            }
            KernelSpec::ScalarTimesMatrix { .. } | KernelSpec::DiagonalOfScalars { .. } => {
                unreachable!("scalar_cell_moment on a matrix kernel")
            }
        })
    }

    /// Closed-form Laplace transform at `p > 0`.
    pub(crate) fn scalar_laplace(&self, p: f64) -> Result<f64> {
        Ok(match *self {
            KernelSpec::PowerLaw { alpha } => p.powf(-alpha),
            KernelSpec::SoninePartnerOfPowerLaw { alpha } => p.powf(alpha - 1.0),
            KernelSpec::TemperedPowerLaw { alpha, lambda } => (p + lambda).powf(-alpha),
            KernelSpec::TemperedPartner { alpha, lambda } => (p + lambda).powf(alpha) / p,
            KernelSpec::Exponential { lambda } => 1.0 / (p + lambda),
            KernelSpec::OneMinusExp { lambda } => lambda / (p * (p + lambda)),
            KernelSpec::BesselK { lambda } => (-1.0 / p).exp() * p.powf(lambda - 1.0),
            KernelSpec::BesselI { lambda } => (1.0 / p).exp() * p.powf(-lambda),
            KernelSpec::Constant { value } => value / p,
            KernelSpec::Series {
                alpha,
                ref coefficients,
            } => coefficients
                .iter()
                .enumerate()
                .map(|(n, a)| {
                    let s = n as f64 + alpha;
                    a * (ln_gamma(s) - s * p.ln()).exp()
                })
                .sum(),
            KernelSpec::ScalarTimesMatrix { .. } | KernelSpec::DiagonalOfScalars { .. } => {
                return Err(Error::Unsupported("scalar transform of a matrix kernel".into()))
            }
        })
    }
}

/// `∫_0^t λ^α [1 − Γ(−α, λs)/Γ(−α)] ds`, from `∫Γ(s,x)dx = xΓ(s,x) − Γ(s+1,x)`.
fn tempered_partner_primitive(alpha: f64, lambda: f64, t: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    let x = lambda * t;
    let s = 1.0 - alpha;
    let head = ((1.0 - alpha) * x.ln() - x).exp();
    // bracket = ∫_0^x Γ(−α, y) dy
    let bracket = if x < 1.0 {
        (head + (x + alpha) * lower_gamma(s, x) - x * gamma(s)) / alpha
    } else {
        (head - (x + alpha) * upper_gamma(s, x)) / alpha + gamma(s)
    };
    lambda.powf(alpha) * t - lambda.powf(alpha - 1.0) / gamma(-alpha) * bracket
}
