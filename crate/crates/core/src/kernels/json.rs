//! JSON form of kernel specs:
//! `{"variant": "...", "params": {...}, "K0": [[...]]}`.

use serde::{Deserialize, Serialize};

use super::KernelSpec;
use crate::error::{Error, Result};
use crate::linalg::SymMatrix;

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Params {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    lambda: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    value: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    coefficients: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    scalar: Option<Box<KernelSpec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    components: Option<Vec<KernelSpec>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct KernelDoc {
    variant: String,
    #[serde(default)]
    params: Params,
    #[serde(rename = "K0", default, skip_serializing_if = "Option::is_none")]
    k0: Option<Vec<Vec<f64>>>,
}

fn need<T>(x: Option<T>, variant: &str, field: &str) -> Result<T> {
    x.ok_or_else(|| Error::invalid(format!("{variant}: missing params.{field}")))
}

impl TryFrom<KernelDoc> for KernelSpec {
    type Error = Error;

    fn try_from(doc: KernelDoc) -> Result<Self> {
        let v = doc.variant.as_str();
        let p = doc.params;
        if doc.k0.is_some() && v != "scalar_times_matrix" {
            return Err(Error::invalid(format!("{v}: K0 is only allowed for scalar_times_matrix")));
        }
        let spec = match v {
            "power_law" => KernelSpec::PowerLaw {
                alpha: need(p.alpha, v, "alpha")?,
            },
            "sonine_partner_of_power_law" => KernelSpec::SoninePartnerOfPowerLaw {
                alpha: need(p.alpha, v, "alpha")?,
            },
            "tempered_power_law" => KernelSpec::TemperedPowerLaw {
                alpha: need(p.alpha, v, "alpha")?,
                lambda: need(p.lambda, v, "lambda")?,
            },
            "tempered_partner" => KernelSpec::TemperedPartner {
                alpha: need(p.alpha, v, "alpha")?,
                lambda: need(p.lambda, v, "lambda")?,
            },
            "exponential" => KernelSpec::Exponential {
                lambda: need(p.lambda, v, "lambda")?,
            },
            "one_minus_exp" => KernelSpec::OneMinusExp {
                lambda: need(p.lambda, v, "lambda")?,
            },
            "bessel_k" => KernelSpec::BesselK {
                lambda: need(p.lambda, v, "lambda")?,
            },
            "bessel_i" => KernelSpec::BesselI {
                lambda: need(p.lambda, v, "lambda")?,
            },
            "constant" => KernelSpec::Constant {
                value: need(p.value, v, "value")?,
            },
            "series" => KernelSpec::Series {
                alpha: need(p.alpha, v, "alpha")?,
                coefficients: need(p.coefficients, v, "coefficients")?,
            },
            "scalar_times_matrix" => KernelSpec::ScalarTimesMatrix {
                scalar: need(p.scalar, v, "scalar")?,
                k0: SymMatrix::from_rows(&need(doc.k0, v, "K0")?)?,
            },
            "diagonal_of_scalars" => KernelSpec::DiagonalOfScalars {
                components: need(p.components, v, "components")?,
            },
            other => return Err(Error::invalid(format!("unknown kernel variant \"{other}\""))),
        };
        spec.validate()?;
        Ok(spec)
    }
}

impl From<&KernelSpec> for KernelDoc {
    fn from(spec: &KernelSpec) -> Self {
        let mut params = Params::default();
        let mut k0 = None;
        match spec {
            KernelSpec::PowerLaw { alpha } | KernelSpec::SoninePartnerOfPowerLaw { alpha } => {
                params.alpha = Some(*alpha)
            }
            KernelSpec::TemperedPowerLaw { alpha, lambda }
            | KernelSpec::TemperedPartner { alpha, lambda } => {
                params.alpha = Some(*alpha);
                params.lambda = Some(*lambda);
            }
            KernelSpec::Exponential { lambda }
            | KernelSpec::OneMinusExp { lambda }
            | KernelSpec::BesselK { lambda }
            | KernelSpec::BesselI { lambda } => params.lambda = Some(*lambda),
            KernelSpec::Constant { value } => params.value = Some(*value),
            KernelSpec::Series {
                alpha,
                coefficients,
            } => {
                params.alpha = Some(*alpha);
                params.coefficients = Some(coefficients.clone());
            }
            KernelSpec::ScalarTimesMatrix { scalar, k0: m } => {
                params.scalar = Some(scalar.clone());
                k0 = Some(m.to_rows());
            }
            KernelSpec::DiagonalOfScalars { components } => {
                params.components = Some(components.clone())
            }
        }
        KernelDoc {
            variant: spec.variant_name().to_string(),
            params,
            k0,
        }
    }
}

impl Serialize for KernelSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        KernelDoc::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for KernelSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let doc = KernelDoc::deserialize(d)?;
        KernelSpec::try_from(doc).map_err(serde::de::Error::custom)
    }
}

impl KernelSpec {
    /// Parses a kernel document. Syntax and validation errors carry the
    /// line and column reported by the JSON reader.
    pub fn from_json(text: &str) -> std::result::Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("kernel specs always serialize")
    }
}
