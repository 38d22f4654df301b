//! Power-series Sonine partners.
//!
//! For `k(t) = Σ a_n t^{n+α−1}` the partner `l(t) = Σ b_m t^{m−α}` follows
//! from matching powers in `k∗l = 1`, since
//! `t^{n+α−1} ∗ t^{m−α} = B(n+α, m+1−α) t^{n+m}`.

use super::KernelSpec;
use crate::error::{Error, Result};
use crate::special::beta;

/// A truncated series pair `(k, l)` with `k∗l = 1 + O(t^{M+1})`.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesPair {
    pub alpha: f64,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
}

impl SeriesPair {
    /// Truncation order `M`.
    pub fn order(&self) -> usize {
        self.b.len() - 1
    }

    /// `Σ_{n+m=r} a_n b_m B(n+α, m+1−α) − [r = 0]` for `r = 0..=M`.
    pub fn pairing_residuals(&self) -> Vec<f64> {
        let alpha = self.alpha;
        (0..=self.order())
            .map(|r| {
                let s: f64 = (0..=r)
                    .map(|n| {
                        let m = r - n;
                        self.a[n] * self.b[m] * beta(n as f64 + alpha, m as f64 + 1.0 - alpha)
                    })
                    .sum();
                if r == 0 {
                    s - 1.0
                } else {
                    s
                }
            })
            .collect()
    }

    pub fn kernel(&self) -> KernelSpec {
        KernelSpec::Series {
            alpha: self.alpha,
            coefficients: self.a.clone(),
        }
    }

    pub fn partner(&self) -> KernelSpec {
        KernelSpec::Series {
            alpha: 1.0 - self.alpha,
            coefficients: self.b.clone(),
        }
    }
}

/// Partner coefficients `b_0..b_M` of `Σ a_n t^{n+α−1}`. Missing `a_n` are
/// taken as zero and coefficients past `M` are ignored.
pub fn series_partner(alpha: f64, a: &[f64], order: usize) -> Result<SeriesPair> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::out_of_range("alpha", alpha, "(0, 1)"));
    }
    let a0 = a.first().copied().unwrap_or(0.0);
    if a0 == 0.0 || !a0.is_finite() {
        return Err(Error::invalid("leading coefficient a_0 must be finite and nonzero"));
    }
    let mut a: Vec<f64> = a.iter().copied().take(order + 1).collect();
    a.resize(order + 1, 0.0);
    let mut b = Vec::with_capacity(order + 1);
    b.push(1.0 / (a0 * beta(alpha, 1.0 - alpha)));
    for r in 1..=order {
        let mut s = 0.0;
        for n in 1..=r {
            s += a[n] * b[r - n] * beta(n as f64 + alpha, (r - n) as f64 + 1.0 - alpha);
        }
        b.push(-s / (a0 * beta(alpha, r as f64 + 1.0 - alpha)));
    }
    if b.iter().any(|x| !x.is_finite()) {
        return Err(Error::NumericOverflow {
            location: "series partner recurrence".into(),
        });
    }
    Ok(SeriesPair { alpha, a, b })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::gamma;
    use approx::assert_relative_eq;

    #[test]
    fn power_law_is_its_own_leading_term() {
        let p = series_partner(0.5, &[1.0 / gamma(0.5)], 0).unwrap();
        assert_relative_eq!(p.b[0], 1.0 / gamma(0.5), max_relative = 1e-14);
        let p = series_partner(0.3, &[1.0 / gamma(0.3), 0.0, 0.0], 2).unwrap();
        assert_relative_eq!(p.b[0], 1.0 / gamma(0.7), max_relative = 1e-13);
        assert_eq!(&p.b[1..], &[0.0, 0.0]);
    }

    #[test]
    fn tempered_coefficients_pair_up() {
        let mut a = Vec::new();
        let mut fact = 1.0;
        for n in 0..=8 {
            if n > 0 {
                fact *= n as f64;
            }
            a.push((-1.0f64).powi(n) / (fact * gamma(0.5)));
        }
        let p = series_partner(0.5, &a, 8).unwrap();
        for r in p.pairing_residuals() {
            assert!(r.abs() <= 1e-12, "residual {r}");
        }
    }

    #[test]
    fn rejects_vanishing_leading_coefficient() {
        assert!(matches!(
            series_partner(0.5, &[0.0, 1.0], 3),
            Err(Error::InvalidArgument(_))
        ));
        assert!(series_partner(1.5, &[1.0], 3).is_err());
    }

    #[test]
    fn short_coefficient_lists_are_padded() {
        let p = series_partner(0.4, &[2.0], 4).unwrap();
        assert_eq!(p.a.len(), 5);
        assert_eq!(p.order(), 4);
        assert!(p.b[1..].iter().all(|&x| x == 0.0));
    }
}
