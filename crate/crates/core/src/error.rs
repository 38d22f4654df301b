use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{what} = {value} is out of range {range}")]
    OutOfRange {
        what: &'static str,
        value: f64,
        range: String,
    },

    /// Cholesky factorization broke down; `minor` is the 1-based order of the
    /// first leading principal minor that is not positive.
    #[error("matrix is not positive definite: leading minor of order {minor} is not positive")]
    SingularMatrix { minor: usize },

    #[error("numeric overflow in {location}")]
    NumericOverflow { location: String },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("unsupported kernel: {0}")]
    UnsupportedKernel(String),

    /// The leading moment of a convolution kernel is not (numerically) positive
    /// definite, which means the kernel vanishes identically along some direction.
    #[error("leading moment is singular: {reason}")]
    SingularLeadingMoment { reason: String },

    #[error("Laplace transform is singular at p = {p} (probe {probe}, v^T A(p) v = {margin:e})")]
    SingularTransform { p: f64, probe: usize, margin: f64 },

    #[error("right-hand side failed at step {step}: {message}")]
    Callback { step: usize, message: String },

    #[error("quadrature did not converge on [{a}, {b}]: estimate {estimate:e}, error {error:e}")]
    Quadrature {
        a: f64,
        b: f64,
        estimate: f64,
        error: f64,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn out_of_range(what: &'static str, value: f64, range: impl Into<String>) -> Self {
        Error::OutOfRange {
            what,
            value,
            range: range.into(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn messages_name_the_offending_value() {
        let e = Error::out_of_range("alpha", 1.5, "(0, 1)");
        assert_eq!(e.to_string(), "alpha = 1.5 is out of range (0, 1)");
        let e = Error::SingularTransform { p: 2.0, probe: 1, margin: -1e-3 };
        assert!(e.to_string().contains("p = 2"));
    }
}
