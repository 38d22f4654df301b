//! Matrix-valued convolution equations with completely monotone and
//! Bernstein kernels: Sonine pairs, the duality equation `A∗X = t·I`, the
//! generalized Caputo derivative `D_A` and its integral `J_A`.

// range checks are written `!(x > 0.0)` so that NaN is rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod calculus;
pub mod cli;
pub mod convolve;
pub mod error;
pub mod grid;
pub mod kernels;
pub mod laplace;
pub mod linalg;
pub mod probe;
pub mod quad;
pub mod sampled;
pub mod special;

pub use analysis::{CertOptions, CertReport, Property, Verdict};
pub use convolve::{build_moments, solve_duality, solve_sonine, KernelInput, MomentTable};
pub use error::{Error, Result};
pub use grid::Grid;
pub use kernels::{series_partner, KernelSpec, SeriesPair};
pub use linalg::{Matrix, SymMatrix};
pub use probe::ProbeSet;
pub use sampled::{DeltaPlusFunction, Regular, SampledMatrixFunction};
