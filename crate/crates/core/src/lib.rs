//! Stieltjes (double Laplace) and double half-line Fourier transforms of
//! exponential-sum signals, their continuation across the negative real
//! axis, and recovery of the signal from the boundary value
//!
//! ```text
//! Z(s) = -(1/π) Im r(-s + i0),   r(p) = ∫_0^∞ Z(x) / (p + x) dx.
//! ```
//!
//! Signals are `Z(x) = Σ γ_k e^{λ_k x}` with `Re λ_k < 0`, obtained from the
//! partial fractions of a strictly proper rational function. Closed forms go
//! through the exponential integral; every one of them has a quadrature
//! twin in [`quadrature`] used by the suites in [`verify`].

// NaN-rejecting guards read `!(x > 0.0)` on purpose; rule constants are
// kept at their published digits.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod error;
pub mod polynomial;
pub mod quadrature;
pub mod signal;
pub mod special;
pub mod transforms;
pub mod verify;

pub use num_complex::Complex64;

pub use error::{Error, Result};
pub use polynomial::{
    compute_residues, find_roots, poly_derivative, poly_eval, PoleResidue, Polynomial,
    DEFAULT_ROOT_TOL,
};
pub use quadrature::{integrate_decaying, integrate_pv, integrate_ray, QuadResult};
pub use signal::{
    admissible_sector, build_model, eval_signal, plus_extension, ExponentialSum, RationalSpec,
    SectorInfo, Strictness,
};
pub use special::{e1, e1_boundary, e1_scaled, ei, BranchSide};
pub use transforms::{
    boundary_value, double_fourier, double_laplace, fourier_half, invert, laplace,
    mixed_transform_r, BoundaryValue, EvalMode,
};
pub use verify::{
    generate_models, generate_rational_specs, sweep, verify_all, verify_realpart_identity,
    verify_residue_normalization, verify_theorem1, verify_theorem2, EnsembleConfig, MemberReport,
    Spacing, SuiteTolerances, TransformGrid, VerificationReport,
};
