//! Shared fixtures for the criterion benches.

use num_complex::Complex64;
use plemelj::{
    build_model, ExponentialSum, Polynomial, RationalSpec, Strictness, DEFAULT_ROOT_TOL,
};

/// `1 / ((p+1)(p+2)(p+3))`.
pub fn triple_model() -> ExponentialSum {
    let spec = RationalSpec::new(
        Polynomial::from_real(&[1.0]),
        Polynomial::from_roots(&[
            Complex64::new(-1.0, 0.0),
            Complex64::new(-2.0, 0.0),
            Complex64::new(-3.0, 0.0),
        ]),
        Strictness::PaperStrict,
    );
    build_model(&spec, DEFAULT_ROOT_TOL).expect("valid model")
}

/// Degree-8 denominator with four damped oscillating pairs.
pub fn octic_spec() -> RationalSpec {
    let poles: Vec<Complex64> = [(0.3, 4.0), (1.0, 2.5), (2.2, 1.0), (4.0, 3.3)]
        .iter()
        .flat_map(|&(a, b)| [Complex64::new(-a, b), Complex64::new(-a, -b)])
        .collect();
    let den: Vec<f64> = Polynomial::from_roots(&poles)
        .coeffs()
        .iter()
        .map(|c| c.re)
        .collect();
    RationalSpec::new(
        Polynomial::from_real(&[0.5, -1.0, 0.25]),
        Polynomial::from_real(&den),
        Strictness::PaperStrict,
    )
}
