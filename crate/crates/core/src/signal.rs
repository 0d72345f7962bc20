//! Exponential-sum signals `Z(x) = Σ γ_k e^{λ_k x}` built from strictly
//! proper rational functions `Q/P` with simple poles in `Re λ < 0`.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::polynomial::{
    check_separation, compute_residues, find_roots, is_conjugate_closed, PoleResidue, Polynomial,
};

/// Relative tolerance of the conjugate-pairing test.
pub const CONJUGATE_TOL: f64 = 1e-10;

/// Which degree condition a rational spec must satisfy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strictness {
    /// `deg P > deg Q + 2`.
    #[default]
    PaperStrict,
    /// `deg P >= deg Q + 1` (strictly proper).
    Relaxed,
}

/// Rational data `Q_n / P_l` defining a signal through its partial fractions.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalSpec {
    pub numerator: Polynomial,
    pub denominator: Polynomial,
    pub strictness: Strictness,
}

impl RationalSpec {
    pub fn new(numerator: Polynomial, denominator: Polynomial, strictness: Strictness) -> Self {
        Self {
            numerator,
            denominator,
            strictness,
        }
    }

    /// `(n, l)`; a zero numerator counts as degree 0.
    pub fn degrees(&self) -> (usize, Option<usize>) {
        (
            self.numerator.degree().unwrap_or(0),
            self.denominator.degree(),
        )
    }

    pub fn check_degrees(&self) -> Result<()> {
        let (n, l) = self.degrees();
        let l = match l {
            Some(l) if l >= 1 => l,
            _ => return invalid("denominator must have degree >= 1"),
        };
        match self.strictness {
            Strictness::PaperStrict if l <= n + 2 => invalid(format!(
                "degree condition l > n + 2 violated (l = {l}, n = {n}); use relaxed strictness"
            )),
            Strictness::Relaxed if l < n + 1 => invalid(format!(
                "rational function is not strictly proper (l = {l}, n = {n})"
            )),
            _ => Ok(()),
        }
    }

    /// `Q(z) / P(z)`.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.numerator.eval(z) / self.denominator.eval(z)
    }
}

/// Supremum of the admissible sector angle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SectorInfo {
    pub phi0_sup: f64,
}

/// `Z(x) = Σ γ_k e^{λ_k x}` with every `Re λ_k < 0` and pairwise distinct
/// poles.
#[derive(Debug, Clone, PartialEq)]
pub struct ExponentialSum {
    terms: Vec<PoleResidue>,
    real_signal: bool,
    warnings: Vec<String>,
}

impl ExponentialSum {
    /// Validates pole placement and separation, and detects conjugate
    /// closure.
    pub fn new(terms: Vec<PoleResidue>) -> Result<Self> {
        for t in &terms {
            if !(t.pole.re < 0.0) || !t.pole.is_finite() || !t.residue.is_finite() {
                return Err(Error::PoleOutsideHalfPlane { pole: t.pole });
            }
        }
        let poles: Vec<Complex64> = terms.iter().map(|t| t.pole).collect();
        check_separation(&poles)?;
        let real_signal = is_conjugate_closed(&terms, CONJUGATE_TOL);
        Ok(Self {
            terms,
            real_signal,
            warnings: Vec::new(),
        })
    }

    /// The signal that is identically zero.
    pub fn zero() -> Self {
        Self {
            terms: Vec::new(),
            real_signal: true,
            warnings: Vec::new(),
        }
    }

    pub fn terms(&self) -> &[PoleResidue] {
        &self.terms
    }

    pub fn is_real_signal(&self) -> bool {
        self.real_signal
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Smallest decay rate `min α_k`; 1 for the zero signal.
    pub fn alpha_min(&self) -> f64 {
        self.terms
            .iter()
            .map(|t| -t.pole.re)
            .reduce(f64::min)
            .unwrap_or(1.0)
    }

    /// `Σ |γ_k|`.
    pub fn residue_mass(&self) -> f64 {
        self.terms.iter().map(|t| t.residue.norm()).sum()
    }
}

/// For real-coefficient denominators: snaps roots that are nearer the real
/// axis than to any conjugate partner onto it, and makes pairs exact
/// conjugates.
fn symmetrize_roots(roots: &mut [Complex64]) {
    let n = roots.len();
    let mut done = vec![false; n];
    for i in 0..n {
        if done[i] {
            continue;
        }
        let target = roots[i].conj();
        let partner = (0..n).filter(|&j| j != i && !done[j]).min_by(|&a, &b| {
            (roots[a] - target)
                .norm()
                .total_cmp(&(roots[b] - target).norm())
        });
        let self_dist = roots[i].im.abs();
        match partner {
            Some(j) if (roots[j] - target).norm() < self_dist => {
                let avg = 0.5 * (roots[i] + roots[j].conj());
                roots[i] = avg;
                roots[j] = avg.conj();
                done[j] = true;
            }
            _ => roots[i].im = 0.0,
        }
        done[i] = true;
    }
}

/// Builds the signal whose Laplace transform is `Q/P`.
///
/// Roots of `P` are found numerically, residues are `Q(λ)/P'(λ)`. A relaxed
/// spec outside `deg P > deg Q + 2` carries a warning on the result.
pub fn build_model(spec: &RationalSpec, tol: f64) -> Result<ExponentialSum> {
    spec.check_degrees()?;
    let mut roots = find_roots(&spec.denominator, tol)?;
    if spec.denominator.has_real_coeffs() {
        symmetrize_roots(&mut roots);
    }
    roots.sort_by(|a, b| b.re.total_cmp(&a.re).then(b.im.total_cmp(&a.im)));
    if let Some(bad) = roots.iter().find(|r| !(r.re < 0.0)) {
        return Err(Error::PoleOutsideHalfPlane { pole: *bad });
    }
    let mut terms = compute_residues(&spec.numerator, &spec.denominator, &roots)?;
    if spec.numerator.has_real_coeffs() && spec.denominator.has_real_coeffs() {
        for t in terms.iter_mut().filter(|t| t.pole.im == 0.0) {
            t.residue.im = 0.0;
        }
    }
    let mut model = ExponentialSum::new(terms)?;
    let (n, l) = spec.degrees();
    let l = l.unwrap_or(0);
    if spec.strictness == Strictness::Relaxed && l < n + 3 {
        model.warnings.push(format!(
            "relaxed model with l = {l}, n = {n} lies outside the hypothesis l > n + 2"
        ));
    }
    Ok(model)
}

/// `Z(x)`; the imaginary part is dropped for real signals.
pub fn eval_signal(model: &ExponentialSum, x: f64) -> Complex64 {
    let v: Complex64 = model
        .terms
        .iter()
        .map(|t| t.residue * (t.pole * x).exp())
        .sum();
    if model.real_signal {
        Complex64::new(v.re, 0.0)
    } else {
        v
    }
}

/// Raw `Σ γ_k e^{λ_k x}` with no imaginary-part clean-up.
pub fn eval_signal_raw(model: &ExponentialSum, x: f64) -> Complex64 {
    model
        .terms
        .iter()
        .map(|t| t.residue * (t.pole * x).exp())
        .sum()
}

/// Half-line extension: `2Z(x)` for `x > 0`, `0` for `x < 0`, and the
/// midpoint `Z(0)` at the origin.
pub fn plus_extension(model: &ExponentialSum, x: f64) -> Complex64 {
    if x > 0.0 {
        eval_signal(model, x) * 2.0
    } else if x < 0.0 {
        Complex64::new(0.0, 0.0)
    } else {
        eval_signal(model, 0.0)
    }
}

/// `min_k arctan(α_k / |β_k|)`, real poles contributing `π/2`.
pub fn admissible_sector(model: &ExponentialSum) -> SectorInfo {
    let phi0_sup = model
        .terms
        .iter()
        .map(|t| {
            let alpha = -t.pole.re;
            let beta = t.pole.im.abs();
            if beta == 0.0 {
                FRAC_PI_2
            } else {
                (alpha / beta).atan()
            }
        })
        .fold(FRAC_PI_2, f64::min);
    SectorInfo { phi0_sup }
}
