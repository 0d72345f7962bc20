//! Laplace, Stieltjes (double Laplace), half-line Fourier and double
//! half-line Fourier transforms of exponential sums, the boundary value of
//! the continued Stieltjes transform on the negative axis, and the signal
//! recovery `Z(s) = -Im r(-s + i0) / π`.
//!
//! Every transform has a closed form through `e^w E1(w)` and a quadrature
//! twin that shares none of that code.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, TAU};

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::quadrature::{integrate_decaying, integrate_pv, integrate_ray};
use crate::signal::{admissible_sector, eval_signal, ExponentialSum};
use crate::special::{e1_boundary_scaled, e1_scaled, BranchSide};

/// Absolute quadrature tolerance per unit of residue mass `Σ|γ_k|`.
pub const ORACLE_TOL: f64 = 1e-12;

const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EvalMode {
    #[default]
    ClosedForm,
    QuadratureOracle,
}

/// `r(-s + i0)` for `s > 0`, continued from `Re p > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryValue {
    pub s: f64,
    pub value: Complex64,
    pub side: BranchSide,
}

fn oracle_tol(model: &ExponentialSum) -> f64 {
    ORACLE_TOL * model.residue_mass().max(1.0)
}

fn z_of(model: &ExponentialSum) -> impl Fn(f64) -> Complex64 + '_ {
    move |x| eval_signal(model, x)
}

/// `e^w E1(w)` continued along the path on which `arg w` has reached
/// `phase` (not reduced mod 2π). Crossing the cut counterclockwise costs
/// `-2πi e^w`; landing on it picks the matching one-sided limit.
fn continued_e1_scaled(w: Complex64, phase: f64) -> Result<Complex64> {
    if w.im == 0.0 && w.re < 0.0 {
        let side = if phase > 0.0 {
            BranchSide::FromAbove
        } else {
            BranchSide::FromBelow
        };
        return e1_boundary_scaled(-w.re, side);
    }
    let principal = e1_scaled(w)?;
    if phase > FRAC_PI_2 && w.im < 0.0 {
        Ok(principal - I * TAU * w.exp())
    } else if phase < -FRAC_PI_2 && w.im > 0.0 {
        Ok(principal + I * TAU * w.exp())
    } else {
        Ok(principal)
    }
}

/// One Stieltjes term `∫_0^∞ e^{λx} / (p + x) dx = e^{-pλ} E1(-pλ)`,
/// continued to the cut plane in `p`.
fn stieltjes_term(pole: Complex64, p: Complex64) -> Result<Complex64> {
    let w = -p * pole;
    let phase = p.arg() + (-pole).arg();
    continued_e1_scaled(w, phase)
}

fn check_not_on_cut(p: Complex64) -> Result<()> {
    if p.im == 0.0 && p.re <= 0.0 {
        return Err(Error::BranchAmbiguity { z: p });
    }
    Ok(())
}

/// `L Z (p) = ∫_0^∞ e^{-px} Z(x) dx`.
pub fn laplace(model: &ExponentialSum, p: Complex64, mode: EvalMode) -> Result<Complex64> {
    for t in model.terms() {
        if (p - t.pole).norm() <= 1e-14 * t.pole.norm().max(1.0) {
            return Err(Error::EvaluationAtPole { pole: t.pole });
        }
    }
    match mode {
        EvalMode::ClosedForm => Ok(model.terms().iter().map(|t| t.residue / (p - t.pole)).sum()),
        EvalMode::QuadratureOracle => {
            let rate = model.alpha_min() + p.re;
            if !(rate > 0.0) {
                return invalid(format!(
                    "Laplace quadrature needs Re p > -alpha_min, got p = {p}"
                ));
            }
            let z = z_of(model);
            Ok(integrate_decaying(|x| (-p * x).exp() * z(x), rate, oracle_tol(model))?.value)
        }
    }
}

/// `r(p) = L L Z (p) = ∫_0^∞ Z(x) / (p + x) dx`, analytic off `(-∞, 0]`.
///
/// The closed form `Σ γ_k e^{-pλ_k} E1(-pλ_k)` is continued to the whole cut
/// plane. On the cut itself use [`boundary_value`].
pub fn double_laplace(model: &ExponentialSum, p: Complex64, mode: EvalMode) -> Result<Complex64> {
    check_not_on_cut(p)?;
    match mode {
        EvalMode::ClosedForm => {
            let mut sum = Complex64::new(0.0, 0.0);
            for t in model.terms() {
                sum += t.residue * stieltjes_term(t.pole, p)?;
            }
            Ok(sum)
        }
        EvalMode::QuadratureOracle => {
            let z = z_of(model);
            Ok(integrate_decaying(|x| z(x) / (p + x), model.alpha_min(), oracle_tol(model))?.value)
        }
    }
}

/// Iterated form `∫_0^∞ e^{-pt} (L Z)(t) dt`, `Re p > 0`, by quadrature over
/// the closed-form inner transform.
pub fn double_laplace_iterated(model: &ExponentialSum, p: Complex64) -> Result<Complex64> {
    if !(p.re > 0.0) {
        return invalid(format!("iterated Laplace needs Re p > 0, got {p}"));
    }
    let inner = |t: f64| -> Complex64 {
        model
            .terms()
            .iter()
            .map(|term| term.residue / (t - term.pole))
            .sum()
    };
    Ok(integrate_decaying(|t| (-p * t).exp() * inner(t), p.re, oracle_tol(model))?.value)
}

/// `F0 Z (y) = ∫_0^∞ e^{iyx} Z(x) dx = Σ -γ_k / (λ_k + iy)`.
pub fn fourier_half(model: &ExponentialSum, y: f64) -> Complex64 {
    fourier_half_continued(model, Complex64::new(y, 0.0))
}

/// Analytic continuation of [`fourier_half`] to complex `y` (poles at
/// `y = iλ_k`, all in the lower half-plane).
pub fn fourier_half_continued(model: &ExponentialSum, y: Complex64) -> Complex64 {
    model
        .terms()
        .iter()
        .map(|t| -t.residue / (t.pole + I * y))
        .sum()
}

/// Rotation angle used by the ray oracles: `π/4` into the pole-free upper
/// half-plane, `-min(φ0/2, π/4)` into the lower one.
pub fn oracle_ray_angle(model: &ExponentialSum, upward: bool) -> f64 {
    if upward {
        FRAC_PI_4
    } else {
        -(admissible_sector(model).phi0_sup * 0.5).min(FRAC_PI_4)
    }
}

/// `r_F(s) = F0 F0 Z (s) = ∫_0^∞ e^{isy} (F0 Z)(y) dy`, `s ≠ 0`.
///
/// For `s > 0` this is `i r(s)`; for `s < 0` it is the boundary value of
/// the function regular in `Im p > 0`, i.e. `i r(s + i0)`.
pub fn double_fourier(model: &ExponentialSum, s: f64, mode: EvalMode) -> Result<Complex64> {
    if s == 0.0 || !s.is_finite() {
        return invalid("double Fourier transform needs s != 0");
    }
    match mode {
        EvalMode::ClosedForm => {
            let r = if s > 0.0 {
                double_laplace(model, Complex64::new(s, 0.0), EvalMode::ClosedForm)?
            } else {
                boundary_value(model, -s)?.value
            };
            Ok(I * r)
        }
        EvalMode::QuadratureOracle => {
            let theta = oracle_ray_angle(model, s > 0.0);
            let rate = s.abs() * theta.sin().abs();
            integrate_ray(
                |y| (I * s * y).exp() * fourier_half_continued(model, y),
                theta,
                rate,
                oracle_tol(model),
            )
            .map(|r| r.value)
        }
    }
}

fn check_sector(model: &ExponentialSum, p: Complex64) -> Result<()> {
    let phi0 = admissible_sector(model).phi0_sup;
    let arg = p.arg();
    if p == Complex64::new(0.0, 0.0) || !(arg >= -FRAC_PI_2 && arg < phi0) {
        return invalid(format!(
            "p = {p} outside the sector -pi/2 <= arg p < {phi0}"
        ));
    }
    Ok(())
}

/// `R(p) = ∫_0^∞ e^{-px} (F0 Z)(x) dx` on `-π/2 <= arg p < φ0`.
///
/// The closed edge `arg p = -π/2` is included: `R(-is) = r_F(s)` there.
/// The closed form is `i r(ip)`; the oracle integrates along the ray
/// `arg x = -arg(p)/2`.
pub fn mixed_transform_r(
    model: &ExponentialSum,
    p: Complex64,
    mode: EvalMode,
) -> Result<Complex64> {
    check_sector(model, p)?;
    match mode {
        EvalMode::ClosedForm => Ok(I * double_laplace(model, I * p, EvalMode::ClosedForm)?),
        EvalMode::QuadratureOracle => {
            let theta = -0.5 * p.arg();
            let rate = p.norm() * (0.5 * p.arg()).cos();
            integrate_ray(
                |x| (-p * x).exp() * fourier_half_continued(model, x),
                theta,
                rate,
                oracle_tol(model),
            )
            .map(|r| r.value)
        }
    }
}

/// `F(u) = (1/u) ∫_0^∞ e^{-x} (F0 Z)(x/u) dx` for real `u > 0`, by
/// quadrature; equal to `R(u)` after the substitution `x = u t`.
pub fn substituted_transform_f(model: &ExponentialSum, u: f64) -> Result<Complex64> {
    if !(u > 0.0) {
        return invalid(format!("substituted transform needs u > 0, got {u}"));
    }
    Ok(integrate_decaying(
        |x| (-x).exp() * fourier_half(model, x / u) / u,
        1.0,
        oracle_tol(model),
    )?
    .value)
}

/// `r(-s + i0)`: the limit of the continued Stieltjes transform onto the
/// negative axis from `Im p > 0`.
pub fn boundary_value(model: &ExponentialSum, s: f64) -> Result<BoundaryValue> {
    if !(s > 0.0) || !s.is_finite() {
        return invalid(format!("boundary value needs s > 0, got {s}"));
    }
    let mut value = Complex64::new(0.0, 0.0);
    for t in model.terms() {
        let w = t.pole * s;
        let phase = PI + (-t.pole).arg();
        value += t.residue * continued_e1_scaled(w, phase)?;
    }
    Ok(BoundaryValue {
        s,
        value,
        side: BranchSide::FromAbove,
    })
}

/// `PV ∫_0^∞ Z(x) / (x - s) dx` by quadrature; the real part of
/// [`boundary_value`] for real signals.
pub fn boundary_real_part_pv(model: &ExponentialSum, s: f64) -> Result<f64> {
    let z = z_of(model);
    Ok(integrate_pv(z, s, model.alpha_min(), oracle_tol(model))?
        .value
        .re)
}

/// Recovers `Z(s) = -Im r(-s + i0) / π` for `s > 0`.
pub fn invert(model: &ExponentialSum, s: f64) -> Result<f64> {
    Ok(-boundary_value(model, s)?.value.im / PI)
}
