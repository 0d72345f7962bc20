//! Exponential integrals.
//!
//! `E1(z) = ∫_z^∞ e^{-t}/t dt` on the principal branch (cut along `(-∞, 0]`),
//! the real principal-value integral `Ei(x)`, the overflow-safe product
//! `e^z E1(z)` and the two one-sided limits of `E1` on the cut.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// `|z|` at or below which the ascending series is used.
pub const SERIES_RADIUS: f64 = 1.5;
/// Series is also used left of the imaginary axis while `|z| + Re z` stays
/// below this (the continued fraction converges slowly near the cut, and the
/// series loses at most `e^{budget}` to cancellation there).
const SERIES_LOSS_BUDGET: f64 = 3.0;
/// Beyond this modulus the near-cut series would overflow; the asymptotic
/// expansion of `e^z E1(z)` is exact to double precision there.
const SERIES_MAX_MODULUS: f64 = 600.0;
/// Crossover between the ascending series and the asymptotic expansion of Ei.
pub const EI_SERIES_LIMIT: f64 = 40.0;

const CF_MAX_ITER: usize = 20_000;
const SERIES_MAX_TERMS: usize = 4_000;

/// Side of the cut `(-∞, 0]` a boundary value is taken from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BranchSide {
    /// Limit from `Im z > 0`.
    FromAbove,
    /// Limit from `Im z < 0`.
    FromBelow,
}

impl BranchSide {
    /// Sign of the imaginary offset the limit is taken along.
    pub fn sign(self) -> f64 {
        match self {
            BranchSide::FromAbove => 1.0,
            BranchSide::FromBelow => -1.0,
        }
    }
}

fn on_cut(z: Complex64) -> bool {
    z.re <= 0.0 && z.im.abs() <= 1e-300
}

fn series_region(z: Complex64) -> bool {
    let r = z.norm();
    r <= SERIES_RADIUS || (z.re < 0.0 && r + z.re <= SERIES_LOSS_BUDGET)
}

/// `-γ - ln z - Σ_{n≥1} (-z)^n / (n·n!)`.
fn e1_series(z: Complex64) -> Complex64 {
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = Complex64::new(0.0, 0.0);
    for n in 1..SERIES_MAX_TERMS {
        let nf = n as f64;
        term *= -z / nf;
        let contrib = term / nf;
        sum += contrib;
        if nf > z.norm() && contrib.norm() <= f64::EPSILON * 0.25 * sum.norm() {
            break;
        }
    }
    -EULER_GAMMA - z.ln() - sum
}

/// `e^z E1(z)` by modified Lentz evaluation of
/// `1/(z+1- 1²/(z+3- 2²/(z+5- ...)))`.
fn e1_cf_scaled(z: Complex64) -> Complex64 {
    let tiny = 1e-300;
    let mut b = z + 1.0;
    let mut c = Complex64::new(1.0 / tiny, 0.0);
    let mut d = b.inv();
    let mut h = d;
    for i in 1..CF_MAX_ITER {
        let an = -((i * i) as f64);
        b += 2.0;
        d = an * d + b;
        if d.norm() < tiny {
            d = Complex64::new(tiny, 0.0);
        }
        d = d.inv();
        c = b + an / c;
        if c.norm() < tiny {
            c = Complex64::new(tiny, 0.0);
        }
        let del = c * d;
        h *= del;
        if (del - 1.0).norm() <= f64::EPSILON {
            break;
        }
    }
    h
}

/// `(1/z) Σ (-1)^k k!/z^k`, truncated at the smallest term.
fn e1_asymptotic_scaled(z: Complex64) -> Complex64 {
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    let mut last = f64::INFINITY;
    for k in 1..SERIES_MAX_TERMS {
        let next = term * (-(k as f64)) / z;
        let size = next.norm();
        if size >= last || size <= f64::EPSILON * 0.25 * sum.norm() {
            break;
        }
        term = next;
        sum += term;
        last = size;
    }
    sum / z
}

/// Principal-branch `E1(z)`.
///
/// Fails with [`Error::BranchAmbiguity`] on the cut; use [`e1_boundary`]
/// there.
pub fn e1(z: Complex64) -> Result<Complex64> {
    if on_cut(z) || !z.is_finite() {
        return Err(Error::BranchAmbiguity { z });
    }
    if series_region(z) && z.norm() <= SERIES_MAX_MODULUS {
        Ok(e1_series(z))
    } else {
        Ok((-z).exp() * e1_scaled_unchecked(z))
    }
}

fn e1_scaled_unchecked(z: Complex64) -> Complex64 {
    if series_region(z) {
        if z.norm() <= SERIES_MAX_MODULUS {
            z.exp() * e1_series(z)
        } else {
            e1_asymptotic_scaled(z)
        }
    } else {
        e1_cf_scaled(z)
    }
}

/// `e^z E1(z)` on the principal branch, evaluated without forming either
/// factor when `|Re z|` is large. Tends to `1/z` as `|z| → ∞`.
pub fn e1_scaled(z: Complex64) -> Result<Complex64> {
    if on_cut(z) || !z.is_finite() {
        return Err(Error::BranchAmbiguity { z });
    }
    Ok(e1_scaled_unchecked(z))
}

fn ei_series(x: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 0.0;
    for n in 1..SERIES_MAX_TERMS {
        let nf = n as f64;
        term *= x / nf;
        let contrib = term / nf;
        sum += contrib;
        if contrib <= f64::EPSILON * 0.25 * sum {
            break;
        }
    }
    EULER_GAMMA + x.ln() + sum
}

/// `Σ k!/x^k` truncated at the smallest term.
fn ei_asymptotic_sum(x: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..SERIES_MAX_TERMS {
        let next = term * k as f64 / x;
        if next >= term || next <= f64::EPSILON * 0.25 * sum {
            break;
        }
        term = next;
        sum += term;
    }
    sum
}

/// Principal-value exponential integral `Ei(x) = -PV ∫_{-x}^∞ e^{-t}/t dt`.
pub fn ei(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return invalid(format!("Ei needs x > 0, got {x}"));
    }
    if x <= EI_SERIES_LIMIT {
        Ok(ei_series(x))
    } else {
        Ok(x.exp() / x * ei_asymptotic_sum(x))
    }
}

/// `e^{-x} Ei(x)`, finite for every `x > 0`.
pub fn ei_scaled(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return invalid(format!("Ei needs x > 0, got {x}"));
    }
    if x <= EI_SERIES_LIMIT {
        Ok((-x).exp() * ei_series(x))
    } else {
        Ok(ei_asymptotic_sum(x) / x)
    }
}

/// Boundary value of `E1` at `-x` (`x > 0`) approached from `side`:
/// `-Ei(x) - iπ` from above, `-Ei(x) + iπ` from below.
pub fn e1_boundary(x: f64, side: BranchSide) -> Result<Complex64> {
    let ei = ei(x)?;
    Ok(Complex64::new(-ei, -side.sign() * PI))
}

/// `e^{-x}` times [`e1_boundary`], the scaled form used by the transforms.
pub fn e1_boundary_scaled(x: f64, side: BranchSide) -> Result<Complex64> {
    let scaled = ei_scaled(x)?;
    Ok(Complex64::new(-scaled, -side.sign() * PI * (-x).exp()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    // Reference values below were computed independently with mpmath at 30
    // digits (expint / ei).
    #[test]
    fn e1_real_values() {
        assert_relative_eq!(
            e1(c(1.0, 0.0)).unwrap().re,
            0.219_383_934_395_520_27,
            max_relative = 1e-14
        );
        assert_relative_eq!(
            e1(c(0.1, 0.0)).unwrap().re,
            1.822_923_958_419_390_7,
            max_relative = 1e-14
        );
        assert_relative_eq!(
            e1(c(5.0, 0.0)).unwrap().re,
            0.001_148_295_591_275_325_6,
            max_relative = 1e-13
        );
        assert_relative_eq!(
            e1(c(30.0, 0.0)).unwrap().re,
            3.021_552_010_688_812_5e-15,
            max_relative = 1e-13
        );
    }

    #[test]
    fn euler_limit_at_small_argument() {
        let z = 1e-8;
        let v = e1(c(z, 0.0)).unwrap().re + z.ln();
        assert!((v + EULER_GAMMA).abs() < 1e-7);
    }

    #[test]
    fn reflection() {
        for z in [
            c(2.0, 3.0),
            c(-2.0, 0.5),
            c(0.3, -0.2),
            c(-40.0, 1.0),
            c(7.0, -20.0),
        ] {
            let a = e1(z.conj()).unwrap();
            let b = e1(z).unwrap().conj();
            assert!((a - b).norm() <= 1e-15 * a.norm().max(1.0));
            let a = e1_scaled(z.conj()).unwrap();
            let b = e1_scaled(z).unwrap().conj();
            assert!((a - b).norm() <= 1e-15 * a.norm().max(1.0));
        }
    }

    #[test]
    fn cut_is_rejected() {
        for z in [c(-1.0, 0.0), c(0.0, 0.0), c(-3.0, -0.0)] {
            assert!(matches!(e1(z), Err(Error::BranchAmbiguity { .. })));
            assert!(matches!(e1_scaled(z), Err(Error::BranchAmbiguity { .. })));
        }
    }

    #[test]
    fn scaled_values_and_asymptotics() {
        assert_relative_eq!(
            e1_scaled(c(1.0, 0.0)).unwrap().re,
            0.596_347_362_323_194_1,
            max_relative = 1e-14
        );
        let z = 1e6;
        let v = e1_scaled(c(z, 0.0)).unwrap();
        assert!((v.re * z - 1.0).abs() < 1e-5);
        // deep left, near the cut: series-overflow regime
        let v = e1_scaled(c(-900.0, 1e-3)).unwrap();
        assert_relative_eq!(v.re, -0.001_112_348_431_681_013_3, max_relative = 1e-13);
        assert_relative_eq!(v.im, -1.237_320_571_276_948_3e-9, max_relative = 1e-10);
        let v = e1_scaled(c(-50.0, 0.5)).unwrap();
        assert_relative_eq!(v.re, -0.020_414_915_084_229_579, max_relative = 1e-13);
        assert_relative_eq!(v.im, -0.000_208_500_997_836_448_45, max_relative = 1e-11);
    }

    #[test]
    fn series_and_continued_fraction_agree_at_crossover() {
        for k in 0..24 {
            let theta = -3.0 + 6.0 * k as f64 / 23.0;
            for r in [1.4, 1.6, 2.5, 3.5] {
                let z = Complex64::from_polar(r, theta);
                let s = e1_series(z);
                let cf = (-z).exp() * e1_cf_scaled(z);
                assert!(
                    (s - cf).norm() <= 1e-12 * (1.0 + s.norm()),
                    "z={z} s={s} cf={cf}"
                );
            }
        }
    }

    #[test]
    fn ei_values() {
        assert_relative_eq!(
            ei(1.0).unwrap(),
            1.895_117_816_355_936_8,
            max_relative = 1e-14
        );
        assert_relative_eq!(
            ei(2.0).unwrap(),
            4.954_234_356_001_890_1,
            max_relative = 1e-14
        );
        assert_relative_eq!(
            ei(50.0).unwrap(),
            1.058_563_689_713_169_1e20,
            max_relative = 1e-13
        );
        assert_relative_eq!(
            ei_scaled(50.0).unwrap(),
            1.058_563_689_713_169_1e20 * (-50.0f64).exp(),
            max_relative = 1e-13
        );
        // both sides of the series/asymptotic crossover
        let below = ei(EI_SERIES_LIMIT).unwrap();
        let above = (EI_SERIES_LIMIT).exp() / EI_SERIES_LIMIT * ei_asymptotic_sum(EI_SERIES_LIMIT);
        assert_relative_eq!(below, above, max_relative = 1e-14);
        let x = 1e-8;
        assert!((ei(x).unwrap() - x.ln() - EULER_GAMMA).abs() < 1e-7);
        assert!(ei(0.0).is_err());
        assert!(ei(-1.0).is_err());
    }

    #[test]
    fn boundary_values() {
        for x in [0.1, 1.0, 10.0, 100.0] {
            let above = e1_boundary(x, BranchSide::FromAbove).unwrap();
            let below = e1_boundary(x, BranchSide::FromBelow).unwrap();
            assert_eq!(above.im, -PI);
            assert_eq!(above - below, c(0.0, -2.0 * PI));
        }
        let v = e1_boundary(1.0, BranchSide::FromAbove).unwrap();
        assert_relative_eq!(v.re, -1.895_117_816_355_936_8, max_relative = 1e-14);
        assert!(e1_boundary(0.0, BranchSide::FromAbove).is_err());
        let s = e1_boundary_scaled(2.0, BranchSide::FromAbove).unwrap();
        let u = e1_boundary(2.0, BranchSide::FromAbove).unwrap() * (-2.0f64).exp();
        assert!((s - u).norm() < 1e-15);
    }

    #[test]
    fn continuity_onto_cut() {
        for x in [0.5, 1.0, 3.0] {
            let target = e1_boundary(x, BranchSide::FromAbove).unwrap();
            let coarse = (e1(c(-x, 1e-6)).unwrap() - target).norm();
            let fine = (e1(c(-x, 1e-8)).unwrap() - target).norm();
            assert!(fine < coarse);
            assert!(fine <= 1e-5);
            let below = e1_boundary(x, BranchSide::FromBelow).unwrap();
            assert!((e1(c(-x, -1e-8)).unwrap() - below).norm() <= 1e-5);
        }
    }

    #[test]
    fn derivative_identity() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let z = c(rng.gen_range(-8.0..8.0), rng.gen_range(0.3..8.0));
            let z = if rng.gen_bool(0.5) { z.conj() } else { z };
            let h = 1e-5 * z.norm();
            let num = (e1(z + h).unwrap() - e1(z - h).unwrap()) / (2.0 * h);
            let exact = -(-z).exp() / z;
            assert!((num - exact).norm() <= 1e-6 * exact.norm(), "z={z}");
        }
    }
}
