//! Adaptive Gauss–Kronrod quadrature used as an independent oracle for the
//! closed forms: finite intervals, exponentially decaying half-line
//! integrands, principal values through a simple pole, and half-line
//! integrals taken along a rotated ray.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};

pub const DEFAULT_TOL: f64 = 1e-10;
pub const PANEL_BUDGET: usize = 2000;

/// Result of a quadrature call.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: Complex64,
    pub error_estimate: f64,
    pub panels_used: usize,
}

// 15-point Kronrod / 7-point Gauss nodes on [-1, 1] (positive half).
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.000_000_000_000_000_000_000_000_000_000_000,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
    roundoff: f64,
}

fn gk15<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> Panel {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut abs_sum = fc.norm() * WGK[7];
    let mut samples = [Complex64::new(0.0, 0.0); 15];
    samples[7] = fc;
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        kronrod += (f1 + f2) * WGK[j];
        abs_sum += (f1.norm() + f2.norm()) * WGK[j];
        if j % 2 == 1 {
            gauss += (f1 + f2) * WG[j / 2];
        }
        samples[j] = f1;
        samples[14 - j] = f2;
    }
    let mean = kronrod * 0.5;
    let asc: f64 = (0..15)
        .map(|j| {
            let w = if j == 7 { WGK[7] } else { WGK[j.min(14 - j)] };
            w * (samples[j] - mean).norm()
        })
        .sum::<f64>()
        * half.abs();
    let value = kronrod * half;
    let resabs = abs_sum * half.abs();
    let mut error = ((kronrod - gauss) * half).norm();
    if asc != 0.0 && error != 0.0 {
        error = asc * (200.0 * error / asc).powf(1.5).min(1.0);
    }
    let roundoff = 50.0 * f64::EPSILON * resabs;
    Panel {
        a,
        b,
        value,
        error: error.max(roundoff),
        roundoff,
    }
}

/// Pairwise sum over panels sorted by left endpoint, independent of the
/// order in which panels were refined.
fn pairwise(values: &[Complex64]) -> Complex64 {
    match values.len() {
        0 => Complex64::new(0.0, 0.0),
        1 => values[0],
        n => pairwise(&values[..n / 2]) + pairwise(&values[n / 2..]),
    }
}

fn finish(mut panels: Vec<Panel>) -> (Complex64, f64, f64) {
    panels.sort_by(|p, q| p.a.total_cmp(&q.a));
    let values: Vec<Complex64> = panels.iter().map(|p| p.value).collect();
    let error: f64 = panels.iter().map(|p| p.error).sum();
    let roundoff: f64 = panels.iter().map(|p| p.roundoff).sum();
    (pairwise(&values), error, roundoff)
}

/// Adaptive quadrature over `[a, b]` starting from `initial` equal panels.
fn adaptive<F: Fn(f64) -> Complex64>(
    f: &F,
    a: f64,
    b: f64,
    initial: usize,
    tol: f64,
    budget: usize,
) -> Result<QuadResult> {
    let initial = initial.clamp(1, budget);
    let width = (b - a) / initial as f64;
    let mut panels: Vec<Panel> = (0..initial)
        .map(|k| {
            let lo = a + width * k as f64;
            let hi = if k + 1 == initial { b } else { lo + width };
            gk15(f, lo, hi)
        })
        .collect();

    loop {
        let error: f64 = panels.iter().map(|p| p.error).sum();
        let roundoff: f64 = panels.iter().map(|p| p.roundoff).sum();
        if error <= tol.max(roundoff) {
            break;
        }
        // worst panel still above its roundoff floor
        let worst = panels
            .iter()
            .enumerate()
            .filter(|(_, p)| p.error > p.roundoff)
            .max_by(|(_, p), (_, q)| p.error.total_cmp(&q.error))
            .map(|(i, _)| i);
        let Some(worst) = worst else { break };
        if panels.len() >= budget {
            let (value, error_estimate, _) = finish(panels);
            return Err(Error::ToleranceNotMet {
                value,
                error_estimate,
                panels: budget,
            });
        }
        let p = panels.swap_remove(worst);
        let mid = 0.5 * (p.a + p.b);
        if !(mid > p.a && mid < p.b) {
            // interval exhausted in floating point
            panels.push(Panel {
                error: p.roundoff,
                ..p
            });
            continue;
        }
        panels.push(gk15(f, p.a, mid));
        panels.push(gk15(f, mid, p.b));
    }

    let panels_used = panels.len();
    let (value, error_estimate, _) = finish(panels);
    Ok(QuadResult {
        value,
        error_estimate,
        panels_used,
    })
}

/// `∫_a^b f(x) dx` for a smooth integrand.
pub fn integrate_finite<F: Fn(f64) -> Complex64>(
    f: F,
    a: f64,
    b: f64,
    tol: f64,
) -> Result<QuadResult> {
    if !(tol > 0.0) || !a.is_finite() || !b.is_finite() {
        return invalid("integrate_finite needs finite bounds and tol > 0");
    }
    if a == b {
        return Ok(QuadResult {
            value: Complex64::new(0.0, 0.0),
            error_estimate: 0.0,
            panels_used: 1,
        });
    }
    adaptive(&f, a, b, 4, tol, PANEL_BUDGET)
}

/// Truncation point `X` such that `C e^{-rX} / r < tol / 10`, with the
/// envelope constant `C` estimated by sampling `|f(x)| e^{rx}`.
fn truncation_point<F: Fn(f64) -> Complex64>(f: &F, decay_rate: f64, tol: f64) -> f64 {
    let scale = 1.0 / decay_rate;
    let envelope = (0..=48)
        .map(|j| {
            let x = scale * 0.25 * j as f64;
            f(x).norm() * (decay_rate * x).exp()
        })
        .filter(|v| v.is_finite())
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE);
    let x = (10.0 * envelope / (tol * decay_rate)).ln() / decay_rate;
    x.max(scale)
}

/// `∫_0^∞ f(x) dx` for `|f(x)| <= C e^{-decay_rate x}` eventually.
///
/// The range is truncated at `X` where the tail bound drops below `tol/10`,
/// and `[0, X]` is integrated adaptively.
pub fn integrate_decaying<F: Fn(f64) -> Complex64>(
    f: F,
    decay_rate: f64,
    tol: f64,
) -> Result<QuadResult> {
    if !(decay_rate > 0.0) || !decay_rate.is_finite() {
        return invalid(format!("decay rate must be positive, got {decay_rate}"));
    }
    if !(tol > 0.0) {
        return invalid("tolerance must be positive");
    }
    let end = truncation_point(&f, decay_rate, tol);
    let initial = ((end * decay_rate * 2.0).ceil() as usize).clamp(8, 200);
    adaptive(&f, 0.0, end, initial, tol * 0.9, PANEL_BUDGET)
}

/// `∫_0^∞ f(x) dx` taken along the ray `x = t e^{iθ}`, `t ∈ [0, ∞)`.
///
/// Equal to the real-axis integral whenever `f` is analytic in the sector
/// between the two rays and decays on the arc. `decay_rate` bounds the decay
/// of `|f(t e^{iθ})|` in `t`.
pub fn integrate_ray<F: Fn(Complex64) -> Complex64>(
    f: F,
    theta: f64,
    decay_rate: f64,
    tol: f64,
) -> Result<QuadResult> {
    if !(theta.abs() < FRAC_PI_2) {
        return invalid(format!(
            "ray angle must satisfy |theta| < pi/2, got {theta}"
        ));
    }
    let dir = Complex64::from_polar(1.0, theta);
    integrate_decaying(move |t| f(dir * t) * dir, decay_rate, tol)
}

/// Default half-width of the symmetric window around the pole.
pub fn default_pv_window(s: f64) -> f64 {
    (0.5 * s).min(1.0)
}

/// `PV ∫_0^∞ g(x) / (x - s) dx` with the default window.
pub fn integrate_pv<G: Fn(f64) -> Complex64>(
    g: G,
    s: f64,
    decay_rate: f64,
    tol: f64,
) -> Result<QuadResult> {
    integrate_pv_window(g, s, default_pv_window(s), decay_rate, tol)
}

/// `PV ∫_0^∞ g(x) / (x - s) dx`.
///
/// On `[s - δ, s + δ]` the symmetric pairing `(g(s+v) - g(s-v)) / v` removes
/// the pole; the remaining pieces are ordinary integrals.
pub fn integrate_pv_window<G: Fn(f64) -> Complex64>(
    g: G,
    s: f64,
    delta: f64,
    decay_rate: f64,
    tol: f64,
) -> Result<QuadResult> {
    if !(s > 0.0) || !s.is_finite() {
        return invalid(format!("principal value needs s > 0, got {s}"));
    }
    if !(delta > 0.0 && delta <= s) {
        return invalid(format!("window half-width must lie in (0, s], got {delta}"));
    }
    let part = tol / 3.0;
    let window = adaptive(
        &|v: f64| (g(s + v) - g(s - v)) / v,
        0.0,
        delta,
        2,
        part,
        PANEL_BUDGET,
    )?;
    let left = if s - delta > 0.0 {
        adaptive(
            &|x: f64| g(x) / (x - s),
            0.0,
            s - delta,
            4,
            part,
            PANEL_BUDGET,
        )?
    } else {
        QuadResult {
            value: Complex64::new(0.0, 0.0),
            error_estimate: 0.0,
            panels_used: 0,
        }
    };
    let right = integrate_decaying(|u| g(u + s + delta) / (u + delta), decay_rate, part)?;
    Ok(QuadResult {
        value: left.value + window.value + right.value,
        error_estimate: left.error_estimate + window.error_estimate + right.error_estimate,
        panels_used: left.panels_used + window.panels_used + right.panels_used,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::{e1, e1_scaled, ei};
    use std::f64::consts::{FRAC_PI_4, FRAC_PI_8};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn real<F: Fn(f64) -> f64>(f: F) -> impl Fn(f64) -> Complex64 {
        move |x| c(f(x), 0.0)
    }

    #[test]
    fn finite_polynomial_is_exact() {
        let r = integrate_finite(real(|x| x * x), 0.0, 3.0, 1e-12).unwrap();
        assert!((r.value.re - 9.0).abs() < 1e-13);
        assert!(r.error_estimate >= 0.0 && r.panels_used >= 1);
    }

    #[test]
    fn decaying_basics() {
        let r = integrate_decaying(real(|x| (-x).exp()), 1.0, 1e-12).unwrap();
        assert!((r.value.re - 1.0).abs() < 1e-12);
        assert!(r.error_estimate <= 1e-12);
        let r = integrate_decaying(real(|x| x * (-x).exp()), 1.0, 1e-12).unwrap();
        assert!((r.value.re - 1.0).abs() < 1e-12);
        let r = integrate_decaying(real(|x| (-x).exp() / (1.0 + x)), 1.0, 1e-13).unwrap();
        let closed = e1_scaled(c(1.0, 0.0)).unwrap().re;
        assert!((r.value.re - closed).abs() < 1e-13);
    }

    #[test]
    fn decaying_is_linear() {
        let f = |x: f64| c((-x).exp() * x.cos(), 0.0);
        let g = |x: f64| c(0.0, (-2.0 * x).exp() / (1.0 + x * x));
        let (a, b) = (c(2.0, -1.0), c(-0.5, 3.0));
        let tol = 1e-11;
        let lhs = integrate_decaying(|x| a * f(x) + b * g(x), 1.0, tol).unwrap();
        let i_f = integrate_decaying(f, 1.0, tol).unwrap();
        let i_g = integrate_decaying(g, 2.0, tol).unwrap();
        let rhs = a * i_f.value + b * i_g.value;
        assert!((lhs.value - rhs).norm() <= 4.0 * tol * (1.0 + a.norm() + b.norm()));
    }

    #[test]
    fn truncation_is_sound() {
        let f = |x: f64| c((-0.5 * x).exp() * (3.0 * x).sin(), 0.0);
        let tol = 1e-10;
        let end = truncation_point(&f, 0.5, tol);
        let short = adaptive(&f, 0.0, end, 8, tol, PANEL_BUDGET).unwrap();
        let long = adaptive(&f, 0.0, 2.0 * end, 16, tol, PANEL_BUDGET).unwrap();
        assert!((short.value - long.value).norm() < tol);
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let f = real(|x: f64| (1.0 / (x + 1e-12)).sin());
        match adaptive(&f, 0.0, 1.0, 1, 1e-14, 16) {
            Err(Error::ToleranceNotMet { panels, .. }) => assert_eq!(panels, 16),
            other => panic!("expected failure, got {other:?}"),
        }
    }

    #[test]
    fn ray_rotation() {
        let f = |x: Complex64| (c(0.0, 1.0) * x).exp() * (-x).exp();
        let expected = c(0.5, 0.5);
        for theta in [FRAC_PI_8, FRAC_PI_4, 3.0 * FRAC_PI_8] {
            let decay = theta.cos() + theta.sin();
            let r = integrate_ray(f, theta, decay, 1e-12).unwrap();
            assert!((r.value - expected).norm() < 1e-9, "theta={theta}");
        }
        // oscillatory, conditionally convergent on the real axis
        let f = |x: Complex64| (c(0.0, 1.0) * x).exp() / (1.0 + x);
        let theta = FRAC_PI_4;
        let r = integrate_ray(f, theta, theta.sin(), 1e-12).unwrap();
        let minus_i = c(0.0, -1.0);
        let expected = minus_i.exp() * e1(minus_i).unwrap();
        assert!((r.value - expected).norm() < 1e-10);
        assert!(integrate_ray(f, FRAC_PI_2, 1.0, 1e-10).is_err());
    }

    #[test]
    fn principal_value_against_ei() {
        let r = integrate_pv(real(|x| (-x).exp()), 1.0, 1.0, 1e-12).unwrap();
        let expected = -ei(1.0).unwrap() / std::f64::consts::E;
        assert!((r.value.re - expected).abs() < 1e-11);
        assert!((expected + 0.697_174_883_235_066).abs() < 1e-12);
    }

    #[test]
    fn constant_numerator_window_vanishes() {
        let s = 2.0;
        let w = adaptive(
            &|v: f64| (c(3.0, 0.0) - c(3.0, 0.0)) / v,
            0.0,
            default_pv_window(s),
            2,
            1e-12,
            PANEL_BUDGET,
        )
        .unwrap();
        assert_eq!(w.value, c(0.0, 0.0));
    }

    #[test]
    fn principal_value_window_independence() {
        let g = real(|x: f64| (-0.7 * x).exp() * (1.3 * x).cos());
        let tol = 1e-10;
        for s in [0.5, 1.0, 3.0] {
            let delta = default_pv_window(s);
            let a = integrate_pv_window(&g, s, delta, 0.7, tol).unwrap();
            let b = integrate_pv_window(&g, s, 0.5 * delta, 0.7, tol).unwrap();
            assert!((a.value - b.value).norm() < 10.0 * tol);
        }
        assert!(integrate_pv(&g, 0.0, 1.0, tol).is_err());
    }
}
