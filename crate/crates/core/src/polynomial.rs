//! Dense complex polynomials, an all-roots-at-once root finder and simple-pole
//! residues of proper rational functions.

use std::f64::consts::TAU;
use std::fmt;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{invalid, Error, Result};

/// Default relative residual accepted by [`find_roots`].
pub const DEFAULT_ROOT_TOL: f64 = 1e-12;
/// Iteration cap for the simultaneous iteration.
pub const ROOT_ITERATION_CAP: usize = 200;
/// Poles closer than this fraction of the largest pole modulus are rejected.
pub const POLE_SEPARATION: f64 = 1e-6;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Polynomial with complex coefficients stored in ascending degree order.
///
/// The leading coefficient is always nonzero; the zero polynomial has no
/// coefficients at all.
#[derive(Clone, PartialEq, Default)]
pub struct Polynomial {
    coeffs: Vec<Complex64>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        while coeffs.last().is_some_and(|c| *c == ZERO) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: Complex64) -> Self {
        Self::new(vec![c])
    }

    /// Monic polynomial `Π (z - r)` over the given roots.
    pub fn from_roots(roots: &[Complex64]) -> Self {
        let mut coeffs = vec![Complex64::new(1.0, 0.0)];
        for &r in roots {
            let mut next = vec![ZERO; coeffs.len() + 1];
            for (j, &c) in coeffs.iter().enumerate() {
                next[j + 1] += c;
                next[j] -= c * r;
            }
            coeffs = next;
        }
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<Complex64> {
        self.coeffs.last().copied()
    }

    pub fn has_real_coeffs(&self) -> bool {
        self.coeffs.iter().all(|c| c.im == 0.0)
    }

    /// Horner evaluation.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(ZERO, |acc, &c| acc * z + c)
    }

    /// Compensated Horner evaluation: as accurate as Horner in twice the
    /// working precision, then rounded. Used where roots cluster and plain
    /// Horner residuals are swamped by rounding.
    pub fn eval_compensated(&self, z: Complex64) -> Complex64 {
        self.eval_with_derivative_compensated(z).0
    }

    /// `(p(z), p'(z))` by compensated Horner on the coefficients of `p`
    /// itself, so `p'` inherits no rounding from forming `j c_j`.
    pub fn eval_with_derivative_compensated(&self, z: Complex64) -> (Complex64, Complex64) {
        let mut s = (ZERO, ZERO);
        let mut d = (ZERO, ZERO);
        for &c in self.coeffs.iter().rev() {
            d = dd_mul_add(d, z, s);
            s = dd_mul_add(s, z, (c, ZERO));
        }
        (s.0 + s.1, d.0 + d.1)
    }

    pub fn derivative(&self) -> Polynomial {
        Polynomial::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(j, &c)| c * j as f64)
                .collect(),
        )
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        if self.is_zero() || other.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::new(out)
    }

    fn max_coeff_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Residual scale used by the root acceptance test.
    fn residual_scale(&self, r: Complex64) -> f64 {
        let deg = self.degree().unwrap_or(0) as i32;
        self.max_coeff_norm() * r.norm().max(1.0).powi(deg)
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("Polynomial").field(&self.coeffs).finish()
    }
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

/// One double-double Horner step `a z + b` on `(hi, lo)` complex pairs.
fn dd_mul_add(
    a: (Complex64, Complex64),
    z: Complex64,
    b: (Complex64, Complex64),
) -> (Complex64, Complex64) {
    let (rr, e1) = two_prod(a.0.re, z.re);
    let (ii, e2) = two_prod(a.0.im, z.im);
    let (ri, e3) = two_prod(a.0.re, z.im);
    let (ir, e4) = two_prod(a.0.im, z.re);
    let (re, e5) = two_sum(rr, -ii);
    let (re, e6) = two_sum(re, b.0.re);
    let (im, e7) = two_sum(ri, ir);
    let (im, e8) = two_sum(im, b.0.im);
    let tail = a.1 * z + b.1;
    let (re, re_lo) = two_sum(re, e1 - e2 + e5 + e6 + tail.re);
    let (im, im_lo) = two_sum(im, e3 + e4 + e7 + e8 + tail.im);
    (Complex64::new(re, im), Complex64::new(re_lo, im_lo))
}

/// A simple pole together with the residue of a rational function there.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoleResidue {
    pub pole: Complex64,
    pub residue: Complex64,
}

impl PoleResidue {
    pub fn new(pole: Complex64, residue: Complex64) -> Self {
        Self { pole, residue }
    }
}

/// Evaluates `p` at `z`.
pub fn poly_eval(p: &Polynomial, z: Complex64) -> Complex64 {
    p.eval(z)
}

pub fn poly_derivative(p: &Polynomial) -> Polynomial {
    p.derivative()
}

/// Finds all `deg p` roots of `p` (with multiplicity).
///
/// Aberth–Ehrlich simultaneous iteration from jittered points on the Cauchy
/// circle, then per-root Newton polishing on compensated residuals. Every
/// returned root `r` satisfies `|p(r)| <= tol * max|c_j| * max(1, |r|)^deg`.
pub fn find_roots(p: &Polynomial, tol: f64) -> Result<Vec<Complex64>> {
    let deg = match p.degree() {
        Some(d) if d >= 1 => d,
        _ => return invalid("root finding needs a polynomial of degree >= 1"),
    };
    if !(tol > 0.0) {
        return invalid("root tolerance must be positive");
    }

    let lead = p.leading().expect("nonzero polynomial");
    if deg == 1 {
        return Ok(vec![-p.coeffs[0] / lead]);
    }

    let dp = p.derivative();
    let cauchy = 1.0
        + p.coeffs[..deg]
            .iter()
            .map(|c| (c / lead).norm())
            .fold(0.0, f64::max);
    // Cauchy bound, tightened by the Fujiwara bound when that is smaller. The
    // fixed seed keeps the whole pipeline deterministic.
    let radius = cauchy.min(
        p.coeffs[..deg]
            .iter()
            .enumerate()
            .map(|(j, c)| (c / lead).norm().powf(1.0 / (deg - j) as f64))
            .fold(0.0, f64::max)
            * 2.0,
    );
    let radius = if radius > 0.0 { radius } else { 1.0 };
    let mut rng = ChaCha8Rng::seed_from_u64(0x0005_eed0_fa11_2007);
    let offset: f64 = rng.gen_range(0.0..TAU);
    let mut z: Vec<Complex64> = (0..deg)
        .map(|k| {
            let jitter: f64 = rng.gen_range(-0.1..0.1);
            let rad = radius * (1.0 + 0.05 * rng.gen_range(-1.0..1.0));
            Complex64::from_polar(rad, offset + TAU * (k as f64 + 0.5 + jitter) / deg as f64)
        })
        .collect();

    let accepted = |r: Complex64| p.eval(r).norm() <= tol * p.residual_scale(r);

    for _ in 0..ROOT_ITERATION_CAP {
        let mut max_step = 0.0f64;
        for k in 0..deg {
            let zk = z[k];
            let pv = p.eval(zk);
            if pv == ZERO {
                continue;
            }
            let ratio = pv / dp.eval(zk);
            let repulsion: Complex64 = (0..deg)
                .filter(|&j| j != k)
                .map(|j| (zk - z[j]).inv())
                .sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if step.is_finite() {
                z[k] = zk - step;
                max_step = max_step.max(step.norm() / zk.norm().max(1e-300));
            }
        }
        if max_step <= 1e-14 || (max_step < 1e-8 && z.iter().all(|&r| accepted(r))) {
            break;
        }
    }

    for r in z.iter_mut() {
        polish(p, r);
    }

    let worst = z
        .iter()
        .map(|&r| p.eval_compensated(r).norm() / p.residual_scale(r))
        .fold(0.0, f64::max);
    if worst <= tol {
        Ok(z)
    } else {
        Err(Error::RootsNotConverged {
            iterations: ROOT_ITERATION_CAP,
            worst_residual: worst,
        })
    }
}

fn polish(p: &Polynomial, root: &mut Complex64) {
    let (mut value, mut slope) = p.eval_with_derivative_compensated(*root);
    let mut best = *root;
    let mut best_res = value.norm();
    for _ in 0..8 {
        if slope == ZERO || best_res == 0.0 {
            break;
        }
        let r = best - value / slope;
        (value, slope) = p.eval_with_derivative_compensated(r);
        let res = value.norm();
        if !(res < best_res) {
            break;
        }
        best = r;
        best_res = res;
    }
    *root = best;
}

/// Smallest pairwise distance between points, `inf` for fewer than two.
pub fn min_separation(points: &[Complex64]) -> f64 {
    let mut best = f64::INFINITY;
    for (i, a) in points.iter().enumerate() {
        for b in &points[i + 1..] {
            best = best.min((a - b).norm());
        }
    }
    best
}

/// Rejects pole sets whose minimum separation is below
/// `POLE_SEPARATION * max|pole|`.
pub fn check_separation(poles: &[Complex64]) -> Result<()> {
    let scale = poles.iter().map(|p| p.norm()).fold(0.0, f64::max);
    let threshold = POLE_SEPARATION * scale;
    let separation = min_separation(poles);
    if separation <= threshold {
        return Err(Error::IllConditionedPoles {
            separation,
            threshold,
        });
    }
    Ok(())
}

/// Residues `Q(λ) / P'(λ)` of `Q/P` at the simple roots of `P`.
pub fn compute_residues(
    q: &Polynomial,
    p: &Polynomial,
    roots: &[Complex64],
) -> Result<Vec<PoleResidue>> {
    let deg_p = match p.degree() {
        Some(d) if d >= 1 => d,
        _ => return invalid("denominator must have degree >= 1"),
    };
    if let Some(deg_q) = q.degree() {
        if deg_q >= deg_p {
            return invalid(format!(
                "rational function is not strictly proper: deg Q = {deg_q}, deg P = {deg_p}"
            ));
        }
    }
    if roots.len() != deg_p {
        return invalid(format!(
            "expected {deg_p} roots of the denominator, got {}",
            roots.len()
        ));
    }
    check_separation(roots)?;

    Ok(roots
        .iter()
        .map(|&r| {
            PoleResidue::new(
                r,
                q.eval_compensated(r) / p.eval_with_derivative_compensated(r).1,
            )
        })
        .collect())
}

/// Pairs every term with its conjugate partner; `true` when the multiset of
/// `(pole, residue)` is closed under conjugation to within `tol` (relative to
/// the largest pole / residue modulus).
pub fn is_conjugate_closed(terms: &[PoleResidue], tol: f64) -> bool {
    let pole_scale = terms.iter().map(|t| t.pole.norm()).fold(1.0, f64::max);
    let res_scale = terms
        .iter()
        .map(|t| t.residue.norm())
        .fold(f64::MIN_POSITIVE, f64::max);
    let mut used = vec![false; terms.len()];
    for t in terms {
        let target_pole = t.pole.conj();
        let target_res = t.residue.conj();
        let partner = (0..terms.len()).filter(|&j| !used[j]).min_by(|&a, &b| {
            let da = (terms[a].pole - target_pole).norm();
            let db = (terms[b].pole - target_pole).norm();
            da.total_cmp(&db)
        });
        match partner {
            Some(j)
                if (terms[j].pole - target_pole).norm() <= tol * pole_scale
                    && (terms[j].residue - target_res).norm() <= tol * res_scale =>
            {
                used[j] = true;
            }
            _ => return false,
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn quad() -> Polynomial {
        Polynomial::from_real(&[2.0, 3.0, 1.0])
    }

    fn sorted(mut v: Vec<Complex64>) -> Vec<Complex64> {
        v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        v
    }

    #[test]
    fn compensated_horner_near_a_cluster() {
        // (x - 1)^7 expanded; plain Horner loses everything near x = 1
        let p = Polynomial::from_roots(&[c(1.0, 0.0); 7]);
        let x = 1.01;
        let exact = (x - 1.0f64).powi(7);
        let fast = p.eval(c(x, 0.0)).re;
        let comp = p.eval_compensated(c(x, 0.0));
        assert!((comp.re - exact).abs() <= 1e-12 * exact);
        assert_eq!(comp.im, 0.0);
        assert!((fast - exact).abs() > 1e-3 * exact);
        let z = c(0.3, -1.7);
        assert!((p.eval_compensated(z) - p.eval(z)).norm() <= 1e-12 * p.eval(z).norm());
    }

    #[test]
    fn horner_eval() {
        assert_eq!(quad().eval(c(-1.0, 0.0)), c(0.0, 0.0));
        assert_eq!(quad().eval(c(0.0, 0.0)), c(2.0, 0.0));
        assert_eq!(quad().eval(c(0.0, 1.0)), c(1.0, 3.0));
        assert_eq!(Polynomial::zero().eval(c(3.0, 1.0)), c(0.0, 0.0));
    }

    #[test]
    fn trailing_zeros_are_trimmed() {
        let p = Polynomial::from_real(&[1.0, 2.0, 0.0, 0.0]);
        assert_eq!(p.degree(), Some(1));
        assert!(Polynomial::from_real(&[0.0]).is_zero());
        assert_eq!(Polynomial::zero().degree(), None);
    }

    #[test]
    fn derivatives() {
        assert_eq!(quad().derivative(), Polynomial::from_real(&[3.0, 2.0]));
        assert!(Polynomial::from_real(&[5.0]).derivative().is_zero());
        assert_eq!(
            Polynomial::from_real(&[0.0, 0.0, 0.0, 1.0]).derivative(),
            Polynomial::from_real(&[0.0, 0.0, 3.0])
        );
    }

    #[test]
    fn from_roots_matches_product() {
        let p = Polynomial::from_roots(&[c(-1.0, 0.0), c(-2.0, 0.0)]);
        assert_eq!(p, quad());
        let a = Polynomial::from_real(&[1.0, 1.0]);
        let b = Polynomial::from_real(&[2.0, 1.0]);
        assert_eq!(a.mul(&b), quad());
    }

    #[test]
    fn roots_of_small_quadratics() {
        let r = sorted(find_roots(&quad(), DEFAULT_ROOT_TOL).unwrap());
        assert_abs_diff_eq!(r[0].re, -2.0, epsilon = 1e-13);
        assert_abs_diff_eq!(r[1].re, -1.0, epsilon = 1e-13);
        assert!(r.iter().all(|z| z.im.abs() < 1e-13));

        let r =
            sorted(find_roots(&Polynomial::from_real(&[5.0, 2.0, 1.0]), DEFAULT_ROOT_TOL).unwrap());
        assert!((r[0] - c(-1.0, -2.0)).norm() < 1e-13);
        assert!((r[1] - c(-1.0, 2.0)).norm() < 1e-13);
    }

    #[test]
    fn roots_of_seeded_degree_six() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..50 {
            let coeffs: Vec<Complex64> = (0..7)
                .map(|_| c(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)))
                .collect();
            let p = Polynomial::new(coeffs);
            let roots = find_roots(&p, DEFAULT_ROOT_TOL).unwrap();
            assert_eq!(roots.len(), 6);
            for r in roots {
                // residual oracle
                let scale = p.max_coeff_norm() * r.norm().max(1.0).powi(6);
                assert!(p.eval(r).norm() <= DEFAULT_ROOT_TOL * scale);
            }
        }
    }

    #[test]
    fn root_finding_rejects_constants() {
        assert!(matches!(
            find_roots(&Polynomial::from_real(&[3.0]), 1e-12),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn double_root_still_meets_residual() {
        let p = Polynomial::from_roots(&[c(-1.0, 0.0), c(-1.0, 0.0), c(-3.0, 0.0)]);
        let roots = find_roots(&p, DEFAULT_ROOT_TOL).unwrap();
        assert_eq!(roots.len(), 3);
        assert!(check_separation(&roots).is_err());
    }

    #[test]
    fn hand_partial_fractions() {
        let q = Polynomial::from_real(&[1.0]);
        let p = quad();
        let roots = vec![c(-1.0, 0.0), c(-2.0, 0.0)];
        let res = compute_residues(&q, &p, &roots).unwrap();
        assert_abs_diff_eq!(res[0].residue.re, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(res[1].residue.re, -1.0, epsilon = 1e-15);

        let roots = vec![c(-1.0, 0.0), c(-2.0, 0.0), c(-3.0, 0.0)];
        let p = Polynomial::from_roots(&roots);
        let res = compute_residues(&q, &p, &roots).unwrap();
        let expected = [0.5, -1.0, 0.5];
        for (r, e) in res.iter().zip(expected) {
            assert_abs_diff_eq!(r.residue.re, e, epsilon = 1e-15);
            assert_eq!(r.residue.im, 0.0);
        }
        let sum: Complex64 = res.iter().map(|t| t.residue).sum();
        assert!(sum.norm() < 1e-15);
    }

    #[test]
    fn residue_errors() {
        let q = Polynomial::from_real(&[1.0, 1.0, 1.0]);
        let p = quad();
        assert!(matches!(
            compute_residues(&q, &p, &[c(-1.0, 0.0), c(-2.0, 0.0)]),
            Err(Error::InvalidInput(_))
        ));
        let p = Polynomial::from_roots(&[c(-1.0, 0.0), c(-1.0 - 1e-9, 0.0)]);
        assert!(matches!(
            compute_residues(
                &Polynomial::from_real(&[1.0]),
                &p,
                &[c(-1.0, 0.0), c(-1.0 - 1e-9, 0.0)]
            ),
            Err(Error::IllConditionedPoles { .. })
        ));
    }

    #[test]
    fn conjugate_closure_detection() {
        let closed = [
            PoleResidue::new(c(-1.0, 2.0), c(0.5, 0.25)),
            PoleResidue::new(c(-3.0, 0.0), c(2.0, 0.0)),
            PoleResidue::new(c(-1.0, -2.0), c(0.5, -0.25)),
        ];
        assert!(is_conjugate_closed(&closed, 1e-10));
        let open = [
            PoleResidue::new(c(-1.0, 2.0), c(0.5, 0.25)),
            PoleResidue::new(c(-1.0, -2.0), c(0.5, 0.25)),
        ];
        assert!(!is_conjugate_closed(&open, 1e-10));
        assert!(is_conjugate_closed(&[], 1e-10));
    }
}
