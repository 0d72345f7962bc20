//! Identity suites: each compares a closed form against either an
//! independent quadrature oracle or the signal itself over a grid of
//! abscissae, and summarises the outcome in a [`VerificationReport`].

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{invalid, Result};
use crate::polynomial::{min_separation, Polynomial, DEFAULT_ROOT_TOL};
use crate::signal::{build_model, eval_signal, ExponentialSum, RationalSpec, Strictness};
use crate::transforms::{
    boundary_real_part_pv, boundary_value, double_fourier, double_laplace, invert, laplace,
    EvalMode,
};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Offset above the cut for the small-ε continuation cross-check.
pub const CONTINUATION_EPS: f64 = 1e-6;
/// Expected agreement of that cross-check (`O(ε)` boundary error).
pub const CONTINUATION_TOL: f64 = 1e-4;
/// Points `s` at which the real part is checked against the PV oracle.
pub const PV_SPOT_POINTS: [f64; 3] = [0.5, 1.0, 2.0];
/// Closed-form spot points per model in the Theorem 1 suite.
pub const ORACLE_SPOT_COUNT: usize = 5;
/// Seed of the random probe points of the residue suite.
const PROBE_SEED: u64 = 0x9e37_79b9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Linear,
    Logarithmic,
}

/// Ordered evaluation abscissae in `[s_min, s_max]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransformGrid {
    s_min: f64,
    s_max: f64,
    points: usize,
    spacing: Spacing,
}

impl TransformGrid {
    pub fn new(s_min: f64, s_max: f64, points: usize, spacing: Spacing) -> Result<Self> {
        if !(s_min > 0.0 && s_min < s_max && s_max.is_finite()) {
            return invalid(format!(
                "grid needs 0 < s_min < s_max, got [{s_min}, {s_max}]"
            ));
        }
        if points < 2 {
            return invalid("grid needs at least 2 points");
        }
        Ok(Self {
            s_min,
            s_max,
            points,
            spacing,
        })
    }

    pub fn s_min(&self) -> f64 {
        self.s_min
    }

    pub fn s_max(&self) -> f64 {
        self.s_max
    }

    pub fn len(&self) -> usize {
        self.points
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> Spacing {
        self.spacing
    }

    pub fn abscissae(&self) -> Vec<f64> {
        let last = (self.points - 1) as f64;
        (0..self.points)
            .map(|k| {
                let t = k as f64 / last;
                if k == 0 {
                    return self.s_min;
                }
                if k + 1 == self.points {
                    return self.s_max;
                }
                match self.spacing {
                    Spacing::Linear => self.s_min + t * (self.s_max - self.s_min),
                    Spacing::Logarithmic => {
                        (self.s_min.ln() * (1.0 - t) + self.s_max.ln() * t).exp()
                    }
                }
            })
            .map(|s| s.clamp(self.s_min, self.s_max))
            .collect()
    }

    /// Grid point nearest each target, in target order.
    pub fn nearest(&self, targets: &[f64]) -> Vec<f64> {
        let xs = self.abscissae();
        targets
            .iter()
            .map(|&t| {
                *xs.iter()
                    .min_by(|a, b| (*a - t).abs().total_cmp(&(*b - t).abs()))
                    .expect("grid has points")
            })
            .collect()
    }

    /// `count` grid points at evenly spread indices.
    pub fn spread(&self, count: usize) -> Vec<f64> {
        let xs = self.abscissae();
        let count = count.min(xs.len()).max(1);
        if count == 1 {
            return vec![xs[0]];
        }
        (0..count)
            .map(|k| xs[k * (xs.len() - 1) / (count - 1)])
            .collect()
    }
}

impl Default for TransformGrid {
    /// 64 logarithmically spaced points on `[0.1, 10]`.
    fn default() -> Self {
        Self {
            s_min: 0.1,
            s_max: 10.0,
            points: 64,
            spacing: Spacing::Logarithmic,
        }
    }
}

/// Outcome of one identity suite.
#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub identity_name: String,
    pub grid: Option<TransformGrid>,
    pub max_abs_err: f64,
    pub max_rel_err: f64,
    pub worst_point: Complex64,
    pub tolerance: f64,
    /// Largest disagreement with the independent oracle, if one was run.
    pub oracle_max_err: Option<f64>,
    pub oracle_tolerance: f64,
    pub oracle_description: String,
    /// Evaluation failure, if any; such a report never passes.
    pub failure: Option<String>,
    pub passed: bool,
}

impl VerificationReport {
    fn finish(mut self) -> Self {
        let oracle_ok = self
            .oracle_max_err
            .is_none_or(|e| e <= self.oracle_tolerance);
        self.passed = self.failure.is_none() && self.max_rel_err <= self.tolerance && oracle_ok;
        self
    }

    fn failed(
        name: &str,
        grid: Option<TransformGrid>,
        tol: f64,
        oracle: &str,
        why: String,
    ) -> Self {
        Self {
            identity_name: name.to_string(),
            grid,
            max_abs_err: f64::INFINITY,
            max_rel_err: f64::INFINITY,
            worst_point: Complex64::new(f64::NAN, 0.0),
            tolerance: tol,
            oracle_max_err: None,
            oracle_tolerance: 0.0,
            oracle_description: oracle.to_string(),
            failure: Some(why),
            passed: false,
        }
    }
}

fn fmt_num(x: f64) -> String {
    format!("{x:.16e}")
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "identity: {}", self.identity_name)?;
        if let Some(g) = &self.grid {
            let spacing = match g.spacing {
                Spacing::Linear => "linear",
                Spacing::Logarithmic => "log",
            };
            writeln!(
                f,
                "grid: [{}, {}] x {} ({spacing})",
                fmt_num(g.s_min),
                fmt_num(g.s_max),
                g.points
            )?;
        }
        writeln!(f, "max_abs_err: {}", fmt_num(self.max_abs_err))?;
        writeln!(f, "max_rel_err: {}", fmt_num(self.max_rel_err))?;
        if self.worst_point.im == 0.0 {
            writeln!(f, "worst_point: {}", fmt_num(self.worst_point.re))?;
        } else {
            writeln!(
                f,
                "worst_point: {}{:+.16e}i",
                fmt_num(self.worst_point.re),
                self.worst_point.im
            )?;
        }
        writeln!(f, "tolerance: {}", fmt_num(self.tolerance))?;
        writeln!(f, "oracle: {}", self.oracle_description)?;
        if let Some(e) = self.oracle_max_err {
            writeln!(
                f,
                "oracle_max_err: {} (tolerance {})",
                fmt_num(e),
                fmt_num(self.oracle_tolerance)
            )?;
        }
        if let Some(why) = &self.failure {
            writeln!(f, "failure: {why}")?;
        }
        write!(f, "{}", if self.passed { "PASS" } else { "FAIL" })
    }
}

/// Running maximum of absolute / relative errors with the point attaining
/// the largest relative error. Ties keep the first point.
#[derive(Debug, Clone, Copy)]
struct Worst {
    abs: f64,
    rel: f64,
    at: Complex64,
}

impl Worst {
    fn new() -> Self {
        Self {
            abs: 0.0,
            rel: 0.0,
            at: Complex64::new(f64::NAN, 0.0),
        }
    }

    fn push(&mut self, at: Complex64, abs: f64, reference: f64) {
        let rel = abs / (1.0 + reference);
        if self.at.re.is_nan() || rel > self.rel || rel.is_nan() {
            self.rel = if rel.is_nan() { f64::INFINITY } else { rel };
            self.at = at;
        }
        self.abs = self.abs.max(if abs.is_nan() { f64::INFINITY } else { abs });
    }
}

fn real(s: f64) -> Complex64 {
    Complex64::new(s, 0.0)
}

/// Pointwise Theorem 1 error `|r(s) + i r_F(s)| / (1 + |r(s)|)`.
pub fn theorem1_error(model: &ExponentialSum, s: f64) -> Result<(f64, f64)> {
    let r = double_laplace(model, real(s), EvalMode::ClosedForm)?;
    let rf = double_fourier(model, s, EvalMode::ClosedForm)?;
    Ok(((r + I * rf).norm(), r.norm()))
}

/// `L L Z (s) = -i F0 F0 Z (s)` on the grid, closed form on both sides,
/// with both sides spot-checked against their quadrature oracles.
pub fn verify_theorem1(
    model: &ExponentialSum,
    grid: &TransformGrid,
    tol: f64,
) -> VerificationReport {
    theorem1_with(model, grid, tol, SuiteTolerances::default().oracle)
}

fn theorem1_with(
    model: &ExponentialSum,
    grid: &TransformGrid,
    tol: f64,
    oracle_tol: f64,
) -> VerificationReport {
    const NAME: &str = "theorem1: LL(s) = -i F0F0(s)";
    let oracle = format!(
        "Stieltjes integral and ray-rotated double Fourier quadrature at {ORACLE_SPOT_COUNT} grid points"
    );
    let run = || -> Result<VerificationReport> {
        let mut worst = Worst::new();
        for s in grid.abscissae() {
            let (err, reference) = theorem1_error(model, s)?;
            worst.push(real(s), err, reference);
        }
        let mut oracle_err = 0.0f64;
        for s in grid.spread(ORACLE_SPOT_COUNT) {
            let r = double_laplace(model, real(s), EvalMode::ClosedForm)?;
            let rq = double_laplace(model, real(s), EvalMode::QuadratureOracle)?;
            let rf = double_fourier(model, s, EvalMode::ClosedForm)?;
            let rfq = double_fourier(model, s, EvalMode::QuadratureOracle)?;
            oracle_err = oracle_err
                .max((r - rq).norm() / (1.0 + r.norm()))
                .max((rf - rfq).norm() / (1.0 + rf.norm()));
        }
        Ok(VerificationReport {
            identity_name: NAME.into(),
            grid: Some(*grid),
            max_abs_err: worst.abs,
            max_rel_err: worst.rel,
            worst_point: worst.at,
            tolerance: tol,
            oracle_max_err: Some(oracle_err),
            oracle_tolerance: oracle_tol,
            oracle_description: oracle.clone(),
            failure: None,
            passed: false,
        })
    };
    match run() {
        Ok(r) => r.finish(),
        Err(e) => VerificationReport::failed(NAME, Some(*grid), tol, &oracle, e.to_string()),
    }
}

/// Pointwise Theorem 2 error `|Z_rec(s) - Z(s)|` and `|Z(s)|`.
pub fn theorem2_error(model: &ExponentialSum, s: f64) -> Result<(f64, f64)> {
    let z = eval_signal(model, s).re;
    let rec = invert(model, s)?;
    Ok(((rec - z).abs(), z.abs()))
}

/// `-π Z(s) = Im r(-s + i0)` on the grid.
pub fn verify_theorem2(
    model: &ExponentialSum,
    grid: &TransformGrid,
    tol: f64,
) -> VerificationReport {
    const NAME: &str = "theorem2: Z(s) = -Im r(-s+i0) / pi";
    let oracle = format!(
        "closed-form continuation r(-s + i*{CONTINUATION_EPS:e}) vs boundary value at 3 grid points"
    );
    let run = || -> Result<VerificationReport> {
        let mut worst = Worst::new();
        for s in grid.abscissae() {
            let (err, z) = theorem2_error(model, s)?;
            worst.push(real(s), err, z);
        }
        let mut oracle_err = 0.0f64;
        for s in grid.spread(3) {
            let bv = boundary_value(model, s)?.value;
            let near = double_laplace(
                model,
                Complex64::new(-s, CONTINUATION_EPS),
                EvalMode::ClosedForm,
            )?;
            oracle_err = oracle_err.max((bv - near).norm() / (1.0 + bv.norm()));
        }
        Ok(VerificationReport {
            identity_name: NAME.into(),
            grid: Some(*grid),
            max_abs_err: worst.abs,
            max_rel_err: worst.rel,
            worst_point: worst.at,
            tolerance: tol,
            oracle_max_err: Some(oracle_err),
            oracle_tolerance: CONTINUATION_TOL,
            oracle_description: oracle.clone(),
            failure: None,
            passed: false,
        })
    };
    match run() {
        Ok(r) => r.finish(),
        Err(e) => VerificationReport::failed(NAME, Some(*grid), tol, &oracle, e.to_string()),
    }
}

/// `Re r_F(s) = 0` and `Re r_F(-s) = π Z(s)` for `s > 0` on the grid, plus
/// a principal-value cross-check of `Re r(-s + i0)`.
pub fn verify_realpart_identity(
    model: &ExponentialSum,
    grid: &TransformGrid,
    tol: f64,
) -> VerificationReport {
    realpart_with(model, grid, tol, SuiteTolerances::default().pv)
}

fn realpart_with(
    model: &ExponentialSum,
    grid: &TransformGrid,
    tol: f64,
    pv_tol: f64,
) -> VerificationReport {
    const NAME: &str = "realpart: Re F0F0(s) = 0, Re F0F0(-s) = pi Z(s)";
    let oracle = "principal-value quadrature of Re r(-s+i0) at grid points nearest 0.5, 1, 2";
    let run = || -> Result<VerificationReport> {
        let mut worst = Worst::new();
        for s in grid.abscissae() {
            let plus = double_fourier(model, s, EvalMode::ClosedForm)?;
            worst.push(real(s), plus.re.abs(), 0.0);
            let minus = double_fourier(model, -s, EvalMode::ClosedForm)?;
            let z = eval_signal(model, s).re;
            worst.push(real(-s), (minus.re - PI * z).abs(), z.abs());
        }
        let mut oracle_err = 0.0f64;
        for s in grid.nearest(&PV_SPOT_POINTS) {
            let re = boundary_value(model, s)?.value.re;
            let pv = boundary_real_part_pv(model, s)?;
            oracle_err = oracle_err.max((re - pv).abs());
        }
        Ok(VerificationReport {
            identity_name: NAME.into(),
            grid: Some(*grid),
            max_abs_err: worst.abs,
            max_rel_err: worst.rel,
            worst_point: worst.at,
            tolerance: tol,
            oracle_max_err: Some(oracle_err),
            oracle_tolerance: pv_tol,
            oracle_description: oracle.into(),
            failure: None,
            passed: false,
        })
    };
    match run() {
        Ok(r) => r.finish(),
        Err(e) => VerificationReport::failed(NAME, Some(*grid), tol, oracle, e.to_string()),
    }
}

/// Seeded probe points with `Re p >= 0`.
pub fn residue_probes(count: usize) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(PROBE_SEED);
    (0..count)
        .map(|_| Complex64::new(rng.gen_range(0.0..2.0), rng.gen_range(-3.0..3.0)))
        .collect()
}

/// `L Z (p) = Q(p)/P(p)` at seeded probes with `Re p >= 0`, using the
/// standard residue normalization (no extra `2πi` factor).
pub fn verify_residue_normalization(
    spec: &RationalSpec,
    probes: usize,
    tol: f64,
) -> VerificationReport {
    const NAME: &str = "residues: L Z(p) = Q(p)/P(p)";
    let oracle =
        "direct evaluation of Q/P; normalization gamma_k = Q(l_k)/P'(l_k) without a 2*pi*i factor";
    let run = || -> Result<VerificationReport> {
        let model = build_model(spec, DEFAULT_ROOT_TOL)?;
        let mut worst = Worst::new();
        for p in residue_probes(probes) {
            let lz = laplace(&model, p, EvalMode::ClosedForm)?;
            let qp = spec.eval(p);
            worst.push(p, (lz - qp).norm(), qp.norm());
        }
        Ok(VerificationReport {
            identity_name: NAME.into(),
            grid: None,
            max_abs_err: worst.abs,
            max_rel_err: worst.rel,
            worst_point: worst.at,
            tolerance: tol,
            oracle_max_err: None,
            oracle_tolerance: 0.0,
            oracle_description: oracle.into(),
            failure: None,
            passed: false,
        })
    };
    match run() {
        Ok(r) => r.finish(),
        Err(e) => VerificationReport::failed(NAME, None, tol, oracle, e.to_string()),
    }
}

/// Per-suite pass thresholds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuiteTolerances {
    pub theorem1: f64,
    pub theorem2: f64,
    pub realpart: f64,
    pub residue: f64,
    /// Closed form vs quadrature oracle agreement.
    pub oracle: f64,
    /// Real part of the boundary value vs the principal-value oracle.
    pub pv: f64,
}

impl Default for SuiteTolerances {
    fn default() -> Self {
        Self {
            theorem1: 1e-9,
            theorem2: 1e-8,
            realpart: 1e-8,
            residue: 1e-10,
            oracle: 1e-8,
            pv: 1e-6,
        }
    }
}

/// Number of residue probes per model.
pub const RESIDUE_PROBES: usize = 20;

/// Runs the four suites on one model; the residue suite needs the rational
/// data and is skipped without it.
pub fn verify_all(
    model: &ExponentialSum,
    spec: Option<&RationalSpec>,
    grid: &TransformGrid,
    tols: &SuiteTolerances,
) -> Vec<VerificationReport> {
    let mut out = vec![
        theorem1_with(model, grid, tols.theorem1, tols.oracle),
        verify_theorem2(model, grid, tols.theorem2),
        realpart_with(model, grid, tols.realpart, tols.pv),
    ];
    if let Some(spec) = spec {
        out.push(verify_residue_normalization(
            spec,
            RESIDUE_PROBES,
            tols.residue,
        ));
    }
    out
}

/// Parameters of a seeded model ensemble.
#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleConfig {
    pub seed: u64,
    pub count: usize,
    /// Inclusive range of the denominator degree `l`.
    pub degree_range: (usize, usize),
    pub alpha_range: (f64, f64),
    pub beta_range: (f64, f64),
    pub strictness: Strictness,
}

impl Default for EnsembleConfig {
    fn default() -> Self {
        Self {
            seed: 7,
            count: 100,
            degree_range: (3, 8),
            alpha_range: (0.2, 5.0),
            beta_range: (-5.0, 5.0),
            strictness: Strictness::PaperStrict,
        }
    }
}

/// Minimum pole spacing the generator accepts; keeps residues well
/// conditioned in double precision.
pub const GENERATOR_MIN_SEPARATION: f64 = 0.1;
/// Smallest `|β|` of a generated conjugate pair.
pub const GENERATOR_MIN_BETA: f64 = 0.05;
const GENERATOR_RETRIES: usize = 1000;

fn draw_spec(rng: &mut ChaCha8Rng, cfg: &EnsembleConfig) -> Option<RationalSpec> {
    let (lmin, lmax) = cfg.degree_range;
    let l = rng.gen_range(lmin..=lmax);
    let max_pairs = l / 2;
    let pairs = if max_pairs == 0 {
        0
    } else {
        rng.gen_range(1..=max_pairs)
    };
    let reals = l - 2 * pairs;
    let (amin, amax) = cfg.alpha_range;
    let (bmin, bmax) = cfg.beta_range;
    let mut poles = Vec::with_capacity(l);
    for _ in 0..pairs {
        let alpha = rng.gen_range(amin..=amax);
        let beta: f64 = rng.gen_range(bmin..=bmax);
        if beta.abs() < GENERATOR_MIN_BETA {
            return None;
        }
        poles.push(Complex64::new(-alpha, beta));
        poles.push(Complex64::new(-alpha, -beta));
    }
    for _ in 0..reals {
        poles.push(Complex64::new(-rng.gen_range(amin..=amax), 0.0));
    }
    if min_separation(&poles) < GENERATOR_MIN_SEPARATION {
        return None;
    }
    let n_max = match cfg.strictness {
        Strictness::PaperStrict => l.checked_sub(3)?,
        Strictness::Relaxed => l - 1,
    };
    let n = rng.gen_range(0..=n_max);
    let mut num: Vec<f64> = (0..=n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    if num[n].abs() < 0.1 {
        num[n] = 0.1f64.copysign(num[n]);
    }
    // conjugate pairs multiply out to real coefficients up to rounding
    let den: Vec<f64> = Polynomial::from_roots(&poles)
        .coeffs()
        .iter()
        .map(|c| c.re)
        .collect();
    Some(RationalSpec::new(
        Polynomial::from_real(&num),
        Polynomial::from_real(&den),
        cfg.strictness,
    ))
}

/// Deterministic seeded ensemble of rational specs whose models all pass
/// [`build_model`] validation.
pub fn generate_rational_specs(cfg: &EnsembleConfig) -> Result<Vec<RationalSpec>> {
    let (lmin, lmax) = cfg.degree_range;
    if lmin > lmax || lmin < 1 {
        return invalid("degree range must be nonempty with l >= 1");
    }
    if cfg.strictness == Strictness::PaperStrict && lmax < 3 {
        return invalid("paper-strict ensembles need l >= 3");
    }
    let (amin, amax) = cfg.alpha_range;
    if !(amin > 0.0 && amin <= amax) {
        return invalid("alpha range must be nonempty and strictly positive");
    }
    if !(cfg.beta_range.0 <= cfg.beta_range.1) {
        return invalid("beta range must be nonempty");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut specs = Vec::with_capacity(cfg.count);
    while specs.len() < cfg.count {
        let mut accepted = None;
        for _ in 0..GENERATOR_RETRIES {
            if let Some(spec) = draw_spec(&mut rng, cfg) {
                if build_model(&spec, DEFAULT_ROOT_TOL).is_ok() {
                    accepted = Some(spec);
                    break;
                }
            }
        }
        match accepted {
            Some(spec) => specs.push(spec),
            None => return invalid("ensemble generator exhausted its retries"),
        }
    }
    Ok(specs)
}

/// Deterministic seeded ensemble of valid real-signal models.
pub fn generate_models(cfg: &EnsembleConfig) -> Result<Vec<ExponentialSum>> {
    generate_rational_specs(cfg)?
        .iter()
        .map(|s| build_model(s, DEFAULT_ROOT_TOL))
        .collect()
}

/// Reports for one ensemble member.
#[derive(Debug, Clone, PartialEq)]
pub struct MemberReport {
    pub index: usize,
    pub terms: usize,
    pub reports: Vec<VerificationReport>,
}

impl MemberReport {
    pub fn passed(&self) -> bool {
        self.reports.iter().all(|r| r.passed)
    }
}

/// Runs [`verify_all`] over a seeded ensemble. Members are processed in
/// parallel; output order follows the ensemble.
pub fn sweep(
    cfg: &EnsembleConfig,
    grid: &TransformGrid,
    tols: &SuiteTolerances,
) -> Result<Vec<MemberReport>> {
    let specs = generate_rational_specs(cfg)?;
    Ok(specs
        .par_iter()
        .enumerate()
        .map(|(index, spec)| {
            let model = build_model(spec, DEFAULT_ROOT_TOL).expect("generator validated the spec");
            MemberReport {
                index,
                terms: model.len(),
                reports: verify_all(&model, Some(spec), grid, tols),
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polynomial::PoleResidue;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn single() -> ExponentialSum {
        ExponentialSum::new(vec![PoleResidue::new(c(-1.0, 0.0), c(1.0, 0.0))]).unwrap()
    }

    fn triple_spec() -> RationalSpec {
        RationalSpec::new(
            Polynomial::from_real(&[1.0]),
            Polynomial::from_roots(&[c(-1.0, 0.0), c(-2.0, 0.0), c(-3.0, 0.0)]),
            Strictness::PaperStrict,
        )
    }

    fn damped_cosine() -> ExponentialSum {
        let spec = RationalSpec::new(
            Polynomial::from_real(&[2.0, 2.0]),
            Polynomial::from_real(&[5.0, 2.0, 1.0]),
            Strictness::Relaxed,
        );
        build_model(&spec, DEFAULT_ROOT_TOL).unwrap()
    }

    #[test]
    fn grid_construction() {
        let g = TransformGrid::default();
        let xs = g.abscissae();
        assert_eq!(xs.len(), 64);
        assert_eq!(xs[0], 0.1);
        assert_eq!(xs[63], 10.0);
        assert!(xs.windows(2).all(|w| w[0] < w[1]));
        let lin = TransformGrid::new(1.0, 2.0, 3, Spacing::Linear).unwrap();
        assert_eq!(lin.abscissae(), vec![1.0, 1.5, 2.0]);
        assert!(TransformGrid::new(0.0, 1.0, 4, Spacing::Linear).is_err());
        assert!(TransformGrid::new(2.0, 1.0, 4, Spacing::Linear).is_err());
        assert!(TransformGrid::new(1.0, 2.0, 1, Spacing::Linear).is_err());
        assert_eq!(g.spread(5).len(), 5);
        assert_eq!(g.nearest(&[0.1, 100.0]), vec![0.1, 10.0]);
    }

    #[test]
    fn theorem1_suite() {
        let g = TransformGrid::default();
        let r = verify_theorem1(&single(), &g, 1e-9);
        assert!(r.passed, "{r}");
        assert!(r.max_rel_err <= 1e-9);
        let z = verify_theorem1(&ExponentialSum::zero(), &g, 1e-9);
        assert!(z.passed);
        assert_eq!(z.max_abs_err, 0.0);
        let m = build_model(&triple_spec(), DEFAULT_ROOT_TOL).unwrap();
        assert!(verify_theorem1(&m, &g, 1e-9).passed);
    }

    #[test]
    fn theorem2_suite() {
        let g = TransformGrid::default();
        for m in [
            single(),
            damped_cosine(),
            build_model(&triple_spec(), DEFAULT_ROOT_TOL).unwrap(),
        ] {
            let r = verify_theorem2(&m, &g, 1e-8);
            assert!(r.passed, "{r}");
        }
    }

    #[test]
    fn realpart_suite() {
        let g = TransformGrid::default();
        let r = verify_realpart_identity(&single(), &g, 1e-9);
        assert!(r.passed, "{r}");
        let z = verify_realpart_identity(&ExponentialSum::zero(), &g, 1e-9);
        assert_eq!(z.max_abs_err, 0.0);
        assert!(z.passed);
    }

    #[test]
    fn residue_suite() {
        let r = verify_residue_normalization(&triple_spec(), 20, 1e-10);
        assert!(r.passed, "{r}");
        let bad = RationalSpec::new(
            Polynomial::from_real(&[1.0]),
            Polynomial::from_roots(&[c(1.0, 0.0), c(-2.0, 0.0), c(-3.0, 0.0)]),
            Strictness::PaperStrict,
        );
        let r = verify_residue_normalization(&bad, 20, 1e-10);
        assert!(!r.passed);
        assert!(r.failure.is_some());
    }

    #[test]
    fn worst_point_reproduces() {
        let m = damped_cosine();
        let g = TransformGrid::default();
        let r = verify_theorem2(&m, &g, 1e-8);
        assert!(g.abscissae().contains(&r.worst_point.re));
        let (err, z) = theorem2_error(&m, r.worst_point.re).unwrap();
        assert_eq!(err / (1.0 + z), r.max_rel_err);
    }

    #[test]
    fn generator_is_deterministic() {
        let cfg = EnsembleConfig {
            seed: 1,
            count: 1,
            degree_range: (3, 3),
            ..EnsembleConfig::default()
        };
        let a = generate_models(&cfg).unwrap();
        let b = generate_models(&cfg).unwrap();
        assert_eq!(a, b);
        assert_eq!(a[0].len(), 3);
        assert!(a[0].is_real_signal());
        let many = generate_models(&EnsembleConfig {
            count: 30,
            ..EnsembleConfig::default()
        })
        .unwrap();
        for m in &many {
            let poles: Vec<Complex64> = m.terms().iter().map(|t| t.pole).collect();
            assert!(min_separation(&poles) > 1e-6 * 6.0);
            assert!(m.is_real_signal());
            assert!((3..=8).contains(&m.len()));
        }
    }

    #[test]
    fn generator_rejects_bad_ranges() {
        let bad = EnsembleConfig {
            alpha_range: (0.0, 1.0),
            ..EnsembleConfig::default()
        };
        assert!(generate_rational_specs(&bad).is_err());
        let bad = EnsembleConfig {
            degree_range: (5, 4),
            ..EnsembleConfig::default()
        };
        assert!(generate_rational_specs(&bad).is_err());
    }

    #[test]
    fn report_text_ends_with_verdict() {
        let r = verify_theorem2(&single(), &TransformGrid::default(), 1e-8);
        let text = r.to_string();
        assert!(text.starts_with("identity: theorem2"));
        assert!(text.ends_with("PASS"));
    }
}
