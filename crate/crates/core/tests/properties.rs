use plemelj::polynomial::min_separation;
use plemelj::signal::eval_signal_raw;
use plemelj::*;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed};

fn config() -> Config {
    Config {
        cases: 64,
        rng_seed: RngSeed::Fixed(0x1ace),
        failure_persistence: None,
        ..Config::default()
    }
}

/// Left-half-plane pole sets closed under conjugation, spacing at least 0.1.
fn pole_sets() -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec((0.2f64..5.0, 0.1f64..4.0, any::<bool>()), 1..=4)
        .prop_map(|draws| {
            let mut poles = Vec::new();
            for (alpha, beta, pair) in draws {
                if pair {
                    poles.push(Complex64::new(-alpha, beta));
                    poles.push(Complex64::new(-alpha, -beta));
                } else {
                    poles.push(Complex64::new(-alpha, 0.0));
                }
            }
            poles
        })
        .prop_filter("poles too close", |p| min_separation(p) >= 0.1)
}

fn real_denominator(poles: &[Complex64]) -> Polynomial {
    let re: Vec<f64> = Polynomial::from_roots(poles)
        .coeffs()
        .iter()
        .map(|c| c.re)
        .collect();
    Polynomial::from_real(&re)
}

/// Rational specs with `deg P >= deg Q + gap`.
fn specs(gap: usize) -> impl Strategy<Value = RationalSpec> {
    pole_sets()
        .prop_filter("denominator too small for the gap", move |p| p.len() >= gap)
        .prop_flat_map(move |poles| {
            let max_n = poles.len() - gap;
            (
                Just(poles),
                prop::collection::vec(-1.0f64..1.0, 1..=max_n + 1),
            )
        })
        .prop_map(move |(poles, mut num)| {
            if let Some(last) = num.last_mut() {
                if last.abs() < 0.1 {
                    *last = 0.1f64.copysign(*last);
                }
            }
            let strictness = if gap >= 3 {
                Strictness::PaperStrict
            } else {
                Strictness::Relaxed
            };
            RationalSpec::new(
                Polynomial::from_real(&num),
                real_denominator(&poles),
                strictness,
            )
        })
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn roots_rebuild_the_polynomial(poles in pole_sets()) {
        let p = real_denominator(&poles);
        let roots = find_roots(&p, DEFAULT_ROOT_TOL).unwrap();
        prop_assert_eq!(roots.len(), poles.len());
        let rebuilt = Polynomial::from_roots(&roots);
        let scale = p.coeffs().iter().map(|c| c.norm()).fold(1.0, f64::max);
        for (a, b) in rebuilt.coeffs().iter().zip(p.coeffs()) {
            prop_assert!((a - b).norm() <= 1e-9 * scale);
        }
    }

    #[test]
    fn residues_sum_to_zero_when_the_gap_is_two(spec in specs(2)) {
        let model = build_model(&spec, DEFAULT_ROOT_TOL).unwrap();
        let sum: Complex64 = model.terms().iter().map(|t| t.residue).sum();
        prop_assert!(sum.norm() <= 1e-9 * model.residue_mass().max(1.0));
    }

    #[test]
    fn real_rational_data_gives_a_real_signal(spec in specs(1), x in -10.0f64..10.0) {
        let model = build_model(&spec, DEFAULT_ROOT_TOL).unwrap();
        prop_assert!(model.is_real_signal());
        let raw = eval_signal_raw(&model, x);
        let scale: f64 = model
            .terms()
            .iter()
            .map(|t| (t.residue * (t.pole * x).exp()).norm())
            .sum();
        prop_assert!(raw.im.abs() <= 1e-12 * scale.max(f64::MIN_POSITIVE));
    }

    #[test]
    fn signal_obeys_the_decay_bound(spec in specs(1), x in 0.0f64..20.0) {
        let model = build_model(&spec, DEFAULT_ROOT_TOL).unwrap();
        let bound = model.residue_mass() * (-model.alpha_min() * x).exp();
        prop_assert!(eval_signal(&model, x).norm() <= bound * (1.0 + 1e-12));
    }

    #[test]
    fn inversion_recovers_the_signal(spec in specs(3), s in 0.1f64..10.0) {
        let model = build_model(&spec, DEFAULT_ROOT_TOL).unwrap();
        let z = eval_signal(&model, s).re;
        let rec = invert(&model, s).unwrap();
        prop_assert!((rec - z).abs() <= 1e-8 * (1.0 + z.abs()), "s = {s}: {rec} vs {z}");
    }

    #[test]
    fn stieltjes_transform_is_schwarz_symmetric(
        spec in specs(1),
        re in -5.0f64..5.0,
        im in 0.01f64..5.0,
    ) {
        let model = build_model(&spec, DEFAULT_ROOT_TOL).unwrap();
        let p = Complex64::new(re, im);
        let up = double_laplace(&model, p, EvalMode::ClosedForm).unwrap();
        let down = double_laplace(&model, p.conj(), EvalMode::ClosedForm).unwrap();
        prop_assert!((up.conj() - down).norm() <= 1e-12 * (1.0 + up.norm()));
    }

    #[test]
    fn e1_commutes_with_conjugation(re in -50.0f64..50.0, im in 0.001f64..50.0) {
        let z = Complex64::new(re, im);
        let a = e1(z).unwrap();
        let b = e1(z.conj()).unwrap();
        prop_assert!((a.conj() - b).norm() <= 1e-15 * a.norm());
    }
}
