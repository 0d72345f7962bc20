//! Command execution. Data goes to the `--out` file or standard output,
//! diagnostics to the error stream; each output is written once, after
//! all of it has been computed.

use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use plemelj::verify::ORACLE_SPOT_COUNT;
use plemelj::{
    admissible_sector, double_laplace, eval_signal, sweep, verify_all, Complex64, EvalMode,
    MemberReport, Spacing, Strictness, TransformGrid, VerificationReport,
};

use crate::config::{BuiltModel, Command, RunConfig};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INVALID: i32 = 2;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] crate::config::ConfigError),
    #[error("invalid model: {0}")]
    Model(#[from] plemelj::Error),
    #[error("{0}")]
    Usage(String),
    #[error("cannot write {}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

/// Seventeen significant digits, enough to round-trip every `f64`.
pub fn fmt_num(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn fmt_complex(z: Complex64) -> String {
    format!("{:.16e}{:+.16e}i", z.re, z.im)
}

fn rel(err: f64, reference: f64) -> f64 {
    err / (1.0 + reference)
}

/// Output of one command: the main document and, for `sweep`, a report.
struct Output {
    data: Vec<u8>,
    report: Option<String>,
    passed: bool,
}

fn csv_bytes(header: &[&str], rows: Vec<Vec<String>>) -> Result<Vec<u8>, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.write_record(&row)?;
    }
    w.into_inner().map_err(|e| CliError::Io {
        path: PathBuf::from("<buffer>"),
        source: e.into_error(),
    })
}

fn build(cfg: &RunConfig, command: Command) -> Result<BuiltModel, CliError> {
    let source = cfg.model.as_ref().ok_or_else(|| {
        CliError::Usage(format!(
            "{} needs a model: set den_coeffs, den_roots or poles in [model]",
            command.name()
        ))
    })?;
    Ok(source.build(cfg.strictness)?)
}

fn analyze(built: &BuiltModel) -> Output {
    let m = &built.model;
    let mut s = String::new();
    writeln!(s, "terms: {}", m.len()).unwrap();
    writeln!(s, "real_signal: {}", m.is_real_signal()).unwrap();
    writeln!(s, "phi0_sup: {}", fmt_num(admissible_sector(m).phi0_sup)).unwrap();
    writeln!(s, "alpha_min: {}", fmt_num(m.alpha_min())).unwrap();
    for (k, t) in m.terms().iter().enumerate() {
        writeln!(
            s,
            "term {k}: pole {} residue {}",
            fmt_complex(t.pole),
            fmt_complex(t.residue)
        )
        .unwrap();
    }
    Output {
        data: s.into_bytes(),
        report: None,
        passed: true,
    }
}

fn transform(cfg: &RunConfig, built: &BuiltModel) -> Result<Output, CliError> {
    let m = &built.model;
    let spots = cfg.grid.spread(ORACLE_SPOT_COUNT);
    let mut rows = Vec::with_capacity(cfg.grid.len());
    let mut worst = 0.0f64;
    for s in cfg.grid.abscissae() {
        let p = Complex64::new(s, 0.0);
        let r = double_laplace(m, p, EvalMode::ClosedForm)?;
        let oracle = if spots.contains(&s) {
            let q = double_laplace(m, p, EvalMode::QuadratureOracle)?;
            let e = rel((r - q).norm(), r.norm());
            worst = worst.max(e);
            fmt_num(e)
        } else {
            String::new()
        };
        rows.push(vec![fmt_num(s), fmt_num(r.re), fmt_num(r.im), oracle]);
    }
    Ok(Output {
        data: csv_bytes(&["s", "Re r(s)", "Im r(s)", "oracle_rel_err"], rows)?,
        report: None,
        passed: worst <= cfg.tolerances.oracle,
    })
}

fn invert(cfg: &RunConfig, built: &BuiltModel) -> Result<Output, CliError> {
    let m = &built.model;
    if !m.is_real_signal() {
        return Err(CliError::Usage(
            "invert recovers real signals only; the model is not closed under conjugation".into(),
        ));
    }
    let mut rows = Vec::with_capacity(cfg.grid.len());
    let mut worst = 0.0f64;
    for s in cfg.grid.abscissae() {
        let z = eval_signal(m, s).re;
        let rec = plemelj::invert(m, s)?;
        let abs = (rec - z).abs();
        let r = rel(abs, z.abs());
        worst = worst.max(r);
        rows.push(vec![
            fmt_num(s),
            fmt_num(z),
            fmt_num(rec),
            fmt_num(abs),
            fmt_num(r),
        ]);
    }
    Ok(Output {
        data: csv_bytes(&["s", "Z_true", "Z_rec", "abs_err", "rel_err"], rows)?,
        report: None,
        passed: worst <= cfg.tolerances.theorem2,
    })
}

fn verify(cfg: &RunConfig, built: &BuiltModel) -> Output {
    let reports = verify_all(&built.model, Some(&built.spec), &cfg.grid, &cfg.tolerances);
    let passed = reports.iter().all(|r| r.passed);
    let mut s = String::new();
    for r in &reports {
        writeln!(s, "{r}\n").unwrap();
    }
    writeln!(s, "overall: {}", verdict(passed)).unwrap();
    Output {
        data: s.into_bytes(),
        report: None,
        passed,
    }
}

fn verdict(passed: bool) -> &'static str {
    if passed {
        "PASS"
    } else {
        "FAIL"
    }
}

fn short_name(r: &VerificationReport) -> &str {
    r.identity_name
        .split(':')
        .next()
        .unwrap_or(&r.identity_name)
}

fn grid_line(g: &TransformGrid) -> String {
    let spacing = match g.spacing() {
        Spacing::Linear => "linear",
        Spacing::Logarithmic => "log",
    };
    format!(
        "[{}, {}] x {} ({spacing})",
        fmt_num(g.s_min()),
        fmt_num(g.s_max()),
        g.len()
    )
}

fn sweep_csv(members: &[MemberReport]) -> Result<Vec<u8>, CliError> {
    let header = [
        "model",
        "terms",
        "identity",
        "max_abs_err",
        "max_rel_err",
        "worst_point_re",
        "worst_point_im",
        "tolerance",
        "oracle_max_err",
        "oracle_tolerance",
        "passed",
    ];
    let mut rows = Vec::new();
    for m in members {
        for r in &m.reports {
            rows.push(vec![
                m.index.to_string(),
                m.terms.to_string(),
                short_name(r).to_string(),
                fmt_num(r.max_abs_err),
                fmt_num(r.max_rel_err),
                fmt_num(r.worst_point.re),
                fmt_num(r.worst_point.im),
                fmt_num(r.tolerance),
                r.oracle_max_err.map(fmt_num).unwrap_or_default(),
                fmt_num(r.oracle_tolerance),
                r.passed.to_string(),
            ]);
        }
    }
    csv_bytes(&header, rows)
}

/// Aggregate worst case per identity over the ensemble.
fn sweep_report(cfg: &RunConfig, members: &[MemberReport]) -> String {
    let ens = cfg.ensemble();
    let mut s = String::new();
    writeln!(s, "sweep: seed {}, {} models", ens.seed, members.len()).unwrap();
    writeln!(
        s,
        "degrees: [{}, {}], alpha: [{}, {}], beta: [{}, {}], strictness: {}",
        ens.degree_range.0,
        ens.degree_range.1,
        fmt_num(ens.alpha_range.0),
        fmt_num(ens.alpha_range.1),
        fmt_num(ens.beta_range.0),
        fmt_num(ens.beta_range.1),
        match ens.strictness {
            Strictness::PaperStrict => "paper_strict",
            Strictness::Relaxed => "relaxed",
        }
    )
    .unwrap();
    writeln!(s, "grid: {}", grid_line(&cfg.grid)).unwrap();
    let passed_models = members.iter().filter(|m| m.passed()).count();
    writeln!(s, "models_passed: {passed_models}/{}\n", members.len()).unwrap();

    let suites = members.first().map_or(0, |m| m.reports.len());
    for i in 0..suites {
        let column: Vec<(usize, &VerificationReport)> =
            members.iter().map(|m| (m.index, &m.reports[i])).collect();
        // the first model attaining the largest error is the worst case
        let (worst_model, worst) = column
            .iter()
            .copied()
            .reduce(|a, b| {
                if b.1.max_rel_err > a.1.max_rel_err {
                    b
                } else {
                    a
                }
            })
            .expect("nonempty ensemble");
        let max_abs = column
            .iter()
            .map(|(_, r)| r.max_abs_err)
            .fold(0.0, f64::max);
        let oracle = column
            .iter()
            .filter_map(|(_, r)| r.oracle_max_err)
            .reduce(f64::max);
        let passed = column.iter().filter(|(_, r)| r.passed).count();
        writeln!(s, "identity: {}", worst.identity_name).unwrap();
        writeln!(s, "models_passed: {passed}/{}", column.len()).unwrap();
        writeln!(s, "worst_model: {worst_model}").unwrap();
        writeln!(s, "max_abs_err: {}", fmt_num(max_abs)).unwrap();
        writeln!(s, "max_rel_err: {}", fmt_num(worst.max_rel_err)).unwrap();
        writeln!(s, "worst_point: {}", fmt_complex(worst.worst_point)).unwrap();
        writeln!(s, "tolerance: {}", fmt_num(worst.tolerance)).unwrap();
        writeln!(s, "oracle: {}", worst.oracle_description).unwrap();
        if let Some(e) = oracle {
            writeln!(
                s,
                "oracle_max_err: {} (tolerance {})",
                fmt_num(e),
                fmt_num(worst.oracle_tolerance)
            )
            .unwrap();
        }
        for (index, r) in &column {
            if let Some(why) = &r.failure {
                writeln!(s, "failure (model {index}): {why}").unwrap();
            }
        }
        writeln!(s, "{}\n", verdict(passed == column.len())).unwrap();
    }
    writeln!(s, "overall: {}", verdict(passed_models == members.len())).unwrap();
    s
}

fn run_sweep(cfg: &RunConfig, err: &mut dyn Write) -> Result<Output, CliError> {
    let start = Instant::now();
    let members = sweep(&cfg.ensemble(), &cfg.grid, &cfg.tolerances)?;
    // timing is a diagnostic so the data files stay reproducible
    let _ = writeln!(
        err,
        "sweep: {} models in {:.3} s",
        members.len(),
        start.elapsed().as_secs_f64()
    );
    let passed = members.iter().all(|m| m.passed());
    Ok(Output {
        data: sweep_csv(&members)?,
        report: Some(sweep_report(cfg, &members)),
        passed,
    })
}

fn execute(cfg: &RunConfig, err: &mut dyn Write) -> Result<Output, CliError> {
    let command = cfg
        .command
        .ok_or_else(|| CliError::Usage("no command given".into()))?;
    if command == Command::Sweep {
        return run_sweep(cfg, err);
    }
    let built = build(cfg, command)?;
    for w in built.model.warnings() {
        let _ = writeln!(err, "warning: {w}");
    }
    match command {
        Command::Analyze => Ok(analyze(&built)),
        Command::Transform => transform(cfg, &built),
        Command::Invert => invert(cfg, &built),
        Command::Verify => Ok(verify(cfg, &built)),
        Command::Sweep => unreachable!("handled above"),
    }
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    fs::write(path, bytes).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn emit(cfg: &RunConfig, output: Output, out: &mut dyn Write) -> Result<(), CliError> {
    let stdout_err = |source| CliError::Io {
        path: PathBuf::from("<stdout>"),
        source,
    };
    match &cfg.out {
        Some(path) => write_file(path, &output.data)?,
        None => out.write_all(&output.data).map_err(stdout_err)?,
    }
    if let Some(report) = output.report {
        match &cfg.report {
            Some(path) => write_file(path, report.as_bytes())?,
            None => {
                if cfg.out.is_none() {
                    out.write_all(b"\n").map_err(stdout_err)?;
                }
                out.write_all(report.as_bytes()).map_err(stdout_err)?;
            }
        }
    }
    out.flush().map_err(stdout_err)
}

/// Runs the configured command and returns the process exit code: 0 when
/// everything passed, 1 when a check missed its tolerance, 2 on invalid
/// input.
pub fn run_command(cfg: &RunConfig, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = execute(cfg, err).and_then(|o| {
        let passed = o.passed;
        emit(cfg, o, out).map(|()| passed)
    });
    match result {
        Ok(true) => EXIT_PASS,
        Ok(false) => {
            let _ = writeln!(err, "a check missed its tolerance");
            EXIT_FAIL
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_INVALID
        }
    }
}
