//! Batch execution: expand a run configuration into independent check
//! rows, run them (in parallel when enabled), and emit a deterministic
//! CSV report plus per-row summary lines.
//!
//! Determinism contract: identical config and build produce byte-identical
//! CSV. Rows are sorted by `(kind, lambda, n)`, floats are printed with 17
//! significant digits, and execution order never leaks into the output.

use std::fmt::Write as _;
use std::path::PathBuf;

use num_complex::Complex64;

use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::identities::{
    block_bo_check, bo_check, cramer_check, lambda_sweep, quotient_check, CheckKind,
    CheckReport, ScalarPipeline,
};
use crate::par::par_map;

/// Numeric payload of a successful check row.
#[derive(Debug, Clone)]
pub struct RowValues {
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub abs_residual: f64,
    pub rel_residual: f64,
    pub section: usize,
}

/// One CSV row: a check outcome or a recorded failure.
#[derive(Debug, Clone)]
pub struct Row {
    pub kind: CheckKind,
    pub lambda: Option<Complex64>,
    pub n: usize,
    pub band: usize,
    pub outcome: std::result::Result<RowValues, String>,
}

fn row_from_report(report: &CheckReport, band: usize) -> Row {
    let section = report
        .diagnostics
        .get("section")
        .copied()
        .unwrap_or(0.0) as usize;
    Row {
        kind: report.kind,
        lambda: report.lambda,
        n: report.n,
        band,
        outcome: Ok(RowValues {
            lhs: report.lhs,
            rhs: report.rhs,
            abs_residual: report.abs_residual,
            rel_residual: report.rel_residual,
            section,
        }),
    }
}

fn error_rows(config: &RunConfig, message: &str) -> Vec<Row> {
    let lambdas: Vec<Option<Complex64>> = if config.check_kind == CheckKind::LambdaSweep {
        config.lambdas.iter().copied().map(Some).collect()
    } else {
        vec![None]
    };
    let mut rows = Vec::new();
    for lambda in lambdas {
        for &n in &config.ns {
            rows.push(Row {
                kind: config.check_kind,
                lambda,
                n,
                band: config.params.band,
                outcome: Err(message.to_string()),
            });
        }
    }
    rows
}

/// Run every check requested by the config. Numerical failures become
/// error rows (the row count always matches the request); only config
/// parsing and file IO are structural.
pub fn execute(config: &RunConfig) -> Vec<Row> {
    let band = config.params.band;
    let mut rows = match config.check_kind {
        CheckKind::Bo | CheckKind::Quotient | CheckKind::Cramer => {
            let pipeline = match config.symbol.build_scalar_pipeline(&config.params) {
                Ok(p) => p,
                Err(e) => return error_rows(config, &e.to_string()),
            };
            let check = |p: &ScalarPipeline, n: usize| match config.check_kind {
                CheckKind::Bo => bo_check(p, n),
                CheckKind::Quotient => quotient_check(p, n),
                CheckKind::Cramer => cramer_check(p, n),
                _ => unreachable!(),
            };
            par_map(config.ns.clone(), |n| match check(&pipeline, n) {
                Ok(rep) => row_from_report(&rep, band),
                Err(e) => Row {
                    kind: config.check_kind,
                    lambda: None,
                    n,
                    band,
                    outcome: Err(e.to_string()),
                },
            })
        }
        CheckKind::LambdaSweep => {
            let pipeline = match config.symbol.build_scalar_pipeline(&config.params) {
                Ok(p) => p,
                Err(e) => return error_rows(config, &e.to_string()),
            };
            lambda_sweep(&pipeline.log_phi, &config.lambdas, &config.ns, &config.params)
                .into_iter()
                .map(|record| match record.result {
                    Ok(rep) => row_from_report(&rep, band),
                    Err(message) => Row {
                        kind: CheckKind::LambdaSweep,
                        lambda: Some(record.lambda),
                        n: record.n,
                        band,
                        outcome: Err(message),
                    },
                })
                .collect()
        }
        CheckKind::BlockBo => {
            let pipeline = match config.symbol.build_block_pipeline(&config.params) {
                Ok(p) => p,
                Err(e) => return error_rows(config, &e.to_string()),
            };
            par_map(config.ns.clone(), |n| match block_bo_check(&pipeline, n) {
                Ok(rep) => row_from_report(&rep, band),
                Err(e) => Row {
                    kind: CheckKind::BlockBo,
                    lambda: None,
                    n,
                    band,
                    outcome: Err(e.to_string()),
                },
            })
        }
    };
    sort_rows(&mut rows);
    rows
}

fn sort_rows(rows: &mut [Row]) {
    rows.sort_by(|a, b| {
        let ka = a.kind.as_str();
        let kb = b.kind.as_str();
        let la = a.lambda.unwrap_or(Complex64::ZERO);
        let lb = b.lambda.unwrap_or(Complex64::ZERO);
        ka.cmp(kb)
            .then(la.re.total_cmp(&lb.re))
            .then(la.im.total_cmp(&lb.im))
            .then(a.n.cmp(&b.n))
    });
}

/// 17-significant-digit scientific notation, the fixed CSV float format.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn sanitize(message: &str) -> String {
    message
        .chars()
        .map(|c| match c {
            ',' => ';',
            '\n' | '\r' => ' ',
            other => other,
        })
        .collect()
}

/// Render rows as CSV with the fixed column set.
pub fn render_csv(rows: &[Row]) -> String {
    let mut out = String::from(
        "kind,lambda_re,lambda_im,n,lhs_re,lhs_im,rhs_re,rhs_im,\
         abs_residual,rel_residual,band,section,error\n",
    );
    for row in rows {
        let (lre, lim) = match row.lambda {
            Some(l) => (format_float(l.re), format_float(l.im)),
            None => (String::new(), String::new()),
        };
        match &row.outcome {
            Ok(v) => {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},{},{},{},{},{},{},",
                    row.kind.as_str(),
                    lre,
                    lim,
                    row.n,
                    format_float(v.lhs.re),
                    format_float(v.lhs.im),
                    format_float(v.rhs.re),
                    format_float(v.rhs.im),
                    format_float(v.abs_residual),
                    format_float(v.rel_residual),
                    row.band,
                    v.section,
                );
            }
            Err(message) => {
                let _ = writeln!(
                    out,
                    "{},{},{},{},,,,,,,{},,{}",
                    row.kind.as_str(),
                    lre,
                    lim,
                    row.n,
                    row.band,
                    sanitize(message),
                );
            }
        }
    }
    out
}

/// Exit code for a finished row set: 0 iff every row succeeded with
/// `rel_residual <= residual_tol`, otherwise 1. (Structural errors exit 2
/// at the CLI boundary.)
pub fn exit_code(rows: &[Row], residual_tol: f64) -> i32 {
    let all_ok = rows.iter().all(|row| match &row.outcome {
        Ok(v) => v.rel_residual <= residual_tol,
        Err(_) => false,
    });
    if all_ok {
        0
    } else {
        1
    }
}

/// Outcome of a batch run.
#[derive(Debug)]
pub struct RunSummary {
    pub exit_code: i32,
    pub rows: usize,
    pub failures: usize,
    pub output_path: PathBuf,
}

fn summary_line(row: &Row, residual_tol: f64) -> String {
    let header = match row.lambda {
        Some(l) => format!(
            "{} lambda=({},{}) n={}",
            row.kind.as_str(),
            format_float(l.re),
            format_float(l.im),
            row.n
        ),
        None => format!("{} n={}", row.kind.as_str(), row.n),
    };
    match &row.outcome {
        Ok(v) => {
            let verdict = if v.rel_residual <= residual_tol {
                "pass"
            } else {
                "FAIL"
            };
            format!(
                "{header}: rel_residual {} (tol {:e}) {verdict}",
                format_float(v.rel_residual),
                residual_tol
            )
        }
        Err(message) => format!("{header}: error: {message}"),
    }
}

/// Execute the config, write the CSV report, and print one summary line
/// per check row (suppressed by `quiet`) plus a final totals line.
pub fn run(config: &RunConfig, quiet: bool) -> Result<RunSummary> {
    let rows = execute(config);
    let csv = render_csv(&rows);
    if let Some(parent) = config.output.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent).map_err(Error::Io)?;
        }
    }
    std::fs::write(&config.output, csv).map_err(Error::Io)?;

    let failures = rows
        .iter()
        .filter(|row| match &row.outcome {
            Ok(v) => v.rel_residual > config.residual_tol,
            Err(_) => true,
        })
        .count();
    if !quiet {
        for row in &rows {
            println!("{}", summary_line(row, config.residual_tol));
        }
    }
    let code = exit_code(&rows, config.residual_tol);
    println!(
        "{}: {}/{} rows within tolerance {:e} -> exit {}",
        config.check_kind.as_str(),
        rows.len() - failures,
        rows.len(),
        config.residual_tol,
        code
    );
    Ok(RunSummary {
        exit_code: code,
        rows: rows.len(),
        failures,
        output_path: config.output.clone(),
    })
}
