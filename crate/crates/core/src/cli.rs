//! The `cfm` command-line front end.
//!
//! Exit codes: 0 success, 1 membership failure, 2 parse or usage error,
//! 3 numeric failure.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Deserialize;
use serde_json::json;

use crate::canonical::{factor_spread, sample, validate_membership};
use crate::cells::{cell_count, cell_of_matrix, enumerate_cells, euler_characteristic};
use crate::error::{CfmError, Result};
use crate::expr::{CanonicalForm, CfExpr};
use crate::matrix::{MatrixF, Tolerance};
use crate::parse::parse;
use crate::poincare::{coefficient_ring, poincare_polynomial};
use crate::preset::catalog;
use crate::scalar::Field;
use crate::sympow::{coeffs_to_sym, projective_vector_roots, sym_to_coeffs, PointMultiset};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MEMBERSHIP: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "cfm", version, about = "Canonical forms of matrices over R, C and H")]
struct Cli {
    /// Entries at most this large count as zero.
    #[arg(long, global = true, default_value_t = 1e-9)]
    eps_zero: f64,
    /// Tolerance for norms, orthogonality and factorization residuals.
    #[arg(long, global = true, default_value_t = 1e-8)]
    eps_orth: f64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FieldArg {
    R,
    C,
    H,
}

impl From<FieldArg> for Field {
    fn from(f: FieldArg) -> Field {
        match f {
            FieldArg::R => Field::Real,
            FieldArg::C => Field::Complex,
            FieldArg::H => Field::Quaternion,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Dimension of the manifold of members.
    Dim {
        expr: String,
        #[arg(long, value_enum, default_value = "r")]
        field: FieldArg,
    },
    /// List the cells and their dimensions.
    Cells {
        expr: String,
        #[arg(long, value_enum, default_value = "r")]
        field: FieldArg,
        #[arg(long)]
        json: bool,
    },
    /// Number of cells.
    Count { expr: String },
    /// Poincaré polynomial.
    Poincare {
        expr: String,
        #[arg(long, value_enum)]
        field: FieldArg,
        #[arg(long)]
        json: bool,
    },
    /// Euler characteristic.
    Euler {
        expr: String,
        #[arg(long, value_enum)]
        field: FieldArg,
    },
    /// Draw a member from a seeded distribution and print it as JSON.
    Sample {
        expr: String,
        #[arg(long)]
        seed: u64,
        #[arg(long, value_enum)]
        field: FieldArg,
        /// Write the matrix here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a matrix file against the form.
    Check {
        expr: String,
        matrix: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Factor a member of a spreading (or of every block of a sum) as C·X.
    Factor { expr: String, matrix: PathBuf },
    /// Cell containing a member.
    CellOf { expr: String, matrix: PathBuf },
    /// Print the expression a preset expands to.
    Preset {
        name: String,
        /// Parameter groups, e.g. `2,1 3` or `2,1;3`.
        #[arg(required = true)]
        params: Vec<String>,
    },
    /// Symmetric products of the complex line.
    Sympow {
        #[command(subcommand)]
        op: SympowOp,
    },
    /// Summary of the built-in catalog of expressions.
    Catalog,
}

#[derive(Debug, Subcommand)]
enum SympowOp {
    /// Root multiset from `{"coeffs": [[re, im], …]}` or `{"vector": [[re, im], …]}`.
    Roots { file: PathBuf },
    /// Coefficients from `{"finite": [[re, im], …], "inf": s}`.
    Coeffs { file: PathBuf },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RootsInput {
    coeffs: Option<Vec<Complex64>>,
    vector: Option<Vec<Complex64>>,
}

/// Outcome of a subcommand that ran to completion.
enum Outcome {
    Ok,
    Rejected,
}

fn exit_code(err: &CfmError) -> i32 {
    match err {
        CfmError::Membership(_) => EXIT_MEMBERSHIP,
        CfmError::Numeric(_) | CfmError::Degenerate(_) => EXIT_NUMERIC,
        _ => EXIT_USAGE,
    }
}

/// Runs the CLI on `args` (including the program name), writing results to
/// `out` and diagnostics to `err`. Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    let tol = match Tolerance::new(cli.eps_zero, cli.eps_orth) {
        Ok(t) => t,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_USAGE;
        }
    };
    match dispatch(cli.command, &tol, out) {
        Ok(Outcome::Ok) => EXIT_OK,
        Ok(Outcome::Rejected) => EXIT_MEMBERSHIP,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn form(text: &str) -> Result<CanonicalForm> {
    let f = parse(text)?;
    f.expr.validate()?;
    Ok(f)
}

fn read_matrix(path: &Path) -> Result<MatrixF> {
    MatrixF::from_json(&std::fs::read_to_string(path)?)
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
}

fn require_member(m: &MatrixF, f: &CanonicalForm, tol: &Tolerance) -> Result<()> {
    let report = validate_membership(m, f, tol);
    if report.passed {
        Ok(())
    } else {
        Err(CfmError::Membership(report))
    }
}

fn factor_json(m: &MatrixF, expr: &CfExpr, tol: &Tolerance) -> Result<serde_json::Value> {
    match expr {
        CfExpr::Spread { .. } => {
            let (c, x) = factor_spread(m, expr, tol)?;
            Ok(json!({ "C": c.to_json_value(), "X": x.to_json_value() }))
        }
        CfExpr::Sum { blocks, .. } => {
            let parts = expr
                .block_row_ranges()
                .into_iter()
                .zip(blocks)
                .map(|(range, b)| factor_json(&m.select_rows(&range.collect::<Vec<_>>()), b, tol))
                .collect::<Result<Vec<_>>>()?;
            Ok(json!({ "blocks": parts }))
        }
        CfExpr::Basic { .. } => Err(CfmError::Shape("a basic form has nothing to factor".into())),
    }
}

fn pretty_json(value: &impl serde::Serialize) -> String {
    serde_json::to_string_pretty(value).expect("value serializes")
}

fn dispatch(command: Command, tol: &Tolerance, out: &mut dyn Write) -> Result<Outcome> {
    match command {
        Command::Dim { expr, field } => {
            let f = form(&expr)?;
            let field = Field::from(field);
            writeln!(out, "dim_F = {}", f.expr.dimension()?)?;
            writeln!(out, "dim_R = {} (F = {})", f.expr.real_dimension(field)?, field.symbol())?;
        }
        Command::Cells { expr, field, json } => {
            let f = form(&expr)?;
            let d = Field::from(field).real_dim();
            let cells = enumerate_cells(&f.expr)?;
            if json {
                let rows: Vec<_> = cells
                    .iter()
                    .map(|(s, dim)| json!({ "symbol": s.to_string(), "dim_F": dim, "dim_real": d * dim }))
                    .collect();
                writeln!(out, "{}", pretty_json(&rows))?;
            } else {
                let width = cells.iter().map(|(s, _)| s.to_string().len()).max().unwrap_or(0).max(6);
                writeln!(out, "{:<width$}  {:>5}  {:>6}", "symbol", "dim_F", "dim_R")?;
                for (s, dim) in &cells {
                    writeln!(out, "{:<width$}  {:>5}  {:>6}", s.to_string(), dim, d * dim)?;
                }
            }
        }
        Command::Count { expr } => {
            writeln!(out, "{}", cell_count(&form(&expr)?.expr)?)?;
        }
        Command::Poincare { expr, field, json } => {
            let f = form(&expr)?;
            let field = Field::from(field);
            let p = poincare_polynomial(&f.expr, field)?;
            if json {
                let doc = json!({
                    "field": field,
                    "coefficients": p.coeffs(),
                    "ring": coefficient_ring(field),
                    "polynomial": p.pretty("t"),
                });
                writeln!(out, "{}", pretty_json(&doc))?;
            } else {
                writeln!(out, "coefficients = {:?}", p.coeffs())?;
                writeln!(out, "P(t) = {}  [{} coefficients]", p.pretty("t"), coefficient_ring(field))?;
            }
        }
        Command::Euler { expr, field } => {
            writeln!(out, "{}", euler_characteristic(&form(&expr)?.expr, field.into())?)?;
        }
        Command::Sample { expr, seed, field, out: path } => {
            let f = form(&expr)?;
            let m = sample(&f.expr, field.into(), seed, tol)?;
            match path {
                Some(p) => std::fs::write(p, m.to_json() + "\n")?,
                None => writeln!(out, "{}", m.to_json())?,
            }
        }
        Command::Check { expr, matrix, json } => {
            let f = form(&expr)?;
            let m = read_matrix(&matrix)?;
            let report = validate_membership(&m, &f, tol);
            if json {
                writeln!(out, "{}", pretty_json(&report))?;
            } else if report.passed {
                writeln!(out, "pass")?;
            } else {
                writeln!(out, "fail")?;
                for issue in &report.issues {
                    writeln!(out, "  {issue}")?;
                }
            }
            if !report.passed {
                return Ok(Outcome::Rejected);
            }
        }
        Command::Factor { expr, matrix } => {
            let f = form(&expr)?;
            let m = read_matrix(&matrix)?;
            require_member(&m, &f, tol)?;
            writeln!(out, "{}", factor_json(&m, &f.expr, tol)?)?;
        }
        Command::CellOf { expr, matrix } => {
            let f = form(&expr)?;
            let m = read_matrix(&matrix)?;
            require_member(&m, &f, tol)?;
            let symbol = cell_of_matrix(&m, &f.expr, tol)?;
            let dim = enumerate_cells(&f.expr)?
                .into_iter()
                .find(|(s, _)| *s == symbol)
                .map(|(_, d)| d)
                .ok_or_else(|| CfmError::Numeric(format!("cell {symbol} is not in the enumeration")))?;
            writeln!(out, "{symbol}")?;
            writeln!(out, "dim_F = {dim}")?;
        }
        Command::Preset { name, params } => {
            let f = form(&format!("preset:{name}({})", params.join(";")))?;
            writeln!(out, "{}", f.expr)?;
        }
        Command::Sympow { op } => sympow(op, tol, out)?,
        Command::Catalog => {
            writeln!(out, "{:<28} {:>5} {:>8} {:>5}  P(q)", "name", "dim_F", "cells", "chi_R")?;
            for (name, f) in catalog() {
                let e = &f.expr;
                writeln!(
                    out,
                    "{:<28} {:>5} {:>8} {:>5}  {}",
                    name,
                    e.dimension()?,
                    cell_count(e)?,
                    euler_characteristic(e, Field::Real)?,
                    poincare_polynomial(e, Field::Real)?.pretty("q")
                )?;
            }
        }
    }
    Ok(Outcome::Ok)
}

/// Drops the sign of negative zeros so `-0.0` never reaches the output.
fn tidy(zs: &[Complex64]) -> Vec<Complex64> {
    zs.iter().map(|z| Complex64::new(z.re + 0.0, z.im + 0.0)).collect()
}

fn sympow(op: SympowOp, tol: &Tolerance, out: &mut dyn Write) -> Result<()> {
    match op {
        SympowOp::Roots { file } => {
            let input: RootsInput = read_json(&file)?;
            let roots = match (input.coeffs, input.vector) {
                (Some(c), None) => coeffs_to_sym(&c)?,
                (None, Some(v)) => projective_vector_roots(&v, tol)?,
                _ => return Err(CfmError::Format("expected exactly one of \"coeffs\" or \"vector\"".into())),
            };
            let roots = PointMultiset { finite: tidy(&roots.finite), ..roots };
            writeln!(out, "{}", serde_json::to_string(&roots)?)?;
        }
        SympowOp::Coeffs { file } => {
            let points: PointMultiset = read_json(&file)?;
            let sigma = sym_to_coeffs(&points.finite);
            // v_1 + v_2 z + ⋯ with the monic finite part and zeros for the points at ∞
            let d = sigma.len();
            let mut vector = vec![Complex64::new(0.0, 0.0); d + 1 + points.infinite_count];
            vector[d] = Complex64::new(1.0, 0.0);
            for (k, s) in sigma.iter().enumerate() {
                let sign = if (k + 1) % 2 == 0 { 1.0 } else { -1.0 };
                vector[d - (k + 1)] = s * sign;
            }
            let doc = if points.infinite_count == 0 {
                json!({ "coeffs": tidy(&sigma), "vector": tidy(&vector) })
            } else {
                json!({ "vector": tidy(&vector) })
            };
            writeln!(out, "{doc}")?;
        }
    }
    Ok(())
}
