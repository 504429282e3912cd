//! Dense row-major matrices over R, C or H.
//!
//! All row operations act on the left, so every elimination here is valid for
//! quaternionic row spaces viewed as left modules. Nonsingularity is decided by
//! elimination rank; no determinant is ever formed.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{CfmError, Result};
use crate::scalar::{Field, Scalar};

/// Thresholds used wherever exact zero tests become numerical.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    /// Leading-zero and pivot threshold.
    pub eps_zero: f64,
    /// Orthogonality, norm and reconstruction threshold.
    pub eps_orth: f64,
}

impl Tolerance {
    pub fn new(eps_zero: f64, eps_orth: f64) -> Result<Self> {
        if !(eps_zero > 0.0 && eps_zero.is_finite()) || !(eps_orth > 0.0 && eps_orth.is_finite()) {
            return Err(CfmError::Format(format!(
                "tolerances must be positive and finite, got eps_zero={eps_zero}, eps_orth={eps_orth}"
            )));
        }
        Ok(Tolerance { eps_zero, eps_orth })
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { eps_zero: 1e-9, eps_orth: 1e-8 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatrixF {
    rows: usize,
    cols: usize,
    field: Field,
    data: Vec<Scalar>,
}

impl MatrixF {
    pub fn new(field: Field, rows: usize, cols: usize, data: Vec<Scalar>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(CfmError::Shape(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        let data = data
            .into_iter()
            .map(|s| if s.field() == field { Ok(s) } else { s.promote(field) })
            .collect::<Result<Vec<_>>>()?;
        Ok(MatrixF { rows, cols, field, data })
    }

    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        MatrixF { rows, cols, field, data: vec![Scalar::zero(field); rows * cols] }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let mut m = MatrixF::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = Scalar::one(field);
        }
        m
    }

    pub fn from_rows(field: Field, rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != m) {
            return Err(CfmError::Shape("ragged rows".into()));
        }
        MatrixF::new(field, n, m, rows.into_iter().flatten().collect())
    }

    /// Real matrix from nested slices; handy for fixtures.
    pub fn real(rows: &[&[f64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        let data = rows.iter().flat_map(|r| r.iter().map(|&x| Scalar::real(x))).collect();
        MatrixF { rows: rows.len(), cols, field: Field::Real, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn get(&self, r: usize, c: usize) -> Scalar {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: Scalar) {
        self.data[r * self.cols + c] = value;
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub(crate) fn row_mut(&mut self, r: usize) -> &mut [Scalar] {
        &mut self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.data
    }

    pub fn mul(&self, rhs: &MatrixF) -> Result<MatrixF> {
        if self.cols != rhs.rows {
            return Err(CfmError::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        if self.field != rhs.field {
            return Err(CfmError::TagMismatch(self.field, rhs.field));
        }
        let mut out = MatrixF::zeros(self.field, self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for c in 0..rhs.cols {
                    let cur = out.get(r, c);
                    out.set(r, c, cur + a * rhs.get(k, c));
                }
            }
        }
        Ok(out)
    }

    /// Conjugate transpose `M^H`.
    pub fn adjoint(&self) -> MatrixF {
        let mut out = MatrixF::zeros(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.get(r, c).conj());
            }
        }
        out
    }

    /// Submatrix on the given 0-based row and column index lists.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> MatrixF {
        let data = rows
            .iter()
            .flat_map(|&r| cols.iter().map(move |&c| self.get(r, c)))
            .collect();
        MatrixF { rows: rows.len(), cols: cols.len(), field: self.field, data }
    }

    pub fn select_rows(&self, rows: &[usize]) -> MatrixF {
        let cols: Vec<usize> = (0..self.cols).collect();
        self.select(rows, &cols)
    }

    /// Stacks matrices of equal width and field vertically.
    pub fn vstack(parts: &[&MatrixF]) -> Result<MatrixF> {
        let first = parts.first().ok_or_else(|| CfmError::Shape("nothing to stack".into()))?;
        let mut data = Vec::new();
        let mut rows = 0;
        for p in parts {
            if p.cols != first.cols || p.field != first.field {
                return Err(CfmError::Shape("stacked blocks differ in width or field".into()));
            }
            data.extend_from_slice(&p.data);
            rows += p.rows;
        }
        Ok(MatrixF { rows, cols: first.cols, field: first.field, data })
    }

    /// Largest entry modulus of `self − other`.
    pub fn max_abs_diff(&self, other: &MatrixF) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (*a - *b).abs())
            .fold(0.0, f64::max)
    }

    /// `‖M·M^H − I‖_max`.
    pub fn orthonormality_defect(&self) -> f64 {
        let gram = self.mul(&self.adjoint()).expect("shapes agree");
        gram.max_abs_diff(&MatrixF::identity(self.field, self.rows))
    }

    pub(crate) fn scale_row_left(&mut self, r: usize, q: Scalar) {
        for x in self.row_mut(r) {
            *x = q * *x;
        }
    }

    /// `row[target] -= coeff · row[source]`.
    pub(crate) fn sub_row_left(&mut self, target: usize, coeff: Scalar, source: usize) {
        for c in 0..self.cols {
            let s = self.get(source, c);
            let t = self.get(target, c);
            self.set(target, c, t - coeff * s);
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let doc = MatrixDocOut {
            field: self.field,
            rows: (0..self.rows)
                .map(|r| self.row(r).iter().map(Scalar::components).collect())
                .collect(),
        };
        serde_json::to_value(doc).expect("matrix serializes")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_json_value()).expect("matrix serializes")
    }

    /// Parses `{"field": "R"|"C"|"H", "rows": [[scalar, ...], ...]}`. A bare
    /// array of rows is read as a real matrix, and a bare number is accepted
    /// wherever a real scalar `[a]` is expected.
    pub fn from_json(text: &str) -> Result<MatrixF> {
        let doc: MatrixDocIn = serde_json::from_str(text)?;
        let (field, rows) = match doc {
            MatrixDocIn::Tagged { field, rows } => (field, rows),
            MatrixDocIn::Bare(rows) => (Field::Real, rows),
        };
        let rows = rows
            .into_iter()
            .map(|r| {
                r.into_iter()
                    .map(|s| match s {
                        ScalarDoc::Number(x) => Scalar::from_components(field, &[x])
                            .or_else(|_| Scalar::from_real(Field::Real, x).promote(field)),
                        ScalarDoc::Parts(p) => Scalar::from_components(field, &p),
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        MatrixF::from_rows(field, rows)
    }
}

#[derive(Serialize)]
struct MatrixDocOut {
    field: Field,
    rows: Vec<Vec<Vec<f64>>>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum MatrixDocIn {
    Tagged { field: Field, rows: Vec<Vec<ScalarDoc>> },
    Bare(Vec<Vec<ScalarDoc>>),
}

#[derive(Deserialize)]
#[serde(untagged)]
enum ScalarDoc {
    Number(f64),
    Parts(Vec<f64>),
}

impl fmt::Display for MatrixF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = self
            .data
            .iter()
            .map(|s| {
                let mut s = *s;
                // print exact zeros without sign noise
                for part in [&mut s.re, &mut s.i, &mut s.j, &mut s.k] {
                    if *part == 0.0 {
                        *part = 0.0;
                    }
                }
                format!("{s:.6}")
            })
            .collect();
        let width = cells.iter().map(String::len).max().unwrap_or(0);
        for r in 0..self.rows {
            let line: Vec<String> = (0..self.cols)
                .map(|c| format!("{:>width$}", cells[r * self.cols + c]))
                .collect();
            writeln!(f, "[ {} ]", line.join("  "))?;
        }
        Ok(())
    }
}

/// `⟨a, b⟩ = Σ_j a_j·conj(b_j)`, left-linear in `a`.
pub fn inner_product(a: &[Scalar], b: &[Scalar]) -> Result<Scalar> {
    if a.len() != b.len() {
        return Err(CfmError::Shape(format!("vectors of length {} and {}", a.len(), b.len())));
    }
    let field = match (a.first(), b.first()) {
        (Some(x), Some(y)) if x.field() != y.field() => return Err(CfmError::TagMismatch(x.field(), y.field())),
        (Some(x), _) => x.field(),
        _ => Field::Real,
    };
    Ok(a.iter().zip(b).fold(Scalar::zero(field), |acc, (x, y)| acc + *x * y.conj()))
}

pub(crate) fn row_norm(a: &[Scalar]) -> f64 {
    a.iter().map(Scalar::norm_sqr).sum::<f64>().sqrt()
}

/// `t(a)`: length of the longest prefix whose entries are all within `eps_zero` of zero.
pub fn leading_zero_count(a: &[Scalar], tol: &Tolerance) -> usize {
    a.iter().take_while(|x| x.is_zero_within(tol.eps_zero)).count()
}

/// Reduced row echelon form by left row operations with modulus pivoting.
/// Returns the reduced matrix (zero rows last) and the 0-based pivot columns.
pub(crate) fn row_echelon(m: &MatrixF, eps: f64) -> (MatrixF, Vec<usize>) {
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..a.cols {
        if r == a.rows {
            break;
        }
        let (best, best_abs) = (r..a.rows)
            .map(|i| (i, a.get(i, c).abs()))
            .fold((r, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if best_abs <= eps {
            continue;
        }
        a.swap_rows(r, best);
        let inv = a.get(r, c).inv();
        a.scale_row_left(r, inv);
        a.set(r, c, Scalar::one(a.field));
        for i in 0..a.rows {
            if i == r {
                continue;
            }
            let f = a.get(i, c);
            if f.norm_sqr() != 0.0 {
                a.sub_row_left(i, f, r);
            }
            a.set(i, c, Scalar::zero(a.field));
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

/// Numerical rank by elimination; `M` is nonsingular iff `rank = rows = cols`.
pub fn rank(m: &MatrixF, tol: &Tolerance) -> usize {
    row_echelon(m, tol.eps_zero).1.len()
}

pub fn is_nonsingular(m: &MatrixF, tol: &Tolerance) -> bool {
    m.rows == m.cols && rank(m, tol) == m.rows
}
