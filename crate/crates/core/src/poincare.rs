//! Integer polynomials, Gaussian binomials and Poincaré polynomials of
//! manifolds of canonical forms.
//!
//! Over F = R the polynomial counts cells by dimension, which gives the Betti
//! numbers with coefficients in Z/2; the rational Betti numbers of, say, RP^2
//! differ. Over C and H all cells are even dimensional and the counts are the
//! integral Betti numbers.

use std::fmt;
use std::ops::{Add, Mul};

use serde::Serialize;

use crate::cells::{cell_count, cell_generating_polynomial};
use crate::error::{CfmError, Result};
use crate::expr::CfExpr;
use crate::scalar::Field;

/// Cross-checking against the cell polynomial is skipped above this many cells.
const CROSS_CHECK_LIMIT: u128 = 200_000;

/// Polynomial with integer coefficients, `coeffs[k]` multiplying `x^k`.
/// The zero polynomial has no coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize)]
#[serde(transparent)]
pub struct IntPoly {
    coeffs: Vec<i64>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<i64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn zero() -> Self {
        IntPoly::default()
    }

    pub fn one() -> Self {
        IntPoly::monomial(1, 0)
    }

    /// `c·x^k`.
    pub fn monomial(c: i64, k: usize) -> Self {
        let mut coeffs = vec![0; k + 1];
        coeffs[k] = c;
        IntPoly::new(coeffs)
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> i64 {
        self.coeffs.get(k).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Multiplies by `x^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return IntPoly::zero();
        }
        let mut coeffs = vec![0; k];
        coeffs.extend_from_slice(&self.coeffs);
        IntPoly { coeffs }
    }

    /// `p(x^d)`.
    pub fn substitute_power(&self, d: usize) -> Self {
        assert!(d > 0, "substitution exponent must be positive");
        let mut coeffs = vec![0; self.coeffs.len().saturating_sub(1) * d + 1];
        for (k, &c) in self.coeffs.iter().enumerate() {
            coeffs[k * d] = c;
        }
        IntPoly::new(coeffs)
    }

    pub fn eval(&self, x: i64) -> i64 {
        self.coeffs.iter().rev().fold(0, |acc, &c| acc * x + c)
    }

    pub fn is_palindromic(&self) -> bool {
        self.coeffs.iter().eq(self.coeffs.iter().rev())
    }

    /// Human-readable form in the variable `var`, e.g. `1 + 2t + t^2`.
    pub fn pretty(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, &c) in self.coeffs.iter().enumerate().filter(|(_, c)| **c != 0) {
            let sign = if c < 0 { "-" } else { "+" };
            if out.is_empty() {
                if c < 0 {
                    out.push('-');
                }
            } else {
                out.push_str(&format!(" {sign} "));
            }
            let a = c.unsigned_abs();
            match k {
                0 => out.push_str(&a.to_string()),
                _ => {
                    if a != 1 {
                        out.push_str(&a.to_string());
                    }
                    out.push_str(var);
                    if k > 1 {
                        out.push_str(&format!("^{k}"));
                    }
                }
            }
        }
        out
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.pretty("q"))
    }
}

impl Add for &IntPoly {
    type Output = IntPoly;

    fn add(self, rhs: &IntPoly) -> IntPoly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::new((0..len).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Add for IntPoly {
    type Output = IntPoly;

    fn add(self, rhs: IntPoly) -> IntPoly {
        &self + &rhs
    }
}

impl Mul for &IntPoly {
    type Output = IntPoly;

    fn mul(self, rhs: &IntPoly) -> IntPoly {
        if self.is_zero() || rhs.is_zero() {
            return IntPoly::zero();
        }
        let mut coeffs = vec![0; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        IntPoly::new(coeffs)
    }
}

impl Mul for IntPoly {
    type Output = IntPoly;

    fn mul(self, rhs: IntPoly) -> IntPoly {
        &self * &rhs
    }
}

impl std::iter::Product for IntPoly {
    fn product<I: Iterator<Item = IntPoly>>(iter: I) -> IntPoly {
        iter.fold(IntPoly::one(), |acc, p| &acc * &p)
    }
}

/// The q-binomial `[p+q_ choose p]_q` from the recurrence
/// `[a, b] = [a-1, b-1] + q^b [a-1, b]`.
pub fn gaussian_binomial(p: usize, q_: usize) -> IntPoly {
    let a = p + q_;
    let k = p.min(q_);
    // row[b] holds [a', b] for the current a'
    let mut row = vec![IntPoly::one()];
    for a_cur in 1..=a {
        let mut next = Vec::with_capacity(row.len() + 1);
        for b in 0..=a_cur.min(k) {
            let keep = if b < row.len() { row[b].shift(b) } else { IntPoly::zero() };
            let take = if b > 0 { row[b - 1].clone() } else { IntPoly::zero() };
            next.push(&take + &keep);
        }
        row = next;
    }
    row.swap_remove(k)
}

fn factor(expr: &CfExpr) -> Result<IntPoly> {
    match expr {
        CfExpr::Basic { .. } => Ok(IntPoly::one()),
        CfExpr::Spread { base, support, .. } => {
            let n = base.rows();
            Ok(&gaussian_binomial(n, support.len() - n) * &factor(base)?)
        }
        CfExpr::Sum { blocks, .. } => {
            let order = expr.nesting_order()?;
            let mut acc = IntPoly::one();
            for (i, r) in order.iter() {
                let n = blocks[i].rows();
                acc = &(&acc * &gaussian_binomial(n, r - n)) * &factor(blocks[i].spread_base()?)?;
            }
            Ok(acc)
        }
    }
}

/// Product of Gaussian binomials over the tree with `q = t^d`.
///
/// The result is compared with the cell generating polynomial whenever the
/// cell count is small enough to make that cheap.
pub fn poincare_polynomial(expr: &CfExpr, field: Field) -> Result<IntPoly> {
    expr.validate()?;
    let q_poly = factor(expr)?;
    if cell_count(expr)? <= CROSS_CHECK_LIMIT {
        let cells = cell_generating_polynomial(expr)?;
        if cells != q_poly {
            return Err(CfmError::Numeric(format!(
                "Gaussian product {q_poly} disagrees with the cell polynomial {cells} for {expr}"
            )));
        }
    }
    Ok(q_poly.substitute_power(field.real_dim()))
}

/// Coefficients of the Poincaré polynomial; mod-2 Betti numbers when `field` is R.
pub fn betti_numbers(expr: &CfExpr, field: Field) -> Result<Vec<i64>> {
    Ok(poincare_polynomial(expr, field)?.coeffs().to_vec())
}

/// Coefficient ring the Betti numbers refer to.
pub fn coefficient_ring(field: Field) -> &'static str {
    match field {
        Field::Real => "Z/2",
        Field::Complex | Field::Quaternion => "Z",
    }
}
