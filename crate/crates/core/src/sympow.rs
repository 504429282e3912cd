//! Symmetric products of the complex line.
//!
//! An unordered `m`-tuple of complex numbers corresponds to the coefficients
//! `σ_1, …, σ_m` of the monic polynomial with those roots. Allowing points at
//! infinity gives the same correspondence for `CP^m` and projective vectors.

use nalgebra::{DMatrix, Schur};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{CfmError, Result};
use crate::matrix::Tolerance;

const NEWTON_STEPS: usize = 8;
const SCHUR_ITERATIONS: usize = 10_000;
const ABERTH_ITERATIONS: usize = 500;
/// Relative coefficient residual above which root finding is reported as failed.
const ROOT_RESIDUAL_LIMIT: f64 = 1e-6;

/// Unordered points of the Riemann sphere: finite values plus a count at infinity.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct PointMultiset {
    pub finite: Vec<Complex64>,
    #[serde(rename = "inf")]
    pub infinite_count: usize,
}

impl PointMultiset {
    pub fn finite(points: Vec<Complex64>) -> Self {
        PointMultiset { finite: points, infinite_count: 0 }
    }

    pub fn len(&self) -> usize {
        self.finite.len() + self.infinite_count
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// A marked point of the Riemann sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Point {
    Finite(Complex64),
    Infinity,
}

fn total_order(a: &Complex64, b: &Complex64) -> std::cmp::Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}

/// Elementary symmetric functions `(σ_1, …, σ_m)` of the points.
///
/// Points are sorted before expanding, so any permutation of the input gives
/// bit-identical output.
pub fn sym_to_coeffs(points: &[Complex64]) -> Vec<Complex64> {
    let mut xs = points.to_vec();
    xs.sort_by(total_order);
    let mut e = vec![Complex64::new(0.0, 0.0); xs.len() + 1];
    e[0] = Complex64::new(1.0, 0.0);
    for (n, x) in xs.iter().enumerate() {
        for k in (1..=n + 1).rev() {
            e[k] = e[k] + e[k - 1] * x;
        }
    }
    e.split_off(1)
}

/// `z^m − σ_1 z^{m−1} + σ_2 z^{m−2} − ⋯`, as ascending coefficients.
fn monic_from_sigma(sigma: &[Complex64]) -> Vec<Complex64> {
    let m = sigma.len();
    let mut a = vec![Complex64::new(0.0, 0.0); m + 1];
    a[m] = Complex64::new(1.0, 0.0);
    for (k, s) in sigma.iter().enumerate() {
        let sign = if (k + 1) % 2 == 0 { 1.0 } else { -1.0 };
        a[m - (k + 1)] = s * sign;
    }
    a
}

fn horner(a: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for c in a.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// Newton steps on the full polynomial, keeping a step only if it shrinks `|p|`.
fn polish(a: &[Complex64], mut z: Complex64) -> Complex64 {
    for _ in 0..NEWTON_STEPS {
        let (p, dp) = horner(a, z);
        if p.norm() == 0.0 || dp.norm() == 0.0 {
            break;
        }
        let next = z - p / dp;
        if !next.is_finite() || horner(a, next).0.norm() >= p.norm() {
            break;
        }
        z = next;
    }
    z
}

/// Simultaneous Aberth–Ehrlich iteration for the roots of the monic `a`.
fn aberth(a: &[Complex64]) -> Vec<Complex64> {
    let m = a.len() - 1;
    let radius = 1.0 + a[..m].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..m)
        .map(|k| Complex64::from_polar(radius, 0.4 + std::f64::consts::TAU * k as f64 / m as f64))
        .collect();
    for _ in 0..ABERTH_ITERATIONS {
        let mut moved = 0.0f64;
        for k in 0..m {
            let (p, dp) = horner(a, z[k]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let repulsion: Complex64 = (0..m).filter(|&j| j != k).map(|j| (z[k] - z[j]).inv()).sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if step.is_finite() {
                z[k] -= step;
                moved = moved.max(step.norm());
            }
        }
        if moved <= 1e-15 * radius {
            break;
        }
    }
    z
}

/// Roots of the monic polynomial with coefficients `σ`, from the eigenvalues
/// of its companion matrix.
pub fn coeffs_to_sym(sigma: &[Complex64]) -> Result<PointMultiset> {
    let m = sigma.len();
    if sigma.iter().any(|s| !s.is_finite()) {
        return Err(CfmError::Numeric("non-finite coefficient".into()));
    }
    if m == 0 {
        return Ok(PointMultiset::default());
    }
    let a = monic_from_sigma(sigma);
    let mut companion = DMatrix::<Complex64>::zeros(m, m);
    for i in 1..m {
        companion[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    for i in 0..m {
        companion[(i, m - 1)] = -a[i];
    }
    // shifted QR stalls on some exactly nilpotent companions, e.g. z^m
    let eig: Vec<Complex64> = match Schur::try_new(companion, f64::EPSILON, SCHUR_ITERATIONS) {
        Some(schur) => schur.eigenvalues().map(|v| v.iter().copied().collect()),
        None => None,
    }
    .unwrap_or_else(|| aberth(&a));
    let roots: Vec<Complex64> = eig.iter().map(|&z| polish(&a, z)).collect();
    let back = sym_to_coeffs(&roots);
    let scale = 1.0 + sigma.iter().map(|s| s.norm()).fold(0.0, f64::max);
    let residual = back.iter().zip(sigma).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
    if !residual.is_finite() || residual > ROOT_RESIDUAL_LIMIT * scale {
        return Err(CfmError::Numeric(format!("root finding left a coefficient residual of {residual:.3e}")));
    }
    Ok(PointMultiset::finite(roots))
}

/// Roots of `v_1 + v_2 z + ⋯ + v_m z^{m−1}` with one point at infinity for each
/// vanishing top coefficient. Depends only on the line through `v`.
pub fn projective_vector_roots(v: &[Complex64], tol: &Tolerance) -> Result<PointMultiset> {
    let norm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    if v.is_empty() || norm <= tol.eps_zero {
        return Err(CfmError::Degenerate("projective vector is zero".into()));
    }
    let unit: Vec<Complex64> = v.iter().map(|x| x / norm).collect();
    let s = unit.iter().rev().take_while(|x| x.norm() <= tol.eps_zero).count();
    let degree = v.len() - 1 - s;
    let lead = unit[degree];
    // monic z^d + (a_{d−1}/a_d) z^{d−1} + ⋯  ⇒  σ_k = (−1)^k a_{d−k}/a_d
    let sigma: Vec<Complex64> = (1..=degree)
        .map(|k| {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            unit[degree - k] / lead * sign
        })
        .collect();
    let mut roots = coeffs_to_sym(&sigma)?;
    roots.infinite_count = s;
    Ok(roots)
}

/// Multiplicity of `xi` among the points: the index `i` of the stratum `M_i`
/// containing them. Finite points match within `eps_zero`.
pub fn cp_cell_index(points: &PointMultiset, xi: Point, tol: &Tolerance) -> usize {
    match xi {
        Point::Infinity => points.infinite_count,
        Point::Finite(x) => points.finite.iter().filter(|p| (*p - x).norm() <= tol.eps_zero).count(),
    }
}

/// Complex dimension of the stratum `M_i` inside the `m`-fold symmetric product.
pub fn stratum_dimension(m: usize, i: usize) -> Option<usize> {
    m.checked_sub(i)
}

/// Largest distance between matched points under the matching that minimizes
/// the total distance. Infinity if the multisets differ in size or in their
/// number of points at infinity.
pub fn pairing_distance(a: &PointMultiset, b: &PointMultiset) -> f64 {
    if a.finite.len() != b.finite.len() || a.infinite_count != b.infinite_count {
        return f64::INFINITY;
    }
    let n = a.finite.len();
    assert!(n <= 20, "exact matching is limited to 20 points");
    let d = |i: usize, j: usize| (a.finite[i] - b.finite[j]).norm();
    // best[mask] = (total, worst) matching a[0..popcount(mask)] onto the b's in mask
    let mut best = vec![(f64::INFINITY, 0.0f64); 1 << n];
    best[0] = (0.0, 0.0);
    for mask in 0usize..(1 << n) {
        let (total, worst) = best[mask];
        if !total.is_finite() {
            continue;
        }
        let i = mask.count_ones() as usize;
        if i == n {
            continue;
        }
        for j in (0..n).filter(|j| mask & (1 << j) == 0) {
            let cand = (total + d(i, j), worst.max(d(i, j)));
            let slot = &mut best[mask | (1 << j)];
            if cand.0 < slot.0 {
                *slot = cand;
            }
        }
    }
    best[(1 << n) - 1].1
}
