//! Numerical side of canonical forms: Grassmann canonicalization, membership
//! validation, the unique spread factorization `M = C·X`, seeded sampling,
//! projection to the base flag, and chart block selection.
//!
//! Row spaces are left F-modules throughout: Gram–Schmidt coefficients and
//! phase factors multiply rows on the left.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{CfmError, Result};
use crate::expr::{CanonicalForm, CfExpr, ColumnSet};
use crate::matrix::{inner_product, is_nonsingular, leading_zero_count, row_echelon, row_norm, MatrixF, Tolerance};
use crate::report::{IssueCode, ValidationIssue, ValidationReport};
use crate::scalar::{phase_normalizer, Field, Scalar};
use crate::util::combinations;

const SAMPLE_RETRIES: usize = 16;

/// Unique orthonormal echelon basis of the row space of `m` with strictly
/// increasing leading-zero counts and positive real pivots.
///
/// Rows are first brought to reduced echelon form, then orthonormalized from
/// the last row (most leading zeros) upwards with two Gram–Schmidt passes, so
/// subtracting later rows never touches the zero prefix of earlier ones.
pub fn grassmann_canonicalize(m: &MatrixF, tol: &Tolerance) -> Result<MatrixF> {
    let (mut r, pivots) = row_echelon(m, tol.eps_zero);
    if pivots.len() < m.rows() {
        return Err(CfmError::Degenerate(format!(
            "{}x{} matrix has rank {} < {}",
            m.rows(),
            m.cols(),
            pivots.len(),
            m.rows()
        )));
    }
    let field = m.field();
    for (i, &p) in pivots.iter().enumerate() {
        for c in 0..p {
            r.set(i, c, Scalar::zero(field));
        }
    }
    let n = r.rows();
    for i in (0..n).rev() {
        for _ in 0..2 {
            for k in i + 1..n {
                let coeff = inner_product(r.row(i), r.row(k))?;
                r.sub_row_left(i, coeff, k);
            }
        }
        let norm = row_norm(r.row(i));
        if norm <= tol.eps_zero {
            return Err(CfmError::Degenerate("row vanished during orthogonalization".into()));
        }
        r.scale_row_left(i, Scalar::from_real(field, 1.0 / norm));
        let q = phase_normalizer(r.get(i, pivots[i]))?;
        r.scale_row_left(i, q);
    }
    Ok(r)
}

/// 1-based pivot column of every row: `t(row) + 1`.
pub fn pivot_columns(m: &MatrixF, tol: &Tolerance) -> Vec<usize> {
    (0..m.rows()).map(|i| leading_zero_count(m.row(i), tol) + 1).collect()
}

/// 1-based pivot columns of the row space of `m` (reduced echelon pivots).
pub fn span_pivots(m: &MatrixF, tol: &Tolerance) -> ColumnSet {
    let (_, pivots) = row_echelon(m, tol.eps_zero);
    ColumnSet::new(pivots.into_iter().map(|p| p + 1)).expect("pivots are 1-based")
}

fn outside_support(m: &MatrixF, support: &ColumnSet) -> (f64, Vec<usize>) {
    let mut worst = 0.0f64;
    let mut rows = Vec::new();
    for r in 0..m.rows() {
        let row_worst = m
            .row(r)
            .iter()
            .enumerate()
            .filter(|(c, _)| !support.contains(c + 1))
            .map(|(_, x)| x.abs())
            .fold(0.0, f64::max);
        if row_worst > 0.0 {
            rows.push(r);
        }
        worst = worst.max(row_worst);
    }
    (worst, rows)
}

/// Splits a member of a spreading into `(C, X)` with `M = C·X`, where `X` is
/// the Grassmann-canonical basis of the row space restricted to the support
/// and `C = M·X^H`.
pub fn factor_spread(m: &MatrixF, spread: &CfExpr, tol: &Tolerance) -> Result<(MatrixF, MatrixF)> {
    let CfExpr::Spread { base, support, width } = spread else {
        return Err(CfmError::Shape("factorization needs a spread node".into()));
    };
    if m.cols() != *width || m.rows() != base.rows() {
        return Err(CfmError::Shape(format!(
            "{}x{} matrix against a {}x{} spreading",
            m.rows(),
            m.cols(),
            base.rows(),
            width
        )));
    }
    let (leak, rows) = outside_support(m, support);
    if leak > tol.eps_zero {
        return Err(CfmError::Structure(
            ValidationIssue::new(IssueCode::SupportViolation, "root", rows, leak)
                .with_detail(format!("entries outside {support}")),
        ));
    }
    let all_rows: Vec<usize> = (0..m.rows()).collect();
    let restricted = m.select(&all_rows, &support.zero_based());
    let xs = grassmann_canonicalize(&restricted, tol)?;
    let mut x = MatrixF::zeros(m.field(), m.rows(), *width);
    for (j, c) in support.zero_based().into_iter().enumerate() {
        for i in 0..m.rows() {
            x.set(i, c, xs.get(i, j));
        }
    }
    let c = m.mul(&x.adjoint())?;
    let residual = c.mul(&x)?.max_abs_diff(m);
    if residual > tol.eps_orth {
        return Err(CfmError::Structure(ValidationIssue::new(
            IssueCode::FactorResidual,
            "root",
            all_rows,
            residual,
        )));
    }
    Ok((c, x))
}

/// Checks `m` against every property of the form and reports all failures.
pub fn validate_membership(m: &MatrixF, form: &CanonicalForm, tol: &Tolerance) -> ValidationReport {
    let expr = &form.expr;
    let mut issues = Vec::new();
    if m.rows() != expr.rows() || m.cols() != expr.width() {
        issues.push(
            ValidationIssue::new(IssueCode::WidthMismatch, "root", Vec::new(), 0.0).with_detail(format!(
                "matrix is {}x{}, form is {}x{}",
                m.rows(),
                m.cols(),
                expr.rows(),
                expr.width()
            )),
        );
        return ValidationReport::from_issues(issues);
    }
    row_properties(m, tol, &mut issues);
    check_node(m, expr, "root", tol, &mut issues);
    if let Some(groups) = &form.min_order_groups {
        check_min_order(m, groups, tol, &mut issues);
    }
    ValidationReport::from_issues(issues)
}

/// Unit norms, positive real pivots and pairwise orthogonality.
fn row_properties(m: &MatrixF, tol: &Tolerance, issues: &mut Vec<ValidationIssue>) {
    for r in 0..m.rows() {
        let row = m.row(r);
        let dev = (row_norm(row) - 1.0).abs();
        if dev > tol.eps_orth {
            issues.push(ValidationIssue::new(IssueCode::Norm, "root", vec![r], dev));
        }
        let t = leading_zero_count(row, tol);
        if let Some(p) = row.get(t) {
            let off = p.distance_to_real(p.abs());
            if off > tol.eps_orth {
                issues.push(
                    ValidationIssue::new(IssueCode::PivotPhase, "root", vec![r], off)
                        .with_detail(format!("pivot {p} in column {}", t + 1)),
                );
            }
        }
    }
    for a in 0..m.rows() {
        for b in a + 1..m.rows() {
            let ip = inner_product(m.row(a), m.row(b)).expect("rows share width and field").abs();
            if ip > tol.eps_orth {
                issues.push(ValidationIssue::new(IssueCode::Orthogonality, "root", vec![a, b], ip));
            }
        }
    }
}

fn check_node(m: &MatrixF, expr: &CfExpr, path: &str, tol: &Tolerance, issues: &mut Vec<ValidationIssue>) {
    match expr {
        CfExpr::Basic { n } => {
            let dev = m.max_abs_diff(&MatrixF::identity(m.field(), *n));
            if dev > tol.eps_orth {
                issues.push(
                    ValidationIssue::new(IssueCode::SupportViolation, path, (0..*n).collect(), dev)
                        .with_detail("basic form must be the identity"),
                );
            }
        }
        CfExpr::Spread { base, .. } => match factor_spread(m, expr, tol) {
            Ok((c, _)) => check_node(&c, base, &format!("{path}.base"), tol, issues),
            Err(CfmError::Structure(mut issue)) => {
                issue.location = path.to_string();
                issues.push(issue);
            }
            Err(e) => issues.push(
                ValidationIssue::new(IssueCode::FactorResidual, path, (0..m.rows()).collect(), 0.0)
                    .with_detail(e.to_string()),
            ),
        },
        CfExpr::Sum { blocks, .. } => {
            for (i, (block, range)) in blocks.iter().zip(expr.block_row_ranges()).enumerate() {
                let rows: Vec<usize> = range.collect();
                let sub = m.select_rows(&rows);
                let mark = issues.len();
                check_node(&sub, block, &format!("{path}.block[{i}]"), tol, issues);
                // report rows in the coordinates of this node's matrix
                for issue in &mut issues[mark..] {
                    if issue.location == format!("{path}.block[{i}]") {
                        issue.rows = issue.rows.iter().map(|r| rows[*r]).collect();
                    }
                }
            }
        }
    }
}

fn check_min_order(m: &MatrixF, groups: &[usize], tol: &Tolerance, issues: &mut Vec<ValidationIssue>) {
    if groups.iter().sum::<usize>() != m.rows() {
        issues.push(
            ValidationIssue::new(IssueCode::MinOrder, "root", Vec::new(), 0.0)
                .with_detail("row groups do not cover the matrix"),
        );
        return;
    }
    let mut start = 0;
    let mut minima = Vec::with_capacity(groups.len());
    for &g in groups {
        let t = (start..start + g)
            .map(|r| leading_zero_count(m.row(r), tol))
            .min()
            .unwrap_or(usize::MAX);
        minima.push((start..start + g, t));
        start += g;
    }
    for w in minima.windows(2) {
        let ((_, ta), (rows_b, tb)) = (&w[0], &w[1]);
        if ta >= tb {
            issues.push(
                ValidationIssue::new(IssueCode::MinOrder, "root", rows_b.clone().collect(), (ta - tb + 1) as f64)
                    .with_detail(format!("group minima {ta} and {tb} are not strictly increasing")),
            );
        }
    }
}

fn gaussian(field: Field, rng: &mut ChaCha8Rng) -> Scalar {
    let mut parts = [0.0; 4];
    for p in parts.iter_mut().take(field.real_dim()) {
        *p = StandardNormal.sample(rng);
    }
    Scalar::from_components(field, &parts[..field.real_dim()]).expect("component count matches field")
}

/// Seeded canonical frame of `n` rows supported on `support` and orthogonal to `previous`.
fn random_frame(
    n: usize,
    support: &ColumnSet,
    width: usize,
    previous: &[Vec<Scalar>],
    field: Field,
    rng: &mut ChaCha8Rng,
    tol: &Tolerance,
) -> Result<MatrixF> {
    for _ in 0..SAMPLE_RETRIES {
        let mut g = MatrixF::zeros(field, n, width);
        for i in 0..n {
            for c in support.zero_based() {
                g.set(i, c, gaussian(field, rng));
            }
        }
        for i in 0..n {
            for _ in 0..2 {
                for p in previous {
                    let coeff = inner_product(g.row(i), p)?;
                    for (x, y) in g.row_mut(i).iter_mut().zip(p) {
                        *x = *x - coeff * *y;
                    }
                }
            }
        }
        match grassmann_canonicalize(&g, tol) {
            Ok(x) => return Ok(x),
            Err(CfmError::Degenerate(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(CfmError::Numeric("could not draw a nondegenerate frame".into()))
}

fn sample_node(expr: &CfExpr, field: Field, rng: &mut ChaCha8Rng, tol: &Tolerance) -> Result<MatrixF> {
    match expr {
        CfExpr::Basic { n } => Ok(MatrixF::identity(field, *n)),
        CfExpr::Spread { base, support, width } => {
            let c = sample_node(base, field, rng, tol)?;
            let x = random_frame(base.rows(), support, *width, &[], field, rng, tol)?;
            c.mul(&x)
        }
        CfExpr::Sum { width, blocks } => {
            let order = expr.nesting_order()?;
            let mut placed: Vec<Option<MatrixF>> = vec![None; blocks.len()];
            let mut previous: Vec<Vec<Scalar>> = Vec::new();
            for (i, _) in order.iter() {
                let CfExpr::Spread { base, support, .. } = &blocks[i] else {
                    return Err(CfmError::Shape("sum block is not a spreading".into()));
                };
                let x = random_frame(base.rows(), support, *width, &previous, field, rng, tol)?;
                let c = sample_node(base, field, rng, tol)?;
                previous.extend((0..x.rows()).map(|r| x.row(r).to_vec()));
                placed[i] = Some(c.mul(&x)?);
            }
            let parts: Vec<MatrixF> = placed.into_iter().map(|p| p.expect("every block placed")).collect();
            MatrixF::vstack(&parts.iter().collect::<Vec<_>>())
        }
    }
}

/// Deterministic member of the form drawn from Gaussian frames seeded by `seed`.
pub fn sample(expr: &CfExpr, field: Field, seed: u64, tol: &Tolerance) -> Result<MatrixF> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_node(expr, field, &mut rng, tol)
}

/// Projection of a member to its base: the Grassmann-canonical basis of the
/// row space for a spreading, or one canonical basis per block for a sum.
pub fn base_projection(m: &MatrixF, form: &CanonicalForm, tol: &Tolerance) -> Result<Vec<MatrixF>> {
    let report = validate_membership(m, form, tol);
    if !report.passed {
        return Err(CfmError::Membership(report));
    }
    let expr = &form.expr;
    match expr {
        CfExpr::Spread { .. } => Ok(vec![factor_spread(m, expr, tol)?.1]),
        CfExpr::Basic { .. } => Ok(vec![grassmann_canonicalize(m, tol)?]),
        CfExpr::Sum { .. } => expr
            .block_row_ranges()
            .into_iter()
            .map(|range| grassmann_canonicalize(&m.select_rows(&range.collect::<Vec<_>>()), tol))
            .collect(),
    }
}

/// Splits the 1-based `columns` (an `n×n` nonsingular minor of `m`) into one
/// group per sum block such that each block's square minor is nonsingular and
/// every trailing minor left after removing earlier blocks stays nonsingular.
pub fn chart_blocks(m: &MatrixF, expr: &CfExpr, columns: &[usize], tol: &Tolerance) -> Result<Vec<Vec<usize>>> {
    let n = m.rows();
    if m.rows() != expr.rows() || m.cols() != expr.width() {
        return Err(CfmError::Shape("matrix does not match the form".into()));
    }
    let cols = ColumnSet::new(columns.iter().copied())?;
    if cols.len() != n || columns.len() != n || cols.last().unwrap_or(0) > m.cols() {
        return Err(CfmError::Shape(format!("need {n} distinct columns within 1..{}", m.cols())));
    }
    let all_rows: Vec<usize> = (0..n).collect();
    if !is_nonsingular(&m.select(&all_rows, &cols.zero_based()), tol) {
        return Err(CfmError::Degenerate(format!("minor on columns {cols} is singular")));
    }
    let ranges: Vec<Vec<usize>> = expr.block_row_ranges().into_iter().map(|r| r.collect()).collect();
    search_blocks(m, &ranges, 0, cols.as_slice(), tol)
        .ok_or_else(|| CfmError::Numeric(format!("no block assignment of columns {cols} is nonsingular within tolerance")))
}

fn search_blocks(
    m: &MatrixF,
    ranges: &[Vec<usize>],
    k: usize,
    remaining: &[usize],
    tol: &Tolerance,
) -> Option<Vec<Vec<usize>>> {
    if k == ranges.len() {
        return Some(Vec::new());
    }
    let zero_based = |cs: &[usize]| cs.iter().map(|c| c - 1).collect::<Vec<_>>();
    let later_rows: Vec<usize> = ranges[k + 1..].iter().flatten().copied().collect();
    for group in combinations(remaining, ranges[k].len()) {
        if !is_nonsingular(&m.select(&ranges[k], &zero_based(&group)), tol) {
            continue;
        }
        let rest: Vec<usize> = remaining.iter().copied().filter(|c| !group.contains(c)).collect();
        if !later_rows.is_empty() && !is_nonsingular(&m.select(&later_rows, &zero_based(&rest)), tol) {
            continue;
        }
        if let Some(mut tail) = search_blocks(m, ranges, k + 1, &rest, tol) {
            tail.insert(0, group);
            return Some(tail);
        }
    }
    None
}
