//! Cell decomposition of the manifold of members of a canonical form.
//!
//! A cell is addressed by the pivot columns chosen at every spreading and
//! every sum block. Inside a sum, blocks are visited in nesting order and a
//! block may only place pivots on support columns not already taken by the
//! blocks nested inside it. A block with `n` rows and `r` free columns
//! contributes `Σ_i (r − pos(j_i) − (n − i))` to the dimension, where
//! `pos(j)` is the 1-based position of pivot `j` among the free columns.

use std::fmt;

use serde::Serialize;

use crate::canonical::{factor_spread, grassmann_canonicalize, pivot_columns, validate_membership};
use crate::error::{CfmError, Result};
use crate::expr::{CanonicalForm, CfExpr, ColumnSet};
use crate::matrix::{MatrixF, Tolerance};
use crate::poincare::IntPoly;
use crate::scalar::Field;
use crate::util::{binomial, combinations};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum CellSymbol {
    Basic,
    Spread { pivots: ColumnSet, base: Box<CellSymbol> },
    /// Children in the original block order of the sum.
    Sum { children: Vec<CellSymbol> },
}

impl fmt::Display for CellSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CellSymbol::Basic => f.write_str("*"),
            CellSymbol::Spread { pivots, base } => {
                let cols: Vec<String> = pivots.iter().map(|c| c.to_string()).collect();
                write!(f, "{{{}}}", cols.join(","))?;
                if **base != CellSymbol::Basic {
                    write!(f, ":{base}")?;
                }
                Ok(())
            }
            CellSymbol::Sum { children } => {
                f.write_str("(")?;
                for (i, c) in children.iter().enumerate() {
                    if i > 0 {
                        f.write_str("; ")?;
                    }
                    write!(f, "{c}")?;
                }
                f.write_str(")")
            }
        }
    }
}

impl Serialize for CellSymbol {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// One cell: its symbol and its dimension over F.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Cell {
    pub symbol: CellSymbol,
    pub dim: usize,
}

/// Dimension of the Schubert cell with pivots `picked` inside the free columns `free`.
fn schubert_dim(free: &[usize], picked: &[usize]) -> usize {
    let (r, n) = (free.len(), picked.len());
    picked
        .iter()
        .enumerate()
        .map(|(i, j)| {
            let pos = free.iter().position(|c| c == j).expect("pivot among free columns") + 1;
            r - pos - (n - (i + 1))
        })
        .sum()
}

fn block_parts(expr: &CfExpr) -> Result<(&CfExpr, &ColumnSet)> {
    match expr {
        CfExpr::Spread { base, support, .. } => Ok((base, support)),
        _ => Err(CfmError::Shape("sum block is not a spreading".into())),
    }
}

fn enumerate_node(expr: &CfExpr) -> Result<Vec<Cell>> {
    match expr {
        CfExpr::Basic { .. } => Ok(vec![Cell { symbol: CellSymbol::Basic, dim: 0 }]),
        CfExpr::Spread { base, support, .. } => {
            let base_cells = enumerate_node(base)?;
            let mut out = Vec::new();
            for picked in combinations(support.as_slice(), base.rows()) {
                let d = schubert_dim(support.as_slice(), &picked);
                let pivots = ColumnSet::new(picked)?;
                for c in &base_cells {
                    out.push(Cell {
                        symbol: CellSymbol::Spread { pivots: pivots.clone(), base: Box::new(c.symbol.clone()) },
                        dim: d + c.dim,
                    });
                }
            }
            Ok(out)
        }
        CfExpr::Sum { blocks, .. } => {
            let order = expr.nesting_order()?;
            let base_cells = blocks
                .iter()
                .map(|b| enumerate_node(block_parts(b)?.0))
                .collect::<Result<Vec<_>>>()?;
            let mut out = Vec::new();
            let mut chosen: Vec<Option<CellSymbol>> = vec![None; blocks.len()];
            sum_dfs(blocks, &order.order, &base_cells, 0, &ColumnSet::default(), 0, &mut chosen, &mut out)?;
            Ok(out)
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn sum_dfs(
    blocks: &[CfExpr],
    order: &[usize],
    base_cells: &[Vec<Cell>],
    k: usize,
    used: &ColumnSet,
    dim: usize,
    chosen: &mut Vec<Option<CellSymbol>>,
    out: &mut Vec<Cell>,
) -> Result<()> {
    if k == order.len() {
        let children = chosen.iter().map(|c| c.clone().expect("every block chosen")).collect();
        out.push(Cell { symbol: CellSymbol::Sum { children }, dim });
        return Ok(());
    }
    let i = order[k];
    let (base, support) = block_parts(&blocks[i])?;
    let free = support.difference(used);
    for picked in combinations(free.as_slice(), base.rows()) {
        let d = schubert_dim(free.as_slice(), &picked);
        let pivots = ColumnSet::new(picked)?;
        let used_next = used.union(&pivots);
        for c in &base_cells[i] {
            chosen[i] = Some(CellSymbol::Spread { pivots: pivots.clone(), base: Box::new(c.symbol.clone()) });
            sum_dfs(blocks, order, base_cells, k + 1, &used_next, dim + d + c.dim, chosen, out)?;
        }
    }
    chosen[i] = None;
    Ok(())
}

/// Every cell with its dimension over F, lexicographic in pivot sets and
/// depth first along the tree.
pub fn enumerate_cells(expr: &CfExpr) -> Result<Vec<(CellSymbol, usize)>> {
    expr.validate()?;
    Ok(enumerate_node(expr)?.into_iter().map(|c| (c.symbol, c.dim)).collect())
}

fn count_node(expr: &CfExpr) -> Result<u128> {
    match expr {
        CfExpr::Basic { .. } => Ok(1),
        CfExpr::Spread { base, support, .. } => Ok(binomial(support.len(), base.rows()) * count_node(base)?),
        CfExpr::Sum { blocks, .. } => {
            let order = expr.nesting_order()?;
            let mut acc = 1u128;
            for (i, r) in order.iter() {
                let base = block_parts(&blocks[i])?.0;
                acc *= binomial(r, base.rows()) * count_node(base)?;
            }
            Ok(acc)
        }
    }
}

/// Number of cells, `Π C(r_i, n_i)` over the tree.
pub fn cell_count(expr: &CfExpr) -> Result<u128> {
    expr.validate()?;
    count_node(expr)
}

/// `Σ_J q^dim(J)` over the pivot sets of `n` columns among `r` free ones.
fn pivot_polynomial(r: usize, n: usize) -> IntPoly {
    let free: Vec<usize> = (1..=r).collect();
    combinations(&free, n)
        .iter()
        .fold(IntPoly::zero(), |acc, j| &acc + &IntPoly::monomial(1, schubert_dim(&free, j)))
}

fn polynomial_node(expr: &CfExpr) -> Result<IntPoly> {
    match expr {
        CfExpr::Basic { .. } => Ok(IntPoly::one()),
        CfExpr::Spread { base, support, .. } => {
            Ok(&pivot_polynomial(support.len(), base.rows()) * &polynomial_node(base)?)
        }
        CfExpr::Sum { blocks, .. } => {
            // a block's dimension depends only on pivot positions among its
            // free columns, so the sum over all cells factors block by block
            let order = expr.nesting_order()?;
            let mut acc = IntPoly::one();
            for (i, r) in order.iter() {
                let base = block_parts(&blocks[i])?.0;
                acc = &(&acc * &pivot_polynomial(r, base.rows())) * &polynomial_node(base)?;
            }
            Ok(acc)
        }
    }
}

/// `Σ_cells q^dim`, with dimensions over F.
pub fn cell_generating_polynomial(expr: &CfExpr) -> Result<IntPoly> {
    expr.validate()?;
    polynomial_node(expr)
}

/// `Σ_cells (−1)^(d·dim)` for the real dimension `d` of `field`.
pub fn euler_characteristic(expr: &CfExpr, field: Field) -> Result<i64> {
    let sign = if field.real_dim().is_multiple_of(2) { 1 } else { -1 };
    Ok(cell_generating_polynomial(expr)?.eval(sign))
}

/// Pivots of the canonical basis of `m`, refusing pivots too close to zero
/// to decide the stratum.
fn clear_pivots(m: &MatrixF, tol: &Tolerance) -> Result<ColumnSet> {
    let x = grassmann_canonicalize(m, tol)?;
    let pivots = pivot_columns(&x, tol);
    for (r, &p) in pivots.iter().enumerate() {
        let v = x.get(r, p - 1).re;
        if v <= 2.0 * tol.eps_zero {
            return Err(CfmError::Numeric(format!(
                "pivot {v:.3e} in column {p} is within tolerance of zero; the cell is ambiguous"
            )));
        }
    }
    ColumnSet::new(pivots)
}

fn locate(m: &MatrixF, expr: &CfExpr, tol: &Tolerance) -> Result<CellSymbol> {
    match expr {
        CfExpr::Basic { .. } => Ok(CellSymbol::Basic),
        CfExpr::Spread { base, .. } => {
            let (c, x) = factor_spread(m, expr, tol)?;
            let pivots = clear_pivots(&x, tol)?;
            Ok(CellSymbol::Spread { pivots, base: Box::new(locate(&c, base, tol)?) })
        }
        CfExpr::Sum { blocks, .. } => {
            let order = expr.nesting_order()?;
            let ranges = expr.block_row_ranges();
            let supports: Vec<ColumnSet> = blocks.iter().map(CfExpr::support_of).collect();
            let mut taken: Vec<Option<ColumnSet>> = vec![None; blocks.len()];
            let mut children: Vec<Option<CellSymbol>> = vec![None; blocks.len()];
            for (pos, &i) in order.order.iter().enumerate() {
                let nested: Vec<usize> = order.order[..pos]
                    .iter()
                    .copied()
                    .filter(|&k| supports[k].is_subset(&supports[i]))
                    .collect();
                let mut rows: Vec<usize> = nested.iter().flat_map(|&k| ranges[k].clone()).collect();
                rows.extend(ranges[i].clone());
                let before = nested
                    .iter()
                    .fold(ColumnSet::default(), |acc, &k| acc.union(taken[k].as_ref().expect("nested block done")));
                let pivots = clear_pivots(&m.select_rows(&rows), tol)?.difference(&before);
                let block_rows = m.select_rows(&ranges[i].clone().collect::<Vec<_>>());
                if pivots.len() != block_rows.rows() {
                    return Err(CfmError::Numeric(format!("block {i} does not add {} new pivots", block_rows.rows())));
                }
                let (c, _) = factor_spread(&block_rows, &blocks[i], tol)?;
                let base = block_parts(&blocks[i])?.0;
                children[i] = Some(CellSymbol::Spread { pivots: pivots.clone(), base: Box::new(locate(&c, base, tol)?) });
                taken[i] = Some(pivots);
            }
            Ok(CellSymbol::Sum { children: children.into_iter().map(|c| c.expect("every block located")).collect() })
        }
    }
}

/// The cell containing the member `m`.
pub fn cell_of_matrix(m: &MatrixF, expr: &CfExpr, tol: &Tolerance) -> Result<CellSymbol> {
    expr.validate()?;
    let report = validate_membership(m, &CanonicalForm::new(expr.clone()), tol);
    if !report.passed {
        return Err(CfmError::Membership(report));
    }
    locate(m, expr, tol)
}

/// Dimension over F of the cell with the given symbol, if the symbol belongs to `expr`.
pub fn cell_dimension(expr: &CfExpr, symbol: &CellSymbol) -> Result<Option<usize>> {
    Ok(enumerate_cells(expr)?.into_iter().find(|(s, _)| s == symbol).map(|(_, d)| d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canonical::sample;
    use crate::parse::{parse, parse_expr};
    use crate::preset::catalog;

    fn e(s: &str) -> CfExpr {
        parse_expr(s).unwrap()
    }

    fn dims(expr: &CfExpr) -> Vec<usize> {
        enumerate_cells(expr).unwrap().into_iter().map(|(_, d)| d).collect()
    }

    #[test]
    fn projective_line() {
        let cells = enumerate_cells(&e("grassmann(1,2)")).unwrap();
        let shown: Vec<(String, usize)> = cells.iter().map(|(s, d)| (s.to_string(), *d)).collect();
        assert_eq!(shown, vec![("{1}".to_string(), 1), ("{2}".to_string(), 0)]);
    }

    #[test]
    fn grassmann_2_3() {
        assert_eq!(dims(&e("grassmann(2,3)")), vec![2, 1, 0]);
        assert_eq!(cell_generating_polynomial(&e("grassmann(2,3)")).unwrap().coeffs(), &[1, 1, 1]);
    }

    #[test]
    fn klein_cells() {
        let klein = parse("preset:example4(2,1;3)").unwrap().expr;
        let mut d = dims(&klein);
        d.sort_unstable();
        assert_eq!(d, vec![0, 1, 1, 2]);
        assert_eq!(cell_generating_polynomial(&klein).unwrap().coeffs(), &[1, 2, 1]);
        assert_eq!(euler_characteristic(&klein, Field::Real).unwrap(), 0);
        assert_eq!(euler_characteristic(&klein, Field::Complex).unwrap(), 4);
    }

    #[test]
    fn counts() {
        assert_eq!(cell_count(&e("grassmann(2,4)")).unwrap(), 6);
        assert_eq!(cell_count(&e("flag(1,1,1;3)")).unwrap(), 6);
        assert_eq!(cell_count(&e("flag(1,2;4)")).unwrap(), 12);
        assert_eq!(cell_count(&e("basic(3)")).unwrap(), 1);
        let flag = cell_generating_polynomial(&e("flag(1,1,1;3)")).unwrap();
        assert_eq!(flag, &IntPoly::new(vec![1, 1]) * &IntPoly::new(vec![1, 1, 1]));
    }

    #[test]
    fn euler_examples() {
        assert_eq!(euler_characteristic(&e("grassmann(1,3)"), Field::Complex).unwrap(), 3);
        assert_eq!(euler_characteristic(&e("grassmann(1,3)"), Field::Real).unwrap(), 1);
        assert_eq!(euler_characteristic(&e("basic(4)"), Field::Quaternion).unwrap(), 1);
    }

    #[test]
    fn symbols_follow_block_order() {
        let cells = enumerate_cells(&e("sum(m=3; spread(basic(1), cols=1..3), spread(basic(1), cols=2..3))")).unwrap();
        assert_eq!(cells.len(), 4);
        for (s, _) in &cells {
            let CellSymbol::Sum { children } = s else { panic!("sum symbol expected") };
            let piv = |c: &CellSymbol| match c {
                CellSymbol::Spread { pivots, .. } => pivots.clone(),
                _ => panic!(),
            };
            assert!(piv(&children[0]).is_disjoint(&piv(&children[1])));
            assert!(piv(&children[1]).is_subset(&ColumnSet::range(2, 3)));
        }
    }

    #[test]
    fn catalog_agrees_with_closed_forms() {
        for (name, form) in catalog() {
            let expr = &form.expr;
            let cells = enumerate_cells(expr).unwrap();
            assert_eq!(cells.len() as u128, cell_count(expr).unwrap(), "{name}");
            let poly = cells.iter().fold(IntPoly::zero(), |acc, (_, d)| &acc + &IntPoly::monomial(1, *d));
            assert_eq!(poly, cell_generating_polynomial(expr).unwrap(), "{name}");
            let top = expr.dimension().unwrap();
            assert_eq!(poly.degree(), Some(top), "{name}");
            assert_eq!(poly.coeff(top), 1, "{name}: top cell not unique");
        }
    }

    #[test]
    fn block_order_does_not_matter() {
        let a = e("sum(m=4; spread(basic(1), cols=1..4), spread(basic(2), cols=3..4))");
        let b = e("sum(m=4; spread(basic(2), cols=3..4), spread(basic(1), cols=1..4))");
        assert_eq!(cell_generating_polynomial(&a).unwrap(), cell_generating_polynomial(&b).unwrap());
    }

    #[test]
    fn located_cells() {
        let tol = Tolerance::default();
        let id = MatrixF::identity(Field::Real, 3);
        let s = cell_of_matrix(&id, &e("grassmann(3,3)"), &tol).unwrap();
        assert_eq!(s.to_string(), "{1,2,3}");
        let m = MatrixF::real(&[&[0.0, 1.0, 0.0]]);
        assert_eq!(cell_of_matrix(&m, &e("grassmann(1,3)"), &tol).unwrap().to_string(), "{2}");
        let bad = MatrixF::real(&[&[0.0, -1.0, 0.0]]);
        assert!(matches!(cell_of_matrix(&bad, &e("grassmann(1,3)"), &tol), Err(CfmError::Membership(_))));
    }

    #[test]
    fn samples_land_in_the_top_cell() {
        let tol = Tolerance::default();
        for (name, form) in catalog() {
            let expr = &form.expr;
            for field in Field::ALL {
                let m = sample(expr, field, 7, &tol).unwrap();
                let symbol = cell_of_matrix(&m, expr, &tol).unwrap();
                let d = cell_dimension(expr, &symbol).unwrap();
                assert_eq!(d, Some(expr.dimension().unwrap()), "{name} over {field}");
            }
        }
    }

    #[test]
    fn ambiguous_pivot_is_numeric() {
        let tol = Tolerance::default();
        let tiny: f64 = 1.5e-9;
        let n = (1.0 + tiny * tiny).sqrt();
        let m = MatrixF::real(&[&[tiny / n, 1.0 / n]]);
        assert!(matches!(cell_of_matrix(&m, &e("grassmann(1,2)"), &tol), Err(CfmError::Numeric(_))));
    }
}
