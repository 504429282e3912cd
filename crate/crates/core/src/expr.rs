//! Canonical-form expressions: basic forms, spreadings and inner sums.
//!
//! Column indices in this module are 1-based, matching the expression DSL.
//! A well-formed [`CfExpr::Sum`] always has [`CfExpr::Spread`] blocks whose
//! supports form a laminar family; the checked constructors enforce this.

use std::fmt;

use crate::error::{CfmError, Result};
use crate::report::IssueCode;
use crate::scalar::Field;

/// Sorted set of 1-based column indices.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ColumnSet(Vec<usize>);

impl ColumnSet {
    pub fn new(cols: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut v: Vec<usize> = cols.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        if v.first() == Some(&0) {
            return Err(CfmError::Format("column indices start at 1".into()));
        }
        Ok(ColumnSet(v))
    }

    /// `{lo, lo+1, …, hi}`; empty when `lo > hi`.
    pub fn range(lo: usize, hi: usize) -> Self {
        assert!(lo >= 1, "column indices start at 1");
        ColumnSet((lo..=hi).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn last(&self) -> Option<usize> {
        self.0.last().copied()
    }

    pub fn contains(&self, col: usize) -> bool {
        self.0.binary_search(&col).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn is_subset(&self, other: &ColumnSet) -> bool {
        self.0.iter().all(|c| other.contains(*c))
    }

    pub fn is_disjoint(&self, other: &ColumnSet) -> bool {
        self.0.iter().all(|c| !other.contains(*c))
    }

    pub fn union(&self, other: &ColumnSet) -> ColumnSet {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        v.sort_unstable();
        v.dedup();
        ColumnSet(v)
    }

    pub fn difference(&self, other: &ColumnSet) -> ColumnSet {
        ColumnSet(self.0.iter().copied().filter(|c| !other.contains(*c)).collect())
    }

    /// 0-based indices for matrix access.
    pub fn zero_based(&self) -> Vec<usize> {
        self.0.iter().map(|c| c - 1).collect()
    }

    pub(crate) fn shifted(&self, offset: usize) -> ColumnSet {
        ColumnSet(self.0.iter().map(|c| c + offset).collect())
    }

    fn is_contiguous(&self) -> bool {
        self.0.windows(2).all(|w| w[1] == w[0] + 1)
    }
}

impl fmt::Display for ColumnSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.0.first(), self.0.last()) {
            (Some(lo), Some(hi)) if self.is_contiguous() && self.0.len() > 1 => write!(f, "{lo}..{hi}"),
            _ => {
                let parts: Vec<String> = self.0.iter().map(usize::to_string).collect();
                write!(f, "{{{}}}", parts.join(","))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum CfExpr {
    /// The `n×n` identity; a single point.
    Basic { n: usize },
    /// `{C·X}` with `C` from the square form `base` and `X` Grassmann-canonical
    /// with rows supported on `support` inside `F^width`.
    Spread { base: Box<CfExpr>, support: ColumnSet, width: usize },
    /// Stacked blocks of a common width with mutually orthogonal rows.
    Sum { width: usize, blocks: Vec<CfExpr> },
}

/// Order in which inner-sum blocks are processed, most constrained first, with
/// the effective ambient dimension left to each block. `ambients[k]` belongs
/// to block `order[k]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NestingOrder {
    pub order: Vec<usize>,
    pub ambients: Vec<usize>,
}

impl NestingOrder {
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.order.iter().copied().zip(self.ambients.iter().copied())
    }
}

impl CfExpr {
    pub fn basic(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(CfmError::structure(IssueCode::EmptyForm, "root", "basic(0) has no rows"));
        }
        Ok(CfExpr::Basic { n })
    }

    pub fn spread(base: CfExpr, support: ColumnSet, width: usize) -> Result<Self> {
        let n = base.rows();
        if n != base.width() {
            return Err(CfmError::structure(
                IssueCode::NotSquareBase,
                "root.base",
                format!("spread base is {}x{}", n, base.width()),
            ));
        }
        if support.is_empty() {
            return Err(CfmError::structure(IssueCode::EmptyForm, "root", "empty support"));
        }
        if support.last().unwrap_or(0) > width {
            return Err(CfmError::structure(
                IssueCode::WidthMismatch,
                "root",
                format!("support {support} exceeds width {width}"),
            ));
        }
        if support.len() < n {
            return Err(CfmError::structure(
                IssueCode::EmptyForm,
                "root",
                format!("{n} rows cannot fit in {} support columns", support.len()),
            ));
        }
        Ok(CfExpr::Spread { base: Box::new(base), support, width })
    }

    /// Inner sum of `blocks` in `F^width`. Nested sums of the same width are
    /// flattened and a bare `basic(width)` block becomes a full spreading.
    pub fn sum(width: usize, blocks: Vec<CfExpr>) -> Result<Self> {
        if blocks.is_empty() {
            return Err(CfmError::structure(IssueCode::EmptyForm, "root", "sum without blocks"));
        }
        let mut flat = Vec::with_capacity(blocks.len());
        for (i, block) in blocks.into_iter().enumerate() {
            match block {
                CfExpr::Sum { width: w, blocks: inner } if w == width => flat.extend(inner),
                CfExpr::Basic { n } if n == width => {
                    flat.push(CfExpr::Spread {
                        base: Box::new(CfExpr::Basic { n }),
                        support: ColumnSet::range(1, n),
                        width,
                    });
                }
                b @ CfExpr::Spread { .. } if b.width() == width => flat.push(b),
                other => {
                    return Err(CfmError::structure(
                        IssueCode::WidthMismatch,
                        format!("root.block[{i}]"),
                        format!("block of width {} in a sum of width {width}", other.width()),
                    ))
                }
            }
        }
        let expr = CfExpr::Sum { width, blocks: flat };
        expr.check_laminar()?;
        expr.nesting_order()?;
        Ok(expr)
    }

    /// `G_{n,m}`: `spread(basic(n), cols=1..m)`.
    pub fn grassmann(n: usize, m: usize) -> Result<Self> {
        CfExpr::spread(CfExpr::basic(n)?, ColumnSet::range(1, m), m)
    }

    /// Flag manifold `G_{n_1,…,n_p,m}` as a sum of full-width spreadings.
    pub fn flag(sizes: &[usize], m: usize) -> Result<Self> {
        let blocks = sizes
            .iter()
            .map(|&n| CfExpr::grassmann(n, m))
            .collect::<Result<Vec<_>>>()?;
        CfExpr::sum(m, blocks)
    }

    pub fn rows(&self) -> usize {
        match self {
            CfExpr::Basic { n } => *n,
            CfExpr::Spread { base, .. } => base.rows(),
            CfExpr::Sum { blocks, .. } => blocks.iter().map(CfExpr::rows).sum(),
        }
    }

    pub fn width(&self) -> usize {
        match self {
            CfExpr::Basic { n } => *n,
            CfExpr::Spread { width, .. } | CfExpr::Sum { width, .. } => *width,
        }
    }

    /// Columns the rows of any member may occupy.
    pub fn support_of(&self) -> ColumnSet {
        match self {
            CfExpr::Basic { n } => ColumnSet::range(1, *n),
            CfExpr::Spread { support, .. } => support.clone(),
            CfExpr::Sum { blocks, .. } => blocks
                .iter()
                .fold(ColumnSet(Vec::new()), |acc, b| acc.union(&b.support_of())),
        }
    }

    /// Row ranges (0-based, half-open) of the blocks of a sum, in block order.
    pub fn block_row_ranges(&self) -> Vec<std::ops::Range<usize>> {
        match self {
            CfExpr::Sum { blocks, .. } => {
                let mut start = 0;
                blocks
                    .iter()
                    .map(|b| {
                        let r = start..start + b.rows();
                        start = r.end;
                        r
                    })
                    .collect()
            }
            other => std::iter::once(0..other.rows()).collect(),
        }
    }

    fn check_laminar(&self) -> Result<()> {
        let CfExpr::Sum { blocks, .. } = self else { return Ok(()) };
        let supports: Vec<ColumnSet> = blocks.iter().map(CfExpr::support_of).collect();
        for a in 0..supports.len() {
            for b in a + 1..supports.len() {
                let (sa, sb) = (&supports[a], &supports[b]);
                if !(sa.is_subset(sb) || sb.is_subset(sa) || sa.is_disjoint(sb)) {
                    return Err(CfmError::structure(
                        IssueCode::NotLaminar,
                        format!("root.block[{a}],root.block[{b}]"),
                        format!("supports {sa} and {sb} overlap without nesting"),
                    ));
                }
            }
        }
        Ok(())
    }

    /// Blocks sorted by `(|support|, index)`; each block's ambient is its
    /// support size minus the rows of earlier blocks nested inside it.
    pub fn nesting_order(&self) -> Result<NestingOrder> {
        let CfExpr::Sum { blocks, .. } = self else {
            return Err(CfmError::Shape("nesting order is defined for sums only".into()));
        };
        let supports: Vec<ColumnSet> = blocks.iter().map(CfExpr::support_of).collect();
        let mut order: Vec<usize> = (0..blocks.len()).collect();
        order.sort_by_key(|&i| (supports[i].len(), i));
        let mut ambients = Vec::with_capacity(order.len());
        for (pos, &i) in order.iter().enumerate() {
            let consumed: usize = order[..pos]
                .iter()
                .filter(|&&k| supports[k].is_subset(&supports[i]))
                .map(|&k| blocks[k].rows())
                .sum();
            let n = blocks[i].rows();
            let r = supports[i].len().checked_sub(consumed).filter(|&r| r >= n).ok_or_else(|| {
                CfmError::structure(
                    IssueCode::EmptyForm,
                    format!("root.block[{i}]"),
                    format!(
                        "block needs {n} direction(s) but only {} remain in {}",
                        supports[i].len().saturating_sub(consumed),
                        supports[i]
                    ),
                )
            })?;
            ambients.push(r);
        }
        Ok(NestingOrder { order, ambients })
    }

    /// Dimension over F of the manifold of members.
    pub fn dimension(&self) -> Result<usize> {
        match self {
            CfExpr::Basic { .. } => Ok(0),
            CfExpr::Spread { base, support, .. } => {
                let n = base.rows();
                Ok(base.dimension()? + n * (support.len() - n))
            }
            CfExpr::Sum { blocks, .. } => {
                let order = self.nesting_order()?;
                let mut total = 0;
                for (i, r) in order.iter() {
                    let n = blocks[i].rows();
                    total += n * (r - n) + blocks[i].spread_base()?.dimension()?;
                }
                Ok(total)
            }
        }
    }

    /// Real dimension `d·dim_F`.
    pub fn real_dimension(&self, field: Field) -> Result<usize> {
        Ok(field.real_dim() * self.dimension()?)
    }

    pub(crate) fn spread_base(&self) -> Result<&CfExpr> {
        match self {
            CfExpr::Spread { base, .. } => Ok(base),
            _ => Err(CfmError::structure(IssueCode::WidthMismatch, "root", "sum block is not a spreading")),
        }
    }

    /// Re-runs every structural check on a tree that may have been assembled by hand.
    pub fn validate(&self) -> Result<()> {
        match self {
            CfExpr::Basic { n } => CfExpr::basic(*n).map(|_| ()),
            CfExpr::Spread { base, support, width } => {
                base.validate()?;
                CfExpr::spread((**base).clone(), support.clone(), *width).map(|_| ())
            }
            CfExpr::Sum { width, blocks } => {
                for b in blocks {
                    if !matches!(b, CfExpr::Spread { .. }) {
                        return Err(CfmError::structure(
                            IssueCode::WidthMismatch,
                            "root",
                            "sum blocks must be spreadings after normalization",
                        ));
                    }
                    b.validate()?;
                }
                CfExpr::sum(*width, blocks.clone()).map(|_| ())
            }
        }
    }

    /// Moves every support `offset` columns to the right inside a wider ambient.
    pub(crate) fn embedded(&self, offset: usize, width: usize) -> Result<CfExpr> {
        match self {
            CfExpr::Spread { base, support, .. } => CfExpr::spread((**base).clone(), support.shifted(offset), width),
            CfExpr::Sum { blocks, .. } => {
                let blocks = blocks
                    .iter()
                    .map(|b| b.embedded(offset, width))
                    .collect::<Result<Vec<_>>>()?;
                CfExpr::sum(width, blocks)
            }
            CfExpr::Basic { n } => {
                CfExpr::spread(CfExpr::Basic { n: *n }, ColumnSet::range(offset + 1, offset + n), width)
            }
        }
    }

    fn fmt_in(&self, f: &mut fmt::Formatter<'_>, ambient: Option<usize>) -> fmt::Result {
        match self {
            CfExpr::Basic { n } => write!(f, "basic({n})"),
            CfExpr::Spread { base, support, width } => {
                let implied = ambient.unwrap_or_else(|| support.last().unwrap_or(0));
                if implied != *width {
                    write!(f, "sum(m={width}; ")?;
                    self.fmt_in(f, Some(*width))?;
                    return f.write_str(")");
                }
                f.write_str("spread(")?;
                base.fmt_in(f, None)?;
                write!(f, ", cols={support})")
            }
            CfExpr::Sum { width, blocks } => {
                write!(f, "sum(m={width}; ")?;
                for (i, b) in blocks.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    b.fmt_in(f, Some(*width))?;
                }
                f.write_str(")")
            }
        }
    }
}

/// Prints the expression in the DSL accepted by [`crate::parse::parse`].
impl fmt::Display for CfExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_in(f, None)
    }
}

/// An expression plus the optional extra check carried by block-minima presets:
/// consecutive row groups of the given sizes must have strictly increasing
/// minimal leading-zero counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalForm {
    pub expr: CfExpr,
    pub min_order_groups: Option<Vec<usize>>,
}

impl CanonicalForm {
    pub fn new(expr: CfExpr) -> Self {
        CanonicalForm { expr, min_order_groups: None }
    }

    pub fn with_min_order(expr: CfExpr, groups: Vec<usize>) -> Self {
        CanonicalForm { expr, min_order_groups: Some(groups) }
    }
}

impl From<CfExpr> for CanonicalForm {
    fn from(expr: CfExpr) -> Self {
        CanonicalForm::new(expr)
    }
}

impl fmt::Display for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.expr.fmt(f)
    }
}
