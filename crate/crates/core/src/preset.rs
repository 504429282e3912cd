//! Builders for the four families of worked examples, and a fixed catalog of
//! expressions used by the CLI `catalog` command and the test suites.

use crate::error::{CfmError, Result};
use crate::expr::{CanonicalForm, CfExpr, ColumnSet};
use crate::parse::parse;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Preset {
    /// `n` orthogonal lines in `F^m`, line `i` starting with at least `s_i` zeros.
    Example1 { m: usize, s: Vec<usize> },
    /// Block-diagonal sum of Grassmannians `G_{n_i, m_i}` on disjoint column ranges.
    Example2 { blocks: Vec<(usize, usize)> },
    /// Spreading onto `F^width` of a block-diagonal sum of full flags of the given sizes.
    Example3 { blocks: Vec<usize>, width: usize },
    /// Orthonormal rows in groups of the given sizes whose minimal leading-zero
    /// counts strictly increase from group to group.
    Example4 { sizes: Vec<usize>, width: usize },
}

fn bad(msg: impl Into<String>) -> CfmError {
    CfmError::Preset(msg.into())
}

impl Preset {
    /// Reads `NAME(a, b, …; c, …)` parameter groups.
    ///
    /// * `example1(n, m; s_1, …, s_n)`
    /// * `example2(n_1, m_1; n_2, m_2; …)`
    /// * `example3(n_1, …, n_p; m')`
    /// * `example4(n_1, …, n_p; m)`
    pub fn from_groups(name: &str, groups: &[Vec<usize>]) -> Result<Self> {
        match name {
            "example1" => match groups {
                [nm, s] if nm.len() == 2 => {
                    if nm[0] != s.len() {
                        return Err(bad(format!("example1 expects {} shift values, got {}", nm[0], s.len())));
                    }
                    Ok(Preset::Example1 { m: nm[1], s: s.clone() })
                }
                _ => Err(bad("usage: example1(n,m; s_1,...,s_n)")),
            },
            "example2" => {
                let blocks = groups
                    .iter()
                    .map(|g| match g.as_slice() {
                        [n, m] => Ok((*n, *m)),
                        _ => Err(bad("usage: example2(n_1,m_1; n_2,m_2; ...)")),
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(Preset::Example2 { blocks })
            }
            "example3" | "example4" => match groups {
                [sizes, w] if w.len() == 1 => Ok(if name == "example3" {
                    Preset::Example3 { blocks: sizes.clone(), width: w[0] }
                } else {
                    Preset::Example4 { sizes: sizes.clone(), width: w[0] }
                }),
                _ => Err(bad(format!("usage: {name}(n_1,...,n_p; m)"))),
            },
            other => Err(bad(format!("unknown preset {other:?}"))),
        }
    }

    pub fn build(&self) -> Result<CanonicalForm> {
        match self {
            Preset::Example1 { m, s } => example1(*m, s).map(CanonicalForm::new),
            Preset::Example2 { blocks } => example2(blocks).map(CanonicalForm::new),
            Preset::Example3 { blocks, width } => example3(blocks, *width).map(CanonicalForm::new),
            Preset::Example4 { sizes, width } => {
                example4(sizes, *width).map(|e| CanonicalForm::with_min_order(e, sizes.clone()))
            }
        }
    }

    /// DSL spelling, e.g. `preset:example4(2,1;3)`.
    pub fn dsl(&self) -> String {
        let join = |v: &[usize]| v.iter().map(usize::to_string).collect::<Vec<_>>().join(",");
        match self {
            Preset::Example1 { m, s } => format!("preset:example1({},{m};{})", s.len(), join(s)),
            Preset::Example2 { blocks } => {
                let parts: Vec<String> = blocks.iter().map(|(n, m)| format!("{n},{m}")).collect();
                format!("preset:example2({})", parts.join(";"))
            }
            Preset::Example3 { blocks, width } => format!("preset:example3({};{width})", join(blocks)),
            Preset::Example4 { sizes, width } => format!("preset:example4({};{width})", join(sizes)),
        }
    }
}

/// Builds a preset from its name and parameter groups.
pub fn build_preset(name: &str, groups: &[Vec<usize>]) -> Result<CanonicalForm> {
    Preset::from_groups(name, groups)?.build()
}

fn line(support: ColumnSet, width: usize) -> Result<CfExpr> {
    CfExpr::spread(CfExpr::Basic { n: 1 }, support, width)
}

fn example1(m: usize, s: &[usize]) -> Result<CfExpr> {
    let n = s.len();
    if n == 0 || m < n {
        return Err(bad(format!("example1 needs 1 <= n <= m, got n={n}, m={m}")));
    }
    if let Some(&bad_shift) = s.iter().find(|&&si| si >= m) {
        return Err(bad(format!("shift {bad_shift} must be below m={m}")));
    }
    let mut shifts = s.to_vec();
    if m == n {
        // square forms exist only when some ordering gives s_i < i
        shifts.sort_unstable();
        if let Some((i, si)) = shifts.iter().enumerate().find(|(i, si)| **si > *i) {
            return Err(bad(format!(
                "square example1 is empty: sorted shift s_{} = {si} is not below {}",
                i + 1,
                i + 1
            )));
        }
    }
    let blocks = shifts
        .iter()
        .map(|&si| line(ColumnSet::range(si + 1, m), m))
        .collect::<Result<Vec<_>>>()?;
    CfExpr::sum(m, blocks)
}

fn example2(blocks: &[(usize, usize)]) -> Result<CfExpr> {
    if blocks.is_empty() {
        return Err(bad("example2 needs at least one block"));
    }
    if let Some((n, m)) = blocks.iter().find(|(n, m)| *n == 0 || n > m) {
        return Err(bad(format!("example2 block ({n},{m}) needs 1 <= n <= m")));
    }
    let width: usize = blocks.iter().map(|b| b.1).sum();
    let mut offset = 0;
    let parts = blocks
        .iter()
        .map(|&(n, m)| {
            let b = CfExpr::spread(CfExpr::basic(n)?, ColumnSet::range(offset + 1, offset + m), width);
            offset += m;
            b
        })
        .collect::<Result<Vec<_>>>()?;
    CfExpr::sum(width, parts)
}

fn full_flag(n: usize) -> Result<CfExpr> {
    if n == 1 {
        return CfExpr::basic(1);
    }
    CfExpr::flag(&vec![1; n], n)
}

fn example3(blocks: &[usize], width: usize) -> Result<CfExpr> {
    let n: usize = blocks.iter().sum();
    if blocks.is_empty() || blocks.contains(&0) {
        return Err(bad("example3 block sizes must be positive"));
    }
    if width < n {
        return Err(bad(format!("example3 width {width} is below the total size {n}")));
    }
    let mut offset = 0;
    let diag = blocks
        .iter()
        .map(|&ni| {
            let b = CfExpr::spread(full_flag(ni)?, ColumnSet::range(offset + 1, offset + ni), n);
            offset += ni;
            b
        })
        .collect::<Result<Vec<_>>>()?;
    CfExpr::spread(CfExpr::sum(n, diag)?, ColumnSet::range(1, width), width)
}

/// Square case: `n_1` lines in `F^n` summed with the recursive form for the
/// remaining sizes placed on `e_2, …, e_n`.
fn example4_square(sizes: &[usize]) -> Result<CfExpr> {
    let n: usize = sizes.iter().sum();
    if n == 1 {
        return CfExpr::basic(1);
    }
    let mut blocks = (0..sizes[0])
        .map(|_| line(ColumnSet::range(1, n), n))
        .collect::<Result<Vec<_>>>()?;
    if sizes.len() > 1 {
        blocks.push(example4(&sizes[1..], n - 1)?.embedded(1, n)?);
    }
    CfExpr::sum(n, blocks)
}

fn example4(sizes: &[usize], width: usize) -> Result<CfExpr> {
    let n: usize = sizes.iter().sum();
    if sizes.is_empty() || sizes.contains(&0) {
        return Err(bad("example4 group sizes must be positive"));
    }
    if width < n {
        return Err(bad(format!("example4 width {width} is below the total size {n}")));
    }
    let square = example4_square(sizes)?;
    if width == n {
        Ok(square)
    } else {
        CfExpr::spread(square, ColumnSet::range(1, width), width)
    }
}

/// Named expressions covering every construction and preset family.
pub fn catalog() -> Vec<(String, CanonicalForm)> {
    const ENTRIES: &[&str] = &[
        "basic(2)",
        "grassmann(1,2)",
        "grassmann(1,3)",
        "grassmann(2,4)",
        "grassmann(2,5)",
        "grassmann(3,5)",
        "flag(1,1;2)",
        "flag(1,1,1;3)",
        "flag(1,2;4)",
        "flag(1,1,1,1;4)",
        "flag(2,1;5)",
        "sum(m=3; spread(basic(1),cols=1..3), spread(basic(1),cols=1..3), spread(basic(1),cols=2..3))",
        "spread(flag(1,1;2), cols=1..4)",
        "sum(m=6; spread(basic(1), cols={2,4,6}), spread(basic(2), cols=1..6))",
        "spread(sum(m=3; spread(basic(1), cols={1}), spread(flag(1,1;2), cols=2..3)), cols=1..5)",
        "sum(m=5; spread(basic(1), cols=4..5), spread(basic(1), cols=1..2), spread(basic(2), cols=1..5))",
        "preset:example1(3,3;0,0,0)",
        "preset:example1(3,3;0,2,1)",
        "preset:example1(2,4;1,2)",
        "preset:example1(3,5;0,1,3)",
        "preset:example2(1,2;2,3)",
        "preset:example2(1,1;1,3;2,2)",
        "preset:example3(2,1;4)",
        "preset:example3(1,2;3)",
        "preset:example4(2,1;3)",
        "preset:example4(1,2;4)",
        "preset:example4(1,1,1;3)",
        "preset:example4(2,1,1;5)",
    ];
    ENTRIES
        .iter()
        .map(|text| (text.to_string(), parse(text).expect("catalog entries are well formed")))
        .collect()
}
