//! Recursive-descent parser for the canonical-form expression DSL.
//!
//! ```text
//! expr   := "basic(" INT ")"
//!         | "spread(" expr ", cols=" colset ")"
//!         | "sum(m=" INT "; " expr { ", " expr } ")"
//!         | "grassmann(" INT "," INT ")"
//!         | "flag(" INT { "," INT } "; " INT ")"
//! colset := INT ".." INT | "{" INT { "," INT } "}"
//! ```
//!
//! Whitespace is insignificant. A spreading takes the width of the enclosing
//! sum, or the largest support column at top level. The whole input may also be
//! `preset:NAME(p, …; q, …)`, which expands through [`crate::preset`].

use crate::error::{CfmError, Result};
use crate::expr::{CanonicalForm, CfExpr, ColumnSet};
use crate::preset::Preset;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(usize),
    Sym(&'static str),
    End,
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer { src, pos: 0 }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.src[self.pos..].chars().next() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    /// Next token and the byte offset where it starts.
    fn next(&mut self) -> Result<(usize, Tok)> {
        self.skip_ws();
        let start = self.pos;
        let rest = &self.src[self.pos..];
        let Some(c) = rest.chars().next() else {
            return Ok((start, Tok::End));
        };
        if rest.starts_with("..") {
            self.pos += 2;
            return Ok((start, Tok::Sym("..")));
        }
        for sym in ["(", ")", ",", ";", "=", "{", "}", ":"] {
            if rest.starts_with(sym) {
                self.pos += 1;
                return Ok((start, Tok::Sym(sym)));
            }
        }
        if c.is_ascii_digit() {
            let len = rest.bytes().take_while(u8::is_ascii_digit).count();
            self.pos += len;
            let value = rest[..len].parse::<usize>().map_err(|_| CfmError::Syntax {
                pos: start,
                msg: format!("integer {} is too large", &rest[..len]),
            })?;
            return Ok((start, Tok::Int(value)));
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let len = rest
                .bytes()
                .take_while(|b| b.is_ascii_alphanumeric() || *b == b'_')
                .count();
            self.pos += len;
            return Ok((start, Tok::Ident(rest[..len].to_ascii_lowercase())));
        }
        Err(CfmError::Syntax { pos: start, msg: format!("unexpected character {c:?}") })
    }
}

struct Parser<'a> {
    lexer: Lexer<'a>,
    peeked: Option<(usize, Tok)>,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser { lexer: Lexer::new(src), peeked: None }
    }

    fn peek(&mut self) -> Result<&(usize, Tok)> {
        if self.peeked.is_none() {
            self.peeked = Some(self.lexer.next()?);
        }
        Ok(self.peeked.as_ref().expect("just filled"))
    }

    fn bump(&mut self) -> Result<(usize, Tok)> {
        match self.peeked.take() {
            Some(t) => Ok(t),
            None => self.lexer.next(),
        }
    }

    fn error<T>(pos: usize, msg: impl Into<String>) -> Result<T> {
        Err(CfmError::Syntax { pos, msg: msg.into() })
    }

    fn expect_sym(&mut self, sym: &'static str) -> Result<usize> {
        match self.bump()? {
            (pos, Tok::Sym(s)) if s == sym => Ok(pos),
            (pos, other) => Self::error(pos, format!("expected {sym:?}, found {}", describe(&other))),
        }
    }

    fn expect_ident(&mut self, word: &str) -> Result<()> {
        match self.bump()? {
            (_, Tok::Ident(w)) if w == word => Ok(()),
            (pos, other) => Self::error(pos, format!("expected {word:?}, found {}", describe(&other))),
        }
    }

    fn int(&mut self) -> Result<usize> {
        match self.bump()? {
            (_, Tok::Int(v)) => Ok(v),
            (pos, other) => Self::error(pos, format!("expected an integer, found {}", describe(&other))),
        }
    }

    fn eat_sym(&mut self, sym: &'static str) -> Result<bool> {
        if matches!(self.peek()?, (_, Tok::Sym(s)) if *s == sym) {
            self.bump()?;
            return Ok(true);
        }
        Ok(false)
    }

    fn int_list(&mut self) -> Result<Vec<usize>> {
        let mut out = vec![self.int()?];
        while matches!(self.peek()?, (_, Tok::Sym(","))) {
            self.bump()?;
            out.push(self.int()?);
        }
        Ok(out)
    }

    fn colset(&mut self) -> Result<ColumnSet> {
        let pos = self.peek()?.0;
        let set = if self.eat_sym("{")? {
            let cols = self.int_list()?;
            self.expect_sym("}")?;
            ColumnSet::new(cols)
        } else {
            let lo = self.int()?;
            self.expect_sym("..")?;
            let hi = self.int()?;
            if lo == 0 || hi < lo {
                return Self::error(pos, format!("invalid column range {lo}..{hi}"));
            }
            Ok(ColumnSet::range(lo, hi))
        };
        set.map_err(|e| CfmError::Syntax { pos, msg: e.to_string() })
    }

    fn expr(&mut self, ambient: Option<usize>) -> Result<CfExpr> {
        let (pos, tok) = self.bump()?;
        let Tok::Ident(name) = tok else {
            return Self::error(pos, format!("expected an expression, found {}", describe(&tok)));
        };
        self.expect_sym("(")?;
        let expr = match name.as_str() {
            "basic" => {
                let n = self.int()?;
                CfExpr::basic(n)?
            }
            "spread" => {
                let base = self.expr(None)?;
                self.expect_sym(",")?;
                self.expect_ident("cols")?;
                self.expect_sym("=")?;
                let support = self.colset()?;
                let width = ambient.unwrap_or_else(|| support.last().unwrap_or(0));
                CfExpr::spread(base, support, width)?
            }
            "sum" => {
                self.expect_ident("m")?;
                self.expect_sym("=")?;
                let m = self.int()?;
                self.expect_sym(";")?;
                let mut blocks = vec![self.expr(Some(m))?];
                while self.eat_sym(",")? {
                    blocks.push(self.expr(Some(m))?);
                }
                CfExpr::sum(m, blocks)?
            }
            "grassmann" => {
                let n = self.int()?;
                self.expect_sym(",")?;
                let m = self.int()?;
                if n > m {
                    return Self::error(pos, format!("grassmann({n},{m}) needs n <= m"));
                }
                CfExpr::grassmann(n, m)?
            }
            "flag" => {
                let sizes = self.int_list()?;
                self.expect_sym(";")?;
                let m = self.int()?;
                CfExpr::flag(&sizes, m)?
            }
            other => return Self::error(pos, format!("unknown form {other:?}")),
        };
        self.expect_sym(")")?;
        Ok(expr)
    }

    fn preset(&mut self) -> Result<CanonicalForm> {
        let (pos, tok) = self.bump()?;
        let Tok::Ident(name) = tok else {
            return Self::error(pos, "expected a preset name");
        };
        self.expect_sym("(")?;
        let mut groups = vec![self.int_list()?];
        while self.eat_sym(";")? {
            groups.push(self.int_list()?);
        }
        self.expect_sym(")")?;
        Preset::from_groups(&name, &groups)?.build()
    }

    fn finish(&mut self) -> Result<()> {
        match self.bump()? {
            (_, Tok::End) => Ok(()),
            (pos, other) => Self::error(pos, format!("trailing input starting with {}", describe(&other))),
        }
    }
}

fn describe(tok: &Tok) -> String {
    match tok {
        Tok::Ident(s) => format!("{s:?}"),
        Tok::Int(v) => v.to_string(),
        Tok::Sym(s) => format!("{s:?}"),
        Tok::End => "end of input".into(),
    }
}

/// Parses a DSL expression or a `preset:` invocation.
pub fn parse(text: &str) -> Result<CanonicalForm> {
    let mut p = Parser::new(text);
    let is_preset = matches!(p.peek()?, (_, Tok::Ident(w)) if w == "preset");
    let form = if is_preset {
        p.bump()?;
        p.expect_sym(":")?;
        p.preset()?
    } else {
        CanonicalForm::new(p.expr(None)?)
    };
    p.finish()?;
    Ok(form)
}

/// Like [`parse`] but discards any preset marker.
pub fn parse_expr(text: &str) -> Result<CfExpr> {
    parse(text).map(|f| f.expr)
}
