//! Recursive-descent parser for the signal grammar:
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := number | name | 't' | '-' factor | func '(' args ')' | '(' expr ')'
//! ```
//!
//! Functions: `sin(e)`, `cos(e)`, `square(e; P, amp)`, `triangle(e; P, amp)`
//! and `piecewise(t; s0: e0, s1: e1, ...)`.

use std::collections::HashMap;

use super::expr::{Expr, WaveShape};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Sym(char),
    End,
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn tokens(src: &'a str) -> Result<Vec<(usize, Tok)>> {
        let mut lx = Lexer { src, pos: 0 };
        let mut out = Vec::new();
        loop {
            let (pos, tok) = lx.next_token()?;
            let end = tok == Tok::End;
            out.push((pos, tok));
            if end {
                return Ok(out);
            }
        }
    }

    fn next_token(&mut self) -> Result<(usize, Tok)> {
        let bytes = self.src.as_bytes();
        while self.pos < bytes.len() && bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        let start = self.pos;
        let Some(&c) = bytes.get(self.pos) else {
            return Ok((start, Tok::End));
        };
        if c.is_ascii_digit() || c == b'.' {
            let mut end = start;
            while end < bytes.len() && (bytes[end].is_ascii_digit() || bytes[end] == b'.') {
                end += 1;
            }
            if end < bytes.len() && (bytes[end] == b'e' || bytes[end] == b'E') {
                let mut exp = end + 1;
                if exp < bytes.len() && (bytes[exp] == b'+' || bytes[exp] == b'-') {
                    exp += 1;
                }
                if exp < bytes.len() && bytes[exp].is_ascii_digit() {
                    while exp < bytes.len() && bytes[exp].is_ascii_digit() {
                        exp += 1;
                    }
                    end = exp;
                }
            }
            let text = &self.src[start..end];
            let value = text
                .parse::<f64>()
                .map_err(|_| Error::syntax(start, format!("malformed number `{text}`")))?;
            self.pos = end;
            return Ok((start, Tok::Num(value)));
        }
        if c.is_ascii_alphabetic() || c == b'_' {
            let mut end = start;
            while end < bytes.len() && (bytes[end].is_ascii_alphanumeric() || bytes[end] == b'_') {
                end += 1;
            }
            self.pos = end;
            return Ok((start, Tok::Ident(self.src[start..end].to_string())));
        }
        if b"+-*/(),;:".contains(&c) {
            self.pos += 1;
            return Ok((start, Tok::Sym(c as char)));
        }
        Err(Error::syntax(start, format!("unexpected character `{}`", c as char)))
    }
}

pub(crate) struct Parser<'b> {
    toks: Vec<(usize, Tok)>,
    idx: usize,
    bindings: &'b HashMap<String, f64>,
    period: f64,
}

pub(crate) fn parse_expr(src: &str, period: f64, bindings: &HashMap<String, f64>) -> Result<Expr> {
    let mut p = Parser {
        toks: Lexer::tokens(src)?,
        idx: 0,
        bindings,
        period,
    };
    let e = p.expr()?;
    match p.peek() {
        Tok::End => Ok(e),
        other => Err(Error::syntax(p.pos(), format!("unexpected trailing {}", describe(other)))),
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Num(x) => format!("number {x}"),
        Tok::Ident(s) => format!("name `{s}`"),
        Tok::Sym(c) => format!("`{c}`"),
        Tok::End => "end of input".into(),
    }
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.idx].1
    }

    fn pos(&self) -> usize {
        self.toks[self.idx].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.idx].1.clone();
        if t != Tok::End {
            self.idx += 1;
        }
        t
    }

    fn eat(&mut self, c: char) -> bool {
        if *self.peek() == Tok::Sym(c) {
            self.idx += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(Error::syntax(
                self.pos(),
                format!("expected `{c}`, found {}", describe(self.peek())),
            ))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.factor()?;
        loop {
            if self.eat('*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.factor()?));
            } else if self.eat('/') {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.factor()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn factor(&mut self) -> Result<Expr> {
        let pos = self.pos();
        match self.bump() {
            Tok::Num(x) => Ok(Expr::Const(x)),
            Tok::Sym('-') => Ok(Expr::Neg(Box::new(self.factor()?))),
            Tok::Sym('(') => {
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Tok::Ident(name) => {
                if *self.peek() == Tok::Sym('(') {
                    self.idx += 1;
                    let e = self.call(&name, pos)?;
                    self.expect(')')?;
                    Ok(e)
                } else if name == "t" {
                    Ok(Expr::Time)
                } else if let Some(v) = self.bindings.get(&name) {
                    Ok(Expr::Const(*v))
                } else if name == "pi" {
                    Ok(Expr::Const(std::f64::consts::PI))
                } else if name == "T" {
                    Ok(Expr::Const(self.period))
                } else {
                    Err(Error::UnboundName(name))
                }
            }
            other => Err(Error::syntax(pos, format!("expected a factor, found {}", describe(&other)))),
        }
    }

    fn constant(&mut self) -> Result<f64> {
        let pos = self.pos();
        let e = self.expr()?;
        if e.depends_on_time() {
            return Err(Error::syntax(pos, "argument must not depend on t"));
        }
        Ok(e.eval(0.0, 0.0, self.period))
    }

    fn call(&mut self, name: &str, pos: usize) -> Result<Expr> {
        match name {
            "sin" => Ok(Expr::Sin(Box::new(self.expr()?))),
            "cos" => Ok(Expr::Cos(Box::new(self.expr()?))),
            "square" | "triangle" => {
                let arg_pos = self.pos();
                let arg = self.expr()?;
                let (slope, offset) = arg
                    .affine()
                    .ok_or_else(|| Error::syntax(arg_pos, "wave argument must be affine in t"))?;
                if slope <= 0.0 {
                    return Err(Error::syntax(arg_pos, "wave argument must increase with t"));
                }
                self.expect(';')?;
                let p_pos = self.pos();
                let period = self.constant()?;
                if !(period > 0.0) {
                    return Err(Error::syntax(p_pos, "wave period must be positive"));
                }
                self.expect(',')?;
                let amplitude = self.constant()?;
                let shape = if name == "square" {
                    WaveShape::Square
                } else {
                    WaveShape::Triangle
                };
                Ok(Expr::Wave {
                    shape,
                    slope,
                    offset,
                    period,
                    amplitude,
                })
            }
            "piecewise" => {
                let arg_pos = self.pos();
                if self.bump() != Tok::Ident("t".into()) {
                    return Err(Error::syntax(arg_pos, "piecewise must be indexed by `t`"));
                }
                self.expect(';')?;
                let mut starts = Vec::new();
                let mut pieces = Vec::new();
                loop {
                    let s_pos = self.pos();
                    let s = self.constant()?;
                    if !(0.0..self.period).contains(&s) || starts.last().is_some_and(|&l| s <= l) {
                        return Err(Error::syntax(
                            s_pos,
                            "piece starts must be increasing and lie in [0, T)",
                        ));
                    }
                    if starts.is_empty() && s != 0.0 {
                        return Err(Error::syntax(s_pos, "first piece must start at 0"));
                    }
                    self.expect(':')?;
                    starts.push(s);
                    pieces.push(self.expr()?);
                    if !self.eat(',') {
                        break;
                    }
                }
                Ok(Expr::Piecewise { starts, pieces })
            }
            _ => Err(Error::syntax(pos, format!("unknown function `{name}`"))),
        }
    }
}
