//! The symbol-expression DSL.
//!
//! Grammar: complex literals (decimal numbers and the imaginary unit `i`),
//! variables `x1..x9` (grid point), `j1..j9` (frequency components) and
//! bare `j` (the euclidean norm `|j|`), operators `+ - * / ^`, functions
//! `exp`, `sin`, `cos`, `abs`, and parentheses. `^` binds tightest and is
//! right-associative.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use num_complex::Complex64;

use crate::error::{CoreError, CoreResult};

/// Source position, 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Span {
    pub line: usize,
    pub col: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Var {
    /// `x_i`, 0-based coordinate.
    X(usize),
    /// `j_i`, 0-based coordinate.
    J(usize),
    /// Euclidean norm `|j|`.
    JNorm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Exp,
    Sin,
    Cos,
    Abs,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64, Span),
    ImaginaryUnit(Span),
    Var(Var, Span),
    Neg(Box<Expr>, Span),
    Bin(BinOp, Box<Expr>, Box<Expr>, Span),
    Call(Func, Box<Expr>, Span),
}

impl Expr {
    pub fn span(&self) -> Span {
        match self {
            Expr::Num(_, s)
            | Expr::ImaginaryUnit(s)
            | Expr::Var(_, s)
            | Expr::Neg(_, s)
            | Expr::Bin(_, _, _, s)
            | Expr::Call(_, _, s) => *s,
        }
    }

    /// Largest coordinate (1-based) referenced by any `x_i` or `j_i`.
    pub fn max_coordinate(&self) -> usize {
        match self {
            Expr::Num(..) | Expr::ImaginaryUnit(..) => 0,
            Expr::Var(Var::X(i), _) | Expr::Var(Var::J(i), _) => i + 1,
            Expr::Var(Var::JNorm, _) => 0,
            Expr::Neg(e, _) | Expr::Call(_, e, _) => e.max_coordinate(),
            Expr::Bin(_, l, r, _) => l.max_coordinate().max(r.max_coordinate()),
        }
    }

    /// Evaluate at grid point `x` for frequency `j`.
    pub fn eval(&self, x: &[f64], j: &[i64]) -> CoreResult<Complex64> {
        match self {
            Expr::Num(v, _) => Ok(Complex64::new(*v, 0.0)),
            Expr::ImaginaryUnit(_) => Ok(Complex64::new(0.0, 1.0)),
            Expr::Var(v, s) => match v {
                Var::X(i) => x.get(*i).map(|&v| Complex64::new(v, 0.0)).ok_or_else(|| {
                    eval_err(*s, format!("x{} out of range for dimension {}", i + 1, x.len()))
                }),
                Var::J(i) => j
                    .get(*i)
                    .map(|&v| Complex64::new(v as f64, 0.0))
                    .ok_or_else(|| {
                        eval_err(*s, format!("j{} out of range for dimension {}", i + 1, j.len()))
                    }),
                Var::JNorm => {
                    let n2: f64 = j.iter().map(|&c| (c * c) as f64).sum();
                    Ok(Complex64::new(libm::sqrt(n2), 0.0))
                }
            },
            Expr::Neg(e, _) => Ok(-e.eval(x, j)?),
            Expr::Bin(op, l, r, s) => {
                let a = l.eval(x, j)?;
                let b = r.eval(x, j)?;
                match op {
                    BinOp::Add => Ok(a + b),
                    BinOp::Sub => Ok(a - b),
                    BinOp::Mul => Ok(a * b),
                    BinOp::Div => {
                        if b.norm() == 0.0 {
                            return Err(eval_err(*s, "division by zero".to_string()));
                        }
                        Ok(a / b)
                    }
                    BinOp::Pow => {
                        // integer exponents use exact repeated multiplication
                        if b.im == 0.0 && b.re == libm::trunc(b.re) && libm::fabs(b.re) <= 64.0 {
                            let e = b.re as i32;
                            if e >= 0 {
                                Ok(a.powu(e as u32))
                            } else if a.norm() == 0.0 {
                                Err(eval_err(*s, "zero to a negative power".to_string()))
                            } else {
                                Ok(a.powi(e))
                            }
                        } else {
                            if a.norm() == 0.0 {
                                return Err(eval_err(
                                    *s,
                                    "zero base with non-integer exponent".to_string(),
                                ));
                            }
                            Ok(a.powc(b))
                        }
                    }
                }
            }
            Expr::Call(f, e, _) => {
                let v = e.eval(x, j)?;
                Ok(match f {
                    Func::Exp => v.exp(),
                    Func::Sin => v.sin(),
                    Func::Cos => v.cos(),
                    Func::Abs => Complex64::new(v.norm(), 0.0),
                })
            }
        }
    }
}

fn eval_err(span: Span, message: String) -> CoreError {
    CoreError::Parse { line: span.line, col: span.col, message }
}

/// A parsed symbol-family expression.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolSpec {
    source: String,
    ast: Expr,
}

impl SymbolSpec {
    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn ast(&self) -> &Expr {
        &self.ast
    }

    pub fn eval(&self, x: &[f64], j: &[i64]) -> CoreResult<Complex64> {
        self.ast.eval(x, j)
    }

    /// Validate coordinate references against an ambient dimension.
    pub fn check_dimension(&self, n: usize) -> CoreResult<()> {
        let m = self.ast.max_coordinate();
        if m > n {
            return Err(CoreError::InvalidArgument(format!(
                "expression references coordinate {m} but dimension is {n}"
            )));
        }
        Ok(())
    }
}

/// Parse a symbol-spec expression. Unknown identifiers and malformed
/// syntax are rejected with line/column positions.
pub fn parse_symbol_spec(text: &str) -> CoreResult<SymbolSpec> {
    let tokens = lex(text)?;
    let mut p = Parser { tokens, pos: 0 };
    let ast = p.parse_expr(0)?;
    if p.pos != p.tokens.len() {
        let t = &p.tokens[p.pos];
        return Err(CoreError::Parse {
            line: t.span.line,
            col: t.span.col,
            message: format!("unexpected token `{}`", t.text),
        });
    }
    Ok(SymbolSpec { source: text.to_string(), ast })
}

#[derive(Debug, Clone, PartialEq)]
enum TokKind {
    Num(f64),
    Ident,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

#[derive(Debug, Clone)]
struct Token {
    kind: TokKind,
    text: String,
    span: Span,
}

fn lex(text: &str) -> CoreResult<Vec<Token>> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0usize;
    let mut line = 1usize;
    let mut col = 1usize;
    while i < chars.len() {
        let c = chars[i];
        let span = Span { line, col };
        let advance = |i: &mut usize, col: &mut usize| {
            *i += 1;
            *col += 1;
        };
        match c {
            '\n' => {
                i += 1;
                line += 1;
                col = 1;
            }
            c if c.is_whitespace() => advance(&mut i, &mut col),
            '+' => {
                out.push(Token { kind: TokKind::Plus, text: "+".into(), span });
                advance(&mut i, &mut col);
            }
            '-' => {
                out.push(Token { kind: TokKind::Minus, text: "-".into(), span });
                advance(&mut i, &mut col);
            }
            '*' => {
                out.push(Token { kind: TokKind::Star, text: "*".into(), span });
                advance(&mut i, &mut col);
            }
            '/' => {
                out.push(Token { kind: TokKind::Slash, text: "/".into(), span });
                advance(&mut i, &mut col);
            }
            '^' => {
                out.push(Token { kind: TokKind::Caret, text: "^".into(), span });
                advance(&mut i, &mut col);
            }
            '(' => {
                out.push(Token { kind: TokKind::LParen, text: "(".into(), span });
                advance(&mut i, &mut col);
            }
            ')' => {
                out.push(Token { kind: TokKind::RParen, text: ")".into(), span });
                advance(&mut i, &mut col);
            }
            c if c.is_ascii_digit() || c == '.' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                    i += 1;
                    col += 1;
                }
                // exponent part
                if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                    let save = (i, col);
                    i += 1;
                    col += 1;
                    if i < chars.len() && (chars[i] == '+' || chars[i] == '-') {
                        i += 1;
                        col += 1;
                    }
                    if i < chars.len() && chars[i].is_ascii_digit() {
                        while i < chars.len() && chars[i].is_ascii_digit() {
                            i += 1;
                            col += 1;
                        }
                    } else {
                        (i, col) = save;
                    }
                }
                let text: String = chars[start..i].iter().collect();
                let value: f64 = text.parse().map_err(|_| CoreError::Parse {
                    line: span.line,
                    col: span.col,
                    message: format!("bad number literal `{text}`"),
                })?;
                out.push(Token { kind: TokKind::Num(value), text, span });
            }
            c if c.is_ascii_alphabetic() => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                    col += 1;
                }
                let text: String = chars[start..i].iter().collect();
                out.push(Token { kind: TokKind::Ident, text, span });
            }
            other => {
                return Err(CoreError::Parse {
                    line: span.line,
                    col: span.col,
                    message: format!("unexpected character `{other}`"),
                });
            }
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn bump(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn end_error(&self) -> CoreError {
        let span = self
            .tokens
            .last()
            .map(|t| t.span)
            .unwrap_or(Span { line: 1, col: 1 });
        CoreError::Parse {
            line: span.line,
            col: span.col,
            message: "unexpected end of input".to_string(),
        }
    }

    /// Precedence-climbing: 0 = additive, 1 = multiplicative, 2 = power.
    fn parse_expr(&mut self, min_prec: u8) -> CoreResult<Expr> {
        let mut lhs = self.parse_prefix()?;
        loop {
            let (op, prec, right_assoc) = match self.peek().map(|t| &t.kind) {
                Some(TokKind::Plus) => (BinOp::Add, 0u8, false),
                Some(TokKind::Minus) => (BinOp::Sub, 0, false),
                Some(TokKind::Star) => (BinOp::Mul, 1, false),
                Some(TokKind::Slash) => (BinOp::Div, 1, false),
                Some(TokKind::Caret) => (BinOp::Pow, 2, true),
                _ => break,
            };
            if prec < min_prec {
                break;
            }
            let span = self.bump().unwrap().span;
            let next_min = if right_assoc { prec } else { prec + 1 };
            let rhs = self.parse_expr(next_min)?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs), span);
        }
        Ok(lhs)
    }

    fn parse_prefix(&mut self) -> CoreResult<Expr> {
        let tok = self.bump().ok_or_else(|| self.end_error())?;
        match tok.kind {
            TokKind::Minus => {
                // unary minus binds tighter than * but looser than ^
                let inner = self.parse_expr(2)?;
                Ok(Expr::Neg(Box::new(inner), tok.span))
            }
            TokKind::Num(v) => Ok(Expr::Num(v, tok.span)),
            TokKind::LParen => {
                let inner = self.parse_expr(0)?;
                match self.bump() {
                    Some(t) if t.kind == TokKind::RParen => Ok(inner),
                    Some(t) => Err(CoreError::Parse {
                        line: t.span.line,
                        col: t.span.col,
                        message: format!("expected `)`, found `{}`", t.text),
                    }),
                    None => Err(self.end_error()),
                }
            }
            TokKind::Ident => self.parse_ident(tok),
            other => Err(CoreError::Parse {
                line: tok.span.line,
                col: tok.span.col,
                message: format!("unexpected token `{}` ({other:?})", tok.text),
            }),
        }
    }

    fn parse_ident(&mut self, tok: Token) -> CoreResult<Expr> {
        let name = tok.text.as_str();
        let func = match name {
            "exp" => Some(Func::Exp),
            "sin" => Some(Func::Sin),
            "cos" => Some(Func::Cos),
            "abs" => Some(Func::Abs),
            _ => None,
        };
        if let Some(f) = func {
            match self.bump() {
                Some(t) if t.kind == TokKind::LParen => {}
                Some(t) => {
                    return Err(CoreError::Parse {
                        line: t.span.line,
                        col: t.span.col,
                        message: format!("expected `(` after `{name}`"),
                    })
                }
                None => return Err(self.end_error()),
            }
            let arg = self.parse_expr(0)?;
            match self.bump() {
                Some(t) if t.kind == TokKind::RParen => {}
                Some(t) => {
                    return Err(CoreError::Parse {
                        line: t.span.line,
                        col: t.span.col,
                        message: format!("expected `)`, found `{}`", t.text),
                    })
                }
                None => return Err(self.end_error()),
            }
            return Ok(Expr::Call(f, Box::new(arg), tok.span));
        }
        if name == "i" {
            return Ok(Expr::ImaginaryUnit(tok.span));
        }
        if name == "j" {
            return Ok(Expr::Var(Var::JNorm, tok.span));
        }
        if let Some(rest) = name.strip_prefix('x') {
            if let Ok(idx) = rest.parse::<usize>() {
                if (1..=9).contains(&idx) {
                    return Ok(Expr::Var(Var::X(idx - 1), tok.span));
                }
            }
        }
        if let Some(rest) = name.strip_prefix('j') {
            if let Ok(idx) = rest.parse::<usize>() {
                if (1..=9).contains(&idx) {
                    return Ok(Expr::Var(Var::J(idx - 1), tok.span));
                }
            }
        }
        Err(CoreError::Parse {
            line: tok.span.line,
            col: tok.span.col,
            message: format!("unknown identifier `{name}`"),
        })
    }
}
