//! A small language for equivariant classes.
//!
//! ```text
//! expr     := ['-'] term (('+' | '-') term)*
//! term     := rational ['*' factor ('*' factor)*] | factor ('*' factor)*
//! factor   := gen ['^' uint] | '(' expr ')' | 'weyl(' expr ')'
//! gen      := 'L' | 'v' uint | 'line(' int (',' int)* ')'
//! rational := uint ['/' uint]
//! ```
//!
//! `weyl(...)` may only appear once, as the whole expression.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;
use wallcross::{
    class_generator, format_rational, weyl_correct, EquivariantClass, Generator as CoreGenerator, Rational,
    TorusModel, Weight,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at line {line}, column {column}: {message}")]
pub struct SyntaxError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Generator {
    Prequantum,
    V(usize),
    Line(Vec<i64>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Factor {
    Gen { gen: Generator, exponent: u32 },
    Group(ClassExpr),
    Weyl(ClassExpr),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Term {
    pub negative: bool,
    /// Nonnegative; `None` means an implicit 1.
    pub coefficient: Option<Rational>,
    pub factors: Vec<Factor>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassExpr {
    pub terms: Vec<Term>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(BigInt),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Int(n) => write!(f, "`{n}`"),
            Tok::Plus => f.write_str("`+`"),
            Tok::Minus => f.write_str("`-`"),
            Tok::Star => f.write_str("`*`"),
            Tok::Slash => f.write_str("`/`"),
            Tok::Caret => f.write_str("`^`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::End => f.write_str("end of input"),
        }
    }
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>, SyntaxError> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut line, mut column) = (1, 1);
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, column);
        if c == '\n' {
            line += 1;
            column = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            column += 1;
            i += 1;
            continue;
        }
        let tok = if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[start..i].iter().collect();
            column += i - start;
            out.push(Spanned {
                tok: Tok::Int(digits.parse().expect("ascii digits")),
                line: l0,
                column: c0,
            });
            continue;
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_alphanumeric() {
                i += 1;
            }
            column += i - start;
            out.push(Spanned {
                tok: Tok::Ident(chars[start..i].iter().collect()),
                line: l0,
                column: c0,
            });
            continue;
        } else {
            match c {
                '+' => Tok::Plus,
                '-' => Tok::Minus,
                '*' => Tok::Star,
                '/' => Tok::Slash,
                '^' => Tok::Caret,
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                ',' => Tok::Comma,
                other => {
                    return Err(SyntaxError {
                        line,
                        column,
                        message: format!("unexpected character `{other}`"),
                    })
                }
            }
        };
        out.push(Spanned {
            tok,
            line: l0,
            column: c0,
        });
        i += 1;
        column += 1;
    }
    out.push(Spanned {
        tok: Tok::End,
        line,
        column,
    });
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    /// Nesting depth of parentheses and `weyl(...)`.
    depth: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        let i = (self.pos + k).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    fn bump(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error_here(&self, message: impl Into<String>) -> SyntaxError {
        let t = &self.toks[self.pos];
        SyntaxError {
            line: t.line,
            column: t.column,
            message: message.into(),
        }
    }

    fn expect(&mut self, tok: Tok) -> Result<(), SyntaxError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.error_here(format!("expected {tok}, found {}", self.peek())))
        }
    }

    fn expr(&mut self) -> Result<ClassExpr, SyntaxError> {
        let mut terms = Vec::new();
        let mut negative = false;
        if *self.peek() == Tok::Minus {
            self.bump();
            negative = true;
        }
        loop {
            let mut term = self.term()?;
            term.negative = negative;
            terms.push(term);
            match self.peek() {
                Tok::Plus => negative = false,
                Tok::Minus => negative = true,
                _ => break,
            }
            self.bump();
        }
        Ok(ClassExpr { terms })
    }

    fn term(&mut self) -> Result<Term, SyntaxError> {
        let mut coefficient = None;
        if let Tok::Int(_) = self.peek() {
            coefficient = Some(self.rational()?);
            if *self.peek() != Tok::Star {
                return Ok(Term {
                    negative: false,
                    coefficient,
                    factors: Vec::new(),
                });
            }
            self.bump();
        }
        let mut factors = vec![self.factor()?];
        while *self.peek() == Tok::Star {
            self.bump();
            factors.push(self.factor()?);
        }
        Ok(Term {
            negative: false,
            coefficient,
            factors,
        })
    }

    fn rational(&mut self) -> Result<Rational, SyntaxError> {
        let num = match self.bump().tok {
            Tok::Int(n) => n,
            _ => unreachable!("caller checked for an integer"),
        };
        if *self.peek() != Tok::Slash {
            return Ok(Rational::from_integer(num));
        }
        self.bump();
        match self.peek().clone() {
            Tok::Int(d) if !d.is_zero() => {
                self.bump();
                Ok(Rational::new(num, d))
            }
            Tok::Int(_) => Err(self.error_here("zero denominator")),
            other => Err(self.error_here(format!("expected a denominator, found {other}"))),
        }
    }

    fn exponent(&mut self) -> Result<u32, SyntaxError> {
        if *self.peek() != Tok::Caret {
            return Ok(1);
        }
        self.bump();
        match self.peek().clone() {
            Tok::Int(n) => {
                let e = u32::try_from(n).map_err(|_| self.error_here("exponent too large"))?;
                self.bump();
                Ok(e)
            }
            Tok::Minus => Err(self.error_here("exponents must be nonnegative integers")),
            other => Err(self.error_here(format!("expected an exponent, found {other}"))),
        }
    }

    fn factor(&mut self) -> Result<Factor, SyntaxError> {
        match self.peek().clone() {
            Tok::LParen => {
                self.bump();
                self.depth += 1;
                let inner = self.expr()?;
                self.depth -= 1;
                self.expect(Tok::RParen)?;
                if *self.peek() == Tok::Caret {
                    return Err(self.error_here("powers of parenthesised sums are not supported"));
                }
                Ok(Factor::Group(inner))
            }
            Tok::Ident(name) => self.named_factor(&name),
            other => Err(self.error_here(format!("expected a generator, found {other}"))),
        }
    }

    fn named_factor(&mut self, name: &str) -> Result<Factor, SyntaxError> {
        let at = self.error_here("");
        match name {
            "L" => {
                self.bump();
                let exponent = self.exponent()?;
                Ok(Factor::Gen {
                    gen: Generator::Prequantum,
                    exponent,
                })
            }
            "weyl" if *self.peek_at(1) == Tok::LParen => {
                self.bump();
                self.bump();
                self.depth += 1;
                let inner = self.expr()?;
                self.depth -= 1;
                self.expect(Tok::RParen)?;
                Ok(Factor::Weyl(inner))
            }
            "line" if *self.peek_at(1) == Tok::LParen => {
                self.bump();
                self.bump();
                let mut comps = vec![self.signed_int()?];
                while *self.peek() == Tok::Comma {
                    self.bump();
                    comps.push(self.signed_int()?);
                }
                self.expect(Tok::RParen)?;
                let exponent = self.exponent()?;
                Ok(Factor::Gen {
                    gen: Generator::Line(comps),
                    exponent,
                })
            }
            _ => {
                let index = name
                    .strip_prefix('v')
                    .filter(|d| !d.is_empty() && d.bytes().all(|b| b.is_ascii_digit()))
                    .and_then(|d| d.parse::<usize>().ok());
                match index {
                    Some(i) => {
                        self.bump();
                        let exponent = self.exponent()?;
                        Ok(Factor::Gen {
                            gen: Generator::V(i),
                            exponent,
                        })
                    }
                    None => Err(SyntaxError {
                        message: format!("unknown generator `{name}`"),
                        ..at
                    }),
                }
            }
        }
    }

    fn signed_int(&mut self) -> Result<i64, SyntaxError> {
        let negative = if *self.peek() == Tok::Minus {
            self.bump();
            true
        } else {
            false
        };
        match self.peek().clone() {
            Tok::Int(n) => {
                let n = if negative { -n } else { n };
                let v = i64::try_from(n).map_err(|_| self.error_here("weight component too large"))?;
                self.bump();
                Ok(v)
            }
            other => Err(self.error_here(format!("expected an integer, found {other}"))),
        }
    }
}

fn check_weyl(expr: &ClassExpr, outermost: bool) -> Result<(), String> {
    for term in &expr.terms {
        for f in &term.factors {
            match f {
                Factor::Weyl(inner) => {
                    let alone = outermost
                        && expr.terms.len() == 1
                        && term.factors.len() == 1
                        && term.coefficient.is_none()
                        && !term.negative;
                    if !alone {
                        return Err("weyl(...) must be the whole expression".into());
                    }
                    check_weyl(inner, false)?;
                }
                Factor::Group(inner) => check_weyl(inner, false)?,
                Factor::Gen { .. } => {}
            }
        }
    }
    Ok(())
}

/// Parses a class expression, reporting the line and column of the first
/// error.
pub fn parse_class_expr(text: &str) -> Result<ClassExpr, SyntaxError> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        depth: 0,
    };
    if *p.peek() == Tok::End {
        return Err(p.error_here("empty expression"));
    }
    let expr = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(p.error_here(format!("unexpected {}", p.peek())));
    }
    debug_assert_eq!(p.depth, 0);
    if let Err(message) = check_weyl(&expr, true) {
        let weyl_at = p
            .toks
            .iter()
            .enumerate()
            .filter(|(_, t)| t.tok == Tok::Ident("weyl".into()))
            .map(|(_, t)| (t.line, t.column))
            .nth(if expr.terms.len() == 1 && matches!(expr.terms[0].factors.as_slice(), [Factor::Weyl(_)]) { 1 } else { 0 })
            .unwrap_or((1, 1));
        return Err(SyntaxError {
            line: weyl_at.0,
            column: weyl_at.1,
            message,
        });
    }
    Ok(expr)
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::Prequantum => f.write_str("L"),
            Generator::V(i) => write!(f, "v{i}"),
            Generator::Line(c) => {
                let parts: Vec<String> = c.iter().map(|x| x.to_string()).collect();
                write!(f, "line({})", parts.join(","))
            }
        }
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Factor::Gen { gen, exponent: 1 } => write!(f, "{gen}"),
            Factor::Gen { gen, exponent } => write!(f, "{gen}^{exponent}"),
            Factor::Group(e) => write!(f, "({e})"),
            Factor::Weyl(e) => write!(f, "weyl({e})"),
        }
    }
}

impl fmt::Display for ClassExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.terms.iter().enumerate() {
            match (i, t.negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let factors: Vec<String> = t.factors.iter().map(|x| x.to_string()).collect();
            match &t.coefficient {
                Some(c) if factors.is_empty() => f.write_str(&format_rational(c))?,
                Some(c) => write!(f, "{}*{}", format_rational(c), factors.join("*"))?,
                None => f.write_str(&factors.join("*"))?,
            }
        }
        Ok(())
    }
}

impl ClassExpr {
    /// Evaluates on `model`.
    pub fn evaluate(&self, model: &TorusModel) -> wallcross::Result<EquivariantClass> {
        let mut total = EquivariantClass::constant(model, Rational::zero());
        for t in &self.terms {
            let mut c = t.coefficient.clone().unwrap_or_else(Rational::one);
            if t.negative {
                c = -c;
            }
            let mut value = EquivariantClass::constant(model, c);
            for f in &t.factors {
                let x = match f {
                    Factor::Gen { gen, exponent } => {
                        let g = match gen {
                            Generator::Prequantum => CoreGenerator::Prequantum,
                            Generator::V(i) => CoreGenerator::V(*i),
                            Generator::Line(c) => CoreGenerator::Line(Weight(c.clone())),
                        };
                        class_generator(model, &g)?.pow(*exponent)
                    }
                    Factor::Group(e) => e.evaluate(model)?,
                    Factor::Weyl(e) => weyl_correct(model, &e.evaluate(model)?)?,
                };
                value = value.mul(&x);
            }
            total = total.add(&value);
        }
        Ok(total)
    }

    /// Whether the expression is wrapped in `weyl(...)`.
    pub fn is_weyl(&self) -> bool {
        matches!(self.terms.as_slice(), [t] if matches!(t.factors.as_slice(), [Factor::Weyl(_)]))
    }
}
