//! Expression syntax shared by polynomials, rational functions and forms:
//! integers, identifiers, `+ - * /`, parentheses and `^`. A `^` followed by an
//! integer is a power; otherwise it is a wedge product.

use num_bigint::BigInt;

use super::polynomial::Poly;
use super::ratfun::RationalFunction;
use super::vars::VarTable;
use super::Q;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(BigInt),
    Ident { name: String, col: usize },
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
    Wedge(Box<Expr>, Box<Expr>),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Op(char),
}

fn err(col: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line: 1, col, msg: msg.into() }
}

fn lex(s: &str) -> Result<Vec<(Tok, usize)>> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let st = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let txt: String = chars[st..i].iter().collect();
            out.push((Tok::Num(txt.parse().unwrap()), col));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let st = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_' || chars[i] == '\'') {
                i += 1;
            }
            out.push((Tok::Ident(chars[st..i].iter().collect()), col));
        } else if "+-*/^()".contains(c) {
            out.push((Tok::Op(c), col));
            i += 1;
        } else {
            return Err(err(col, format!("unexpected character `{c}`")));
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map(|t| t.1).unwrap_or(self.end)
    }

    fn sum(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        while let Some(Tok::Op(c @ ('+' | '-'))) = self.peek().cloned() {
            self.pos += 1;
            let rhs = self.unary()?;
            lhs = if c == '+' { Expr::Add(lhs.into(), rhs.into()) } else { Expr::Sub(lhs.into(), rhs.into()) };
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr> {
        match self.peek() {
            Some(Tok::Op('-')) => {
                self.pos += 1;
                Ok(Expr::Neg(self.unary()?.into()))
            }
            Some(Tok::Op('+')) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.product(),
        }
    }

    fn product(&mut self) -> Result<Expr> {
        let mut lhs = self.power()?;
        while let Some(Tok::Op(c @ ('*' | '/' | '^'))) = self.peek().cloned() {
            self.pos += 1;
            let rhs = if matches!(self.peek(), Some(Tok::Op('-'))) {
                self.pos += 1;
                Expr::Neg(self.power()?.into())
            } else {
                self.power()?
            };
            lhs = match c {
                '*' => Expr::Mul(lhs.into(), rhs.into()),
                '/' => Expr::Div(lhs.into(), rhs.into()),
                _ => Expr::Wedge(lhs.into(), rhs.into()),
            };
        }
        Ok(lhs)
    }

    fn power(&mut self) -> Result<Expr> {
        let mut base = self.primary()?;
        while let (Some(Tok::Op('^')), Some(Tok::Num(n))) =
            (self.toks.get(self.pos).map(|t| &t.0), self.toks.get(self.pos + 1).map(|t| &t.0))
        {
            let col = self.toks[self.pos + 1].1;
            let e: u32 = n.try_into().map_err(|_| err(col, "exponent too large"))?;
            self.pos += 2;
            base = Expr::Pow(base.into(), e);
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Expr> {
        let col = self.col();
        match self.toks.get(self.pos).cloned() {
            Some((Tok::Num(n), _)) => {
                self.pos += 1;
                Ok(Expr::Num(n))
            }
            Some((Tok::Ident(name), c)) => {
                self.pos += 1;
                Ok(Expr::Ident { name, col: c })
            }
            Some((Tok::Op('('), _)) => {
                self.pos += 1;
                let e = self.sum()?;
                match self.peek() {
                    Some(Tok::Op(')')) => {
                        self.pos += 1;
                        Ok(e)
                    }
                    _ => Err(err(self.col(), "expected `)`")),
                }
            }
            Some((t, _)) => Err(err(col, format!("unexpected `{}`", show(&t)))),
            None => Err(err(col, "unexpected end of expression")),
        }
    }
}

fn show(t: &Tok) -> String {
    match t {
        Tok::Num(n) => n.to_string(),
        Tok::Ident(s) => s.clone(),
        Tok::Op(c) => c.to_string(),
    }
}

/// Parses an expression; error columns are 1-based within `s`.
pub fn parse_expr(s: &str) -> Result<Expr> {
    let toks = lex(s)?;
    if toks.is_empty() {
        return Err(err(1, "empty expression"));
    }
    let mut p = Parser { toks, pos: 0, end: s.chars().count() + 1 };
    let e = p.sum()?;
    if p.pos < p.toks.len() {
        return Err(err(p.col(), format!("unexpected `{}`", show(&p.toks[p.pos].0))));
    }
    Ok(e)
}

/// Evaluates an expression tree into a rational function.
pub fn eval_ratfun(e: &Expr, vars: &VarTable) -> Result<RationalFunction> {
    Ok(match e {
        Expr::Num(n) => RationalFunction::constant(Q::from_integer(n.clone())),
        Expr::Ident { name, col } => match vars.get(name) {
            Some(v) => RationalFunction::from_poly(Poly::var(v)),
            None => return Err(err(*col, format!("unknown variable `{name}`"))),
        },
        Expr::Neg(a) => -&eval_ratfun(a, vars)?,
        Expr::Add(a, b) => &eval_ratfun(a, vars)? + &eval_ratfun(b, vars)?,
        Expr::Sub(a, b) => &eval_ratfun(a, vars)? - &eval_ratfun(b, vars)?,
        Expr::Mul(a, b) => &eval_ratfun(a, vars)? * &eval_ratfun(b, vars)?,
        Expr::Div(a, b) => {
            let d = eval_ratfun(b, vars)?;
            if d.is_zero() {
                return Err(err(1, "division by zero"));
            }
            &eval_ratfun(a, vars)? / &d
        }
        Expr::Pow(a, k) => eval_ratfun(a, vars)?.pow(*k),
        Expr::Wedge(..) => return Err(err(1, "wedge product outside a form")),
    })
}

pub fn parse_ratfun(s: &str, vars: &VarTable) -> Result<RationalFunction> {
    eval_ratfun(&parse_expr(s)?, vars)
}

/// Parses a polynomial; constant denominators are allowed.
pub fn parse_poly(s: &str, vars: &VarTable) -> Result<Poly> {
    let r = parse_ratfun(s, vars)?;
    match r.as_poly() {
        Some(p) => Ok(p.clone()),
        None => Err(err(1, "expected a polynomial")),
    }
}
