use std::collections::HashMap;
use std::fmt::Write;

use num_traits::{One, Signed};

use super::monomial::{Monomial, Var};
use super::polynomial::Poly;
use super::ratfun::RationalFunction;
use super::Q;
use crate::error::{Error, Result};

/// Names for variable ids. Ids are handed out in declaration order, which is
/// also the variable precedence used by every monomial order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VarTable {
    names: Vec<String>,
    index: HashMap<String, Var>,
}

impl VarTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_names<S: AsRef<str>>(names: &[S]) -> Result<Self> {
        let mut t = VarTable::new();
        for n in names {
            t.declare(n.as_ref())?;
        }
        Ok(t)
    }

    /// Declares a fresh variable; redeclaring a name is an error.
    pub fn declare(&mut self, name: &str) -> Result<Var> {
        if !is_identifier(name) {
            return Err(Error::Invalid(format!("invalid variable name `{name}`")));
        }
        if self.index.contains_key(name) {
            return Err(Error::Invalid(format!("variable `{name}` declared twice")));
        }
        let id = self.names.len() as Var;
        self.names.push(name.to_string());
        self.index.insert(name.to_string(), id);
        Ok(id)
    }

    /// Returns the id for `name`, declaring it if needed.
    pub fn intern(&mut self, name: &str) -> Var {
        match self.index.get(name) {
            Some(&v) => v,
            None => self.declare(name).expect("valid identifier"),
        }
    }

    /// Declares a variable with a name derived from `base` that is not yet taken.
    pub fn fresh(&mut self, base: &str) -> Var {
        let mut name = base.to_string();
        let mut k = 0;
        while self.index.contains_key(&name) {
            k += 1;
            name = format!("{base}_{k}");
        }
        self.declare(&name).expect("fresh name")
    }

    pub fn get(&self, name: &str) -> Option<Var> {
        self.index.get(name).copied()
    }

    pub fn name(&self, v: Var) -> &str {
        self.names.get(v as usize).map(|s| s.as_str()).unwrap_or("?")
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn monomial(&self, m: &Monomial) -> String {
        let parts: Vec<String> = m
            .pairs()
            .iter()
            .map(|&(v, e)| if e == 1 { self.name(v).to_string() } else { format!("{}^{e}", self.name(v)) })
            .collect();
        parts.join("*")
    }

    /// Canonical text: `3/2*x^2*y - z`, terms in descending grevlex order.
    pub fn poly(&self, p: &Poly) -> String {
        if p.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (m, c)) in p.terms().iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if m.is_one() {
                write!(out, "{a}").unwrap();
            } else if a.is_one() {
                out.push_str(&self.monomial(m));
            } else {
                write!(out, "{a}*{}", self.monomial(m)).unwrap();
            }
        }
        out
    }

    pub fn ratfun(&self, r: &RationalFunction) -> String {
        if r.den().is_one() {
            return self.poly(r.num());
        }
        let num = if r.num().len() > 1 { format!("({})", self.poly(r.num())) } else { self.poly(r.num()) };
        let single = r.den().len() == 1 && r.den().terms()[0].1 == Q::one() && r.den().terms()[0].0.pairs().len() == 1;
        let den = if single { self.poly(r.den()) } else { format!("({})", self.poly(r.den())) };
        format!("{num}/{den}")
    }

    pub fn list(&self, vars: &[Var]) -> Vec<String> {
        vars.iter().map(|&v| self.name(v).to_string()).collect()
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut ch = s.chars();
    match ch.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    ch.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn print_canonical() {
        let mut t = VarTable::new();
        let x = t.intern("x");
        let y = t.intern("y");
        let z = t.intern("z");
        let p = Poly::from_terms([
            (Monomial::from_pairs([(x, 2), (y, 1)]), Q::new(3.into(), 2.into())),
            (Monomial::var(z), -Q::one()),
        ]);
        assert_eq!(t.poly(&p), "3/2*x^2*y - z");
        assert_eq!(t.poly(&Poly::from_int(-4)), "-4");
    }

    #[test]
    fn duplicate_rejected() {
        let mut t = VarTable::new();
        t.declare("a").unwrap();
        assert!(t.declare("a").is_err());
        assert!(t.declare("2a").is_err());
    }
}
