//! Variable names and the canonical polynomial text format.
//!
//! Canonical strings list terms in decreasing degrevlex order with explicit
//! exponents and rational coefficients, e.g. `A_x^2*B_y - 3/2*B_y`.
//! [`parse_polynomial`] reads them back exactly.

use crate::monomial::{Monomial, Var};
use crate::order::MonomialOrder;
use crate::polynomial::Polynomial;
use crate::rational::Rat;
use std::collections::HashMap;
use std::fmt;

/// Bidirectional map between variable ids and names.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VarNames {
    names: Vec<String>,
    index: HashMap<String, Var>,
}

impl VarNames {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns the variable called `name`, creating it if needed.
    pub fn intern(&mut self, name: &str) -> Var {
        if let Some(v) = self.index.get(name) {
            return *v;
        }
        let v = Var(self.names.len() as u32);
        self.names.push(name.to_string());
        self.index.insert(name.to_string(), v);
        v
    }

    pub fn get(&self, name: &str) -> Option<Var> {
        self.index.get(name).copied()
    }

    pub fn name(&self, v: Var) -> String {
        self.names.get(v.index()).cloned().unwrap_or_else(|| format!("x{}", v.0))
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        (0..self.names.len() as u32).map(Var)
    }

    /// Canonical text for `p`.
    pub fn format(&self, p: &Polynomial) -> String {
        format_polynomial(p, &|v| self.name(v))
    }

    pub fn parse(&self, s: &str) -> Result<Polynomial, ParsePolyError> {
        parse_polynomial(s, self, &MonomialOrder::DegRevLex)
    }
}

pub(crate) fn format_polynomial(p: &Polynomial, name: &dyn Fn(Var) -> String) -> String {
    let p = p.with_order(&MonomialOrder::DegRevLex);
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (k, (m, c)) in p.terms().iter().enumerate() {
        let neg = c.is_negative();
        let mag = c.abs();
        if k == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let mono = format_monomial(m, name);
        if m.is_one() {
            out.push_str(&mag.to_string());
        } else if mag.is_one() {
            out.push_str(&mono);
        } else {
            out.push_str(&format!("{mag}*{mono}"));
        }
    }
    out
}

fn format_monomial(m: &Monomial, name: &dyn Fn(Var) -> String) -> String {
    m.iter()
        .map(|(v, e)| if e == 1 { name(v) } else { format!("{}^{}", name(v), e) })
        .collect::<Vec<_>>()
        .join("*")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsePolyError {
    pub position: usize,
    pub message: String,
}

impl fmt::Display for ParsePolyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "polynomial parse error at {}: {}", self.position, self.message)
    }
}

impl std::error::Error for ParsePolyError {}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(String),
    Ident(String),
    Sym(char),
}

fn tokenize(s: &str) -> Result<Vec<(usize, Tok)>, ParsePolyError> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let ch = chars[i];
        if ch.is_whitespace() {
            i += 1;
        } else if ch.is_ascii_digit() {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            out.push((start, Tok::Num(chars[start..i].iter().collect())));
        } else if ch.is_alphabetic() || ch == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((start, Tok::Ident(chars[start..i].iter().collect())));
        } else if "+-*/^()".contains(ch) {
            out.push((i, Tok::Sym(ch)));
            i += 1;
        } else {
            return Err(ParsePolyError { position: i, message: format!("unexpected character `{ch}`") });
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    names: &'a VarNames,
    order: &'a MonomialOrder,
    len: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn at(&self) -> usize {
        self.toks.get(self.pos).map(|(p, _)| *p).unwrap_or(self.len)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParsePolyError> {
        Err(ParsePolyError { position: self.at(), message: msg.into() })
    }

    fn sum(&mut self) -> Result<Polynomial, ParsePolyError> {
        let mut acc = Polynomial::zero(self.order);
        let mut first = true;
        loop {
            let sign = match self.peek() {
                Some(Tok::Sym('+')) => {
                    self.pos += 1;
                    1
                }
                Some(Tok::Sym('-')) => {
                    self.pos += 1;
                    -1
                }
                _ if first => 1,
                _ => return Ok(acc),
            };
            first = false;
            let t = self.product()?;
            acc = if sign < 0 { &acc - &t } else { &acc + &t };
        }
    }

    fn product(&mut self) -> Result<Polynomial, ParsePolyError> {
        let mut acc = self.power()?;
        while let Some(Tok::Sym('*')) = self.peek() {
            self.pos += 1;
            let rhs = self.power()?;
            acc = &acc * &rhs;
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<Polynomial, ParsePolyError> {
        let base = self.atom()?;
        if let Some(Tok::Sym('^')) = self.peek() {
            self.pos += 1;
            match self.peek().cloned() {
                Some(Tok::Num(n)) => {
                    self.pos += 1;
                    let e: u32 = n.parse().or_else(|_| self.err("bad exponent"))?;
                    return Ok(base.pow(e));
                }
                _ => return self.err("expected exponent"),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Polynomial, ParsePolyError> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                let mut text = n;
                if let (Some(Tok::Sym('/')), Some((_, Tok::Num(d)))) = (self.peek(), self.toks.get(self.pos + 1)) {
                    text = format!("{text}/{d}");
                    self.pos += 2;
                }
                let r: Rat = text.parse().or_else(|_| self.err("bad number"))?;
                Ok(Polynomial::constant(r, self.order))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                match self.names.get(&name) {
                    Some(v) => Ok(Polynomial::var(v, self.order)),
                    None => self.err(format!("unknown variable `{name}`")),
                }
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let inner = self.sum()?;
                match self.peek() {
                    Some(Tok::Sym(')')) => {
                        self.pos += 1;
                        Ok(inner)
                    }
                    _ => self.err("expected `)`"),
                }
            }
            Some(Tok::Sym('-')) => {
                self.pos += 1;
                Ok(-self.power()?)
            }
            _ => self.err("expected a term"),
        }
    }
}

/// Parses polynomial text over the variables in `names`.
pub fn parse_polynomial(s: &str, names: &VarNames, order: &MonomialOrder) -> Result<Polynomial, ParsePolyError> {
    let toks = tokenize(s)?;
    let mut p = Parser { toks, pos: 0, names, order, len: s.len() };
    let out = p.sum()?;
    if p.pos != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(out)
}
