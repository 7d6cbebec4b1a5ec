use std::collections::BTreeMap;

use crate::algebra::field::{FiniteField, Fq};
use crate::algebra::poly::Poly;
use crate::error::{Error, Result};

/// Sparse polynomial over F_q in the named variables, as produced by the parser.
pub type ParsedPoly = BTreeMap<Vec<u64>, Fq>;

struct Parser<'a> {
    field: &'a FiniteField,
    vars: &'a [&'a str],
    src: Vec<char>,
    pos: usize,
}

fn perr(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<char> {
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn constant(&self, c: Fq) -> ParsedPoly {
        let mut m = BTreeMap::new();
        if c != Fq::ZERO {
            m.insert(vec![0; self.vars.len()], c);
        }
        m
    }

    fn add(&self, a: &mut ParsedPoly, b: &ParsedPoly, negate: bool) {
        for (e, &c) in b {
            let c = if negate { self.field.fneg(c) } else { c };
            let s = self.field.fadd(a.get(e).copied().unwrap_or(Fq::ZERO), c);
            if s == Fq::ZERO {
                a.remove(e);
            } else {
                a.insert(e.clone(), s);
            }
        }
    }

    fn mul(&self, a: &ParsedPoly, b: &ParsedPoly) -> Result<ParsedPoly> {
        let mut out = BTreeMap::new();
        for (ea, &ca) in a {
            for (eb, &cb) in b {
                let mut e = Vec::with_capacity(ea.len());
                for (x, y) in ea.iter().zip(eb) {
                    e.push(x.checked_add(*y).ok_or_else(|| perr("exponent overflow"))?);
                }
                let term = BTreeMap::from([(e, self.field.fmul(ca, cb))]);
                self.add(&mut out, &term, false);
            }
        }
        Ok(out)
    }

    fn pow(&self, a: &ParsedPoly, n: u64) -> Result<ParsedPoly> {
        let mut acc = self.constant(Fq::ONE);
        if a.len() == 1 {
            let (e, &c) = a.iter().next().unwrap();
            let mut ee = Vec::with_capacity(e.len());
            for x in e {
                ee.push(x.checked_mul(n).ok_or_else(|| perr("exponent overflow"))?);
            }
            return Ok(BTreeMap::from([(ee, self.field.fpow(c, n))]));
        }
        if n > 64 {
            return Err(perr("powers of compound expressions are limited to 64"));
        }
        for _ in 0..n {
            acc = self.mul(&acc, a)?;
        }
        Ok(acc)
    }

    fn integer(&mut self) -> Result<u64> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        let s: String = self.src[start..self.pos].iter().collect();
        s.parse().map_err(|_| perr(format!("expected an integer at position {start}")))
    }

    fn ident(&mut self) -> String {
        let start = self.pos;
        if self.peek().is_some_and(|c| c.is_ascii_alphabetic()) {
            self.pos += 1;
            while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                self.pos += 1;
            }
        }
        self.src[start..self.pos].iter().collect()
    }

    fn atom(&mut self) -> Result<ParsedPoly> {
        let base = match self.peek() {
            Some('(') => {
                self.pos += 1;
                let v = self.expr()?;
                if !self.eat(')') {
                    return Err(perr(format!("expected ')' at position {}", self.pos)));
                }
                v
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                let n = self.integer()?;
                if n >= self.field.p() as u64 {
                    return Err(perr(format!(
                        "coefficient {n} at position {start} is not in 0..{}",
                        self.field.p() - 1
                    )));
                }
                self.constant(Fq(n as u32))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                let name = self.ident();
                if name == "a" {
                    if self.field.e() == 1 {
                        return Err(perr("the generator 'a' only exists in extension fields"));
                    }
                    self.constant(self.field.generator())
                } else if let Some(i) = self.vars.iter().position(|v| *v == name) {
                    let mut e = vec![0; self.vars.len()];
                    e[i] = 1;
                    BTreeMap::from([(e, Fq::ONE)])
                } else {
                    return Err(perr(format!("unknown variable '{name}' at position {start}")));
                }
            }
            Some(c) => return Err(perr(format!("unexpected '{c}' at position {}", self.pos))),
            None => return Err(perr("unexpected end of input")),
        };
        if self.eat('^') {
            let n = self.integer()?;
            return self.pow(&base, n);
        }
        Ok(base)
    }

    fn term(&mut self) -> Result<ParsedPoly> {
        let mut acc = self.atom()?;
        loop {
            match self.peek() {
                Some('*') => {
                    self.pos += 1;
                    let b = self.atom()?;
                    acc = self.mul(&acc, &b)?;
                }
                // juxtaposition such as "2T" or "(a+1)X"
                Some(c) if c.is_ascii_alphabetic() || c == '(' => {
                    let b = self.atom()?;
                    acc = self.mul(&acc, &b)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn expr(&mut self) -> Result<ParsedPoly> {
        let mut negate = self.eat('-');
        let mut acc = BTreeMap::new();
        loop {
            let t = self.term()?;
            self.add(&mut acc, &t, negate);
            match self.peek() {
                Some('+') => negate = false,
                Some('-') => negate = true,
                _ => return Ok(acc),
            }
            self.pos += 1;
        }
    }
}

/// Parses a polynomial over F_q in the given variables.
pub fn parse_multi(field: &FiniteField, src: &str, vars: &[&str]) -> Result<ParsedPoly> {
    let cleaned: Vec<char> = src.chars().filter(|c| !c.is_whitespace()).collect();
    if cleaned.is_empty() {
        return Err(perr("empty expression"));
    }
    let mut p = Parser { field, vars, src: cleaned, pos: 0 };
    let v = p.expr()?;
    if p.pos != p.src.len() {
        return Err(perr(format!("trailing input at position {}", p.pos)));
    }
    Ok(v)
}

/// Parses an element of F_q[var].
pub fn parse_poly(field: &FiniteField, src: &str, var: &str) -> Result<Poly> {
    let m = parse_multi(field, src, &[var])?;
    let deg = m.keys().map(|e| e[0]).max().unwrap_or(0) as usize;
    let mut c = vec![Fq::ZERO; deg + 1];
    for (e, v) in m {
        c[e[0] as usize] = v;
    }
    Ok(Poly::from_coeffs(c))
}

/// Parses an element of F_q.
pub fn parse_fq(field: &FiniteField, src: &str) -> Result<Fq> {
    let m = parse_multi(field, src, &[])?;
    Ok(m.values().next().copied().unwrap_or(Fq::ZERO))
}

/// Parses a matrix with rows separated by ';' and entries by ','.
pub fn parse_matrix(field: &FiniteField, src: &str, var: &str) -> Result<Vec<Vec<Poly>>> {
    let rows: Vec<Vec<Poly>> = src
        .split(';')
        .map(|row| row.split(',').map(|e| parse_poly(field, e, var)).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(perr("matrix must be square"));
    }
    Ok(rows)
}
