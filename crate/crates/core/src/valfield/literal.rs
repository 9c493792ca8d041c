//! Text form of series and polynomials: `a0 + a1*pi^(k/e) + ... (prec N)`.

use super::field::FieldData;
use super::poly::ValuedPoly;
use super::series::{Padic, Q};
use crate::error::{Error, Result};

fn exponent_text(q: Q) -> String {
    if q.is_integer() {
        if q == Q::from(1) {
            String::new()
        } else if q > Q::from(0) {
            format!("^{q}")
        } else {
            format!("^({q})")
        }
    } else {
        format!("^({}/{})", q.numer(), q.denom())
    }
}

fn series_terms(x: &Padic) -> Vec<String> {
    let e = x.e() as i64;
    let v0 = x.v0().unwrap_or(0);
    x.digits()
        .iter()
        .enumerate()
        .filter(|(_, a)| !a.is_zero())
        .map(|(i, a)| {
            let q = Q::new(v0 + i as i64, e);
            let c = a.to_literal();
            if q == Q::from(0) {
                c
            } else if c == "1" {
                format!("pi{}", exponent_text(q))
            } else {
                format!("{c}*pi{}", exponent_text(q))
            }
        })
        .collect()
}

pub fn print_series(x: &Padic) -> String {
    let terms = series_terms(x);
    let body = if terms.is_empty() { "0".to_string() } else { terms.join(" + ") };
    match x.prec() {
        None => format!("{body} (prec inf)"),
        Some(p) => format!("{body} (prec {p})"),
    }
}

/// Polynomial in `var` with series coefficients; precision suffixes only on inexact coefficients.
pub fn print_poly(f: &ValuedPoly, var: &str) -> String {
    let mut parts = Vec::new();
    for (i, a) in f.coeffs().iter().enumerate().rev() {
        if a.is_exact_zero() {
            continue;
        }
        let terms = series_terms(a);
        let mut c = if terms.is_empty() { "0".to_string() } else { terms.join(" + ") };
        if let Some(p) = a.prec() {
            c = format!("{c} (prec {p})");
        }
        let mono = match i {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{i}"),
        };
        parts.push(match (i, terms.len(), a.prec().is_some(), c.as_str()) {
            (0, _, _, _) => c,
            (_, 1, false, "1") => mono,
            (_, 1, false, _) => format!("{c}*{mono}"),
            _ => format!("({c})*{mono}"),
        });
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(i64),
    Ident(String),
    Sym(char),
}

fn lex(s: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let cs: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let st = i;
            while i < cs.len() && cs[i].is_ascii_digit() {
                i += 1;
            }
            let t: String = cs[st..i].iter().collect();
            out.push(Tok::Num(t.parse().map_err(|_| Error::Parse(format!("number {t}")))?));
        } else if c.is_alphabetic() || c == '_' {
            let st = i;
            while i < cs.len() && (cs[i].is_alphanumeric() || cs[i] == '_' || cs[i] == '\'') {
                i += 1;
            }
            out.push(Tok::Ident(cs[st..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Sym(c));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character '{c}'")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    f: &'static FieldData,
    var: &'a str,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }
    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }
    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(Error::Parse(format!("expected '{c}' at token {}", self.pos)))
        }
    }
    fn int(&mut self) -> Result<i64> {
        let neg = self.eat('-');
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(if neg { -n } else { n })
            }
            _ => Err(Error::Parse(format!("expected integer at token {}", self.pos))),
        }
    }
    fn rational(&mut self) -> Result<Q> {
        let n = self.int()?;
        if self.eat('/') {
            let d = self.int()?;
            if d == 0 {
                return Err(Error::Parse("zero denominator".into()));
            }
            return Ok(Q::new(n, d));
        }
        Ok(Q::from(n))
    }
    fn exponent(&mut self) -> Result<Q> {
        if self.eat('(') {
            let q = self.rational()?;
            self.expect(')')?;
            Ok(q)
        } else {
            Ok(Q::from(self.int()?))
        }
    }
    fn expr(&mut self) -> Result<ValuedPoly> {
        let mut acc = self.term()?;
        loop {
            if self.is_prec_suffix() {
                break;
            }
            if self.eat('+') {
                acc = acc.add(&self.term()?);
            } else if self.eat('-') {
                acc = acc.sub(&self.term()?);
            } else {
                break;
            }
        }
        Ok(acc)
    }
    fn is_prec_suffix(&self) -> bool {
        self.peek() == Some(&Tok::Sym('(')) && self.toks.get(self.pos + 1) == Some(&Tok::Ident("prec".into()))
    }
    fn term(&mut self) -> Result<ValuedPoly> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = acc.mul(&self.unary()?);
            } else if self.eat('/') {
                let d = self.unary()?;
                let c = d.coeff(0);
                if d.deg() != 0 || c.digits().len() != 1 || !c.is_exact() {
                    return Err(Error::Parse("division only by nonzero monomial constants".into()));
                }
                acc = acc.scale(&c.inv(1)?);
            } else {
                break;
            }
        }
        Ok(acc)
    }
    fn unary(&mut self) -> Result<ValuedPoly> {
        if self.eat('-') {
            return Ok(self.unary()?.neg());
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }
    fn power(&mut self) -> Result<ValuedPoly> {
        let f = self.f;
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                let base = ValuedPoly::constant(Padic::from_int(f, n));
                self.int_power(base)
            }
            Some(Tok::Ident(id)) if id == "pi" => {
                self.pos += 1;
                let q = if self.eat('^') { self.exponent()? } else { Q::from(1) };
                Ok(ValuedPoly::constant(Padic::monomial(f.one(), q)))
            }
            Some(Tok::Ident(id)) if id == "g" => {
                self.pos += 1;
                let k = if self.eat('^') { self.exponent()? } else { Q::from(1) };
                if !k.is_integer() {
                    return Err(Error::Parse("g exponent must be an integer".into()));
                }
                Ok(ValuedPoly::constant(Padic::from_fq(f.gen().powi(k.to_integer()))))
            }
            Some(Tok::Ident(id)) if id == self.var => {
                self.pos += 1;
                self.int_power(ValuedPoly::x(f))
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let mut inner = self.expr()?;
                if let Some(n) = self.prec_suffix()? {
                    inner = ValuedPoly::new(self.f, inner.coeffs().iter().map(|a| a.with_prec(n)).collect());
                }
                self.expect(')')?;
                self.int_power(inner)
            }
            other => Err(Error::Parse(format!("unexpected token {other:?}"))),
        }
    }
    fn int_power(&mut self, base: ValuedPoly) -> Result<ValuedPoly> {
        if !self.eat('^') {
            return Ok(base);
        }
        let k = self.exponent()?;
        if !k.is_integer() || k < Q::from(0) {
            return Err(Error::Parse("only nonnegative integer powers of polynomials".into()));
        }
        Ok(base.pow(k.to_integer() as u32))
    }
    fn prec_suffix(&mut self) -> Result<Option<Q>> {
        if !self.is_prec_suffix() {
            return Ok(None);
        }
        self.pos += 2;
        if self.peek() == Some(&Tok::Ident("inf".into())) {
            self.pos += 1;
            self.expect(')')?;
            return Ok(None);
        }
        let q = self.rational()?;
        self.expect(')')?;
        Ok(Some(q))
    }
}

fn parse_with_var(s: &str, f: &'static FieldData, var: &str) -> Result<ValuedPoly> {
    let mut p = Parser { toks: lex(s)?, pos: 0, f, var };
    let mut v = p.expr()?;
    if let Some(n) = p.prec_suffix()? {
        v = ValuedPoly::new(f, v.coeffs().iter().map(|a| a.with_prec(n)).collect());
        if v.is_zero() {
            v = ValuedPoly::constant(Padic::zero(f).with_prec(n));
        }
    }
    if p.pos != p.toks.len() {
        return Err(Error::Parse(format!("trailing input at token {}", p.pos)));
    }
    Ok(v)
}

pub fn parse_series(s: &str, f: &'static FieldData) -> Result<Padic> {
    let v = parse_with_var(s, f, "\u{0}")?;
    if v.deg() > 0 {
        return Err(Error::Parse("series literal contains a variable".into()));
    }
    Ok(v.coeff(0))
}

pub fn parse_poly(s: &str, f: &'static FieldData, var: &str) -> Result<ValuedPoly> {
    parse_with_var(s, f, var)
}
