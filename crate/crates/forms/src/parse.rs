//! Text syntax for forms, e.g. `3/2*t1^2*dt2 - i*e1*dt1 + (1+2i)`.
//!
//! Identifiers resolve to an even coordinate, a Grassmann parameter, or `d` followed by an
//! even coordinate. `i` is the imaginary unit. Products are graded, so factor order matters.

use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::Zero;

use crate::chart::Chart;
use crate::coeff::{self, Coeff};
use crate::form::GradedForm;
use crate::FormError;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Op(char),
}

fn lex(s: &str) -> Result<Vec<Tok>, FormError> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[start..i].iter().collect();
            out.push(Tok::Num(digits.parse().map_err(|_| FormError::Parse(digits.clone()))?));
            // `2i` is shorthand for `2*i`.
            if i < chars.len() && chars[i] == 'i' && !chars.get(i + 1).is_some_and(|c| c.is_alphanumeric() || *c == '_') {
                out.push(Tok::Op('*'));
                out.push(Tok::Ident("i".into()));
                i += 1;
            }
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(chars[start..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(FormError::Parse(format!("unexpected character `{c}`")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    chart: &'a Arc<Chart>,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<GradedForm, FormError> {
        let mut acc = GradedForm::zero(self.chart);
        let mut neg = if self.eat('-') {
            true
        } else {
            self.eat('+');
            false
        };
        loop {
            let t = self.term()?;
            acc = if neg { &acc - &t } else { &acc + &t };
            if self.eat('+') {
                neg = false;
            } else if self.eat('-') {
                neg = true;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<GradedForm, FormError> {
        let mut acc = self.factor()?;
        while self.eat('*') {
            let f = self.factor()?;
            acc = acc.wedge(&f)?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<GradedForm, FormError> {
        let base = self.atom()?;
        if self.eat('^') {
            match self.toks.get(self.pos).cloned() {
                Some(Tok::Num(n)) => {
                    self.pos += 1;
                    let k: u32 = n.try_into().map_err(|_| FormError::Parse("exponent too large".into()))?;
                    if k > crate::form::DEGREE_CAP {
                        return Err(FormError::DegreeCap { degree: k });
                    }
                    return Ok(base.pow(k));
                }
                _ => return Err(FormError::Parse("expected exponent after `^`".into())),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<GradedForm, FormError> {
        let tok = self.peek().cloned().ok_or_else(|| FormError::Parse("unexpected end".into()))?;
        self.pos += 1;
        match tok {
            Tok::Num(n) => {
                let mut r = BigRational::from_integer(n);
                if self.peek() == Some(&Tok::Op('/')) {
                    self.pos += 1;
                    match self.toks.get(self.pos).cloned() {
                        Some(Tok::Num(d)) if !d.is_zero() => {
                            self.pos += 1;
                            r /= BigRational::from_integer(d);
                        }
                        _ => return Err(FormError::Parse("expected nonzero denominator".into())),
                    }
                }
                Ok(GradedForm::constant(self.chart, coeff::real(r)))
            }
            Tok::Ident(name) => self.ident(&name),
            Tok::Op('(') => {
                let inner = self.expr()?;
                if !self.eat(')') {
                    return Err(FormError::Parse("missing `)`".into()));
                }
                Ok(inner)
            }
            Tok::Op(c) => Err(FormError::Parse(format!("unexpected `{c}`"))),
        }
    }

    fn ident(&self, name: &str) -> Result<GradedForm, FormError> {
        if let Some(i) = self.chart.even_index(name) {
            return Ok(GradedForm::var(self.chart, i));
        }
        if let Some(j) = self.chart.odd_index(name) {
            return Ok(GradedForm::odd(self.chart, j));
        }
        if let Some(i) = name.strip_prefix('d').and_then(|rest| self.chart.even_index(rest)) {
            return Ok(GradedForm::dvar(self.chart, i));
        }
        if name == "i" {
            let c: Coeff = Complex::new(BigRational::zero(), BigRational::from_integer(1.into()));
            return Ok(GradedForm::constant(self.chart, c));
        }
        Err(FormError::Parse(format!("unknown symbol `{name}`")))
    }
}

/// Parses `text` as a form on `chart`.
pub fn parse_form(chart: &Arc<Chart>, text: &str) -> Result<GradedForm, FormError> {
    let toks = lex(text)?;
    if toks.is_empty() {
        return Err(FormError::Parse("empty expression".into()));
    }
    let mut p = Parser { toks, pos: 0, chart };
    let f = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(FormError::Parse(format!("trailing input in `{text}`")));
    }
    f.check_cap()?;
    Ok(f)
}
