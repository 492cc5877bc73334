//! Text syntax for field elements: integers, `p/q`, variable names,
//! `+ - * / ^`, parentheses, and implicit multiplication (`3x`, `2(x+1)`).

use num_bigint::BigInt;

use super::field::FieldElem;
use super::rational::Rational;
use super::vars::Vars;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let chars: Vec<char> = s.chars().collect();
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
            let lit: String = chars[start..i].iter().collect();
            out.push(Tok::Num(lit.parse().expect("digits")));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(chars[start..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character {c:?} in {s:?}")));
        }
    }
    Ok(out)
}

/// Identifiers used in an expression, in order of first appearance.
pub fn identifiers(s: &str) -> Result<Vec<String>> {
    let mut seen = Vec::new();
    for t in tokenize(s)? {
        if let Tok::Ident(name) = t {
            if !seen.contains(&name) {
                seen.push(name);
            }
        }
    }
    Ok(seen)
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    vars: &'a Vars,
    src: &'a str,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn err(&self, msg: &str) -> Error {
        Error::Parse(format!("{msg} in {:?}", self.src))
    }

    fn expr(&mut self) -> Result<FieldElem> {
        let mut acc = self.term()?;
        while let Some(Tok::Op(c @ ('+' | '-'))) = self.peek().cloned() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if c == '+' { acc.add(&rhs) } else { acc.sub(&rhs) };
        }
        Ok(acc)
    }

    fn starts_atom(&self) -> bool {
        matches!(self.peek(), Some(Tok::Num(_) | Tok::Ident(_) | Tok::Op('(')))
    }

    fn term(&mut self) -> Result<FieldElem> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Op('*')) => {
                    self.pos += 1;
                    acc = acc.mul(&self.unary()?);
                }
                Some(Tok::Op('/')) => {
                    self.pos += 1;
                    let rhs = self.unary()?;
                    acc = acc.div(&rhs)?;
                }
                _ if self.starts_atom() => {
                    acc = acc.mul(&self.power()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<FieldElem> {
        match self.peek() {
            Some(Tok::Op('-')) => {
                self.pos += 1;
                Ok(self.unary()?.neg())
            }
            Some(Tok::Op('+')) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<FieldElem> {
        let base = self.atom()?;
        if let Some(Tok::Op('^')) = self.peek() {
            self.pos += 1;
            let e = self.exponent()?;
            if e < 0 && base.is_zero() {
                return Err(Error::DivisionByZero);
            }
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn exponent(&mut self) -> Result<i64> {
        let mut sign = 1;
        let mut parens = false;
        if let Some(Tok::Op('(')) = self.peek() {
            parens = true;
            self.pos += 1;
        }
        if let Some(Tok::Op('-')) = self.peek() {
            sign = -1;
            self.pos += 1;
        }
        let e = match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                i64::try_from(n).map_err(|_| self.err("exponent too large"))?
            }
            _ => return Err(self.err("expected integer exponent")),
        };
        if parens {
            if self.peek() != Some(&Tok::Op(')')) {
                return Err(self.err("expected ')'"));
            }
            self.pos += 1;
        }
        Ok(sign * e)
    }

    fn atom(&mut self) -> Result<FieldElem> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(FieldElem::from_rational(self.vars, Rational::from_bigint(n)))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                match self.vars.index_of(&name) {
                    Some(i) => Ok(FieldElem::var(self.vars, i)),
                    None => Err(self.err(&format!("unknown variable {name:?}"))),
                }
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(&Tok::Op(')')) {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            _ => Err(self.err("expected a number, variable or '('")),
        }
    }
}

/// Parses an element of Q(vars).
pub fn parse_field_elem(s: &str, vars: &Vars) -> Result<FieldElem> {
    let toks = tokenize(s)?;
    if toks.is_empty() {
        return Err(Error::Parse("empty expression".to_string()));
    }
    let mut p = Parser { toks, pos: 0, vars, src: s };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(p.err("trailing input"));
    }
    Ok(e)
}

/// Splits at `sep` occurring outside any bracket pair.
pub fn split_top_level(s: &str, sep: char) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' | '[' | '{' => depth += 1,
            ')' | ']' | '}' => depth -= 1,
            _ if c == sep && depth == 0 => {
                out.push(&s[start..i]);
                start = i + c.len_utf8();
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

/// Strips one pair of enclosing brackets `open`/`close`, if present.
pub fn strip_brackets(s: &str, open: char, close: char) -> Result<&str> {
    let t = s.trim();
    if t.starts_with(open) && t.ends_with(close) && t.len() >= 2 {
        Ok(&t[open.len_utf8()..t.len() - close.len_utf8()])
    } else {
        Err(Error::Parse(format!("expected {open}...{close}, got {s:?}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_with_implicit_multiplication() {
        let v = Vars::new(&["x", "y"]).unwrap();
        let a = parse_field_elem("1-3x + 2(x+y)^2/y", &v).unwrap();
        let b = parse_field_elem("1 - 3*x + 2*(x^2 + 2*x*y + y^2)*y^(-1)", &v).unwrap();
        assert_eq!(a, b);
        assert_eq!(parse_field_elem("-x^2", &v).unwrap(), parse_field_elem("-(x*x)", &v).unwrap());
        assert_eq!(parse_field_elem("3/6", &v).unwrap().as_rational(), Some(Rational::new(1, 2).unwrap()));
    }

    #[test]
    fn rejects_bad_input() {
        let v = Vars::new(&["x"]).unwrap();
        assert!(matches!(parse_field_elem("x +", &v), Err(Error::Parse(_))));
        assert!(matches!(parse_field_elem("z", &v), Err(Error::Parse(_))));
        assert!(matches!(parse_field_elem("(x", &v), Err(Error::Parse(_))));
        assert_eq!(parse_field_elem("1/(x-x)", &v), Err(Error::DivisionByZero));
    }

    #[test]
    fn top_level_split() {
        assert_eq!(split_top_level("1+t, (x,y), {a,b}", ','), vec!["1+t", " (x,y)", " {a,b}"]);
    }
}
