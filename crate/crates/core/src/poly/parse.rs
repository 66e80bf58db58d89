//! Recursive-descent parser for polynomial expressions.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary ('*' unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' INT)?
//! atom   := INT | INT ':' INT ... | 'g' | IDENT | '(' expr ')'
//! ```
//! Whitespace is ignored and `#` starts a comment running to end of line.

use std::sync::Arc;

use super::MultiPoly;
use crate::error::{Error, Result};
use crate::ff::{FieldElement, FieldSpec};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(String),
    Ident(String),
    Sym(char),
}

struct Lexed {
    toks: Vec<(Tok, usize)>,
    end: usize,
}

fn syntax(col: usize, msg: impl Into<String>) -> Error {
    Error::Syntax {
        line: 1,
        col,
        msg: msg.into(),
    }
}

fn lex(text: &str) -> Result<Lexed> {
    let chars: Vec<char> = text.chars().collect();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c == '#' {
            break;
        }
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == ':') {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            if s.ends_with(':') || s.contains("::") {
                return Err(syntax(col, format!("malformed element literal `{s}`")));
            }
            toks.push((Tok::Num(s), col));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            toks.push((Tok::Ident(chars[start..i].iter().collect()), col));
        } else if "+-*^()".contains(c) {
            toks.push((Tok::Sym(c), col));
            i += 1;
        } else {
            return Err(syntax(col, format!("unexpected character `{c}`")));
        }
    }
    Ok(Lexed { toks, end: chars.len() + 1 })
}

struct Parser<'a> {
    toks: &'a [(Tok, usize)],
    end: usize,
    pos: usize,
    field: &'a Arc<FieldSpec>,
    vars: &'a [String],
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |&(_, c)| c)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn n(&self) -> usize {
        self.vars.len()
    }

    fn expr(&mut self) -> Result<MultiPoly> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = &acc + &self.term()?;
            } else if self.eat('-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<MultiPoly> {
        let mut acc = self.unary()?;
        while self.eat('*') {
            acc = &acc * &self.unary()?;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<MultiPoly> {
        if self.eat('-') {
            Ok(-&self.unary()?)
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<MultiPoly> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let col = self.col();
        match self.peek().cloned() {
            Some(Tok::Num(s)) if !s.contains(':') => {
                self.pos += 1;
                let e: u32 = s.parse().map_err(|_| syntax(col, format!("exponent `{s}` too large")))?;
                Ok(base.pow(e))
            }
            _ => Err(syntax(col, "expected a non-negative integer exponent")),
        }
    }

    fn constant(&self, c: FieldElement) -> MultiPoly {
        MultiPoly::constant(self.field, self.n(), c)
    }

    fn literal(&self, s: &str, col: usize) -> Result<FieldElement> {
        let p = self.field.p() as u64;
        let reduce = |digits: &str| digits.bytes().fold(0u64, |acc, b| (acc * 10 + (b - b'0') as u64) % p);
        if s.contains(':') {
            let parts: Vec<&str> = s.split(':').collect();
            if parts.len() != self.field.k() as usize {
                return Err(syntax(
                    col,
                    format!("element literal `{s}` needs {} coordinates", self.field.k()),
                ));
            }
            let coords: Vec<u32> = parts.iter().map(|d| reduce(d) as u32).collect();
            self.field.from_coords(&coords)
        } else {
            Ok(self.field.from_int(reduce(s) as i64))
        }
    }

    fn atom(&mut self) -> Result<MultiPoly> {
        let col = self.col();
        let Some(tok) = self.peek().cloned() else {
            return Err(syntax(col, "unexpected end of expression"));
        };
        self.pos += 1;
        match tok {
            Tok::Num(s) => Ok(self.constant(self.literal(&s, col)?)),
            Tok::Ident(name) => {
                if let Some(i) = self.vars.iter().position(|v| *v == name) {
                    Ok(MultiPoly::var(self.field, self.n(), i))
                } else if name == "g" {
                    if self.field.k() == 1 {
                        Err(Error::GeneratorInPrimeField)
                    } else {
                        Ok(self.constant(self.field.generator()))
                    }
                } else {
                    Err(Error::UnknownVariable(name))
                }
            }
            Tok::Sym('(') => {
                let inner = self.expr()?;
                if !self.eat(')') {
                    return Err(syntax(self.col(), "expected `)`"));
                }
                Ok(inner)
            }
            Tok::Sym(c) => Err(syntax(col, format!("unexpected `{c}`"))),
        }
    }
}

/// Parses `text` as a polynomial in `vars` over `field`.
///
/// `g` denotes the field generator unless a variable of that name is declared.
pub fn parse_poly(text: &str, field: &Arc<FieldSpec>, vars: &[String]) -> Result<MultiPoly> {
    let lexed = lex(text)?;
    let mut parser = Parser {
        toks: &lexed.toks,
        end: lexed.end,
        pos: 0,
        field,
        vars,
    };
    if lexed.toks.is_empty() {
        return Err(syntax(1, "empty expression"));
    }
    let poly = parser.expr()?;
    if parser.pos < lexed.toks.len() {
        return Err(syntax(parser.col(), "unexpected trailing input"));
    }
    Ok(poly)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::default_names;

    #[test]
    fn parses_basic_examples() {
        let f3 = FieldSpec::new(3, 1).unwrap();
        let f = parse_poly("x1*x2 + x3^2", &f3, &default_names(3)).unwrap();
        assert_eq!(f.num_terms(), 2);
        assert_eq!(f.total_degree(), Some(2));
        assert!(parse_poly("x1 + 2*x1", &f3, &default_names(1)).unwrap().is_zero());

        let f4 = FieldSpec::new(2, 2).unwrap();
        let f = parse_poly("g*x1^2 + 1", &f4, &default_names(1)).unwrap();
        assert_eq!(f.num_terms(), 2);
        assert_eq!(f.coefficient(&[2]), f4.generator());
    }

    #[test]
    fn arithmetic_in_expressions() {
        let f5 = FieldSpec::new(5, 1).unwrap();
        let v = default_names(2);
        let a = parse_poly("(x1 + x2)^2 - -x1*3 # trailing comment", &f5, &v).unwrap();
        let b = parse_poly("x1^2 + 2*x1*x2 + x2^2 + 3*x1", &f5, &v).unwrap();
        assert_eq!(a, b);
        assert_eq!(parse_poly("12", &f5, &v).unwrap(), parse_poly("2", &f5, &v).unwrap());
        let f9 = FieldSpec::new(3, 2).unwrap();
        assert_eq!(
            parse_poly("g^2", &f9, &v).unwrap(),
            parse_poly("2", &f9, &v).unwrap()
        );
        assert_eq!(
            parse_poly("1:1", &f9, &v).unwrap(),
            parse_poly("g + 1", &f9, &v).unwrap()
        );
    }

    #[test]
    fn errors() {
        let f3 = FieldSpec::new(3, 1).unwrap();
        let v = default_names(2);
        assert_eq!(parse_poly("x1 + y", &f3, &v), Err(Error::UnknownVariable("y".into())));
        assert_eq!(parse_poly("g*x1", &f3, &v), Err(Error::GeneratorInPrimeField));
        assert!(matches!(parse_poly("x1 + * x2", &f3, &v), Err(Error::Syntax { col: 6, .. })));
        assert!(matches!(parse_poly("(x1 + x2", &f3, &v), Err(Error::Syntax { col: 9, .. })));
        assert!(matches!(parse_poly("x1 $ x2", &f3, &v), Err(Error::Syntax { col: 4, .. })));
        assert!(matches!(parse_poly("x1^x2", &f3, &v), Err(Error::Syntax { .. })));
        assert!(matches!(parse_poly("", &f3, &v), Err(Error::Syntax { .. })));
        let f9 = FieldSpec::new(3, 2).unwrap();
        assert!(matches!(parse_poly("1:1:1", &f9, &v), Err(Error::Syntax { .. })));
    }

    #[test]
    fn print_parse_fixed_point() {
        let f9 = FieldSpec::new(3, 2).unwrap();
        let v = default_names(3);
        let f = parse_poly("g*x1^2*x3 + (1:2)*x2 - x3 + g^5 + x1*x2*x3", &f9, &v).unwrap();
        let printed = f.format_with(&v);
        let again = parse_poly(&printed, &f9, &v).unwrap();
        assert_eq!(again, f);
        assert_eq!(again.format_with(&v), printed);
    }
}
