//! Field expressions: `1/2 theta_E(x) b(y) - d/dz gamma(h)`.
//!
//! Juxtaposition is the right-nested Wick product, `d/dz` is `∂`, names take
//! basis labels in parentheses written directly after the name.

use chiral_core::rational::Q;
use chiral_core::vertex::State;
use chiral_core::weil::WeilAlgebra;
use chiral_core::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Name(String, Option<Vec<String>>),
    Num(Q),
    Deriv,
    Open,
    Close,
    Plus,
    Minus,
}

fn lex(src: &str) -> Result<Vec<Tok>> {
    let bad = |m: String| Error::Input(format!("expression `{src}`: {m}"));
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if src[src.char_indices().nth(i).unwrap().0..].starts_with("d/dz") {
            out.push(Tok::Deriv);
            i += 4;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '/') {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            out.push(Tok::Num(s.parse().map_err(|_| bad(format!("bad number {s}")))?));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '\'') {
                i += 1;
            }
            let name: String = chars[start..i].iter().collect();
            let mut params = None;
            if i < chars.len() && chars[i] == '(' {
                let close = chars[i..].iter().position(|&x| x == ')').ok_or_else(|| bad("unclosed `(`".into()))? + i;
                let inner: String = chars[i + 1..close].iter().collect();
                params = Some(inner.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect());
                i = close + 1;
            }
            out.push(Tok::Name(name, params));
        } else {
            out.push(match c {
                '(' => Tok::Open,
                ')' => Tok::Close,
                '+' => Tok::Plus,
                '-' => Tok::Minus,
                _ => return Err(bad(format!("unexpected `{c}`"))),
            });
            i += 1;
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    w: &'a WeilAlgebra,
    src: &'a str,
}

impl Parser<'_> {
    fn err(&self, m: &str) -> Error {
        Error::Input(format!("expression `{}`: {m}", self.src))
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn sum(&mut self) -> Result<State> {
        let mut sign = Q::ONE;
        if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            sign = Q::int(-1);
        }
        let mut acc = self.product()?.scaled(&sign);
        while let Some(t) = self.peek() {
            let s = match t {
                Tok::Plus => Q::ONE,
                Tok::Minus => Q::int(-1),
                _ => break,
            };
            self.pos += 1;
            acc.add_scaled(&self.product()?, &s);
        }
        Ok(acc)
    }

    fn starts_factor(&self) -> bool {
        matches!(self.peek(), Some(Tok::Name(..) | Tok::Num(_) | Tok::Deriv | Tok::Open))
    }

    fn product(&mut self) -> Result<State> {
        let mut scale = Q::ONE;
        let mut numeric = false;
        while let Some(Tok::Num(q)) = self.peek() {
            scale = scale * q;
            numeric = true;
            self.pos += 1;
        }
        let mut factors = Vec::new();
        while self.starts_factor() {
            factors.push(self.factor()?);
        }
        let mut out = match factors.pop() {
            Some(last) => last,
            None if numeric => State::vacuum(),
            None => return Err(self.err("expected a field")),
        };
        while let Some(f) = factors.pop() {
            out = self.w.gs.wick(&f, &out);
        }
        Ok(out.scaled(&scale))
    }

    fn factor(&mut self) -> Result<State> {
        match self.toks.get(self.pos).cloned() {
            Some(Tok::Deriv) => {
                self.pos += 1;
                let f = self.factor()?;
                Ok(self.w.gs.derivative(&f))
            }
            Some(Tok::Open) => {
                self.pos += 1;
                let s = self.sum()?;
                if self.peek() != Some(&Tok::Close) {
                    return Err(self.err("expected `)`"));
                }
                self.pos += 1;
                Ok(s)
            }
            Some(Tok::Num(q)) => {
                self.pos += 1;
                Ok(State::vacuum().scaled(&q))
            }
            Some(Tok::Name(name, params)) => {
                self.pos += 1;
                let idx = params
                    .unwrap_or_default()
                    .iter()
                    .map(|l| self.w.basis_index(l))
                    .collect::<Result<Vec<_>>>()?;
                self.w.named_field(&name, &idx)
            }
            _ => Err(self.err("expected a field")),
        }
    }
}

pub fn parse(src: &str, w: &WeilAlgebra) -> Result<State> {
    let mut p = Parser { toks: lex(src)?, pos: 0, w, src };
    let s = p.sum()?;
    if p.pos != p.toks.len() {
        return Err(p.err("trailing input"));
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use chiral_core::lie::LieAlgebra;
    use chiral_core::vertex::Family;

    #[test]
    fn vocabulary() {
        let w = WeilAlgebra::with_default_form(LieAlgebra::sl2());
        assert_eq!(parse("1", &w).unwrap(), State::vacuum());
        assert_eq!(parse("D", &w).unwrap(), w.d());
        assert_eq!(parse("b(x) c(y)", &w).unwrap(), w.gs.wick(&w.gen(Family::B, 0), &w.gen(Family::C, 2)));
        assert_eq!(parse("d/dz gamma(h)", &w).unwrap(), w.gs.derivative(&w.gen(Family::Gamma, 1)));
        assert_eq!(parse("1/2 J - 1/2 J", &w).unwrap(), State::zero());
        assert_eq!(parse("2 (b(x) + b(x))", &w).unwrap(), w.gen(Family::B, 0).scaled(&Q::int(4)));
    }

    #[test]
    fn errors() {
        let w = WeilAlgebra::with_default_form(LieAlgebra::sl2());
        assert!(parse("nope", &w).is_err());
        assert!(parse("b(q)", &w).is_err());
        assert!(parse("b(x", &w).is_err());
        assert!(parse("(D", &w).is_err());
        assert!(parse("", &w).is_err());
    }
}
