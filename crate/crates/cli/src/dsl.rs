//! The formula language.
//!
//! ```text
//! formula := ["E" ident+ ":"] eq ("&" eq)*
//! eq      := lin "=" lin
//! lin     := ["-"] term (("+" | "-") term)*
//! term    := [coef "*"] ident | coef
//! coef    := int | "#" int
//! ```
//!
//! Integers are reduced into the ring. `#i` names the ring element with
//! carrier index `i`, for elements outside the prime subring. A product
//! `c*x` means the scalar action on the formula's side. Free variables are
//! the identifiers not bound by `E`, numbered in order of first appearance.
//! Equations that reduce to `0 = 0` are dropped.

use std::fmt;

use ppdual_core::{FiniteRing, PPFormula, Side};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub struct DslError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for DslError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.message)
    }
}

#[derive(Clone, Debug)]
pub struct ParsedFormula {
    pub source: String,
    pub formula: PPFormula,
    pub free_names: Vec<String>,
    pub bound_names: Vec<String>,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Int(u128),
    Hash(u128),
    Plus,
    Minus,
    Star,
    Eq,
    Amp,
    Colon,
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "identifier {s:?}"),
            Tok::Int(n) => write!(f, "integer {n}"),
            Tok::Hash(n) => write!(f, "element #{n}"),
            Tok::Plus => f.write_str("'+'"),
            Tok::Minus => f.write_str("'-'"),
            Tok::Star => f.write_str("'*'"),
            Tok::Eq => f.write_str("'='"),
            Tok::Amp => f.write_str("'&'"),
            Tok::Colon => f.write_str("':'"),
            Tok::End => f.write_str("end of input"),
        }
    }
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn err(line: usize, column: usize, message: impl Into<String>) -> DslError {
    DslError {
        line,
        column,
        message: message.into(),
    }
}

fn lex(text: &str) -> Result<Vec<Spanned>, DslError> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        let single = match c {
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '=' => Some(Tok::Eq),
            '&' => Some(Tok::Amp),
            ':' => Some(Tok::Colon),
            _ => None,
        };
        if let Some(tok) = single {
            out.push(Spanned { tok, line: l0, column: c0 });
            i += 1;
            col += 1;
            continue;
        }
        let hash = c == '#';
        if hash || c.is_ascii_digit() {
            let start = if hash { i + 1 } else { i };
            let mut j = start;
            while j < chars.len() && chars[j].is_ascii_digit() {
                j += 1;
            }
            if j == start {
                return Err(err(l0, c0, "expected digits after '#'"));
            }
            let digits: String = chars[start..j].iter().collect();
            let n: u128 = digits
                .parse()
                .map_err(|_| err(l0, c0, format!("integer {digits} is too large")))?;
            out.push(Spanned {
                tok: if hash { Tok::Hash(n) } else { Tok::Int(n) },
                line: l0,
                column: c0,
            });
            col += j - i;
            i = j;
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let mut j = i;
            while j < chars.len() && (chars[j].is_alphanumeric() || chars[j] == '_' || chars[j] == '\'') {
                j += 1;
            }
            out.push(Spanned {
                tok: Tok::Ident(chars[i..j].iter().collect()),
                line: l0,
                column: c0,
            });
            col += j - i;
            i = j;
            continue;
        }
        return Err(err(l0, c0, format!("unexpected character {c:?}")));
    }
    out.push(Spanned { tok: Tok::End, line, column: col });
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Spanned>,
    pos: usize,
    ring: &'a FiniteRing,
    free: Vec<String>,
    bound: Vec<String>,
}

/// One equation moved to the form `Σ c_v·v = 0`, keyed by variable name.
type Row = Vec<(String, usize)>;

impl Parser<'_> {
    fn peek(&self) -> &Spanned {
        &self.toks[self.pos]
    }

    fn next(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if t.tok != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok) -> Result<(), DslError> {
        let t = self.next();
        if t.tok == want {
            Ok(())
        } else {
            Err(err(t.line, t.column, format!("expected {want}, found {}", t.tok)))
        }
    }

    fn coefficient(&self, t: &Spanned) -> Result<usize, DslError> {
        match t.tok {
            Tok::Int(n) => {
                let ch = self.ring.characteristic() as u128;
                Ok(self.ring.from_int((n % ch) as i64))
            }
            Tok::Hash(n) => {
                if n < self.ring.size() as u128 {
                    Ok(n as usize)
                } else {
                    Err(err(
                        t.line,
                        t.column,
                        format!("unknown ring element #{n}: {} has {} elements", self.ring.name(), self.ring.size()),
                    ))
                }
            }
            _ => unreachable!("only called on coefficient tokens"),
        }
    }

    fn binder(&mut self) -> Result<(), DslError> {
        let is_binder = matches!(&self.peek().tok, Tok::Ident(s) if s == "E")
            && matches!(self.toks[self.pos + 1].tok, Tok::Ident(_));
        if !is_binder {
            return Ok(());
        }
        self.next();
        while let Tok::Ident(name) = self.peek().tok.clone() {
            let t = self.next();
            if self.bound.contains(&name) {
                return Err(err(t.line, t.column, format!("variable {name} is bound twice")));
            }
            self.bound.push(name);
        }
        self.expect(Tok::Colon)
    }

    fn add_term(&self, row: &mut Row, name: &str, c: usize) {
        match row.iter_mut().find(|(n, _)| n == name) {
            Some((_, acc)) => *acc = self.ring.add(*acc, c),
            None => row.push((name.to_string(), c)),
        }
    }

    fn term(&mut self, row: &mut Row, negate: bool) -> Result<(), DslError> {
        let t = self.next();
        let (c, var) = match &t.tok {
            Tok::Ident(name) => (self.ring.one(), Some((name.clone(), t.clone()))),
            Tok::Int(_) | Tok::Hash(_) => {
                let c = self.coefficient(&t)?;
                if self.peek().tok == Tok::Star {
                    self.next();
                    let v = self.next();
                    match &v.tok {
                        Tok::Ident(name) => (c, Some((name.clone(), v.clone()))),
                        other => return Err(err(v.line, v.column, format!("expected a variable, found {other}"))),
                    }
                } else {
                    (c, None)
                }
            }
            other => return Err(err(t.line, t.column, format!("expected a term, found {other}"))),
        };
        let c = if negate { self.ring.neg(c) } else { c };
        match var {
            Some((name, _)) => {
                if !self.bound.contains(&name) && !self.free.contains(&name) {
                    self.free.push(name.clone());
                }
                self.add_term(row, &name, c);
            }
            None if c != self.ring.zero() => {
                return Err(err(t.line, t.column, "a constant term must be 0"));
            }
            None => {}
        }
        Ok(())
    }

    fn lin(&mut self, row: &mut Row, negate: bool) -> Result<(), DslError> {
        let mut sign = negate;
        if self.peek().tok == Tok::Minus {
            self.next();
            sign = !sign;
        }
        self.term(row, sign)?;
        loop {
            match self.peek().tok {
                Tok::Plus => {
                    self.next();
                    self.term(row, negate)?;
                }
                Tok::Minus => {
                    self.next();
                    self.term(row, !negate)?;
                }
                _ => return Ok(()),
            }
        }
    }

    fn equation(&mut self) -> Result<Row, DslError> {
        let mut row = Row::new();
        self.lin(&mut row, false)?;
        self.expect(Tok::Eq)?;
        self.lin(&mut row, true)?;
        Ok(row)
    }
}

pub fn parse_formula(text: &str, ring: &FiniteRing, side: Side) -> Result<ParsedFormula, DslError> {
    if text.trim().is_empty() {
        return Err(err(1, 1, "empty formula"));
    }
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
        ring,
        free: Vec::new(),
        bound: Vec::new(),
    };
    p.binder()?;
    let mut rows = vec![p.equation()?];
    while p.peek().tok == Tok::Amp {
        p.next();
        rows.push(p.equation()?);
    }
    let t = p.peek().clone();
    if t.tok != Tok::End {
        return Err(err(t.line, t.column, format!("expected '&' or end of input, found {}", t.tok)));
    }
    if p.free.is_empty() {
        return Err(err(1, 1, "the formula has no free variable"));
    }
    rows.retain(|r| r.iter().any(|(_, c)| *c != ring.zero()));
    let k = rows.len();
    let coeff = |names: &[String]| -> Vec<usize> {
        let mut out = vec![ring.zero(); names.len() * k];
        for (j, row) in rows.iter().enumerate() {
            for (name, c) in row {
                if let Some(i) = names.iter().position(|n| n == name) {
                    out[i * k + j] = *c;
                }
            }
        }
        out
    };
    let formula = PPFormula::new(ring, side, p.free.len(), p.bound.len(), k, coeff(&p.free), coeff(&p.bound))
        .map_err(|e| err(1, 1, e.to_string()))?;
    Ok(ParsedFormula {
        source: text.to_string(),
        formula,
        free_names: p.free,
        bound_names: p.bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use ppdual_core::{pp_solve, ring_zmod, upper_triangular_f2, FiniteModule};

    #[test]
    fn divisibility_and_annihilation() {
        let r = ring_zmod(4).unwrap();
        let f = parse_formula("E y : v = 2*y", &r, Side::Right).unwrap().formula;
        assert_eq!((f.free(), f.bound(), f.constraints()), (1, 1, 1));
        let g = parse_formula("2*v = 0", &r, Side::Right).unwrap().formula;
        assert_eq!((g.free(), g.bound(), g.constraints()), (1, 0, 1));
        let m = FiniteModule::regular(&r, Side::Right);
        assert_eq!(pp_solve(&f, &m).unwrap().to_set().to_vec(), vec![0, 2]);
        assert_eq!(pp_solve(&g, &m).unwrap().to_set().to_vec(), vec![0, 2]);
    }

    #[test]
    fn chained_equations_define_everything() {
        let r = ring_zmod(6).unwrap();
        let p = parse_formula("E y1 y2 : v + y1 = 0 & y1 - y2 = 0", &r, Side::Left).unwrap();
        let f = &p.formula;
        assert_eq!((f.free(), f.bound(), f.constraints()), (1, 2, 2));
        assert_eq!(p.bound_names, vec!["y1", "y2"]);
        let m = FiniteModule::regular(&r, Side::Left);
        assert_eq!(pp_solve(f, &m).unwrap().len(), 6);
    }

    #[test]
    fn integers_reduce_and_hash_names_elements() {
        let r = ring_zmod(4).unwrap();
        let a = parse_formula("6*v = 0", &r, Side::Left).unwrap().formula;
        let b = parse_formula("2*v = 0", &r, Side::Left).unwrap().formula;
        assert_eq!(a, b);
        let ut = upper_triangular_f2();
        assert!(parse_formula("#3*v = 0", &ut, Side::Left).is_ok());
        let e = parse_formula("#9*v = 0", &ut, Side::Left).unwrap_err();
        assert_eq!((e.line, e.column), (1, 1));
        assert!(e.message.contains("unknown ring element"));
    }

    #[test]
    fn errors_carry_positions() {
        let r = ring_zmod(4).unwrap();
        let e = parse_formula("E y :\n v = 2*", &r, Side::Left).unwrap_err();
        assert_eq!((e.line, e.column), (2, 8));
        let e = parse_formula("v = 0 & w", &r, Side::Left).unwrap_err();
        assert_eq!((e.line, e.column), (1, 10));
        let e = parse_formula("E y : y = 0", &r, Side::Left).unwrap_err();
        assert!(e.message.contains("no free variable"));
        let e = parse_formula("v = 1", &r, Side::Left).unwrap_err();
        assert_eq!((e.line, e.column), (1, 5));
        assert!(parse_formula("   ", &r, Side::Left).is_err());
        assert!(parse_formula("v ? 0", &r, Side::Left).is_err());
    }

    #[test]
    fn trivial_equations_are_dropped() {
        let r = ring_zmod(3).unwrap();
        let f = parse_formula("v = v & 3*v = 0", &r, Side::Left).unwrap().formula;
        assert_eq!(f.constraints(), 0);
    }
}
