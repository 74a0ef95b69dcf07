//! Textual polynomial grammar.
//!
//! ```text
//! poly  := [sign] term { sign term }
//! term  := coeff [ '*' monom ] | monom
//! coeff := int [ '/' posint ]
//! monom := var [ '^' posint ] [ '*' var [ '^' posint ] ]
//! ```
//!
//! Variables are `x, y` for source polynomials and `u, v` for target ones; a
//! single polynomial may not mix the two sets. Whitespace between tokens is ignored.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::poly::{BPoly, Rat, UPoly, Var};
use crate::{Error, Result};

pub const SOURCE_VARS: [&str; 2] = ["x", "y"];
pub const TARGET_VARS: [&str; 2] = ["u", "v"];

/// Coefficient and exponents of `x^i y^j`.
type Term = (Rat, [u32; 2]);

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    /// Allowed variable sets; the first variable seen fixes the set.
    sets: Vec<Vec<char>>,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str, sets: Vec<Vec<char>>) -> Self {
        Parser {
            src: text.as_bytes(),
            pos: 0,
            sets,
        }
    }

    fn err<T>(&self, expected: &str) -> Result<T> {
        Err(Error::Parse {
            offset: self.pos,
            expected: expected.to_string(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn digits(&mut self, expected: &str) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err(expected);
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(s.parse().expect("digits parse"))
    }

    fn posint(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        let v = self.digits("positive integer")?;
        if v.is_zero() {
            self.pos = start;
            return self.err("positive integer");
        }
        Ok(v)
    }

    fn exponent(&mut self) -> Result<u32> {
        self.skip_ws();
        let start = self.pos;
        let v = self.posint()?;
        u32::try_from(v).or_else(|_| {
            self.pos = start;
            self.err("exponent below 2^32")
        })
    }

    fn is_var(&self, c: u8) -> bool {
        self.sets.iter().any(|s| s.contains(&(c as char)))
    }

    /// Index of the variable within its set, narrowing the allowed sets.
    fn var(&mut self) -> Result<usize> {
        let Some(c) = self.peek() else {
            return self.err(&self.var_names());
        };
        let c = c as char;
        let keep: Vec<Vec<char>> = self.sets.iter().filter(|s| s.contains(&c)).cloned().collect();
        if keep.is_empty() {
            return self.err(&self.var_names());
        }
        self.sets = keep;
        self.pos += 1;
        Ok(self.sets[0].iter().position(|&v| v == c).expect("member"))
    }

    fn var_names(&self) -> String {
        let names: Vec<String> = self
            .sets
            .iter()
            .flat_map(|s| s.iter().map(|c| format!("'{c}'")))
            .collect();
        format!("variable ({})", names.join(", "))
    }

    fn monom(&mut self) -> Result<[u32; 2]> {
        let mut e = [0u32; 2];
        let v = self.var()?;
        e[v] += if self.eat(b'^') { self.exponent()? } else { 1 };
        if self.eat(b'*') {
            let w = self.var()?;
            e[w] += if self.eat(b'^') { self.exponent()? } else { 1 };
        }
        Ok(e)
    }

    fn term(&mut self) -> Result<Term> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let num = self.digits("integer")?;
                let den = if self.eat(b'/') {
                    self.posint()?
                } else {
                    BigInt::one()
                };
                let coeff = Rat::new(num, den);
                let e = if self.eat(b'*') { self.monom()? } else { [0, 0] };
                Ok((coeff, e))
            }
            Some(c) if self.is_var(c) => Ok((Rat::one(), self.monom()?)),
            _ => self.err(&format!("coefficient or {}", self.var_names())),
        }
    }

    fn poly(&mut self) -> Result<Vec<Term>> {
        let mut out = Vec::new();
        let mut neg = if self.eat(b'-') {
            true
        } else {
            self.eat(b'+');
            false
        };
        loop {
            let (c, e) = self.term()?;
            out.push((if neg { -c } else { c }, e));
            match self.peek() {
                None => return Ok(out),
                Some(b'+') => {
                    self.pos += 1;
                    neg = false;
                }
                Some(b'-') => {
                    self.pos += 1;
                    neg = true;
                }
                Some(_) => return self.err("'+', '-' or end of input"),
            }
        }
    }
}

fn parse_terms(text: &str, sets: Vec<Vec<char>>) -> Result<(Vec<Term>, Vec<Vec<char>>)> {
    let mut p = Parser::new(text, sets);
    let terms = p.poly()?;
    Ok((terms, p.sets))
}

fn chars(names: [&str; 2]) -> Vec<char> {
    names
        .iter()
        .map(|n| n.chars().next().expect("nonempty name"))
        .collect()
}

/// Parses with variables `x, y` or `u, v` (both mapped to the two slots of [`BPoly`]).
pub fn parse_poly(text: &str) -> Result<BPoly> {
    let (terms, _) = parse_terms(text, vec![chars(SOURCE_VARS), chars(TARGET_VARS)])?;
    Ok(BPoly::from_terms(terms.into_iter().map(|(c, e)| (c, e[0], e[1]))))
}

/// Parses with exactly the given variable names.
pub fn parse_poly_in(text: &str, names: [&str; 2]) -> Result<BPoly> {
    let (terms, _) = parse_terms(text, vec![chars(names)])?;
    Ok(BPoly::from_terms(terms.into_iter().map(|(c, e)| (c, e[0], e[1]))))
}

/// Parses a univariate polynomial in `var`.
pub fn parse_upoly(text: &str, var: &str) -> Result<UPoly> {
    let v = var.chars().next().expect("nonempty name");
    let (terms, _) = parse_terms(text, vec![vec![v]])?;
    let p = BPoly::from_terms(terms.into_iter().map(|(c, e)| (c, e[0], e[1])));
    Ok(p.as_univariate(Var::X).expect("single variable"))
}

pub fn print_poly(p: &BPoly) -> String {
    p.to_string_with(SOURCE_VARS)
}

pub fn print_target_poly(p: &BPoly) -> String {
    p.to_string_with(TARGET_VARS)
}

pub fn print_upoly(p: &UPoly, var: &str) -> String {
    BPoly::from_upoly(p, Var::X).to_string_with([var, "_"])
}
