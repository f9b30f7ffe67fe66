//! Text grammar for words and automorphism specifications.
//!
//! Word grammar (whitespace and juxtaposition both separate tokens):
//!
//! ```text
//! word := term+
//! term := atom ('^' int)?
//! atom := 'x' posint | '[' word ',' word ']' | '(' word ')'
//! int  := '-'? digit+
//! ```
//!
//! Automorphism specs: `K i j`, `K i j l`, `inner <word>`, `sigma m j s`, or
//! `map x1 -> <word>; ...; inv x1 -> <word>; ...`.

use super::{Automorphism, Word};
use crate::error::{Error, Result};

/// Parse tree for the word grammar.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WordExpr {
    /// x_i
    Gen(usize),
    /// e^k, with k = -1 covering plain group inverses
    Pow(Box<WordExpr>, i64),
    /// juxtaposition
    Cat(Vec<WordExpr>),
    /// [a, b] = a b a^{-1} b^{-1}
    Comm(Box<WordExpr>, Box<WordExpr>),
}

impl WordExpr {
    /// Elaborates the tree into a freely reduced word, checking generator
    /// indices against the rank.
    pub fn eval(&self, rank: usize) -> Result<Word> {
        match self {
            WordExpr::Gen(i) => Word::generator(rank, *i),
            WordExpr::Pow(e, k) => Ok(e.eval(rank)?.pow(*k)),
            WordExpr::Cat(parts) => {
                let mut w = Word::identity(rank);
                for p in parts {
                    w = w.concat(&p.eval(rank)?)?;
                }
                Ok(w)
            }
            WordExpr::Comm(a, b) => Word::commutator(&a.eval(rank)?, &b.eval(rank)?),
        }
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser {
            src: src.as_bytes(),
            pos: 0,
        }
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Parse {
            pos: self.pos,
            msg: msg.into(),
        }
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

    fn bump(&mut self) -> Option<u8> {
        let c = self.peek()?;
        self.pos += 1;
        Some(c)
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        match self.bump() {
            Some(got) if got == c => Ok(()),
            Some(got) => Err(self.err(format!(
                "expected '{}', found '{}'",
                c as char, got as char
            ))),
            None => Err(self.err(format!("expected '{}', found end of input", c as char))),
        }
    }

    fn integer(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        if self.src.get(self.pos) == Some(&b'-') {
            self.pos += 1;
        }
        let digits_start = self.pos;
        while self
            .src
            .get(self.pos)
            .is_some_and(|c| c.is_ascii_digit())
        {
            self.pos += 1;
        }
        if self.pos == digits_start {
            self.pos = start;
            return Err(self.err("expected an integer"));
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        text.parse::<i64>()
            .map_err(|_| self.err("integer out of range"))
    }

    fn word(&mut self) -> Result<WordExpr> {
        let mut parts = Vec::new();
        while let Some(c) = self.peek() {
            if c == b',' || c == b']' || c == b')' {
                break;
            }
            parts.push(self.term()?);
        }
        match parts.len() {
            0 => Err(self.err("expected a word")),
            1 => Ok(parts.pop().unwrap()),
            _ => Ok(WordExpr::Cat(parts)),
        }
    }

    fn term(&mut self) -> Result<WordExpr> {
        let atom = self.atom()?;
        if self.peek() == Some(b'^') {
            self.bump();
            let k = self.integer()?;
            return Ok(WordExpr::Pow(Box::new(atom), k));
        }
        Ok(atom)
    }

    fn atom(&mut self) -> Result<WordExpr> {
        match self.peek() {
            Some(b'x') => {
                self.bump();
                let idx = self.integer()?;
                if idx <= 0 {
                    return Err(self.err("generator index must be positive"));
                }
                Ok(WordExpr::Gen(idx as usize))
            }
            Some(b'[') => {
                self.bump();
                let a = self.word()?;
                self.expect(b',')?;
                let b = self.word()?;
                self.expect(b']')?;
                Ok(WordExpr::Comm(Box::new(a), Box::new(b)))
            }
            Some(b'(') => {
                self.bump();
                let w = self.word()?;
                self.expect(b')')?;
                Ok(w)
            }
            Some(c) => Err(self.err(format!("unexpected character '{}'", c as char))),
            None => Err(self.err("unexpected end of input")),
        }
    }

    fn finish(&mut self) -> Result<()> {
        if let Some(c) = self.peek() {
            return Err(self.err(format!("trailing input starting at '{}'", c as char)));
        }
        Ok(())
    }
}

/// Parses a word expression and elaborates it against the given rank.
pub fn parse_word(text: &str, rank: usize) -> Result<Word> {
    let expr = parse_word_expr(text)?;
    expr.eval(rank)
}

/// Parses the grammar without elaborating (indices checked at eval time).
pub fn parse_word_expr(text: &str) -> Result<WordExpr> {
    let mut p = Parser::new(text);
    let expr = p.word()?;
    p.finish()?;
    Ok(expr)
}

impl Automorphism {
    /// Parses an automorphism specification string.
    ///
    /// Supported forms: `K i j`, `K i j l`, `inner <word>`, `sigma m j s`, and
    /// `map x1 -> <word>; ...; inv x1 -> <word>; ...` (which must list every
    /// generator's image and inverse image).
    pub fn from_spec(spec: &str, rank: usize) -> Result<Self> {
        let trimmed = spec.trim();
        let mut fields = trimmed.split_whitespace();
        match fields.next() {
            Some("K") => {
                let idx: Vec<usize> = fields
                    .map(|t| {
                        t.parse::<usize>().map_err(|_| Error::Parse {
                            pos: 0,
                            msg: format!("bad index '{}' in K spec", t),
                        })
                    })
                    .collect::<Result<_>>()?;
                match idx.as_slice() {
                    [i, j] => Automorphism::magnus_conj(rank, *i, *j),
                    [i, j, l] => Automorphism::magnus_comm(rank, *i, *j, *l),
                    _ => Err(Error::Parse {
                        pos: 0,
                        msg: "K spec takes 2 or 3 indices".into(),
                    }),
                }
            }
            Some("inner") => {
                let rest = trimmed
                    .strip_prefix("inner")
                    .expect("prefix matched")
                    .trim_start();
                let g = parse_word(rest, rank)?;
                Ok(Automorphism::inner(&g))
            }
            Some("sigma") => {
                let nums: Vec<i64> = fields
                    .map(|t| {
                        t.parse::<i64>().map_err(|_| Error::Parse {
                            pos: 0,
                            msg: format!("bad number '{}' in sigma spec", t),
                        })
                    })
                    .collect::<Result<_>>()?;
                match nums.as_slice() {
                    [m, j, s] => Automorphism::kernel_generator(rank, *m, *j as usize, *s as usize),
                    _ => Err(Error::Parse {
                        pos: 0,
                        msg: "sigma spec takes 3 numbers: m j s".into(),
                    }),
                }
            }
            Some("map") => Self::from_map_spec(trimmed, rank),
            _ => Err(Error::Parse {
                pos: 0,
                msg: "expected one of: K, inner, sigma, map".into(),
            }),
        }
    }

    fn from_map_spec(spec: &str, rank: usize) -> Result<Self> {
        let mut images: Vec<Option<Word>> = vec![None; rank];
        let mut inverses: Vec<Option<Word>> = vec![None; rank];
        for entry in spec.split(';') {
            let entry = entry.trim();
            if entry.is_empty() {
                continue;
            }
            let (table, rest) = if let Some(r) = entry.strip_prefix("map") {
                (&mut images, r)
            } else if let Some(r) = entry.strip_prefix("inv") {
                (&mut inverses, r)
            } else {
                return Err(Error::Parse {
                    pos: 0,
                    msg: format!("map entry must start with 'map' or 'inv': '{}'", entry),
                });
            };
            let (lhs, rhs) = rest.split_once("->").ok_or_else(|| Error::Parse {
                pos: 0,
                msg: format!("missing '->' in '{}'", entry),
            })?;
            let lhs = lhs.trim();
            let idx: usize = lhs
                .strip_prefix('x')
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| Error::Parse {
                    pos: 0,
                    msg: format!("left-hand side must be a generator, got '{}'", lhs),
                })?;
            if idx == 0 || idx > rank {
                return Err(Error::IndexOutOfRange { index: idx, rank });
            }
            table[idx - 1] = Some(parse_word(rhs, rank)?);
        }
        let images: Vec<Word> = images
            .into_iter()
            .enumerate()
            .map(|(i, w)| {
                w.ok_or_else(|| Error::Parse {
                    pos: 0,
                    msg: format!("missing image for x{}", i + 1),
                })
            })
            .collect::<Result<_>>()?;
        let inverses: Vec<Word> = inverses
            .into_iter()
            .enumerate()
            .map(|(i, w)| {
                w.ok_or_else(|| Error::Parse {
                    pos: 0,
                    msg: format!("missing inverse image for x{}", i + 1),
                })
            })
            .collect::<Result<_>>()?;
        Automorphism::from_images(rank, images, inverses)
    }
}
