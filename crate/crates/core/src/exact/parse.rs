//! Parser for the polynomial input grammar.
//!
//! ```text
//! expr   := term (('+'|'-') term)*
//! term   := factor ('*' factor)*        (implicit multiplication accepted)
//! factor := base ('^' nat)?
//! base   := nat | nat '/' nat | 'x' | 'y' | '(' expr ')'
//! ```
//!
//! Whitespace is insignificant. Anything outside the grammar is rejected with
//! a position-carrying error; in particular `/` between non-numeric factors.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};

use super::bipoly::{BiPoly, Var};
use super::rat::Rat;

const MAX_EXP: u64 = 1 << 16;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    X,
    Y,
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LPar,
    RPar,
}

struct Lexer {
    toks: Vec<(usize, Tok)>,
    pos: usize,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = text.as_bytes();
    let mut toks = vec![];
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n: BigInt = text[start..i].parse().unwrap();
                toks.push((start, Tok::Num(n)));
            }
            'x' => {
                toks.push((i, Tok::X));
                i += 1;
            }
            'y' => {
                toks.push((i, Tok::Y));
                i += 1;
            }
            '+' => {
                toks.push((i, Tok::Plus));
                i += 1;
            }
            '-' => {
                toks.push((i, Tok::Minus));
                i += 1;
            }
            '*' => {
                toks.push((i, Tok::Star));
                i += 1;
            }
            '^' => {
                toks.push((i, Tok::Caret));
                i += 1;
            }
            '/' => {
                toks.push((i, Tok::Slash));
                i += 1;
            }
            '(' => {
                toks.push((i, Tok::LPar));
                i += 1;
            }
            ')' => {
                toks.push((i, Tok::RPar));
                i += 1;
            }
            c if c.is_ascii_alphabetic() => {
                return Err(Error::Parse {
                    pos: i,
                    msg: format!("unknown variable '{}'", c),
                });
            }
            _ => {
                return Err(Error::Parse {
                    pos: i,
                    msg: format!("unexpected character '{}'", c),
                });
            }
        }
    }
    Ok(toks)
}

impl Lexer {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }
    fn peek_pos(&self) -> usize {
        self.toks
            .get(self.pos)
            .map(|(p, _)| *p)
            .unwrap_or(usize::MAX)
    }
    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }
}

/// Parse `text` into a canonical [`BiPoly`] over the rationals.
pub fn parse_poly(text: &str) -> Result<BiPoly<Rat>> {
    let toks = lex(text)?;
    let mut lx = Lexer { toks, pos: 0 };
    let p = parse_expr(&mut lx, text.len())?;
    if lx.peek().is_some() {
        return Err(Error::Parse {
            pos: lx.peek_pos(),
            msg: "trailing input".into(),
        });
    }
    Ok(p)
}

fn parse_expr(lx: &mut Lexer, end: usize) -> Result<BiPoly<Rat>> {
    let mut acc = parse_term(lx, end)?;
    loop {
        match lx.peek() {
            Some(Tok::Plus) => {
                lx.next();
                acc = acc.add(&parse_term(lx, end)?);
            }
            Some(Tok::Minus) => {
                lx.next();
                acc = acc.sub(&parse_term(lx, end)?);
            }
            _ => return Ok(acc),
        }
    }
}

fn starts_factor(t: &Tok) -> bool {
    matches!(t, Tok::Num(_) | Tok::X | Tok::Y | Tok::LPar)
}

fn parse_term(lx: &mut Lexer, end: usize) -> Result<BiPoly<Rat>> {
    let mut acc = parse_factor(lx, end)?;
    loop {
        match lx.peek() {
            Some(Tok::Star) => {
                lx.next();
                acc = acc.mul(&parse_factor(lx, end)?);
            }
            Some(t) if starts_factor(t) => {
                // implicit multiplication, e.g. "2x"
                acc = acc.mul(&parse_factor(lx, end)?);
            }
            _ => return Ok(acc),
        }
    }
}

fn parse_factor(lx: &mut Lexer, end: usize) -> Result<BiPoly<Rat>> {
    let base = parse_base(lx, end)?;
    if let Some(Tok::Caret) = lx.peek() {
        lx.next();
        let pos = lx.peek_pos().min(end);
        match lx.next() {
            Some(Tok::Num(n)) => {
                let e: u64 = n
                    .try_into()
                    .map_err(|_| Error::Parse {
                        pos,
                        msg: "exponent overflow".into(),
                    })?;
                if e > MAX_EXP {
                    return Err(Error::Parse {
                        pos,
                        msg: "exponent overflow".into(),
                    });
                }
                Ok(base.pow(e as u32))
            }
            _ => Err(Error::Parse {
                pos,
                msg: "expected natural-number exponent after '^'".into(),
            }),
        }
    } else {
        Ok(base)
    }
}

fn parse_base(lx: &mut Lexer, end: usize) -> Result<BiPoly<Rat>> {
    let pos = lx.peek_pos().min(end);
    match lx.next() {
        Some(Tok::Num(n)) => {
            if let Some(Tok::Slash) = lx.peek() {
                lx.next();
                let dpos = lx.peek_pos().min(end);
                match lx.next() {
                    Some(Tok::Num(d)) => {
                        if d.is_zero() {
                            return Err(Error::Parse {
                                pos: dpos,
                                msg: "zero denominator".into(),
                            });
                        }
                        Ok(BiPoly::constant(Rat::new(n, d)))
                    }
                    _ => Err(Error::Parse {
                        pos: dpos,
                        msg: "expected natural number after '/'".into(),
                    }),
                }
            } else {
                Ok(BiPoly::constant(Rat::from_integer(n)))
            }
        }
        Some(Tok::X) => Ok(BiPoly::var(Var::X)),
        Some(Tok::Y) => Ok(BiPoly::var(Var::Y)),
        Some(Tok::LPar) => {
            let inner = parse_expr(lx, end)?;
            match lx.next() {
                Some(Tok::RPar) => Ok(inner),
                _ => Err(Error::Parse {
                    pos,
                    msg: "unclosed parenthesis".into(),
                }),
            }
        }
        Some(t) => Err(Error::Parse {
            pos,
            msg: format!("unexpected token {:?}", t),
        }),
        None => Err(Error::Parse {
            pos: end,
            msg: "unexpected end of input".into(),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic() {
        let p = parse_poly("x^3+y^2").unwrap();
        assert_eq!(p, BiPoly::from_int_terms(&[(1, 3, 0), (1, 0, 2)]));
    }

    #[test]
    fn zero() {
        assert!(parse_poly("0").unwrap().is_zero());
    }

    #[test]
    fn division_rejected() {
        let err = parse_poly("x/y").unwrap_err();
        match err {
            Error::Parse { pos, .. } => assert_eq!(pos, 1),
            e => panic!("expected parse error, got {e:?}"),
        }
    }

    #[test]
    fn rational_coefficients_and_implicit_mul() {
        let p = parse_poly("1/2 x y + 2x").unwrap();
        let q = parse_poly("1/2*x*y + 2*x").unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn parens_and_subtraction() {
        let p = parse_poly("(x+y)^2 - x^2 - y^2").unwrap();
        assert_eq!(p, parse_poly("2*x*y").unwrap());
    }

    #[test]
    fn unknown_variable() {
        assert!(matches!(parse_poly("x+z"), Err(Error::Parse { pos: 2, .. })));
    }

    #[test]
    fn exponent_overflow() {
        assert!(parse_poly("x^65537").is_err());
        assert!(parse_poly("x^65536").is_ok());
    }

    #[test]
    fn leading_minus_is_rejected() {
        // The grammar starts with a term; a unary minus is not part of it.
        assert!(parse_poly("-x").is_err());
        assert!(parse_poly("0-x").is_ok());
    }
}
