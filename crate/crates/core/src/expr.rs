//! Text form of states.
//!
//! ```text
//! state    := term (("+"|"-") term)*
//! term     := [rational] mode* "|0>"
//! mode     := name digits "_" "{" rational "}"
//! rational := ["-"] digits ["/" digits]
//! name     := "a" | "b" | "c" | "phi" | "psi"
//! ```
//!
//! Mode indices are the conventional ones (`psi1_{-1/2}` in NS, `phi1_{0}` in R).
//! A leading sign is allowed on the first term, and `0` denotes the zero state.

use num_bigint::BigInt;
use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::rational::{format_rational, Rational};
use crate::space::{Gen, Letter, Mode, SpaceSpec};
use crate::state::State;

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Plus,
    Minus,
    Number(Rational),
    Mode { letter: Letter, index: u32, mode_index: Rational },
    Ket,
}

struct Lexer<'a> {
    text: &'a str,
    pos: usize,
}

fn err(offset: usize, message: impl Into<String>) -> Error {
    Error::Parse { offset, message: message.into() }
}

impl<'a> Lexer<'a> {
    fn peek_char(&self) -> Option<char> {
        self.text[self.pos..].chars().next()
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek_char() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn digits(&mut self) -> Option<(usize, &'a str)> {
        let start = self.pos;
        while matches!(self.peek_char(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        (self.pos > start).then(|| (start, &self.text[start..self.pos]))
    }

    fn unsigned_rational(&mut self) -> Result<Rational> {
        let start = self.pos;
        let (_, num) = self.digits().ok_or_else(|| err(start, "expected digits"))?;
        let num: BigInt = num.parse().map_err(|_| err(start, "malformed integer"))?;
        if self.peek_char() == Some('/') {
            self.pos += 1;
            let at = self.pos;
            let (_, den) = self.digits().ok_or_else(|| err(at, "expected denominator digits"))?;
            let den: BigInt = den.parse().map_err(|_| err(at, "malformed integer"))?;
            if den == BigInt::from(0) {
                return Err(err(at, "zero denominator"));
            }
            Ok(Rational::new(num, den))
        } else {
            Ok(Rational::from_integer(num))
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.peek_char() == Some(c) {
            self.pos += c.len_utf8();
            Ok(())
        } else {
            Err(err(self.pos, format!("expected '{c}'")))
        }
    }

    fn next_token(&mut self) -> Result<Option<(usize, Token)>> {
        self.skip_ws();
        let start = self.pos;
        let Some(c) = self.peek_char() else { return Ok(None) };
        let tok = match c {
            '+' => {
                self.pos += 1;
                Token::Plus
            }
            '-' => {
                self.pos += 1;
                Token::Minus
            }
            '0'..='9' => Token::Number(self.unsigned_rational()?),
            '|' => {
                if self.text[self.pos..].starts_with("|0>") {
                    self.pos += 3;
                    Token::Ket
                } else {
                    return Err(err(start, "expected \"|0>\""));
                }
            }
            c if c.is_ascii_alphabetic() => {
                while matches!(self.peek_char(), Some(c) if c.is_ascii_alphabetic()) {
                    self.pos += 1;
                }
                let name = &self.text[start..self.pos];
                let letter = Letter::from_name(name)
                    .ok_or_else(|| err(start, format!("unknown generator name {name:?}")))?;
                let at = self.pos;
                let (_, idx) = self.digits().ok_or_else(|| err(at, "expected generator index"))?;
                let index: u32 = idx.parse().map_err(|_| err(at, "generator index out of range"))?;
                self.expect('_')?;
                self.expect('{')?;
                let negative = if self.peek_char() == Some('-') {
                    self.pos += 1;
                    true
                } else {
                    false
                };
                let mut mode_index = self.unsigned_rational()?;
                if negative {
                    mode_index = -mode_index;
                }
                self.expect('}')?;
                Token::Mode { letter, index, mode_index }
            }
            other => return Err(err(start, format!("unexpected character {other:?}"))),
        };
        Ok(Some((start, tok)))
    }
}

fn tokenize(text: &str) -> Result<Vec<(usize, Token)>> {
    let mut lx = Lexer { text, pos: 0 };
    let mut out = Vec::new();
    while let Some(t) = lx.next_token()? {
        out.push(t);
    }
    Ok(out)
}

/// Parse a state expression in the given space, canonicalizing fermionic order.
pub fn parse_state(text: &str, space: &SpaceSpec) -> Result<State> {
    if text.trim() == "0" {
        return Ok(State::zero());
    }
    let tokens = tokenize(text)?;
    let end = text.len();
    let mut i = 0;
    let mut out = State::zero();
    let mut first = true;
    loop {
        // sign
        let mut sign = Rational::one();
        match tokens.get(i) {
            Some((_, Token::Plus)) if !first => i += 1,
            Some((_, Token::Minus)) => {
                sign = -sign;
                i += 1;
            }
            Some((off, _)) if !first => return Err(err(*off, "expected '+' or '-' between terms")),
            None if first => return Err(err(end, "empty expression")),
            _ => {}
        }
        // coefficient
        let mut coeff = sign;
        if let Some((_, Token::Number(r))) = tokens.get(i) {
            coeff *= r.clone();
            i += 1;
        }
        // modes
        let mut word: Vec<Mode> = Vec::new();
        while let Some((off, Token::Mode { letter, index, mode_index })) = tokens.get(i) {
            let gen = Gen::new(*letter, *index);
            let mode = space.mode_from_index(gen, mode_index).map_err(|e| match e {
                Error::UnknownGenerator { .. } | Error::ModeParity { .. } => {
                    err(*off, e.to_string())
                }
                other => other,
            })?;
            if !mode.is_creation() {
                let e = Error::AnnihilationInKet {
                    name: letter.name().into(),
                    gen_index: *index,
                    index: format_rational(mode_index),
                };
                return Err(err(*off, e.to_string()));
            }
            word.push(mode);
            i += 1;
        }
        match tokens.get(i) {
            Some((_, Token::Ket)) => i += 1,
            Some((off, _)) => return Err(err(*off, "expected a mode or \"|0>\"")),
            None => return Err(err(end, "expected \"|0>\"")),
        }
        out += &State::from_word(&word, coeff);
        first = false;
        if i == tokens.len() {
            return Ok(out);
        }
    }
}

fn format_mode(space: &SpaceSpec, mode: Mode) -> String {
    format!(
        "{}{}_{{{}}}",
        mode.gen.letter.name(),
        mode.gen.index,
        format_rational(&space.conventional_index(mode))
    )
}

/// Canonical text: terms in monomial order, coefficients as `p/q`, `1` omitted.
pub fn format_state(space: &SpaceSpec, state: &State) -> String {
    if state.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, (m, c)) in state.terms().enumerate() {
        let negative = c.is_negative();
        let abs = c.abs();
        if k == 0 {
            if negative {
                out.push('-');
            }
        } else {
            out.push_str(if negative { " - " } else { " + " });
        }
        if !abs.is_one() {
            out.push_str(&format_rational(&abs));
            out.push(' ');
        }
        for &mode in m.modes() {
            out.push_str(&format_mode(space, mode));
            out.push(' ');
        }
        out.push_str("|0>");
    }
    out
}
