//! Lexer and recursive-descent parser for the concrete grammar.
//!
//! ```text
//! formula := iff
//! iff     := impl ("<=>" impl)*
//! impl    := or ("=>" impl)?
//! or      := and ("|" and)*
//! and     := unary ("&" unary)*
//! unary   := "~" unary | "N" unary | ("forall"|"exists") IDENT formula | primary
//! primary := "(" formula (")" | ("~>" | "~>[" RATIONAL "]") formula ")") | atom
//! atom    := "true" | "false" | IDENT "(" term ("," term)* ")" | IDENT
//!          | term ("=" | "!=") term
//! ```
//!
//! Precedence is `~` > `&` > `|` > `=>` > `<=>`; conditionals appear only
//! inside explicit parentheses; quantifiers bind the longest formula.
//! Identifiers are classified by the vocabulary: declared names are
//! predicates, functions, or constants, and anything else in term position
//! is a variable.

use super::{Formula, Level, Term, Vocabulary};
use num::{BigInt, BigRational, One};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
#[error("parse error at offset {pos}: {msg}")]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

fn err<T>(pos: usize, msg: impl fmt::Display) -> Result<T, ParseError> {
    Err(ParseError {
        pos,
        msg: msg.to_string(),
    })
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    KwForall,
    KwExists,
    KwTrue,
    KwFalse,
    KwN,
    LParen,
    RParen,
    Comma,
    Tilde,
    Amp,
    Bar,
    Arrow,
    DArrow,
    CondArrow,
    CondArrowLevel(Level),
    Eq,
    Neq,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tok::Ident(s) => return write!(f, "`{s}`"),
            Tok::KwForall => "`forall`",
            Tok::KwExists => "`exists`",
            Tok::KwTrue => "`true`",
            Tok::KwFalse => "`false`",
            Tok::KwN => "`N`",
            Tok::LParen => "`(`",
            Tok::RParen => "`)`",
            Tok::Comma => "`,`",
            Tok::Tilde => "`~`",
            Tok::Amp => "`&`",
            Tok::Bar => "`|`",
            Tok::Arrow => "`=>`",
            Tok::DArrow => "`<=>`",
            Tok::CondArrow => "`~>`",
            Tok::CondArrowLevel(_) => "`~>[..]`",
            Tok::Eq => "`=`",
            Tok::Neq => "`!=`",
        };
        write!(f, "{s}")
    }
}

fn lex(input: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = input.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\r' | '\n' => i += 1,
            '(' => {
                toks.push((i, Tok::LParen));
                i += 1;
            }
            ')' => {
                toks.push((i, Tok::RParen));
                i += 1;
            }
            ',' => {
                toks.push((i, Tok::Comma));
                i += 1;
            }
            '&' => {
                toks.push((i, Tok::Amp));
                i += 1;
            }
            '|' => {
                toks.push((i, Tok::Bar));
                i += 1;
            }
            '~' => {
                if bytes.get(i + 1) == Some(&b'>') {
                    if bytes.get(i + 2) == Some(&b'[') {
                        let start = i + 3;
                        let mut j = start;
                        while j < bytes.len() && bytes[j] != b']' {
                            j += 1;
                        }
                        if j == bytes.len() {
                            return err(i, "unterminated level bracket");
                        }
                        let level = parse_level(input[start..j].trim())
                            .map_err(|e| ParseError { pos: start, msg: e.msg })?;
                        toks.push((i, Tok::CondArrowLevel(level)));
                        i = j + 1;
                    } else {
                        toks.push((i, Tok::CondArrow));
                        i += 2;
                    }
                } else {
                    toks.push((i, Tok::Tilde));
                    i += 1;
                }
            }
            '=' => {
                if bytes.get(i + 1) == Some(&b'>') {
                    toks.push((i, Tok::Arrow));
                    i += 2;
                } else {
                    toks.push((i, Tok::Eq));
                    i += 1;
                }
            }
            '<' => {
                if bytes.get(i + 1) == Some(&b'=') && bytes.get(i + 2) == Some(&b'>') {
                    toks.push((i, Tok::DArrow));
                    i += 3;
                } else {
                    return err(i, "expected `<=>`");
                }
            }
            '!' => {
                if bytes.get(i + 1) == Some(&b'=') {
                    toks.push((i, Tok::Neq));
                    i += 2;
                } else {
                    return err(i, "expected `!=`");
                }
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < bytes.len()
                    && ((bytes[i] as char).is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                let word = &input[start..i];
                let tok = match word {
                    "forall" => Tok::KwForall,
                    "exists" => Tok::KwExists,
                    "true" => Tok::KwTrue,
                    "false" => Tok::KwFalse,
                    "N" => Tok::KwN,
                    _ => Tok::Ident(word.to_owned()),
                };
                toks.push((start, tok));
            }
            other => return err(i, format!("unexpected character `{other}`")),
        }
    }
    Ok(toks)
}

/// Parse a rational literal: `p/q`, a decimal such as `0.3`, or an integer.
pub fn parse_level(text: &str) -> Result<Level, ParseError> {
    let bad = |msg: &str| ParseError { pos: 0, msg: format!("bad level `{text}`: {msg}") };
    let rational = if let Some((num, den)) = text.split_once('/') {
        let n: BigInt = num.trim().parse().map_err(|_| bad("numerator"))?;
        let d: BigInt = den.trim().parse().map_err(|_| bad("denominator"))?;
        if d <= BigInt::from(0) {
            return Err(bad("denominator must be positive"));
        }
        BigRational::new(n, d)
    } else if let Some((int, frac)) = text.split_once('.') {
        let int_part: BigInt = if int.is_empty() {
            BigInt::from(0)
        } else {
            int.parse().map_err(|_| bad("integer part"))?
        };
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad("fractional part"));
        }
        let scale = BigInt::from(10).pow(frac.len() as u32);
        let frac_part: BigInt = frac.parse().map_err(|_| bad("fractional part"))?;
        BigRational::new(int_part * &scale + frac_part, scale)
    } else {
        let n: BigInt = text.trim().parse().map_err(|_| bad("integer"))?;
        BigRational::new(n, BigInt::one())
    };
    Level::new(rational).map_err(|e| ParseError { pos: 0, msg: e.to_string() })
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    idx: usize,
    vocab: &'a Vocabulary,
    end: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.idx).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.idx).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.idx).map(|(_, t)| t.clone());
        if t.is_some() {
            self.idx += 1;
        }
        t
    }

    fn expect(&mut self, want: &Tok) -> Result<(), ParseError> {
        match self.next() {
            Some(ref t) if t == want => Ok(()),
            Some(t) => err(self.toks[self.idx - 1].0, format!("expected {want}, found {t}")),
            None => err(self.end, format!("expected {want}, found end of input")),
        }
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.impl_level()?;
        while self.peek() == Some(&Tok::DArrow) {
            self.next();
            let rhs = self.impl_level()?;
            lhs = Formula::iff(lhs, rhs);
        }
        Ok(lhs)
    }

    fn impl_level(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.or_level()?;
        if self.peek() == Some(&Tok::Arrow) {
            self.next();
            let rhs = self.impl_level()?;
            Ok(Formula::implies(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn or_level(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.and_level()?;
        while self.peek() == Some(&Tok::Bar) {
            self.next();
            let rhs = self.and_level()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn and_level(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        while self.peek() == Some(&Tok::Amp) {
            self.next();
            let rhs = self.unary()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Some(Tok::Tilde) => {
                self.next();
                Ok(Formula::not(self.unary()?))
            }
            Some(Tok::KwN) => {
                self.next();
                Ok(Formula::almost_surely(self.unary()?))
            }
            Some(Tok::KwForall) | Some(Tok::KwExists) => {
                let is_forall = self.next() == Some(Tok::KwForall);
                let pos = self.pos();
                let var = match self.next() {
                    Some(Tok::Ident(v)) => v,
                    other => {
                        return err(
                            pos,
                            format!(
                                "expected variable after quantifier, found {}",
                                other.map_or("end of input".into(), |t| t.to_string())
                            ),
                        )
                    }
                };
                let body = self.formula()?;
                Ok(if is_forall {
                    Formula::forall(&var, body)
                } else {
                    Formula::exists(&var, body)
                })
            }
            Some(Tok::LParen) => {
                self.next();
                let first = self.formula()?;
                match self.next() {
                    Some(Tok::RParen) => Ok(first),
                    Some(Tok::CondArrow) => {
                        let second = self.formula()?;
                        self.expect(&Tok::RParen)?;
                        Ok(Formula::cond(first, second))
                    }
                    Some(Tok::CondArrowLevel(level)) => {
                        let second = self.formula()?;
                        self.expect(&Tok::RParen)?;
                        Ok(Formula::cond_level(first, second, level))
                    }
                    Some(t) => err(
                        self.toks[self.idx - 1].0,
                        format!("expected `)`, `~>`, or `~>[..]`, found {t}"),
                    ),
                    None => err(self.end, "unclosed parenthesis"),
                }
            }
            Some(Tok::KwTrue) => {
                self.next();
                self.maybe_equality(Formula::True)
            }
            Some(Tok::KwFalse) => {
                self.next();
                self.maybe_equality(Formula::False)
            }
            Some(Tok::Ident(_)) => self.atom(),
            Some(t) => err(self.pos(), format!("unexpected token {t}")),
            None => err(self.end, "unexpected end of input"),
        }
    }

    // true/false never start a term, so nothing to do here; kept as a
    // separate hook so the error message points at the `=` if one follows.
    fn maybe_equality(&mut self, f: Formula) -> Result<Formula, ParseError> {
        match self.peek() {
            Some(Tok::Eq) | Some(Tok::Neq) => {
                err(self.pos(), "`true`/`false` cannot appear in an equality")
            }
            _ => Ok(f),
        }
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        let pos = self.pos();
        let name = match self.next() {
            Some(Tok::Ident(n)) => n,
            _ => unreachable!("atom() called on non-identifier"),
        };
        if let Some(arity) = self.vocab.predicate_arity(&name) {
            let args = if self.peek() == Some(&Tok::LParen) {
                self.next();
                let mut args = Vec::new();
                if self.peek() == Some(&Tok::RParen) {
                    self.next();
                } else {
                    loop {
                        args.push(self.term()?);
                        match self.next() {
                            Some(Tok::Comma) => continue,
                            Some(Tok::RParen) => break,
                            Some(t) => {
                                return err(
                                    self.toks[self.idx - 1].0,
                                    format!("expected `,` or `)`, found {t}"),
                                )
                            }
                            None => return err(self.end, "unclosed argument list"),
                        }
                    }
                }
                args
            } else {
                Vec::new()
            };
            if args.len() != arity {
                return err(
                    pos,
                    format!(
                        "predicate `{name}` has arity {arity} but got {} arguments",
                        args.len()
                    ),
                );
            }
            return Ok(Formula::Atom(name, args));
        }
        // not a predicate: parse as a term and require an equality
        let lhs = self.term_with_head(pos, name)?;
        let negated = match self.next() {
            Some(Tok::Eq) => false,
            Some(Tok::Neq) => true,
            Some(t) => {
                return err(
                    self.toks[self.idx - 1].0,
                    format!("expected `=` or `!=` after term, found {t}"),
                )
            }
            None => return err(self.end, "expected `=` or `!=` after term"),
        };
        let rhs = self.term()?;
        let eq = Formula::Equal(lhs, rhs);
        Ok(if negated { Formula::not(eq) } else { eq })
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        let pos = self.pos();
        match self.next() {
            Some(Tok::Ident(name)) => self.term_with_head(pos, name),
            Some(t) => err(pos, format!("expected term, found {t}")),
            None => err(self.end, "expected term, found end of input"),
        }
    }

    fn term_with_head(&mut self, pos: usize, name: String) -> Result<Term, ParseError> {
        if let Some(arity) = self.vocab.function_arity(&name) {
            self.expect(&Tok::LParen)?;
            let mut args = Vec::new();
            loop {
                args.push(self.term()?);
                match self.next() {
                    Some(Tok::Comma) => continue,
                    Some(Tok::RParen) => break,
                    Some(t) => {
                        return err(
                            self.toks[self.idx - 1].0,
                            format!("expected `,` or `)`, found {t}"),
                        )
                    }
                    None => return err(self.end, "unclosed argument list"),
                }
            }
            if args.len() != arity {
                return err(
                    pos,
                    format!(
                        "function `{name}` has arity {arity} but got {} arguments",
                        args.len()
                    ),
                );
            }
            Ok(Term::Apply(name, args))
        } else if self.vocab.is_constant(&name) {
            Ok(Term::Constant(name))
        } else if self.peek() == Some(&Tok::LParen) {
            err(pos, format!("undeclared symbol `{name}` used with arguments"))
        } else {
            Ok(Term::Variable(name))
        }
    }
}

/// Parse a formula against a vocabulary.  Identifiers not declared in the
/// vocabulary are variables; applying an undeclared symbol is an error.
pub fn parse_formula(text: &str, vocab: &Vocabulary) -> Result<Formula, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        idx: 0,
        vocab,
        end: text.len(),
    };
    let f = p.formula()?;
    if let Some(t) = p.peek() {
        return err(p.pos(), format!("unexpected trailing {t}"));
    }
    Ok(f)
}

/// Parse a bare term (used for rule parameters).
pub fn parse_term(text: &str, vocab: &Vocabulary) -> Result<Term, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        idx: 0,
        vocab,
        end: text.len(),
    };
    let t = p.term()?;
    if let Some(tok) = p.peek() {
        return err(p.pos(), format!("unexpected trailing {tok}"));
    }
    Ok(t)
}
