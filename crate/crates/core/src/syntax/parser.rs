// SPDX-License-Identifier: Apache-2.0

//! Recursive-descent parser for formulas and schemas.
//!
//! ```text
//! formula := impl ("<->" impl)*
//! impl    := or ("->" impl)?
//! or      := and ("|" and)*
//! and     := unary ("&" unary)*
//! unary   := "~" unary | "<" char ">" unary | "[" char "]" unary
//!          | atom | "false" | "(" formula ")"
//! char    := ident "-"?
//! ```
//!
//! In schema mode, identifiers starting with an uppercase letter are formula
//! metavariables, and character positions may name character metavariables.

use thiserror::Error;

use super::{Alphabet, CharPattern, Character, Formula, Polarity, Schema};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    /// `column` is 1-based; end of input reports `len + 1`.
    #[error("syntax error at column {column}: {message}")]
    Syntax { column: usize, message: String },
    #[error("undeclared character `{name}` at column {column}")]
    UndeclaredCharacter { name: String, column: usize },
}

impl ParseError {
    pub fn column(&self) -> usize {
        match self {
            ParseError::Syntax { column, .. } | ParseError::UndeclaredCharacter { column, .. } => {
                *column
            }
        }
    }
}

struct Mode<'m> {
    alphabet: Option<&'m Alphabet>,
    char_vars: &'m [&'m str],
    metavariables: bool,
}

struct Parser<'s, 'm> {
    src: &'s [u8],
    pos: usize,
    mode: Mode<'m>,
}

pub(crate) fn parse_formula(
    text: &str,
    alphabet: Option<&Alphabet>,
) -> Result<Formula, ParseError> {
    let mode = Mode {
        alphabet,
        char_vars: &[],
        metavariables: false,
    };
    let tree = Parser::new(text, mode).parse_all()?;
    Ok(tree
        .to_formula()
        .expect("formula mode never produces metavariables"))
}

pub(crate) fn parse_schema(
    text: &str,
    alphabet: Option<&Alphabet>,
    char_vars: &[&str],
) -> Result<Schema, ParseError> {
    let mode = Mode {
        alphabet,
        char_vars,
        metavariables: true,
    };
    Parser::new(text, mode).parse_all()
}

type Res<T> = Result<T, ParseError>;

impl<'s, 'm> Parser<'s, 'm> {
    fn new(text: &'s str, mode: Mode<'m>) -> Self {
        Parser {
            src: text.as_bytes(),
            pos: 0,
            mode,
        }
    }

    fn error<T>(&self, column0: usize, message: impl Into<String>) -> Res<T> {
        Err(ParseError::Syntax {
            column: column0 + 1,
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn looking_at(&mut self, token: &str) -> bool {
        self.skip_ws();
        self.src[self.pos..].starts_with(token.as_bytes())
    }

    fn eat(&mut self, token: &str) -> bool {
        if self.looking_at(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: &str) -> Res<()> {
        if self.eat(token) {
            Ok(())
        } else {
            let found = self.describe_here();
            self.error(self.pos, format!("expected `{token}`, found {found}"))
        }
    }

    fn describe_here(&self) -> String {
        match self.peek() {
            None => "end of input".to_string(),
            Some(c) if c.is_ascii_graphic() => format!("`{}`", c as char),
            Some(_) => "a non-ASCII or control character".to_string(),
        }
    }

    fn parse_all(mut self) -> Res<Schema> {
        let tree = self.formula()?;
        self.skip_ws();
        if self.pos < self.src.len() {
            let found = self.describe_here();
            return self.error(self.pos, format!("unexpected {found}"));
        }
        Ok(tree)
    }

    fn formula(&mut self) -> Res<Schema> {
        let mut lhs = self.implication()?;
        while self.eat("<->") {
            let rhs = self.implication()?;
            lhs = Schema::and(
                Schema::implies(lhs.clone(), rhs.clone()),
                Schema::implies(rhs, lhs),
            );
        }
        Ok(lhs)
    }

    fn implication(&mut self) -> Res<Schema> {
        let lhs = self.disjunction()?;
        if self.eat("->") {
            let rhs = self.implication()?;
            return Ok(Schema::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Res<Schema> {
        let mut lhs = self.conjunction()?;
        while self.eat("|") {
            let rhs = self.conjunction()?;
            lhs = Schema::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Res<Schema> {
        let mut lhs = self.unary()?;
        while self.eat("&") {
            let rhs = self.unary()?;
            lhs = Schema::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Res<Schema> {
        self.skip_ws();
        let start = self.pos;
        match self.peek() {
            Some(b'~') => {
                self.pos += 1;
                let a = self.unary()?;
                Ok(Schema::implies(a, Schema::Bottom))
            }
            Some(b'<') => {
                self.pos += 1;
                let x = self.character()?;
                self.expect(">")?;
                Ok(Schema::Dia(x, Box::new(self.unary()?)))
            }
            Some(b'[') => {
                self.pos += 1;
                let x = self.character()?;
                self.expect("]")?;
                Ok(Schema::Box(x, Box::new(self.unary()?)))
            }
            Some(b'(') => {
                self.pos += 1;
                let inner = self.formula()?;
                self.expect(")")?;
                Ok(inner)
            }
            Some(c) if c.is_ascii_lowercase() => {
                let name = self.identifier();
                if name == "false" {
                    Ok(Schema::Bottom)
                } else {
                    Ok(Schema::Atom(name))
                }
            }
            Some(c) if c.is_ascii_uppercase() && self.mode.metavariables => {
                Ok(Schema::Meta(self.identifier()))
            }
            _ => {
                let found = self.describe_here();
                self.error(start, format!("expected a formula, found {found}"))
            }
        }
    }

    fn identifier(&mut self) -> String {
        let start = self.pos;
        self.pos += 1;
        while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == b'_') {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }

    fn character(&mut self) -> Res<CharPattern> {
        self.skip_ws();
        let start = self.pos;
        if !matches!(self.peek(), Some(c) if c.is_ascii_lowercase()) {
            let found = self.describe_here();
            return self.error(start, format!("expected a character, found {found}"));
        }
        let name = self.identifier();
        self.skip_ws();
        let converse = if self.peek() == Some(b'-') {
            self.pos += 1;
            true
        } else {
            false
        };
        if self.mode.char_vars.contains(&name.as_str()) {
            return Ok(CharPattern::Var { name, converse });
        }
        if let Some(alphabet) = self.mode.alphabet {
            if !alphabet.declares(&name) {
                return Err(ParseError::UndeclaredCharacter {
                    name,
                    column: start + 1,
                });
            }
        }
        let polarity = if converse {
            Polarity::Backward
        } else {
            Polarity::Forward
        };
        Ok(CharPattern::Fixed(Character::new(name, polarity)))
    }
}
