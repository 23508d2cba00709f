// SPDX-License-Identifier: Apache-2.0

//! Parenthesis-light printing shared by formulas and schemas.

use std::borrow::Cow;
use std::fmt;

use super::{CharPattern, Formula, Schema};

/// Binding strength, loosest first.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub(crate) enum Level {
    Top,
    Or,
    And,
    Unary,
}

#[derive(Clone, Copy)]
pub(crate) enum BinOp {
    Or,
    And,
    Impl,
}

pub(crate) enum Shape<'a, T> {
    Leaf(Cow<'a, str>),
    Binary(BinOp, &'a T, &'a T),
    Dia(String, &'a T),
    Box(String, &'a T),
}

pub(crate) trait Tree: Sized {
    fn shape(&self) -> Shape<'_, Self>;
}

impl Tree for Formula {
    fn shape(&self) -> Shape<'_, Self> {
        match self {
            Formula::Atom(p) => Shape::Leaf(Cow::Borrowed(p)),
            Formula::Bottom => Shape::Leaf(Cow::Borrowed("false")),
            Formula::Or(a, b) => Shape::Binary(BinOp::Or, a, b),
            Formula::And(a, b) => Shape::Binary(BinOp::And, a, b),
            Formula::Impl(a, b) => Shape::Binary(BinOp::Impl, a, b),
            Formula::Dia(x, a) => Shape::Dia(x.to_string(), a),
            Formula::Box(x, a) => Shape::Box(x.to_string(), a),
        }
    }
}

impl Tree for Schema {
    fn shape(&self) -> Shape<'_, Self> {
        match self {
            Schema::Meta(m) => Shape::Leaf(Cow::Borrowed(m)),
            Schema::Atom(p) => Shape::Leaf(Cow::Borrowed(p)),
            Schema::Bottom => Shape::Leaf(Cow::Borrowed("false")),
            Schema::Or(a, b) => Shape::Binary(BinOp::Or, a, b),
            Schema::And(a, b) => Shape::Binary(BinOp::And, a, b),
            Schema::Impl(a, b) => Shape::Binary(BinOp::Impl, a, b),
            Schema::Dia(x, a) => Shape::Dia(pattern_text(x), a),
            Schema::Box(x, a) => Shape::Box(pattern_text(x), a),
        }
    }
}

fn pattern_text(x: &CharPattern) -> String {
    x.to_string()
}

pub(crate) fn write_tree<T: Tree>(f: &mut fmt::Formatter<'_>, t: &T, min: Level) -> fmt::Result {
    match t.shape() {
        Shape::Leaf(s) => f.write_str(&s),
        Shape::Dia(x, a) => {
            write!(f, "<{x}>")?;
            write_tree(f, a, Level::Unary)
        }
        Shape::Box(x, a) => {
            write!(f, "[{x}]")?;
            write_tree(f, a, Level::Unary)
        }
        Shape::Binary(op, a, b) => {
            // `&` and `|` associate to the left. `->` parses to the right but
            // a nested implication is always bracketed.
            let (own, left, right, sym) = match op {
                BinOp::Impl => (Level::Top, Level::Or, Level::Or, "->"),
                BinOp::Or => (Level::Or, Level::Or, Level::And, "|"),
                BinOp::And => (Level::And, Level::And, Level::Unary, "&"),
            };
            let parens = own < min;
            if parens {
                f.write_str("(")?;
            }
            write_tree(f, a, left)?;
            write!(f, " {sym} ")?;
            write_tree(f, b, right)?;
            if parens {
                f.write_str(")")?;
            }
            Ok(())
        }
    }
}
