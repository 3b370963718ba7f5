//! Strict s-expression reader for trees and shapes.
//!
//! ```text
//! tree    := literal | "(" conn " " tree " " tree ")"
//! literal := "x" index | "(not x" index ")"
//! conn    := "and" | "or"
//! index   := [1-9][0-9]*
//! ```
//!
//! Shapes use the same grammar with `.` in place of literals.

use super::{AndOrTree, Connective, Literal, Shape};
use crate::error::{Error, Result};

struct Reader<'a> {
    text: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn new(text: &'a str) -> Self {
        Reader {
            text: text.as_bytes(),
            pos: 0,
        }
    }

    fn fail<T>(&self, message: impl Into<String>) -> Result<T> {
        let message = if self.pos >= self.text.len() {
            format!("unexpected end of input: {}", message.into())
        } else {
            message.into()
        };
        Err(Error::Parse {
            position: self.pos,
            message,
        })
    }

    fn peek_is(&self, s: &str) -> bool {
        self.text[self.pos..].starts_with(s.as_bytes())
    }

    fn expect(&mut self, s: &str) -> Result<()> {
        if self.peek_is(s) {
            self.pos += s.len();
            Ok(())
        } else {
            self.fail(format!("expected `{s}`"))
        }
    }

    fn index(&mut self) -> Result<u32> {
        let start = self.pos;
        while self.pos < self.text.len() && self.text[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let digits = &self.text[start..self.pos];
        if digits.is_empty() {
            return self.fail("expected a variable index");
        }
        if digits[0] == b'0' {
            self.pos = start;
            return self.fail("variable indices start at 1 and have no leading zeros");
        }
        match std::str::from_utf8(digits).ok().and_then(|s| s.parse().ok()) {
            Some(v) => Ok(v),
            None => {
                self.pos = start;
                self.fail("variable index out of range")
            }
        }
    }

    fn connective(&mut self) -> Result<Connective> {
        if self.peek_is("and ") {
            self.pos += 3;
            Ok(Connective::And)
        } else if self.peek_is("or ") {
            self.pos += 2;
            Ok(Connective::Or)
        } else {
            self.fail("expected `and` or `or`")
        }
    }

    fn tree(&mut self, depth: usize) -> Result<AndOrTree> {
        if depth > MAX_DEPTH {
            return self.fail("nesting too deep");
        }
        if self.peek_is("x") {
            self.pos += 1;
            return Ok(AndOrTree::Leaf(Literal::pos(self.index()?)));
        }
        self.expect("(")?;
        if self.peek_is("not ") {
            self.pos += 4;
            self.expect("x")?;
            let var = self.index()?;
            self.expect(")")?;
            return Ok(AndOrTree::Leaf(Literal::neg(var)));
        }
        let c = self.connective()?;
        self.expect(" ")?;
        let l = self.tree(depth + 1)?;
        self.expect(" ")?;
        let r = self.tree(depth + 1)?;
        self.expect(")")?;
        Ok(AndOrTree::node(c, l, r))
    }

    fn shape(&mut self, depth: usize) -> Result<Shape> {
        if depth > MAX_DEPTH {
            return self.fail("nesting too deep");
        }
        if self.peek_is(".") {
            self.pos += 1;
            return Ok(Shape::Leaf);
        }
        self.expect("(")?;
        let c = self.connective()?;
        self.expect(" ")?;
        let l = self.shape(depth + 1)?;
        self.expect(" ")?;
        let r = self.shape(depth + 1)?;
        self.expect(")")?;
        Ok(Shape::node(c, l, r))
    }

    fn finish(&self) -> Result<()> {
        if self.pos == self.text.len() {
            Ok(())
        } else {
            self.fail("trailing input")
        }
    }
}

const MAX_DEPTH: usize = 10_000;

pub(super) fn parse_tree(text: &str) -> Result<AndOrTree> {
    let mut r = Reader::new(text);
    let t = r.tree(0)?;
    r.finish()?;
    Ok(t)
}

pub(super) fn parse_shape(text: &str) -> Result<Shape> {
    let mut r = Reader::new(text);
    let s = r.shape(0)?;
    r.finish()?;
    Ok(s)
}
