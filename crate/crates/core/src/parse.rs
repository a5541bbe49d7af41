//! Textual tree syntax.
//!
//! ```text
//! tree   := IDENT | "tau" | OPNAME "(" tree ("," tree)* ")"
//! OPNAME := xor | seq | int | and | or | loop
//! ```
//!
//! Whitespace is insignificant. The glyph forms produced by
//! [`format_tree_glyphs`] (`×`, `→`, `↔`, `∧`, `∨`, `⟲`, `τ`) are accepted too.

use crate::error::ParseError;
use crate::tree::{Activity, Operator, ProcessTree, TAU_KEYWORD};

pub fn parse_tree(text: &str) -> Result<ProcessTree, ParseError> {
    let mut parser = Parser::new(text);
    parser.skip_ws();
    let tree = parser.tree()?;
    parser.skip_ws();
    if let Some(c) = parser.peek() {
        return Err(parser.syntax(format!("unexpected {c:?} after tree")));
    }
    Ok(tree)
}

pub fn format_tree(tree: &ProcessTree) -> String {
    let mut out = String::new();
    write_tree(tree, false, &mut out);
    out
}

pub fn format_tree_glyphs(tree: &ProcessTree) -> String {
    let mut out = String::new();
    write_tree(tree, true, &mut out);
    out
}

fn write_tree(tree: &ProcessTree, glyphs: bool, out: &mut String) {
    match tree {
        ProcessTree::Activity(a) => out.push_str(a.name()),
        ProcessTree::Tau if glyphs => out.push('τ'),
        ProcessTree::Tau => out.push_str(TAU_KEYWORD),
        ProcessTree::Node(op, children) => {
            out.push_str(if glyphs { op.glyph() } else { op.keyword() });
            out.push('(');
            for (i, child) in children.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                write_tree(child, glyphs, out);
            }
            out.push(')');
        }
    }
}

struct Parser<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    column: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Parser {
            chars: text.chars().peekable(),
            line: 1,
            column: 1,
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.chars.peek().copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.bump();
        }
    }

    fn syntax(&self, message: String) -> ParseError {
        ParseError::Syntax {
            line: self.line,
            column: self.column,
            message,
        }
    }

    fn tree(&mut self) -> Result<ProcessTree, ParseError> {
        let (line, column) = (self.line, self.column);
        let Some(first) = self.peek() else {
            return Err(self.syntax("expected a tree, found end of input".into()));
        };
        if let Some(op) = glyph_operator(first) {
            self.bump();
            return self.node(op, line, column);
        }
        if first == 'τ' {
            self.bump();
            return Ok(ProcessTree::Tau);
        }
        let mut word = String::new();
        while let Some(c) = self.peek().filter(|c| c.is_ascii_alphanumeric() || *c == '_') {
            word.push(c);
            self.bump();
        }
        if word.is_empty() {
            return Err(self.syntax(format!("expected a tree, found {first:?}")));
        }
        self.skip_ws();
        if let Some(op) = Operator::from_keyword(&word).filter(|_| self.peek() == Some('(')) {
            return self.node(op, line, column);
        }
        if word == TAU_KEYWORD {
            return Ok(ProcessTree::Tau);
        }
        Ok(ProcessTree::Activity(
            Activity::new(&word).expect("identifier charset already checked"),
        ))
    }

    fn node(&mut self, op: Operator, line: usize, column: usize) -> Result<ProcessTree, ParseError> {
        self.skip_ws();
        if self.bump() != Some('(') {
            return Err(self.syntax(format!("expected '(' after {op}")));
        }
        let mut children = Vec::new();
        loop {
            self.skip_ws();
            children.push(self.tree()?);
            self.skip_ws();
            match self.bump() {
                Some(',') => continue,
                Some(')') => break,
                Some(c) => return Err(self.syntax(format!("expected ',' or ')', found {c:?}"))),
                None => return Err(self.syntax("unclosed '(' at end of input".into())),
            }
        }
        if children.len() < op.min_children() {
            return Err(ParseError::Arity {
                line,
                column,
                operator: op.keyword().to_string(),
                expected: op.min_children(),
                found: children.len(),
            });
        }
        Ok(ProcessTree::Node(op, children))
    }
}

fn glyph_operator(c: char) -> Option<Operator> {
    Operator::ALL
        .into_iter()
        .find(|op| op.glyph().starts_with(c))
}
