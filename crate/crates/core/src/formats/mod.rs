//! Text formats: LTS files, interface specifications, renamings, word
//! acceptors, property files and process expressions.

pub mod aut;
pub mod dfa;
pub mod expr;
pub mod interface;
pub mod property;
pub mod renaming;

use crate::error::{Error, Result};
use crate::label::ActionLabel;

/// A non-blank, non-comment line, trimmed, with its 1-based position.
pub(crate) struct Line<'a> {
    pub number: usize,
    /// Column of the first non-blank character.
    pub column: usize,
    pub text: &'a str,
}

pub(crate) fn significant_lines(text: &str) -> impl Iterator<Item = Line<'_>> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            return None;
        }
        let column = raw.len() - raw.trim_start().len() + 1;
        Some(Line {
            number: i + 1,
            column,
            text: trimmed,
        })
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum TokenKind {
    Symbol(&'static str),
    Word(String),
    Newline,
}

#[derive(Clone, Debug)]
pub(crate) struct Token {
    pub kind: TokenKind,
    pub line: usize,
    pub column: usize,
}

/// Splits `text` into the given symbols and maximal runs of other
/// non-blank characters. `#` starts a comment running to the end of line.
pub(crate) fn lex(text: &str, symbols: &[&'static str], newlines: bool) -> Vec<Token> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let mut chars = line.char_indices().peekable();
        let mut word: Option<(usize, String)> = None;
        let flush = |word: &mut Option<(usize, String)>, out: &mut Vec<Token>| {
            if let Some((col, w)) = word.take() {
                out.push(Token {
                    kind: TokenKind::Word(w),
                    line: i + 1,
                    column: col,
                });
            }
        };
        while let Some(&(at, ch)) = chars.peek() {
            let column = line[..at].chars().count() + 1;
            if ch == '#' {
                break;
            }
            if ch.is_whitespace() {
                flush(&mut word, &mut out);
                chars.next();
                continue;
            }
            if let Some(sym) = symbols.iter().find(|s| line[at..].starts_with(**s)) {
                flush(&mut word, &mut out);
                out.push(Token {
                    kind: TokenKind::Symbol(sym),
                    line: i + 1,
                    column,
                });
                for _ in 0..sym.chars().count() {
                    chars.next();
                }
                continue;
            }
            word.get_or_insert_with(|| (column, String::new())).1.push(ch);
            chars.next();
        }
        flush(&mut word, &mut out);
        if newlines {
            out.push(Token {
                kind: TokenKind::Newline,
                line: i + 1,
                column: line.chars().count() + 1,
            });
        }
    }
    out
}

/// Parses a label token, attaching its position to any error.
pub(crate) fn label_at(text: &str, line: usize, column: usize) -> Result<ActionLabel> {
    ActionLabel::new(text).map_err(|e| Error::parse(line, column, e.to_string()))
}

pub use aut::{parse_lts, write_lts};
pub use dfa::{parse_dfa, write_dfa};
pub use expr::{eval_expr, parse_expr, Environment, MapEnvironment, ProcessExpr};
pub use interface::{parse_interface, write_interface};
pub use property::{parse_property, write_property};
pub use renaming::{parse_renaming, write_renaming};
