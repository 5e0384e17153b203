//! Property files.
//!
//! ```text
//! condliveness {
//!   C { c }
//!   G {
//!     c g
//!   }
//! }
//! ```
//!
//! Each block lists one word per line as whitespace-separated labels; `ε`
//! or `eps` is the empty word. Instead of words a block may hold a single
//! `@contains <label>` (every word with that label) or `@dfa <file>` (the
//! language of a word acceptor file, resolved by the caller's loader).
//! The sub-blocks of `condliveness` may also be spelled `condition` and
//! `goal`.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::automata::WordDfa;
use crate::error::{Error, Result};
use crate::label::{ActionLabel, Word};
use crate::properties::{PropertySpec, WordSet};

use super::{label_at, lex, Token, TokenKind};

struct Cursor {
    tokens: Vec<Token>,
    at: usize,
}

impl Cursor {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.at)
    }

    fn skip_newlines(&mut self) {
        while matches!(self.peek(), Some(Token { kind: TokenKind::Newline, .. })) {
            self.at += 1;
        }
    }

    fn end_position(&self) -> (usize, usize) {
        self.tokens.last().map_or((1, 1), |t| (t.line, t.column))
    }

    fn error_here(&self, msg: impl Into<String>) -> Error {
        let (line, column) = self.peek().map_or_else(|| self.end_position(), |t| (t.line, t.column));
        Error::parse(line, column, msg)
    }

    fn word(&mut self) -> Result<(String, usize, usize)> {
        match self.peek() {
            Some(Token { kind: TokenKind::Word(w), line, column }) => {
                let out = (w.clone(), *line, *column);
                self.at += 1;
                Ok(out)
            }
            _ => Err(self.error_here("expected a name")),
        }
    }

    fn symbol(&mut self, sym: &str) -> Result<()> {
        match self.peek() {
            Some(Token { kind: TokenKind::Symbol(s), .. }) if *s == sym => {
                self.at += 1;
                Ok(())
            }
            _ => Err(self.error_here(format!("expected `{sym}`"))),
        }
    }
}

/// Parses a property file. `load_dfa` resolves the argument of `@dfa`.
pub fn parse_property(text: &str, load_dfa: &mut dyn FnMut(&str) -> Result<WordDfa>) -> Result<PropertySpec> {
    let mut cur = Cursor {
        tokens: lex(text, &["{", "}"], true),
        at: 0,
    };
    cur.skip_newlines();
    let (kind, line, column) = cur.word()?;
    cur.skip_newlines();
    cur.symbol("{")?;
    let spec = match kind.as_str() {
        "safety" => PropertySpec::Safety(word_set(&mut cur, load_dfa)?),
        "liveness" => PropertySpec::Liveness(word_set(&mut cur, load_dfa)?),
        "condliveness" => {
            let condition = sub_block(&mut cur, &["C", "condition"], load_dfa)?;
            let goal = sub_block(&mut cur, &["G", "goal"], load_dfa)?;
            cur.skip_newlines();
            cur.symbol("}")?;
            PropertySpec::CondLiveness { condition, goal }
        }
        other => {
            return Err(Error::parse(
                line,
                column,
                format!("unknown property kind `{other}` (expected safety, liveness or condliveness)"),
            ))
        }
    };
    cur.skip_newlines();
    if cur.peek().is_some() {
        return Err(cur.error_here("unexpected text after the property"));
    }
    Ok(spec)
}

fn sub_block(cur: &mut Cursor, names: &[&str], load_dfa: &mut dyn FnMut(&str) -> Result<WordDfa>) -> Result<WordSet> {
    cur.skip_newlines();
    let (name, line, column) = cur.word()?;
    if !names.contains(&name.as_str()) {
        return Err(Error::parse(line, column, format!("expected `{}`", names.join("` or `"))));
    }
    cur.skip_newlines();
    cur.symbol("{")?;
    word_set(cur, load_dfa)
}

enum Entry {
    Word(Word),
    Special(WordSet),
}

/// Reads entries up to and including the closing brace.
fn word_set(cur: &mut Cursor, load_dfa: &mut dyn FnMut(&str) -> Result<WordDfa>) -> Result<WordSet> {
    let mut entries: Vec<(Entry, usize, usize)> = Vec::new();
    let mut current: Vec<(String, usize, usize)> = Vec::new();
    loop {
        let tok = cur.peek().cloned().ok_or_else(|| cur.error_here("unclosed `{`"))?;
        cur.at += 1;
        match tok.kind {
            TokenKind::Word(w) => current.push((w, tok.line, tok.column)),
            TokenKind::Newline | TokenKind::Symbol("}") => {
                if !current.is_empty() {
                    entries.push(entry(std::mem::take(&mut current), load_dfa)?);
                }
                if tok.kind == TokenKind::Symbol("}") {
                    break;
                }
            }
            TokenKind::Symbol(s) => return Err(Error::parse(tok.line, tok.column, format!("unexpected `{s}`"))),
        }
    }
    if entries.len() > 1 {
        if let Some((_, line, column)) = entries.iter().find(|(e, ..)| matches!(e, Entry::Special(_))) {
            return Err(Error::parse(*line, *column, "`@contains` and `@dfa` must be the only entry of a block"));
        }
    }
    if let Some((Entry::Special(_), ..)) = entries.first() {
        let Some((Entry::Special(set), ..)) = entries.pop() else { unreachable!() };
        return Ok(set);
    }
    let words: BTreeSet<Word> = entries
        .into_iter()
        .map(|(e, ..)| match e {
            Entry::Word(w) => w,
            Entry::Special(_) => unreachable!(),
        })
        .collect();
    Ok(WordSet::Finite(words))
}

fn entry(fields: Vec<(String, usize, usize)>, load_dfa: &mut dyn FnMut(&str) -> Result<WordDfa>) -> Result<(Entry, usize, usize)> {
    let (head, line, column) = fields[0].clone();
    let single_arg = |what: &str| -> Result<(String, usize, usize)> {
        match &fields[..] {
            [_, arg] => Ok(arg.clone()),
            _ => Err(Error::parse(line, column, format!("`{what}` takes exactly one argument"))),
        }
    };
    let e = match head.as_str() {
        "@contains" => {
            let (l, al, ac) = single_arg("@contains")?;
            Entry::Special(WordSet::Containing(label_at(&l, al, ac)?))
        }
        "@dfa" => {
            let (path, al, ac) = single_arg("@dfa")?;
            let dfa = load_dfa(&path).map_err(|e| Error::parse(al, ac, format!("cannot load `{path}`: {e}")))?;
            Entry::Special(WordSet::Dfa(dfa))
        }
        "ε" | "eps" if fields.len() == 1 => Entry::Word(Word::empty()),
        _ => Entry::Word(Word::new(
            fields
                .iter()
                .map(|(l, al, ac)| label_at(l, *al, *ac))
                .collect::<Result<Vec<ActionLabel>>>()?,
        )),
    };
    Ok((e, line, column))
}

/// Serialises a property; `None` when a set is given by an acceptor, which
/// has no inline form.
pub fn write_property(spec: &PropertySpec) -> Option<String> {
    let mut out = String::new();
    match spec {
        PropertySpec::Safety(set) => block(&mut out, "safety", set, "")?,
        PropertySpec::Liveness(set) => block(&mut out, "liveness", set, "")?,
        PropertySpec::CondLiveness { condition, goal } => {
            out.push_str("condliveness {\n");
            block(&mut out, "C", condition, "  ")?;
            block(&mut out, "G", goal, "  ")?;
            out.push_str("}\n");
        }
    }
    Some(out)
}

fn block(out: &mut String, name: &str, set: &WordSet, indent: &str) -> Option<()> {
    let _ = writeln!(out, "{indent}{name} {{");
    match set {
        WordSet::Finite(words) => {
            for w in words {
                let _ = writeln!(out, "{indent}  {w}");
            }
        }
        WordSet::Containing(l) => {
            let _ = writeln!(out, "{indent}  @contains {l}");
        }
        WordSet::Dfa(_) => return None,
    }
    let _ = writeln!(out, "{indent}}}");
    Some(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formats::parse_dfa;
    use crate::label::{label, word};

    fn no_files(path: &str) -> Result<WordDfa> {
        Err(Error::InvalidTester(format!("no file {path}")))
    }

    #[test]
    fn finite_blocks() {
        let p = parse_property("safety {\n  a b\n  c\n}\n", &mut no_files).unwrap();
        assert_eq!(p, PropertySpec::Safety(WordSet::finite([word("a b"), word("c")])));
        let p = parse_property("liveness { ε }", &mut no_files).unwrap();
        assert_eq!(p, PropertySpec::Liveness(WordSet::finite([Word::empty()])));
    }

    #[test]
    fn condliveness_with_contains() {
        let text = "# canonical\ncondliveness {\n  C { @contains c }\n  goal {\n    @contains g\n  }\n}\n";
        let p = parse_property(text, &mut no_files).unwrap();
        assert_eq!(p, PropertySpec::canonical_cond_liveness(label("c"), label("g")));
    }

    #[test]
    fn dfa_escape_uses_loader() {
        let mut loader = |path: &str| {
            assert_eq!(path, "ab.dfa");
            parse_dfa("states: 3\nalphabet: a b\ninitial: 0\naccepting: 2\n0 a 1\n1 b 2\n")
        };
        let p = parse_property("liveness {\n @dfa ab.dfa\n}", &mut loader).unwrap();
        let PropertySpec::Liveness(WordSet::Dfa(d)) = &p else { panic!("{p:?}") };
        assert!(d.accepts(&word("a b")));
        assert!(write_property(&p).is_none());
    }

    #[test]
    fn errors_are_positioned() {
        let err = parse_property("safety {\n  a\n  @contains b\n}", &mut no_files).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, column: 3, .. }), "{err}");
        let err = parse_property("safty { a }", &mut no_files).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, column: 1, .. }), "{err}");
        let err = parse_property("safety {\n a\n", &mut no_files).unwrap_err();
        assert!(matches!(err, Error::Parse { .. }), "{err}");
        let err = parse_property("liveness { @dfa x.dfa }", &mut no_files).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, column: 17, .. }), "{err}");
    }

    #[test]
    fn round_trip() {
        for p in [
            PropertySpec::Safety(WordSet::finite([word("a b"), Word::empty()])),
            PropertySpec::canonical_liveness(label("g")),
            PropertySpec::CondLiveness {
                condition: WordSet::finite([word("c")]),
                goal: WordSet::finite([word("c g")]),
            },
        ] {
            let text = write_property(&p).unwrap();
            assert_eq!(parse_property(&text, &mut no_files).unwrap(), p, "{text}");
        }
    }
}
