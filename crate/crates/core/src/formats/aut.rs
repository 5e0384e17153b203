//! Aldebaran-style LTS files.
//!
//! ```text
//! des (0, 3, 3)
//! alphabet: c g
//! (0, "tau", 0)
//! (0, "c", 1)
//! (1, "g", 2)
//! ```
//!
//! The header gives the initial state, the number of transitions and the
//! number of states. Labels may be quoted or bare; `tau` is the silent
//! action. The optional `alphabet:` line declares labels that need not occur
//! on any transition. Blank lines and lines starting with `#` are ignored.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::label::{Action, ActionLabel, Alphabet, SILENT_TOKEN};
use crate::lts::{Lts, Transition};

use super::{significant_lines, Line};

pub fn parse_lts(text: &str) -> Result<Lts> {
    let mut lines = significant_lines(text);
    let header = lines
        .next()
        .ok_or_else(|| Error::parse(1, 1, "empty file: expected `des (initial, transitions, states)`"))?;
    let [initial, ntrans, nstates] = parse_header(&header)?;

    let mut labels: Vec<ActionLabel> = Vec::new();
    let mut transitions = Vec::new();
    let mut last_line = header.number;
    for line in lines {
        last_line = line.number;
        if let Some(rest) = line.text.strip_prefix("alphabet:") {
            let offset = line.column + "alphabet:".len();
            for (col, tok) in tokens(rest) {
                labels.push(ActionLabel::new(tok).map_err(|e| Error::parse(line.number, offset + col, e.to_string()))?);
            }
            continue;
        }
        let (source, action, target) = parse_transition(&line)?;
        for (s, what) in [(source, "source"), (target, "target")] {
            if s >= nstates {
                return Err(Error::parse(
                    line.number,
                    line.column,
                    format!("{what} state {s} out of range ({nstates} states)"),
                ));
            }
        }
        if let Action::Visible(l) = &action {
            labels.push(l.clone());
        }
        transitions.push(Transition { source, action, target });
    }
    if transitions.len() != ntrans {
        return Err(Error::parse(
            last_line,
            1,
            format!("header announces {ntrans} transitions, found {}", transitions.len()),
        ));
    }
    if initial >= nstates {
        return Err(Error::parse(
            header.number,
            header.column,
            format!("initial state {initial} out of range ({nstates} states)"),
        ));
    }
    Lts::new(nstates, initial, Alphabet::new(labels), transitions)
}

fn tokens(s: &str) -> impl Iterator<Item = (usize, &str)> {
    s.split_whitespace().map(move |t| (t.as_ptr() as usize - s.as_ptr() as usize, t))
}

fn parse_header(line: &Line) -> Result<[usize; 3]> {
    let err = |msg: &str| Error::parse(line.number, line.column, msg.to_string());
    let body = line
        .text
        .strip_prefix("des")
        .ok_or_else(|| err("expected `des (initial, transitions, states)`"))?
        .trim();
    let inner = body
        .strip_prefix('(')
        .and_then(|b| b.strip_suffix(')'))
        .ok_or_else(|| err("header must be parenthesised"))?;
    let nums: Vec<&str> = inner.split(',').map(str::trim).collect();
    if nums.len() != 3 {
        return Err(err("header needs exactly three numbers"));
    }
    let mut out = [0; 3];
    for (slot, n) in out.iter_mut().zip(&nums) {
        *slot = n.parse().map_err(|_| err(&format!("`{n}` is not a non-negative number")))?;
    }
    Ok(out)
}

fn parse_transition(line: &Line) -> Result<(usize, Action, usize)> {
    let t = line.text;
    let col_of = |s: &str| s.as_ptr() as usize - t.as_ptr() as usize;
    let err = |col: usize, msg: String| Error::parse(line.number, line.column + col, msg);
    let inner = t
        .strip_prefix('(')
        .and_then(|b| b.strip_suffix(')'))
        .ok_or_else(|| err(0, "expected `(source, \"label\", target)`".into()))?;
    let first = inner.find(',').ok_or_else(|| err(1, "missing `,` after source".into()))?;
    let last = inner
        .rfind(',')
        .filter(|&i| i > first)
        .ok_or_else(|| err(1, "missing `,` before target".into()))?;
    let number = |s: &str| -> Result<usize> {
        let s = s.trim();
        s.parse()
            .map_err(|_| err(col_of(s), format!("`{s}` is not a state index")))
    };
    let source = number(&inner[..first])?;
    let raw = inner[first + 1..last].trim();
    let name = match raw.strip_prefix('"') {
        Some(q) => q
            .strip_suffix('"')
            .ok_or_else(|| err(col_of(raw), "unterminated label quote".into()))?,
        None => raw,
    };
    let action = if name == SILENT_TOKEN {
        Action::Silent
    } else {
        Action::Visible(ActionLabel::new(name).map_err(|e| err(col_of(raw), e.to_string()))?)
    };
    let target = number(&inner[last + 1..])?;
    Ok((source, action, target))
}

/// Canonical text: header, full alphabet, transitions in canonical order.
pub fn write_lts(p: &Lts) -> String {
    let mut out = format!("des ({}, {}, {})\n", p.initial(), p.num_transitions(), p.num_states());
    if !p.alphabet().is_empty() {
        let names: Vec<&str> = p.alphabet().iter().map(ActionLabel::as_str).collect();
        let _ = writeln!(out, "alphabet: {}", names.join(" "));
    }
    for t in p.transitions() {
        let _ = writeln!(out, "({}, \"{}\", {})", t.source, t.action, t.target);
    }
    out
}
