//! Word acceptor files.
//!
//! ```text
//! states: 3
//! alphabet: a b
//! initial: 0
//! accepting: 2
//! 0 a 1
//! 1 b 2
//! ```
//!
//! Missing transitions lead to an added rejecting sink.

use std::fmt::Write as _;

use crate::automata::WordDfa;
use crate::error::{Error, Result};
use crate::label::{ActionLabel, Alphabet};

use super::{label_at, significant_lines, Line};

pub fn parse_dfa(text: &str) -> Result<WordDfa> {
    let mut num_states: Option<usize> = None;
    let mut alphabet: Option<Alphabet> = None;
    let mut initial: Option<usize> = None;
    let mut accepting_ids: Vec<(usize, usize, usize)> = Vec::new();
    let mut edges: Vec<(usize, usize, ActionLabel, usize, usize)> = Vec::new();
    let mut last = 1;

    for line in significant_lines(text) {
        last = line.number;
        let t = line.text;
        let fields = fields(&line);
        if let Some(rest) = t.strip_prefix("states:") {
            num_states = Some(number(rest.trim(), &line, col_in(&line, rest.trim()))?);
        } else if t.starts_with("alphabet:") {
            let labels = fields[1..]
                .iter()
                .map(|&(c, f)| label_at(f, line.number, c))
                .collect::<Result<Vec<_>>>()?;
            alphabet = Some(Alphabet::new(labels));
        } else if let Some(rest) = t.strip_prefix("initial:") {
            initial = Some(number(rest.trim(), &line, col_in(&line, rest.trim()))?);
        } else if t.starts_with("accepting:") {
            for &(c, f) in &fields[1..] {
                accepting_ids.push((number(f, &line, c)?, line.number, c));
            }
        } else {
            let [(c0, src), (c1, lab), (c2, dst)] = fields[..] else {
                return Err(Error::parse(line.number, line.column, "expected `source label target`"));
            };
            edges.push((number(src, &line, c0)?, line.number, label_at(lab, line.number, c1)?, number(dst, &line, c2)?, c2));
        }
    }

    let n = num_states.ok_or_else(|| Error::parse(last, 1, "missing `states:` line"))?;
    let alphabet = alphabet.ok_or_else(|| Error::parse(last, 1, "missing `alphabet:` line"))?;
    let initial = initial.ok_or_else(|| Error::parse(last, 1, "missing `initial:` line"))?;
    if initial >= n {
        return Err(Error::parse(last, 1, format!("initial state {initial} out of range")));
    }
    let sink = n;
    let mut trans = vec![vec![sink; alphabet.len()]; n + 1];
    let mut accepting = vec![false; n + 1];
    for (s, line, c) in accepting_ids {
        if s >= n {
            return Err(Error::parse(line, c, format!("state {s} out of range")));
        }
        accepting[s] = true;
    }
    for (src, line, lab, dst, c) in edges {
        if src >= n || dst >= n {
            return Err(Error::parse(line, c, format!("transition {src} -> {dst} out of range")));
        }
        let l = alphabet
            .index_of(&lab)
            .ok_or_else(|| Error::parse(line, 1, format!("label `{lab}` not in the alphabet")))?;
        if trans[src][l] != sink && trans[src][l] != dst {
            return Err(Error::parse(line, 1, format!("state {src} has two `{lab}` transitions")));
        }
        trans[src][l] = dst;
    }
    WordDfa::new(alphabet, initial, trans, accepting)
}

fn fields<'a>(line: &Line<'a>) -> Vec<(usize, &'a str)> {
    line.text.split_whitespace().map(|f| (col_in(line, f), f)).collect()
}

fn col_in(line: &Line, s: &str) -> usize {
    line.column + (s.as_ptr() as usize - line.text.as_ptr() as usize)
}

fn number(s: &str, line: &Line, column: usize) -> Result<usize> {
    s.parse()
        .map_err(|_| Error::parse(line.number, column, format!("`{s}` is not a state index")))
}

pub fn write_dfa(d: &WordDfa) -> String {
    let names: Vec<&str> = d.alphabet().iter().map(ActionLabel::as_str).collect();
    let accepting: Vec<String> = (0..d.num_states())
        .filter(|&s| d.is_accepting(s))
        .map(|s| s.to_string())
        .collect();
    let mut out = format!(
        "states: {}\nalphabet: {}\ninitial: {}\naccepting: {}\n",
        d.num_states(),
        names.join(" "),
        d.initial(),
        accepting.join(" ")
    );
    for s in 0..d.num_states() {
        for (i, l) in d.alphabet().iter().enumerate() {
            let _ = writeln!(out, "{s} {l} {}", d.step(s, i));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::label::word;

    const AB: &str = "states: 3\nalphabet: a b\ninitial: 0\naccepting: 2\n0 a 1\n1 b 2\n";

    #[test]
    fn partial_transitions_reject() {
        let d = parse_dfa(AB).unwrap();
        assert!(d.accepts(&word("a b")));
        assert!(!d.accepts(&word("a b a")));
        assert!(!d.accepts(&word("b")));
        assert_eq!(d.num_states(), 4);
    }

    #[test]
    fn round_trip_preserves_language() {
        let d = parse_dfa(AB).unwrap();
        let again = parse_dfa(&write_dfa(&d)).unwrap();
        for w in ["", "a", "a b", "b a", "a b b"] {
            assert_eq!(d.accepts(&word(w)), again.accepts(&word(w)), "{w}");
        }
    }

    #[test]
    fn errors_are_positioned() {
        let err = parse_dfa("states: 2\nalphabet: a\ninitial: 0\n0 z 1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 4, .. }), "{err}");
        let err = parse_dfa("states: 2\nalphabet: a\ninitial: 0\naccepting: 0 x\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 4, column: 14, .. }), "{err}");
        assert!(parse_dfa("alphabet: a\ninitial: 0\n").is_err());
    }
}
