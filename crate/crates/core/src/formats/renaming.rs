//! Renaming files: one `from -> to` pair per line. Labels without a line
//! keep their name.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::label::ActionLabel;
use crate::operators::RenamingMap;

use super::{label_at, significant_lines};

/// The explicit pairs, in file order. A label renamed twice to different
/// targets is rejected at the second line.
pub fn parse_renaming(text: &str) -> Result<Vec<(ActionLabel, ActionLabel)>> {
    let mut seen: BTreeMap<ActionLabel, ActionLabel> = BTreeMap::new();
    let mut pairs = Vec::new();
    for line in significant_lines(text) {
        let t = line.text;
        let col = |s: &str| line.column + (s.as_ptr() as usize - t.as_ptr() as usize);
        let (from, to) = t
            .split_once("->")
            .ok_or_else(|| Error::parse(line.number, line.column, "expected `from -> to`"))?;
        let (from, to) = (from.trim(), to.trim());
        let from_label = label_at(from, line.number, col(from))?;
        let to_label = label_at(to, line.number, col(to))?;
        match seen.get(&from_label) {
            Some(prev) if *prev != to_label => {
                return Err(Error::parse(
                    line.number,
                    line.column,
                    format!("`{from_label}` already renamed to `{prev}`"),
                ))
            }
            Some(_) => continue,
            None => {}
        }
        seen.insert(from_label.clone(), to_label.clone());
        pairs.push((from_label, to_label));
    }
    Ok(pairs)
}

/// Writes the non-identity pairs of `r`.
pub fn write_renaming(r: &RenamingMap) -> String {
    let mut out = String::new();
    for (from, to) in r.pairs().filter(|(f, t)| f != t) {
        let _ = writeln!(out, "{from} -> {to}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::label::{label, Alphabet};

    #[test]
    fn pairs_and_comments() {
        let pairs = parse_renaming("# swap\na -> b\n  b -> a\n").unwrap();
        assert_eq!(pairs, vec![(label("a"), label("b")), (label("b"), label("a"))]);
    }

    #[test]
    fn conflicting_targets_are_positioned() {
        let err = parse_renaming("a -> b\na -> c\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, column: 1, .. }), "{err}");
        let err = parse_renaming("a -> b c\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, column: 6, .. }), "{err}");
    }

    #[test]
    fn round_trip_through_map() {
        let alphabet = Alphabet::from_names(&["a", "b", "c"]).unwrap();
        let r = RenamingMap::new(&alphabet, &parse_renaming("a -> x\nc -> c\n").unwrap()).unwrap();
        let again = RenamingMap::new(&alphabet, &parse_renaming(&write_renaming(&r)).unwrap()).unwrap();
        assert_eq!(r, again);
        assert_eq!(write_renaming(&r), "a -> x\n");
    }
}
