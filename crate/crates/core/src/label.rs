//! Action labels, alphabets and finite words over visible actions.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};

/// Token reserved for the silent action in every textual format.
pub const SILENT_TOKEN: &str = "tau";

/// A visible action. Never equal to the silent token.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ActionLabel(Arc<str>);

impl ActionLabel {
    pub fn new(name: &str) -> Result<Self> {
        if name.is_empty() || name == SILENT_TOKEN || name.chars().any(char::is_whitespace) {
            return Err(Error::InvalidLabel(name.to_string()));
        }
        Ok(ActionLabel(Arc::from(name)))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for ActionLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for ActionLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Shorthand used throughout tests and fixtures. Panics on an invalid label.
pub fn label(name: &str) -> ActionLabel {
    ActionLabel::new(name).expect("valid label")
}

/// A transition label: the silent action or a visible one.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Action {
    Silent,
    Visible(ActionLabel),
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Action::Silent => f.write_str(SILENT_TOKEN),
            Action::Visible(l) => l.fmt(f),
        }
    }
}

/// Finite, sorted, duplicate-free set of visible labels.
///
/// Labels are addressed internally by their index in sorted order, so every
/// structure derived from an alphabet iterates canonically.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Alphabet {
    labels: Vec<ActionLabel>,
}

impl Alphabet {
    pub fn new<I: IntoIterator<Item = ActionLabel>>(labels: I) -> Self {
        let set: BTreeSet<ActionLabel> = labels.into_iter().collect();
        Alphabet {
            labels: set.into_iter().collect(),
        }
    }

    pub fn from_names(names: &[&str]) -> Result<Self> {
        let labels = names
            .iter()
            .map(|n| ActionLabel::new(n))
            .collect::<Result<Vec<_>>>()?;
        Ok(Alphabet::new(labels))
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[ActionLabel] {
        &self.labels
    }

    pub fn iter(&self) -> impl Iterator<Item = &ActionLabel> {
        self.labels.iter()
    }

    pub fn index_of(&self, label: &ActionLabel) -> Option<usize> {
        self.labels.binary_search(label).ok()
    }

    pub fn contains(&self, label: &ActionLabel) -> bool {
        self.index_of(label).is_some()
    }

    pub fn label(&self, index: usize) -> &ActionLabel {
        &self.labels[index]
    }

    pub fn union(&self, other: &Alphabet) -> Alphabet {
        Alphabet::new(self.labels.iter().chain(other.labels.iter()).cloned())
    }

    pub fn is_subset(&self, other: &Alphabet) -> bool {
        self.labels.iter().all(|l| other.contains(l))
    }

    /// Translates a word into label indices, rejecting labels outside the alphabet.
    pub fn encode(&self, word: &Word) -> Result<Vec<usize>> {
        word.iter()
            .map(|l| self.index_of(l).ok_or_else(|| Error::UnknownLabel(l.clone())))
            .collect()
    }

    pub fn decode(&self, ids: &[usize]) -> Word {
        Word::new(ids.iter().map(|&i| self.labels[i].clone()).collect())
    }

    /// Bitset over this alphabet; labels outside it are rejected.
    pub fn encode_set<'a, I>(&self, labels: I) -> Result<FixedBitSet>
    where
        I: IntoIterator<Item = &'a ActionLabel>,
    {
        let mut bits = FixedBitSet::with_capacity(self.len());
        for l in labels {
            let i = self.index_of(l).ok_or_else(|| Error::UnknownLabel(l.clone()))?;
            bits.insert(i);
        }
        Ok(bits)
    }

    pub fn decode_set(&self, bits: &FixedBitSet) -> BTreeSet<ActionLabel> {
        bits.ones().map(|i| self.labels[i].clone()).collect()
    }

    pub fn full_set(&self) -> FixedBitSet {
        let mut bits = FixedBitSet::with_capacity(self.len());
        bits.insert_range(..);
        bits
    }
}

impl<'a> IntoIterator for &'a Alphabet {
    type Item = &'a ActionLabel;
    type IntoIter = std::slice::Iter<'a, ActionLabel>;

    fn into_iter(self) -> Self::IntoIter {
        self.labels.iter()
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, l) in self.labels.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{l}")?;
        }
        write!(f, "}}")
    }
}

/// A finite sequence of visible actions.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<ActionLabel>);

impl Word {
    pub fn new(labels: Vec<ActionLabel>) -> Self {
        Word(labels)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    /// Parses a whitespace-separated list of labels.
    pub fn parse(text: &str) -> Result<Self> {
        text.split_whitespace()
            .map(ActionLabel::new)
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn labels(&self) -> &[ActionLabel] {
        &self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, ActionLabel> {
        self.0.iter()
    }

    pub fn push(&mut self, l: ActionLabel) {
        self.0.push(l);
    }

    pub fn concat(&self, other: &Word) -> Word {
        Word(self.0.iter().chain(other.0.iter()).cloned().collect())
    }

    pub fn extended(&self, l: ActionLabel) -> Word {
        let mut w = self.clone();
        w.push(l);
        w
    }

    pub fn is_prefix_of(&self, other: &Word) -> bool {
        other.0.starts_with(&self.0)
    }

    /// All prefixes, shortest first, including the empty word and the word itself.
    pub fn prefixes(&self) -> impl Iterator<Item = Word> + '_ {
        (0..=self.0.len()).map(move |k| Word(self.0[..k].to_vec()))
    }

    pub fn contains_label(&self, l: &ActionLabel) -> bool {
        self.0.contains(l)
    }
}

impl From<Vec<ActionLabel>> for Word {
    fn from(v: Vec<ActionLabel>) -> Self {
        Word(v)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("ε");
        }
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// Shorthand: `word("a b c")`. Panics on invalid labels.
pub fn word(text: &str) -> Word {
    Word::parse(text).expect("valid word")
}
