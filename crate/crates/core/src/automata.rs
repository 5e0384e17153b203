//! Deterministic word acceptors and deterministic omega-acceptors.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::error::{Error, Result};
use crate::label::{ActionLabel, Alphabet, Word};
use crate::search::explore;

/// Complete deterministic finite automaton over an alphabet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WordDfa {
    alphabet: Alphabet,
    initial: usize,
    trans: Vec<Vec<usize>>,
    accepting: Vec<bool>,
}

impl WordDfa {
    pub fn new(alphabet: Alphabet, initial: usize, trans: Vec<Vec<usize>>, accepting: Vec<bool>) -> Result<Self> {
        let n = trans.len();
        if initial >= n || accepting.len() != n {
            return Err(Error::StateOutOfRange {
                index: initial,
                num_states: n,
            });
        }
        for row in &trans {
            if row.len() != alphabet.len() {
                return Err(Error::AlphabetMismatch(format!(
                    "transition row has {} entries, alphabet has {} labels",
                    row.len(),
                    alphabet.len()
                )));
            }
            if let Some(&t) = row.iter().find(|&&t| t >= n) {
                return Err(Error::StateOutOfRange { index: t, num_states: n });
            }
        }
        Ok(WordDfa {
            alphabet,
            initial,
            trans,
            accepting,
        })
    }

    /// Prefix tree of `words` completed with a rejecting sink. Words using
    /// labels outside `alphabet` are dropped.
    pub fn from_words<'a>(alphabet: &Alphabet, words: impl IntoIterator<Item = &'a Word>) -> Self {
        let k = alphabet.len();
        // state 0 is the sink, state 1 the root
        let mut trans = vec![vec![0; k], vec![0; k]];
        let mut accepting = vec![false, false];
        for w in words {
            let Ok(ids) = alphabet.encode(w) else { continue };
            let mut s = 1;
            for l in ids {
                if trans[s][l] == 0 {
                    trans.push(vec![0; k]);
                    accepting.push(false);
                    let fresh = trans.len() - 1;
                    trans[s][l] = fresh;
                }
                s = trans[s][l];
            }
            accepting[s] = true;
        }
        WordDfa {
            alphabet: alphabet.clone(),
            initial: 1,
            trans,
            accepting,
        }
    }

    /// Words containing at least one occurrence of `label`.
    pub fn containing(alphabet: &Alphabet, label: &ActionLabel) -> Self {
        let hit = alphabet.index_of(label);
        let trans = vec![
            (0..alphabet.len()).map(|i| usize::from(Some(i) == hit)).collect(),
            vec![1; alphabet.len()],
        ];
        WordDfa {
            alphabet: alphabet.clone(),
            initial: 0,
            trans,
            accepting: vec![false, true],
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.trans.len()
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn step(&self, s: usize, label: usize) -> usize {
        self.trans[s][label]
    }

    pub fn is_accepting(&self, s: usize) -> bool {
        self.accepting[s]
    }

    pub fn accepts(&self, w: &Word) -> bool {
        let Ok(ids) = self.alphabet.encode(w) else {
            return false;
        };
        let end = ids.iter().fold(self.initial, |s, &l| self.trans[s][l]);
        self.accepting[end]
    }

    /// Equivalent acceptor over another alphabet. Labels unknown to `self`
    /// lead to a fresh rejecting sink.
    pub fn retarget(&self, alphabet: &Alphabet) -> WordDfa {
        if &self.alphabet == alphabet {
            return self.clone();
        }
        let sink = self.trans.len();
        let map: Vec<Option<usize>> = alphabet.iter().map(|l| self.alphabet.index_of(l)).collect();
        let mut trans: Vec<Vec<usize>> = self
            .trans
            .iter()
            .map(|row| map.iter().map(|m| m.map_or(sink, |i| row[i])).collect())
            .collect();
        trans.push(vec![sink; alphabet.len()]);
        let mut accepting = self.accepting.clone();
        accepting.push(false);
        WordDfa {
            alphabet: alphabet.clone(),
            initial: self.initial,
            trans,
            accepting,
        }
    }
}

/// Acceptance condition of an [`OmegaDfa`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OmegaAcceptance {
    /// Every infinite run is accepting.
    AllRuns,
    /// Runs visiting a flagged state infinitely often are accepting.
    Buchi(Vec<bool>),
}

/// Partial deterministic omega-acceptor. A missing edge rejects.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OmegaDfa {
    alphabet: Alphabet,
    initial: usize,
    trans: Vec<Vec<Option<usize>>>,
    acceptance: OmegaAcceptance,
}

/// Ultimately periodic word `prefix · cycle^ω`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lasso {
    pub prefix: Word,
    pub cycle: Word,
}

impl fmt::Display for Lasso {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({})^w", self.prefix, self.cycle)
    }
}

impl Lasso {
    /// Equivalent lasso whose prefix has at least `min_prefix` letters.
    pub fn unrolled(&self, min_prefix: usize) -> Lasso {
        let mut prefix = self.prefix.clone();
        let mut cycle: Vec<ActionLabel> = self.cycle.labels().to_vec();
        while prefix.len() < min_prefix {
            let head = cycle.remove(0);
            prefix.push(head.clone());
            cycle.push(head);
        }
        Lasso {
            prefix,
            cycle: Word::new(cycle),
        }
    }

    /// The first `n` letters of the infinite word.
    pub fn take(&self, n: usize) -> Word {
        let u = self.prefix.labels();
        let v = self.cycle.labels();
        Word::new(
            (0..n)
                .map(|i| if i < u.len() { u[i].clone() } else { v[(i - u.len()) % v.len()].clone() })
                .collect(),
        )
    }
}

impl OmegaDfa {
    pub fn new(
        alphabet: Alphabet,
        initial: usize,
        trans: Vec<Vec<Option<usize>>>,
        acceptance: OmegaAcceptance,
    ) -> Result<Self> {
        let n = trans.len();
        if initial >= n {
            return Err(Error::StateOutOfRange {
                index: initial,
                num_states: n,
            });
        }
        if let OmegaAcceptance::Buchi(flags) = &acceptance {
            if flags.len() != n {
                return Err(Error::AlphabetMismatch("Büchi flags do not cover every state".into()));
            }
        }
        if trans.iter().any(|row| row.len() != alphabet.len()) {
            return Err(Error::AlphabetMismatch("transition rows do not match the alphabet".into()));
        }
        Ok(OmegaDfa {
            alphabet,
            initial,
            trans,
            acceptance,
        })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.trans.len()
    }

    fn accepting(&self, s: usize) -> bool {
        match &self.acceptance {
            OmegaAcceptance::AllRuns => true,
            OmegaAcceptance::Buchi(flags) => flags[s],
        }
    }

    /// Membership of `prefix · cycle^ω`. An empty cycle is rejected.
    pub fn accepts_lasso(&self, lasso: &Lasso) -> bool {
        if lasso.cycle.is_empty() {
            return false;
        }
        let (Ok(u), Ok(v)) = (self.alphabet.encode(&lasso.prefix), self.alphabet.encode(&lasso.cycle)) else {
            return false;
        };
        let run = |s: usize, w: &[usize], seen_acc: &mut bool| -> Option<usize> {
            w.iter().try_fold(s, |s, &l| {
                let t = self.trans[s][l]?;
                *seen_acc |= self.accepting(t);
                Some(t)
            })
        };
        let mut ignore = false;
        let Some(mut s) = run(self.initial, &u, &mut ignore) else {
            return false;
        };
        // Iterate the cycle until the state at a cycle boundary repeats; the
        // iterations between the two occurrences repeat forever.
        let mut first_seen: HashMap<usize, usize> = HashMap::new();
        let mut acc_after: Vec<bool> = Vec::new();
        loop {
            if let Some(&k) = first_seen.get(&s) {
                return acc_after[k..].iter().any(|&a| a);
            }
            first_seen.insert(s, acc_after.len());
            let mut acc = false;
            match run(s, &v, &mut acc) {
                Some(t) => {
                    acc_after.push(acc);
                    s = t;
                }
                None => return false,
            }
        }
    }

    /// A lasso accepted by `self` and rejected by `other`, if any.
    pub fn counterexample_to_inclusion(&self, other: &OmegaDfa) -> Result<Option<Lasso>> {
        if self.alphabet != other.alphabet {
            return Err(Error::AlphabetMismatch(format!(
                "{} versus {}",
                self.alphabet, other.alphabet
            )));
        }
        let k = self.alphabet.len();
        let g = explore((self.initial, Some(other.initial)), |&(a, b)| {
            (0..k)
                .filter_map(|l| {
                    let a2 = self.trans[a][l]?;
                    Some((l, (a2, b.and_then(|b| other.trans[b][l]))))
                })
                .collect::<Vec<_>>()
        });
        // `other` rejects a run iff it dies, or (Büchi) eventually avoids its flags.
        let other_rejecting = |i: usize| match g.nodes[i].1 {
            None => true,
            Some(b) => match &other.acceptance {
                OmegaAcceptance::AllRuns => false,
                OmegaAcceptance::Buchi(flags) => !flags[b],
            },
        };
        Ok(g
            .find_lasso(other_rejecting, |i| self.accepting(g.nodes[i].0))
            .map(|(u, v)| Lasso {
                prefix: self.alphabet.decode(&u),
                cycle: self.alphabet.decode(&v),
            }))
    }

    /// Words whose every finite prefix is a path of this acceptor; used to
    /// report the reachable state set in diagnostics.
    pub fn reachable_states(&self) -> BTreeSet<usize> {
        let k = self.alphabet.len();
        let g = explore(self.initial, |&s| (0..k).filter_map(|l| Some((l, self.trans[s][l]?))).collect::<Vec<_>>());
        g.nodes.into_iter().collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::label::{label, word};

    fn ab() -> Alphabet {
        Alphabet::from_names(&["a", "b"]).unwrap()
    }

    #[test]
    fn trie_accepts_exactly_its_words() {
        let words = [word("a b"), word("b")];
        let d = WordDfa::from_words(&ab(), words.iter());
        assert!(d.accepts(&word("a b")));
        assert!(d.accepts(&word("b")));
        assert!(!d.accepts(&word("a")));
        assert!(!d.accepts(&word("a b a")));
        assert!(!d.accepts(&Word::empty()));
    }

    #[test]
    fn containing_and_retarget() {
        let d = WordDfa::containing(&ab(), &label("b"));
        assert!(d.accepts(&word("a a b a")));
        assert!(!d.accepts(&word("a a")));
        let wide = d.retarget(&Alphabet::from_names(&["a", "b", "z"]).unwrap());
        assert!(wide.accepts(&word("a b")));
        assert!(!wide.accepts(&word("b z")));
    }

    #[test]
    fn lasso_membership_all_runs_and_buchi() {
        // 0 -a-> 0, 0 -b-> 1, 1 -b-> 1
        let trans = vec![vec![Some(0), Some(1)], vec![None, Some(1)]];
        let all = OmegaDfa::new(ab(), 0, trans.clone(), OmegaAcceptance::AllRuns).unwrap();
        let lasso = |u: &str, v: &str| Lasso {
            prefix: word(u),
            cycle: word(v),
        };
        assert!(all.accepts_lasso(&lasso("", "a")));
        assert!(all.accepts_lasso(&lasso("a a", "b")));
        assert!(!all.accepts_lasso(&lasso("", "a b")));
        let buchi = OmegaDfa::new(ab(), 0, trans, OmegaAcceptance::Buchi(vec![false, true])).unwrap();
        assert!(!buchi.accepts_lasso(&lasso("", "a")));
        assert!(buchi.accepts_lasso(&lasso("a", "b")));
    }

    #[test]
    fn inclusion_counterexample_is_a_separating_lasso() {
        let loop_a = OmegaDfa::new(ab(), 0, vec![vec![Some(0), None]], OmegaAcceptance::AllRuns).unwrap();
        let two_a = OmegaDfa::new(
            ab(),
            0,
            vec![vec![Some(1), None], vec![Some(2), None], vec![None, None]],
            OmegaAcceptance::AllRuns,
        )
        .unwrap();
        let cex = loop_a.counterexample_to_inclusion(&two_a).unwrap().unwrap();
        assert!(loop_a.accepts_lasso(&cex));
        assert!(!two_a.accepts_lasso(&cex));
        assert!(two_a.counterexample_to_inclusion(&loop_a).unwrap().is_none());
    }

    #[test]
    fn unrolling_preserves_the_word() {
        let l = Lasso {
            prefix: word("a"),
            cycle: word("b a"),
        };
        let u = l.unrolled(4);
        assert!(u.prefix.len() >= 4);
        assert_eq!(u.take(9), l.take(9));
    }
}
