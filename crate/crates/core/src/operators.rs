//! Parallel composition, concealment, the state operator and renaming, both on
//! LTSs and on single words.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::label::{ActionLabel, Alphabet, Word};
use crate::lts::{Edge, Lts};
use crate::search::explore;

/// Checks that every label of `set` is declared in `alphabet`, returning the
/// set as a membership mask.
fn mask(alphabet: &Alphabet, set: &BTreeSet<ActionLabel>) -> Result<Vec<bool>> {
    let mut m = vec![false; alphabet.len()];
    for l in set {
        m[alphabet.index_of(l).ok_or_else(|| Error::UnknownLabel(l.clone()))?] = true;
    }
    Ok(m)
}

/// Builds an LTS from a reachable-product exploration.
fn from_graph<N>(alphabet: Alphabet, g: crate::search::Graph<N>, labels: impl Fn(usize) -> Option<usize>) -> Lts {
    let succ: Vec<Vec<Edge>> = g
        .succ
        .iter()
        .map(|out| out.iter().map(|&(code, t)| (labels(code), t)).collect())
        .collect();
    Lts::from_parts(alphabet, 0, succ)
}

/// Edge codes in product explorations: 0 is silent, `i + 1` is label `i`.
fn code(l: Option<usize>) -> usize {
    l.map_or(0, |i| i + 1)
}

fn decode(c: usize) -> Option<usize> {
    c.checked_sub(1)
}

/// `p ||_sync q`: labels in `sync` synchronise, all others interleave.
pub fn par(p: &Lts, sync: &BTreeSet<ActionLabel>, q: &Lts) -> Result<Lts> {
    if p.alphabet() != q.alphabet() {
        return Err(Error::AlphabetMismatch(format!("{} versus {}", p.alphabet(), q.alphabet())));
    }
    let in_sync = mask(p.alphabet(), sync)?;
    let g = explore((p.initial(), q.initial()), |&(x, y)| {
        let mut out = Vec::new();
        for &(l, x2) in p.edges(x) {
            if !l.is_some_and(|i| in_sync[i]) {
                out.push((code(l), (x2, y)));
            }
        }
        for &(l, y2) in q.edges(y) {
            if !l.is_some_and(|i| in_sync[i]) {
                out.push((code(l), (x, y2)));
            }
        }
        for &(l, x2) in p.edges(x) {
            let Some(i) = l.filter(|&i| in_sync[i]) else { continue };
            for &(m, y2) in q.edges(y) {
                if m == Some(i) {
                    out.push((code(l), (x2, y2)));
                }
            }
        }
        out
    });
    Ok(from_graph(p.alphabet().clone(), g, decode))
}

/// Concealment: labels in `hidden` become silent. The alphabet is kept.
pub fn hide(p: &Lts, hidden: &BTreeSet<ActionLabel>) -> Result<Lts> {
    let m = mask(p.alphabet(), hidden)?;
    let succ = (0..p.num_states())
        .map(|s| {
            p.edges(s)
                .iter()
                .map(|&(l, t)| (l.filter(|&i| !m[i]), t))
                .collect()
        })
        .collect();
    Ok(Lts::from_parts(p.alphabet().clone(), p.initial(), succ))
}

/// Output of one interface rule. `None` keeps the incoming label / the
/// current internal state.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RuleOutput {
    pub action: Option<ActionLabel>,
    pub effect: Option<usize>,
}

/// Left-hand side of an interface rule; `None` is a wildcard.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RuleKey {
    pub state: Option<usize>,
    pub label: Option<ActionLabel>,
}

/// Interface specification of a state operator: internal states with an
/// action map and an effect map.
///
/// The maps are total over every label: a lookup resolves the most specific
/// rule, in the order (state, label), (state, *), (*, label), (*, *), and
/// falls back to the identity action with no state change.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InterfaceSpec {
    states: Vec<String>,
    rules: BTreeMap<RuleKey, RuleOutput>,
}

impl InterfaceSpec {
    /// Interface with no rules: the identity on every state.
    pub fn new(states: Vec<String>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for s in &states {
            if !seen.insert(s) {
                return Err(Error::Conflict(format!("internal state `{s}` declared twice")));
            }
        }
        if states.is_empty() {
            return Err(Error::UnknownInternalState("interface declares no states".into()));
        }
        Ok(InterfaceSpec {
            states,
            rules: BTreeMap::new(),
        })
    }

    /// Adds a rule. A second rule with the same left-hand side must agree.
    pub fn add_rule(&mut self, key: RuleKey, out: RuleOutput) -> Result<()> {
        for s in key.state.iter().chain(out.effect.iter()) {
            if *s >= self.states.len() {
                return Err(Error::UnknownInternalState(format!("#{s}")));
            }
        }
        match self.rules.get(&key) {
            Some(existing) if *existing != out => Err(Error::Conflict(format!(
                "conflicting rules for {}, {}",
                key.state.map_or("*", |s| &self.states[s]),
                key.label.as_ref().map_or("*", ActionLabel::as_str)
            ))),
            _ => {
                self.rules.insert(key, out);
                Ok(())
            }
        }
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn state_index(&self, name: &str) -> Result<usize> {
        self.states
            .iter()
            .position(|s| s == name)
            .ok_or_else(|| Error::UnknownInternalState(name.to_string()))
    }

    pub fn state_name(&self, s: usize) -> &str {
        &self.states[s]
    }

    /// Rules in canonical order.
    pub fn rules(&self) -> impl Iterator<Item = (&RuleKey, &RuleOutput)> {
        self.rules.iter()
    }

    fn lookup(&self, s: usize, a: &ActionLabel) -> Option<&RuleOutput> {
        let keys = [
            RuleKey {
                state: Some(s),
                label: Some(a.clone()),
            },
            RuleKey {
                state: Some(s),
                label: None,
            },
            RuleKey {
                state: None,
                label: Some(a.clone()),
            },
            RuleKey {
                state: None,
                label: None,
            },
        ];
        keys.iter().find_map(|k| self.rules.get(k))
    }

    /// The label emitted for `a` in internal state `s`.
    pub fn action(&self, s: usize, a: &ActionLabel) -> ActionLabel {
        self.lookup(s, a)
            .and_then(|r| r.action.clone())
            .unwrap_or_else(|| a.clone())
    }

    /// The internal state after `a` in internal state `s`.
    pub fn effect(&self, s: usize, a: &ActionLabel) -> usize {
        self.lookup(s, a).and_then(|r| r.effect).unwrap_or(s)
    }

    /// Every label the interface can emit on inputs from `alphabet`.
    pub fn output_alphabet(&self, alphabet: &Alphabet) -> Alphabet {
        Alphabet::new((0..self.states.len()).flat_map(|s| alphabet.iter().map(move |a| self.action(s, a))))
    }

    /// `{ a ∈ alphabet | action(s, a) ∈ refused }`.
    pub fn preimage(&self, s: usize, alphabet: &Alphabet, refused: &BTreeSet<ActionLabel>) -> BTreeSet<ActionLabel> {
        alphabet
            .iter()
            .filter(|a| refused.contains(&self.action(s, a)))
            .cloned()
            .collect()
    }
}

/// The state operator started in internal state `start`.
pub fn state_op(m: &InterfaceSpec, start: usize, p: &Lts) -> Result<Lts> {
    if start >= m.num_states() {
        return Err(Error::UnknownInternalState(format!("#{start}")));
    }
    let input = p.alphabet();
    let output = m.output_alphabet(input);
    // per internal state and input label: (output label index, next state)
    let table: Vec<Vec<(usize, usize)>> = (0..m.num_states())
        .map(|s| {
            input
                .iter()
                .map(|a| {
                    let b = output.index_of(&m.action(s, a)).expect("output alphabet covers the image");
                    (b, m.effect(s, a))
                })
                .collect()
        })
        .collect();
    let g = explore((p.initial(), start), |&(x, s)| {
        p.edges(x)
            .iter()
            .map(|&(l, x2)| match l {
                None => (0, (x2, s)),
                Some(i) => {
                    let (b, s2) = table[s][i];
                    (b + 1, (x2, s2))
                }
            })
            .collect::<Vec<_>>()
    });
    Ok(from_graph(output, g, decode))
}

/// Relabelling of visible actions, total over a declared alphabet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RenamingMap {
    alphabet: Alphabet,
    targets: Vec<ActionLabel>,
    injective: bool,
}

impl RenamingMap {
    /// Labels of `alphabet` without an entry map to themselves; entries for
    /// labels outside `alphabet` are ignored.
    pub fn new(alphabet: &Alphabet, pairs: &[(ActionLabel, ActionLabel)]) -> Result<Self> {
        let mut explicit: BTreeMap<&ActionLabel, &ActionLabel> = BTreeMap::new();
        for (from, to) in pairs {
            if let Some(prev) = explicit.insert(from, to) {
                if prev != to {
                    return Err(Error::Conflict(format!("`{from}` renamed to both `{prev}` and `{to}`")));
                }
            }
        }
        let targets: Vec<ActionLabel> = alphabet
            .iter()
            .map(|a| explicit.get(a).map_or_else(|| a.clone(), |&t| t.clone()))
            .collect();
        let injective = targets.iter().collect::<BTreeSet<_>>().len() == targets.len();
        Ok(RenamingMap {
            alphabet: alphabet.clone(),
            targets,
            injective,
        })
    }

    pub fn identity(alphabet: &Alphabet) -> Self {
        RenamingMap {
            alphabet: alphabet.clone(),
            targets: alphabet.labels().to_vec(),
            injective: true,
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn is_injective(&self) -> bool {
        self.injective
    }

    pub fn apply(&self, a: &ActionLabel) -> ActionLabel {
        self.alphabet
            .index_of(a)
            .map_or_else(|| a.clone(), |i| self.targets[i].clone())
    }

    pub fn image(&self) -> Alphabet {
        Alphabet::new(self.targets.iter().cloned())
    }

    pub fn pairs(&self) -> impl Iterator<Item = (&ActionLabel, &ActionLabel)> {
        self.alphabet.iter().zip(self.targets.iter())
    }

    /// The inverse on the image; labels outside the image map to themselves.
    pub fn inverse_of(&self) -> Result<RenamingMap> {
        if !self.injective {
            let mut first_of: BTreeMap<&ActionLabel, &ActionLabel> = BTreeMap::new();
            for (a, t) in self.pairs() {
                if let Some(&first) = first_of.get(t) {
                    return Err(Error::NotInjective {
                        first: first.clone(),
                        second: a.clone(),
                        target: t.clone(),
                    });
                }
                first_of.insert(t, a);
            }
        }
        let image = self.image();
        let pairs: Vec<_> = self.pairs().map(|(a, t)| (t.clone(), a.clone())).collect();
        RenamingMap::new(&image, &pairs)
    }
}

/// Pointwise relabelling; the result is declared over the image of the
/// argument's alphabet.
pub fn rename(r: &RenamingMap, p: &Lts) -> Result<Lts> {
    if !p.alphabet().is_subset(r.alphabet()) {
        return Err(Error::AlphabetMismatch(format!(
            "renaming over {} applied to a process over {}",
            r.alphabet(),
            p.alphabet()
        )));
    }
    let output = Alphabet::new(p.alphabet().iter().map(|a| r.apply(a)));
    let remap: Vec<usize> = p
        .alphabet()
        .iter()
        .map(|a| output.index_of(&r.apply(a)).expect("image"))
        .collect();
    let succ = (0..p.num_states())
        .map(|s| p.edges(s).iter().map(|&(l, t)| (l.map(|i| remap[i]), t)).collect())
        .collect();
    Ok(Lts::from_parts(output, p.initial(), succ))
}

/// All interleavings of `nu` and `xi` of length at most `bound` in which
/// labels of `sync` are shared by both sides and all others come from exactly
/// one side.
pub fn word_merge(nu: &Word, sync: &BTreeSet<ActionLabel>, xi: &Word, bound: usize) -> BTreeSet<Word> {
    let (u, v) = (nu.labels(), xi.labels());
    let mut out = BTreeSet::new();
    let mut memo: HashMap<(usize, usize), Vec<Vec<ActionLabel>>> = HashMap::new();
    for w in merge_suffixes(u, v, 0, 0, sync, &mut memo) {
        if w.len() <= bound {
            out.insert(Word::new(w));
        }
    }
    out
}

fn merge_suffixes(
    u: &[ActionLabel],
    v: &[ActionLabel],
    i: usize,
    j: usize,
    sync: &BTreeSet<ActionLabel>,
    memo: &mut HashMap<(usize, usize), Vec<Vec<ActionLabel>>>,
) -> Vec<Vec<ActionLabel>> {
    if let Some(r) = memo.get(&(i, j)) {
        return r.clone();
    }
    let mut result = Vec::new();
    if i == u.len() && j == v.len() {
        result.push(Vec::new());
    }
    let mut extend = |head: &ActionLabel, rest: Vec<Vec<ActionLabel>>| {
        for mut w in rest {
            w.insert(0, head.clone());
            result.push(w);
        }
    };
    if i < u.len() && !sync.contains(&u[i]) {
        let rest = merge_suffixes(u, v, i + 1, j, sync, memo);
        extend(&u[i], rest);
    }
    if j < v.len() && !sync.contains(&v[j]) {
        let rest = merge_suffixes(u, v, i, j + 1, sync, memo);
        extend(&v[j], rest);
    }
    if i < u.len() && j < v.len() && u[i] == v[j] && sync.contains(&u[i]) {
        let rest = merge_suffixes(u, v, i + 1, j + 1, sync, memo);
        extend(&u[i], rest);
    }
    memo.insert((i, j), result.clone());
    result
}

/// Concealment of a word.
pub fn hide_word(w: &Word, hidden: &BTreeSet<ActionLabel>) -> Word {
    Word::new(w.iter().filter(|a| !hidden.contains(a)).cloned().collect())
}

/// The state operator on a word: the emitted word and the final internal state.
pub fn state_op_word(m: &InterfaceSpec, start: usize, w: &Word) -> (Word, usize) {
    let mut s = start;
    let mut out = Word::empty();
    for a in w.iter() {
        out.push(m.action(s, a));
        s = m.effect(s, a);
    }
    (out, s)
}
