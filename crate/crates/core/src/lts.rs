//! Finite labelled transition systems with a distinguished silent action.

use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};

use crate::denotation::{denote, FloodMode};
use crate::error::{Error, Result};
use crate::label::{Action, ActionLabel, Alphabet, Word};

pub type StateId = usize;

/// A single transition `source --action--> target`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Transition {
    pub source: StateId,
    pub action: Action,
    pub target: StateId,
}

/// Outgoing edge in the internal adjacency: `None` is the silent action,
/// `Some(i)` the visible label with index `i` in the alphabet.
pub(crate) type Edge = (Option<usize>, StateId);

/// A finite LTS over a declared alphabet.
///
/// Silent closures and divergence flags are computed once at construction;
/// the value is immutable afterwards.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lts {
    alphabet: Alphabet,
    initial: StateId,
    succ: Vec<Vec<Edge>>,
    closure: Vec<Vec<StateId>>,
    divergent: Vec<bool>,
}

/// Static classification of a single state.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StateClass {
    /// No outgoing transition at all, silent or visible.
    pub deadlocked: bool,
    /// No visible action is weakly reachable.
    pub locked: bool,
    pub divergent: bool,
}

/// Exhaustive trace-style sets restricted to words of length at most `depth`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BoundedSemantics {
    pub depth: usize,
    pub ptr: BTreeSet<Word>,
    pub deadlocks: BTreeSet<Word>,
    pub divergences: BTreeSet<Word>,
    /// Finite complete traces: deadlocks ∪ divergences.
    pub complete: BTreeSet<Word>,
    /// States weakly reached by each partial trace.
    pub reached: BTreeMap<Word, BTreeSet<StateId>>,
}

impl Lts {
    pub fn new<I>(num_states: usize, initial: StateId, alphabet: Alphabet, transitions: I) -> Result<Self>
    where
        I: IntoIterator<Item = Transition>,
    {
        if initial >= num_states {
            return Err(Error::StateOutOfRange {
                index: initial,
                num_states,
            });
        }
        let mut succ: Vec<Vec<Edge>> = vec![Vec::new(); num_states];
        for t in transitions {
            for s in [t.source, t.target] {
                if s >= num_states {
                    return Err(Error::StateOutOfRange { index: s, num_states });
                }
            }
            let lbl = match &t.action {
                Action::Silent => None,
                Action::Visible(l) => Some(alphabet.index_of(l).ok_or_else(|| Error::UnknownLabel(l.clone()))?),
            };
            succ[t.source].push((lbl, t.target));
        }
        Ok(Self::from_parts(alphabet, initial, succ))
    }

    pub(crate) fn from_parts(alphabet: Alphabet, initial: StateId, mut succ: Vec<Vec<Edge>>) -> Self {
        for edges in &mut succ {
            edges.sort_unstable();
            edges.dedup();
        }
        let closure = silent_closures(&succ);
        let divergent = divergence_flags(&succ, &closure);
        Lts {
            alphabet,
            initial,
            succ,
            closure,
            divergent,
        }
    }

    pub fn builder(num_states: usize) -> LtsBuilder {
        LtsBuilder {
            num_states,
            initial: 0,
            labels: Vec::new(),
            transitions: Vec::new(),
            error: None,
        }
    }

    pub fn num_states(&self) -> usize {
        self.succ.len()
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn num_transitions(&self) -> usize {
        self.succ.iter().map(Vec::len).sum()
    }

    /// All transitions in canonical (source, label, target) order.
    pub fn transitions(&self) -> impl Iterator<Item = Transition> + '_ {
        self.succ.iter().enumerate().flat_map(move |(s, edges)| {
            edges.iter().map(move |&(l, t)| Transition {
                source: s,
                action: self.action_of(l),
                target: t,
            })
        })
    }

    fn action_of(&self, l: Option<usize>) -> Action {
        match l {
            None => Action::Silent,
            Some(i) => Action::Visible(self.alphabet.label(i).clone()),
        }
    }

    pub(crate) fn edges(&self, s: StateId) -> &[Edge] {
        &self.succ[s]
    }

    /// Reflexive-transitive silent closure of `s`, sorted.
    pub fn silent_closure(&self, s: StateId) -> &[StateId] {
        &self.closure[s]
    }

    pub fn is_stable(&self, s: StateId) -> bool {
        !self.succ[s].iter().any(|(l, _)| l.is_none())
    }

    /// Labels offered directly (one visible step) by `s`.
    pub(crate) fn visible_initials(&self, s: StateId) -> impl Iterator<Item = usize> + '_ {
        self.succ[s].iter().filter_map(|&(l, _)| l)
    }

    fn check_state(&self, s: StateId) -> Result<()> {
        if s < self.num_states() {
            Ok(())
        } else {
            Err(Error::StateOutOfRange {
                index: s,
                num_states: self.num_states(),
            })
        }
    }

    /// Silent closure of a set of states, sorted and deduplicated.
    pub(crate) fn close(&self, states: impl IntoIterator<Item = StateId>) -> Vec<StateId> {
        let mut out: Vec<StateId> = states
            .into_iter()
            .flat_map(|s| self.closure[s].iter().copied())
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Weak step over one visible label from a silent-closed set.
    pub(crate) fn weak_step(&self, from: &[StateId], label: usize) -> Vec<StateId> {
        let targets = from.iter().flat_map(|&s| {
            self.succ[s]
                .iter()
                .filter(move |(l, _)| *l == Some(label))
                .map(|&(_, t)| t)
        });
        self.close(targets)
    }

    /// `{ q | from ⇒word q }`.
    pub fn weak_reach(&self, from: StateId, word: &Word) -> Result<BTreeSet<StateId>> {
        self.check_state(from)?;
        let ids = self.alphabet.encode(word)?;
        let mut current = self.closure[from].clone();
        for l in ids {
            if current.is_empty() {
                break;
            }
            current = self.weak_step(&current, l);
        }
        Ok(current.into_iter().collect())
    }

    /// True iff `s` can perform an infinite sequence of silent steps.
    pub fn diverges(&self, s: StateId) -> bool {
        self.divergent[s]
    }

    pub fn classify_state(&self, s: StateId) -> Result<StateClass> {
        self.check_state(s)?;
        let deadlocked = self.succ[s].is_empty();
        let locked = !self.closure[s]
            .iter()
            .any(|&u| self.succ[u].iter().any(|(l, _)| l.is_some()));
        Ok(StateClass {
            deadlocked,
            locked,
            divergent: self.divergent[s],
        })
    }

    /// Decided on the determinized automaton: every reachable macro-state
    /// must be a single state without outgoing silent transitions.
    pub fn is_deterministic(&self) -> bool {
        let d = denote(self, FloodMode::None);
        d.states().iter().all(|m| match m.members() {
            [only] => self.is_stable(*only),
            _ => false,
        })
    }

    /// Same LTS over a larger alphabet. Transitions are untouched.
    pub fn with_alphabet(&self, alphabet: &Alphabet) -> Result<Lts> {
        if !self.alphabet.is_subset(alphabet) {
            let missing = self
                .alphabet
                .iter()
                .find(|l| !alphabet.contains(l))
                .cloned()
                .expect("non-subset has a missing label");
            return Err(Error::UnknownLabel(missing));
        }
        if &self.alphabet == alphabet {
            return Ok(self.clone());
        }
        let remap: Vec<usize> = self
            .alphabet
            .iter()
            .map(|l| alphabet.index_of(l).expect("checked subset"))
            .collect();
        let succ = self
            .succ
            .iter()
            .map(|edges| edges.iter().map(|&(l, t)| (l.map(|i| remap[i]), t)).collect())
            .collect();
        Ok(Lts::from_parts(alphabet.clone(), self.initial, succ))
    }

    /// Restriction to states reachable from the initial state, renumbered in
    /// breadth-first order following the canonical edge order.
    pub fn restrict_reachable(&self) -> Lts {
        let mut index = vec![usize::MAX; self.num_states()];
        let mut order = Vec::new();
        let mut queue = VecDeque::from([self.initial]);
        index[self.initial] = 0;
        order.push(self.initial);
        while let Some(s) = queue.pop_front() {
            for &(_, t) in &self.succ[s] {
                if index[t] == usize::MAX {
                    index[t] = order.len();
                    order.push(t);
                    queue.push_back(t);
                }
            }
        }
        let succ = order
            .iter()
            .map(|&s| self.succ[s].iter().map(|&(l, t)| (l, index[t])).collect())
            .collect();
        Lts::from_parts(self.alphabet.clone(), 0, succ)
    }

    /// Direct search over (state, word) configurations up to `depth` visible
    /// steps. No determinization; divergence is detected by the pigeonhole
    /// criterion (a silent path longer than the number of states).
    pub fn enumerate_bounded(&self, depth: usize) -> BoundedSemantics {
        let n = self.num_states();
        let pigeonhole = PigeonholeDivergence::new(self);
        let mut seen: HashSet<(StateId, Vec<usize>)> = HashSet::new();
        let mut stack = vec![(self.initial, Vec::<usize>::new())];
        let mut out = BoundedSemantics {
            depth,
            ..Default::default()
        };
        while let Some((s, w)) = stack.pop() {
            if !seen.insert((s, w.clone())) {
                continue;
            }
            let word = self.alphabet.decode(&w);
            out.ptr.insert(word.clone());
            out.reached.entry(word.clone()).or_default().insert(s);
            if self.succ[s].is_empty() {
                out.deadlocks.insert(word.clone());
            }
            if pigeonhole.diverges(s, n) {
                out.divergences.insert(word);
            }
            for &(l, t) in &self.succ[s] {
                match l {
                    None => stack.push((t, w.clone())),
                    Some(i) if w.len() < depth => {
                        let mut w2 = w.clone();
                        w2.push(i);
                        stack.push((t, w2));
                    }
                    Some(_) => {}
                }
            }
        }
        out.complete = out.deadlocks.union(&out.divergences).cloned().collect();
        out
    }
}

/// Memoised "silent path of length k exists" table.
struct PigeonholeDivergence {
    silent: Vec<Vec<StateId>>,
    memo: std::cell::RefCell<BTreeMap<(StateId, usize), bool>>,
}

impl PigeonholeDivergence {
    fn new(lts: &Lts) -> Self {
        let silent = lts
            .succ
            .iter()
            .map(|edges| edges.iter().filter(|(l, _)| l.is_none()).map(|&(_, t)| t).collect())
            .collect();
        PigeonholeDivergence {
            silent,
            memo: Default::default(),
        }
    }

    /// A silent path with more steps than there are states must revisit a state.
    fn diverges(&self, s: StateId, num_states: usize) -> bool {
        self.path_of_length(s, num_states + 1)
    }

    fn path_of_length(&self, s: StateId, k: usize) -> bool {
        if k == 0 {
            return true;
        }
        if let Some(&v) = self.memo.borrow().get(&(s, k)) {
            return v;
        }
        let v = self.silent[s].iter().any(|&t| self.path_of_length(t, k - 1));
        self.memo.borrow_mut().insert((s, k), v);
        v
    }
}

fn silent_closures(succ: &[Vec<Edge>]) -> Vec<Vec<StateId>> {
    let n = succ.len();
    (0..n)
        .map(|s| {
            let mut seen = vec![false; n];
            let mut stack = vec![s];
            seen[s] = true;
            while let Some(u) = stack.pop() {
                for &(l, t) in &succ[u] {
                    if l.is_none() && !seen[t] {
                        seen[t] = true;
                        stack.push(t);
                    }
                }
            }
            (0..n).filter(|&u| seen[u]).collect()
        })
        .collect()
}

/// A state diverges iff its silent closure contains a state on a silent cycle.
fn divergence_flags(succ: &[Vec<Edge>], closure: &[Vec<StateId>]) -> Vec<bool> {
    let on_cycle: Vec<bool> = (0..succ.len())
        .map(|s| {
            succ[s]
                .iter()
                .any(|&(l, t)| l.is_none() && closure[t].binary_search(&s).is_ok())
        })
        .collect();
    closure
        .iter()
        .map(|c| c.iter().any(|&u| on_cycle[u]))
        .collect()
}

/// Convenience builder; labels are given by name.
pub struct LtsBuilder {
    num_states: usize,
    initial: StateId,
    labels: Vec<ActionLabel>,
    transitions: Vec<Transition>,
    error: Option<Error>,
}

impl LtsBuilder {
    pub fn initial(mut self, s: StateId) -> Self {
        self.initial = s;
        self
    }

    pub fn silent(mut self, source: StateId, target: StateId) -> Self {
        self.transitions.push(Transition {
            source,
            action: Action::Silent,
            target,
        });
        self
    }

    pub fn visible(mut self, source: StateId, name: &str, target: StateId) -> Self {
        match ActionLabel::new(name) {
            Ok(l) => {
                self.labels.push(l.clone());
                self.transitions.push(Transition {
                    source,
                    action: Action::Visible(l),
                    target,
                });
            }
            Err(e) => self.error = self.error.or(Some(e)),
        }
        self
    }

    /// Declares extra labels that need not occur on any transition.
    pub fn alphabet(mut self, names: &[&str]) -> Self {
        for n in names {
            match ActionLabel::new(n) {
                Ok(l) => self.labels.push(l),
                Err(e) => self.error = self.error.or(Some(e)),
            }
        }
        self
    }

    pub fn build(self) -> Result<Lts> {
        if let Some(e) = self.error {
            return Err(e);
        }
        Lts::new(self.num_states, self.initial, Alphabet::new(self.labels), self.transitions)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::label::word;

    #[test]
    fn empty_word_reaches_only_the_start_of_an_isolated_state() {
        let p = Lts::builder(1).build().unwrap();
        assert_eq!(p.weak_reach(0, &Word::empty()).unwrap(), BTreeSet::from([0]));
    }

    #[test]
    fn weak_reach_on_cond_pair_left() {
        let l1 = fixtures::cond_pair_left();
        assert_eq!(l1.weak_reach(0, &word("c")).unwrap(), BTreeSet::from([1]));
        assert_eq!(l1.weak_reach(0, &word("c g")).unwrap(), BTreeSet::from([2]));
        assert!(l1.weak_reach(0, &word("g")).unwrap().is_empty());
    }

    #[test]
    fn weak_reach_names_unknown_label() {
        let l1 = fixtures::cond_pair_left();
        let err = l1.weak_reach(0, &word("zz")).unwrap_err();
        assert!(err.to_string().contains("zz"));
    }

    #[test]
    fn silent_self_loop_diverges() {
        let p = Lts::builder(1).silent(0, 0).build().unwrap();
        assert!(p.diverges(0));
        let class = p.classify_state(0).unwrap();
        assert_eq!(
            class,
            StateClass {
                deadlocked: false,
                locked: true,
                divergent: true
            }
        );
    }

    #[test]
    fn cond_pair_divergence_and_deadlock() {
        let l1 = fixtures::cond_pair_left();
        assert!(l1.diverges(0));
        assert!(!l1.diverges(1));
        assert!(l1.classify_state(2).unwrap().deadlocked);
    }

    #[test]
    fn isolated_state_is_deadlocked_and_locked() {
        let p = Lts::builder(1).build().unwrap();
        assert_eq!(
            p.classify_state(0).unwrap(),
            StateClass {
                deadlocked: true,
                locked: true,
                divergent: false
            }
        );
    }

    #[test]
    fn reaching_a_silent_cycle_counts_as_divergence() {
        let p = Lts::builder(3).silent(0, 1).silent(1, 2).silent(2, 1).build().unwrap();
        assert!(p.diverges(0));
        let q = Lts::builder(3).silent(0, 1).silent(1, 2).build().unwrap();
        assert!(!q.diverges(0));
    }

    #[test]
    fn determinism() {
        let chain = Lts::builder(3).visible(0, "a", 1).visible(1, "b", 2).build().unwrap();
        assert!(chain.is_deterministic());
        let branch = Lts::builder(3).visible(0, "a", 1).visible(0, "a", 2).build().unwrap();
        assert!(!branch.is_deterministic());
        assert!(!fixtures::refusal_pair_right().is_deterministic());
        let looping = Lts::builder(1).silent(0, 0).build().unwrap();
        assert!(!looping.is_deterministic());
    }

    #[test]
    fn bounded_enumeration_of_a_deadlock() {
        let p = Lts::builder(1).build().unwrap();
        let b = p.enumerate_bounded(3);
        assert_eq!(b.ptr, BTreeSet::from([Word::empty()]));
        assert_eq!(b.deadlocks, BTreeSet::from([Word::empty()]));
        assert!(b.divergences.is_empty());
    }

    #[test]
    fn bounded_enumeration_of_cond_pair_left() {
        let b = fixtures::cond_pair_left().enumerate_bounded(2);
        assert_eq!(b.ptr, BTreeSet::from([Word::empty(), word("c"), word("c g")]));
        assert_eq!(b.deadlocks, BTreeSet::from([word("c g")]));
        assert_eq!(b.divergences, BTreeSet::from([Word::empty()]));
        assert_eq!(b.complete, BTreeSet::from([Word::empty(), word("c g")]));
    }

    #[test]
    fn constructor_rejects_bad_indices_and_labels() {
        let a = Alphabet::from_names(&["a"]).unwrap();
        assert!(Lts::new(1, 1, a.clone(), []).is_err());
        let t = Transition {
            source: 0,
            action: Action::Visible(crate::label::label("b")),
            target: 0,
        };
        assert_eq!(
            Lts::new(1, 0, a, [t]).unwrap_err(),
            Error::UnknownLabel(crate::label::label("b"))
        );
    }

    #[test]
    fn duplicate_transitions_collapse() {
        let p = Lts::builder(2).visible(0, "a", 1).visible(0, "a", 1).build().unwrap();
        assert_eq!(p.num_transitions(), 1);
    }

    #[test]
    fn widening_the_alphabet_keeps_transitions() {
        let p = fixtures::cond_pair_left();
        let wide = p.with_alphabet(&Alphabet::from_names(&["a", "c", "g", "z"]).unwrap()).unwrap();
        assert_eq!(wide.alphabet().len(), 4);
        let mut a: Vec<_> = p.transitions().collect();
        let mut b: Vec<_> = wide.transitions().collect();
        a.sort();
        b.sort();
        assert_eq!(a, b);
    }
}
