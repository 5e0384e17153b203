//! Failures, divergences and infinite traces of an LTS as one determinized,
//! annotated automaton, with optional flooding after divergence.
//!
//! Macro-states are silent-closed sets of LTS states reached by the same
//! visible word. A word with an empty reachable set has no macro-state: the
//! corresponding edge is simply absent.

use std::collections::BTreeSet;
use std::fmt::{self, Write as _};

use fixedbitset::FixedBitSet;

use crate::automata::{OmegaAcceptance, OmegaDfa, WordDfa};
use crate::error::Result;
use crate::label::{ActionLabel, Alphabet, Word};
use crate::lts::{Lts, StateId};
use crate::search::explore;

/// How behaviour after a divergence is treated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FloodMode {
    /// Raw semantics.
    None,
    /// Everything after a divergence is present: divergent macro-states
    /// become a universal sink.
    Bot,
    /// A divergence trace carries every refusal; nothing beyond it changes.
    D,
}

impl fmt::Display for FloodMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FloodMode::None => "none",
            FloodMode::Bot => "bot",
            FloodMode::D => "d",
        })
    }
}

/// A pair of a trace and a refusal set.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Failure {
    pub trace: Word,
    pub refusal: BTreeSet<ActionLabel>,
}

impl Failure {
    pub fn new(trace: Word, refusal: impl IntoIterator<Item = ActionLabel>) -> Self {
        Failure {
            trace,
            refusal: refusal.into_iter().collect(),
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}, {{", self.trace)?;
        for (i, l) in self.refusal.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{l}")?;
        }
        f.write_str("}>")
    }
}

/// One node of a [`DenotationAutomaton`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MacroState {
    members: Vec<StateId>,
    /// The universal flooding sink of [`FloodMode::Bot`]; has no members.
    pub sink: bool,
    pub divergent: bool,
    pub deadlock: bool,
    /// Every subset of the alphabet is refused here.
    pub full_refusal: bool,
    /// Maximal refusals: complements of the visible initials of the stable
    /// members, with non-maximal ones dropped.
    pub refusals: Vec<FixedBitSet>,
    /// Some infinite path of the automaton starts here.
    pub live: bool,
}

impl MacroState {
    pub fn members(&self) -> &[StateId] {
        &self.members
    }

    /// Subset-closed membership test for a refusal set.
    pub fn refuses(&self, set: &FixedBitSet) -> bool {
        self.full_refusal || self.refusals.iter().any(|g| set.is_subset(g))
    }
}

/// Determinized automaton carrying every trace-style set of a process.
#[derive(Clone, Debug)]
pub struct DenotationAutomaton {
    alphabet: Alphabet,
    mode: FloodMode,
    states: Vec<MacroState>,
    edges: Vec<Vec<Option<usize>>>,
}

#[derive(Clone, PartialEq, Eq, Hash)]
enum Node {
    Set(Vec<StateId>),
    Sink,
}

/// Subset construction over weak visible steps, annotated per `mode`.
pub fn denote(p: &Lts, mode: FloodMode) -> DenotationAutomaton {
    let k = p.alphabet().len();
    let divergent = |set: &[StateId]| set.iter().any(|&s| p.diverges(s));
    let wrap = |set: Vec<StateId>| {
        if mode == FloodMode::Bot && divergent(&set) {
            Node::Sink
        } else {
            Node::Set(set)
        }
    };
    let init = wrap(p.silent_closure(p.initial()).to_vec());
    let g = explore(init, |node| match node {
        Node::Sink => (0..k).map(|l| (l, Node::Sink)).collect::<Vec<_>>(),
        Node::Set(set) => (0..k)
            .filter_map(|l| {
                let next = p.weak_step(set, l);
                (!next.is_empty()).then(|| (l, wrap(next)))
            })
            .collect(),
    });

    let mut edges = vec![vec![None; k]; g.len()];
    for (i, out) in g.succ.iter().enumerate() {
        for &(l, j) in out {
            edges[i][l] = Some(j);
        }
    }
    let live = live_states(&edges);
    let states = g
        .nodes
        .into_iter()
        .zip(live)
        .map(|(node, live)| match node {
            Node::Sink => MacroState {
                members: Vec::new(),
                sink: true,
                divergent: true,
                deadlock: true,
                full_refusal: true,
                refusals: vec![p.alphabet().full_set()],
                live,
            },
            Node::Set(members) => {
                let div = divergent(&members);
                let deadlock = members.iter().any(|&s| p.edges(s).is_empty());
                let refusals = maximal_refusals(p, &members);
                MacroState {
                    members,
                    sink: false,
                    divergent: div,
                    deadlock,
                    full_refusal: mode == FloodMode::D && div,
                    refusals,
                    live,
                }
            }
        })
        .collect();
    DenotationAutomaton {
        alphabet: p.alphabet().clone(),
        mode,
        states,
        edges,
    }
}

fn maximal_refusals(p: &Lts, members: &[StateId]) -> Vec<FixedBitSet> {
    let mut gens: Vec<FixedBitSet> = members
        .iter()
        .filter(|&&s| p.is_stable(s))
        .map(|&s| {
            let mut refused = p.alphabet().full_set();
            for l in p.visible_initials(s) {
                refused.set(l, false);
            }
            refused
        })
        .collect();
    gens.sort_by_key(|b| std::cmp::Reverse(b.count_ones(..)));
    let mut maximal: Vec<FixedBitSet> = Vec::new();
    for g in gens {
        if !maximal.iter().any(|m| g.is_subset(m)) {
            maximal.push(g);
        }
    }
    maximal.sort_by(|a, b| a.ones().cmp(b.ones()));
    maximal
}

/// Greatest set of states each having a successor inside the set.
fn live_states(edges: &[Vec<Option<usize>>]) -> Vec<bool> {
    let mut live = vec![true; edges.len()];
    loop {
        let mut changed = false;
        for i in 0..edges.len() {
            if live[i] && !edges[i].iter().flatten().any(|&j| live[j]) {
                live[i] = false;
                changed = true;
            }
        }
        if !changed {
            return live;
        }
    }
}

impl DenotationAutomaton {
    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn mode(&self) -> FloodMode {
        self.mode
    }

    pub fn states(&self) -> &[MacroState] {
        &self.states
    }

    pub fn initial(&self) -> usize {
        0
    }

    pub fn state(&self, i: usize) -> &MacroState {
        &self.states[i]
    }

    pub fn step(&self, i: usize, label: usize) -> Option<usize> {
        self.edges[i][label]
    }

    /// Macro-state reached by `word`, if the word is a trace.
    pub fn walk(&self, word: &Word) -> Result<Option<usize>> {
        let ids = self.alphabet.encode(word)?;
        Ok(self.walk_ids(&ids))
    }

    pub(crate) fn walk_ids(&self, ids: &[usize]) -> Option<usize> {
        ids.iter().try_fold(0, |s, &l| self.edges[s][l])
    }

    pub fn is_trace(&self, word: &Word) -> Result<bool> {
        Ok(self.walk(word)?.is_some())
    }

    pub fn is_divergence(&self, word: &Word) -> Result<bool> {
        Ok(self.walk(word)?.is_some_and(|s| self.states[s].divergent))
    }

    pub fn is_deadlock(&self, word: &Word) -> Result<bool> {
        Ok(self.walk(word)?.is_some_and(|s| self.states[s].deadlock))
    }

    /// Membership of a failure pair in the mode's failure set.
    pub fn query_failure(&self, f: &Failure) -> Result<bool> {
        let refusal = self.alphabet.encode_set(&f.refusal)?;
        Ok(self.walk(&f.trace)?.is_some_and(|s| self.states[s].refuses(&refusal)))
    }

    /// Acceptor for the mode's divergence set.
    pub fn divergence_language(&self) -> WordDfa {
        self.word_acceptor(|m| m.divergent)
    }

    /// Acceptor for the partial traces (all traces after flooding in mode bot).
    pub fn trace_language(&self) -> WordDfa {
        self.word_acceptor(|_| true)
    }

    pub fn deadlock_language(&self) -> WordDfa {
        self.word_acceptor(|m| m.deadlock)
    }

    fn word_acceptor(&self, accept: impl Fn(&MacroState) -> bool) -> WordDfa {
        let reject = self.states.len();
        let k = self.alphabet.len();
        let mut trans: Vec<Vec<usize>> = self
            .edges
            .iter()
            .map(|row| row.iter().map(|e| e.unwrap_or(reject)).collect())
            .collect();
        trans.push(vec![reject; k]);
        let mut accepting: Vec<bool> = self.states.iter().map(accept).collect();
        accepting.push(false);
        WordDfa::new(self.alphabet.clone(), 0, trans, accepting).expect("well-formed by construction")
    }

    /// Acceptor for the mode's infinite traces.
    ///
    /// Every infinite path of the automaton is an infinite trace: a finite-state
    /// LTS is finitely branching, so a word all of whose prefixes are traces is
    /// realised by an infinite run. In mode bot the sink supplies all
    /// extensions of divergences. In mode d the additional words (those with
    /// infinitely many divergence prefixes) are infinite paths already; see
    /// [`DenotationAutomaton::cofinal_divergence_acceptor`].
    pub fn infinite_language(&self) -> OmegaDfa {
        OmegaDfa::new(self.alphabet.clone(), 0, self.edges.clone(), OmegaAcceptance::AllRuns)
            .expect("well-formed by construction")
    }

    /// Words with infinitely many divergence prefixes, as a Büchi acceptor on
    /// divergent macro-states.
    pub fn cofinal_divergence_acceptor(&self) -> OmegaDfa {
        let flags = self.states.iter().map(|m| m.divergent).collect();
        OmegaDfa::new(self.alphabet.clone(), 0, self.edges.clone(), OmegaAcceptance::Buchi(flags))
            .expect("well-formed by construction")
    }

    /// Structured text report: one block per macro-state.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "mode: {}", self.mode);
        let _ = writeln!(out, "alphabet: {}", self.alphabet);
        let _ = writeln!(out, "states: {}", self.states.len());
        for (i, m) in self.states.iter().enumerate() {
            let _ = write!(out, "state {i}:");
            if m.sink {
                let _ = write!(out, " sink");
            } else {
                let _ = write!(out, " members={:?}", m.members);
            }
            let flags = [
                ("divergent", m.divergent),
                ("deadlock", m.deadlock),
                ("full-refusal", m.full_refusal),
                ("live", m.live),
            ];
            for (name, on) in flags {
                if on {
                    let _ = write!(out, " {name}");
                }
            }
            let _ = writeln!(out);
            for r in &m.refusals {
                let _ = writeln!(out, "  refuses {{{}}}", join(self.alphabet.decode_set(r)));
            }
            for (l, e) in self.edges[i].iter().enumerate() {
                if let Some(j) = e {
                    let _ = writeln!(out, "  {} -> {j}", self.alphabet.label(l));
                }
            }
        }
        out
    }
}

fn join(labels: BTreeSet<ActionLabel>) -> String {
    labels.iter().map(ActionLabel::as_str).collect::<Vec<_>>().join(",")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::Lasso;
    use crate::fixtures;
    use crate::label::{label, word};

    #[test]
    fn single_deadlocked_state() {
        let p = Lts::builder(1).alphabet(&["a", "b"]).build().unwrap();
        for mode in [FloodMode::None, FloodMode::Bot, FloodMode::D] {
            let d = denote(&p, mode);
            assert_eq!(d.states().len(), 1);
            let m = d.state(0);
            assert!(m.deadlock);
            assert!(m.refuses(&p.alphabet().full_set()));
            assert!(d
                .query_failure(&Failure::new(Word::empty(), [label("a"), label("b")]))
                .unwrap());
        }
    }

    #[test]
    fn cond_pair_left_is_flooded_from_the_start_in_mode_bot() {
        let d = denote(&fixtures::cond_pair_left(), FloodMode::Bot);
        assert!(d.state(0).sink);
        assert!(d.is_divergence(&word("g g c")).unwrap());
        assert!(d
            .query_failure(&Failure::new(word("c c"), [label("c"), label("g")]))
            .unwrap());
    }

    #[test]
    fn divergence_languages_of_the_fixtures() {
        let l1 = denote(&fixtures::cond_pair_left(), FloodMode::None).divergence_language();
        assert!(l1.accepts(&Word::empty()));
        assert!(!l1.accepts(&word("c")));
        assert!(!l1.accepts(&word("c g")));
        let l1_bot = denote(&fixtures::cond_pair_left(), FloodMode::Bot).divergence_language();
        for w in ["", "c", "g c", "c g g"] {
            assert!(l1_bot.accepts(&word(w)));
        }
        let pl = denote(&fixtures::refusal_pair_left(), FloodMode::None).divergence_language();
        assert!(pl.accepts(&word("a a")));
        assert!(!pl.accepts(&word("a")));
        assert!(!pl.accepts(&Word::empty()));
    }

    #[test]
    fn refusal_pair_refusal_after_a() {
        let f = Failure::new(word("a"), [label("a")]);
        assert!(denote(&fixtures::refusal_pair_right(), FloodMode::Bot).query_failure(&f).unwrap());
        assert!(!denote(&fixtures::refusal_pair_left(), FloodMode::Bot).query_failure(&f).unwrap());
    }

    #[test]
    fn empty_refusal_needs_a_stable_member() {
        let stable = Lts::builder(2).visible(0, "a", 1).build().unwrap();
        let f = Failure::new(Word::empty(), []);
        assert!(denote(&stable, FloodMode::None).query_failure(&f).unwrap());
        let spinning = Lts::builder(1).silent(0, 0).alphabet(&["a"]).build().unwrap();
        assert!(!denote(&spinning, FloodMode::None).query_failure(&f).unwrap());
        assert!(denote(&spinning, FloodMode::D).query_failure(&f).unwrap());
    }

    #[test]
    fn mode_d_floods_refusals_only_at_the_divergence() {
        let d = denote(&fixtures::cond_pair_left(), FloodMode::D);
        let all = [label("c"), label("g")];
        assert!(d.query_failure(&Failure::new(Word::empty(), all.clone())).unwrap());
        assert!(!d.query_failure(&Failure::new(word("c"), all.clone())).unwrap());
        assert!(d.query_failure(&Failure::new(word("c"), [label("c")])).unwrap());
        assert!(!d.is_trace(&word("g")).unwrap());
    }

    #[test]
    fn infinite_languages() {
        let looping = Lts::builder(1).visible(0, "a", 0).build().unwrap();
        let aw = Lasso {
            prefix: Word::empty(),
            cycle: word("a"),
        };
        for mode in [FloodMode::None, FloodMode::Bot, FloodMode::D] {
            assert!(denote(&looping, mode).infinite_language().accepts_lasso(&aw));
        }
        let l1 = fixtures::cond_pair_left();
        let gw = Lasso {
            prefix: word("c"),
            cycle: word("g c"),
        };
        assert!(denote(&l1, FloodMode::Bot).infinite_language().accepts_lasso(&gw));
        let d = denote(&l1, FloodMode::D);
        assert!(!d.infinite_language().accepts_lasso(&gw));
        assert!(d
            .cofinal_divergence_acceptor()
            .counterexample_to_inclusion(&d.infinite_language())
            .unwrap()
            .is_none());
    }

    #[test]
    fn refusal_generators_are_maximal() {
        // 0 -τ-> 1, 0 -τ-> 2; 1 offers a, 2 offers a and b.
        let p = Lts::builder(4)
            .silent(0, 1)
            .silent(0, 2)
            .visible(1, "a", 3)
            .visible(2, "a", 3)
            .visible(2, "b", 3)
            .build()
            .unwrap();
        let d = denote(&p, FloodMode::None);
        let m = d.state(0);
        assert_eq!(m.refusals.len(), 1);
        assert_eq!(p.alphabet().decode_set(&m.refusals[0]), BTreeSet::from([label("b")]));
        assert!(d.dump().contains("refuses {b}"));
    }
}
